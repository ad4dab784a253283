use qg_core::acceptance::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let result = run_criterion(id, 0);
        println!("{result}");
        if !result.passed() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
