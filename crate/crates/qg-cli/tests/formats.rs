use std::fs;
use std::path::{Path, PathBuf};

use qg_cli::corpus::bundled;
use qg_cli::formats::{
    emit, kind_of, parse, read_hopf, read_table, BlockMapFile, DrinfeldFile, ElementFile, FormatError, FusionRingFile,
    FusionValuesFile, HopfFile, MatchingFile, TableFile, WordsFile,
};
use qg_core::linalg::{max_abs_vec, Tolerance};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Parses with the schema named by `kind` and emits again.
fn reemit(path: &Path, text: &str) -> Result<String, FormatError> {
    Ok(match kind_of(path, text)?.as_str() {
        "hopf" => emit(&parse::<HopfFile>(path, text)?),
        "irr_table" => emit(&parse::<TableFile>(path, text)?),
        "element" => emit(&parse::<ElementFile>(path, text)?),
        "block_map" => emit(&parse::<BlockMapFile>(path, text)?),
        "words" => emit(&parse::<WordsFile>(path, text)?),
        "fusion_ring" => emit(&parse::<FusionRingFile>(path, text)?),
        "fusion_values" => emit(&parse::<FusionValuesFile>(path, text)?),
        "matching" => emit(&parse::<MatchingFile>(path, text)?),
        "drinfeld_double" => emit(&parse::<DrinfeldFile>(path, text)?),
        other => panic!("unexpected kind {other}"),
    })
}

#[test]
fn checked_in_corpus_matches_the_generator() {
    for (name, text) in bundled() {
        let on_disk = fs::read_to_string(corpus_dir().join(&name)).unwrap_or_default();
        assert!(on_disk == text, "corpus/{name} is stale; run `cargo run -p qg-cli --example write_corpus`");
    }
}

#[test]
fn canonical_files_round_trip_byte_for_byte() {
    for (name, text) in bundled() {
        let path = PathBuf::from(&name);
        assert_eq!(reemit(&path, &text).unwrap(), text, "{name}");
    }
}

#[test]
fn missing_rho_is_named() {
    let text = fs::read_to_string(corpus_dir().join("irr_s3.table")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value.as_object_mut().unwrap().remove("rho");
    let err = parse::<TableFile>(Path::new("t.table"), &value.to_string()).unwrap_err();
    assert!(err.to_string().contains("missing field `rho`"), "{err}");
}

#[test]
fn complex_entries_must_be_pairs() {
    let text = fs::read_to_string(corpus_dir().join("c_z2.qg")).unwrap();
    let bare = text.replacen("\"counit\": [[1.0, 0.0], [0.0, 0.0]]", "\"counit\": [1.0, 0.0]", 1);
    assert_ne!(bare, text);
    let err = parse::<HopfFile>(Path::new("c.qg"), &bare).unwrap_err();
    assert!(matches!(err, FormatError::Schema { .. }), "{err}");
    assert!(err.to_string().contains("line"), "{err}");
    let triple = text.replacen("\"counit\": [[1.0, 0.0], [0.0, 0.0]]", "\"counit\": [[1.0, 0.0, 0.0], [0.0, 0.0]]", 1);
    assert!(parse::<HopfFile>(Path::new("c.qg"), &triple).is_err());
}

#[test]
fn unknown_fields_version_and_kind_are_errors() {
    let text = fs::read_to_string(corpus_dir().join("rep_z2.fusion")).unwrap();
    let extra = text.replacen("\"name\"", "\"colour\": \"red\",\n  \"name\"", 1);
    let err = parse::<FusionRingFile>(Path::new("r.fusion"), &extra).unwrap_err();
    assert!(err.to_string().contains("unknown field `colour`"), "{err}");

    let future = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
    assert!(matches!(parse::<FusionRingFile>(Path::new("r.fusion"), &future), Err(FormatError::Version { found: 2, .. })));

    assert!(matches!(parse::<HopfFile>(Path::new("r.fusion"), &text), Err(FormatError::Schema { .. })));
    let relabeled = text.replacen("\"kind\": \"fusion_ring\"", "\"kind\": \"hopf\"", 1);
    assert!(matches!(parse::<FusionRingFile>(Path::new("r.fusion"), &relabeled), Err(FormatError::Kind { .. })));
}

#[test]
fn unit_is_derived_when_omitted() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["c_s3.qg", "group_algebra_s3.qg", "kac_paljutkin.qg"] {
        let source = corpus_dir().join(name);
        let (_, data) = read_hopf(&source, Tolerance::default()).unwrap();
        let mut file: HopfFile = parse(&source, &fs::read_to_string(&source).unwrap()).unwrap();
        file.unit = None;
        let stripped = dir.path().join(name);
        fs::write(&stripped, emit(&file)).unwrap();
        let (_, derived) = read_hopf(&stripped, Tolerance::default()).unwrap();
        assert!(max_abs_vec(&(derived.unit - data.unit)) < 1e-12, "{name}");
    }
}

#[test]
fn table_contents_survive_the_file() {
    let table = read_table(&corpus_dir().join("suq2_window.table")).unwrap();
    let expected = qg_core::corep::IrrTable::su_q2_window(0.5, 3).unwrap();
    assert_eq!(table, expected);
}

#[test]
fn invalid_tables_report_the_field() {
    let text = fs::read_to_string(corpus_dir().join("group_dual_z3.table")).unwrap();
    let broken = text.replacen("\"conj\": [\"e\", \"g2\", \"g1\"]", "\"conj\": [\"e\", \"g2\", \"g7\"]", 1);
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z3.table");
    fs::write(&path, broken).unwrap();
    let err = read_table(&path).unwrap_err();
    assert!(err.to_string().contains("field `conj`: unknown label `g7`"), "{err}");
}
