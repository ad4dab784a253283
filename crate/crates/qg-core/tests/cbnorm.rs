use qg_core::cbnorm::{cb_norm_exact, cb_norm_lower, BlockMap, CbOptions, Method};
use qg_core::linalg::{c, CMat};

#[test]
fn identity_has_cb_norm_one() {
    let n = cb_norm_exact(&BlockMap::identity(vec![2]), &CbOptions::default()).unwrap();
    assert!((n.value - 1.0).abs() <= 1e-12, "{n:?}");
    assert_eq!(n.method, Method::CompletelyPositive);
    assert!((n.sdp_value - 1.0).abs() <= 1e-6);
}

#[test]
fn transpose_on_m2_has_cb_norm_two() {
    let phi = BlockMap::transpose(2);
    let n = cb_norm_exact(&phi, &CbOptions::default()).unwrap();
    assert!((n.value - 2.0).abs() <= 1e-6, "{n:?}");
    assert!(n.certificate.gap <= 1e-6);
    assert!((cb_norm_lower(&phi, 1, 0) - 1.0).abs() <= 1e-6);
    assert!((cb_norm_lower(&phi, 2, 0) - 2.0).abs() <= 1e-6);
}

#[test]
fn z2_multiplier_one_three() {
    // C(Z2) = C ⊕ C; Θ multiplies the two characters by 1 and 3.
    // In the point basis δ_0, δ_1 the characters are (1,1) and (1,-1).
    let f = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(3.0, 0.0)]));
    let action = &f * d * f.clone().try_inverse().unwrap();
    let phi = BlockMap::new("z2", vec![1, 1], vec![1, 1], action).unwrap();
    let n = cb_norm_exact(&phi, &CbOptions::default()).unwrap();
    assert!((n.value - 3.0).abs() <= 1e-6, "{n:?}");
}

use qg_core::cbnorm::{multiplier_cb_report, BoundKind};
use qg_core::corep::{EngineBridge, FinSupp, IrrTable};
use qg_core::hopf_engine::examples::{function_algebra, group_algebra, FiniteGroup};
use qg_core::hopf_engine::QuantumGroup;
use qg_core::linalg::random_complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_map(rng: &mut ChaCha8Rng, domain: Vec<usize>, codomain: Vec<usize>) -> BlockMap {
    let rows: usize = codomain.iter().map(|s| s * s).sum();
    let cols: usize = domain.iter().map(|s| s * s).sum();
    BlockMap::new("random", domain, codomain, random_complex(rng, rows, cols)).unwrap()
}

fn exact(phi: &BlockMap) -> f64 {
    cb_norm_exact(phi, &CbOptions::default()).unwrap().value
}

#[test]
fn completely_positive_maps_collapse() {
    // Conjugation by a fixed matrix plus a trace term.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = random_complex(&mut rng, 2, 2);
    let phi = BlockMap::from_fn("cp", vec![2], vec![2], |x| {
        vec![&v * &x[0] * v.adjoint() + CMat::identity(2, 2) * x[0].trace()]
    })
    .unwrap();
    let n = cb_norm_exact(&phi, &CbOptions::default()).unwrap();
    assert_eq!(n.method, Method::CompletelyPositive);
    assert!((n.value - phi.norm_of_unit_image()).abs() < 1e-12);
    assert!((n.sdp_value - n.value).abs() < 1e-6);
}

#[test]
fn dagger_direct_sum_and_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let phi = random_map(&mut rng, vec![1, 2], vec![2]);
        let psi = random_map(&mut rng, vec![2], vec![1, 2]);
        let (np, ns) = (exact(&phi), exact(&psi));
        assert!((exact(&phi.dagger()) - np).abs() < 1e-6);
        assert!((exact(&phi.direct_sum(&psi)) - np.max(ns)).abs() < 1e-6);
        assert!(exact(&phi.compose(&psi).unwrap()) <= np * ns + 1e-6);
        let lower1 = cb_norm_lower(&phi, 1, 0);
        let lower2 = cb_norm_lower(&phi, 2, 0);
        assert!(lower1 <= lower2 + 1e-12 && lower2 <= np + 1e-6);
    }
}

#[test]
fn cap_is_enforced() {
    let phi = BlockMap::identity(vec![9]);
    assert!(cb_norm_exact(&phi, &CbOptions::default()).is_err());
}

#[test]
fn z2_report_is_exact_three() {
    let bridge = EngineBridge::new(QuantumGroup::new(group_algebra(&FiniteGroup::cyclic(2))).unwrap(), 0).unwrap();
    let t = &bridge.table;
    let other = 1 - t.trivial;
    let a = FinSupp::central(t, &[(t.trivial, c(1.0, 0.0)), (other, c(3.0, 0.0))]);
    let report = multiplier_cb_report(t, &a, &[0, 1], Some(&bridge), None, &CbOptions::default()).unwrap();
    assert!((report.exact().unwrap() - 3.0).abs() < 1e-6);
    assert!(matches!(
        multiplier_cb_report(t, &a, &[t.trivial], None, None, &CbOptions::default()),
        Err(qg_core::cbnorm::CbError::TruncationTooSmall { .. })
    ));
}

#[test]
fn projection_report_has_collapse_bound() {
    let t = IrrTable::group_dual(&FiniteGroup::cyclic(3));
    let a = FinSupp::projection(&t, &[0, 1, 2]);
    let report = multiplier_cb_report(&t, &a, &[0, 1, 2], None, None, &CbOptions::default()).unwrap();
    assert!(report.bounds.iter().any(|b| b.kind == BoundKind::Lower && (b.value - 1.0).abs() < 1e-12));
    assert!(report.bounds.iter().any(|b| b.kind == BoundKind::Upper && (b.value - 1.0).abs() < 1e-12));
}

#[test]
fn sup_norm_is_below_cb_norm() {
    let bridge = EngineBridge::new(QuantumGroup::new(function_algebra(&FiniteGroup::symmetric3())).unwrap(), 0).unwrap();
    let t = &bridge.table;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let blocks = (0..t.len()).map(|k| (k, random_complex(&mut rng, t.dims[k], t.dims[k]))).collect();
        let a = FinSupp::new(t, blocks).unwrap();
        let report = multiplier_cb_report(t, &a, &[0, 1, 2], Some(&bridge), None, &CbOptions::default()).unwrap();
        assert!(report.sup_norm <= report.exact().unwrap() + 1e-6);
    }
}
