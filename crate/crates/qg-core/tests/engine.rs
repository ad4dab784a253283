use qg_core::hopf_engine::examples::{function_algebra, group_algebra, kac_paljutkin, trivial, FiniteGroup};
use qg_core::hopf_engine::{
    antipode_consistency, antipode_from_w, biduality, classify_l2_implementation, validate_hopf,
    Axiom, Classification, HopfData, HopfError, QuantumGroup,
};
use qg_core::linalg::{max_abs, max_abs_vec, r, CMat, CVec, ONE};

fn bundled() -> Vec<(&'static str, HopfData)> {
    vec![
        ("C(Z2)", function_algebra(&FiniteGroup::cyclic(2))),
        ("C(S3)", function_algebra(&FiniteGroup::symmetric3())),
        ("C[Z2]", group_algebra(&FiniteGroup::cyclic(2))),
        ("C[S3]", group_algebra(&FiniteGroup::symmetric3())),
        ("KP", kac_paljutkin()),
        ("trivial", trivial()),
    ]
}

#[test]
fn bundled_examples_pass_every_check() {
    for (name, data) in bundled() {
        let report = validate_hopf(&data).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.violations());
        let qg = QuantumGroup::new(data).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(qg.w.pentagon_residual <= 1e-10, "{name}");
        assert!(qg.haar.left_invariance_residual <= 1e-10, "{name}");
        assert!(qg.haar.trace_residual <= 1e-10, "{name}");
    }
}

#[test]
fn w_of_c_z2_is_a_permutation() {
    let qg = QuantumGroup::new(function_algebra(&FiniteGroup::cyclic(2))).unwrap();
    for z in qg.w.matrix.iter() {
        let close_to_int = (z.re - z.re.round()).abs() < 1e-12 && z.im.abs() < 1e-12;
        assert!(close_to_int && (z.re.round() == 0.0 || z.re.round() == 1.0));
    }
    for row in 0..4 {
        let sum: f64 = (0..4).map(|c| qg.w.matrix[(row, c)].re).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn broken_coassociativity_is_reported() {
    let mut data = function_algebra(&FiniteGroup::cyclic(2));
    data.comult.set(1, 0, 1, r(0.5));
    let report = validate_hopf(&data).unwrap();
    assert!(report.residual(Axiom::Coassociativity) > 1e-3);
    assert!(matches!(QuantumGroup::new(data), Err(HopfError::AxiomViolation { .. })));
}

#[test]
fn haar_state_of_group_algebra_is_the_identity_coefficient() {
    let qg = QuantumGroup::new(group_algebra(&FiniteGroup::cyclic(2))).unwrap();
    assert!((qg.haar.state[0] - ONE).norm() < 1e-12);
    assert!(qg.haar.state[1].norm() < 1e-12);
}

#[test]
fn kac_paljutkin_antipode_squares_to_identity() {
    let data = kac_paljutkin();
    let s2 = &data.antipode * &data.antipode;
    assert!(max_abs(&(s2 - CMat::identity(8, 8))) < 1e-10);
}

#[test]
fn dual_of_function_algebra_is_group_algebra() {
    let group = FiniteGroup::symmetric3();
    let qg = QuantumGroup::new(function_algebra(&group)).unwrap();
    let dual = &qg.dual.hopf;
    // The dual is cocommutative and noncommutative.
    let n = dual.dim();
    let mut cocomm: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for i in 0..n {
        let d = dual.coproduct(&dual.basis_element(i));
        cocomm = cocomm.max(max_abs(&(&d - d.transpose())));
        for j in 0..n {
            let x = dual.basis_element(i);
            let y = dual.basis_element(j);
            comm = comm.max(max_abs_vec(&(dual.product(&x, &y) - dual.product(&y, &x))));
        }
    }
    assert!(cocomm < 1e-9);
    assert!(comm > 0.1);
    let blocks = qg.dual_blocks(7).unwrap();
    assert_eq!(blocks.sizes(), vec![1, 1, 2]);
}

#[test]
fn double_dual_is_isomorphic() {
    for (name, data) in bundled() {
        let qg = QuantumGroup::new(data).unwrap();
        let dual_qg = qg.dual_group().unwrap_or_else(|e| panic!("{name}: {e}"));
        let bi = biduality(&qg.data, &qg.haar, &qg.w, &qg.dual, &dual_qg.dual.hopf)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(bi.residual <= 1e-8, "{name}");
    }
}

#[test]
fn antipode_from_slices_matches_structure() {
    for (name, data) in bundled() {
        let qg = QuantumGroup::new(data).unwrap();
        antipode_from_w(&qg.data, &qg.haar, &qg.w, &qg.dual).unwrap_or_else(|e| panic!("{name}: {e}"));
        let res = antipode_consistency(&qg.data, &qg.haar, &qg.w, &qg.dual).unwrap();
        assert!(res <= 1e-9, "{name}: {res}");
    }
}

#[test]
fn dual_of_group_algebra_blocks() {
    let qg = QuantumGroup::new(group_algebra(&FiniteGroup::symmetric3())).unwrap();
    let blocks = qg.algebra_blocks(3).unwrap();
    assert_eq!(blocks.sizes(), vec![1, 1, 2]);
    assert!(blocks.decomposition.residual < 1e-9);
    let x = CVec::from_fn(6, |i, _| r(i as f64 + 1.0));
    assert!(max_abs_vec(&(blocks.devectorize(&blocks.vectorize(&x)) - x)) < 1e-9);
}

#[test]
fn identity_is_central() {
    for (name, data) in bundled() {
        let qg = QuantumGroup::new(data).unwrap();
        let n = qg.dim();
        let rep = classify_l2_implementation(&qg, &CMat::identity(n, n)).unwrap();
        assert_eq!(rep.classification, Classification::Central, "{name}");
        assert!(max_abs(&(rep.implementation - CMat::identity(n, n))) < 1e-10);
    }
}

#[test]
fn left_multiplier_is_implemented_by_inverse_antipode() {
    for (name, data) in bundled() {
        let qg = QuantumGroup::new(data).unwrap();
        let n = qg.dim();
        let a = CVec::from_fn(n, |i, _| qg_core::linalg::c(0.3 * i as f64 - 0.5, 0.1 * (i * i) as f64));
        let (theta, res) = qg.left_multiplier(&a);
        assert!(res < 1e-9, "{name}: {res}");
        let s_inv = qg.dual.hopf.antipode.clone().try_inverse().unwrap();
        let op = qg.dual.operator(&(s_inv * &a));
        let b = CVec::from_fn(n, |i, _| qg_core::linalg::c(1.0 / (i as f64 + 1.0), 0.2));
        let lhs = qg.haar.lambda(&(&theta * &b));
        let rhs = op * qg.haar.lambda(&b);
        assert!(max_abs_vec(&(lhs - rhs)) < 1e-8, "{name}");
        let rep = classify_l2_implementation(&qg, &theta).unwrap();
        assert!(
            matches!(rep.classification, Classification::LeftCentralizer | Classification::Central),
            "{name}: {:?}",
            rep.classification
        );
    }
}

#[test]
fn inner_conjugation_is_not_a_centralizer() {
    let qg = QuantumGroup::new(group_algebra(&FiniteGroup::symmetric3())).unwrap();
    // λ_g for a transposition g.
    let u = qg.data.basis_element(1);
    let u_inv = qg.data.star_of(&u);
    let phi = qg.data.left_mult_matrix(&u) * qg.data.right_mult_matrix(&u_inv);
    let rep = classify_l2_implementation(&qg, &phi).unwrap();
    assert_eq!(rep.classification, Classification::None);
}
