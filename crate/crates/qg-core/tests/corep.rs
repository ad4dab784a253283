use std::collections::BTreeMap;

use qg_core::corep::*;
use qg_core::hopf_engine::examples::{function_algebra, group_algebra, kac_paljutkin, FiniteGroup};
use qg_core::hopf_engine::QuantumGroup;
use qg_core::linalg::{c, max_abs, max_abs_vec, random_complex, CMat, CVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s3_bridge() -> EngineBridge {
    EngineBridge::new(QuantumGroup::new(function_algebra(&FiniteGroup::symmetric3())).unwrap(), 0).unwrap()
}

fn random_finsupp(rng: &mut ChaCha8Rng, table: &IrrTable) -> FinSupp {
    let blocks = (0..table.len()).map(|a| (a, random_complex(rng, table.dims[a], table.dims[a]))).collect();
    FinSupp::new(table, blocks).unwrap()
}

#[test]
fn bridge_reads_off_the_s3_table() {
    let bridge = s3_bridge();
    let t = &bridge.table;
    assert_eq!(t.dims, vec![1, 1, 2]);
    assert_eq!(t.labels[t.trivial], "e");
    assert!(t.conj.iter().enumerate().all(|(a, &b)| a == b));
    let two = 2;
    // 2 ⊗ 2 = e ⊕ sign ⊕ 2
    let fused: Vec<usize> = t.fusion_of(two, two).iter().map(|(g, _)| *g).collect();
    assert_eq!(fused, vec![0, 1, 2]);
}

#[test]
fn coefficient_formula_matches_engine() {
    for bridge in [s3_bridge(), EngineBridge::new(QuantumGroup::new(kac_paljutkin()).unwrap(), 0).unwrap()] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_finsupp(&mut rng, &bridge.table);
            let (engine, res) = bridge.theta_engine(&a).unwrap();
            assert!(res < 1e-9);
            let formula = bridge.theta_coefficients(&a).unwrap();
            assert!(max_abs(&(engine - formula)) < 1e-9);
        }
    }
}

#[test]
fn l2_implementation_matches_gns_action() {
    let bridge = s3_bridge();
    let qg = &bridge.group;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let a = random_finsupp(&mut rng, &bridge.table);
        let (theta, _) = bridge.theta_engine(&a).unwrap();
        let s_inv = l2_implement(&bridge.table, &a).unwrap();
        let op = qg.dual.operator(&bridge.finsupp_to_dual(&s_inv).unwrap());
        let b = qg_core::linalg::random_complex_vec(&mut rng, qg.dim());
        let lhs = qg.haar.lambda(&(&theta * &b));
        let rhs = op * qg.haar.lambda(&b);
        assert!(max_abs_vec(&(lhs - rhs)) < 1e-8);
    }
}

#[test]
fn involution_is_the_adjoint_multiplier() {
    let bridge = s3_bridge();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let star = &bridge.group.data.star;
    for _ in 0..10 {
        let a = random_finsupp(&mut rng, &bridge.table);
        let sharp = multiplier_involution(&bridge.table, &a).unwrap();
        let (theta, _) = bridge.theta_engine(&a).unwrap();
        let (theta_sharp, _) = bridge.theta_engine(&sharp).unwrap();
        let dagger = star * theta.map(|z| z.conj()) * star.map(|z| z.conj());
        assert!(max_abs(&(theta_sharp - dagger)) < 1e-9);
        let back = multiplier_involution(&bridge.table, &sharp).unwrap();
        assert!(back.distance(&a) < 1e-12);
    }
}

#[test]
fn star_pol_matches_engine_star() {
    let bridge = s3_bridge();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = qg_core::linalg::random_complex_vec(&mut rng, 6);
    let pol = bridge.data_to_pol(&x);
    let starred = bridge.pol_to_data(&star_pol(&bridge.table, &pol).unwrap()).unwrap();
    assert!(max_abs_vec(&(starred - bridge.group.data.star_of(&x))) < 1e-9);
}

#[test]
fn theta_of_matrix_unit_shifts_rows() {
    let t = s3_bridge().table;
    let mut a = CMat::zeros(2, 2);
    a[(0, 1)] = c(1.0, 0.0);
    let a = FinSupp::new(&t, BTreeMap::from([(2, a)])).unwrap();
    for j in 0..2 {
        let out = theta_apply(&t, &a, &PolElement::coefficient(&t, 2, 0, j)).unwrap();
        assert_eq!(out, PolElement::coefficient(&t, 2, 1, j));
        let out = theta_apply(&t, &a, &PolElement::coefficient(&t, 2, 1, j)).unwrap();
        assert!(out.coeffs[&2].iter().all(|z| z.norm() == 0.0));
    }
}

#[test]
fn haar_pair_matches_engine() {
    let bridge = s3_bridge();
    let x = CVec::from_fn(6, |i, _| c(i as f64, 1.0 - i as f64));
    let h = bridge.group.haar.state.dot(&x);
    let pol = bridge.data_to_pol(&x);
    assert!((haar_pair(&bridge.table, &pol) - h).norm() < 1e-10);
}

fn s3_group_algebra_bridge() -> EngineBridge {
    EngineBridge::new(QuantumGroup::new(group_algebra(&FiniteGroup::symmetric3())).unwrap(), 0).unwrap()
}

fn rho_table(q: f64) -> IrrTable {
    IrrTable::new(TableParts {
        name: "rho".into(),
        labels: vec!["e".into(), "v".into()],
        trivial: 0,
        dims: vec![1, 2],
        rho: vec![vec![1.0], vec![q, 1.0 / q]],
        conj: vec![0, 1],
        fusion: None,
        conj_intertwiner: None,
        truncated: false,
    })
    .unwrap()
}

#[test]
fn theta_of_the_unit_restricts_to_the_support() {
    let bridge = s3_bridge();
    let t = &bridge.table;
    let a = FinSupp::projection(t, &[0, 2]);
    let x = bridge.data_to_pol(&CVec::from_fn(6, |i, _| c(1.0 + i as f64, 0.5)));
    let out = theta_apply(t, &a, &x).unwrap();
    assert_eq!(out.support(), vec![0, 2]);
    assert_eq!(out.coeffs[&2], x.coeffs[&2]);
}

#[test]
fn theta_is_antimultiplicative() {
    let t = s3_bridge().table;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, b) = (random_finsupp(&mut rng, &t), random_finsupp(&mut rng, &t));
    let x = PolElement::new(&t, (0..3).map(|k| (k, random_complex(&mut rng, t.dims[k], t.dims[k]))).collect()).unwrap();
    let lhs = theta_apply(&t, &a.multiply(&b), &x).unwrap();
    let rhs = theta_apply(&t, &b, &theta_apply(&t, &a, &x).unwrap()).unwrap();
    assert!(lhs.distance(&rhs) < 1e-12);
    // Θ(a)(1) = a^e 1
    let one = theta_apply(&t, &a, &PolElement::unit(&t)).unwrap();
    assert!(one.distance(&PolElement::unit(&t).scale(a.blocks[&t.trivial][(0, 0)])) < 1e-14);
}

#[test]
fn central_elements_move_to_conjugate_labels() {
    let t = IrrTable::group_dual(&FiniteGroup::cyclic(3));
    let p = FinSupp::projection(&t, &[1]);
    assert_eq!(l2_implement(&t, &p).unwrap(), FinSupp::projection(&t, &[2]));
    let a = FinSupp::central(&t, &[(1, c(0.0, 1.0))]);
    let sharp = multiplier_involution(&t, &a).unwrap();
    assert_eq!(sharp, FinSupp::central(&t, &[(2, c(0.0, -1.0))]));
    let sym = FinSupp::projection(&t, &[0, 1, 2]);
    assert_eq!(multiplier_involution(&t, &sym).unwrap(), sym);
}

#[test]
fn noncentral_without_intertwiner_is_rejected() {
    let t = rho_table(0.5);
    let a = FinSupp::new(&t, BTreeMap::from([(1, CMat::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0)))])).unwrap();
    assert!(matches!(l2_implement(&t, &a), Err(CorepError::UnsupportedLabel { .. } | CorepError::MissingConjugationData { .. })));
}

#[test]
fn flows_are_trivial_on_kac_tables() {
    let t = s3_bridge().table;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = random_finsupp(&mut rng, &t);
    for flow in [Flow::Tau, Flow::SigmaPhi, Flow::SigmaPsi] {
        assert!(flow_finsupp(&t, &a, c(0.7, 0.0), flow).unwrap().distance(&a) < 1e-14);
    }
}

#[test]
fn scaling_phase_of_an_off_diagonal_coefficient() {
    let q = 0.6;
    let t = rho_table(q);
    let x = PolElement::coefficient(&t, 1, 0, 1);
    let out = flow_pol(&t, &x, c(1.0, 0.0), Flow::Tau).unwrap();
    // q^{2i}
    let expected = c(0.0, 2.0 * q.ln()).exp();
    assert!((out.coeffs[&1][(0, 1)] - expected).norm() < 1e-14);
}

#[test]
fn scaling_group_intertwines_theta() {
    let t = IrrTable::su_q2_window(0.7, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a = random_finsupp(&mut rng, &t);
        let x = PolElement::new(&t, (0..4).map(|k| (k, random_complex(&mut rng, k + 1, k + 1))).collect()).unwrap();
        let time = c(0.37, 0.0);
        let lhs = theta_apply(&t, &flow_finsupp(&t, &a, time, Flow::Tau).unwrap(), &x).unwrap();
        let inner = flow_pol(&t, &x, -time, Flow::Tau).unwrap();
        let rhs = flow_pol(&t, &theta_apply(&t, &a, &inner).unwrap(), time, Flow::Tau).unwrap();
        assert!(lhs.distance(&rhs) < 1e-10);
    }
}

#[test]
fn symmetrize_examples() {
    let t = IrrTable::group_dual(&FiniteGroup::cyclic(3));
    let a = FinSupp::central(&t, &[(0, c(1.0, 0.0)), (1, c(0.5, 0.0)), (2, c(0.5, 0.0))]);
    assert_eq!(symmetrize_ap_net(&t, &a).unwrap(), a);
    let doubled = FinSupp::central(&t, &[(0, c(2.0, 0.0))]);
    assert_eq!(symmetrize_ap_net(&t, &doubled).unwrap(), FinSupp::central(&t, &[(0, c(1.0, 0.0))]));
    let degenerate = FinSupp::central(&t, &[(0, c(0.0, 3.0)), (1, c(1.0, 0.0))]);
    assert_eq!(symmetrize_ap_net(&t, &degenerate), Err(CorepError::DegenerateUnitCoefficient));
}

#[test]
fn symmetrize_output_is_a_normalized_fixed_point() {
    let bridge = s3_bridge();
    let t = &bridge.table;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let mut a = random_finsupp(&mut rng, t);
        a.blocks.get_mut(&t.trivial).unwrap()[(0, 0)] += c(2.0, 0.0);
        let out = symmetrize_ap_net(t, &a).unwrap();
        assert!(multiplier_involution(t, &out).unwrap().distance(&out) < 1e-12);
        assert!(flow_finsupp(t, &out, c(1.3, 0.0), Flow::Tau).unwrap().distance(&out) < 1e-12);
        let (theta, _) = bridge.theta_engine(&out).unwrap();
        let unit = &bridge.group.data.unit;
        assert!(max_abs_vec(&(&theta * unit - unit)) < 1e-10);
        // h ∘ Θ(out) = h
        let h = &bridge.group.haar.state;
        assert!(max_abs_vec(&(theta.transpose() * h - h)) < 1e-10);
    }
}

#[test]
fn central_average_examples() {
    let t = s3_bridge().table;
    let mut e11 = CMat::zeros(2, 2);
    e11[(0, 0)] = c(1.0, 0.0);
    let a = FinSupp::new(&t, BTreeMap::from([(2, e11)])).unwrap();
    assert_eq!(central_average(&t, &a).unwrap(), FinSupp::central(&t, &[(2, c(0.5, 0.0))]));
    let central = FinSupp::central(&t, &[(0, c(1.0, 2.0)), (2, c(-1.0, 0.0))]);
    assert_eq!(central_average(&t, &central).unwrap(), central);
}

/// `Θ(A(a))` from the averaging map `E(U^α_ij ⊗ U^β_kl) = δ_αβ δ_jk / dim(α) Δ(U^α_il)`.
fn averaged_theta(bridge: &EngineBridge, a: &FinSupp) -> CMat {
    let data = &bridge.group.data;
    let n = data.dim();
    let (theta, _) = bridge.theta_engine(a).unwrap();
    let basis = bridge.coefficient_basis();
    let inv = basis.clone().try_inverse().unwrap();
    let t = &bridge.table;
    let mut offsets = vec![0];
    for d in &t.dims {
        offsets.push(offsets.last().unwrap() + d * d);
    }
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let delta = data.coproduct(&qg_core::linalg::basis_vector(n, k));
        let moved = delta * theta.transpose();
        let coeffs = &inv * moved * inv.transpose();
        let mut image = CVec::zeros(n);
        for (al, &d) in t.dims.iter().enumerate() {
            for i in 0..d {
                for l in 0..d {
                    let sum: qg_core::linalg::C64 = (0..d)
                        .map(|j| coeffs[(offsets[al] + i * d + j, offsets[al] + j * d + l)])
                        .sum();
                    image += bridge.coefficient(al, i, l) * (sum / c(d as f64, 0.0));
                }
            }
        }
        out.set_column(k, &image);
    }
    out
}

#[test]
fn central_average_matches_the_averaging_map() {
    for bridge in [s3_bridge(), EngineBridge::new(QuantumGroup::new(kac_paljutkin()).unwrap(), 0).unwrap()] {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let a = random_finsupp(&mut rng, &bridge.table);
            let avg = central_average(&bridge.table, &a).unwrap();
            let (engine, _) = bridge.theta_engine(&avg).unwrap();
            assert!(max_abs(&(engine - averaged_theta(&bridge, &a))) < 1e-9);
            assert_eq!(central_average(&bridge.table, &avg).unwrap().distance(&avg) < 1e-14, true);
        }
    }
}

#[test]
fn subgroup_expectation_examples() {
    let bridge = s3_group_algebra_bridge();
    let t = &bridge.table;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = bridge.data_to_pol(&qg_core::linalg::random_complex_vec(&mut rng, 6));
    let scalar = subgroup_expectation(t, &[t.trivial], &x).unwrap();
    assert!(scalar.distance(&PolElement::unit(t).scale(haar_pair(t, &x))) < 1e-14);
    let all: Vec<usize> = (0..t.len()).collect();
    assert_eq!(subgroup_expectation(t, &all, &x).unwrap(), x);
    let other = (0..t.len()).find(|&k| k != t.trivial).unwrap();
    assert!(matches!(subgroup_expectation(t, &[other], &x), Err(CorepError::NotASubcategory(_))));

    // Labels of the rotation subgroup: the group-like elements of order dividing 3.
    let data = &bridge.group.data;
    let rotations: Vec<usize> = (0..6)
        .filter(|&k| {
            let u = bridge.coefficient(k, 0, 0);
            let cube = data.product(&data.product(u, u), u);
            max_abs_vec(&(cube - &data.unit)) < 1e-9
        })
        .collect();
    assert_eq!(rotations.len(), 3);
    let sub_elem = |rng: &mut ChaCha8Rng| {
        let coeffs = rotations.iter().map(|&k| (k, random_complex(rng, 1, 1))).collect();
        bridge.pol_to_data(&PolElement::new(t, coeffs).unwrap()).unwrap()
    };
    for _ in 0..5 {
        let (a, b) = (sub_elem(&mut rng), sub_elem(&mut rng));
        let y = qg_core::linalg::random_complex_vec(&mut rng, 6);
        let expect = |v: &CVec| bridge.pol_to_data(&subgroup_expectation(t, &rotations, &bridge.data_to_pol(v)).unwrap()).unwrap();
        let lhs = expect(&data.product(&data.product(&a, &y), &b));
        let rhs = data.product(&data.product(&a, &expect(&y)), &b);
        assert!(max_abs_vec(&(lhs - rhs)) < 1e-9);
    }
}

#[test]
fn module_action_examples() {
    let group = FiniteGroup::symmetric3();
    let t = IrrTable::group_dual(&group);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_finsupp(&mut rng, &t);
    let counit = FinSupp::central(&t, &[(t.trivial, c(1.0, 0.0))]);
    assert!(module_action(&t, &a, &counit).unwrap().distance(&a) < 1e-14);
    let omega = random_finsupp(&mut rng, &t);
    let out = module_action(&t, &a, &omega).unwrap();
    for g in 0..6 {
        let direct: qg_core::linalg::C64 =
            (0..6).map(|h| omega.blocks[&h][(0, 0)] * a.blocks[&group.table[h][g]][(0, 0)]).sum();
        assert!((out.blocks[&g][(0, 0)] - direct).norm() < 1e-12);
    }
    let no_fusion = rho_table(1.0);
    assert_eq!(
        module_action(&no_fusion, &FinSupp::zero(), &FinSupp::zero()),
        Err(CorepError::MissingFusionData)
    );
}

#[test]
fn schur_gram_on_kac_tables() {
    let bridge = s3_bridge();
    let t = &bridge.table;
    let gram = schur_gram(t, &[0, 1, 2]).unwrap();
    for (r, &(a, _, _)) in gram.index.iter().enumerate() {
        assert!((gram.matrix[(r, r)].re - 1.0 / t.dims[a] as f64).abs() < 1e-14);
    }
    // Engine Gram h(U* U) in the matched basis.
    let data = &bridge.group.data;
    let h = &bridge.group.haar;
    for (r, &p) in gram.index.iter().enumerate() {
        for (s, &q) in gram.index.iter().enumerate() {
            let x = bridge.coefficient(p.0, p.1, p.2);
            let y = bridge.coefficient(q.0, q.1, q.2);
            let value = h.evaluate(&data.product(&data.star_of(x), y));
            assert!((value - gram.matrix[(r, s)]).norm() < 1e-9);
        }
    }
}

#[test]
fn schur_gram_satisfies_kms_off_kac() {
    let t = IrrTable::su_q2_window(0.5, 3).unwrap();
    let gram = schur_gram(&t, &[0, 1, 2, 3]).unwrap();
    assert!(gram.kms_residual <= 1e-10);
    assert!(qg_core::linalg::min_eigenvalue(&gram.matrix) > 0.0);
}
