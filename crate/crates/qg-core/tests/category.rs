use qg_core::category::*;
use qg_core::corep::{theta_apply, EngineBridge, FinSupp, IrrTable, PolElement, TableParts};
use qg_core::hopf_engine::examples::{function_algebra, FiniteGroup};
use qg_core::hopf_engine::QuantumGroup;
use qg_core::linalg::{c, max_abs, random_complex, random_complex_vec, CMat, C64, ZERO};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn delta(size: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; size];
    v[k] = c(1.0, 0.0);
    v
}

fn bundled_rings() -> Vec<FusionRing> {
    vec![
        FusionRing::rep_cyclic(2),
        FusionRing::rep_cyclic(3),
        FusionRing::rep_s3(),
        FusionRing::temperley_lieb(1.0, 4).unwrap(),
        FusionRing::temperley_lieb(0.8, 4).unwrap(),
    ]
}

#[test]
fn bundled_rings_pass() {
    for ring in bundled_rings() {
        let report = verify_fusion_ring(&ring);
        assert!(report.passed(), "{}: {:?}", ring.name, report.violations());
        assert!(report.residual(FusionAxiom::DimensionHomomorphism) <= 1e-9);
    }
}

#[test]
fn temperley_lieb_dimensions_follow_the_recursion() {
    for q in [1.0, 0.8] {
        let ring = FusionRing::temperley_lieb(q, 5).unwrap();
        let d1 = q + 1.0 / q;
        assert!((ring.dq[1] - d1).abs() < 1e-14);
        for n in 1..5 {
            assert!((d1 * ring.dq[n] - ring.dq[n - 1] - ring.dq[n + 1]).abs() < 1e-12);
        }
    }
    let classical = FusionRing::temperley_lieb(1.0, 3).unwrap();
    assert_eq!(classical.dq, vec![1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn removing_a_triple_breaks_frobenius() {
    let mut ring = FusionRing::rep_s3();
    ring.n[2][2][1] = 0;
    let report = verify_fusion_ring(&ring);
    assert!(report.violations().contains(&FusionAxiom::Frobenius));
}

#[test]
fn perron_vector_recovers_dimensions_on_complete_rings() {
    for ring in [FusionRing::rep_cyclic(3), FusionRing::rep_s3()] {
        let perron = perron_dimensions(&ring);
        for (a, b) in perron.iter().zip(&ring.dq) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn quantum_trace_examples() {
    let q = 0.7;
    let table = IrrTable::new(TableParts {
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
    .unwrap();
    let one = FinSupp::projection(&table, &[0, 1]);
    let traces = quantum_trace(&table, &one).unwrap();
    assert!((traces[&1] - c(q + 1.0 / q, 0.0)).norm() < 1e-14);
    let mut e11 = CMat::zeros(2, 2);
    e11[(0, 0)] = c(1.0, 0.0);
    let f = FinSupp::new(&table, [(1, e11)].into_iter().collect()).unwrap();
    assert!((quantum_trace(&table, &f).unwrap()[&1] - c(q, 0.0)).norm() < 1e-14);

    // Kac: ordinary trace; tracial on every pair.
    let kac = IrrTable::su_q2_window(1.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let blocks = |rng: &mut ChaCha8Rng| (0..3).map(|a| (a, random_complex(rng, a + 1, a + 1))).collect();
    let f = FinSupp::new(&kac, blocks(&mut rng)).unwrap();
    let g = FinSupp::new(&kac, blocks(&mut rng)).unwrap();
    let tr = quantum_trace(&kac, &f).unwrap();
    for (a, m) in &f.blocks {
        assert!((tr[a] - m.trace()).norm() < 1e-14);
    }
    let fg = quantum_trace(&kac, &f.multiply(&g)).unwrap();
    let gf = quantum_trace(&kac, &g.multiply(&f)).unwrap();
    for a in 0..3 {
        assert!((fg[&a] - gf[&a]).norm() < 1e-12);
    }
}

#[test]
fn pairing_examples_and_bound() {
    let ring = FusionRing::temperley_lieb(0.8, 4).unwrap();
    let size = ring.len();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let omega: Vec<C64> = random_complex_vec(&mut rng, size).iter().copied().collect();
    let ones = CatMultiplier::constant(size, c(1.0, 0.0));
    let expected: C64 = (0..size).map(|k| omega[k] * ring.dq[k]).sum();
    assert!((mult_pair(&ring, &ones, &omega).unwrap().value - expected).norm() < 1e-12);
    let theta = CatMultiplier::new(random_complex_vec(&mut rng, size).iter().copied().collect(), None).unwrap();
    assert_eq!(mult_pair(&ring, &theta, &delta(size, 0)).unwrap().value, theta.values[0]);

    for _ in 0..100 {
        let t1: Vec<C64> = random_complex_vec(&mut rng, size).iter().copied().collect();
        let t2: Vec<C64> = random_complex_vec(&mut rng, size).iter().copied().collect();
        let w: Vec<C64> = random_complex_vec(&mut rng, size).iter().copied().collect();
        let s = c(0.3, -1.2);
        let (a, b) = (CatMultiplier::constant(size, ZERO), CatMultiplier::constant(size, ZERO));
        let a = CatMultiplier { values: t1, ..a };
        let b = CatMultiplier { values: t2, ..b };
        let sum = CatMultiplier { values: a.values.iter().zip(&b.values).map(|(x, y)| x + s * y).collect(), cb_bound: None };
        let lhs = mult_pair(&ring, &sum, &w).unwrap().value;
        let rhs = mult_pair(&ring, &a, &w).unwrap().value + s * mult_pair(&ring, &b, &w).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-10);
        let p = mult_pair(&ring, &a, &w).unwrap();
        assert!(p.value.norm() <= p.weighted_l1 * a.sup_norm() + 1e-12);
    }
}

#[test]
fn bound_metadata_is_enforced() {
    assert!(matches!(
        CatMultiplier::new(vec![c(2.0, 0.0)], Some(1.0)),
        Err(CategoryError::BoundViolated { .. })
    ));
}

#[test]
fn corner_examples() {
    let z2 = FusionRing::rep_cyclic(2);
    assert_eq!(corner_multiply(&z2, &delta(2, 1), &delta(2, 1)).unwrap(), delta(2, 0));
    let f = vec![c(0.5, 1.0), c(-2.0, 0.0)];
    assert_eq!(corner_multiply(&z2, &delta(2, 0), &f).unwrap(), f);

    let tl = FusionRing::temperley_lieb(0.8, 3).unwrap();
    let sq = corner_multiply(&tl, &delta(4, 1), &delta(4, 1)).unwrap();
    assert_eq!(sq, vec![c(1.0, 0.0), ZERO, c(1.0, 0.0), ZERO]);
    assert_eq!(corner_trace(&tl, &sq), c(1.0, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ring in bundled_rings() {
        let n = ring.len();
        let r = |rng: &mut ChaCha8Rng| -> Vec<C64> { random_complex_vec(rng, n).iter().copied().collect() };
        let (f, g, h) = (r(&mut rng), r(&mut rng), r(&mut rng));
        let left = corner_multiply(&ring, &corner_multiply(&ring, &f, &g).unwrap(), &h).unwrap();
        let right = corner_multiply(&ring, &f, &corner_multiply(&ring, &g, &h).unwrap()).unwrap();
        assert!(left.iter().zip(&right).all(|(a, b)| (a - b).norm() < 1e-10));
        let fg = corner_trace(&ring, &corner_multiply(&ring, &f, &g).unwrap());
        let gf = corner_trace(&ring, &corner_multiply(&ring, &g, &f).unwrap());
        assert!((fg - gf).norm() < 1e-10);
    }
}

#[test]
fn corner_pairing_reproduces_mult_pair_on_rank_one_choices() {
    let ring = FusionRing::temperley_lieb(0.8, 3).unwrap();
    let n = ring.len();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let theta = CatMultiplier::new(random_complex_vec(&mut rng, n).iter().copied().collect(), None).unwrap();
    for k in 0..n {
        let f = delta(n, k);
        let mut g = delta(n, ring.conj[k]);
        g[ring.conj[k]] = c(ring.dq[k], 0.0);
        let corner = corner_pairing(&ring, &theta, &f, &g).unwrap();
        let pair = mult_pair(&ring, &theta, &delta(n, k)).unwrap().value;
        assert!((corner - pair).norm() < 1e-12);
    }
}

#[test]
fn central_correspondence_is_block_scalar() {
    let bridge = EngineBridge::new(QuantumGroup::new(function_algebra(&FiniteGroup::symmetric3())).unwrap(), 0).unwrap();
    let table = &bridge.table;
    let n = table.len();
    let ones = CatMultiplier::constant(n, c(1.0, 0.0));
    assert_eq!(central_correspondence(table, &ones).unwrap(), FinSupp::projection(table, &[0, 1, 2]));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = bridge.data_to_pol(&random_complex_vec(&mut rng, 6));
    let delta_theta = CatMultiplier::new(delta(n, 2), None).unwrap();
    let a = central_correspondence(table, &delta_theta).unwrap();
    let out = theta_apply(table, &a, &x).unwrap();
    assert_eq!(out.support(), vec![2]);

    for _ in 0..10 {
        let theta = CatMultiplier::new(random_complex_vec(&mut rng, n).iter().copied().collect(), None).unwrap();
        let a = central_correspondence(table, &theta).unwrap();
        let (engine, _) = bridge.theta_engine(&a).unwrap();
        let image = bridge.data_to_pol(&(&engine * bridge.pol_to_data(&x).unwrap()));
        assert!(block_scalar_residual(table, &theta, &image, &x) <= 1e-10);
        // Algebra map: pointwise products go to products.
        let other = CatMultiplier::new(random_complex_vec(&mut rng, n).iter().copied().collect(), None).unwrap();
        let prod = CatMultiplier::new(theta.values.iter().zip(&other.values).map(|(p, q)| p * q).collect(), None).unwrap();
        let lhs = central_correspondence(table, &prod).unwrap();
        let rhs = a.multiply(&central_correspondence(table, &other).unwrap());
        assert!(lhs.distance(&rhs) < 1e-14);
    }
    let _ = PolElement::unit(table);
    let _ = max_abs(&CMat::zeros(1, 1));
}
