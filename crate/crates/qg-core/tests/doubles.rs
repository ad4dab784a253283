use proptest::prelude::*;
use qg_core::category::{drinfeld_mult, CatMultiplier, CategoryError};
use qg_core::doubles::{
    build_double_crossed, double_multiplier_formulas, drinfeld_double, fourier_factorization, gamma_embeddings_check,
    DoubleCrossed, DoubleError, Matching, MatchingIdentity, Side,
};
use qg_core::hopf_engine::examples::{function_algebra, group_algebra, trivial, FiniteGroup};
use qg_core::hopf_engine::{wedderburn, HopfData, QuantumGroup};
use qg_core::linalg::{c, max_abs, r, CMat, CVec, ONE, ZERO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qg(data: HopfData) -> QuantumGroup {
    QuantumGroup::new(data).unwrap()
}

fn cyclic(n: usize) -> HopfData {
    function_algebra(&FiniteGroup::cyclic(n))
}

fn random_functional(rng: &mut ChaCha8Rng, len: usize) -> CVec {
    CVec::from_fn(len, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn max_comult_distance(a: &HopfData, b: &HopfData) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((a.comult.get(i, j, k) - b.comult.get(i, j, k)).norm());
            }
        }
    }
    worst
}

fn trivial_product(first: HopfData, second: HopfData) -> DoubleCrossed {
    let (first, second) = (qg(first), qg(second));
    let matching = Matching::trivial(first.dim(), second.dim());
    build_double_crossed(first, second, matching).unwrap()
}

fn assert_sound(double: &DoubleCrossed) {
    assert!(double.validation.passed());
    assert!(double.w.pentagon_residual <= 1e-9);
    assert!(double.w.unitarity_residual <= 1e-9);
    assert!(double.kac_takesaki_residual <= 1e-9);
    assert!(double.coproduct_residual <= 1e-9);
    assert!(double.canonical_residual <= 1e-9);
    assert!(double.right_regular_residual <= 1e-9);
}

#[test]
fn trivial_second_factor_gives_the_opposite_group() {
    let s3 = function_algebra(&FiniteGroup::symmetric3());
    let double = trivial_product(s3.clone(), trivial());
    assert_sound(&double);
    assert_eq!(double.dim(), 6);
    assert!(max_comult_distance(&double.data, &s3.opposite_coproduct()) < 1e-12);
}

#[test]
fn trivial_matching_is_the_direct_product() {
    for (first, second) in [
        (cyclic(2), cyclic(2)),
        (cyclic(3), group_algebra(&FiniteGroup::cyclic(3))),
        (function_algebra(&FiniteGroup::symmetric3()), cyclic(2)),
    ] {
        let expected = first.opposite_coproduct().tensor_with(&second);
        let double = trivial_product(first, second);
        assert_sound(&double);
        assert!(max_comult_distance(&double.data, &expected) < 1e-12);

        // Ĝ_m has the blocks of Ĝ₁^op ⊗ Ĝ₂.
        let sizes = |ops: &[CMat]| -> Vec<usize> {
            let mut s: Vec<usize> = wedderburn(ops, 0).unwrap().blocks.iter().map(|b| b.size).collect();
            s.sort();
            s
        };
        let mut products = Vec::new();
        for a in sizes(&double.first_opposite.dual.operators) {
            for b in sizes(&double.second.dual.operators) {
                products.push(a * b);
            }
        }
        products.sort();
        assert_eq!(sizes(&double.dual_operators), products);
    }
}

#[test]
fn drinfeld_double_of_z2() {
    let double = drinfeld_double(cyclic(2), 0).unwrap();
    assert_sound(&double);
    assert_eq!(double.dim(), 4);
    let data = &double.data;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                assert!((data.mult.get(i, j, k) - data.mult.get(j, i, k)).norm() < 1e-12);
                assert!((data.comult.get(i, j, k) - data.comult.get(i, k, j)).norm() < 1e-12);
            }
        }
    }
    let engine = double.engine.as_ref().unwrap();
    assert!(max_abs(&(&engine.w.matrix - &double.w.matrix)) < 1e-10);
    // C(Z₂×Z₂): four characters, all one-dimensional.
    let blocks = engine.algebra_blocks(0).unwrap();
    assert!(blocks.decomposition.blocks.iter().all(|b| b.size == 1));
    assert_eq!(blocks.decomposition.blocks.len(), 4);
}

#[test]
fn drinfeld_doubles_of_abelian_groups_pass_every_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [2, 3] {
        let double = drinfeld_double(cyclic(n), 0).unwrap();
        assert_sound(&double);
        let report = gamma_embeddings_check(&double, &double.canonical_z).unwrap();
        assert!(report.first.intertwining <= 1e-10 && report.second.intertwining <= 1e-10);
        assert!(report.first.homomorphism <= 1e-10 && report.second.homomorphism <= 1e-10);
        assert_eq!(report.first.kernel_dimension + report.second.kernel_dimension, 0);
        let f = fourier_factorization(&double, &random_functional(&mut rng, n), &random_functional(&mut rng, n)).unwrap();
        assert!(f.residual <= 1e-10, "{}", f.residual);
        for side in [Side::First, Side::Second] {
            let m = double_multiplier_formulas(&double, &random_functional(&mut rng, n), side).unwrap();
            assert!(m.residual <= 1e-9 && m.engine_residual <= 1e-9);
        }
    }
}

#[test]
fn gamma_needs_the_canonical_implementer() {
    let double = drinfeld_double(cyclic(2), 0).unwrap();
    // W of Z₂ implements the same matching but is not the ordering that enters W_m.
    assert!(matches!(
        gamma_embeddings_check(&double, &double.matching.z),
        Err(DoubleError::IntertwiningFailure { .. })
    ));
    // Z with the phase along the uniform vector flipped. Z is monomial here, so a flipped
    // entry would only be a diagonal phase that γ₂ cannot see.
    let v = CVec::from_element(4, r(0.5));
    let corrupted = &double.canonical_z * (CMat::identity(4, 4) - &v * v.adjoint() * r(2.0));
    assert!(matches!(
        gamma_embeddings_check(&double, &corrupted),
        Err(DoubleError::IntertwiningFailure { .. })
    ));
}

#[test]
fn trivial_matching_embeddings_commute() {
    let double = trivial_product(cyclic(2), cyclic(2));
    gamma_embeddings_check(&double, &double.canonical_z).unwrap();
    for y in &double.first_opposite.dual.operators {
        for x in &double.second.dual.operators {
            let a = double.gamma_first(y);
            let b = double.gamma_second(&double.canonical_z, x);
            assert!(max_abs(&(&a * &b - &b * &a)) < 1e-12);
        }
    }
}

#[test]
fn fourier_factorization_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let double = drinfeld_double(cyclic(2), 0).unwrap();
    let counit = double.first.data.counit.clone();
    let f = fourier_factorization(&double, &counit, &random_functional(&mut rng, 2)).unwrap();
    assert!(max_abs(&(&f.left - CMat::identity(4, 4))) < 1e-12);
    assert!(max_abs(&(&f.direct - &f.right)) < 1e-10);

    let product = trivial_product(cyclic(3), group_algebra(&FiniteGroup::cyclic(3)));
    for _ in 0..5 {
        let f = fourier_factorization(&product, &random_functional(&mut rng, 3), &random_functional(&mut rng, 3)).unwrap();
        assert!(f.residual <= 1e-10);
    }
    assert!(matches!(
        fourier_factorization(&double, &random_functional(&mut rng, 3), &counit),
        Err(DoubleError::FunctionalLength { expected: 2, found: 3 })
    ));
}

#[test]
fn counit_gives_the_identity_multiplier() {
    let double = drinfeld_double(cyclic(2), 0).unwrap();
    for (side, counit) in [(Side::First, &double.first.data.counit), (Side::Second, &double.second.data.counit)] {
        let m = double_multiplier_formulas(&double, counit, side).unwrap();
        assert!(max_abs(&(&m.engine - CMat::identity(4, 4))) < 1e-10);
        assert!(max_abs(&(&m.closed - CMat::identity(4, 4))) < 1e-10);
    }
}

#[test]
fn matching_violations_are_reported() {
    let (first, second) = (qg(cyclic(2)), qg(cyclic(2)));
    let err = build_double_crossed(first.clone(), second.clone(), Matching::trivial(2, 3)).unwrap_err();
    assert!(matches!(err, DoubleError::DimensionMismatch { .. }));
    assert!(Matching::new(CMat::identity(3, 3), 2, 2).is_err());

    let scaled = Matching::new(CMat::identity(4, 4) * r(2.0), 2, 2).unwrap();
    assert!(matches!(
        build_double_crossed(first.clone(), second.clone(), scaled),
        Err(DoubleError::MatchingViolation { identity: MatchingIdentity::Unitary, .. })
    ));

    // Hadamard on the second leg sends C(Z₂) to ℂ[Z₂].
    let h = CMat::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) * r(std::f64::consts::FRAC_1_SQRT_2);
    let rotate = Matching::new(CMat::identity(2, 2).kronecker(&h), 2, 2).unwrap();
    assert!(matches!(
        build_double_crossed(first.clone(), second.clone(), rotate),
        Err(DoubleError::MatchingViolation { identity: MatchingIdentity::Invariance, .. })
    ));

    // Translation on the first leg preserves the algebra but not the coproduct.
    let sigma = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let shift = Matching::new(sigma.kronecker(&CMat::identity(2, 2)), 2, 2).unwrap();
    assert!(matches!(
        build_double_crossed(first, second, shift),
        Err(DoubleError::MatchingViolation { identity: MatchingIdentity::FirstLeg, .. })
    ));
}

#[test]
fn drinfeld_mult_on_z2() {
    let double = drinfeld_double(cyclic(2), 0).unwrap();
    let table = &double.tags.as_ref().unwrap().bridge.table;
    let ones = CatMultiplier::new(vec![ONE; 2], None).unwrap();
    let n = drinfeld_mult(&double, &ones).unwrap();
    assert!(max_abs(&(&n.matrix - CMat::identity(4, 4))) < 1e-12);
    assert!(n.residual <= 1e-9);

    let t = c(0.3, -0.2);
    let mut values = vec![t; 2];
    values[table.trivial] = ONE;
    let n = drinfeld_mult(&double, &CatMultiplier::new(values, None).unwrap()).unwrap();
    assert!(n.residual <= 1e-9);
    let id = CMat::identity(4, 4);
    assert!(max_abs(&((&n.matrix - &id) * (&n.matrix - &id * t))) < 1e-12);
    let rank = |m: CMat| m.svd(false, false).singular_values.iter().filter(|s| **s > 1e-9).count();
    assert_eq!(rank(&n.matrix - &id), 2);
    assert_eq!(rank(&n.matrix - &id * t), 2);

    assert!(matches!(
        drinfeld_mult(&double, &CatMultiplier::new(vec![ONE; 3], None).unwrap()),
        Err(CategoryError::ShapeMismatch(_))
    ));
    let untagged = trivial_product(cyclic(2), cyclic(2));
    assert_eq!(drinfeld_mult(&untagged, &ones).unwrap_err(), CategoryError::BasisTagMissing);
}

#[test]
fn drinfeld_double_of_s3() {
    let double = drinfeld_double(function_algebra(&FiniteGroup::symmetric3()), 0).unwrap();
    assert_sound(&double);
    assert_eq!(double.dim(), 36);
    assert!(double.engine.is_none());

    gamma_embeddings_check(&double, &double.canonical_z).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f = fourier_factorization(&double, &random_functional(&mut rng, 6), &random_functional(&mut rng, 6)).unwrap();
    assert!(f.residual <= 1e-10);
    for side in [Side::First, Side::Second] {
        let m = double_multiplier_formulas(&double, &random_functional(&mut rng, 6), side).unwrap();
        assert!(m.residual <= 1e-9);
    }

    let table = &double.tags.as_ref().unwrap().bridge.table;
    let theta = CatMultiplier::new((0..table.len()).map(|a| c(0.5 + a as f64, -0.25 * a as f64)).collect(), None).unwrap();
    let n = drinfeld_mult(&double, &theta).unwrap();
    assert!(n.residual <= 1e-9, "{}", n.residual);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn double_identities_hold_for_random_functionals(seed in any::<u64>()) {
        let double = drinfeld_double(cyclic(2), 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = fourier_factorization(&double, &random_functional(&mut rng, 2), &random_functional(&mut rng, 2)).unwrap();
        prop_assert!(f.residual <= 1e-10);
        for side in [Side::First, Side::Second] {
            let m = double_multiplier_formulas(&double, &random_functional(&mut rng, 2), side).unwrap();
            prop_assert!(m.residual <= 1e-9);
        }
    }
}
