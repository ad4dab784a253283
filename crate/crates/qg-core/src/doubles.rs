//! Double crossed products of finite quantum groups along a matching, and Drinfeld doubles.
//!
//! Everything acts on the GNS spaces of the factors: `L∞(G_m) = L∞(G₁)⊗L∞(G₂)` sits on
//! `H₁⊗H₂` and the Kac–Takesaki operator of the double on `H₁⊗H₂⊗H₁⊗H₂`. Operator
//! identities on large spaces are compared on [`check_columns`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corep::{CorepError, EngineBridge};
use crate::hopf_engine::{
    expand_first_leg, haar_state, multiplicative_unitary, validate_hopf, Axiom, Flavor, HaarData, HopfData, HopfError,
    QuantumGroup, Tensor3, UnitaryTensor, ValidationReport,
};
use crate::linalg::{
    apply_on_legs, check_columns, flip, max_abs, nullspace, pseudo_inverse, solve_least_squares, vec_row_major, CMat,
    CVec, C64, ZERO,
};

/// Doubles up to this dimension also get the full engine treatment (`QuantumGroup::new`).
pub const ENGINE_DIM_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchingIdentity {
    Unitary,
    /// `m` maps `L∞(G₁)⊗L∞(G₂)` into itself.
    Invariance,
    /// `(Δ₁⊗id)m = m₂₃m₁₃(Δ₁⊗id)`.
    FirstLeg,
    /// `(id⊗Δ₂)m = m₁₃m₁₂(id⊗Δ₂)`.
    SecondLeg,
}

impl fmt::Display for MatchingIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchingIdentity::Unitary => "unitarity of Z",
            MatchingIdentity::Invariance => "invariance of L∞(G₁)⊗L∞(G₂)",
            MatchingIdentity::FirstLeg => "(Δ₁⊗id)m = m₂₃m₁₃(Δ₁⊗id)",
            MatchingIdentity::SecondLeg => "(id⊗Δ₂)m = m₁₃m₁₂(id⊗Δ₂)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Embedding {
    First,
    Second,
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Embedding::First => "γ₁",
            Embedding::Second => "γ₂",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoubleError {
    #[error("matching violates {identity} (residual {residual:.3e})")]
    MatchingViolation { identity: MatchingIdentity, residual: f64 },
    #[error("W_m fails the pentagon equation (residual {residual:.3e})")]
    PentagonFailure { residual: f64 },
    #[error("{embedding} does not intertwine the coproducts (residual {residual:.3e})")]
    IntertwiningFailure { embedding: Embedding, residual: f64 },
    #[error("Z acts on dimension {found}, the factors need {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("functional has length {found}, expected {expected}")]
    FunctionalLength { expected: usize, found: usize },
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Corep(#[from] CorepError),
}

/// A matching `m(x) = ZxZ*` on `H₁⊗H₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub z: CMat,
    pub first_dim: usize,
    pub second_dim: usize,
}

impl Matching {
    pub fn new(z: CMat, first_dim: usize, second_dim: usize) -> Result<Self, DoubleError> {
        let expected = first_dim * second_dim;
        if z.nrows() != expected || z.ncols() != expected {
            return Err(DoubleError::DimensionMismatch { expected, found: z.nrows().max(z.ncols()) });
        }
        Ok(Matching { z, first_dim, second_dim })
    }

    /// `Z = 1`; the double is the direct product.
    pub fn trivial(first_dim: usize, second_dim: usize) -> Self {
        let n = first_dim * second_dim;
        Matching { z: CMat::identity(n, n), first_dim, second_dim }
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        &self.z * x * self.z.adjoint()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingReport {
    pub unitarity: f64,
    pub invariance: f64,
    pub first_leg: f64,
    pub second_leg: f64,
}

impl MatchingReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity.max(self.invariance).max(self.first_leg).max(self.second_leg)
    }
}

/// Left integral `Λ` of `A` (`xΛ = ε(x)Λ`), unique up to scale.
pub fn left_integral(data: &HopfData) -> Result<CVec, HopfError> {
    let n = data.dim();
    let mut system = CMat::zeros(n * n, n);
    for i in 0..n {
        let l = data.left_mult_matrix(&data.basis_element(i)) - CMat::identity(n, n) * data.counit[i];
        system.view_mut((i * n, 0), (n, n)).copy_from(&l);
    }
    let kernel = nullspace(&system, 1e-9);
    if kernel.ncols() != 1 {
        return Err(HopfError::Decomposition(format!("left integrals form a space of dimension {}", kernel.ncols())));
    }
    Ok(kernel.column(0).into_owned())
}

/// Unitary `F: H_Ĝ → H_G` with `F π̂(x̂_k) F* = x̂_k`, where `dual` is `group.dual_group()`.
///
/// `F Λ̂(x̂) = x̂ ξ₀` with `ξ₀` the normalized GNS vector of the left integral.
pub fn fourier_transport(group: &QuantumGroup, dual: &QuantumGroup) -> Result<CMat, DoubleError> {
    let n = group.dim();
    let xi = group.haar.lambda(&left_integral(&group.data)?);
    let xi = &xi / C64::new(xi.norm(), 0.0);
    let cols: Vec<CVec> = group.dual.operators.iter().map(|x| x * &xi).collect();
    let inv = dual
        .haar
        .gns_inverse()
        .ok_or(HopfError::NotFaithful { min_eigenvalue: dual.haar.min_gram_eigenvalue })?;
    let f = CMat::from_columns(&cols) * inv;
    let tol = group.data.tolerance.value().max(1e-9);
    let unitarity = max_abs(&(f.adjoint() * &f - CMat::identity(n, n)));
    if unitarity > tol {
        return Err(HopfError::NotUnitary { residual: unitarity }.into());
    }
    Ok(f)
}

/// Normalized `Λ(Λ_int)` for the left integral; the vector state it defines is the dual Haar state.
fn integral_vector(data: &HopfData, haar: &HaarData) -> Result<CVec, HopfError> {
    let xi = haar.lambda(&left_integral(data)?);
    Ok(&xi / C64::new(xi.norm(), 0.0))
}

/// Matrix part `K` of `Ĵξ = K conj(ξ)`, from `Ĵ(x̂ξ₀) = x̂*ξ₀`.
///
/// Both Haar states are tracial here, so `Ĵ` is the adjoint operation on `L∞(Ĝ)` moved to
/// `H` along `x̂ ↦ x̂ξ₀`.
fn dual_conjugation_matrix(dual_operators: &[CMat], xi: &CVec) -> Result<CMat, HopfError> {
    let orbit = CMat::from_columns(&dual_operators.iter().map(|x| x * xi).collect::<Vec<_>>());
    let adjoints = CMat::from_columns(&dual_operators.iter().map(|x| x.adjoint() * xi).collect::<Vec<_>>());
    let inv = orbit
        .try_inverse()
        .ok_or_else(|| HopfError::Decomposition("integral vector is not cyclic for the dual".into()))?;
    Ok(adjoints * inv.map(|z| z.conj()))
}

/// Matrix part `K` of the dual modular conjugation `Ĵξ = K conj(ξ)` on `H_G`.
pub fn dual_modular_conjugation(group: &QuantumGroup) -> Result<CMat, DoubleError> {
    let xi = integral_vector(&group.data, &group.haar)?;
    Ok(dual_conjugation_matrix(&group.dual.operators, &xi)?)
}

/// Linear part of `Ĵ J` for a group: `K_Ĵ conj(K_J)`.
fn conjugation_product(group: &QuantumGroup) -> Result<CMat, DoubleError> {
    let j = group
        .haar
        .modular_conjugation
        .as_ref()
        .ok_or(HopfError::NotFaithful { min_eigenvalue: group.haar.min_gram_eigenvalue })?;
    Ok(dual_modular_conjugation(group)? * j.map(|z| z.conj()))
}

/// Right regular representation `V = (Ĵ⊗Ĵ)ΣW*Σ(Ĵ⊗Ĵ)` with the residual of `Δ(x) = V(x⊗1)V*`.
pub fn right_regular(group: &QuantumGroup) -> Result<(CMat, f64), DoubleError> {
    let n = group.dim();
    let k = dual_modular_conjugation(group)?;
    let kk = k.kronecker(&k);
    let s = flip(n, n);
    let w_hat = &s * group.w.matrix.adjoint() * &s;
    let v = &kk * w_hat.map(|z| z.conj()) * kk.map(|z| z.conj());
    let id = CMat::identity(n, n);
    let mut residual: f64 = 0.0;
    for x in &group.operators {
        let delta = group.w.matrix.adjoint() * id.kronecker(x) * &group.w.matrix;
        residual = residual.max(max_abs(&(&v * x.kronecker(&id) * v.adjoint() - delta)));
    }
    Ok((v, residual))
}

/// `Σ_ab c_ab (A_a ⊗ B_b)` applied to the columns of `cols`, on `H_A ⊗ H_B`.
fn apply_tensor_sum(first: &[CMat], second: &[CMat], coeffs: &CMat, cols: &CMat) -> CMat {
    let (d1, d2) = (first[0].nrows(), second[0].nrows());
    let mut out = CMat::zeros(d1 * d2, cols.ncols());
    let partial: Vec<CMat> = (0..first.len())
        .map(|a| {
            let mut m = CMat::zeros(d2, d2);
            for (b, op) in second.iter().enumerate() {
                if coeffs[(a, b)] != ZERO {
                    m += op * coeffs[(a, b)];
                }
            }
            m.transpose()
        })
        .collect();
    for c in 0..cols.ncols() {
        let x = CMat::from_fn(d1, d2, |i, j| cols[(i * d2 + j, c)]);
        let mut y = CMat::zeros(d1, d2);
        for (a, op) in first.iter().enumerate() {
            if partial[a].iter().any(|z| *z != ZERO) {
                y += op * &x * &partial[a];
            }
        }
        out.set_column(c, &vec_row_major(&y));
    }
    out
}

/// Checks the matching and returns `m` as a matrix on coefficient vectors of `A₁⊗A₂`.
pub fn check_matching(
    first: &QuantumGroup,
    second: &QuantumGroup,
    matching: &Matching,
) -> Result<(MatchingReport, CMat), DoubleError> {
    let (n1, n2) = (first.dim(), second.dim());
    if matching.first_dim != n1 || matching.second_dim != n2 {
        return Err(DoubleError::DimensionMismatch {
            expected: n1 * n2,
            found: matching.first_dim * matching.second_dim,
        });
    }
    let tol = first.data.tolerance.value().max(second.data.tolerance.value()).max(1e-9);
    let z = &matching.z;
    let n = n1 * n2;
    let unitarity = max_abs(&(z.adjoint() * z - CMat::identity(n, n)));
    if unitarity > tol {
        return Err(DoubleError::MatchingViolation { identity: MatchingIdentity::Unitary, residual: unitarity });
    }

    let products: Vec<CMat> = (0..n).map(|k| first.operators[k / n2].kronecker(&second.operators[k % n2])).collect();
    let basis = CMat::from_columns(&products.iter().map(vec_row_major).collect::<Vec<_>>());
    let images = CMat::from_columns(&products.iter().map(|x| vec_row_major(&matching.apply(x))).collect::<Vec<_>>());
    let (map, _) = solve_least_squares(&basis, &images);
    let invariance = max_abs(&(&basis * &map - &images));
    if invariance > tol {
        return Err(DoubleError::MatchingViolation { identity: MatchingIdentity::Invariance, residual: invariance });
    }

    // Legs (H₁, H₁, H₂) and (H₁, H₂, H₂).
    let dims1 = [n1, n1, n2];
    let dims2 = [n1, n2, n2];
    let cols1 = check_columns(n1 * n1 * n2);
    let cols2 = check_columns(n1 * n2 * n2);
    let w1 = &first.w.matrix;
    let w2 = &second.w.matrix;
    let (mut first_leg, mut second_leg): (f64, f64) = (0.0, 0.0);
    let conj = |ops: &[(&CMat, &[usize])], dims: &[usize], x: &CMat| -> CMat {
        ops.iter().rev().fold(x.clone(), |acc, (op, legs)| apply_on_legs(op, dims, legs, &acc))
    };
    for x in &products {
        let mx = matching.apply(x);
        // (Δ₁⊗id)(y) = W₁,₁₂* y₂₃ W₁,₁₂ and m₂₃m₁₃(y) = Z₂₃Z₁₃ y Z₁₃*Z₂₃*.
        let w1_adj = w1.adjoint();
        let z_adj = z.adjoint();
        let lhs = conj(&[(&w1_adj, &[0, 1]), (&mx, &[1, 2]), (w1, &[0, 1])], &dims1, &cols1);
        let rhs = conj(
            &[
                (z, &[1, 2]),
                (z, &[0, 2]),
                (&w1_adj, &[0, 1]),
                (x, &[1, 2]),
                (w1, &[0, 1]),
                (&z_adj, &[0, 2]),
                (&z_adj, &[1, 2]),
            ],
            &dims1,
            &cols1,
        );
        first_leg = first_leg.max(max_abs(&(lhs - rhs)));
        // (id⊗Δ₂)(y) = W₂,₂₃* y₁₃ W₂,₂₃ and m₁₃m₁₂(y) = Z₁₃Z₁₂ y Z₁₂*Z₁₃*.
        let w2_adj = w2.adjoint();
        let lhs = conj(&[(&w2_adj, &[1, 2]), (&mx, &[0, 2]), (w2, &[1, 2])], &dims2, &cols2);
        let rhs = conj(
            &[
                (z, &[0, 2]),
                (z, &[0, 1]),
                (&w2_adj, &[1, 2]),
                (x, &[0, 2]),
                (w2, &[1, 2]),
                (&z_adj, &[0, 1]),
                (&z_adj, &[0, 2]),
            ],
            &dims2,
            &cols2,
        );
        second_leg = second_leg.max(max_abs(&(lhs - rhs)));
    }
    if first_leg > tol {
        return Err(DoubleError::MatchingViolation { identity: MatchingIdentity::FirstLeg, residual: first_leg });
    }
    if second_leg > tol {
        return Err(DoubleError::MatchingViolation { identity: MatchingIdentity::SecondLeg, residual: second_leg });
    }
    Ok((MatchingReport { unitarity, invariance, first_leg, second_leg }, map))
}

/// Basis tags `U^α_ij ⋈ x^β_kl` of a Drinfeld double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DoubleTag {
    pub alpha: usize,
    pub i: usize,
    pub j: usize,
    pub beta: usize,
    pub k: usize,
    pub l: usize,
}

#[derive(Debug, Clone)]
pub struct DoubleTags {
    /// Corepresentation table of the compact factor.
    pub bridge: EngineBridge,
    pub entries: Vec<DoubleTag>,
    /// Column `t` is the tagged element `entries[t]` in the basis of the double.
    pub basis: CMat,
    pub inverse: CMat,
}

/// `G_m` with its Kac–Takesaki operator and the data needed by the embedding lemmas.
#[derive(Debug, Clone)]
pub struct DoubleCrossed {
    pub first: QuantumGroup,
    /// `G₁^op`, same algebra and GNS space as `G₁`.
    pub first_opposite: QuantumGroup,
    pub second: QuantumGroup,
    /// The matching as given; any unitary implementing `m`.
    pub matching: Matching,
    pub matching_report: MatchingReport,
    /// `m` on coefficient vectors of `A₁⊗A₂`, basis `e_i⊗f_j` at `i * n₂ + j`.
    pub matching_map: CMat,
    /// `(Ĵ₁J₁⊗Ĵ₂J₂)JĴ`, the implementing unitary that enters `W_m`.
    pub canonical_z: CMat,
    /// How far `canonical_z` is from implementing `m`.
    pub canonical_residual: f64,
    pub data: HopfData,
    pub validation: ValidationReport,
    pub haar: HaarData,
    pub right_regular: CMat,
    pub right_regular_residual: f64,
    /// `W_m = (ΣV₁*Σ)₁₃ Z₃₄* W₂,₂₄ Z₃₄` with `Z = canonical_z`.
    pub w: UnitaryTensor,
    /// `‖W_m − W‖` against the Kac–Takesaki operator assembled from `Δ_m` and the Haar state.
    pub kac_takesaki_residual: f64,
    /// `Δ_m(x) = W_m*(1⊗x)W_m` on the basis.
    pub coproduct_residual: f64,
    /// Agreement of the assembled GNS space with `H₁⊗H₂`.
    pub gns_residual: f64,
    /// `π(e_i)⊗π(f_j)`.
    pub operators: Vec<CMat>,
    /// `x̂_k` with `W_m = Σ_k π_m(e_k) ⊗ x̂_k`.
    pub dual_operators: Vec<CMat>,
    dual_pinv: CMat,
    /// Full engine on the double, for small dimensions.
    pub engine: Option<QuantumGroup>,
    pub tags: Option<DoubleTags>,
}

/// Assembles `G_m` from its factors and a matching.
///
/// `Δ_m` comes from the matching map alone. Counit and antipode are read off the Kac–Takesaki
/// operator of `(A₁⊗A₂, Δ_m)`, which is then compared with the closed formula for `W_m`.
pub fn build_double_crossed(
    first: QuantumGroup,
    second: QuantumGroup,
    matching: Matching,
) -> Result<DoubleCrossed, DoubleError> {
    let (report, matching_map) = check_matching(&first, &second, &matching)?;
    let first_opposite = QuantumGroup::new(first.data.opposite_coproduct())?;
    let (n1, n2) = (first.dim(), second.dim());
    let n = n1 * n2;
    let tol = first.data.tolerance.value().max(second.data.tolerance.value());
    let check_tol = tol.max(1e-9);

    let mut data = first.data.tensor_with(&second.data);
    data.comult = matched_coproduct(&first.data, &second.data, &matching_map);
    data.basis = (0..n).map(|k| format!("{}⋈{}", first.data.basis[k / n2], second.data.basis[k % n2])).collect();
    let haar = haar_state(&data)?;
    let gns_residual = max_abs(&(&haar.gns_map - first.haar.gns_map.kronecker(&second.haar.gns_map)));
    if gns_residual > check_tol {
        return Err(HopfError::Decomposition(format!("GNS space of the double is not H₁⊗H₂ ({gns_residual:.2e})")).into());
    }
    let assembled = multiplicative_unitary(&data, &haar)?;

    let operators: Vec<CMat> = (0..n).map(|k| first.operators[k / n2].kronecker(&second.operators[k % n2])).collect();
    let (dual_operators, span) = expand_first_leg(&assembled.matrix, &operators, n, n);
    if span > check_tol {
        return Err(HopfError::SpanNotClosed { residual: span }.into());
    }
    let dual_pinv = pseudo_inverse(&CMat::from_columns(&dual_operators.iter().map(vec_row_major).collect::<Vec<_>>()));
    let expand = |op: &CMat| -> CVec { &dual_pinv * vec_row_major(op) };
    // (ε⊗id)W = 1 and S((id⊗ω)W) = (id⊗ω)W*.
    data.counit = expand(&CMat::identity(n, n));
    let mut antipode = CMat::zeros(n, n);
    for (k, x) in dual_operators.iter().enumerate() {
        let d = expand(&x.adjoint());
        let star_k = data.star.column(k).into_owned();
        for j in 0..n {
            if d[j] != ZERO {
                let mut col = antipode.column(j).into_owned();
                col += &star_k * d[j];
                antipode.set_column(j, &col);
            }
        }
    }
    data.antipode = antipode;
    let validation = validate_hopf(&data)?.into_result()?;

    let j_double = haar
        .modular_conjugation
        .as_ref()
        .ok_or(HopfError::NotFaithful { min_eigenvalue: haar.min_gram_eigenvalue })?;
    let j_hat_double = dual_conjugation_matrix(&dual_operators, &integral_vector(&data, &haar)?)?;
    let canonical_z = conjugation_product(&first)?.kronecker(&conjugation_product(&second)?)
        * j_double
        * j_hat_double.map(|z| z.conj());
    let canonical_residual = operators
        .iter()
        .map(|x| max_abs(&(&canonical_z * x * canonical_z.adjoint() - matching.apply(x))))
        .fold(0.0, f64::max);
    if canonical_residual > check_tol {
        return Err(DoubleError::MatchingViolation { identity: MatchingIdentity::Invariance, residual: canonical_residual });
    }

    let (v1, right_regular_residual) = right_regular(&first)?;
    if right_regular_residual > check_tol {
        return Err(HopfError::NotUnitary { residual: right_regular_residual }.into());
    }
    let w_m = kac_takesaki_of_double(&v1, &canonical_z, &second.w.matrix, n1, n2);
    let w = UnitaryTensor::checked(w_m, Flavor::WM, n, check_tol).map_err(|e| match e {
        HopfError::PentagonFailure { residual } => DoubleError::PentagonFailure { residual },
        other => other.into(),
    })?;
    let kac_takesaki_residual = max_abs(&(&w.matrix - &assembled.matrix));
    if kac_takesaki_residual > check_tol {
        return Err(DoubleError::PentagonFailure { residual: kac_takesaki_residual });
    }

    let cols = check_columns(n * n);
    let mut coproduct_residual: f64 = 0.0;
    let w_cols = &w.matrix * &cols;
    for (k, x) in operators.iter().enumerate() {
        let lhs = apply_on_legs(x, &[n, n], &[1], &w_cols);
        let delta = data.coproduct(&data.basis_element(k));
        let rhs = &w.matrix * apply_tensor_sum(&operators, &operators, &delta, &cols);
        coproduct_residual = coproduct_residual.max(max_abs(&(lhs - rhs)));
    }
    if coproduct_residual > check_tol {
        return Err(HopfError::AxiomViolation { axiom: Axiom::Coassociativity, residual: coproduct_residual }.into());
    }

    let engine = if n <= ENGINE_DIM_LIMIT { Some(QuantumGroup::new(data.clone())?) } else { None };

    Ok(DoubleCrossed {
        first,
        first_opposite,
        second,
        matching,
        matching_report: report,
        matching_map,
        canonical_z,
        canonical_residual,
        data,
        validation,
        haar,
        right_regular: v1,
        right_regular_residual,
        w,
        kac_takesaki_residual,
        coproduct_residual,
        gns_residual,
        operators,
        dual_operators,
        dual_pinv,
        engine,
        tags: None,
    })
}

/// `(ΣV₁*Σ)₁₃ Z₃₄* W₂,₂₄ Z₃₄` on `H₁⊗H₂⊗H₁⊗H₂`.
fn kac_takesaki_of_double(v1: &CMat, z: &CMat, w2: &CMat, n1: usize, n2: usize) -> CMat {
    let dims = [n1, n2, n1, n2];
    let s = flip(n1, n1);
    let v_flipped = &s * v1.adjoint() * &s;
    let total = n1 * n2 * n1 * n2;
    let mut m = apply_on_legs(z, &dims, &[2, 3], &CMat::identity(total, total));
    m = apply_on_legs(w2, &dims, &[1, 3], &m);
    m = apply_on_legs(&z.adjoint(), &dims, &[2, 3], &m);
    apply_on_legs(&v_flipped, &dims, &[0, 2], &m)
}

/// `Δ_m = (id⊗χm⊗id)(Δ₁^op⊗Δ₂)` as structure constants.
fn matched_coproduct(first: &HopfData, second: &HopfData, m: &CMat) -> Tensor3 {
    let (n1, n2) = (first.dim(), second.dim());
    let n = n1 * n2;
    let mut out = Tensor3::zeros(n);
    let c1 = first.comult.sparse_leading();
    let c2 = second.comult.sparse_leading();
    let sparse_m: Vec<Vec<(usize, C64)>> = (0..n)
        .map(|col| (0..n).filter(|&row| m[(row, col)] != ZERO).map(|row| (row, m[(row, col)])).collect())
        .collect();
    for i in 0..n1 {
        for j in 0..n2 {
            // Δ₁^op(e_i) = Σ c e_a ⊗ e_b with (b, a) read from Δ₁.
            for &(b, a, x) in &c1[i] {
                for &(c, d, y) in &c2[j] {
                    for &(bc, mv) in &sparse_m[b * n2 + c] {
                        let (b2, c2i) = (bc / n2, bc % n2);
                        out.add(i * n2 + j, a * n2 + c2i, b2 * n2 + d, x * y * mv);
                    }
                }
            }
        }
    }
    out
}

/// Drinfeld double of the compact quantum group with Hopf algebra `data`.
///
/// Factors are `G₁ = (A, Δ^op)` and `G₂ = Ĝ`, matched by the Kac–Takesaki operator of
/// `A` transported to `H_A⊗H_Â`. The basis is tagged by matrix coefficients of `A` and
/// matrix units of `Â`.
pub fn drinfeld_double(data: HopfData, seed: u64) -> Result<DoubleCrossed, DoubleError> {
    let group = QuantumGroup::new(data.clone())?;
    let second = group.dual_group()?;
    let f = fourier_transport(&group, &second)?;
    let n = group.dim();
    let id = CMat::identity(n, n);
    let z = id.kronecker(&f.adjoint()) * &group.w.matrix * id.kronecker(&f);
    let first = QuantumGroup::new(data.opposite_coproduct())?;
    let mut double = build_double_crossed(first, second, Matching::new(z, n, n)?)?;

    let bridge = EngineBridge::new(group, seed)?;
    let mut entries = Vec::new();
    let mut columns = Vec::new();
    let dual_blocks = &bridge.dual_blocks.decomposition.blocks;
    for (alpha, &d) in bridge.table.dims.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let u = bridge.coefficient(alpha, i, j).clone();
                for (beta, block) in dual_blocks.iter().enumerate() {
                    for k in 0..block.size {
                        for l in 0..block.size {
                            let x = bridge.group.dual.expand(block.unit(k, l)).0;
                            entries.push(DoubleTag { alpha, i, j, beta, k, l });
                            columns.push(u.kronecker(&x));
                        }
                    }
                }
            }
        }
    }
    let basis = CMat::from_columns(&columns);
    let inverse = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| HopfError::Decomposition("tagged elements are not a basis of the double".into()))?;
    double.tags = Some(DoubleTags { bridge, entries, basis, inverse });
    Ok(double)
}

/// `γ₁(y) = y⊗1` and `γ₂(x̂) = Z*(1⊗x̂)Z` with their checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingCheck {
    /// Distance of the image from `L∞(Ĝ_m)`.
    pub membership: f64,
    /// `γ(xy) − γ(x)γ(y)` and `γ(x*) − γ(x)*` on the basis.
    pub homomorphism: f64,
    /// Dimension lost by the embedding; zero for an injective map.
    pub kernel_dimension: usize,
    /// `Δ̂_m∘γ − (γ⊗γ)∘Δ̂`.
    pub intertwining: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaReport {
    pub first: EmbeddingCheck,
    pub second: EmbeddingCheck,
}

impl DoubleCrossed {
    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    /// Coefficients of an operator on `H₁⊗H₂` in the `x̂_k`, with the fit residual.
    pub fn expand_dual(&self, op: &CMat) -> (CVec, f64) {
        let coeffs = &self.dual_pinv * vec_row_major(op);
        let mut back = CMat::zeros(op.nrows(), op.ncols());
        for (k, x) in self.dual_operators.iter().enumerate() {
            back += x * coeffs[k];
        }
        (coeffs, max_abs(&(back - op)))
    }

    /// `γ₁(y) = y⊗1` for `y` on `H₁`.
    pub fn gamma_first(&self, y: &CMat) -> CMat {
        let n2 = self.second.dim();
        y.kronecker(&CMat::identity(n2, n2))
    }

    /// `γ₂(x̂) = Z*(1⊗x̂)Z` for `x̂` on `H₂`, with `Z` an implementing unitary of the matching.
    pub fn gamma_second(&self, z: &CMat, x: &CMat) -> CMat {
        let n1 = self.first.dim();
        z.adjoint() * CMat::identity(n1, n1).kronecker(x) * z
    }

    /// `Θ` on `L∞(G_m)` with `(1⊗a)W_m = (Θ⊗id)W_m`, in the basis of the double, and the residual.
    pub fn left_multiplier(&self, a: &CMat) -> (CMat, f64) {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for (i, x) in self.dual_operators.iter().enumerate() {
            m.set_column(i, &self.expand_dual(&(a * x)).0);
        }
        let theta = m.transpose();
        let cols = check_columns(n * n);
        let lhs = apply_on_legs(a, &[n, n], &[1], &(&self.w.matrix * &cols));
        let mut rhs = CMat::zeros(n * n, cols.ncols());
        for (k, x) in self.dual_operators.iter().enumerate() {
            let mut first = CMat::zeros(n, n);
            for (l, op) in self.operators.iter().enumerate() {
                if theta[(l, k)] != ZERO {
                    first += op * theta[(l, k)];
                }
            }
            rhs += apply_on_legs(&first, &[n, n], &[0], &apply_on_legs(x, &[n, n], &[1], &cols));
        }
        (theta, max_abs(&(lhs - rhs)))
    }

    /// `Ŵ_m = ΣW_m*Σ` applied to columns.
    fn w_hat_apply(&self, cols: &CMat, adjoint: bool) -> CMat {
        let n = self.dim();
        let s = flip(n, n);
        if adjoint {
            &s * (&self.w.matrix * (&s * cols))
        } else {
            &s * (self.w.matrix.adjoint() * (&s * cols))
        }
    }
}

fn embedding_check(
    double: &DoubleCrossed,
    sources: &[CMat],
    image: &dyn Fn(&CMat) -> CMat,
    intertwining: &dyn Fn(&CMat, &CMat) -> f64,
) -> EmbeddingCheck {
    let images: Vec<CMat> = sources.iter().map(image).collect();
    let membership = images.iter().map(|y| double.expand_dual(y).1).fold(0.0, f64::max);
    let mut homomorphism: f64 = 0.0;
    for (a, x) in sources.iter().enumerate() {
        homomorphism = homomorphism.max(max_abs(&(image(&x.adjoint()) - images[a].adjoint())));
        for (b, y) in sources.iter().enumerate() {
            homomorphism = homomorphism.max(max_abs(&(image(&(x * y)) - &images[a] * &images[b])));
        }
    }
    let stacked = CMat::from_columns(&images.iter().map(vec_row_major).collect::<Vec<_>>());
    let kernel_dimension = nullspace(&stacked, 1e-9).ncols();
    let intertwining = sources.iter().zip(&images).map(|(x, y)| intertwining(x, y)).fold(0.0, f64::max);
    EmbeddingCheck { membership, homomorphism, kernel_dimension, intertwining }
}

/// Verifies `γ₁: L∞(Ĝ₁^op) → L∞(Ĝ_m)` and `γ₂: L∞(Ĝ₂) → L∞(Ĝ_m)`, with `z` used in `γ₂`.
///
/// Pass `double.canonical_z`; other implementers of the same matching generally fail the
/// intertwining check. `L∞(Ĝ₁^op)` is the commutant `L∞(Ĝ₁)'`, realized by the dual operators
/// of `G₁^op`. Both coproducts are implemented by the respective `Ŵ`.
pub fn gamma_embeddings_check(double: &DoubleCrossed, z: &CMat) -> Result<GammaReport, DoubleError> {
    let (n1, n2) = (double.first.dim(), double.second.dim());
    let n = n1 * n2;
    let dims = [n1, n2, n1, n2];
    let cols = check_columns(n * n);
    let w_hat_cols = double.w_hat_apply(&cols, false);
    // Δ̂_m(γ(y)) applied to the columns.
    let delta_m = |g: &CMat| -> CMat { double.w_hat_apply(&apply_on_legs(g, &[n, n], &[1], &w_hat_cols), true) };

    let first_hat = double.first_opposite.w.dual();
    let first = embedding_check(
        double,
        &double.first_opposite.dual.operators,
        &|y| double.gamma_first(y),
        &|y, g| {
            let delta = first_hat.adjoint() * CMat::identity(n1, n1).kronecker(y) * &first_hat;
            max_abs(&(delta_m(g) - apply_on_legs(&delta, &dims, &[0, 2], &cols)))
        },
    );

    let second_hat = double.second.w.dual();
    let z_adj = z.adjoint();
    let second = embedding_check(
        double,
        &double.second.dual.operators,
        &|x| double.gamma_second(z, x),
        &|x, g| {
            let delta = second_hat.adjoint() * CMat::identity(n2, n2).kronecker(x) * &second_hat;
            let mut rhs = apply_on_legs(z, &dims, &[0, 1], &apply_on_legs(z, &dims, &[2, 3], &cols));
            rhs = apply_on_legs(&delta, &dims, &[1, 3], &rhs);
            rhs = apply_on_legs(&z_adj, &dims, &[0, 1], &apply_on_legs(&z_adj, &dims, &[2, 3], &rhs));
            max_abs(&(delta_m(g) - rhs))
        },
    );

    let tol = double.data.tolerance.value().max(1e-9);
    for (embedding, check) in [(Embedding::First, &first), (Embedding::Second, &second)] {
        let residual = check.membership.max(check.homomorphism).max(check.intertwining);
        if residual > tol || check.kernel_dimension > 0 {
            return Err(DoubleError::IntertwiningFailure { embedding, residual });
        }
    }
    Ok(GammaReport { first, second })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierFactorization {
    /// `λ_m(ω₁⊗ω₂) = (ω₁⊗ω₂⊗id)W_m`.
    pub direct: CMat,
    /// `γ₁(λ₁^op(ω₁))`.
    pub left: CMat,
    /// `γ₂(λ₂(ω₂))`.
    pub right: CMat,
    /// `left * right`.
    pub factored: CMat,
    pub residual: f64,
}

fn check_functional(omega: &CVec, expected: usize) -> Result<(), DoubleError> {
    if omega.len() != expected {
        return Err(DoubleError::FunctionalLength { expected, found: omega.len() });
    }
    Ok(())
}

/// `λ(ω) = Σ_k ω(e_k) x̂_k`.
fn lambda(dual_operators: &[CMat], omega: &CVec) -> CMat {
    let d = dual_operators[0].nrows();
    let mut out = CMat::zeros(d, d);
    for (k, x) in dual_operators.iter().enumerate() {
        if omega[k] != ZERO {
            out += x * omega[k];
        }
    }
    out
}

/// Functionals are coefficient vectors `ω(e_k)` on the bases of `A₁` and `A₂`.
pub fn fourier_factorization(double: &DoubleCrossed, omega1: &CVec, omega2: &CVec) -> Result<FourierFactorization, DoubleError> {
    let (n1, n2) = (double.first.dim(), double.second.dim());
    check_functional(omega1, n1)?;
    check_functional(omega2, n2)?;
    let joint = CVec::from_fn(n1 * n2, |k, _| omega1[k / n2] * omega2[k % n2]);
    let direct = lambda(&double.dual_operators, &joint);
    let left = double.gamma_first(&lambda(&double.first_opposite.dual.operators, omega1));
    let right = double.gamma_second(&double.canonical_z, &lambda(&double.second.dual.operators, omega2));
    let factored = &left * &right;
    let residual = max_abs(&(&direct - &factored));
    Ok(FourierFactorization { direct, left, right, factored, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierFormulas {
    /// `Θ^l(γ(λ(ω)))` from `W_m`.
    pub engine: CMat,
    /// Side 1: `Θ^l(λ₁^op(ω))⊗id`. Side 2: `m⁻¹(id⊗Θ^l(λ₂(ω)))m`.
    pub closed: CMat,
    /// Residual of the defining relation for the engine route.
    pub engine_residual: f64,
    pub residual: f64,
}

/// Both routes to the multiplier of the double induced by a multiplier of one factor.
pub fn double_multiplier_formulas(double: &DoubleCrossed, omega: &CVec, side: Side) -> Result<MultiplierFormulas, DoubleError> {
    let (n1, n2) = (double.first.dim(), double.second.dim());
    let (a, closed) = match side {
        Side::First => {
            check_functional(omega, n1)?;
            let (theta, _) = double.first_opposite.left_multiplier(omega);
            let a = double.gamma_first(&lambda(&double.first_opposite.dual.operators, omega));
            (a, theta.kronecker(&CMat::identity(n2, n2)))
        }
        Side::Second => {
            check_functional(omega, n2)?;
            let (theta, _) = double.second.left_multiplier(omega);
            let a = double.gamma_second(&double.canonical_z, &lambda(&double.second.dual.operators, omega));
            let m = &double.matching_map;
            let m_inv = m.clone().try_inverse().ok_or_else(|| HopfError::Decomposition("matching map is singular".into()))?;
            (a, m_inv * CMat::identity(n1, n1).kronecker(&theta) * m)
        }
    };
    let (engine, engine_residual) = double.left_multiplier(&a);
    let residual = max_abs(&(&engine - &closed));
    Ok(MultiplierFormulas { engine, closed, engine_residual, residual })
}
