//! Operations of the coefficient calculus.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg::{c, max_abs, CMat, C64, I, ONE, ZERO};

use super::{CorepError, FinSupp, IrrTable, PolElement};

/// Entries of `ρ` closer than this are treated as equal when projecting onto `τ`-fixed entries.
const RHO_EQUAL: f64 = 1e-12;
/// Unitarity tolerance for conjugation intertwiners used on non-central blocks.
const UNITARY_TOL: f64 = 1e-9;

/// One-parameter groups acting through `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    /// Scaling group `τ_t`.
    Tau,
    /// Modular group of the left Haar weight.
    SigmaPhi,
    /// Modular group of the right Haar weight.
    SigmaPsi,
}

fn is_scalar_block(m: &CMat) -> bool {
    let d = m.nrows();
    max_abs(&(m - CMat::identity(d, d) * m[(0, 0)])) == 0.0
}

/// `ρ^{iz}` for a positive diagonal entry and complex time.
fn rho_power(rho: f64, z: C64) -> C64 {
    (I * z * rho.ln()).exp()
}

fn diag_power(rho: &[f64], z: C64) -> CMat {
    CMat::from_diagonal(&crate::linalg::CVec::from_iterator(rho.len(), rho.iter().map(|&p| rho_power(p, z))))
}

/// `Θ^l(a)(x)`: the block at `α` becomes `(a^α)ᵀ c^α`.
pub fn theta_apply(table: &IrrTable, a: &FinSupp, x: &PolElement) -> Result<PolElement, CorepError> {
    a.check(table)?;
    x.check(table)?;
    let coeffs = x
        .coeffs
        .iter()
        .filter_map(|(k, cx)| a.blocks.get(k).map(|ak| (*k, ak.transpose() * cx)))
        .collect();
    Ok(PolElement { coeffs })
}

/// `T_α` when the block at `α` needs it, checked to be unitary.
fn unitary_intertwiner(table: &IrrTable, a: usize) -> Result<&CMat, CorepError> {
    let label = &table.labels[a];
    if table.rho[a].iter().any(|r| (r - 1.0).abs() > RHO_EQUAL) {
        return Err(CorepError::UnsupportedLabel {
            label: label.clone(),
            reason: "non-central blocks need ρ = 1".into(),
        });
    }
    let t = table.intertwiner(a)?;
    let d = t.nrows();
    if max_abs(&(t.adjoint() * t - CMat::identity(d, d))) > UNITARY_TOL {
        return Err(CorepError::UnsupportedLabel {
            label: label.clone(),
            reason: "conjugation intertwiner is not unitary".into(),
        });
    }
    Ok(t)
}

/// `T_α a^ᾱ T_α⁻¹`, placed at `α`, for every `ᾱ` in the support.
fn conjugated_blocks(table: &IrrTable, a: &FinSupp) -> Result<BTreeMap<usize, CMat>, CorepError> {
    a.check(table)?;
    let mut out = BTreeMap::new();
    for (&source, block) in &a.blocks {
        let target = table.conj[source];
        let moved = if is_scalar_block(block) {
            block.clone()
        } else {
            let t = unitary_intertwiner(table, target)?;
            t * block * t.adjoint()
        };
        out.insert(target, moved);
    }
    Ok(out)
}

/// `S⁻¹(a)`, which implements `Θ^l(a)` on the GNS space.
pub fn l2_implement(table: &IrrTable, a: &FinSupp) -> Result<FinSupp, CorepError> {
    let blocks = conjugated_blocks(table, a)?;
    Ok(FinSupp { blocks: blocks.into_iter().map(|(k, m)| (k, m.transpose())).collect() })
}

/// `a^♯ = S(a*)`, so that `Θ^l(a^♯) = Θ^l(a)†`.
pub fn multiplier_involution(table: &IrrTable, a: &FinSupp) -> Result<FinSupp, CorepError> {
    let blocks = conjugated_blocks(table, a)?;
    Ok(FinSupp { blocks: blocks.into_iter().map(|(k, m)| (k, m.map(|z| z.conj()))).collect() })
}

/// `x*`, using `(U^α_ij)* = (T_α U^ᾱ T_α⁻¹)_ij`.
pub fn star_pol(table: &IrrTable, x: &PolElement) -> Result<PolElement, CorepError> {
    x.check(table)?;
    let mut coeffs: BTreeMap<usize, CMat> = BTreeMap::new();
    for (&a, cx) in &x.coeffs {
        let target = table.conj[a];
        let conj = cx.map(|z| z.conj());
        let moved = if table.dims[a] == 1 {
            conj
        } else {
            let t = table.intertwiner(a)?;
            let t_inv = t.clone().try_inverse().expect("validated invertible");
            t.transpose() * conj * t_inv.transpose()
        };
        coeffs.entry(target).and_modify(|m| *m += &moved).or_insert(moved);
    }
    Ok(PolElement { coeffs })
}

/// The flow at complex time `z` on `Pol(Γ̂)`.
///
/// `Tau` multiplies `c^α_ij` by `ρ_i^{iz} ρ_j^{-iz}`. Both modular flows act as the
/// modular group of the Haar state there, `ρ_i^{iz} ρ_j^{iz}`.
pub fn flow_pol(table: &IrrTable, x: &PolElement, z: C64, flow: Flow) -> Result<PolElement, CorepError> {
    x.check(table)?;
    let coeffs = x
        .coeffs
        .iter()
        .map(|(&a, m)| {
            let left = diag_power(&table.rho[a], z);
            let right = match flow {
                Flow::Tau => diag_power(&table.rho[a], -z),
                Flow::SigmaPhi | Flow::SigmaPsi => left.clone(),
            };
            (a, &left * m * right)
        })
        .collect();
    Ok(PolElement { coeffs })
}

/// The flow at complex time `z` on `ℓ∞(Γ)`.
///
/// `Tau` and `SigmaPhi` act by `ρ^{-iz} a ρ^{iz}`, `SigmaPsi` by `ρ^{iz} a ρ^{-iz}`.
pub fn flow_finsupp(table: &IrrTable, a: &FinSupp, z: C64, flow: Flow) -> Result<FinSupp, CorepError> {
    a.check(table)?;
    let sign = match flow {
        Flow::Tau | Flow::SigmaPhi => ONE,
        Flow::SigmaPsi => -ONE,
    };
    let blocks = a
        .blocks
        .iter()
        .map(|(&k, m)| (k, diag_power(&table.rho[k], -sign * z) * m * diag_power(&table.rho[k], sign * z)))
        .collect();
    Ok(FinSupp { blocks })
}

/// Projects onto `τ`-fixed entries, symmetrizes under `♯` and normalizes the unit coefficient.
pub fn symmetrize_ap_net(table: &IrrTable, a: &FinSupp) -> Result<FinSupp, CorepError> {
    a.check(table)?;
    let fixed = FinSupp {
        blocks: a
            .blocks
            .iter()
            .map(|(&k, m)| {
                let rho = &table.rho[k];
                let kept = CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
                    if (rho[i] - rho[j]).abs() <= RHO_EQUAL * rho[i].max(rho[j]) {
                        m[(i, j)]
                    } else {
                        ZERO
                    }
                });
                (k, kept)
            })
            .collect(),
    };
    let sharp = multiplier_involution(table, &fixed)?;
    let sym = fixed.add(&sharp).scale(c(0.5, 0.0));
    let unit = sym.blocks.get(&table.trivial).map(|m| m[(0, 0)]).unwrap_or(ZERO);
    if unit.norm() <= 1e-12 {
        return Err(CorepError::DegenerateUnitCoefficient);
    }
    let mut out = sym.scale(ONE / unit.re);
    out.blocks.insert(table.trivial, CMat::identity(1, 1));
    Ok(out)
}

/// `Σ_α Tr(a^α)/dim(α) p_α`.
pub fn central_average(table: &IrrTable, a: &FinSupp) -> Result<FinSupp, CorepError> {
    a.check(table)?;
    let blocks = a
        .blocks
        .iter()
        .map(|(&k, m)| {
            let d = table.dims[k];
            (k, CMat::identity(d, d) * (m.trace() / c(d as f64, 0.0)))
        })
        .collect();
    Ok(FinSupp { blocks })
}

/// Checks that `sub` labels a full subcategory closed under conjugation and fusion.
fn check_subcategory(table: &IrrTable, sub: &BTreeSet<usize>) -> Result<(), CorepError> {
    if !sub.contains(&table.trivial) {
        return Err(CorepError::NotASubcategory("missing the trivial label".into()));
    }
    for &a in sub {
        if a >= table.len() {
            return Err(CorepError::NotASubcategory(format!("label index {a} out of range")));
        }
        if !sub.contains(&table.conj[a]) {
            return Err(CorepError::NotASubcategory(format!("conjugate of `{}` missing", table.labels[a])));
        }
    }
    if table.fusion.is_some() {
        for &a in sub {
            for &b in sub {
                if let Some((g, _)) = table.fusion_of(a, b).into_iter().find(|(g, _)| !sub.contains(g)) {
                    return Err(CorepError::NotASubcategory(format!(
                        "{} ⊗ {} contains `{}`",
                        table.labels[a], table.labels[b], table.labels[g]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The Haar-preserving conditional expectation onto the coefficients of `sub`.
pub fn subgroup_expectation(table: &IrrTable, sub: &[usize], x: &PolElement) -> Result<PolElement, CorepError> {
    x.check(table)?;
    let sub: BTreeSet<usize> = sub.iter().copied().collect();
    check_subcategory(table, &sub)?;
    let coeffs = x.coeffs.iter().filter(|(k, _)| sub.contains(k)).map(|(k, m)| (*k, m.clone())).collect();
    Ok(PolElement { coeffs })
}

fn require_one_dimensional(table: &IrrTable, labels: impl Iterator<Item = usize>) -> Result<(), CorepError> {
    for a in labels {
        if table.dims[a] != 1 {
            return Err(CorepError::UnsupportedLabel {
                label: table.labels[a].clone(),
                reason: "module action is implemented for one-dimensional labels".into(),
            });
        }
    }
    Ok(())
}

/// `a ⋆ ω = (ω ⊗ id)Δ(a)` for one-dimensional labels: `(a⋆ω)(β) = Σ_α ω(α) a(αβ)`.
pub fn module_action(table: &IrrTable, a: &FinSupp, omega: &FinSupp) -> Result<FinSupp, CorepError> {
    a.check(table)?;
    omega.check(table)?;
    if table.fusion.is_none() {
        return Err(CorepError::MissingFusionData);
    }
    require_one_dimensional(table, a.blocks.keys().chain(omega.blocks.keys()).copied())?;
    let mut blocks: BTreeMap<usize, CMat> = BTreeMap::new();
    for (&alpha, w) in &omega.blocks {
        for beta in 0..table.len() {
            for (gamma, mult) in table.fusion_of(alpha, beta) {
                if let Some(value) = a.blocks.get(&gamma) {
                    let term = value * w[(0, 0)] * c(f64::from(mult), 0.0);
                    blocks.entry(beta).and_modify(|m| *m += &term).or_insert(term);
                }
            }
        }
    }
    Ok(FinSupp { blocks })
}

/// `h(x)`, the coefficient at the trivial label.
pub fn haar_pair(table: &IrrTable, x: &PolElement) -> C64 {
    x.coeffs.get(&table.trivial).map(|m| m[(0, 0)]).unwrap_or(ZERO)
}

/// Gram matrix of `Λ_h(U^α_ij)` over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurGram {
    /// `(α, i, j)` for each row and column.
    pub index: Vec<(usize, usize, usize)>,
    pub matrix: CMat,
    /// Largest violation of `h(xy) = h(y σ_{-i}(x))` over coefficient pairs.
    pub kms_residual: f64,
}

/// `h(U^α_ij* U^β_kl) = δ δ ρ_{α,i}⁻¹ / dim_q(α)`.
fn h_star_left(table: &IrrTable, (a, i, j): (usize, usize, usize), (b, k, l): (usize, usize, usize)) -> f64 {
    if a == b && i == k && j == l {
        1.0 / (table.rho[a][i] * table.quantum_dim(a))
    } else {
        0.0
    }
}

/// `h(U^β_kl U^α_ij*) = δ δ ρ_{α,j} / dim_q(α)`.
fn h_star_right(table: &IrrTable, (a, i, j): (usize, usize, usize), (b, k, l): (usize, usize, usize)) -> f64 {
    if a == b && i == k && j == l {
        table.rho[a][j] / table.quantum_dim(a)
    } else {
        0.0
    }
}

/// Orthogonality relations of the matrix coefficients on `support`, checked against KMS.
pub fn schur_gram(table: &IrrTable, support: &[usize]) -> Result<SchurGram, CorepError> {
    let labels: BTreeSet<usize> = support.iter().copied().collect();
    if let Some(bad) = labels.iter().find(|&&a| a >= table.len()) {
        return Err(CorepError::ShapeMismatch(format!("label index {bad} out of range")));
    }
    let index: Vec<(usize, usize, usize)> = labels
        .iter()
        .flat_map(|&a| {
            let d = table.dims[a];
            (0..d).flat_map(move |i| (0..d).map(move |j| (a, i, j)))
        })
        .collect();
    let n = index.len();
    let matrix = CMat::from_fn(n, n, |r, s| c(h_star_left(table, index[r], index[s]), 0.0));
    // KMS with x = U^β_kl, y = U^α_ij*: h(x y) = h(y σ_{-i}(x)).
    let mut kms_residual: f64 = 0.0;
    for &p in &index {
        for &q in &index {
            let x = PolElement::coefficient(table, q.0, q.1, q.2);
            let flowed = flow_pol(table, &x, -I, Flow::SigmaPhi)?;
            let phase = flowed.coeffs[&q.0][(q.1, q.2)];
            let lhs = c(h_star_right(table, p, q), 0.0);
            let rhs = phase * h_star_left(table, p, q);
            kms_residual = kms_residual.max((lhs - rhs).norm());
        }
    }
    if kms_residual > 1e-10 {
        return Err(CorepError::KmsViolation { residual: kms_residual });
    }
    Ok(SchurGram { index, matrix, kms_residual })
}
