//! Left/right/central classification of normal maps through their GNS implementation.

use serde::Serialize;

use crate::linalg::{max_abs, max_abs_vec, operator_norm, CMat, CVec};

use super::{HopfError, QuantumGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    LeftCentralizer,
    RightCentralizer,
    Central,
    None,
}

impl Classification {
    fn from_flags(left: bool, right: bool) -> Self {
        match (left, right) {
            (true, true) => Classification::Central,
            (true, false) => Classification::LeftCentralizer,
            (false, true) => Classification::RightCentralizer,
            (false, false) => Classification::None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub classification: Classification,
    /// `T` with `TΛ(x) = Λ(Φ†(x))`.
    pub implementation: CMat,
    /// Distance of `T` from the span of the dual operators.
    pub algebra_residual: f64,
    /// `max_i ‖[T, x̂_i]‖`.
    pub commutant_residual: f64,
    /// `max ‖Φ_*(ω⋆ν) − Φ_*(ω)⋆ν‖` over basis functionals.
    pub left_identity_residual: f64,
    /// `max ‖Φ_*(ω⋆ν) − ω⋆Φ_*(ν)‖` over basis functionals.
    pub right_identity_residual: f64,
}

/// Decision threshold for the membership and centralizer residuals, relative to `‖Φ‖`.
const DECISION: f64 = 1e-7;

/// `(ω⋆ν)(x) = (ω⊗ν)Δ(x)` for functionals given by their values on the basis.
fn convolve(group: &QuantumGroup, omega: &CVec, nu: &CVec) -> CVec {
    let n = group.dim();
    let comult = group.data.comult.sparse_leading();
    CVec::from_fn(n, |i, _| comult[i].iter().map(|&(j, k, v)| v * omega[j] * nu[k]).sum())
}

/// Classifies a linear map `Φ` on the algebra of `group`, given as a matrix in its basis.
///
/// The implementation lives on the GNS space of `group`; membership is tested against the
/// operators of the dual acting there and their commutant.
pub fn classify_l2_implementation(group: &QuantumGroup, phi: &CMat) -> Result<ClassificationReport, HopfError> {
    let n = group.dim();
    if phi.nrows() != n || phi.ncols() != n {
        return Err(HopfError::DimensionMismatch { field: "phi", expected: n, found: phi.nrows() });
    }
    let data = &group.data;
    let inv = group
        .haar
        .gns_inverse()
        .ok_or(HopfError::NotFaithful { min_eigenvalue: group.haar.min_gram_eigenvalue })?;
    // Φ†(x) = Φ(x*)*.
    let phi_dagger = &data.star * phi.map(|z| z.conj()) * data.star.map(|z| z.conj());
    let t = &group.haar.gns_map * phi_dagger * &inv;
    let scale = operator_norm(&t).max(max_abs(phi)).max(1.0);

    let (_, algebra_residual) = group.dual.expand(&t);
    let commutant_residual = group
        .dual
        .operators
        .iter()
        .map(|x| max_abs(&(&t * x - x * &t)))
        .fold(0.0, f64::max);

    let pushed = |f: &CVec| phi.transpose() * f;
    let mut left: f64 = 0.0;
    let mut right: f64 = 0.0;
    for j in 0..n {
        let omega = crate::linalg::basis_vector(n, j);
        for k in 0..n {
            let nu = crate::linalg::basis_vector(n, k);
            let lhs = pushed(&convolve(group, &omega, &nu));
            left = left.max(max_abs_vec(&(&lhs - convolve(group, &pushed(&omega), &nu))));
            right = right.max(max_abs_vec(&(&lhs - convolve(group, &omega, &pushed(&nu)))));
        }
    }

    let threshold = DECISION * scale;
    let by_membership = Classification::from_flags(algebra_residual <= threshold, commutant_residual <= threshold);
    let by_identities = Classification::from_flags(left <= threshold, right <= threshold);
    if by_membership != by_identities {
        return Err(HopfError::EquivalenceViolation {
            detail: format!(
                "membership gives {by_membership:?} (residuals {algebra_residual:.3e}, {commutant_residual:.3e}), \
                 centralizer identities give {by_identities:?} (residuals {left:.3e}, {right:.3e})"
            ),
        });
    }
    Ok(ClassificationReport {
        classification: by_membership,
        implementation: t,
        algebra_residual,
        commutant_residual,
        left_identity_residual: left,
        right_identity_residual: right,
    })
}
