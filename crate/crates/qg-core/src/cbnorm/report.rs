//! CB-norm diagnostics for multipliers given by coefficient tables.

use serde::Serialize;

use crate::corep::{EngineBridge, FinSupp, IrrTable};
use crate::linalg::{hermitian_eigen, CMat, ZERO};

use super::{cb_norm_exact, BlockMap, CbError, CbOptions, Method};

const ORDER_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportedBound {
    pub kind: BoundKind,
    pub value: f64,
    /// How the bound was obtained.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierCbReport {
    pub table: String,
    pub truncation: Vec<String>,
    /// The table is a window of an infinite one, so only bounds are available from it.
    pub truncated: bool,
    /// `‖a‖_∞ = max_α ‖a^α‖`.
    pub sup_norm: f64,
    pub bounds: Vec<ReportedBound>,
}

impl MultiplierCbReport {
    pub fn exact(&self) -> Option<f64> {
        self.bounds.iter().find(|b| b.kind == BoundKind::Exact).map(|b| b.value)
    }

    /// Largest lower bound, counting an exact value as one.
    pub fn best_lower(&self) -> f64 {
        self.bounds.iter().filter(|b| b.kind != BoundKind::Upper).map(|b| b.value).fold(self.sup_norm, f64::max)
    }

    /// Smallest upper bound, counting an exact value as one.
    pub fn best_upper(&self) -> Option<f64> {
        self.bounds.iter().filter(|b| b.kind != BoundKind::Lower).map(|b| b.value).reduce(f64::min)
    }
}

/// Positive definiteness of `x, y ↦ a(x̄ y)` on a table of one-dimensional labels with group-like fusion.
fn positive_definite_on_group(table: &IrrTable, a: &FinSupp) -> Option<bool> {
    if table.truncated || table.fusion.is_none() || table.dims.iter().any(|&d| d != 1) {
        return None;
    }
    let n = table.len();
    let mut m = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let product = table.fusion_of(table.conj[x], y);
            let [(g, 1)] = product.as_slice() else { return None };
            m[(x, y)] = a.blocks.get(g).map(|b| b[(0, 0)]).unwrap_or(ZERO);
        }
    }
    let herm = crate::linalg::max_abs(&(&m - m.adjoint()));
    let scale = crate::linalg::max_abs(&m).max(1.0);
    Some(herm <= 1e-9 * scale && hermitian_eigen(&m).0[0] >= -1e-9 * scale)
}

/// CB-norm report for `Θ^l(a)`.
///
/// With an engine the value is exact; from a table alone only `‖a‖_∞` (a lower bound),
/// the positive-definite collapse for group-like tables and a caller-supplied Fourier norm
/// (both upper bounds) are available.
pub fn multiplier_cb_report(
    table: &IrrTable,
    a: &FinSupp,
    truncation: &[usize],
    engine: Option<&EngineBridge>,
    fourier_norm: Option<f64>,
    options: &CbOptions,
) -> Result<MultiplierCbReport, CbError> {
    a.check(table)?;
    if let Some(&missing) = a.blocks.keys().find(|k| !truncation.contains(k)) {
        return Err(CbError::TruncationTooSmall { label: table.labels[missing].clone() });
    }
    let sup_norm = a.sup_norm();
    let mut bounds = vec![ReportedBound {
        kind: BoundKind::Lower,
        value: sup_norm,
        source: "sup norm of the coefficient blocks".into(),
    }];

    if let Some(bridge) = engine {
        if bridge.table.labels != table.labels || bridge.table.dims != table.dims {
            return Err(CbError::ShapeMismatch("engine table differs from the supplied table".into()));
        }
        let (theta, _) = bridge.theta_engine(a)?;
        let blocks = bridge.group.algebra_blocks(0)?;
        let sizes = blocks.sizes();
        let phi = BlockMap::new("theta", sizes.clone(), sizes, blocks.map_in_block_basis(&theta))?;
        let norm = cb_norm_exact(&phi, options)?;
        bounds.push(ReportedBound { kind: BoundKind::Exact, value: norm.value, source: "SDP on the engine algebra".into() });
        if norm.method == Method::CompletelyPositive {
            bounds.push(ReportedBound {
                kind: BoundKind::Upper,
                value: phi.norm_of_unit_image(),
                source: "completely positive: norm of the image of 1".into(),
            });
        }
    } else if positive_definite_on_group(table, a) == Some(true) {
        let unit = a.blocks.get(&table.trivial).map(|b| b[(0, 0)].re).unwrap_or(0.0);
        bounds.push(ReportedBound {
            kind: BoundKind::Upper,
            value: unit,
            source: "positive definite: completely positive collapse".into(),
        });
    }
    if let Some(value) = fourier_norm {
        bounds.push(ReportedBound { kind: BoundKind::Upper, value, source: "Fourier algebra norm".into() });
    }

    let report = MultiplierCbReport {
        table: table.name.clone(),
        truncation: truncation.iter().map(|&k| table.labels[k].clone()).collect(),
        truncated: table.truncated,
        sup_norm,
        bounds,
    };
    let lower = report.best_lower();
    if let Some(upper) = report.best_upper() {
        if lower > upper + ORDER_SLACK {
            return Err(CbError::InconsistentBounds(format!("lower bound {lower} exceeds upper bound {upper}")));
        }
    }
    if let Some(exact) = report.exact() {
        if sup_norm > exact + ORDER_SLACK {
            return Err(CbError::InconsistentBounds(format!("‖a‖_∞ = {sup_norm} exceeds ‖a‖_cb = {exact}")));
        }
    }
    Ok(report)
}
