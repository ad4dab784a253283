//! Exact CB norms through the semidefinite program for the diamond norm of the predual.
//!
//! For `Φ: ⊕M_{n_i} → ⊕M_{m_j}` the predual has a Choi matrix that splits into
//! pieces `J_ij` on `ℂ^{n_i} ⊗ ℂ^{m_j}`. Averaging over the phase group of the
//! block decomposition leaves the Watrous dual program invariant, so its variables
//! may be taken block diagonal:
//!
//! minimize ½(λ₀ + λ₁) subject to `[[Y0_ij, −J_ij], [−J_ij*, Y1_ij]] ⪰ 0` and
//! `λ_s·1 − Σ_i Tr_{n_i}(Ys_ij) ⪰ 0` for every codomain block `j`.

use nalgebra::{DMatrix, DVector};
use qg_sdp::{solve, Constraint, SdpProblem, SolverOptions};
use serde::Serialize;

use crate::linalg::{max_abs, CMat, I, ONE};

use super::{BlockMap, CbError};

#[derive(Debug, Clone, Copy)]
pub struct CbOptions {
    /// Largest admitted algebra dimension on either side.
    pub cap: usize,
    pub solver: SolverOptions,
    /// Tolerance of the Choi-matrix positivity test.
    pub cp_tolerance: f64,
    /// Largest accepted duality gap.
    pub max_gap: f64,
}

impl Default for CbOptions {
    fn default() -> Self {
        CbOptions { cap: 64, solver: SolverOptions::default(), cp_tolerance: 1e-9, max_gap: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Sdp,
    /// `‖Φ‖_cb = ‖Φ(1)‖` for completely positive maps.
    CompletelyPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CbCertificate {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CbNorm {
    pub value: f64,
    /// Value of the semidefinite program, also reported for completely positive maps.
    pub sdp_value: f64,
    pub method: Method,
    pub certificate: CbCertificate,
}

/// Real symmetric embedding `[[Re H, −Im H], [Im H, Re H]]`.
fn embed(h: &CMat) -> DMatrix<f64> {
    let d = h.nrows();
    DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let z = h[(r % d, c % d)];
        match (r < d, c < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// A real basis of the `d×d` Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    for p in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(p, p)] = ONE;
        out.push(m);
    }
    for p in 0..d {
        for q in p + 1..d {
            let mut sym = CMat::zeros(d, d);
            sym[(p, q)] = ONE;
            sym[(q, p)] = ONE;
            out.push(sym);
            let mut anti = CMat::zeros(d, d);
            anti[(p, q)] = I;
            anti[(q, p)] = -I;
            out.push(anti);
        }
    }
    out
}

/// `Σ_q M[(q,a),(q,b)]` for `M` on `ℂ^n ⊗ ℂ^m`.
fn trace_first(m_op: &CMat, n: usize, m: usize) -> CMat {
    CMat::from_fn(m, m, |a, b| (0..n).map(|q| m_op[(q * m + a, q * m + b)]).sum())
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .iter()
        .map(|s| {
            let o = acc;
            acc += s * s;
            o
        })
        .collect()
}

/// Choi piece `J_ij[(q,a),(p,b)] = Φ(E^i_pq)^j_ba` of the predual.
fn choi_piece(phi: &BlockMap, i: usize, j: usize) -> CMat {
    let (n, m) = (phi.domain[i], phi.codomain[j]);
    let (oi, oj) = (offsets(&phi.domain)[i], offsets(&phi.codomain)[j]);
    let mut out = CMat::zeros(n * m, n * m);
    for q in 0..n {
        for a in 0..m {
            for p in 0..n {
                for b in 0..m {
                    out[(q * m + a, p * m + b)] = phi.action[(oj + b * m + a, oi + p * n + q)];
                }
            }
        }
    }
    out
}

fn build_problem(phi: &BlockMap, scale: f64) -> SdpProblem {
    let (nd, nc) = (phi.domain.len(), phi.codomain.len());
    let mut block_sizes = Vec::new();
    let mut objective = Vec::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();

    // Norm blocks come after the pair blocks; their indices are known up front.
    let pair_count = nd * nc;
    let norm_block = |side: usize, j: usize| pair_count + side * nc + j;
    let mut lambda_terms: [Vec<(usize, DMatrix<f64>)>; 2] = [Vec::new(), Vec::new()];

    for i in 0..nd {
        for j in 0..nc {
            let (n, m) = (phi.domain[i], phi.codomain[j]);
            let d = n * m;
            let block = block_sizes.len();
            let j_piece = choi_piece(phi, i, j) / crate::linalg::r(scale);
            let mut c = CMat::zeros(2 * d, 2 * d);
            c.view_mut((0, d), (d, d)).copy_from(&(-&j_piece));
            c.view_mut((d, 0), (d, d)).copy_from(&(-j_piece.adjoint()));
            block_sizes.push(4 * d);
            objective.push(embed(&c));
            for side in 0..2 {
                for h in hermitian_basis(d) {
                    let mut a = CMat::zeros(2 * d, 2 * d);
                    a.view_mut((side * d, side * d), (d, d)).copy_from(&(-&h));
                    constraints.push(Constraint {
                        blocks: vec![(block, embed(&a)), (norm_block(side, j), embed(&trace_first(&h, n, m)))],
                    });
                    rhs.push(0.0);
                }
            }
        }
    }
    for side in 0..2 {
        for j in 0..nc {
            let m = phi.codomain[j];
            block_sizes.push(2 * m);
            objective.push(DMatrix::zeros(2 * m, 2 * m));
            lambda_terms[side].push((norm_block(side, j), -embed(&CMat::identity(m, m))));
        }
    }
    for terms in lambda_terms {
        constraints.push(Constraint { blocks: terms });
        rhs.push(-0.5);
    }
    SdpProblem { block_sizes, objective, constraints, rhs: DVector::from_vec(rhs) }
}

/// `‖Φ‖_cb` with a duality certificate.
pub fn cb_norm_exact(phi: &BlockMap, options: &CbOptions) -> Result<CbNorm, CbError> {
    let dimension = phi.domain_dim().max(phi.codomain_dim());
    if dimension > options.cap {
        return Err(CbError::CapExceeded { dimension, cap: options.cap });
    }
    let scale = max_abs(&phi.action);
    if scale == 0.0 {
        let certificate = CbCertificate { primal: 0.0, dual: 0.0, gap: 0.0, iterations: 0 };
        return Ok(CbNorm { value: 0.0, sdp_value: 0.0, method: Method::Sdp, certificate });
    }
    let problem = build_problem(phi, scale);
    let solution = solve(&problem, &options.solver).map_err(|e| CbError::SolverDiverged(e.to_string()))?;
    let primal = -solution.primal_objective * scale;
    let dual = -solution.dual_objective * scale;
    let gap = (primal - dual).abs();
    if gap > options.max_gap {
        return Err(CbError::SolverDiverged(format!("duality gap {gap:.3e}")));
    }
    let certificate = CbCertificate { primal, dual, gap, iterations: solution.iterations };
    let sdp_value = 0.5 * (primal + dual);
    if phi.is_completely_positive(options.cp_tolerance) {
        let value = phi.norm_of_unit_image();
        if (value - sdp_value).abs() > options.max_gap.max(1e-6 * value) {
            return Err(CbError::InconsistentBounds(format!(
                "completely positive map: ‖Φ(1)‖ = {value}, SDP = {sdp_value}"
            )));
        }
        return Ok(CbNorm { value, sdp_value, method: Method::CompletelyPositive, certificate });
    }
    Ok(CbNorm { value: sdp_value, sdp_value, method: Method::Sdp, certificate })
}
