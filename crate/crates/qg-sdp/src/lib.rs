//! Dense primal-dual interior-point solver for real block-diagonal SDPs.
//!
//! Primal: minimize `<C, X>` subject to `<A_i, X> = b_i`, `X ⪰ 0`.
//! Dual: maximize `b·y` subject to `S = C - Σ y_i A_i ⪰ 0`.
//!
//! Infeasible-start Mehrotra predictor-corrector with the HKM search
//! direction. Every matrix is block diagonal with the same block sizes.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(
        "solver diverged after {iterations} iterations (gap {gap:.3e}, primal infeasibility {primal_infeasibility:.3e}, dual infeasibility {dual_infeasibility:.3e})"
    )]
    SolverDiverged {
        iterations: usize,
        gap: f64,
        primal_infeasibility: f64,
        dual_infeasibility: f64,
    },
}

/// One linear constraint, stored as its nonzero symmetric blocks.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub blocks: Vec<(usize, DMatrix<f64>)>,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_sizes: Vec<usize>,
    pub objective: Vec<DMatrix<f64>>,
    pub constraints: Vec<Constraint>,
    pub rhs: DVector<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Target relative duality gap for early termination.
    pub target_gap: f64,
    /// Target relative infeasibility for early termination.
    pub target_feasibility: f64,
    /// Absolute gap accepted when the target cannot be reached.
    pub accept_gap: f64,
    /// Absolute infeasibility accepted when the target cannot be reached.
    pub accept_feasibility: f64,
    pub step_fraction: f64,
    /// Iterations without improvement before declaring stagnation.
    pub stagnation_window: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 200,
            target_gap: 1e-10,
            target_feasibility: 1e-10,
            accept_gap: 1e-6,
            accept_feasibility: 1e-8,
            step_fraction: 0.95,
            stagnation_window: 30,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: Vec<DMatrix<f64>>,
    pub y: DVector<f64>,
    pub s: Vec<DMatrix<f64>>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|primal_objective - dual_objective|`.
    pub gap: f64,
    pub iterations: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

type Blocks = Vec<DMatrix<f64>>;

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn blocks_inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| inner(x, y)).sum()
}

fn blocks_norm(a: &Blocks) -> f64 {
    blocks_inner(a, a).sqrt()
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

impl SdpProblem {
    fn validate(&self) -> Result<(), SdpError> {
        if self.objective.len() != self.block_sizes.len() {
            return Err(SdpError::Shape(format!(
                "{} objective blocks for {} block sizes",
                self.objective.len(),
                self.block_sizes.len()
            )));
        }
        for (k, (c, &n)) in self.objective.iter().zip(&self.block_sizes).enumerate() {
            if c.nrows() != n || c.ncols() != n {
                return Err(SdpError::Shape(format!("objective block {k} is not {n}x{n}")));
            }
        }
        if self.constraints.len() != self.rhs.len() {
            return Err(SdpError::Shape(format!(
                "{} constraints but {} right-hand sides",
                self.constraints.len(),
                self.rhs.len()
            )));
        }
        for (i, con) in self.constraints.iter().enumerate() {
            for (k, m) in &con.blocks {
                let n = *self.block_sizes.get(*k).ok_or_else(|| {
                    SdpError::Shape(format!("constraint {i} references block {k}"))
                })?;
                if m.nrows() != n || m.ncols() != n {
                    return Err(SdpError::Shape(format!(
                        "constraint {i} block {k} is not {n}x{n}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, x: &Blocks) -> DVector<f64> {
        DVector::from_iterator(
            self.constraints.len(),
            self.constraints
                .iter()
                .map(|c| c.blocks.iter().map(|(k, m)| inner(m, &x[*k])).sum::<f64>()),
        )
    }

    fn adjoint(&self, y: &DVector<f64>) -> Blocks {
        let mut out: Blocks = self
            .block_sizes
            .iter()
            .map(|&n| DMatrix::zeros(n, n))
            .collect();
        for (c, &yi) in self.constraints.iter().zip(y.iter()) {
            for (k, m) in &c.blocks {
                out[*k] += m * yi;
            }
        }
        out
    }

    fn total_size(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Largest `alpha` with `x + alpha * dx ⪰ 0`, capped at 1e30.
fn max_step(x: &Blocks, dx: &Blocks) -> f64 {
    let mut alpha = 1e30_f64;
    for (xb, db) in x.iter().zip(dx) {
        if xb.nrows() == 0 {
            continue;
        }
        let lmin = match Cholesky::new(xb.clone()) {
            Some(ch) => {
                let l = ch.l();
                let linv = l.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(l.nrows(), l.ncols()));
                let m = symmetrize(&(&linv * db * linv.transpose()));
                SymmetricEigen::new(m).eigenvalues.min()
            }
            None => -1.0,
        };
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

fn inverse_blocks(s: &Blocks) -> Option<Blocks> {
    s.iter()
        .map(|b| {
            if b.nrows() == 0 {
                Some(b.clone())
            } else {
                Cholesky::new(b.clone()).map(|c| c.inverse())
            }
        })
        .collect()
}

struct Residuals {
    rp: DVector<f64>,
    rd: Blocks,
    primal: f64,
    dual: f64,
}

pub fn solve(problem: &SdpProblem, options: &SolverOptions) -> Result<SdpSolution, SdpError> {
    problem.validate()?;
    let m = problem.constraints.len();
    let n_total = problem.total_size().max(1) as f64;

    let c_norm = blocks_norm(&problem.objective);
    let b_norm = problem.rhs.norm();
    let a_norm = problem
        .constraints
        .iter()
        .map(|c| c.blocks.iter().map(|(_, m)| inner(m, m)).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let xi = 10.0 * (1.0 + b_norm / (1.0 + a_norm)).max(1.0);
    let eta = 10.0 * (1.0 + c_norm.max(a_norm)).max(1.0);

    let mut x: Blocks = problem
        .block_sizes
        .iter()
        .map(|&n| DMatrix::identity(n, n) * xi)
        .collect();
    let mut s: Blocks = problem
        .block_sizes
        .iter()
        .map(|&n| DMatrix::identity(n, n) * eta)
        .collect();
    let mut y = DVector::zeros(m);

    let residuals = |x: &Blocks, y: &DVector<f64>, s: &Blocks| -> Residuals {
        let rp = &problem.rhs - problem.apply(x);
        let aty = problem.adjoint(y);
        let rd: Blocks = problem
            .objective
            .iter()
            .zip(&aty)
            .zip(s)
            .map(|((c, a), sb)| c - a - sb)
            .collect();
        Residuals {
            rp,
            rd,
            primal: blocks_inner(&problem.objective, x),
            dual: problem.rhs.dot(y),
        }
    };

    let mut best_merit = f64::INFINITY;
    let mut since_best = 0usize;
    let mut iterations = 0usize;

    loop {
        let r = residuals(&x, &y, &s);
        let gap = (r.primal - r.dual).abs();
        let pinf = r.rp.norm();
        let dinf = blocks_norm(&r.rd);
        let scale = 1.0 + r.primal.abs().max(r.dual.abs());
        let converged = gap <= options.target_gap * scale
            && pinf <= options.target_feasibility * (1.0 + b_norm)
            && dinf <= options.target_feasibility * (1.0 + c_norm);

        let merit = gap.max(pinf).max(dinf);
        if merit < 0.9 * best_merit {
            best_merit = merit;
            since_best = 0;
        } else {
            since_best += 1;
        }
        let stalled = since_best >= options.stagnation_window;

        if converged || stalled || iterations >= options.max_iterations {
            let acceptable = gap <= options.accept_gap
                && pinf <= options.accept_feasibility
                && dinf <= options.accept_feasibility;
            if converged || acceptable {
                return Ok(SdpSolution {
                    x,
                    y,
                    s,
                    primal_objective: r.primal,
                    dual_objective: r.dual,
                    gap,
                    iterations,
                    primal_infeasibility: pinf,
                    dual_infeasibility: dinf,
                });
            }
            return Err(SdpError::SolverDiverged {
                iterations,
                gap,
                primal_infeasibility: pinf,
                dual_infeasibility: dinf,
            });
        }
        iterations += 1;

        let mu = blocks_inner(&x, &s) / n_total;
        let s_inv = match inverse_blocks(&s) {
            Some(v) => v,
            None => {
                return Err(SdpError::SolverDiverged {
                    iterations,
                    gap,
                    primal_infeasibility: pinf,
                    dual_infeasibility: dinf,
                })
            }
        };

        // Schur complement M_ij = <A_i, X A_j S^-1>.
        let mut schur = DMatrix::<f64>::zeros(m, m);
        let mut products: Vec<Vec<(usize, DMatrix<f64>)>> = Vec::with_capacity(m);
        for cj in &problem.constraints {
            products.push(
                cj.blocks
                    .iter()
                    .map(|(k, a)| (*k, &x[*k] * a * &s_inv[*k]))
                    .collect(),
            );
        }
        for (i, ci) in problem.constraints.iter().enumerate() {
            for (j, pj) in products.iter().enumerate().skip(i) {
                let mut v = 0.0;
                for (ki, ai) in &ci.blocks {
                    for (kj, p) in pj {
                        if ki == kj {
                            v += inner(ai, p);
                        }
                    }
                }
                schur[(i, j)] = v;
                schur[(j, i)] = v;
            }
        }
        let schur_factor = schur.clone().lu();

        let x_rd_sinv: Blocks = x
            .iter()
            .zip(&r.rd)
            .zip(&s_inv)
            .map(|((xb, rb), si)| xb * rb * si)
            .collect();

        let direction = |sigma_mu: f64, second_order: Option<&Blocks>| -> Option<(Blocks, DVector<f64>, Blocks)> {
            let g: Blocks = (0..x.len())
                .map(|k| {
                    let mut gk = &s_inv[k] * sigma_mu - &x[k] - &x_rd_sinv[k];
                    if let Some(so) = second_order {
                        gk -= &so[k];
                    }
                    gk
                })
                .collect();
            let rhs = &r.rp - problem.apply(&g);
            let dy = schur_factor.solve(&rhs)?;
            let aty = problem.adjoint(&dy);
            let ds: Blocks = r.rd.iter().zip(&aty).map(|(rb, a)| rb - a).collect();
            let dx: Blocks = (0..x.len())
                .map(|k| symmetrize(&(&g[k] + &x[k] * &aty[k] * &s_inv[k])))
                .collect();
            Some((dx, dy, ds))
        };

        let fail = || SdpError::SolverDiverged {
            iterations,
            gap,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
        };

        // Predictor.
        let (dx_p, _, ds_p) = direction(0.0, None).ok_or_else(fail)?;
        let ap = (options.step_fraction * max_step(&x, &dx_p)).min(1.0);
        let ad = (options.step_fraction * max_step(&s, &ds_p)).min(1.0);
        let x_trial: Blocks = x.iter().zip(&dx_p).map(|(a, d)| a + d * ap).collect();
        let s_trial: Blocks = s.iter().zip(&ds_p).map(|(a, d)| a + d * ad).collect();
        let ratio = blocks_inner(&x_trial, &s_trial) / blocks_inner(&x, &s);
        let sigma = ratio.clamp(0.0, 1.0).powi(3);

        // Corrector.
        let second: Blocks = dx_p
            .iter()
            .zip(&ds_p)
            .zip(&s_inv)
            .map(|((dxb, dsb), si)| dxb * dsb * si)
            .collect();
        let (dx, dy, ds) = direction(sigma * mu, Some(&second)).ok_or_else(fail)?;
        let ap = (options.step_fraction * max_step(&x, &dx)).min(1.0);
        let ad = (options.step_fraction * max_step(&s, &ds)).min(1.0);
        for k in 0..x.len() {
            x[k] = symmetrize(&(&x[k] + &dx[k] * ap));
            s[k] = symmetrize(&(&s[k] + &ds[k] * ad));
        }
        y += dy * ad;
    }
}
