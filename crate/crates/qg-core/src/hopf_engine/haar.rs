use crate::linalg::{max_abs_vec, min_eigenvalue, nullspace, CMat, CVec, C64};

use super::{HopfData, HopfError};

/// Haar state, GNS data and the derived modular objects of a finite quantum group.
#[derive(Debug, Clone)]
pub struct HaarData {
    /// `h(e_i)`.
    pub state: CVec,
    /// `gram[(a, b)] = h(e_a* e_b)`.
    pub gram: CMat,
    pub gns_dim: usize,
    /// Upper-triangular `Λ` with `gram = Λ† Λ`; column `b` is `Λ(e_b)`.
    pub gns_map: CMat,
    /// Matrix part of the antilinear `J`: `J ξ = modular_conjugation · conj(ξ)`, so `J Λ(x) = Λ(x*)`.
    pub modular_conjugation: Option<CMat>,
    pub left_invariance_residual: f64,
    pub right_invariance_residual: f64,
    pub trace_residual: f64,
    pub min_gram_eigenvalue: f64,
    pub faithful: bool,
    /// Scaling constant, 1 for finite quantum groups.
    pub scaling_constant: f64,
    /// Modular element, the unit for finite quantum groups.
    pub modular_element: CVec,
}

impl HaarData {
    /// `Λ(x)` in GNS coordinates.
    pub fn lambda(&self, x: &CVec) -> CVec {
        &self.gns_map * x
    }

    pub fn evaluate(&self, x: &CVec) -> C64 {
        self.state.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    /// `Λ^{-1}`; only available for faithful states.
    pub fn gns_inverse(&self) -> Option<CMat> {
        if self.faithful {
            self.gns_map.clone().try_inverse()
        } else {
            None
        }
    }
}

/// Cholesky factor in input basis order, skipping columns whose residual diagonal vanishes.
pub(crate) fn ordered_cholesky(gram: &CMat, tol: f64) -> CMat {
    let n = gram.nrows();
    let mut rows: Vec<CVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for j in 0..n {
        let mut entries = Vec::with_capacity(rows.len());
        for (p, &pi) in pivots.iter().enumerate() {
            let mut v = gram[(pi, j)];
            for q in 0..p {
                v -= rows[q][pi].conj() * rows[q][j];
            }
            entries.push(v / rows[p][pi]);
        }
        for (p, v) in entries.into_iter().enumerate() {
            rows[p][j] = v;
        }
        let used: f64 = rows.iter().map(|row| row[j].norm_sqr()).sum();
        let d = gram[(j, j)].re - used;
        if d > tol {
            let mut row = CVec::zeros(n);
            row[j] = C64::new(d.sqrt(), 0.0);
            rows.push(row);
            pivots.push(j);
        }
    }
    if rows.is_empty() {
        return CMat::zeros(0, n);
    }
    CMat::from_rows(&rows.iter().map(|r| r.transpose()).collect::<Vec<_>>())
}

/// Solves the invariance system for the Haar state and builds the GNS data.
pub fn haar_state(data: &HopfData) -> Result<HaarData, HopfError> {
    data.check_shapes()?;
    let n = data.dim();
    let tol = data.tolerance.value();
    let comult = data.comult.sparse_leading();

    // (id⊗h)Δ(e_i) = h(e_i) 1: rows (i, j), unknowns h_k.
    let mut system = CMat::zeros(n * n, n);
    for i in 0..n {
        for &(j, k, v) in &comult[i] {
            system[(i * n + j, k)] += v;
        }
        for j in 0..n {
            system[(i * n + j, i)] -= data.unit[j];
        }
    }
    let kernel = nullspace(&system, 1e-9_f64.max(tol));
    match kernel.ncols() {
        0 => return Err(HopfError::NoInvariantState),
        1 => {}
        d => return Err(HopfError::NonUniqueInvariantState { dimension: d }),
    }
    let raw = kernel.column(0).into_owned();
    let norm: C64 = raw.iter().zip(data.unit.iter()).map(|(a, b)| a * b).sum();
    if norm.norm() < 1e-12 {
        return Err(HopfError::NoInvariantState);
    }
    let state = raw / norm;
    let h = |x: &CVec| -> C64 { state.iter().zip(x.iter()).map(|(a, b)| a * b).sum() };

    let mut right_res: f64 = 0.0;
    let mut left_res: f64 = 0.0;
    for i in 0..n {
        let mut right = CVec::zeros(n);
        let mut left = CVec::zeros(n);
        for &(j, k, v) in &comult[i] {
            right[j] += v * state[k];
            left[k] += v * state[j];
        }
        let target = &data.unit * state[i];
        right_res = right_res.max(max_abs_vec(&(right - &target)));
        left_res = left_res.max(max_abs_vec(&(left - target)));
    }
    if right_res > tol || left_res > tol {
        return Err(HopfError::InvarianceFailure { residual: right_res.max(left_res) });
    }

    let stars: Vec<CVec> = (0..n).map(|a| data.star.column(a).into_owned()).collect();
    let mut gram = CMat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            gram[(a, b)] = h(&data.product(&stars[a], &data.basis_element(b)));
        }
    }
    gram = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
    let min_eig = min_eigenvalue(&gram);
    if min_eig < -tol {
        return Err(HopfError::NotPositive { min_eigenvalue: min_eig });
    }

    let mut trace_res: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let ab = h(&data.product(&data.basis_element(a), &data.basis_element(b)));
            let ba = h(&data.product(&data.basis_element(b), &data.basis_element(a)));
            trace_res = trace_res.max((ab - ba).norm());
        }
    }
    if trace_res > tol {
        return Err(HopfError::NotTracial { residual: trace_res });
    }

    let gns_map = ordered_cholesky(&gram, tol);
    let gns_dim = gns_map.nrows();
    let faithful = gns_dim == n && min_eig > 100.0 * tol;
    let modular_conjugation = if faithful {
        gns_map.clone().try_inverse().map(|inv| &gns_map * &data.star * inv.map(|z| z.conj()))
    } else {
        None
    };

    let modular_element = data.unit.clone();
    Ok(HaarData {
        state,
        gram,
        gns_dim,
        gns_map,
        modular_conjugation,
        left_invariance_residual: left_res,
        right_invariance_residual: right_res,
        trace_residual: trace_res,
        min_gram_eigenvalue: min_eig,
        faithful,
        scaling_constant: 1.0,
        modular_element,
    })
}
