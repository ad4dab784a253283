//! Dense complex linear algebra shared by the engine and the calculus.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Absolute residual tolerance used by every check on a datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-10)
    }
}

impl Tolerance {
    pub const ENV_VAR: &'static str = "QG_TOLERANCE";

    /// The default tolerance, overridden by `QG_TOLERANCE` when it parses.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 0.0)
            .map(Tolerance)
            .unwrap_or_default()
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn basis_vector(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

/// Row-major flattening `v[i * ncols + j] = m[(i, j)]`.
pub fn vec_row_major(m: &CMat) -> CVec {
    let (rows, cols) = m.shape();
    CVec::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
}

pub fn unvec_row_major(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Orthonormal basis (as columns) of the kernel of `a`, singular values below `tol` counted as zero.
pub fn nullspace(a: &CMat, tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let padded = if a.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cols: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(k, _)| v_t.row(k).adjoint().into_owned())
        .collect();
    if cols.is_empty() {
        return CMat::zeros(n, 0);
    }
    CMat::from_columns(&cols)
}

/// Least-squares solution of `a x = b` and the max-abs residual of the fit.
pub fn solve_least_squares(a: &CMat, b: &CMat) -> (CMat, f64) {
    if a.ncols() == 0 {
        return (CMat::zeros(0, b.ncols()), max_abs(b));
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = smax * 1e-12 * (a.nrows().max(a.ncols()) as f64);
    let x = svd.solve(b, eps).expect("SVD computed with U and V");
    let res = max_abs(&(a * &x - b));
    (x, res)
}

pub fn solve_least_squares_vec(a: &CMat, b: &CVec) -> (CVec, f64) {
    let bm = CMat::from_column_slice(b.len(), 1, b.as_slice());
    let (x, res) = solve_least_squares(a, &bm);
    (x.column(0).into_owned(), res)
}

pub fn pseudo_inverse(a: &CMat) -> CMat {
    let smax = a.clone().singular_values().iter().cloned().fold(0.0, f64::max);
    a.clone()
        .pseudo_inverse(smax * 1e-12 * (a.nrows().max(a.ncols()) as f64))
        .expect("nonnegative epsilon")
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()) * r(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(m).0[0]
}

pub fn operator_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn trace_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().sum()
}

/// The unitary polar part `U` of `m = U |m|`.
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested V^T")
}

/// The flip `ξ⊗η ↦ η⊗ξ` from `C^d1 ⊗ C^d2` to `C^d2 ⊗ C^d1`.
pub fn flip(d1: usize, d2: usize) -> CMat {
    let mut s = CMat::zeros(d1 * d2, d1 * d2);
    for a in 0..d1 {
        for b in 0..d2 {
            s[(b * d1 + a, a * d2 + b)] = ONE;
        }
    }
    s
}

/// Applies `op` acting on the tensor legs `legs` (in the given order) of a
/// space with leg dimensions `dims` to every column of `m`.
pub fn apply_on_legs(op: &CMat, dims: &[usize], legs: &[usize], m: &CMat) -> CMat {
    let total: usize = dims.iter().product();
    let sub: usize = legs.iter().map(|&l| dims[l]).product();
    assert_eq!(op.nrows(), sub, "operator size does not match legs");
    assert_eq!(m.nrows(), total, "matrix size does not match legs");
    let strides: Vec<usize> = (0..dims.len())
        .map(|k| dims[k + 1..].iter().product())
        .collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !legs.contains(k)).collect();
    let rest_count: usize = rest.iter().map(|&l| dims[l]).product();

    let sub_offsets: Vec<usize> = (0..sub)
        .map(|s| {
            let mut s = s;
            let mut off = 0;
            for &l in legs.iter().rev() {
                off += (s % dims[l]) * strides[l];
                s /= dims[l];
            }
            off
        })
        .collect();

    let mut out = CMat::zeros(total, m.ncols());
    let mut gathered = CMat::zeros(sub, m.ncols());
    for rc in 0..rest_count {
        let mut rc_left = rc;
        let mut base = 0;
        for &l in rest.iter().rev() {
            base += (rc_left % dims[l]) * strides[l];
            rc_left /= dims[l];
        }
        for (s, off) in sub_offsets.iter().enumerate() {
            gathered.row_mut(s).copy_from(&m.row(base + off));
        }
        let prod = op * &gathered;
        for (s, off) in sub_offsets.iter().enumerate() {
            out.row_mut(base + off).copy_from(&prod.row(s));
        }
    }
    out
}

/// `op` acting on `legs`, identity elsewhere, as a full matrix.
pub fn embed_on_legs(op: &CMat, dims: &[usize], legs: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    apply_on_legs(op, dims, legs, &CMat::identity(total, total))
}

pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_complex_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = random_complex(rng, n, n);
    (&m + m.adjoint()) * r(0.5)
}

/// Random unitary from the polar part of a random complex matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    polar_unitary(&random_complex(rng, n, n))
}

pub fn to_real(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn nullspace_of_rank_one() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = nullspace(&a, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&a * &k)) < 1e-12);
    }

    #[test]
    fn legs_match_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex(&mut rng, 2, 2);
        let b = random_complex(&mut rng, 3, 3);
        let dims = [2, 3, 2];
        let on0 = embed_on_legs(&a, &dims, &[0]);
        let expect = kron(&kron(&a, &CMat::identity(3, 3)), &CMat::identity(2, 2));
        assert!(max_abs(&(on0 - expect)) < 1e-14);
        let ab = kron(&a, &b);
        let on20 = embed_on_legs(&ab, &[3, 2, 2], &[2, 0]);
        // a on leg 2 and b on leg 0.
        let expect = kron(&kron(&b, &CMat::identity(2, 2)), &a);
        assert!(max_abs(&(on20 - expect)) < 1e-14);
    }

    #[test]
    fn flip_swaps_tensor_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_complex_vec(&mut rng, 2);
        let y = random_complex_vec(&mut rng, 3);
        let xy = kron(&CMat::from_column_slice(2, 1, x.as_slice()), &CMat::from_column_slice(3, 1, y.as_slice()));
        let yx = kron(&CMat::from_column_slice(3, 1, y.as_slice()), &CMat::from_column_slice(2, 1, x.as_slice()));
        assert!(max_abs(&(flip(2, 3) * xy - yx)) < 1e-14);
    }

    #[test]
    fn tolerance_default() {
        assert_eq!(Tolerance::default().value(), 1e-10);
    }
}

/// Above this many rows operator identities are tested on probe columns.
pub const DENSE_CHECK_ROWS: usize = 1024;
const PROBE_COLUMNS: usize = 6;

/// Columns on which to compare two operators: the identity for small spaces,
/// otherwise seeded random unit vectors.
pub fn check_columns(rows: usize) -> CMat {
    if rows <= DENSE_CHECK_ROWS {
        return CMat::identity(rows, rows);
    }
    let mut x = random_complex(&mut ChaCha8Rng::seed_from_u64(0x5eed), rows, PROBE_COLUMNS);
    for mut col in x.column_iter_mut() {
        let norm = col.norm();
        col /= c(norm, 0.0);
    }
    x
}
