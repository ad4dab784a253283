use crate::linalg::{apply_on_legs, check_columns, flip, max_abs, solve_least_squares, CMat};

use super::{HaarData, HopfData, HopfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Kac–Takesaki operator of the quantum group.
    W,
    /// Kac–Takesaki operator of the dual, `ΣW*Σ`.
    WDual,
    /// Kac–Takesaki operator of a double crossed product.
    WM,
    /// Right regular representation.
    V,
}

/// A unitary on `H ⊗ H` with `H` of dimension `leg_dim`.
#[derive(Debug, Clone)]
pub struct UnitaryTensor {
    pub matrix: CMat,
    pub flavor: Flavor,
    pub leg_dim: usize,
    pub unitarity_residual: f64,
    pub pentagon_residual: f64,
}

impl UnitaryTensor {
    /// Wraps a matrix after measuring unitarity and the pentagon residual.
    pub fn checked(matrix: CMat, flavor: Flavor, leg_dim: usize, tol: f64) -> Result<Self, HopfError> {
        let unitarity = unitarity_residual(&matrix);
        if unitarity > tol {
            return Err(HopfError::NotUnitary { residual: unitarity });
        }
        let pentagon = pentagon_residual(&matrix, leg_dim);
        if pentagon > tol {
            return Err(HopfError::PentagonFailure { residual: pentagon });
        }
        Ok(UnitaryTensor { matrix, flavor, leg_dim, unitarity_residual: unitarity, pentagon_residual: pentagon })
    }

    /// `ΣW*Σ`.
    pub fn dual(&self) -> CMat {
        let s = flip(self.leg_dim, self.leg_dim);
        &s * self.matrix.adjoint() * &s
    }
}

pub fn unitarity_residual(w: &CMat) -> f64 {
    let x = check_columns(w.nrows());
    max_abs(&(w.adjoint() * (w * &x) - &x)).max(max_abs(&(w * (w.adjoint() * &x) - &x)))
}

/// `‖W₁₂W₁₃W₂₃ − W₂₃W₁₂‖` in max-abs entries, measured on [`check_columns`].
pub fn pentagon_residual(w: &CMat, leg_dim: usize) -> f64 {
    let dims = [leg_dim, leg_dim, leg_dim];
    let total = leg_dim.pow(3);
    let start = check_columns(total);
    let w23 = apply_on_legs(w, &dims, &[1, 2], &start);
    let lhs = apply_on_legs(w, &dims, &[0, 1], &apply_on_legs(w, &dims, &[0, 2], &w23));
    let w12 = apply_on_legs(w, &dims, &[0, 1], &start);
    let rhs = apply_on_legs(w, &dims, &[1, 2], &w12);
    max_abs(&(lhs - rhs))
}

/// Left-regular operators `π(e_i) = Λ L_{e_i} Λ⁻¹` on the GNS space.
pub fn gns_operators(data: &HopfData, haar: &HaarData) -> Result<Vec<CMat>, HopfError> {
    let inv = haar.gns_inverse().ok_or(HopfError::NotFaithful { min_eigenvalue: haar.min_gram_eigenvalue })?;
    Ok((0..data.dim())
        .map(|i| &haar.gns_map * data.left_mult_matrix(&data.basis_element(i)) * &inv)
        .collect())
}

/// Assembles `W` from `W*(Λ(a)⊗Λ(x)) = (Λ⊗Λ)(Δ(x)(a⊗1))`.
pub fn multiplicative_unitary(data: &HopfData, haar: &HaarData) -> Result<UnitaryTensor, HopfError> {
    let n = data.dim();
    let inv = haar.gns_inverse().ok_or(HopfError::NotFaithful { min_eigenvalue: haar.min_gram_eigenvalue })?;
    let mult = data.mult.sparse_pairs();
    let comult = data.comult.sparse_leading();
    let mut m = CMat::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for &(cc, d, cv) in &comult[b] {
                for &(f, mv) in &mult[cc * n + a] {
                    m[(f * n + d, a * n + b)] += cv * mv;
                }
            }
        }
    }
    // (Λ⊗Λ) m (Λ⁻¹⊗Λ⁻¹), one leg at a time.
    let dims = [n, n];
    let left = apply_on_legs(&haar.gns_map, &dims, &[0], &apply_on_legs(&haar.gns_map, &dims, &[1], &m));
    let inv_t = inv.transpose();
    let w_star = apply_on_legs(&inv_t, &dims, &[0], &apply_on_legs(&inv_t, &dims, &[1], &left.transpose())).transpose();
    UnitaryTensor::checked(w_star.adjoint(), Flavor::W, n, data.tolerance.value())
}

/// Writes `W = Σ_i B_i ⊗ X_i` for given first-leg operators `B_i`; returns the `X_i` and the fit residual.
pub fn expand_first_leg(w: &CMat, first: &[CMat], d1: usize, d2: usize) -> (Vec<CMat>, f64) {
    let k = first.len();
    let mut p = CMat::zeros(d1 * d1, k);
    for (i, b) in first.iter().enumerate() {
        for r in 0..d1 {
            for s in 0..d1 {
                p[(r * d1 + s, i)] = b[(r, s)];
            }
        }
    }
    let mut target = CMat::zeros(d1 * d1, d2 * d2);
    for pp in 0..d1 {
        for q in 0..d1 {
            for rr in 0..d2 {
                for s in 0..d2 {
                    target[(pp * d1 + q, rr * d2 + s)] = w[(pp * d2 + rr, q * d2 + s)];
                }
            }
        }
    }
    let (x, res) = solve_least_squares(&p, &target);
    let ops = (0..k)
        .map(|i| CMat::from_fn(d2, d2, |rr, s| x[(i, rr * d2 + s)]))
        .collect();
    (ops, res)
}

/// Writes `W = Σ_i Y_i ⊗ B_i` for given second-leg operators `B_i`.
pub fn expand_second_leg(w: &CMat, second: &[CMat], d1: usize, d2: usize) -> (Vec<CMat>, f64) {
    let s12 = flip(d1, d2);
    let s21 = flip(d2, d1);
    expand_first_leg(&(s12 * w * s21), second, d2, d1)
}

/// `Σ_i A_i ⊗ B_i`.
pub fn sum_of_tensors(first: &[CMat], second: &[CMat]) -> CMat {
    let (d1, d2) = (first[0].nrows(), second[0].nrows());
    let mut out = CMat::zeros(d1 * d2, d1 * d2);
    for (a, b) in first.iter().zip(second) {
        out += a.kronecker(b);
    }
    out
}

