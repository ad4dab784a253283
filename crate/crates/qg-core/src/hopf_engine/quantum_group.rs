use crate::linalg::{max_abs, solve_least_squares, CMat, CVec, ZERO};

use super::unitary::{expand_second_leg, gns_operators, multiplicative_unitary, sum_of_tensors};
use super::{dual_hopf, AlgebraBlocks, haar_state, validate_hopf, DualHopf, HaarData, HopfData, HopfError, UnitaryTensor, ValidationReport};

/// A validated finite quantum group with its Haar state, `W` and dual.
#[derive(Debug, Clone)]
pub struct QuantumGroup {
    pub data: HopfData,
    pub validation: ValidationReport,
    pub haar: HaarData,
    pub w: UnitaryTensor,
    pub dual: DualHopf,
    /// `π(e_i)` on the GNS space.
    pub operators: Vec<CMat>,
    /// Column `k` holds the `x̂`-coefficients of `y_k` where `Ŵ = Σ_k y_k ⊗ π(e_k)`.
    dual_slices: CMat,
}

impl QuantumGroup {
    pub fn new(data: HopfData) -> Result<Self, HopfError> {
        data.check_shapes()?;
        let validation = validate_hopf(&data)?.into_result()?;
        let haar = haar_state(&data)?;
        if !haar.faithful {
            return Err(HopfError::NotFaithful { min_eigenvalue: haar.min_gram_eigenvalue });
        }
        let w = multiplicative_unitary(&data, &haar)?;
        let dual = dual_hopf(&data, &haar, &w)?;
        let operators = gns_operators(&data, &haar)?;
        let n = data.dim();
        let (ys, _) = expand_second_leg(&w.dual(), &operators, n, n);
        let mut dual_slices = CMat::zeros(n, n);
        for (k, yk) in ys.iter().enumerate() {
            dual_slices.set_column(k, &dual.expand(yk).0);
        }
        Ok(QuantumGroup { data, validation, haar, w, dual, operators, dual_slices })
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    /// `π(x)` on the GNS space.
    pub fn operator(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (i, op) in self.operators.iter().enumerate() {
            if x[i] != ZERO {
                out += op * x[i];
            }
        }
        out
    }

    /// Recovers the algebra element of an operator in the span of `π(A)`.
    pub fn element_of(&self, op: &CMat) -> CVec {
        let inv = self.haar.gns_inverse().expect("faithful Haar state");
        &inv * op * &self.haar.gns_map * &self.data.unit
    }

    /// Block structure of the algebra itself, through its GNS representation.
    pub fn algebra_blocks(&self, seed: u64) -> Result<AlgebraBlocks, HopfError> {
        AlgebraBlocks::from_operators(&self.operators, seed)
    }

    /// Block structure of the dual, through its operators on the GNS space.
    pub fn dual_blocks(&self, seed: u64) -> Result<AlgebraBlocks, HopfError> {
        AlgebraBlocks::from_operators(&self.dual.operators, seed)
    }

    /// Builds the quantum group on the dual Hopf algebra.
    pub fn dual_group(&self) -> Result<QuantumGroup, HopfError> {
        QuantumGroup::new(self.dual.hopf.clone())
    }

    /// For `a` in the dual algebra, the map `Θ` on `A` with `(1⊗a)W = (Θ⊗id)W`.
    ///
    /// Returns the matrix of `Θ` in the basis of `A` and the residual of the defining relation.
    pub fn left_multiplier(&self, a: &CVec) -> (CMat, f64) {
        let n = self.dim();
        let a_op = self.dual.operator(a);
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            let (coeffs, _) = self.dual.expand(&(&a_op * &self.dual.operators[i]));
            m.set_column(i, &coeffs);
        }
        let theta = m.transpose();
        let first: Vec<CMat> = (0..n).map(|k| self.operator(&theta.column(k).into_owned())).collect();
        let lhs = CMat::identity(n, n).kronecker(&a_op) * &self.w.matrix;
        let rhs = sum_of_tensors(&first, &self.dual.operators);
        (theta, max_abs(&(lhs - rhs)))
    }

    /// For `b` in `A`, the map `Θ` on the dual with `(1⊗b)Ŵ = (Θ⊗id)Ŵ`, in the `x̂` basis.
    pub fn dual_left_multiplier(&self, b: &CVec) -> (CMat, f64) {
        let n = self.dim();
        let lb = self.data.left_mult_matrix(b);
        let (theta_t, _) = solve_least_squares(&self.dual_slices.transpose(), &(lb * self.dual_slices.transpose()));
        let theta = theta_t.transpose();
        let images: Vec<CMat> = (0..n)
            .map(|k| self.dual.operator(&(&theta * self.dual_slices.column(k))))
            .collect();
        let w_hat = self.w.dual();
        let lhs = CMat::identity(n, n).kronecker(&self.operator(b)) * &w_hat;
        let rhs = sum_of_tensors(&images, &self.operators);
        (theta, max_abs(&(lhs - rhs)))
    }
}
