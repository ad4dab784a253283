use crate::linalg::{CMat, CVec, Tolerance, C64, ONE, ZERO};

use super::HopfError;

/// Rank-3 tensor `t[i][j][k]` over a common index range.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, data: vec![ZERO; n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.data[(i * self.n + j) * self.n + k] += v;
    }

    pub fn from_nested(field: &'static str, nested: &[Vec<Vec<C64>>]) -> Result<Self, HopfError> {
        let n = nested.len();
        let mut t = Tensor3::zeros(n);
        for (i, plane) in nested.iter().enumerate() {
            if plane.len() != n {
                return Err(HopfError::DimensionMismatch { field, expected: n, found: plane.len() });
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return Err(HopfError::DimensionMismatch { field, expected: n, found: row.len() });
                }
                for (k, v) in row.iter().enumerate() {
                    t.set(i, j, k, *v);
                }
            }
        }
        Ok(t)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<C64>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| (0..self.n).map(|k| self.get(i, j, k)).collect()).collect())
            .collect()
    }

    /// Nonzero entries grouped by the leading index pair `(i, j)`.
    pub fn sparse_pairs(&self) -> Vec<Vec<(usize, C64)>> {
        let n = self.n;
        let mut out = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != ZERO {
                        out[i * n + j].push((k, v));
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries grouped by the leading index `i`.
    pub fn sparse_leading(&self) -> Vec<Vec<(usize, usize, C64)>> {
        let n = self.n;
        let mut out = vec![Vec::new(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != ZERO {
                        slot.push((j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// A finite-dimensional Hopf *-algebra given by structure constants.
///
/// Conventions: `e_i e_j = Σ_k mult[i][j][k] e_k`,
/// `Δ(e_i) = Σ_{j,k} comult[i][j][k] e_j ⊗ e_k`, `S(e_j) = Σ_i antipode[(i, j)] e_i`
/// and `x* = star · conj(x)` on coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfData {
    pub basis: Vec<String>,
    pub mult: Tensor3,
    pub unit: CVec,
    pub comult: Tensor3,
    pub counit: CVec,
    pub antipode: CMat,
    pub star: CMat,
    pub tolerance: Tolerance,
}

/// Elements of `A ⊗ A` are `n × n` coefficient matrices: entry `(j, k)` multiplies `e_j ⊗ e_k`.
pub type TensorElement = CMat;

impl HopfData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn check_shapes(&self) -> Result<(), HopfError> {
        let n = self.dim();
        let mismatch = |field: &'static str, found: usize| {
            if found == n {
                Ok(())
            } else {
                Err(HopfError::DimensionMismatch { field, expected: n, found })
            }
        };
        if n == 0 {
            return Err(HopfError::DimensionMismatch { field: "basis", expected: 1, found: 0 });
        }
        mismatch("mult", self.mult.dim())?;
        mismatch("comult", self.comult.dim())?;
        mismatch("unit", self.unit.len())?;
        mismatch("counit", self.counit.len())?;
        mismatch("antipode", self.antipode.nrows())?;
        mismatch("antipode", self.antipode.ncols())?;
        mismatch("star", self.star.nrows())?;
        mismatch("star", self.star.ncols())?;
        Ok(())
    }

    pub fn basis_element(&self, i: usize) -> CVec {
        crate::linalg::basis_vector(self.dim(), i)
    }

    pub fn product(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim();
        let mut out = CVec::zeros(n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == ZERO {
                    continue;
                }
                for k in 0..n {
                    out[k] += xy * self.mult.get(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult_matrix(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.mult.get(i, j, k);
                }
            }
        }
        m
    }

    /// Matrix of `x ↦ x y`.
    pub fn right_mult_matrix(&self, y: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            if y[j] == ZERO {
                continue;
            }
            for i in 0..n {
                for k in 0..n {
                    m[(k, i)] += y[j] * self.mult.get(i, j, k);
                }
            }
        }
        m
    }

    pub fn coproduct(&self, x: &CVec) -> TensorElement {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    out[(j, k)] += x[i] * self.comult.get(i, j, k);
                }
            }
        }
        out
    }

    pub fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    pub fn antipode_of(&self, x: &CVec) -> CVec {
        &self.antipode * x
    }

    pub fn counit_of(&self, x: &CVec) -> C64 {
        self.counit.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    /// Product in `A ⊗ A` of coefficient matrices.
    pub fn tensor_product(&self, x: &TensorElement, y: &TensorElement) -> TensorElement {
        let n = self.dim();
        let sparse = self.mult.sparse_pairs();
        let mut out = CMat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let xab = x[(a, b)];
                if xab == ZERO {
                    continue;
                }
                for cc in 0..n {
                    for d in 0..n {
                        let ycd = y[(cc, d)];
                        if ycd == ZERO {
                            continue;
                        }
                        let coef = xab * ycd;
                        for &(f, m1) in &sparse[a * n + cc] {
                            for &(g, m2) in &sparse[b * n + d] {
                                out[(f, g)] += coef * m1 * m2;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `Δ^op`, the coproduct followed by the flip.
    pub fn opposite_coproduct(&self) -> HopfData {
        let n = self.dim();
        let mut comult = Tensor3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    comult.set(i, j, k, self.comult.get(i, k, j));
                }
            }
        }
        // S^{-1} is the antipode of the co-opposite; S² = id in the finite case, checked by the caller.
        let antipode = self.antipode.clone().try_inverse().unwrap_or_else(|| self.antipode.clone());
        HopfData {
            basis: self.basis.iter().map(|b| format!("{b}^op")).collect(),
            mult: self.mult.clone(),
            unit: self.unit.clone(),
            comult,
            counit: self.counit.clone(),
            antipode,
            star: self.star.clone(),
            tolerance: self.tolerance,
        }
    }

    /// Tensor product Hopf algebra `A ⊗ B` with basis `e_i ⊗ f_j` at index `i * nb + j`.
    pub fn tensor_with(&self, other: &HopfData) -> HopfData {
        let (na, nb) = (self.dim(), other.dim());
        let n = na * nb;
        let idx = |i: usize, j: usize| i * nb + j;
        let mut mult = Tensor3::zeros(n);
        let sa = self.mult.sparse_pairs();
        let sb = other.mult.sparse_pairs();
        for i1 in 0..na {
            for i2 in 0..na {
                for j1 in 0..nb {
                    for j2 in 0..nb {
                        for &(k1, a) in &sa[i1 * na + i2] {
                            for &(k2, b) in &sb[j1 * nb + j2] {
                                mult.add(idx(i1, j1), idx(i2, j2), idx(k1, k2), a * b);
                            }
                        }
                    }
                }
            }
        }
        let mut comult = Tensor3::zeros(n);
        let ca = self.comult.sparse_leading();
        let cb = other.comult.sparse_leading();
        for i in 0..na {
            for j in 0..nb {
                for &(a1, a2, x) in &ca[i] {
                    for &(b1, b2, y) in &cb[j] {
                        comult.add(idx(i, j), idx(a1, b1), idx(a2, b2), x * y);
                    }
                }
            }
        }
        let kron = |a: &CMat, b: &CMat| a.kronecker(b);
        let kv = |a: &CVec, b: &CVec| CVec::from_fn(n, |k, _| a[k / nb] * b[k % nb]);
        HopfData {
            basis: self
                .basis
                .iter()
                .flat_map(|a| other.basis.iter().map(move |b| format!("{a}⊗{b}")))
                .collect(),
            mult,
            unit: kv(&self.unit, &other.unit),
            comult,
            counit: kv(&self.counit, &other.counit),
            antipode: kron(&self.antipode, &other.antipode),
            star: kron(&self.star, &other.star),
            tolerance: Tolerance(self.tolerance.0.max(other.tolerance.0)),
        }
    }

    pub fn unit_tensor(&self) -> TensorElement {
        &self.unit * self.unit.transpose()
    }

    pub fn is_unit_basis(&self, i: usize) -> bool {
        self.unit.iter().enumerate().all(|(k, v)| if k == i { *v == ONE } else { *v == ZERO })
    }
}
