//! Completely bounded norms of linear maps between finite-dimensional C*-algebras.

mod exact;
mod lower;
mod report;

use thiserror::Error;

use crate::linalg::{hermitian_eigen, operator_norm, CMat, CVec, C64};

pub use exact::{cb_norm_exact, CbCertificate, CbNorm, CbOptions, Method};
pub use lower::{cb_norm_lower, amplified_norm};
pub use report::{multiplier_cb_report, BoundKind, MultiplierCbReport, ReportedBound};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CbError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map dimension {dimension} exceeds the cap {cap}")]
    CapExceeded { dimension: usize, cap: usize },
    #[error("SDP solver failed: {0}")]
    SolverDiverged(String),
    #[error("truncation does not contain support label `{label}`")]
    TruncationTooSmall { label: String },
    #[error("inconsistent bounds: {0}")]
    InconsistentBounds(String),
    #[error(transparent)]
    Corep(#[from] crate::corep::CorepError),
    #[error(transparent)]
    Engine(#[from] crate::hopf_engine::HopfError),
}

/// A linear map `⊕ M_{n_i} → ⊕ M_{m_j}` acting on row-major vectorized blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMap {
    pub name: String,
    pub domain: Vec<usize>,
    pub codomain: Vec<usize>,
    /// Columns indexed by domain matrix units, rows by codomain entries.
    pub action: CMat,
}

pub(crate) fn algebra_dim(sizes: &[usize]) -> usize {
    sizes.iter().map(|s| s * s).sum()
}

/// Splits a vectorized element into its blocks.
pub fn split_blocks(sizes: &[usize], v: &CVec) -> Vec<CMat> {
    let mut offset = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = CMat::from_fn(s, s, |i, j| v[offset + i * s + j]);
            offset += s * s;
            b
        })
        .collect()
}

/// Row-major concatenation of blocks.
pub fn join_blocks(blocks: &[CMat]) -> CVec {
    let entries: Vec<C64> = blocks
        .iter()
        .flat_map(|b| {
            let (n, m) = b.shape();
            (0..n * m).map(move |k| b[(k / m, k % m)])
        })
        .collect();
    CVec::from_vec(entries)
}

impl BlockMap {
    pub fn new(name: impl Into<String>, domain: Vec<usize>, codomain: Vec<usize>, action: CMat) -> Result<Self, CbError> {
        let (rows, cols) = (algebra_dim(&codomain), algebra_dim(&domain));
        if action.nrows() != rows || action.ncols() != cols {
            return Err(CbError::ShapeMismatch(format!(
                "action is {}x{}, block sizes require {rows}x{cols}",
                action.nrows(),
                action.ncols()
            )));
        }
        if domain.contains(&0) || codomain.contains(&0) || domain.is_empty() || codomain.is_empty() {
            return Err(CbError::ShapeMismatch("block sizes must be positive".into()));
        }
        Ok(BlockMap { name: name.into(), domain, codomain, action })
    }

    /// Builds the map from its action on block tuples.
    pub fn from_fn(
        name: impl Into<String>,
        domain: Vec<usize>,
        codomain: Vec<usize>,
        f: impl Fn(&[CMat]) -> Vec<CMat>,
    ) -> Result<Self, CbError> {
        let cols = algebra_dim(&domain);
        let mut action = CMat::zeros(algebra_dim(&codomain), cols);
        for k in 0..cols {
            let e = crate::linalg::basis_vector(cols, k);
            let image = f(&split_blocks(&domain, &e));
            let shapes: Vec<usize> = image.iter().map(|b| b.nrows()).collect();
            if shapes != codomain {
                return Err(CbError::ShapeMismatch(format!("image blocks {shapes:?}, expected {codomain:?}")));
            }
            action.set_column(k, &join_blocks(&image));
        }
        BlockMap::new(name, domain, codomain, action)
    }

    pub fn identity(sizes: Vec<usize>) -> Self {
        let n = algebra_dim(&sizes);
        BlockMap { name: "identity".into(), domain: sizes.clone(), codomain: sizes, action: CMat::identity(n, n) }
    }

    pub fn transpose(d: usize) -> Self {
        BlockMap::from_fn("transpose", vec![d], vec![d], |x| vec![x[0].transpose()]).expect("square block")
    }

    pub fn apply(&self, x: &[CMat]) -> Vec<CMat> {
        split_blocks(&self.codomain, &(&self.action * join_blocks(x)))
    }

    pub fn domain_dim(&self) -> usize {
        algebra_dim(&self.domain)
    }

    pub fn codomain_dim(&self) -> usize {
        algebra_dim(&self.codomain)
    }

    /// `Φ†(x) = Φ(x*)*`.
    pub fn dagger(&self) -> Self {
        let f = |x: &[CMat]| -> Vec<CMat> {
            let star: Vec<CMat> = x.iter().map(|b| b.adjoint()).collect();
            self.apply(&star).iter().map(|b| b.adjoint()).collect()
        };
        BlockMap::from_fn(format!("{}^dagger", self.name), self.domain.clone(), self.codomain.clone(), f)
            .expect("shapes preserved")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BlockMap) -> Result<Self, CbError> {
        if inner.codomain != self.domain {
            return Err(CbError::ShapeMismatch("composition blocks differ".into()));
        }
        BlockMap::new(
            format!("{}*{}", self.name, inner.name),
            inner.domain.clone(),
            self.codomain.clone(),
            &self.action * &inner.action,
        )
    }

    /// `Φ ⊕ Ψ` acting on `A₁ ⊕ A₂`.
    pub fn direct_sum(&self, other: &BlockMap) -> Self {
        let (r1, c1) = self.action.shape();
        let (r2, c2) = other.action.shape();
        let mut action = CMat::zeros(r1 + r2, c1 + c2);
        action.view_mut((0, 0), (r1, c1)).copy_from(&self.action);
        action.view_mut((r1, c1), (r2, c2)).copy_from(&other.action);
        BlockMap {
            name: format!("{}+{}", self.name, other.name),
            domain: [self.domain.clone(), other.domain.clone()].concat(),
            codomain: [self.codomain.clone(), other.codomain.clone()].concat(),
            action,
        }
    }

    /// Choi matrices `Σ_pq E_pq ⊗ Φ(E_pq)`, one per domain block.
    pub fn choi_blocks(&self) -> Vec<CMat> {
        let total: usize = self.codomain.iter().sum();
        let mut offset = 0;
        let mut out = Vec::with_capacity(self.domain.len());
        for &n in &self.domain {
            let mut choi = CMat::zeros(n * total, n * total);
            for p in 0..n {
                for q in 0..n {
                    let col = offset + p * n + q;
                    let image = split_blocks(&self.codomain, &self.action.column(col).into_owned());
                    let mut o = 0;
                    for b in &image {
                        let m = b.nrows();
                        for a in 0..m {
                            for c in 0..m {
                                choi[(p * total + o + a, q * total + o + c)] = b[(a, c)];
                            }
                        }
                        o += m;
                    }
                }
            }
            offset += n * n;
            out.push(choi);
        }
        out
    }

    /// Complete positivity up to `tol` (relative to the largest Choi entry).
    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.choi_blocks().iter().all(|c| {
            let scale = crate::linalg::max_abs(c).max(1.0);
            let herm = crate::linalg::max_abs(&(c - c.adjoint()));
            herm <= tol * scale && hermitian_eigen(&((c + c.adjoint()) * crate::linalg::r(0.5))).0[0] >= -tol * scale
        })
    }

    /// `Φ(1)`.
    pub fn image_of_unit(&self) -> Vec<CMat> {
        let unit: Vec<CMat> = self.domain.iter().map(|&n| CMat::identity(n, n)).collect();
        self.apply(&unit)
    }

    /// Operator norm of `Φ(1)`.
    pub fn norm_of_unit_image(&self) -> f64 {
        self.image_of_unit().iter().map(operator_norm).fold(0.0, f64::max)
    }
}
