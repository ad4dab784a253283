//! Coefficient-level multiplier calculus for discrete quantum groups given by
//! tables of irreducible corepresentations of the compact dual.

mod bridge;
mod ops;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::hopf_engine::examples::FiniteGroup;
use crate::hopf_engine::HopfError;
use crate::linalg::{max_abs, CMat, C64, ONE, ZERO};

pub use bridge::EngineBridge;
pub use ops::{
    central_average, flow_finsupp, flow_pol, haar_pair, l2_implement, module_action, multiplier_involution,
    schur_gram, star_pol, subgroup_expectation, symmetrize_ap_net, theta_apply, Flow, SchurGram,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorepError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("conjugation intertwiner missing for label `{label}`")]
    MissingConjugationData { label: String },
    #[error("fusion data missing")]
    MissingFusionData,
    #[error("label `{label}` unsupported: {reason}")]
    UnsupportedLabel { label: String, reason: String },
    #[error("unit coefficient vanishes after symmetrization")]
    DegenerateUnitCoefficient,
    #[error("not a subcategory: {0}")]
    NotASubcategory(String),
    #[error("KMS identity fails with residual {residual:.3e}")]
    KmsViolation { residual: f64 },
    #[error(transparent)]
    Engine(#[from] HopfError),
}

/// Irreducible corepresentations of a compact quantum group `Γ̂`, i.e. the
/// block structure of `ℓ∞(Γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrTable {
    pub name: String,
    pub labels: Vec<String>,
    /// Index of the trivial corepresentation.
    pub trivial: usize,
    pub dims: Vec<usize>,
    /// Diagonal of `ρ_α`.
    pub rho: Vec<Vec<f64>>,
    pub conj: Vec<usize>,
    /// `fusion[(α, β)]` lists `(γ, N^γ_{αβ})` with positive multiplicity.
    pub fusion: Option<BTreeMap<(usize, usize), Vec<(usize, u32)>>>,
    /// `T_α` with `Ū^α = T_α U^ᾱ T_α⁻¹`.
    pub conj_intertwiner: Option<Vec<CMat>>,
    /// The label set is a finite window of an infinite table.
    pub truncated: bool,
}

/// Fusion triples `(α, β, γ, N^γ_{αβ})`.
pub type FusionTriples = Vec<(usize, usize, usize, u32)>;

/// Unvalidated table contents.
#[derive(Debug, Clone)]
pub struct TableParts {
    pub name: String,
    pub labels: Vec<String>,
    pub trivial: usize,
    pub dims: Vec<usize>,
    pub rho: Vec<Vec<f64>>,
    pub conj: Vec<usize>,
    pub fusion: Option<FusionTriples>,
    pub conj_intertwiner: Option<Vec<CMat>>,
    pub truncated: bool,
}

impl IrrTable {
    /// Validates the table invariants.
    pub fn new(parts: TableParts) -> Result<Self, CorepError> {
        let TableParts { name, labels, trivial, dims, rho, conj, fusion, conj_intertwiner, truncated } = parts;
        let n = labels.len();
        let bad = |msg: String| Err(CorepError::InvalidTable(msg));
        if dims.len() != n || rho.len() != n || conj.len() != n {
            return bad("labels, dim, rho and conj must have equal length".into());
        }
        if trivial >= n || dims[trivial] != 1 {
            return bad("trivial label must exist with dimension 1".into());
        }
        for a in 0..n {
            if dims[a] == 0 {
                return bad(format!("label `{}` has dimension 0", labels[a]));
            }
            if rho[a].len() != dims[a] || rho[a].iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
                return bad(format!("rho of `{}` must have {} positive entries", labels[a], dims[a]));
            }
            let c = conj[a];
            if c >= n || conj[c] != a || dims[c] != dims[a] {
                return bad(format!("conj is not a dimension-preserving involution at `{}`", labels[a]));
            }
            let tr: f64 = rho[a].iter().sum();
            let tr_inv: f64 = rho[a].iter().map(|r| 1.0 / r).sum();
            if (tr - tr_inv).abs() > 1e-9 * tr.max(1.0) {
                return bad(format!("Tr ρ ≠ Tr ρ⁻¹ at `{}`", labels[a]));
            }
        }
        if conj[trivial] != trivial {
            return bad("conj of the trivial label must be trivial".into());
        }
        for w in labels.iter().enumerate() {
            if labels.iter().filter(|l| *l == w.1).count() > 1 {
                return bad(format!("duplicate label `{}`", w.1));
            }
        }
        if let Some(ts) = &conj_intertwiner {
            if ts.len() != n {
                return bad("one conjugation intertwiner per label".into());
            }
            for a in 0..n {
                let t = &ts[a];
                if t.nrows() != dims[a] || t.ncols() != dims[a] || t.clone().try_inverse().is_none() {
                    return bad(format!("intertwiner of `{}` must be invertible of size {}", labels[a], dims[a]));
                }
            }
        }
        let fusion_map = match fusion {
            None => None,
            Some(triples) => {
                let mut map: BTreeMap<(usize, usize), Vec<(usize, u32)>> = BTreeMap::new();
                for (a, b, g, m) in triples {
                    if a >= n || b >= n || g >= n {
                        return bad("fusion triple refers to an unknown label".into());
                    }
                    if m > 0 {
                        map.entry((a, b)).or_default().push((g, m));
                    }
                }
                for v in map.values_mut() {
                    v.sort();
                }
                Some(map)
            }
        };
        let table = IrrTable {
            name,
            labels,
            trivial,
            dims,
            rho,
            conj,
            fusion: fusion_map,
            conj_intertwiner,
            truncated,
        };
        table.check_fusion()?;
        Ok(table)
    }

    fn check_fusion(&self) -> Result<(), CorepError> {
        if self.fusion.is_none() {
            return Ok(());
        }
        let n = self.len();
        let e = self.trivial;
        for a in 0..n {
            for g in 0..n {
                let expect = u32::from(a == g);
                if self.multiplicity(e, a, g) != expect || self.multiplicity(a, e, g) != expect {
                    return Err(CorepError::InvalidTable(format!("unit law fails at `{}`", self.labels[a])));
                }
            }
            for b in 0..n {
                for g in 0..n {
                    if self.multiplicity(a, b, g) != self.multiplicity(self.conj[a], g, b) {
                        return Err(CorepError::InvalidTable(format!(
                            "Frobenius reciprocity fails at ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[g]
                        )));
                    }
                }
                // Dimension count only binds when no product can leave the window.
                if !self.truncated {
                    let total: usize = self.fusion_of(a, b).iter().map(|(c, k)| *k as usize * self.dims[*c]).sum();
                    if total != self.dims[a] * self.dims[b] {
                        return Err(CorepError::InvalidTable(format!(
                            "dimensions do not add up in {} ⊗ {}",
                            self.labels[a], self.labels[b]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Result<usize, CorepError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| CorepError::UnknownLabel(label.to_string()))
    }

    pub fn multiplicity(&self, a: usize, b: usize, g: usize) -> u32 {
        self.fusion
            .as_ref()
            .and_then(|f| f.get(&(a, b)))
            .and_then(|v| v.iter().find(|(c, _)| *c == g).map(|(_, m)| *m))
            .unwrap_or(0)
    }

    pub fn fusion_of(&self, a: usize, b: usize) -> Vec<(usize, u32)> {
        self.fusion.as_ref().and_then(|f| f.get(&(a, b)).cloned()).unwrap_or_default()
    }

    /// `dim_q(α) = Tr ρ_α`.
    pub fn quantum_dim(&self, a: usize) -> f64 {
        self.rho[a].iter().sum()
    }

    pub fn is_kac(&self) -> bool {
        self.rho.iter().flatten().all(|r| (*r - 1.0).abs() <= 1e-14)
    }

    /// `Irr` of the compact dual of a finite group `G`: one-dimensional labels fusing by the group law.
    pub fn group_dual(group: &FiniteGroup) -> Self {
        let n = group.order();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                fusion.push((a, b, group.table[a][b], 1));
            }
        }
        IrrTable::new(TableParts {
            name: format!("dual of {}", group.name),
            labels: group.elements.clone(),
            trivial: group.identity(),
            dims: vec![1; n],
            rho: vec![vec![1.0]; n],
            conj: (0..n).map(|g| group.inverse(g)).collect(),
            fusion: Some(fusion),
            conj_intertwiner: Some(vec![CMat::identity(1, 1); n]),
            truncated: false,
        })
        .expect("group tables are valid")
    }

    /// Spins `0..=max_label` of `SU_q(2)` (label `n` has dimension `n+1`), with `ρ_n = diag(q^{-n}, q^{-n+2}, …, q^n)`.
    ///
    /// Fusion triples are those of the full table that stay inside the window.
    pub fn su_q2_window(q: f64, max_label: usize) -> Result<Self, CorepError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(CorepError::InvalidTable("q must lie in (0, 1]".into()));
        }
        let n = max_label + 1;
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let lo = a.abs_diff(b);
                for g in (lo..=(a + b).min(max_label)).step_by(2) {
                    fusion.push((a, b, g, 1));
                }
            }
        }
        IrrTable::new(TableParts {
            name: format!("SU_q(2) window q={q} L={max_label}"),
            labels: (0..n).map(|k| k.to_string()).collect(),
            trivial: 0,
            dims: (0..n).map(|k| k + 1).collect(),
            rho: (0..n)
                .map(|k| (0..=k).map(|i| q.powf(-(k as f64) + 2.0 * i as f64)).collect())
                .collect(),
            conj: (0..n).collect(),
            fusion: Some(fusion),
            conj_intertwiner: None,
            truncated: true,
        })
    }

    pub(crate) fn intertwiner(&self, a: usize) -> Result<&CMat, CorepError> {
        self.conj_intertwiner
            .as_ref()
            .map(|ts| &ts[a])
            .ok_or_else(|| CorepError::MissingConjugationData { label: self.labels[a].clone() })
    }
}

/// A finitely supported element of `ℓ∞(Γ)`: one matrix `a^α` per supported label.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FinSupp {
    pub blocks: BTreeMap<usize, CMat>,
}

/// An element `Σ c^α_ij U^α_ij` of `Pol(Γ̂)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolElement {
    pub coeffs: BTreeMap<usize, CMat>,
}

fn check_shapes(table: &IrrTable, blocks: &BTreeMap<usize, CMat>, what: &str) -> Result<(), CorepError> {
    for (&a, m) in blocks {
        if a >= table.len() {
            return Err(CorepError::ShapeMismatch(format!("{what} refers to label index {a}")));
        }
        let d = table.dims[a];
        if m.nrows() != d || m.ncols() != d {
            return Err(CorepError::ShapeMismatch(format!(
                "{what} block at `{}` is {}x{}, expected {d}x{d}",
                table.labels[a],
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

macro_rules! block_element {
    ($ty:ident, $field:ident, $what:literal) => {
        impl $ty {
            pub fn new(table: &IrrTable, $field: BTreeMap<usize, CMat>) -> Result<Self, CorepError> {
                check_shapes(table, &$field, $what)?;
                Ok($ty { $field })
            }

            pub fn zero() -> Self {
                $ty { $field: BTreeMap::new() }
            }

            pub fn check(&self, table: &IrrTable) -> Result<(), CorepError> {
                check_shapes(table, &self.$field, $what)
            }

            /// The block at `a`, zero when unsupported.
            pub fn block(&self, table: &IrrTable, a: usize) -> CMat {
                self.$field.get(&a).cloned().unwrap_or_else(|| CMat::zeros(table.dims[a], table.dims[a]))
            }

            pub fn support(&self) -> Vec<usize> {
                self.$field.keys().copied().collect()
            }

            pub fn scale(&self, s: C64) -> Self {
                $ty { $field: self.$field.iter().map(|(k, m)| (*k, m * s)).collect() }
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.$field.clone();
                for (k, m) in &other.$field {
                    out.entry(*k).and_modify(|x| *x += m).or_insert_with(|| m.clone());
                }
                $ty { $field: out }
            }

            /// Max entrywise distance, treating missing blocks as zero.
            pub fn distance(&self, other: &Self) -> f64 {
                let mut keys: Vec<usize> = self.$field.keys().chain(other.$field.keys()).copied().collect();
                keys.sort_unstable();
                keys.dedup();
                keys.iter()
                    .map(|k| match (self.$field.get(k), other.$field.get(k)) {
                        (Some(a), Some(b)) => max_abs(&(a - b)),
                        (Some(a), None) | (None, Some(a)) => max_abs(a),
                        (None, None) => 0.0,
                    })
                    .fold(0.0, f64::max)
            }

            /// Drops blocks that are exactly zero.
            pub fn pruned(mut self) -> Self {
                self.$field.retain(|_, m| m.iter().any(|z| *z != ZERO));
                self
            }
        }
    };
}

block_element!(FinSupp, blocks, "FinSupp");
block_element!(PolElement, coeffs, "PolElement");

impl FinSupp {
    /// `Σ_{α∈F} p_α`.
    pub fn projection(table: &IrrTable, labels: &[usize]) -> Self {
        FinSupp { blocks: labels.iter().map(|&a| (a, CMat::identity(table.dims[a], table.dims[a]))).collect() }
    }

    /// `Σ c_α p_α`.
    pub fn central(table: &IrrTable, values: &[(usize, C64)]) -> Self {
        FinSupp {
            blocks: values.iter().map(|&(a, c)| (a, CMat::identity(table.dims[a], table.dims[a]) * c)).collect(),
        }
    }

    pub fn is_central(&self, tol: f64) -> bool {
        self.blocks.values().all(|m| {
            let d = m.nrows();
            let c = m[(0, 0)];
            max_abs(&(m - CMat::identity(d, d) * c)) <= tol
        })
    }

    /// `max_α ‖a^α‖`.
    pub fn sup_norm(&self) -> f64 {
        self.blocks.values().map(crate::linalg::operator_norm).fold(0.0, f64::max)
    }

    /// Blockwise product.
    pub fn multiply(&self, other: &Self) -> Self {
        FinSupp {
            blocks: self
                .blocks
                .iter()
                .filter_map(|(k, a)| other.blocks.get(k).map(|b| (*k, a * b)))
                .collect(),
        }
    }
}

impl PolElement {
    /// The unit `U^e_11`.
    pub fn unit(table: &IrrTable) -> Self {
        PolElement { coeffs: [(table.trivial, CMat::identity(1, 1) * ONE)].into_iter().collect() }
    }

    /// The single coefficient `U^α_ij`.
    pub fn coefficient(table: &IrrTable, a: usize, i: usize, j: usize) -> Self {
        let d = table.dims[a];
        let mut m = CMat::zeros(d, d);
        m[(i, j)] = ONE;
        PolElement { coeffs: [(a, m)].into_iter().collect() }
    }
}
