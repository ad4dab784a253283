//! Fusion rings, quantum traces and categorical multipliers.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::corep::{CorepError, FinSupp, IrrTable};
use crate::hopf_engine::examples::FiniteGroup;
use crate::doubles::DoubleCrossed;
use crate::linalg::{CMat, CVec, C64, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CategoryError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("fusion data missing")]
    MissingFusionData,
    #[error("‖θ‖_∞ = {norm} exceeds the attached CB bound {bound}")]
    BoundViolated { norm: f64, bound: f64 },
    #[error("basis of the double carries no (coefficient, block) tags")]
    BasisTagMissing,
    #[error(transparent)]
    Corep(#[from] CorepError),
}

/// Based ring `ℤ[Irr]` with quantum dimensions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionRing {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: usize,
    pub conj: Vec<usize>,
    /// `n[i][j][k] = N^k_{ij}`.
    pub n: Vec<Vec<Vec<u32>>>,
    pub dq: Vec<f64>,
    /// When set, the labels are spins `0..=L` of a window and `dq` is only
    /// multiplicative on pairs with `i + j ≤ L`.
    pub spin_window: Option<usize>,
}

impl FusionRing {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn from_triples(
        name: impl Into<String>,
        labels: Vec<String>,
        unit: usize,
        conj: Vec<usize>,
        triples: &[(usize, usize, usize, u32)],
        dq: Vec<f64>,
    ) -> Result<Self, CategoryError> {
        let size = labels.len();
        if conj.len() != size || dq.len() != size || unit >= size {
            return Err(CategoryError::ShapeMismatch("labels, conj and dq must have equal length".into()));
        }
        let mut n = vec![vec![vec![0u32; size]; size]; size];
        for &(i, j, k, m) in triples {
            if i >= size || j >= size || k >= size {
                return Err(CategoryError::ShapeMismatch(format!("triple ({i}, {j}, {k}) out of range")));
            }
            n[i][j][k] += m;
        }
        Ok(FusionRing { name: name.into(), labels, unit, conj, n, dq, spin_window: None })
    }

    /// The fusion ring of a corepresentation table, with `dq = Tr ρ`.
    pub fn from_table(table: &IrrTable) -> Result<Self, CategoryError> {
        let fusion = table.fusion.as_ref().ok_or(CategoryError::MissingFusionData)?;
        let triples: Vec<_> =
            fusion.iter().flat_map(|(&(a, b), v)| v.iter().map(move |&(g, m)| (a, b, g, m))).collect();
        let dq = (0..table.len()).map(|a| table.quantum_dim(a)).collect();
        FusionRing::from_triples(table.name.clone(), table.labels.clone(), table.trivial, table.conj.clone(), &triples, dq)
    }

    /// `Rep(ℤ_n)`, i.e. the group ring of the dual group.
    pub fn rep_cyclic(order: usize) -> Self {
        let group = FiniteGroup::cyclic(order);
        let triples: Vec<_> = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b, (a + b) % order, 1)))
            .collect();
        let labels = group.elements.clone();
        let conj = (0..order).map(|a| (order - a) % order).collect();
        FusionRing::from_triples(format!("Rep(Z{order})"), labels, 0, conj, &triples, vec![1.0; order])
            .expect("cyclic ring is well formed")
    }

    /// `Rep(S₃)`: trivial, sign and the two-dimensional irreducible.
    pub fn rep_s3() -> Self {
        let triples = [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (0, 2, 2, 1),
            (2, 0, 2, 1),
            (1, 1, 0, 1),
            (1, 2, 2, 1),
            (2, 1, 2, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
            (2, 2, 2, 1),
        ];
        let labels = vec!["triv".into(), "sign".into(), "std".into()];
        FusionRing::from_triples("Rep(S3)", labels, 0, vec![0, 1, 2], &triples, vec![1.0, 1.0, 2.0])
            .expect("Rep(S3) is well formed")
    }

    /// Temperley–Lieb window: spins `0..=L`, `N^k_{ij} = 1` iff
    /// `|i−j| ≤ k ≤ min(i+j, 2L−i−j)` and `i+j+k` is even, with `dq(n) = [n+1]_q`.
    pub fn temperley_lieb(q: f64, max_label: usize) -> Result<Self, CategoryError> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(CategoryError::ShapeMismatch("q must be positive".into()));
        }
        let l = max_label;
        let mut triples = Vec::new();
        for i in 0..=l {
            for j in 0..=l {
                let top = (i + j).min(2 * l - i - j);
                for k in (i.abs_diff(j)..=top).step_by(2) {
                    triples.push((i, j, k, 1));
                }
            }
        }
        let dq = (0..=l).map(|n| quantum_integer(q, n + 1)).collect();
        let mut ring = FusionRing::from_triples(
            format!("TL q={q} L={l}"),
            (0..=l).map(|k| k.to_string()).collect(),
            0,
            (0..=l).collect(),
            &triples,
            dq,
        )?;
        ring.spin_window = Some(l);
        Ok(ring)
    }

    fn multiplicative_pair(&self, i: usize, j: usize) -> bool {
        self.spin_window.map_or(true, |l| i + j <= l)
    }
}

/// `[n]_q = q^{n−1} + q^{n−3} + ⋯ + q^{1−n}`.
pub fn quantum_integer(q: f64, n: usize) -> f64 {
    (0..n).map(|m| q.powi(n as i32 - 1 - 2 * m as i32)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FusionAxiom {
    Unit,
    Conjugation,
    Associativity,
    Frobenius,
    DimensionOfUnit,
    DimensionOfConjugate,
    DimensionPositive,
    DimensionHomomorphism,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionCheck {
    pub axiom: FusionAxiom,
    pub residual: f64,
    pub passed: bool,
    /// First failing instance.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionReport {
    pub ring: String,
    pub checks: Vec<FusionCheck>,
}

impl FusionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> Vec<FusionAxiom> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.axiom).collect()
    }

    pub fn residual(&self, axiom: FusionAxiom) -> f64 {
        self.checks.iter().filter(|c| c.axiom == axiom).map(|c| c.residual).fold(0.0, f64::max)
    }
}

struct Tracker {
    axiom: FusionAxiom,
    residual: f64,
    tolerance: f64,
    detail: Option<String>,
}

impl Tracker {
    fn new(axiom: FusionAxiom, tolerance: f64) -> Self {
        Tracker { axiom, residual: 0.0, tolerance, detail: None }
    }

    fn record(&mut self, residual: f64, what: impl FnOnce() -> String) {
        if residual > self.tolerance && self.detail.is_none() {
            self.detail = Some(what());
        }
        self.residual = self.residual.max(residual);
    }

    fn finish(self) -> FusionCheck {
        FusionCheck { axiom: self.axiom, residual: self.residual, passed: self.residual <= self.tolerance, detail: self.detail }
    }
}

/// Checks every fusion-ring axiom exhaustively; the dimension homomorphism at 1e-9.
pub fn verify_fusion_ring(ring: &FusionRing) -> FusionReport {
    let size = ring.len();
    let n = &ring.n;
    let e = ring.unit;
    let name = |i: usize| ring.labels[i].clone();

    let mut unit = Tracker::new(FusionAxiom::Unit, 0.0);
    let mut conj = Tracker::new(FusionAxiom::Conjugation, 0.0);
    for i in 0..size {
        for k in 0..size {
            let expect = u32::from(i == k);
            let bad = n[e][i][k] != expect || n[i][e][k] != expect;
            unit.record(f64::from(u8::from(bad)), || format!("unit law at ({}, {})", name(i), name(k)));
        }
        let c = ring.conj[i];
        let bad = c >= size || ring.conj[c] != i || n[i][c][e] != 1;
        conj.record(f64::from(u8::from(bad)), || format!("conjugate of {}", name(i)));
    }
    if ring.conj[e] != e {
        conj.record(1.0, || "conjugate of the unit".into());
    }

    let mut assoc = Tracker::new(FusionAxiom::Associativity, 0.0);
    for i in 0..size {
        for j in 0..size {
            for k in 0..size {
                for l in 0..size {
                    let left: u32 = (0..size).map(|m| n[i][j][m] * n[m][k][l]).sum();
                    let right: u32 = (0..size).map(|m| n[i][m][l] * n[j][k][m]).sum();
                    assoc.record(f64::from(left.abs_diff(right)), || {
                        format!("(({} {}) {}) vs ({} ({} {})) at {}", name(i), name(j), name(k), name(i), name(j), name(k), name(l))
                    });
                }
            }
        }
    }

    let mut frob = Tracker::new(FusionAxiom::Frobenius, 0.0);
    let conj_ok = ring.conj.iter().all(|&c| c < size);
    if conj_ok {
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let a = n[i][j][k];
                    let b = n[ring.conj[i]][k][j];
                    let c2 = n[k][ring.conj[j]][i];
                    let diff = a.abs_diff(b).max(a.abs_diff(c2));
                    frob.record(f64::from(diff), || format!("N^{}_{{{} {}}}", name(k), name(i), name(j)));
                }
            }
        }
    }

    let dim_tol = 1e-9;
    let mut d_unit = Tracker::new(FusionAxiom::DimensionOfUnit, dim_tol);
    d_unit.record((ring.dq[e] - 1.0).abs(), || "dq(e) ≠ 1".into());
    let mut d_conj = Tracker::new(FusionAxiom::DimensionOfConjugate, dim_tol);
    let mut d_pos = Tracker::new(FusionAxiom::DimensionPositive, 0.0);
    let mut d_hom = Tracker::new(FusionAxiom::DimensionHomomorphism, dim_tol);
    for i in 0..size {
        if conj_ok {
            d_conj.record((ring.dq[i] - ring.dq[ring.conj[i]]).abs(), || format!("dq({}) ≠ dq(conj)", name(i)));
        }
        d_pos.record(if ring.dq[i] > 0.0 { 0.0 } else { 1.0 }, || format!("dq({}) not positive", name(i)));
        for j in 0..size {
            if !ring.multiplicative_pair(i, j) {
                continue;
            }
            let right: f64 = (0..size).map(|k| f64::from(n[i][j][k]) * ring.dq[k]).sum();
            d_hom.record((ring.dq[i] * ring.dq[j] - right).abs(), || format!("dq({}) dq({})", name(i), name(j)));
        }
    }

    FusionReport {
        ring: ring.name.clone(),
        checks: vec![
            unit.finish(),
            conj.finish(),
            assoc.finish(),
            frob.finish(),
            d_unit.finish(),
            d_conj.finish(),
            d_pos.finish(),
            d_hom.finish(),
        ],
    }
}

/// Perron–Frobenius eigenvector of `Σ_i N_i`, normalized at the unit.
///
/// On a complete ring this is the only positive dimension function.
pub fn perron_dimensions(ring: &FusionRing) -> Vec<f64> {
    let size = ring.len();
    let matrix = nalgebra::DMatrix::from_fn(size, size, |k, j| (0..size).map(|i| f64::from(ring.n[i][j][k])).sum::<f64>());
    let mut v = nalgebra::DVector::from_element(size, 1.0);
    for _ in 0..2000 {
        let next = &matrix * &v;
        let norm = next.norm();
        if norm == 0.0 {
            break;
        }
        v = next / norm;
    }
    let scale = v[ring.unit];
    v.iter().map(|x| x / scale).collect()
}

/// `Tr_q(f^α) = Tr(ρ_α f^α)` for every supported block.
pub fn quantum_trace(table: &IrrTable, f: &FinSupp) -> Result<BTreeMap<usize, C64>, CategoryError> {
    f.check(table)?;
    Ok(f.blocks
        .iter()
        .map(|(&a, m)| {
            let value: C64 = (0..m.nrows()).map(|i| m[(i, i)] * table.rho[a][i]).sum();
            (a, value)
        })
        .collect())
}

/// A function on labels, with an optional upper bound for its CB norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatMultiplier {
    pub values: Vec<C64>,
    pub cb_bound: Option<f64>,
}

impl CatMultiplier {
    pub fn new(values: Vec<C64>, cb_bound: Option<f64>) -> Result<Self, CategoryError> {
        let m = CatMultiplier { values, cb_bound };
        if let Some(bound) = cb_bound {
            let norm = m.sup_norm();
            if norm > bound {
                return Err(CategoryError::BoundViolated { norm, bound });
            }
        }
        Ok(m)
    }

    pub fn constant(size: usize, value: C64) -> Self {
        CatMultiplier { values: vec![value; size], cb_bound: None }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&k| self.values[k] != ZERO).collect()
    }

    fn check_len(&self, size: usize) -> Result<(), CategoryError> {
        if self.values.len() != size {
            return Err(CategoryError::ShapeMismatch(format!("θ has {} values, expected {size}", self.values.len())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pairing {
    pub value: C64,
    /// `Σ_k dq(k) |ω(k)|`.
    pub weighted_l1: f64,
}

/// `Σ_k dq(k) ω(k) θ(k)`.
pub fn mult_pair(ring: &FusionRing, theta: &CatMultiplier, omega: &[C64]) -> Result<Pairing, CategoryError> {
    theta.check_len(ring.len())?;
    if omega.len() != ring.len() {
        return Err(CategoryError::ShapeMismatch(format!("ω has {} values", omega.len())));
    }
    let value = (0..ring.len()).map(|k| omega[k] * theta.values[k] * ring.dq[k]).sum();
    let weighted_l1 = (0..ring.len()).map(|k| ring.dq[k] * omega[k].norm()).sum();
    Ok(Pairing { value, weighted_l1 })
}

/// Convolution in the fusion algebra `ℂ[Irr]`, the unit corner of the tube algebra.
pub fn corner_multiply(ring: &FusionRing, f: &[C64], g: &[C64]) -> Result<Vec<C64>, CategoryError> {
    let size = ring.len();
    if f.len() != size || g.len() != size {
        return Err(CategoryError::ShapeMismatch("corner elements must have one value per label".into()));
    }
    let mut out = vec![ZERO; size];
    for i in 0..size {
        if f[i] == ZERO {
            continue;
        }
        for j in 0..size {
            if g[j] == ZERO {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate() {
                let m = ring.n[i][j][k];
                if m > 0 {
                    *slot += f[i] * g[j] * f64::from(m);
                }
            }
        }
    }
    Ok(out)
}

/// The corner trace: the unit coefficient weighted by `dq(e) = 1`.
pub fn corner_trace(ring: &FusionRing, f: &[C64]) -> C64 {
    f[ring.unit] * ring.dq[ring.unit]
}

/// `Tr(g M_θ(f))` with `M_θ(f)(k) = θ(k) f(k)`.
pub fn corner_pairing(ring: &FusionRing, theta: &CatMultiplier, f: &[C64], g: &[C64]) -> Result<C64, CategoryError> {
    theta.check_len(ring.len())?;
    let scaled: Vec<C64> = f.iter().zip(&theta.values).map(|(a, b)| a * b).collect();
    Ok(corner_trace(ring, &corner_multiply(ring, g, &scaled)?))
}

/// `Σ_α θ(α) p_α` over the labels where `θ` is nonzero.
pub fn central_correspondence(table: &IrrTable, theta: &CatMultiplier) -> Result<FinSupp, CategoryError> {
    theta.check_len(table.len())?;
    let values: Vec<(usize, C64)> = theta.support().into_iter().map(|a| (a, theta.values[a])).collect();
    Ok(FinSupp::central(table, &values))
}

/// `Θ^l` of a central element is block-scalar: the residual of `Θ(a)(x)^α = θ(α) x^α`.
pub fn block_scalar_residual(table: &IrrTable, theta: &CatMultiplier, image: &crate::corep::PolElement, input: &crate::corep::PolElement) -> f64 {
    input
        .coeffs
        .iter()
        .map(|(a, x)| {
            let expected: CMat = x * theta.values[*a];
            let got = image.block(table, *a);
            crate::linalg::max_abs(&(got - expected))
        })
        .fold(0.0, f64::max)
}

/// `N_θ` on a Drinfeld double by both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct DrinfeldMultiplier {
    /// Scales `U^α_ij ⋈ x^β_kl` by `θ(α)`, in the basis of the double.
    pub matrix: CMat,
    /// `Θ^l(γ₁(Σ θ(α) p_α))` read off `W_m`.
    pub engine: CMat,
    pub residual: f64,
}

/// `N_θ` on the double built by [`drinfeld_double`](crate::doubles::drinfeld_double).
pub fn drinfeld_mult(double: &DoubleCrossed, theta: &CatMultiplier) -> Result<DrinfeldMultiplier, CategoryError> {
    let tags = double.tags.as_ref().ok_or(CategoryError::BasisTagMissing)?;
    let table = &tags.bridge.table;
    theta.check_len(table.len())?;
    let scale = CMat::from_diagonal(&CVec::from_iterator(
        tags.entries.len(),
        tags.entries.iter().map(|tag| theta.values[tag.alpha]),
    ));
    let matrix = &tags.basis * scale * &tags.inverse;

    let blocks = &tags.bridge.dual_blocks.decomposition.blocks;
    let d = blocks[0].central_projection.nrows();
    let mut central = CMat::zeros(d, d);
    for (alpha, block) in blocks.iter().enumerate() {
        if theta.values[alpha] != ZERO {
            central += &block.central_projection * theta.values[alpha];
        }
    }
    let (engine, _) = double.left_multiplier(&double.gamma_first(&central));
    let residual = crate::linalg::max_abs(&(&engine - &matrix));
    Ok(DrinfeldMultiplier { matrix, engine, residual })
}
