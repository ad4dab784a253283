//! Matches the coefficient calculus with a finite quantum group from the engine.
//!
//! The engine's algebra plays `Pol(Γ̂)` and its dual plays `ℓ∞(Γ)`. Splitting the
//! dual into matrix units `e^α_ij` and expanding `W = Σ U^α_ij ⊗ e^α_ij` produces
//! the matrix coefficients, from which the table is read off.

use std::collections::BTreeMap;

use crate::hopf_engine::{expand_second_leg, AlgebraBlocks, HopfError, QuantumGroup};
use crate::linalg::{max_abs_vec, nullspace, CMat, CVec, ONE, ZERO};

use super::{theta_apply, CorepError, FinSupp, IrrTable, PolElement, TableParts};

#[derive(Debug, Clone)]
pub struct EngineBridge {
    pub group: QuantumGroup,
    pub table: IrrTable,
    /// Wedderburn decomposition of the dual; block `α` of the table is block `α` here.
    pub dual_blocks: AlgebraBlocks,
    /// `U^α_ij` as vectors in the engine basis, `[α][i * d + j]`.
    pub coefficients: Vec<Vec<CVec>>,
    /// Columns are the `U^α_ij` in table order.
    coefficient_basis: CMat,
    coefficient_inverse: CMat,
}

impl EngineBridge {
    pub fn new(group: QuantumGroup, seed: u64) -> Result<Self, CorepError> {
        let n = group.dim();
        let dual_blocks = group.dual_blocks(seed)?;
        let blocks = &dual_blocks.decomposition.blocks;
        let units: Vec<CMat> = blocks.iter().flat_map(|b| b.units.iter().cloned()).collect();
        let (firsts, fit) = expand_second_leg(&group.w.matrix, &units, n, n);
        if fit > 1e-8 {
            return Err(HopfError::Decomposition(format!("W does not expand over the dual units ({fit:.2e})")).into());
        }
        let mut coefficients: Vec<Vec<CVec>> = Vec::with_capacity(blocks.len());
        let mut it = firsts.iter();
        for b in blocks {
            coefficients.push((0..b.size * b.size).map(|_| group.element_of(it.next().expect("one per unit"))).collect());
        }
        let flat: Vec<&CVec> = coefficients.iter().flatten().collect();
        let coefficient_basis = CMat::from_fn(n, flat.len(), |r, c| flat[c][r]);
        let coefficient_inverse = coefficient_basis
            .clone()
            .try_inverse()
            .ok_or_else(|| HopfError::Decomposition("matrix coefficients are not a basis".into()))?;

        let dims: Vec<usize> = blocks.iter().map(|b| b.size).collect();
        let unit = &group.data.unit;
        let trivial = (0..dims.len())
            .find(|&a| dims[a] == 1 && max_abs_vec(&(&coefficients[a][0] - unit)) < 1e-8)
            .ok_or_else(|| HopfError::Decomposition("no block carries the trivial corepresentation".into()))?;
        let mut generic = 0;
        let labels: Vec<String> = (0..dims.len())
            .map(|a| {
                if a == trivial {
                    "e".to_string()
                } else {
                    generic += 1;
                    format!("a{generic}")
                }
            })
            .collect();

        let mut acc = 0;
        let offsets: Vec<usize> = dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d * d;
                o
            })
            .collect();
        let ctx = Expansion { group: &group, coefficients: &coefficients, inverse: &coefficient_inverse, dims: &dims, offsets };
        let conj = (0..dims.len()).map(|a| ctx.conjugate_label(a)).collect::<Result<Vec<_>, _>>()?;
        let intertwiners = (0..dims.len()).map(|a| ctx.intertwiner(a, conj[a])).collect::<Result<Vec<_>, _>>()?;
        let fusion = ctx.fusion();
        let table = IrrTable::new(TableParts {
            name: format!("dual of {}", group.data.basis.join(",")),
            labels,
            trivial,
            rho: dims.iter().map(|&d| vec![1.0; d]).collect(),
            dims,
            conj,
            fusion: Some(fusion),
            conj_intertwiner: Some(intertwiners),
            truncated: false,
        })?;
        Ok(EngineBridge { group, table, dual_blocks, coefficients, coefficient_basis, coefficient_inverse })
    }

    /// `Σ a^α_ij e^α_ij` in the engine's dual basis.
    pub fn finsupp_to_dual(&self, a: &FinSupp) -> Result<CVec, CorepError> {
        a.check(&self.table)?;
        let blocks = &self.dual_blocks.decomposition.blocks;
        let n = self.group.dim();
        let mut op = CMat::zeros(n, n);
        for (&k, m) in &a.blocks {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    if m[(i, j)] != ZERO {
                        op += blocks[k].unit(i, j) * m[(i, j)];
                    }
                }
            }
        }
        Ok(self.group.dual.expand(&op).0)
    }

    /// Block components of a dual element.
    pub fn dual_to_finsupp(&self, x: &CVec) -> FinSupp {
        let components = self.dual_blocks.decomposition.components(&self.group.dual.operator(x));
        FinSupp { blocks: components.into_iter().enumerate().collect() }
    }

    pub fn pol_to_data(&self, x: &PolElement) -> Result<CVec, CorepError> {
        x.check(&self.table)?;
        let mut out = CVec::zeros(self.group.dim());
        for (&a, m) in &x.coeffs {
            let d = m.nrows();
            for k in 0..d * d {
                let z = m[(k / d, k % d)];
                if z != ZERO {
                    out += &self.coefficients[a][k] * z;
                }
            }
        }
        Ok(out)
    }

    pub fn data_to_pol(&self, x: &CVec) -> PolElement {
        let flat = self.flat_coefficients(x);
        let mut coeffs = BTreeMap::new();
        let mut offset = 0;
        for (a, &d) in self.table.dims.iter().enumerate() {
            coeffs.insert(a, CMat::from_fn(d, d, |i, j| flat[offset + i * d + j]));
            offset += d * d;
        }
        PolElement { coeffs }
    }

    /// `Θ^l(a)` computed by the engine from `(1⊗a)W = (Θ⊗id)W`, with its residual.
    pub fn theta_engine(&self, a: &FinSupp) -> Result<(CMat, f64), CorepError> {
        Ok(self.group.left_multiplier(&self.finsupp_to_dual(a)?))
    }

    /// `Θ^l(a)` from the coefficient formula, as a matrix on the engine basis.
    pub fn theta_coefficients(&self, a: &FinSupp) -> Result<CMat, CorepError> {
        let n = self.group.dim();
        let mut out = CMat::zeros(n, n);
        for k in 0..n {
            let x = self.data_to_pol(&crate::linalg::basis_vector(n, k));
            out.set_column(k, &self.pol_to_data(&theta_apply(&self.table, a, &x)?)?);
        }
        Ok(out)
    }

    fn flat_coefficients(&self, x: &CVec) -> CVec {
        &self.coefficient_inverse * x
    }

    /// Matrix coefficients with the given block, in the engine basis.
    pub fn coefficient(&self, label: usize, i: usize, j: usize) -> &CVec {
        &self.coefficients[label][i * self.table.dims[label] + j]
    }

    /// Columns of this matrix are the `U^α_ij` in table order.
    pub fn coefficient_basis(&self) -> &CMat {
        &self.coefficient_basis
    }
}

/// Expansion of engine elements over the matrix coefficients, used while reading off the table.
struct Expansion<'a> {
    group: &'a QuantumGroup,
    coefficients: &'a [Vec<CVec>],
    inverse: &'a CMat,
    dims: &'a [usize],
    offsets: Vec<usize>,
}

impl Expansion<'_> {
    /// Coefficients of an engine element in the `U^α_ij` basis, flattened in table order.
    fn flat_coefficients(&self, x: &CVec) -> CVec {
        self.inverse * x
    }

    fn conjugate_label(&self, a: usize) -> Result<usize, CorepError> {
        let star = self.group.data.star_of(&self.coefficients[a][0]);
        let flat = self.flat_coefficients(&star);
        let weight = |b: usize| (0..self.dims[b] * self.dims[b]).map(|k| flat[self.offsets[b] + k].norm()).sum::<f64>();
        let best = (0..self.dims.len()).max_by(|x, y| weight(*x).total_cmp(&weight(*y))).expect("non-empty");
        if self.dims[best] != self.dims[a] {
            return Err(CorepError::InvalidTable("adjoint of a coefficient leaves its dimension".into()));
        }
        Ok(best)
    }

    /// `T` with `(U^α_ij)* = (T U^ᾱ T⁻¹)_ij`, normalized to be unitary.
    fn intertwiner(&self, a: usize, conj: usize) -> Result<CMat, CorepError> {
        let d = self.dims[a];
        // (U^α_ik)* = Σ_mn M[ik][mn] U^ᾱ_mn
        let m: Vec<CVec> = (0..d * d)
            .map(|ik| {
                let flat = self.flat_coefficients(&self.group.data.star_of(&self.coefficients[a][ik]));
                CVec::from_fn(d * d, |mn, _| flat[self.offsets[conj] + mn])
            })
            .collect();
        // Σ_k M[ik][mn] T_kj − δ_nj T_im = 0, unknowns T_kj at k*d+j.
        let mut system = CMat::zeros(d * d * d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                for mm in 0..d {
                    for nn in 0..d {
                        let row = ((i * d + j) * d + mm) * d + nn;
                        for k in 0..d {
                            system[(row, k * d + j)] += m[i * d + k][mm * d + nn];
                        }
                        if nn == j {
                            system[(row, i * d + mm)] -= ONE;
                        }
                    }
                }
            }
        }
        let null = nullspace(&system, 1e-8);
        if null.ncols() != 1 {
            return Err(CorepError::InvalidTable(format!(
                "conjugation intertwiner space has dimension {}",
                null.ncols()
            )));
        }
        let t = CMat::from_fn(d, d, |k, j| null[(k * d + j, 0)]);
        let norm = ((t.adjoint() * &t).trace().re / d as f64).sqrt();
        // Fix the phase by making the largest entry real and positive.
        let pivot = t.iter().copied().fold(ZERO, |acc, z| if z.norm() > acc.norm() + 1e-12 { z } else { acc });
        Ok(t * (pivot.conj() / (pivot.norm() * norm)))
    }

    fn fusion(&self) -> Vec<(usize, usize, usize, u32)> {
        let characters: Vec<CVec> = (0..self.dims.len())
            .map(|a| (0..self.dims[a]).map(|i| self.coefficients[a][i * self.dims[a] + i].clone()).sum())
            .collect();
        let mut out = Vec::new();
        for a in 0..self.dims.len() {
            for b in 0..self.dims.len() {
                let flat = self.flat_coefficients(&self.group.data.product(&characters[a], &characters[b]));
                for g in 0..self.dims.len() {
                    let m = flat[self.offsets[g]].re.round();
                    if m > 0.0 {
                        out.push((a, b, g, m as u32));
                    }
                }
            }
        }
        out
    }
}
