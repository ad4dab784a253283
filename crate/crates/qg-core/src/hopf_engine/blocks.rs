//! Wedderburn decomposition of a finite-dimensional *-algebra of operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{hermitian_eigen, max_abs, nullspace, r, CMat, CVec, C64, ONE, ZERO};

use super::HopfError;

/// One matrix block `M_d` realized by matrix units `E_ij`.
#[derive(Debug, Clone)]
pub struct Block {
    pub size: usize,
    /// `units[i * size + j] = E_ij`.
    pub units: Vec<CMat>,
    pub central_projection: CMat,
}

impl Block {
    pub fn unit(&self, i: usize, j: usize) -> &CMat {
        &self.units[i * self.size + j]
    }
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    /// Max residual of the matrix-unit relations and of completeness.
    pub residual: f64,
}

impl BlockDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// Block components `x_ij` of an operator `x = Σ x_ij E_ij`.
    pub fn components(&self, op: &CMat) -> Vec<CMat> {
        self.blocks
            .iter()
            .map(|b| {
                let norm = b.unit(0, 0).trace();
                CMat::from_fn(b.size, b.size, |i, j| (b.unit(j, i) * op).trace() / norm)
            })
            .collect()
    }

    pub fn assemble(&self, components: &[CMat]) -> CMat {
        let d = self.blocks[0].units[0].nrows();
        let mut out = CMat::zeros(d, d);
        for (b, comp) in self.blocks.iter().zip(components) {
            for i in 0..b.size {
                for j in 0..b.size {
                    if comp[(i, j)] != ZERO {
                        out += b.unit(i, j) * comp[(i, j)];
                    }
                }
            }
        }
        out
    }
}

fn span_matrix(ops: &[CMat]) -> CMat {
    let d = ops[0].nrows();
    CMat::from_fn(d * d, ops.len(), |k, i| ops[i][(k / d, k % d)])
}

fn numerical_rank(ops: &[CMat], tol: f64) -> usize {
    if ops.is_empty() {
        return 0;
    }
    span_matrix(ops).singular_values().iter().filter(|s| **s > tol).count()
}

/// Groups sorted eigenvalues into clusters separated by more than `gap`.
fn clusters(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(last) if (v - values[*last.last().unwrap()]).abs() <= gap => last.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

fn projection(vectors: &CMat, idx: &[usize]) -> CMat {
    let d = vectors.nrows();
    let mut p = CMat::zeros(d, d);
    for &k in idx {
        let v = vectors.column(k);
        p += &v * v.adjoint();
    }
    p
}

fn random_combination(rng: &mut ChaCha8Rng, ops: &[CMat], complex: bool) -> CMat {
    let d = ops[0].nrows();
    let mut m = CMat::zeros(d, d);
    for op in ops {
        let coef = if complex {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            r(rng.gen_range(-1.0..1.0))
        };
        m += op * coef;
    }
    m
}

/// Decomposes the *-algebra spanned by `ops` into matrix blocks.
///
/// Blocks are ordered by size, then by the eigenvalue of a seeded random
/// central element, so the result is deterministic in `seed`.
pub fn wedderburn(ops: &[CMat], seed: u64) -> Result<BlockDecomposition, HopfError> {
    if ops.is_empty() {
        return Err(HopfError::Decomposition("empty operator list".into()));
    }
    let d = ops[0].nrows();
    let k = ops.len();
    let scale = ops.iter().map(max_abs).fold(0.0, f64::max).max(1e-300);
    let rank_tol = 1e-8 * scale * (d as f64);

    // Center: Σ c_i [B_i, B_j] = 0 for all j.
    let mut comm = CMat::zeros(k * d * d, k);
    for (i, bi) in ops.iter().enumerate() {
        for (j, bj) in ops.iter().enumerate() {
            let cm = bi * bj - bj * bi;
            for p in 0..d {
                for q in 0..d {
                    comm[(j * d * d + p * d + q, i)] = cm[(p, q)];
                }
            }
        }
    }
    let center_coeffs = nullspace(&comm, 1e-8 * scale * scale * (d as f64));
    let center: Vec<CMat> = (0..center_coeffs.ncols())
        .map(|c| {
            let mut z = CMat::zeros(d, d);
            for (i, op) in ops.iter().enumerate() {
                z += op * center_coeffs[(i, c)];
            }
            z
        })
        .collect();
    if center.is_empty() {
        return Err(HopfError::Decomposition("trivial center".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..8 {
        let z = random_combination(&mut rng, &center, true);
        let z = (&z + z.adjoint()) * r(0.5);
        let (values, vectors) = hermitian_eigen(&z);
        let spread = values.last().unwrap() - values[0];
        let groups = clusters(&values, 1e-7 * (1.0 + spread.abs()));
        if groups.len() != center.len() {
            continue;
        }
        let mut raw_blocks: Vec<(usize, f64, CMat)> = Vec::new();
        let mut ok = true;
        for g in &groups {
            let p = projection(&vectors, g);
            let restricted: Vec<CMat> = ops.iter().map(|b| &p * b).collect();
            let dim = numerical_rank(&restricted, rank_tol);
            let size = (dim as f64).sqrt().round() as usize;
            if size * size != dim || size == 0 {
                ok = false;
                break;
            }
            raw_blocks.push((size, values[g[0]], p));
        }
        if !ok {
            continue;
        }
        raw_blocks.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

        let mut blocks = Vec::with_capacity(raw_blocks.len());
        for (size, _, p) in raw_blocks {
            match block_units(&mut rng, ops, &p, size) {
                Some(b) => blocks.push(b),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let decomposition = BlockDecomposition { residual: 0.0, blocks };
        let residual = unit_relations_residual(&decomposition, ops);
        return Ok(BlockDecomposition { residual, ..decomposition });
    }
    Err(HopfError::Decomposition("no generic central element found".into()))
}

fn block_units(rng: &mut ChaCha8Rng, ops: &[CMat], p: &CMat, size: usize) -> Option<Block> {
    let d = p.nrows();
    let id = CMat::identity(d, d);
    let minimal: Vec<CMat> = if size == 1 {
        vec![p.clone()]
    } else {
        let y = random_combination(rng, ops, false);
        let y = p * (&y + y.adjoint()) * p * r(0.5);
        let bound = crate::linalg::operator_norm(&y) + 1.0;
        let shifted = &y + (&id - p) * r(4.0 * bound);
        let (values, vectors) = hermitian_eigen(&shifted);
        let inside: Vec<usize> = (0..d).filter(|&k| values[k] < 2.0 * bound).collect();
        let inside_values: Vec<f64> = inside.iter().map(|&k| values[k]).collect();
        let groups = clusters(&inside_values, 1e-7 * (1.0 + bound));
        if groups.len() != size {
            return None;
        }
        groups
            .iter()
            .map(|g| projection(&vectors, &g.iter().map(|&i| inside[i]).collect::<Vec<_>>()))
            .collect()
    };

    let mut column: Vec<CMat> = vec![minimal[0].clone()];
    let q1_trace = minimal[0].trace().re;
    for q in minimal.iter().skip(1) {
        let m = random_combination(rng, ops, true);
        let x = q * m * &minimal[0];
        let norm = (x.adjoint() * &x).trace().re / q1_trace;
        if norm < 1e-16 {
            return None;
        }
        let mut v = x / r(norm.sqrt());
        let (mut best, mut phase) = (0.0, ONE);
        for z in v.iter() {
            if z.norm() > best + 1e-9 {
                best = z.norm();
                phase = z.conj() / z.norm();
            }
        }
        v *= phase;
        column.push(v);
    }
    let mut units = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            units.push(&column[i] * column[j].adjoint());
        }
    }
    Some(Block { size, units, central_projection: p.clone() })
}

fn unit_relations_residual(dec: &BlockDecomposition, ops: &[CMat]) -> f64 {
    let d = ops[0].nrows();
    let mut res: f64 = 0.0;
    let mut total = CMat::zeros(d, d);
    for b in &dec.blocks {
        for i in 0..b.size {
            total += b.unit(i, i);
            for j in 0..b.size {
                res = res.max(max_abs(&(b.unit(i, j).adjoint() - b.unit(j, i))));
                for k in 0..b.size {
                    for l in 0..b.size {
                        let prod = b.unit(i, j) * b.unit(k, l);
                        let expect = if j == k { b.unit(i, l).clone() } else { CMat::zeros(d, d) };
                        res = res.max(max_abs(&(prod - expect)));
                    }
                }
            }
        }
    }
    res = res.max(max_abs(&(total - CMat::identity(d, d))));
    for op in ops {
        let back = dec.assemble(&dec.components(op));
        res = res.max(max_abs(&(back - op)));
    }
    res
}

/// A finite-dimensional *-algebra written as `⊕ M_{d_b}`.
///
/// Built from a faithful *-representation `ops[i] = π(e_i)`, so the block
/// coordinates form a *-isomorphism onto the direct sum of matrix algebras.
#[derive(Debug, Clone)]
pub struct AlgebraBlocks {
    pub decomposition: BlockDecomposition,
    regular: Vec<CMat>,
    /// Algebra elements realizing the matrix units, per block, `[i * size + j]`.
    pub unit_elements: Vec<Vec<CVec>>,
    dim: usize,
}

impl AlgebraBlocks {
    pub fn from_operators(ops: &[CMat], seed: u64) -> Result<Self, HopfError> {
        let decomposition = wedderburn(ops, seed)?;
        let d = ops[0].nrows();
        let span = CMat::from_fn(d * d, ops.len(), |k, i| ops[i][(k / d, k % d)]);
        let pinv = crate::linalg::pseudo_inverse(&span);
        let unit_elements = decomposition
            .blocks
            .iter()
            .map(|b| {
                b.units
                    .iter()
                    .map(|e| &pinv * CVec::from_fn(d * d, |k, _| e[(k / d, k % d)]))
                    .collect()
            })
            .collect();
        Ok(AlgebraBlocks { decomposition, regular: ops.to_vec(), unit_elements, dim: ops.len() })
    }

    /// Total dimension `Σ d_b²`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.decomposition.sizes()
    }

    fn regular_of(&self, x: &CVec) -> CMat {
        let n = x.len();
        let mut m = CMat::zeros(n, n);
        for (i, op) in self.regular.iter().enumerate() {
            if x[i] != ZERO {
                m += op * x[i];
            }
        }
        m
    }

    pub fn to_blocks(&self, x: &CVec) -> Vec<CMat> {
        self.decomposition.components(&self.regular_of(x))
    }

    pub fn from_blocks(&self, blocks: &[CMat]) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (b, comp) in self.unit_elements.iter().zip(blocks) {
            let size = comp.nrows();
            for i in 0..size {
                for j in 0..size {
                    if comp[(i, j)] != ZERO {
                        out += &b[i * size + j] * comp[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Row-major concatenation of the block components.
    pub fn vectorize(&self, x: &CVec) -> CVec {
        let blocks = self.to_blocks(x);
        let entries: Vec<C64> = blocks.iter().flat_map(|b| {
            let (n, m) = b.shape();
            (0..n * m).map(move |k| b[(k / m, k % m)])
        }).collect();
        CVec::from_vec(entries)
    }

    pub fn devectorize(&self, v: &CVec) -> CVec {
        let mut offset = 0;
        let blocks: Vec<CMat> = self
            .sizes()
            .iter()
            .map(|&s| {
                let b = CMat::from_fn(s, s, |i, j| v[offset + i * s + j]);
                offset += s * s;
                b
            })
            .collect();
        self.from_blocks(&blocks)
    }

    /// Matrix of a linear map on the algebra, rewritten in the vectorized block basis.
    pub fn map_in_block_basis(&self, map: &CMat) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n, n);
        for k in 0..n {
            let e = crate::linalg::basis_vector(n, k);
            let x = self.devectorize(&e);
            out.set_column(k, &self.vectorize(&(map * x)));
        }
        out
    }
}
