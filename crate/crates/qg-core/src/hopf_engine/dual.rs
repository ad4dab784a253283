use crate::linalg::{
    max_abs, max_abs_vec, pseudo_inverse, solve_least_squares, solve_least_squares_vec, CMat, CVec,
    ONE, ZERO,
};

use super::unitary::{expand_first_leg, expand_second_leg, gns_operators};
use super::{HaarData, HopfData, HopfError, Tensor3, UnitaryTensor};

/// The dual Hopf algebra together with its concrete realization on the GNS space.
#[derive(Debug, Clone)]
pub struct DualHopf {
    pub hopf: HopfData,
    /// `x̂_i` with `W = Σ_i π(e_i) ⊗ x̂_i`.
    pub operators: Vec<CMat>,
    pinv: CMat,
    pub span_residual: f64,
    pub closure_residual: f64,
    pub comultiplication_residual: f64,
}

fn vec_op(m: &CMat) -> CVec {
    let d = m.nrows();
    CVec::from_fn(d * d, |k, _| m[(k / d, k % d)])
}

impl DualHopf {
    /// Coefficients of an operator in the `x̂` basis, and the fit residual.
    pub fn expand(&self, op: &CMat) -> (CVec, f64) {
        let v = vec_op(op);
        let coeffs = &self.pinv * &v;
        let d = op.nrows();
        let mut back = CMat::zeros(d, d);
        for (i, x) in self.operators.iter().enumerate() {
            back += x * coeffs[i];
        }
        let res = max_abs(&(back - op));
        (coeffs, res)
    }

    /// `Σ_i coeffs[i] x̂_i`.
    pub fn operator(&self, coeffs: &CVec) -> CMat {
        let d = self.operators[0].nrows();
        let mut out = CMat::zeros(d, d);
        for (i, x) in self.operators.iter().enumerate() {
            if coeffs[i] != ZERO {
                out += x * coeffs[i];
            }
        }
        out
    }

    /// Expands an operator on `H ⊗ H` in `x̂_j ⊗ x̂_k`.
    pub fn expand_tensor(&self, op: &CMat) -> (CMat, f64) {
        let n = self.operators.len();
        let d = self.operators[0].nrows();
        let mut reshaped = CMat::zeros(d * d, d * d);
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    for s in 0..d {
                        reshaped[(p * d + q, r * d + s)] = op[(p * d + r, q * d + s)];
                    }
                }
            }
        }
        let coeffs = &self.pinv * reshaped * self.pinv.transpose();
        let mut back = CMat::zeros(d * d, d * d);
        for j in 0..n {
            for k in 0..n {
                if coeffs[(j, k)] != ZERO {
                    back += self.operators[j].kronecker(&self.operators[k]) * coeffs[(j, k)];
                }
            }
        }
        (coeffs, max_abs(&(back - op)))
    }
}

/// Solves `(ε⊗id)Δ = id = (id⊗ε)Δ` for the counit.
pub fn solve_counit(comult: &Tensor3) -> (CVec, f64) {
    let n = comult.dim();
    let mut a = CMat::zeros(2 * n * n, n);
    let mut b = CVec::zeros(2 * n * n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                a[(i * n + k, j)] += comult.get(i, j, k);
                a[(n * n + i * n + k, j)] += comult.get(i, k, j);
            }
            if i == k {
                b[i * n + k] = ONE;
                b[n * n + i * n + k] = ONE;
            }
        }
    }
    solve_least_squares_vec(&a, &b)
}

/// Solves `m(S⊗id)Δ = ε1 = m(id⊗S)Δ` for the antipode matrix.
pub fn solve_antipode(mult: &Tensor3, comult: &Tensor3, unit: &CVec, counit: &CVec) -> (CMat, f64) {
    let n = mult.dim();
    let mp = mult.sparse_pairs();
    let cl = comult.sparse_leading();
    // Unknown S[(l, j)] at column l * n + j.
    let mut a = CMat::zeros(2 * n * n, n * n);
    let mut b = CVec::zeros(2 * n * n);
    for i in 0..n {
        for &(j, k, cv) in &cl[i] {
            for l in 0..n {
                for &(p, mv) in &mp[l * n + k] {
                    a[(i * n + p, l * n + j)] += cv * mv;
                }
                for &(p, mv) in &mp[j * n + l] {
                    a[(n * n + i * n + p, l * n + k)] += cv * mv;
                }
            }
        }
        for p in 0..n {
            b[i * n + p] = counit[i] * unit[p];
            b[n * n + i * n + p] = counit[i] * unit[p];
        }
    }
    let (x, res) = solve_least_squares_vec(&a, &b);
    (CMat::from_fn(n, n, |l, j| x[l * n + j]), res)
}

/// Builds the dual Hopf algebra from the slices `(ω⊗id)W`.
pub fn dual_hopf(data: &HopfData, haar: &HaarData, w: &UnitaryTensor) -> Result<DualHopf, HopfError> {
    let n = data.dim();
    let tol = data.tolerance.value();
    let check_tol = tol.max(1e-9);
    let pis = gns_operators(data, haar)?;
    let (ops, span_res) = expand_first_leg(&w.matrix, &pis, n, n);
    if span_res > check_tol {
        return Err(HopfError::SpanNotClosed { residual: span_res });
    }
    let q = CMat::from_columns(&ops.iter().map(vec_op).collect::<Vec<_>>());
    let pinv = pseudo_inverse(&q);
    let mut dual = DualHopf {
        hopf: HopfData {
            basis: data.basis.iter().map(|b| format!("dual:{b}")).collect(),
            mult: Tensor3::zeros(n),
            unit: CVec::zeros(n),
            comult: Tensor3::zeros(n),
            counit: CVec::zeros(n),
            antipode: CMat::zeros(n, n),
            star: CMat::zeros(n, n),
            tolerance: data.tolerance,
        },
        operators: ops,
        pinv,
        span_residual: span_res,
        closure_residual: 0.0,
        comultiplication_residual: 0.0,
    };

    let mut closure: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (coeffs, res) = dual.expand(&(&dual.operators[i] * &dual.operators[j]));
            closure = closure.max(res);
            for k in 0..n {
                dual.hopf.mult.set(i, j, k, coeffs[k]);
            }
        }
        let (coeffs, res) = dual.expand(&dual.operators[i].adjoint());
        closure = closure.max(res);
        dual.hopf.star.set_column(i, &coeffs);
    }
    let (unit, res) = dual.expand(&CMat::identity(n, n));
    closure = closure.max(res);
    dual.hopf.unit = unit;
    if closure > check_tol {
        return Err(HopfError::SpanNotClosed { residual: closure });
    }
    dual.closure_residual = closure;

    // Δ̂(x̂) = Ŵ*(1⊗x̂)Ŵ with Ŵ = ΣW*Σ.
    let w_hat = w.dual();
    let w_hat_adj = w_hat.adjoint();
    let id = CMat::identity(n, n);
    let mut co_res: f64 = 0.0;
    for i in 0..n {
        let t = &w_hat_adj * id.kronecker(&dual.operators[i]) * &w_hat;
        let (coeffs, res) = dual.expand_tensor(&t);
        co_res = co_res.max(res);
        for j in 0..n {
            for k in 0..n {
                dual.hopf.comult.set(i, j, k, coeffs[(j, k)]);
            }
        }
    }
    if co_res > check_tol {
        return Err(HopfError::SpanNotClosed { residual: co_res });
    }
    dual.comultiplication_residual = co_res;

    let (counit, res) = solve_counit(&dual.hopf.comult);
    if res > check_tol {
        return Err(HopfError::AxiomViolation { axiom: super::Axiom::Counit, residual: res });
    }
    dual.hopf.counit = counit;
    let (antipode, res) = solve_antipode(&dual.hopf.mult, &dual.hopf.comult, &dual.hopf.unit, &dual.hopf.counit);
    if res > check_tol {
        return Err(HopfError::AxiomViolation { axiom: super::Axiom::Antipode, residual: res });
    }
    dual.hopf.antipode = antipode;
    Ok(dual)
}

/// Antipode of the dual computed from `Ŝ((id⊗ω)Ŵ) = (id⊗ω)Ŵ*`, in the `x̂` basis.
pub fn antipode_from_w(
    data: &HopfData,
    haar: &HaarData,
    w: &UnitaryTensor,
    dual: &DualHopf,
) -> Result<CMat, HopfError> {
    let n = data.dim();
    let pis = gns_operators(data, haar)?;
    let w_hat = w.dual();
    let (ys, r1) = expand_second_leg(&w_hat, &pis, n, n);
    let (zs, r2) = expand_second_leg(&w_hat.adjoint(), &pis, n, n);
    let mut y = CMat::zeros(n, n);
    let mut z = CMat::zeros(n, n);
    let mut res = r1.max(r2);
    for k in 0..n {
        let (cy, ry) = dual.expand(&ys[k]);
        let (cz, rz) = dual.expand(&zs[k]);
        res = res.max(ry).max(rz);
        y.set_column(k, &cy);
        z.set_column(k, &cz);
    }
    let (s_t, fit) = solve_least_squares(&y.transpose(), &z.transpose());
    let s = s_t.transpose();
    let res = res.max(fit);
    let tol = data.tolerance.value().max(1e-9);
    if res > tol {
        return Err(HopfError::InconsistentAntipode { residual: res });
    }
    let diff = max_abs(&(&s - &dual.hopf.antipode));
    if diff > tol {
        return Err(HopfError::InconsistentAntipode { residual: diff });
    }
    Ok(s)
}

/// Antipode of `A` itself from `S((id⊗ω)W) = (id⊗ω)W*`; compared with the stored antipode.
pub fn antipode_consistency(data: &HopfData, haar: &HaarData, w: &UnitaryTensor, dual: &DualHopf) -> Result<f64, HopfError> {
    let n = data.dim();
    let inv = haar.gns_inverse().ok_or(HopfError::NotFaithful { min_eigenvalue: haar.min_gram_eigenvalue })?;
    let (slices, r1) = expand_second_leg(&w.matrix, &dual.operators, n, n);
    let (slices_adj, r2) = expand_second_leg(&w.matrix.adjoint(), &dual.operators, n, n);
    let mut res = r1.max(r2);
    // π(a) = Λ L_a Λ⁻¹, so a = L_a applied to the unit.
    let recover = |op: &CMat| -> CVec { &inv * op * &haar.gns_map * &data.unit };
    for k in 0..n {
        let a = recover(&slices[k]);
        let b = recover(&slices_adj[k]);
        res = res.max(max_abs_vec(&(data.antipode_of(&a) - b)));
    }
    Ok(res)
}

/// An explicit isomorphism `dual(dual(A)) → A` with its intertwining residual.
#[derive(Debug, Clone)]
pub struct Biduality {
    /// Column `j` holds the image of the `j`-th double-dual basis element.
    pub map: CMat,
    pub residual: f64,
}

/// Builds the candidate isomorphism from slices of `Ŵ` and checks every structure map.
pub fn biduality(
    data: &HopfData,
    haar: &HaarData,
    w: &UnitaryTensor,
    dual: &DualHopf,
    double_dual: &HopfData,
) -> Result<Biduality, HopfError> {
    let n = data.dim();
    let pis = gns_operators(data, haar)?;
    let (ys, _) = expand_second_leg(&w.dual(), &pis, n, n);
    // Ŵ = Σ_k y_k ⊗ π(e_k) = Σ_j x̂_j ⊗ (Σ_k Y[j][k] π(e_k)).
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        let (cy, _) = dual.expand(&ys[k]);
        y.set_column(k, &cy);
    }
    let map = y.transpose();
    let residual = isomorphism_residual(double_dual, data, &map);
    let tol = 1e-8;
    if residual > tol {
        return Err(HopfError::NoIsomorphism { residual });
    }
    Ok(Biduality { map, residual })
}

/// Max residual of `φ` intertwining product, unit, coproduct, counit, star and antipode.
pub fn isomorphism_residual(from: &HopfData, to: &HopfData, map: &CMat) -> f64 {
    let n = from.dim();
    if to.dim() != n || map.nrows() != n || map.ncols() != n {
        return f64::INFINITY;
    }
    let img: Vec<CVec> = (0..n).map(|i| map.column(i).into_owned()).collect();
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut lhs = CVec::zeros(n);
            for k in 0..n {
                let m = from.mult.get(i, j, k);
                if m != ZERO {
                    lhs += &img[k] * m;
                }
            }
            res = res.max(max_abs_vec(&(lhs - to.product(&img[i], &img[j]))));
        }
        // Coproduct: (φ⊗φ)Δ(e_i) = Δ(φ(e_i)).
        let lhs = map * from.coproduct(&from.basis_element(i)) * map.transpose();
        res = res.max(max_abs(&(lhs - to.coproduct(&img[i]))));
        res = res.max((from.counit[i] - to.counit_of(&img[i])).norm());
        let star_img = map * from.star.column(i);
        res = res.max(max_abs_vec(&(star_img - to.star_of(&img[i]))));
        let s_img = map * from.antipode.column(i);
        res = res.max(max_abs_vec(&(s_img - to.antipode_of(&img[i]))));
    }
    res = res.max(max_abs_vec(&(map * &from.unit - &to.unit)));
    res
}
