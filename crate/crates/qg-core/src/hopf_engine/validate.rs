use std::fmt;

use crate::linalg::{max_abs, max_abs_vec, CMat, CVec, ZERO};

use super::{HopfData, HopfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Associativity,
    Unit,
    Coassociativity,
    Counit,
    ComultiplicationMultiplicative,
    ComultiplicationUnital,
    CounitMultiplicative,
    CounitUnital,
    Antipode,
    StarInvolutive,
    StarAntimultiplicative,
    ComultiplicationStar,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::Associativity,
        Axiom::Unit,
        Axiom::Coassociativity,
        Axiom::Counit,
        Axiom::ComultiplicationMultiplicative,
        Axiom::ComultiplicationUnital,
        Axiom::CounitMultiplicative,
        Axiom::CounitUnital,
        Axiom::Antipode,
        Axiom::StarInvolutive,
        Axiom::StarAntimultiplicative,
        Axiom::ComultiplicationStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::Coassociativity => "coassociativity",
            Axiom::Counit => "counit",
            Axiom::ComultiplicationMultiplicative => "comultiplication multiplicative",
            Axiom::ComultiplicationUnital => "comultiplication unital",
            Axiom::CounitMultiplicative => "counit multiplicative",
            Axiom::CounitUnital => "counit unital",
            Axiom::Antipode => "antipode",
            Axiom::StarInvolutive => "star involutive",
            Axiom::StarAntimultiplicative => "star antimultiplicative",
            Axiom::ComultiplicationStar => "comultiplication *-homomorphism",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.residual <= self.tolerance)
    }

    pub fn violations(&self) -> Vec<HopfError> {
        self.checks
            .iter()
            .filter(|c| c.residual > self.tolerance)
            .map(|c| HopfError::AxiomViolation { axiom: c.axiom, residual: c.residual })
            .collect()
    }

    pub fn residual(&self, axiom: Axiom) -> f64 {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .map(|c| c.residual)
            .unwrap_or(f64::NAN)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    /// First violation as an error, if any.
    pub fn into_result(self) -> Result<ValidationReport, HopfError> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Checks every Hopf *-algebra axiom and reports the max-abs residual of each.
pub fn validate_hopf(data: &HopfData) -> Result<ValidationReport, HopfError> {
    data.check_shapes()?;
    let n = data.dim();
    let mult = data.mult.sparse_pairs();
    let comult = data.comult.sparse_leading();
    let e = |i: usize| data.basis_element(i);
    let prod_basis = |i: usize, j: usize| -> CVec {
        let mut v = CVec::zeros(n);
        for &(k, m) in &mult[i * n + j] {
            v[k] += m;
        }
        v
    };

    let mut checks = Vec::new();
    let mut push = |axiom, residual: f64| checks.push(AxiomCheck { axiom, residual });

    // Associativity.
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ij = prod_basis(i, j);
            for l in 0..n {
                let left = data.product(&ij, &e(l));
                let right = data.product(&e(i), &prod_basis(j, l));
                res = res.max(max_abs_vec(&(left - right)));
            }
        }
    }
    push(Axiom::Associativity, res);

    // Unit.
    let mut res: f64 = 0.0;
    for j in 0..n {
        res = res.max(max_abs_vec(&(data.product(&data.unit, &e(j)) - e(j))));
        res = res.max(max_abs_vec(&(data.product(&e(j), &data.unit) - e(j))));
    }
    push(Axiom::Unit, res);

    // Coassociativity: compare (Δ⊗id)Δ and (id⊗Δ)Δ as n³ arrays.
    let mut res: f64 = 0.0;
    for i in 0..n {
        let mut left = vec![ZERO; n * n * n];
        let mut right = vec![ZERO; n * n * n];
        for &(j, k, cv) in &comult[i] {
            for &(a, b, dv) in &comult[j] {
                left[(a * n + b) * n + k] += cv * dv;
            }
            for &(a, b, dv) in &comult[k] {
                right[(j * n + a) * n + b] += cv * dv;
            }
        }
        for (l, r) in left.iter().zip(&right) {
            res = res.max((l - r).norm());
        }
    }
    push(Axiom::Coassociativity, res);

    // Counit.
    let mut res: f64 = 0.0;
    for i in 0..n {
        let mut left = CVec::zeros(n);
        let mut right = CVec::zeros(n);
        for &(j, k, cv) in &comult[i] {
            left[k] += data.counit[j] * cv;
            right[j] += data.counit[k] * cv;
        }
        res = res.max(max_abs_vec(&(left - e(i)))).max(max_abs_vec(&(right - e(i))));
    }
    push(Axiom::Counit, res);

    // Δ multiplicative.
    let coproducts: Vec<CMat> = (0..n).map(|i| data.coproduct(&e(i))).collect();
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut left = CMat::zeros(n, n);
            for &(k, m) in &mult[i * n + j] {
                left += &coproducts[k] * m;
            }
            let right = data.tensor_product(&coproducts[i], &coproducts[j]);
            res = res.max(max_abs(&(left - right)));
        }
    }
    push(Axiom::ComultiplicationMultiplicative, res);

    push(
        Axiom::ComultiplicationUnital,
        max_abs(&(data.coproduct(&data.unit) - data.unit_tensor())),
    );

    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = data.counit_of(&prod_basis(i, j));
            res = res.max((lhs - data.counit[i] * data.counit[j]).norm());
        }
    }
    push(Axiom::CounitMultiplicative, res);
    push(Axiom::CounitUnital, (data.counit_of(&data.unit) - 1.0).norm());

    // Antipode: m(S⊗id)Δ = ε1 = m(id⊗S)Δ.
    let mut res: f64 = 0.0;
    for i in 0..n {
        let mut left = CVec::zeros(n);
        let mut right = CVec::zeros(n);
        for &(j, k, cv) in &comult[i] {
            left += data.product(&data.antipode.column(j).into_owned(), &e(k)) * cv;
            right += data.product(&e(j), &data.antipode.column(k).into_owned()) * cv;
        }
        let target = &data.unit * data.counit[i];
        res = res.max(max_abs_vec(&(left - &target))).max(max_abs_vec(&(right - target)));
    }
    push(Axiom::Antipode, res);

    let conj_star = data.star.map(|z| z.conj());
    push(
        Axiom::StarInvolutive,
        max_abs(&(&data.star * conj_star - CMat::identity(n, n))),
    );

    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let left = data.star_of(&prod_basis(i, j));
            let right = data.product(&data.star.column(j).into_owned(), &data.star.column(i).into_owned());
            res = res.max(max_abs_vec(&(left - right)));
        }
    }
    push(Axiom::StarAntimultiplicative, res);

    let mut res: f64 = 0.0;
    for i in 0..n {
        let left = data.coproduct(&data.star.column(i).into_owned());
        let right = &data.star * coproducts[i].map(|z| z.conj()) * data.star.transpose();
        res = res.max(max_abs(&(left - right)));
    }
    push(Axiom::ComultiplicationStar, res);

    Ok(ValidationReport { checks, tolerance: data.tolerance.value() })
}
