//! Bundled finite quantum groups.

use crate::linalg::{c, r, CMat, CVec, Tolerance, C64, ONE, ZERO};

use super::{HopfData, Tensor3};

/// A finite group by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    /// `table[g][h]` is the index of `g h`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        (0..self.order())
            .find(|&g| (0..self.order()).all(|h| self.table[g][h] == h))
            .expect("group has an identity")
    }

    pub fn inverse(&self, g: usize) -> usize {
        let e = self.identity();
        (0..self.order()).find(|&h| self.table[g][h] == e).expect("group has inverses")
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroup {
            name: format!("Z{n}"),
            elements: (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect(),
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    /// Permutations of three points, identity first, then lexicographic.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroup {
            name: "S3".to_string(),
            elements: perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect(),
            table,
        }
    }
}

/// `C(G)`: functions on `G` with `Δδ_g = Σ_h δ_h ⊗ δ_{h⁻¹g}`.
pub fn function_algebra(group: &FiniteGroup) -> HopfData {
    let n = group.order();
    let e = group.identity();
    let mut mult = Tensor3::zeros(n);
    let mut comult = Tensor3::zeros(n);
    let mut antipode = CMat::zeros(n, n);
    for g in 0..n {
        mult.set(g, g, g, ONE);
        for h in 0..n {
            comult.set(g, h, group.table[group.inverse(h)][g], ONE);
        }
        antipode[(group.inverse(g), g)] = ONE;
    }
    HopfData {
        basis: group.elements.iter().map(|g| format!("d_{g}")).collect(),
        mult,
        unit: CVec::from_element(n, ONE),
        comult,
        counit: CVec::from_fn(n, |g, _| if g == e { ONE } else { ZERO }),
        antipode,
        star: CMat::identity(n, n),
        tolerance: Tolerance::default(),
    }
}

/// `ℂ[G]`: the group algebra with `Δλ_g = λ_g ⊗ λ_g`.
pub fn group_algebra(group: &FiniteGroup) -> HopfData {
    let n = group.order();
    let e = group.identity();
    let mut mult = Tensor3::zeros(n);
    let mut comult = Tensor3::zeros(n);
    let mut inv = CMat::zeros(n, n);
    for g in 0..n {
        for h in 0..n {
            mult.set(g, h, group.table[g][h], ONE);
        }
        comult.set(g, g, g, ONE);
        inv[(group.inverse(g), g)] = ONE;
    }
    HopfData {
        basis: group.elements.iter().map(|g| format!("l_{g}")).collect(),
        mult,
        unit: CVec::from_fn(n, |g, _| if g == e { ONE } else { ZERO }),
        comult,
        counit: CVec::from_element(n, ONE),
        antipode: inv.clone(),
        star: inv,
        tolerance: Tolerance::default(),
    }
}

/// The one-dimensional quantum group.
pub fn trivial() -> HopfData {
    let mut t = Tensor3::zeros(1);
    t.set(0, 0, 0, ONE);
    HopfData {
        basis: vec!["1".to_string()],
        mult: t.clone(),
        unit: CVec::from_element(1, ONE),
        comult: t,
        counit: CVec::from_element(1, ONE),
        antipode: CMat::identity(1, 1),
        star: CMat::identity(1, 1),
        tolerance: Tolerance::default(),
    }
}

/// The eight-dimensional Kac–Paljutkin quantum group `ℂ⁴ ⊕ M₂`.
///
/// Basis `e1..e4, a11, a12, a21, a22` where the `a_ij` are matrix units of the `M₂` summand.
pub fn kac_paljutkin() -> HopfData {
    const E1: usize = 0;
    const E2: usize = 1;
    const E3: usize = 2;
    const E4: usize = 3;
    const A11: usize = 4;
    const A12: usize = 5;
    const A21: usize = 6;
    const A22: usize = 7;
    let n = 8;
    let a = |i: usize, j: usize| 4 + 2 * i + j;

    let mut mult = Tensor3::zeros(n);
    for e in [E1, E2, E3, E4] {
        mult.set(e, e, e, ONE);
    }
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                mult.set(a(i, j), a(j, l), a(i, l), ONE);
            }
        }
    }

    let half = r(0.5);
    let im = c(0.0, 1.0);
    let mut comult = Tensor3::zeros(n);
    let mut put = |x: usize, terms: &[(usize, usize, C64)]| {
        for &(p, q, v) in terms {
            comult.add(x, p, q, v);
        }
    };
    put(
        E1,
        &[
            (E1, E1, ONE),
            (E2, E2, ONE),
            (E3, E3, ONE),
            (E4, E4, ONE),
            (A11, A11, half),
            (A12, A12, half),
            (A21, A21, half),
            (A22, A22, half),
        ],
    );
    put(
        E2,
        &[
            (E1, E2, ONE),
            (E2, E1, ONE),
            (E3, E4, ONE),
            (E4, E3, ONE),
            (A11, A22, half),
            (A22, A11, half),
            (A21, A12, half * im),
            (A12, A21, -half * im),
        ],
    );
    put(
        E3,
        &[
            (E1, E3, ONE),
            (E3, E1, ONE),
            (E2, E4, ONE),
            (E4, E2, ONE),
            (A11, A22, half),
            (A22, A11, half),
            (A21, A12, -half * im),
            (A12, A21, half * im),
        ],
    );
    put(
        E4,
        &[
            (E1, E4, ONE),
            (E4, E1, ONE),
            (E2, E3, ONE),
            (E3, E2, ONE),
            (A11, A11, half),
            (A22, A22, half),
            (A12, A12, -half),
            (A21, A21, -half),
        ],
    );
    put(
        A11,
        &[
            (E1, A11, ONE),
            (A11, E1, ONE),
            (E2, A22, ONE),
            (A22, E3, ONE),
            (E3, A22, ONE),
            (A22, E2, ONE),
            (E4, A11, ONE),
            (A11, E4, ONE),
        ],
    );
    put(
        A12,
        &[
            (E1, A12, ONE),
            (A12, E1, ONE),
            (E2, A21, im),
            (A21, E3, im),
            (E3, A21, -im),
            (A21, E2, -im),
            (E4, A12, -ONE),
            (A12, E4, -ONE),
        ],
    );
    put(
        A21,
        &[
            (E1, A21, ONE),
            (A21, E1, ONE),
            (E2, A12, -im),
            (A12, E3, -im),
            (E3, A12, im),
            (A12, E2, im),
            (E4, A21, -ONE),
            (A21, E4, -ONE),
        ],
    );
    put(
        A22,
        &[
            (E1, A22, ONE),
            (A22, E1, ONE),
            (E2, A11, ONE),
            (A11, E3, ONE),
            (E3, A11, ONE),
            (A11, E2, ONE),
            (E4, A22, ONE),
            (A22, E4, ONE),
        ],
    );

    let mut star = CMat::identity(n, n);
    star[(A12, A12)] = ZERO;
    star[(A21, A21)] = ZERO;
    star[(A21, A12)] = ONE;
    star[(A12, A21)] = ONE;

    let mut unit = CVec::zeros(n);
    for k in [E1, E2, E3, E4, A11, A22] {
        unit[k] = ONE;
    }
    let mut counit = CVec::zeros(n);
    counit[E1] = ONE;

    let (antipode, _) = super::dual::solve_antipode(&mult, &comult, &unit, &counit);
    HopfData {
        basis: ["e1", "e2", "e3", "e4", "a11", "a12", "a21", "a22"].iter().map(|s| s.to_string()).collect(),
        mult,
        unit,
        comult,
        counit,
        antipode,
        star,
        tolerance: Tolerance::default(),
    }
}
