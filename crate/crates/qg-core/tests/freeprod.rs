use std::collections::BTreeMap;

use qg_core::corep::{EngineBridge, FinSupp, IrrTable};
use qg_core::freeprod::*;
use qg_core::hopf_engine::examples::{function_algebra, FiniteGroup};
use qg_core::hopf_engine::QuantumGroup;
use qg_core::linalg::{c, random_complex, CMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rep_s3() -> IrrTable {
    EngineBridge::new(QuantumGroup::new(function_algebra(&FiniteGroup::symmetric3())).unwrap(), 0)
        .unwrap()
        .table
}

fn z(n: usize) -> IrrTable {
    IrrTable::group_dual(&FiniteGroup::cyclic(n))
}

fn word(letters: &[(usize, usize)]) -> AlternatingWord {
    AlternatingWord { letters: letters.iter().map(|&(factor, label)| Letter { factor, label }).collect() }
}

/// Every sequence of nontrivial letters of length `len`, filtered for alternation.
fn brute_force_count(fp: &FreeProductTable, len: usize) -> usize {
    let letters: Vec<Letter> = fp
        .factors
        .iter()
        .enumerate()
        .flat_map(|(f, t)| (0..t.len()).filter(move |&a| a != t.trivial).map(move |label| Letter { factor: f, label }))
        .collect();
    let mut count = 0;
    let total = letters.len().pow(len as u32);
    for mut code in 0..total {
        let mut seq = Vec::with_capacity(len);
        for _ in 0..len {
            seq.push(letters[code % letters.len()]);
            code /= letters.len();
        }
        if seq.windows(2).all(|w| w[0].factor != w[1].factor) {
            count += 1;
        }
    }
    count
}

#[test]
fn enumeration_examples() {
    let fp = FreeProductTable::new(vec![z(3), z(3)]);
    assert_eq!(enumerate_words(&fp, 0), vec![AlternatingWord::empty()]);
    let exactly3 = enumerate_words(&fp, 3).into_iter().filter(|w| w.len() == 3).count();
    assert_eq!(exactly3, 16);
    for len in 0..=4 {
        let counted = enumerate_words(&fp, 4).iter().filter(|w| w.len() == len).count();
        assert_eq!(counted, brute_force_count(&fp, len));
    }
    let words = enumerate_words(&fp, 4);
    let mut sorted = words.clone();
    sorted.sort();
    assert_eq!(words, sorted);
}

#[test]
fn alternation_recursion_with_unequal_factors() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(2), z(4)]);
    let words = enumerate_words(&fp, 4);
    // ends[f][ℓ]: words of length ℓ ending in factor f.
    let sizes: Vec<usize> = fp.factors.iter().map(|t| t.len() - 1).collect();
    let mut ends = vec![sizes.clone()];
    for _ in 1..4 {
        let prev = ends.last().unwrap();
        let total: usize = prev.iter().sum();
        ends.push((0..3).map(|f| sizes[f] * (total - prev[f])).collect());
    }
    for len in 1..=4 {
        let expected: usize = ends[len - 1].iter().sum();
        assert_eq!(words.iter().filter(|w| w.len() == len).count(), expected);
        assert_eq!(expected, brute_force_count(&fp, len));
    }
}

#[test]
fn trivial_factor_is_never_used() {
    let fp = FreeProductTable::new(vec![z(1), z(3)]);
    let words = enumerate_words(&fp, 3);
    assert_eq!(words, vec![AlternatingWord::empty(), word(&[(1, 1)]), word(&[(1, 2)])]);
}

/// Reduced product in Z2 ⋆ Z2, letters 'a', 'b'.
fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for ch in s.chars() {
        if out.last() == Some(&ch) {
            out.pop();
        } else {
            out.push(ch);
        }
    }
    out.into_iter().collect()
}

fn as_string(w: &AlternatingWord) -> String {
    w.letters.iter().map(|l| if l.factor == 0 { 'a' } else { 'b' }).collect()
}

#[test]
fn infinite_dihedral_fusion() {
    let fp = FreeProductTable::new(vec![z(2), z(2)]);
    let g = word(&[(0, 1)]);
    let out = free_fusion(&fp, &g, &g).unwrap();
    assert_eq!(out, BTreeMap::from([(AlternatingWord::empty(), 1)]));
    let words = enumerate_words(&fp, 4);
    for x in &words {
        assert_eq!(free_fusion(&fp, &AlternatingWord::empty(), x).unwrap(), BTreeMap::from([(x.clone(), 1)]));
        for y in &words {
            let out = free_fusion(&fp, x, y).unwrap();
            assert_eq!(out.len(), 1);
            let (w, m) = out.iter().next().unwrap();
            assert_eq!(*m, 1);
            assert_eq!(as_string(w), reduce(&(as_string(x) + &as_string(y))));
        }
    }
}

#[test]
fn dimension_identity_on_random_pairs() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(3)]);
    let words = enumerate_words(&fp, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = &words[rng.gen_range(0..words.len())];
        let y = &words[rng.gen_range(0..words.len())];
        let out = free_fusion(&fp, x, y).unwrap();
        let total: usize = out.iter().map(|(w, m)| *m as usize * fp.dim(w)).sum();
        assert_eq!(total, fp.dim(x) * fp.dim(y));
    }
}

fn expand(fp: &FreeProductTable, left: &BTreeMap<AlternatingWord, u32>, right: &AlternatingWord) -> BTreeMap<AlternatingWord, u32> {
    let mut out = BTreeMap::new();
    for (w, m) in left {
        for (v, n) in free_fusion(fp, w, right).unwrap() {
            *out.entry(v).or_insert(0) += m * n;
        }
    }
    out
}

#[test]
fn fusion_is_associative() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(2)]);
    let words = enumerate_words(&fp, 1);
    for x in &words {
        for y in &words {
            for zz in &words {
                let left = expand(&fp, &free_fusion(&fp, x, y).unwrap(), zz);
                let yz = free_fusion(&fp, y, zz).unwrap();
                let mut right = BTreeMap::new();
                for (w, m) in &yz {
                    for (v, n) in free_fusion(&fp, x, w).unwrap() {
                        *right.entry(v).or_insert(0) += m * n;
                    }
                }
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn invalid_words_are_rejected() {
    let fp = FreeProductTable::new(vec![z(2), z(2)]);
    assert!(free_fusion(&fp, &word(&[(0, 1), (0, 1)]), &AlternatingWord::empty()).is_err());
    assert!(free_fusion(&fp, &word(&[(0, 0)]), &AlternatingWord::empty()).is_err());
}

#[test]
fn length_projections_are_orthogonal_and_sum_to_one() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(2)]);
    let window = WordWindow::new(&fp, 3).unwrap();
    assert!(window.table.truncated);
    let ps: Vec<BoundedElement> = (0..=3).map(|d| length_projection(&window, d).unwrap()).collect();
    assert_eq!(ps[0].element, FinSupp::projection(&window.table, &[0]));
    assert_eq!(ps[2].cb_upper, 8.0);
    assert_eq!(ps[0].cb_upper, 1.0);
    let mut sum = FinSupp::zero();
    for (d, p) in ps.iter().enumerate() {
        assert_eq!(p.element.multiply(&p.element), p.element);
        for q in &ps[d + 1..] {
            assert!(p.element.multiply(&q.element).blocks.is_empty());
        }
        // The computable lower bound ‖p_d‖_∞ never exceeds the attached upper bound.
        assert!(p.element.sup_norm() <= p.cb_upper);
        sum = sum.add(&p.element);
    }
    assert_eq!(sum, FinSupp::projection(&window.table, &(0..window.words.len()).collect::<Vec<_>>()));
    assert!(length_projection(&window, 4).is_err());
}

#[test]
fn psi_of_identity_families_is_the_length_projection() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(3)]);
    let window = WordWindow::new(&fp, 3).unwrap();
    for d in 1..=3 {
        let families: Vec<Vec<LetterMultiplier>> =
            (0..d).map(|_| fp.factors.iter().map(LetterMultiplier::identity).collect()).collect();
        let psi = psi_d(&fp, &window, &families).unwrap();
        assert_eq!(psi.element, length_projection(&window, d).unwrap().element);
        assert_eq!(psi.cb_upper, 4.0 * d as f64 * (2.0 * d as f64 + 1.0));
    }
}

#[test]
fn psi_blocks_are_kronecker_products() {
    let fp = FreeProductTable::new(vec![rep_s3(), z(3)]);
    let window = WordWindow::new(&fp, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random_family = |rng: &mut ChaCha8Rng| -> Vec<LetterMultiplier> {
        fp.factors
            .iter()
            .map(|t| {
                let blocks = (0..t.len()).filter(|&a| a != t.trivial).map(|a| (a, random_complex(rng, t.dims[a], t.dims[a]))).collect();
                LetterMultiplier { element: FinSupp::new(t, blocks).unwrap(), cb_bound: 2.0 }
            })
            .collect()
    };
    let families = vec![random_family(&mut rng), random_family(&mut rng)];
    let psi = psi_d(&fp, &window, &families).unwrap();
    assert_eq!(psi.cb_upper, 8.0 * 5.0 * 4.0);
    for (k, w) in window.words.iter().enumerate() {
        if w.len() != 2 {
            assert!(!psi.element.blocks.contains_key(&k));
            continue;
        }
        let (x, y) = (w.letters[0], w.letters[1]);
        let expected: CMat = families[0][x.factor].element.blocks[&x.label].kronecker(&families[1][y.factor].element.blocks[&y.label]);
        assert_eq!(psi.element.blocks[&k], expected);
    }
    let single = psi_d(&fp, &window, &families[..1]).unwrap();
    for (k, w) in window.words.iter().enumerate().filter(|(_, w)| w.len() == 1) {
        let l = w.letters[0];
        assert_eq!(single.element.blocks[&k], families[0][l.factor].element.blocks[&l.label]);
    }
}

#[test]
fn tn_series_examples() {
    let fp = FreeProductTable::new(vec![z(2), z(3)]);
    let window = WordWindow::new(&fp, 4).unwrap();
    assert_eq!(tn_series(&window, 1).unwrap().pruned(), length_projection(&window, 0).unwrap().element);
    let t4 = tn_series(&window, 4).unwrap();
    for (k, w) in window.words.iter().enumerate() {
        if w.len() == 2 {
            assert!((t4.blocks[&k][(0, 0)] - c(0.25, 0.0)).norm() < 1e-15);
        }
    }
    for n in 1..=4 {
        assert!((tn_series(&window, n).unwrap().sup_norm() - 1.0).abs() < 1e-15);
    }
}
