//! Free products of discrete quantum groups at the level of fusion rules.
//!
//! Irreducibles of the free product are alternating words in the nontrivial
//! labels of the factors. A finite window of words up to a given length is turned
//! into an ordinary [`IrrTable`] so the coefficient calculus applies unchanged.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corep::{CorepError, FinSupp, IrrTable, TableParts};
use crate::linalg::{c, CMat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FreeProdError {
    #[error("factor {factor} has no fusion data")]
    MissingFusionData { factor: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension bookkeeping fails: {left} ≠ {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("length {needed} exceeds the window max_len = {max_len}")]
    TruncationTooSmall { needed: usize, max_len: usize },
    #[error(transparent)]
    Corep(#[from] CorepError),
}

/// A nontrivial label of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub factor: usize,
    pub label: usize,
}

/// An alternating word; the empty word is the trivial label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct AlternatingWord {
    pub letters: Vec<Letter>,
}

impl AlternatingWord {
    pub fn empty() -> Self {
        AlternatingWord { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn concat(parts: &[&[Letter]]) -> Self {
        AlternatingWord { letters: parts.concat() }
    }
}

/// Free product of finitely many factor tables.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeProductTable {
    pub factors: Vec<IrrTable>,
}

impl FreeProductTable {
    pub fn new(factors: Vec<IrrTable>) -> Self {
        FreeProductTable { factors }
    }

    /// Checks alternation and that every letter is a nontrivial label of its factor.
    pub fn check_word(&self, word: &AlternatingWord) -> Result<(), FreeProdError> {
        for (k, letter) in word.letters.iter().enumerate() {
            let table = self
                .factors
                .get(letter.factor)
                .ok_or_else(|| FreeProdError::InvalidWord(format!("factor {} does not exist", letter.factor)))?;
            if letter.label >= table.len() || letter.label == table.trivial {
                return Err(FreeProdError::InvalidWord(format!(
                    "letter {k} is not a nontrivial label of factor {}",
                    letter.factor
                )));
            }
            if k > 0 && word.letters[k - 1].factor == letter.factor {
                return Err(FreeProdError::InvalidWord(format!("letters {} and {k} share a factor", k - 1)));
            }
        }
        Ok(())
    }

    fn nontrivial(&self, factor: usize) -> impl Iterator<Item = usize> + '_ {
        let t = &self.factors[factor];
        (0..t.len()).filter(move |&a| a != t.trivial)
    }

    pub fn dim(&self, word: &AlternatingWord) -> usize {
        word.letters.iter().map(|l| self.factors[l.factor].dims[l.label]).product()
    }

    /// Diagonal of `ρ_{α₁} ⊗ ⋯ ⊗ ρ_{α_n}`.
    pub fn rho(&self, word: &AlternatingWord) -> Vec<f64> {
        word.letters.iter().fold(vec![1.0], |acc, l| {
            let r = &self.factors[l.factor].rho[l.label];
            acc.iter().flat_map(|x| r.iter().map(move |y| x * y)).collect()
        })
    }

    /// `ᾱ_n ⊠ ⋯ ⊠ ᾱ_1`.
    pub fn conj(&self, word: &AlternatingWord) -> AlternatingWord {
        AlternatingWord {
            letters: word
                .letters
                .iter()
                .rev()
                .map(|l| Letter { factor: l.factor, label: self.factors[l.factor].conj[l.label] })
                .collect(),
        }
    }

    pub fn word_label(&self, word: &AlternatingWord) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.letters
            .iter()
            .map(|l| format!("{}:{}", l.factor, self.factors[l.factor].labels[l.label]))
            .collect::<Vec<_>>()
            .join(".")
    }

    fn all_finite(&self) -> bool {
        self.factors.iter().all(|t| !t.truncated)
    }
}

impl fmt::Display for AlternatingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| format!("({},{})", l.factor, l.label)).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// All alternating words of length at most `max_len`, in lexicographic order of `(factor, label)` letters.
pub fn enumerate_words(fp: &FreeProductTable, max_len: usize) -> Vec<AlternatingWord> {
    let mut out = vec![AlternatingWord::empty()];
    let mut frontier = vec![AlternatingWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            let last = word.letters.last().map(|l| l.factor);
            for factor in 0..fp.factors.len() {
                if Some(factor) == last {
                    continue;
                }
                for label in fp.nontrivial(factor) {
                    let mut letters = word.letters.clone();
                    letters.push(Letter { factor, label });
                    next.push(AlternatingWord { letters });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

fn add_into(out: &mut BTreeMap<AlternatingWord, u32>, word: AlternatingWord, mult: u32) {
    *out.entry(word).or_insert(0) += mult;
}

fn fuse(fp: &FreeProductTable, left: &[Letter], right: &[Letter], out: &mut BTreeMap<AlternatingWord, u32>, mult: u32) -> Result<(), FreeProdError> {
    let (Some(a), Some(b)) = (left.last(), right.first()) else {
        add_into(out, AlternatingWord::concat(&[left, right]), mult);
        return Ok(());
    };
    if a.factor != b.factor {
        add_into(out, AlternatingWord::concat(&[left, right]), mult);
        return Ok(());
    }
    let table = &fp.factors[a.factor];
    if table.fusion.is_none() {
        return Err(FreeProdError::MissingFusionData { factor: a.factor });
    }
    let (head, tail) = (&left[..left.len() - 1], &right[1..]);
    for (g, n) in table.fusion_of(a.label, b.label) {
        if g == table.trivial {
            fuse(fp, head, tail, out, mult * n)?;
        } else {
            let middle = [Letter { factor: a.factor, label: g }];
            add_into(out, AlternatingWord::concat(&[head, &middle, tail]), mult * n);
        }
    }
    Ok(())
}

/// Decomposition of `w1 ⊗ w2` into irreducible words with multiplicities.
///
/// When every factor is a complete table the dimension count is checked exactly.
pub fn free_fusion(
    fp: &FreeProductTable,
    w1: &AlternatingWord,
    w2: &AlternatingWord,
) -> Result<BTreeMap<AlternatingWord, u32>, FreeProdError> {
    fp.check_word(w1)?;
    fp.check_word(w2)?;
    let mut out = BTreeMap::new();
    fuse(fp, &w1.letters, &w2.letters, &mut out, 1)?;
    if fp.all_finite() {
        let left = fp.dim(w1) * fp.dim(w2);
        let right: usize = out.iter().map(|(w, m)| *m as usize * fp.dim(w)).sum();
        if left != right {
            return Err(FreeProdError::DimensionMismatch { left, right });
        }
    }
    Ok(out)
}

/// The words of length at most `max_len` as an [`IrrTable`]; label `k` is `words[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WordWindow {
    pub max_len: usize,
    pub words: Vec<AlternatingWord>,
    pub table: IrrTable,
}

impl WordWindow {
    pub fn new(fp: &FreeProductTable, max_len: usize) -> Result<Self, FreeProdError> {
        let words = enumerate_words(fp, max_len);
        let index: BTreeMap<&AlternatingWord, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let has_fusion = fp.factors.iter().all(|t| t.fusion.is_some());
        let fusion = if has_fusion {
            let mut triples = Vec::new();
            for (a, wa) in words.iter().enumerate() {
                for (b, wb) in words.iter().enumerate() {
                    let mut out = BTreeMap::new();
                    fuse(fp, &wa.letters, &wb.letters, &mut out, 1)?;
                    for (w, m) in out {
                        if let Some(&g) = index.get(&w) {
                            triples.push((a, b, g, m));
                        }
                    }
                }
            }
            Some(triples)
        } else {
            None
        };
        let longer_exists = enumerate_words(fp, max_len + 1).len() > words.len();
        let table = IrrTable::new(TableParts {
            name: format!("free product window max_len={max_len}"),
            labels: words.iter().map(|w| fp.word_label(w)).collect(),
            trivial: 0,
            dims: words.iter().map(|w| fp.dim(w)).collect(),
            rho: words.iter().map(|w| fp.rho(w)).collect(),
            conj: words.iter().map(|w| index[&fp.conj(w)]).collect(),
            fusion,
            conj_intertwiner: None,
            truncated: longer_exists || fp.factors.iter().any(|t| t.truncated),
        })?;
        Ok(WordWindow { max_len, words, table })
    }

    pub fn index_of(&self, word: &AlternatingWord) -> Option<usize> {
        self.words.binary_search(word).ok()
    }

    fn check_length(&self, d: usize) -> Result<(), FreeProdError> {
        if d > self.max_len {
            return Err(FreeProdError::TruncationTooSmall { needed: d, max_len: self.max_len });
        }
        Ok(())
    }
}

/// A central element together with an upper bound for its multiplier CB norm.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedElement {
    pub element: FinSupp,
    /// Upper bound only; never checked as an equality.
    pub cb_upper: f64,
}

/// `p_d`, the identity on every word of length `d`, with `‖P_d‖_cb ≤ max(4d, 1)`.
pub fn length_projection(window: &WordWindow, d: usize) -> Result<BoundedElement, FreeProdError> {
    window.check_length(d)?;
    let labels: Vec<usize> = (0..window.words.len()).filter(|&k| window.words[k].len() == d).collect();
    Ok(BoundedElement {
        element: FinSupp::projection(&window.table, &labels),
        cb_upper: (4.0 * d as f64).max(1.0),
    })
}

/// A multiplier on one factor with a known CB-norm bound.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterMultiplier {
    pub element: FinSupp,
    pub cb_bound: f64,
}

impl LetterMultiplier {
    /// The identity on the nontrivial labels of `table`; `Θ^l` of it is a contractive projection.
    pub fn identity(table: &IrrTable) -> Self {
        let labels: Vec<usize> = (0..table.len()).filter(|&a| a != table.trivial).collect();
        LetterMultiplier { element: FinSupp::projection(table, &labels), cb_bound: 1.0 }
    }
}

/// `Ψ_d(g)`: the block at `α₁⊠⋯⊠α_d` is `g_{i₁,1}^{α₁} ⊗ ⋯ ⊗ g_{i_d,d}^{α_d}`.
///
/// `families[k][i]` is the multiplier used for the `k`-th letter when it lies in factor `i`.
pub fn psi_d(fp: &FreeProductTable, window: &WordWindow, families: &[Vec<LetterMultiplier>]) -> Result<BoundedElement, FreeProdError> {
    let d = families.len();
    if d == 0 {
        return Err(FreeProdError::ShapeMismatch("Ψ_d needs d ≥ 1".into()));
    }
    window.check_length(d)?;
    for (k, family) in families.iter().enumerate() {
        if family.len() != fp.factors.len() {
            return Err(FreeProdError::ShapeMismatch(format!("family {k} has {} entries", family.len())));
        }
        for (i, g) in family.iter().enumerate() {
            let table = &fp.factors[i];
            g.element.check(table)?;
            if g.element.blocks.contains_key(&table.trivial) {
                return Err(FreeProdError::ShapeMismatch(format!("g[{k}][{i}] is supported on the trivial label")));
            }
        }
    }
    let mut blocks = BTreeMap::new();
    for (index, word) in window.words.iter().enumerate() {
        if word.len() != d {
            continue;
        }
        let mut block = CMat::identity(1, 1);
        let mut supported = true;
        for (k, letter) in word.letters.iter().enumerate() {
            match families[k][letter.factor].element.blocks.get(&letter.label) {
                Some(g) => block = block.kronecker(g),
                None => {
                    supported = false;
                    break;
                }
            }
        }
        if supported {
            blocks.insert(index, block);
        }
    }
    let product: f64 = families.iter().map(|f| f.iter().map(|g| g.cb_bound).fold(0.0, f64::max)).product();
    Ok(BoundedElement {
        element: FinSupp { blocks },
        cb_upper: 4.0 * d as f64 * (2.0 * d as f64 + 1.0) * product,
    })
}

/// `T_n = Σ_{d ≤ n} (1 − 1/√n)^d p_d`.
pub fn tn_series(window: &WordWindow, n: usize) -> Result<FinSupp, FreeProdError> {
    if n == 0 {
        return Err(FreeProdError::ShapeMismatch("T_n needs n ≥ 1".into()));
    }
    window.check_length(n)?;
    let ratio = 1.0 - 1.0 / (n as f64).sqrt();
    let values: Vec<(usize, _)> = window
        .words
        .iter()
        .enumerate()
        .filter(|(_, w)| w.len() <= n)
        .map(|(k, w)| (k, c(ratio.powi(w.len() as i32), 0.0)))
        .collect();
    Ok(FinSupp::central(&window.table, &values))
}
