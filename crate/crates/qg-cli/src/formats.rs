//! On-disk schemas. Every datum is a JSON object carrying `format_version` and `kind`;
//! unknown fields are rejected and complex numbers are `[re, im]` pairs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qg_core::category::FusionRing;
use qg_core::cbnorm::BlockMap;
use qg_core::corep::{FinSupp, IrrTable, PolElement, TableParts};
use qg_core::freeprod::{AlternatingWord, Letter};
use qg_core::hopf_engine::{HopfData, Tensor3};
use qg_core::linalg::{c, max_abs_vec, CMat, CVec, Tolerance, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// Syntax and schema violations; the message names the field and carries line and column.
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Invalid { path: PathBuf, field: &'static str, message: String },
    #[error("{path}: format_version {found} is not supported (expected {FORMAT_VERSION})")]
    Version { path: PathBuf, found: u32 },
    #[error("{path}: expected kind `{expected}`, found `{found}`")]
    Kind { path: PathBuf, expected: &'static str, found: String },
}

impl FormatError {
    fn invalid(path: &Path, field: &'static str, message: impl ToString) -> Self {
        FormatError::Invalid { path: path.to_path_buf(), field, message: message.to_string() }
    }
}

/// A complex number as `[re, im]`. A bare number does not deserialize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex(pub f64, pub f64);

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex(z.re, z.im)
    }
}

impl From<Complex> for C64 {
    fn from(z: Complex) -> Self {
        c(z.0, z.1)
    }
}

pub type Matrix = Vec<Vec<Complex>>;

pub fn matrix_from(m: &CMat) -> Matrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect()
}

fn matrix_to(path: &Path, field: &'static str, rows: &Matrix) -> Result<CMat, FormatError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(FormatError::invalid(path, field, "rows have different lengths"));
    }
    Ok(CMat::from_fn(rows.len(), cols, |i, j| rows[i][j].into()))
}

pub fn vector_from(v: &CVec) -> Vec<Complex> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn values_from(v: &[Complex]) -> Vec<C64> {
    v.iter().map(|&z| z.into()).collect()
}

/// A file schema with a fixed `kind` tag.
pub trait Datum: Serialize + DeserializeOwned {
    const KIND: &'static str;
    fn header(&self) -> (u32, &str);
}

macro_rules! datum {
    ($ty:ident, $kind:literal) => {
        impl Datum for $ty {
            const KIND: &'static str = $kind;
            fn header(&self) -> (u32, &str) {
                (self.format_version, &self.kind)
            }
        }
    };
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Parses `text` as a datum of type `T`, checking version and kind.
pub fn parse<T: Datum>(path: &Path, text: &str) -> Result<T, FormatError> {
    let datum: T = serde_json::from_str(text)
        .map_err(|e| FormatError::Schema { path: path.to_path_buf(), message: e.to_string() })?;
    let (version, kind) = datum.header();
    if version != FORMAT_VERSION {
        return Err(FormatError::Version { path: path.to_path_buf(), found: version });
    }
    if kind != T::KIND {
        return Err(FormatError::Kind { path: path.to_path_buf(), expected: T::KIND, found: kind.to_string() });
    }
    Ok(datum)
}

pub fn read<T: Datum>(path: &Path) -> Result<T, FormatError> {
    parse(path, &read_text(path)?)
}

/// The `kind` tag of a datum file, without validating the rest.
pub fn kind_of(path: &Path, text: &str) -> Result<String, FormatError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Schema { path: path.to_path_buf(), message: e.to_string() })?;
    value
        .get("kind")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| FormatError::Schema { path: path.to_path_buf(), message: "missing field `kind`".into() })
}

/// Canonical text: two-space indentation, fields in schema order, arrays of scalars and
/// of short scalar arrays on one line, trailing newline.
pub fn emit<T: Serialize>(datum: &T) -> String {
    let value = serde_json::to_value(datum).expect("schemas serialize to JSON");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

pub fn write<T: Serialize>(path: &Path, datum: &T) -> Result<(), FormatError> {
    fs::write(path, emit(datum)).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn depth(value: &Value) -> Option<usize> {
    match value {
        Value::Object(_) => None,
        Value::Array(items) => items.iter().map(depth).try_fold(0, |acc, d| d.map(|d| acc.max(d))).map(|d| d + 1),
        _ => Some(0),
    }
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("keys serialize"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && depth(value).map_or(true, |d| d > 2) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

/// Resolves a path stored in a datum relative to the datum's directory.
pub fn resolve(base: &Path, reference: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(reference)
}

// Hopf data

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfFile {
    pub format_version: u32,
    pub kind: String,
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    /// `mult[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mult: Vec<Vec<Vec<Complex>>>,
    /// Derived from `mult` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Complex>>,
    /// `comult[i][j][k]`: coefficient of `e_j ⊗ e_k` in `Δ(e_i)`.
    pub comult: Vec<Vec<Vec<Complex>>>,
    pub counit: Vec<Complex>,
    /// Column `j` is `S(e_j)`.
    pub antipode: Matrix,
    /// `x* = star · conj(x)`.
    pub star: Matrix,
}
datum!(HopfFile, "hopf");

fn tensor_to(path: &Path, field: &'static str, t: &[Vec<Vec<Complex>>]) -> Result<Tensor3, FormatError> {
    let nested: Vec<Vec<Vec<C64>>> = t.iter().map(|p| p.iter().map(|r| values_from(r)).collect()).collect();
    Tensor3::from_nested(field, &nested).map_err(|e| FormatError::invalid(path, field, e))
}

fn tensor_from(t: &Tensor3) -> Vec<Vec<Vec<Complex>>> {
    t.to_nested().iter().map(|p| p.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect()).collect()
}

/// Solves `Σ_i u_i e_i e_j = e_j = Σ_i u_i e_j e_i` for all `j` in the least-squares sense.
fn derive_unit(path: &Path, mult: &Tensor3) -> Result<CVec, FormatError> {
    let n = mult.dim();
    let mut system = CMat::zeros(2 * n * n, n);
    let mut rhs = CVec::zeros(2 * n * n);
    for j in 0..n {
        for k in 0..n {
            let row = j * n + k;
            for i in 0..n {
                system[(row, i)] = mult.get(i, j, k);
                system[(n * n + row, i)] = mult.get(j, i, k);
            }
            if j == k {
                rhs[row] = c(1.0, 0.0);
                rhs[n * n + row] = c(1.0, 0.0);
            }
        }
    }
    let svd = system.clone().svd(true, true);
    let unit = svd.solve(&rhs, 1e-12).map_err(|e| FormatError::invalid(path, "mult", e))?;
    let residual = max_abs_vec(&(&system * &unit - rhs));
    if residual > 1e-9 {
        return Err(FormatError::invalid(path, "mult", format!("the algebra has no unit (residual {residual:.2e})")));
    }
    Ok(unit)
}

impl HopfFile {
    pub fn from_data(name: &str, data: &HopfData) -> Self {
        HopfFile {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            name: name.into(),
            dim: data.dim(),
            basis: data.basis.clone(),
            mult: tensor_from(&data.mult),
            unit: Some(vector_from(&data.unit)),
            comult: tensor_from(&data.comult),
            counit: vector_from(&data.counit),
            antipode: matrix_from(&data.antipode),
            star: matrix_from(&data.star),
        }
    }

    pub fn to_data(&self, path: &Path, tolerance: Tolerance) -> Result<HopfData, FormatError> {
        if self.basis.len() != self.dim {
            return Err(FormatError::invalid(path, "basis", format!("{} names for dim {}", self.basis.len(), self.dim)));
        }
        let mult = tensor_to(path, "mult", &self.mult)?;
        let unit = match &self.unit {
            Some(u) => CVec::from_vec(values_from(u)),
            None => derive_unit(path, &mult)?,
        };
        let data = HopfData {
            basis: self.basis.clone(),
            mult,
            unit,
            comult: tensor_to(path, "comult", &self.comult)?,
            counit: CVec::from_vec(values_from(&self.counit)),
            antipode: matrix_to(path, "antipode", &self.antipode)?,
            star: matrix_to(path, "star", &self.star)?,
            tolerance,
        };
        data.check_shapes().map_err(|e| FormatError::invalid(path, "dim", e))?;
        Ok(data)
    }
}

pub fn read_hopf(path: &Path, tolerance: Tolerance) -> Result<(String, HopfData), FormatError> {
    let file: HopfFile = read(path)?;
    Ok((file.name.clone(), file.to_data(path, tolerance)?))
}

// Corepresentation tables

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub format_version: u32,
    pub kind: String,
    pub name: String,
    pub labels: Vec<String>,
    pub trivial: String,
    pub dim: Vec<usize>,
    /// Diagonal entries of `ρ_α`.
    pub rho: Vec<Vec<f64>>,
    pub conj: Vec<String>,
    /// `(α, β, γ, N^γ_{αβ})`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fusion: Option<Vec<(String, String, String, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj_intertwiner: Option<Vec<Matrix>>,
    #[serde(default)]
    pub truncated: bool,
}
datum!(TableFile, "irr_table");

fn label_index(path: &Path, field: &'static str, labels: &[String], label: &str) -> Result<usize, FormatError> {
    labels.iter().position(|l| l == label).ok_or_else(|| FormatError::invalid(path, field, format!("unknown label `{label}`")))
}

impl TableFile {
    pub fn from_table(table: &IrrTable) -> Self {
        let name = |a: usize| table.labels[a].clone();
        let fusion = table.fusion.as_ref().map(|f| {
            f.iter().flat_map(|(&(a, b), v)| v.iter().map(move |&(g, m)| (name(a), name(b), name(g), m))).collect()
        });
        TableFile {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            name: table.name.clone(),
            labels: table.labels.clone(),
            trivial: name(table.trivial),
            dim: table.dims.clone(),
            rho: table.rho.clone(),
            conj: table.conj.iter().map(|&a| name(a)).collect(),
            fusion,
            conj_intertwiner: table.conj_intertwiner.as_ref().map(|ts| ts.iter().map(matrix_from).collect()),
            truncated: table.truncated,
        }
    }

    pub fn to_table(&self, path: &Path) -> Result<IrrTable, FormatError> {
        let labels = &self.labels;
        let index = |field, l: &str| label_index(path, field, labels, l);
        let conj = self.conj.iter().map(|l| index("conj", l)).collect::<Result<_, _>>()?;
        let fusion = match &self.fusion {
            Some(triples) => Some(
                triples
                    .iter()
                    .map(|(a, b, g, m)| Ok((index("fusion", a)?, index("fusion", b)?, index("fusion", g)?, *m)))
                    .collect::<Result<Vec<_>, FormatError>>()?,
            ),
            None => None,
        };
        let conj_intertwiner = match &self.conj_intertwiner {
            Some(ts) => Some(ts.iter().map(|t| matrix_to(path, "conj_intertwiner", t)).collect::<Result<_, _>>()?),
            None => None,
        };
        IrrTable::new(TableParts {
            name: self.name.clone(),
            labels: labels.clone(),
            trivial: index("trivial", &self.trivial)?,
            dims: self.dim.clone(),
            rho: self.rho.clone(),
            conj,
            fusion,
            conj_intertwiner,
            truncated: self.truncated,
        })
        .map_err(|e| FormatError::invalid(path, "labels", e))
    }
}

pub fn read_table(path: &Path) -> Result<IrrTable, FormatError> {
    read::<TableFile>(path)?.to_table(path)
}

// Elements of ℓ∞(Γ) and Pol(Γ̂)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Finitely supported elements of `ℓ∞(Γ)`.
    Linf,
    /// Coefficient matrices of `Pol(Γ̂)`.
    Pol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub label: String,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub format_version: u32,
    pub kind: String,
    /// Path of the table file, relative to this file.
    pub table: String,
    pub space: Space,
    pub blocks: Vec<Block>,
}
datum!(ElementFile, "element");

/// An element file with its table loaded.
#[derive(Debug, Clone)]
pub struct LoadedElement {
    pub table_path: PathBuf,
    pub table: IrrTable,
    pub space: Space,
    pub blocks: BTreeMap<usize, CMat>,
}

impl LoadedElement {
    pub fn finsupp(&self) -> FinSupp {
        FinSupp { blocks: self.blocks.clone() }
    }

    pub fn pol(&self) -> PolElement {
        PolElement { coeffs: self.blocks.clone() }
    }
}

impl ElementFile {
    pub fn new(table_ref: &str, table: &IrrTable, space: Space, blocks: &BTreeMap<usize, CMat>) -> Self {
        ElementFile {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            table: table_ref.into(),
            space,
            blocks: blocks.iter().map(|(&a, m)| Block { label: table.labels[a].clone(), matrix: matrix_from(m) }).collect(),
        }
    }
}

pub fn read_element(path: &Path) -> Result<LoadedElement, FormatError> {
    let file: ElementFile = read(path)?;
    let table_path = resolve(path, &file.table);
    let table = read_table(&table_path)?;
    let mut blocks = BTreeMap::new();
    for block in &file.blocks {
        let a = label_index(path, "blocks", &table.labels, &block.label)?;
        let m = matrix_to(path, "blocks", &block.matrix)?;
        let d = table.dims[a];
        if m.shape() != (d, d) {
            return Err(FormatError::invalid(path, "blocks", format!("block `{}` must be {d}x{d}", block.label)));
        }
        if blocks.insert(a, m).is_some() {
            return Err(FormatError::invalid(path, "blocks", format!("label `{}` appears twice", block.label)));
        }
    }
    Ok(LoadedElement { table_path, table, space: file.space, blocks })
}

// Block maps

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockMapFile {
    pub format_version: u32,
    pub kind: String,
    pub name: String,
    pub domain: Vec<usize>,
    pub codomain: Vec<usize>,
    /// Column `k` is the image of the `k`-th domain matrix unit, blocks vectorized row-major.
    pub action: Matrix,
}
datum!(BlockMapFile, "block_map");

impl BlockMapFile {
    pub fn from_map(map: &BlockMap) -> Self {
        BlockMapFile {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            name: map.name.clone(),
            domain: map.domain.clone(),
            codomain: map.codomain.clone(),
            action: matrix_from(&map.action),
        }
    }
}

pub fn read_block_map(path: &Path) -> Result<BlockMap, FormatError> {
    let file: BlockMapFile = read(path)?;
    let action = matrix_to(path, "action", &file.action)?;
    BlockMap::new(file.name, file.domain, file.codomain, action).map_err(|e| FormatError::invalid(path, "action", e))
}

// Free products

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordsFile {
    pub format_version: u32,
    pub kind: String,
    /// Paths of the factor tables, relative to this file.
    pub factors: Vec<String>,
    /// Letters as `(factor, label)` pairs.
    pub words: Vec<Vec<(usize, String)>>,
}
datum!(WordsFile, "words");

pub struct LoadedWords {
    pub factors: Vec<IrrTable>,
    pub words: Vec<AlternatingWord>,
}

pub fn read_words(path: &Path) -> Result<LoadedWords, FormatError> {
    let file: WordsFile = read(path)?;
    let factors =
        file.factors.iter().map(|f| read_table(&resolve(path, f))).collect::<Result<Vec<_>, _>>()?;
    let words = file
        .words
        .iter()
        .map(|w| {
            let letters = w
                .iter()
                .map(|(factor, label)| {
                    let table = factors
                        .get(*factor)
                        .ok_or_else(|| FormatError::invalid(path, "words", format!("no factor {factor}")))?;
                    Ok(Letter { factor: *factor, label: label_index(path, "words", &table.labels, label)? })
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            Ok(AlternatingWord { letters })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(LoadedWords { factors, words })
}

// Fusion rings

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionRingFile {
    pub format_version: u32,
    pub kind: String,
    pub name: String,
    pub labels: Vec<String>,
    pub unit: String,
    pub conj: Vec<String>,
    /// `(i, j, k, N^k_{ij})` with positive multiplicity.
    pub fusion: Vec<(String, String, String, u32)>,
    pub dq: Vec<f64>,
    /// Labels are spins `0..=L` of a window; `dq` is multiplicative only on `i + j ≤ L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_window: Option<usize>,
}
datum!(FusionRingFile, "fusion_ring");

impl FusionRingFile {
    pub fn from_ring(ring: &FusionRing) -> Self {
        let name = |a: usize| ring.labels[a].clone();
        let size = ring.len();
        let mut fusion = Vec::new();
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    if ring.n[i][j][k] > 0 {
                        fusion.push((name(i), name(j), name(k), ring.n[i][j][k]));
                    }
                }
            }
        }
        FusionRingFile {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            name: ring.name.clone(),
            labels: ring.labels.clone(),
            unit: name(ring.unit),
            conj: ring.conj.iter().map(|&a| name(a)).collect(),
            fusion,
            dq: ring.dq.clone(),
            spin_window: ring.spin_window,
        }
    }
}

pub fn read_fusion_ring(path: &Path) -> Result<FusionRing, FormatError> {
    let file: FusionRingFile = read(path)?;
    let labels = &file.labels;
    let index = |field, l: &str| label_index(path, field, labels, l);
    let conj = file.conj.iter().map(|l| index("conj", l)).collect::<Result<_, _>>()?;
    let triples = file
        .fusion
        .iter()
        .map(|(i, j, k, m)| Ok((index("fusion", i)?, index("fusion", j)?, index("fusion", k)?, *m)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    let mut ring = FusionRing::from_triples(file.name.clone(), labels.clone(), index("unit", &file.unit)?, conj, &triples, file.dq.clone())
        .map_err(|e| FormatError::invalid(path, "fusion", e))?;
    ring.spin_window = file.spin_window;
    Ok(ring)
}

/// Values for `qg fusion pair` and `qg fusion corner`, one per label of the ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionValuesFile {
    pub format_version: u32,
    pub kind: String,
    /// Path of the fusion ring file, relative to this file.
    pub ring: String,
    pub theta: Vec<Complex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Complex>>,
    /// Corner elements for the pairing `Tr(g M_θ(f))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Complex>>,
}
datum!(FusionValuesFile, "fusion_values");

// Doubles

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub format_version: u32,
    pub kind: String,
    /// Hopf data files of the two factors, relative to this file.
    pub first: String,
    pub second: String,
    /// The unitary `Z` on `H₁ ⊗ H₂` with `m(x) = Z x Z*`.
    pub z: Matrix,
}
datum!(MatchingFile, "matching");

impl MatchingFile {
    pub fn z_matrix(&self, path: &Path) -> Result<CMat, FormatError> {
        matrix_to(path, "z", &self.z)
    }
}

/// The Drinfeld double of one group; its matching is computed rather than stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrinfeldFile {
    pub format_version: u32,
    pub kind: String,
    pub group: String,
    #[serde(default)]
    pub seed: u64,
}
datum!(DrinfeldFile, "drinfeld_double");
