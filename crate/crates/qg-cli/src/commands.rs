use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use qg_core::acceptance;
use qg_core::category::{corner_pairing, drinfeld_mult, mult_pair, verify_fusion_ring, CatMultiplier, FusionRing};
use qg_core::cbnorm::{cb_norm_exact, cb_norm_lower, CbOptions};
use qg_core::corep::{
    central_average, flow_finsupp, haar_pair, multiplier_involution, symmetrize_ap_net, theta_apply, FinSupp, Flow,
};
use qg_core::doubles::{
    build_double_crossed, double_multiplier_formulas, drinfeld_double, fourier_factorization, gamma_embeddings_check,
    DoubleCrossed, Matching, Side,
};
use qg_core::freeprod::{
    enumerate_words, free_fusion, length_projection, psi_d, tn_series, FreeProductTable, LetterMultiplier, WordWindow,
};
use qg_core::hopf_engine::{biduality, validate_hopf, HopfData, QuantumGroup};
use qg_core::linalg::{c, max_abs, random_complex_vec, Tolerance, C64, ZERO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::formats::{
    self, read_block_map, Datum, read_element, read_fusion_ring, read_hopf, read_words, resolve, values_from, DrinfeldFile,
    ElementFile, FormatError, FusionValuesFile, HopfFile, LoadedElement, MatchingFile, Space,
};
use crate::report::{InputDigest, RunReport};

/// Threshold for quantities produced by the semidefinite solver.
const SDP_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "qg", version, about = "Finite quantum groups, multipliers and their CB norms")]
pub struct Cli {
    /// Also write the report as JSON to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate Hopf data: axioms, Haar state, multiplicative unitary.
    CheckHopf { file: PathBuf },
    /// Build the dual and check the double dual against the input.
    Dual {
        file: PathBuf,
        /// Write the dual Hopf data here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The multiplicative unitary: unitarity and pentagon.
    W { file: PathBuf },
    /// Multiplier operations on element files.
    #[command(subcommand)]
    Mult(MultCommand),
    /// Exact CB norm of a block map, optionally with an amplified lower bound.
    Cbnorm {
        file: PathBuf,
        /// Amplification level for the lower bound.
        #[arg(long)]
        lower: Option<usize>,
    },
    /// Free products of corepresentation tables.
    #[command(subcommand)]
    Freeprod(FreeprodCommand),
    /// Fusion rings and categorical multipliers.
    #[command(subcommand)]
    Fusion(FusionCommand),
    /// Double crossed products.
    #[command(subcommand)]
    Double(DoubleCommand),
    /// Every datum in a directory plus the acceptance criteria.
    ReportAll { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum MultCommand {
    /// `Θ^l(a)` applied to a polynomial element.
    Apply {
        multiplier: PathBuf,
        input: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// `a ↦ S(a*)`.
    Involute {
        element: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Block traces: the central part of a multiplier.
    Average {
        element: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// τ-invariant, ♯-fixed and unital version of a multiplier.
    Symmetrize {
        element: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FreeprodCommand {
    /// Count alternating words by length.
    Enum {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Fuse every ordered pair of listed words.
    Fuse { file: PathBuf },
    /// Length projections `p_d` and `Ψ_d`.
    Pd {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// The series `T_n` on a word window.
    Tn {
        file: PathBuf,
        /// At least `n`: the series is checked on words up to this length.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FusionCommand {
    /// Check the fusion ring axioms.
    Verify { file: PathBuf },
    /// `Σ dq(k) ω(k) θ(k)` with its bound.
    Pair { values: PathBuf },
    /// `Tr(g M_θ(f))` in the unit corner.
    Corner { values: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum DoubleCommand {
    /// Assemble the double and check its structure.
    Build {
        #[arg(long)]
        matching: PathBuf,
    },
    /// Build, then check the embeddings, the Fourier factorization and induced multipliers.
    Check {
        #[arg(long)]
        matching: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// An operation rejected the data; `run` turns it into a failed check.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) | CliError::Io { .. } => 2,
            CliError::Compute(_) => 1,
        }
    }
}

fn compute<T, E: std::fmt::Display>(context: &str, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Compute(format!("{context}: {e}")))
}

fn digest(report: &mut RunReport, path: &Path) -> Result<(), CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let entry = InputDigest::of(path, &bytes);
    if !report.inputs.iter().any(|known| known.path == entry.path) {
        report.inputs.push(entry);
    }
    Ok(())
}

pub struct Context {
    pub seed: u64,
    pub tolerance: Tolerance,
}

impl Context {
    fn tol(&self) -> f64 {
        self.tolerance.value()
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let ctx = Context { seed: cli.seed, tolerance: Tolerance::from_env() };
    let mut report = RunReport::new(argv, ctx.seed, ctx.tol());
    let outcome = match &cli.command {
        Command::CheckHopf { file } => check_hopf(&ctx, &mut report, file),
        Command::Dual { file, emit } => dual(&ctx, &mut report, file, emit.as_deref()),
        Command::W { file } => w(&ctx, &mut report, file),
        Command::Mult(op) => mult(&ctx, &mut report, op),
        Command::Cbnorm { file, lower } => cbnorm(&ctx, &mut report, file, *lower),
        Command::Freeprod(op) => freeprod(&ctx, &mut report, op),
        Command::Fusion(op) => fusion(&ctx, &mut report, op),
        Command::Double(op) => double(&ctx, &mut report, op),
        Command::ReportAll { dir } => report_all(&ctx, &mut report, dir),
    };
    match outcome {
        Err(CliError::Compute(e)) => report.holds(e, false),
        Err(e) => return Err(e),
        Ok(()) => {}
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    if let Some(out) = &cli.out {
        fs::write(out, report.to_json()).map_err(|source| CliError::Io { path: out.clone(), source })?;
    }
    Ok(report)
}

fn load_group(ctx: &Context, report: &mut RunReport, file: &Path) -> Result<(String, QuantumGroup), CliError> {
    digest(report, file)?;
    let (name, data) = read_hopf(file, ctx.tolerance)?;
    report.output("name", &name);
    report.output("dim", data.dim());
    let group = compute("engine", QuantumGroup::new(data))?;
    Ok((name, group))
}

fn validation_checks(ctx: &Context, report: &mut RunReport, prefix: &str, data: &HopfData) -> Result<bool, CliError> {
    let validation = compute("validation", validate_hopf(data))?;
    for check in &validation.checks {
        report.check(format!("{prefix}{:?}", check.axiom), check.residual, ctx.tol());
    }
    Ok(validation.passed())
}

pub fn check_hopf(ctx: &Context, report: &mut RunReport, file: &Path) -> Result<(), CliError> {
    digest(report, file)?;
    let (name, data) = read_hopf(file, ctx.tolerance)?;
    report.output("name", &name);
    report.output("dim", data.dim());
    if !validation_checks(ctx, report, "axiom ", &data)? {
        return Ok(());
    }
    let group = compute("engine", QuantumGroup::new(data))?;
    let haar = &group.haar;
    report.check("Haar left invariance", haar.left_invariance_residual, ctx.tol());
    report.check("Haar right invariance", haar.right_invariance_residual, ctx.tol());
    report.check("Haar traciality", haar.trace_residual, ctx.tol());
    report.check("W unitarity", group.w.unitarity_residual, ctx.tol());
    report.check("W pentagon", group.w.pentagon_residual, ctx.tol());
    Ok(())
}

pub fn dual(ctx: &Context, report: &mut RunReport, file: &Path, emit: Option<&Path>) -> Result<(), CliError> {
    let (name, group) = load_group(ctx, report, file)?;
    let dual = compute("dual", group.dual_group())?;
    validation_checks(ctx, report, "dual axiom ", &dual.data)?;
    let bi = compute("double dual", biduality(&group.data, &group.haar, &group.w, &group.dual, &dual.dual.hopf))?;
    report.check("double dual isomorphism", bi.residual, ctx.tol());
    let sizes = compute("dual blocks", group.dual_blocks(ctx.seed))?.sizes();
    report.output("dual_block_sizes", sizes);
    if let Some(path) = emit {
        formats::write(path, &HopfFile::from_data(&format!("dual of {name}"), &dual.data))?;
        report.output("emitted", path.display().to_string());
    }
    Ok(())
}

pub fn w(ctx: &Context, report: &mut RunReport, file: &Path) -> Result<(), CliError> {
    let (_, group) = load_group(ctx, report, file)?;
    let n = group.dim();
    report.output("w_shape", [n * n, n * n]);
    report.check("W unitarity", group.w.unitarity_residual, ctx.tol());
    report.check("W pentagon", group.w.pentagon_residual, ctx.tol());
    Ok(())
}

fn load_element(report: &mut RunReport, path: &Path, space: Space) -> Result<LoadedElement, CliError> {
    digest(report, path)?;
    let element = read_element(path)?;
    digest(report, &element.table_path)?;
    if element.space != space {
        return Err(FormatError::Invalid {
            path: path.to_path_buf(),
            field: "space",
            message: format!("expected {space:?}, found {:?}", element.space),
        }
        .into());
    }
    Ok(element)
}

/// Path of `table` as seen from the directory of `emitted`.
fn table_reference(emitted: &Path, table: &Path) -> String {
    let absolute = |p: &Path| fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    let table = absolute(table);
    let dir = emitted.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    match table.strip_prefix(absolute(dir)) {
        Ok(relative) => relative.display().to_string(),
        Err(_) => table.display().to_string(),
    }
}

fn emit_element(
    report: &mut RunReport,
    emit: Option<&Path>,
    source: &LoadedElement,
    space: Space,
    blocks: &std::collections::BTreeMap<usize, qg_core::linalg::CMat>,
) -> Result<(), CliError> {
    let file = ElementFile::new("", &source.table, space, blocks);
    report.output(
        "result",
        file.blocks.iter().map(|b| json!({ "label": b.label, "matrix": b.matrix })).collect::<Vec<_>>(),
    );
    if let Some(path) = emit {
        let file = ElementFile { table: table_reference(path, &source.table_path), ..file };
        formats::write(path, &file)?;
        report.output("emitted", path.display().to_string());
    }
    Ok(())
}

fn unit_coefficient(element: &FinSupp, trivial: usize) -> C64 {
    element.blocks.get(&trivial).map_or(ZERO, |b| b[(0, 0)])
}

pub fn mult(ctx: &Context, report: &mut RunReport, op: &MultCommand) -> Result<(), CliError> {
    let tol = ctx.tol();
    match op {
        MultCommand::Apply { multiplier, input, emit } => {
            let a = load_element(report, multiplier, Space::Linf)?;
            let x = load_element(report, input, Space::Pol)?;
            if a.table != x.table {
                return Err(CliError::Compute("multiplier and input use different tables".into()));
            }
            let t = &a.table;
            let out = compute("apply", theta_apply(t, &a.finsupp(), &x.pol()))?;
            let expected = unit_coefficient(&a.finsupp(), t.trivial) * haar_pair(t, &x.pol());
            report.check("h(Θ(a)x) = a(e) h(x)", (haar_pair(t, &out) - expected).norm(), tol);
            emit_element(report, emit.as_deref(), &a, Space::Pol, &out.coeffs)
        }
        MultCommand::Involute { element, emit } => {
            let a = load_element(report, element, Space::Linf)?;
            let t = &a.table;
            let out = compute("involute", multiplier_involution(t, &a.finsupp()))?;
            let twice = compute("involute", multiplier_involution(t, &out))?;
            report.check("involution squares to the identity", twice.distance(&a.finsupp()), tol);
            report.output("sup_norm", out.sup_norm());
            emit_element(report, emit.as_deref(), &a, Space::Linf, &out.blocks)
        }
        MultCommand::Average { element, emit } => {
            let a = load_element(report, element, Space::Linf)?;
            let t = &a.table;
            let out = compute("average", central_average(t, &a.finsupp()))?;
            let again = compute("average", central_average(t, &out))?;
            report.check("averaging is idempotent", again.distance(&out), tol);
            report.holds("average is central", out.is_central(tol));
            emit_element(report, emit.as_deref(), &a, Space::Linf, &out.blocks)
        }
        MultCommand::Symmetrize { element, emit } => {
            let a = load_element(report, element, Space::Linf)?;
            let t = &a.table;
            let out = compute("symmetrize", symmetrize_ap_net(t, &a.finsupp()))?;
            let sharp = compute("symmetrize", multiplier_involution(t, &out))?;
            report.check("fixed by the involution", sharp.distance(&out), tol);
            let moved = compute("symmetrize", flow_finsupp(t, &out, c(1.0, 0.0), Flow::Tau))?;
            report.check("τ-invariant", moved.distance(&out), tol);
            report.holds("unit coefficient is exactly 1", unit_coefficient(&out, t.trivial) == c(1.0, 0.0));
            emit_element(report, emit.as_deref(), &a, Space::Linf, &out.blocks)
        }
    }
}

pub fn cbnorm(ctx: &Context, report: &mut RunReport, file: &Path, lower: Option<usize>) -> Result<(), CliError> {
    digest(report, file)?;
    let phi = read_block_map(file)?;
    report.output("name", &phi.name);
    let norm = compute("cb norm", cb_norm_exact(&phi, &CbOptions::default()))?;
    report.output("value", norm.value);
    report.output("method", format!("{:?}", norm.method));
    report.output("upper", norm.certificate.dual.max(norm.value));
    report.output("gap", norm.certificate.gap);
    report.check("SDP duality gap", norm.certificate.gap, SDP_THRESHOLD);
    if let Some(n) = lower {
        let bound = cb_norm_lower(&phi, n, ctx.seed);
        report.output("lower", bound);
        report.output("lower_level", n);
        report.check("amplified lower bound minus value", bound - norm.value, SDP_THRESHOLD);
    }
    Ok(())
}

fn load_words(report: &mut RunReport, file: &Path) -> Result<(FreeProductTable, Vec<qg_core::freeprod::AlternatingWord>), CliError> {
    digest(report, file)?;
    let loaded = read_words(file)?;
    let fp = FreeProductTable::new(loaded.factors);
    for word in &loaded.words {
        compute("word", fp.check_word(word))?;
    }
    Ok((fp, loaded.words))
}

/// Number of alternating words of each length up to `max_len`.
fn alternation_counts(fp: &FreeProductTable, max_len: usize) -> Vec<usize> {
    let sizes: Vec<usize> = fp.factors.iter().map(|t| t.len() - 1).collect();
    let mut ends = sizes.clone();
    let mut counts = vec![1];
    for len in 1..=max_len {
        if len > 1 {
            let total: usize = ends.iter().sum();
            ends = (0..sizes.len()).map(|f| sizes[f] * (total - ends[f])).collect();
        }
        counts.push(ends.iter().sum());
    }
    counts
}

pub fn freeprod(ctx: &Context, report: &mut RunReport, op: &FreeprodCommand) -> Result<(), CliError> {
    match op {
        FreeprodCommand::Enum { file, max_len } => {
            let (fp, _) = load_words(report, file)?;
            let words = enumerate_words(&fp, *max_len);
            let counts: Vec<usize> = (0..=*max_len).map(|l| words.iter().filter(|w| w.len() == l).count()).collect();
            let expected = alternation_counts(&fp, *max_len);
            report.output("counts", &counts);
            let mismatches = counts.iter().zip(&expected).filter(|(a, b)| a != b).count();
            report.check("counts against the alternation recursion", mismatches as f64, 0.0);
        }
        FreeprodCommand::Fuse { file } => {
            let (fp, words) = load_words(report, file)?;
            let mut failures = 0usize;
            let mut products = Vec::new();
            for x in &words {
                for y in &words {
                    let out = compute("fusion", free_fusion(&fp, x, y))?;
                    let total: usize = out.iter().map(|(w, m)| *m as usize * fp.dim(w)).sum();
                    failures += usize::from(total != fp.dim(x) * fp.dim(y));
                    let terms: Vec<String> = out.iter().map(|(w, m)| format!("{m}·{}", fp.word_label(w))).collect();
                    products.push(format!("{} ⊗ {} = {}", fp.word_label(x), fp.word_label(y), terms.join(" + ")));
                }
            }
            report.output("products", products);
            report.check("dimension identity failures", failures as f64, 0.0);
        }
        FreeprodCommand::Pd { file, max_len } => {
            let (fp, _) = load_words(report, file)?;
            let window = compute("window", WordWindow::new(&fp, *max_len))?;
            let projections =
                compute("p_d", (0..=*max_len).map(|d| length_projection(&window, d)).collect::<Result<Vec<_>, _>>())?;
            let mut violations = 0usize;
            let mut sum = FinSupp::zero();
            for (d, p) in projections.iter().enumerate() {
                violations += usize::from(p.element.multiply(&p.element) != p.element);
                for q in &projections[d + 1..] {
                    violations += usize::from(!p.element.multiply(&q.element).blocks.is_empty());
                }
                sum = sum.add(&p.element);
            }
            let all: Vec<usize> = (0..window.words.len()).collect();
            violations += usize::from(sum != FinSupp::projection(&window.table, &all));
            report.check("p_d orthogonality and completeness violations", violations as f64, 0.0);
            let mut psi_mismatch = 0usize;
            let mut bounds = Vec::new();
            for d in 0..=*max_len {
                let mut entry = json!({ "d": d, "p_d_cb_upper_bound": projections[d].cb_upper });
                if d > 0 {
                    let families: Vec<Vec<LetterMultiplier>> =
                        (0..d).map(|_| fp.factors.iter().map(LetterMultiplier::identity).collect()).collect();
                    let psi = compute("Ψ_d", psi_d(&fp, &window, &families))?;
                    psi_mismatch += usize::from(psi.element != projections[d].element);
                    entry["psi_d_cb_upper_bound"] = json!(psi.cb_upper);
                }
                bounds.push(entry);
            }
            report.output("bounds", bounds);
            report.check("Ψ_d(1, …, 1) ≠ p_d", psi_mismatch as f64, 0.0);
        }
        FreeprodCommand::Tn { file, max_len, n } => {
            let (fp, _) = load_words(report, file)?;
            let window = compute("window", WordWindow::new(&fp, *max_len))?;
            let series = compute("T_n", tn_series(&window, *n))?;
            let rate = 1.0 - 1.0 / (*n as f64).sqrt();
            let mut coefficients = Vec::new();
            let mut worst: f64 = 0.0;
            for d in 0..=*max_len {
                let expected = rate.powi(d as i32);
                let mut seen: Option<C64> = None;
                for (k, word) in window.words.iter().enumerate().filter(|(_, w)| w.len() == d) {
                    let block = series.block(&window.table, k);
                    let scalar = block[(0, 0)];
                    worst = worst.max(max_abs(&(block - qg_core::linalg::CMat::identity(fp.dim(word), fp.dim(word)) * c(expected, 0.0))));
                    seen.get_or_insert(scalar);
                }
                coefficients.push(json!({ "d": d, "coefficient": seen.map(|z| z.re) }));
            }
            report.output("coefficients", coefficients);
            report.check("T_n = Σ (1 − 1/√n)^d p_d", worst, ctx.tol());
        }
    }
    Ok(())
}

fn load_values(report: &mut RunReport, path: &Path) -> Result<(FusionRing, FusionValuesFile), CliError> {
    digest(report, path)?;
    let values: FusionValuesFile = formats::read(path)?;
    let ring_path = resolve(path, &values.ring);
    digest(report, &ring_path)?;
    let ring = read_fusion_ring(&ring_path)?;
    Ok((ring, values))
}

fn required<'a>(path: &Path, field: &'static str, v: &'a Option<Vec<formats::Complex>>) -> Result<Vec<C64>, CliError> {
    v.as_ref().map(|v| values_from(v)).ok_or_else(|| {
        FormatError::Invalid { path: path.to_path_buf(), field, message: "required by this command".into() }.into()
    })
}

pub fn fusion(ctx: &Context, report: &mut RunReport, op: &FusionCommand) -> Result<(), CliError> {
    let tol = ctx.tol();
    match op {
        FusionCommand::Verify { file } => {
            digest(report, file)?;
            let ring = read_fusion_ring(file)?;
            report.output("ring", &ring.name);
            let verdict = verify_fusion_ring(&ring);
            for check in &verdict.checks {
                report.holds(format!("{:?}", check.axiom), check.passed);
                if let Some(detail) = &check.detail {
                    report.output(&format!("{:?}", check.axiom), detail);
                }
            }
        }
        FusionCommand::Pair { values } => {
            let (ring, file) = load_values(report, values)?;
            let theta = compute("θ", CatMultiplier::new(values_from(&file.theta), None))?;
            let omega = required(values, "omega", &file.omega)?;
            let pair = compute("pairing", mult_pair(&ring, &theta, &omega))?;
            report.output("value", [pair.value.re, pair.value.im]);
            report.output("weighted_l1", pair.weighted_l1);
            report.check("|⟨θ, ω⟩| − ‖ω‖₁‖θ‖∞", pair.value.norm() - pair.weighted_l1 * theta.sup_norm(), tol);
        }
        FusionCommand::Corner { values } => {
            let (ring, file) = load_values(report, values)?;
            let theta = compute("θ", CatMultiplier::new(values_from(&file.theta), None))?;
            let f = required(values, "f", &file.f)?;
            let g = required(values, "g", &file.g)?;
            let value = compute("corner pairing", corner_pairing(&ring, &theta, &f, &g))?;
            // Only products landing on the unit contribute to the trace.
            let mut direct = ZERO;
            for i in 0..ring.len() {
                for k in 0..ring.len() {
                    direct += g[i] * theta.values[k] * f[k] * f64::from(ring.n[i][k][ring.unit]) * ring.dq[ring.unit];
                }
            }
            report.output("value", [value.re, value.im]);
            report.check("corner pairing against the unit coefficient sum", (value - direct).norm(), tol);
        }
    }
    Ok(())
}

fn load_double(ctx: &Context, report: &mut RunReport, path: &Path) -> Result<DoubleCrossed, CliError> {
    digest(report, path)?;
    let text = formats::read_text(path)?;
    let kind = formats::kind_of(path, &text)?;
    if kind == <DrinfeldFile as Datum>::KIND {
        let file: DrinfeldFile = formats::parse(path, &text)?;
        let group_path = resolve(path, &file.group);
        digest(report, &group_path)?;
        let (name, data) = read_hopf(&group_path, ctx.tolerance)?;
        report.output("double", format!("Drinfeld double of {name}"));
        return compute("double", drinfeld_double(data, file.seed));
    }
    let file: MatchingFile = formats::parse(path, &text)?;
    let mut groups = Vec::new();
    for reference in [&file.first, &file.second] {
        let group_path = resolve(path, reference);
        digest(report, &group_path)?;
        let (name, data) = read_hopf(&group_path, ctx.tolerance)?;
        groups.push((name, compute("engine", QuantumGroup::new(data))?));
    }
    let (second_name, second) = groups.pop().expect("two factors");
    let (first_name, first) = groups.pop().expect("two factors");
    report.output("double", format!("{first_name} ⋈ {second_name}"));
    let matching = compute("matching", Matching::new(file.z_matrix(path)?, first.dim(), second.dim()))?;
    compute("double", build_double_crossed(first, second, matching))
}

fn structure_checks(ctx: &Context, report: &mut RunReport, double: &DoubleCrossed) {
    let tol = ctx.tol();
    report.output("dim", double.dim());
    let m = &double.matching_report;
    report.check("matching unitarity", m.unitarity, tol);
    report.check("matching invariance", m.invariance, tol);
    report.check("matching first leg", m.first_leg, tol);
    report.check("matching second leg", m.second_leg, tol);
    report.check("axioms of the double", double.validation.max_residual(), tol);
    report.check("Haar left invariance", double.haar.left_invariance_residual, tol);
    report.check("GNS space", double.gns_residual, tol);
    report.check("canonical implementer", double.canonical_residual, tol);
    report.check("right regular representation", double.right_regular_residual, tol);
    report.check("W_m unitarity", double.w.unitarity_residual, tol);
    report.check("W_m pentagon", double.w.pentagon_residual, tol);
    report.check("W_m against the assembled W", double.kac_takesaki_residual, tol);
    report.check("Δ_m = W_m*(1⊗x)W_m", double.coproduct_residual, tol);
}

pub fn double(ctx: &Context, report: &mut RunReport, op: &DoubleCommand) -> Result<(), CliError> {
    let (matching, full) = match op {
        DoubleCommand::Build { matching } => (matching, false),
        DoubleCommand::Check { matching } => (matching, true),
    };
    let double = load_double(ctx, report, matching)?;
    structure_checks(ctx, report, &double);
    if full {
        double_checks(ctx, report, &double)?;
    }
    Ok(())
}

fn double_checks(ctx: &Context, report: &mut RunReport, double: &DoubleCrossed) -> Result<(), CliError> {
    let tol = ctx.tol();
    let gamma = compute("γ", gamma_embeddings_check(double, &double.canonical_z))?;
    for (name, e) in [("γ₁", gamma.first), ("γ₂", gamma.second)] {
        report.check(format!("{name} membership"), e.membership, tol);
        report.check(format!("{name} *-homomorphism"), e.homomorphism, tol);
        report.check(format!("{name} kernel dimension"), e.kernel_dimension as f64, 0.0);
        report.check(format!("{name} intertwining"), e.intertwining, tol);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let (n1, n2) = (double.first.dim(), double.second.dim());
    let (mut fourier, mut first, mut second): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..3 {
        let (omega1, omega2) = (random_complex_vec(&mut rng, n1), random_complex_vec(&mut rng, n2));
        fourier = fourier.max(compute("Fourier", fourier_factorization(double, &omega1, &omega2))?.residual);
        first = first.max(compute("side 1", double_multiplier_formulas(double, &omega1, Side::First))?.residual);
        second = second.max(compute("side 2", double_multiplier_formulas(double, &omega2, Side::Second))?.residual);
    }
    report.check("Fourier factorization", fourier, tol);
    report.check("multipliers induced from the first factor", first, 1e-9);
    report.check("multipliers induced from the second factor", second, 1e-9);
    if let Some(tags) = &double.tags {
        let labels = tags.bridge.table.len();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let values = (0..labels).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let theta = compute("θ", CatMultiplier::new(values, None))?;
            worst = worst.max(compute("N_θ", drinfeld_mult(double, &theta))?.residual);
        }
        report.check("N_θ = Θ(θ⊗1)", worst, 1e-9);
    }
    Ok(())
}

/// Runs `body` on a fresh report and merges its checks under `prefix`. Operations that
/// reject the data become failed checks; unreadable files abort the whole run.
fn nested(
    report: &mut RunReport,
    prefix: &str,
    body: impl FnOnce(&mut RunReport) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut sub = RunReport::new(Vec::new(), report.seed, report.tolerance);
    let outcome = body(&mut sub);
    for input in sub.inputs {
        if !report.inputs.iter().any(|known| known.path == input.path) {
            report.inputs.push(input);
        }
    }
    for mut check in sub.checks {
        check.name = format!("{prefix}: {}", check.name);
        report.checks.push(check);
    }
    match outcome {
        Err(CliError::Compute(e)) => report.holds(format!("{prefix}: {e}"), false),
        Err(e) => return Err(e),
        Ok(()) => {}
    }
    Ok(())
}

pub fn report_all(ctx: &Context, report: &mut RunReport, dir: &Path) -> Result<(), CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let mut kinds = serde_json::Map::new();
    for path in &files {
        let text = formats::read_text(path)?;
        let kind = formats::kind_of(path, &text)?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        kinds.insert(name.clone(), json!(kind));
        let p = path.as_path();
        match kind.as_str() {
            "hopf" => {
                nested(report, &format!("{name} check-hopf"), |r| check_hopf(ctx, r, p))?;
                nested(report, &format!("{name} dual"), |r| dual(ctx, r, p, None))?;
            }
            "block_map" => nested(report, &format!("{name} cbnorm"), |r| cbnorm(ctx, r, p, Some(2)))?,
            "element" => {
                let element = read_element(p)?;
                if element.space == Space::Linf {
                    for (label, op) in [
                        ("involute", MultCommand::Involute { element: p.into(), emit: None }),
                        ("average", MultCommand::Average { element: p.into(), emit: None }),
                        ("symmetrize", MultCommand::Symmetrize { element: p.into(), emit: None }),
                    ] {
                        nested(report, &format!("{name} mult {label}"), |r| mult(ctx, r, &op))?;
                    }
                }
            }
            "words" => {
                for (label, op) in [
                    ("enum", FreeprodCommand::Enum { file: p.into(), max_len: 3 }),
                    ("fuse", FreeprodCommand::Fuse { file: p.into() }),
                    ("pd", FreeprodCommand::Pd { file: p.into(), max_len: 3 }),
                    ("tn", FreeprodCommand::Tn { file: p.into(), max_len: 4, n: 4 }),
                ] {
                    nested(report, &format!("{name} freeprod {label}"), |r| freeprod(ctx, r, &op))?;
                }
            }
            "fusion_ring" => {
                nested(report, &format!("{name} fusion verify"), |r| fusion(ctx, r, &FusionCommand::Verify { file: p.into() }))?
            }
            "fusion_values" => {
                let values: FusionValuesFile = formats::parse(p, &text)?;
                if values.omega.is_some() {
                    nested(report, &format!("{name} fusion pair"), |r| fusion(ctx, r, &FusionCommand::Pair { values: p.into() }))?;
                }
                if values.f.is_some() && values.g.is_some() {
                    nested(report, &format!("{name} fusion corner"), |r| {
                        fusion(ctx, r, &FusionCommand::Corner { values: p.into() })
                    })?;
                }
            }
            "matching" | "drinfeld_double" => nested(report, &format!("{name} double check"), |r| {
                double(ctx, r, &DoubleCommand::Check { matching: p.into() })
            })?,
            // Tables are read through the elements and word files that reference them.
            "irr_table" => {}
            other => {
                return Err(FormatError::Schema { path: path.clone(), message: format!("unknown kind `{other}`") }.into())
            }
        }
    }
    report.output("files", kinds);
    let mut criteria = Vec::new();
    for result in acceptance::run_all(ctx.seed) {
        criteria.push(result.to_string());
        if let Some(e) = &result.error {
            report.holds(format!("criterion {}: {e}", result.id), false);
        }
        for mut check in result.checks {
            check.name = format!("criterion {}: {}", result.id, check.name);
            report.checks.push(check);
        }
    }
    report.output("criteria", criteria);
    Ok(())
}
