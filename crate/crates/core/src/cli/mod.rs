//! Command-line front end: argument parsing, dispatch and report rendering.

mod render;
mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::graphic::{
    self, classify_bicyclic, cycle_matroid_with, disjoint_forests, is_strictly_uniformly_dense_graph,
    is_uniformly_dense_graph, near_perfect_matching, toughness_verify, tree_packing, BicyclicClass, CheckMode, Graph,
    GraphError, MatchingResult, NotBicyclicReason, Toughness,
};
use crate::io::{self, FormatError};
use crate::linalg::{format_rational, parse_rational, usize_rat, QMatrix, Rational};
use crate::matroid::{
    dual, is_strictly_uniformly_dense_with, is_uniformly_dense_with, Certificate, Density, Matroid, MatroidError,
    ScanOptions, Subset, Verdict,
};
use crate::measure::{
    find_e_uniform_measure_with, find_positive_measure_with, verify_measure, BasisMeasure, MeasureCheck, MeasureError,
    DEFAULT_BASIS_CAP,
};
use crate::representable::{
    constant_diag_projection, determinantal_measure_scaled, matroid_from_matrix, matroid_from_projection, operator_scale, plucker, projection,
    scaling_certificate, variety_membership, ConstantDiagonal, ProjectionMatrix, RepresentationError, ScalingOptions,
    ScalingResult, ScalingStatus, VarietyInput,
};
use crate::spectral::{lambda_max_bounds, spectral_ud_check, stable_bound, SpectralError, SpectralVerdict, SubsetSelection, SPECTRAL_SUBSET_CAP};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Witness measures are only searched for below this many bases.
const WITNESS_BASIS_CAP: usize = 5_000;

const FIXTURES: &[(&str, &[u8])] = &[
    ("c4.txt", include_bytes!("../../fixtures/c4.txt")),
    ("clique_and_cycle.txt", include_bytes!("../../fixtures/clique_and_cycle.txt")),
    ("coloop.json", include_bytes!("../../fixtures/coloop.json")),
    ("cube.txt", include_bytes!("../../fixtures/cube.txt")),
    ("diamond.txt", include_bytes!("../../fixtures/diamond.txt")),
    ("diamond_incidence.json", include_bytes!("../../fixtures/diamond_incidence.json")),
    ("diamond_projection.json", include_bytes!("../../fixtures/diamond_projection.json")),
    ("k4.txt", include_bytes!("../../fixtures/k4.txt")),
    ("petersen.txt", include_bytes!("../../fixtures/petersen.txt")),
    ("tadpole.json", include_bytes!("../../fixtures/tadpole.json")),
    ("tadpole.txt", include_bytes!("../../fixtures/tadpole.txt")),
    ("theta_0_4_4.txt", include_bytes!("../../fixtures/theta_0_4_4.txt")),
    ("theta_2_3_6.txt", include_bytes!("../../fixtures/theta_2_3_6.txt")),
    ("theta_3_3_6.txt", include_bytes!("../../fixtures/theta_3_3_6.txt")),
    ("tree.txt", include_bytes!("../../fixtures/tree.txt")),
];

/// SHA-256 over the bundled fixture corpus (name, NUL, contents, NUL per file).
pub fn fixture_hash() -> String {
    let mut h = Sha256::new();
    for (name, bytes) in FIXTURES {
        h.update(name.as_bytes());
        h.update([0]);
        h.update(bytes);
        h.update([0]);
    }
    hex::encode(h.finalize())
}

pub fn version_line() -> String {
    format!("udm {} fixtures-sha256 {}", env!("CARGO_PKG_VERSION"), fixture_hash())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decide uniform density.
    CheckUd,
    /// Decide strict uniform density.
    CheckStrictUd,
    /// Density of the ground set and of `--subset` sets.
    Density,
    /// Dual matroid.
    Dual,
    /// E-uniform, full-support or determinantal basis measure.
    Measure,
    /// Operator scaling of a matrix or reduced incidence matrix.
    Scale,
    /// Constant-diagonal projection representation.
    Projection,
    /// Membership in the variety of strictly uniformly dense representations.
    Variety,
    /// Laplacian nullities and largest-eigenvalue bounds.
    Spectral,
    /// Classify a graph with cyclomatic number two.
    ClassifyBicyclic,
    /// Check `t`-toughness by vertex-subset enumeration.
    Toughness,
    /// Perfect or near-perfect matching.
    Matching,
    /// Maximum number of edge-disjoint spanning forests.
    TreePacking,
    /// List the bases.
    EnumerateBases,
    /// Re-check a certificate produced by `check-ud` or `check-strict-ud`.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckUd => "check-ud",
            Command::CheckStrictUd => "check-strict-ud",
            Command::Density => "density",
            Command::Dual => "dual",
            Command::Measure => "measure",
            Command::Scale => "scale",
            Command::Projection => "projection",
            Command::Variety => "variety",
            Command::Spectral => "spectral",
            Command::ClassifyBicyclic => "classify-bicyclic",
            Command::Toughness => "toughness",
            Command::Matching => "matching",
            Command::TreePacking => "tree-packing",
            Command::EnumerateBases => "enumerate-bases",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum MeasureKind {
    #[default]
    EUniform,
    Positive,
    Determinantal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Matroid,
    Graph,
    Matrix,
    Projection,
}

impl InputKind {
    pub fn name(self) -> &'static str {
        match self {
            InputKind::Matroid => "matroid",
            InputKind::Graph => "graph",
            InputKind::Matrix => "matrix",
            InputKind::Projection => "projection",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "udm", about = "Uniform density of matroids, graphs and real representations", disable_version_flag = true)]
struct Args {
    #[command(subcommand)]
    command: Option<Command>,
    /// Print the version and the fixture-corpus hash.
    #[arg(long, short = 'V')]
    version: bool,
    /// Matroid JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    matroid: Option<PathBuf>,
    /// Graph text file.
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Matrix JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Projection JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    projection: Option<PathBuf>,
    /// Certificate or report to verify.
    #[arg(long, global = true, value_name = "FILE")]
    certificate: Option<PathBuf>,
    /// Scaling tolerance on the projector diagonal.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_iter: usize,
    /// Largest ground set for subset enumeration (default: UDM_SUBSET_CAP or 24).
    #[arg(long, global = true)]
    subset_cap: Option<usize>,
    /// Read and write 1-based indices.
    #[arg(long, global = true)]
    one_indexed: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// `all` or `sample:N`.
    #[arg(long, global = true, default_value = "all")]
    subsets: String,
    /// Toughness parameter, `p/q` or decimal.
    #[arg(long, global = true, default_value = "1")]
    t: String,
    /// Graph check mode: exhaustive, vertex, scaling or auto.
    #[arg(long, global = true, default_value = "auto")]
    mode: String,
    /// Element list such as `0,2,3`; repeatable.
    #[arg(long, global = true, value_name = "LIST")]
    subset: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = MeasureKind::EUniform)]
    kind: MeasureKind,
    /// Projection onto the row space without column scaling.
    #[arg(long, global = true)]
    unscaled: bool,
}

/// One fully validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input_kind: InputKind,
    pub input: PathBuf,
    pub certificate: Option<PathBuf>,
    pub tol: f64,
    pub max_iter: usize,
    pub subset_cap: usize,
    pub one_indexed: bool,
    pub format: OutputFormat,
    pub threads: usize,
    pub subsets: SubsetSelection,
    pub t: Rational,
    pub mode: CheckMode,
    pub density_subsets: Vec<Vec<usize>>,
    pub measure_kind: MeasureKind,
    pub unscaled: bool,
}

impl RunConfig {
    pub fn new(command: Command, input_kind: InputKind, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input_kind,
            input: input.into(),
            certificate: None,
            tol: 1e-10,
            max_iter: 10_000,
            subset_cap: ScanOptions::default().subset_cap,
            one_indexed: false,
            format: OutputFormat::Json,
            threads: 1,
            subsets: SubsetSelection::All,
            t: Rational::from_integer(1.into()),
            mode: CheckMode::Auto,
            density_subsets: Vec::new(),
            measure_kind: MeasureKind::EUniform,
            unscaled: false,
        }
    }

    fn offset(&self) -> usize {
        usize::from(self.one_indexed)
    }

    fn scan(&self) -> ScanOptions {
        ScanOptions::default().with_cap(self.subset_cap).with_threads(self.threads)
    }

    fn scaling(&self) -> ScalingOptions {
        ScalingOptions { tol: self.tol, max_iter: self.max_iter, scan: self.scan(), ..ScalingOptions::default() }
    }
}

/// Exit code and rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Inconclusive(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Inconclusive(_) => EXIT_INCONCLUSIVE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Inconclusive(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Matroid(m) => m.into(),
            FormatError::Graph(g) => g.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        match e {
            MatroidError::GroundSetTooLarge { .. } | MatroidError::TooManyBases { .. } => Failure::Inconclusive(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CapExceeded { .. } | GraphError::TooManyBases { .. } => Failure::Inconclusive(e.to_string()),
            GraphError::Matroid(m) => m.into(),
            GraphError::Scaling(r) => r.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<RepresentationError> for Failure {
    fn from(e: RepresentationError) -> Self {
        match e {
            RepresentationError::TooManyMinors { .. } | RepresentationError::Inconclusive { .. } => {
                Failure::Inconclusive(e.to_string())
            }
            RepresentationError::Matroid(m) => m.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<MeasureError> for Failure {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::TooManyBases { .. } => Failure::Inconclusive(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::CapExceeded { .. } | SpectralError::NoConvergence { .. } => Failure::Inconclusive(e.to_string()),
            SpectralError::Graph(g) => g.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Handled = Result<(i32, Map<String, Value>), Failure>;

/// Parses command-line arguments (including the program name).
///
/// `Err` carries the exit code and the text to print: help and version output
/// exit with 0, malformed invocations with 2.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(args).map_err(|e| Outcome {
        code: if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS },
        report: e.to_string(),
    })?;
    if args.version {
        return Err(Outcome { code: EXIT_HOLDS, report: version_line() + "\n" });
    }
    let usage = |message: String| Outcome { code: EXIT_USAGE, report: format!("error: {message}\n") };
    let command = args.command.ok_or_else(|| usage("a subcommand is required".into()))?;
    let inputs: Vec<(InputKind, PathBuf)> = [
        (InputKind::Matroid, args.matroid),
        (InputKind::Graph, args.graph),
        (InputKind::Matrix, args.matrix),
        (InputKind::Projection, args.projection),
    ]
    .into_iter()
    .filter_map(|(k, p)| p.map(|p| (k, p)))
    .collect();
    let [(input_kind, input)] = <[_; 1]>::try_from(inputs)
        .map_err(|_| usage("exactly one of --matroid, --graph, --matrix, --projection is required".into()))?;
    if !(args.tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", args.tol)));
    }
    if args.max_iter == 0 || args.threads == 0 || args.subset_cap == Some(0) {
        return Err(usage("--max-iter, --threads and --subset-cap must be positive".into()));
    }
    let subsets = SubsetSelection::parse(&args.subsets)
        .ok_or_else(|| usage(format!("--subsets expects `all` or `sample:N`, got `{}`", args.subsets)))?;
    let t = parse_rational(&args.t).map_err(|e| usage(format!("--t: {e}")))?;
    if t <= Rational::from_integer(0.into()) {
        return Err(usage("--t must be positive".into()));
    }
    let mode = CheckMode::parse(&args.mode).ok_or_else(|| usage(format!("--mode: unknown mode `{}`", args.mode)))?;
    let offset = usize::from(args.one_indexed);
    let density_subsets = args
        .subset
        .iter()
        .map(|s| parse_index_list(s, offset).map_err(|m| usage(format!("--subset: {m}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunConfig {
        command,
        input_kind,
        input,
        certificate: args.certificate,
        tol: args.tol,
        max_iter: args.max_iter,
        subset_cap: args.subset_cap.unwrap_or_else(|| ScanOptions::default().subset_cap),
        one_indexed: args.one_indexed,
        format: args.format,
        threads: args.threads,
        subsets,
        t,
        mode,
        density_subsets,
        measure_kind: args.kind,
        unscaled: args.unscaled,
    })
}

fn parse_index_list(text: &str, offset: usize) -> Result<Vec<usize>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            let i: usize = p.trim().parse().map_err(|_| format!("`{p}` is not an index"))?;
            i.checked_sub(offset).ok_or_else(|| format!("index {i} below {offset}"))
        })
        .collect()
}

/// Parses and runs; the entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(args) {
        Ok(config) => run(&config),
        Err(outcome) => outcome,
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    log::debug!("running {} on {}", config.command.name(), config.input.display());
    match dispatch(config) {
        Ok((code, body)) => {
            let mut report = Map::new();
            report.insert("command".into(), json!(config.command.name()));
            report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            report.insert("exit".into(), json!(code));
            report.extend(body);
            Outcome { code, report: render::render(&Value::Object(report), config.format) }
        }
        Err(f) => Outcome { code: f.code(), report: format!("error: {}\n", f.message()) },
    }
}

enum Input {
    Matroid(Matroid),
    Graph(Graph),
    Matrix(QMatrix),
    Projection(ProjectionMatrix),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(config: &RunConfig) -> Result<Input, Failure> {
    let text = read(&config.input)?;
    let offset = config.offset();
    let context = |e: FormatError| -> Failure {
        match Failure::from(e) {
            Failure::Usage(m) => Failure::Usage(format!("{}: {m}", config.input.display())),
            other => other,
        }
    };
    Ok(match config.input_kind {
        InputKind::Matroid => Input::Matroid(io::parse_matroid(&text, offset).map_err(context)?),
        InputKind::Graph => Input::Graph(io::parse_graph(&text, offset).map_err(context)?),
        InputKind::Matrix => Input::Matrix(io::parse_matrix(&text).map_err(context)?),
        InputKind::Projection => Input::Projection(io::parse_projection(&text).map_err(context)?),
    })
}

fn unsupported(config: &RunConfig) -> Failure {
    Failure::Usage(format!("{} does not accept --{} input", config.command.name(), config.input_kind.name()))
}

fn dispatch(config: &RunConfig) -> Handled {
    let input = load(config)?;
    match config.command {
        Command::CheckUd => check(config, &input, false),
        Command::CheckStrictUd => check(config, &input, true),
        Command::Density => density(config, &input),
        Command::Dual => dual_cmd(config, &input),
        Command::Measure => measure(config, &input),
        Command::Scale => scale(config, &input),
        Command::Projection => projection_cmd(config, &input),
        Command::Variety => variety(config, &input),
        Command::Spectral => spectral(config, &input),
        Command::ClassifyBicyclic => bicyclic(config, &input),
        Command::Toughness => toughness(config, &input),
        Command::Matching => matching(config, &input),
        Command::TreePacking => packing(config, &input),
        Command::EnumerateBases => enumerate(config, &input),
        Command::Verify => verify::verify(config, &input),
    }
}

fn body(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Matroid of any matroid-like input.
fn as_matroid(input: &Input) -> Result<Matroid, Failure> {
    match input {
        Input::Matroid(m) => Ok(m.clone()),
        Input::Graph(g) => Ok(cycle_matroid_with(g, DEFAULT_BASIS_CAP)?),
        Input::Matrix(x) => Ok(matroid_from_matrix(x)?),
        Input::Projection(t) => Ok(matroid_from_projection(t)?),
    }
}

fn matrix_of(config: &RunConfig, input: &Input) -> Result<QMatrix, Failure> {
    match input {
        Input::Matrix(x) => Ok(x.clone()),
        Input::Graph(g) => Ok(g.reduced_incidence_matrix()?),
        _ => Err(unsupported(config)),
    }
}

fn graph_of<'a>(config: &RunConfig, input: &'a Input) -> Result<&'a Graph, Failure> {
    match input {
        Input::Graph(g) => Ok(g),
        _ => Err(unsupported(config)),
    }
}

/// A basis measure backing a uniformly dense verdict: the uniform measure when
/// it is already E-uniform, then the scaled determinantal measure of a
/// representation, then a linear program.
fn witness(m: &Matroid, x: Option<&QMatrix>, config: &RunConfig, strict: bool) -> Option<BasisMeasure> {
    if m.basis_count() > WITNESS_BASIS_CAP {
        return None;
    }
    let e_uniform = |mu: &BasisMeasure| verify_measure(m, mu).is_ok_and(|c| c.is_e_uniform());
    let uniform = BasisMeasure::constant(m, Rational::from_integer(1.into()));
    if e_uniform(&uniform) {
        return Some(uniform);
    }
    if let Some(x) = x {
        if let Ok(ScalingResult { status: ScalingStatus::Converged { exact_weights: Some(w), .. }, .. }) =
            operator_scale(x, &config.scaling())
        {
            if let Ok(mu) = determinantal_measure_scaled(x, Some(&w)) {
                if e_uniform(&mu) {
                    return Some(mu);
                }
            }
        }
    }
    let found = if strict {
        find_positive_measure_with(m, WITNESS_BASIS_CAP)
    } else {
        find_e_uniform_measure_with(m, WITNESS_BASIS_CAP)
    };
    found.ok().flatten()
}

fn check(config: &RunConfig, input: &Input, strict: bool) -> Handled {
    let scan = config.scan();
    let mut cert = match input {
        Input::Matroid(m) => {
            if strict {
                is_strictly_uniformly_dense_with(m, &scan)?
            } else {
                is_uniformly_dense_with(m, &scan)?
            }
        }
        Input::Graph(g) => {
            if strict {
                is_strictly_uniformly_dense_graph(g, config.mode, &scan)?
            } else {
                is_uniformly_dense_graph(g, config.mode, &scan)?
            }
        }
        Input::Matrix(x) => {
            let exhaustive = match config.mode {
                CheckMode::Exhaustive | CheckMode::Vertex => true,
                CheckMode::Scaling => false,
                CheckMode::Auto => x.cols() <= scan.subset_cap,
            };
            if exhaustive {
                let m = matroid_from_matrix(x)?;
                if strict {
                    is_strictly_uniformly_dense_with(&m, &scan)?
                } else {
                    is_uniformly_dense_with(&m, &scan)?
                }
            } else {
                let mut cert = scaling_certificate(x, &config.scaling(), &scan)?;
                if !strict && cert.verdict.is_uniformly_dense() {
                    cert.verdict = Verdict::UniformlyDense;
                    cert.violator = None;
                }
                cert
            }
        }
        Input::Projection(t) => {
            let m = matroid_from_projection(t)?;
            if strict {
                is_strictly_uniformly_dense_with(&m, &scan)?
            } else {
                is_uniformly_dense_with(&m, &scan)?
            }
        }
    };
    if cert.verdict.is_uniformly_dense() && cert.witness.is_none() {
        let small = match input {
            Input::Matroid(m) => Some((m.clone(), None)),
            Input::Graph(g) => cycle_matroid_with(g, WITNESS_BASIS_CAP).ok().map(|m| (m, g.reduced_incidence_matrix().ok())),
            Input::Matrix(x) if x.cols() <= 20 => matroid_from_matrix(x).ok().map(|m| (m, Some(x.clone()))),
            Input::Projection(t) if t.dim() <= 20 => matroid_from_projection(t).ok().map(|m| (m, None)),
            _ => None,
        };
        if let Some((m, x)) = small {
            cert.witness = witness(&m, x.as_ref(), config, cert.verdict.is_strict());
        }
    }
    let holds = if strict { cert.verdict.is_strict() } else { cert.verdict.is_uniformly_dense() };
    let code = if holds { EXIT_HOLDS } else { EXIT_FAILS };
    Ok((code, body([("certificate", certificate_value(&cert, config.offset()))])))
}

fn certificate_value(cert: &Certificate, offset: usize) -> Value {
    io::certificate_json(cert, offset)
}

fn checked_subset(list: &[usize], n: usize, offset: usize) -> Result<Subset, Failure> {
    match list.iter().find(|&&i| i >= n) {
        Some(&bad) => Err(Failure::Usage(format!("--subset: element {} out of range", bad + offset))),
        None => Ok(Subset::from_indices(list)),
    }
}

fn density(config: &RunConfig, input: &Input) -> Handled {
    let from_projection = match input {
        Input::Projection(t) => Some(matroid_from_projection(t)?),
        _ => None,
    };
    let (n, rank): (usize, Box<dyn Fn(Subset) -> usize + '_>) = match input {
        Input::Matroid(m) => (m.ground_size(), Box::new(|s| m.rank(s))),
        Input::Graph(g) => (g.edge_count(), Box::new(|s| g.rank(s))),
        Input::Matrix(x) => (x.cols(), Box::new(|s: Subset| x.select_columns(&s.indices()).rank())),
        Input::Projection(_) => {
            let m = from_projection.as_ref().expect("projection input");
            (m.ground_size(), Box::new(|s| m.rank(s)))
        }
    };
    if n > 64 {
        return Err(Failure::Usage(format!("{n} elements exceed 64")));
    }
    let offset = config.offset();
    let full = Subset::full(n);
    let entry = |s: Subset| {
        let r = rank(s);
        json!({ "subset": io::subset_json(s, offset), "size": s.len(), "rank": r, "density": io::density_json(&Density::of(s.len(), r)) })
    };
    let mut subsets = Vec::new();
    for list in &config.density_subsets {
        subsets.push(entry(checked_subset(list, n, offset)?));
    }
    let r = rank(full);
    Ok((
        EXIT_HOLDS,
        body([
            ("elements", json!(n)),
            ("rank", json!(r)),
            ("density", io::density_json(&Density::of(n, r))),
            ("subsets", Value::Array(subsets)),
        ]),
    ))
}

fn dual_cmd(config: &RunConfig, input: &Input) -> Handled {
    let m = as_matroid(input)?;
    Ok((EXIT_HOLDS, body([("matroid", io::matroid_json(&dual(&m), config.offset()))])))
}

fn measure(config: &RunConfig, input: &Input) -> Handled {
    let offset = config.offset();
    match config.measure_kind {
        MeasureKind::Determinantal => {
            let x = matrix_of(config, input)?;
            let m = matroid_from_matrix(&x)?;
            let mu = determinantal_measure_scaled(&x, None)?.normalized();
            let check = verify_measure(&m, &mu)?;
            let (code, marginal) = match &check {
                MeasureCheck::EUniform { marginal } => (EXIT_HOLDS, Some(marginal.clone())),
                MeasureCheck::NotEUniform { .. } => (EXIT_FAILS, None),
            };
            let mut out = io::measure_json(&mu, marginal.as_ref(), offset);
            if let (MeasureCheck::NotEUniform { marginals, .. }, Value::Object(map)) = (&check, &mut out) {
                map.insert("marginals".into(), json!(marginals.iter().map(format_rational).collect::<Vec<_>>()));
            }
            Ok((code, body([("kind", json!("determinantal")), ("e_uniform", json!(check.is_e_uniform())), ("result", out)])))
        }
        kind => {
            let m = as_matroid(input)?;
            let positive = kind == MeasureKind::Positive;
            let found =
                if positive { find_positive_measure_with(&m, DEFAULT_BASIS_CAP)? } else { find_e_uniform_measure_with(&m, DEFAULT_BASIS_CAP)? };
            let name = if positive { "positive" } else { "e-uniform" };
            match found {
                Some(mu) => {
                    let marginal = match verify_measure(&m, &mu)? {
                        MeasureCheck::EUniform { marginal } => marginal,
                        MeasureCheck::NotEUniform { .. } => unreachable!("solver returned a non-uniform measure"),
                    };
                    Ok((
                        EXIT_HOLDS,
                        body([("kind", json!(name)), ("exists", json!(true)), ("result", io::measure_json(&mu, Some(&marginal), offset))]),
                    ))
                }
                None => Ok((EXIT_FAILS, body([("kind", json!(name)), ("exists", json!(false))]))),
            }
        }
    }
}

fn scale(config: &RunConfig, input: &Input) -> Handled {
    let x = matrix_of(config, input)?;
    let offset = config.offset();
    let result = operator_scale(&x, &config.scaling())?;
    let target = usize_rat(x.rows()) / usize_rat(x.cols().max(1));
    let mut out = body([
        ("status", json!(status_name(&result.status))),
        ("iterations", json!(result.iterations)),
        ("deviation", json!(result.deviation)),
        ("target_diagonal", io::rational_json(&target)),
    ]);
    let code = match &result.status {
        ScalingStatus::Converged { weights, exact_weights } => {
            out.insert("weights".into(), json!(weights));
            out.insert("tol".into(), json!(config.tol));
            match exact_weights {
                Some(w) => {
                    out.insert("exact_weights".into(), json!(w.iter().map(format_rational).collect::<Vec<_>>()));
                    if let ConstantDiagonal::Projection { matrix, .. } = constant_diag_projection(&x, &config.scaling())? {
                        if let Some(d) = matrix.diagonal_exact() {
                            out.insert("diagonal".into(), json!(d.iter().map(format_rational).collect::<Vec<_>>()));
                        }
                    }
                    if let Ok(mu) = determinantal_measure_scaled(&x, Some(w)) {
                        out.insert("measure".into(), io::measure_json(&mu.normalized(), Some(&target), offset));
                    }
                }
                None => {
                    if let ConstantDiagonal::Projection { matrix, .. } = constant_diag_projection(&x, &config.scaling())? {
                        out.insert("diagonal".into(), json!(matrix.diagonal_f64()));
                    }
                }
            }
            EXIT_HOLDS
        }
        ScalingStatus::Violated(v) | ScalingStatus::Boundary(v) => {
            out.insert("violator".into(), io::violator_json(v, offset));
            EXIT_FAILS
        }
    };
    Ok((code, out))
}

fn status_name(s: &ScalingStatus) -> &'static str {
    match s {
        ScalingStatus::Converged { .. } => "Converged",
        ScalingStatus::Violated(_) => "NotUniformlyDense",
        ScalingStatus::Boundary(_) => "UniformlyDenseNotStrict",
    }
}

fn projection_cmd(config: &RunConfig, input: &Input) -> Handled {
    let x = matrix_of(config, input)?;
    if config.unscaled {
        let t = projection(&x)?;
        return Ok((
            EXIT_HOLDS,
            body([("constant_diagonal", json!(t.has_constant_diagonal())), ("projection", io::projection_json(&t))]),
        ));
    }
    match constant_diag_projection(&x, &config.scaling())? {
        ConstantDiagonal::Projection { matrix, scaling } => Ok((
            EXIT_HOLDS,
            body([
                ("constant_diagonal", json!(true)),
                ("iterations", json!(scaling.iterations)),
                ("projection", io::projection_json(&matrix)),
            ]),
        )),
        ConstantDiagonal::NotStrictlyUniformlyDense(scaling) => {
            let mut out = body([("constant_diagonal", json!(false)), ("status", json!(status_name(&scaling.status)))]);
            if let ScalingStatus::Violated(v) | ScalingStatus::Boundary(v) = &scaling.status {
                out.insert("violator".into(), io::violator_json(v, config.offset()));
            }
            Ok((EXIT_FAILS, out))
        }
    }
}

fn variety(config: &RunConfig, input: &Input) -> Handled {
    let (member, extra) = match input {
        Input::Projection(t) => (variety_membership(&VarietyInput::Projection(t.clone()))?, None),
        other => {
            let x = matrix_of(config, other)?;
            let coords = plucker(&x)?;
            let list: Vec<Value> = coords
                .iter()
                .map(|(s, p)| json!({ "subset": io::subset_json(*s, config.offset()), "value": io::rational_json(p) }))
                .collect();
            let values = coords.into_iter().map(|(_, p)| p).collect();
            let input = VarietyInput::Coordinates { n: x.cols(), k: x.rows(), values };
            (variety_membership(&input)?, Some(Value::Array(list)))
        }
    };
    let mut out = body([("member", json!(member))]);
    if let Some(p) = extra {
        out.insert("plucker".into(), p);
    }
    Ok((if member { EXIT_HOLDS } else { EXIT_FAILS }, out))
}

fn bound_json(b: &crate::spectral::BoundCheck) -> Value {
    json!({ "lhs": b.lhs, "rhs": b.rhs, "holds": b.holds() })
}

fn subset_bounds_json(b: &crate::spectral::SubsetBounds, offset: usize) -> Value {
    let entry = |s: &crate::spectral::SubsetBound| json!({ "subset": io::subset_json(s.subset, offset), "lhs": s.check.lhs, "rhs": s.check.rhs });
    json!({
        "checked": b.checked,
        "violations": b.violations,
        "tightest": b.tightest.as_ref().map(entry),
        "first_violation": b.first_violation.as_ref().map(entry),
    })
}

fn spectral(config: &RunConfig, input: &Input) -> Handled {
    let g = graph_of(config, input)?;
    let scan = config.scan();
    let offset = config.offset();
    let report = lambda_max_bounds(g, config.subsets, &scan)?;
    let violations = report.violations();
    let mut out = body([
        ("lambda_max", json!(report.lambda_max)),
        ("density", io::rational_json(&report.density)),
        ("uniformly_dense", json!(report.uniformly_dense)),
        (
            "nullities",
            json!({
                "laplacian": report.laplacian_nullity,
                "components": report.components,
                "edge_laplacian": report.edge_laplacian_nullity,
                "cycle_rank": report.betti,
            }),
        ),
        ("global_bound", bound_json(&report.global)),
        ("boundary_bound", subset_bounds_json(&report.boundary, offset)),
        ("restriction_bound", subset_bounds_json(&report.stable, offset)),
        ("violations", json!(violations)),
    ]);
    let mut not_ud = report.certifies_not_uniformly_dense();
    if let Some(p) = &report.packing {
        out.insert(
            "packing_bound".into(),
            json!({ "forests": p.trees, "floor_density": p.floor_density, "lhs": p.check.lhs, "rhs": p.check.rhs, "holds": p.check.holds() }),
        );
    }
    if report.edges <= SPECTRAL_SUBSET_CAP {
        let check = spectral_ud_check(g, &scan)?;
        let verdict = match &check.verdict {
            SpectralVerdict::ConsistentUd => json!({ "verdict": "ConsistentUD" }),
            SpectralVerdict::Violation(v) => json!({ "verdict": "Violation", "violator": io::violator_json(v, offset) }),
        };
        not_ud |= matches!(check.verdict, SpectralVerdict::Violation(_));
        out.insert("characterization".into(), verdict);
        out.insert("rank_condition".into(), json!(check.rank_condition_holds));
        out.insert("nullity_condition".into(), json!(check.nullity_condition_holds));
    }
    if !config.density_subsets.is_empty() {
        let mut requested = Vec::new();
        for list in &config.density_subsets {
            let a = checked_subset(list, g.edge_count(), offset)?;
            let b = stable_bound(g, a)?;
            not_ud |= !b.holds();
            requested.push(json!({ "subset": io::subset_json(a, offset), "lhs": b.lhs, "rhs": b.rhs, "holds": b.holds() }));
        }
        out.insert("requested_restrictions".into(), Value::Array(requested));
    }
    out.insert("certifies_not_uniformly_dense".into(), json!(not_ud));
    Ok((if violations.is_empty() && !not_ud { EXIT_HOLDS } else { EXIT_FAILS }, out))
}

fn bicyclic(config: &RunConfig, input: &Input) -> Handled {
    let g = graph_of(config, input)?;
    Ok(match classify_bicyclic(g) {
        BicyclicClass::UniformlyDense(l) => (EXIT_HOLDS, body([("class", json!("UniformlyDense")), ("lengths", json!(l))])),
        BicyclicClass::NotUniformlyDense(l) => (EXIT_FAILS, body([("class", json!("NotUniformlyDense")), ("lengths", json!(l))])),
        BicyclicClass::NotBicyclic(reason) => {
            let reason = match reason {
                NotBicyclicReason::Disconnected => json!("disconnected"),
                NotBicyclicReason::Betti(b) => json!(format!("cycle rank {b}")),
                NotBicyclicReason::CutEdge(e) => json!(format!("bridge {}", e + config.offset())),
            };
            (EXIT_FAILS, body([("class", json!("NotBicyclic")), ("reason", reason)]))
        }
    })
}

fn toughness(config: &RunConfig, input: &Input) -> Handled {
    let g = graph_of(config, input)?;
    let t = format_rational(&config.t);
    Ok(match toughness_verify(g, &config.t)? {
        Toughness::Holds => (EXIT_HOLDS, body([("t", json!(t)), ("holds", json!(true))])),
        Toughness::Counterexample { removed, components } => (
            EXIT_FAILS,
            body([
                ("t", json!(t)),
                ("holds", json!(false)),
                ("removed", json!(removed.iter().map(|v| v + config.offset()).collect::<Vec<_>>())),
                ("components", json!(components)),
            ]),
        ),
    })
}

fn matching(config: &RunConfig, input: &Input) -> Handled {
    let g = graph_of(config, input)?;
    let offset = config.offset();
    let edges = |m: &[usize]| json!(m.iter().map(|&e| e + offset).collect::<Vec<_>>());
    Ok(match near_perfect_matching(g)? {
        MatchingResult::PerfectMatching(m) => (EXIT_HOLDS, body([("result", json!("PerfectMatching")), ("edges", edges(&m))])),
        MatchingResult::NearPerfect(per) => {
            let list: Vec<Value> = per.iter().map(|(v, m)| json!({ "vertex": v + offset, "edges": edges(m) })).collect();
            (EXIT_HOLDS, body([("result", json!("NearPerfect")), ("matchings", Value::Array(list))]))
        }
        MatchingResult::Neither => (EXIT_FAILS, body([("result", json!("Neither"))])),
    })
}

fn packing(config: &RunConfig, input: &Input) -> Handled {
    let g = graph_of(config, input)?;
    let k = tree_packing(g)?;
    let owner = disjoint_forests(g, k).unwrap_or_default();
    let offset = config.offset();
    let forests: Vec<Value> = (0..k)
        .map(|i| json!((0..owner.len()).filter(|&e| owner[e] == Some(i)).map(|e| e + offset).collect::<Vec<_>>()))
        .collect();
    Ok((EXIT_HOLDS, body([("forests", json!(k)), ("edge_sets", Value::Array(forests))])))
}

fn enumerate(config: &RunConfig, input: &Input) -> Handled {
    let m = as_matroid(input)?;
    if let Input::Graph(g) = input {
        debug_assert_eq!(graphic::cycle_matroid(g).ok().map(|c| c.basis_count()), Some(m.basis_count()));
    }
    Ok((EXIT_HOLDS, body([("count", json!(m.basis_count())), ("matroid", io::matroid_json(&m, config.offset()))])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn tadpole_check() {
        let out = main_with_args(["udm", "check-ud", "--matroid", &fixture("tadpole.json")]);
        assert_eq!(out.code, EXIT_FAILS, "{}", out.report);
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["certificate"]["violator"]["subset"], json!([1, 2, 3]));
        assert_eq!(v["certificate"]["violator"]["density"], json!("3/2"));
        assert_eq!(v["certificate"]["density"], json!("4/3"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(main_with_args(["udm", "check-ud"]).code, EXIT_USAGE);
        assert_eq!(main_with_args(["udm", "bogus"]).code, EXIT_USAGE);
        let both = main_with_args(["udm", "check-ud", "--matroid", "a", "--graph", "b"]);
        assert_eq!(both.code, EXIT_USAGE);
        assert_eq!(main_with_args(["udm", "check-ud", "--matroid", &fixture("tadpole.json"), "--tol", "0"]).code, EXIT_USAGE);
        assert_eq!(main_with_args(["udm", "check-ud", "--matroid", "/nonexistent"]).code, EXIT_USAGE);
    }

    #[test]
    fn version_has_hash() {
        let out = main_with_args(["udm", "--version"]);
        assert_eq!(out.code, 0);
        assert!(out.report.contains(&fixture_hash()));
        assert_eq!(fixture_hash().len(), 64);
    }
}
