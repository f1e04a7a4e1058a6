//! The `heffter` command line: `construct`, `analyze`, `faces` and
//! `catalog`.
//!
//! Exit codes: 0 when everything holds, 1 when a predicted property fails,
//! 2 for inadmissible parameters or unreadable input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{gcd, prime_power, AlgebraError, Element, FieldSpec};
use crate::autgroup::{
    exhaustive_search_with_budget, maps_faces_to_faces, multiplicative_auts, restricted_search_with_budget,
    translations_are_automorphisms, AutError, AutReport, SearchBudget,
};
use crate::embedding::{
    build_rho0, faces_to_json, faces_to_text, surface_report, validate_rotation, verify_biembedding,
    BiembeddingReport, Embedding, EmbeddingError,
};
use crate::heffter::{
    build_rank_one, check_rank_one_parameters, is_multiplicative_subgroup, validate_heffter, HeffterError,
    PartiallyFilledArray, ValidationReport,
};
use crate::orderings::{check_globally_simple, natural_orderings, OrderingError, OrderingPair};

/// Largest `qmax` the catalog accepts without `--force`.
pub const CATALOG_QMAX_LIMIT: u32 = 1000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{0}")]
    PropertyFailure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadParameters(_) => 2,
            CliError::PropertyFailure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<HeffterError> for CliError {
    fn from(e: HeffterError) -> Self {
        match e {
            HeffterError::ValidationFailed(msg) => CliError::PropertyFailure(format!("heffter-validation failed: {msg}")),
            other => CliError::BadParameters(other.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::BadParameters(e.to_string())
    }
}

impl From<AutError> for CliError {
    fn from(e: AutError) -> Self {
        match e {
            AutError::TooLarge { .. } => CliError::BadParameters(e.to_string()),
            other => CliError::PropertyFailure(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heffter", version, about = "Rank-one Heffter arrays, Archdeacon embeddings and their automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the rank-one array and write it in the array text format.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the embedding and check faces, genus and automorphism group.
    Analyze {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Mode::Restricted)]
        mode: Mode,
        /// Allow exhaustive search above q = 71.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export the face list of the embedding.
    Faces {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate every admissible (m, n, q) with q <= qmax.
    Catalog {
        #[arg(long)]
        qmax: u32,
        /// Allow qmax above the catalog limit.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    /// Number of trailing rows read right to left.
    #[arg(long, default_value_t = 0)]
    ell: usize,
    /// Element of order n (canonical encoding); default is the smallest.
    #[arg(long)]
    xi: Option<u32>,
    /// Element of order m (canonical encoding); default is the smallest.
    #[arg(long)]
    eps: Option<u32>,
    /// Read the array from a file instead of constructing it.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Restricted,
    Exhaustive,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Construct,
    Analyze,
    Faces,
    Catalog,
}

/// One fully parsed invocation.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: CommandKind,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub q: Option<u32>,
    pub ell: usize,
    pub xi: Option<u32>,
    pub eps: Option<u32>,
    pub input: Option<PathBuf>,
    pub mode: Mode,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub qmax: Option<u32>,
    pub force: bool,
    /// Per-instance time budget, from `HEFFTER_BUDGET_MS`.
    pub budget_ms: Option<u64>,
}

impl JobConfig {
    pub fn new(command: CommandKind) -> Self {
        JobConfig {
            command,
            m: None,
            n: None,
            q: None,
            ell: 0,
            xi: None,
            eps: None,
            input: None,
            mode: Mode::Restricted,
            format: Format::Text,
            out: None,
            qmax: None,
            force: false,
            budget_ms: None,
        }
    }

    fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            exhaustive_max_q: if self.force { u32::MAX } else { SearchBudget::default().exhaustive_max_q },
            deadline: self.budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
        }
    }
}

fn job_from_cli(cli: Cli, budget_ms: Option<u64>) -> JobConfig {
    let mut cfg;
    let (params, output) = match cli.command {
        Command::Construct { params, output } => {
            cfg = JobConfig::new(CommandKind::Construct);
            (Some(params), output)
        }
        Command::Analyze { params, mode, force, output } => {
            cfg = JobConfig::new(CommandKind::Analyze);
            cfg.mode = mode;
            cfg.force = force;
            (Some(params), output)
        }
        Command::Faces { params, output } => {
            cfg = JobConfig::new(CommandKind::Faces);
            (Some(params), output)
        }
        Command::Catalog { qmax, force, output } => {
            cfg = JobConfig::new(CommandKind::Catalog);
            cfg.qmax = Some(qmax);
            cfg.force = force;
            (None, output)
        }
    };
    if let Some(p) = params {
        cfg.m = p.m;
        cfg.n = p.n;
        cfg.q = p.q;
        cfg.ell = p.ell;
        cfg.xi = p.xi;
        cfg.eps = p.eps;
        cfg.input = p.input;
    }
    cfg.format = output.format;
    cfg.out = output.out;
    cfg.budget_ms = budget_ms;
    cfg
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let budget_ms = match std::env::var("HEFFTER_BUDGET_MS") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(ms) => Some(ms),
            Err(_) => {
                eprintln!("bad parameters: HEFFTER_BUDGET_MS={v:?} is not a number of milliseconds");
                return 2;
            }
        },
        Err(_) => None,
    };
    let cfg = job_from_cli(cli, budget_ms);
    match execute(&cfg) {
        Ok(out) => match emit(&cfg, &out) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Rendered output of a command plus the property failure, if any, that
/// decides the exit code after the output is written.
#[derive(Debug)]
pub struct CommandOutput {
    pub body: String,
    pub failure: Option<String>,
}

fn emit(cfg: &JobConfig, out: &CommandOutput) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.body)?,
        None => print!("{}", out.body),
    }
    match &out.failure {
        Some(name) => Err(CliError::PropertyFailure(format!("property failed: {name}"))),
        None => Ok(()),
    }
}

pub fn execute(cfg: &JobConfig) -> Result<CommandOutput, CliError> {
    if cfg.format == Format::Csv && cfg.command != CommandKind::Catalog {
        return Err(CliError::BadParameters("--format csv is only available for catalog".into()));
    }
    match cfg.command {
        CommandKind::Construct => cmd_construct(cfg),
        CommandKind::Analyze => cmd_analyze(cfg),
        CommandKind::Faces => cmd_faces(cfg),
        CommandKind::Catalog => cmd_catalog(cfg),
    }
}

/// Resolved `(field, m, n)` from the `--m/--n/--q` combination.
pub fn resolve_parameters(m: Option<usize>, n: Option<usize>, q: Option<u32>) -> Result<(FieldSpec, usize, usize), CliError> {
    let (m, n) = match (m, n, q) {
        (Some(m), Some(n), _) => (m, n),
        (Some(m), None, Some(q)) | (None, Some(m), Some(q)) if m > 0 && (q as usize - 1).is_multiple_of(2 * m) => {
            let other = (q as usize - 1) / (2 * m);
            if n.is_some() { (other, m) } else { (m, other) }
        }
        (None, None, Some(q)) => admissible_pairs(q)
            .into_iter()
            .next()
            .ok_or_else(|| CliError::BadParameters(format!("no admissible (m, n) with 2mn + 1 = {q}")))?,
        _ => return Err(CliError::BadParameters("give --m and --n, or --q".into())),
    };
    let q_expected = 2 * m as u64 * n as u64 + 1;
    if let Some(q) = q {
        if q as u64 != q_expected {
            return Err(CliError::BadParameters(format!("q = {q} but 2*{m}*{n}+1 = {q_expected}")));
        }
    }
    let (p, e) = prime_power(q_expected)
        .ok_or_else(|| CliError::BadParameters(format!("2*{m}*{n}+1 = {q_expected} is not a prime power")))?;
    let field = FieldSpec::new(p, e)?;
    check_rank_one_parameters(&field, m, n)?;
    Ok((field, m, n))
}

/// Unordered admissible pairs `m < n` (odd, coprime, both at least 3) with
/// `2mn + 1 = q`, when `q` is a prime power.
pub fn admissible_pairs(q: u32) -> Vec<(usize, usize)> {
    if q < 3 || prime_power(q as u64).is_none() || !(q - 1).is_multiple_of(2) {
        return Vec::new();
    }
    let mn = (q as usize - 1) / 2;
    (3..)
        .take_while(|m| m * m < mn)
        .filter(|&m| mn.is_multiple_of(m))
        .map(|m| (m, mn / m))
        .filter(|&(m, n)| m % 2 == 1 && n % 2 == 1 && gcd(m as u64, n as u64) == 1)
        .collect()
}

/// The array an instance is built from.
struct Instance {
    array: PartiallyFilledArray,
    m: usize,
    n: usize,
    /// Built by the rank-one construction rather than read from a file.
    constructed: bool,
    xi: Option<Element>,
    eps: Option<Element>,
}

fn load_instance(cfg: &JobConfig) -> Result<Instance, CliError> {
    if let Some(path) = &cfg.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::BadParameters(format!("cannot read {}: {e}", path.display())))?;
        let array: PartiallyFilledArray = text.parse().map_err(|e: HeffterError| CliError::BadParameters(e.to_string()))?;
        let (m, n) = (array.rows(), array.cols());
        return Ok(Instance { array, m, n, constructed: false, xi: None, eps: None });
    }
    let (field, m, n) = resolve_parameters(cfg.m, cfg.n, cfg.q)?;
    let xi = match cfg.xi {
        Some(v) => field.element(v as u64)?,
        None => field.find_element_of_order(n as u64)?,
    };
    let eps = match cfg.eps {
        Some(v) => field.element(v as u64)?,
        None => field.find_element_of_order(m as u64)?,
    };
    let array = build_rank_one(&field, m, n, xi, eps)?;
    Ok(Instance { array, m, n, constructed: true, xi: Some(xi), eps: Some(eps) })
}

#[derive(Serialize)]
struct ConstructJson<'a> {
    field: String,
    p: u32,
    e: u32,
    q: u32,
    m: usize,
    n: usize,
    xi: Option<Element>,
    eps: Option<Element>,
    rows: Vec<Vec<Option<Element>>>,
    validation: &'a ValidationReport,
}

pub fn cmd_construct(cfg: &JobConfig) -> Result<CommandOutput, CliError> {
    let inst = load_instance(cfg)?;
    let a = &inst.array;
    let report = validate_heffter(a);
    let body = match cfg.format {
        Format::Json => {
            let f = a.field();
            let json = ConstructJson {
                field: f.header(),
                p: f.p(),
                e: f.e(),
                q: f.q(),
                m: inst.m,
                n: inst.n,
                xi: inst.xi,
                eps: inst.eps,
                rows: (0..a.rows()).map(|r| (0..a.cols()).map(|c| a.get(r, c)).collect()).collect(),
                validation: &report,
            };
            serde_json::to_string_pretty(&json).expect("serialize") + "\n"
        }
        _ => a.to_string(),
    };
    let failure = (!report.ok).then(|| format!("heffter-validation failed: {}", report.summary()));
    Ok(CommandOutput { body, failure })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
}

/// Everything `analyze` reports.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub field: String,
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub source: &'static str,
    pub heffter_valid: bool,
    pub globally_simple: bool,
    pub compatible: bool,
    pub orderings_simple: bool,
    pub rotation_valid: bool,
    pub rho0: String,
    pub faces: BTreeMap<usize, usize>,
    pub face_count: u64,
    pub euler_characteristic: i64,
    pub genus: u64,
    pub biembedding: BiembeddingReport,
    pub aut0: usize,
    pub total: u64,
    pub modes_agree: Option<bool>,
    pub restricted: Option<AutReport>,
    pub exhaustive: Option<AutReport>,
    pub checks: Vec<Check>,
    pub ok: bool,
}

impl AnalysisReport {
    pub fn first_failure(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.ok).map(|c| c.name)
    }
}

fn embed(array: &PartiallyFilledArray, ell: usize) -> Result<(OrderingPair, Result<Embedding, EmbeddingError>), CliError> {
    let pair = natural_orderings(array, ell).map_err(|e| match e {
        OrderingError::BadEll { .. } => CliError::BadParameters(e.to_string()),
        other => CliError::PropertyFailure(format!("orderings failed: {other}")),
    })?;
    let emb = build_rho0(array, &pair);
    Ok((pair, emb))
}

/// Runs the full analysis of one instance.
pub fn analyze_instance(cfg: &JobConfig) -> Result<AnalysisReport, CliError> {
    let inst = load_instance(cfg)?;
    let (m, n) = (inst.m, inst.n);
    let a = &inst.array;
    let field = a.field().clone();
    let q = field.q();

    let validation = validate_heffter(a);
    if !validation.ok {
        return Err(CliError::PropertyFailure(format!("heffter-validation failed: {}", validation.summary())));
    }
    let globally_simple = check_globally_simple(a);
    let (pair, emb) = embed(a, cfg.ell)?;
    let compatible = pair.is_compatible();
    let emb = emb.map_err(|e| CliError::PropertyFailure(format!("compatibility failed: {e}")))?;
    let orderings_simple = pair.is_simple(&field);
    let rotation_valid = validate_rotation(&emb);
    let surface = surface_report(&emb).map_err(|e| CliError::PropertyFailure(format!("surface failed: {e}")))?;
    // columns give faces of length m, rows faces of length n
    let biembedding = verify_biembedding(&emb, m, n);

    let budget = cfg.search_budget();
    let restricted = match cfg.mode {
        Mode::Restricted | Mode::Both => Some(restricted_search_with_budget(&emb, m, n, &budget)?),
        Mode::Exhaustive => None,
    };
    let exhaustive = match cfg.mode {
        Mode::Exhaustive | Mode::Both => Some(exhaustive_search_with_budget(&emb, &budget)?.with_params(m, n)),
        Mode::Restricted => None,
    };
    let modes_agree = match (&restricted, &exhaustive) {
        (Some(r), Some(e)) => Some(r.same_group(e)),
        _ => None,
    };
    let primary = restricted.as_ref().or(exhaustive.as_ref()).expect("at least one search ran");

    let mn = (m * n) as u64;
    let odd_distinct = m % 2 == 1 && n % 2 == 1 && m != n;
    let predicted_genus = (2 - q as i64 * (1 + m as i64 + n as i64 - (m * n) as i64)) / 2;
    let exact_group = inst.constructed && cfg.ell == 0;

    let mut checks = vec![
        Check { name: "heffter-validation", ok: true },
        Check { name: "compatible", ok: compatible },
        Check { name: "rotation", ok: rotation_valid },
        Check { name: "translations", ok: translations_are_automorphisms(&emb) },
        Check { name: "edge-face-lengths", ok: biembedding.edge_lengths_ok && biembedding.two_colorable },
        Check {
            name: "face-census",
            ok: surface.face_census.len() == 2
                && surface.face_census.get(&m) == Some(&(q as usize * n))
                && surface.face_census.get(&n) == Some(&(q as usize * m)),
        },
        Check { name: "genus", ok: surface.genus as i64 == predicted_genus },
        Check {
            name: "stabilizer-preserves-faces",
            ok: primary.stabilizer.iter().all(|s| maps_faces_to_faces(&emb, s)),
        },
    ];
    if orderings_simple {
        checks.push(Check { name: "simple-faces", ok: biembedding.faces_simple });
    }
    if odd_distinct {
        checks.push(Check { name: "no-reversing-automorphisms", ok: primary.aut0_minus == 0 });
        checks.push(Check { name: "stabilizer-bound", ok: primary.aut0() as u64 <= mn });
    }
    if exact_group {
        checks.push(Check { name: "globally-simple", ok: globally_simple });
        checks.push(Check {
            name: "entries-form-subgroup",
            ok: is_multiplicative_subgroup(&field, pair.entries()),
        });
        checks.push(Check { name: "multiplicative-automorphisms", ok: multiplicative_auts(&emb, a).is_ok() });
        checks.push(Check {
            name: "stabilizer-cyclic-of-order-mn",
            ok: primary.cyclic && primary.aut0_plus as u64 == mn && primary.generator_order == mn,
        });
        checks.push(Check { name: "total-is-q-choose-2", ok: primary.total == q as u64 * (q as u64 - 1) / 2 });
    }
    if let Some(agree) = modes_agree {
        checks.push(Check { name: "modes-agree", ok: agree });
    }
    let ok = checks.iter().all(|c| c.ok);

    Ok(AnalysisReport {
        field: field.header(),
        q,
        m,
        n,
        ell: cfg.ell,
        source: if inst.constructed { "constructed" } else { "file" },
        heffter_valid: validation.ok,
        globally_simple,
        compatible,
        orderings_simple,
        rotation_valid,
        rho0: emb.rho0().cycle_notation_with(|x| entry_label(&pair, &field, Element(x))),
        faces: surface.face_census.clone(),
        face_count: surface.faces,
        euler_characteristic: surface.euler_characteristic,
        genus: surface.genus,
        biembedding,
        aut0: primary.aut0(),
        total: primary.total,
        modes_agree,
        restricted,
        exhaustive,
        checks,
        ok,
    })
}

/// `a` for entries of the array and `-a` for their negatives.
pub fn entry_label(pair: &OrderingPair, field: &FieldSpec, x: Element) -> String {
    if pair.contains(x) {
        x.to_string()
    } else {
        format!("-{}", field.neg(x))
    }
}

pub fn cmd_analyze(cfg: &JobConfig) -> Result<CommandOutput, CliError> {
    let report = analyze_instance(cfg)?;
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serialize") + "\n",
        Format::Text | Format::Csv => analysis_text(&report),
    };
    Ok(CommandOutput { body, failure: report.first_failure().map(str::to_string) })
}

fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", r.field);
    let _ = writeln!(s, "instance   m={} n={} q={} ell={} ({})", r.m, r.n, r.q, r.ell, r.source);
    let _ = writeln!(s, "rho0       {}", r.rho0);
    let census: Vec<String> = r.faces.iter().map(|(len, count)| format!("{count} of length {len}")).collect();
    let _ = writeln!(s, "faces      {} ({})", r.face_count, census.join(", "));
    let _ = writeln!(s, "surface    chi={} genus={}", r.euler_characteristic, r.genus);
    for (label, rep) in [("restricted", &r.restricted), ("exhaustive", &r.exhaustive)] {
        if let Some(a) = rep {
            let _ = writeln!(
                s,
                "{label:<10} |Aut0+|={} |Aut0-|={} |Aut|={} cyclic={} generator order {}",
                a.aut0_plus, a.aut0_minus, a.total, a.cyclic, a.generator_order
            );
        }
    }
    if let Some(agree) = r.modes_agree {
        let _ = writeln!(s, "modes      agree={agree}");
    }
    for c in &r.checks {
        let _ = writeln!(s, "[{}] {}", if c.ok { "pass" } else { "FAIL" }, c.name);
    }
    s
}

pub fn cmd_faces(cfg: &JobConfig) -> Result<CommandOutput, CliError> {
    let inst = load_instance(cfg)?;
    let validation = validate_heffter(&inst.array);
    if !validation.ok {
        return Err(CliError::PropertyFailure(format!("heffter-validation failed: {}", validation.summary())));
    }
    let (_, emb) = embed(&inst.array, cfg.ell)?;
    let emb = emb.map_err(|e| CliError::PropertyFailure(format!("compatibility failed: {e}")))?;
    let body = match cfg.format {
        Format::Json => faces_to_json(emb.faces()) + "\n",
        Format::Text | Format::Csv => faces_to_text(emb.field(), emb.faces()),
    };
    Ok(CommandOutput { body, failure: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub m: usize,
    pub n: usize,
    pub q: u32,
    pub kind: &'static str,
    pub globally_simple: bool,
    pub compatible: bool,
    pub aut0: usize,
    pub total: u64,
    pub genus: u64,
}

/// Every admissible `(m, n, q)` with `q <= qmax`, both orientations, in
/// order of `q` then the smaller of `m, n`.
pub fn catalog_instances(qmax: u32) -> Vec<(usize, usize, u32)> {
    (3..=qmax)
        .flat_map(|q| admissible_pairs(q).into_iter().flat_map(move |(m, n)| [(m, n, q), (n, m, q)]))
        .collect()
}

fn catalog_row(m: usize, n: usize, q: u32, budget: &SearchBudget) -> Result<CatalogRow, CliError> {
    let (field, m, n) = resolve_parameters(Some(m), Some(n), Some(q))?;
    let a = crate::heffter::build_rank_one_canonical(&field, m, n)?;
    let pair = natural_orderings(&a, 0).map_err(|e| CliError::PropertyFailure(e.to_string()))?;
    let compatible = pair.is_compatible();
    let (aut0, total, genus) = match build_rho0(&a, &pair) {
        Ok(emb) => {
            let aut = restricted_search_with_budget(&emb, m, n, budget)?;
            let genus = surface_report(&emb).map_err(|e| CliError::PropertyFailure(e.to_string()))?.genus;
            (aut.aut0(), aut.total, genus)
        }
        Err(_) => (0, 0, 0),
    };
    Ok(CatalogRow {
        m,
        n,
        q,
        kind: if field.is_prime_field() { "prime" } else { "prime-power" },
        globally_simple: check_globally_simple(&a),
        compatible,
        aut0,
        total,
        genus,
    })
}

pub fn catalog(qmax: u32, budget_ms: Option<u64>) -> Result<Vec<CatalogRow>, CliError> {
    catalog_instances(qmax)
        .into_par_iter()
        .map(|(m, n, q)| {
            let budget = SearchBudget {
                deadline: budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
                ..SearchBudget::default()
            };
            catalog_row(m, n, q, &budget)
        })
        .collect()
}

pub fn cmd_catalog(cfg: &JobConfig) -> Result<CommandOutput, CliError> {
    let qmax = cfg.qmax.ok_or_else(|| CliError::BadParameters("--qmax is required".into()))?;
    if qmax > CATALOG_QMAX_LIMIT && !cfg.force {
        return Err(CliError::BadParameters(format!(
            "qmax = {qmax} exceeds the catalog limit {CATALOG_QMAX_LIMIT}; pass --force to override"
        )));
    }
    let rows = catalog(qmax, cfg.budget_ms)?;
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("serialize") + "\n",
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record(["m", "n", "q", "kind", "globally_simple", "compatible", "aut0", "total", "genus"])
                    .map_err(|e| CliError::Io(e.into()))?;
            }
            for row in &rows {
                w.serialize(row).map_err(|e| CliError::Io(e.into()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("csv is utf-8")
        }
    };
    Ok(CommandOutput { body, failure: None })
}
