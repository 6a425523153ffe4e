//! Command-line front end: `symprot <command> [flags]`.
//!
//! Every command prints JSON (default), CSV or a pretty table. JSON documents
//! carry `"schema": "symprot/1"`. All randomness flows from `--seed`.
//!
//! Exit codes: 0 success; 1 when `--expect protected` meets a non-protected
//! state or `validate` rejects its input; 2 for usage and input errors;
//! 3 when a numerical procedure gives up (inconclusive search, sampling failure).

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dfs::{capacity_curve, erasure_capacity, transmit, TimeBinQudit};
use crate::entangle::{analyze, SlaterReport};
use crate::error::{Error, Result};
use crate::fock::{FockState, DEFAULT_N_MAX};
use crate::linalg::{c64, CMatrix};
use crate::modes::{ModeSpace, SpaceKind};
use crate::protect::{certify, find_protected, CertificationConfig, Verdict};
use crate::scatter::{validate, ScatterSampler, Unitarity};
use crate::states::{count_protected, NamedState, StateRecipe};

pub const SCHEMA: &str = "symprot/1";
pub const NMAX_ENV: &str = "SYMPROT_NMAX";

#[derive(Debug, Parser)]
#[command(name = "symprot", version, about = "Symmetry-protected multiphoton states of cylindrically symmetric scatterers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a state against random symmetric scatterers
    Certify(CertifyArgs),
    /// Find every protected ray of a Fock space
    Search(SearchArgs),
    /// List the named states, or build one recipe
    Catalog(CatalogArgs),
    /// Slater rank of a two-photon state
    Entangle(EntangleArgs),
    /// Send a time-bin qudit through a lossy static scatterer
    Dfs(DfsArgs),
    /// Erasure-channel quantum capacity
    Capacity(CapacityArgs),
    /// Check a scattering matrix or a state file
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Protected,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct StateInput {
    /// Catalog name or recipe: phi3, psi4:m=2, pair:m=1,N=4, mirrorfock:ns=2,na=1, a*b
    #[arg(long, conflicts_with = "state_file")]
    pub state: Option<String>,
    /// State JSON: {"space": "hm:1", "n": 2, "amplitudes": [[re, im], ...]}
    #[arg(long)]
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub space: Option<ModeSpace>,
    #[command(flatten)]
    pub input: StateInput,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub expect: Option<Expectation>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub space: ModeSpace,
    #[arg(long)]
    pub n: usize,
    /// Restrict to one m_tot sector
    #[arg(long, allow_hyphen_values = true)]
    pub sector: Option<i64>,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Only list states on this space kind
    #[arg(long)]
    pub space: Option<ModeSpace>,
    /// Also report the protected-state count for this photon number
    #[arg(long)]
    pub n: Option<usize>,
    /// Build a single recipe instead of listing the catalog
    #[arg(long)]
    pub state: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    #[command(flatten)]
    pub input: StateInput,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DfsArgs {
    #[arg(long, default_value = "pair:m=1,N=2")]
    pub carrier: String,
    /// Number of time bins
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Fraction of carriers lost in the scatterer
    #[arg(long, default_value_t = 0.0)]
    pub loss: f64,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Use two-way classical communication for the capacity
    #[arg(long, default_value_t = false, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    pub two_way: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Erasure probability; omit to print the whole curve
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = false, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    pub two_way: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Space of a freshly sampled matrix when no file is given
    #[arg(long)]
    pub space: Option<ModeSpace>,
    /// Matrix JSON: {"space": "h0", "matrix": [[[re, im], ...], ...]}
    #[arg(long, conflicts_with = "state_file")]
    pub matrix_file: Option<PathBuf>,
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Unitarity::Subunitary)]
    pub unitarity: Unitarity,
    #[command(flatten)]
    pub common: Common,
}

impl ValueEnum for Unitarity {
    fn value_variants<'a>() -> &'a [Self] {
        &[Unitarity::Unitary, Unitarity::Subunitary]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Unitarity::Unitary => "unitary",
            Unitarity::Subunitary => "subunitary",
        }))
    }
}

/// On-disk scattering matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub space: ModeSpace,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixRecord {
    pub fn from_matrix(space: ModeSpace, m: &CMatrix) -> Self {
        let matrix = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        Self { space, matrix }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.matrix.len();
        if let Some(row) = self.matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(CMatrix::from_fn(n, n, |i, j| c64(self.matrix[i][j][0], self.matrix[i][j][1])))
    }
}

/// Outcome of a command: text to print and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Parses `argv` (including the program name), runs the command and writes to
/// `out`/`err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match n_max_from_env().and_then(|n_max| dispatch(&cli.command, n_max)) {
        Ok(outcome) => {
            let _ = write!(out, "{}", outcome.text);
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconclusive { .. } | Error::SamplingFailed { .. } | Error::Defective | Error::NonGeneric(_) => 3,
        _ => 2,
    }
}

fn n_max_from_env() -> Result<usize> {
    match std::env::var(NMAX_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{NMAX_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_N_MAX),
    }
}

fn dispatch(cmd: &Command, n_max: usize) -> Result<Outcome> {
    match cmd {
        Command::Certify(a) => cmd_certify(a, n_max),
        Command::Search(a) => cmd_search(a, n_max),
        Command::Catalog(a) => cmd_catalog(a, n_max),
        Command::Entangle(a) => cmd_entangle(a, n_max),
        Command::Dfs(a) => cmd_dfs(a, n_max),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Validate(a) => cmd_validate(a, n_max),
    }
}

fn default_m(space: Option<&ModeSpace>) -> u32 {
    space
        .and_then(|s| s.blocks().iter().find_map(|k| if let SpaceKind::Hm(m) = k { Some(*m) } else { None }))
        .unwrap_or(1)
}

/// Resolves `--state`/`--state-file` into a state, checking it against `--space`.
fn load_state(input: &StateInput, space: Option<&ModeSpace>, n_max: usize) -> Result<(String, FockState)> {
    let (label, state) = match (&input.state, &input.state_file) {
        (Some(text), None) => {
            let recipe = StateRecipe::parse(text, default_m(space))?;
            (recipe.to_string(), recipe.build_with_limit(n_max)?)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            (path.display().to_string(), FockState::from_json(&text, n_max)?)
        }
        _ => return Err(Error::InvalidArgument("give exactly one of --state or --state-file".into())),
    };
    if let Some(space) = space {
        if space != state.basis().space() {
            return Err(Error::InvalidSpace(format!("state lives on {} but --space is {space}", state.basis().space())));
        }
    }
    Ok((label, state))
}

fn to_json(mut value: Value) -> Result<String> {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), json!(SCHEMA));
    }
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

fn state_table(state: &FockState) -> String {
    format!("  {:<16} {:>9} {:>10}\n{state}", "ket", "re", "im")
}

fn cmd_certify(a: &CertifyArgs, n_max: usize) -> Result<Outcome> {
    let (label, state) = load_state(&a.input, a.space.as_ref(), n_max)?;
    let cfg = CertificationConfig { n_samples: a.samples, residual_tol: a.tol, seed: a.common.seed, n_max, ..Default::default() };
    let report = certify(&state, &cfg)?;
    let code = if a.expect == Some(Expectation::Protected) && report.verdict != Verdict::Protected { 1 } else { 0 };
    let text = match a.common.output {
        OutputFormat::Json => to_json(json!({
            "command": "certify",
            "state": label,
            "space": state.basis().space(),
            "n": state.basis().n_photons(),
            "seed": a.common.seed,
            "samples": a.samples,
            "residual_tol": a.tol,
            "report": report,
        }))?,
        OutputFormat::Csv => {
            let mut s = String::from("sample,residual,eigenvalue_re,eigenvalue_im\n");
            for (i, (r, l)) in report.residuals.iter().zip(&report.eigenvalues).enumerate() {
                writeln!(s, "{i},{r:e},{:e},{:e}", l.re, l.im).unwrap();
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!("state    {label} on {} with N = {}\n", state.basis().space(), state.basis().n_photons());
            writeln!(s, "verdict  {:?}", report.verdict).unwrap();
            writeln!(s, "worst    {:.3e} over {} samples (tol {:.0e})", report.worst_residual, a.samples, a.tol).unwrap();
            if let Some(w) = report.witness_sample_index {
                writeln!(s, "witness  sample {w}").unwrap();
            }
            s.push_str(&state_table(&state));
            s
        }
    };
    Ok(Outcome { text, code })
}

fn cmd_search(a: &SearchArgs, n_max: usize) -> Result<Outcome> {
    let cfg = CertificationConfig { n_samples: a.samples, residual_tol: a.tol, seed: a.common.seed, n_max, ..Default::default() };
    let result = find_protected(&a.space, a.n, &cfg, a.sector)?;
    let text = match a.common.output {
        OutputFormat::Json => to_json(json!({
            "command": "search",
            "seed": a.common.seed,
            "result": result,
        }))?,
        OutputFormat::Csv => {
            let mut s = String::from("ray,m_tot,tau,ket,re,im\n");
            for (k, ray) in result.rays.iter().enumerate() {
                let tau = ray.mirror_tau.map(|t| t.sign().to_string()).unwrap_or_default();
                for (occ, amp) in ray.state.terms(1e-12) {
                    writeln!(s, "{k},{},{tau},\"{occ}\",{:e},{:e}", ray.m_tot, amp.re, amp.im).unwrap();
                }
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!("{} protected rays on {} with N = {}\n", result.rays.len(), a.space, a.n);
            for (k, ray) in result.rays.iter().enumerate() {
                let tau = ray.mirror_tau.map(|t| format!("{:+}", t.sign())).unwrap_or_else(|| "none".into());
                writeln!(s, "\nray {k}: m_tot = {}, tau = {tau}", ray.m_tot).unwrap();
                s.push_str(&state_table(&ray.state));
            }
            for sub in &result.subspaces {
                writeln!(s, "\nprotected subspace of dimension {} in sector {}", sub.basis.len(), sub.m_tot).unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct CatalogEntry {
    name: String,
    recipe: String,
    space: ModeSpace,
    n: usize,
    tau: crate::modes::Tau,
    protected: bool,
    state: crate::fock::FockStateRecord,
}

fn catalog_entry(recipe: &StateRecipe, n_max: usize) -> Result<(CatalogEntry, FockState)> {
    let state = recipe.build_with_limit(n_max)?;
    let name = match recipe {
        StateRecipe::Named { state, .. } => state.name().to_string(),
        other => other.to_string(),
    };
    Ok((
        CatalogEntry {
            name,
            recipe: recipe.to_string(),
            space: state.basis().space().clone(),
            n: state.basis().n_photons(),
            tau: recipe.mirror_parity(),
            protected: recipe.is_protected(),
            state: state.to_record(),
        },
        state,
    ))
}

fn cmd_catalog(a: &CatalogArgs, n_max: usize) -> Result<Outcome> {
    let recipes: Vec<StateRecipe> = match &a.state {
        Some(text) => vec![StateRecipe::parse(text, default_m(a.space.as_ref()))?],
        None => {
            let kind = a.space.as_ref().map(|s| {
                s.kind().ok_or_else(|| Error::InvalidSpace(format!("the catalog lists single blocks, not {s}")))
            });
            let kind = kind.transpose()?;
            NamedState::ALL
                .iter()
                .filter(|s| match kind {
                    Some(SpaceKind::H0) => s.on_h0(),
                    Some(SpaceKind::Hm(_)) => !s.on_h0(),
                    None => true,
                })
                .map(|&state| StateRecipe::Named { state, m: if state.on_h0() { 0 } else { default_m(a.space.as_ref()) } })
                .collect()
        }
    };
    let entries = recipes.iter().map(|r| catalog_entry(r, n_max)).collect::<Result<Vec<_>>>()?;
    let count = match (&a.space, a.n) {
        (Some(space), Some(n)) => Some(
            space
                .kind()
                .map(|k| count_protected(k, n))
                .ok_or_else(|| Error::InvalidSpace(format!("protected counts are per block, not {space}")))?,
        ),
        (None, Some(_)) => return Err(Error::InvalidArgument("--n needs --space".into())),
        _ => None,
    };
    let text = match a.common.output {
        OutputFormat::Json => {
            let list: Vec<&CatalogEntry> = entries.iter().map(|(e, _)| e).collect();
            to_json(json!({ "command": "catalog", "states": list, "protected_count": count }))?
        }
        OutputFormat::Csv => {
            let mut s = String::from("name,recipe,space,n,tau,protected\n");
            for (e, _) in &entries {
                writeln!(s, "{},{},{},{},{},{}", e.name, e.recipe, e.space, e.n, e.tau.sign(), e.protected).unwrap();
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            for (e, state) in &entries {
                writeln!(s, "{} [{}] on {}, N = {}, tau = {:+}, protected: {}", e.name, e.recipe, e.space, e.n, e.tau.sign(), e.protected).unwrap();
                s.push_str(&state_table(state));
                s.push('\n');
            }
            if let Some(c) = count {
                writeln!(s, "protected states: {} symmetric + {} antisymmetric = {}", c.symmetric, c.antisymmetric, c.total).unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_entangle(a: &EntangleArgs, n_max: usize) -> Result<Outcome> {
    let (label, state) = load_state(&a.input, None, n_max)?;
    let report: SlaterReport = analyze(&state)?;
    let text = match a.common.output {
        OutputFormat::Json => to_json(json!({ "command": "entangle", "state": label, "report": report }))?,
        OutputFormat::Csv => {
            let mut s = String::from("index,takagi_value\n");
            for (i, v) in report.singular_values.iter().enumerate() {
                writeln!(s, "{i},{v:e}").unwrap();
            }
            s
        }
        OutputFormat::Pretty => {
            let values: Vec<String> = report.singular_values.iter().map(|v| format!("{v:.6}")).collect();
            format!(
                "state           {label}\nslater rank     {}\ntakagi values   {}\nsingle product  {}\n",
                report.slater_rank,
                values.join(" "),
                report.is_single_product
            )
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_dfs(a: &DfsArgs, n_max: usize) -> Result<Outcome> {
    if !(0.0..=1.0).contains(&a.loss) {
        return Err(Error::InvalidArgument(format!("--loss {} is outside [0, 1]", a.loss)));
    }
    let carrier = StateRecipe::parse(&a.carrier, 1)?;
    let cfg = CertificationConfig { n_samples: a.samples, seed: a.common.seed, n_max, ..Default::default() };
    let qudit = TimeBinQudit::uniform(carrier, a.d, &cfg)?;
    let n = qudit.carrier_state().basis().n_photons();
    // unitary scatterer damped so the carrier survives with probability 1 - loss
    let unitary = ScatterSampler::new(a.common.seed, Unitarity::Unitary).sample(qudit.carrier_state().basis().space())?;
    let damping = if n == 0 { 1.0 } else { (1.0 - a.loss).powf(1.0 / (2.0 * n as f64)) };
    let s = unitary.scaled(c64(damping, 0.0))?;
    let outcome = transmit(&qudit, &s)?;
    let erasure = (1.0 - outcome.success_probability).clamp(0.0, 1.0);
    let capacity = erasure_capacity(erasure, a.two_way)?;
    let curve = capacity_curve(a.two_way);
    let text = match a.common.output {
        OutputFormat::Json => to_json(json!({
            "command": "dfs",
            "carrier": qudit.carrier().to_string(),
            "d": a.d,
            "loss": a.loss,
            "seed": a.common.seed,
            "two_way": a.two_way,
            "outcome": outcome,
            "erasure_probability": erasure,
            "capacity": capacity,
            "capacity_curve": curve,
        }))?,
        OutputFormat::Csv => {
            let mut s = String::from("epsilon,capacity\n");
            for p in &curve {
                writeln!(s, "{},{}", p.epsilon, p.capacity).unwrap();
            }
            s
        }
        OutputFormat::Pretty => format!(
            "carrier      {} ({} photons) over d = {} time bins\nsuccess      {:.6}\nfidelity     {:.12}\neigenvalue   {:+.6} {:+.6}i\nerasure      {:.6}\ncapacity     {:.6} ({})\n",
            qudit.carrier(),
            n,
            a.d,
            outcome.success_probability,
            outcome.fidelity,
            outcome.eigenvalue.re,
            outcome.eigenvalue.im,
            erasure,
            capacity,
            if a.two_way { "two-way" } else { "one-way" }
        ),
    };
    Ok(Outcome::ok(text))
}

fn cmd_capacity(a: &CapacityArgs) -> Result<Outcome> {
    let points = match a.eps {
        Some(eps) => vec![crate::dfs::CapacityPoint { epsilon: eps, capacity: erasure_capacity(eps, a.two_way)? }],
        None => capacity_curve(a.two_way),
    };
    let text = match a.common.output {
        OutputFormat::Json => match a.eps {
            Some(eps) => to_json(json!({ "command": "capacity", "two_way": a.two_way, "epsilon": eps, "capacity": points[0].capacity }))?,
            None => to_json(json!({ "command": "capacity", "two_way": a.two_way, "curve": points }))?,
        },
        OutputFormat::Csv => {
            let mut s = String::from("epsilon,capacity\n");
            for p in &points {
                writeln!(s, "{},{}", p.epsilon, p.capacity).unwrap();
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            for p in &points {
                writeln!(s, "eps = {:.2}  capacity = {}", p.epsilon, p.capacity).unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_validate(a: &ValidateArgs, n_max: usize) -> Result<Outcome> {
    let (kind, body, ok) = if let Some(path) = &a.state_file {
        let text = std::fs::read_to_string(path)?;
        let record: crate::fock::FockStateRecord = serde_json::from_str(&text)?;
        let state = FockState::from_record(record, n_max)?;
        let ok = state.is_normalized();
        let body = json!({
            "space": state.basis().space(),
            "n": state.basis().n_photons(),
            "norm": state.norm(),
            "m_tot": state.m_tot(1e-12),
            "ok": ok,
        });
        ("state", body, ok)
    } else {
        let (space, matrix) = match (&a.matrix_file, &a.space) {
            (Some(path), _) => {
                let record: MatrixRecord = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                let m = record.to_matrix()?;
                (record.space, m)
            }
            (None, Some(space)) => {
                let s = ScatterSampler::new(a.common.seed, a.unitarity).sample(space)?;
                (space.clone(), s.matrix().clone())
            }
            (None, None) => return Err(Error::InvalidArgument("give --matrix-file, --state-file or --space".into())),
        };
        let report = validate(&matrix, &space)?;
        let ok = report.ok;
        let body = json!({ "space": space, "report": report, "matrix": MatrixRecord::from_matrix(space.clone(), &matrix).matrix });
        ("matrix", body, ok)
    };
    let text = match a.common.output {
        OutputFormat::Json => to_json(json!({ "command": "validate", "kind": kind, "ok": ok, "details": body }))?,
        OutputFormat::Csv => format!("kind,ok\n{kind},{ok}\n"),
        OutputFormat::Pretty => format!("{kind}: {}\n{}\n", if ok { "valid" } else { "INVALID" }, serde_json::to_string_pretty(&body)?),
    };
    Ok(Outcome { text, code: if ok { 0 } else { 1 } })
}
