//! The `anneal` command line.
//!
//! Every subcommand reads a JSON config (unknown keys are rejected) and writes
//! CSV or JSON to `--out` or stdout. Floats are printed in shortest round-trip
//! form, so identical inputs give identical bytes.
//!
//! Exit codes: 0 success, 1 failed verification, 2 configuration error,
//! 3 numeric or domain error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::deformed::Representation;
use crate::density::{materialize, Density, DensitySpec, Support};
use crate::divergences::{evaluate_named, DivergenceKind};
use crate::error::{Error, Result};
use crate::parametric::{make_lr_family, FamilyGenerator, QExpFamily};
use crate::paths::{make_path, AnnealingPath, Normalization};
use crate::sampler::{run_ais, AisConfig, Kernel, Schedule};
use crate::verify::suites::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Agreement required between the named Zhang formula and its normalizer form.
pub const CROSSCHECK_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "anneal", version, about = "Annealing paths, rho-tau divergences and AIS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate an annealing path as CSV `beta,x,value`.
    Path(Io),
    /// Evaluate named divergences as a JSON array.
    Divergence {
        #[command(flatten)]
        io: Io,
        /// Recompute Zhang divergences from the normalizers of the likelihood-ratio family.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Normalizers of a q-exponential family as a JSON array.
    Family(Io),
    /// Run annealed importance sampling.
    Ais {
        #[command(flatten)]
        io: Io,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the per-step log-weights of every chain as CSV `chain,t,log_w`.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace the tolerance of every upper-bound check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Io {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A density given inline or as a CSV file written by [`Density::write_csv`].
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Spec(DensitySpec),
    File { csv: PathBuf },
}

impl Endpoint {
    fn load(&self, support: Support, dir: &Path) -> Result<Density> {
        match self {
            Endpoint::Spec(s) => materialize(s, support),
            Endpoint::File { csv } => Density::read_csv(File::open(dir.join(csv))?),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathConfig {
    pub start: Endpoint,
    pub end: Endpoint,
    #[serde(default)]
    pub support: Support,
    pub rho: Representation,
    #[serde(default)]
    pub base: Option<Endpoint>,
    pub betas: Vec<f64>,
    #[serde(default)]
    pub normalization: Normalization,
    /// Add a `normalized` column.
    #[serde(default)]
    pub normalized_column: bool,
}

/// Substitutes each value for `param` in a divergence template.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub template: Value,
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceConfig {
    pub a: Endpoint,
    pub b: Endpoint,
    #[serde(default)]
    pub support: Support,
    #[serde(default)]
    pub kinds: Vec<DivergenceKind>,
    #[serde(default)]
    pub sweeps: Vec<Sweep>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Statistics `x^p` for each power on a grid base.
    Polynomial { base: Endpoint, powers: Vec<i32> },
    /// Statistic `log_q(end / start)` with base `start`.
    LikelihoodRatio { start: Endpoint, end: Endpoint },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub q: f64,
    pub family: FamilySpec,
    #[serde(default)]
    pub support: Support,
    pub thetas: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ScheduleConfig {
    Linear { steps: usize },
    Betas { betas: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AisRunConfig {
    pub start: Endpoint,
    pub end: Endpoint,
    #[serde(default)]
    pub support: Support,
    pub rho: Representation,
    #[serde(default)]
    pub base: Option<Endpoint>,
    pub schedule: ScheduleConfig,
    pub kernel: Kernel,
    pub chains: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct AisReport {
    pub ratio_estimate: f64,
    pub log_ratio_estimate: f64,
    pub ess: f64,
    #[serde(rename = "K")]
    pub chains: usize,
    #[serde(rename = "T")]
    pub steps: usize,
    pub acceptance_rates: Vec<f64>,
    pub seed: u64,
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => EXIT_VERIFY,
            Failure::Error(e) if e.is_numeric() => EXIT_NUMERIC,
            Failure::Error(_) => EXIT_CONFIG,
        }
    }
}

fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, PathBuf)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, dir))
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: Option<&Path>, v: &T) -> Result<()> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Shortest round-trip decimal, switching to exponent form for very large or small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    serde_json::Number::from_f64(x).map_or_else(|| x.to_string(), |n| n.to_string())
}

fn build_path(
    start: &Endpoint,
    end: &Endpoint,
    base: Option<&Endpoint>,
    support: Support,
    rho: Representation,
    policy: Normalization,
    dir: &Path,
) -> Result<AnnealingPath> {
    let path = make_path(start.load(support, dir)?, end.load(support, dir)?, rho, policy)?;
    match base {
        Some(b) => path.with_base(b.load(support, dir)?),
        None => Ok(path),
    }
}

fn cmd_path(io: &Io) -> Result<()> {
    let (cfg, dir): (PathConfig, _) = read_config(&io.config)?;
    if cfg.betas.is_empty() {
        return Err(Error::Config("betas is empty".into()));
    }
    let path = build_path(&cfg.start, &cfg.end, cfg.base.as_ref(), cfg.support, cfg.rho, cfg.normalization, &dir)?;
    let mut w = csv::Writer::from_writer(output(io.out.as_deref())?);
    if cfg.normalized_column {
        w.write_record(["beta", "x", "value", "normalized"])?;
    } else {
        w.write_record(["beta", "x", "value"])?;
    }
    let nodes = path.start().support().nodes();
    for &beta in &cfg.betas {
        let d = path.evaluate(beta)?;
        let mass = if cfg.normalized_column { d.mass().map_err(|e| e.at_beta(beta))? } else { 1.0 };
        for (x, v) in nodes.iter().zip(d.values()) {
            let mut rec = vec![fmt_f64(beta), fmt_f64(*x), fmt_f64(*v)];
            if cfg.normalized_column {
                rec.push(fmt_f64(v / mass));
            }
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn expand_kinds(cfg: &DivergenceConfig) -> Result<Vec<DivergenceKind>> {
    let mut kinds = cfg.kinds.clone();
    for s in &cfg.sweeps {
        for &v in &s.values {
            let mut t = s.template.clone();
            let obj = t
                .as_object_mut()
                .ok_or_else(|| Error::Config("sweep template must be an object".into()))?;
            obj.insert(s.param.clone(), json!(v));
            kinds.push(serde_json::from_value(t).map_err(|e| Error::Config(format!("sweep template: {e}")))?);
        }
    }
    if kinds.is_empty() {
        return Err(Error::Config("no divergence kinds given".into()));
    }
    Ok(kinds)
}

fn cmd_divergence(io: &Io, crosscheck: bool) -> std::result::Result<(), Failure> {
    let (cfg, dir): (DivergenceConfig, _) = read_config(&io.config)?;
    let kinds = expand_kinds(&cfg)?;
    let a = cfg.a.load(cfg.support, &dir)?;
    let b = cfg.b.load(cfg.support, &dir)?;
    let mut rows = Vec::with_capacity(kinds.len());
    let mut mismatch = None;
    for kind in &kinds {
        let named = evaluate_named(kind, &a, &b)?;
        let mut tagged = serde_json::to_value(kind).map_err(Error::from)?;
        let obj = tagged.as_object_mut().expect("tagged enum");
        let name = obj.remove("kind").unwrap_or(Value::Null);
        let mut row = json!({
            "kind": name,
            "params": Value::Object(obj.clone()),
            "value": named.value,
            "diagnostics": { "masses": named.masses, "grid": a.support() },
        });
        if let (true, DivergenceKind::ZhangAb { beta, q }) = (crosscheck, kind) {
            let via = make_lr_family(&a, &b, *q)?.scaled_jensen_gap(*beta, FamilyGenerator::ScaledZq)?;
            let diff = (via - named.value).abs();
            let passed = diff <= CROSSCHECK_TOL;
            if !passed {
                mismatch = Some(format!("zhang_ab(beta={beta}, q={q}) differs from its normalizer form by {diff}"));
            }
            row["crosscheck"] = json!({ "normalizer_value": via, "abs_diff": diff, "passed": passed });
        }
        rows.push(row);
    }
    write_json(io.out.as_deref(), &rows)?;
    match mismatch {
        Some(m) => Err(Failure::Verification(m)),
        None => Ok(()),
    }
}

fn cmd_family(io: &Io) -> Result<()> {
    let (cfg, dir): (FamilyConfig, _) = read_config(&io.config)?;
    let fam = match &cfg.family {
        FamilySpec::Polynomial { base, powers } => QExpFamily::polynomial(cfg.q, base.load(cfg.support, &dir)?, powers)?,
        FamilySpec::LikelihoodRatio { start, end } => {
            make_lr_family(&start.load(cfg.support, &dir)?, &end.load(cfg.support, &dir)?, cfg.q)?
                .family()
                .clone()
        }
    };
    let mut rows = Vec::with_capacity(cfg.thetas.len());
    for theta in &cfg.thetas {
        if theta.len() != fam.dim() {
            return Err(Error::Config(format!("theta {theta:?} has length {} for dimension {}", theta.len(), fam.dim())));
        }
        let z = fam.z_q(theta)?;
        rows.push(json!({ "q": cfg.q, "theta": theta, "Z_q": z, "logZ": z.ln() }));
    }
    write_json(io.out.as_deref(), &rows)
}

fn cmd_ais(io: &Io, seed: Option<u64>, trace: Option<&Path>) -> Result<()> {
    let (cfg, dir): (AisRunConfig, _) = read_config(&io.config)?;
    let path = build_path(
        &cfg.start,
        &cfg.end,
        cfg.base.as_ref(),
        cfg.support,
        cfg.rho,
        Normalization::Unnormalized,
        &dir,
    )?;
    let schedule = match cfg.schedule {
        ScheduleConfig::Linear { steps } => Schedule::linear(steps)?,
        ScheduleConfig::Betas { betas } => Schedule::new(betas)?,
    };
    let seed = seed.unwrap_or(cfg.seed);
    let run = AisConfig {
        path,
        schedule,
        kernel: cfg.kernel,
        chains: cfg.chains,
        seed,
        record_trace: trace.is_some(),
    };
    let r = run_ais(&run)?;
    if let (Some(p), Some(tr)) = (trace, &r.trace) {
        let mut w = csv::Writer::from_writer(output(Some(p))?);
        w.write_record(["chain", "t", "log_w"])?;
        for (k, chain) in tr.iter().enumerate() {
            for (t, l) in chain.iter().enumerate() {
                w.write_record([k.to_string(), (t + 1).to_string(), fmt_f64(*l)])?;
            }
        }
        w.flush()?;
    }
    write_json(
        io.out.as_deref(),
        &AisReport {
            ratio_estimate: r.ratio_estimate,
            log_ratio_estimate: r.log_ratio_estimate,
            ess: r.ess,
            chains: run.chains,
            steps: run.schedule.steps(),
            acceptance_rates: r.acceptance_rates,
            seed,
        },
    )
}

fn cmd_verify(suite: &str, seed: u64, tol: Option<f64>, out: Option<&Path>) -> std::result::Result<(), Failure> {
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Config(format!("tolerance must be finite and nonnegative, got {t}")).into());
        }
    }
    let report = run_suite(suite, seed, tol)?;
    write_json(out, &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}

pub fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Path(io) => Ok(cmd_path(io)?),
        Command::Divergence { io, crosscheck } => cmd_divergence(io, *crosscheck),
        Command::Family(io) => Ok(cmd_family(io)?),
        Command::Ais { io, seed, trace } => Ok(cmd_ais(io, *seed, trace.as_deref())?),
        Command::Verify { suite, seed, tol, out } => cmd_verify(suite, *seed, *tol, out.as_deref()),
    }
}

/// Parse arguments, run, report errors on stderr and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Verification(m) => eprintln!("anneal: verification failed: {m}"),
                Failure::Error(e) => eprintln!("anneal: {e}"),
            }
            f.exit_code()
        }
    }
}
