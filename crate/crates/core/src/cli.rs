//! Batch driver behind the `vandermonde` binary.
//!
//! Every option may also come from a `key=value` config file (`--config`);
//! keys are the long flag names without dashes. Flags override the file, the
//! file overrides defaults.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use crate::capacity::{capacity_vandermonde, Units};
use crate::coefficients::{conjecture_harness, CoefficientEngine, MethodPolicy};
use crate::error::Error;
use crate::maxeig::{balls_in_urns, maxeig_experiment, occupancy_scale};
use crate::moments::moment_table;
use crate::partition::Partition;
use crate::phase::PhaseDistribution;
use crate::report::{format_real, Cell, Format, Header, Table};
use crate::spectra::{histogram, sample_spectra};
use crate::verify::{self, Scale};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_ACCEPTANCE: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "vandermonde", version, about = "Random Vandermonde matrix experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat key=value file supplying defaults for any option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-partition coefficients against the conjectured product bound.
    Coeff {
        #[arg(long)]
        n: Option<String>,
        /// exact | quadrature | montecarlo | all (same as exact).
        #[arg(long)]
        methods: Option<String>,
        /// Monte Carlo sample count.
        #[arg(long)]
        samples: Option<String>,
        /// Restrict to one partition given as an RGS string.
        #[arg(long)]
        rgs: Option<String>,
    },
    /// Limiting moments with Catalan, lower-bound and Bell columns.
    Moments {
        #[arg(long = "n-max")]
        n_max: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        samples: Option<String>,
    },
    /// Averaged eigenvalue histogram.
    Spectrum {
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        #[arg(long = "bin-width")]
        bin_width: Option<String>,
        /// Histogram range `lo:hi`.
        #[arg(long)]
        range: Option<String>,
        /// Also write every eigenvalue, one per line.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Largest-eigenvalue means against the bound curves.
    Maxeig {
        #[arg(long)]
        dist: Option<String>,
        /// `start:stop:step` or a comma list.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        /// Per-sample CSV; defaults to `<out>.samples.csv` when `--out` is set.
        #[arg(long = "samples-file")]
        samples_file: Option<PathBuf>,
    },
    /// Capacity curve with Jensen and Gaussian references.
    Capacity {
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<String>,
        /// Aspect ratio L/N; ignored when `--l` is given.
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        l: Option<String>,
        /// `start:stop:step` or a comma list.
        #[arg(long)]
        gammas: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        #[arg(long)]
        bits: bool,
    },
    /// Maximum urn occupancy law.
    Ballsurns {
        #[arg(long)]
        balls: Option<String>,
        #[arg(long)]
        urns: Option<String>,
        #[arg(long)]
        trials: Option<String>,
    },
    /// Acceptance suite; exits 4 when any criterion fails.
    Verify {
        #[arg(long)]
        quick: bool,
        /// Comma list of criterion ids.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Cap(String),
    Io(String),
    Internal(String),
    Acceptance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Io(_) => EXIT_IO,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Acceptance(_) => EXIT_ACCEPTANCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Cap(m) => write!(f, "refused: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "numerical failure: {m}"),
            CliError::Acceptance(m) => write!(f, "acceptance failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            Error::NotSymmetric(_) | Error::NoConvergence | Error::LemmaViolation { .. } | Error::MalformedEquations(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

const GLOBAL_KEYS: [&str; 3] = ["seed", "threads", "format"];

/// Merged option values: defaults < config file < flags.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
    /// Effective values, recorded for the output header.
    used: std::cell::RefCell<Vec<(String, String)>>,
}

impl Settings {
    pub fn from_file_text(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value, got `{line}`", i + 1)))?;
            let k = k.trim().to_string();
            if !allowed.contains(&k.as_str()) && !GLOBAL_KEYS.contains(&k.as_str()) {
                return Err(CliError::Config(format!(
                    "config line {}: unknown key `{k}` (allowed: {})",
                    i + 1,
                    allowed.iter().chain(GLOBAL_KEYS.iter()).copied().collect::<Vec<_>>().join(", ")
                )));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values, used: Default::default() })
    }

    pub fn set(&mut self, key: &str, v: Option<&str>) {
        if let Some(v) = v {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    fn raw(&self, key: &str, default: &str) -> String {
        let v = self.values.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.used.borrow_mut().push((key.to_string(), v.clone()));
        v
    }

    pub fn get<T: FromStr>(&self, key: &str, default: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.raw(key, default);
        v.parse().map_err(|e| CliError::Config(format!("invalid value `{v}` for {key}: {e}")))
    }

    fn optional(&self, key: &str) -> Option<String> {
        let v = self.values.get(key).cloned();
        if let Some(v) = &v {
            self.used.borrow_mut().push((key.to_string(), v.clone()));
        }
        v
    }

    fn header(&self, command: &str, seed: u64) -> Header {
        let config = self.used.borrow().iter().filter(|(k, _)| !matches!(k.as_str(), "seed" | "threads" | "format")).cloned().collect();
        Header { command: command.to_string(), config, seed }
    }
}

/// `start:stop:step` (inclusive) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Config(format!("grid `{s}`: {m}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let k = ((b - a) / h + 1e-9).floor() as usize;
        Ok((0..=k).map(|i| a + i as f64 * h).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

fn parse_int_grid(s: &str) -> Result<Vec<usize>, CliError> {
    parse_grid(s)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::Config(format!("grid `{s}`: {v} is not a nonnegative integer")))
            }
        })
        .collect()
}

fn policy(s: &str) -> Result<MethodPolicy, CliError> {
    match s {
        "all" => Ok(MethodPolicy::ExactFirst),
        _ => Ok(s.parse::<MethodPolicy>()?),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn keys(command: &Command) -> &'static [&'static str] {
    match command {
        Command::Coeff { .. } => &["n", "methods", "samples", "rgs"],
        Command::Moments { .. } => &["n-max", "c", "dist", "d", "methods", "samples"],
        Command::Spectrum { .. } => &["dist", "n", "l", "trials", "bin-width", "range", "dump"],
        Command::Maxeig { .. } => &["dist", "n", "trials", "samples-file"],
        Command::Capacity { .. } => &["dist", "n", "c", "l", "gammas", "trials", "bits"],
        Command::Ballsurns { .. } => &["balls", "urns", "trials"],
        Command::Verify { .. } => &["quick", "only"],
    }
}

fn flags(command: &Command) -> Vec<(&'static str, Option<String>)> {
    let p = |v: &Option<PathBuf>| v.as_ref().map(|p| p.display().to_string());
    let b = |v: bool| v.then(|| "true".to_string());
    match command {
        Command::Coeff { n, methods, samples, rgs } => {
            vec![("n", n.clone()), ("methods", methods.clone()), ("samples", samples.clone()), ("rgs", rgs.clone())]
        }
        Command::Moments { n_max, c, dist, d, methods, samples } => vec![
            ("n-max", n_max.clone()),
            ("c", c.clone()),
            ("dist", dist.clone()),
            ("d", d.clone()),
            ("methods", methods.clone()),
            ("samples", samples.clone()),
        ],
        Command::Spectrum { dist, n, l, trials, bin_width, range, dump } => vec![
            ("dist", dist.clone()),
            ("n", n.clone()),
            ("l", l.clone()),
            ("trials", trials.clone()),
            ("bin-width", bin_width.clone()),
            ("range", range.clone()),
            ("dump", p(dump)),
        ],
        Command::Maxeig { dist, n, trials, samples_file } => vec![
            ("dist", dist.clone()),
            ("n", n.clone()),
            ("trials", trials.clone()),
            ("samples-file", p(samples_file)),
        ],
        Command::Capacity { dist, n, c, l, gammas, trials, bits } => vec![
            ("dist", dist.clone()),
            ("n", n.clone()),
            ("c", c.clone()),
            ("l", l.clone()),
            ("gammas", gammas.clone()),
            ("trials", trials.clone()),
            ("bits", b(*bits)),
        ],
        Command::Ballsurns { balls, urns, trials } => {
            vec![("balls", balls.clone()), ("urns", urns.clone()), ("trials", trials.clone())]
        }
        Command::Verify { quick, only } => vec![("quick", b(*quick)), ("only", only.clone())],
    }
}

pub fn settings_for(cli: &Cli) -> Result<Settings, CliError> {
    let allowed = keys(&cli.command);
    let mut s = match &cli.global.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
            Settings::from_file_text(&text, allowed)?
        }
        None => Settings::default(),
    };
    s.set("seed", cli.global.seed.as_deref());
    s.set("threads", cli.global.threads.as_deref());
    s.set("format", cli.global.format.as_deref());
    for (k, v) in flags(&cli.command) {
        s.set(k, v.as_deref());
    }
    Ok(s)
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("vandermonde: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let s = settings_for(cli)?;
    let threads: usize = s.get("threads", "0")?;
    if threads > 0 {
        // A pool that already exists (repeated calls in one process) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let seed: u64 = s.get("seed", "0")?;
    let format = match s.raw("format", "csv").as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(CliError::Config(format!("unknown format `{other}` (csv|json)"))),
    };
    let out = cli.global.out.as_deref();
    let table = match &cli.command {
        Command::Coeff { .. } => coeff(&s, seed)?,
        Command::Moments { .. } => moments(&s, seed)?,
        Command::Spectrum { .. } => spectrum(&s, seed)?,
        Command::Maxeig { .. } => maxeig(&s, seed, out, format)?,
        Command::Capacity { .. } => capacity(&s, seed)?,
        Command::Ballsurns { .. } => ballsurns(&s, seed)?,
        Command::Verify { .. } => {
            let (table, failed) = verify_suite(&s, seed)?;
            write_output(out, &table.render(format))?;
            return match failed.is_empty() {
                true => Ok(()),
                false => Err(CliError::Acceptance(format!("criteria {failed:?} failed"))),
            };
        }
    };
    write_output(out, &table.render(format))
}

fn dist(s: &Settings) -> Result<PhaseDistribution, CliError> {
    Ok(s.raw("dist", "uniform").parse::<PhaseDistribution>()?)
}

fn coeff(s: &Settings, seed: u64) -> Result<Table, CliError> {
    let n: usize = s.get("n", "4")?;
    let policy = policy(&s.raw("methods", "all"))?;
    let samples: u64 = s.get("samples", "1000000")?;
    let rgs = s.optional("rgs");
    let engine = CoefficientEngine::new(policy, seed).with_samples(samples);
    let mut t = Table::new(
        s.header("coeff", seed),
        &["rgs", "n", "r", "block_sizes", "method", "k_value", "stderr", "bound", "violated"],
    );
    let rows = match rgs {
        Some(r) => {
            let p = Partition::parse_rgs(&r)?;
            if p.n() != n && s.values.contains_key("n") {
                return Err(CliError::Config(format!("--rgs {r} has {} points but --n is {n}", p.n())));
            }
            let estimate = engine.uniform(&p)?;
            let bound = crate::coefficients::conjecture_bound(&p);
            let b = bound.to_f64().unwrap_or(f64::NAN);
            let violated = match &estimate.exact {
                Some(v) => *v < bound,
                None => estimate.value < b - 5.0 * estimate.stderr_or_bound,
            };
            vec![(p, estimate, b, violated)]
        }
        None => conjecture_harness(n, &engine)?
            .into_iter()
            .map(|r| {
                let b = r.bound.to_f64().unwrap_or(f64::NAN);
                (r.partition, r.estimate, b, r.violated)
            })
            .collect(),
    };
    for (p, e, bound, violated) in rows {
        let sizes: Vec<String> = p.block_sizes().iter().map(|b| b.to_string()).collect();
        t.push(vec![
            p.rgs_string().into(),
            p.n().into(),
            p.num_blocks().into(),
            sizes.join(" ").into(),
            e.method.as_str().into(),
            e.value.into(),
            e.stderr_or_bound.into(),
            bound.into(),
            violated.into(),
        ]);
    }
    Ok(t)
}

fn moments(s: &Settings, seed: u64) -> Result<Table, CliError> {
    let n_max: usize = s.get("n-max", "7")?;
    let c: f64 = s.get("c", "1")?;
    let dist = dist(s)?;
    let d: u32 = s.get("d", "1")?;
    let policy = policy(&s.raw("methods", "exact"))?;
    let samples: u64 = s.get("samples", "1000000")?;
    if !(c > 0.0) {
        return Err(CliError::Config(format!("c must be positive, got {c}")));
    }
    let engine = CoefficientEngine::new(policy, seed).with_samples(samples);
    let rows = moment_table(n_max, c, &dist, d, &engine)?;
    let mut t = Table::new(s.header("moments", seed), &["n", "catalan", "lower", "moment", "bell", "err_bound"]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.catalan.to_u64().unwrap_or(u64::MAX).into(),
            r.lower.to_f64().unwrap_or(f64::NAN).into(),
            r.moment.value.into(),
            r.bell.to_u64().unwrap_or(u64::MAX).into(),
            r.moment.err_bound.into(),
        ]);
    }
    Ok(t)
}

fn spectrum(s: &Settings, seed: u64) -> Result<Table, CliError> {
    let dist = dist(s)?;
    let n: usize = s.get("n", "200")?;
    let l: usize = s.get("l", &n.to_string())?;
    let trials: usize = s.get("trials", "100")?;
    let width: f64 = s.get("bin-width", "0.05")?;
    let range_text = s.raw("range", "0:6");
    let range: Vec<f64> = range_text
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()
        .filter(|v: &Vec<f64>| v.len() == 2)
        .ok_or_else(|| CliError::Config(format!("range `{range_text}`: expected lo:hi")))?;
    let dump = s.optional("dump");
    if n == 0 || l == 0 || trials == 0 {
        return Err(CliError::Config("n, l and trials must be positive".into()));
    }
    let spectra = sample_spectra(&dist, n, l, trials, seed)?;
    if let Some(path) = dump {
        let mut text = format!("# N={n},L={l},dist={dist},seed={seed}\n");
        for sp in &spectra {
            for v in &sp.eigenvalues {
                text.push_str(&format_real(*v));
                text.push('\n');
            }
        }
        write_output(Some(Path::new(&path)), &text)?;
    }
    let h = histogram(&spectra, width, range[0], range[1])?;
    let mut t = Table::new(s.header("spectrum", seed), &["bin_left", "bin_right", "mass"]);
    for (a, b, m) in h.bins() {
        t.push(vec![a.into(), b.into(), m.into()]);
    }
    Ok(t)
}

fn maxeig(s: &Settings, seed: u64, out: Option<&Path>, format: Format) -> Result<Table, CliError> {
    let dist = dist(s)?;
    let grid = parse_int_grid(&s.raw("n", "50:500:50"))?;
    let trials: usize = s.get("trials", "1000")?;
    let samples_file = s.optional("samples-file").map(PathBuf::from).or_else(|| {
        out.map(|p| {
            let mut name = p.file_stem().unwrap_or_default().to_os_string();
            name.push(".samples.csv");
            p.with_file_name(name)
        })
    });
    let rows = maxeig_experiment(&dist, &grid, trials, seed)?;
    let header = s.header("maxeig", seed);
    let label = samples_file.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    if let Some(path) = &samples_file {
        let mut st = Table::new(header.clone(), &["N", "trial", "lambda_max", "schur_bound"]);
        for r in &rows {
            for (i, smp) in r.samples.iter().enumerate() {
                st.push(vec![r.n.into(), i.into(), smp.lambda_max.into(), smp.schur_bound.into()]);
            }
        }
        write_output(Some(path), &st.render(format))?;
    }
    let mut t = Table::new(header, &["N", "mean", "std", "upper", "lower", "samples_file"]);
    for r in rows {
        t.push(vec![r.n.into(), r.mean.into(), r.std.into(), r.upper.into(), r.lower.into(), label.clone().into()]);
    }
    Ok(t)
}

fn capacity(s: &Settings, seed: u64) -> Result<Table, CliError> {
    let dist = dist(s)?;
    let n: usize = s.get("n", "100")?;
    let c: f64 = s.get("c", "1")?;
    let l: usize = match s.optional("l") {
        Some(v) => v.parse().map_err(|e| CliError::Config(format!("invalid value `{v}` for l: {e}")))?,
        None => (c * n as f64).round() as usize,
    };
    let gammas = parse_grid(&s.raw("gammas", "0:20:0.5"))?;
    let trials: usize = s.get("trials", "200")?;
    let bits: bool = s.get("bits", "false")?;
    if n == 0 || l == 0 {
        return Err(CliError::Config("n and l must be positive".into()));
    }
    let units = if bits { Units::Bits } else { Units::Nats };
    let curve = capacity_vandermonde(&dist, n, l, &gammas, trials, seed)?.in_units(units);
    let mut t = Table::new(s.header("capacity", seed), &["gamma", "vandermonde", "stderr", "jensen", "gaussian"]);
    for k in 0..gammas.len() {
        t.push(vec![
            curve.gammas[k].into(),
            curve.vandermonde[k].into(),
            curve.stderr[k].into(),
            curve.jensen[k].into(),
            curve.gaussian[k].into(),
        ]);
    }
    Ok(t)
}

fn ballsurns(s: &Settings, seed: u64) -> Result<Table, CliError> {
    let balls: usize = s.get("balls", "10000")?;
    let urns: usize = s.get("urns", &balls.to_string())?;
    let trials: usize = s.get("trials", "1000")?;
    let law = balls_in_urns(balls, urns, trials, seed)?;
    let k = occupancy_scale(urns as f64).unwrap_or(f64::NAN);
    let mut t = Table::new(s.header("ballsurns", seed), &["max_load", "count", "frequency", "scaled"]);
    for (m, &count) in law.counts.iter().enumerate().filter(|(_, c)| **c > 0) {
        t.push(vec![m.into(), count.into(), (count as f64 / trials as f64).into(), (m as f64 / k).into()]);
    }
    Ok(t)
}

fn verify_suite(s: &Settings, seed: u64) -> Result<(Table, Vec<u32>), CliError> {
    let quick: bool = s.get("quick", "false")?;
    let ids: Vec<u32> = match s.optional("only") {
        Some(list) => list
            .split(',')
            .map(|x| match x.trim().parse::<u32>() {
                Ok(id) if (1..=12).contains(&id) => Ok(id),
                _ => Err(CliError::Config(format!("--only: `{x}` is not a criterion id in 1..=12"))),
            })
            .collect::<Result<_, _>>()?,
        None => (1..=12).collect(),
    };
    let scale = if quick { Scale::Quick } else { Scale::Full };
    let mut t = Table::new(s.header("verify", seed), &["id", "name", "passed", "detail"]);
    let mut failed = Vec::new();
    for id in ids {
        let r = verify::run(id, scale, seed);
        eprintln!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
        t.push(vec![(r.id as usize).into(), r.name.into(), r.passed.into(), Cell::Text(r.detail)]);
    }
    Ok((t, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_int_grid("50:500:50").unwrap().len(), 10);
        assert_eq!(parse_grid("1, 5,10").unwrap(), vec![1.0, 5.0, 10.0]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_int_grid("1.5").is_err());
    }

    #[test]
    fn config_precedence() {
        let mut s = Settings::from_file_text("# c\nn = 5\nmethods=exact\n", &["n", "methods"]).unwrap();
        s.set("n", Some("6"));
        assert_eq!(s.get::<usize>("n", "4").unwrap(), 6);
        assert_eq!(s.raw("methods", "all"), "exact");
        assert_eq!(s.get::<u64>("samples", "10").unwrap(), 10);
        assert!(Settings::from_file_text("bogus=1", &["n"]).is_err());
        assert!(Settings::from_file_text("no equals", &["n"]).is_err());
        assert!(matches!(s.get::<usize>("methods", "1"), Err(CliError::Config(_))));
    }

    #[test]
    fn error_mapping() {
        let cap: CliError = Error::CapExceeded { what: "x", detail: "y".into() }.into();
        assert_eq!(cap.exit_code(), EXIT_CAP);
        let cfg: CliError = "nope".parse::<PhaseDistribution>().unwrap_err().into();
        assert_eq!(cfg.exit_code(), EXIT_CONFIG);
    }
}
