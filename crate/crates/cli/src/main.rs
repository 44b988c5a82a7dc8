//! fbfade: fluctuating Beckmann fading statistics from the command
//! line. Every analytic quantity is emitted as a CSV/JSON curve table;
//! the Monte Carlo subcommands generate samples and traces; `validate`
//! runs the built-in consistency suites.

mod table;
mod validate;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fbfade::monte_carlo::{histogram_pdf, sample_snr, sample_trace, write_fbtr, write_trace_csv, RngSpec};
use fbfade::*;
use num_complex::Complex64;
use serde::Deserialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use table::CurveTable;

#[derive(Parser)]
#[command(name = "fbfade", version, about = "Fluctuating Beckmann fading model toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// MGF M(-s) on a grid of |s| values
    Mgf(CurveCmd),
    /// Probability density of the SNR (or envelope) on a grid
    Pdf(DensityCmd),
    /// Cumulative distribution of the SNR (or envelope) on a grid
    Cdf(DensityCmd),
    /// Level crossing rate over a grid of Ω-normalized thresholds
    Lcr(SecondOrderCmd),
    /// Average fade duration over a grid of Ω-normalized thresholds
    Afd(SecondOrderCmd),
    /// Symbol error probability over a grid of mean SNRs
    Sep(SepCmd),
    /// Draw i.i.d. SNR samples (optionally binned into a density table)
    Sample(SampleCmd),
    /// Generate a time-correlated envelope trace
    Trace(TraceCmd),
    /// Run the Monte Carlo / two-route consistency suites
    Validate(ValidateCmd),
    /// Print the model parameters equivalent to a classical model
    Reduce(ReduceCmd),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Mean SNR (linear)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gbar: f64,
    /// LoS-to-diffuse power ratio κ
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    kappa: f64,
    /// Cluster parameter μ
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    /// LoS fluctuation severity m
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    /// Diffuse variance ratio η = σx²/σy²
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    eta: f64,
    /// LoS amplitude ratio ρ = p/q; accepts `inf`
    #[arg(long, default_value = "1", value_parser = parse_rho)]
    rho: f64,
}

fn parse_rho(s: &str) -> std::result::Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>().map_err(|e| e.to_string())
}

impl ModelArgs {
    fn to_params(&self) -> fbfade::Result<ShapeParams> {
        ShapeParams::with_rho(self.gbar, self.kappa, self.mu, self.m, self.eta, self.rho)
    }

    fn echo(&self, t: &mut CurveTable) {
        t.meta_num("gbar", self.gbar);
        t.meta_num("kappa", self.kappa);
        t.meta_num("mu", self.mu);
        t.meta_num("m", self.m);
        t.meta_num("eta", self.eta);
        t.meta_num("rho", self.rho);
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Evaluation grid `lo:hi:n[:dB]`; lo/hi are linear, `:dB` selects
    /// dB-equal spacing
    #[arg(long)]
    grid: Option<String>,
    /// JSON config file overriding flags (schema 1)
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CurveCmd {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DensityCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Evaluate over SNR γ or over the envelope r (with Ω = gbar)
    #[arg(long, value_enum, default_value_t = Domain::Snr)]
    domain: Domain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Domain {
    Snr,
    Envelope,
}

#[derive(Args)]
struct SecondOrderCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Maximum Doppler shift, Hz
    #[arg(long, default_value_t = 1.0)]
    fd: f64,
}

#[derive(Args)]
struct SepCmd {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Scheme::Dbpsk)]
    scheme: Scheme,
    /// Constellation size for M-FSK
    #[arg(long, default_value_t = 2)]
    mary: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Dbpsk,
    Mfsk,
}

#[derive(Args)]
struct SampleCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of draws
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Bin the samples into a density table instead of emitting them
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

#[derive(Args)]
struct TraceCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// JSON config file overriding flags (schema 1)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trace length, seconds
    #[arg(long, default_value_t = 10.0)]
    duration: f64,
    /// Sample interval, seconds (dt·fd must stay <= 0.01)
    #[arg(long, default_value_t = 0.001)]
    dt: f64,
    /// Maximum Doppler shift, Hz
    #[arg(long, default_value_t = 1.0)]
    fd: f64,
    /// LoS fluctuation redraw cadence in units of 1/fd; `inf` keeps one
    /// value per trace
    #[arg(long, default_value = "inf", value_parser = parse_rho)]
    ts_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
    format: TraceFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Csv,
    /// Binary trace format (magic "FBTR")
    Bin,
}

#[derive(Args)]
struct ValidateCmd {
    /// mgf | firstorder | secondorder | sep | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON report (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceCmd {
    /// one-sided-gaussian | rayleigh | nakagami | hoyt | eta-mu | rice |
    /// eta-kappa-sym | eta-kappa-asym | beckmann | kappa-mu |
    /// rician-shadowed | kappa-mu-shadowed
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1.0)]
    gbar: f64,
    /// κ of the legacy model (η-κ, κ-μ, shadowed families)
    #[arg(long)]
    kappa: Option<f64>,
    /// μ of the legacy model (η-μ, κ-μ families)
    #[arg(long)]
    mu: Option<f64>,
    /// m of the legacy model (Nakagami, shadowed families)
    #[arg(long)]
    m: Option<f64>,
    /// η of the legacy model (η-μ, η-κ)
    #[arg(long)]
    eta: Option<f64>,
    /// K factor (Rice, Beckmann)
    #[arg(long)]
    k: Option<f64>,
    /// q parameter (Hoyt, Beckmann)
    #[arg(long)]
    q: Option<f64>,
    /// r parameter (Beckmann LoS amplitude ratio)
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Optional JSON config; any present field overrides the corresponding
/// flag. Versioned so stored configs stay unambiguous.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema: Option<u32>,
    gbar: Option<f64>,
    kappa: Option<f64>,
    mu: Option<f64>,
    m: Option<f64>,
    eta: Option<f64>,
    rho: Option<serde_json::Value>,
    grid: Option<String>,
    fd: Option<f64>,
    seed: Option<u64>,
    stream: Option<u64>,
}

fn load_config(path: &PathBuf) -> std::result::Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let cfg: ConfigFile = serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?;
    match cfg.schema {
        Some(1) => Ok(cfg),
        Some(v) => Err(format!("unsupported config schema {v} (expected 1)")),
        None => Err("config is missing the `schema` field (expected 1)".into()),
    }
}

fn apply_config_model(model: &mut ModelArgs, cfg: &ConfigFile) -> std::result::Result<(), String> {
    if let Some(v) = cfg.gbar {
        model.gbar = v;
    }
    if let Some(v) = cfg.kappa {
        model.kappa = v;
    }
    if let Some(v) = cfg.mu {
        model.mu = v;
    }
    if let Some(v) = cfg.m {
        model.m = v;
    }
    if let Some(v) = cfg.eta {
        model.eta = v;
    }
    if let Some(v) = &cfg.rho {
        model.rho = match v {
            serde_json::Value::Number(n) => n.as_f64().ok_or("bad rho number")?,
            serde_json::Value::String(s) => parse_rho(s)?,
            _ => return Err("rho must be a number or \"inf\"".into()),
        };
    }
    Ok(())
}

/// `lo:hi:n[:dB]`
fn parse_grid(spec: &str) -> fbfade::Result<EvalGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || FbError::domain("grid", format!("expected lo:hi:n[:dB], got `{spec}`"));
    if parts.len() != 3 && parts.len() != 4 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    match parts.len() {
        3 => EvalGrid::linear(lo, hi, n),
        4 if parts[3].eq_ignore_ascii_case("db") => EvalGrid::db_spaced(lo, hi, n),
        _ => Err(bad()),
    }
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<FbError> for CliError {
    fn from(e: FbError) -> Self {
        match e {
            FbError::Domain { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn emit(table: &CurveTable, out: &OutputArgs) -> std::result::Result<(), CliError> {
    let mut sink: Box<dyn Write> = match &out.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match out.format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => table.write_json(&mut sink)?,
    }
    Ok(())
}

fn require_grid(common: &CommonArgs, cfg: &ConfigFile) -> std::result::Result<EvalGrid, CliError> {
    let spec = cfg
        .grid
        .clone()
        .or_else(|| common.grid.clone())
        .ok_or_else(|| CliError::Usage("missing --grid lo:hi:n[:dB]".into()))?;
    Ok(parse_grid(&spec)?)
}

fn resolve_common(common: &mut CommonArgs) -> std::result::Result<ConfigFile, CliError> {
    let cfg = match &common.config {
        Some(path) => load_config(path).map_err(CliError::Usage)?,
        None => ConfigFile::default(),
    };
    apply_config_model(&mut common.model, &cfg).map_err(CliError::Usage)?;
    Ok(cfg)
}

fn db_of_power(x: f64) -> f64 {
    10.0 * x.log10()
}

fn run() -> std::result::Result<Option<bool>, CliError> {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("FB_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| CliError::Usage(format!("FB_THREADS must be an integer, got `{threads}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }

    match cli.cmd {
        Cmd::Mgf(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let params = c.common.model.to_params()?;
            let mut values = Vec::with_capacity(grid.points.len());
            for &x in &grid.points {
                values.push(mgf(&params, Complex64::new(-x, 0.0))?.re);
            }
            let mut t = CurveTable::new();
            t.meta_str("command", "mgf");
            t.meta_str("abscissa", "magnitude of the negative MGF argument");
            c.common.model.echo(&mut t);
            t.push_column("neg_s", grid.points.clone());
            t.push_column("mgf", values);
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Pdf(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let params = c.common.model.to_params()?;
            let inv = InversionConfig::default();
            let mut t = CurveTable::new();
            t.meta_str("command", "pdf");
            c.common.model.echo(&mut t);
            match c.domain {
                Domain::Snr => {
                    let vals = pdf_snr_grid(&params, &grid.points, &inv)?;
                    t.meta_str("domain", "snr");
                    t.push_column("gamma", grid.points.clone());
                    if grid.scale == GridScale::Db {
                        t.push_column("gamma_db", grid.points.iter().map(|&g| db_of_power(g)).collect());
                    }
                    t.push_column("pdf", vals);
                }
                Domain::Envelope => {
                    let omega = params.gbar;
                    let mut vals = Vec::with_capacity(grid.points.len());
                    for &r in &grid.points {
                        vals.push(pdf_envelope(&params, r, omega, &inv)?);
                    }
                    t.meta_str("domain", "envelope");
                    t.meta_num("omega", omega);
                    t.push_column("r", grid.points.clone());
                    t.push_column("pdf", vals);
                }
            }
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Cdf(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let params = c.common.model.to_params()?;
            let inv = InversionConfig::default();
            let mut t = CurveTable::new();
            t.meta_str("command", "cdf");
            c.common.model.echo(&mut t);
            match c.domain {
                Domain::Snr => {
                    let vals = cdf_snr_grid(&params, &grid.points, &inv)?;
                    t.meta_str("domain", "snr");
                    t.push_column("gamma", grid.points.clone());
                    if grid.scale == GridScale::Db {
                        t.push_column("gamma_db", grid.points.iter().map(|&g| db_of_power(g)).collect());
                    }
                    t.push_column("cdf", vals);
                }
                Domain::Envelope => {
                    let omega = params.gbar;
                    let mut vals = Vec::with_capacity(grid.points.len());
                    for &r in &grid.points {
                        vals.push(cdf_envelope(&params, r, omega, &inv)?);
                    }
                    t.meta_str("domain", "envelope");
                    t.meta_num("omega", omega);
                    t.push_column("r", grid.points.clone());
                    t.push_column("cdf", vals);
                }
            }
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Lcr(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let fd = cfg.fd.unwrap_or(c.fd);
            let params = c.common.model.to_params()?;
            let ctx = DopplerContext::clarke(fd)?;
            let lcfg = LcrConfig::default();
            let mut vals = Vec::with_capacity(grid.points.len());
            for &u in &grid.points {
                vals.push(lcr(&params, u, &ctx, &lcfg)?);
            }
            let mut t = CurveTable::new();
            t.meta_str("command", "lcr");
            t.meta_num("fd", fd);
            c.common.model.echo(&mut t);
            t.push_column("threshold", grid.points.clone());
            t.push_column(
                "threshold_db",
                grid.points.iter().map(|&u| db_of_power(u * u)).collect(),
            );
            t.push_column("lcr", vals);
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Afd(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let fd = cfg.fd.unwrap_or(c.fd);
            let params = c.common.model.to_params()?;
            let ctx = DopplerContext::clarke(fd)?;
            let lcfg = LcrConfig::default();
            let mut vals = Vec::with_capacity(grid.points.len());
            for &u in &grid.points {
                vals.push(afd(&params, u, &ctx, &lcfg)?.seconds);
            }
            let mut t = CurveTable::new();
            t.meta_str("command", "afd");
            t.meta_num("fd", fd);
            c.common.model.echo(&mut t);
            t.push_column("threshold", grid.points.clone());
            t.push_column(
                "threshold_db",
                grid.points.iter().map(|&u| db_of_power(u * u)).collect(),
            );
            t.push_column("afd", vals);
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Sep(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let grid = require_grid(&c.common, &cfg)?;
            let base = c.common.model.to_params()?;
            let mut vals = Vec::with_capacity(grid.points.len());
            for &g in &grid.points {
                let p = ShapeParams::new(g, base.kappa, base.mu, base.m, base.eta, base.los_frac)?;
                let v = match c.scheme {
                    Scheme::Dbpsk => sep_dbpsk(&p)?,
                    Scheme::Mfsk => sep_mfsk_noncoherent(&p, c.mary)?,
                };
                vals.push(v);
            }
            let mut t = CurveTable::new();
            t.meta_str("command", "sep");
            t.meta_str(
                "scheme",
                match c.scheme {
                    Scheme::Dbpsk => "dbpsk".to_string(),
                    Scheme::Mfsk => format!("{}-fsk noncoherent", c.mary),
                },
            );
            c.common.model.echo(&mut t);
            t.push_column("gbar", grid.points.clone());
            t.push_column("gbar_db", grid.points.iter().map(|&g| db_of_power(g)).collect());
            t.push_column("sep", vals);
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Sample(mut c) => {
            let cfg = resolve_common(&mut c.common)?;
            let seed = cfg.seed.unwrap_or(c.seed);
            let stream = cfg.stream.unwrap_or(c.stream);
            let params = c.common.model.to_params()?;
            let samples = sample_snr(&params, c.n, &RngSpec::new(seed, stream))?;
            let mut t = CurveTable::new();
            t.meta_str("command", "sample");
            t.meta_int("n", c.n as u64);
            t.meta_int("seed", seed);
            t.meta_int("stream", stream);
            c.common.model.echo(&mut t);
            match c.bins {
                Some(bins) => {
                    let h = histogram_pdf(&samples, bins)?;
                    t.meta_int("bins", bins as u64);
                    t.push_column("gamma", h.centers());
                    t.push_column("density", h.density.clone());
                    t.push_column("stderr", h.stderr.clone());
                }
                None => {
                    t.push_column("index", (0..c.n).map(|i| i as f64).collect());
                    t.push_column("gamma", samples);
                }
            }
            emit(&t, &c.common.output)?;
            Ok(None)
        }
        Cmd::Trace(mut c) => {
            let cfg = match &c.config {
                Some(path) => load_config(path).map_err(CliError::Usage)?,
                None => ConfigFile::default(),
            };
            apply_config_model(&mut c.model, &cfg).map_err(CliError::Usage)?;
            let seed = cfg.seed.unwrap_or(c.seed);
            let stream = cfg.stream.unwrap_or(c.stream);
            let fd = cfg.fd.unwrap_or(c.fd);
            let params = c.model.to_params()?;
            let phys = to_physical(&params)?;
            let ctx = DopplerContext::clarke(fd)?;
            let trace = sample_trace(&phys, c.duration, c.dt, &ctx, c.ts_ratio, &RngSpec::new(seed, stream))?;
            let mut sink: Box<dyn Write> = match &c.out {
                Some(path) => Box::new(std::fs::File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            match c.format {
                TraceFormat::Csv => write_trace_csv(&trace, &mut sink)?,
                TraceFormat::Bin => write_fbtr(&trace, &mut sink)?,
            }
            Ok(None)
        }
        Cmd::Validate(c) => {
            let checks = validate::run_suite(&c.suite, c.seed)?;
            let all_passed = checks.iter().all(|ch| ch.passed);
            let report = serde_json::json!({
                "meta": {
                    "tool": "fbfade",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": "validate",
                    "suite": c.suite,
                    "seed": c.seed,
                },
                "passed": all_passed,
                "checks": checks.iter().map(|ch| serde_json::json!({
                    "name": ch.name,
                    "passed": ch.passed,
                    "detail": ch.detail,
                })).collect::<Vec<_>>(),
            });
            let mut sink: Box<dyn Write> = match &c.out {
                Some(path) => Box::new(std::fs::File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            serde_json::to_writer_pretty(&mut sink, &report).map_err(|e| CliError::Usage(e.to_string()))?;
            sink.write_all(b"\n")?;
            Ok(Some(all_passed))
        }
        Cmd::Reduce(c) => {
            let need = |name: &str, v: Option<f64>| {
                v.ok_or_else(|| CliError::Usage(format!("model `{}` requires --{name}", c.model)))
            };
            let case = match c.model.as_str() {
                "one-sided-gaussian" => SpecialCase::OneSidedGaussian { gbar: c.gbar },
                "rayleigh" => SpecialCase::Rayleigh { gbar: c.gbar },
                "nakagami" => SpecialCase::NakagamiM { m: need("m", c.m)?, gbar: c.gbar },
                "hoyt" => SpecialCase::Hoyt { q: need("q", c.q)?, gbar: c.gbar },
                "eta-mu" => SpecialCase::EtaMu { eta: need("eta", c.eta)?, mu: need("mu", c.mu)?, gbar: c.gbar },
                "rice" => SpecialCase::Rice { k: need("k", c.k)?, gbar: c.gbar },
                "eta-kappa-sym" => SpecialCase::EtaKappaSym {
                    eta: need("eta", c.eta)?,
                    kappa: need("kappa", c.kappa)?,
                    gbar: c.gbar,
                },
                "eta-kappa-asym" => SpecialCase::EtaKappaAsym {
                    eta: need("eta", c.eta)?,
                    kappa: need("kappa", c.kappa)?,
                    gbar: c.gbar,
                },
                "beckmann" => SpecialCase::Beckmann {
                    k: need("k", c.k)?,
                    q: need("q", c.q)?,
                    r: need("r", c.r)?,
                    gbar: c.gbar,
                },
                "kappa-mu" => SpecialCase::KappaMu {
                    kappa: need("kappa", c.kappa)?,
                    mu: need("mu", c.mu)?,
                    gbar: c.gbar,
                },
                "rician-shadowed" => SpecialCase::RicianShadowed {
                    kappa: need("kappa", c.kappa)?,
                    m: need("m", c.m)?,
                    gbar: c.gbar,
                },
                "kappa-mu-shadowed" => SpecialCase::KappaMuShadowed {
                    kappa: need("kappa", c.kappa)?,
                    mu: need("mu", c.mu)?,
                    m: need("m", c.m)?,
                    gbar: c.gbar,
                },
                other => return Err(CliError::Usage(format!("unknown model `{other}`"))),
            };
            let p = special_case(case)?;
            let mut t = CurveTable::new();
            t.meta_str("command", "reduce");
            t.meta_str("model", &c.model);
            t.push_column("gbar", vec![p.gbar]);
            t.push_column("kappa", vec![p.kappa]);
            t.push_column("mu", vec![p.mu]);
            t.push_column("m", vec![p.m]);
            t.push_column("eta", vec![p.eta]);
            t.push_column("rho", vec![p.rho()]);
            t.push_column("los_frac", vec![p.los_frac]);
            emit(&t, &c.output)?;
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(true)) => ExitCode::SUCCESS,
        Ok(Some(false)) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}
