//! Command-line and config-file parsing.
//!
//! Settings resolve in three layers: the scenario preset, then a flat
//! `key = value` config file (`--config`), then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Parser;
use mtm_core::scenarios::{ScenarioConfig, ScenarioKind, DEFAULT_ENSEMBLE_SIZE, DEFAULT_MASTER_SEED};

use crate::CliError;

pub const DEFAULT_SCENARIO: ScenarioKind = ScenarioKind::Herding;

/// Keys that override model or statistics parameters.
pub const OVERRIDE_KEYS: [&str; 13] = [
    "h",
    "kappa",
    "R",
    "incentive_off_step",
    "x_lo",
    "x_hi",
    "c_lo",
    "c_hi",
    "volatility_feedback",
    "herding_enabled",
    "max_lag",
    "k_fraction",
    "p0",
];

/// Keys that select the run rather than the model.
const RUN_KEYS: [&str; 7] = ["scenario", "steps", "agents", "seeds", "seed", "out", "threads"];

#[derive(Debug, Parser)]
#[command(
    name = "mtm",
    version,
    about = "Moving-threshold market simulator",
    long_about = "Runs a seeded ensemble of the moving-threshold market model and writes \
                  timeseries_<seed>.csv per member plus summary.json to the output directory."
)]
struct Args {
    /// emh_baseline | herding | herding_incentive | custom
    #[arg(long, value_name = "NAME")]
    scenario: Option<String>,
    /// Flat key = value file; '#' starts a comment
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long, value_name = "U64")]
    seed: Option<String>,
    /// Ensemble size
    #[arg(long, value_name = "N")]
    seeds: Option<String>,
    #[arg(long, value_name = "N")]
    steps: Option<String>,
    /// Number of agents M
    #[arg(long, value_name = "M")]
    agents: Option<String>,
    /// Market-depth coupling
    #[arg(long, value_name = "X")]
    kappa: Option<String>,
    /// Timestep in variance units
    #[arg(long, value_name = "X")]
    h: Option<String>,
    /// Incentive drift rate
    #[arg(long = "R", value_name = "X")]
    r: Option<String>,
    /// Step at which the incentive stops ('none' to keep it on)
    #[arg(long = "incentive-off", value_name = "N")]
    incentive_off: Option<String>,
    /// Volatility feedback f(σ) = 1 + 2|σ|
    #[arg(long, value_name = "BOOL")]
    feedback: Option<String>,
    /// Herding drift for minority agents
    #[arg(long, value_name = "BOOL")]
    herding: Option<String>,
    /// Largest ACF lag
    #[arg(long = "max-lag", value_name = "K")]
    max_lag: Option<String>,
    /// Fraction of returns in the Hill tail
    #[arg(long = "k-fraction", value_name = "X")]
    k_fraction: Option<String>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for the ensemble (default: all cores)
    #[arg(long, value_name = "N")]
    threads: Option<String>,
}

/// Fully resolved command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub scenario: ScenarioKind,
    pub steps: usize,
    pub agents: usize,
    pub seeds: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    /// Raw override values by key, after config-file and flag layering.
    pub overrides: BTreeMap<String, String>,
    pub run: ScenarioConfig,
}

/// What the caller should do after parsing.
#[derive(Debug)]
pub enum Parsed {
    Run(Box<CliConfig>),
    /// `--help` or `--version`: print and exit 0.
    Info(String),
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Parsed, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };

    let mut settings = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };

    let flags: [(&str, &Option<String>); 14] = [
        ("scenario", &args.scenario),
        ("seed", &args.seed),
        ("seeds", &args.seeds),
        ("steps", &args.steps),
        ("agents", &args.agents),
        ("kappa", &args.kappa),
        ("h", &args.h),
        ("R", &args.r),
        ("incentive_off_step", &args.incentive_off),
        ("volatility_feedback", &args.feedback),
        ("herding_enabled", &args.herding),
        ("max_lag", &args.max_lag),
        ("k_fraction", &args.k_fraction),
        ("threads", &args.threads),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            settings.insert(key.to_string(), v.clone());
        }
    }
    if let Some(out) = &args.out {
        settings.insert("out".into(), out.to_string_lossy().into_owned());
    }

    resolve(settings).map(|c| Parsed::Run(Box::new(c)))
}

/// Parses the flat config format: one `key = value` per line, blank lines
/// and `#` comments ignored.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !is_known_key(key) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}'",
                lineno + 1
            )));
        }
        if value.is_empty() {
            return Err(CliError::Usage(format!(
                "config line {}: empty value for '{key}'",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn is_known_key(key: &str) -> bool {
    OVERRIDE_KEYS.contains(&key) || RUN_KEYS.contains(&key)
}

fn resolve(settings: BTreeMap<String, String>) -> Result<CliConfig, CliError> {
    if let Some(key) = settings.keys().find(|k| !is_known_key(k)) {
        return Err(CliError::Usage(format!("unknown setting '{key}'")));
    }
    let scenario = match settings.get("scenario") {
        Some(name) => name
            .parse::<ScenarioKind>()
            .map_err(|e| CliError::Usage(e.to_string()))?,
        None => DEFAULT_SCENARIO,
    };
    let mut run = ScenarioConfig::preset(scenario);
    run.n_seeds = DEFAULT_ENSEMBLE_SIZE;
    run.master_seed = DEFAULT_MASTER_SEED;

    let mut overrides = BTreeMap::new();
    let mut out_dir = PathBuf::from(".");
    let mut threads = None;
    for (key, value) in &settings {
        let p = &mut run.params;
        match key.as_str() {
            "scenario" => {}
            "steps" => p.n_steps = parse_num(key, value)?,
            "agents" => p.agents = parse_num(key, value)?,
            "seeds" => run.n_seeds = parse_num(key, value)?,
            "seed" => run.master_seed = parse_num(key, value)?,
            "out" => out_dir = PathBuf::from(value),
            "threads" => {
                let n: usize = parse_num(key, value)?;
                if n == 0 {
                    return Err(CliError::Usage("threads must be >= 1".into()));
                }
                threads = Some(n);
            }
            _ => {
                match key.as_str() {
                    "h" => p.h = parse_num(key, value)?,
                    "kappa" => p.kappa = parse_num(key, value)?,
                    "R" => p.incentive_rate = parse_num(key, value)?,
                    "incentive_off_step" => {
                        p.incentive_off_step = match value.as_str() {
                            "none" => None,
                            v => Some(parse_num(key, v)?),
                        }
                    }
                    "x_lo" => p.x_lo = parse_num(key, value)?,
                    "x_hi" => p.x_hi = parse_num(key, value)?,
                    "c_lo" => p.c_lo = parse_num(key, value)?,
                    "c_hi" => p.c_hi = parse_num(key, value)?,
                    "volatility_feedback" => p.volatility_feedback = parse_bool(key, value)?,
                    "herding_enabled" => p.herding_enabled = parse_bool(key, value)?,
                    "max_lag" => run.max_lag = parse_num(key, value)?,
                    "k_fraction" => run.k_fraction = parse_num(key, value)?,
                    "p0" => p.p0 = parse_num(key, value)?,
                    _ => unreachable!("key set checked above"),
                }
                overrides.insert(key.clone(), value.clone());
            }
        }
    }

    run.validate()
        .map_err(|e| CliError::Usage(format!("invalid configuration: {e}")))?;

    Ok(CliConfig {
        scenario,
        steps: run.params.n_steps,
        agents: run.params.agents,
        seeds: run.n_seeds,
        seed: run.master_seed,
        out_dir,
        threads,
        overrides,
        run,
    })
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("malformed value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(CliError::Usage(format!("malformed boolean '{value}' for '{key}'"))),
    }
}
