//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::str::FromStr;

use homodyne_core::kernels::KernelMethod;
use homodyne_core::{ScanMode, StateKind, StateSpec};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "HOMODYNE_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Kernel,
    Reconstruct,
    SweepF,
    SweepEta,
    StatErrors,
    Observable,
    McExperiment,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Reconstruct => "reconstruct",
            Command::SweepF => "sweep-f",
            Command::SweepEta => "sweep-eta",
            Command::StatErrors => "stat-errors",
            Command::Observable => "observable",
            Command::McExperiment => "mc-experiment",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        <Command as clap::ValueEnum>::from_str(s, true).map_err(|_| CliError::Config(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Grid and selection for the `kernel` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelGrid {
    pub m: Vec<usize>,
    pub d: Vec<usize>,
    pub method: Option<KernelMethod>,
    pub phi: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub state: StateSpec,
    /// Extra mean photon numbers for `sweep-f --f0`; the first one is `state`.
    pub mean_n: Vec<f64>,
    pub eta: Vec<f64>,
    pub f: Vec<usize>,
    pub n_max: usize,
    pub samples_per_phase: usize,
    pub seed: u64,
    pub mode: ScanMode,
    pub elements: Vec<(usize, usize)>,
    pub threshold: f64,
    pub f_max: usize,
    pub f0: bool,
    pub kernel: KernelGrid,
    pub output: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub dataset_out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

/// Every accepted key.
pub const KEYS: &[&str] = &[
    "command",
    "state.kind",
    "state.mean_n",
    "state.r",
    "state.squeeze_angle",
    "state.alpha_phase",
    "state.fock_n",
    "eta",
    "f",
    "n_max",
    "samples_per_phase",
    "seed",
    "mode",
    "elements",
    "threshold",
    "f_max",
    "f0",
    "kernel.m",
    "kernel.d",
    "kernel.method",
    "kernel.phi",
    "kernel.x_min",
    "kernel.x_max",
    "kernel.x_points",
    "output",
    "dataset",
    "dataset_out",
    "format",
    "threads",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

/// Comma-separated values.
pub fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let out: Vec<T> = v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(key, s)).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(CliError::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

/// Integers as a list (`1,2,5`), an inclusive range (`2..40`) or a stepped
/// range (`2..40:2`), or a mix separated by commas.
pub fn parse_int_ranges(key: &str, v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, rest)) = part.split_once("..") {
            let (b, step) = match rest.split_once(':') {
                Some((b, s)) => (b, parse::<usize>(key, s)?),
                None => (rest, 1),
            };
            let (a, b): (usize, usize) = (parse(key, a)?, parse(key, b)?);
            if step == 0 || b < a {
                return Err(CliError::Config(format!("{key}: bad range '{part}'")));
            }
            out.extend((a..=b).step_by(step));
        } else {
            out.push(parse(key, part)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

/// `n,m;n,m;...`
pub fn parse_elements(key: &str, v: &str) -> Result<Vec<(usize, usize)>> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("{key}: expected n,m in '{pair}'")))?;
            Ok((parse(key, a)?, parse(key, b)?))
        })
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got '{v}'"))),
    }
}

fn default_f(command: Command) -> Vec<usize> {
    match command {
        Command::SweepF => (2..=40).collect(),
        Command::StatErrors | Command::SweepEta => vec![64],
        _ => vec![32],
    }
}

impl RunConfig {
    /// Builds a configuration from merged `key = value` settings.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let command: Command = get("command")
            .ok_or_else(|| CliError::Config("no command given".into()))?
            .parse()?;

        let kind = match get("state.kind").unwrap_or("coherent") {
            "coherent" => StateKind::Coherent,
            "squeezed" => StateKind::Squeezed,
            "fock" => StateKind::Fock,
            other => return Err(CliError::Config(format!("state.kind: unknown state '{other}'"))),
        };
        let mean_n: Vec<f64> = match get("state.mean_n") {
            Some(v) => parse_list("state.mean_n", v)?,
            None => vec![4.0],
        };
        let state = match kind {
            StateKind::Coherent => StateSpec::coherent(mean_n[0]),
            StateKind::Squeezed => {
                let r = get("state.r").map(|v| parse("state.r", v)).transpose()?.unwrap_or(1.0);
                let angle = get("state.squeeze_angle")
                    .map(|v| parse("state.squeeze_angle", v))
                    .transpose()?
                    .unwrap_or(FRAC_PI_2);
                StateSpec::squeezed(mean_n[0], r).with_squeeze_angle(angle)
            }
            StateKind::Fock => {
                let n = get("state.fock_n").map(|v| parse("state.fock_n", v)).transpose()?.unwrap_or(0);
                StateSpec::fock(n)
            }
        };
        let alpha_phase = get("state.alpha_phase").map(|v| parse("state.alpha_phase", v)).transpose()?.unwrap_or(0.0);
        let state = state.with_alpha_phase(alpha_phase);

        let eta = match get("eta") {
            Some(v) => parse_list("eta", v)?,
            None => vec![1.0],
        };
        let f = match get("f") {
            Some(v) => parse_int_ranges("f", v)?,
            None => default_f(command),
        };
        if f.contains(&0) {
            return Err(CliError::Config("f: phase counts must be at least 1".into()));
        }
        let mode = match get("mode").unwrap_or("deterministic") {
            "deterministic" | "det" => ScanMode::Deterministic,
            "monte_carlo" | "monte-carlo" | "mc" => ScanMode::MonteCarlo,
            other => return Err(CliError::Config(format!("mode: unknown mode '{other}'"))),
        };
        let elements = match get("elements") {
            Some(v) => parse_elements("elements", v)?,
            None => vec![(5, 5), (10, 5), (18, 5)],
        };
        let method = match get("kernel.method") {
            None => None,
            Some("factorized") => Some(KernelMethod::Factorized),
            Some("closed_form") | Some("closed-form") => Some(KernelMethod::ClosedForm),
            Some("rescaled") => Some(KernelMethod::Rescaled),
            Some("quadrature_oracle") | Some("oracle") => Some(KernelMethod::QuadratureOracle),
            Some(other) => return Err(CliError::Config(format!("kernel.method: unknown method '{other}'"))),
        };
        let kernel = KernelGrid {
            m: get("kernel.m").map(|v| parse_int_ranges("kernel.m", v)).transpose()?.unwrap_or_else(|| vec![0]),
            d: get("kernel.d").map(|v| parse_int_ranges("kernel.d", v)).transpose()?.unwrap_or_else(|| vec![0]),
            method,
            phi: get("kernel.phi").map(|v| parse("kernel.phi", v)).transpose()?.unwrap_or(0.0),
            x_min: get("kernel.x_min").map(|v| parse("kernel.x_min", v)).transpose()?.unwrap_or(-6.0),
            x_max: get("kernel.x_max").map(|v| parse("kernel.x_max", v)).transpose()?.unwrap_or(6.0),
            x_points: get("kernel.x_points").map(|v| parse("kernel.x_points", v)).transpose()?.unwrap_or(601),
        };
        if kernel.x_points < 2 || !(kernel.x_max > kernel.x_min) {
            return Err(CliError::Config("kernel grid needs x_max > x_min and at least 2 points".into()));
        }
        let default_format = match command {
            Command::Observable | Command::Verify => "json",
            _ => "csv",
        };
        let format = match get("format").unwrap_or(default_format) {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(CliError::Config(format!("format: unknown format '{other}'"))),
        };
        let threads = get("threads").map(|v| parse::<usize>("threads", v)).transpose()?;
        if threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        Ok(Self {
            command,
            state,
            mean_n,
            eta,
            f,
            n_max: get("n_max").map(|v| parse("n_max", v)).transpose()?.unwrap_or(47),
            samples_per_phase: get("samples_per_phase").map(|v| parse("samples_per_phase", v)).transpose()?.unwrap_or(10_000),
            seed: get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(1),
            mode,
            elements,
            threshold: get("threshold").map(|v| parse("threshold", v)).transpose()?.unwrap_or(1e-4),
            f_max: get("f_max").map(|v| parse("f_max", v)).transpose()?.unwrap_or(200),
            f0: get("f0").map(|v| parse_bool("f0", v)).transpose()?.unwrap_or(false),
            kernel,
            output: get("output").map(PathBuf::from),
            dataset: get("dataset").map(PathBuf::from),
            dataset_out: get("dataset_out").map(PathBuf::from),
            format,
            threads,
        })
    }

    /// Output file: explicit path, else `<dir>/<command>.<ext>` with the
    /// directory from the environment or the working directory.
    pub fn output_path(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| {
            let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("{}.{}", self.command.name(), self.format.extension()))
        })
    }

    pub fn first_eta(&self) -> f64 {
        self.eta[0]
    }

    pub fn first_f(&self) -> usize {
        self.f[0]
    }
}
