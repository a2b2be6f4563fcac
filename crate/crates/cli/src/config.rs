use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use nccurl::assembly::ModelParams;
use nccurl::exec::Execution;
use nccurl::solver::DEFAULT_TOL;

use crate::error::CliError;

pub const DEFAULT_MESH_N: usize = 2;
pub const DEFAULT_LEVELS: [usize; 3] = [2, 4, 8];
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mms {
    Sincube,
}

impl FromStr for Mms {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Options shared by every command. Each may also come from the `--config`
/// file as `key = value`, with the flag name as key; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// key=value file with defaults for any of the options below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Generate the unit cube split into n³ cubes of 6 tets each
    #[arg(long, global = true, conflicts_with = "mesh_file")]
    pub mesh_n: Option<usize>,
    /// Read a Gmsh 2.2 ASCII mesh instead
    #[arg(long, global = true)]
    pub mesh_file: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Comma separated mesh sizes for `convergence`, e.g. 2,4,8
    #[arg(long, global = true)]
    pub levels: Option<String>,
    /// Relative residual target of CG
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub maxit: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random tets for `check-element`
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mms: Option<Mms>,
    /// Run every loop on one thread
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Fill the seconds column of the convergence CSV
    #[arg(long, global = true)]
    pub timings: bool,
    /// Replace the manufactured load by zero
    #[arg(long, global = true)]
    pub zero_load: bool,
    #[arg(long, global = true, hide = true)]
    pub inject_sign_flip: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Generated(usize),
    File(PathBuf),
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshSource,
    pub params: ModelParams,
    pub levels: Vec<usize>,
    pub tol: f64,
    pub maxit: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub out_dir: Option<PathBuf>,
    pub mms: Mms,
    pub exec: Execution,
    pub timings: bool,
    pub zero_load: bool,
    pub inject_sign_flip: bool,
}

const KEYS: [&str; 16] = [
    "mesh-n",
    "mesh-file",
    "alpha",
    "beta",
    "gamma",
    "levels",
    "tol",
    "maxit",
    "seed",
    "trials",
    "out-dir",
    "mms",
    "sequential",
    "timings",
    "zero-load",
    "inject-sign-flip",
];

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str, origin: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| CliError::Config(format!("{}:{}: {msg}", origin.display(), i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(bad(&format!("unknown key `{key}`")));
        }
        if map.insert(key.clone(), value.trim().to_owned()).is_some() {
            return Err(bad(&format!("duplicate key `{key}`")));
        }
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<(), CliError>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        if let Some(v) = file.get(key) {
            let parsed = v
                .parse()
                .map_err(|e| CliError::Config(format!("config key `{key}`: {e}")))?;
            *slot = Some(parsed);
        }
    }
    Ok(())
}

fn fill_flag(slot: &mut bool, file: &BTreeMap<String, String>, key: &str) -> Result<(), CliError> {
    if !*slot {
        let mut v = None;
        fill(&mut v, file, key)?;
        *slot = v.unwrap_or(false);
    }
    Ok(())
}

pub fn parse_levels(s: &str) -> Result<Vec<usize>, CliError> {
    let levels = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("levels `{s}`: {e}")))?;
    if levels.is_empty() || levels[0] == 0 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(format!(
            "levels `{s}` must be positive and strictly ascending"
        )));
    }
    Ok(levels)
}

impl Options {
    /// Merge in the config file, apply defaults and validate.
    pub fn resolve(mut self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_config_file(&text, path)?;
            if self.mesh_n.is_none() && self.mesh_file.is_none() {
                fill(&mut self.mesh_n, &file, "mesh-n")?;
                fill(&mut self.mesh_file, &file, "mesh-file")?;
            }
            fill(&mut self.alpha, &file, "alpha")?;
            fill(&mut self.beta, &file, "beta")?;
            fill(&mut self.gamma, &file, "gamma")?;
            fill(&mut self.levels, &file, "levels")?;
            fill(&mut self.tol, &file, "tol")?;
            fill(&mut self.maxit, &file, "maxit")?;
            fill(&mut self.seed, &file, "seed")?;
            fill(&mut self.trials, &file, "trials")?;
            fill(&mut self.out_dir, &file, "out-dir")?;
            fill(&mut self.mms, &file, "mms")?;
            fill_flag(&mut self.sequential, &file, "sequential")?;
            fill_flag(&mut self.timings, &file, "timings")?;
            fill_flag(&mut self.zero_load, &file, "zero-load")?;
            fill_flag(&mut self.inject_sign_flip, &file, "inject-sign-flip")?;
        }
        let mesh = match (self.mesh_n, self.mesh_file) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either mesh-n or mesh-file".into())),
            (_, Some(path)) => MeshSource::File(path),
            (Some(0), None) => return Err(CliError::Config("mesh-n must be at least 1".into())),
            (n, None) => MeshSource::Generated(n.unwrap_or(DEFAULT_MESH_N)),
        };
        let params = ModelParams::new(
            self.alpha.unwrap_or(1.0),
            self.beta.unwrap_or(1.0),
            self.gamma.unwrap_or(1.0),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let levels = match &self.levels {
            Some(s) => parse_levels(s)?,
            None => DEFAULT_LEVELS.to_vec(),
        };
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Config(format!("tol must lie in (0, 1), got {tol}")));
        }
        if self.maxit == Some(0) {
            return Err(CliError::Config("maxit must be at least 1".into()));
        }
        Ok(RunConfig {
            mesh,
            params,
            levels,
            tol,
            maxit: self.maxit,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            out_dir: self.out_dir,
            mms: self.mms.unwrap_or(Mms::Sincube),
            exec: if self.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
            timings: self.timings,
            zero_load: self.zero_load,
            inject_sign_flip: self.inject_sign_flip,
        })
    }
}
