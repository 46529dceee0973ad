//! Run configuration: command-line flags layered over an optional
//! `key=value` file that uses the same key names.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use cmspectra::config::{parse_key_values, ModelSpec};
use cmspectra::degree::OmegaRule;

/// Options shared by every command. Each one can also be given in the file
/// passed to `--config` (flags win).
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// `key=value` file with any of the options below, plus model keys
    /// (`preset`, `kind`, `atoms`, `family`, ...)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Degree model: a preset name (delta, fig1-red, fig1-blue, fig2), an
    /// inline `key=value; ...` spec, or a file holding one [default: delta]
    #[arg(long)]
    pub measure: Option<String>,
    /// Number of vertices [default: 1000]
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree scale: a number, `sqrt`, `log`, `k*sqrt`, `k*log` or `ceil-sqrt` [default: sqrt]
    #[arg(long)]
    pub omega: Option<String>,
    /// RNG seed; required by every sampling command
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points for density curves and traces [default: 801]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Final height of the Stieltjes continuation [default: 1e-6]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Fixed-point residual tolerance [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sample the Poissonized graph instead of the configuration model
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub poissonized: Option<bool>,
    /// Clamp multi-edges and loops to 1 in the adjacency matrix [default: true]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub single_adjacency: Option<bool>,
    /// Half-width of the density grid [default: just beyond the support]
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Slabs used to discretize continuous degree laws [default: 2048]
    #[arg(long)]
    pub quantization: Option<usize>,
}

/// Fully resolved options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub model: ModelSpec,
    pub n: usize,
    pub omega: OmegaRule,
    pub seed: Option<u64>,
    pub grid: usize,
    pub eta: f64,
    pub tol: f64,
    pub out: PathBuf,
    pub poissonized: bool,
    pub single_adjacency: bool,
    pub x_max: Option<f64>,
    pub quantization: usize,
}

const MODEL_KEYS: [&str; 13] = [
    "preset", "kind", "atoms", "family", "rate", "low", "high", "value", "alpha", "beta", "bulk",
    "hub", "hubs",
];

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => bail!("{key}={v:?} is not a boolean"),
    }
}

fn from_file<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("{key}={v:?}: {e}")))
        .transpose()
}

fn parse_model(text: &str) -> Result<ModelSpec> {
    let path = Path::new(text);
    let source = if !text.contains('=') && path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    } else {
        text.to_string()
    };
    Ok(source.trim().parse::<ModelSpec>()?)
}

impl CommonArgs {
    pub fn resolve(&self, command: &'static str) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                parse_key_values(&text)?
            }
            None => BTreeMap::new(),
        };
        for key in file.keys() {
            let known = MODEL_KEYS.contains(&key.as_str())
                || [
                    "measure", "n", "omega", "seed", "grid", "eta", "tol", "out", "poissonized",
                    "single-adjacency", "x-max", "quantization",
                ]
                .contains(&key.as_str());
            if !known {
                bail!("unknown config key {key:?}");
            }
        }

        let model = match (&self.measure, file.get("measure")) {
            (Some(m), _) | (None, Some(m)) => parse_model(m)?,
            (None, None) if MODEL_KEYS.iter().any(|k| file.contains_key(*k)) => {
                ModelSpec::from_map(&file)?
            }
            (None, None) => ModelSpec::preset("delta")?,
        };
        let omega = match self.omega.clone().or_else(|| file.get("omega").cloned()) {
            Some(s) => s.parse::<OmegaRule>()?,
            None => OmegaRule::Sqrt(1.0),
        };
        let flag = |cli: Option<bool>, key: &str, default: bool| -> Result<bool> {
            match (cli, file.get(key)) {
                (Some(b), _) => Ok(b),
                (None, Some(v)) => parse_bool(key, v),
                (None, None) => Ok(default),
            }
        };

        let cfg = RunConfig {
            command,
            model,
            n: self.n.or(from_file(&file, "n")?).unwrap_or(1000),
            omega,
            seed: self.seed.or(from_file(&file, "seed")?),
            grid: self.grid.or(from_file(&file, "grid")?).unwrap_or(801),
            eta: self.eta.or(from_file(&file, "eta")?).unwrap_or(1e-6),
            tol: self.tol.or(from_file(&file, "tol")?).unwrap_or(1e-12),
            out: self.out.clone().or(from_file(&file, "out")?).unwrap_or_else(|| PathBuf::from(".")),
            poissonized: flag(self.poissonized, "poissonized", false)?,
            single_adjacency: flag(self.single_adjacency, "single-adjacency", true)?,
            x_max: self.x_max.or(from_file(&file, "x-max")?),
            quantization: self.quantization.or(from_file(&file, "quantization")?).unwrap_or(2048),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("n must be at least 2");
        }
        if self.grid < 2 {
            bail!("grid must be at least 2");
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            bail!("eta must be in (0, 1]");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            bail!("tol must be in (0, 1)");
        }
        if let Some(x) = self.x_max {
            if !(x > 0.0 && x.is_finite()) {
                bail!("x-max must be positive");
            }
        }
        if self.quantization == 0 {
            bail!("quantization must be positive");
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.with_context(|| format!("`{}` samples a graph and needs --seed", self.command))
    }

    /// `# key=value` lines echoing every option.
    pub fn header(&self) -> String {
        let mut h = String::new();
        let mut line = |k: &str, v: String| h.push_str(&format!("# {k}={v}\n"));
        line("command", self.command.to_string());
        line("measure", self.model.to_string());
        line("n", self.n.to_string());
        line("omega", self.omega.to_string());
        line("seed", self.seed.map_or("none".into(), |s| s.to_string()));
        line("grid", self.grid.to_string());
        line("eta", format!("{:e}", self.eta));
        line("tol", format!("{:e}", self.tol));
        line("poissonized", self.poissonized.to_string());
        line("single-adjacency", self.single_adjacency.to_string());
        line("x-max", self.x_max.map_or("auto".into(), |x| x.to_string()));
        line("quantization", self.quantization.to_string());
        h
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}
