//! `cmspectra`: sample configuration-model graphs, compute their spectra and
//! the limiting spectral law, and write plot-ready CSV files.

mod commands;
mod config;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use config::CommonArgs;

#[derive(Parser, Debug)]
#[command(version, about = "Spectra of configuration-model graphs and their limit law")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a degree sequence and sample one graph (degrees.txt, edges.txt)
    Sample(CommonArgs),
    /// Eigenvalues of the scaled adjacency matrix (spectrum.csv, histogram.csv)
    Esd(CommonArgs),
    /// Density of the limit law on a grid (density.csv)
    Density(CommonArgs),
    /// Support of the limit law and the ξ trace (support_mp.csv, support_mu.csv, xi_trace.csv)
    Support(CommonArgs),
    /// Two-atom hole criterion on an (alpha, beta) grid (phase_diagram.csv, phase_boundary.csv)
    PhaseDiagram {
        #[command(flatten)]
        common: CommonArgs,
        /// `lo,hi` range of the large atom
        #[arg(long, default_value = "1.01,20")]
        alpha_range: String,
        /// `lo,hi` range of the small atom
        #[arg(long, default_value = "0.05,0.95")]
        beta_range: String,
    },
    /// Kolmogorov distance between a sampled ESD and the limit law
    Compare(CommonArgs),
    /// Distances between configuration and Poissonized ESDs (couple.txt)
    Couple(CommonArgs),
}

fn range(s: &str) -> Result<(f64, f64)> {
    let Some((a, b)) = s.split_once(',') else { bail!("range {s:?} is not lo,hi") };
    let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
    if !(a < b) {
        bail!("range {s:?} is empty");
    }
    Ok((a, b))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sample(a) => commands::sample(&a.resolve("sample")?),
        Command::Esd(a) => commands::esd(&a.resolve("esd")?),
        Command::Density(a) => commands::density(&a.resolve("density")?),
        Command::Support(a) => commands::support(&a.resolve("support")?),
        Command::PhaseDiagram { common, alpha_range, beta_range } => {
            let mut cfg = common.resolve("phase-diagram")?;
            if common.grid.is_none() && cfg.grid == 801 {
                cfg.grid = 200;
            }
            let args = commands::PhaseArgs { alpha: range(&alpha_range)?, beta: range(&beta_range)? };
            commands::phase(&cfg, &args)
        }
        Command::Compare(a) => commands::compare(&a.resolve("compare")?),
        Command::Couple(a) => commands::couple_cmd(&a.resolve("couple")?),
    }
}
