//! End-to-end helpers: sample a graph, take its spectrum, and measure the
//! distance to the limit law or to the Poissonized surrogate.

use crate::degree::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::{sample_configuration, sample_poissonized, scaled_adjacency, Multigraph};
use crate::limit::{density_curve, mu_atom_at_zero, DensityCurve, SolverOptions};
use crate::measure::DiscreteMeasure;
use crate::spectrum::{
    eigenvalues_symmetric, esd, hoffman_wielandt_bl_bound, kolmogorov_distance, kolmogorov_to_cdf,
    wasserstein1, SpectralSample,
};
use crate::support::support_mu;

/// Configuration-model sample, or the Poissonized graph when `poissonized`.
pub fn sample_graph(seq: &DegreeSequence, seed: u64, poissonized: bool) -> Multigraph {
    if poissonized {
        sample_poissonized(seq, seed)
    } else {
        sample_configuration(seq, seed)
    }
}

/// Eigenvalues of `ω^{-1/2}` times the (single, by default) adjacency matrix.
pub fn graph_spectrum(g: &Multigraph, omega: f64, single: bool) -> Result<SpectralSample> {
    eigenvalues_symmetric(&scaled_adjacency(g, omega, single)?)
}

pub fn sample_spectrum(
    seq: &DegreeSequence,
    seed: u64,
    poissonized: bool,
    single: bool,
) -> Result<SpectralSample> {
    graph_spectrum(&sample_graph(seq, seed, poissonized), seq.omega(), single)
}

/// Settings for the limit curve used in comparisons.
#[derive(Clone, Copy, Debug)]
pub struct LimitOptions {
    pub points: usize,
    pub eta: f64,
    pub solver: SolverOptions,
    /// Half-width of the grid; `None` uses slightly beyond the support edge.
    pub x_max: Option<f64>,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { points: 801, eta: 1e-6, solver: SolverOptions::default(), x_max: None }
    }
}

/// Density curve of `μ` on a grid covering its support.
pub fn limit_curve(nu: &DiscreteMeasure, opts: &LimitOptions) -> Result<DensityCurve> {
    let x_max = match opts.x_max {
        Some(x) => x,
        None => {
            let edge = support_mu(nu)?
                .upper_edge()
                .ok_or_else(|| Error::InvalidMeasure("empty support".into()))?;
            1.02 * edge
        }
    };
    let curve = density_curve(nu, x_max, opts.points, opts.eta, &opts.solver)?;
    if let Some((x, e)) = curve.failures.first() {
        return Err(Error::InvalidArgument(format!("density solve failed at x={x}: {e}")));
    }
    Ok(curve)
}

/// CDF of `μ`: the curve's cumulative density plus the atom at zero.
pub fn limit_cdf<'a>(
    curve: &'a DensityCurve,
    nu: &DiscreteMeasure,
    solver: &SolverOptions,
) -> Result<impl Fn(f64) -> f64 + 'a> {
    let atom = if nu.mass_at(0.0) > 0.0 { mu_atom_at_zero(nu, solver)? } else { 0.0 };
    let cdf = curve.cdf();
    Ok(move |t: f64| cdf(t) + if t >= 0.0 { atom } else { 0.0 })
}

/// Kolmogorov distance between an ESD and the limit law.
pub fn distance_to_limit(
    sample: &SpectralSample,
    curve: &DensityCurve,
    nu: &DiscreteMeasure,
    solver: &SolverOptions,
) -> Result<f64> {
    let law = esd(sample)?;
    Ok(kolmogorov_to_cdf(&law, limit_cdf(curve, nu, solver)?))
}

/// Distances between the ESDs of a configuration sample and a Poissonized
/// sample on the same degree sequence. The two graphs are drawn
/// independently (the second seed is derived from the first).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingReport {
    pub kolmogorov: f64,
    pub wasserstein1: f64,
    /// `sqrt((1/n) ||A - B||_F²)` with both graphs on the same vertex labels.
    pub hoffman_wielandt: f64,
}

pub fn couple(seq: &DegreeSequence, seed: u64, single: bool) -> Result<CouplingReport> {
    let a = scaled_adjacency(&sample_configuration(seq, seed), seq.omega(), single)?;
    let b = scaled_adjacency(
        &sample_poissonized(seq, seed.wrapping_add(0x9e37_79b9_7f4a_7c15)),
        seq.omega(),
        single,
    )?;
    let (ea, eb) = (esd(&eigenvalues_symmetric(&a)?)?, esd(&eigenvalues_symmetric(&b)?)?);
    Ok(CouplingReport {
        kolmogorov: kolmogorov_distance(&ea, &eb),
        wasserstein1: wasserstein1(&ea, &eb),
        hoffman_wielandt: hoffman_wielandt_bl_bound(&a, &b)?,
    })
}
