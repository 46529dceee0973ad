//! Eigenvalues, empirical spectral measures and distances between measures.
//!
//! The bounded-Lipschitz distance is never computed directly. Wasserstein-1
//! (which dominates it for Lipschitz-1 test functions) and the Kolmogorov
//! distance are reported instead; both are exact for atomic measures.

use std::io::Write;

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::graph::SymmetricMatrix;
use crate::measure::DiscreteMeasure;

/// All eigenvalues of a symmetric matrix, sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample {
    eigenvalues: Vec<f64>,
}

impl SpectralSample {
    pub fn from_unsorted(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// One eigenvalue per line, descending.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "eigenvalue")?;
        for x in &self.eigenvalues {
            writeln!(w, "{x}")?;
        }
        Ok(())
    }
}

/// Dense symmetric eigensolve.
pub fn eigenvalues_symmetric(m: &SymmetricMatrix) -> Result<SpectralSample> {
    let n = m.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let dense = Mat::<f64>::from_fn(n, n, |i, j| m.get(i, j));
    let ev = dense
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::InvalidArgument(format!("eigensolver failed: {e:?}")))?;
    Ok(SpectralSample::from_unsorted(ev))
}

/// Uniform measure on the eigenvalues.
pub fn esd(s: &SpectralSample) -> Result<DiscreteMeasure> {
    DiscreteMeasure::empirical(s.eigenvalues())
}

/// Sorted union of both supports.
fn merged_grid(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Vec<f64> {
    let mut grid: Vec<f64> = a.locations().chain(b.locations()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Walks the merged grid returning `(x, F_a(x), F_b(x))` with right-continuous CDFs.
fn cdf_walk(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Vec<(f64, f64, f64)> {
    let (aa, bb) = (a.atoms(), b.atoms());
    let (mut ia, mut ib) = (0, 0);
    let (mut fa, mut fb) = (0.0, 0.0);
    merged_grid(a, b)
        .into_iter()
        .map(|x| {
            while ia < aa.len() && aa[ia].0 <= x {
                fa += aa[ia].1;
                ia += 1;
            }
            while ib < bb.len() && bb[ib].0 <= x {
                fb += bb[ib].1;
                ib += 1;
            }
            (x, fa, fb)
        })
        .collect()
}

/// `sup_x |F_a(x) - F_b(x)|`, attained on the merged atom grid.
pub fn kolmogorov_distance(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    cdf_walk(a, b).into_iter().map(|(_, fa, fb)| (fa - fb).abs()).fold(0.0, f64::max)
}

/// `∫ |F_a - F_b| dx` for piecewise-constant CDFs.
pub fn wasserstein1(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    let walk = cdf_walk(a, b);
    walk.windows(2).map(|w| (w[0].1 - w[0].2).abs() * (w[1].0 - w[0].0)).sum()
}

/// Kolmogorov distance between an atomic measure and a continuous CDF.
/// Both one-sided limits of the atomic CDF are compared at every atom.
pub fn kolmogorov_to_cdf<F: Fn(f64) -> f64>(a: &DiscreteMeasure, cdf: F) -> f64 {
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for &(x, w) in a.atoms() {
        let f = cdf(x);
        let above = below + w;
        worst = worst.max((f - below).abs()).max((f - above).abs());
        below = above;
    }
    worst
}

/// `sqrt((1/n) tr((A - B)^2))`. By the Hoffman–Wielandt inequality this
/// bounds the `l2` eigenvalue matching cost, hence Wasserstein-1 and the
/// bounded-Lipschitz distance between the two ESDs.
pub fn hoffman_wielandt_bl_bound(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::OrderMismatch { left: a.n(), right: b.n() });
    }
    let n = a.n();
    if n == 0 {
        return Ok(0.0);
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..i {
            s += 2.0 * (a.get(i, j) - b.get(i, j)).powi(2);
        }
        s += (a.get(i, i) - b.get(i, i)).powi(2);
    }
    Ok((s / n as f64).sqrt())
}

/// Histogram bin with its density (count / (n * width)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Freedman–Diaconis bin width `2 IQR n^{-1/3}`; falls back to Sturges'
/// bin count when the IQR vanishes.
pub fn freedman_diaconis_width(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let iqr = quantile_sorted(&v, 0.75) - quantile_sorted(&v, 0.25);
    let range = v[v.len() - 1] - v[0];
    if iqr > 0.0 {
        2.0 * iqr / n.cbrt()
    } else if range > 0.0 {
        range / (n.log2().ceil() + 1.0)
    } else {
        1.0
    }
}

/// Density histogram; `width = None` selects Freedman–Diaconis.
pub fn histogram(values: &[f64], width: Option<f64>) -> Result<Vec<Bin>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("histogram of no values".into()));
    }
    let width = width.unwrap_or_else(|| freedman_diaconis_width(values));
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(format!("bin width {width}")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = (((hi - lo) / width).floor() as usize + 1).max(1);
    let mut counts = vec![0usize; bins];
    for &x in values {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = values.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| Bin {
            left: lo + k as f64 * width,
            right: lo + (k + 1) as f64 * width,
            density: c as f64 / (total * width),
        })
        .collect())
}

pub fn write_histogram_csv<W: Write>(bins: &[Bin], mut w: W) -> std::io::Result<()> {
    writeln!(w, "bin_left,bin_right,density")?;
    for b in bins {
        writeln!(w, "{},{},{}", b.left, b.right, b.density)?;
    }
    Ok(())
}
