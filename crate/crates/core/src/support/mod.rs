//! Support of `μ_MP` (and hence of `μ`) from the explicit inverse of `h`,
//!
//! ```text
//! ξ(v) = -1/v + E[ D² / (1 + v D) ],
//! ```
//!
//! defined off the poles `0` and `-1/d` for atoms `d > 0` of the degree law
//! (for laws whose mean is not one, the expectation is divided by the mean).
//! A point `x > 0` lies outside the support of `μ_MP` exactly when `x = ξ(v)`
//! for a real `v < 0` off the poles with `ξ'(v) > 0`. On every pole gap the
//! sign pattern of `ξ'` is found, each increasing run of `ξ` is mapped to
//! the gap `(ξ(a), ξ(b))` it covers, and the support is what remains of
//! `[0, x_max]`.
//!
//! Laws with at most eight atoms go through the numerator polynomial of `ξ'`
//! expanded in double-double arithmetic; larger laws are scanned on a sample
//! grid per pole gap. Gaps narrower than a threshold are closed, which hides
//! the spurious micro-gaps of quantized continuous laws.

pub mod dd;
mod two_atom;

use std::io::Write;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

use dd::{sign_changes_in, Dd, DdPoly};

pub use two_atom::{
    discriminant_from_parts, hole_threshold, phase_diagram, two_atom_discriminant,
    two_atom_has_hole, write_phase_csv, PhasePoint, TwoAtomLaw,
};

/// Disjoint closed intervals sorted left to right.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SupportIntervals {
    intervals: Vec<(f64, f64)>,
}

impl SupportIntervals {
    /// Sorts and merges overlapping or touching intervals.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|&(a, b)| a <= b);
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.intervals.windows(2).map(|w| (w[0].1, w[1].0)).collect()
    }

    /// Number of intervals meeting `(0, inf)`.
    pub fn components_on_positive_axis(&self) -> usize {
        self.intervals.iter().filter(|&&(_, b)| b > 0.0).count()
    }

    pub fn upper_edge(&self) -> Option<f64> {
        self.intervals.last().map(|i| i.1)
    }

    /// Merges intervals separated by gaps narrower than `min_gap`.
    pub fn close_gaps(&self, min_gap: f64) -> Self {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len());
        for &(a, b) in &self.intervals {
            match out.last_mut() {
                Some(last) if a - last.1 < min_gap => last.1 = b,
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "left,right")?;
        for (a, b) in &self.intervals {
            writeln!(w, "{a},{b}")?;
        }
        Ok(())
    }
}

/// Positive atoms with weights divided by the mean, so that `ξ` depends on
/// the law only through its size-biased version. For mean-one laws this is
/// the identity; in general it makes the support scale with the atoms.
fn positive_atoms(nu: &DiscreteMeasure) -> impl Iterator<Item = (f64, f64)> + '_ {
    let mean = nu.mean();
    nu.atoms().iter().copied().filter(|&(d, _)| d > 0.0).map(move |(d, w)| (d, w / mean))
}

fn check_not_pole(v: f64, nu: &DiscreteMeasure) -> Result<()> {
    if v == 0.0 || !v.is_finite() || positive_atoms(nu).any(|(d, _)| 1.0 + v * d == 0.0) {
        return Err(Error::Pole { v });
    }
    Ok(())
}

/// `ξ(v) = -1/v + Σ w d² / (1 + v d)`.
pub fn xi(v: f64, nu: &DiscreteMeasure) -> Result<f64> {
    check_not_pole(v, nu)?;
    Ok(-1.0 / v + positive_atoms(nu).map(|(d, w)| w * d * d / (1.0 + v * d)).sum::<f64>())
}

/// `ξ'(v) = 1/v² - Σ w d³ / (1 + v d)²`.
pub fn xi_prime(v: f64, nu: &DiscreteMeasure) -> Result<f64> {
    check_not_pole(v, nu)?;
    Ok(xi_prime_unchecked(v, nu))
}

fn xi_prime_unchecked(v: f64, nu: &DiscreteMeasure) -> f64 {
    1.0 / (v * v)
        - positive_atoms(nu)
            .map(|(d, w)| {
                let r = 1.0 + v * d;
                w * d * d * d / (r * r)
            })
            .sum::<f64>()
}

/// `(v, ξ(v), ξ'(v))` on an equispaced grid of `[v_min, v_max]`, poles skipped.
pub fn xi_trace(nu: &DiscreteMeasure, v_min: f64, v_max: f64, points: usize) -> Vec<(f64, f64, f64)> {
    let step = (v_max - v_min) / (points.max(2) - 1) as f64;
    (0..points.max(2))
        .filter_map(|k| {
            let v = v_min + step * k as f64;
            Some((v, xi(v, nu).ok()?, xi_prime(v, nu).ok()?))
        })
        .collect()
}

/// Numerator of `ξ'` over the positive denominator `v² Π (1 + v d)²`.
pub fn xi_prime_numerator(nu: &DiscreteMeasure) -> DdPoly {
    let atoms: Vec<(f64, f64)> = positive_atoms(nu).collect();
    let sq = |d: f64| {
        let l = DdPoly::linear(Dd::ONE, Dd::from(d));
        &l * &l
    };
    let mut all = DdPoly::constant(Dd::ONE);
    for &(d, _) in &atoms {
        all = &all * &sq(d);
    }
    let mut sum = DdPoly::constant(Dd::ZERO);
    for (a, &(d, w)) in atoms.iter().enumerate() {
        let dd = Dd::from(d);
        let mut term = DdPoly::constant(Dd::from(w) * dd * dd * dd);
        for (b, &(e, _)) in atoms.iter().enumerate() {
            if a != b {
                term = &term * &sq(e);
            }
        }
        sum = &sum + &term;
    }
    let v2 = DdPoly::new(vec![Dd::ZERO, Dd::ZERO, Dd::ONE]);
    &all + &(&v2 * &sum).scale(-Dd::ONE)
}

/// Tuning for [`support_mp_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportOptions {
    /// Laws with at most this many positive atoms use the exact polynomial route.
    pub exact_atom_limit: usize,
    /// Samples per pole gap on the scanning route.
    pub scan_samples: usize,
    /// Gaps narrower than this are closed on the scanning route.
    pub min_gap: f64,
    /// Gap threshold on the exact route (rounding noise only).
    pub exact_min_gap: f64,
    /// Upper truncation; `None` means `4 max(D) (E D² + 1)`.
    pub x_max: Option<f64>,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self {
            exact_atom_limit: 8,
            scan_samples: 10_000,
            min_gap: 1e-3,
            exact_min_gap: 1e-10,
            x_max: None,
        }
    }
}

/// Default truncation `4 max(D) (E D² + 1)`.
pub fn default_x_max(nu: &DiscreteMeasure) -> f64 {
    4.0 * nu.max_location() * (nu.moment(2) + 1.0)
}

/// End of a monotone run of `ξ`, either a finite `v` or one of the two
/// unbounded ends of the negative axis.
#[derive(Clone, Copy, Debug, PartialEq)]
enum End {
    MinusInfinity,
    At(f64),
    ZeroMinus,
}

/// `ξ` image of an increasing run.
fn image(a: End, b: End, nu: &DiscreteMeasure) -> Result<(f64, f64)> {
    let at = |e: End| -> Result<f64> {
        match e {
            End::MinusInfinity => Ok(0.0),
            End::ZeroMinus => Ok(f64::INFINITY),
            End::At(v) => xi(v, nu),
        }
    };
    Ok((at(a)?, at(b)?))
}

/// Increasing runs of `ξ` on the negative axis via the numerator polynomial.
fn runs_exact(nu: &DiscreteMeasure, poles: &[f64]) -> Result<Vec<(End, End)>> {
    let p = xi_prime_numerator(nu);
    let far = poles[0] * 1e6;
    let mut runs = Vec::new();
    let mut bounds: Vec<(End, End, f64, f64)> = Vec::new();
    bounds.push((End::MinusInfinity, End::At(poles[0]), far, poles[0]));
    for w in poles.windows(2) {
        bounds.push((End::At(w[0]), End::At(w[1]), w[0], w[1]));
    }
    bounds.push((End::At(poles[poles.len() - 1]), End::ZeroMinus, poles[poles.len() - 1], 0.0));
    for (left, right, lo, hi) in bounds {
        let roots = sign_changes_in(&p, lo, hi);
        let mut knots = vec![lo];
        knots.extend(roots.iter().copied());
        knots.push(hi);
        for (k, w) in knots.windows(2).enumerate() {
            let mid = 0.5 * (w[0] + w[1]);
            if p.eval(mid).signum() != std::cmp::Ordering::Greater {
                continue;
            }
            let a = if k == 0 { left } else { End::At(w[0]) };
            let b = if k + 2 == knots.len() { right } else { End::At(w[1]) };
            if let (End::At(x), End::At(y)) = (a, b) {
                if poles.contains(&x) || poles.contains(&y) {
                    return Err(Error::RootIsolation {
                        lo,
                        hi,
                        reason: "positive xi' next to a pole".into(),
                    });
                }
            }
            runs.push((a, b));
        }
    }
    Ok(runs)
}

/// Bisection of a sign change of `ξ'` in `(lo, hi)`, positive side first or last.
fn bisect_xi_prime(nu: &DiscreteMeasure, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = xi_prime_unchecked(lo, nu) > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            return mid;
        }
        if (xi_prime_unchecked(mid, nu) > 0.0) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Increasing runs of `ξ` by sampling each pole gap.
fn runs_scan(nu: &DiscreteMeasure, poles: &[f64], samples: usize) -> Vec<(End, End)> {
    let samples = samples.max(4);
    let mut runs = Vec::new();
    let mut gaps: Vec<(End, End)> = vec![(End::MinusInfinity, End::At(poles[0]))];
    gaps.extend(poles.windows(2).map(|w| (End::At(w[0]), End::At(w[1]))));
    gaps.push((End::At(poles[poles.len() - 1]), End::ZeroMinus));

    // weight * d of the atom owning each pole (ascending d gives ascending poles)
    let mass: Vec<f64> = {
        let mut atoms: Vec<(f64, f64)> = positive_atoms(nu).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms.iter().map(|&(d, w)| w * d).collect()
    };

    for (g, &(left, right)) in gaps.iter().enumerate() {
        // On a finite gap of width L between poles p1 < p2, the two pole terms
        // alone exceed (m1 + m2) / L² while 1/v² <= 1/p2²; if so, ξ' < 0 throughout.
        if let (End::At(p1), End::At(p2)) = (left, right) {
            let width = p2 - p1;
            if (mass[g - 1] + mass[g]) / (width * width) > 1.0 / (p2 * p2) {
                continue;
            }
        }
        let xs: Vec<f64> = match (left, right) {
            (End::MinusInfinity, End::At(p)) => {
                (0..samples).map(|k| p * 1e6f64.powf((samples - k) as f64 / samples as f64)).collect()
            }
            (End::At(p), End::ZeroMinus) => {
                (0..samples).map(|k| p * (1.0 - (k as f64 + 0.5) / samples as f64)).collect()
            }
            (End::At(p1), End::At(p2)) => {
                (0..samples).map(|k| p1 + (p2 - p1) * (k as f64 + 0.5) / samples as f64).collect()
            }
            _ => unreachable!("gap layout"),
        };
        let signs: Vec<bool> = xs.iter().map(|&v| xi_prime_unchecked(v, nu) > 0.0).collect();
        let mut start: Option<End> = if signs[0] { Some(left) } else { None };
        for k in 1..samples {
            match (signs[k - 1], signs[k]) {
                (false, true) => start = Some(End::At(bisect_xi_prime(nu, xs[k - 1], xs[k]))),
                (true, false) => {
                    let end = End::At(bisect_xi_prime(nu, xs[k - 1], xs[k]));
                    runs.push((start.take().expect("run start"), end));
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, right));
        }
    }
    runs
}

/// Support of `μ_MP` with default options.
pub fn support_mp(nu: &DiscreteMeasure) -> Result<SupportIntervals> {
    support_mp_with(nu, &SupportOptions::default())
}

/// Support of `μ_MP` on `[0, x_max]`. The degree law need not have mean one
/// here (the construction is homogeneous under dilations).
pub fn support_mp_with(nu: &DiscreteMeasure, opts: &SupportOptions) -> Result<SupportIntervals> {
    if !nu.is_nonnegative() {
        return Err(Error::InvalidMeasure("degree law must live on [0, inf)".into()));
    }
    let mut poles: Vec<f64> = positive_atoms(nu).map(|(d, _)| -1.0 / d).collect();
    if poles.is_empty() {
        return Err(Error::InvalidMeasure("degree law is the point mass at 0".into()));
    }
    poles.sort_by(f64::total_cmp);
    let x_max = opts.x_max.unwrap_or_else(|| default_x_max(nu));

    let exact = poles.len() <= opts.exact_atom_limit;
    let runs = if exact { runs_exact(nu, &poles)? } else { runs_scan(nu, &poles, opts.scan_samples) };

    let mut complement: Vec<(f64, f64)> = Vec::new();
    for (a, b) in runs {
        let (lo, hi) = image(a, b, nu)?;
        let (lo, hi) = (lo.max(0.0), hi.min(x_max));
        if hi > lo {
            complement.push((lo, hi));
        }
    }
    let complement = SupportIntervals::from_intervals(complement);

    let mut support = Vec::new();
    let mut cursor = 0.0;
    for &(a, b) in complement.intervals() {
        if a > cursor {
            support.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < x_max {
        support.push((cursor, x_max));
    }
    let min_gap = if exact { opts.exact_min_gap } else { opts.min_gap };
    Ok(SupportIntervals::from_intervals(support).close_gaps(min_gap))
}

/// Support of `μ`: the symmetrized square-root image of the support of `μ_MP`.
pub fn support_mu(nu: &DiscreteMeasure) -> Result<SupportIntervals> {
    Ok(mu_from_mp(&support_mp(nu)?))
}

/// `[a, b] -> ±[sqrt a, sqrt b]`, with intervals touching 0 mapped to one
/// symmetric interval.
pub fn mu_from_mp(mp: &SupportIntervals) -> SupportIntervals {
    let mut out = Vec::new();
    for &(a, b) in mp.intervals() {
        let (ra, rb) = (a.max(0.0).sqrt(), b.max(0.0).sqrt());
        if a <= 0.0 {
            out.push((-rb, rb));
        } else {
            out.push((ra, rb));
            out.push((-rb, -ra));
        }
    }
    SupportIntervals::from_intervals(out)
}
