use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

const MEAN_TOL: f64 = 1e-9;

/// Controls for [`solve_g`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Target for `|g + E[D/(z + gD)]|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Weight of the new iterate in the damped step.
    pub damping: f64,
    /// Try a Newton step before every damped step and keep it when it
    /// stays in the upper half-plane and lowers the residual.
    pub newton: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 100_000, damping: 0.5, newton: true }
    }
}

/// A converged fixed point at `z`; `h` is `h(z²) = g / z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StieltjesSolution {
    pub z: Complex64,
    pub g: Complex64,
    pub h: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) fn check_degree_law(nu: &DiscreteMeasure) -> Result<()> {
    if !nu.is_nonnegative() {
        return Err(Error::InvalidMeasure("degree law must live on [0, inf)".into()));
    }
    let mean = nu.mean();
    if (mean - 1.0).abs() > MEAN_TOL {
        return Err(Error::InvalidMeasure(format!("degree law has mean {mean}, expected 1")));
    }
    Ok(())
}

/// `T(g) = -E[D/(z+gD)]` and `T'(g) = E[D²/(z+gD)²]`.
#[inline]
fn fixed_point_map(z: Complex64, g: Complex64, nu: &DiscreteMeasure) -> (Complex64, Complex64) {
    let mut t = Complex64::new(0.0, 0.0);
    let mut dt = Complex64::new(0.0, 0.0);
    for &(d, w) in nu.atoms() {
        if d == 0.0 {
            continue;
        }
        let r = (z + g * d).inv();
        let wr = r * (w * d);
        t -= wr;
        dt += wr * r * d;
    }
    (t, dt)
}

/// Solves `g = -E[D/(z + gD)]` for `Im z > 0` by damped fixed-point
/// iteration started at `i min(1, 1/Im z)` (or `warm_start`), with Newton
/// acceleration.
pub fn solve_g(
    z: Complex64,
    nu: &DiscreteMeasure,
    opts: &SolverOptions,
    warm_start: Option<Complex64>,
) -> Result<StieltjesSolution> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("z = {z} must lie in the upper half-plane")));
    }
    check_degree_law(nu)?;
    let cold = Complex64::new(0.0, z.im.recip().min(1.0));
    let mut g = match warm_start {
        Some(w) if w.im > 0.0 && w.re.is_finite() && w.im.is_finite() => w,
        _ => cold,
    };
    let theta = opts.damping.clamp(f64::MIN_POSITIVE, 1.0);
    let mut best = f64::INFINITY;
    for it in 0..opts.max_iter {
        let (t, dt) = fixed_point_map(z, g, nu);
        let res = (g - t).norm();
        best = best.min(res);
        if res <= opts.tol {
            return Ok(StieltjesSolution { z, g, h: g / z, residual: res, iterations: it });
        }
        if opts.newton {
            let cand = g - (g - t) / (Complex64::new(1.0, 0.0) - dt);
            if cand.im > 0.0 && cand.re.is_finite() && cand.im.is_finite() {
                let (tc, _) = fixed_point_map(z, cand, nu);
                if (cand - tc).norm() < res {
                    g = cand;
                    continue;
                }
            }
        }
        g = g * (1.0 - theta) + t * theta;
    }
    Err(Error::NoConvergence { z, iterations: opts.max_iter, residual: best })
}

/// `h(w)` for `w` in the upper half-plane, through `z = sqrt(w)`.
pub fn transform_h(
    w: Complex64,
    nu: &DiscreteMeasure,
    opts: &SolverOptions,
    warm_start: Option<Complex64>,
) -> Result<StieltjesSolution> {
    solve_g(w.sqrt(), nu, opts, warm_start)
}

/// Stieltjes transform of `μ`: `f(z) = -(1 + g(z)²) / z`.
pub fn stieltjes_mu(z: Complex64, nu: &DiscreteMeasure, opts: &SolverOptions) -> Result<Complex64> {
    let s = solve_g(z, nu, opts, None)?;
    Ok(-(1.0 + s.g * s.g) / z)
}
