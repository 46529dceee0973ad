use std::io::Write;

use num_complex::Complex64;

use super::stieltjes::{check_degree_law, solve_g, SolverOptions, StieltjesSolution};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

const NEGATIVE_TOL: f64 = 1e-10;

/// Solution of the fixed point at `z = sqrt(x) + iη` for `x > 0` (so `h` is
/// read at `w = z²`, whose imaginary part `2 sqrt(x) η` shrinks with `x`
/// near the hard edge at 0) and at `z = sqrt(x + iη)` otherwise. Reached by
/// halving `η` from 1 with warm starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpPoint {
    pub x: f64,
    pub eta: f64,
    pub solution: StieltjesSolution,
}

impl MpPoint {
    /// Boundary value `h(x + i0)`, approximated by `g(z) / sqrt(x)` for
    /// `x > 0`. Dividing by the real `sqrt(x)` instead of `z` removes a
    /// bias of order `η / x` in `Re h` near the origin.
    pub fn h(&self) -> Complex64 {
        if self.x > 0.0 {
            self.solution.g / self.x.sqrt()
        } else {
            self.solution.h
        }
    }

    /// `ρ_MP(x) = Im h / π`.
    pub fn density(&self) -> f64 {
        self.h().im / std::f64::consts::PI
    }
}

fn eta_schedule(eta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cur = 1.0;
    while cur > eta {
        out.push(cur);
        cur *= 0.5;
    }
    out.push(eta);
    out
}

/// Continuation solve at `x + iη`. `eta` must be in `(0, 1]`.
pub fn mp_point(x: f64, nu: &DiscreteMeasure, eta: f64, opts: &SolverOptions) -> Result<MpPoint> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidArgument(format!("eta = {eta} must be in (0, 1]")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x}")));
    }
    let mut warm = None;
    let mut last = None;
    for e in eta_schedule(eta) {
        let z = if x > 0.0 { Complex64::new(x.sqrt(), e) } else { Complex64::new(x, e).sqrt() };
        let s = solve_g(z, nu, opts, warm)?;
        warm = Some(s.g);
        last = Some(s);
    }
    Ok(MpPoint { x, eta, solution: last.expect("schedule is never empty") })
}

/// Density of `μ_MP` at `x != 0`, read off at height `eta`.
pub fn density_mp(x: f64, nu: &DiscreteMeasure, eta: f64, opts: &SolverOptions) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::InvalidArgument("ρ_MP is evaluated away from 0".into()));
    }
    Ok(mp_point(x, nu, eta, opts)?.density())
}

/// `ρ̃(x) = |x| ρ_MP(x²)`.
pub fn density_tilde(x: f64, nu: &DiscreteMeasure, eta: f64, opts: &SolverOptions) -> Result<f64> {
    Ok(x.abs() * density_mp(x * x, nu, eta, opts)?)
}

/// `ρ(x) = -2 Re h(x²) |x| ρ_MP(x²)` from a single solve.
fn rho_from_point(x: f64, p: &MpPoint) -> Result<f64> {
    let h = p.h();
    let rho = -2.0 * h.re * x.abs() * h.im / std::f64::consts::PI;
    if rho < -NEGATIVE_TOL {
        return Err(Error::NegativeDensity { x, value: rho });
    }
    Ok(rho.max(0.0))
}

/// Density of `μ`. At `x = 0` the value is extrapolated from
/// `|x| ∈ {0.01, 0.02}` by an even quadratic `a + b x²`.
pub fn density_mu(x: f64, nu: &DiscreteMeasure, eta: f64, opts: &SolverOptions) -> Result<f64> {
    if x == 0.0 {
        let r1 = density_mu(0.01, nu, eta, opts)?;
        let r2 = density_mu(0.02, nu, eta, opts)?;
        return Ok(((4.0 * r1 - r2) / 3.0).max(0.0));
    }
    let p = mp_point(x * x, nu, eta, opts)?;
    rho_from_point(x, &p)
}

/// Mass of `μ` at the origin, `-Re(iη f(iη))` at `η = 1e-4`.
pub fn mu_atom_at_zero(nu: &DiscreteMeasure, opts: &SolverOptions) -> Result<f64> {
    let z = Complex64::new(0.0, 1e-4);
    let g = solve_g(z, nu, opts, None)?.g;
    let f = -(1.0 + g * g) / z;
    Ok(-(z * f).re)
}

/// `ρ` sampled on a grid symmetric about zero.
#[derive(Clone, Debug)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    /// `ρ̃` on the same grid (`NaN` at 0).
    pub rho_tilde: Vec<f64>,
    /// Fixed-point solution behind each grid point (`None` at 0 and on failure).
    pub solutions: Vec<Option<StieltjesSolution>>,
    pub eta_final: f64,
    pub tol: f64,
    pub measure_hash: u64,
    pub measure: String,
    /// Grid points whose solve failed; their `rho` is `NaN`.
    pub failures: Vec<(f64, String)>,
}

impl DensityCurve {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    /// Cumulative trapezoid, starting at zero on the left end.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.grid.len());
        out.push(0.0);
        for k in 1..self.grid.len() {
            acc += 0.5 * (self.rho[k] + self.rho[k - 1]) * (self.grid[k] - self.grid[k - 1]);
            out.push(acc);
        }
        out
    }

    /// `∫ ρ` by the trapezoid rule.
    pub fn mass(&self) -> f64 {
        *self.cumulative().last().expect("grid has at least two points")
    }

    /// `∫ x^k ρ(x) dx` by the trapezoid rule.
    pub fn moment(&self, k: i32) -> f64 {
        let f: Vec<f64> = self.grid.iter().zip(&self.rho).map(|(x, r)| x.powi(k) * r).collect();
        self.grid.windows(2).zip(f.windows(2)).map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0])).sum()
    }

    /// Piecewise-linear CDF from the cumulative trapezoid; constant outside the grid.
    pub fn cdf(&self) -> impl Fn(f64) -> f64 + '_ {
        let cum = self.cumulative();
        move |t: f64| {
            let g = &self.grid;
            if t <= g[0] {
                return 0.0;
            }
            if t >= g[g.len() - 1] {
                return cum[cum.len() - 1];
            }
            let k = g.partition_point(|&x| x <= t);
            let (x0, x1) = (g[k - 1], g[k]);
            cum[k - 1] + (cum[k] - cum[k - 1]) * (t - x0) / (x1 - x0)
        }
    }

    /// `(x, rho)` rows behind `#` metadata lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# nu={}", self.measure)?;
        writeln!(w, "# nu_hash={:016x}", self.measure_hash)?;
        writeln!(w, "# eta_final={:e}", self.eta_final)?;
        writeln!(w, "# tol={:e}", self.tol)?;
        writeln!(w, "# mass={}", self.mass())?;
        if !self.is_complete() {
            writeln!(w, "# partial=true failures={}", self.failures.len())?;
        }
        writeln!(w, "x,rho")?;
        for (x, r) in self.grid.iter().zip(&self.rho) {
            writeln!(w, "{x},{r}")?;
        }
        Ok(())
    }
}

/// Symmetric grid on `[-x_max, x_max]`; the negative half mirrors the
/// positive half bit for bit.
fn symmetric_grid(x_max: f64, points: usize) -> Vec<f64> {
    let last = points - 1;
    let mut grid = vec![0.0; points];
    for k in (points / 2)..points {
        let x = x_max * (2 * k) as f64 / last as f64 - x_max;
        let x = if 2 * k == last { 0.0 } else { x };
        grid[k] = x;
        grid[last - k] = -x;
    }
    grid
}

/// Samples `ρ` on `points` equispaced points of `[-x_max, x_max]`, each value
/// computed once per `|x|`. Failed points are recorded, not fatal.
pub fn density_curve(
    nu: &DiscreteMeasure,
    x_max: f64,
    points: usize,
    eta: f64,
    opts: &SolverOptions,
) -> Result<DensityCurve> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!("points = {points} must be >= 2")));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("x_max = {x_max}")));
    }
    check_degree_law(nu)?;
    let grid = symmetric_grid(x_max, points);
    let mut rho = vec![f64::NAN; points];
    let mut rho_tilde = vec![f64::NAN; points];
    let mut solutions = vec![None; points];
    let mut failures = Vec::new();
    let last = points - 1;
    for k in (points / 2)..points {
        let x = grid[k];
        let mirror = last - k;
        let value = if x == 0.0 {
            density_mu(0.0, nu, eta, opts).map(|r| (r, f64::NAN, None))
        } else {
            mp_point(x * x, nu, eta, opts).and_then(|p| {
                let r = rho_from_point(x, &p)?;
                Ok((r, x * p.density(), Some(p.solution)))
            })
        };
        match value {
            Ok((r, rt, sol)) => {
                for idx in [k, mirror] {
                    rho[idx] = r;
                    rho_tilde[idx] = rt;
                    solutions[idx] = sol;
                }
            }
            Err(e) => {
                failures.push((x, e.to_string()));
                if mirror != k {
                    failures.push((-x, e.to_string()));
                }
            }
        }
    }
    Ok(DensityCurve {
        grid,
        rho,
        rho_tilde,
        solutions,
        eta_final: eta,
        tol: opts.tol,
        measure_hash: nu.fingerprint(),
        measure: nu.to_string(),
        failures,
    })
}
