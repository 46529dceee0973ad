//! Mean-one laws on two atoms `α > 1 > β > 0` and the closed-form criterion
//! for a hole in the support.

use std::io::Write;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// `P(D = α) = q_o`, `P(D = β) = 1 - q_o` with `q_o = (1 - β) / (α - β)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoAtomLaw {
    alpha: f64,
    beta: f64,
    q_o: f64,
}

impl TwoAtomLaw {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta > 0.0 && beta < 1.0 && alpha > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "two-atom law needs alpha > 1 > beta > 0, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta, q_o: (1.0 - beta) / (alpha - beta) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mass at `α`.
    pub fn q_o(&self) -> f64 {
        self.q_o
    }

    /// Size-biased mass at `α`.
    pub fn q(&self) -> f64 {
        self.alpha * self.q_o
    }

    pub fn to_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_masses(vec![(self.alpha, self.q_o), (self.beta, 1.0 - self.q_o)])
            .expect("valid two-atom law")
    }

    /// Coefficients `(a, b, c, d)` of the cubic `P(v)` whose positivity on
    /// `v > 0` is equivalent to `ξ'(-v) > 0`.
    pub fn cubic(&self) -> [f64; 4] {
        let (al, be, q) = (self.alpha, self.beta, self.q());
        [
            -2.0 * al * be * (q * be + (1.0 - q) * al),
            q * be * be + 4.0 * al * be + (1.0 - q) * al * al,
            -2.0 * (al + be),
            1.0,
        ]
    }
}

/// `4 q (1-q) (α-β)² (α B - q A)` with `A = (α-β)(α+β)³`, `B = (α-2β)³`.
/// Vanishes at `α = β`.
pub fn discriminant_from_parts(alpha: f64, beta: f64, q: f64) -> f64 {
    let a = (alpha - beta) * (alpha + beta).powi(3);
    let b = (alpha - 2.0 * beta).powi(3);
    4.0 * q * (1.0 - q) * (alpha - beta).powi(2) * (alpha * b - q * a)
}

pub fn two_atom_discriminant(law: &TwoAtomLaw) -> f64 {
    discriminant_from_parts(law.alpha, law.beta, law.q())
}

/// `β [3 / (1 - (1-β)^{1/3}) - 1]`.
pub fn hole_threshold(beta: f64) -> f64 {
    beta * (3.0 / (1.0 - (1.0 - beta).cbrt()) - 1.0)
}

pub fn two_atom_has_hole(law: &TwoAtomLaw) -> bool {
    law.alpha > hole_threshold(law.beta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub alpha: f64,
    pub beta: f64,
    pub has_hole: bool,
    pub discriminant: f64,
}

/// Sweep of an `alphas × betas` grid; pairs outside the valid range are skipped.
pub fn phase_diagram(alphas: &[f64], betas: &[f64]) -> Vec<PhasePoint> {
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for &beta in betas {
        for &alpha in alphas {
            if let Ok(law) = TwoAtomLaw::new(alpha, beta) {
                out.push(PhasePoint {
                    alpha,
                    beta,
                    has_hole: two_atom_has_hole(&law),
                    discriminant: two_atom_discriminant(&law),
                });
            }
        }
    }
    out
}

pub fn write_phase_csv<W: Write>(points: &[PhasePoint], mut w: W) -> std::io::Result<()> {
    writeln!(w, "alpha,beta,has_hole,discriminant")?;
    for p in points {
        writeln!(w, "{},{},{},{:e}", p.alpha, p.beta, p.has_hole, p.discriminant)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::support_mp;

    fn cubic_discriminant([a, b, c, d]: [f64; 4]) -> f64 {
        b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d + 18.0 * a * b * c * d
            - 27.0 * a * a * d * d
    }

    #[test]
    fn validation() {
        assert!(TwoAtomLaw::new(0.9, 0.5).is_err());
        assert!(TwoAtomLaw::new(3.0, 1.0).is_err());
        assert!(TwoAtomLaw::new(3.0, 0.0).is_err());
        let law = TwoAtomLaw::new(7.0, 0.5).unwrap();
        assert!((law.q_o() - 1.0 / 13.0).abs() < 1e-15);
        assert!((law.to_measure().mean() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_discriminant() {
        assert_eq!(discriminant_from_parts(2.0, 2.0, 0.3), 0.0);
    }

    #[test]
    fn examples_at_half() {
        let above = TwoAtomLaw::new(7.0, 0.5).unwrap();
        let below = TwoAtomLaw::new(6.0, 0.5).unwrap();
        assert!(two_atom_discriminant(&above) > 0.0 && two_atom_has_hole(&above));
        assert!(two_atom_discriminant(&below) < 0.0 && !two_atom_has_hole(&below));
        assert!((hole_threshold(0.5) - 6.771).abs() < 1e-3);
    }

    #[test]
    fn closed_form_matches_cubic_discriminant() {
        for beta in [0.1, 0.3, 0.5, 0.8, 0.95] {
            for alpha in [1.5, 3.0, 6.0, 10.0, 19.0] {
                let law = TwoAtomLaw::new(alpha, beta).unwrap();
                let closed = two_atom_discriminant(&law);
                let direct = cubic_discriminant(law.cubic());
                assert!(
                    (closed - direct).abs() <= 1e-9 * closed.abs().max(direct.abs()).max(1.0),
                    "alpha={alpha} beta={beta}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn criterion_matches_sign_and_support() {
        for i in 0..12 {
            let beta = 0.05 + 0.9 * i as f64 / 11.0;
            for j in 0..12 {
                let alpha = 1.0 + 19.0 * (j as f64 + 0.5) / 12.0;
                let law = TwoAtomLaw::new(alpha, beta).unwrap();
                let hole = two_atom_has_hole(&law);
                assert_eq!(hole, two_atom_discriminant(&law) > 0.0);
                let parts = support_mp(&law.to_measure()).unwrap().components_on_positive_axis();
                assert_eq!(parts, if hole { 2 } else { 1 }, "alpha={alpha} beta={beta}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let pts = phase_diagram(&[0.5, 3.0, 8.0], &[0.5]);
        assert_eq!(pts.len(), 2);
        let mut buf = Vec::new();
        write_phase_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("alpha,beta,has_hole,discriminant\n3,0.5,false,"));
    }
}
