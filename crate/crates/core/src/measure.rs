//! Finite atomic probability measures on the real line.

use std::fmt;

use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// A probability measure with finitely many atoms.
///
/// Atoms are kept sorted by location with no duplicates and strictly positive
/// weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    /// Validating constructor. Locations must be strictly increasing and the
    /// weights positive with unit total (within `1e-12`).
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = 0.0;
        for (k, &(x, w)) in atoms.iter().enumerate() {
            if !x.is_finite() || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("non-finite atom ({x}, {w})")));
            }
            if w <= 0.0 {
                return Err(Error::InvalidMeasure(format!("non-positive weight {w} at {x}")));
            }
            if k > 0 && atoms[k - 1].0 >= x {
                return Err(Error::InvalidMeasure(format!(
                    "locations not strictly increasing at {x}"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { atoms })
    }

    /// Builds a measure from arbitrary (location, mass) pairs: sorts, merges
    /// equal locations, drops zero masses and normalizes the total to one.
    pub fn from_masses<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, w)| w != 0.0).collect();
        if raw.iter().any(|&(x, w)| !x.is_finite() || !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidMeasure("non-finite location or negative mass".into()));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (x, w) in raw {
            match atoms.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => atoms.push((x, w)),
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if atoms.is_empty() || total <= 0.0 {
            return Err(Error::InvalidMeasure("zero total mass".into()));
        }
        for a in &mut atoms {
            a.1 /= total;
        }
        Ok(Self { atoms })
    }

    pub fn point_mass(x: f64) -> Self {
        Self { atoms: vec![(x, 1.0)] }
    }

    /// Uniform measure on the given samples, repeated values merged.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        Self::from_masses(samples.iter().map(|&x| (x, 1.0)))
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn locations(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.0)
    }

    pub fn min_location(&self) -> f64 {
        self.atoms[0].0
    }

    pub fn max_location(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].0
    }

    /// `E[f(X)]`.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|&(x, w)| w * f(x)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    pub fn moment(&self, k: i32) -> f64 {
        self.expect(|x| x.powi(k))
    }

    /// Mass of the atom at exactly `x` (zero if absent).
    pub fn mass_at(&self, x: f64) -> f64 {
        self.atoms
            .binary_search_by(|a| a.0.total_cmp(&x))
            .map(|k| self.atoms[k].1)
            .unwrap_or(0.0)
    }

    /// Right-continuous distribution function.
    pub fn cdf(&self, t: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.0 <= t);
        self.atoms[..k].iter().map(|a| a.1).sum::<f64>().min(1.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.min_location() >= 0.0
    }

    /// Push-forward under `x -> s x`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("dilation factor {s} must be positive")));
        }
        Ok(Self { atoms: self.atoms.iter().map(|&(x, w)| (x * s, w)).collect() })
    }

    /// Rescales locations so that the mean is exactly one (up to rounding).
    pub fn normalized_to_unit_mean(&self) -> Result<Self> {
        let m = self.mean();
        if !(m > 0.0) {
            return Err(Error::InvalidMeasure(format!("mean {m} is not positive")));
        }
        // already normalized up to rounding: keep the atoms bit for bit
        if (m - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(self.clone());
        }
        self.dilate(1.0 / m)
    }

    /// Stable 64-bit fingerprint of the atoms (FNV-1a over the bit patterns).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &(x, w) in &self.atoms {
            for b in x.to_bits().to_le_bytes().into_iter().chain(w.to_bits().to_le_bytes()) {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

impl fmt::Display for DiscreteMeasure {
    /// `x1:w1,x2:w2,...` with full precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (x, w)) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}:{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_atoms() {
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![(0.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::new(vec![(1.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::new(vec![(0.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(DiscreteMeasure::new(vec![(0.0, 1.5), (1.0, -0.5)]).is_err());
    }

    #[test]
    fn from_masses_merges_and_normalizes() {
        let m = DiscreteMeasure::from_masses([(2.0, 1.0), (0.5, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(m.atoms(), &[(0.5, 0.25), (2.0, 0.75)]);
        assert_eq!(m.cdf(0.4), 0.0);
        assert_eq!(m.cdf(0.5), 0.25);
        assert_eq!(m.cdf(3.0), 1.0);
        assert_eq!(m.mass_at(2.0), 0.75);
        assert_eq!(m.mass_at(1.0), 0.0);
    }

    #[test]
    fn unit_mean() {
        let m = DiscreteMeasure::new(vec![(1.0, 0.5), (3.0, 0.49), (15.0, 0.01)]).unwrap();
        let n = m.normalized_to_unit_mean().unwrap();
        assert!((n.mean() - 1.0).abs() < 1e-15);
        assert!((n.max_location() - 15.0 / 2.12).abs() < 1e-12);
    }
}
