use crate::degree::Family;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Atoms used for continuous degree laws unless told otherwise.
pub const DEFAULT_QUANTIZATION: usize = 2048;

/// `m` equal-probability quantile slabs, each replaced by its conditional
/// mean, then rescaled to mean one.
pub fn quantize_measure(family: &Family, m: usize) -> Result<DiscreteMeasure> {
    family.validate()?;
    if m < 2 {
        return Err(Error::InvalidArgument(format!("quantization m = {m} must be >= 2")));
    }
    if let Family::PointMass { .. } = family {
        return Ok(DiscreteMeasure::point_mass(1.0));
    }
    let mf = m as f64;
    let atoms = (0..m).map(|k| (family.slab_mean(k as f64 / mf, (k + 1) as f64 / mf), 1.0));
    DiscreteMeasure::from_masses(atoms)?.normalized_to_unit_mean()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = quantize_measure(&Family::PointMass { value: 3.0 }, 16).unwrap();
        assert_eq!(p.atoms(), &[(1.0, 1.0)]);

        let u = quantize_measure(&Family::Uniform { low: 0.0, high: 2.0 }, 2).unwrap();
        assert_eq!(u.atoms(), &[(0.5, 0.5), (1.5, 0.5)]);

        let e = quantize_measure(&Family::OnePlusExponential { rate: 1.0 }, 2048).unwrap();
        assert_eq!(e.len(), 2048);
        assert!((e.mean() - 1.0).abs() < 1e-9);
        // quantization barely moves the mean before renormalization
        assert!((e.min_location() - 0.5).abs() < 1e-3);

        assert!(quantize_measure(&Family::Uniform { low: 0.0, high: 2.0 }, 1).is_err());
        assert!(quantize_measure(&Family::OnePlusExponential { rate: -1.0 }, 4).is_err());
    }
}
