//! Plain-text `key=value` configuration and the model specs it describes.
//!
//! Entries are separated by newlines or `;`, so the same syntax works in a
//! file and inline on a command line. `#` starts a comment. Model keys:
//!
//! | key      | values                                                     |
//! |----------|------------------------------------------------------------|
//! | `preset` | `delta`, `fig1-red`, `fig1-blue`, `fig2`                   |
//! | `kind`   | `atoms`, `iid`, `two-atom`, `two-scale`                    |
//! | `atoms`  | `x:w,x:w,...` (weights are normalized)                     |
//! | `family` | `one-plus-exponential`, `uniform`, `point`                 |
//! | `rate`, `low`, `high`, `value` | family parameters                    |
//! | `alpha`, `beta` | two-atom law with `alpha > 1 > beta > 0`            |
//! | `bulk`, `hub` | omega rules for two-scale degrees                     |
//! | `hubs`   | number of hub vertices, or `sqrt`                          |
//!
//! ```
//! use cmspectra::config::ModelSpec;
//!
//! let spec: ModelSpec = "kind=atoms; atoms=1:0.5,3:0.49,15:0.01".parse().unwrap();
//! let law = spec.limit_measure(2048).unwrap();
//! assert_eq!(law.len(), 3);
//! assert!((law.mean() - 1.0).abs() < 1e-12);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::degree::{
    build_degree_sequence, DegreeSequence, DegreeSpec, Family, HubCount, OmegaRule, TwoScaleSpec,
};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::support::TwoAtomLaw;

/// Ordered `key -> value` map; later entries override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for raw in text.split(['\n', ';']) {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
        out.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

/// Parses `x:w,x:w,...`; weights need not sum to one.
pub fn parse_atoms(s: &str) -> Result<DiscreteMeasure> {
    let pairs = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, w) = p
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("atom {p:?} is not x:w")))?;
            let num = |t: &str| {
                t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("number {t:?}: {e}")))
            };
            Ok((num(x)?, num(w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::from_masses(pairs)
}

/// A degree model: either a mean-one law scaled by a common omega, or the
/// mixed-scale construction.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Degrees(DegreeSpec),
    TwoScale(TwoScaleSpec),
}

fn number(map: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match map.get(key) {
        Some(v) => v.parse().map_err(|e| Error::Parse(format!("{key}={v:?}: {e}"))),
        None => default.ok_or_else(|| Error::InvalidSpec(format!("missing key {key}"))),
    }
}

fn family(map: &BTreeMap<String, String>) -> Result<Family> {
    let name = map.get("family").map(String::as_str).unwrap_or("one-plus-exponential");
    let f = match name {
        "one-plus-exponential" | "1+exp" => {
            Family::OnePlusExponential { rate: number(map, "rate", Some(1.0))? }
        }
        "uniform" => Family::Uniform {
            low: number(map, "low", Some(0.0))?,
            high: number(map, "high", Some(1.0))?,
        },
        "point" => Family::PointMass { value: number(map, "value", Some(1.0))? },
        other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
    };
    f.validate()?;
    Ok(f)
}

impl ModelSpec {
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "delta" => "kind=atoms; atoms=1:1",
            "fig1-red" => "kind=iid; family=one-plus-exponential; rate=1",
            "fig1-blue" => {
                "kind=two-scale; family=one-plus-exponential; rate=1; bulk=log; hub=sqrt; hubs=sqrt"
            }
            "fig2" => "kind=atoms; atoms=1:0.5,3:0.49,15:0.01",
            other => return Err(Error::InvalidSpec(format!("unknown preset {other:?}"))),
        };
        Self::from_map(&parse_key_values(text)?)
    }

    /// Builds a spec from parsed keys; unrelated keys are ignored.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(p) = map.get("preset") {
            return Self::preset(p);
        }
        let kind = map
            .get("kind")
            .ok_or_else(|| Error::InvalidSpec("missing key kind (or preset)".into()))?;
        match kind.as_str() {
            "atoms" => {
                let atoms = map
                    .get("atoms")
                    .ok_or_else(|| Error::InvalidSpec("kind=atoms needs atoms=x:w,...".into()))?;
                Ok(ModelSpec::Degrees(DegreeSpec::atoms(parse_atoms(atoms)?)?))
            }
            "iid" => Ok(ModelSpec::Degrees(DegreeSpec::iid(family(map)?)?)),
            "two-atom" => {
                let law = TwoAtomLaw::new(number(map, "alpha", None)?, number(map, "beta", None)?)?;
                Ok(ModelSpec::Degrees(DegreeSpec::atoms(law.to_measure())?))
            }
            "two-scale" => {
                let rule = |key: &str, default: OmegaRule| -> Result<OmegaRule> {
                    map.get(key).map_or(Ok(default), |v| v.parse())
                };
                let hubs = match map.get("hubs").map(String::as_str) {
                    None | Some("sqrt") => HubCount::Sqrt,
                    Some(v) => HubCount::Count(
                        v.parse().map_err(|e| Error::Parse(format!("hubs={v:?}: {e}")))?,
                    ),
                };
                Ok(ModelSpec::TwoScale(TwoScaleSpec {
                    family: family(map)?,
                    bulk: rule("bulk", OmegaRule::Log(1.0))?,
                    hub: rule("hub", OmegaRule::Sqrt(1.0))?,
                    hubs,
                }))
            }
            other => Err(Error::InvalidSpec(format!("unknown kind {other:?}"))),
        }
    }

    /// Integer degrees for `n` vertices. The omega rule applies to
    /// [`ModelSpec::Degrees`]; two-scale specs carry their own scales.
    pub fn build(&self, n: usize, omega: OmegaRule, seed: u64) -> Result<DegreeSequence> {
        match self {
            ModelSpec::Degrees(spec) => build_degree_sequence(spec, n, omega.resolve(n), seed),
            ModelSpec::TwoScale(spec) => spec.build(n, seed),
        }
    }

    /// Limit of the normalized degree law. For two-scale specs the hubs are a
    /// vanishing fraction, so the limit is the normalized family law.
    pub fn limit_measure(&self, quantization: usize) -> Result<DiscreteMeasure> {
        match self {
            ModelSpec::Degrees(spec) => spec.limit_measure(quantization),
            ModelSpec::TwoScale(spec) => crate::limit::quantize_measure(&spec.family, quantization),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    /// A bare preset name or a `key=value` list.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('=') {
            Self::from_map(&parse_key_values(s)?)
        } else {
            Self::preset(s.trim())
        }
    }
}

fn fmt_family(f: &Family, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match *f {
        Family::PointMass { value } => write!(out, "family=point; value={value}"),
        Family::OnePlusExponential { rate } => {
            write!(out, "family=one-plus-exponential; rate={rate}")
        }
        Family::Uniform { low, high } => write!(out, "family=uniform; low={low}; high={high}"),
    }
}

/// Canonical `key=value` form, parseable back into an equal spec.
impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Degrees(DegreeSpec::Atoms(m)) => write!(f, "kind=atoms; atoms={m}"),
            ModelSpec::Degrees(DegreeSpec::Iid(fam)) => {
                f.write_str("kind=iid; ")?;
                fmt_family(fam, f)
            }
            ModelSpec::TwoScale(s) => {
                f.write_str("kind=two-scale; ")?;
                fmt_family(&s.family, f)?;
                write!(f, "; bulk={}; hub={}; hubs=", s.bulk, s.hub)?;
                match s.hubs {
                    HubCount::Count(c) => write!(f, "{c}"),
                    HubCount::Sqrt => f.write_str("sqrt"),
                }
            }
        }
    }
}
