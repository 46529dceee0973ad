//! Degree laws, degree sequences and their normalization.
//!
//! Integer degrees are obtained as `floor(omega * D)` where `D` is a
//! normalized (mean one) degree. Rounding to the nearest integer would be an
//! equally valid reading of the integer-part bracket; floor is used
//! throughout. When the degree sum is odd the last vertex gets one extra
//! half-edge, which never creates a zero degree.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Named continuous (or degenerate) laws for i.i.d. degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    PointMass { value: f64 },
    /// `1 + Exp(rate)`.
    OnePlusExponential { rate: f64 },
    Uniform { low: f64, high: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::PointMass { value } => value > 0.0 && value.is_finite(),
            Family::OnePlusExponential { rate } => rate > 0.0 && rate.is_finite(),
            Family::Uniform { low, high } => {
                low >= 0.0 && high > low && high.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("invalid parameters for {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::OnePlusExponential { rate } => 1.0 + 1.0 / rate,
            Family::Uniform { low, high } => 0.5 * (low + high),
        }
    }

    /// Raw (unnormalized) draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::OnePlusExponential { rate } => {
                1.0 + Exp::new(rate).expect("validated rate").sample(rng)
            }
            Family::Uniform { low, high } => rng.random_range(low..high),
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::OnePlusExponential { rate } => 1.0 - (-p).ln_1p() / rate,
            Family::Uniform { low, high } => low + p * (high - low),
        }
    }

    /// `E[X | Q(p0) <= X < Q(p1)]` for `0 <= p0 < p1 <= 1`.
    pub fn slab_mean(&self, p0: f64, p1: f64) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::Uniform { .. } => 0.5 * (self.quantile(p0) + self.quantile(p1)),
            Family::OnePlusExponential { rate } => {
                // Exp(rate) restricted to [a, b]: survival masses s0 = 1-p0, s1 = 1-p1.
                let a = -(-p0).ln_1p() / rate;
                let s0 = 1.0 - p0;
                let s1 = 1.0 - p1;
                let body = if p1 >= 1.0 {
                    a + 1.0 / rate
                } else {
                    let b = -(-p1).ln_1p() / rate;
                    1.0 / rate + (a * s0 - b * s1) / (s0 - s1)
                };
                1.0 + body
            }
        }
    }
}

/// Law of the normalized degree `D̂` (mean one).
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeSpec {
    /// Finitely many normalized degree values with their frequencies.
    Atoms(DiscreteMeasure),
    /// `D̂_i = X_i / E X` with `X_i` i.i.d. from the family.
    Iid(Family),
}

impl DegreeSpec {
    /// Atomic law rescaled to unit mean.
    pub fn atoms(m: DiscreteMeasure) -> Result<Self> {
        if !m.is_nonnegative() {
            return Err(Error::InvalidSpec("degree atoms must be nonnegative".into()));
        }
        let m = m
            .normalized_to_unit_mean()
            .map_err(|_| Error::InvalidSpec("degree law with zero mean".into()))?;
        Ok(DegreeSpec::Atoms(m))
    }

    pub fn iid(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(DegreeSpec::Iid(family))
    }

    /// The limiting normalized-degree law as a finite measure; continuous
    /// families are quantized into `quantization` slabs.
    pub fn limit_measure(&self, quantization: usize) -> Result<DiscreteMeasure> {
        match self {
            DegreeSpec::Atoms(m) => Ok(m.clone()),
            DegreeSpec::Iid(f) => crate::limit::quantize_measure(f, quantization),
        }
    }

    /// Normalized degrees for `n` vertices. Atomic laws are apportioned
    /// deterministically (largest remainder, ascending atoms); i.i.d. laws
    /// are sampled.
    fn normalized_degrees(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            DegreeSpec::Atoms(m) => {
                apportion(n, m).into_iter().flat_map(|(x, c)| std::iter::repeat_n(x, c)).collect()
            }
            DegreeSpec::Iid(f) => {
                let mean = f.mean();
                (0..n).map(|_| f.sample(rng) / mean).collect()
            }
        }
    }
}

/// Hamilton apportionment of `n` vertices to the atoms of `m`.
fn apportion(n: usize, m: &DiscreteMeasure) -> Vec<(f64, usize)> {
    let quotas: Vec<f64> = m.atoms().iter().map(|a| a.1 * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &k in order.iter().take(n.saturating_sub(assigned)) {
        counts[k] += 1;
    }
    m.atoms().iter().map(|a| a.0).zip(counts).collect()
}

/// How the scale `omega` is chosen from `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OmegaRule {
    Value(f64),
    /// `factor * sqrt(n)`
    Sqrt(f64),
    /// `factor * ln(n)`
    Log(f64),
    /// `ceil(sqrt(n))`
    CeilSqrt,
}

impl OmegaRule {
    pub fn resolve(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            OmegaRule::Value(v) => v,
            OmegaRule::Sqrt(c) => c * nf.sqrt(),
            OmegaRule::Log(c) => c * nf.ln(),
            OmegaRule::CeilSqrt => nf.sqrt().ceil(),
        }
    }
}

impl std::str::FromStr for OmegaRule {
    type Err = Error;

    /// Accepts `3.5`, `sqrt`, `2*sqrt`, `log`, `0.5*log`, `ceil-sqrt`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (factor, rule) = match s.split_once('*') {
            Some((f, r)) => (
                f.trim().parse::<f64>().map_err(|e| Error::Parse(format!("omega factor {f:?}: {e}")))?,
                r.trim(),
            ),
            None => (1.0, s),
        };
        match rule {
            "sqrt" => Ok(OmegaRule::Sqrt(factor)),
            "log" => Ok(OmegaRule::Log(factor)),
            "ceil-sqrt" if factor == 1.0 => Ok(OmegaRule::CeilSqrt),
            _ => rule
                .parse::<f64>()
                .map(|v| OmegaRule::Value(factor * v))
                .map_err(|_| Error::Parse(format!("unrecognized omega rule {s:?}"))),
        }
    }
}

impl std::fmt::Display for OmegaRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            OmegaRule::Value(v) => write!(f, "{v}"),
            OmegaRule::Sqrt(c) => write!(f, "{c}*sqrt"),
            OmegaRule::Log(c) => write!(f, "{c}*log"),
            OmegaRule::CeilSqrt => f.write_str("ceil-sqrt"),
        }
    }
}

/// Integer degrees together with `omega = 2|E|/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    omega: f64,
}

impl DegreeSequence {
    /// Requires an even degree sum. An all-zero sequence is accepted (it
    /// describes the empty graph) and has `omega == 0`.
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegrees("no vertices".into()));
        }
        let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
        if total % 2 != 0 {
            return Err(Error::InvalidDegrees(format!("odd degree sum {total}")));
        }
        let omega = total as f64 / degrees.len() as f64;
        Ok(Self { degrees, omega })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().map(|&d| u64::from(d)).sum()
    }

    /// `|E| = total / 2`, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.total() / 2
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for d in &self.degrees {
            writeln!(w, "{d}")?;
        }
        Ok(())
    }

    /// Reads one integer per line; blank lines and `#` comments are skipped.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut degrees = Vec::new();
        for line in r.lines() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            degrees.push(t.parse::<u32>().map_err(|e| Error::Parse(format!("degree {t:?}: {e}")))?);
        }
        Self::new(degrees)
    }
}

fn finish_sequence(mut degrees: Vec<u32>) -> Result<DegreeSequence> {
    let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    if total == 0 {
        return Err(Error::NoEdges);
    }
    if total % 2 == 1 {
        *degrees.last_mut().expect("n >= 2") += 1;
    }
    DegreeSequence::new(degrees)
}

fn floor_degree(x: f64) -> Result<u32> {
    let d = x.floor();
    if !(0.0..=f64::from(u32::MAX)).contains(&d) {
        return Err(Error::InvalidDegrees(format!("degree {x} out of range")));
    }
    Ok(d as u32)
}

/// `D_i = floor(omega_target * D̂_i)`, last degree bumped if the sum is odd,
/// `omega` recomputed from the realized degrees.
pub fn build_degree_sequence(
    spec: &DegreeSpec,
    n: usize,
    omega_target: f64,
    seed: u64,
) -> Result<DegreeSequence> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    if !(omega_target >= 1.0 && omega_target.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega_target = {omega_target} must be >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degrees = spec
        .normalized_degrees(n, &mut rng)
        .into_iter()
        .map(|d| floor_degree(omega_target * d))
        .collect::<Result<Vec<_>>>()?;
    finish_sequence(degrees)
}

/// Number of high-degree vertices in a [`TwoScaleSpec`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HubCount {
    Count(usize),
    /// `ceil(sqrt(n))`
    Sqrt,
}

/// Mixed-scale degrees: `D_i = floor(bulk(n) * X_i)` for all but the last
/// `hubs` vertices, which get `floor(hub(n) * X_i)`; `X_i` i.i.d. from
/// `family` (not normalized).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoScaleSpec {
    pub family: Family,
    pub bulk: OmegaRule,
    pub hub: OmegaRule,
    pub hubs: HubCount,
}

impl TwoScaleSpec {
    pub fn hub_count(&self, n: usize) -> usize {
        match self.hubs {
            HubCount::Count(c) => c.min(n),
            HubCount::Sqrt => ((n as f64).sqrt().ceil() as usize).min(n),
        }
    }

    pub fn build(&self, n: usize, seed: u64) -> Result<DegreeSequence> {
        self.family.validate()?;
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
        }
        let hubs = self.hub_count(n);
        let (bulk, hub) = (self.bulk.resolve(n), self.hub.resolve(n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degrees = (0..n)
            .map(|i| {
                let scale = if i >= n - hubs { hub } else { bulk };
                floor_degree(scale * self.family.sample(&mut rng))
            })
            .collect::<Result<Vec<_>>>()?;
        finish_sequence(degrees)
    }
}

/// Empirical law of `degrees / omega`.
pub fn degree_esd(seq: &DegreeSequence) -> Result<DiscreteMeasure> {
    if seq.omega() <= 0.0 {
        return Err(Error::NoEdges);
    }
    let omega = seq.omega();
    DiscreteMeasure::from_masses(seq.degrees().iter().map(|&d| (f64::from(d) / omega, 1.0)))
}

/// Size-biased law: weight at `x` becomes `x w(x) / mean`; the atom at zero
/// disappears.
pub fn size_bias(m: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    if !m.is_nonnegative() {
        return Err(Error::InvalidMeasure("size bias needs a law on [0, inf)".into()));
    }
    let mean = m.mean();
    if !(mean > 0.0) {
        return Err(Error::InvalidMeasure("size bias of a zero-mean law".into()));
    }
    DiscreteMeasure::from_masses(m.atoms().iter().map(|&(x, w)| (x, x * w / mean)))
}
