//! Double-double arithmetic and polynomials over it, enough to expand and
//! evaluate the numerator of `ξ'` without cancellation trouble.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn signum(self) -> Ordering {
        match self.hi.partial_cmp(&0.0) {
            Some(Ordering::Equal) | None => self.lo.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
            Some(o) => o,
        }
    }

    pub fn abs(self) -> Dd {
        if self.signum() == Ordering::Less { -self } else { self }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Polynomial with double-double coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct DdPoly {
    coef: Vec<Dd>,
}

impl DdPoly {
    pub fn new(mut coef: Vec<Dd>) -> Self {
        while coef.len() > 1 && coef.last().is_some_and(|c| c.signum() == Ordering::Equal) {
            coef.pop();
        }
        if coef.is_empty() {
            coef.push(Dd::ZERO);
        }
        Self { coef }
    }

    pub fn constant(c: Dd) -> Self {
        Self::new(vec![c])
    }

    /// `a + b v`
    pub fn linear(a: Dd, b: Dd) -> Self {
        Self::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn coefficients(&self) -> &[Dd] {
        &self.coef
    }

    pub fn derivative(&self) -> Self {
        if self.coef.len() == 1 {
            return Self::constant(Dd::ZERO);
        }
        Self::new(
            self.coef.iter().enumerate().skip(1).map(|(k, &c)| c * Dd::from(k as f64)).collect(),
        )
    }

    /// Horner evaluation in double-double.
    pub fn eval(&self, v: f64) -> Dd {
        let v = Dd::from(v);
        self.coef.iter().rev().fold(Dd::ZERO, |acc, &c| acc * v + c)
    }

    pub fn scale(&self, c: Dd) -> Self {
        Self::new(self.coef.iter().map(|&a| a * c).collect())
    }
}

impl Add<&DdPoly> for &DdPoly {
    type Output = DdPoly;
    fn add(self, o: &DdPoly) -> DdPoly {
        let n = self.coef.len().max(o.coef.len());
        DdPoly::new(
            (0..n)
                .map(|k| {
                    self.coef.get(k).copied().unwrap_or(Dd::ZERO)
                        + o.coef.get(k).copied().unwrap_or(Dd::ZERO)
                })
                .collect(),
        )
    }
}

impl Mul<&DdPoly> for &DdPoly {
    type Output = DdPoly;
    fn mul(self, o: &DdPoly) -> DdPoly {
        let mut out = vec![Dd::ZERO; self.coef.len() + o.coef.len() - 1];
        for (i, &a) in self.coef.iter().enumerate() {
            for (j, &b) in o.coef.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        DdPoly::new(out)
    }
}

fn sign_at(p: &DdPoly, v: f64) -> Ordering {
    p.eval(v).signum()
}

/// Bisection of a sign change of `p` on `[lo, hi]` down to a relative
/// width of `1e-12`.
fn bisect(p: &DdPoly, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = sign_at(p, lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            return mid;
        }
        match sign_at(p, mid) {
            Ordering::Equal => return mid,
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
}

/// Real roots of odd multiplicity (sign changes) of `p` in `[lo, hi]`,
/// ascending. Critical points are located recursively, so every monotone
/// piece holds at most one root.
pub fn sign_changes_in(p: &DdPoly, lo: f64, hi: f64) -> Vec<f64> {
    if p.degree() == 0 || lo >= hi {
        return Vec::new();
    }
    let mut knots = vec![lo];
    if p.degree() > 1 {
        knots.extend(sign_changes_in(&p.derivative(), lo, hi));
    }
    knots.push(hi);
    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (sa, sb) = (sign_at(p, a), sign_at(p, b));
        let root = match (sa, sb) {
            (Ordering::Equal, _) => Some(a),
            (_, Ordering::Equal) => Some(b),
            (x, y) if x != y => Some(bisect(p, a, b)),
            _ => None,
        };
        if let Some(r) = root {
            if roots.last().is_none_or(|&last| r > last) {
                roots.push(r);
            }
        }
    }
    // keep sign changes only: drop touching roots where the sign is the same on both sides
    roots
        .into_iter()
        .filter(|&r| {
            let eps = 1e-9 * r.abs().max(1.0);
            let (l, h) = ((r - eps).max(lo), (r + eps).min(hi));
            l == lo || h == hi || sign_at(p, l) != sign_at(p, h)
        })
        .collect()
}
