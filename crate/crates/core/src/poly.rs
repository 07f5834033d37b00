//! Univariate polynomials over the rationals with Sturm-sequence root
//! isolation.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{format_rational, rat, ratio, to_f64, Rational};

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "Poly[{}]", c.join(", "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Removes every factor `(x - r)`.
    pub fn deflate(&self, r: &Rational) -> Poly {
        let lin = Poly::new(vec![-r.clone(), Rational::one()]);
        let mut p = self.clone();
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
        }
        p
    }

    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(r.scale(&rat(-1)));
        }
        seq.pop();
        seq
    }

    /// Number of distinct roots in `(a, b)`; `a`, `b` must not be roots.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.is_zero() {
            return 0;
        }
        let seq = self.sturm_sequence();
        variations(&seq, a).saturating_sub(variations(&seq, b))
    }

    /// Disjoint isolating intervals for the distinct roots in `(a, b)`,
    /// ascending. Exact rational roots hit during bisection come back as
    /// degenerate intervals.
    pub fn isolate_roots(&self, a: &Rational, b: &Rational) -> Vec<(Rational, Rational)> {
        let p = self.square_free();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut lo = a.clone();
        let mut hi = b.clone();
        if p.eval(&lo).is_zero() {
            lo = nudge(&p, &lo, &hi, 1);
        }
        if p.eval(&hi).is_zero() {
            hi = nudge(&p, &hi, &lo, 1);
        }
        let seq = p.sturm_sequence();
        isolate(&p, &seq, lo, hi, &mut out);
        out
    }

    /// Distinct roots in `(a, b)` refined to interval width `tol` and
    /// returned as floats.
    pub fn real_roots(&self, a: &Rational, b: &Rational, tol: f64) -> Vec<f64> {
        let p = self.square_free();
        self.isolate_roots(a, b)
            .into_iter()
            .map(|(lo, hi)| refine(&p, lo, hi, tol))
            .collect()
    }

    /// Distinct roots in the open unit interval.
    pub fn unit_interval_roots(&self) -> Vec<f64> {
        if self.is_zero() {
            return Vec::new();
        }
        let p = self.deflate(&Rational::zero()).deflate(&Rational::one());
        p.real_roots(&Rational::zero(), &Rational::one(), 1e-17)
    }

    pub fn count_unit_interval_roots(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let p = self.deflate(&Rational::zero()).deflate(&Rational::one()).square_free();
        p.count_roots(&Rational::zero(), &Rational::one())
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign(&p.eval(x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Moves `x` towards `toward` until it is no longer a root.
fn nudge(p: &Poly, x: &Rational, toward: &Rational, depth: u32) -> Rational {
    let mut step = (toward - x) / rat(1 << depth.min(60));
    loop {
        let y = x + &step;
        if !p.eval(&y).is_zero() {
            // at a simple root the Sturm count is right-continuous
            let between = if &y < x { p.count_roots(&y, x).saturating_sub(1) } else { p.count_roots(x, &y) };
            if between == 0 {
                return y;
            }
        }
        step /= rat(2);
    }
}

fn isolate(p: &Poly, seq: &[Poly], lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
    let n = variations(seq, &lo).saturating_sub(variations(seq, &hi));
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) / rat(2);
    if p.eval(&mid).is_zero() {
        let left = nudge(p, &mid, &lo, 8);
        let right = nudge(p, &mid, &hi, 8);
        isolate(p, seq, lo, left.clone(), out);
        out.push((mid.clone(), mid));
        isolate(p, seq, right, hi, out);
    } else {
        isolate(p, seq, lo, mid.clone(), out);
        isolate(p, seq, mid, hi, out);
    }
}

fn refine(p: &Poly, mut lo: Rational, mut hi: Rational, tol: f64) -> f64 {
    if lo == hi {
        return to_f64(&lo);
    }
    let s_lo = sign(&p.eval(&lo));
    let half = ratio(1, 2);
    for _ in 0..200 {
        if to_f64(&(&hi - &lo)) <= tol {
            break;
        }
        let mid = (&lo + &hi) * &half;
        let s = sign(&p.eval(&mid));
        if s == 0 {
            return to_f64(&mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    to_f64(&((&lo + &hi) * &half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::from_i64(&[1, 1]);
        let q = Poly::from_i64(&[-1, 1]);
        assert_eq!(p.mul(&q), Poly::from_i64(&[-1, 0, 1]));
        assert_eq!(p.add(&q), Poly::from_i64(&[0, 2]));
        assert_eq!(p.sub(&p), Poly::zero());
        let (quot, rem) = Poly::from_i64(&[-1, 0, 1]).div_rem(&q);
        assert_eq!(quot, p);
        assert!(rem.is_zero());
        assert_eq!(Poly::from_i64(&[5, 3, 2]).derivative(), Poly::from_i64(&[3, 4]));
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (x - 1/4)^2 (x - 1/2) (x - 3/4)
        let p = Poly::new(vec![ratio(-1, 4), rat(1)])
            .mul(&Poly::new(vec![ratio(-1, 4), rat(1)]))
            .mul(&Poly::new(vec![ratio(-1, 2), rat(1)]))
            .mul(&Poly::new(vec![ratio(-3, 4), rat(1)]));
        assert_eq!(p.count_unit_interval_roots(), 3);
        let roots = p.unit_interval_roots();
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip([0.25, 0.5, 0.75]) {
            assert!((r - e).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoint_roots_are_deflated() {
        // x^2 (1 - x) (x - 1/3)
        let p = Poly::from_i64(&[0, 0, 1])
            .mul(&Poly::from_i64(&[1, -1]))
            .mul(&Poly::new(vec![ratio(-1, 3), rat(1)]));
        assert_eq!(p.count_unit_interval_roots(), 1);
        let r = p.unit_interval_roots();
        assert!((r[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn irrational_roots() {
        // x^2 + x - 1 has root (sqrt 5 - 1)/2
        let p = Poly::from_i64(&[-1, 1, 1]);
        let r = p.real_roots(&rat(0), &rat(1), 1e-16);
        assert_eq!(r.len(), 1);
        assert!((r[0] - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!(Poly::from_i64(&[1, 0, 1]).unit_interval_roots().is_empty());
    }
}
