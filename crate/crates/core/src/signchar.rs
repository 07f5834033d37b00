//! Sign-characteristic functions `s_{a,b}(l) = l^a (1 - l)^b` on `(0, 1)`.
//!
//! Arithmetic happens in log space, and roots are located in the logit
//! coordinate `u = ln(l / (1 - l))` so that points close to either end of the
//! interval keep full relative precision.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{from_f64, rat, Rational};
use crate::poly::Poly;

/// Logit coordinates beyond this magnitude underflow `l` or `1 - l`.
pub const LOGIT_LIMIT: f64 = 740.0;

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln(l)` at logit coordinate `u`.
pub fn ln_lambda(u: f64) -> f64 {
    -softplus(-u)
}

/// `ln(1 - l)` at logit coordinate `u`.
pub fn ln_one_minus_lambda(u: f64) -> f64 {
    -softplus(u)
}

pub fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

pub fn logit(lambda: f64) -> f64 {
    (lambda / (1.0 - lambda)).ln()
}

fn check_domain(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(lambda))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCharParams {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    /// `a / (a + b)` when an extremum exists.
    pub lambda_star: Option<f64>,
    pub value: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Whole,
    Minus,
    Plus,
}

impl SignCharParams {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        SignCharParams { alpha, beta }
    }

    pub fn is_constant(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }

    /// `ln s` at logit coordinate `u`.
    pub fn ln_eval_logit(&self, u: f64) -> f64 {
        let mut v = 0.0;
        if self.alpha != 0.0 {
            v += self.alpha * ln_lambda(u);
        }
        if self.beta != 0.0 {
            v += self.beta * ln_one_minus_lambda(u);
        }
        v
    }

    /// `d ln s / du = a (1 - l) - b l`.
    pub fn dln_du(&self, u: f64) -> f64 {
        self.alpha * sigmoid(-u) - self.beta * sigmoid(u)
    }

    pub fn ln_eval(&self, lambda: f64) -> Result<f64> {
        check_domain(lambda)?;
        let mut v = 0.0;
        if self.alpha != 0.0 {
            v += self.alpha * lambda.ln();
        }
        if self.beta != 0.0 {
            v += self.beta * (-lambda).ln_1p();
        }
        Ok(v)
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        Ok(self.ln_eval(lambda)?.exp())
    }

    /// `s'(l) = s_{a-1,b-1}(l) (a (1 - l) - b l)`.
    pub fn deriv(&self, lambda: f64) -> Result<f64> {
        check_domain(lambda)?;
        let lin = self.alpha * (1.0 - lambda) - self.beta * lambda;
        if lin == 0.0 {
            return Ok(0.0);
        }
        let shifted = SignCharParams::new(self.alpha - 1.0, self.beta - 1.0).ln_eval(lambda)?;
        Ok(lin.signum() * (shifted + lin.abs().ln()).exp())
    }

    pub fn extremum(&self) -> Extremum {
        let (a, b) = (self.alpha, self.beta);
        if a * b > 0.0 {
            let ls = a / (a + b);
            let value = (a * (a / (a + b)).ln() + b * (b / (a + b)).ln()).exp();
            Extremum {
                kind: if a > 0.0 { ExtremumKind::Max } else { ExtremumKind::Min },
                lambda_star: Some(ls),
                value: Some(value),
            }
        } else {
            Extremum {
                kind: ExtremumKind::None,
                lambda_star: None,
                value: None,
            }
        }
    }

    /// `ln` of the extremal value, when there is one.
    pub fn ln_extremum(&self) -> Option<f64> {
        let (a, b) = (self.alpha, self.beta);
        (a * b > 0.0).then(|| a * (a / (a + b)).ln() + b * (b / (a + b)).ln())
    }

    /// Logit coordinate of the extremum.
    pub fn logit_star(&self) -> Option<f64> {
        (self.alpha * self.beta > 0.0).then(|| (self.alpha / self.beta).ln())
    }

    /// Open range of `ln s` over the whole interval, as `(lower, upper)`.
    pub fn ln_range(&self) -> (f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        let at0 = if a > 0.0 {
            f64::NEG_INFINITY
        } else if a < 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        let at1 = if b > 0.0 {
            f64::NEG_INFINITY
        } else if b < 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        match self.ln_extremum() {
            Some(e) if a > 0.0 => (f64::NEG_INFINITY, e),
            Some(e) => (e, f64::INFINITY),
            None => (at0.min(at1), at0.max(at1)),
        }
    }
}

pub fn sc_eval(p: SignCharParams, lambda: f64) -> Result<f64> {
    p.eval(lambda)
}

pub fn sc_deriv(p: SignCharParams, lambda: f64) -> Result<f64> {
    p.deriv(lambda)
}

pub fn sc_extremum(p: SignCharParams) -> Extremum {
    p.extremum()
}

/// Exact extremal value for integer exponents of equal sign.
pub fn sc_extremum_exact(alpha: &Rational, beta: &Rational) -> Option<Rational> {
    if !(alpha.is_integer() && beta.is_integer()) || (alpha * beta).is_negative() || (alpha * beta).is_zero() {
        return None;
    }
    let sum = alpha + beta;
    let pow = |base: Rational, e: &Rational| -> Rational {
        let k = e.to_integer().to_i32().expect("small exponent");
        num_traits::pow::Pow::pow(base, k)
    };
    Some(pow(alpha / &sum, alpha) * pow(beta / &sum, beta))
}

/// Bisection for a monotone `phi` on `[lo, hi]` in logit space, followed by
/// one Newton polish. `increasing` gives the direction of `phi`.
pub(crate) fn bisect_logit(
    phi: impl Fn(f64) -> f64,
    dphi: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
) -> f64 {
    for _ in 0..400 {
        if hi - lo <= 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = phi(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let d = dphi(u);
    if d != 0.0 && d.is_finite() {
        let polished = u - phi(u) / d;
        if polished >= lo && polished <= hi && phi(polished).abs() <= phi(u).abs() {
            return polished;
        }
    }
    u
}

/// Logit coordinate of `r_{a,b}(y)` on the requested branch.
pub fn sc_root_logit(p: SignCharParams, y: f64, branch: Branch) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::OutOfRange { value: y, bound: 0.0 });
    }
    sc_root_logit_ln(p, y.ln(), branch)
}

/// As [`sc_root_logit`], with the target given as `ln y`.
pub fn sc_root_logit_ln(p: SignCharParams, ln_y: f64, branch: Branch) -> Result<f64> {
    if p.is_constant() {
        return Err(Error::DegenerateExponents("s_{0,0} is constant".into()));
    }
    let phi = |u: f64| p.ln_eval_logit(u) - ln_y;
    let dphi = |u: f64| p.dln_du(u);
    let (lo_range, hi_range) = p.ln_range();
    match (p.logit_star(), branch) {
        (None, Branch::Whole) => {
            if ln_y <= lo_range || ln_y >= hi_range {
                let bound = if ln_y <= lo_range { lo_range } else { hi_range };
                return Err(Error::OutOfRange {
                    value: ln_y.exp(),
                    bound: bound.exp(),
                });
            }
            let increasing = p.alpha > 0.0 || p.beta < 0.0;
            let (lo, hi) = expand_bracket(&phi, increasing, -1.0, 1.0);
            Ok(bisect_logit(phi, dphi, lo, hi, increasing))
        }
        (Some(star), Branch::Minus | Branch::Plus) => {
            let ext = p.ln_extremum().unwrap();
            let is_max = p.alpha > 0.0;
            let slack = 1e-12 * ext.abs().max(1.0);
            let beyond = if is_max { ln_y - ext } else { ext - ln_y };
            if beyond > slack {
                return Err(Error::OutOfRange {
                    value: ln_y.exp(),
                    bound: ext.exp(),
                });
            }
            if beyond >= -slack {
                return Ok(star);
            }
            // minus branch: increasing for a max, decreasing for a min
            let increasing = (branch == Branch::Minus) == is_max;
            let (lo, hi) = if branch == Branch::Minus {
                (expand_down(&phi, increasing, star), star)
            } else {
                (star, expand_up(&phi, increasing, star))
            };
            Ok(bisect_logit(phi, dphi, lo, hi, increasing))
        }
        _ => Err(Error::Unsupported(format!(
            "{branch:?} branch of s_{{{},{}}}",
            p.alpha, p.beta
        ))),
    }
}

fn expand_down(phi: &impl Fn(f64) -> f64, increasing: bool, start: f64) -> f64 {
    let mut step = 1.0;
    let mut lo = start - step;
    while lo > -LOGIT_LIMIT && ((phi(lo) > 0.0) == increasing) {
        step *= 2.0;
        lo = (start - step).max(-LOGIT_LIMIT);
    }
    lo
}

fn expand_up(phi: &impl Fn(f64) -> f64, increasing: bool, start: f64) -> f64 {
    let mut step = 1.0;
    let mut hi = start + step;
    while hi < LOGIT_LIMIT && ((phi(hi) < 0.0) == increasing) {
        step *= 2.0;
        hi = (start + step).min(LOGIT_LIMIT);
    }
    hi
}

fn expand_bracket(phi: &impl Fn(f64) -> f64, increasing: bool, lo: f64, hi: f64) -> (f64, f64) {
    (expand_down(phi, increasing, lo), expand_up(phi, increasing, hi))
}

/// `r_{a,b}(y)`, `r^-_{a,b}(y)` or `r^+_{a,b}(y)`.
pub fn sc_root(p: SignCharParams, y: f64, branch: Branch) -> Result<f64> {
    Ok(sigmoid(sc_root_logit(p, y, branch)?))
}

/// A positive root of a univariate trinomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrinomialRoot {
    pub x: f64,
    pub lambda: f64,
    pub multiplicity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrinomialSolution {
    pub roots: Vec<TrinomialRoot>,
    /// Set when the exponents have opposite signs.
    pub discriminant: Option<f64>,
}

impl TrinomialSolution {
    pub fn count_with_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }
}

/// Relative width of the band around zero in which the discriminant counts
/// as zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Positive solutions of `c1 x^b1 + c2 x^b2 = 1`.
pub fn trinomial_solve(b1: f64, b2: f64, c1: f64, c2: f64) -> Result<TrinomialSolution> {
    if b1 == 0.0 || b2 == 0.0 || b1 == b2 || !b1.is_finite() || !b2.is_finite() {
        return Err(Error::DegenerateExponents(format!("b1 = {b1}, b2 = {b2}")));
    }
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::NotInCoefficientCone("c1, c2 must be positive".into()));
    }
    let b = b1 / b2;
    // y = (l, 1 - l, 1) on the polytope; l = c1 x^b1 and 1 - l = c2 x^b2
    let to_x = |u: f64| {
        if u <= 0.0 {
            ((ln_lambda(u) - c1.ln()) / b1).exp()
        } else {
            ((ln_one_minus_lambda(u) - c2.ln()) / b2).exp()
        }
    };
    let root = |u: f64, multiplicity: u8| TrinomialRoot {
        x: to_x(u),
        lambda: sigmoid(u),
        multiplicity,
    };
    let mut out = if b > 0.0 {
        let p = SignCharParams::new(1.0, -b);
        let u = sc_root_logit_ln(p, c1.ln() - b * c2.ln(), Branch::Whole)?;
        TrinomialSolution {
            roots: vec![root(u, 1)],
            discriminant: None,
        }
    } else {
        let nb = -b;
        let p = SignCharParams::new(1.0, nb);
        let ln_max = p.ln_extremum().unwrap();
        let ln_t = c1.ln() + nb * c2.ln();
        let rel = -(ln_t - ln_max).exp_m1();
        let disc = ln_max.exp() * rel;
        let roots = if rel.abs() <= DISCRIMINANT_TOL {
            vec![root(p.logit_star().unwrap(), 2)]
        } else if rel > 0.0 {
            vec![
                root(sc_root_logit_ln(p, ln_t, Branch::Minus)?, 1),
                root(sc_root_logit_ln(p, ln_t, Branch::Plus)?, 1),
            ]
        } else {
            Vec::new()
        };
        TrinomialSolution {
            roots,
            discriminant: Some(disc),
        }
    };
    out.roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(out)
}

/// `W(s_1, ..., s_n) = s_{abar - d, bbar - d} * p_d`, `d = C(n, 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskianForm {
    pub shift: (f64, f64),
    pub poly: Poly,
    pub d: usize,
}

impl WronskianForm {
    /// Distinct zeros on `(0, 1)`; `None` when the Wronskian vanishes
    /// identically.
    pub fn zeros(&self) -> Option<usize> {
        (!self.poly.is_zero()).then(|| self.poly.count_unit_interval_roots())
    }

    pub fn zero_locations(&self) -> Vec<f64> {
        self.poly.unit_interval_roots()
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let s = SignCharParams::new(self.shift.0, self.shift.1).eval(lambda)?;
        Ok(s * self.poly.eval_f64(lambda))
    }
}

/// Polynomial factor `P_k` of the `k`-th derivative,
/// `s^{(k)} = s_{a-k,b-k} P_k`.
pub fn derivative_factor(alpha: &Rational, beta: &Rational, k: usize) -> Poly {
    let lambda = Poly::x();
    let one_minus = Poly::from_i64(&[1, -1]);
    let lam_one_minus = lambda.mul(&one_minus);
    let mut p = Poly::constant(Rational::one());
    for j in 0..k {
        let j = rat(j as i64);
        let lin = one_minus.scale(&(alpha - &j)).sub(&lambda.scale(&(beta - &j)));
        p = lin.mul(&p).add(&lam_one_minus.mul(&p.derivative()));
    }
    p
}

/// Exact Wronskian form for up to three functions with rational exponents.
pub fn wronskian_exact(params: &[(Rational, Rational)]) -> Result<WronskianForm> {
    let n = params.len();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("Wronskian of {n} functions")));
    }
    let d = n * (n - 1) / 2;
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|k| params.iter().map(|(a, b)| derivative_factor(a, b, k)).collect())
        .collect();
    let poly = determinant(&entries);
    let abar: Rational = params.iter().fold(Rational::zero(), |s, (a, _)| s + a);
    let bbar: Rational = params.iter().fold(Rational::zero(), |s, (_, b)| s + b);
    let dd = rat(d as i64);
    Ok(WronskianForm {
        shift: (
            (abar - &dd).to_f64().unwrap_or(f64::NAN),
            (bbar - &dd).to_f64().unwrap_or(f64::NAN),
        ),
        poly,
        d,
    })
}

pub fn wronskian_signchar(params: &[SignCharParams]) -> Result<WronskianForm> {
    let exact: Option<Vec<(Rational, Rational)>> = params
        .iter()
        .map(|p| Some((from_f64(p.alpha)?, from_f64(p.beta)?)))
        .collect();
    wronskian_exact(&exact.ok_or_else(|| Error::DegenerateExponents("non-finite exponent".into()))?)
}

fn determinant(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        3 => {
            let minor = |c1: usize, c2: usize| m[1][c1].mul(&m[2][c2]).sub(&m[1][c2].mul(&m[2][c1]));
            m[0][0]
                .mul(&minor(1, 2))
                .sub(&m[0][1].mul(&minor(0, 2)))
                .add(&m[0][2].mul(&minor(0, 1)))
        }
        _ => unreachable!("size checked by caller"),
    }
}

/// Signs at the left endpoint `a` and right endpoint `b`; limits count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointSigns {
    pub f_a: i8,
    pub f_b: i8,
    /// `0` when unknown.
    pub fprime_a: i8,
}

/// Tightest of the three Rolle-type bounds on `Z(f)` given `Z(f')`.
pub fn rolle_refined_bound(zfprime: usize, endpoints: Option<EndpointSigns>) -> usize {
    let base = zfprime + 1;
    let Some(e) = endpoints else {
        return base;
    };
    let ends = e.f_a * e.f_b;
    let even = zfprime % 2 == 0;
    if e.f_a * e.fprime_a > 0 && ((even && ends < 0) || (!even && ends > 0)) {
        return zfprime.saturating_sub(1);
    }
    if (even && ends > 0) || (!even && ends < 0) {
        return zfprime;
    }
    base
}

/// `n - 1 + Z(W_n) + Z(W_{n-1}) + 2 sum_{i <= n-2} Z(W_i)`.
pub fn koiran_bound(w: &[usize]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let last = w[n - 1];
    let second = if n >= 2 { w[n - 2] } else { 0 };
    let rest: usize = w.iter().take(n.saturating_sub(2)).sum();
    n - 1 + last + second + 2 * rest
}
