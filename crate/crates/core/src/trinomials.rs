//! Solvers and bounds for the trinomial families: segment systems (n
//! overlapping trinomials in n + 2 monomials), curves of dependency one,
//! two trinomials in two variables, and t-nomial bounds.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{build_aux, lift_solution, lift_unchecked, AuxMatrices, ProblemInstance};
use crate::geometry::{segment_normal_form, SegmentNormalForm};
use crate::linalg::{from_f64, rat, to_f64, RatMatrix, Rational};
use crate::poly::Poly;
use crate::signchar::{
    ln_lambda, ln_one_minus_lambda, sc_root_logit_ln, sigmoid, softplus, trinomial_solve, wronskian_exact,
    Branch, SignCharParams, TrinomialSolution, LOGIT_LIMIT,
};

/// Plain bisection of a continuous `h` on `[lo, hi]` with a sign change.
fn bisect(h: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_negative = h(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `h` on the pieces `[lo, b_1], [b_1, b_2], ..., [b_k, hi]`, on each
/// of which `h` is assumed monotone.
fn roots_on_pieces(h: &impl Fn(f64) -> f64, breaks: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut knots = vec![lo];
    knots.extend(breaks.iter().copied().filter(|b| *b > lo && *b < hi));
    knots.push(hi);
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (h(w[0]), h(w[1]));
        if a.is_nan() || b.is_nan() {
            continue;
        }
        if a * b < 0.0 {
            out.push(bisect(h, w[0], w[1]));
        }
    }
    out
}

/// Number of sign changes, zeros skipped.
pub fn sign_variations(values: &[f64]) -> usize {
    let signs: Vec<bool> = values.iter().filter(|v| **v != 0.0).map(|v| *v > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `c1 u + c2 u^k = 1` in the single monomial `u = x^direction`, obtained
/// when the two non-constant exponent vectors of a trinomial are parallel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnivariateReduction {
    /// Exponents `(1, k)` of `u`.
    pub exponents: (f64, f64),
    pub coefficients: (f64, f64),
    /// Exponent vector of `u` in the original variables.
    pub direction: Vec<f64>,
    /// Positive roots `u`, when the reduced trinomial is nondegenerate.
    pub roots: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Segment systems

/// A system whose coefficient kernel is `c o im(1, q)` and whose dependency
/// subspace is spanned by a single `b`. Vectors are in sorted order.
#[derive(Clone, Debug)]
pub struct SegmentProblem {
    pub normal_form: SegmentNormalForm,
    pub b: Vec<f64>,
    pub b_exact: Option<Vec<Rational>>,
    /// Sorted positions grouped by equal `q`.
    pub groups: Vec<Vec<usize>>,
    pub q_tilde: Vec<Rational>,
    pub b_tilde: Vec<f64>,
    /// `s~_i`, `i = 1..k-1`.
    pub partial_sums: Vec<f64>,
    /// `ln y*` with `y* = prod (c_i / cbar_i)^{b_i}`.
    pub ln_target: f64,
    instance: ProblemInstance,
    aux: AuxMatrices,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRoot {
    pub t: f64,
    pub multiplicity: u8,
    /// Point of the coefficient cone, original column order.
    pub y: Vec<f64>,
    pub x: Vec<f64>,
}

/// `ln(1 + q tanh w)`.
fn ln_one_plus_q_tanh(q: f64, w: f64) -> f64 {
    let lp = std::f64::consts::LN_2 - softplus(-2.0 * w);
    let lm = std::f64::consts::LN_2 - softplus(2.0 * w);
    // 1 + q t = (1 + q)(1 + t)/2 + (1 - q)(1 - t)/2
    let a = if q > -1.0 { (0.5 * (1.0 + q)).ln() + lp } else { f64::NEG_INFINITY };
    let b = if q < 1.0 { (0.5 * (1.0 - q)).ln() + lm } else { f64::NEG_INFINITY };
    let top = a.max(b);
    top + ((a - top).exp() + (b - top).exp()).ln()
}

/// `w` beyond which `t = tanh w` is indistinguishable from `+-1` in `1 + q t`.
const SEGMENT_W_LIMIT: f64 = 350.0;

impl SegmentProblem {
    pub fn new(p: &ProblemInstance) -> Result<Self> {
        if p.num_classes() != 1 {
            return Err(Error::Shape(format!("segment systems have one class, found {}", p.num_classes())));
        }
        let aux = build_aux(p)?;
        if aux.d != 1 {
            return Err(Error::Shape(format!("segment systems have dependency 1, found {}", aux.d)));
        }
        let nf = segment_normal_form(&p.a)?;
        let b = nf.permute(&aux.g_prime.column(0).iter().cloned().collect::<Vec<f64>>());
        let b_exact = aux.exact.as_ref().map(|e| nf.permute(&e.g_prime.column(0)));

        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..nf.q.len() {
            match groups.last_mut() {
                Some(g) if nf.q[g[0]] == nf.q[k] => g.push(k),
                _ => groups.push(vec![k]),
            }
        }
        let q_tilde: Vec<Rational> = groups.iter().map(|g| nf.q[g[0]].clone()).collect();
        let b_tilde: Vec<f64> = match &b_exact {
            Some(be) => groups
                .iter()
                .map(|g| to_f64(&g.iter().fold(Rational::zero(), |s, &k| s + &be[k])))
                .collect(),
            None => groups.iter().map(|g| g.iter().map(|&k| b[k]).sum()).collect(),
        };
        let scale = b.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let partial_sums: Vec<f64> = match &b_exact {
            Some(be) => {
                let mut acc = Rational::zero();
                groups[..groups.len() - 1]
                    .iter()
                    .map(|g| {
                        for &k in g {
                            acc += &be[k];
                        }
                        to_f64(&acc)
                    })
                    .collect()
            }
            None => {
                let mut acc = 0.0;
                b_tilde[..b_tilde.len() - 1]
                    .iter()
                    .map(|x| {
                        acc += x;
                        if acc.abs() <= 1e-12 * scale {
                            0.0
                        } else {
                            acc
                        }
                    })
                    .collect()
            }
        };
        let c_sorted = nf.permute(&p.c);
        let ln_target = (0..b.len())
            .filter(|&k| b[k] != 0.0)
            .map(|k| b[k] * (c_sorted[k].ln() - to_f64(&nf.c[k]).ln()))
            .sum();
        Ok(SegmentProblem {
            normal_form: nf,
            b,
            b_exact,
            groups,
            q_tilde,
            b_tilde,
            partial_sums,
            ln_target,
            instance: p.clone(),
            aux,
        })
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    /// `ln f(tanh w)`.
    pub fn ln_f_w(&self, w: f64) -> f64 {
        self.q_tilde
            .iter()
            .zip(&self.b_tilde)
            .filter(|(_, b)| **b != 0.0)
            .map(|(q, b)| b * ln_one_plus_q_tanh(to_f64(q), w))
            .sum()
    }

    /// `ln f(t)` for `t` in `(-1, 1)`.
    pub fn ln_f(&self, t: f64) -> f64 {
        self.ln_f_w(t.atanh())
    }

    /// Numerator of `g(t) = sum b~_k q~_k / (1 + t q~_k)` over the common
    /// denominator.
    pub fn g_numerator(&self) -> Poly {
        let b_tilde: Vec<Rational> = match &self.b_exact {
            Some(be) => self
                .groups
                .iter()
                .map(|g| g.iter().fold(Rational::zero(), |s, &k| s + &be[k]))
                .collect(),
            None => self.b_tilde.iter().map(|x| from_f64(*x).unwrap_or_else(Rational::zero)).collect(),
        };
        let linear: Vec<Poly> = self
            .q_tilde
            .iter()
            .map(|q| Poly::new(vec![rat(1), q.clone()]))
            .collect();
        let mut total = Poly::zero();
        for k in 0..linear.len() {
            let mut term = Poly::constant(&b_tilde[k] * &self.q_tilde[k]);
            for (j, l) in linear.iter().enumerate() {
                if j != k {
                    term = term.mul(l);
                }
            }
            total = total.add(&term);
        }
        total
    }

    /// `y` in original column order for the parameter `w`, `t = tanh w`.
    fn y_at(&self, w: f64) -> Vec<f64> {
        let nf = &self.normal_form;
        let sorted: Vec<f64> = nf
            .q
            .iter()
            .zip(&nf.c)
            .map(|(q, c)| (to_f64(c).ln() + ln_one_plus_q_tanh(to_f64(q), w)).exp())
            .collect();
        nf.unpermute(&sorted)
    }
}

/// `1 + sgnvar(s~_1, ..., s~_{k-1})`.
pub fn segment_rule_of_signs(sp: &SegmentProblem) -> usize {
    1 + sign_variations(&sp.partial_sums)
}

pub fn segment_solve(sp: &SegmentProblem) -> Result<Vec<SegmentRoot>> {
    let numerator = sp.g_numerator();
    let phi = |w: f64| sp.ln_f_w(w) - sp.ln_target;
    let tol = 1e-12 * sp.ln_target.abs().max(1.0);
    if numerator.is_zero() {
        return if phi(0.0).abs() <= tol {
            Err(Error::InfiniteSolutions)
        } else {
            Ok(Vec::new())
        };
    }
    let critical: Vec<f64> = numerator
        .real_roots(&rat(-1), &rat(1), 1e-17)
        .into_iter()
        .filter(|t| t.abs() < 1.0)
        .map(f64::atanh)
        .collect();
    let mut roots: Vec<(f64, u8)> = roots_on_pieces(&phi, &critical, -SEGMENT_W_LIMIT, SEGMENT_W_LIMIT)
        .into_iter()
        .map(|w| (w, 1))
        .collect();
    for &w in &critical {
        if phi(w).abs() <= tol {
            roots.push((w, 2));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|b, a| {
        if (a.0.tanh() - b.0.tanh()).abs() < 1e-10 {
            a.1 = 2;
            true
        } else {
            false
        }
    });
    roots
        .into_iter()
        .map(|(w, multiplicity)| {
            let y = sp.y_at(w);
            let x = lift_solution(&sp.instance, &sp.aux, &y)?;
            Ok(SegmentRoot {
                t: w.tanh(),
                multiplicity,
                y,
                x,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Curves of dependency one

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda: [f64; 2],
    /// Logit coordinates of `lambda`, kept for accurate lifting near the
    /// boundary.
    pub logit: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub points: Vec<CurvePoint>,
    pub closed: bool,
}

/// Solution set of `s_L(l1) = c* s_R(l2)` on the open unit square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDescription {
    pub left: SignCharParams,
    pub right: SignCharParams,
    pub c_star: f64,
    pub components: Vec<CurveComponent>,
    /// Set when distinct components share a point.
    pub intersecting: bool,
    /// Smallest `c*` with solutions, when there is one.
    pub threshold: Option<f64>,
}

impl CurveDescription {
    /// `ln s_L(l1) - ln c* - ln s_R(l2)`.
    pub fn condition_residual(&self, p: &CurvePoint) -> f64 {
        self.left.ln_eval_logit(p.logit[0]) - self.c_star.ln() - self.right.ln_eval_logit(p.logit[1])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,param1,param2\n");
        for (k, comp) in self.components.iter().enumerate() {
            for p in &comp.points {
                let _ = writeln!(out, "{k},{},{}", p.lambda[0], p.lambda[1]);
            }
        }
        out
    }
}

/// Default number of samples per component.
pub const CURVE_SAMPLES: usize = 512;

/// All `l` with `ln s_P(l) = level`, as logit coordinates, ascending.
fn level_set(p: SignCharParams, level: f64) -> Vec<f64> {
    match p.logit_star() {
        Some(star) => {
            let ext = p.ln_extremum().unwrap();
            if (level - ext).abs() <= 1e-12 * ext.abs().max(1.0) {
                vec![star]
            } else {
                [Branch::Minus, Branch::Plus]
                    .iter()
                    .filter_map(|&br| sc_root_logit_ln(p, level, br).ok())
                    .collect()
            }
        }
        None => sc_root_logit_ln(p, level, Branch::Whole).ok().into_iter().collect(),
    }
}

/// Traces `ln s_F(follower) = ln s_D(driver) + offset` over the driver.
fn trace(driver: SignCharParams, offset: f64, follower: SignCharParams, swap: bool, samples: usize) -> Vec<CurveComponent> {
    let (lo, hi) = follower.ln_range();
    let follower_ext = follower.ln_extremum();
    let mut breaks: Vec<f64> = Vec::new();
    for bound in [lo, hi] {
        if bound.is_finite() {
            breaks.extend(level_set(driver, bound - offset));
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let level = |u: f64| driver.ln_eval_logit(u) + offset;
    let inside = |v: f64| v > lo && v < hi;
    let joins = |u: f64| follower_ext.is_some_and(|e| (level(u) - e).abs() <= 1e-9 * e.abs().max(1.0));

    let mut knots = vec![f64::NEG_INFINITY];
    knots.extend(&breaks);
    knots.push(f64::INFINITY);
    let mut components = Vec::new();
    let mut touched = vec![false; breaks.len()];
    for (k, w) in knots.windows(2).enumerate() {
        let mid = match (w[0].is_finite(), w[1].is_finite()) {
            (true, true) => 0.5 * (w[0] + w[1]),
            (true, false) => w[0] + 1.0,
            (false, true) => w[1] - 1.0,
            (false, false) => 0.0,
        };
        if !inside(level(mid)) {
            continue;
        }
        if k > 0 {
            touched[k - 1] = true;
        }
        if k < breaks.len() {
            touched[k] = true;
        }
        let closed_lo = w[0].is_finite() && joins(w[0]);
        let closed_hi = w[1].is_finite() && joins(w[1]);
        let (a, b) = (
            if w[0].is_finite() { sigmoid(w[0]) } else { 0.0 },
            if w[1].is_finite() { sigmoid(w[1]) } else { 1.0 },
        );
        let follow = |u: f64, br: Branch| -> Option<f64> {
            match sc_root_logit_ln(follower, level(u), br) {
                Ok(v) => Some(v),
                Err(Error::OutOfRange { .. }) if br != Branch::Whole => follower.logit_star(),
                Err(_) => None,
            }
        };
        let point = |u: f64, v: f64| {
            let (l1, l2) = if swap { (v, u) } else { (u, v) };
            CurvePoint {
                lambda: [sigmoid(l1), sigmoid(l2)],
                logit: [l1, l2],
            }
        };
        let grid = |n: usize| -> Vec<f64> {
            let off_lo = if closed_lo { 0.0 } else { 0.5 };
            let off_hi = if closed_hi { 0.0 } else { 0.5 };
            let span = (n as f64 - 1.0) + off_lo + off_hi;
            (0..n)
                .map(|i| {
                    let s = (i as f64 + off_lo) / span;
                    let l = a + (b - a) * s;
                    if s == 0.0 {
                        w[0]
                    } else if s == 1.0 {
                        w[1]
                    } else {
                        crate::signchar::logit(l)
                    }
                })
                .collect()
        };
        if follower_ext.is_none() {
            let points: Vec<CurvePoint> = grid(samples)
                .into_iter()
                .filter_map(|u| follow(u, Branch::Whole).map(|v| point(u, v)))
                .collect();
            components.push(CurveComponent { points, closed: false });
            continue;
        }
        let joined = closed_lo || closed_hi;
        let per_branch = match (closed_lo, closed_hi) {
            (true, true) => samples / 2 + 1,
            (false, false) => samples,
            _ => samples.div_ceil(2),
        };
        let half = grid(per_branch);
        let minus: Vec<CurvePoint> = half
            .iter()
            .filter_map(|&u| follow(u, Branch::Minus).map(|v| point(u, v)))
            .collect();
        let mut plus: Vec<CurvePoint> = half
            .iter()
            .filter_map(|&u| follow(u, Branch::Plus).map(|v| point(u, v)))
            .collect();
        if joined {
            // the two branches meet; walk out along one and back along the other
            plus.reverse();
            let mut points = minus;
            if closed_hi {
                plus.remove(0);
            }
            points.extend(plus);
            if closed_lo && closed_hi {
                points.pop();
            }
            components.push(CurveComponent {
                points,
                closed: closed_lo && closed_hi,
            });
        } else {
            components.push(CurveComponent { points: minus, closed: false });
            components.push(CurveComponent { points: plus, closed: false });
        }
    }
    // an isolated tangency: the solution set is a single point
    for (k, &u) in breaks.iter().enumerate() {
        if !touched[k] && joins(u) {
            if let Some(v) = follower.logit_star() {
                let (l1, l2) = if swap { (v, u) } else { (u, v) };
                components.push(CurveComponent {
                    points: vec![CurvePoint {
                        lambda: [sigmoid(l1), sigmoid(l2)],
                        logit: [l1, l2],
                    }],
                    closed: true,
                });
            }
        }
    }
    components
}

/// Solution curve of `s_L(l1) = c* s_R(l2)`.
pub fn curve_parametrize(left: SignCharParams, right: SignCharParams, c_star: f64) -> Result<CurveDescription> {
    curve_parametrize_with(left, right, c_star, CURVE_SAMPLES)
}

pub fn curve_parametrize_with(
    left: SignCharParams,
    right: SignCharParams,
    c_star: f64,
    samples: usize,
) -> Result<CurveDescription> {
    if left.is_constant() || right.is_constant() {
        return Err(Error::DegenerateExponents("a sign-characteristic function is constant".into()));
    }
    if !(c_star > 0.0 && c_star.is_finite()) {
        return Err(Error::NotInCoefficientCone(format!("c* = {c_star}")));
    }
    let ln_c = c_star.ln();
    let forward = || trace(left, -ln_c, right, false, samples);
    let backward = || trace(right, ln_c, left, true, samples);
    let mut threshold = None;
    let mut intersecting = false;
    let components = match (left.ln_extremum(), right.ln_extremum()) {
        (_, None) => forward(),
        (None, Some(_)) => backward(),
        (Some(el), Some(er)) => {
            let (lmax, rmax) = (left.alpha > 0.0, right.alpha > 0.0);
            let gap = el - (er + ln_c);
            let tight = gap.abs() <= 1e-12 * el.abs().max(1.0);
            match (lmax, rmax) {
                (true, true) | (false, false) => {
                    intersecting = tight;
                    // drive with the side whose range sits inside the other's
                    if (gap < 0.0) == lmax || tight {
                        forward()
                    } else {
                        backward()
                    }
                }
                (false, true) => {
                    threshold = Some((el - er).exp());
                    backward()
                }
                (true, false) => {
                    threshold = Some((el - er).exp());
                    forward()
                }
            }
        }
    };
    if components.is_empty() {
        return Err(Error::NoSolutions(match threshold {
            Some(t) => format!("c* = {c_star} is below the threshold {t}"),
            None => format!("no point satisfies the curve condition for c* = {c_star}"),
        }));
    }
    if components.len() > 1 && !intersecting {
        intersecting = components
            .iter()
            .enumerate()
            .any(|(i, a)| components[i + 1..].iter().any(|b| shares_point(a, b)));
    }
    Ok(CurveDescription {
        left,
        right,
        c_star,
        components,
        intersecting,
        threshold,
    })
}

fn shares_point(a: &CurveComponent, b: &CurveComponent) -> bool {
    let ends = |c: &CurveComponent| [c.points.first().copied(), c.points.last().copied()];
    ends(a).iter().flatten().any(|p| {
        ends(b)
            .iter()
            .flatten()
            .any(|q| (p.lambda[0] - q.lambda[0]).abs() < 1e-9 && (p.lambda[1] - q.lambda[1]).abs() < 1e-9)
    })
}

/// `s_{b1,b2}(l1) = c* s_{-b3,1}(l2)`.
pub fn curve_parametrize_d1(b1: f64, b2: f64, b3: f64, c_star: f64) -> Result<CurveDescription> {
    curve_parametrize(SignCharParams::new(b1, b2), SignCharParams::new(-b3, 1.0), c_star)
}

/// A curve of an instance with two trinomial classes and dependency one,
/// with every sample lifted to the original variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceCurve {
    pub curve: CurveDescription,
    /// `x[k][i]` lifts point `i` of component `k`.
    pub x: Vec<Vec<Vec<f64>>>,
}

impl InstanceCurve {
    pub fn to_csv(&self) -> String {
        let n = self.x.iter().flatten().next().map_or(0, |x| x.len());
        let mut out = String::from("component,param1,param2");
        for i in 1..=n {
            let _ = write!(out, ",x{i}");
        }
        out.push('\n');
        for (k, comp) in self.curve.components.iter().enumerate() {
            for (p, x) in comp.points.iter().zip(&self.x[k]) {
                let _ = write!(out, "{k},{},{}", p.lambda[0], p.lambda[1]);
                for v in x {
                    let _ = write!(out, ",{v}");
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Each class as `y = l r_a + (1 - l) r_b` with rays scaled to agree on
/// their common columns. Returns `(r_a, r_b)` in original columns.
fn class_segments(p: &ProblemInstance) -> Result<Vec<(Vec<usize>, Vec<f64>, Vec<f64>)>> {
    let geo = p.geometry()?;
    geo.classes
        .iter()
        .map(|class| {
            if class.rays.len() != 2 {
                return Err(Error::Shape(format!("class with {} extreme rays, expected 2", class.rays.len())));
            }
            let (mut ra, mut rb) = (class.rays[0].clone(), class.rays[1].clone());
            let first_own = |r: &[Rational], o: &[Rational]| {
                (0..r.len()).find(|&j| !r[j].is_zero() && o[j].is_zero()).unwrap_or(usize::MAX)
            };
            if first_own(&rb, &ra) < first_own(&ra, &rb) {
                std::mem::swap(&mut ra, &mut rb);
            }
            let shared: Vec<usize> = (0..ra.len()).filter(|&j| !ra[j].is_zero() && !rb[j].is_zero()).collect();
            if let Some(&j0) = shared.first() {
                let s = &ra[j0] / &rb[j0];
                for x in &mut rb {
                    *x *= &s;
                }
                if shared.iter().any(|&j| ra[j] != rb[j]) {
                    return Err(Error::Unsupported("rays do not agree on their common support".into()));
                }
            }
            Ok((class.columns.clone(), ra.iter().map(to_f64).collect(), rb.iter().map(to_f64).collect()))
        })
        .collect()
}

/// Curve of an instance with two classes, two rays per class and `d = 1`.
pub fn curve_from_instance(p: &ProblemInstance) -> Result<InstanceCurve> {
    curve_from_instance_with(p, CURVE_SAMPLES)
}

pub fn curve_from_instance_with(p: &ProblemInstance, samples: usize) -> Result<InstanceCurve> {
    let aux = build_aux(p)?;
    if aux.d != 1 || p.num_classes() != 2 {
        return Err(Error::Shape(format!(
            "curves need two classes and dependency 1, found {} and {}",
            p.num_classes(),
            aux.d
        )));
    }
    let segs = class_segments(p)?;
    let mut z: Vec<f64> = aux.g_prime.column(0).iter().cloned().collect();
    // exponents (alpha_k, beta_k) of l_k and 1 - l_k in y^z, and ln of the
    // constant factor
    let mut exps = [[0.0; 2]; 2];
    let collect = |z: &[f64], exps: &mut [[f64; 2]; 2]| -> f64 {
        let mut ln_const = 0.0;
        for (k, (cols, ra, rb)) in segs.iter().enumerate() {
            exps[k] = [0.0; 2];
            for (i, &j) in cols.iter().enumerate() {
                if z[j] == 0.0 {
                    continue;
                }
                if ra[i] != 0.0 && rb[i] == 0.0 {
                    exps[k][0] += z[j];
                    ln_const += z[j] * ra[i].ln();
                } else if rb[i] != 0.0 && ra[i] == 0.0 {
                    exps[k][1] += z[j];
                    ln_const += z[j] * rb[i].ln();
                } else {
                    ln_const += z[j] * ra[i].ln();
                }
            }
        }
        ln_const
    };
    collect(&z, &mut exps);
    if exps[1][1] != 0.0 {
        let s = -1.0 / exps[1][1];
        z.iter_mut().for_each(|v| *v *= s);
    }
    let ln_const = collect(&z, &mut exps);
    let ln_cz: f64 = z.iter().zip(&p.c).filter(|(z, _)| **z != 0.0).map(|(z, c)| z * c.ln()).sum();
    let c_star = (ln_cz - ln_const).exp();
    let left = SignCharParams::new(exps[0][0], exps[0][1]);
    let right = SignCharParams::new(-exps[1][0], -exps[1][1]);
    let curve = curve_parametrize_with(left, right, c_star, samples)?;
    let x = curve
        .components
        .iter()
        .map(|comp| {
            comp.points
                .iter()
                .map(|pt| {
                    let mut y = vec![0.0; p.m()];
                    for (k, (cols, ra, rb)) in segs.iter().enumerate() {
                        let (ll, lm) = (ln_lambda(pt.logit[k]), ln_one_minus_lambda(pt.logit[k]));
                        for (i, &j) in cols.iter().enumerate() {
                            y[j] = if ra[i] != 0.0 && rb[i] == 0.0 {
                                (ra[i].ln() + ll).exp()
                            } else if rb[i] != 0.0 && ra[i] == 0.0 {
                                (rb[i].ln() + lm).exp()
                            } else {
                                ra[i]
                            };
                        }
                    }
                    lift_unchecked(&aux, &p.c, &y)
                })
                .collect()
        })
        .collect();
    Ok(InstanceCurve { curve, x })
}

// ---------------------------------------------------------------------------
// Two trinomials in two variables

/// `gamma_1 s_{a1,b1}(l) + gamma_2 s_{a2,b2}(l) = 1` with the monomial
/// substitution back to the original variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoTrinomialProblem {
    pub exponents: [SignCharParams; 2],
    #[serde(skip)]
    pub exponents_exact: Option<[(Rational, Rational); 2]>,
    pub gamma: [f64; 2],
    /// `ln x = substitution * (ln l, ln(1 - l)) + shift`.
    pub substitution: [[f64; 2]; 2],
    pub shift: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoTrinomialRoot {
    pub lambda: f64,
    pub multiplicity: u8,
    pub x: [f64; 2],
}

/// A class `C1 x^{u1} + C2 x^{u2} = 1` after dividing by its lone
/// opposite-sign monomial.
struct NormalizedTrinomial {
    coefficients: [f64; 2],
    exponents: [Vec<Rational>; 2],
    exponents_f64: [Vec<f64>; 2],
}

fn normalize_trinomial(p: &ProblemInstance, cols: &[usize]) -> Result<NormalizedTrinomial> {
    if cols.len() != 3 {
        return Err(Error::Shape(format!("class with {} monomials, expected 3", cols.len())));
    }
    let block = p.a.select_columns(cols);
    let row = (0..block.rows())
        .map(|i| block.row(i).to_vec())
        .find(|r| r.iter().any(|x| !x.is_zero()))
        .ok_or_else(|| Error::Shape("empty class row".into()))?;
    let pos = row.iter().filter(|x| x.is_positive()).count();
    let neg = row.iter().filter(|x| x.is_negative()).count();
    let lone = match (pos, neg) {
        (2, 1) => row.iter().position(|x| x.is_negative()).unwrap(),
        (1, 2) => row.iter().position(|x| x.is_positive()).unwrap(),
        _ => return Err(Error::Shape("class is not a trinomial with one opposite-sign monomial".into())),
    };
    let others: Vec<usize> = (0..3).filter(|&k| k != lone).collect();
    let b = p.b.to_rational();
    let bf = p.b.to_dmatrix();
    let col = |k: usize| -> Vec<Rational> { (0..p.n()).map(|i| b.get(i, cols[k]).clone()).collect() };
    let colf = |k: usize| -> Vec<f64> { (0..p.n()).map(|i| bf[(i, cols[k])]).collect() };
    let e3 = col(lone);
    let e3f = colf(lone);
    let coef = |k: usize| (to_f64(&row[k]).abs() * p.c[cols[k]]) / (to_f64(&row[lone]).abs() * p.c[cols[lone]]);
    let diff = |k: usize| -> Vec<Rational> { col(k).iter().zip(&e3).map(|(a, b)| a - b).collect() };
    let difff = |k: usize| -> Vec<f64> { colf(k).iter().zip(&e3f).map(|(a, b)| a - b).collect() };
    Ok(NormalizedTrinomial {
        coefficients: [coef(others[0]), coef(others[1])],
        exponents: [diff(others[0]), diff(others[1])],
        exponents_f64: [difff(others[0]), difff(others[1])],
    })
}

fn univariate_reduction(t: &NormalizedTrinomial) -> UnivariateReduction {
    let d = t.exponents_f64[0].clone();
    let k = d
        .iter()
        .zip(&t.exponents_f64[1])
        .find(|(a, _)| **a != 0.0)
        .map_or(0.0, |(a, b)| b / a);
    let (c1, c2) = (t.coefficients[0], t.coefficients[1]);
    let roots = trinomial_solve(1.0, k, c1, c2)
        .map(|s: TrinomialSolution| s.roots.iter().map(|r| r.x).collect())
        .unwrap_or_default();
    UnivariateReduction {
        exponents: (1.0, k),
        coefficients: (c1, c2),
        direction: d,
        roots,
    }
}

/// Substitutes `l = C1 x^{u1}`, `1 - l = C2 x^{u2}` from the first
/// trinomial into the second.
pub fn two_trinomial_standardize(p: &ProblemInstance) -> Result<TwoTrinomialProblem> {
    if p.n() != 2 || p.num_classes() != 2 {
        return Err(Error::Shape(format!(
            "two trinomials in two variables expected, found {} variables and {} classes",
            p.n(),
            p.num_classes()
        )));
    }
    let blocks = p.partition.blocks();
    let t = [normalize_trinomial(p, &blocks[0])?, normalize_trinomial(p, &blocks[1])?];
    let det = |u: &[Vec<Rational>; 2]| &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
    let (first, second) = if !det(&t[0].exponents).is_zero() {
        (&t[0], &t[1])
    } else if !det(&t[1].exponents).is_zero() {
        (&t[1], &t[0])
    } else {
        return Err(Error::DegenerateToUnivariate(Box::new(univariate_reduction(&t[0]))));
    };
    // U has columns u1, u2; (alpha_k, beta_k) = U^{-1} v_k
    let u = RatMatrix::from_columns(&first.exponents, 2);
    let u_inv = u.inverse().expect("nonzero determinant");
    let exact = p.b.exact().is_some();
    let mut params = [SignCharParams::new(0.0, 0.0); 2];
    let mut exact_params: [(Rational, Rational); 2] = Default::default();
    for k in 0..2 {
        let w = u_inv.mul_vec(&second.exponents[k]);
        exact_params[k] = (w[0].clone(), w[1].clone());
        params[k] = SignCharParams::new(to_f64(&w[0]), to_f64(&w[1]));
    }
    if params.iter().any(|p| p.is_constant()) || params[0] == params[1] {
        return Err(Error::DegenerateExponents(format!("standardized exponents {params:?}")));
    }
    let ln_c = [first.coefficients[0].ln(), first.coefficients[1].ln()];
    let gamma = [0, 1].map(|k| {
        (second.coefficients[k].ln() - params[k].alpha * ln_c[0] - params[k].beta * ln_c[1]).exp()
    });
    // ln x = U^{-T} (ln X - ln C)
    let inv_t = u_inv.transpose();
    let m = [0, 1].map(|i| [0, 1].map(|j| to_f64(inv_t.get(i, j))));
    let shift = [0, 1].map(|i| -(m[i][0] * ln_c[0] + m[i][1] * ln_c[1]));
    Ok(TwoTrinomialProblem {
        exponents: params,
        exponents_exact: exact.then_some(exact_params),
        gamma,
        substitution: m,
        shift,
    })
}

impl TwoTrinomialProblem {
    /// Builds a standardized problem directly; `x` is then `(l, 1 - l)`.
    pub fn new(exponents: [SignCharParams; 2], gamma: [f64; 2]) -> Result<Self> {
        if exponents.iter().any(|p| p.is_constant()) || exponents[0] == exponents[1] {
            return Err(Error::DegenerateExponents(format!("{exponents:?}")));
        }
        if gamma.iter().any(|g| !(*g > 0.0)) {
            return Err(Error::NotInCoefficientCone("gamma must be positive".into()));
        }
        Ok(TwoTrinomialProblem {
            exponents,
            exponents_exact: None,
            gamma,
            substitution: [[1.0, 0.0], [0.0, 1.0]],
            shift: [0.0, 0.0],
        })
    }

    pub fn exact_exponents(&self) -> Result<[(Rational, Rational); 2]> {
        if let Some(e) = &self.exponents_exact {
            return Ok(e.clone());
        }
        let conv = |x: f64| from_f64(x).ok_or_else(|| Error::DegenerateExponents(format!("exponent {x}")));
        Ok([
            (conv(self.exponents[0].alpha)?, conv(self.exponents[0].beta)?),
            (conv(self.exponents[1].alpha)?, conv(self.exponents[1].beta)?),
        ])
    }

    /// `f` at logit coordinate `u`.
    pub fn f_logit(&self, u: f64) -> f64 {
        let [p1, p2] = self.exponents;
        self.gamma[0] * p1.ln_eval_logit(u).exp() + self.gamma[1] * p2.ln_eval_logit(u).exp() - 1.0
    }

    pub fn f(&self, lambda: f64) -> f64 {
        self.f_logit(crate::signchar::logit(lambda))
    }

    /// Original variables at logit coordinate `u`.
    pub fn x_at(&self, u: f64) -> [f64; 2] {
        let (ll, lm) = (ln_lambda(u), ln_one_minus_lambda(u));
        let m = &self.substitution;
        [0, 1].map(|i| (m[i][0] * ll + m[i][1] * lm + self.shift[i]).exp())
    }

    /// The cubic `q3` with `g'' = gamma_1 s_{da-2,db-2} q3`.
    pub fn q3(&self) -> Result<Poly> {
        let [(a1, b1), (a2, b2)] = self.exact_exponents()?;
        Ok(q3_poly(&a1, &b1, &a2, &b2))
    }
}

fn q3_poly(a1: &Rational, b1: &Rational, a2: &Rational, b2: &Rational) -> Poly {
    let one = rat(1);
    let (da, db) = (a1 - a2, b1 - b2);
    let l = Poly::x();
    let mu = Poly::from_i64(&[1, -1]);
    let mu2 = mu.mul(&mu);
    let terms = [
        (a1 * &da * (&da - &one), mu2.mul(&mu)),
        (-(&da * (rat(2) * a1 * (&db + &one) + b1 * (&da + &one))), l.mul(&mu2)),
        (&db * (a1 * (&db + &one) + rat(2) * b1 * (&da + &one)), l.mul(&l).mul(&mu)),
        (-(b1 * &db * (&db - &one)), l.mul(&l).mul(&l)),
    ];
    terms.iter().fold(Poly::zero(), |acc, (c, p)| acc.add(&p.scale(c)))
}

/// Positive solutions, ascending in `l`.
pub fn two_trinomial_solve(tp: &TwoTrinomialProblem) -> Result<Vec<TwoTrinomialRoot>> {
    let [p1, p2] = tp.exponents;
    let [g1, g2] = tp.gamma;
    let (da, db) = (p1.alpha - p2.alpha, p1.beta - p2.beta);
    let lin = |p: SignCharParams, u: f64| p.alpha * sigmoid(-u) - p.beta * sigmoid(u);
    let f = |u: f64| tp.f_logit(u);
    // g = f' / s_{a2-1,b2-1}
    let g = |u: f64| g1 * SignCharParams::new(da, db).ln_eval_logit(u).exp() * lin(p1, u) + g2 * lin(p2, u);
    let q2 = |u: f64| {
        let (l, m) = (sigmoid(u), sigmoid(-u));
        (da * m - db * l) * lin(p1, u) - l * m * (p1.alpha + p1.beta)
    };
    let gp = |u: f64| {
        g1 * SignCharParams::new(da - 1.0, db - 1.0).ln_eval_logit(u).exp() * q2(u) - g2 * (p2.alpha + p2.beta)
    };

    let probe = [-3.0, -1.0, 0.0, 0.7, 2.5];
    if probe.iter().all(|&u| f(u).abs() <= 1e-13) {
        return Err(Error::InfiniteSolutions);
    }
    let q3 = tp.q3()?;
    let l3: Vec<f64> = q3
        .unit_interval_roots()
        .into_iter()
        .filter(|l| *l > 0.0 && *l < 1.0)
        .map(crate::signchar::logit)
        .collect();
    let (lo, hi) = (-LOGIT_LIMIT, LOGIT_LIMIT);
    let l2 = roots_on_pieces(&gp, &l3, lo, hi);
    let l1 = roots_on_pieces(&g, &l2, lo, hi);
    let mut roots: Vec<(f64, u8)> = roots_on_pieces(&f, &l1, lo, hi).into_iter().map(|u| (u, 1)).collect();
    for &u in &l1 {
        let scale = g1 * p1.ln_eval_logit(u).exp() + g2 * p2.ln_eval_logit(u).exp() + 1.0;
        if f(u).abs() <= 1e-12 * scale {
            roots.push((u, 2));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|b, a| {
        if (sigmoid(a.0) - sigmoid(b.0)).abs() < 1e-10 {
            a.1 = 2;
            true
        } else {
            false
        }
    });
    Ok(roots
        .into_iter()
        .map(|(u, multiplicity)| TwoTrinomialRoot {
            lambda: sigmoid(u),
            multiplicity,
            x: tp.x_at(u),
        })
        .collect())
}

/// Bound on the number of roots of `f` on `(0, 1)` from the exponent signs
/// and the zeros of `W(1, s_1, s_2)`.
pub fn two_trinomial_bound(tp: &TwoTrinomialProblem) -> Result<usize> {
    let [(a1, b1), (a2, b2)] = tp.exact_exponents()?;
    let w3 = wronskian_exact(&[(rat(0), rat(0)), (a1.clone(), b1.clone()), (a2.clone(), b2.clone())])?;
    let z3 = w3.zeros().unwrap_or(0);
    let s1 = (&a1 * &b1).signum();
    let s2 = (&a2 * &b2).signum();
    let any_zero = [&a1, &b1, &a2, &b2].iter().any(|x| x.is_zero());
    let bound = if any_zero {
        (2 + z3).min(4)
    } else if s1 != s2 {
        2 + z3
    } else if s1.is_negative() {
        (2 + z3).min(4)
    } else if a1.is_positive() == a2.is_positive() {
        if z3 >= 2 {
            4
        } else {
            2
        }
    } else {
        4
    };
    Ok(bound.min(5))
}

// ---------------------------------------------------------------------------
// t-nomials

/// `(t^3 - 3t^2 + 8t - 6) / 3` for one trinomial and one t-nomial.
pub fn tnomial_bound(t: u32) -> Result<Rational> {
    if t < 3 {
        return Err(Error::Unsupported(format!("t-nomial bound needs t >= 3, got {t}")));
    }
    let t = rat(t as i64);
    Ok((&t * &t * &t - rat(3) * &t * &t + rat(8) * &t - rat(6)) / rat(3))
}

/// One row of the comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnomialRow {
    pub t: u32,
    pub bound: Rational,
    /// `2^t - 2`.
    pub exponential: Rational,
    /// `(2/3) t^3 + 5t`.
    pub cubic: Rational,
}

pub fn tnomial_table_row(t: u32) -> Result<TnomialRow> {
    let tt = rat(t as i64);
    Ok(TnomialRow {
        t,
        bound: tnomial_bound(t)?,
        exponential: Rational::from_integer(num_bigint::BigInt::from(2u8).pow(t)) - rat(2),
        cubic: crate::linalg::ratio(2, 3) * &tt * &tt * &tt + rat(5) * &tt,
    })
}

impl TnomialRow {
    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::NAN)
    }
}
