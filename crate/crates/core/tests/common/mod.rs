#![allow(dead_code)]

use fewnomial::framework::{ExponentMatrix, ProblemInstance};
use fewnomial::geometry::ClassPartition;
use fewnomial::linalg::{rat, ratio, to_f64, RatMatrix, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(a: &[&[i64]], b: &[&[i64]], c: &[f64], classes: Option<Vec<usize>>) -> ProblemInstance {
    ProblemInstance::new(
        RatMatrix::from_i64(a),
        ExponentMatrix::Exact(RatMatrix::from_i64(b)),
        c.to_vec(),
        classes.map(ClassPartition::contiguous),
    )
    .unwrap()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, spread: f64) -> f64 {
    rng.random_range(-spread..spread).exp()
}

/// A segment instance with `ker A = span(1, q)`, columns shuffled.
#[derive(Clone, Debug)]
pub struct SegmentCase {
    pub instance: ProblemInstance,
    pub q: Vec<f64>,
    /// Spans `ker [B; 1]`.
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub fn random_segment_case(rng: &mut ChaCha8Rng, max_n: usize) -> Option<SegmentCase> {
    let n = rng.random_range(1..=max_n);
    let m = n + 2;
    let mut q: Vec<Rational> = vec![rat(1)];
    for _ in 0..n {
        q.push(ratio(rng.random_range(-5..=5), 6));
    }
    q.push(rat(-1));
    q.shuffle(rng);
    let a_rows = RatMatrix::from_rows(vec![vec![rat(1); m], q.clone()], m).kernel_basis();
    let a = RatMatrix::from_rows(a_rows, m);
    let b_rows: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..m).map(|_| rat(rng.random_range(-6..=6))).collect())
        .collect();
    let b = RatMatrix::from_rows(b_rows, m);
    let dep = b.vstack(&RatMatrix::from_rows(vec![vec![rat(1); m]], m)).kernel_basis();
    if dep.len() != 1 {
        return None;
    }
    let c: Vec<f64> = (0..m).map(|_| log_uniform(rng, 2.0)).collect();
    let instance = ProblemInstance::new(a, ExponentMatrix::Exact(b), c.clone(), None).ok()?;
    if instance.num_classes() != 1 {
        return None;
    }
    Some(SegmentCase {
        instance,
        q: q.iter().map(to_f64).collect(),
        b: dep[0].iter().map(to_f64).collect(),
        c,
    })
}

/// `1 + sgnvar` of the partial sums of `b`, ordered by decreasing `q` with
/// equal `q` merged.
pub fn segment_sign_bound(q: &[f64], b: &[f64]) -> usize {
    let mut idx: Vec<usize> = (0..q.len()).collect();
    idx.sort_by(|&i, &j| q[j].total_cmp(&q[i]));
    let mut merged: Vec<f64> = Vec::new();
    let mut last_q = f64::NAN;
    for &i in &idx {
        if q[i] == last_q {
            *merged.last_mut().unwrap() += b[i];
        } else {
            merged.push(b[i]);
            last_q = q[i];
        }
    }
    let mut acc = 0.0;
    let sums: Vec<f64> = merged[..merged.len() - 1]
        .iter()
        .map(|x| {
            acc += x;
            if acc.abs() < 1e-9 {
                0.0
            } else {
                acc
            }
        })
        .collect();
    let signs: Vec<bool> = sums.iter().filter(|s| **s != 0.0).map(|s| *s > 0.0).collect();
    1 + signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Zeros of `sum b_i ln(1 + q_i tanh w) - sum b_i ln c_i` over `w`, which
/// count the positive solutions of the segment instance.
pub fn segment_grid_count(case: &SegmentCase) -> usize {
    let target: f64 = case.b.iter().zip(&case.c).map(|(b, c)| b * c.ln()).sum();
    // sum b = 0, so the cosh normalization cancels
    let f = |w: f64| -> f64 {
        case.b
            .iter()
            .zip(&case.q)
            .map(|(b, q)| {
                let hi = (1.0 + q).ln() + w;
                let lo = (1.0 - q).ln() - w;
                let top = hi.max(lo);
                b * (top + ((hi - top).exp() + (lo - top).exp()).ln())
            })
            .sum::<f64>()
            - target
    };
    stretched_grid_count(f, 350.0, 2e-5)
}

/// Zeros of `f` on `[-limit, limit]`, sampled uniformly in `v` with
/// `u = 10 sinh v`: fine near the origin, coarse far out.
pub fn stretched_grid_count(f: impl Fn(f64) -> f64, limit: f64, resolution: f64) -> usize {
    let v_max = (limit / 10.0).asinh();
    fewnomial::oracle::grid_count(|v| f(10.0 * v.sinh()), -v_max, v_max, resolution).total()
}

/// Two trinomials `c1 x^u1 + c2 x^u2 = 1`, `c3 x^u3 + c4 x^u4 = 1` in two
/// variables with random integer exponents.
pub fn random_two_trinomials(rng: &mut ChaCha8Rng) -> ProblemInstance {
    loop {
        let mut e = [[0i64; 4]; 2];
        for row in e.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.random_range(-6..=6);
            }
        }
        let c: Vec<f64> = (0..4).map(|_| log_uniform(rng, 1.5)).collect();
        let b0: [i64; 6] = [e[0][0], e[0][1], 0, e[0][2], e[0][3], 0];
        let b1: [i64; 6] = [e[1][0], e[1][1], 0, e[1][2], e[1][3], 0];
        let p = ProblemInstance::new(
            RatMatrix::from_i64(&[&[1, 1, -1, 0, 0, 0], &[0, 0, 0, 1, 1, -1]]),
            ExponentMatrix::Exact(RatMatrix::from_i64(&[&b0, &b1])),
            vec![c[0], c[1], 1.0, c[2], c[3], 1.0],
            Some(ClassPartition::contiguous(vec![3, 3])),
        );
        if let Ok(p) = p {
            return p;
        }
    }
}
