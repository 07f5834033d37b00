//! Brute-force verification: multistart damped Newton in log coordinates and
//! sign-change counting on a one-dimensional grid.
//!
//! Both are falsifiers. A missing solution in the multistart output is
//! possible; raise `starts` when in doubt.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{residual, ProblemInstance};
use crate::linalg::to_f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Search box `[lo, hi]^n` for `ln x`.
    pub box_lo: f64,
    pub box_hi: f64,
    pub starts: usize,
    pub seed: u64,
    pub dedup_radius: f64,
    pub polish_tol: f64,
    pub accept_residual: f64,
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            box_lo: -6.0,
            box_hi: 6.0,
            starts: 4096,
            seed: 0,
            dedup_radius: 1e-6,
            polish_tol: 1e-12,
            accept_residual: 1e-10,
            max_iterations: 100,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.starts == 0 || !(self.box_lo < self.box_hi) {
            return Err(Error::Shape("oracle needs at least one start and a nonempty box".into()));
        }
        Ok(())
    }
}

struct LogSystem {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    ln_c: Vec<f64>,
}

impl LogSystem {
    fn new(p: &ProblemInstance) -> Self {
        LogSystem {
            a: DMatrix::from_fn(p.a.rows(), p.a.cols(), |i, j| to_f64(p.a.get(i, j))),
            b: p.b.to_dmatrix(),
            ln_c: p.c.iter().map(|c| c.ln()).collect(),
        }
    }

    /// Monomials `c_j e^{b_j . z}`.
    fn monomials(&self, z: &DVector<f64>) -> DVector<f64> {
        let e = self.b.tr_mul(z);
        DVector::from_fn(e.len(), |j, _| (e[j] + self.ln_c[j]).exp())
    }

    fn value(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.a * self.monomials(z)
    }

    fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let mono = self.monomials(z);
        // J = A diag(mono) B^T
        let mut scaled = self.b.transpose();
        for (j, mut row) in scaled.row_iter_mut().enumerate() {
            row *= mono[j];
        }
        &self.a * scaled
    }

    /// Equations divided by their largest term, so the merit is scale free.
    fn scaled_norm(&self, z: &DVector<f64>) -> f64 {
        let mono = self.monomials(z);
        let mut total = 0.0;
        for i in 0..self.a.nrows() {
            let mut sum = 0.0;
            let mut top: f64 = 0.0;
            for j in 0..mono.len() {
                let t = self.a[(i, j)] * mono[j];
                sum += t;
                top = top.max(t.abs());
            }
            if top > 0.0 && top.is_finite() {
                total += (sum / top).powi(2);
            } else if !top.is_finite() {
                return f64::INFINITY;
            }
        }
        total.sqrt()
    }

    fn newton(&self, mut z: DVector<f64>, cfg: &OracleConfig) -> Option<DVector<f64>> {
        let mut merit = self.scaled_norm(&z);
        for _ in 0..cfg.max_iterations {
            if !merit.is_finite() {
                return None;
            }
            if merit <= cfg.polish_tol {
                break;
            }
            let step = self.jacobian(&z).lu().solve(&(-self.value(&z)))?;
            let mut t = 1.0;
            let mut improved = false;
            while t > 1e-10 {
                let cand = &z + &step * t;
                let m = self.scaled_norm(&cand);
                if m < merit {
                    z = cand;
                    merit = m;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Some(z)
    }
}

/// Distinct positive solutions of a square system, sorted lexicographically.
pub fn multistart_solve(p: &ProblemInstance, cfg: &OracleConfig) -> Result<Vec<Vec<f64>>> {
    if p.n_eq() != p.n() {
        return Err(Error::NonSquare {
            equations: p.n_eq(),
            variables: p.n(),
        });
    }
    cfg.validate()?;
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<DVector<f64>> = (0..cfg.starts)
        .map(|_| DVector::from_fn(n, |_, _| rng.random_range(cfg.box_lo..cfg.box_hi)))
        .collect();
    let sys = LogSystem::new(p);
    let found: Vec<Option<DVector<f64>>> = starts.into_par_iter().map(|z0| sys.newton(z0, cfg)).collect();

    let mut distinct: Vec<DVector<f64>> = Vec::new();
    for z in found.into_iter().flatten() {
        if z.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let x: Vec<f64> = z.iter().map(|v| v.exp()).collect();
        if x.iter().any(|v| !(*v > 0.0 && v.is_finite())) || residual(p, &x) > cfg.accept_residual {
            continue;
        }
        if distinct.iter().all(|d| (d - &z).amax() > cfg.dedup_radius) {
            distinct.push(z);
        }
    }
    let mut out: Vec<Vec<f64>> = distinct.iter().map(|z| z.iter().map(|v| v.exp()).collect()).collect();
    out.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCount {
    pub sign_changes: usize,
    /// One bisected root per sign change.
    pub roots: Vec<f64>,
    /// Local minima of `|f|` without a sign change, below `1e-12`.
    pub tangential: Vec<f64>,
}

impl GridCount {
    pub fn total(&self) -> usize {
        self.sign_changes + self.tangential.len()
    }
}

/// Tolerance on `|f|` for a tangential root.
pub const TANGENT_TOL: f64 = 1e-12;

/// Sign changes of `f` on the open interval `(a, b)` sampled with step
/// `resolution`.
pub fn grid_count(f: impl Fn(f64) -> f64, a: f64, b: f64, resolution: f64) -> GridCount {
    let n = ((b - a) / resolution).ceil().max(2.0) as usize;
    let xs: Vec<f64> = (1..n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut roots = Vec::new();
    let mut last: Option<usize> = None;
    for k in 0..xs.len() {
        if vs[k] == 0.0 || vs[k].is_nan() {
            continue;
        }
        if let Some(j) = last {
            if (vs[j] < 0.0) != (vs[k] < 0.0) {
                roots.push(bisect(&f, xs[j], xs[k]));
            }
        }
        last = Some(k);
    }

    let mut tangential = Vec::new();
    for k in 1..xs.len().saturating_sub(1) {
        let (l, m, r) = (vs[k - 1].abs(), vs[k].abs(), vs[k + 1].abs());
        if !(m <= l && m < r) || vs[k - 1] * vs[k + 1] < 0.0 {
            continue;
        }
        let x = golden_min(&|x: f64| f(x).abs(), xs[k - 1], xs[k + 1]);
        if f(x).abs() <= TANGENT_TOL && (vs[k - 1] * vs[k] > 0.0 || vs[k] == 0.0) {
            tangential.push(x);
        }
    }
    GridCount {
        sign_changes: roots.len(),
        roots,
        tangential,
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_neg = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        x1
    } else {
        x2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::ExponentMatrix;
    use crate::linalg::RatMatrix;
    use approx::assert_relative_eq;

    fn instance(a: &[&[i64]], b: &[&[i64]], c: &[f64]) -> ProblemInstance {
        ProblemInstance::new(RatMatrix::from_i64(a), ExponentMatrix::Exact(RatMatrix::from_i64(b)), c.to_vec(), None)
            .unwrap()
    }

    fn two_trinomials(b: [[i64; 4]; 2], c: [f64; 4]) -> ProblemInstance {
        instance(
            &[&[1, 1, -1, 0, 0, 0], &[0, 0, 0, 1, 1, -1]],
            &[&[b[0][0], b[0][1], 0, b[0][2], b[0][3], 0], &[b[1][0], b[1][1], 0, b[1][2], b[1][3], 0]],
            &[c[0], c[1], 1.0, c[2], c[3], 1.0],
        )
    }

    #[test]
    fn grid_examples() {
        let g = grid_count(|l| l * (1.0 - l) - 0.25, 0.0, 1.0, 1e-5);
        assert_eq!(g.sign_changes, 0);
        assert_eq!(g.tangential.len(), 1);
        assert_relative_eq!(g.tangential[0], 0.5, epsilon = 1e-6);
        let g = grid_count(|l| l - 0.5, 0.0, 1.0, 1e-5);
        assert_eq!(g.sign_changes, 1);
        assert!(g.tangential.is_empty());
        assert_relative_eq!(g.roots[0], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn circle_and_line() {
        let p = two_trinomials([[1, 0, 2, 0], [0, 1, 0, 2]], [1.0, 1.0, 1.6, 1.6]);
        let sols = multistart_solve(&p, &OracleConfig::default().with_starts(512)).unwrap();
        assert_eq!(sols.len(), 2);
        assert_relative_eq!(sols[0][0], 0.25, epsilon = 1e-10);
        assert_relative_eq!(sols[0][1], 0.75, epsilon = 1e-10);
        assert_relative_eq!(sols[1][0], 0.75, epsilon = 1e-10);
    }

    #[test]
    fn x_plus_inverse_has_no_solution() {
        // x + 1/x = 1
        let p = instance(&[&[1, 1, -1]], &[&[1, -1, 0]], &[1.0, 1.0, 1.0]);
        assert!(multistart_solve(&p, &OracleConfig::default().with_starts(256)).unwrap().is_empty());
    }

    #[test]
    fn kouchnirenko_five_solutions() {
        let p = two_trinomials([[5, 0, -1, 1], [-1, 1, 5, 0]], [1.0, 1.392, 1.0, 1.392]);
        let sols = multistart_solve(&p, &OracleConfig::default().with_seed(7)).unwrap();
        assert_eq!(sols.len(), 5);
        for x in &sols {
            assert!(residual(&p, x) <= 1e-10);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let p = two_trinomials([[5, 0, -1, 1], [-1, 1, 5, 0]], [1.0, 1.392, 1.0, 1.392]);
        let cfg = OracleConfig::default().with_seed(3).with_starts(300);
        assert_eq!(multistart_solve(&p, &cfg).unwrap(), multistart_solve(&p, &cfg).unwrap());
    }

    #[test]
    fn non_square_rejected() {
        let p = instance(&[&[1, 1, -1]], &[&[1, 0, 0], &[0, 1, 0]], &[1.0, 1.0, 1.0]);
        assert!(matches!(
            multistart_solve(&p, &OracleConfig::default()),
            Err(Error::NonSquare { equations: 1, variables: 2 })
        ));
    }
}
