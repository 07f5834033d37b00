//! Problem instances, auxiliary matrices, classification, the lift from the
//! coefficient polytope to solutions, and sign-vector certificates.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    self, coefficient_geometry, finest_partition, lower_closure, sign_feasible, sign_vectors, ClassGeometry,
    ClassPartition, CoefficientGeometry, SignVector,
};
use crate::linalg::{self, from_f64, max_abs, orient_positive, to_f64, RatMatrix, Rational, RealMatrix};

/// Numeric gates. All are relative or log-space quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max-norm of the log-space condition residual accepted by the lift.
    pub condition: f64,
    /// Relative singular-value cutoff for float rank decisions.
    pub rank: f64,
    /// Residual bound a lifted solution must meet.
    pub lift_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            condition: 1e-9,
            rank: linalg::DEFAULT_RANK_TOL,
            lift_residual: 1e-8,
        }
    }
}

/// Exponent data: exact when every entry is rational, binary64 otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum ExponentMatrix {
    Exact(RatMatrix),
    Float(RealMatrix),
}

impl ExponentMatrix {
    pub fn rows(&self) -> usize {
        match self {
            ExponentMatrix::Exact(m) => m.rows(),
            ExponentMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            ExponentMatrix::Exact(m) => m.cols(),
            ExponentMatrix::Float(m) => m.cols(),
        }
    }

    pub fn exact(&self) -> Option<&RatMatrix> {
        match self {
            ExponentMatrix::Exact(m) => Some(m),
            ExponentMatrix::Float(_) => None,
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        match self {
            ExponentMatrix::Exact(m) => m.to_dmatrix(),
            ExponentMatrix::Float(m) => m.data.clone(),
        }
    }

    /// Exact rational value of the stored entries.
    pub fn to_rational(&self) -> RatMatrix {
        match self {
            ExponentMatrix::Exact(m) => m.clone(),
            ExponentMatrix::Float(m) => {
                let rows = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| from_f64(m.data[(i, j)]).expect("finite")).collect())
                    .collect();
                RatMatrix::from_rows(rows, m.cols())
            }
        }
    }

    pub fn from_f64_rows(rows: &[Vec<f64>], cols: usize) -> Self {
        let flat: Vec<f64> = rows.iter().flatten().cloned().collect();
        ExponentMatrix::Float(RealMatrix::new(DMatrix::from_row_slice(rows.len(), cols, &flat)))
    }

    pub fn select_columns(&self, idx: &[usize]) -> ExponentMatrix {
        match self {
            ExponentMatrix::Exact(m) => ExponentMatrix::Exact(m.select_columns(idx)),
            ExponentMatrix::Float(m) => {
                let data = m.data.select_columns(idx);
                ExponentMatrix::Float(RealMatrix::new(data).with_tol(m.tol))
            }
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> ExponentMatrix {
        match self {
            ExponentMatrix::Exact(m) => ExponentMatrix::Exact(m.select_rows(idx)),
            ExponentMatrix::Float(m) => {
                let data = m.data.select_rows(idx);
                ExponentMatrix::Float(RealMatrix::new(data).with_tol(m.tol))
            }
        }
    }
}

/// The triple `(A, B, c)` with its class partition.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub a: RatMatrix,
    pub b: ExponentMatrix,
    pub c: Vec<f64>,
    pub partition: ClassPartition,
    pub tol: Tolerances,
}

impl ProblemInstance {
    /// Validates the instance; uses the finest partition when none is given.
    pub fn new(a: RatMatrix, b: ExponentMatrix, c: Vec<f64>, partition: Option<ClassPartition>) -> Result<Self> {
        let m = a.cols();
        if b.cols() != m {
            return Err(Error::DimensionMismatch(format!("B has {} columns, A has {m}", b.cols())));
        }
        if c.len() != m {
            return Err(Error::DimensionMismatch(format!("c has length {}, expected {m}", c.len())));
        }
        if let Some(bad) = c.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::NotInCoefficientCone(format!("coefficient {bad} is not positive")));
        }
        if let ExponentMatrix::Float(f) = &b {
            if f.data.iter().any(|x| !x.is_finite()) {
                return Err(Error::parse("B", "exponents must be finite"));
            }
        }
        let finest = finest_partition(&a)?;
        let partition = match partition {
            None => finest,
            Some(p) => {
                p.validate(m)?;
                if !geometry::is_direct_product(&a, &p.blocks()) {
                    return Err(Error::IncompatiblePartition);
                }
                p
            }
        };
        for block in partition.blocks() {
            geometry::extreme_rays_scone(&a.select_columns(&block))?;
        }
        Ok(ProblemInstance {
            a,
            b,
            c,
            partition,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        if let ExponentMatrix::Float(f) = &mut self.b {
            f.tol = tol.rank;
        }
        self.tol = tol;
        self
    }

    /// Number of variables `n`.
    pub fn n(&self) -> usize {
        self.b.rows()
    }

    /// Number of equations `n'`.
    pub fn n_eq(&self) -> usize {
        self.a.rows()
    }

    /// Number of monomials `m`.
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn num_classes(&self) -> usize {
        self.partition.num_classes()
    }

    pub fn geometry(&self) -> Result<CoefficientGeometry> {
        coefficient_geometry(&self.a, &self.partition)
    }
}

/// Block incidence matrix `I`, `m x (m - l)`.
pub fn incidence_matrix(partition: &ClassPartition) -> RatMatrix {
    let m = partition.num_columns();
    let blocks = partition.blocks();
    let mut out = RatMatrix::zeros(m, m - blocks.len());
    let mut col = 0;
    for block in &blocks {
        let last = *block.last().unwrap();
        for &j in &block[..block.len() - 1] {
            out.set(j, col, Rational::one());
            out.set(last, col, -Rational::one());
            col += 1;
        }
    }
    out
}

/// Block "Cayley" matrix `J`, `l x m`.
pub fn cayley_matrix(partition: &ClassPartition) -> RatMatrix {
    let blocks = partition.blocks();
    let mut out = RatMatrix::zeros(blocks.len(), partition.num_columns());
    for (i, block) in blocks.iter().enumerate() {
        for &j in block {
            out.set(i, j, Rational::one());
        }
    }
    out
}

/// Exact versions of the exponent-side matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAux {
    pub m: RatMatrix,
    pub b_prime: RatMatrix,
    pub g: RatMatrix,
    pub g_prime: RatMatrix,
    pub m_star: RatMatrix,
    pub e: RatMatrix,
    pub l_perp: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxMatrices {
    pub i: RatMatrix,
    pub j: RatMatrix,
    pub a_prime: RatMatrix,
    pub exact: Option<ExactAux>,
    pub m: DMatrix<f64>,
    pub b_prime: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub g_prime: DMatrix<f64>,
    pub m_star: DMatrix<f64>,
    pub e: DMatrix<f64>,
    /// Basis of `L^perp = ker M^T`, one vector per entry.
    pub l_perp: Vec<Vec<f64>>,
    pub dim_l: usize,
    pub d: usize,
}

fn normalize_columns(g: &RatMatrix) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = g
        .columns()
        .into_iter()
        .map(|col| match col.iter().find(|x| !x.is_zero()) {
            Some(first) => {
                let s = first.recip();
                col.iter().map(|x| x * &s).collect()
            }
            None => col,
        })
        .collect();
    RatMatrix::from_columns(&cols, g.rows())
}

pub fn build_aux(p: &ProblemInstance) -> Result<AuxMatrices> {
    let i = incidence_matrix(&p.partition);
    let j = cayley_matrix(&p.partition);
    if !j.mul(&i).is_zero() {
        return Err(Error::Shape("J I != 0".into()));
    }
    let a_prime = p.a.vstack(&j);
    let aux = match &p.b {
        ExponentMatrix::Exact(b) => {
            let m = b.mul(&i);
            let b_prime = b.vstack(&j);
            let g = m.gale_dual();
            let g_prime = normalize_columns(&i.mul(&g));
            // rescaling G' columns is rescaling G
            let g = RatMatrix::from_columns(
                &g.columns()
                    .into_iter()
                    .zip(i.mul(&g).columns())
                    .zip(g_prime.columns())
                    .map(|((gc, raw), norm)| {
                        let k = raw.iter().position(|x| !x.is_zero()).unwrap();
                        let s = &norm[k] / &raw[k];
                        gc.iter().map(|x| x * &s).collect()
                    })
                    .collect::<Vec<_>>(),
                m.cols(),
            );
            let m_star = m.generalized_inverse();
            let e = i.mul(&m_star);
            let mut l_perp = m.transpose().kernel_basis();
            for v in &mut l_perp {
                *v = linalg::primitive_integer_vector(v);
                orient_positive(v);
            }
            if !b_prime.mul(&g_prime).is_zero() {
                return Err(Error::Shape("B' G' != 0".into()));
            }
            if m.mul(&m_star).mul(&m) != m {
                return Err(Error::Shape("M M* M != M".into()));
            }
            let dim_l = m.rank();
            let d = g.cols();
            AuxMatrices {
                m: m.to_dmatrix(),
                b_prime: b_prime.to_dmatrix(),
                g: g.to_dmatrix(),
                g_prime: g_prime.to_dmatrix(),
                m_star: m_star.to_dmatrix(),
                e: e.to_dmatrix(),
                l_perp: l_perp.iter().map(|v| v.iter().map(to_f64).collect()).collect(),
                exact: Some(ExactAux {
                    m,
                    b_prime,
                    g,
                    g_prime,
                    m_star,
                    e,
                    l_perp,
                }),
                i,
                j,
                a_prime,
                dim_l,
                d,
            }
        }
        ExponentMatrix::Float(b) => {
            let i_f = i.to_dmatrix();
            let m = &b.data * &i_f;
            let m_real = RealMatrix::new(m.clone()).with_tol(p.tol.rank);
            let mut g = m_real.gale_dual();
            for mut col in g.column_iter_mut() {
                let scale = col.iter().cloned().fold(0.0_f64, |a, x| a.max(x.abs()));
                if let Some(first) = col.iter().cloned().find(|x| x.abs() > 1e-12 * scale) {
                    col /= first;
                }
            }
            let g_prime = &i_f * &g;
            let m_star = m_real.generalized_inverse();
            let e = &i_f * &m_star;
            let l_perp: Vec<Vec<f64>> = RealMatrix::new(m.transpose())
                .with_tol(p.tol.rank)
                .kernel_basis()
                .into_iter()
                .map(|mut v| {
                    if let Some(first) = v.iter().cloned().find(|x| x.abs() > 1e-12) {
                        if first < 0.0 {
                            v.iter_mut().for_each(|x| *x = -*x);
                        }
                    }
                    v
                })
                .collect();
            let b_prime = {
                let j_f = j.to_dmatrix();
                let mut out = DMatrix::zeros(b.rows() + j.rows(), b.cols());
                out.view_mut((0, 0), (b.rows(), b.cols())).copy_from(&b.data);
                out.view_mut((b.rows(), 0), (j.rows(), b.cols())).copy_from(&j_f);
                out
            };
            let scale = max_abs(&m).max(1.0);
            if max_abs(&(&b_prime * &g_prime)) > 1e-8 * scale * max_abs(&g_prime).max(1.0) {
                return Err(Error::Shape("B' G' != 0".into()));
            }
            if max_abs(&(&m * &m_star * &m - &m)) > 1e-8 * scale {
                return Err(Error::Shape("M M* M != M".into()));
            }
            let d = g.ncols();
            AuxMatrices {
                dim_l: m.ncols() - d,
                d,
                m,
                b_prime,
                g,
                g_prime,
                m_star,
                e,
                l_perp,
                exact: None,
                i,
                j,
                a_prime,
            }
        }
    };
    Ok(aux)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "D0_SUBSPACE")]
    D0Subspace,
    #[serde(rename = "D0_FULL")]
    D0Full,
    #[serde(rename = "DPOS")]
    DPos,
    #[serde(rename = "NONGENERIC")]
    NonGeneric,
}

impl Case {
    pub fn label(&self) -> &'static str {
        match self {
            Case::D0Subspace => "D0_SUBSPACE",
            Case::D0Full => "D0_FULL",
            Case::DPos => "DPOS",
            Case::NonGeneric => "NONGENERIC",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub n_eq: usize,
    pub d: usize,
    pub dim_l: usize,
    pub dim_p: usize,
    pub generic: bool,
    pub case: Case,
}

pub fn classify_with(p: &ProblemInstance, aux: &AuxMatrices) -> Classification {
    let (l, m, n, n_eq) = (p.num_classes(), p.m(), p.n(), p.n_eq());
    let generic = aux.dim_l == n.min(m - l);
    let case = if !generic {
        Case::NonGeneric
    } else if m < n + l {
        Case::D0Subspace
    } else if m == n + l {
        Case::D0Full
    } else {
        Case::DPos
    };
    Classification {
        l,
        m,
        n,
        n_eq,
        d: aux.d,
        dim_l: aux.dim_l,
        dim_p: m - l - n_eq,
        generic,
        case,
    }
}

pub fn classify(p: &ProblemInstance) -> Result<Classification> {
    Ok(classify_with(p, &build_aux(p)?))
}

/// One condition `y^z = c^z` on the coefficient polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct DependencyCondition {
    pub z: Vec<f64>,
    pub z_exact: Option<Vec<Rational>>,
    /// `ln(c^z)`.
    pub ln_target: f64,
}

impl DependencyCondition {
    pub fn target(&self) -> f64 {
        self.ln_target.exp()
    }

    /// `ln(y^z) - ln(c^z)`.
    pub fn residual(&self, y: &[f64]) -> f64 {
        self.z
            .iter()
            .zip(y)
            .filter(|(z, _)| **z != 0.0)
            .map(|(z, y)| z * y.ln())
            .sum::<f64>()
            - self.ln_target
    }
}

pub fn dependency_conditions(aux: &AuxMatrices, c: &[f64]) -> Vec<DependencyCondition> {
    (0..aux.d)
        .map(|k| {
            let z: Vec<f64> = aux.g_prime.column(k).iter().cloned().collect();
            let ln_target = z.iter().zip(c).map(|(z, c)| z * c.ln()).sum();
            DependencyCondition {
                z_exact: aux.exact.as_ref().map(|e| e.g_prime.column(k)),
                z,
                ln_target,
            }
        })
        .collect()
}

/// Max-norm of all condition residuals at `y`.
pub fn condition_residual(conditions: &[DependencyCondition], y: &[f64]) -> f64 {
    conditions.iter().map(|c| c.residual(y).abs()).fold(0.0, f64::max)
}

/// `x = (y o c^-1)^E` for `y` in the positive coefficient cone satisfying
/// every dependency condition.
pub fn lift_solution(p: &ProblemInstance, aux: &AuxMatrices, y: &[f64]) -> Result<Vec<f64>> {
    let m = p.m();
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!("y has length {}, expected {m}", y.len())));
    }
    if y.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::NotInCoefficientCone("y is not strictly positive".into()));
    }
    let ymax = y.iter().cloned().fold(0.0, f64::max);
    for i in 0..p.a.rows() {
        let r: f64 = (0..m).map(|j| to_f64(p.a.get(i, j)) * y[j]).sum();
        let scale: f64 = (0..m).map(|j| (to_f64(p.a.get(i, j)) * y[j]).abs()).fold(0.0, f64::max);
        if r.abs() > 1e-9 * scale.max(ymax * f64::EPSILON) {
            return Err(Error::NotInCoefficientCone(format!("A y has relative entry {:.3e}", r / scale)));
        }
    }
    let conditions = dependency_conditions(aux, &p.c);
    let res = condition_residual(&conditions, y);
    if res > p.tol.condition {
        return Err(Error::ConditionViolated(res));
    }
    Ok(lift_unchecked(aux, &p.c, y))
}

pub(crate) fn lift_unchecked(aux: &AuxMatrices, c: &[f64], y: &[f64]) -> Vec<f64> {
    let n = aux.e.ncols();
    (0..n)
        .map(|k| {
            (0..y.len())
                .map(|j| {
                    let e = aux.e[(j, k)];
                    if e == 0.0 {
                        0.0
                    } else {
                        e * (y[j].ln() - c[j].ln())
                    }
                })
                .sum::<f64>()
                .exp()
        })
        .collect()
}

/// `x o e^v` with `v = sum_k coords_k * basis_k` of `L^perp`.
pub fn shift_along_l_perp(aux: &AuxMatrices, x: &[f64], coords: &[f64]) -> Result<Vec<f64>> {
    if coords.len() != aux.l_perp.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} L-perp coordinates given, expected {}",
            coords.len(),
            aux.l_perp.len()
        )));
    }
    Ok(x.iter()
        .enumerate()
        .map(|(i, xi)| {
            let v: f64 = coords.iter().zip(&aux.l_perp).map(|(t, b)| t * b[i]).sum();
            xi * v.exp()
        })
        .collect())
}

/// Max over equations of `|sum_j a_ij c_j x^{b_j}|` divided by the largest
/// monomial magnitude in that equation.
pub fn residual(p: &ProblemInstance, x: &[f64]) -> f64 {
    let b = p.b.to_dmatrix();
    let m = p.m();
    let ln_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ln_mono: Vec<f64> = (0..m)
        .map(|j| p.c[j].ln() + (0..p.n()).map(|i| if b[(i, j)] == 0.0 { 0.0 } else { b[(i, j)] * ln_x[i] }).sum::<f64>())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..p.a.rows() {
        let a: Vec<f64> = (0..m).map(|j| to_f64(p.a.get(i, j))).collect();
        let top = (0..m)
            .filter(|&j| a[j] != 0.0)
            .map(|j| a[j].abs().ln() + ln_mono[j])
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            continue;
        }
        let sum: f64 = (0..m)
            .filter(|&j| a[j] != 0.0)
            .map(|j| a[j].signum() * (a[j].abs().ln() + ln_mono[j] - top).exp())
            .sum();
        worst = worst.max(sum.abs());
    }
    worst
}

/// Maps a solution back to the coefficient polytope:
/// `y_i = (c o x^B)_i / (u_i . (c o x^B)_i)` per class.
pub fn project_to_polytope(p: &ProblemInstance, geo: &CoefficientGeometry, x: &[f64]) -> Vec<f64> {
    let b = p.b.to_dmatrix();
    let m = p.m();
    let ln_mono: Vec<f64> = (0..m)
        .map(|j| p.c[j].ln() + (0..p.n()).map(|i| if b[(i, j)] == 0.0 { 0.0 } else { b[(i, j)] * x[i].ln() }).sum::<f64>())
        .collect();
    let mut y = vec![0.0; m];
    for class in &geo.classes {
        let top = class.columns.iter().map(|&j| ln_mono[j]).fold(f64::NEG_INFINITY, f64::max);
        let scaled: Vec<f64> = class.columns.iter().map(|&j| (ln_mono[j] - top).exp()).collect();
        let norm: f64 = scaled.iter().zip(&class.u).map(|(s, u)| s * to_f64(u)).sum();
        for (k, &j) in class.columns.iter().enumerate() {
            y[j] = scaled[k] / norm;
        }
    }
    y
}

/// Explicit description of the solution set.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionParametrization {
    pub e: DMatrix<f64>,
    pub e_exact: Option<RatMatrix>,
    pub c: Vec<f64>,
    pub classes: Vec<ClassGeometry>,
    pub l_perp: Vec<Vec<f64>>,
    pub l_perp_exact: Option<Vec<Vec<Rational>>>,
    pub conditions: Vec<DependencyCondition>,
    aux: AuxMatrices,
    m: usize,
}

impl SolutionParametrization {
    pub fn new(p: &ProblemInstance) -> Result<Self> {
        let aux = build_aux(p)?;
        let geo = p.geometry()?;
        Ok(SolutionParametrization {
            e: aux.e.clone(),
            e_exact: aux.exact.as_ref().map(|x| x.e.clone()),
            c: p.c.clone(),
            classes: geo.classes,
            l_perp: aux.l_perp.clone(),
            l_perp_exact: aux.exact.as_ref().map(|x| x.l_perp.clone()),
            conditions: dependency_conditions(&aux, &p.c),
            aux,
            m: p.m(),
        })
    }

    pub fn aux(&self) -> &AuxMatrices {
        &self.aux
    }

    /// Number of convex weights expected per class.
    pub fn weights_per_class(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.rays.len()).collect()
    }

    /// Point `y = sum_k w_k r_k` of the coefficient cone, per class.
    pub fn point(&self, weights: &[Vec<f64>]) -> Result<Vec<f64>> {
        if weights.len() != self.classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weight groups given, expected {}",
                weights.len(),
                self.classes.len()
            )));
        }
        let mut y = vec![0.0; self.m];
        for (class, w) in self.classes.iter().zip(weights) {
            if w.len() != class.rays.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} weights given for a class with {} rays",
                    w.len(),
                    class.rays.len()
                )));
            }
            if w.iter().any(|x| !(*x >= 0.0)) {
                return Err(Error::NotInCoefficientCone("negative convex weight".into()));
            }
            for (wk, ray) in w.iter().zip(&class.rays) {
                for (k, &j) in class.columns.iter().enumerate() {
                    y[j] += wk * to_f64(&ray[k]);
                }
            }
        }
        Ok(y)
    }

    /// Turns `k - 1` free weights per class into convex weights.
    pub fn weights_from_free(&self, free: &[f64]) -> Result<Vec<Vec<f64>>> {
        let expected: usize = self.classes.iter().map(|c| c.rays.len() - 1).sum();
        if free.len() != expected {
            return Err(Error::DimensionMismatch(format!("{} polytope coordinates given, expected {expected}", free.len())));
        }
        let mut it = free.iter();
        Ok(self
            .classes
            .iter()
            .map(|c| {
                let mut w: Vec<f64> = it.by_ref().take(c.rays.len() - 1).cloned().collect();
                w.push(1.0 - w.iter().sum::<f64>());
                w
            })
            .collect())
    }

    /// Solution for the given polytope weights and `L^perp` coordinates.
    pub fn evaluate(&self, weights: &[Vec<f64>], l_perp_coords: &[f64]) -> Result<Vec<f64>> {
        let y = self.point(weights)?;
        if y.iter().any(|v| *v <= 0.0) {
            return Err(Error::NotInCoefficientCone("weights give a boundary point of P".into()));
        }
        let res = condition_residual(&self.conditions, &y);
        if res > 1e-9 {
            return Err(Error::ConditionViolated(res));
        }
        let x = lift_unchecked(&self.aux, &self.c, &y);
        shift_along_l_perp(&self.aux, &x, l_perp_coords)
    }

    /// Human-readable formula for each `x_k` in terms of `y`.
    pub fn formulas(&self) -> Vec<String> {
        let n = self.e.ncols();
        (0..n)
            .map(|k| {
                let factors: Vec<String> = (0..self.m)
                    .filter_map(|j| {
                        let txt = match &self.e_exact {
                            Some(e) if !e.get(j, k).is_zero() => linalg::format_rational(e.get(j, k)),
                            Some(_) => return None,
                            None if self.e[(j, k)].abs() < 1e-14 => return None,
                            None => format!("{}", self.e[(j, k)]),
                        };
                        Some(format!("(y{}/c{})^{}", j + 1, j + 1, txt))
                    })
                    .collect();
                if factors.is_empty() {
                    format!("x{} = 1", k + 1)
                } else {
                    format!("x{} = {}", k + 1, factors.join(" "))
                }
            })
            .collect()
    }
}

/// Parametrization of the solution set when the monomial dependency is zero.
pub fn solution_set_d0(p: &ProblemInstance) -> Result<SolutionParametrization> {
    let sp = SolutionParametrization::new(p)?;
    if sp.aux.d != 0 {
        return Err(Error::NotDependencyZero(sp.aux.d));
    }
    Ok(sp)
}

/// `I^T diag(ybar^-1)`, the binomial equations with coefficient polytope
/// `{ybar}`.
pub fn binomial_form(ybar: &[Rational], partition: &ClassPartition) -> Result<RatMatrix> {
    if ybar.len() != partition.num_columns() {
        return Err(Error::DimensionMismatch("ybar length differs from m".into()));
    }
    if ybar.iter().any(|y| !y.is_positive()) {
        return Err(Error::NotInCoefficientCone("ybar must be positive".into()));
    }
    let it = incidence_matrix(partition).transpose();
    let mut out = it.clone();
    for r in 0..it.rows() {
        for (j, y) in ybar.iter().enumerate() {
            out.set(r, j, it.get(r, j) / y);
        }
    }
    Ok(out)
}

/// One class of a decomposed system.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsystem {
    /// Original monomial columns of the class.
    pub columns: Vec<usize>,
    /// Original variables with a nonzero exponent in the class.
    pub variables: Vec<usize>,
    pub instance: ProblemInstance,
}

/// Splits the system along its classes when the dependency subspace is a
/// product over them.
pub fn decompose(p: &ProblemInstance) -> Result<Vec<Subsystem>> {
    let aux = build_aux(p)?;
    let blocks = p.partition.blocks();
    if blocks.len() > 1 {
        let d = aux.d;
        let parts: usize = blocks
            .iter()
            .map(|block| {
                let outside: Vec<usize> = (0..p.m()).filter(|j| !block.contains(j)).collect();
                let rank = match &aux.exact {
                    Some(ex) => ex.g_prime.select_rows(&outside).rank(),
                    None => RealMatrix::new(aux.g_prime.select_rows(&outside)).with_tol(p.tol.rank).rank(),
                };
                d - rank
            })
            .sum();
        if parts != d {
            return Err(Error::NotDecomposable);
        }
    }
    let b = p.b.to_dmatrix();
    blocks
        .into_iter()
        .map(|block| {
            let a_sub = p.a.select_columns(&block);
            let a_sub = a_sub.select_rows(&a_sub.independent_rows());
            let variables: Vec<usize> = (0..p.n()).filter(|&i| block.iter().any(|&j| b[(i, j)] != 0.0)).collect();
            let b_sub = p.b.select_columns(&block).select_rows(&variables);
            let c_sub = block.iter().map(|&j| p.c[j]).collect();
            let instance = ProblemInstance::new(a_sub, b_sub, c_sub, Some(ClassPartition::contiguous(vec![block.len()])))?
                .with_tolerances(p.tol);
            Ok(Subsystem {
                columns: block,
                variables,
                instance,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub holds: bool,
    /// For uniqueness: a nonzero common sign vector. For unique existence: a
    /// sign vector of `ker A'` outside the lower closure of `sign(D)`.
    pub witness: Option<SignVector>,
    pub reason: String,
}

fn sign_enumeration_guard(p: &ProblemInstance) -> Result<()> {
    if p.m() > geometry::SIGN_ENUMERATION_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim: p.m(),
            limit: geometry::SIGN_ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn exact_b_prime(p: &ProblemInstance) -> RatMatrix {
    p.b.to_rational().vstack(&cayley_matrix(&p.partition))
}

/// `sign(ker A') ∩ sign(D^perp) = {0}` implies at most one solution on the
/// coefficient polytope for every `c`.
pub fn certify_uniqueness(p: &ProblemInstance) -> Result<Certificate> {
    sign_enumeration_guard(p)?;
    let m = p.m();
    let a_prime = p.a.vstack(&cayley_matrix(&p.partition));
    let ker = a_prime.kernel_basis();
    if ker.is_empty() {
        return Ok(Certificate {
            holds: true,
            witness: None,
            reason: "ker A' = {0}".into(),
        });
    }
    let b_prime = exact_b_prime(p);
    let d_perp: Vec<Vec<Rational>> = b_prime.select_rows(&b_prime.independent_rows()).to_rows();
    for sigma in sign_vectors(&ker, m)? {
        if sigma.is_zero() {
            continue;
        }
        if sign_feasible(&d_perp, &sigma.0) {
            return Ok(Certificate {
                holds: false,
                witness: Some(sigma),
                reason: "nonzero sign vector shared by ker A' and D-perp".into(),
            });
        }
    }
    Ok(Certificate {
        holds: true,
        witness: None,
        reason: "sign(ker A') and sign(D-perp) meet only in 0".into(),
    })
}

/// `dim ker A' = d` and `sign(ker A') ⊆ sign(D)^↓` imply exactly one
/// solution on the coefficient polytope for every `c`.
pub fn certify_unique_existence(p: &ProblemInstance) -> Result<Certificate> {
    sign_enumeration_guard(p)?;
    let m = p.m();
    let a_prime = p.a.vstack(&cayley_matrix(&p.partition));
    let ker = a_prime.kernel_basis();
    let dep = exact_b_prime(p).kernel_basis();
    if ker.len() != dep.len() {
        return Ok(Certificate {
            holds: false,
            witness: None,
            reason: format!("dim ker A' = {} differs from d = {}", ker.len(), dep.len()),
        });
    }
    let closure = lower_closure(&sign_vectors(&dep, m)?);
    let ker_signs: BTreeSet<SignVector> = sign_vectors(&ker, m)?;
    if let Some(sigma) = ker_signs.into_iter().find(|s| !closure.contains(s)) {
        return Ok(Certificate {
            holds: false,
            witness: Some(sigma),
            reason: "sign vector of ker A' not below any sign vector of D".into(),
        });
    }
    Ok(Certificate {
        holds: true,
        witness: None,
        reason: "dim ker A' = d and sign(ker A') lies in the lower closure of sign(D)".into(),
    })
}
