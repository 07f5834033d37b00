//! Exact rational and binary64 linear algebra.
//!
//! Everything derived from the coefficient matrix (kernels, rays, sign
//! vectors) goes through [`RatMatrix`], which never rounds. Exponent data with
//! irrational entries lives in [`RealMatrix`], where rank decisions are made
//! from singular values relative to the largest one.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Default relative tolerance for rank decisions on float matrices.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Parses `"p/q"`, integers and decimal literals (`"1.392"`, `"-2.5e-3"`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(joined.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scales a rational vector to coprime integers, keeping its direction.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Rescales so that the first nonzero entry is positive.
pub fn orient_positive(v: &mut [Rational]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        RatMatrix { rows: r, cols, data }
    }

    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> RatMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        RatMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    /// Deterministic: the same input always yields the same basis.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// A matrix `G` with `im G = ker self` and independent columns.
    pub fn gale_dual(&self) -> RatMatrix {
        RatMatrix::from_columns(&self.kernel_basis(), self.cols)
    }

    /// Indices of the first maximal set of linearly independent rows.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).any(|&c| c >= n) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Generalized inverse `M*` with `M M* M = M`: a maximal invertible
    /// submatrix (greedy rows, pivot columns) is inverted and padded with
    /// zeros.
    pub fn generalized_inverse(&self) -> RatMatrix {
        let cols = self.rref().1;
        let rows = self.independent_rows();
        let sub = self.select_rows(&rows).select_columns(&cols);
        let inv = sub.inverse().expect("maximal submatrix selected by elimination is invertible");
        let mut out = Self::zeros(self.cols, self.rows);
        for (k, &c) in cols.iter().enumerate() {
            for (l, &r) in rows.iter().enumerate() {
                out.set(c, r, inv.get(k, l).clone());
            }
        }
        out
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::new(DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j))))
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }
}

/// Dense binary64 matrix with a relative rank tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    pub data: DMatrix<f64>,
    pub tol: f64,
}

impl RealMatrix {
    pub fn new(data: DMatrix<f64>) -> Self {
        RealMatrix {
            data,
            tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol >= 0.0);
        self.tol = tol;
        self
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    /// SVD of the matrix padded with zero rows to at least square shape, so
    /// that the right singular vectors span the whole domain.
    fn padded_svd(&self) -> nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
        let (r, c) = self.data.shape();
        let padded = if r < c {
            let mut p = DMatrix::zeros(c, c);
            p.view_mut((0, 0), (r, c)).copy_from(&self.data);
            p
        } else {
            self.data.clone()
        };
        nalgebra::SVD::new(padded, true, true)
    }

    fn cutoff(svals: &[f64], tol: f64) -> f64 {
        let smax = svals.iter().cloned().fold(0.0, f64::max);
        tol * smax
    }

    pub fn rank(&self) -> usize {
        if self.data.is_empty() {
            return 0;
        }
        let svd = self.padded_svd();
        let s: Vec<f64> = svd.singular_values.iter().cloned().collect();
        let cut = Self::cutoff(&s, self.tol);
        s.iter().filter(|&&x| x > cut && x > 0.0).count()
    }

    /// Right singular vectors whose singular values fall below
    /// `tol * sigma_max`.
    pub fn kernel_basis(&self) -> Vec<Vec<f64>> {
        let c = self.cols();
        if c == 0 {
            return Vec::new();
        }
        if self.rows() == 0 {
            return (0..c)
                .map(|j| (0..c).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
        }
        let svd = self.padded_svd();
        let s: Vec<f64> = svd.singular_values.iter().cloned().collect();
        let cut = Self::cutoff(&s, self.tol);
        let vt = svd.v_t.expect("requested V^T");
        s.iter()
            .enumerate()
            .filter(|(_, &x)| x <= cut || x == 0.0)
            .map(|(k, _)| vt.row(k).iter().cloned().collect())
            .collect()
    }

    pub fn gale_dual(&self) -> DMatrix<f64> {
        let basis = self.kernel_basis();
        DMatrix::from_fn(self.cols(), basis.len(), |i, j| basis[j][i])
    }

    /// Moore-Penrose pseudo-inverse; a generalized inverse in particular.
    pub fn generalized_inverse(&self) -> DMatrix<f64> {
        let (r, c) = self.data.shape();
        if r == 0 || c == 0 {
            return DMatrix::zeros(c, r);
        }
        let svd = nalgebra::SVD::new(self.data.clone(), true, true);
        let s: Vec<f64> = svd.singular_values.iter().cloned().collect();
        let cut = Self::cutoff(&s, self.tol).max(f64::MIN_POSITIVE);
        svd.pseudo_inverse(cut).expect("SVD computed with U and V")
    }
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}
