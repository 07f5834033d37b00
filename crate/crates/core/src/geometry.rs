//! Coefficient-side geometry: class partition, s-cone rays, polytope
//! vertices, sign vectors and the segment normal form.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, primitive_integer_vector, RatMatrix, Rational};

/// Largest class size accepted by the circuit enumeration.
pub const RAY_ENUMERATION_LIMIT: usize = 20;
/// Largest ambient dimension accepted by sign-vector enumeration.
pub const SIGN_ENUMERATION_LIMIT: usize = 12;

/// Partition of the monomials into classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    /// Class sizes `m_1, ..., m_l`.
    pub sizes: Vec<usize>,
    /// `permutation[k]` is the original column at position `k` of the
    /// block-contiguous ordering.
    pub permutation: Vec<usize>,
}

impl ClassPartition {
    /// Contiguous blocks in the given column order.
    pub fn contiguous(sizes: Vec<usize>) -> Self {
        let m = sizes.iter().sum();
        ClassPartition {
            sizes,
            permutation: (0..m).collect(),
        }
    }

    /// Builds a partition from explicit blocks of original column indices.
    /// Columns within a block are kept ascending and blocks are ordered by
    /// their smallest column.
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        ClassPartition {
            sizes: blocks.iter().map(Vec::len).collect(),
            permutation: blocks.into_iter().flatten().collect(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_columns(&self) -> usize {
        self.permutation.len()
    }

    /// Original column indices of each class.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut start = 0;
        for &s in &self.sizes {
            out.push(self.permutation[start..start + s].to_vec());
            start += s;
        }
        out
    }

    /// Class index of every original column.
    pub fn class_of(&self) -> Vec<usize> {
        let mut cls = vec![0; self.num_columns()];
        for (i, b) in self.blocks().iter().enumerate() {
            for &j in b {
                cls[j] = i;
            }
        }
        cls
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.sizes.iter().any(|&s| s == 0) {
            return Err(Error::parse("classes", "class sizes must be positive"));
        }
        if self.sizes.iter().sum::<usize>() != m || self.permutation.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "class sizes sum to {}, expected {m}",
                self.sizes.iter().sum::<usize>()
            )));
        }
        let mut seen = vec![false; m];
        for &j in &self.permutation {
            if j >= m || seen[j] {
                return Err(Error::Shape("class permutation is not a bijection".into()));
            }
            seen[j] = true;
        }
        Ok(())
    }
}

fn ensure_full_row_rank(a: &RatMatrix) -> Result<()> {
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::RankDeficient { rank, rows: a.rows() });
    }
    Ok(())
}

/// Finest partition of the columns such that `ker A` is the direct product
/// of its coordinate projections.
pub fn finest_partition(a: &RatMatrix) -> Result<ClassPartition> {
    ensure_full_row_rank(a)?;
    let m = a.cols();
    let kernel = a.kernel_basis();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    if !kernel.is_empty() {
        // rows of the reduced kernel basis are fundamental circuits
        let (reduced, _) = RatMatrix::from_rows(kernel, m).rref();
        for i in 0..reduced.rows() {
            let support: Vec<usize> = (0..m).filter(|&j| !reduced.get(i, j).is_zero()).collect();
            for w in support.windows(2) {
                let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); m];
    for j in 0..m {
        let r = find(&mut parent, j);
        blocks[r].push(j);
    }
    Ok(ClassPartition::from_blocks(blocks))
}

/// True when `ker A` is the direct product of its projections onto the
/// given blocks.
pub fn is_direct_product(a: &RatMatrix, blocks: &[Vec<usize>]) -> bool {
    let total = a.cols() - a.rank();
    let parts: usize = blocks
        .iter()
        .map(|b| {
            let sub = a.select_columns(b);
            b.len() - sub.rank()
        })
        .sum();
    total == parts
}

/// Support-minimal nonnegative vectors of `ker A_i`, as coprime integer
/// vectors, ordered by support size and then lexicographically by support.
pub fn extreme_rays_scone(a_i: &RatMatrix) -> Result<Vec<Vec<Rational>>> {
    let m = a_i.cols();
    if m > RAY_ENUMERATION_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim: m,
            limit: RAY_ENUMERATION_LIMIT,
        });
    }
    let max_size = (a_i.rank() + 1).min(m);
    let mut rays = Vec::new();
    let mut covered = vec![false; m];
    for size in 1..=max_size {
        for subset in Combinations::new(m, size) {
            let kernel = a_i.select_columns(&subset).kernel_basis();
            if kernel.len() != 1 {
                continue;
            }
            let v = &kernel[0];
            let positive = v.iter().all(Signed::is_positive);
            let negative = v.iter().all(Signed::is_negative);
            if !positive && !negative {
                continue;
            }
            let mut ray = vec![Rational::zero(); m];
            for (k, &j) in subset.iter().enumerate() {
                ray[j] = if positive { v[k].clone() } else { -v[k].clone() };
                covered[j] = true;
            }
            rays.push(primitive_integer_vector(&ray));
        }
    }
    if m == 0 || !covered.iter().all(|&c| c) {
        return Err(Error::EmptyInterior);
    }
    Ok(rays)
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let k = cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Scales each ray onto the hyperplane `u . y = 1`.
pub fn polytope_vertices(rays: &[Vec<Rational>], u: &[Rational]) -> Vec<Vec<Rational>> {
    rays.iter()
        .map(|r| {
            let s = dot(u, r);
            assert!(s.is_positive(), "u must be positive on every ray");
            r.iter().map(|x| x / &s).collect()
        })
        .collect()
}

/// Per-class coefficient geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassGeometry {
    /// Original column indices of the class.
    pub columns: Vec<usize>,
    pub rays: Vec<Vec<Rational>>,
    pub vertices: Vec<Vec<Rational>>,
    pub u: Vec<Rational>,
    pub normal_form: Option<SegmentNormalForm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientGeometry {
    pub classes: Vec<ClassGeometry>,
    pub dim_c: usize,
    pub dim_p: usize,
}

/// Rays, vertices and default normalization for every class.
pub fn coefficient_geometry(a: &RatMatrix, partition: &ClassPartition) -> Result<CoefficientGeometry> {
    let mut classes = Vec::new();
    for block in partition.blocks() {
        let a_i = a.select_columns(&block);
        let rays = extreme_rays_scone(&a_i)?;
        let (u, normal_form) = match segment_normal_form(&a_i) {
            Ok(nf) => (nf.default_u(), Some(nf)),
            Err(_) => (vec![linalg::ratio(1, block.len() as i64); block.len()], None),
        };
        let vertices = polytope_vertices(&rays, &u);
        classes.push(ClassGeometry {
            columns: block,
            rays,
            vertices,
            u,
            normal_form,
        });
    }
    let dim_c = a.cols() - a.rank();
    Ok(CoefficientGeometry {
        dim_p: dim_c - classes.len(),
        classes,
        dim_c,
    })
}

/// A vector of signs in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn of(v: &[Rational]) -> Self {
        SignVector(
            v.iter()
                .map(|x| {
                    if x.is_positive() {
                        1
                    } else if x.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .collect(),
        )
    }

    pub fn zero(m: usize) -> Self {
        SignVector(vec![0; m])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        SignVector(self.0.iter().map(|s| -s).collect())
    }

    /// Componentwise `self <= other` with `0 < -` and `0 < +`.
    pub fn conforms_to(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || a == b)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|&x| match x {
                1 => "+",
                -1 => "-",
                _ => "0",
            })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// Whether some `x = sum_k lambda_k basis_k` has `sign(x_j) = sigma_j` for
/// every `j < sigma.len()`.
pub fn sign_feasible(basis: &[Vec<Rational>], sigma: &[i8]) -> bool {
    let k = basis.len();
    if k == 0 {
        return sigma.iter().all(|&s| s == 0);
    }
    let form = |j: usize| -> Vec<Rational> { basis.iter().map(|b| b[j].clone()).collect() };
    let equalities: Vec<Vec<Rational>> = (0..sigma.len()).filter(|&j| sigma[j] == 0).map(form).collect();
    let strict: Vec<Vec<Rational>> = (0..sigma.len())
        .filter(|&j| sigma[j] != 0)
        .map(|j| {
            let f = form(j);
            if sigma[j] > 0 {
                f
            } else {
                f.into_iter().map(|x| -x).collect()
            }
        })
        .collect();
    if strict.is_empty() {
        return true;
    }
    let n = if equalities.is_empty() {
        RatMatrix::identity(k)
    } else {
        RatMatrix::from_rows(equalities, k).gale_dual()
    };
    if n.cols() == 0 {
        return false;
    }
    let rows: Vec<Vec<Rational>> = strict
        .iter()
        .map(|s| (0..n.cols()).map(|c| dot(s, &n.column(c))).collect())
        .collect();
    strict_homogeneous_feasible(rows)
}

/// Fourier-Motzkin test for `exists mu: r . mu > 0` for every row `r`.
fn strict_homogeneous_feasible(rows: Vec<Vec<Rational>>) -> bool {
    let mut rows: BTreeSet<Vec<Rational>> = rows.into_iter().map(|r| primitive_integer_vector(&r)).collect();
    let vars = rows.iter().next().map_or(0, Vec::len);
    for var in 0..vars {
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r[var].is_positive() {
                pos.push(r);
            } else if r[var].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        let mut next: BTreeSet<Vec<Rational>> = rest.into_iter().collect();
        if !pos.is_empty() && !neg.is_empty() {
            for p in &pos {
                for q in &neg {
                    let a = -q[var].clone();
                    let b = p[var].clone();
                    let combo: Vec<Rational> = p.iter().zip(q).map(|(x, y)| x * &a + y * &b).collect();
                    next.insert(primitive_integer_vector(&combo));
                }
            }
        }
        rows = next;
        if rows.is_empty() {
            return true;
        }
    }
    rows.is_empty()
}

/// All sign vectors of the subspace spanned by `basis` in `R^m`.
pub fn sign_vectors(basis: &[Vec<Rational>], m: usize) -> Result<BTreeSet<SignVector>> {
    if m > SIGN_ENUMERATION_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim: m,
            limit: SIGN_ENUMERATION_LIMIT,
        });
    }
    if basis.iter().any(|b| b.len() != m) {
        return Err(Error::DimensionMismatch("basis vector length differs from m".into()));
    }
    let mut out = BTreeSet::new();
    let mut prefix = Vec::with_capacity(m);
    extend_signs(basis, m, &mut prefix, &mut out);
    Ok(out)
}

fn extend_signs(basis: &[Vec<Rational>], m: usize, prefix: &mut Vec<i8>, out: &mut BTreeSet<SignVector>) {
    if prefix.len() == m {
        out.insert(SignVector(prefix.clone()));
        return;
    }
    for s in [-1i8, 0, 1] {
        prefix.push(s);
        if sign_feasible(basis, prefix) {
            extend_signs(basis, m, prefix, out);
        }
        prefix.pop();
    }
}

/// Every sign vector conforming to some member of `s`.
pub fn lower_closure(s: &BTreeSet<SignVector>) -> BTreeSet<SignVector> {
    let mut out = BTreeSet::new();
    for rho in s {
        let support: Vec<usize> = (0..rho.len()).filter(|&j| rho.0[j] != 0).collect();
        for mask in 0u64..(1u64 << support.len()) {
            let mut tau = SignVector::zero(rho.len());
            for (bit, &j) in support.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    tau.0[j] = rho.0[j];
                }
            }
            out.insert(tau);
        }
    }
    out
}

/// `ker A = c o im(1, q)` after sorting `q` in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentNormalForm {
    /// Scaling in sorted order.
    pub c: Vec<Rational>,
    /// Sorted from `1` down to `-1`.
    pub q: Vec<Rational>,
    /// `permutation[k]` is the original column of sorted position `k`.
    pub permutation: Vec<usize>,
}

impl SegmentNormalForm {
    /// Scaling vector in original column order.
    pub fn c_original(&self) -> Vec<Rational> {
        self.unpermute(&self.c)
    }

    pub fn q_original(&self) -> Vec<Rational> {
        self.unpermute(&self.q)
    }

    pub fn unpermute<T: Clone>(&self, sorted: &[T]) -> Vec<T> {
        let mut out = sorted.to_vec();
        for (k, &j) in self.permutation.iter().enumerate() {
            out[j] = sorted[k].clone();
        }
        out
    }

    pub fn permute<T: Clone>(&self, original: &[T]) -> Vec<T> {
        self.permutation.iter().map(|&j| original[j].clone()).collect()
    }

    /// Positive `u` (original order) with `u . c = 1` and `u . (c o q) = 0`.
    pub fn default_u(&self) -> Vec<Rational> {
        let npos = self.q.iter().filter(|x| x.is_positive()).count() as i64;
        let nneg = self.q.iter().filter(|x| x.is_negative()).count() as i64;
        let w: Vec<Rational> = self
            .q
            .iter()
            .map(|qi| {
                if qi.is_positive() {
                    (qi * Rational::from_integer(npos.into())).recip()
                } else if qi.is_negative() {
                    (-qi * Rational::from_integer(nneg.into())).recip()
                } else {
                    Rational::one()
                }
            })
            .collect();
        let total = w.iter().fold(Rational::zero(), |a, x| a + x);
        let u: Vec<Rational> = w.iter().zip(&self.c).map(|(wi, ci)| wi / &total / ci).collect();
        self.unpermute(&u)
    }
}

/// Segment normal form of a two-dimensional, indecomposable `ker A`.
pub fn segment_normal_form(a: &RatMatrix) -> Result<SegmentNormalForm> {
    let m = a.cols();
    let kernel = a.kernel_basis();
    if kernel.len() != 2 {
        return Err(Error::Shape(format!("ker A has dimension {}, expected 2", kernel.len())));
    }
    let rays = extreme_rays_scone(a)?;
    if rays.len() != 2 {
        return Err(Error::Decomposable);
    }
    let (r1, mut r2) = (rays[0].clone(), rays[1].clone());
    let Some(common) = (0..m).find(|&j| !r1[j].is_zero() && !r2[j].is_zero()) else {
        return Err(Error::Decomposable);
    };
    let scale = &r1[common] / &r2[common];
    for x in &mut r2 {
        *x *= &scale;
    }
    let half = linalg::ratio(1, 2);
    let ybar: Vec<Rational> = r1.iter().zip(&r2).map(|(a, b)| (a + b) * &half).collect();
    let yprime: Vec<Rational> = r1.iter().zip(&r2).map(|(a, b)| (a - b) * &half).collect();
    let q: Vec<Rational> = yprime.iter().zip(&ybar).map(|(a, b)| a / b).collect();
    let mut permutation: Vec<usize> = (0..m).collect();
    permutation.sort_by(|&i, &j| q[j].cmp(&q[i]));
    let nf = SegmentNormalForm {
        c: permutation.iter().map(|&j| ybar[j].clone()).collect(),
        q: permutation.iter().map(|&j| q[j].clone()).collect(),
        permutation,
    };
    let check = RatMatrix::from_rows(kernel, m).vstack(&RatMatrix::from_rows(vec![ybar, yprime], m));
    if check.rank() != 2 {
        return Err(Error::Shape("segment normal form does not span ker A".into()));
    }
    Ok(nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn sv(v: &[i8]) -> SignVector {
        SignVector(v.to_vec())
    }

    fn two_component_a() -> RatMatrix {
        RatMatrix::from_i64(&[&[-1, 1, -1, 0], &[0, -1, 1, 1]])
    }

    #[test]
    fn partition_of_block_diagonal_trinomials() {
        let a = RatMatrix::from_i64(&[&[1, 1, -1, 0, 0, 0], &[0, 0, 0, 1, 1, -1]]);
        let p = finest_partition(&a).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn partition_single_trinomial() {
        let p = finest_partition(&RatMatrix::from_i64(&[&[1, 1, -1]])).unwrap();
        assert_eq!(p.sizes, vec![3]);
    }

    #[test]
    fn partition_decoupled_binomials() {
        let p = finest_partition(&RatMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 0, 1, -1]])).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn partition_interleaved_columns() {
        let a = RatMatrix::from_i64(&[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
        let p = finest_partition(&a).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.permutation, vec![0, 2, 1, 3]);
        assert_eq!(p.class_of(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn partition_rejects_rank_deficient() {
        let a = RatMatrix::from_i64(&[&[1, 1, -1], &[2, 2, -2]]);
        assert!(matches!(finest_partition(&a), Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn rays_two_component() {
        let rays = extreme_rays_scone(&two_component_a()).unwrap();
        assert_eq!(rays, vec![ints(&[0, 1, 1, 0]), ints(&[1, 1, 0, 1])]);
    }

    #[test]
    fn rays_trinomial() {
        let rays = extreme_rays_scone(&RatMatrix::from_i64(&[&[1, 1, -1]])).unwrap();
        assert_eq!(rays, vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])]);
    }

    #[test]
    fn rays_without_constraints() {
        let rays = extreme_rays_scone(&RatMatrix::zeros(0, 2)).unwrap();
        assert_eq!(rays, vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn rays_require_interior() {
        let a = RatMatrix::from_i64(&[&[1, 1, 1]]);
        assert!(matches!(extreme_rays_scone(&a), Err(Error::EmptyInterior)));
        let a = RatMatrix::from_i64(&[&[1, 0, -1], &[0, 1, 0]]);
        assert!(matches!(extreme_rays_scone(&a), Err(Error::EmptyInterior)));
    }

    #[test]
    fn vertices_examples() {
        let rays = vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])];
        let u = vec![ratio(1, 2); 3];
        assert_eq!(polytope_vertices(&rays, &u), rays);

        let v = polytope_vertices(&[ints(&[2, 2])], &[ratio(1, 4), ratio(1, 4)]);
        assert_eq!(v, vec![ints(&[2, 2])]);

        let rays = extreme_rays_scone(&two_component_a()).unwrap();
        let u = vec![ratio(1, 3), ratio(1, 3), ratio(2, 3), ratio(1, 3)];
        assert_eq!(polytope_vertices(&rays, &u), rays);
    }

    #[test]
    fn default_u_matches_two_component_choice() {
        let geo = coefficient_geometry(&two_component_a(), &ClassPartition::contiguous(vec![4])).unwrap();
        assert_eq!(geo.classes[0].u, vec![ratio(1, 3), ratio(1, 3), ratio(2, 3), ratio(1, 3)]);
        assert_eq!(geo.dim_c, 2);
        assert_eq!(geo.dim_p, 1);
    }

    #[test]
    fn sign_vectors_of_a_line() {
        let s = sign_vectors(&[ints(&[1, -1, 0])], 3).unwrap();
        let expected: BTreeSet<_> = [sv(&[0, 0, 0]), sv(&[1, -1, 0]), sv(&[-1, 1, 0])].into_iter().collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn sign_vectors_of_trinomial_kernel_match_brute_force() {
        let basis = vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])];
        let s = sign_vectors(&basis, 3).unwrap();
        assert!(s.contains(&sv(&[1, 1, 1])));
        assert!(s.contains(&sv(&[1, -1, 0])));
        // x = (a, b, a+b): brute force over a grid of (a, b)
        let mut brute = BTreeSet::new();
        for a in -3..=3 {
            for b in -3..=3 {
                brute.insert(SignVector::of(&ints(&[a, b, a + b])));
            }
        }
        assert_eq!(s, brute);
    }

    #[test]
    fn sign_vectors_of_zero_space() {
        let s = sign_vectors(&[], 3).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![SignVector::zero(3)]);
    }

    #[test]
    fn sign_vectors_limit() {
        assert!(matches!(
            sign_vectors(&[], 13),
            Err(Error::DimensionTooLarge { dim: 13, limit: 12 })
        ));
    }

    #[test]
    fn lower_closure_examples() {
        let s: BTreeSet<_> = [sv(&[1, -1])].into_iter().collect();
        let expected: BTreeSet<_> = [sv(&[0, 0]), sv(&[1, 0]), sv(&[0, -1]), sv(&[1, -1])].into_iter().collect();
        assert_eq!(lower_closure(&s), expected);

        let s: BTreeSet<_> = [sv(&[0, 0])].into_iter().collect();
        assert_eq!(lower_closure(&s), s);

        let s: BTreeSet<_> = [sv(&[1, 0]), sv(&[0, 1])].into_iter().collect();
        let expected: BTreeSet<_> = [sv(&[0, 0]), sv(&[1, 0]), sv(&[0, 1])].into_iter().collect();
        assert_eq!(lower_closure(&s), expected);
    }

    #[test]
    fn segment_form_of_simple_trinomial() {
        let nf = segment_normal_form(&RatMatrix::from_i64(&[&[1, 1, -2]])).unwrap();
        assert_eq!(nf.c, ints(&[1, 1, 1]));
        assert_eq!(nf.q, ints(&[1, 0, -1]));
        assert_eq!(nf.permutation, vec![0, 2, 1]);
    }

    #[test]
    fn segment_form_overlapping_generators_has_interior_zero() {
        // generators (0,1,1,0) and (1,1,0,1) overlap in the second column
        let nf = segment_normal_form(&two_component_a()).unwrap();
        assert_eq!(nf.q.first(), Some(&rat(1)));
        assert_eq!(nf.q.last(), Some(&rat(-1)));
        assert!(nf.q[1..3].iter().any(Zero::is_zero));
    }

    #[test]
    fn segment_form_identity_scaling() {
        // ker A = im{(1,1,1), (1,0,-1)}
        let a = RatMatrix::from_i64(&[&[1, -2, 1]]);
        let nf = segment_normal_form(&a).unwrap();
        assert_eq!(nf.c, ints(&[1, 1, 1]));
        assert_eq!(nf.q, ints(&[1, 0, -1]));
        assert_eq!(nf.permutation, vec![0, 1, 2]);
    }

    #[test]
    fn segment_form_rejects_product() {
        let a = RatMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 0, 1, -1]]);
        assert!(matches!(segment_normal_form(&a), Err(Error::Decomposable)));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(3, 0).count(), 1);
    }
}
