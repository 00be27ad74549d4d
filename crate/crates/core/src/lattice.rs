//! Exact integer and rational linear algebra in ambient dimension at most four.
//!
//! Everything here is exact: integers are [`BigInt`], rationals are
//! [`BigRational`]. Vertex enumeration solves every square subsystem of tight
//! constraints, which is cheap at these sizes and needs no floating point.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of `M` or `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<BigInt>);

/// A point of `M_R` or `N_R` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rat>);

impl LatticeVector {
    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    /// Non-negative gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).join(","))
    }
}

impl RationalVector {
    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![Rat::zero(); dim])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &RationalVector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_lattice(&self, other: &LatticeVector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * Rat::from_integer(b.clone()))
            .sum()
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn add_scaled_lattice(&self, k: &Rat, v: &LatticeVector) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .zip(&v.0)
                .map(|(a, b)| a + k * Rat::from_integer(b.clone()))
                .collect(),
        )
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(|c| c.to_integer()).collect()))
    }

    /// Average of a non-empty list of points.
    pub fn barycenter(points: &[RationalVector]) -> RationalVector {
        let dim = points[0].dim();
        let mut acc = RationalVector::zero(dim);
        for p in points {
            acc = acc.add(p);
        }
        acc.scale(&rat(points.len() as i64).recip())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(fmt_rat).join(","))
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: Vec<LatticeVector>) -> Self {
        let cols = rows.first().map_or(0, |r| r.dim());
        IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().map(|r| r.0).collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| LatticeVector::from_i64(r)).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[LatticeVector]) -> Self {
        Self::from_rows(cols.to_vec()).transpose()
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| LatticeVector::unit(n, i)).collect())
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
            .collect();
        IntegerMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i].clone())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector(self.data.iter().map(|r| r[j].clone()).collect())
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(
            self.data
                .iter()
                .map(|r| r.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    fn to_rational_rows(&self) -> Vec<Vec<Rat>> {
        self.data
            .iter()
            .map(|r| r.iter().map(|c| Rat::from_integer(c.clone())).collect())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }
}

/// One inequality `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: LatticeVector, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset - <normal, x>`; non-negative exactly when `x` satisfies it.
    pub fn slack(&self, x: &RationalVector) -> Rat {
        &self.offset - x.dot_lattice(&self.normal)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &RationalVector) -> bool {
        self.slack(x).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        for h in &halfspaces {
            if h.normal.dim() != dim {
                return Err(Error::domain("halfspace normal has the wrong dimension"));
            }
            if h.normal.is_zero() {
                return Err(Error::domain("zero halfspace normal"));
            }
        }
        Ok(HalfspaceSystem { dim, halfspaces })
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }
}

/// `v / gcd(v)`, keeping direction.
pub fn primitive_part(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::domain("primitive part of the zero vector"));
    }
    Ok(LatticeVector(v.0.iter().map(|c| c / &g).collect()))
}

/// A unimodular matrix `U` with `n^T U = e_0^T`, returned by columns: the
/// first column pairs to 1 with `n`, the others span `n^perp` over the integers.
pub fn unimodular_completion(n: &LatticeVector) -> Result<Vec<LatticeVector>> {
    if n.is_zero() {
        return Err(Error::domain("zero vector has no kernel basis"));
    }
    if !n.content().is_one() {
        return Err(Error::domain(format!("{n} is not primitive")));
    }
    let dim = n.dim();
    let mut r = n.0.clone();
    let mut cols: Vec<Vec<BigInt>> = (0..dim).map(|i| LatticeVector::unit(dim, i).0).collect();
    loop {
        let nonzero: Vec<usize> = (0..dim).filter(|&i| !r[i].is_zero()).collect();
        if nonzero.len() == 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| r[i].abs()).unwrap();
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = r[j].div_floor(&r[p]);
            r[j] = &r[j] - &q * &r[p];
            let cp = cols[p].clone();
            for (x, y) in cols[j].iter_mut().zip(&cp) {
                *x -= &q * y;
            }
        }
    }
    let p = (0..dim).find(|&i| !r[i].is_zero()).unwrap();
    if r[p].is_negative() {
        for x in cols[p].iter_mut() {
            *x = -x.clone();
        }
    }
    let first = cols.remove(p);
    let mut out = vec![LatticeVector(first)];
    out.extend(cols.into_iter().map(LatticeVector));
    Ok(out)
}

/// A basis of the sublattice `{m : <m, n> = 0}` for primitive `n`.
pub fn kernel_lattice_basis(n: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let mut cols = unimodular_completion(n)?;
    cols.remove(0);
    Ok(cols)
}

/// Gaussian elimination over the rationals; `None` when singular.
pub(crate) fn gauss_solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    let v = &a[col][j] * &f;
                    a[i][j] -= v;
                }
                let v = &b[col] * &f;
                b[i] -= v;
            }
        }
    }
    Some(b)
}

/// Solves `A x = b` exactly.
pub fn solve_rational(a: &IntegerMatrix, b: &RationalVector) -> Result<RationalVector> {
    if a.rows != a.cols || a.rows != b.dim() {
        return Err(Error::domain("solve_rational: shape mismatch"));
    }
    gauss_solve(a.to_rational_rows(), b.0.clone())
        .map(RationalVector)
        .ok_or(Error::Singular)
}

/// Rank of a list of rational row vectors.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Determinant of a square rational matrix.
pub(crate) fn det_rational(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let v = &a[c][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    det
}

/// The vector orthogonal to `k - 1` vectors in `R^k` given by signed cofactors.
/// Zero exactly when the rows are dependent.
pub(crate) fn cofactor_normal(rows: &[Vec<Rat>], k: usize) -> Vec<Rat> {
    debug_assert_eq!(rows.len() + 1, k);
    (0..k)
        .map(|i| {
            let minor: Vec<Vec<Rat>> = rows
                .iter()
                .map(|r| (0..k).filter(|&j| j != i).map(|j| r[j].clone()).collect())
                .collect();
            let d = det_rational(&minor);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Clears denominators and divides out the content; `None` for the zero vector.
pub fn primitive_direction(v: &[Rat]) -> Option<LatticeVector> {
    let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = LatticeVector(
        v.iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect(),
    );
    primitive_part(&ints).ok()
}

fn affine_rank(points: &[RationalVector]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    if diffs.is_empty() {
        0
    } else {
        rank(&diffs)
    }
}

/// All vertices of the polytope cut out by `h`.
pub fn vertex_enumeration(h: &HalfspaceSystem) -> Result<Vec<RationalVector>> {
    let k = h.dim;
    let normals: Vec<Vec<Rat>> = h
        .halfspaces
        .iter()
        .map(|hs| hs.normal.to_rational().0)
        .collect();
    if normals.is_empty() || rank(&normals) < k {
        return Err(Error::Unbounded);
    }
    // A pointed recession cone other than {0} has an extreme ray fixed by k-1
    // independent tight constraints.
    for subset in (0..normals.len()).combinations(k - 1) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let r = if k == 1 {
            vec![Rat::one()]
        } else {
            cofactor_normal(&rows, k)
        };
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let signs: Vec<Rat> = normals
            .iter()
            .map(|a| a.iter().zip(&r).map(|(x, y)| x * y).sum())
            .collect();
        if signs.iter().all(|s: &Rat| !s.is_positive()) || signs.iter().all(|s| !s.is_negative()) {
            return Err(Error::Unbounded);
        }
    }
    let mut found = BTreeSet::new();
    for subset in (0..normals.len()).combinations(k) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let b: Vec<Rat> = subset
            .iter()
            .map(|&i| h.halfspaces[i].offset.clone())
            .collect();
        if let Some(x) = gauss_solve(a, b) {
            let x = RationalVector(x);
            if h.contains(&x) {
                found.insert(x);
            }
        }
    }
    let vertices: Vec<RationalVector> = found.into_iter().collect();
    if vertices.is_empty() || affine_rank(&vertices) < k {
        return Err(Error::Degenerate);
    }
    Ok(vertices)
}

/// Integer points of the convex hull of `vertices`, in lexicographic order.
pub fn lattice_points(vertices: &[LatticeVector]) -> Vec<LatticeVector> {
    if vertices.is_empty() {
        return Vec::new();
    }
    let dim = vertices[0].dim();
    let pts: Vec<RationalVector> = vertices.iter().map(|v| v.to_rational()).collect();
    let hull = crate::geometry::AffineHull::new(&pts);
    let lo: Vec<BigInt> = (0..dim)
        .map(|i| vertices.iter().map(|v| v.0[i].clone()).min().unwrap())
        .collect();
    let hi: Vec<BigInt> = (0..dim)
        .map(|i| vertices.iter().map(|v| v.0[i].clone()).max().unwrap())
        .collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let p = LatticeVector(cur.clone());
        if hull.contains(&p.to_rational()) {
            out.push(p);
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for j in i + 1..dim {
                    cur[j] = lo[j].clone();
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn rv(c: &[i64]) -> RationalVector {
        RationalVector::from_i64(c)
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&lv(&[2, -2])).unwrap(), lv(&[1, -1]));
        assert_eq!(primitive_part(&lv(&[1, 0, 0])).unwrap(), lv(&[1, 0, 0]));
        assert_eq!(
            primitive_part(&lv(&[-12, -3, -3])).unwrap(),
            lv(&[-4, -1, -1])
        );
        assert!(matches!(
            primitive_part(&lv(&[0, 0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn kernel_basis_examples() {
        let b = kernel_lattice_basis(&lv(&[1, 1])).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0] == lv(&[1, -1]) || b[0] == lv(&[-1, 1]));

        let b = kernel_lattice_basis(&lv(&[0, 0, 1])).unwrap();
        let set: BTreeSet<_> = b.iter().map(|v| primitive_part(v).unwrap()).collect();
        let span_xy = b.iter().all(|v| v.0[2].is_zero());
        assert!(span_xy && set.len() == 2);
        let det = IntegerMatrix::from_rows(vec![b[0].clone(), b[1].clone(), lv(&[0, 0, 1])])
            .determinant()
            .unwrap();
        assert_eq!(det.abs(), int(1));

        assert!(kernel_lattice_basis(&lv(&[2, 4])).is_err());
    }

    /// Smith normal form oracle: the kernel of a primitive row vector is a
    /// direct summand, so [m; basis] with <m,n> = 1 must have determinant +-1,
    /// and the gcd of the maximal minors of the basis equals 1.
    #[test]
    fn kernel_basis_oracle_123() {
        let n = lv(&[1, 2, 3]);
        let b = kernel_lattice_basis(&n).unwrap();
        assert_eq!(b.len(), 2);
        for v in &b {
            assert!(v.dot(&n).is_zero());
        }
        let minors = [
            &b[0].0[0] * &b[1].0[1] - &b[0].0[1] * &b[1].0[0],
            &b[0].0[0] * &b[1].0[2] - &b[0].0[2] * &b[1].0[0],
            &b[0].0[1] * &b[1].0[2] - &b[0].0[2] * &b[1].0[1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |g, m| g.gcd(m));
        assert_eq!(g, int(1));
        // The minors are the cross product, hence +-n itself.
        assert_eq!(
            LatticeVector(vec![
                minors[2].clone(),
                -minors[1].clone(),
                minors[0].clone()
            ])
            .content(),
            int(1)
        );
        let det = IntegerMatrix::from_rows(vec![lv(&[1, 0, 0]), b[0].clone(), b[1].clone()])
            .determinant()
            .unwrap();
        assert_eq!(det.abs(), int(1));
    }

    #[test]
    fn solve_examples() {
        let id = IntegerMatrix::identity(2);
        let b = RationalVector(vec![frac(3, 2), rat(-1)]);
        assert_eq!(solve_rational(&id, &b).unwrap(), b);
        let a = IntegerMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve_rational(&a, &rv(&[2, 0])).unwrap(), rv(&[1, 1]));
        let s = IntegerMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_rational(&s, &rv(&[1, 3])), Err(Error::Singular));
        assert!(matches!(
            solve_rational(&s, &rv(&[1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn determinant_matches_rational_elimination() {
        let m = IntegerMatrix::from_i64(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        let rows: Vec<Vec<Rat>> = m.to_rational_rows();
        assert_eq!(
            Rat::from_integer(m.determinant().unwrap()),
            det_rational(&rows)
        );
        // Cofactor expansion along the first row: 2*(-26) + 1*(-2) = -54.
        assert_eq!(m.determinant().unwrap(), int(-54));
    }

    fn system(rows: &[(&[i64], i64)]) -> HalfspaceSystem {
        let dim = rows[0].0.len();
        HalfspaceSystem::new(
            dim,
            rows.iter()
                .map(|(n, o)| Halfspace::new(lv(n), rat(*o)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn interval_vertices() {
        let h = system(&[(&[1], 1), (&[-1], 1)]);
        assert_eq!(vertex_enumeration(&h).unwrap(), vec![rv(&[-1]), rv(&[1])]);
    }

    #[test]
    fn unbounded_and_degenerate() {
        let h = system(&[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(vertex_enumeration(&h), Err(Error::Unbounded));
        let h = system(&[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(vertex_enumeration(&h), Err(Error::Unbounded));
        let h = system(&[(&[1, 0], 0), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 1)]);
        assert_eq!(vertex_enumeration(&h), Err(Error::Degenerate));
        let h = system(&[(&[1], -1), (&[-1], -1)]);
        assert_eq!(vertex_enumeration(&h), Err(Error::Degenerate));
    }

    #[test]
    fn dual_of_p2_by_enumeration() {
        let pts = lattice_points(&[lv(&[2, -1]), lv(&[-1, 2]), lv(&[-1, -1])]);
        assert_eq!(pts.len(), 10);
        let hs = pts
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| Halfspace::new(p.clone(), rat(1)))
            .collect();
        let v = vertex_enumeration(&HalfspaceSystem::new(2, hs).unwrap()).unwrap();
        assert_eq!(v, vec![rv(&[-1, 0]), rv(&[0, -1]), rv(&[1, 1])]);
    }

    #[test]
    fn lattice_point_examples() {
        assert_eq!(
            lattice_points(&[lv(&[-1, 0]), lv(&[1, 0])]),
            vec![lv(&[-1, 0]), lv(&[0, 0]), lv(&[1, 0])]
        );
        let diamond = [lv(&[1, 0]), lv(&[-1, 0]), lv(&[0, 1]), lv(&[0, -1])];
        assert_eq!(lattice_points(&diamond).len(), 5);
        assert!(lattice_points(&[]).is_empty());
    }
}
