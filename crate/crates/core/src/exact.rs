//! Exact rational scalars, vectors and matrices.
//!
//! Every coordinate in the crate is a [`Rational`]. Predicates that sit on
//! hot paths (hull construction, support queries) run on integer copies of
//! the coordinates produced by [`lattice`]; positive scaling and translation
//! leave every sign test unchanged.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("matrix rows have different lengths")]
    Ragged,
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q` or `p`.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::Parse(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(text.trim()).map_err(|_| bad())?,
        )),
    }
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A point or direction with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(Vec<Rational>);

// Coordinates serialize as strings `p` or `p/q` so no precision is lost.
impl Serialize for RatVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(RatVector)
    }
}

impl RatVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RatVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVector(coords.iter().map(|&c| int(c)).collect())
    }

    /// Unit vector along axis `axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational, ExactError> {
        dot(self, other)
    }

    pub fn scale(&self, factor: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Coordinates with indices in `axes`, in that order.
    pub fn select(&self, axes: &[usize]) -> RatVector {
        RatVector(axes.iter().map(|&a| self.0[a].clone()).collect())
    }

    /// Positive multiple of `self` with coprime integer coordinates.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        lattice::primitive(lattice::clear_denominators(self))
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl<'a> Add<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(coords: Vec<Rational>) -> Self {
        RatVector(coords)
    }
}

pub fn dot(a: &RatVector, b: &RatVector) -> Result<Rational, ExactError> {
    if a.dim() != b.dim() {
        return Err(ExactError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.0
        .iter()
        .zip(&b.0)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y))
}

/// Dense rectangular matrix of rationals, stored by rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

impl RatMatrix {
    pub fn new(rows: Vec<RatVector>) -> Result<Self, ExactError> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.dim() != first.dim()) {
                return Err(ExactError::Ragged);
            }
        }
        Ok(RatMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, ExactError> {
        Self::new(rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix {
            rows: (0..n).map(|i| RatVector::basis(n, i)).collect(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMatrix {
            rows: vec![RatVector::zeros(ncols); nrows],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, RatVector::dim)
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i].0[j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.rows[i].0[j] = value;
    }

    pub fn transpose(&self) -> RatMatrix {
        let (m, n) = (self.nrows(), self.ncols());
        RatMatrix {
            rows: (0..n)
                .map(|j| RatVector((0..m).map(|i| self.get(i, j).clone()).collect()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, ExactError> {
        if self.ncols() != other.nrows() {
            return Err(ExactError::DimensionMismatch {
                left: self.ncols(),
                right: other.nrows(),
            });
        }
        let cols = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| RatVector(cols.rows.iter().map(|c| dot(r, c).unwrap()).collect()))
            .collect();
        Ok(RatMatrix { rows })
    }

    pub fn apply(&self, v: &RatVector) -> Result<RatVector, ExactError> {
        if self.ncols() != v.dim() {
            return Err(ExactError::DimensionMismatch {
                left: self.ncols(),
                right: v.dim(),
            });
        }
        Ok(RatVector(
            self.rows.iter().map(|r| dot(r, v).unwrap()).collect(),
        ))
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, ExactError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, ExactError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RatMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix, ExactError> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(ExactError::DimensionMismatch {
                left: self.nrows() * self.ncols(),
                right: other.nrows() * other.ncols(),
            });
        }
        Ok(RatMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| RatVector(a.0.iter().zip(&b.0).map(|(x, y)| f(x, y)).collect()))
                .collect(),
        })
    }

    /// Exact rank by fraction-free elimination on the denominator-cleared
    /// rows.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = self.rows.iter().map(lattice::clear_denominators).collect();
        lattice::rank(rows)
    }

    pub fn determinant(&self) -> Result<Rational, ExactError> {
        if self.nrows() != self.ncols() {
            return Err(ExactError::DimensionMismatch {
                left: self.nrows(),
                right: self.ncols(),
            });
        }
        let n = self.nrows();
        let mut a: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix, ExactError> {
        let n = self.nrows();
        if n == 0 {
            return Err(ExactError::Empty);
        }
        if n != self.ncols() {
            return Err(ExactError::DimensionMismatch {
                left: n,
                right: self.ncols(),
            });
        }
        let mut a: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut inv: Vec<Vec<Rational>> = RatMatrix::identity(n)
            .rows
            .into_iter()
            .map(|r| r.0)
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(ExactError::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let pivot = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &pivot;
                inv[c][j] /= &pivot;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
        Ok(RatMatrix {
            rows: inv.into_iter().map(RatVector).collect(),
        })
    }
}

/// Result of fitting a hyperplane through a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperplaneFit {
    /// `⟨normal, x⟩ = offset` for every input point.
    Hyperplane { normal: RatVector, offset: Rational },
    /// The points do not span an affine space of dimension exactly `d - 1`.
    Degenerate,
}

/// Fits the unique hyperplane through `points` in canonical form: integer
/// normal with coprime entries whose first nonzero entry is positive.
pub fn solve_hyperplane(points: &[RatVector]) -> Result<HyperplaneFit, ExactError> {
    let Some(first) = points.first() else {
        return Err(ExactError::TooFewPoints { needed: 1, got: 0 });
    };
    let d = first.dim();
    if points.len() < d {
        return Err(ExactError::TooFewPoints {
            needed: d,
            got: points.len(),
        });
    }
    if let Some(bad) = points.iter().find(|p| p.dim() != d) {
        return Err(ExactError::DimensionMismatch {
            left: d,
            right: bad.dim(),
        });
    }
    let lat = lattice::to_lattice(points);
    let diffs: Vec<Vec<BigInt>> = lat[1..].iter().map(|p| lattice::sub(p, &lat[0])).collect();
    let basis = lattice::independent_subset(&diffs);
    if basis.len() + 1 != d {
        return Ok(HyperplaneFit::Degenerate);
    }
    let vecs: Vec<Vec<BigInt>> = basis.iter().map(|&i| diffs[i].clone()).collect();
    let mut normal = lattice::primitive(lattice::cross(&vecs));
    if let Some(lead) = normal.iter().find(|c| !c.is_zero()) {
        if lead.is_negative() {
            normal.iter_mut().for_each(|c| *c = -&*c);
        }
    }
    let normal = RatVector(normal.into_iter().map(Rational::from_integer).collect());
    let offset = dot(&normal, first)?;
    Ok(HyperplaneFit::Hyperplane { normal, offset })
}

/// Integer kernel used by the geometric predicates.
pub mod lattice {
    use super::*;

    pub type IVec = Vec<BigInt>;

    pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> IVec {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn add(a: &[BigInt], b: &[BigInt]) -> IVec {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn neg(a: &[BigInt]) -> IVec {
        a.iter().map(|x| -x).collect()
    }

    pub fn is_zero(a: &[BigInt]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// Divides out the content (gcd of entries); zero vectors are returned
    /// unchanged.
    pub fn primitive(mut v: IVec) -> IVec {
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            v.iter_mut().for_each(|x| *x = &*x / &g);
        }
        v
    }

    /// Multiplies by the lcm of the denominators.
    pub fn clear_denominators(v: &RatVector) -> IVec {
        let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        v.iter().map(|c| c.numer() * (&l / c.denom())).collect()
    }

    /// Scales the whole point set by one common positive factor so that
    /// every coordinate is an integer.
    pub fn to_lattice(points: &[RatVector]) -> Vec<IVec> {
        let l = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        points
            .iter()
            .map(|p| p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
            .collect()
    }

    /// Rank via fraction-free row reduction with content removal.
    pub fn rank(mut rows: Vec<IVec>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, r);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot = &head[r];
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for j in c..ncols {
                    row[j] = &pivot[c] * &row[j] - &f * &pivot[j];
                }
                *row = primitive(std::mem::take(row));
            }
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        r
    }

    /// Indices of a maximal linearly independent subset, chosen greedily in
    /// input order.
    pub fn independent_subset(vectors: &[IVec]) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut echelon: Vec<(usize, IVec)> = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let mut w = v.clone();
            for (c, e) in &echelon {
                if !w[*c].is_zero() {
                    let f = w[*c].clone();
                    w = primitive(w.iter().zip(e).map(|(x, y)| &e[*c] * x - &f * y).collect());
                }
            }
            if let Some(c) = w.iter().position(|x| !x.is_zero()) {
                echelon.push((c, w));
                chosen.push(i);
            }
        }
        chosen
    }

    /// Affine dimension of a point set (-1 is never returned; empty and
    /// single-point sets give 0).
    pub fn affine_dim<'a>(points: impl IntoIterator<Item = &'a IVec>) -> usize {
        let mut it = points.into_iter();
        let Some(first) = it.next() else { return 0 };
        rank(it.map(|p| sub(p, first)).collect())
    }

    /// Bareiss determinant of a square integer matrix.
    pub fn determinant(mut a: Vec<IVec>) -> BigInt {
        let n = a.len();
        match n {
            0 => return BigInt::one(),
            1 => return a[0][0].clone(),
            2 => return &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
            3 => {
                return &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
                    - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
                    + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
            }
            _ => {}
        }
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign {
            -det
        } else {
            det
        }
    }

    /// Generalized cross product of `m - 1` vectors in `Z^m`: the vector `n`
    /// with `⟨n, x⟩ = det[v_1; …; v_{m-1}; x]` for every `x`.
    pub fn cross(vectors: &[IVec]) -> IVec {
        let m = vectors.len() + 1;
        debug_assert!(vectors.iter().all(|v| v.len() == m));
        if m == 3 {
            let (a, b) = (&vectors[0], &vectors[1]);
            return vec![
                &a[1] * &b[2] - &a[2] * &b[1],
                &a[2] * &b[0] - &a[0] * &b[2],
                &a[0] * &b[1] - &a[1] * &b[0],
            ];
        }
        (0..m)
            .map(|j| {
                let minor: Vec<IVec> = vectors
                    .iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let det = determinant(minor);
                if (m + j + 1) % 2 == 0 {
                    det
                } else {
                    -det
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> RatVector {
        RatVector::from_ints(c)
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(), int(0));
        let a = RatVector::new(vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(dot(&a, &v(&[2, 3])).unwrap(), int(2));
        assert_eq!(dot(&v(&[1, 2, 5]), &v(&[1, 2, 5])).unwrap(), int(30));
        assert!(matches!(
            dot(&v(&[1, 2]), &v(&[1, 2, 3])),
            Err(ExactError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn rational_stays_reduced() {
        let x = rat(6, -8);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(4));
        assert_eq!(rat(1, 6) + rat(1, 3), rat(1, 2));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(RatMatrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap().rank(), 1);
        let m = RatMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn hyperplane_examples() {
        let fit = solve_hyperplane(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(
            fit,
            HyperplaneFit::Hyperplane {
                normal: v(&[1, 1, 1]),
                offset: int(1)
            }
        );
        let fit = solve_hyperplane(&[v(&[0, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(
            fit,
            HyperplaneFit::Hyperplane {
                normal: v(&[0, 1]),
                offset: int(0)
            }
        );
        let fit = solve_hyperplane(&[v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[2, 0, 0])]).unwrap();
        assert_eq!(fit, HyperplaneFit::Degenerate);
        assert!(matches!(
            solve_hyperplane(&[v(&[0, 0, 0]), v(&[1, 0, 0])]),
            Err(ExactError::TooFewPoints { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn hyperplane_spanning_everything_is_degenerate() {
        let pts = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1])];
        assert_eq!(solve_hyperplane(&pts).unwrap(), HyperplaneFit::Degenerate);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = RatMatrix::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert_eq!(m.determinant().unwrap(), int(1));
        let s = RatMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(ExactError::Singular));
        assert_eq!(s.determinant().unwrap(), int(0));
    }

    #[test]
    fn lattice_determinant_matches_rational() {
        let rows: &[&[i64]] = &[
            &[2, -1, 0, 3, 1],
            &[1, 4, 2, 0, -2],
            &[0, 1, 5, 1, 1],
            &[3, 0, 1, 2, 2],
            &[1, 1, 1, 1, 7],
        ];
        let m = RatMatrix::from_ints(rows).unwrap();
        let lat: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(
            Rational::from_integer(lattice::determinant(lat)),
            m.determinant().unwrap()
        );
    }

    #[test]
    fn cross_is_orthogonal() {
        let vs: Vec<Vec<BigInt>> = [[1, 2, 0, -1], [0, 1, 3, 2], [2, -1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let n = lattice::cross(&vs);
        for w in &vs {
            assert!(lattice::dot(&n, w).is_zero());
        }
        assert!(!lattice::is_zero(&n));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }
}
