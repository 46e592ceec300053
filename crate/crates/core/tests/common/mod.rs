//! Independent facet enumeration by the double description method, used
//! as an oracle. It shares no code with the library's hull: points are
//! homogenized to rows `(1, p)` and the extreme rays of `{y : A y >= 0}` are
//! the facet inequalities.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use minkcount::{Polytope, RatVector};

type Q = BigRational;

fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_int_rows(points: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    let mut l = BigInt::one();
    for p in points {
        for x in p {
            l = l.lcm(x.denom());
        }
    }
    points
        .iter()
        .map(|p| {
            let mut row = vec![l.clone()];
            row.extend(
                p.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer()),
            );
            row
        })
        .collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reduce(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Solves `rows · y_j = e_j` for the square invertible `rows` and returns
/// the columns of the inverse scaled to primitive integer vectors.
fn inverse_columns(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Q> = r.iter().cloned().map(Q::from_integer).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("invertible");
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in &mut m[c] {
            *x /= &piv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    (0..n)
        .map(|j| {
            let col: Vec<Q> = (0..n).map(|i| m[i][n + j].clone()).collect();
            let mut l = BigInt::one();
            for x in &col {
                l = l.lcm(x.denom());
            }
            reduce(
                col.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                    .collect(),
            )
        })
        .collect()
}

pub struct OracleHull {
    /// `(normal, offset)` with `normal · x <= offset`, normal primitive.
    pub facets: BTreeSet<(Vec<BigInt>, Q)>,
    pub fvector: Vec<u64>,
}

/// Facets and f-vector of the convex hull of full-dimensional `points`.
pub fn double_description(points: &[RatVector]) -> OracleHull {
    let mut seen = HashSet::new();
    let pts: Vec<Vec<Q>> = points
        .iter()
        .filter(|p| seen.insert((*p).clone()))
        .map(|p| p.iter().cloned().collect())
        .collect();
    let d = pts[0].len();
    let rows = to_int_rows(&pts);

    // Greedy affinely independent starting rows.
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let cand: Vec<Vec<Q>> = basis
            .iter()
            .chain(std::iter::once(&i))
            .map(|&k| rows[k].iter().cloned().map(Q::from_integer).collect())
            .collect();
        if rank_q(&cand) == basis.len() + 1 {
            basis.push(i);
        }
        if basis.len() == d + 1 {
            break;
        }
    }
    assert_eq!(basis.len(), d + 1, "points are not full-dimensional");
    let start: Vec<Vec<BigInt>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let mut rays = inverse_columns(&start);
    let mut added: Vec<usize> = basis.clone();

    for i in 0..rows.len() {
        if basis.contains(&i) {
            continue;
        }
        let a = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|y| dot(a, y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let zero_sets: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|y| {
                added
                    .iter()
                    .copied()
                    .filter(|&k| dot(&rows[k], y).is_zero())
                    .collect()
            })
            .collect();
        let mut next: Vec<Vec<BigInt>> = (0..rays.len())
            .filter(|&k| !vals[k].is_negative())
            .map(|k| rays[k].clone())
            .collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> =
                    zero_sets[p].intersection(&zero_sets[n]).copied().collect();
                if common.len() + 1 < d {
                    continue;
                }
                let sub: Vec<Vec<Q>> = common
                    .iter()
                    .map(|&k| rows[k].iter().cloned().map(Q::from_integer).collect())
                    .collect();
                if rank_q(&sub) + 2 != d + 1 {
                    continue;
                }
                let y: Vec<BigInt> = (0..=d)
                    .map(|j| &vals[p] * &rays[n][j] - &vals[n] * &rays[p][j])
                    .collect();
                next.push(reduce(y));
            }
        }
        rays = next;
        added.push(i);
    }

    // Every row is a positive multiple of (1, p), so a ray y encodes
    // -y[1..] · p <= y[0].
    let facets: BTreeSet<(Vec<BigInt>, Q)> = rays
        .iter()
        .map(|y| {
            let g = y[1..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let normal: Vec<BigInt> = y[1..].iter().map(|x| -x / &g).collect();
            (normal, Q::new(y[0].clone(), g))
        })
        .collect();

    let incidence: Vec<BTreeSet<usize>> = rays
        .iter()
        .map(|y| {
            (0..rows.len())
                .filter(|&k| dot(&rows[k], y).is_zero())
                .collect()
        })
        .collect();
    let fvector = face_counts(&pts, &incidence, d);
    OracleHull { facets, fvector }
}

fn face_counts(pts: &[Vec<Q>], facets: &[BTreeSet<usize>], d: usize) -> Vec<u64> {
    let mut faces: BTreeSet<BTreeSet<usize>> = facets.iter().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for g in facets {
            let h: BTreeSet<usize> = f.intersection(g).copied().collect();
            if !h.is_empty() && faces.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    let mut counts = vec![0u64; d];
    for f in &faces {
        let v: Vec<usize> = f.iter().copied().collect();
        let diffs: Vec<Vec<Q>> = v[1..]
            .iter()
            .map(|&i| pts[i].iter().zip(&pts[v[0]]).map(|(a, b)| a - b).collect())
            .collect();
        let dim = if diffs.is_empty() { 0 } else { rank_q(&diffs) };
        if dim < d {
            counts[dim] += 1;
        }
    }
    counts
}

/// The library's facets in the oracle's normalization.
pub fn library_facets(p: &Polytope) -> BTreeSet<(Vec<BigInt>, Q)> {
    p.facets()
        .iter()
        .map(|f| (f.normal_int().to_vec(), f.offset.clone()))
        .collect()
}
