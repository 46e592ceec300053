//! Facet enumeration by ridge pivoting (gift wrapping) on integer points.
//!
//! Works for arbitrary, degenerate point sets: facets are carried as full
//! incidence sets and the ridges of a facet are found by recursing on the
//! facet's own points, projected to one dimension lower.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::lattice::{self, IVec};

#[derive(Debug, Clone)]
pub(crate) struct HullFacet {
    /// Primitive outward normal.
    pub normal: IVec,
    pub offset: BigInt,
    /// Sorted indices of every input point on the facet hyperplane.
    pub members: Vec<usize>,
}

/// All facets of `conv(points)`. The points must be pairwise distinct and
/// affinely span their ambient space `Z^m`, `m >= 1`.
pub(crate) fn facets(points: &[IVec]) -> Vec<HullFacet> {
    let m = points[0].len();
    if m == 1 {
        return segment_facets(points);
    }
    let (normal, offset) = initial_facet(points);
    let first = facet_with(points, normal, offset);

    let mut found: Vec<HullFacet> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut done_ridges: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(first.members.clone(), 0);
    found.push(first);
    queue.push_back(0);

    while let Some(fi) = queue.pop_front() {
        for ridge in ridges_of(points, &found[fi]) {
            if !done_ridges.insert(ridge.clone()) {
                continue;
            }
            let next = pivot(points, &ridge, &found[fi]);
            if !seen.contains_key(&next.members) {
                seen.insert(next.members.clone(), found.len());
                queue.push_back(found.len());
                found.push(next);
            }
        }
    }
    found
}

fn segment_facets(points: &[IVec]) -> Vec<HullFacet> {
    let lo = points.iter().map(|p| &p[0]).min().unwrap().clone();
    let hi = points.iter().map(|p| &p[0]).max().unwrap().clone();
    let at = |v: &BigInt| -> Vec<usize> {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| &p[0] == v)
            .map(|(i, _)| i)
            .collect()
    };
    vec![
        HullFacet {
            normal: vec![BigInt::from(-1)],
            offset: -lo.clone(),
            members: at(&lo),
        },
        HullFacet {
            normal: vec![BigInt::from(1)],
            offset: hi.clone(),
            members: at(&hi),
        },
    ]
}

fn facet_with(points: &[IVec], normal: IVec, offset: BigInt) -> HullFacet {
    let members = points
        .iter()
        .enumerate()
        .filter(|(_, p)| lattice::dot(&normal, p) == offset)
        .map(|(i, _)| i)
        .collect();
    HullFacet {
        normal,
        offset,
        members,
    }
}

/// Ridges of `facet` as sorted global point indices.
fn ridges_of(points: &[IVec], facet: &HullFacet) -> Vec<Vec<usize>> {
    // Dropping a coordinate with nonzero normal entry is injective on the
    // facet hyperplane.
    let drop = facet
        .normal
        .iter()
        .position(|c| !c.is_zero())
        .expect("facet normal is nonzero");
    let projected: Vec<IVec> = facet
        .members
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .enumerate()
                .filter(|&(c, _)| c != drop)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    facets(&projected)
        .into_iter()
        .map(|sub| sub.members.iter().map(|&k| facet.members[k]).collect())
        .collect()
}

fn basis_of(points: &[IVec], members: &[usize]) -> Vec<IVec> {
    let origin = &points[members[0]];
    let diffs: Vec<IVec> = members[1..]
        .iter()
        .map(|&i| lattice::sub(&points[i], origin))
        .collect();
    lattice::independent_subset(&diffs)
        .into_iter()
        .map(|i| diffs[i].clone())
        .collect()
}

fn normal_through(basis: &[IVec], extra: IVec) -> IVec {
    let mut vecs = basis.to_vec();
    vecs.push(extra);
    lattice::cross(&vecs)
}

/// Rotates the hyperplane of `facet` around `ridge` until it meets the
/// neighbouring facet.
fn pivot(points: &[IVec], ridge: &[usize], facet: &HullFacet) -> HullFacet {
    let origin = &points[ridge[0]];
    let basis = basis_of(points, ridge);
    let inside = facet
        .members
        .iter()
        .find(|i| ridge.binary_search(i).is_err())
        .map(|&i| lattice::sub(&points[i], origin))
        .expect("facet has a point off its ridge");
    let mut best = points
        .iter()
        .find(|p| lattice::dot(&facet.normal, p) != facet.offset)
        .map(|p| lattice::sub(p, origin))
        .expect("full-dimensional point set");
    let mut normal = normal_through(&basis, best.clone());
    let mut inside_sign = lattice::dot(&normal, &inside).signum();
    for p in points {
        let rel = lattice::sub(p, origin);
        let s = lattice::dot(&normal, &rel).signum();
        if !s.is_zero() && s != inside_sign {
            best = rel;
            normal = normal_through(&basis, best.clone());
            inside_sign = lattice::dot(&normal, &inside).signum();
        }
    }
    if inside_sign.is_positive() {
        normal = lattice::neg(&normal);
    }
    let normal = lattice::primitive(normal);
    let offset = lattice::dot(&normal, origin);
    facet_with(points, normal, offset)
}

/// A supporting facet hyperplane `(normal, offset)`, found by recursing on
/// the projection that forgets the first coordinate. Duplicated points are
/// tolerated.
fn initial_facet(points: &[IVec]) -> (IVec, BigInt) {
    let m = points[0].len();
    if m == 1 {
        let lo = points.iter().map(|p| &p[0]).min().unwrap();
        return (vec![BigInt::from(-1)], -lo.clone());
    }
    let projected: Vec<IVec> = points.iter().map(|p| p[1..].to_vec()).collect();
    let (sub_normal, offset) = initial_facet(&projected);
    let mut normal = Vec::with_capacity(m);
    normal.push(BigInt::zero());
    normal.extend(sub_normal);

    let members: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| lattice::dot(&normal, p) == offset)
        .map(|(i, _)| i)
        .collect();
    let basis = basis_of(points, &members);
    if basis.len() == m - 1 {
        return (normal, offset);
    }
    debug_assert_eq!(basis.len(), m - 2);

    // The face is a ridge and every other point lies strictly to one side of
    // the vertical hyperplane: rotate to the extreme point in a fixed sense.
    let origin = &points[members[0]];
    let mut best = points
        .iter()
        .find(|p| lattice::dot(&normal, p) != offset)
        .map(|p| lattice::sub(p, origin))
        .unwrap();
    let mut rotated = normal_through(&basis, best.clone());
    for p in points {
        let rel = lattice::sub(p, origin);
        if lattice::dot(&rotated, &rel).is_positive() {
            best = rel;
            rotated = normal_through(&basis, best.clone());
        }
    }
    let rotated = lattice::primitive(rotated);
    let offset = lattice::dot(&rotated, origin);
    (rotated, offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[i64]]) -> Vec<IVec> {
        raw.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn assert_valid(points: &[IVec], facets: &[HullFacet]) {
        for f in facets {
            for p in points {
                assert!(lattice::dot(&f.normal, p) <= f.offset);
            }
            let m = points[0].len();
            let on: Vec<&IVec> = f.members.iter().map(|&i| &points[i]).collect();
            assert_eq!(lattice::affine_dim(on), m - 1);
        }
    }

    #[test]
    fn square_with_edge_midpoints() {
        let p = pts(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 0], &[1, 1]]);
        let f = facets(&p);
        assert_eq!(f.len(), 4);
        assert_valid(&p, &f);
        assert!(f.iter().any(|x| x.members == vec![0, 1, 4]));
    }

    #[test]
    fn cube_has_six_square_facets() {
        let mut raw = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    raw.push(vec![x, y, z]);
                }
            }
        }
        let refs: Vec<&[i64]> = raw.iter().map(|v| v.as_slice()).collect();
        let p = pts(&refs);
        let f = facets(&p);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.members.len() == 4));
        assert_valid(&p, &f);
    }

    #[test]
    fn cross_polytope_in_four_dimensions() {
        let p = pts(&[
            &[1, 0, 0, 0],
            &[-1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, -1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, -1, 0],
            &[0, 0, 0, 1],
            &[0, 0, 0, -1],
            &[0, 0, 0, 0],
        ]);
        let f = facets(&p);
        assert_eq!(f.len(), 16);
        assert_valid(&p, &f);
    }
}
