//! Minkowski sums with vertex provenance, face decomposition into summand
//! faces, supports `I_F`, partial sums `P_S`, and the general-orientation
//! test.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::RatVector;
use crate::polytope::{combinations, Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinkowskiError {
    #[error("a sum instance needs at least one summand")]
    NoSummands,
    #[error("summand {index} lives in dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("sum vertex {point:?} has two decompositions into summand vertices")]
    DegenerateCoincidence { point: RatVector },
    #[error("index set must be nonempty")]
    EmptySubset,
    #[error("summand index {index} out of range for {r} summands")]
    IndexOutOfRange { index: usize, r: usize },
    #[error("face {face} is not a facet")]
    NotAFacet { face: usize },
    #[error("claim violated: {0}")]
    ClaimViolated(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Summands `P_1, …, P_r` sharing one ambient dimension. Indices are
/// 0-based in the API; reports print them 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumInstance {
    summands: Vec<Polytope>,
}

impl SumInstance {
    pub fn new(summands: Vec<Polytope>) -> Result<Self, MinkowskiError> {
        let Some(first) = summands.first() else {
            return Err(MinkowskiError::NoSummands);
        };
        let d = first.dim();
        if let Some((index, p)) = summands.iter().enumerate().find(|(_, p)| p.dim() != d) {
            return Err(MinkowskiError::DimensionMismatch {
                index,
                expected: d,
                found: p.dim(),
            });
        }
        Ok(SumInstance { summands })
    }

    pub fn dim(&self) -> usize {
        self.summands[0].dim()
    }

    pub fn r(&self) -> usize {
        self.summands.len()
    }

    pub fn summands(&self) -> &[Polytope] {
        &self.summands
    }

    pub fn summand(&self, i: usize) -> &Polytope {
        &self.summands[i]
    }

    pub fn vertex_counts(&self) -> Vec<u64> {
        self.summands
            .iter()
            .map(|p| p.vertex_count() as u64)
            .collect()
    }

    pub fn all_full_dimensional(&self) -> bool {
        self.summands.iter().all(Polytope::is_full_dimensional)
    }

    pub fn into_summands(self) -> Vec<Polytope> {
        self.summands
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), MinkowskiError> {
        if subset.is_empty() {
            return Err(MinkowskiError::EmptySubset);
        }
        if let Some(&index) = subset.iter().find(|&&i| i >= self.r()) {
            return Err(MinkowskiError::IndexOutOfRange { index, r: self.r() });
        }
        Ok(())
    }
}

/// A sum polytope together with, for each of its vertices, the vertex of
/// every participating summand that produces it.
#[derive(Debug, Clone)]
pub struct MinkowskiSum {
    pub polytope: Polytope,
    /// Summand indices taking part, ascending.
    pub members: Vec<usize>,
    /// `provenance[v][j]` is the vertex of summand `members[j]` used by
    /// sum vertex `v`.
    pub provenance: Vec<Vec<usize>>,
}

impl MinkowskiSum {
    /// Position of summand `i` in `members`.
    pub fn slot(&self, i: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == i)
    }
}

/// `P_1 + ⋯ + P_r`.
pub fn minkowski_sum(inst: &SumInstance) -> Result<MinkowskiSum, MinkowskiError> {
    let all: Vec<usize> = (0..inst.r()).collect();
    sum_members(inst, &all)
}

/// `P_S` for a nonempty index set `S` (0-based).
pub fn partial_sum(inst: &SumInstance, subset: &[usize]) -> Result<MinkowskiSum, MinkowskiError> {
    inst.check_subset(subset)?;
    let mut members = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    sum_members(inst, &members)
}

// Vertices of A + B are sums of vertices of A and B, so summands are added
// one at a time and reduced to extreme points after each step.
fn sum_members(inst: &SumInstance, members: &[usize]) -> Result<MinkowskiSum, MinkowskiError> {
    let first = inst.summand(members[0]);
    let mut current = first.clone();
    let mut provenance: Vec<Vec<usize>> = (0..first.vertex_count()).map(|v| vec![v]).collect();
    for &m in &members[1..] {
        let next = inst.summand(m);
        let mut points = Vec::with_capacity(current.vertex_count() * next.vertex_count());
        let mut tuples = Vec::with_capacity(points.capacity());
        for (a, pa) in current.vertices().iter().enumerate() {
            for (b, pb) in next.vertices().iter().enumerate() {
                points.push(pa + pb);
                let mut t = provenance[a].clone();
                t.push(b);
                tuples.push(t);
            }
        }
        let (hull, origin) = Polytope::hull_with_origin(&points, inst.dim())?;
        let mut multiplicity: HashMap<&RatVector, usize> = HashMap::new();
        for p in &points {
            *multiplicity.entry(p).or_default() += 1;
        }
        if let Some(v) = hull.vertices().iter().find(|v| multiplicity[v] > 1) {
            return Err(MinkowskiError::DegenerateCoincidence { point: v.clone() });
        }
        provenance = origin.iter().map(|&o| tuples[o].clone()).collect();
        current = hull;
    }
    Ok(MinkowskiSum {
        polytope: current,
        members: members.to_vec(),
        provenance,
    })
}

/// A face of a sum split into one face per summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposedFace {
    /// Index into the sum's face lattice.
    pub face: usize,
    pub face_dim: usize,
    /// Per-summand face as vertex indices into that summand, in
    /// `MinkowskiSum::members` order.
    pub parts: Vec<Vec<usize>>,
    pub part_dims: Vec<usize>,
    /// Summand indices (0-based) whose part is positive-dimensional.
    pub support: Vec<usize>,
    /// `face_dim == Σ part_dims`.
    pub exact: bool,
}

/// Decomposes lattice face `face` of `sum` using the interior direction
/// given by the sum of its facet normals.
pub fn decompose_face(inst: &SumInstance, sum: &MinkowskiSum, face: usize) -> DecomposedFace {
    let entry = sum.polytope.face_lattice().get(face);
    let l = sum.polytope.interior_normal(entry);
    let out = decompose_along(inst, sum, face, &l);
    debug_assert_eq!(
        out,
        decompose_along(
            inst,
            sum,
            face,
            &sum.polytope.weighted_normal(entry, |pos| pos as i64 + 1)
        ),
        "decomposition depends on the interior direction"
    );
    out
}

/// Decomposition along an explicit direction `l`, which must lie in the
/// relative interior of the face's normal cone.
pub fn decompose_along(
    inst: &SumInstance,
    sum: &MinkowskiSum,
    face: usize,
    l: &[BigInt],
) -> DecomposedFace {
    let entry = sum.polytope.face_lattice().get(face);
    let mut parts = Vec::with_capacity(sum.members.len());
    let mut part_dims = Vec::with_capacity(sum.members.len());
    let mut support = Vec::new();
    for &m in &sum.members {
        let p = inst.summand(m);
        let part = p.support_face_int(l);
        let dim = p.dim_of(&part);
        if dim > 0 {
            support.push(m);
        }
        parts.push(part);
        part_dims.push(dim);
    }
    let exact = entry.face_dim == part_dims.iter().sum::<usize>();
    DecomposedFace {
        face,
        face_dim: entry.face_dim,
        parts,
        part_dims,
        support,
        exact,
    }
}

/// Every proper face of the sum, decomposed.
pub fn decompose_all(inst: &SumInstance, sum: &MinkowskiSum) -> Vec<DecomposedFace> {
    (0..sum.polytope.face_lattice().len())
        .map(|f| decompose_face(inst, sum, f))
        .collect()
}

/// Outcome of the general-orientation test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    General,
    /// The first face, in lattice order, without exact decomposition.
    Degenerate(DecomposedFace),
}

impl Orientation {
    pub fn is_general(&self) -> bool {
        matches!(self, Orientation::General)
    }
}

/// Summands are in general orientations when every proper face of the sum
/// decomposes exactly.
pub fn is_general_orientation(inst: &SumInstance) -> Result<Orientation, MinkowskiError> {
    let sum = minkowski_sum(inst)?;
    Ok(orientation_of(inst, &sum))
}

pub fn orientation_of(inst: &SumInstance, sum: &MinkowskiSum) -> Orientation {
    for f in 0..sum.polytope.face_lattice().len() {
        let dec = decompose_face(inst, sum, f);
        if !dec.exact {
            return Orientation::Degenerate(dec);
        }
    }
    Orientation::General
}

/// For facet `facet` (a lattice index) of the full sum: whether
/// `𝒮(P_S; normal)` is again a facet of `P_S`, checked against `I_F ⊆ S`.
/// A disagreement is reported as [`MinkowskiError::ClaimViolated`].
pub fn lemma1_check(
    inst: &SumInstance,
    sum: &MinkowskiSum,
    facet: usize,
    partial: &MinkowskiSum,
) -> Result<bool, MinkowskiError> {
    let entry = sum.polytope.face_lattice().get(facet);
    let d = sum.polytope.dim();
    if entry.face_dim + 1 != d || entry.facets.len() != 1 {
        return Err(MinkowskiError::NotAFacet { face: facet });
    }
    let normal = sum.polytope.facets()[entry.facets[0]].normal_int();
    let face_in_partial = partial.polytope.support_face_int(normal);
    let observed = partial.polytope.dim_of(&face_in_partial) + 1 == d;
    let support = decompose_face(inst, sum, facet).support;
    let expected = support.iter().all(|i| partial.members.contains(i));
    if observed != expected {
        return Err(MinkowskiError::ClaimViolated(format!(
            "facet {facet} with support {support:?}: partial sum over {:?} {} a facet in that direction",
            partial.members,
            if observed { "has" } else { "lacks" }
        )));
    }
    Ok(observed)
}

/// Nonempty subsets of `0..r` with at most `max_size` elements, ordered by
/// size and then lexicographically.
pub fn subsets_up_to(r: usize, max_size: usize) -> Vec<Vec<usize>> {
    (1..=max_size.min(r))
        .flat_map(|k| combinations(r, k))
        .collect()
}

/// Formats a 0-based index set with 1-based labels, e.g. `{1,3}`.
pub fn subset_label(subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
