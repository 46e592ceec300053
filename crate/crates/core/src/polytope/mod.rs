//! V-polytopes with exact facet enumeration, face lattices and f-vectors.

mod hull;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::lattice::{self, IVec};
use crate::exact::{self, HyperplaneFit, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("point has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need at least 2 distinct points, got {found}")]
    TooFewVertices { found: usize },
    #[error("affine hull has dimension {affine_dim} < {dim}")]
    NotFullDimensional { affine_dim: usize, dim: usize },
    #[error("direction must be nonzero")]
    ZeroDirection,
}

/// A facet: outward normal, offset and incident vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Primitive integer outward normal. For a polytope that is not
    /// full-dimensional this is one valid choice among many.
    pub normal: RatVector,
    pub offset: Rational,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    normal_int: IVec,
}

impl Facet {
    pub fn normal_int(&self) -> &[BigInt] {
        &self.normal_int
    }
}

/// Face counts `(f_0, …, f_{m-1})` for a polytope of dimension `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn get(&self, k: usize) -> Option<u64> {
        self.0.get(k).copied()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `Σ (-1)^k f_k`.
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn satisfies_euler_poincare(&self) -> bool {
        let m = self.dim() as i64;
        self.alternating_sum() == 1 - (-1i64).pow(m as u32)
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A proper nonempty face, as a set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceLatticeEntry {
    pub vertex_set: Vec<usize>,
    pub face_dim: usize,
    /// Faces one dimension up that contain this one.
    pub parents: Vec<usize>,
    /// Faces one dimension down contained in this one.
    pub children: Vec<usize>,
    /// Facets (by index into `Polytope::facets`) containing this face.
    pub facets: Vec<usize>,
}

/// Every proper nonempty face, sorted by `(face_dim, vertex_set)`.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<FaceLatticeEntry>,
    index: HashMap<Vec<usize>, usize>,
    fvector: FVector,
}

impl FaceLattice {
    pub fn faces(&self) -> &[FaceLatticeEntry] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn get(&self, i: usize) -> &FaceLatticeEntry {
        &self.faces[i]
    }

    pub fn find(&self, vertex_set: &[usize]) -> Option<usize> {
        self.index.get(vertex_set).copied()
    }

    pub fn of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &FaceLatticeEntry)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.face_dim == k)
    }

    pub fn fvector(&self) -> &FVector {
        &self.fvector
    }
}

/// A convex polytope given by its vertices.
///
/// Vertices are pairwise distinct and extreme. The polytope may be
/// lower-dimensional (segments as Minkowski summands); use
/// [`Polytope::normalize`] when full dimension is required.
pub struct Polytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<RatVector>,
    facets: Vec<Facet>,
    /// Vertices scaled by one positive factor to integer coordinates.
    scaled: Vec<IVec>,
    lattice: OnceLock<FaceLattice>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        let lattice = OnceLock::new();
        if let Some(l) = self.lattice.get() {
            let _ = lattice.set(l.clone());
        }
        Polytope {
            dim: self.dim,
            affine_dim: self.affine_dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            scaled: self.scaled.clone(),
            lattice,
        }
    }
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("affine_dim", &self.affine_dim)
            .field("vertices", &self.vertices)
            .finish()
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of `points` in `R^dim`, which must be full-dimensional.
    pub fn normalize(points: &[RatVector], dim: usize) -> Result<Polytope, PolytopeError> {
        let p = Self::from_points(points, dim)?;
        if p.affine_dim != dim {
            return Err(PolytopeError::NotFullDimensional {
                affine_dim: p.affine_dim,
                dim,
            });
        }
        Ok(p)
    }

    /// Convex hull of `points` in `R^dim` of any positive dimension.
    pub fn from_points(points: &[RatVector], dim: usize) -> Result<Polytope, PolytopeError> {
        Self::hull_with_origin(points, dim).map(|(p, _)| p)
    }

    /// Like [`Polytope::from_points`], also returning for each vertex the
    /// index of the first input point equal to it.
    pub(crate) fn hull_with_origin(
        points: &[RatVector],
        dim: usize,
    ) -> Result<(Polytope, Vec<usize>), PolytopeError> {
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(PolytopeError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut seen = HashSet::new();
        let mut unique = Vec::new();
        let mut origin = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if seen.insert(p) {
                unique.push(p.clone());
                origin.push(i);
            }
        }
        if unique.len() < 2 {
            return Err(PolytopeError::TooFewVertices {
                found: unique.len(),
            });
        }

        let scaled = lattice::to_lattice(&unique);
        let diffs: Vec<IVec> = scaled[1..]
            .iter()
            .map(|p| lattice::sub(p, &scaled[0]))
            .collect();
        let columns: Vec<IVec> = (0..dim)
            .map(|c| diffs.iter().map(|row| row[c].clone()).collect())
            .collect();
        let axes = lattice::independent_subset(&columns);
        let affine_dim = axes.len();
        let projected: Vec<IVec> = scaled
            .iter()
            .map(|p| axes.iter().map(|&a| p[a].clone()).collect())
            .collect();

        let raw = hull::facets(&projected);
        let mut on_facets: Vec<Vec<usize>> = vec![Vec::new(); unique.len()];
        for (fi, f) in raw.iter().enumerate() {
            for &i in &f.members {
                on_facets[i].push(fi);
            }
        }
        let is_vertex: Vec<bool> = (0..unique.len())
            .map(|i| {
                if on_facets[i].is_empty() {
                    return false;
                }
                let mut common: Vec<usize> = raw[on_facets[i][0]].members.clone();
                for &fi in &on_facets[i][1..] {
                    common.retain(|x| raw[fi].members.binary_search(x).is_ok());
                    if common.len() == 1 {
                        break;
                    }
                }
                common.len() == 1
            })
            .collect();

        let mut new_index = vec![usize::MAX; unique.len()];
        let mut vertices = Vec::new();
        let mut vertex_origin = Vec::new();
        let mut vertex_scaled = Vec::new();
        for i in 0..unique.len() {
            if is_vertex[i] {
                new_index[i] = vertices.len();
                vertices.push(unique[i].clone());
                vertex_origin.push(origin[i]);
                vertex_scaled.push(scaled[i].clone());
            }
        }

        let mut facets: Vec<Facet> = raw
            .into_iter()
            .map(|f| {
                let mut normal_int = vec![BigInt::zero(); dim];
                for (k, &a) in axes.iter().enumerate() {
                    normal_int[a] = f.normal[k].clone();
                }
                let verts: Vec<usize> = f
                    .members
                    .iter()
                    .filter(|&&i| is_vertex[i])
                    .map(|&i| new_index[i])
                    .collect();
                let normal = RatVector::new(
                    normal_int
                        .iter()
                        .cloned()
                        .map(Rational::from_integer)
                        .collect(),
                );
                let offset = exact::dot(&normal, &vertices[verts[0]]).unwrap();
                Facet {
                    normal,
                    offset,
                    vertices: verts,
                    normal_int,
                }
            })
            .collect();
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));

        Ok((
            Polytope {
                dim,
                affine_dim,
                vertices,
                facets,
                scaled: vertex_scaled,
                lattice: OnceLock::new(),
            },
            vertex_origin,
        ))
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Affine dimension of a subset of the vertices.
    pub fn dim_of(&self, vertex_set: &[usize]) -> usize {
        lattice::affine_dim(vertex_set.iter().map(|&i| &self.scaled[i]))
    }

    /// `𝒮(P; l)`: the vertices maximizing `⟨l, ·⟩`, sorted.
    pub fn support_face(&self, direction: &RatVector) -> Result<Vec<usize>, PolytopeError> {
        if direction.dim() != self.dim {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.dim,
                found: direction.dim(),
            });
        }
        if direction.is_zero() {
            return Err(PolytopeError::ZeroDirection);
        }
        Ok(self.support_face_int(&lattice::clear_denominators(direction)))
    }

    /// Support face for an integer direction; the direction must be nonzero.
    pub(crate) fn support_face_int(&self, direction: &[BigInt]) -> Vec<usize> {
        let values: Vec<BigInt> = self
            .scaled
            .iter()
            .map(|p| lattice::dot(direction, p))
            .collect();
        let best = values.iter().max().unwrap();
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v == best)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| build_lattice(self))
    }

    /// Face counts; panics if the Euler–Poincaré relation fails, which
    /// would mean the lattice is wrong.
    pub fn f_vector(&self) -> FVector {
        let f = self.face_lattice().fvector().clone();
        assert!(
            f.satisfies_euler_poincare(),
            "Euler-Poincaré relation violated by f-vector {f}"
        );
        f
    }

    /// Interior direction of the normal cone of a face: the sum of the
    /// outward normals of the facets that contain it.
    pub fn interior_normal(&self, face: &FaceLatticeEntry) -> IVec {
        self.weighted_normal(face, |_| 1)
    }

    /// Positive combination of the containing facets' normals with weight
    /// `weight(position)`.
    pub fn weighted_normal(&self, face: &FaceLatticeEntry, weight: impl Fn(usize) -> i64) -> IVec {
        let mut l = vec![BigInt::zero(); self.dim];
        for (pos, &fi) in face.facets.iter().enumerate() {
            let w = BigInt::from(weight(pos));
            for (acc, c) in l.iter_mut().zip(&self.facets[fi].normal_int) {
                *acc += &w * c;
            }
        }
        l
    }

    /// Facets by exhaustive scan over `d`-subsets of vertices: a canonical
    /// hyperplane through the subset is kept when every vertex lies weakly
    /// on one side. Only for full-dimensional polytopes; `O(C(n,d)·n)`.
    pub fn facets_by_subset_scan(&self) -> Vec<Facet> {
        assert!(self.is_full_dimensional());
        let d = self.dim;
        let n = self.vertices.len();
        let scaled_rat: Vec<RatVector> = self
            .scaled
            .iter()
            .map(|p| RatVector::new(p.iter().cloned().map(Rational::from_integer).collect()))
            .collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for subset in combinations(n, d) {
            let pts: Vec<RatVector> = subset.iter().map(|&i| scaled_rat[i].clone()).collect();
            let HyperplaneFit::Hyperplane { normal, offset } =
                exact::solve_hyperplane(&pts).unwrap()
            else {
                continue;
            };
            let normal_int = lattice::clear_denominators(&normal);
            let offset_int = offset.to_integer();
            let values: Vec<BigInt> = self
                .scaled
                .iter()
                .map(|p| lattice::dot(&normal_int, p))
                .collect();
            let above = values.iter().any(|v| v > &offset_int);
            let below = values.iter().any(|v| v < &offset_int);
            if above && below {
                continue;
            }
            let on: Vec<usize> = (0..n).filter(|&i| values[i] == offset_int).collect();
            if !found.insert(on.clone()) {
                continue;
            }
            let normal_int = if above {
                lattice::neg(&normal_int)
            } else {
                normal_int
            };
            let normal = RatVector::new(
                normal_int
                    .iter()
                    .cloned()
                    .map(Rational::from_integer)
                    .collect(),
            );
            let offset = exact::dot(&normal, &self.vertices[on[0]]).unwrap();
            out.push(Facet {
                normal,
                offset,
                vertices: on,
                normal_int,
            });
        }
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        out
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn build_lattice(p: &Polytope) -> FaceLattice {
    let facets = &p.facets;
    let mut vertex_facets: Vec<Vec<usize>> = vec![Vec::new(); p.vertices.len()];
    for (fi, f) in facets.iter().enumerate() {
        for &v in &f.vertices {
            vertex_facets[v].push(fi);
        }
    }

    // Closure of the facet sets under intersection.
    let mut sets: Vec<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        index.insert(s.clone(), i);
    }
    let mut containing: Vec<Vec<usize>> = Vec::new();
    let mut below: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < sets.len() {
        let face = sets[next].clone();
        let mut touching: Vec<usize> = face
            .iter()
            .flat_map(|&v| vertex_facets[v].iter().copied())
            .collect();
        touching.sort_unstable();
        touching.dedup();
        let mut holds = Vec::new();
        let mut subs = Vec::new();
        for fi in touching {
            let cut = intersect_sorted(&face, &facets[fi].vertices);
            if cut.len() == face.len() {
                holds.push(fi);
                continue;
            }
            let id = match index.get(&cut) {
                Some(&id) => id,
                None => {
                    index.insert(cut.clone(), sets.len());
                    sets.push(cut);
                    sets.len() - 1
                }
            };
            subs.push(id);
        }
        subs.sort_unstable();
        subs.dedup();
        containing.push(holds);
        below.push(subs);
        next += 1;
    }

    let dims: Vec<usize> = sets.iter().map(|s| p.dim_of(s)).collect();
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| (dims[a], &sets[a]).cmp(&(dims[b], &sets[b])));
    let mut rank = vec![0; sets.len()];
    for (pos, &old) in order.iter().enumerate() {
        rank[old] = pos;
    }

    let mut faces: Vec<FaceLatticeEntry> = order
        .iter()
        .map(|&old| FaceLatticeEntry {
            vertex_set: sets[old].clone(),
            face_dim: dims[old],
            parents: Vec::new(),
            children: {
                let mut c: Vec<usize> = below[old]
                    .iter()
                    .filter(|&&s| dims[s] + 1 == dims[old])
                    .map(|&s| rank[s])
                    .collect();
                c.sort_unstable();
                c
            },
            facets: containing[old].clone(),
        })
        .collect();
    for i in 0..faces.len() {
        for c in faces[i].children.clone() {
            faces[c].parents.push(i);
        }
    }

    let mut counts = vec![0u64; p.affine_dim];
    for f in &faces {
        counts[f.face_dim] += 1;
    }
    let index = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.vertex_set.clone(), i))
        .collect();
    FaceLattice {
        faces,
        index,
        fvector: FVector(counts),
    }
}
