//! Gaussian maps of 3-polytopes as cell complexes on the sphere, their
//! overlay, poles, the west ordering and western-most corners.
//!
//! Points of the sphere are handled as integer rays; nothing is ever
//! normalized. A cell of an overlay carries, for each input polytope, the
//! cell of that polytope's map containing it.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::lattice::{self, IVec};
use crate::polytope::Polytope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("Gaussian maps are built for 3-polytopes, got dimension {0}")]
    NotThreeDimensional(usize),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("maps are not in general orientations: {0}")]
    NotGeneralOrientation(String),
    #[error("ray lies on the pole axis")]
    RayOnAxis,
    #[error("pole axis must be nonzero")]
    ZeroAxis,
    #[error("cell contains a pole")]
    PoleCell,
    #[error("two distinct nodes of a cell share a meridian")]
    WestTie,
    #[error("no valid pole axis found in {0} attempts")]
    NoValidPole(usize),
    #[error("claim violated: {0}")]
    ClaimViolated(String),
}

/// A cell of a map. For a single polytope, `Node(i)` is the normal ray of
/// facet `i`, `Arc(k)` the normal region of the `k`-th edge in lattice
/// order, and `Region(v)` the normal cone of vertex `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cell {
    Node(usize),
    Arc(usize),
    Region(usize),
}

impl Cell {
    /// Dimension of the cell on the sphere.
    pub fn dim(self) -> usize {
        match self {
            Cell::Node(_) => 0,
            Cell::Arc(_) => 1,
            Cell::Region(_) => 2,
        }
    }

    /// Dimension of the dual face of the polytope.
    pub fn face_dim(self) -> usize {
        2 - self.dim()
    }
}

/// Per-summand cells containing a cell of an overlay.
pub type Label = Vec<Cell>;

/// Indices of the summands contributing a positive-dimensional face.
pub fn support(label: &[Cell]) -> Vec<usize> {
    (0..label.len())
        .filter(|&i| label[i].face_dim() > 0)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianMap3 {
    nodes: Vec<IVec>,
    arcs: Vec<[usize; 2]>,
    /// Node cycles, counterclockwise seen from outside the sphere.
    regions: Vec<Vec<usize>>,
    region_arcs: Vec<Vec<usize>>,
    node_labels: Vec<Label>,
    arc_labels: Vec<Label>,
    region_labels: Vec<Label>,
}

fn cross(a: &[BigInt], b: &[BigInt]) -> IVec {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn det(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> BigInt {
    lattice::dot(&cross(a, b), c)
}

fn same_ray(a: &[BigInt], b: &[BigInt]) -> bool {
    lattice::is_zero(&cross(a, b)) && lattice::dot(a, b).is_positive()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcPos {
    Outside,
    Endpoint,
    Interior,
}

/// Position of ray `x` relative to the minor arc from `a` to `b`.
fn arc_position(a: &[BigInt], b: &[BigInt], x: &[BigInt]) -> ArcPos {
    let n = cross(a, b);
    if !lattice::dot(&n, x).is_zero() {
        return ArcPos::Outside;
    }
    if same_ray(x, a) || same_ray(x, b) {
        return ArcPos::Endpoint;
    }
    let s1 = lattice::dot(&cross(a, x), &n);
    let s2 = lattice::dot(&cross(x, b), &n);
    if s1.is_positive() && s2.is_positive() {
        ArcPos::Interior
    } else {
        ArcPos::Outside
    }
}

/// Strictly inside the cone over a counterclockwise node cycle.
fn in_cone(cycle: &[&IVec], x: &[BigInt]) -> bool {
    (0..cycle.len()).all(|i| det(cycle[i], cycle[(i + 1) % cycle.len()], x).is_positive())
}

fn sum_rays<'a>(rays: impl IntoIterator<Item = &'a IVec>) -> IVec {
    rays.into_iter()
        .fold(vec![BigInt::zero(); 3], |acc, r| lattice::add(&acc, r))
}

impl GaussianMap3 {
    pub fn nodes(&self) -> &[IVec] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[[usize; 2]] {
        &self.arcs
    }

    pub fn regions(&self) -> &[Vec<usize>] {
        &self.regions
    }

    pub fn region_arcs(&self) -> &[Vec<usize>] {
        &self.region_arcs
    }

    /// `(nodes, arcs, regions)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.nodes.len(), self.arcs.len(), self.regions.len())
    }

    /// Number of summands whose maps were overlaid.
    pub fn summands(&self) -> usize {
        self.node_labels.first().map_or(0, Vec::len)
    }

    pub fn label(&self, cell: Cell) -> &Label {
        match cell {
            Cell::Node(i) => &self.node_labels[i],
            Cell::Arc(i) => &self.arc_labels[i],
            Cell::Region(i) => &self.region_labels[i],
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.nodes.len())
            .map(Cell::Node)
            .chain((0..self.arcs.len()).map(Cell::Arc))
            .chain((0..self.regions.len()).map(Cell::Region))
    }

    /// Nodes in the closure of `cell`.
    pub fn incident_nodes(&self, cell: Cell) -> Vec<usize> {
        match cell {
            Cell::Node(i) => vec![i],
            Cell::Arc(i) => self.arcs[i].to_vec(),
            Cell::Region(i) => self.regions[i].clone(),
        }
    }

    /// The cell with exactly this label.
    pub fn find_cell(&self, label: &[Cell]) -> Option<Cell> {
        self.cells().find(|&c| self.label(c).as_slice() == label)
    }

    /// The cell containing direction `x` in its relative interior.
    pub fn locate(&self, x: &[BigInt]) -> Option<Cell> {
        if let Some(i) = self.nodes.iter().position(|n| same_ray(n, x)) {
            return Some(Cell::Node(i));
        }
        if let Some(i) = self
            .arcs
            .iter()
            .position(|&[a, b]| arc_position(&self.nodes[a], &self.nodes[b], x) == ArcPos::Interior)
        {
            return Some(Cell::Arc(i));
        }
        self.regions
            .iter()
            .position(|cyc| {
                let rays: Vec<&IVec> = cyc.iter().map(|&n| &self.nodes[n]).collect();
                in_cone(&rays, x)
            })
            .map(Cell::Region)
    }

    fn region_rays(&self, r: usize) -> Vec<&IVec> {
        self.regions[r].iter().map(|&n| &self.nodes[n]).collect()
    }

    /// A direction in the relative interior of `cell`.
    pub fn interior_ray(&self, cell: Cell) -> IVec {
        sum_rays(self.incident_nodes(cell).iter().map(|&n| &self.nodes[n]))
    }

    /// Cell complex as JSON: nodes as integer rays, arcs as node pairs,
    /// regions as arc cycles, plus the support of every node.
    pub fn to_json(&self) -> Value {
        let int = |x: &BigInt| -> Value {
            i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
        };
        json!({
            "nodes": self.nodes.iter().map(|n| n.iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "arcs": self.arcs,
            "regions": self.region_arcs,
            "node_support": self.node_labels.iter().map(|l| support(l)).collect::<Vec<_>>(),
        })
    }
}

/// The Gaussian map of a full-dimensional 3-polytope.
pub fn gaussian_map(p: &Polytope) -> Result<GaussianMap3, GaussError> {
    if p.dim() != 3 {
        return Err(GaussError::NotThreeDimensional(p.dim()));
    }
    if !p.is_full_dimensional() {
        return Err(GaussError::NotFullDimensional);
    }
    let lat = p.face_lattice();
    let nodes: Vec<IVec> = p
        .facets()
        .iter()
        .map(|f| lattice::primitive(f.normal_int().to_vec()))
        .collect();
    let mut arcs = Vec::new();
    let mut arc_of = HashMap::new();
    for (_, e) in lat.of_dim(1) {
        let pair = [e.facets[0], e.facets[1]];
        arc_of.insert(pair, arcs.len());
        arcs.push(pair);
    }
    let mut regions = Vec::new();
    let mut region_arcs = Vec::new();
    for (_, v) in lat.of_dim(0) {
        let around = &v.facets;
        let neighbours = |f: usize| -> Vec<usize> {
            around
                .iter()
                .copied()
                .filter(|&g| arc_of.contains_key(&[f.min(g), f.max(g)]))
                .collect()
        };
        let mut cycle = vec![around[0]];
        let mut prev = usize::MAX;
        loop {
            let cur = *cycle.last().unwrap();
            let next = neighbours(cur)
                .into_iter()
                .find(|&g| g != prev && g != cur)
                .expect("vertex figure is a cycle");
            if next == cycle[0] {
                break;
            }
            prev = cur;
            cycle.push(next);
        }
        let l = sum_rays(cycle.iter().map(|&n| &nodes[n]));
        if det(&nodes[cycle[0]], &nodes[cycle[1]], &l).is_negative() {
            cycle.reverse();
        }
        let ra = (0..cycle.len())
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                arc_of[&[a.min(b), a.max(b)]]
            })
            .collect();
        regions.push(cycle);
        region_arcs.push(ra);
    }
    Ok(GaussianMap3 {
        node_labels: (0..nodes.len()).map(|i| vec![Cell::Node(i)]).collect(),
        arc_labels: (0..arcs.len()).map(|i| vec![Cell::Arc(i)]).collect(),
        region_labels: (0..regions.len()).map(|i| vec![Cell::Region(i)]).collect(),
        nodes,
        arcs,
        regions,
        region_arcs,
    })
}

fn degenerate(msg: String) -> GaussError {
    GaussError::NotGeneralOrientation(msg)
}

/// Common refinement of the maps, which is the Gaussian map of the sum of
/// the underlying polytopes. Labels are concatenated in input order.
pub fn overlay(maps: &[&GaussianMap3]) -> Result<GaussianMap3, GaussError> {
    match maps {
        [] => Err(degenerate("nothing to overlay".into())),
        [one] => Ok((*one).clone()),
        _ => Overlay::build(maps),
    }
}

enum Origin {
    Base(usize, usize),
    Crossing((usize, usize), (usize, usize)),
}

struct Overlay<'a> {
    maps: &'a [&'a GaussianMap3],
    nodes: Vec<IVec>,
    origin: Vec<Origin>,
    index: HashMap<IVec, usize>,
}

impl<'a> Overlay<'a> {
    fn build(maps: &'a [&'a GaussianMap3]) -> Result<GaussianMap3, GaussError> {
        let mut ov = Overlay {
            maps,
            nodes: Vec::new(),
            origin: Vec::new(),
            index: HashMap::new(),
        };
        for (m, map) in maps.iter().enumerate() {
            for (i, n) in map.nodes.iter().enumerate() {
                ov.add_node(n.clone(), Origin::Base(m, i))?;
            }
        }
        ov.check_nodes_off_arcs()?;
        let mut on_arc: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for mi in 0..maps.len() {
            for mj in mi + 1..maps.len() {
                for (ai, &[a, b]) in maps[mi].arcs.iter().enumerate() {
                    for (bj, &[c, d]) in maps[mj].arcs.iter().enumerate() {
                        let (ma, mb) = (maps[mi], maps[mj]);
                        let hit =
                            crossing([&ma.nodes[a], &ma.nodes[b]], [&mb.nodes[c], &mb.nodes[d]])
                                .map_err(|e| {
                                    degenerate(format!(
                                        "arcs {ai} of map {mi} and {bj} of map {mj} {e}"
                                    ))
                                })?;
                        if let Some(x) = hit {
                            let id = ov.add_node(x, Origin::Crossing((mi, ai), (mj, bj)))?;
                            on_arc.entry((mi, ai)).or_default().push(id);
                            on_arc.entry((mj, bj)).or_default().push(id);
                        }
                    }
                }
            }
        }
        ov.finish(&on_arc)
    }

    fn add_node(&mut self, ray: IVec, origin: Origin) -> Result<usize, GaussError> {
        if self.index.contains_key(&ray) {
            return Err(degenerate(format!("three cells meet at ray {ray:?}")));
        }
        let id = self.nodes.len();
        self.index.insert(ray.clone(), id);
        self.nodes.push(ray);
        self.origin.push(origin);
        Ok(id)
    }

    fn check_nodes_off_arcs(&self) -> Result<(), GaussError> {
        for (mi, m) in self.maps.iter().enumerate() {
            for n in &m.nodes {
                for (mj, other) in self.maps.iter().enumerate() {
                    if mi == mj {
                        continue;
                    }
                    for &[a, b] in &other.arcs {
                        if arc_position(&other.nodes[a], &other.nodes[b], n) != ArcPos::Outside {
                            return Err(degenerate(format!(
                                "node {n:?} of map {mi} lies on an arc of map {mj}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn label_at(&self, m: usize, x: &[BigInt]) -> Result<&'a Label, GaussError> {
        let map = self.maps[m];
        map.locate(x)
            .map(|c| map.label(c))
            .ok_or_else(|| degenerate(format!("ray {x:?} is on no cell of map {m}")))
    }

    fn label_with(&self, x: &[BigInt], fixed: &[(usize, Cell)]) -> Result<Label, GaussError> {
        let mut label = Vec::new();
        for m in 0..self.maps.len() {
            match fixed.iter().find(|(fm, _)| *fm == m) {
                Some(&(_, c)) => label.extend_from_slice(self.maps[m].label(c)),
                None => label.extend_from_slice(self.label_at(m, x)?),
            }
        }
        Ok(label)
    }

    fn finish(
        self,
        on_arc: &HashMap<(usize, usize), Vec<usize>>,
    ) -> Result<GaussianMap3, GaussError> {
        let base: Vec<usize> = {
            let mut offset = Vec::with_capacity(self.maps.len());
            let mut acc = 0;
            for m in self.maps {
                offset.push(acc);
                acc += m.nodes.len();
            }
            offset
        };

        let mut arcs = Vec::new();
        let mut arc_labels = Vec::new();
        for (m, map) in self.maps.iter().enumerate() {
            for (k, &[a, b]) in map.arcs.iter().enumerate() {
                let (ra, rb) = (&map.nodes[a], &map.nodes[b]);
                let n = cross(ra, rb);
                let mut inner = on_arc.get(&(m, k)).cloned().unwrap_or_default();
                inner.sort_by(|&x, &y| {
                    positive_first(&lattice::dot(&cross(&self.nodes[x], &self.nodes[y]), &n))
                });
                let mut chain = vec![base[m] + a];
                chain.extend(inner);
                chain.push(base[m] + b);
                for w in chain.windows(2) {
                    let mid = lattice::add(&self.nodes[w[0]], &self.nodes[w[1]]);
                    arc_labels.push(self.label_with(&mid, &[(m, Cell::Arc(k))])?);
                    arcs.push([w[0].min(w[1]), w[0].max(w[1])]);
                }
            }
        }

        let mut node_labels = Vec::with_capacity(self.nodes.len());
        for (ray, origin) in self.nodes.iter().zip(&self.origin) {
            let fixed = match *origin {
                Origin::Base(m, i) => vec![(m, Cell::Node(i))],
                Origin::Crossing((mi, ai), (mj, aj)) => {
                    vec![(mi, Cell::Arc(ai)), (mj, Cell::Arc(aj))]
                }
            };
            node_labels.push(self.label_with(ray, &fixed)?);
        }

        let (regions, region_arcs) = trace_regions(&self.nodes, &arcs);
        if self.nodes.len() + regions.len() != arcs.len() + 2 {
            return Err(GaussError::ClaimViolated(format!(
                "overlay fails Euler's formula: {} - {} + {} != 2",
                self.nodes.len(),
                arcs.len(),
                regions.len()
            )));
        }
        let mut region_labels = Vec::with_capacity(regions.len());
        for cyc in &regions {
            let l = sum_rays(cyc.iter().map(|&n| &self.nodes[n]));
            region_labels.push(self.label_with(&l, &[])?);
        }
        Ok(GaussianMap3 {
            nodes: self.nodes,
            arcs,
            regions,
            region_arcs,
            node_labels,
            arc_labels,
            region_labels,
        })
    }
}

/// Interior crossing of two minor arcs from different maps. Any contact
/// other than a transversal crossing of relative interiors is an error.
fn crossing(p: [&IVec; 2], q: [&IVec; 2]) -> Result<Option<IVec>, &'static str> {
    let n1 = cross(p[0], p[1]);
    let n2 = cross(q[0], q[1]);
    let t = cross(&n1, &n2);
    if lattice::is_zero(&t) {
        let touches = q
            .iter()
            .any(|x| arc_position(p[0], p[1], x) != ArcPos::Outside)
            || p.iter()
                .any(|x| arc_position(q[0], q[1], x) != ArcPos::Outside);
        return if touches { Err("overlap") } else { Ok(None) };
    }
    for x in [t.clone(), lattice::neg(&t)] {
        let a = arc_position(p[0], p[1], &x);
        let b = arc_position(q[0], q[1], &x);
        match (a, b) {
            (ArcPos::Interior, ArcPos::Interior) => return Ok(Some(lattice::primitive(x))),
            (ArcPos::Outside, _) | (_, ArcPos::Outside) => {}
            _ => return Err("touch"),
        }
    }
    Ok(None)
}

/// `Less` for a positive orientation sign.
fn positive_first(s: &BigInt) -> Ordering {
    BigInt::zero().cmp(s)
}

/// Counterclockwise order of the neighbours of `center` seen from outside.
fn rotation(center: &IVec, nbrs: &mut [usize], nodes: &[IVec]) {
    let r0 = nodes[nbrs[0]].clone();
    let nn = lattice::dot(center, center);
    let project = |v: &IVec| -> IVec {
        let k = lattice::dot(center, v);
        (0..3).map(|i| &nn * &v[i] - &k * &center[i]).collect()
    };
    let p0 = project(&r0);
    let half = |v: &IVec| -> u8 {
        let s = det(center, &r0, v);
        if s.is_positive() || (s.is_zero() && lattice::dot(&p0, &project(v)).is_positive()) {
            0
        } else {
            1
        }
    };
    nbrs.sort_by(|&a, &b| {
        let (va, vb) = (&nodes[a], &nodes[b]);
        half(va)
            .cmp(&half(vb))
            .then_with(|| positive_first(&det(center, va, vb)))
    });
}

/// Faces of the embedded graph, each traced with its interior on the left.
fn trace_regions(nodes: &[IVec], arcs: &[[usize; 2]]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut arc_of = HashMap::new();
    for (k, &[a, b]) in arcs.iter().enumerate() {
        around[a].push(b);
        around[b].push(a);
        arc_of.insert((a, b), k);
        arc_of.insert((b, a), k);
    }
    for (c, nbrs) in around.iter_mut().enumerate() {
        rotation(&nodes[c], nbrs, nodes);
    }
    let pos: Vec<HashMap<usize, usize>> = around
        .iter()
        .map(|nb| nb.iter().enumerate().map(|(i, &n)| (n, i)).collect())
        .collect();
    let mut used = std::collections::HashSet::new();
    let mut regions = Vec::new();
    let mut region_arcs = Vec::new();
    for u0 in 0..nodes.len() {
        for &v0 in &around[u0] {
            if used.contains(&(u0, v0)) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut ra = Vec::new();
            let (mut u, mut v) = (u0, v0);
            while used.insert((u, v)) {
                cyc.push(u);
                ra.push(arc_of[&(u, v)]);
                let len = around[v].len();
                let w = around[v][(pos[v][&u] + len - 1) % len];
                u = v;
                v = w;
            }
            regions.push(cyc);
            region_arcs.push(ra);
        }
    }
    (regions, region_arcs)
}

/// Axis `u` with a basis `e1, e2` of its orthogonal plane such that
/// `(e1, e2, u)` is positively oriented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poles {
    pub axis: IVec,
    pub e1: IVec,
    pub e2: IVec,
}

impl Poles {
    pub fn new(axis: IVec) -> Result<Poles, GaussError> {
        if axis.len() != 3 || lattice::is_zero(&axis) {
            return Err(GaussError::ZeroAxis);
        }
        let unit = |i: usize| -> IVec { (0..3).map(|j| BigInt::from(u8::from(i == j))).collect() };
        let mut e1 = cross(&unit(1), &axis);
        if lattice::is_zero(&e1) {
            e1 = cross(&axis, &unit(0));
        }
        let e1 = lattice::primitive(e1);
        let e2 = lattice::primitive(cross(&axis, &e1));
        Ok(Poles { axis, e1, e2 })
    }

    pub fn from_ints(axis: [i64; 3]) -> Result<Poles, GaussError> {
        Poles::new(axis.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The axis must avoid the plane of every arc.
    pub fn is_valid_for(&self, map: &GaussianMap3) -> bool {
        map.arcs
            .iter()
            .all(|&[a, b]| !det(&map.nodes[a], &map.nodes[b], &self.axis).is_zero())
    }

    /// Coordinates `(cos θ_1, sin θ_1)` up to a positive factor.
    fn angle(&self, p: &[BigInt]) -> Result<(BigInt, BigInt), GaussError> {
        let c = lattice::dot(&self.e2, p);
        let s = lattice::dot(&self.e1, p);
        if c.is_zero() && s.is_zero() {
            return Err(GaussError::RayOnAxis);
        }
        Ok((c, s))
    }
}

/// Deterministic pole choice: attempt `k` draws from seed `seed + k`.
pub fn choose_poles(map: &GaussianMap3, seed: u64) -> Result<Poles, GaussError> {
    const ATTEMPTS: usize = 1000;
    for k in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let axis: IVec = (0..3)
            .map(|_| BigInt::from(rng.gen_range(-97i64..=97)))
            .collect();
        if lattice::is_zero(&axis) {
            continue;
        }
        let poles = Poles::new(axis)?;
        if poles.is_valid_for(map) {
            return Ok(poles);
        }
    }
    Err(GaussError::NoValidPole(ATTEMPTS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum West {
    /// The first ray is west of the second.
    First,
    Second,
    Tie,
}

/// Compares `θ_1` of two rays: `p` is west of `q` when `θ_1(p)` lies in
/// the half turn starting at `θ_1(q)`. Exactly opposite angles satisfy
/// both directions and are resolved towards the lexicographically smaller
/// ray.
pub fn west_compare(p: &[BigInt], q: &[BigInt], poles: &Poles) -> Result<West, GaussError> {
    let (pc, ps) = poles.angle(p)?;
    let (qc, qs) = poles.angle(q)?;
    let c = &qc * &ps - &qs * &pc;
    Ok(if c.is_positive() {
        West::First
    } else if c.is_negative() {
        West::Second
    } else if (&pc * &qc + &ps * &qs).is_positive() {
        West::Tie
    } else if p < q {
        West::First
    } else {
        West::Second
    })
}

fn antipodal(p: &[BigInt], q: &[BigInt], poles: &Poles) -> Result<bool, GaussError> {
    let (pc, ps) = poles.angle(p)?;
    let (qc, qs) = poles.angle(q)?;
    Ok((&qc * &ps - &qs * &pc).is_zero() && (&pc * &qc + &ps * &qs).is_negative())
}

fn strictly_west(
    map: &GaussianMap3,
    a: usize,
    b: usize,
    poles: &Poles,
) -> Result<bool, GaussError> {
    match west_compare(&map.nodes[a], &map.nodes[b], poles)? {
        West::First => Ok(true),
        West::Second => Ok(false),
        West::Tie => Err(GaussError::WestTie),
    }
}

/// Whether a region of `map` contains either pole.
pub fn contains_pole(map: &GaussianMap3, cell: Cell, poles: &Poles) -> bool {
    let Cell::Region(r) = cell else {
        return false;
    };
    let rays = map.region_rays(r);
    in_cone(&rays, &poles.axis) || in_cone(&rays, &lattice::neg(&poles.axis))
}

/// The incident node strictly west of all others.
pub fn westernmost(map: &GaussianMap3, cell: Cell, poles: &Poles) -> Result<usize, GaussError> {
    if contains_pole(map, cell, poles) {
        return Err(GaussError::PoleCell);
    }
    let nodes = map.incident_nodes(cell);
    let mut best = nodes[0];
    for &n in &nodes[1..] {
        if strictly_west(map, n, best, poles)? {
            best = n;
        }
    }
    for &n in &nodes {
        if n != best && !strictly_west(map, best, n, poles)? {
            return Err(GaussError::ClaimViolated(format!(
                "cell {cell:?} has no western-most node"
            )));
        }
    }
    Ok(best)
}

/// Incident nodes west of their neighbours along the cell boundary.
pub fn local_optima(
    map: &GaussianMap3,
    cell: Cell,
    poles: &Poles,
) -> Result<Vec<usize>, GaussError> {
    Ok(match cell {
        Cell::Node(i) => vec![i],
        Cell::Arc(i) => {
            let [a, b] = map.arcs[i];
            vec![if strictly_west(map, a, b, poles)? {
                a
            } else {
                b
            }]
        }
        Cell::Region(r) => {
            let cyc = &map.regions[r];
            let k = cyc.len();
            let mut out = Vec::new();
            for i in 0..k {
                let (prev, cur, next) = (cyc[(i + k - 1) % k], cyc[i], cyc[(i + 1) % k]);
                if strictly_west(map, cur, prev, poles)? && strictly_west(map, cur, next, poles)? {
                    out.push(cur);
                }
            }
            out
        }
    })
}

/// Every non-pole cell has exactly one local optimum, its western-most
/// node.
pub fn check_local_global(map: &GaussianMap3, poles: &Poles) -> Result<(), GaussError> {
    for cell in map.cells() {
        if contains_pole(map, cell, poles) {
            continue;
        }
        let w = westernmost(map, cell, poles)?;
        let local = local_optima(map, cell, poles)?;
        if local != [w] {
            return Err(GaussError::ClaimViolated(format!(
                "cell {cell:?}: local optima {local:?}, western-most {w}"
            )));
        }
    }
    Ok(())
}

/// Every non-pole cell lies within an open half turn of `θ_1`.
pub fn check_hemisphere(map: &GaussianMap3, poles: &Poles) -> Result<(), GaussError> {
    for cell in map.cells() {
        if contains_pole(map, cell, poles) {
            continue;
        }
        let nodes = map.incident_nodes(cell);
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if antipodal(&map.nodes[a], &map.nodes[b], poles)? {
                    return Err(GaussError::ClaimViolated(format!(
                        "cell {cell:?} spans a half turn"
                    )));
                }
            }
        }
        westernmost(map, cell, poles)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCount {
    /// Western-most corners of nodes, arcs and regions.
    pub w: [u64; 3],
    /// Each non-pole cell with its western-most node.
    pub per_cell: Vec<(Cell, usize)>,
    pub pole_cells: Vec<Cell>,
}

pub fn count_witnesses(map: &GaussianMap3, poles: &Poles) -> Result<WitnessCount, GaussError> {
    let mut w = [0u64; 3];
    let mut per_cell = Vec::new();
    let mut pole_cells = Vec::new();
    for cell in map.cells() {
        match westernmost(map, cell, poles) {
            Ok(n) => {
                w[cell.dim()] += 1;
                per_cell.push((cell, n));
            }
            Err(GaussError::PoleCell) => pole_cells.push(cell),
            Err(e) => return Err(e),
        }
    }
    Ok(WitnessCount {
        w,
        per_cell,
        pole_cells,
    })
}

/// For a cell of the overlay `full` of all summands and the overlay `sub`
/// of the summands in `subset` (ascending, same order as overlaid):
/// whether the cell's western-most corner is again the western-most
/// corner of a cell of the same dimension in `sub`. Disagreement with
/// `I_F ⊆ S`, where `F` is the facet dual to the western-most node, is
/// reported as a violated claim.
pub fn witness_membership(
    full: &GaussianMap3,
    cell: Cell,
    sub: &GaussianMap3,
    subset: &[usize],
    poles: &Poles,
) -> Result<bool, GaussError> {
    let p = westernmost(full, cell, poles)?;
    let i_f = support(full.label(Cell::Node(p)));
    let expected = i_f.iter().all(|i| subset.contains(i));
    let restricted: Label = subset.iter().map(|&i| full.label(cell)[i]).collect();
    let there = sub.find_cell(&restricted).ok_or_else(|| {
        GaussError::ClaimViolated(format!(
            "no cell labelled {restricted:?} in the partial overlay"
        ))
    })?;
    let observed = there.dim() == cell.dim()
        && match westernmost(sub, there, poles) {
            Ok(q) => sub.nodes[q] == full.nodes[p],
            Err(GaussError::PoleCell) => false,
            Err(e) => return Err(e),
        };
    if observed != expected {
        return Err(GaussError::ClaimViolated(format!(
            "witness of {cell:?} with support {i_f:?}: membership in {subset:?} is {observed}"
        )));
    }
    Ok(observed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatVector;

    fn poly(pts: &[[i64; 3]]) -> Polytope {
        let v: Vec<RatVector> = pts.iter().map(|p| RatVector::from_ints(p)).collect();
        Polytope::normalize(&v, 3).unwrap()
    }

    fn cube() -> Polytope {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push([x, y, z]);
                }
            }
        }
        poly(&pts)
    }

    fn tetra() -> Polytope {
        poly(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    fn tetra2() -> Polytope {
        poly(&[[0, 0, 0], [3, 1, 2], [-1, 4, 1], [2, -2, 5]])
    }

    fn ray(c: [i64; 3]) -> IVec {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cube_and_tetrahedron_maps() {
        assert_eq!(gaussian_map(&cube()).unwrap().counts(), (6, 12, 8));
        assert_eq!(gaussian_map(&tetra()).unwrap().counts(), (4, 6, 4));
    }

    #[test]
    fn regions_are_counterclockwise_cones_around_their_vertex() {
        let p = cube();
        let g = gaussian_map(&p).unwrap();
        for (r, cyc) in g.regions().iter().enumerate() {
            assert_eq!(cyc.len(), 3);
            let l = g.interior_ray(Cell::Region(r));
            assert_eq!(g.locate(&l), Some(Cell::Region(r)));
            let dir = RatVector::new(
                l.iter()
                    .cloned()
                    .map(crate::Rational::from_integer)
                    .collect(),
            );
            assert_eq!(p.support_face(&dir).unwrap(), vec![r]);
        }
    }

    #[test]
    fn pole_validity() {
        let g = gaussian_map(&cube()).unwrap();
        assert!(Poles::from_ints([1, 2, 5]).unwrap().is_valid_for(&g));
        assert!(!Poles::from_ints([0, 0, 1]).unwrap().is_valid_for(&g));
        let chosen = choose_poles(&g, 3).unwrap();
        assert!(chosen.is_valid_for(&g));
        assert_eq!(chosen, choose_poles(&g, 3).unwrap());
    }

    #[test]
    fn west_examples() {
        let poles = Poles::from_ints([0, 0, 1]).unwrap();
        assert_eq!(poles.e1, ray([1, 0, 0]));
        assert_eq!(poles.e2, ray([0, 1, 0]));
        let (e1, e2) = (ray([1, 0, 0]), ray([0, 1, 0]));
        assert_eq!(west_compare(&e1, &e2, &poles).unwrap(), West::First);
        assert_eq!(west_compare(&e2, &e1, &poles).unwrap(), West::Second);
        assert_eq!(west_compare(&e1, &e1, &poles).unwrap(), West::Tie);
        let m1 = ray([-1, 0, 0]);
        assert_eq!(west_compare(&e1, &m1, &poles).unwrap(), West::Second);
        assert_eq!(west_compare(&m1, &e1, &poles).unwrap(), West::First);
        assert_eq!(
            west_compare(&ray([0, 0, 3]), &e1, &poles).unwrap_err(),
            GaussError::RayOnAxis
        );
    }

    #[test]
    fn cube_witnesses() {
        let g = gaussian_map(&cube()).unwrap();
        let poles = Poles::from_ints([1, 2, 5]).unwrap();
        let w = count_witnesses(&g, &poles).unwrap();
        assert_eq!(w.w, [6, 12, 6]);
        assert_eq!(w.pole_cells.len(), 2);
        check_local_global(&g, &poles).unwrap();
        check_hemisphere(&g, &poles).unwrap();
        // The vertex (1,1,1) has normal cone spanned by e1, e2, e3 and so
        // contains the pole (1,2,5).
        assert_eq!(
            westernmost(&g, Cell::Region(7), &poles).unwrap_err(),
            GaussError::PoleCell
        );
        // Vertex (1,0,1): cone over e1, -e2, e3; e1 sits at θ_1 = π/2 and
        // e3 on the far side of the axis, so exhaustive comparison picks one
        // node, which the boundary walk must agree with.
        let cell = Cell::Region(5);
        let w5 = westernmost(&g, cell, &poles).unwrap();
        assert_eq!(local_optima(&g, cell, &poles).unwrap(), vec![w5]);
    }

    #[test]
    fn tetrahedron_witnesses() {
        let g = gaussian_map(&tetra()).unwrap();
        let poles = choose_poles(&g, 11).unwrap();
        assert_eq!(count_witnesses(&g, &poles).unwrap().w, [4, 6, 2]);
    }

    #[test]
    fn overlay_of_one_is_identity() {
        let g = gaussian_map(&cube()).unwrap();
        assert_eq!(overlay(&[&g]).unwrap(), g);
    }

    #[test]
    fn overlay_matches_sum() {
        use crate::minkowski::{minkowski_sum, SumInstance};
        let (a, b) = (tetra(), tetra2());
        let ga = gaussian_map(&a).unwrap();
        let gb = gaussian_map(&b).unwrap();
        let ov = overlay(&[&ga, &gb]).unwrap();
        let sum = minkowski_sum(&SumInstance::new(vec![a, b]).unwrap()).unwrap();
        let f = sum.polytope.f_vector();
        assert_eq!(
            ov.counts(),
            (f.0[2] as usize, f.0[1] as usize, f.0[0] as usize)
        );
        for n in 0..ov.nodes().len() {
            let s = support(ov.label(Cell::Node(n))).len();
            assert!(s == 1 || s == 2);
        }
        let poles = choose_poles(&ov, 5).unwrap();
        check_local_global(&ov, &poles).unwrap();
        for (cell, _) in count_witnesses(&ov, &poles).unwrap().per_cell {
            for subset in [vec![0], vec![1]] {
                let sub = if subset == [0] { &ga } else { &gb };
                witness_membership(&ov, cell, sub, &subset, &poles).unwrap();
            }
            assert!(witness_membership(&ov, cell, &ov, &[0, 1], &poles).unwrap());
        }
    }

    #[test]
    fn overlay_rejects_translated_copies() {
        let g = gaussian_map(&cube()).unwrap();
        assert!(matches!(
            overlay(&[&g, &g]),
            Err(GaussError::NotGeneralOrientation(_))
        ));
    }

    #[test]
    fn dump_has_plain_integers() {
        let g = gaussian_map(&tetra()).unwrap();
        let v = g.to_json();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
        assert!(v["nodes"][0][0].is_i64());
        assert_eq!(v["regions"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn lower_dimensional_input_is_rejected() {
        let seg = Polytope::from_points(
            &[
                RatVector::from_ints(&[0, 0, 0]),
                RatVector::from_ints(&[1, 1, 1]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(
            gaussian_map(&seg).unwrap_err(),
            GaussError::NotFullDimensional
        );
    }
}
