//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, lattice, rat, RatMatrix, RatVector, Rational};
use crate::minkowski::{is_general_orientation, partial_sum, MinkowskiError, SumInstance};
use crate::polytope::{combinations, Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("{what}: gave up after {attempts} attempts")]
    BudgetExhausted { what: String, attempts: usize },
    #[error("no extremal instance for d={d}, r={r}, n={n} within {attempts} attempts")]
    ExtremalSearchFailed {
        d: usize,
        r: usize,
        n: usize,
        attempts: usize,
    },
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Random,
    Segments,
    OrthoPolygons,
    Extremal,
    Cyclic,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Random,
        Family::Segments,
        Family::OrthoPolygons,
        Family::Extremal,
        Family::Cyclic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Segments => "segments",
            Family::OrthoPolygons => "ortho-polygons",
            Family::Extremal => "extremal",
            Family::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenError::Invalid(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub d: usize,
    pub r: usize,
    /// Vertex count per summand; a single entry applies to all.
    pub n: Vec<usize>,
    pub family: Family,
    pub seed: u64,
}

impl GenSpec {
    pub fn counts(&self) -> Result<Vec<usize>, GenError> {
        let counts = match self.n.len() {
            1 => vec![self.n[0]; self.r],
            len if len == self.r => self.n.clone(),
            len => {
                return Err(GenError::Invalid(format!(
                    "{len} vertex counts given for {} summands",
                    self.r
                )))
            }
        };
        if counts.iter().any(|&n| n < 2) {
            return Err(GenError::Invalid("every summand needs n >= 2".into()));
        }
        Ok(counts)
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.d < 2 {
            return Err(GenError::Invalid(format!("need d >= 2, got {}", self.d)));
        }
        if self.r < 1 {
            return Err(GenError::Invalid("need r >= 1".into()));
        }
        Ok(())
    }
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<SumInstance, GenError> {
    spec.validate()?;
    let (d, r) = (spec.d, spec.r);
    match spec.family {
        Family::Random => {
            let counts = spec.counts()?;
            let summands = counts
                .iter()
                .enumerate()
                .map(|(i, &n)| random_polytope(d, n, stream_seed(spec.seed, i)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SumInstance::new(summands)?)
        }
        Family::Segments => random_segments(d, r, spec.seed),
        Family::OrthoPolygons => ortho_polygons(d, r, uniform(spec)?),
        Family::Extremal => extremal_family(d, r, uniform(spec)?, spec.seed),
        Family::Cyclic => {
            let counts = spec.counts()?;
            let summands = counts
                .iter()
                .enumerate()
                .map(|(i, &n)| cyclic_polytope(d, n, stream_seed(spec.seed, i)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SumInstance::new(summands)?)
        }
    }
}

fn uniform(spec: &GenSpec) -> Result<usize, GenError> {
    let counts = spec.counts()?;
    if counts.iter().any(|&n| n != counts[0]) {
        return Err(GenError::Invalid(format!(
            "family {} needs equal vertex counts",
            spec.family
        )));
    }
    Ok(counts[0])
}

/// Seed for the `i`-th independent stream derived from `seed`.
pub fn stream_seed(seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64 + 1);
    rng.gen()
}

/// `Q = (I - A)(I + A)^{-1}` for the skew-symmetric `A` whose strict upper
/// triangle, row by row, is `upper`.
pub fn cayley_rotation(d: usize, upper: &[Rational]) -> Result<RatMatrix, GenError> {
    if upper.len() != d * (d - 1) / 2 {
        return Err(GenError::Invalid(format!(
            "a skew {d}x{d} matrix has {} free entries, got {}",
            d * (d - 1) / 2,
            upper.len()
        )));
    }
    let mut a = RatMatrix::zeros(d, d);
    let mut it = upper.iter();
    for i in 0..d {
        for j in i + 1..d {
            let x = it.next().unwrap().clone();
            a.set(i, j, x.clone());
            a.set(j, i, -x);
        }
    }
    let id = RatMatrix::identity(d);
    let plus = id.add(&a).expect("square");
    let minus = id.sub(&a).expect("square");
    let inv = plus
        .inverse()
        .map_err(|_| GenError::Invalid("I + A is singular".into()))?;
    Ok(minus.mul(&inv).expect("square"))
}

/// A rotation with skew entries drawn from `-3..=3`.
pub fn random_rotation(d: usize, rng: &mut ChaCha8Rng) -> RatMatrix {
    loop {
        let upper: Vec<Rational> = (0..d * (d - 1) / 2)
            .map(|_| int(rng.gen_range(-3i64..=3)))
            .collect();
        if let Ok(q) = cayley_rotation(d, &upper) {
            return q;
        }
    }
}

/// `Q · p` for every vertex, hulled with the same dimension handling as
/// the input.
pub fn rotate(p: &Polytope, q: &RatMatrix) -> Result<Polytope, GenError> {
    let pts: Vec<RatVector> = p
        .vertices()
        .iter()
        .map(|v| q.apply(v).expect("dimensions agree"))
        .collect();
    Ok(Polytope::from_points(&pts, p.dim())?)
}

const SHELL: i64 = 120;

/// A point with half-integer coordinates in the shell `0.6 R <= |p| <= R`,
/// `R = 60`.
fn shell_point(d: usize, rng: &mut ChaCha8Rng) -> RatVector {
    loop {
        let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-SHELL..=SHELL)).collect();
        let sq: i64 = c.iter().map(|x| x * x).sum();
        if 25 * sq >= 9 * SHELL * SHELL && sq <= SHELL * SHELL {
            return RatVector::new(c.iter().map(|&x| rat(x, 2)).collect());
        }
    }
}

/// A full-dimensional polytope with exactly `n` vertices.
pub fn random_polytope(d: usize, n: usize, seed: u64) -> Result<Polytope, GenError> {
    if n < d + 1 {
        return Err(GenError::Invalid(format!(
            "a full-dimensional polytope in dimension {d} needs n >= {}, got {n}",
            d + 1
        )));
    }
    const ATTEMPTS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let pts: Vec<RatVector> = (0..n).map(|_| shell_point(d, &mut rng)).collect();
        match Polytope::normalize(&pts, d) {
            Ok(p) if p.vertex_count() == n => return Ok(p),
            _ => continue,
        }
    }
    Err(GenError::BudgetExhausted {
        what: format!("random polytope d={d} n={n}"),
        attempts: ATTEMPTS,
    })
}

/// Cyclic polytope on the moment curve, randomly rotated.
pub fn cyclic_polytope(d: usize, n: usize, seed: u64) -> Result<Polytope, GenError> {
    if n < d + 1 {
        return Err(GenError::Invalid(format!(
            "a cyclic polytope in dimension {d} needs n >= {}, got {n}",
            d + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<RatVector> = (0..n)
        .map(|j| {
            let t = rat(2 * j as i64 - n as i64 + 1, 2);
            let mut c = Vec::with_capacity(d);
            let mut x = t.clone();
            for _ in 0..d {
                c.push(x.clone());
                x *= &t;
            }
            RatVector::new(c)
        })
        .collect();
    let p = Polytope::normalize(&pts, d)?;
    rotate(&p, &random_rotation(d, &mut rng))
}

/// Returns `inst` itself when it is already in general orientations,
/// otherwise rotates every summand independently until it is.
pub fn make_general(inst: &SumInstance, seed: u64) -> Result<SumInstance, GenError> {
    if is_general_orientation(inst)?.is_general() {
        return Ok(inst.clone());
    }
    const ATTEMPTS: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let summands = inst
            .summands()
            .iter()
            .map(|p| rotate(p, &random_rotation(inst.dim(), &mut rng)))
            .collect::<Result<Vec<_>, _>>()?;
        let candidate = SumInstance::new(summands)?;
        match is_general_orientation(&candidate) {
            Ok(o) if o.is_general() => return Ok(candidate),
            Ok(_) | Err(MinkowskiError::DegenerateCoincidence { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GenError::BudgetExhausted {
        what: "general orientation".into(),
        attempts: ATTEMPTS,
    })
}

/// Point `k` of `n` distinct rational points on the unit circle.
fn circle_point(k: usize, n: usize) -> (Rational, Rational) {
    let t = rat(2 * k as i64 - n as i64 + 1, 2);
    let t2 = &t * &t;
    let den = int(1) + &t2;
    ((int(1) - &t2) / &den, (int(2) * &t) / den)
}

/// `r` regular-ish `n`-gons, the `i`-th in the plane of coordinates `2i`
/// and `2i+1`. The summands are 2-dimensional; their sum has `n^r`
/// vertices.
pub fn ortho_polygons(d: usize, r: usize, n: usize) -> Result<SumInstance, GenError> {
    if 2 * r > d {
        return Err(GenError::Invalid(format!("need 2r <= d, got d={d}, r={r}")));
    }
    if n < 3 {
        return Err(GenError::Invalid(format!("need n >= 3, got {n}")));
    }
    let summands = (0..r)
        .map(|i| {
            let pts: Vec<RatVector> = (0..n)
                .map(|k| {
                    let (x, y) = circle_point(k, n);
                    let mut c = vec![int(0); d];
                    c[2 * i] = x;
                    c[2 * i + 1] = y;
                    RatVector::new(c)
                })
                .collect();
            Polytope::from_points(&pts, d)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SumInstance::new(summands)?)
}

/// `r` segments from the origin whose directions are pairwise
/// non-parallel, with every `min(r, d)` of them linearly independent.
pub fn random_segments(d: usize, r: usize, seed: u64) -> Result<SumInstance, GenError> {
    if r < 1 {
        return Err(GenError::Invalid("need r >= 1".into()));
    }
    const ATTEMPTS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = r.min(d);
    for _ in 0..ATTEMPTS {
        let dirs: Vec<Vec<BigInt>> = (0..r)
            .map(|_| {
                (0..d)
                    .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                    .collect()
            })
            .collect();
        let pairs_ok = combinations(r, 2.min(r)).iter().all(|s| {
            s.len() < 2 || lattice::rank(vec![dirs[s[0]].clone(), dirs[s[1]].clone()]) == 2
        });
        let ok = pairs_ok
            && dirs.iter().all(|v| !lattice::is_zero(v))
            && combinations(r, k)
                .iter()
                .all(|s| lattice::rank(s.iter().map(|&i| dirs[i].clone()).collect()) == k);
        if !ok {
            continue;
        }
        let summands = dirs
            .iter()
            .map(|v| {
                let end = RatVector::new(v.iter().cloned().map(Rational::from_integer).collect());
                Polytope::from_points(&[RatVector::zeros(d), end], d)
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(SumInstance::new(summands)?);
    }
    Err(GenError::BudgetExhausted {
        what: format!("segments d={d} r={r}"),
        attempts: ATTEMPTS,
    })
}

/// Searches for `r` summands with `n` vertices each such that every
/// `(d-1)`-fold partial sum has `n^(d-1)` vertices and the instance is in
/// general orientations. Summands are full-dimensional when `n > d` and
/// `(n-1)`-simplices otherwise.
pub fn extremal_family(d: usize, r: usize, n: usize, seed: u64) -> Result<SumInstance, GenError> {
    if d < 3 || r + 1 < d || n < 3 {
        return Err(GenError::Invalid(format!(
            "need d >= 3, r >= d-1, n >= 3; got d={d}, r={r}, n={n}"
        )));
    }
    const ATTEMPTS: usize = 400;
    let m = (n - 1).min(d);
    let target = (n as u64).pow(d as u32 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..ATTEMPTS {
        let mut summands = Vec::with_capacity(r);
        for _ in 0..r {
            let mut ts: Vec<i64> = Vec::with_capacity(n);
            while ts.len() < n {
                let t = rng.gen_range(-12i64..=12);
                if !ts.contains(&t) {
                    ts.push(t);
                }
            }
            let pts: Vec<RatVector> = ts
                .iter()
                .map(|&t| {
                    let t = rat(t, 4);
                    let mut c = vec![int(0); d];
                    let mut x = t.clone();
                    for slot in c.iter_mut().take(m) {
                        *slot = x.clone();
                        x *= &t;
                    }
                    RatVector::new(c)
                })
                .collect();
            let p = Polytope::from_points(&pts, d)?;
            let p = rotate(&p, &random_rotation(d, &mut rng))?;
            if p.vertex_count() != n {
                continue 'attempt;
            }
            summands.push(p);
        }
        let inst = SumInstance::new(summands)?;
        for s in combinations(r, d - 1) {
            match partial_sum(&inst, &s) {
                Ok(ps) if ps.polytope.vertex_count() as u64 == target => {}
                _ => continue 'attempt,
            }
        }
        if matches!(is_general_orientation(&inst), Ok(o) if o.is_general()) {
            return Ok(inst);
        }
    }
    Err(GenError::ExtremalSearchFailed {
        d,
        r,
        n,
        attempts: ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::minkowski_sum;
    use crate::polytope::FVector;
    use proptest::prelude::*;

    fn orthogonal(q: &RatMatrix) -> bool {
        q.transpose().mul(q).unwrap() == RatMatrix::identity(q.nrows())
    }

    #[test]
    fn cayley_examples() {
        let q = cayley_rotation(2, &[int(1)]).unwrap();
        assert_eq!(q, RatMatrix::from_ints(&[&[0, -1], &[1, 0]]).unwrap());
        assert_eq!(
            cayley_rotation(4, &vec![int(0); 6]).unwrap(),
            RatMatrix::identity(4)
        );
        let q = cayley_rotation(3, &[rat(1, 2), int(-2), rat(3, 5)]).unwrap();
        assert!(orthogonal(&q));
        assert_eq!(q.determinant().unwrap(), int(1));
    }

    #[test]
    fn random_polytope_examples() {
        let t = random_polytope(3, 4, 1).unwrap();
        assert_eq!(t.f_vector(), FVector(vec![4, 6, 4]));
        assert_eq!(random_polytope(2, 5, 2).unwrap().vertex_count(), 5);
        let p = random_polytope(4, 6, 3).unwrap();
        assert_eq!(p.vertex_count(), 6);
        assert!(p.is_full_dimensional());
        assert!(random_polytope(3, 3, 0).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec {
            d: 3,
            r: 3,
            n: vec![5],
            family: Family::Random,
            seed: 42,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GenSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn make_general_rotates_translated_cubes() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(RatVector::from_ints(&[x, y, z]));
                }
            }
        }
        let cube = Polytope::normalize(&pts, 3).unwrap();
        let inst = SumInstance::new(vec![cube.clone(), cube]).unwrap();
        let g = make_general(&inst, 9).unwrap();
        assert!(is_general_orientation(&g).unwrap().is_general());
        assert_eq!(g, make_general(&inst, 9).unwrap());
        assert_eq!(make_general(&g, 1).unwrap(), g);
    }

    #[test]
    fn ortho_polygon_sums_attain_the_product() {
        let sum = |d, r, n| {
            let inst = ortho_polygons(d, r, n).unwrap();
            minkowski_sum(&inst).unwrap().polytope.vertex_count()
        };
        assert_eq!(sum(4, 2, 3), 9);
        assert_eq!(sum(2, 1, 5), 5);
        assert!(ortho_polygons(3, 2, 3).is_err());
    }

    #[test]
    fn segments_make_zonotopes() {
        let z = minkowski_sum(&random_segments(3, 3, 4).unwrap()).unwrap();
        assert_eq!(z.polytope.f_vector(), FVector(vec![8, 12, 6]));
        let z = minkowski_sum(&random_segments(3, 4, 4).unwrap()).unwrap();
        assert_eq!(z.polytope.vertex_count(), 14);
        let z = minkowski_sum(&random_segments(2, 5, 4).unwrap()).unwrap();
        assert_eq!(z.polytope.f_vector(), FVector(vec![10, 10]));
    }

    #[test]
    fn extremal_triangles() {
        let inst = extremal_family(3, 2, 3, 5).unwrap();
        assert_eq!(minkowski_sum(&inst).unwrap().polytope.vertex_count(), 9);
        assert!(extremal_family(2, 2, 3, 0).is_err());
    }

    #[test]
    fn cyclic_family() {
        let p = cyclic_polytope(4, 6, 0).unwrap();
        // Cyclic 4-polytopes are neighborly: every pair of vertices is an edge.
        assert_eq!(p.f_vector().get(1), Some(15));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("blob".parse::<Family>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn cayley_is_orthogonal(d in 2usize..5, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = random_rotation(d, &mut rng);
            prop_assert!(orthogonal(&q));
            prop_assert_eq!(q.determinant().unwrap(), int(1));
        }
    }
}
