mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use minkcount::exact::{lattice, solve_hyperplane, RatVector};
use minkcount::gaussmap3d::{gaussian_map, overlay, GaussianMap3};
use minkcount::generators::{
    generate, make_general, random_polytope, stream_seed, Family, GenSpec,
};
use minkcount::io::{parse_poly, write_poly};
use minkcount::minkowski::{
    decompose_all, is_general_orientation, lemma1_check, minkowski_sum, partial_sum, SumInstance,
};
use minkcount::polytope::combinations;
use minkcount::{Polytope, RatMatrix};

fn points(d: usize) -> impl Strategy<Value = Vec<RatVector>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, d), d + 1..=9)
        .prop_map(|pts| pts.iter().map(|p| RatVector::from_ints(p)).collect())
}

fn full_dim(d: usize) -> impl Strategy<Value = (Vec<RatVector>, Polytope)> {
    points(d).prop_filter_map("not full-dimensional", move |pts| {
        Polytope::normalize(&pts, d).ok().map(|p| (pts, p))
    })
}

fn any_full_dim() -> impl Strategy<Value = (Vec<RatVector>, Polytope)> {
    prop_oneof![full_dim(2), full_dim(3), full_dim(4)]
}

/// A general-orientation instance in dimension 3 with 2 or 3 summands.
fn general_instance(seed: u64) -> SumInstance {
    let r = 2 + (seed % 2) as usize;
    let summands = (0..r)
        .map(|i| random_polytope(3, 4 + (seed as usize + i) % 2, stream_seed(seed, i)).unwrap())
        .collect();
    make_general(&SumInstance::new(summands).unwrap(), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_does_not_depend_on_row_order(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..6),
        shift in 0usize..6,
    ) {
        let ints: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut rotated = ints.clone();
        rotated.rotate_left(shift % ints.len());
        rotated.reverse();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let rat_rank = RatMatrix::from_ints(&refs).unwrap().rank();
        prop_assert_eq!(lattice::rank(ints), rat_rank);
        prop_assert_eq!(lattice::rank(rotated), rat_rank);
    }

    #[test]
    fn hyperplane_fit_ignores_point_order(
        pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3),
    ) {
        let a: Vec<RatVector> = pts.iter().map(|p| RatVector::from_ints(p)).collect();
        let mut b = a.clone();
        b.reverse();
        prop_assert_eq!(solve_hyperplane(&a).unwrap(), solve_hyperplane(&b).unwrap());
    }

    #[test]
    fn hull_matches_double_description((pts, p) in any_full_dim()) {
        let oracle = common::double_description(&pts);
        prop_assert_eq!(common::library_facets(&p), oracle.facets);
        prop_assert_eq!(p.f_vector().0, oracle.fvector);
    }

    #[test]
    fn gift_wrapping_matches_subset_scan((_, p) in full_dim(3)) {
        let key = |fs: &[minkcount::Facet]| -> BTreeSet<Vec<BigInt>> {
            fs.iter().map(|f| f.normal_int().to_vec()).collect()
        };
        prop_assert_eq!(key(p.facets()), key(&p.facets_by_subset_scan()));
    }

    #[test]
    fn hull_ignores_input_order((pts, p) in any_full_dim()) {
        let mut rev = pts.clone();
        rev.reverse();
        let q = Polytope::normalize(&rev, p.dim()).unwrap();
        let a: BTreeSet<_> = p.vertices().iter().cloned().collect();
        let b: BTreeSet<_> = q.vertices().iter().cloned().collect();
        prop_assert_eq!(a, b);
        prop_assert_eq!(p.f_vector(), q.f_vector());
    }

    #[test]
    fn interior_normal_selects_its_face((_, p) in any_full_dim()) {
        let lat = p.face_lattice();
        for face in lat.faces() {
            let n = p.interior_normal(face);
            if lattice::is_zero(&n) {
                continue;
            }
            let dir = RatVector::new(n.into_iter().map(num_rational::BigRational::from_integer).collect());
            prop_assert_eq!(p.support_face(&dir).unwrap(), face.vertex_set.clone());
        }
    }

    #[test]
    fn vertices_are_extreme((_, p) in any_full_dim()) {
        for (i, v) in p.vertices().iter().enumerate() {
            let others: Vec<RatVector> =
                p.vertices().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, w)| w.clone()).collect();
            let Ok(q) = Polytope::normalize(&others, p.dim()) else { continue };
            let outside = q.facets().iter().any(|f| f.normal.dot(v).unwrap() > f.offset);
            prop_assert!(outside, "vertex {} lies in the hull of the others", i);
        }
    }

    #[test]
    fn poly_round_trip((_, p) in any_full_dim()) {
        let text = write_poly(&p);
        let q = parse_poly(&text).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(write_poly(&q), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn provenance_and_trivial_bound(seed in 0u64..10_000) {
        let inst = general_instance(seed);
        let sum = minkowski_sum(&inst).unwrap();
        let product: u64 = inst.vertex_counts().iter().product();
        prop_assert!(sum.polytope.vertex_count() as u64 <= product);
        for (v, prov) in sum.polytope.vertices().iter().zip(&sum.provenance) {
            let mut acc = RatVector::zeros(3);
            for (j, &m) in sum.members.iter().enumerate() {
                acc = &acc + &inst.summand(m).vertices()[prov[j]];
            }
            prop_assert_eq!(&acc, v);
        }
    }

    #[test]
    fn decompositions_are_exact_and_monotone(seed in 0u64..10_000) {
        let inst = general_instance(seed);
        prop_assert!(is_general_orientation(&inst).unwrap().is_general());
        let sum = minkowski_sum(&inst).unwrap();
        let parts = decompose_all(&inst, &sum);
        let lat = sum.polytope.face_lattice();
        for dec in &parts {
            prop_assert!(dec.exact);
            // The face is the sum of its parts.
            let mut pts = vec![RatVector::zeros(3)];
            for (j, &m) in sum.members.iter().enumerate() {
                let verts = inst.summand(m).vertices();
                pts = pts
                    .iter()
                    .flat_map(|a| dec.parts[j].iter().map(move |&i| a + &verts[i]))
                    .collect();
            }
            let distinct: BTreeSet<RatVector> = pts.iter().cloned().collect();
            let summed: BTreeSet<RatVector> = if distinct.len() == 1 {
                distinct
            } else {
                Polytope::from_points(&pts, 3).unwrap().vertices().iter().cloned().collect()
            };
            let face: BTreeSet<RatVector> = lat
                .get(dec.face)
                .vertex_set
                .iter()
                .map(|&v| sum.polytope.vertices()[v].clone())
                .collect();
            prop_assert_eq!(summed, face);
            for &child in &lat.get(dec.face).children {
                let sub: BTreeSet<usize> = parts[child].support.iter().copied().collect();
                let sup: BTreeSet<usize> = dec.support.iter().copied().collect();
                prop_assert!(sub.is_subset(&sup));
            }
        }
    }

    #[test]
    fn facets_survive_in_partial_sums_containing_their_support(seed in 0u64..10_000) {
        let inst = general_instance(seed);
        let sum = minkowski_sum(&inst).unwrap();
        let facets: Vec<usize> = sum.polytope.face_lattice().of_dim(2).map(|(i, _)| i).collect();
        for size in 1..inst.r() {
            for s in combinations(inst.r(), size) {
                let partial = partial_sum(&inst, &s).unwrap();
                for &f in &facets {
                    lemma1_check(&inst, &sum, f, &partial).unwrap();
                }
            }
        }
    }

    #[test]
    fn overlay_is_the_normal_fan_of_the_sum(seed in 0u64..10_000) {
        let inst = general_instance(seed);
        let maps: Vec<GaussianMap3> = inst.summands().iter().map(|p| gaussian_map(p).unwrap()).collect();
        let refs: Vec<&GaussianMap3> = maps.iter().collect();
        let ov = overlay(&refs).unwrap();
        let f = minkowski_sum(&inst).unwrap().polytope.f_vector();
        let (nodes, arcs, regions) = ov.counts();
        prop_assert_eq!([nodes as u64, arcs as u64, regions as u64], [f.0[2], f.0[1], f.0[0]]);
    }

    #[test]
    fn generators_are_deterministic(seed in 0u64..1_000, family in 0usize..3) {
        let (family, d, r, n) = [
            (Family::Random, 3, 3, vec![4, 5, 6]),
            (Family::Segments, 3, 4, vec![2]),
            (Family::Cyclic, 4, 2, vec![6]),
        ][family].clone();
        let spec = GenSpec { d, r, n, family, seed };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        prop_assert_eq!(a.summands(), b.summands());
        for p in a.summands() {
            prop_assert_eq!(&parse_poly(&write_poly(p)).unwrap(), p);
        }
    }
}
