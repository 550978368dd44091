use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::exactnum::rational::{dot, int, ints, rat, Rational};
use toric_core::exactnum::RatMatrix;
use toric_core::generate::random_delzant_presentation;
use toric_core::grassmann::{
    ambient_tangent_cone, canonical_cone, chart_point, check_labels, orbifold_group_in_lattice, orbifold_groups,
    slice_cone, AffineMap, GrassmannError, GrassmannPoint, GrassmannPresentation,
};
use toric_core::levi::{LeviPair, TorusData};

fn s3s3_with(extra: Option<Vec<Rational>>) -> GrassmannPresentation {
    let torus = TorusData::standard(4);
    let p1 = RatMatrix::diagonal(&ints(&[1, 0, 1, 0]));
    let p2 = RatMatrix::diagonal(&ints(&[0, 1, 0, 1]));
    let (c1, c2) = match extra {
        Some(d) => {
            let neg: Vec<Rational> = d.iter().map(|x| -x).collect();
            (d, neg)
        }
        None => (vec![Rational::zero(); 4], vec![Rational::zero(); 4]),
    };
    GrassmannPresentation::new(
        torus,
        vec![ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])],
        ints(&[1, 1]),
        vec![AffineMap::new(c1, p1), AffineMap::new(c2, p2)],
    )
    .unwrap()
}

fn s3s3() -> GrassmannPresentation {
    s3s3_with(None)
}

#[test]
fn chart_point_examples() {
    let g = [ints(&[0, 0, 1])];
    let xi = GrassmannPoint::new(3, &[ints(&[1, 2, 5])]).unwrap();
    assert_eq!(chart_point(&g, &xi, &[int(1)]).unwrap(), vec![rat(1, 5), rat(2, 5), int(1)]);
    let xi = GrassmannPoint::new(3, &[ints(&[1, 2, 0])]).unwrap();
    assert_eq!(chart_point(&g, &xi, &[int(1)]), Err(GrassmannError::NotInChart));
    let g = [ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])];
    let h = rat(1, 2);
    let z = Rational::zero();
    let xi = GrassmannPoint::new(4, &[vec![h.clone(), z.clone(), h.clone(), z.clone()], vec![z.clone(), h.clone(), z, h.clone()]]).unwrap();
    assert_eq!(chart_point(&g, &xi, &ints(&[1, 1])).unwrap(), vec![h; 4]);
}

#[test]
fn labelling_examples() {
    let p = s3s3();
    p.check_invariants().unwrap();
    assert!(p.verify_labelling().iter().all(|f| f.ok));
    // constant shift along e_1 - e_3 in column 1, compensated in column 2
    let bad = s3s3_with(Some(ints(&[1, 0, -1, 0])));
    bad.check_invariants().unwrap();
    let report = bad.verify_labelling();
    assert!(!report[0].ok);
    let w = report[0].witness.clone().unwrap();
    assert!(w[0].is_zero(), "witness lies on facet 0");
    assert!(report[1].ok && report[3].ok);
    // codimension one: Ψ(x) = x/λ
    let torus = TorusData::new(3, vec![ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[2, -1, -1])]).unwrap();
    let p = GrassmannPresentation::codimension_one(torus, ints(&[1, 0, 0]), rat(3, 2)).unwrap();
    p.check_invariants().unwrap();
    assert!(p.verify_labelling().iter().all(|f| f.ok));
}

#[test]
fn invariant_failure_is_reported() {
    let torus = TorusData::standard(4);
    let p = GrassmannPresentation::new(
        torus,
        vec![ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])],
        ints(&[1, 1]),
        vec![
            AffineMap::new(ints(&[1, 0, 0, 0]), RatMatrix::diagonal(&ints(&[1, 0, 1, 0]))),
            AffineMap::linear_only(RatMatrix::diagonal(&ints(&[0, 1, 0, 1]))),
        ],
    )
    .unwrap();
    assert!(matches!(p.check_invariants(), Err(GrassmannError::Invariant { .. })));
}

#[test]
fn check_labels_examples() {
    let t = TorusData::standard(3);
    let faces = vec![vec![], vec![0], vec![1], vec![0, 1]];
    let c = check_labels(&t, &faces);
    assert!(c.rational && c.delzant);

    let t = TorusData::new(2, vec![ints(&[1, 1]), ints(&[1, -1])]).unwrap();
    let c = check_labels(&t, &[vec![0, 1]]);
    assert!(c.rational && !c.delzant);
    assert_eq!(c.defects[0].set, vec![0, 1]);
    assert_eq!(c.defects[0].invariant_factors, vec![BigInt::from(1), BigInt::from(2)]);

    let t = TorusData::new(2, vec![vec![rat(1, 2), int(0)], ints(&[0, 1])]).unwrap();
    let c = check_labels(&t, &[vec![0]]);
    assert!(!c.rational);
    assert_eq!(c.non_lattice_labels, vec![0]);
}

#[test]
fn reslice_examples() {
    let p = s3s3();
    let r = p.reslice(&ints(&[1, 2])).unwrap();
    let mut v = r.presentation.vertices();
    v.sort();
    assert_eq!(
        v,
        vec![ints(&[0, 0, 1, 2]), ints(&[0, 2, 1, 0]), ints(&[1, 0, 0, 2]), ints(&[1, 2, 0, 0])]
    );
    assert!(r.preserves_faces(p.lattice()));
    let id = p.reslice(&ints(&[1, 1])).unwrap();
    assert_eq!(id.vertex_map, (0..4).collect::<Vec<_>>());
    assert_eq!(id.presentation.vertices(), p.vertices());
    assert!(matches!(p.reslice(&ints(&[1, 0])), Err(GrassmannError::Degenerate(_))));
}

#[test]
fn reslice_random_positive() {
    let p = s3s3();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let lam = vec![rat(rng.gen_range(1..=9), rng.gen_range(1..=9)), rat(rng.gen_range(1..=9), rng.gen_range(1..=9))];
        let r = p.reslice(&lam).unwrap();
        assert!(r.preserves_faces(p.lattice()));
        r.presentation.check_invariants().unwrap();
    }
}

#[test]
fn orbifold_examples() {
    let z = orbifold_group_in_lattice(&[ints(&[1])], &[ints(&[2])]).unwrap();
    assert_eq!(z.invariant_factors, vec![BigInt::from(2)]);
    assert_eq!(z.order(), BigInt::from(2));
    let std2 = [ints(&[1, 0]), ints(&[0, 1])];
    let z = orbifold_group_in_lattice(&std2, &[ints(&[1, 0]), ints(&[1, 2])]).unwrap();
    assert_eq!(z.invariant_factors, vec![BigInt::from(2)]);
    assert!(orbifold_group_in_lattice(&std2, &[vec![rat(1, 2), int(0)]]) == Err(GrassmannError::NotRational));
    // a face of the S³×S³ data
    let p = s3s3();
    let pair = LeviPair::from_subspace(p.g(), p.lambda(), 4).unwrap();
    for f in &p.lattice().faces {
        assert!(orbifold_groups(p.torus(), &pair, &f.set).unwrap().is_trivial());
    }
}

#[test]
fn non_rational_quotient() {
    // u drops the second coordinate, so u(e_2) = 1/3 lies outside u(ℤ²) = ℤ
    let t = TorusData::new(2, vec![ints(&[1, 0]), vec![rat(1, 3), int(1)]]).unwrap();
    let pair = LeviPair::from_subspace(&[ints(&[0, 1])], &[int(1)], 2).unwrap();
    assert_eq!(orbifold_groups(&t, &pair, &[1]), Err(GrassmannError::NotRational));
}

#[test]
fn slice_cone_examples() {
    let p = s3s3();
    let pair = LeviPair::from_subspace(p.g(), p.lambda(), 4).unwrap();
    let cone = slice_cone(p.torus(), &pair, p.lattice(), &[2, 3]).unwrap();
    assert_eq!(canonical_cone(&cone), vec![ints(&[-1, 0, 1, 0]), ints(&[0, -1, 0, 1])]);
    let tc = ambient_tangent_cone(p.sliced(), &ints(&[1, 1, 0, 0])).unwrap();
    assert_eq!(canonical_cone(&cone), canonical_cone(&tc));

    let sphere = GrassmannPresentation::codimension_one(TorusData::standard(3), ints(&[1, 1, 1]), int(1)).unwrap();
    let pair = LeviPair::from_subspace(sphere.g(), sphere.lambda(), 3).unwrap();
    for (v, x) in sphere.lattice().vertices.iter().zip(sphere.vertices()) {
        let c = slice_cone(sphere.torus(), &pair, sphere.lattice(), &v.active).unwrap();
        let t = ambient_tangent_cone(sphere.sliced(), &x).unwrap();
        assert_eq!(canonical_cone(&c), canonical_cone(&t));
    }
    // three labels through one point of a 2-dimensional slice
    let t = TorusData::new(
        3,
        vec![ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[0, 1, 1]), ints(&[1, -1, -1])],
    )
    .unwrap();
    let pair = LeviPair::from_subspace(&[ints(&[1, 0, 0])], &[int(1)], 3).unwrap();
    let sl = toric_core::levi::slice_polytope(&t, &pair).unwrap();
    let fl = sl.polytope.face_lattice().unwrap();
    assert!(matches!(
        slice_cone(&t, &pair, &fl, &[0, 1, 2]),
        Err(GrassmannError::NotDelzantVertex(_))
    ));
}

#[test]
fn random_delzant_cones_and_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let p = random_delzant_presentation(&mut rng, 7);
        let pair = LeviPair::from_subspace(p.g(), p.lambda(), p.torus().dim()).unwrap();
        let sets: Vec<Vec<usize>> = p.lattice().faces.iter().map(|f| f.set.clone()).collect();
        let c = check_labels(p.torus(), &sets);
        assert!(c.delzant);
        for s in &sets {
            assert!(orbifold_groups(p.torus(), &pair, s).unwrap().is_trivial());
        }
        for (v, x) in p.lattice().vertices.iter().zip(p.vertices()) {
            let c = slice_cone(p.torus(), &pair, p.lattice(), &v.active).unwrap();
            let t = ambient_tangent_cone(p.sliced(), &x).unwrap();
            assert_eq!(canonical_cone(&c), canonical_cone(&t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn grassmann_points_are_canonical(
        rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 4), 1..=3),
        mix in proptest::collection::vec(-3i64..=3, 9),
    ) {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| ints(r)).collect();
        let Ok(a) = GrassmannPoint::new(4, &rows) else { return Ok(()) };
        let k = rows.len();
        let mut m = RatMatrix::from_i64(k, k, &mix[..k * k]);
        for i in 0..k {
            m[(i, i)] = int(1);
            for j in 0..i {
                m[(i, j)] = int(0);
            }
        }
        let mixed = (&m * &RatMatrix::from_rows(4, &rows)).to_rows();
        let b = GrassmannPoint::new(4, &mixed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn chart_point_lies_on_plane(
        rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 4), 2),
        lam in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| ints(r)).collect();
        let Ok(xi) = GrassmannPoint::new(4, &rows) else { return Ok(()) };
        let g = [ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])];
        let lam = ints(&lam);
        if let Ok(x) = chart_point(&g, &xi, &lam) {
            prop_assert_eq!(dot(&g[0], &x), lam[0].clone());
            prop_assert_eq!(dot(&g[1], &x), lam[1].clone());
            prop_assert!(xi.contains(&x));
        }
    }
}
