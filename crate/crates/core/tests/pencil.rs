use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::exactnum::rational::{int, ints, rat, Rational};
use toric_core::exactnum::{MultiPoly, RatMatrix};
use toric_core::generate::{factored_pencil, random_pencil, random_pencil_factors, random_rational, random_skew};
use toric_core::pencil::{
    classify_lcontact, is_fat, pfaffian_poly, pfaffian_rational, product_sphere_pencil, quaternionic_pencil,
    standard_symplectic, verify_witness, FatWitness, Fatness, PencilError, SkewPencil,
};

/// Determinant by fraction Gaussian elimination on a private copy.
fn det_gauss(m: &RatMatrix) -> Rational {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = m.to_rows();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det
}

fn t(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

#[test]
fn pfaffian_examples() {
    assert_eq!(pfaffian_rational(&standard_symplectic(2)).unwrap(), int(1));
    let p = MultiPoly::var(1, 0);
    let z = MultiPoly::zero(1);
    let m = vec![vec![z.clone(), p.clone()], vec![-&p, z]];
    assert_eq!(pfaffian_poly(&m, 1).unwrap(), p);
    let q = quaternionic_pencil().degeneracy_polynomial();
    assert_eq!(q.poly, -&(&(&t(0) * &t(0)) + &(&t(1) * &t(1))));
    assert_eq!(q.to_string(), "-t1^2 - t2^2");
}

#[test]
fn pfaffian_errors() {
    let odd = RatMatrix::zeros(3, 3);
    assert_eq!(pfaffian_rational(&odd), Err(PencilError::OddSize(3)));
    let mut ns = RatMatrix::zeros(2, 2);
    ns[(0, 1)] = int(1);
    assert!(matches!(pfaffian_rational(&ns), Err(PencilError::NotSkew(_, _))));
    assert!(matches!(SkewPencil::new(2, 1, vec![standard_symplectic(1)]), Err(PencilError::MatrixCount { .. })));
}

#[test]
fn product_sphere_examples() {
    let p = product_sphere_pencil(&[1, 1]).unwrap().degeneracy_polynomial();
    assert_eq!(p.poly, &t(0) * &t(1));
    assert_eq!(p.to_string(), "t1*t2");
    let p = product_sphere_pencil(&[0, 2]).unwrap().degeneracy_polynomial();
    assert_eq!(p.to_string(), "t2^2");
    for m in 1..=3 {
        let p = product_sphere_pencil(&[m]).unwrap();
        assert_eq!(p.matrices()[0], standard_symplectic(m));
        assert_eq!(p.degeneracy_polynomial().poly, MultiPoly::var(1, 0).pow(m as u32));
    }
}

#[test]
fn classify_examples() {
    let d = product_sphere_pencil(&[0, 2]).unwrap().degeneracy_polynomial();
    let c = classify_lcontact(&d).unwrap();
    assert_eq!((c.form, c.multiplicity), (ints(&[0, 1]), 2));
    assert!(classify_lcontact(&product_sphere_pencil(&[1, 1]).unwrap().degeneracy_polynomial()).is_none());
    // (t1 + t2)^3 from three 2x2 blocks
    let mut w = [RatMatrix::zeros(6, 6), RatMatrix::zeros(6, 6)];
    for b in 0..3 {
        for k in &mut w {
            k[(2 * b, 2 * b + 1)] = int(1);
            k[(2 * b + 1, 2 * b)] = int(-1);
        }
    }
    let d = SkewPencil::new(2, 3, w.to_vec()).unwrap().degeneracy_polynomial();
    let c = classify_lcontact(&d).unwrap();
    assert_eq!((c.form.clone(), c.multiplicity, c.scale.clone()), (ints(&[1, 1]), 3, int(1)));
    assert_eq!(c.form_poly().pow(3).scale(&c.scale), d.poly);
}

#[test]
fn classify_on_product_spheres() {
    for ms in [[1, 0, 0], [0, 2, 0], [1, 1, 0], [0, 1, 2], [2, 0, 1], [0, 0, 3], [1, 1, 1]] {
        let d = product_sphere_pencil(&ms).unwrap().degeneracy_polynomial();
        let nonzero = ms.iter().filter(|&&x| x > 0).count();
        assert_eq!(classify_lcontact(&d).is_some(), nonzero == 1, "{ms:?}");
        let mut expect = MultiPoly::one(3);
        for (i, &mi) in ms.iter().enumerate() {
            expect = &expect * &MultiPoly::var(3, i).pow(mi as u32);
        }
        assert_eq!(d.poly, expect);
    }
}

#[test]
fn fatness_examples() {
    assert!(matches!(is_fat(&quaternionic_pencil(), 100), Fatness::Yes { .. }));
    let p = product_sphere_pencil(&[1, 1]).unwrap();
    match is_fat(&p, 100) {
        Fatness::No { witness } => {
            assert_eq!(witness, FatWitness::Point(ints(&[1, 0])));
            assert!(verify_witness(&p.degeneracy_polynomial().poly, &witness));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(is_fat(&product_sphere_pencil(&[2]).unwrap(), 10), Fatness::Yes { .. }));
    // ℓ = 3: t1 t2 t3 has zeros on sampled points
    let p = product_sphere_pencil(&[1, 1, 1]).unwrap();
    match is_fat(&p, 50) {
        Fatness::No { witness } => assert!(verify_witness(&p.degeneracy_polynomial().poly, &witness)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sampled_fatness_on_definite_form() {
    // t1² + t2² + t3² has no nonzero zero, so sampling can only say unknown
    let f = MultiPoly::var(3, 0).pow(2);
    let g = &(&f + &MultiPoly::var(3, 1).pow(2)) + &MultiPoly::var(3, 2).pow(2);
    assert_eq!(toric_core::pencil::fatness_of(&g, 200), Fatness::Unknown { samples: 200 });
    // an indefinite form gets a segment witness
    let h = &MultiPoly::var(3, 0).pow(2) - &(&MultiPoly::var(3, 1).pow(2).scale(&int(2)));
    match toric_core::pencil::fatness_of(&h, 200) {
        Fatness::No { witness } => assert!(verify_witness(&h, &witness)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn pf_squared_is_det() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let ell = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=4);
        let p = random_pencil(&mut rng, ell, m);
        let d = p.degeneracy_polynomial();
        assert!(d.poly.is_zero() || (d.poly.is_homogeneous() && d.poly.degree() == Some(m as u32)));
        for _ in 0..10 {
            let pt: Vec<Rational> = (0..ell).map(|_| random_rational(&mut rng, 5)).collect();
            let a = p.evaluate(&pt);
            let pf = d.poly.eval(&pt);
            assert_eq!(&pf * &pf, det_gauss(&a));
            assert_eq!(pfaffian_rational(&a).unwrap(), pf);
        }
    }
}

#[test]
fn pfaffian_is_block_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..50 {
        let (ma, mb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = random_skew(&mut rng, ma, 4);
        let b = random_skew(&mut rng, mb, 4);
        let n = 2 * (ma + mb);
        let mut c = RatMatrix::zeros(n, n);
        for i in 0..2 * ma {
            for j in 0..2 * ma {
                c[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..2 * mb {
            for j in 0..2 * mb {
                c[(2 * ma + i, 2 * ma + j)] = b[(i, j)].clone();
            }
        }
        assert_eq!(
            pfaffian_rational(&c).unwrap(),
            pfaffian_rational(&a).unwrap() * pfaffian_rational(&b).unwrap()
        );
    }
}

#[test]
fn binary_fatness_matches_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut fat, mut thin) = (0, 0);
    for _ in 0..40 {
        let f = random_pencil_factors(&mut rng, 4);
        // a real zero exists iff some factor is linear or an indefinite quadratic
        let expect_fat = f.linear.is_empty()
            && f.quadratic.iter().all(|[a, b, c]| (b * b - int(4) * a * c).is_negative());
        let p = factored_pencil(&f);
        let verdict = is_fat(&p, 0);
        match &verdict {
            Fatness::Yes { .. } => {
                fat += 1;
                assert!(expect_fat, "{f:?}");
            }
            Fatness::No { witness } => {
                thin += 1;
                assert!(!expect_fat, "{f:?}");
                assert!(verify_witness(&p.degeneracy_polynomial().poly, witness));
            }
            Fatness::Unknown { .. } => panic!("ℓ = 2 is decided exactly"),
        }
        if matches!(verdict, Fatness::Yes { .. }) {
            assert!(classify_lcontact(&p.degeneracy_polynomial()).is_none());
        }
    }
    assert!(fat > 0 && thin > 0);
}

#[test]
fn irrational_roots_give_segments() {
    // t1² − 2 t2² vanishes only on irrational directions
    let mut w = [RatMatrix::zeros(4, 4), RatMatrix::zeros(4, 4)];
    let set = |w: &mut RatMatrix, i: usize, j: usize, v: Rational| {
        w[(j, i)] = -v.clone();
        w[(i, j)] = v;
    };
    set(&mut w[0], 0, 1, int(1));
    set(&mut w[0], 2, 3, int(1));
    set(&mut w[1], 0, 2, int(1));
    set(&mut w[1], 1, 3, int(2));
    let p = SkewPencil::new(2, 2, w.to_vec()).unwrap();
    let poly = p.degeneracy_polynomial().poly;
    assert_eq!(poly.eval(&[int(1), int(1)]), int(-1));
    match is_fat(&p, 0) {
        Fatness::No { witness: w @ FatWitness::Segment { .. } } => assert!(verify_witness(&poly, &w)),
        other => panic!("{other:?}"),
    }
    assert!(!verify_witness(&poly, &FatWitness::Point(vec![rat(7, 5), int(1)])));
}
