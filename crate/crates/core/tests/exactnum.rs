use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::exactnum::rational::{int, ints, rat, Rational};
use toric_core::exactnum::sturm::{locate_real_root, RootLocation};
use toric_core::exactnum::{
    count_real_roots, integer_kernel, invariant_factors, is_saturated_basis, parse_rational,
    smith_normal_form, sturm_count, Bound, IntMatrix, MultiPoly, RatMatrix, SturmError, UniPoly,
};

fn imat(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
    IntMatrix::from_i64(rows, cols, data)
}

/// Cofactor expansion, independent of the elimination code.
fn det_cofactor(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let minor_rows: Vec<Vec<BigInt>> = (1..n)
            .map(|i| (0..n).filter(|&k| k != j).map(|k| m[(i, k)].clone()).collect())
            .collect();
        let minor = IntMatrix::from_rows(n - 1, &minor_rows);
        let term = &m[(0, j)] * det_cofactor(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn check_smith(m: &IntMatrix) {
    let s = smith_normal_form(m);
    assert_eq!(&(&s.u * m) * &s.v, s.d, "U M V = D for {m:?}");
    assert!(det_cofactor(&s.u).abs().is_one());
    assert!(det_cofactor(&s.v).abs().is_one());
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    let k = s.d.rows().min(s.d.cols());
    let diag: Vec<BigInt> = (0..k).map(|i| s.d[(i, i)].clone()).collect();
    assert!(diag.iter().all(|x| !x.is_negative()));
    for w in diag.windows(2) {
        if w[0].is_zero() {
            assert!(w[1].is_zero());
        } else {
            assert!((&w[1] % &w[0]).is_zero(), "{diag:?}");
        }
    }
    assert_eq!(s.rank(), m.to_rational().rank());
}

#[test]
fn smith_examples() {
    let s = smith_normal_form(&imat(2, 2, &[2, 0, 0, 3]));
    assert_eq!(s.d, imat(2, 2, &[1, 0, 0, 6]));
    check_smith(&imat(2, 2, &[2, 0, 0, 3]));
    let id = IntMatrix::identity(3);
    assert_eq!(smith_normal_form(&id).d, id);
    let s = smith_normal_form(&imat(1, 2, &[2, 4]));
    assert_eq!(s.d, imat(1, 2, &[2, 0]));
    assert_eq!(invariant_factors(&imat(2, 2, &[1, 1, 1, -1])), vec![BigInt::from(1), BigInt::from(2)]);
}

#[test]
fn kernel_examples() {
    let k = integer_kernel(&imat(1, 3, &[1, 1, 1]));
    assert_eq!(k.len(), 2);
    // same lattice as {(1,-1,0),(0,1,-1)}: both bases span each other
    let expect = [vec![1, -1, 0], vec![0, 1, -1]];
    let kr: Vec<Vec<Rational>> = k.iter().map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let basis = RatMatrix::from_columns(3, &kr);
    for e in &expect {
        let c = basis.solve_any(&ints(e)).unwrap();
        assert_eq!(basis.mul_vec(&c), ints(e));
        assert!(c.iter().all(|x| x.is_integer()));
    }
    assert!(is_saturated_basis(&k, 3));
    assert!(integer_kernel(&imat(2, 2, &[2, 1, 1, 1])).is_empty());
    let full = integer_kernel(&IntMatrix::zeros(2, 3));
    let id: Vec<Vec<BigInt>> = (0..3).map(|i| (0..3).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    assert_eq!(full, id);
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_invariants(m in small_matrix()) {
        check_smith(&m);
    }

    #[test]
    fn kernel_is_saturated(m in small_matrix()) {
        let k = integer_kernel(&m);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(k.len(), m.cols() - m.to_rational().rank());
        if !k.is_empty() {
            let stacked = IntMatrix::from_rows(m.cols(), &k);
            prop_assert!(invariant_factors(&stacked).iter().all(One::is_one));
        }
        prop_assert_eq!(integer_kernel(&m), k);
    }

    #[test]
    fn kernel_is_canonical(m in small_matrix(), mix in proptest::collection::vec(-2i64..=2, 16)) {
        // an invertible row operation on M leaves the kernel unchanged
        let r = m.rows();
        let mut u = IntMatrix::identity(r);
        for i in 0..r {
            for j in i + 1..r {
                u[(i, j)] = BigInt::from(mix[i * 4 + j]);
            }
        }
        prop_assert_eq!(integer_kernel(&(&u * &m)), integer_kernel(&m));
    }

    #[test]
    fn rationals_are_canonical(p in -1000i64..1000, q in 1i64..1000) {
        let x = rat(p, q);
        prop_assert!(x.denom().is_positive());
        prop_assert!(num_integer::Integer::gcd(x.numer(), x.denom()).is_one());
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
}

#[test]
fn sturm_examples() {
    let p = UniPoly::new(ints(&[-1, 0, 1]));
    assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    let p = UniPoly::new(ints(&[1, 0, 1]));
    assert_eq!(count_real_roots(&p).unwrap(), 0);
    let p = UniPoly::new(ints(&[1, -3, 0, 1]));
    assert_eq!(sturm_count(&p, &int(0).into(), &int(2).into()).unwrap(), 2);
    assert_eq!(sturm_count(&UniPoly::zero(), &Bound::NegInf, &Bound::PosInf), Err(SturmError::ZeroPolynomial));
    // (a, b]: a root at b counts, a root at a does not
    let p = UniPoly::new(ints(&[-1, 0, 1]));
    assert_eq!(sturm_count(&p, &int(-1).into(), &int(1).into()).unwrap(), 1);
}

/// Exhaustive exact scan of `[-8, 8]` in steps of `1/12`: every root with
/// denominator dividing 12 is a grid point, and a sign change between
/// consecutive nonzero grid values marks a root off the grid.
fn grid_count(p: &UniPoly) -> usize {
    let values: Vec<Rational> = (-96..=96).map(|k| p.eval(&rat(k, 12))).collect();
    let zeros = values.iter().filter(|v| v.is_zero()).count();
    let changes = values
        .windows(2)
        .filter(|w| !w[0].is_zero() && !w[1].is_zero() && w[0].signum() != w[1].signum())
        .count();
    zeros + changes
}

#[test]
fn sturm_matches_known_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let deg = rng.gen_range(3..=4);
        let roots: Vec<Rational> = (0..deg).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
        let lead = rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        let p = UniPoly::from_roots(&roots).scale(&lead);
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let n = count_real_roots(&p).unwrap();
        assert_eq!(n, distinct.len(), "{p}");
        assert_eq!(n, grid_count(&p));
        // every root is located exactly
        if let Some(RootLocation::Exact(r)) = locate_real_root(&p, 200) {
            assert!(p.eval(&r).is_zero());
        }
    }
}

#[test]
fn sturm_with_irreducible_factor() {
    // (x² + 1)(x − 1/2)(x + 3): two real roots
    let p = UniPoly::new(ints(&[1, 0, 1])).mul(&UniPoly::from_roots(&[rat(1, 2), int(-3)]));
    assert_eq!(count_real_roots(&p).unwrap(), 2);
    assert_eq!(sturm_count(&p, &int(0).into(), &Bound::PosInf).unwrap(), 1);
}

fn poly_strategy() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(((0u32..3, 0u32..3), -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        MultiPoly::from_terms(2, terms.into_iter().map(|((a, b), p, q)| (vec![a, b], rat(p, q))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multipoly_ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(2), a.clone());
    }

    #[test]
    fn multipoly_eval_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), x in -4i64..=4, y in 1i64..=4) {
        let pt = [int(x), rat(1, y)];
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        prop_assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
    }
}
