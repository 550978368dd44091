//! Seeded random instances for tests and benchmarks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::exactnum::rational::{dot, int, rat, scale, Rational};
use crate::exactnum::RatMatrix;
use crate::grassmann::{AffineMap, GrassmannPresentation};
use crate::levi::TorusData;
use crate::pencil::SkewPencil;
use crate::polytope::LabelledPolytope;

/// A rational `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn random_positive<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    rat(rng.gen_range(1..=bound), rng.gen_range(1..=bound))
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// `[0, w_1] × … × [0, w_m]` on `ε = e_0` in `ℚ^{m+1}`.
pub fn box_polytope(widths: &[Rational]) -> LabelledPolytope {
    let m = widths.len();
    let mut labels = Vec::with_capacity(2 * m);
    for i in 0..m {
        labels.push(unit(m + 1, i + 1));
    }
    for (i, w) in widths.iter().enumerate() {
        let mut l = vec![Rational::zero(); m + 1];
        l[0] = w.clone();
        l[i + 1] = -Rational::one();
        labels.push(l);
    }
    LabelledPolytope::new(unit(m + 1, 0), labels).expect("box data is well formed")
}

/// `{y ≥ 0, c − Σ y_i ≥ 0}` on `ε = e_0` in `ℚ^{m+1}`.
pub fn simplex_polytope(m: usize, c: &Rational) -> LabelledPolytope {
    let mut labels: Vec<Vec<Rational>> = (0..m).map(|i| unit(m + 1, i + 1)).collect();
    let mut last = vec![-Rational::one(); m + 1];
    last[0] = c.clone();
    labels.push(last);
    LabelledPolytope::new(unit(m + 1, 0), labels).expect("simplex data is well formed")
}

/// Largest `t` with `v + t d` in the polytope.
fn edge_length(poly: &LabelledPolytope, v: &[Rational], d: &[Rational]) -> Rational {
    poly.labels()
        .iter()
        .filter_map(|l| {
            let rate = dot(l, d);
            rate.is_negative().then(|| dot(l, v) / -rate)
        })
        .min()
        .expect("compact polytope has bounded edges")
}

/// Cuts off the simple vertex `v`, meeting its `i`-th edge at fraction
/// `fractions[i] ∈ (0, 1/2]` of the edge. Every other vertex survives and
/// the result is simple.
pub fn truncate_vertex(poly: &LabelledPolytope, v: &[Rational], fractions: &[Rational]) -> LabelledPolytope {
    let gens = poly.tangent_cone(v).expect("simple vertex");
    let active = poly.active_set(v);
    let mut label = scale(poly.epsilon(), &-Rational::one());
    for ((&s, d), f) in active.iter().zip(&gens).zip(fractions) {
        let t = edge_length(poly, v, d) * f;
        let c = Rational::one() / (dot(&poly.labels()[s], d) * t);
        for (x, y) in label.iter_mut().zip(&poly.labels()[s]) {
            *x += &c * y;
        }
    }
    let mut labels = poly.labels().to_vec();
    labels.push(label);
    LabelledPolytope::new(poly.epsilon().to_vec(), labels).expect("same shape")
}

/// A random compact simple polytope with `m ≤ 3` and at most `max_labels`
/// labels: a box or simplex, some vertex truncations, positive rescaling of
/// every label and a random change of coordinates on `h`.
pub fn random_simple_polytope<R: Rng>(rng: &mut R, max_m: usize, max_labels: usize) -> LabelledPolytope {
    let m = rng.gen_range(1..=max_m.clamp(1, 3));
    let mut poly = if rng.gen_bool(0.5) && 2 * m <= max_labels {
        let widths: Vec<Rational> = (0..m).map(|_| random_positive(rng, 4)).collect();
        box_polytope(&widths)
    } else {
        simplex_polytope(m, &random_positive(rng, 4))
    };
    if m >= 2 {
        let cuts = rng.gen_range(0..=max_labels.saturating_sub(poly.facet_count()).min(3));
        for _ in 0..cuts {
            let verts = poly.enumerate_vertices().expect("compact");
            let v = verts[rng.gen_range(0..verts.len())].point.clone();
            let fr: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(1..=4), 8)).collect();
            poly = truncate_vertex(&poly, &v, &fr);
        }
    }
    let h = m + 1;
    let b = loop {
        let data: Vec<i64> = (0..h * h).map(|_| rng.gen_range(-2..=2)).collect();
        let b = RatMatrix::from_i64(h, h, &data);
        if !b.determinant().is_zero() {
            break b;
        }
    };
    let labels = poly
        .labels()
        .iter()
        .map(|l| scale(&b.mul_vec(l), &random_positive(rng, 3)))
        .collect();
    LabelledPolytope::new(b.mul_vec(poly.epsilon()), labels).expect("invertible change of coordinates")
}

/// A smooth lattice polytope on `ε = e_0`: each label is `(b_s, a_s)` with
/// `a_s` a primitive integer normal, and the normals at each vertex form a
/// basis of `ℤ^m`.
pub fn random_smooth_polytope<R: Rng>(rng: &mut R, m: usize, max_labels: usize) -> LabelledPolytope {
    let mut poly = if rng.gen_bool(0.5) && 2 * m <= max_labels {
        let widths: Vec<Rational> = (0..m).map(|_| int(rng.gen_range(2..=3))).collect();
        box_polytope(&widths)
    } else {
        simplex_polytope(m, &int(rng.gen_range(2..=3)))
    };
    if m >= 2 {
        let cuts = rng.gen_range(0..=max_labels.saturating_sub(poly.facet_count()).min(2));
        for _ in 0..cuts {
            if let Some(next) = blow_up_corner(rng, &poly) {
                poly = next;
            }
        }
    }
    poly
}

/// Replaces a vertex whose edges all have lattice length ≥ 2 by the facet
/// `Σ_{s ∈ S_v} L_s − ε ≥ 0`. Smoothness is preserved.
fn blow_up_corner<R: Rng>(rng: &mut R, poly: &LabelledPolytope) -> Option<LabelledPolytope> {
    let verts = poly.enumerate_vertices().ok()?;
    let candidates: Vec<_> = verts
        .iter()
        .filter(|v| {
            let gens = poly.tangent_cone(&v.point).expect("simple vertex");
            gens.iter().all(|d| edge_length(poly, &v.point, d) >= int(2))
        })
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let v = candidates[rng.gen_range(0..candidates.len())];
    let mut label = scale(poly.epsilon(), &-Rational::one());
    for &s in &v.active {
        for (x, y) in label.iter_mut().zip(&poly.labels()[s]) {
            *x += y;
        }
    }
    let mut labels = poly.labels().to_vec();
    labels.push(label);
    LabelledPolytope::new(poly.epsilon().to_vec(), labels).ok()
}

/// Torus `ℚ^{m+1}` with `e_s = L_s`, `g = span e_0`, `Ψ(x) = x/λ`: the
/// contact cone over a polytope on `ε = e_0`.
pub fn cone_presentation(poly: &LabelledPolytope, lambda: &Rational) -> GrassmannPresentation {
    let n = poly.slice().h_dim();
    let torus = TorusData::new(n, poly.labels().to_vec()).expect("nonzero labels");
    GrassmannPresentation::codimension_one(torus, unit(n, 0), lambda.clone()).expect("cone data is well formed")
}

/// The product of two cones: `t = t_1 ⊕ t_2`, `g = span{e_0 ⊕ 0, 0 ⊕ e_0}`,
/// `Ψ_i(x)` the `i`-th block of `x` over `λ_i`.
pub fn product_presentation(
    a: &LabelledPolytope,
    b: &LabelledPolytope,
    lambda: &[Rational; 2],
) -> GrassmannPresentation {
    let (na, nb) = (a.slice().h_dim(), b.slice().h_dim());
    let n = na + nb;
    let pad = |l: &[Rational], offset: usize| {
        let mut v = vec![Rational::zero(); n];
        v[offset..offset + l.len()].clone_from_slice(l);
        v
    };
    let labels: Vec<Vec<Rational>> = a
        .labels()
        .iter()
        .map(|l| pad(l, 0))
        .chain(b.labels().iter().map(|l| pad(l, na)))
        .collect();
    let torus = TorusData::new(n, labels).expect("nonzero labels");
    let g = vec![unit(n, 0), unit(n, na)];
    let psi = [(0, na, &lambda[0]), (na, n, &lambda[1])]
        .into_iter()
        .map(|(lo, hi, lam)| {
            let diag: Vec<Rational> = (0..n)
                .map(|j| if (lo..hi).contains(&j) { Rational::one() / lam } else { Rational::zero() })
                .collect();
            AffineMap::linear_only(RatMatrix::diagonal(&diag))
        })
        .collect();
    GrassmannPresentation::new(torus, g, lambda.to_vec(), psi).expect("product data is well formed")
}

/// A random Delzant Reeb-type presentation with `m ≤ 3`, `ℓ ≤ 2` and at
/// most `max_labels` labels: a cone over a smooth lattice polytope, or a
/// product of two.
pub fn random_delzant_presentation<R: Rng>(rng: &mut R, max_labels: usize) -> GrassmannPresentation {
    if max_labels >= 4 && rng.gen_bool(0.4) {
        let a = random_smooth_polytope(rng, 1, 2);
        let m2 = rng.gen_range(1..=2);
        let b = random_smooth_polytope(rng, m2, max_labels - 2);
        product_presentation(&a, &b, &[random_positive(rng, 3), random_positive(rng, 3)])
    } else {
        let m = rng.gen_range(1..=3);
        let p = random_smooth_polytope(rng, m, max_labels);
        cone_presentation(&p, &random_positive(rng, 3))
    }
}

/// A random skew-symmetric `2m × 2m` matrix with entries `p/q`,
/// `|p|, q ≤ bound`.
pub fn random_skew<R: Rng>(rng: &mut R, m: usize, bound: i64) -> RatMatrix {
    let n = 2 * m;
    let mut a = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = random_rational(rng, bound);
            a[(j, i)] = -x.clone();
            a[(i, j)] = x;
        }
    }
    a
}

pub fn random_pencil<R: Rng>(rng: &mut R, ell: usize, m: usize) -> SkewPencil {
    let mats = (0..ell).map(|_| random_skew(rng, m, 3)).collect();
    SkewPencil::new(ell, m, mats).expect("skew matrices of equal size")
}

/// Known factors of a constructed `ℓ = 2` Pfaffian: linear forms
/// `a t1 + b t2` and binary quadratics `α t1² + β t1 t2 + γ t2²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilFactors {
    pub linear: Vec<[Rational; 2]>,
    pub quadratic: Vec<[Rational; 3]>,
}

/// Block-diagonal `ℓ = 2` pencil whose Pfaffian is the product of the given
/// factors: a linear form sits in a `2 × 2` block, a quadratic in a `4 × 4`
/// block with `a12 = t1`, `a34 = α t1 + β t2`, `a13 = t2`, `a24 = −γ t2`.
pub fn factored_pencil(f: &PencilFactors) -> SkewPencil {
    let m = f.linear.len() + 2 * f.quadratic.len();
    let n = 2 * m;
    let mut w = [RatMatrix::zeros(n, n), RatMatrix::zeros(n, n)];
    let mut set = |i: usize, j: usize, c: [Rational; 2]| {
        for (k, ck) in c.into_iter().enumerate() {
            w[k][(j, i)] = -ck.clone();
            w[k][(i, j)] = ck;
        }
    };
    let z = Rational::zero;
    let mut at = 0;
    for [a, b] in &f.linear {
        set(at, at + 1, [a.clone(), b.clone()]);
        at += 2;
    }
    for [alpha, beta, gamma] in &f.quadratic {
        set(at, at + 1, [Rational::one(), z()]);
        set(at + 2, at + 3, [alpha.clone(), beta.clone()]);
        set(at, at + 2, [z(), Rational::one()]);
        set(at + 1, at + 3, [z(), -gamma.clone()]);
        at += 4;
    }
    SkewPencil::new(2, m, w.to_vec()).expect("skew by construction")
}

/// Random factors with total degree between 1 and `max_m`; each quadratic
/// is definite or indefinite with equal probability.
pub fn random_pencil_factors<R: Rng>(rng: &mut R, max_m: usize) -> PencilFactors {
    let mut f = PencilFactors {
        linear: Vec::new(),
        quadratic: Vec::new(),
    };
    let mut degree = 0;
    let target = rng.gen_range(1..=max_m);
    while degree < target {
        if target - degree >= 2 && rng.gen_bool(0.7) {
            let alpha = random_positive(rng, 4) * int(if rng.gen_bool(0.5) { 1 } else { -1 });
            let beta = random_rational(rng, 4);
            let gamma = if rng.gen_bool(0.5) {
                // definite: γ has the sign of α and β² < 4αγ
                let floor = &beta * &beta / (int(4) * &alpha);
                floor + &alpha.signum() * random_positive(rng, 3)
            } else {
                random_rational(rng, 4)
            };
            f.quadratic.push([alpha, beta, gamma]);
            degree += 2;
        } else {
            let mut lf = [random_rational(rng, 3), random_rational(rng, 3)];
            if lf.iter().all(Zero::is_zero) {
                lf[0] = Rational::one();
            }
            f.linear.push(lf);
            degree += 1;
        }
    }
    f
}

/// Integer vector with entries in `[-bound, bound]`.
pub fn random_int_vec<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}
