//! Pencils of skew forms and their degeneracy polynomials.
//!
//! For a pencil `Σ tᵢ ωᵢ` of `2m × 2m` skew matrices the degree-`m` form
//! cutting out the degeneracy variety is the Pfaffian; the determinant is its
//! square. The sign convention is `Pf(J) = +1` for the block-diagonal
//! standard form `J = ⊕ [[0, 1], [-1, 0]]`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::rational::{sign, Rational};
use crate::exactnum::sturm::{count_real_roots, locate_real_root, sturm_count, Bound, RootLocation};
use crate::exactnum::{MultiPoly, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has odd size {0}")]
    OddSize(usize),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("pencil needs ell >= 1 and m >= 1")]
    EmptyPencil,
    #[error("expected {expected} matrices, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("matrix {index} has size {found}, expected {expected}")]
    MatrixSize {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// Arithmetic needed by the recursive Pfaffian.
pub trait PfRing: Clone {
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
}

impl PfRing for Rational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
}

impl PfRing for MultiPoly {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
}

fn check_skew<T: PfRing>(m: &[Vec<T>]) -> Result<(), PencilError> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(PencilError::NotSquare { rows: n, cols: row.len() });
        }
        if !row[i].is_zero_elem() {
            return Err(PencilError::NotSkew(i, i));
        }
    }
    if n % 2 == 1 {
        return Err(PencilError::OddSize(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !m[i][j].add_elem(&m[j][i]).is_zero_elem() {
                return Err(PencilError::NotSkew(i, j));
            }
        }
    }
    Ok(())
}

/// Expansion along the first remaining row:
/// `Pf(A) = Σ_{j>1} (−1)^j a_{1j} Pf(A without rows/cols 1, j)` (1-based).
fn pf_rec<T: PfRing>(m: &[Vec<T>], idx: &[usize], zero: &T, one: &T) -> T {
    if idx.is_empty() {
        return one.clone();
    }
    let i = idx[0];
    let mut total = zero.clone();
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let a = &m[i][j];
        if a.is_zero_elem() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let term = a.mul_elem(&pf_rec(m, &rest, zero, one));
        // Position k (0-based) is column k+1 (1-based); sign (−1)^{k+1}.
        total = if k % 2 == 1 { total.add_elem(&term) } else { total.sub_elem(&term) };
    }
    total
}

/// Pfaffian of a skew matrix over any [`PfRing`]; `zero` and `one` fix the
/// ring (they matter for polynomial rings with a given variable count).
pub fn pfaffian<T: PfRing>(m: &[Vec<T>], zero: &T, one: &T) -> Result<T, PencilError> {
    check_skew(m)?;
    let idx: Vec<usize> = (0..m.len()).collect();
    Ok(pf_rec(m, &idx, zero, one))
}

/// Pfaffian of a skew matrix of polynomials in `nvars` variables.
pub fn pfaffian_poly(m: &[Vec<MultiPoly>], nvars: usize) -> Result<MultiPoly, PencilError> {
    pfaffian(m, &MultiPoly::zero(nvars), &MultiPoly::one(nvars))
}

/// Pfaffian of a rational skew matrix.
pub fn pfaffian_rational(m: &RatMatrix) -> Result<Rational, PencilError> {
    if !m.is_square() {
        return Err(PencilError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    pfaffian(&m.to_rows(), &Rational::zero(), &Rational::one())
}

/// `J_{2k} = ⊕ [[0, 1], [-1, 0]]`.
pub fn standard_symplectic(k: usize) -> RatMatrix {
    let mut j = RatMatrix::zeros(2 * k, 2 * k);
    for b in 0..k {
        j[(2 * b, 2 * b + 1)] = Rational::one();
        j[(2 * b + 1, 2 * b)] = -Rational::one();
    }
    j
}

/// `ℓ` skew `2m × 2m` rational matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPencil {
    ell: usize,
    m: usize,
    matrices: Vec<RatMatrix>,
}

impl SkewPencil {
    pub fn new(ell: usize, m: usize, matrices: Vec<RatMatrix>) -> Result<Self, PencilError> {
        if ell == 0 || m == 0 {
            return Err(PencilError::EmptyPencil);
        }
        if matrices.len() != ell {
            return Err(PencilError::MatrixCount {
                expected: ell,
                found: matrices.len(),
            });
        }
        for (index, w) in matrices.iter().enumerate() {
            if !w.is_square() || w.rows() != 2 * m {
                return Err(PencilError::MatrixSize {
                    index,
                    expected: 2 * m,
                    found: w.rows().max(w.cols()),
                });
            }
            check_skew(&w.to_rows())?;
        }
        Ok(Self { ell, m, matrices })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    /// `Σ tᵢ ωᵢ` as a matrix of linear forms.
    pub fn symbolic(&self) -> Vec<Vec<MultiPoly>> {
        let n = 2 * self.m;
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let coeffs: Vec<Rational> = self.matrices.iter().map(|w| w[(r, c)].clone()).collect();
                        MultiPoly::linear(&coeffs)
                    })
                    .collect()
            })
            .collect()
    }

    /// `Σ tᵢ ωᵢ` at a rational point.
    pub fn evaluate(&self, t: &[Rational]) -> RatMatrix {
        let n = 2 * self.m;
        let mut out = RatMatrix::zeros(n, n);
        for (w, ti) in self.matrices.iter().zip(t) {
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] += ti * &w[(r, c)];
                }
            }
        }
        out
    }

    pub fn degeneracy_polynomial(&self) -> DegeneracyPoly {
        let poly = pfaffian_poly(&self.symbolic(), self.ell).expect("pencil matrices are skew");
        DegeneracyPoly { poly, m: self.m }
    }
}

/// `Pf(Σ tᵢ ωᵢ)`: homogeneous of degree `m` or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyPoly {
    pub poly: MultiPoly,
    pub m: usize,
}

impl fmt::Display for DegeneracyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `poly = scale · h^multiplicity` with `h` linear, first nonzero
/// coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LContact {
    pub form: Vec<Rational>,
    pub multiplicity: usize,
    pub scale: Rational,
}

impl LContact {
    pub fn form_poly(&self) -> MultiPoly {
        MultiPoly::linear(&self.form)
    }
}

/// Decides whether the degeneracy polynomial is a single linear form to the
/// `m`-th power. Writing `P = a·h^m` with `h_j = 1` at the first variable
/// whose pure power occurs, the other coefficients are read off the
/// `t_j^{m−1} t_k` terms and the identity is then checked exactly.
pub fn classify_lcontact(d: &DegeneracyPoly) -> Option<LContact> {
    let p = &d.poly;
    if p.is_zero() || !p.is_homogeneous() {
        return None;
    }
    let m = p.degree()? as usize;
    let l = p.nvars();
    if m == 0 {
        return None;
    }
    let pure = |j: usize| {
        let mut e = vec![0u32; l];
        e[j] = m as u32;
        e
    };
    let j = (0..l).find(|&j| !p.coeff(&pure(j)).is_zero())?;
    let a = p.coeff(&pure(j));
    let mut form = vec![Rational::zero(); l];
    form[j] = Rational::one();
    let ma = &a * Rational::from_integer(m.into());
    for (k, fk) in form.iter_mut().enumerate() {
        if k == j {
            continue;
        }
        let mut e = vec![0u32; l];
        e[j] = m as u32 - 1;
        e[k] += 1;
        *fk = p.coeff(&e) / &ma;
    }
    let h = MultiPoly::linear(&form);
    (h.pow(m as u32).scale(&a) == *p).then_some(LContact {
        form,
        multiplicity: m,
        scale: a,
    })
}

/// Evidence of a nonzero real zero of the degeneracy polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FatWitness {
    /// An exact nonzero zero.
    Point(Vec<Rational>),
    /// A zero lies on the open segment between two linearly independent
    /// points where the polynomial has opposite signs.
    Segment { from: Vec<Rational>, to: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fatness {
    Yes { evidence: String },
    No { witness: FatWitness },
    Unknown { samples: usize },
}

/// Default number of sample points for `ℓ ≥ 3`.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Fat iff `Pf(Σ tᵢ ωᵢ)` has no nonzero real zero. Exact for `ℓ ≤ 2`,
/// sampled for `ℓ ≥ 3`.
pub fn is_fat(pencil: &SkewPencil, samples: usize) -> Fatness {
    let d = pencil.degeneracy_polynomial();
    fatness_of(&d.poly, samples)
}

/// [`is_fat`] for an explicit homogeneous polynomial.
pub fn fatness_of(p: &MultiPoly, samples: usize) -> Fatness {
    let l = p.nvars();
    let unit = |i: usize| -> Vec<Rational> {
        (0..l).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    };
    if p.is_zero() {
        return Fatness::No {
            witness: FatWitness::Point(unit(0)),
        };
    }
    match l {
        1 => Fatness::Yes {
            evidence: format!("single variable, nonzero polynomial {p}"),
        },
        2 => fatness_binary(p),
        _ => fatness_sampled(p, samples),
    }
}

fn fatness_binary(p: &MultiPoly) -> Fatness {
    let base = vec![Rational::one(), Rational::zero()];
    let dir = vec![Rational::zero(), Rational::one()];
    let q = p.restrict_to_line(&base, &dir);
    if !q.is_zero() && count_real_roots(&q).unwrap_or(0) > 0 {
        let witness = match locate_real_root(&q, 64) {
            Some(RootLocation::Exact(s)) => FatWitness::Point(vec![Rational::one(), s]),
            Some(RootLocation::Isolated { lo, hi }) => FatWitness::Segment {
                from: vec![Rational::one(), lo],
                to: vec![Rational::one(), hi],
            },
            None => unreachable!("a real root was counted"),
        };
        return Fatness::No { witness };
    }
    if q.is_zero() {
        return Fatness::No {
            witness: FatWitness::Point(base),
        };
    }
    let m = p.degree().unwrap_or(0);
    if p.coeff(&[0, m]).is_zero() {
        return Fatness::No {
            witness: FatWitness::Point(dir),
        };
    }
    Fatness::Yes {
        evidence: format!(
            "Sturm count 0 for {q} on the line t1 = 1, and t2^{m} has coefficient {} on t1 = 0",
            p.coeff(&[0, m])
        ),
    }
}

/// Sample points: nonzero integer vectors in growing boxes, in a fixed order.
fn sample_points(l: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(count);
    let mut radius: i64 = 1;
    while out.len() < count {
        let side = (2 * radius + 1) as usize;
        let total = side.pow(l as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::with_capacity(l);
            let mut on_shell = false;
            for _ in 0..l {
                let x = (c % side) as i64 - radius;
                c /= side;
                on_shell |= x.abs() == radius;
                v.push(x);
            }
            if on_shell {
                out.push(v.into_iter().map(|x| Rational::from_integer(x.into())).collect());
                if out.len() == count {
                    break;
                }
            }
        }
        radius += 1;
    }
    out
}

fn independent(a: &[Rational], b: &[Rational]) -> bool {
    RatMatrix::from_rows(a.len(), &[a.to_vec(), b.to_vec()]).rank() == 2
}

fn fatness_sampled(p: &MultiPoly, samples: usize) -> Fatness {
    let mut pos: Option<Vec<Rational>> = None;
    let mut neg: Option<Vec<Rational>> = None;
    for x in sample_points(p.nvars(), samples) {
        let s = sign(&p.eval(&x));
        if s == 0 {
            return Fatness::No {
                witness: FatWitness::Point(x),
            };
        }
        let (mine, other) = if s > 0 { (&mut pos, &neg) } else { (&mut neg, &pos) };
        if let Some(o) = other {
            if independent(o, &x) {
                let (from, to) = if s > 0 { (x, o.clone()) } else { (o.clone(), x) };
                return Fatness::No {
                    witness: FatWitness::Segment { from, to },
                };
            }
        }
        if mine.is_none() {
            *mine = Some(x);
        }
    }
    Fatness::Unknown { samples }
}

/// Checks a witness exactly: a point must be a nonzero zero; a segment must
/// join independent points and carry a zero by a Sturm count on `(0, 1]`.
pub fn verify_witness(p: &MultiPoly, w: &FatWitness) -> bool {
    match w {
        FatWitness::Point(x) => x.iter().any(|c| !c.is_zero()) && p.eval(x).is_zero(),
        FatWitness::Segment { from, to } => {
            if !independent(from, to) {
                return false;
            }
            let dir: Vec<Rational> = to.iter().zip(from).map(|(a, b)| a - b).collect();
            let q = p.restrict_to_line(from, &dir);
            !q.is_zero()
                && sturm_count(&q, &Bound::Finite(Rational::zero()), &Bound::Finite(Rational::one()))
                    .is_ok_and(|c| c > 0)
        }
    }
}

/// `ωᵢ = J_{2mᵢ}` in the `i`-th diagonal block and zero elsewhere, so the
/// degeneracy polynomial is `Π tᵢ^{mᵢ}`.
pub fn product_sphere_pencil(ms: &[usize]) -> Result<SkewPencil, PencilError> {
    let m: usize = ms.iter().sum();
    let mut matrices = Vec::with_capacity(ms.len());
    let mut offset = 0;
    for &mi in ms {
        let mut w = RatMatrix::zeros(2 * m, 2 * m);
        for b in 0..mi {
            let r = offset + 2 * b;
            w[(r, r + 1)] = Rational::one();
            w[(r + 1, r)] = -Rational::one();
        }
        offset += 2 * mi;
        matrices.push(w);
    }
    SkewPencil::new(ms.len(), m, matrices)
}

/// The `4 × 4` pencil with `a₁₂ = t₁, a₁₃ = t₂, a₂₄ = t₂, a₃₄ = −t₁`,
/// whose Pfaffian is `−(t₁² + t₂²)`.
pub fn quaternionic_pencil() -> SkewPencil {
    let mut w1 = RatMatrix::zeros(4, 4);
    let mut w2 = RatMatrix::zeros(4, 4);
    let one = Rational::one();
    let set = |w: &mut RatMatrix, i: usize, j: usize, v: &Rational| {
        w[(i, j)] = v.clone();
        w[(j, i)] = -v.clone();
    };
    set(&mut w1, 0, 1, &one);
    set(&mut w1, 2, 3, &-one.clone());
    set(&mut w2, 0, 2, &one);
    set(&mut w2, 1, 3, &one);
    SkewPencil::new(2, 2, vec![w1, w2]).expect("well-formed pencil")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ints};

    #[test]
    fn standard_form_has_pfaffian_one() {
        for k in 1..=4 {
            assert_eq!(pfaffian_rational(&standard_symplectic(k)).unwrap(), int(1));
        }
    }

    #[test]
    fn two_by_two() {
        let p = MultiPoly::var(2, 0);
        let m = vec![vec![MultiPoly::zero(2), p.clone()], vec![-&p, MultiPoly::zero(2)]];
        assert_eq!(pfaffian_poly(&m, 2).unwrap(), p);
    }

    #[test]
    fn quaternionic_example() {
        let d = quaternionic_pencil().degeneracy_polynomial();
        assert_eq!(d.to_string(), "-t1^2 - t2^2");
        assert!(matches!(is_fat(&quaternionic_pencil(), 10), Fatness::Yes { .. }));
    }

    #[test]
    fn errors() {
        let odd = RatMatrix::zeros(3, 3);
        assert_eq!(pfaffian_rational(&odd), Err(PencilError::OddSize(3)));
        let mut ns = RatMatrix::zeros(2, 2);
        ns[(0, 1)] = int(1);
        assert_eq!(pfaffian_rational(&ns), Err(PencilError::NotSkew(0, 1)));
    }

    #[test]
    fn model_pencils() {
        let s3s3 = product_sphere_pencil(&[1, 1]).unwrap().degeneracy_polynomial();
        assert_eq!(s3s3.to_string(), "t1*t2");
        assert_eq!(classify_lcontact(&s3s3), None);
        let s1s5 = product_sphere_pencil(&[0, 2]).unwrap().degeneracy_polynomial();
        assert_eq!(s1s5.to_string(), "t2^2");
        let c = classify_lcontact(&s1s5).unwrap();
        assert_eq!(c.form, ints(&[0, 1]));
        assert_eq!(c.multiplicity, 2);
        let sphere = product_sphere_pencil(&[3]).unwrap().degeneracy_polynomial();
        assert_eq!(sphere.to_string(), "t1^3");
    }

    #[test]
    fn cube_of_sum() {
        let h = MultiPoly::linear(&ints(&[1, 1]));
        let d = DegeneracyPoly { poly: h.pow(3), m: 3 };
        let c = classify_lcontact(&d).unwrap();
        assert_eq!(c.form, ints(&[1, 1]));
        assert_eq!(c.multiplicity, 3);
    }

    #[test]
    fn product_pencil_is_not_fat() {
        match is_fat(&product_sphere_pencil(&[1, 1]).unwrap(), 10) {
            Fatness::No { witness } => assert_eq!(witness, FatWitness::Point(ints(&[1, 0]))),
            other => panic!("expected no, got {other:?}"),
        }
    }

    #[test]
    fn sampled_three_variables() {
        let p = &(&MultiPoly::var(3, 0) * &MultiPoly::var(3, 0)) - &(&MultiPoly::var(3, 1) * &MultiPoly::var(3, 2));
        match fatness_of(&p, 200) {
            Fatness::No { witness } => assert!(verify_witness(&p, &witness)),
            other => panic!("expected no, got {other:?}"),
        }
        let q = &(&MultiPoly::var(3, 0).pow(2) + &MultiPoly::var(3, 1).pow(2)) + &MultiPoly::var(3, 2).pow(2);
        assert_eq!(fatness_of(&q, 50), Fatness::Unknown { samples: 50 });
    }
}
