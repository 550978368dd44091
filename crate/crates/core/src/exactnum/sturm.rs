//! Univariate rational polynomials and Sturm-sequence real-root counting.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::rational::{sign, Rational};

/// Dense univariate polynomial, coefficients from degree 0 upwards, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SturmError {
    #[error("Sturm count requested for the zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval: lower bound must be strictly below upper bound")]
    EmptyInterval,
}

/// An endpoint in the extended rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    fn less_than(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, _) => false,
            (Bound::NegInf, _) => true,
            (Bound::Finite(_), Bound::NegInf) => false,
            (Bound::Finite(_), Bound::PosInf) => true,
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
        }
    }
}

impl From<Rational> for Bound {
    fn from(x: Rational) -> Self {
        Bound::Finite(x)
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    /// Product of `(x - r)` over the given roots (repeats allowed).
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::constant(Rational::one()), |acc, r| acc.mul(&Self::linear_root(r)))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] / &lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &c * d;
            }
            quot[k - dd] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The square-free part `p / gcd(p, p')`, which has the same distinct roots.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Sign at a bound, using the leading term at infinity.
    pub fn sign_at(&self, at: &Bound) -> i8 {
        match at {
            Bound::Finite(x) => sign(&self.eval(x)),
            Bound::PosInf => self.leading().map_or(0, sign),
            Bound::NegInf => match self.degree() {
                None => 0,
                Some(d) => {
                    let s = sign(&self.coeffs[d]);
                    if d % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                }
            },
        }
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::one();
        };
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }
}

/// Sturm chain of the square-free part of `p`: `q, q', -rem(q, q'), …`.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let q = p.square_free();
    let mut chain = vec![q.clone()];
    let mut prev = q;
    let mut cur = prev.derivative();
    while !cur.is_zero() {
        chain.push(cur.clone());
        let (_, r) = prev.div_rem(&cur);
        prev = cur;
        cur = r.neg();
    }
    chain
}

fn variations(chain: &[UniPoly], at: &Bound) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| p.sign_at(at))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
///
/// The chain is built on the square-free part, so a root sitting exactly at
/// `a` is excluded and one at `b` is included; use [`root_at`] to test an
/// endpoint separately.
pub fn sturm_count(p: &UniPoly, a: &Bound, b: &Bound) -> Result<usize, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    if !a.less_than(b) {
        return Err(SturmError::EmptyInterval);
    }
    let chain = sturm_chain(p);
    let va = variations(&chain, a);
    let vb = variations(&chain, b);
    Ok(va.saturating_sub(vb))
}

/// Distinct real roots over the whole line.
pub fn count_real_roots(p: &UniPoly) -> Result<usize, SturmError> {
    sturm_count(p, &Bound::NegInf, &Bound::PosInf)
}

/// Exact endpoint test.
pub fn root_at(p: &UniPoly, x: &Rational) -> bool {
    p.eval(x).is_zero()
}

/// Where a real root was located.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rational),
    /// Exactly one distinct root lies in `(lo, hi]`, and it is not `hi`.
    Isolated { lo: Rational, hi: Rational },
}

/// Locates some real root of `p` by Sturm bisection, returning an exact root
/// when a bisection point hits one, otherwise an isolating interval after
/// `max_steps` halvings. `None` when `p` has no real root.
pub fn locate_real_root(p: &UniPoly, max_steps: usize) -> Option<RootLocation> {
    if p.is_zero() {
        return Some(RootLocation::Exact(Rational::zero()));
    }
    if count_real_roots(p).ok()? == 0 {
        return None;
    }
    let bound = p.root_bound();
    let (mut lo, mut hi) = (-bound.clone(), bound);
    let chain = sturm_chain(p);
    let count = |a: &Rational, b: &Rational| {
        variations(&chain, &Bound::Finite(a.clone()))
            .saturating_sub(variations(&chain, &Bound::Finite(b.clone())))
    };
    for _ in 0..max_steps {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if root_at(p, &mid) {
            return Some(RootLocation::Exact(mid));
        }
        if count(&lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if count(&lo, &hi) == 1 {
            let c = simplest_between(&lo, &hi);
            if root_at(p, &c) {
                return Some(RootLocation::Exact(c));
            }
        }
    }
    if root_at(p, &hi) {
        return Some(RootLocation::Exact(hi));
    }
    Some(RootLocation::Isolated { lo, hi })
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, found by walking continued fractions. Rational roots are found
/// exactly this way once the isolating interval is short enough.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if &fl + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part and lo is not an integer.
    let a = lo - &fl;
    let b = hi - &fl;
    if b.is_zero() {
        return fl;
    }
    let inner = simplest_between(&b.recip(), &a.recip());
    fl + inner.recip()
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ints, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(ints(c))
    }

    #[test]
    fn counts_on_whole_line() {
        assert_eq!(count_real_roots(&p(&[-1, 0, 1])).unwrap(), 2);
        assert_eq!(count_real_roots(&p(&[1, 0, 1])).unwrap(), 0);
    }

    #[test]
    fn cubic_on_zero_two() {
        // t^3 - 3t + 1 has roots near -1.879, 0.347, 1.532.
        let q = p(&[1, -3, 0, 1]);
        let n = sturm_count(&q, &Bound::Finite(int(0)), &Bound::Finite(int(2))).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn endpoint_convention_is_half_open() {
        let q = p(&[-1, 0, 1]);
        let a = Bound::Finite(int(-1));
        let b = Bound::Finite(int(1));
        assert_eq!(sturm_count(&q, &a, &b).unwrap(), 1);
        assert!(root_at(&q, &int(-1)));
    }

    #[test]
    fn repeated_roots_count_once() {
        let q = UniPoly::from_roots(&[int(1), int(1), int(2)]);
        assert_eq!(count_real_roots(&q).unwrap(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(count_real_roots(&UniPoly::zero()), Err(SturmError::ZeroPolynomial));
        let q = p(&[0, 1]);
        assert_eq!(
            sturm_count(&q, &Bound::Finite(int(1)), &Bound::Finite(int(1))),
            Err(SturmError::EmptyInterval)
        );
    }

    #[test]
    fn locates_rational_root_exactly() {
        let q = UniPoly::from_roots(&[rat(1, 3)]).mul(&p(&[1, 0, 1]));
        assert_eq!(locate_real_root(&q, 80), Some(RootLocation::Exact(rat(1, 3))));
        assert_eq!(locate_real_root(&p(&[2, 0, 1]), 10), None);
        match locate_real_root(&p(&[-2, 0, 1]), 20).unwrap() {
            RootLocation::Isolated { lo, hi } => {
                assert!(sign(&p(&[-2, 0, 1]).eval(&lo)) != sign(&p(&[-2, 0, 1]).eval(&hi)));
            }
            RootLocation::Exact(_) => panic!("sqrt 2 is irrational"),
        }
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(1, 2), &int(2)), int(1));
        assert_eq!(simplest_between(&rat(-7, 10), &rat(-6, 10)), rat(-2, 3));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 0, 1]).to_string(), "x^3 - 3*x + 1");
    }
}
