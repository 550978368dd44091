//! Exact Fourier–Motzkin elimination for systems `A x ≥ b`.
//!
//! Every derived inequality carries the nonnegative multipliers that combine
//! the original rows into it, so an infeasible system comes back with a
//! Farkas certificate `y ≥ 0`, `yᵀA = 0`, `yᵀb > 0`.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::exactnum::rational::{dot, is_zero_vec, primitive_direction, Rational};
use crate::exactnum::RatMatrix;

/// `coeffs · x ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        dot(&self.coeffs, x) >= self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FmOutcome {
    Feasible(Vec<Rational>),
    /// Multipliers `y ≥ 0`, one per input row, with `yᵀA = 0` and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    mult: Vec<Rational>,
}

impl Row {
    /// Scales so the first nonzero coefficient from `upto` downward has
    /// absolute value one (positive scaling keeps the multipliers valid).
    fn normalized(mut self, upto: usize) -> Self {
        if let Some(k) = (0..upto).rev().find(|&k| !self.coeffs[k].is_zero()) {
            let f = self.coeffs[k].abs().recip();
            if !f.is_one() {
                for c in self.coeffs.iter_mut() {
                    *c *= &f;
                }
                self.rhs *= &f;
                for y in self.mult.iter_mut() {
                    *y *= &f;
                }
            }
        }
        self
    }
}

fn combine(pos: &Row, neg: &Row, k: usize) -> Row {
    // pos has coefficient a > 0 on x_k, neg has b < 0: (-b)·pos + a·neg.
    let a = pos.coeffs[k].clone();
    let b = -neg.coeffs[k].clone();
    let lin = |x: &Rational, y: &Rational| &b * x + &a * y;
    Row {
        coeffs: pos.coeffs.iter().zip(&neg.coeffs).map(|(x, y)| lin(x, y)).collect(),
        rhs: lin(&pos.rhs, &neg.rhs),
        mult: pos.mult.iter().zip(&neg.mult).map(|(x, y)| lin(x, y)).collect(),
    }
}

/// Decides feasibility of `ineqs` over `nvars` rational unknowns.
///
/// Variables are eliminated from the last to the first; each intermediate
/// system is kept and a point is recovered by back substitution, taking the
/// largest lower bound, else `min(upper, 0)`, else `0`.
pub fn fm_feasible(ineqs: &[Inequality], nvars: usize) -> FmOutcome {
    let m = ineqs.len();
    let mut system: Vec<Row> = ineqs
        .iter()
        .enumerate()
        .map(|(i, q)| {
            assert_eq!(q.coeffs.len(), nvars, "inequality width must equal the variable count");
            let mut mult = vec![Rational::zero(); m];
            mult[i] = Rational::one();
            Row {
                coeffs: q.coeffs.clone(),
                rhs: q.rhs.clone(),
                mult,
            }
            .normalized(nvars)
        })
        .collect();

    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(nvars);
    for k in (0..nvars).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in &system {
            if r.coeffs[k].is_positive() {
                pos.push(r.clone());
            } else if r.coeffs[k].is_negative() {
                neg.push(r.clone());
            } else {
                rest.push(r.clone());
            }
        }
        let mut next = rest;
        for p in &pos {
            for q in &neg {
                next.push(combine(p, q, k).normalized(k));
            }
        }
        let mut seen = HashSet::new();
        next.retain(|r| {
            if is_zero_vec(&r.coeffs) && !r.rhs.is_positive() {
                return false;
            }
            seen.insert((r.coeffs.clone(), r.rhs.clone()))
        });
        stages.push(std::mem::replace(&mut system, next));
    }

    if let Some(bad) = system.iter().find(|r| r.rhs.is_positive()) {
        return FmOutcome::Infeasible(bad.mult.clone());
    }

    let mut x = vec![Rational::zero(); nvars];
    for (stage, k) in stages.iter().rev().zip(0..nvars) {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for r in stage {
            let a = &r.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest: Rational = (0..k).map(|j| &r.coeffs[j] * &x[j]).sum();
            let bound = (&r.rhs - rest) / a;
            if a.is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        x[k] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
    }
    debug_assert!(ineqs.iter().all(|q| q.holds_at(&x)));
    FmOutcome::Feasible(x)
}

/// Checks a Farkas certificate for `A x ≥ b`.
pub fn verify_farkas(ineqs: &[Inequality], y: &[Rational]) -> bool {
    if y.len() != ineqs.len() || y.iter().any(Signed::is_negative) {
        return false;
    }
    let n = ineqs.first().map_or(0, |q| q.coeffs.len());
    let combo: Vec<Rational> = (0..n)
        .map(|j| ineqs.iter().zip(y).map(|(q, w)| w * &q.coeffs[j]).sum())
        .collect();
    let rhs: Rational = ineqs.iter().zip(y).map(|(q, w)| w * &q.rhs).sum();
    is_zero_vec(&combo) && rhs.is_positive()
}

/// Result of [`positive_feasible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// A primitive integer vector of the subspace with every coordinate > 0.
    Witness(Vec<Rational>),
    /// `y ≥ 0`, `y ≠ 0`, orthogonal to every basis vector (Gordan alternative).
    Certificate(Vec<Rational>),
}

impl Positivity {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Positivity::Witness(v) => Some(v),
            Positivity::Certificate(_) => None,
        }
    }
}

/// Looks for a strictly positive vector in the span of `basis` (vectors of
/// equal length `n`). Works on coefficients `c`, requiring `(Σ cⱼ bⱼ)_s ≥ 1`.
pub fn positive_feasible(basis: &[Vec<Rational>]) -> Positivity {
    let n = basis.first().map_or(0, Vec::len);
    if basis.is_empty() {
        // Only the zero vector: any y > 0 certifies.
        return Positivity::Certificate(vec![Rational::one(); n.max(1)]);
    }
    let ineqs: Vec<Inequality> = (0..n)
        .map(|s| Inequality::new(basis.iter().map(|b| b[s].clone()).collect(), Rational::one()))
        .collect();
    match fm_feasible(&ineqs, basis.len()) {
        FmOutcome::Feasible(c) => {
            let v: Vec<Rational> = (0..n)
                .map(|s| basis.iter().zip(&c).map(|(b, cj)| &b[s] * cj).sum())
                .collect();
            Positivity::Witness(primitive_direction(&v))
        }
        FmOutcome::Infeasible(y) => Positivity::Certificate(y),
    }
}

/// Exact check of either outcome of [`positive_feasible`].
pub fn verify_positivity(basis: &[Vec<Rational>], result: &Positivity) -> bool {
    match result {
        Positivity::Witness(v) => {
            if !v.iter().all(Signed::is_positive) {
                return false;
            }
            if basis.is_empty() {
                return false;
            }
            let n = v.len();
            let m = RatMatrix::from_columns(n, basis);
            m.solve_any(v).is_some()
        }
        Positivity::Certificate(y) => {
            y.iter().all(|w| !w.is_negative())
                && !is_zero_vec(y)
                && basis.iter().all(|b| dot(b, y).is_zero())
        }
    }
}
