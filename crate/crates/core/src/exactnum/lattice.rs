//! Integer lattice algorithms: Smith and Hermite normal forms, saturated
//! kernels and saturations of sublattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `D`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let delta = factor * &m[(source, j)];
        m[(target, j)] += delta;
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let delta = factor * &m[(i, source)];
        m[(i, target)] += delta;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        m[(i, j)] = -m[(i, j)].clone();
    }
}

/// Smallest nonzero absolute value in the trailing block starting at
/// `(t, t)`; ties resolve to the lowest row, then lowest column.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with explicit transforms.
///
/// Pivots are the smallest absolute value in the remaining block (ties by
/// lowest index); after each Euclidean sweep the smallest remaining entry of
/// the pivot row/column is promoted, so `|pivot|` strictly decreases until
/// the row and column clear.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
            }

            // Promote a smaller remainder left in the pivot column or row.
            let col_hit = (t + 1..rows)
                .filter(|&i| !d[(i, t)].is_zero())
                .min_by(|&a, &b| d[(a, t)].abs().cmp(&d[(b, t)].abs()).then(a.cmp(&b)));
            if let Some(i) = col_hit {
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                continue;
            }
            let row_hit = (t + 1..cols)
                .filter(|&j| !d[(t, j)].is_zero())
                .min_by(|&a, &b| d[(t, a)].abs().cmp(&d[(t, b)].abs()).then(a.cmp(&b)));
            if let Some(j) = row_hit {
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                continue;
            }

            // Divisibility: fold an offending row into the pivot row and retry.
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => {
                    row_axpy(&mut d, t, i, &BigInt::one());
                    row_axpy(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }

    SmithForm { u, d, v }
}

/// Invariant factors of `m` (the nonzero diagonal of its Smith form).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).invariant_factors()
}

/// Row-style Hermite normal form: nonzero rows only, echelon shape, positive
/// pivots and entries above each pivot reduced into `[0, pivot)`. Two integer
/// matrices have the same row lattice iff their HNFs coincide.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&x, &y| a[(x, c)].abs().cmp(&a[(y, c)].abs()).then(x.cmp(&y)));
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let mut cleared = true;
            for i in r + 1..rows {
                if !a[(i, c)].is_zero() {
                    let q = -a[(i, c)].div_floor(&a[(r, c)]);
                    row_axpy(&mut a, i, r, &q);
                    if !a[(i, c)].is_zero() {
                        cleared = false;
                    }
                }
            }
            if cleared {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            negate_row(&mut a, r);
        }
        let p = a[(r, c)].clone();
        for i in 0..r {
            let q = -a[(i, c)].div_floor(&p);
            row_axpy(&mut a, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// HNF of a list of integer vectors (as rows), returned as vectors.
pub fn hnf_basis(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    hermite_normal_form(&IntMatrix::from_rows(dim, vectors)).to_rows()
}

/// HNF-canonical basis of the saturated kernel lattice `{v ∈ ℤⁿ : M v = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let basis: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| snf.v.column(j)).collect();
    hnf_basis(&basis, m.cols())
}

/// [`integer_kernel`] for a rational matrix (rows are cleared of denominators).
pub fn integer_kernel_rational(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    integer_kernel(&m.clear_row_denominators())
}

/// HNF basis of `span_ℚ(vectors) ∩ ℤⁿ`.
pub fn saturate(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let annihilator = integer_kernel(&IntMatrix::from_rows(dim, vectors));
    if annihilator.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
    }
    integer_kernel(&IntMatrix::from_rows(dim, &annihilator))
}

/// True iff the given integer vectors are a ℤ-basis of the lattice they
/// rationally span, i.e. independent with all invariant factors equal to one.
pub fn is_saturated_basis(vectors: &[Vec<BigInt>], dim: usize) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let f = invariant_factors(&IntMatrix::from_rows(dim, vectors));
    f.len() == vectors.len() && f.iter().all(One::is_one)
}
