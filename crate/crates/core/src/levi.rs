//! Torus data, Levi pairs `(g, λ)` obtained from surjections `L: t → h`,
//! the sliced polytope `Δ_{g,λ}`, the label cone and transversality tests.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::rational::{dot, is_zero_vec, to_rationals, Rational};
use crate::exactnum::{integer_kernel, integer_kernel_rational, saturate, RatMatrix};
use crate::polytope::{FaceLattice, LabelledPolytope, PolytopeError};

/// A point with the labels vanishing there.
pub type ActivePoint = (Vec<Rational>, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeviError {
    #[error("torus dimension must be at least 1")]
    EmptyTorus,
    #[error("label {0} is zero")]
    ZeroLabel(usize),
    #[error("label {index} has length {found}, expected {expected}")]
    LabelLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("L has shape {rows}x{cols}, which does not match epsilon of length {eps} and a torus of dimension {n}")]
    Shape {
        rows: usize,
        cols: usize,
        eps: usize,
        n: usize,
    },
    #[error("epsilon must be nonzero")]
    ZeroEpsilon,
    #[error("L is not surjective (rank {rank}, need {needed})")]
    NotSurjective { rank: usize, needed: usize },
    #[error("L vanishes on g, so lambda is zero")]
    ZeroLambda,
    #[error("the basis of g is not linearly independent")]
    DependentBasis,
    #[error("g has dimension {g}, but the torus needs codimension at least one, so dim g < {n}")]
    BadSubspace { g: usize, n: usize },
    #[error("lambda has {found} entries, expected dim g = {expected}")]
    LambdaLength { expected: usize, found: usize },
    #[error("L(v) = lambda(v) epsilon fails for basis vector {0} of g")]
    NotCommuting(usize),
    #[error("the slice {{x : x|g = lambda, <x, e_s> >= 0}} is empty")]
    EmptySlice,
    #[error("face {0:?} is not in the face lattice")]
    UnknownFace(Vec<usize>),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `t = ℚⁿ` with the standard lattice and labels `e_s ∈ t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusData {
    n: usize,
    labels: Vec<Vec<Rational>>,
}

impl TorusData {
    pub fn new(n: usize, labels: Vec<Vec<Rational>>) -> Result<Self, LeviError> {
        if n == 0 {
            return Err(LeviError::EmptyTorus);
        }
        for (index, e) in labels.iter().enumerate() {
            if e.len() != n {
                return Err(LeviError::LabelLength {
                    index,
                    expected: n,
                    found: e.len(),
                });
            }
            if is_zero_vec(e) {
                return Err(LeviError::ZeroLabel(index));
            }
        }
        Ok(Self { n, labels })
    }

    /// The standard basis of `ℚ^k` as labels.
    pub fn standard(k: usize) -> Self {
        let labels = (0..k)
            .map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self { n: k, labels }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Vec<Rational>] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    /// `l_s(x) = ⟨x, e_s⟩`.
    pub fn label_value(&self, s: usize, x: &[Rational]) -> Rational {
        dot(&self.labels[s], x)
    }

    /// `S_x = {s : ⟨x, e_s⟩ = 0}`.
    pub fn zero_set(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&s| self.label_value(s, x).is_zero())
            .collect()
    }

    /// Membership in `𝒞_e = {x : ⟨x, e_s⟩ ≥ 0 ∀s, S_x ∈ Φ}`.
    pub fn in_label_cone(&self, lattice: &FaceLattice, x: &[Rational]) -> bool {
        self.labels.iter().all(|e| !dot(e, x).is_negative()) && lattice.contains(&self.zero_set(x))
    }

    /// Rows `e_s` for `s ∈ S`.
    pub fn label_matrix(&self, set: &[usize]) -> RatMatrix {
        let rows: Vec<Vec<Rational>> = set.iter().map(|&s| self.labels[s].clone()).collect();
        RatMatrix::from_rows(self.n, &rows)
    }
}

/// A Levi pair with the surjection that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviPair {
    l_map: RatMatrix,
    epsilon: Vec<Rational>,
    g: Vec<Vec<BigInt>>,
    lambda: Vec<Rational>,
    u: RatMatrix,
}

impl LeviPair {
    /// Builds `(g, λ)` from a surjection `L: t → h` and `ε ∈ h`.
    ///
    /// With `p` the first nonzero coordinate of `ε`, the quotient
    /// `d: h → h/⟨ε⟩` is `x ↦ (x_j − (ε_j/ε_p) x_p)_{j ≠ p}`; `g` is the
    /// HNF basis of the saturated kernel of `u = d ∘ L`.
    pub fn from_map(l_map: RatMatrix, epsilon: Vec<Rational>) -> Result<Self, LeviError> {
        let h = l_map.rows();
        let n = l_map.cols();
        if epsilon.len() != h || h < 2 || n < h {
            return Err(LeviError::Shape {
                rows: h,
                cols: n,
                eps: epsilon.len(),
                n,
            });
        }
        if is_zero_vec(&epsilon) {
            return Err(LeviError::ZeroEpsilon);
        }
        let rank = l_map.rank();
        if rank != h {
            return Err(LeviError::NotSurjective { rank, needed: h });
        }
        let d = quotient_matrix(&epsilon);
        let u = &d * &l_map;
        let g = integer_kernel_rational(&u);
        let p = pivot(&epsilon);
        let mut lambda = Vec::with_capacity(g.len());
        for (i, v) in g.iter().enumerate() {
            let lv = l_map.mul_vec(&to_rationals(v));
            let li = &lv[p] / &epsilon[p];
            let expected: Vec<Rational> = epsilon.iter().map(|e| e * &li).collect();
            if lv != expected {
                return Err(LeviError::NotCommuting(i));
            }
            lambda.push(li);
        }
        if is_zero_vec(&lambda) {
            return Err(LeviError::ZeroLambda);
        }
        Ok(Self {
            l_map,
            epsilon,
            g,
            lambda,
            u,
        })
    }

    /// Builds a pair from a subspace `g ≤ t` (any basis, rational entries)
    /// and the values of `λ` on that basis. `L` is the quotient of `t` by
    /// `ker λ` written in an integral basis, and `ε = L(v)/λ(v)` for a basis
    /// vector with `λ(v) ≠ 0`. The stored `g` is re-expressed in HNF.
    pub fn from_subspace(basis: &[Vec<Rational>], lambda: &[Rational], n: usize) -> Result<Self, LeviError> {
        let ell = basis.len();
        if lambda.len() != ell {
            return Err(LeviError::LambdaLength {
                expected: ell,
                found: lambda.len(),
            });
        }
        if ell == 0 || ell >= n || basis.iter().any(|b| b.len() != n) {
            return Err(LeviError::BadSubspace { g: ell, n });
        }
        if RatMatrix::from_rows(n, basis).rank() != ell {
            return Err(LeviError::DependentBasis);
        }
        let Some(k) = lambda.iter().position(|x| !x.is_zero()) else {
            return Err(LeviError::ZeroLambda);
        };
        // ker λ inside g: combinations Σ c_i b_i with Σ c_i λ_i = 0.
        let kernel_coeffs = RatMatrix::from_rows(ell, &[lambda.to_vec()]).nullspace();
        let w: Vec<Vec<Rational>> = kernel_coeffs
            .iter()
            .map(|c| (0..n).map(|j| basis.iter().zip(c).map(|(b, ci)| &b[j] * ci).sum()).collect())
            .collect();
        let rows: Vec<Vec<BigInt>> = if w.is_empty() {
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect()
        } else {
            integer_kernel_rational(&RatMatrix::from_rows(n, &w))
        };
        let l_rows: Vec<Vec<Rational>> = rows.iter().map(|r| to_rationals(r)).collect();
        let l_map = RatMatrix::from_rows(n, &l_rows);
        let epsilon: Vec<Rational> = l_map
            .mul_vec(&basis[k])
            .into_iter()
            .map(|x| x / &lambda[k])
            .collect();
        let pair = Self::from_map(l_map, epsilon)?;
        // Cross-check that λ on the canonical basis agrees with the input.
        let given = RatMatrix::from_columns(n, basis);
        for (gv, lv) in pair.g.iter().zip(&pair.lambda) {
            let c = given
                .solve_any(&to_rationals(gv))
                .expect("canonical basis lies in the span of the given one");
            let expected: Rational = c.iter().zip(lambda).map(|(a, b)| a * b).sum();
            debug_assert_eq!(&expected, lv);
        }
        Ok(pair)
    }

    pub fn l_map(&self) -> &RatMatrix {
        &self.l_map
    }

    pub fn epsilon(&self) -> &[Rational] {
        &self.epsilon
    }

    /// HNF basis of `g`.
    pub fn g(&self) -> &[Vec<BigInt>] {
        &self.g
    }

    pub fn g_rational(&self) -> Vec<Vec<Rational>> {
        self.g.iter().map(|v| to_rationals(v)).collect()
    }

    /// `λ` on the HNF basis of `g`.
    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// `u: t → 𝔨` as an `m × n` matrix.
    pub fn u(&self) -> &RatMatrix {
        &self.u
    }

    pub fn ell(&self) -> usize {
        self.g.len()
    }

    pub fn torus_dim(&self) -> usize {
        self.l_map.cols()
    }

    pub fn m(&self) -> usize {
        self.l_map.rows() - 1
    }

    /// The labels `L(e_j)` of the standard basis, i.e. the columns of `L`.
    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.l_map.cols()).map(|j| self.l_map.column(j)).collect()
    }

    /// `L ∘ ι_g = ε ∘ λ`, entry by entry.
    pub fn commutes(&self) -> bool {
        self.g.iter().zip(&self.lambda).all(|(v, l)| {
            let lv = self.l_map.mul_vec(&to_rationals(v));
            lv.iter().zip(&self.epsilon).all(|(a, e)| *a == e * l)
        })
    }

    /// Same subspace with a different covector.
    pub fn with_lambda(&self, lambda: &[Rational]) -> Result<Self, LeviError> {
        Self::from_subspace(&self.g_rational(), lambda, self.torus_dim())
    }
}

fn pivot(epsilon: &[Rational]) -> usize {
    epsilon
        .iter()
        .position(|x| !x.is_zero())
        .expect("epsilon is nonzero")
}

/// Matrix of `h → h/⟨ε⟩` in the coordinates `j ≠ p`.
pub fn quotient_matrix(epsilon: &[Rational]) -> RatMatrix {
    let h = epsilon.len();
    let p = pivot(epsilon);
    let rows: Vec<Vec<Rational>> = (0..h)
        .filter(|&j| j != p)
        .map(|j| {
            let mut r = vec![Rational::zero(); h];
            r[j] = Rational::one();
            r[p] = -(&epsilon[j] / &epsilon[p]);
            r
        })
        .collect();
    RatMatrix::from_rows(h, &rows)
}

/// `Δ_{g,λ}` written on the chart `x = x₀ + K y` of `{x : ι_gᵀ x = λ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedPolytope {
    /// Polytope in `ℚ^{m+1}` with `ε = (1, 0, …, 0)`; the label of facet
    /// `s` is `(⟨x₀, e_s⟩, Kᵀ e_s)`.
    pub polytope: LabelledPolytope,
    pub origin: Vec<Rational>,
    /// Columns of `K`: an integral basis of `{y : ι_gᵀ y = 0}`.
    pub directions: Vec<Vec<Rational>>,
}

impl SlicedPolytope {
    /// Chart point `(1, y)` to `x ∈ t*`.
    pub fn to_ambient(&self, chart: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (k, yk) in self.directions.iter().zip(&chart[1..]) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += ki * yk;
            }
        }
        x
    }

    /// Chart direction `(0, dy)` to `t*`.
    pub fn direction_to_ambient(&self, chart: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.origin.len()];
        for (k, yk) in self.directions.iter().zip(&chart[1..]) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += ki * yk;
            }
        }
        x
    }

    /// `x ∈ t*` on the slice back to chart coordinates `(1, y)`.
    pub fn to_chart(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.origin.len();
        let diff: Vec<Rational> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let k = RatMatrix::from_columns(n, &self.directions);
        let y = k.solve_any(&diff)?;
        if k.mul_vec(&y) != diff {
            return None;
        }
        let mut out = vec![Rational::one()];
        out.extend(y);
        Some(out)
    }

    /// Vertices in `t*` with their active sets, in chart order.
    pub fn ambient_vertices(&self) -> Result<Vec<ActivePoint>, PolytopeError> {
        Ok(self
            .polytope
            .enumerate_vertices()?
            .into_iter()
            .map(|v| (self.to_ambient(&v.point), v.active))
            .collect())
    }
}

/// `Δ_{g,λ} = {x ∈ t* : ι_gᵀ x = λ, ⟨x, e_s⟩ ≥ 0}`, computed from `g` and
/// `λ` alone.
pub fn slice_polytope(torus: &TorusData, pair: &LeviPair) -> Result<SlicedPolytope, LeviError> {
    slice_from_subspace(torus, &pair.g_rational(), pair.lambda())
}

/// [`slice_polytope`] for an explicit basis of `g` and values of `λ`.
pub fn slice_from_subspace(
    torus: &TorusData,
    g: &[Vec<Rational>],
    lambda: &[Rational],
) -> Result<SlicedPolytope, LeviError> {
    let n = torus.dim();
    if g.is_empty() || g.len() >= n || g.iter().any(|v| v.len() != n) {
        return Err(LeviError::BadSubspace { g: g.len(), n });
    }
    if lambda.len() != g.len() {
        return Err(LeviError::LambdaLength {
            expected: g.len(),
            found: lambda.len(),
        });
    }
    if is_zero_vec(lambda) {
        return Err(LeviError::ZeroLambda);
    }
    let gm = RatMatrix::from_rows(n, g);
    if gm.rank() != g.len() {
        return Err(LeviError::DependentBasis);
    }
    let origin = gm.solve_any(lambda).expect("full row rank system is consistent");
    let directions: Vec<Vec<Rational>> = integer_kernel(&gm.clear_row_denominators())
        .iter()
        .map(|v| to_rationals(v))
        .collect();
    let m = directions.len();
    let mut epsilon = vec![Rational::zero(); m + 1];
    epsilon[0] = Rational::one();
    let labels: Vec<Vec<Rational>> = torus
        .labels()
        .iter()
        .map(|e| {
            let mut l = vec![dot(e, &origin)];
            l.extend(directions.iter().map(|k| dot(k, e)));
            l
        })
        .collect();
    if labels.is_empty() {
        return Err(LeviError::EmptySlice);
    }
    let polytope = LabelledPolytope::new(epsilon, labels)?;
    match polytope.enumerate_vertices() {
        Err(PolytopeError::Empty) => return Err(LeviError::EmptySlice),
        Err(e) => return Err(e.into()),
        Ok(_) => {}
    }
    Ok(SlicedPolytope {
        polytope,
        origin,
        directions,
    })
}

/// True iff `{e_s : s ∈ S}` is independent and its span meets `g` only in
/// zero, i.e. `rank [e_S; g] = |S| + ℓ`.
pub fn check_transversality(
    torus: &TorusData,
    pair: &LeviPair,
    lattice: &FaceLattice,
    set: &[usize],
) -> Result<bool, LeviError> {
    if !lattice.contains(set) {
        return Err(LeviError::UnknownFace(set.to_vec()));
    }
    Ok(transversal(torus, &pair.g_rational(), set))
}

/// The rank test behind [`check_transversality`], without the face check.
pub fn transversal(torus: &TorusData, g: &[Vec<Rational>], set: &[usize]) -> bool {
    let mut rows: Vec<Vec<Rational>> = set.iter().map(|&s| torus.labels()[s].clone()).collect();
    rows.extend(g.iter().cloned());
    RatMatrix::from_rows(torus.dim(), &rows).rank() == set.len() + g.len()
}

/// HNF basis of the saturation of a rational subspace.
pub fn saturated_basis(vectors: &[Vec<Rational>], n: usize) -> Vec<Vec<BigInt>> {
    let ints: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| crate::exactnum::rational::primitive_integer(v))
        .collect();
    saturate(&ints, n)
}
