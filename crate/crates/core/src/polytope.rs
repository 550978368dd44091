//! Labelled convex polytopes in an affine slice `𝒜 = {ξ ∈ h* : ⟨ξ, ε⟩ = 1}`.
//!
//! Points are stored in full `h*` coordinates. A polytope is cut out by the
//! affine labels `L_s(ξ) = ⟨ξ, L_s⟩ ≥ 0`.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::rational::{dot, format_vec, is_zero_vec, primitive_direction, sub, Rational};
use crate::exactnum::RatMatrix;
use crate::fm::{fm_feasible, FmOutcome, Inequality};

/// Default bound on the number of labels for brute-force enumeration.
pub const DEFAULT_MAX_FACETS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("epsilon must be nonzero")]
    ZeroEpsilon,
    #[error("label {index} has length {found}, expected {expected}")]
    LabelLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("a labelled polytope needs at least one label")]
    NoLabels,
    #[error("the affine slice has dimension zero")]
    ZeroDimensional,
    #[error("{count} labels exceed the enumeration bound of {max}")]
    TooManyFacets { count: usize, max: usize },
    #[error("polytope is unbounded along {}", format_vec(.direction))]
    Unbounded { direction: Vec<Rational> },
    #[error("polytope is empty")]
    Empty,
    #[error("{} is not a vertex", format_vec(.0))]
    NotAVertex(Vec<Rational>),
    #[error("vertex {} has {active} active labels, more than m = {m}", format_vec(.point))]
    NotSimpleVertex {
        point: Vec<Rational>,
        active: usize,
        m: usize,
    },
}

/// The affine hyperplane `⟨ξ, ε⟩ = 1` in `h*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSlice {
    epsilon: Vec<Rational>,
}

impl AffineSlice {
    pub fn new(epsilon: Vec<Rational>) -> Result<Self, PolytopeError> {
        if is_zero_vec(&epsilon) {
            return Err(PolytopeError::ZeroEpsilon);
        }
        if epsilon.len() < 2 {
            return Err(PolytopeError::ZeroDimensional);
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> &[Rational] {
        &self.epsilon
    }

    /// `dim h = m + 1`.
    pub fn h_dim(&self) -> usize {
        self.epsilon.len()
    }

    /// `m = dim 𝒜`.
    pub fn dim(&self) -> usize {
        self.epsilon.len() - 1
    }

    /// First coordinate where `ε` is nonzero; the others are affine
    /// coordinates on the slice.
    pub fn pivot(&self) -> usize {
        self.epsilon
            .iter()
            .position(|x| !x.is_zero())
            .expect("epsilon is nonzero")
    }

    pub fn contains(&self, xi: &[Rational]) -> bool {
        dot(xi, &self.epsilon).is_one()
    }

    /// Drops the pivot coordinate.
    pub fn chart_coordinates(&self, xi: &[Rational]) -> Vec<Rational> {
        let p = self.pivot();
        xi.iter()
            .enumerate()
            .filter(|&(j, _)| j != p)
            .map(|(_, x)| x.clone())
            .collect()
    }

    /// Inverse of [`AffineSlice::chart_coordinates`].
    pub fn from_chart_coordinates(&self, y: &[Rational]) -> Vec<Rational> {
        let p = self.pivot();
        let mut xi = Vec::with_capacity(self.h_dim());
        let mut it = y.iter();
        for j in 0..self.h_dim() {
            if j == p {
                xi.push(Rational::zero());
            } else {
                xi.push(it.next().expect("chart coordinate count is m").clone());
            }
        }
        let rest = dot(&xi, &self.epsilon);
        xi[p] = (Rational::one() - rest) / &self.epsilon[p];
        xi
    }

    /// A basis of the direction space `ker ε ⊂ h*` (one vector per
    /// non-pivot coordinate).
    pub fn direction_basis(&self) -> Vec<Vec<Rational>> {
        RatMatrix::from_rows(self.h_dim(), std::slice::from_ref(&self.epsilon)).nullspace()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rational>,
    /// Labels vanishing at the point, ascending.
    pub active: Vec<usize>,
}

/// `Δ = {ξ ∈ 𝒜 : L_s(ξ) ≥ 0}` with its labels stored verbatim.
///
/// Construction only checks shapes. Boundedness, emptiness and whether
/// each label cuts out a genuine facet are reported by
/// [`LabelledPolytope::enumerate_vertices`] and
/// [`LabelledPolytope::face_lattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledPolytope {
    slice: AffineSlice,
    labels: Vec<Vec<Rational>>,
}

impl LabelledPolytope {
    pub fn new(epsilon: Vec<Rational>, labels: Vec<Vec<Rational>>) -> Result<Self, PolytopeError> {
        let slice = AffineSlice::new(epsilon)?;
        if labels.is_empty() {
            return Err(PolytopeError::NoLabels);
        }
        for (index, l) in labels.iter().enumerate() {
            if l.len() != slice.h_dim() {
                return Err(PolytopeError::LabelLength {
                    index,
                    expected: slice.h_dim(),
                    found: l.len(),
                });
            }
        }
        Ok(Self { slice, labels })
    }

    pub fn slice(&self) -> &AffineSlice {
        &self.slice
    }

    pub fn epsilon(&self) -> &[Rational] {
        self.slice.epsilon()
    }

    pub fn labels(&self) -> &[Vec<Rational>] {
        &self.labels
    }

    pub fn facet_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.slice.dim()
    }

    pub fn label_value(&self, s: usize, xi: &[Rational]) -> Rational {
        dot(&self.labels[s], xi)
    }

    pub fn contains(&self, xi: &[Rational]) -> bool {
        self.slice.contains(xi) && self.labels.iter().all(|l| !dot(l, xi).is_negative())
    }

    pub fn active_set(&self, xi: &[Rational]) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&s| self.label_value(s, xi).is_zero())
            .collect()
    }

    /// A nonzero direction `d ∈ ker ε` with `L_s(d) ≥ 0` for all `s`, if one
    /// exists. Tests the `2m` systems `{A y ≥ 0, ±y_i ≥ 1}` where the columns
    /// of `A` are the labels restricted to a basis of `ker ε`.
    pub fn recession_direction(&self) -> Option<Vec<Rational>> {
        let basis = self.slice.direction_basis();
        let m = basis.len();
        let rows: Vec<Vec<Rational>> = self
            .labels
            .iter()
            .map(|l| basis.iter().map(|b| dot(l, b)).collect())
            .collect();
        for i in 0..m {
            for sgn in [Rational::one(), -Rational::one()] {
                let mut sys: Vec<Inequality> = rows
                    .iter()
                    .map(|r| Inequality::new(r.clone(), Rational::zero()))
                    .collect();
                let mut e = vec![Rational::zero(); m];
                e[i] = sgn.clone();
                sys.push(Inequality::new(e, Rational::one()));
                if let FmOutcome::Feasible(y) = fm_feasible(&sys, m) {
                    let d: Vec<Rational> = (0..self.slice.h_dim())
                        .map(|j| basis.iter().zip(&y).map(|(b, c)| &b[j] * c).sum())
                        .collect();
                    return Some(primitive_direction(&d));
                }
            }
        }
        None
    }

    pub fn is_compact(&self) -> bool {
        self.recession_direction().is_none()
    }

    pub fn enumerate_vertices(&self) -> Result<Vec<Vertex>, PolytopeError> {
        self.enumerate_vertices_with_limit(DEFAULT_MAX_FACETS)
    }

    /// All vertices, sorted lexicographically by point. Brute force over
    /// every `m`-subset of labels.
    pub fn enumerate_vertices_with_limit(&self, max_facets: usize) -> Result<Vec<Vertex>, PolytopeError> {
        if self.labels.len() > max_facets {
            return Err(PolytopeError::TooManyFacets {
                count: self.labels.len(),
                max: max_facets,
            });
        }
        if let Some(direction) = self.recession_direction() {
            return Err(PolytopeError::Unbounded { direction });
        }
        let m = self.dim();
        let h = self.slice.h_dim();
        let mut rhs = vec![Rational::zero(); h];
        rhs[0] = Rational::one();
        let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for subset in Combinations::new(self.labels.len(), m) {
            let mut rows = vec![self.slice.epsilon.clone()];
            rows.extend(subset.iter().map(|&s| self.labels[s].clone()));
            let Some(xi) = RatMatrix::from_rows(h, &rows).solve(&rhs) else {
                continue;
            };
            if self.contains(&xi) {
                points.insert(xi);
            }
        }
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        Ok(points
            .into_iter()
            .map(|point| Vertex {
                active: self.active_set(&point),
                point,
            })
            .collect())
    }

    /// The face lattice together with simplicity and facet diagnostics.
    pub fn face_lattice(&self) -> Result<FaceLattice, PolytopeError> {
        let vertices = self.enumerate_vertices()?;
        Ok(FaceLattice::from_vertices(self, vertices))
    }

    /// Edge generators of the tangent cone at a simple vertex, one per active
    /// label `s`, in the order of the active set: the direction in `ker ε`
    /// along which every other active label stays zero and `L_s` increases.
    pub fn tangent_cone(&self, vertex: &[Rational]) -> Result<Vec<Vec<Rational>>, PolytopeError> {
        let active = self.active_set(vertex);
        let m = self.dim();
        if !self.contains(vertex) || !self.is_vertex_active_set(&active) {
            return Err(PolytopeError::NotAVertex(vertex.to_vec()));
        }
        if active.len() > m {
            return Err(PolytopeError::NotSimpleVertex {
                point: vertex.to_vec(),
                active: active.len(),
                m,
            });
        }
        let h = self.slice.h_dim();
        let mut gens = Vec::with_capacity(m);
        for &s in &active {
            let mut rows = vec![self.slice.epsilon.clone()];
            rows.extend(active.iter().filter(|&&t| t != s).map(|&t| self.labels[t].clone()));
            let null = RatMatrix::from_rows(h, &rows).nullspace();
            debug_assert_eq!(null.len(), 1);
            let mut d = null.into_iter().next().expect("edge direction");
            if dot(&self.labels[s], &d).is_negative() {
                d = d.iter().map(|x| -x).collect();
            }
            gens.push(primitive_direction(&d));
        }
        Ok(gens)
    }

    fn is_vertex_active_set(&self, active: &[usize]) -> bool {
        let mut rows = vec![self.slice.epsilon.clone()];
        rows.extend(active.iter().map(|&s| self.labels[s].clone()));
        RatMatrix::from_rows(self.slice.h_dim(), &rows).rank() == self.slice.h_dim()
    }

    /// Same polytope with one label multiplied by `factor`.
    pub fn with_rescaled_label(&self, s: usize, factor: &Rational) -> Self {
        let mut labels = self.labels.clone();
        labels[s] = labels[s].iter().map(|x| x * factor).collect();
        Self {
            slice: self.slice.clone(),
            labels,
        }
    }
}

/// Nonnegative coefficients of `d` in terms of the cone generators, if `d`
/// lies in the cone they span. The generators must be linearly independent.
pub fn cone_coefficients(generators: &[Vec<Rational>], d: &[Rational]) -> Option<Vec<Rational>> {
    if generators.is_empty() {
        return is_zero_vec(d).then(Vec::new);
    }
    let m = RatMatrix::from_columns(d.len(), generators);
    let c = m.solve_any(d)?;
    if m.mul_vec(&c) != d || c.iter().any(Signed::is_negative) {
        return None;
    }
    Some(c)
}

/// One element of the face lattice: the labels vanishing on a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub set: Vec<usize>,
    /// Indices into [`FaceLattice::vertices`].
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    pub m: usize,
    pub facet_count: usize,
    pub vertices: Vec<Vertex>,
    /// Sorted by set size, then lexicographically. The empty set (the whole
    /// polytope) comes first.
    pub faces: Vec<Face>,
    pub simple: bool,
    /// A vertex with more than `m` active labels when not simple.
    pub non_simple_witness: Option<usize>,
    pub has_interior: bool,
    /// Labels whose zero set on `Δ` is empty or of codimension above one.
    pub degenerate_facets: Vec<usize>,
}

impl FaceLattice {
    fn from_vertices(poly: &LabelledPolytope, vertices: Vec<Vertex>) -> Self {
        let m = poly.dim();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(Vec::new());
        let mut frontier: Vec<Vec<usize>> = vertices.iter().map(|v| v.active.clone()).collect();
        while let Some(s) = frontier.pop() {
            if sets.contains(&s) {
                continue;
            }
            let new: Vec<Vec<usize>> = sets
                .iter()
                .filter(|t| !t.is_empty())
                .map(|t| intersect(t, &s))
                .filter(|i| !sets.contains(i) && *i != s)
                .collect();
            sets.insert(s);
            frontier.extend(new);
        }
        let rank_of = |idx: &[usize]| {
            if idx.is_empty() {
                return 0;
            }
            let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| vertices[i].point.clone()).collect();
            RatMatrix::from_rows(poly.slice.h_dim(), &rows).rank()
        };
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|set| {
                let verts: Vec<usize> = (0..vertices.len())
                    .filter(|&i| set.iter().all(|s| vertices[i].active.contains(s)))
                    .collect();
                let dim = rank_of(&verts).saturating_sub(1);
                Face { set, vertices: verts, dim }
            })
            .collect();
        faces.sort_by(|a, b| a.set.len().cmp(&b.set.len()).then_with(|| a.set.cmp(&b.set)));

        let non_simple_witness = vertices.iter().position(|v| v.active.len() != m);
        let has_interior = faces[0].dim == m;
        let degenerate_facets = (0..poly.facet_count())
            .filter(|&s| {
                !faces
                    .iter()
                    .any(|f| f.dim + 1 == m && f.set.contains(&s))
            })
            .collect();
        let mut lattice = Self {
            m,
            facet_count: poly.facet_count(),
            vertices,
            faces,
            simple: false,
            non_simple_witness,
            has_interior,
            degenerate_facets,
        };
        lattice.simple = lattice.non_simple_witness.is_none() && lattice.is_downward_closed();
        lattice
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.face(&sorted).is_some()
    }

    /// Looks up a face by its (sorted) label set.
    pub fn face(&self, set: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.set == set)
    }

    /// Every subset of every element is again an element.
    pub fn is_downward_closed(&self) -> bool {
        let present: HashSet<&Vec<usize>> = self.faces.iter().map(|f| &f.set).collect();
        self.faces.iter().all(|f| {
            let k = f.set.len();
            if k > 16 {
                return false;
            }
            (0u32..(1 << k)).all(|mask| {
                let sub: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| f.set[i]).collect();
                present.contains(&sub)
            })
        })
    }

    /// Sets of size `k`.
    pub fn sets_of_size(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.set.len() == k)
    }

    /// Whether `other` has the same combinatorics under the label
    /// correspondence `s ↦ s`.
    pub fn same_sets(&self, other: &FaceLattice) -> bool {
        self.faces.len() == other.faces.len()
            && self.faces.iter().zip(&other.faces).all(|(a, b)| a.set == b.set)
    }

    /// Vertex index for an active set.
    pub fn vertex_with_active(&self, active: &[usize]) -> Option<usize> {
        self.vertices.iter().position(|v| v.active == active)
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Affine dimension of a point set in `h*` lying on the slice.
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| sub(p, base)).collect();
    if diffs.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(base.len(), &diffs).rank()
}
