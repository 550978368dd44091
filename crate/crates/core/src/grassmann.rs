//! Grassmannian points, affine charts and affine presentations
//! `(g, λ, Δ, Ψ)` of labelled polyhedral manifolds with corners.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::rational::{
    dot, format_vec, is_integral, primitive_direction, to_rationals, Rational,
};
use crate::exactnum::{hermite_normal_form, invariant_factors, IntMatrix, RatMatrix};
use crate::levi::{
    check_transversality, slice_from_subspace, LeviError, LeviPair, SlicedPolytope, TorusData,
};
use crate::polytope::{affine_rank, FaceLattice, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassmannError {
    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("the plane is not in the chart of g: g restricted to it is singular")]
    NotInChart,
    #[error("Psi has {found} columns, expected dim g = {expected}")]
    PsiColumns { expected: usize, found: usize },
    #[error("Psi column {column} has the wrong shape for a torus of dimension {n}")]
    PsiShape { column: usize, n: usize },
    #[error("presentation fails at vertex {}: {what}", format_vec(.vertex))]
    Invariant { vertex: Vec<Rational>, what: String },
    #[error("reslice is degenerate: {0}")]
    Degenerate(String),
    #[error("labels are not integral, so u(e_s) need not lie in the lattice u(Λ)")]
    NotRational,
    #[error("vertex with active set {0:?} is not a Delzant vertex")]
    NotDelzantVertex(Vec<usize>),
    #[error(transparent)]
    Levi(#[from] LeviError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// A subspace `ξ ≤ t*` of dimension `ℓ`, stored as its reduced row-echelon
/// basis, which is unique per subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannPoint {
    rows: Vec<Vec<Rational>>,
    n: usize,
}

impl GrassmannPoint {
    pub fn new(n: usize, rows: &[Vec<Rational>]) -> Result<Self, GrassmannError> {
        let m = RatMatrix::from_rows(n, rows);
        let e = m.rref();
        if e.pivots.len() < rows.len() {
            return Err(GrassmannError::RankDeficient {
                rank: e.pivots.len(),
                rows: rows.len(),
            });
        }
        Ok(Self {
            rows: (0..rows.len()).map(|i| e.matrix.row(i).to_vec()).collect(),
            n,
        })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(x.to_vec());
        RatMatrix::from_rows(self.n, &rows).rank() == self.rows.len()
    }
}

/// The unique `x ∈ ξ` with `ι_gᵀ x = lam`.
pub fn chart_point(g: &[Vec<Rational>], xi: &GrassmannPoint, lam: &[Rational]) -> Result<Vec<Rational>, GrassmannError> {
    let ell = xi.dim();
    if g.len() != ell || lam.len() != ell {
        return Err(GrassmannError::NotInChart);
    }
    let system: Vec<Vec<Rational>> = g
        .iter()
        .map(|gi| xi.rows().iter().map(|r| dot(gi, r)).collect())
        .collect();
    let c = RatMatrix::from_rows(ell, &system)
        .solve(lam)
        .ok_or(GrassmannError::NotInChart)?;
    let mut x = vec![Rational::zero(); xi.ambient_dim()];
    for (ci, r) in c.iter().zip(xi.rows()) {
        for (xj, rj) in x.iter_mut().zip(r) {
            *xj += ci * rj;
        }
    }
    Ok(x)
}

/// An affine map `x ↦ c + A x` on `t*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub constant: Vec<Rational>,
    pub linear: RatMatrix,
}

impl AffineMap {
    pub fn new(constant: Vec<Rational>, linear: RatMatrix) -> Self {
        Self { constant, linear }
    }

    pub fn linear_only(linear: RatMatrix) -> Self {
        Self {
            constant: vec![Rational::zero(); linear.rows()],
            linear,
        }
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.linear
            .mul_vec(x)
            .into_iter()
            .zip(&self.constant)
            .map(|(a, c)| a + c)
            .collect()
    }

    fn combine(maps: &[AffineMap], weights: &[Rational]) -> AffineMap {
        let n = maps[0].constant.len();
        let mut constant = vec![Rational::zero(); n];
        let mut linear = RatMatrix::zeros(n, n);
        for (mp, w) in maps.iter().zip(weights) {
            for (c, x) in constant.iter_mut().zip(&mp.constant) {
                *c += w * x;
            }
            for i in 0..n {
                for j in 0..n {
                    linear[(i, j)] += w * &mp.linear[(i, j)];
                }
            }
        }
        AffineMap { constant, linear }
    }
}

/// Affine data `(g, λ, Δ_{g,λ}, Ψ)` over a torus. `Ψ(x)` sends the `i`-th
/// covector of the basis of `g*` dual to `g` to `psi[i](x) ∈ t*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannPresentation {
    torus: TorusData,
    g: Vec<Vec<Rational>>,
    lambda: Vec<Rational>,
    psi: Vec<AffineMap>,
    sliced: SlicedPolytope,
    lattice: FaceLattice,
}

impl GrassmannPresentation {
    /// Slices the polytope and stores the data; invariants are checked
    /// separately by [`GrassmannPresentation::check_invariants`].
    pub fn new(
        torus: TorusData,
        g: Vec<Vec<Rational>>,
        lambda: Vec<Rational>,
        psi: Vec<AffineMap>,
    ) -> Result<Self, GrassmannError> {
        let n = torus.dim();
        if psi.len() != g.len() {
            return Err(GrassmannError::PsiColumns {
                expected: g.len(),
                found: psi.len(),
            });
        }
        for (column, p) in psi.iter().enumerate() {
            if p.constant.len() != n || p.linear.rows() != n || p.linear.cols() != n {
                return Err(GrassmannError::PsiShape { column, n });
            }
        }
        let sliced = slice_from_subspace(&torus, &g, &lambda)?;
        let lattice = sliced.polytope.face_lattice()?;
        Ok(Self {
            torus,
            g,
            lambda,
            psi,
            sliced,
            lattice,
        })
    }

    /// The presentation with `Ψ(x) = x/λ` for `ℓ = 1`.
    pub fn codimension_one(torus: TorusData, g: Vec<Rational>, lambda: Rational) -> Result<Self, GrassmannError> {
        let n = torus.dim();
        let linear = RatMatrix::identity(n).map(|x| x / &lambda);
        Self::new(torus, vec![g], vec![lambda], vec![AffineMap::linear_only(linear)])
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn g(&self) -> &[Vec<Rational>] {
        &self.g
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn psi(&self) -> &[AffineMap] {
        &self.psi
    }

    pub fn sliced(&self) -> &SlicedPolytope {
        &self.sliced
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn ell(&self) -> usize {
        self.g.len()
    }

    pub fn m(&self) -> usize {
        self.torus.dim() - self.g.len()
    }

    /// Vertices of `Δ` in `t*`, in lattice order.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        self.lattice
            .vertices
            .iter()
            .map(|v| self.sliced.to_ambient(&v.point))
            .collect()
    }

    /// Columns `Ψ(x)(λᵢ*)`.
    pub fn psi_at(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        self.psi.iter().map(|p| p.apply(x)).collect()
    }

    /// `ι_gᵀ Ψ(x) = I` and `⟨Ψ(x), λ⟩ = x`, checked at every vertex. Both
    /// sides are affine and the vertices affinely span the slice, so this is
    /// exact on the whole slice. Full rank of `Ψ(x)` follows from the first.
    pub fn check_invariants(&self) -> Result<(), GrassmannError> {
        for v in self.vertices() {
            let cols = self.psi_at(&v);
            for (i, c) in cols.iter().enumerate() {
                for (j, gj) in self.g.iter().enumerate() {
                    let want = if i == j { Rational::one() } else { Rational::zero() };
                    if dot(c, gj) != want {
                        return Err(GrassmannError::Invariant {
                            vertex: v.clone(),
                            what: format!("<Psi column {i}, g_{j}> = {} instead of {want}", dot(c, gj)),
                        });
                    }
                }
            }
            let mut sum = vec![Rational::zero(); v.len()];
            for (c, l) in cols.iter().zip(&self.lambda) {
                for (s, x) in sum.iter_mut().zip(c) {
                    *s += l * x;
                }
            }
            if sum != v {
                return Err(GrassmannError::Invariant {
                    vertex: v.clone(),
                    what: format!("<Psi(x), lambda> = {}", format_vec(&sum)),
                });
            }
        }
        Ok(())
    }

    /// The plane `Ψ(x)(g*) ≤ t*`.
    pub fn plane_at(&self, x: &[Rational]) -> Result<GrassmannPoint, GrassmannError> {
        GrassmannPoint::new(self.torus.dim(), &self.psi_at(x))
    }

    /// For each facet `s`, whether `x ↦ Ψ(x)ᵀ e_s` vanishes on `F_s`,
    /// decided at the vertices of `F_s`.
    pub fn verify_labelling(&self) -> Vec<FacetLabelling> {
        let verts = self.vertices();
        (0..self.torus.label_count())
            .map(|s| {
                let witness = self
                    .lattice
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.active.contains(&s))
                    .map(|(i, _)| &verts[i])
                    .find(|x| {
                        self.psi_at(x)
                            .iter()
                            .any(|c| !dot(c, &self.torus.labels()[s]).is_zero())
                    })
                    .cloned();
                FacetLabelling {
                    facet: s,
                    ok: witness.is_none(),
                    witness,
                }
            })
            .collect()
    }

    /// The resliced presentation and polytope at a new covector `λ'`.
    ///
    /// Vertices are pushed through `φ(x) = Σ λ'ᵢ Ψᵢ(x)` and compared with an
    /// independent slice at `λ'`. `Degenerate` when the image loses
    /// dimension, vertices collide or the two vertex sets differ.
    pub fn reslice(&self, lambda2: &[Rational]) -> Result<Reslice, GrassmannError> {
        if lambda2.len() != self.ell() {
            return Err(LeviError::LambdaLength {
                expected: self.ell(),
                found: lambda2.len(),
            }
            .into());
        }
        let phi = AffineMap::combine(&self.psi, lambda2);
        let old = self.vertices();
        let images: Vec<Vec<Rational>> = old.iter().map(|x| phi.apply(x)).collect();
        let m = self.m();
        if affine_rank(&images) < m {
            return Err(GrassmannError::Degenerate(format!(
                "the vertex images span an affine space of dimension {} < {m}",
                affine_rank(&images)
            )));
        }
        let target = match slice_from_subspace(&self.torus, &self.g, lambda2) {
            Ok(t) => t,
            Err(LeviError::EmptySlice) | Err(LeviError::ZeroLambda) => {
                return Err(GrassmannError::Degenerate("the slice at the new covector is empty".into()))
            }
            Err(e) => return Err(e.into()),
        };
        let new_lattice = target.polytope.face_lattice()?;
        let new_vertices: Vec<Vec<Rational>> = new_lattice
            .vertices
            .iter()
            .map(|v| target.to_ambient(&v.point))
            .collect();
        let mut vertex_map = Vec::with_capacity(images.len());
        for img in &images {
            match new_vertices.iter().position(|w| w == img) {
                Some(j) => vertex_map.push(j),
                None => {
                    return Err(GrassmannError::Degenerate(format!(
                        "{} is not a vertex of the new slice",
                        format_vec(img)
                    )))
                }
            }
        }
        let mut seen = vertex_map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != vertex_map.len() || seen.len() != new_vertices.len() {
            return Err(GrassmannError::Degenerate("the vertex map is not a bijection".into()));
        }

        // Ψ' = Ψ ∘ φ⁻¹ on the new slice, extended affinely to t*.
        let n = self.torus.dim();
        let k_old = RatMatrix::from_columns(n, &self.sliced.directions);
        let k_new = RatMatrix::from_columns(n, &target.directions);
        let a_k = &phi.linear * &k_old;
        let left_new = left_inverse(&k_new);
        let mmat = &left_new * &a_k;
        let minv = mmat
            .inverse()
            .ok_or_else(|| GrassmannError::Degenerate("the reslicing map is not invertible".into()))?;
        let b = left_new.mul_vec(
            &phi.apply(&self.sliced.origin)
                .iter()
                .zip(&target.origin)
                .map(|(a, c)| a - c)
                .collect::<Vec<_>>(),
        );
        // φ⁻¹(x') = x₀ + K M⁻¹ (P(x' − x₀') − b).
        let back_linear = &(&k_old * &minv) * &left_new;
        let shift_in = left_new.mul_vec(&target.origin);
        let shift: Vec<Rational> = shift_in.iter().zip(&b).map(|(a, c)| -(a + c)).collect();
        let back_const: Vec<Rational> = (&k_old * &minv)
            .mul_vec(&shift)
            .into_iter()
            .zip(&self.sliced.origin)
            .map(|(a, o)| a + o)
            .collect();
        let back = AffineMap::new(back_const, back_linear);
        let psi2: Vec<AffineMap> = self
            .psi
            .iter()
            .map(|p| AffineMap::new(p.apply(&back.constant), &p.linear * &back.linear))
            .collect();
        let presentation = GrassmannPresentation {
            torus: self.torus.clone(),
            g: self.g.clone(),
            lambda: lambda2.to_vec(),
            psi: psi2,
            sliced: target,
            lattice: new_lattice,
        };
        Ok(Reslice {
            presentation,
            vertex_map,
        })
    }
}

/// `(KᵀK)⁻¹ Kᵀ` for `K` of full column rank.
fn left_inverse(k: &RatMatrix) -> RatMatrix {
    let kt = k.transpose();
    let gram = &kt * k;
    &gram.inverse().expect("directions are independent") * &kt
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetLabelling {
    pub facet: usize,
    pub ok: bool,
    pub witness: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reslice {
    pub presentation: GrassmannPresentation,
    /// Old vertex index (lattice order) to new vertex index.
    pub vertex_map: Vec<usize>,
}

impl Reslice {
    /// Whether the vertex map carries the old face lattice onto the new one.
    pub fn preserves_faces(&self, old: &FaceLattice) -> bool {
        let new = self.presentation.lattice();
        old.faces.len() == new.faces.len()
            && old.faces.iter().all(|f| {
                let mut image: Vec<usize> = f.vertices.iter().map(|&i| self.vertex_map[i]).collect();
                image.sort_unstable();
                new.faces.iter().any(|h| h.vertices == image && h.set == f.set)
            })
    }
}

/// Failure of the Delzant condition at one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDefect {
    pub set: Vec<usize>,
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCheck {
    pub rational: bool,
    pub delzant: bool,
    pub non_lattice_labels: Vec<usize>,
    pub defects: Vec<FaceDefect>,
}

/// SNF data of `{e_s : s ∈ S}` when the labels are integral.
pub fn face_snf(torus: &TorusData, set: &[usize]) -> Option<(Vec<BigInt>, usize)> {
    if set.is_empty() {
        return Some((Vec::new(), 0));
    }
    let m = torus.label_matrix(set).to_integer()?;
    let f = invariant_factors(&m);
    let rank = f.len();
    Some((f, rank))
}

/// Rationality and the Delzant condition over the given faces.
pub fn check_labels(torus: &TorusData, faces: &[Vec<usize>]) -> LabelCheck {
    let non_lattice_labels: Vec<usize> = (0..torus.label_count())
        .filter(|&s| !is_integral(&torus.labels()[s]))
        .collect();
    let rational = non_lattice_labels.is_empty();
    let mut defects = Vec::new();
    if rational {
        for set in faces {
            let (f, rank) = face_snf(torus, set).expect("labels are integral");
            if rank != set.len() || f.iter().any(|d| !d.is_one()) {
                defects.push(FaceDefect {
                    set: set.clone(),
                    invariant_factors: f,
                    rank,
                });
            }
        }
    }
    LabelCheck {
        rational,
        delzant: rational && defects.is_empty(),
        non_lattice_labels,
        defects,
    }
}

/// A finite abelian group `⊕ ℤ/dᵢ` with `d₁ | d₂ | …`, all `dᵢ > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbifoldGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl OrbifoldGroup {
    pub fn from_factors(factors: &[BigInt]) -> Self {
        Self {
            invariant_factors: factors.iter().filter(|d| !d.is_one() && !d.is_zero()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

/// Torsion of `Λ' / span_ℤ{vectors}` where `Λ'` is the lattice with the
/// given basis and every vector is expressed in that basis.
pub fn orbifold_group_in_lattice(
    lattice_basis: &[Vec<Rational>],
    vectors: &[Vec<Rational>],
) -> Result<OrbifoldGroup, GrassmannError> {
    if vectors.is_empty() {
        return Ok(OrbifoldGroup::default());
    }
    let dim = vectors[0].len();
    let b = RatMatrix::from_columns(dim, lattice_basis);
    let mut coords = Vec::with_capacity(vectors.len());
    for v in vectors {
        let c = b.solve_any(v).ok_or(GrassmannError::NotRational)?;
        if &b.mul_vec(&c) != v || !is_integral(&c) {
            return Err(GrassmannError::NotRational);
        }
        coords.push(c);
    }
    let m = RatMatrix::from_rows(lattice_basis.len(), &coords)
        .to_integer()
        .expect("coordinates are integral");
    Ok(OrbifoldGroup::from_factors(&invariant_factors(&m)))
}

/// Basis of `u(ℤⁿ) ⊂ 𝔨` as rational vectors.
pub fn quotient_lattice_basis(u: &RatMatrix) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = (0..u.cols()).map(|j| u.column(j)).collect();
    let den = cols
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, crate::exactnum::rational::common_denominator(c)));
    let scaled: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|c| c.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let hnf = hermite_normal_form(&IntMatrix::from_rows(u.rows(), &scaled));
    hnf.to_rows()
        .iter()
        .map(|r| to_rationals(r).into_iter().map(|x| x / Rational::from_integer(den.clone())).collect())
        .collect()
}

/// `(Λ_𝔨 ∩ span{u_s}) / span_ℤ{u_s}` for `s ∈ S`, with `u_s = u(e_s)` and
/// `Λ_𝔨 = u(ℤⁿ)`. `NotRational` when some `u_s` is outside `Λ_𝔨`.
pub fn orbifold_groups(torus: &TorusData, pair: &LeviPair, set: &[usize]) -> Result<OrbifoldGroup, GrassmannError> {
    let u = pair.u();
    let basis = quotient_lattice_basis(u);
    let vectors: Vec<Vec<Rational>> = set.iter().map(|&s| u.mul_vec(&torus.labels()[s])).collect();
    orbifold_group_in_lattice(&basis, &vectors)
}

/// Generators of the local model cone `(𝔥⁰ ⊕ χᵀ(𝒞)) ∩ ker ι_gᵀ` at a vertex
/// with active set `S`, one per `s ∈ S`, primitive-scaled.
///
/// `𝔥 = span{e_s}`, the weights `β_s` are the dual basis, `χ` is the
/// coordinate projection onto `𝔥` along the pivot columns of the reduced
/// basis of `𝔥`, and the `𝔥⁰` part is fixed by the slice condition.
pub fn slice_cone(
    torus: &TorusData,
    pair: &LeviPair,
    lattice: &FaceLattice,
    set: &[usize],
) -> Result<Vec<Vec<Rational>>, GrassmannError> {
    let n = torus.dim();
    let m = n - pair.ell();
    if set.len() != m || !check_transversality(torus, pair, lattice, set).unwrap_or(false) {
        return Err(GrassmannError::NotDelzantVertex(set.to_vec()));
    }
    let e = torus.label_matrix(set);
    let echelon = e.rref();
    let r = &echelon.matrix;
    // R_k = Σ_t c_kt e_t; β_s(R_k) = c_ks.
    let et = e.transpose();
    let mut chi_rows = Vec::with_capacity(m);
    for k in 0..m {
        let c = et.solve_any(r.row(k)).expect("rows of the echelon form lie in the span");
        chi_rows.push(c);
    }
    let w = e.nullspace();
    let g = pair.g_rational();
    let gm = RatMatrix::from_rows(n, &g);
    let gw = &gm * &RatMatrix::from_columns(n, &w);
    let gw_inv = gw.inverse().expect("transversality makes g W invertible");
    let wm = RatMatrix::from_columns(n, &w);
    let correction = &wm * &gw_inv;
    let mut gens = Vec::with_capacity(m);
    for s in 0..m {
        let mut rs = vec![Rational::zero(); n];
        for (k, &p) in echelon.pivots.iter().enumerate() {
            rs[p] = chi_rows[k][s].clone();
        }
        let grs = gm.mul_vec(&rs);
        let fix = correction.mul_vec(&grs);
        let ys: Vec<Rational> = rs.iter().zip(&fix).map(|(a, b)| a - b).collect();
        gens.push(primitive_direction(&ys));
    }
    Ok(gens)
}

/// Sorted primitive generators, for comparing cones.
pub fn canonical_cone(generators: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut g: Vec<Vec<Rational>> = generators.iter().map(|v| primitive_direction(v)).collect();
    g.sort();
    g.dedup();
    g
}

/// Tangent cone of the sliced polytope at an ambient vertex, in `t*`.
pub fn ambient_tangent_cone(sliced: &SlicedPolytope, vertex: &[Rational]) -> Result<Vec<Vec<Rational>>, GrassmannError> {
    let chart = sliced
        .to_chart(vertex)
        .ok_or_else(|| PolytopeError::NotAVertex(vertex.to_vec()))?;
    let gens = sliced.polytope.tangent_cone(&chart)?;
    Ok(gens.iter().map(|d| sliced.direction_to_ambient(d)).collect())
}
