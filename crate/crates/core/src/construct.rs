//! The two construction pipelines and the round-trip check.
//!
//! Neither pipeline realizes a manifold: the report carries the dimensions,
//! the Levi pair, per-face freeness data, the momentum image and the radii
//! of the torus fibres of the level set.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::rational::{dot, format_vec, Rational};
use crate::exactnum::RatMatrix;
use crate::fm::{positive_feasible, Positivity};
use crate::grassmann::{
    chart_point, check_labels, face_snf, orbifold_groups, FaceDefect, GrassmannError,
    GrassmannPresentation, OrbifoldGroup,
};
use crate::levi::{slice_polytope, transversal, LeviError, LeviPair, TorusData};
use crate::polytope::{LabelledPolytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("polytope is not simple: vertex {} has active set {active:?}", format_vec(.vertex))]
    NotSimple { vertex: Vec<Rational>, active: Vec<usize> },
    #[error("label {0} does not cut out a facet of codimension one")]
    DegenerateFacet(usize),
    #[error("epsilon does not match the polytope's slice")]
    EpsilonMismatch,
    #[error("L has {found} columns but the polytope has {expected} labels")]
    LabelCount { expected: usize, found: usize },
    #[error("column {0} of L differs from label {0}")]
    LabelMismatch(usize),
    #[error("g contains no positive vector although the polytope is compact; certificate {}", format_vec(.0))]
    InfeasiblePositivity(Vec<Rational>),
    #[error("face {0:?}: labels are dependent or meet g")]
    NotTransversal(Vec<usize>),
    #[error("Psi(x) e_s does not vanish on facet {facet}; witness {}", format_vec(.witness))]
    Labelling { facet: usize, witness: Vec<Rational> },
    #[error("labels are not integral: {0:?}")]
    NotDelzant(Vec<usize>),
    #[error("chart fails at vertex {}", format_vec(.0))]
    NotReeb(Vec<Rational>),
    #[error(transparent)]
    Levi(#[from] LeviError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    LabelledPolytope,
    Grassmann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Every face is free: a manifold.
    Smooth,
    /// Rational but some face has a finite stabilizer: an orbifold.
    OrbifoldOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceReport {
    pub set: Vec<usize>,
    pub transversal: bool,
    /// Invariant factors of `{e_s : s ∈ S}` in the lattice of `t`.
    pub label_factors: Vec<BigInt>,
    pub label_rank: usize,
    /// `(Λ_𝔨 ∩ span{u_s}) / span_ℤ{u_s}` for `u = t → t/g`.
    pub orbifold: OrbifoldGroup,
    /// The torus acting on the level set acts freely over this face. In the
    /// polytope pipeline that torus is `exp g` and freeness is triviality of
    /// `orbifold`; in the grassmannian pipeline it is the torus of `ℂ^𝒮`
    /// mapping onto `t`, and freeness is the Delzant condition on `e_S`.
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentumVertex {
    /// Point of `t*`.
    pub point: Vec<Rational>,
    pub active: Vec<usize>,
    /// `⟨x, e_s⟩` for every label.
    pub label_values: Vec<Rational>,
}

/// Over `x`, the level set is a product of circles of radius `√(2 l_s(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    pub point: Vec<Rational>,
    pub radii_squared: Vec<Rational>,
}

/// Cases where uniqueness is known: codimension one, and products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Uniqueness {
    pub codimension_one: bool,
    pub product: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub pipeline: Pipeline,
    pub facet_count: usize,
    pub m: usize,
    pub ell: usize,
    pub dim_n: usize,
    pub dim_m: usize,
    pub g: Vec<Vec<BigInt>>,
    pub lambda: Vec<Rational>,
    pub positivity: Option<Vec<Rational>>,
    pub status: Status,
    pub faces: Vec<FaceReport>,
    pub vertices: Vec<MomentumVertex>,
    /// One entry per vertex, then the barycenter of the vertices.
    pub level_sets: Vec<LevelSet>,
    pub uniqueness: Uniqueness,
}

impl ReductionReport {
    pub fn face(&self, set: &[usize]) -> Option<&FaceReport> {
        self.faces.iter().find(|f| f.set == set)
    }

    pub fn all_free(&self) -> bool {
        self.faces.iter().all(|f| f.free)
    }

    /// Dimension identities: `ℓ + m = dim t`, `dim N = 2m + ℓ`,
    /// `dim M = 2(m + ℓ)`.
    pub fn dimensions_consistent(&self) -> bool {
        self.dim_n == 2 * self.m + self.ell
            && self.dim_m == 2 * (self.m + self.ell)
            && self.g.len() == self.ell
            && self.lambda.len() == self.ell
    }
}

fn level_sets(torus: &TorusData, points: &[Vec<Rational>]) -> Vec<LevelSet> {
    let mut all = points.to_vec();
    if !points.is_empty() {
        let k = Rational::from_integer(BigInt::from(points.len()));
        let n = points[0].len();
        let bary: Vec<Rational> = (0..n)
            .map(|j| points.iter().map(|p| p[j].clone()).sum::<Rational>() / &k)
            .collect();
        all.push(bary);
    }
    let two = Rational::from_integer(BigInt::from(2));
    all.into_iter()
        .map(|x| LevelSet {
            radii_squared: torus.labels().iter().map(|e| &two * dot(e, &x)).collect(),
            point: x,
        })
        .collect()
}

/// Coordinates of `t` split into blocks such that every label and every
/// basis vector of `g` lives in one block; a product when there are at
/// least two blocks, each carrying part of `g`.
fn is_product(torus: &TorusData, g: &[Vec<Rational>]) -> bool {
    let n = torus.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for v in torus.labels().iter().chain(g) {
        let support: Vec<usize> = (0..n).filter(|&j| !v[j].is_zero()).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|j| find(&mut parent, j)).collect();
    let per_g: Vec<usize> = g
        .iter()
        .map(|v| {
            let j = v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector");
            roots[j]
        })
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() >= 2 && roots.iter().all(|r| per_g.contains(r))
}

fn momentum_vertices(torus: &TorusData, points: Vec<(Vec<Rational>, Vec<usize>)>) -> Vec<MomentumVertex> {
    let mut v: Vec<MomentumVertex> = points
        .into_iter()
        .map(|(point, active)| MomentumVertex {
            label_values: torus.labels().iter().map(|e| dot(e, &point)).collect(),
            point,
            active,
        })
        .collect();
    v.sort_by(|a, b| a.point.cmp(&b.point));
    v
}

/// Contact reduction data for a simple compact labelled polytope, with
/// `t = ℚ^𝒮`, `e_s` the standard basis and `L(e_s) = L_s`.
pub fn from_labelled_polytope(
    poly: &LabelledPolytope,
    l_map: &RatMatrix,
    epsilon: &[Rational],
) -> Result<ReductionReport, ConstructError> {
    if epsilon != poly.epsilon() || l_map.rows() != poly.slice().h_dim() {
        return Err(ConstructError::EpsilonMismatch);
    }
    if l_map.cols() != poly.facet_count() {
        return Err(ConstructError::LabelCount {
            expected: poly.facet_count(),
            found: l_map.cols(),
        });
    }
    if let Some(s) = (0..poly.facet_count()).find(|&s| l_map.column(s) != poly.labels()[s]) {
        return Err(ConstructError::LabelMismatch(s));
    }
    let lattice = poly.face_lattice()?;
    if let Some(i) = lattice.non_simple_witness {
        let v = &lattice.vertices[i];
        return Err(ConstructError::NotSimple {
            vertex: v.point.clone(),
            active: v.active.clone(),
        });
    }
    if let Some(&s) = lattice.degenerate_facets.first() {
        return Err(ConstructError::DegenerateFacet(s));
    }
    let pair = LeviPair::from_map(l_map.clone(), epsilon.to_vec())?;
    let g = pair.g_rational();
    let positivity = match positive_feasible(&g) {
        Positivity::Witness(w) => w,
        Positivity::Certificate(y) => return Err(ConstructError::InfeasiblePositivity(y)),
    };
    let torus = TorusData::standard(poly.facet_count());
    let m = poly.dim();
    let ell = pair.ell();
    assert_eq!(ell + m, poly.facet_count(), "dim g + m = |S|");

    let mut faces = Vec::with_capacity(lattice.faces.len());
    for f in &lattice.faces {
        let tr = transversal(&torus, &g, &f.set);
        if !tr {
            return Err(ConstructError::NotTransversal(f.set.clone()));
        }
        let orbifold = orbifold_groups(&torus, &pair, &f.set)?;
        let (factors, rank) = face_snf(&torus, &f.set).expect("standard labels are integral");
        faces.push(FaceReport {
            set: f.set.clone(),
            transversal: tr,
            label_factors: factors,
            label_rank: rank,
            free: orbifold.is_trivial(),
            orbifold,
        });
    }
    let sliced = slice_polytope(&torus, &pair)?;
    let vertices = momentum_vertices(&torus, sliced.ambient_vertices()?);
    let points: Vec<Vec<Rational>> = vertices.iter().map(|v| v.point.clone()).collect();
    let status = if faces.iter().all(|f| f.free) {
        Status::Smooth
    } else {
        Status::OrbifoldOnly
    };
    Ok(ReductionReport {
        pipeline: Pipeline::LabelledPolytope,
        facet_count: poly.facet_count(),
        m,
        ell,
        dim_n: poly.facet_count() + m,
        dim_m: 2 * poly.facet_count(),
        g: pair.g().to_vec(),
        lambda: pair.lambda().to_vec(),
        positivity: Some(positivity),
        status,
        faces,
        level_sets: level_sets(&torus, &points),
        vertices,
        uniqueness: Uniqueness {
            codimension_one: ell == 1,
            product: is_product(&torus, &g),
        },
    })
}

/// The toric contact manifold (or orbifold) presented by Delzant Reeb-type
/// grassmannian data.
pub fn from_grassmann_data(p: &GrassmannPresentation) -> Result<ReductionReport, ConstructError> {
    p.check_invariants()?;
    if let Some(f) = p.verify_labelling().into_iter().find(|f| !f.ok) {
        return Err(ConstructError::Labelling {
            facet: f.facet,
            witness: f.witness.unwrap_or_default(),
        });
    }
    let lattice = p.lattice();
    if let Some(i) = lattice.non_simple_witness {
        let v = &lattice.vertices[i];
        return Err(ConstructError::NotSimple {
            vertex: p.sliced().to_ambient(&v.point),
            active: v.active.clone(),
        });
    }
    if let Some(&s) = lattice.degenerate_facets.first() {
        return Err(ConstructError::DegenerateFacet(s));
    }
    let vertices_t = p.vertices();
    for x in &vertices_t {
        let plane = p.plane_at(x).map_err(|_| ConstructError::NotReeb(x.clone()))?;
        match chart_point(p.g(), &plane, p.lambda()) {
            Ok(y) if &y == x => {}
            _ => return Err(ConstructError::NotReeb(x.clone())),
        }
    }
    let torus = p.torus();
    let n = torus.dim();
    let pair = LeviPair::from_subspace(p.g(), p.lambda(), n)?;
    let sets: Vec<Vec<usize>> = lattice.faces.iter().map(|f| f.set.clone()).collect();
    let labels = check_labels(torus, &sets);
    if !labels.rational {
        return Err(ConstructError::NotDelzant(labels.non_lattice_labels));
    }
    let mut faces = Vec::with_capacity(sets.len());
    for set in &sets {
        let tr = transversal(torus, p.g(), set);
        let (factors, rank) = face_snf(torus, set).expect("labels are integral");
        let free = !labels.defects.iter().any(|d: &FaceDefect| &d.set == set);
        faces.push(FaceReport {
            set: set.clone(),
            transversal: tr,
            label_factors: factors,
            label_rank: rank,
            orbifold: orbifold_groups(torus, &pair, set)?,
            free,
        });
    }
    let ell = p.ell();
    let m = n - ell;
    let points: Vec<(Vec<Rational>, Vec<usize>)> = vertices_t
        .iter()
        .cloned()
        .zip(lattice.vertices.iter().map(|v| v.active.clone()))
        .collect();
    let vertices = momentum_vertices(torus, points);
    let pts: Vec<Vec<Rational>> = vertices.iter().map(|v| v.point.clone()).collect();
    Ok(ReductionReport {
        pipeline: Pipeline::Grassmann,
        facet_count: torus.label_count(),
        m,
        ell,
        dim_n: 2 * m + ell,
        dim_m: 2 * (m + ell),
        g: pair.g().to_vec(),
        lambda: pair.lambda().to_vec(),
        positivity: None,
        status: if labels.delzant {
            Status::Smooth
        } else {
            Status::OrbifoldOnly
        },
        faces,
        level_sets: level_sets(torus, &pts),
        vertices,
        uniqueness: Uniqueness {
            codimension_one: ell == 1,
            product: is_product(torus, p.g()),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub ok: bool,
    /// Labels whose values disagree at some matched vertex.
    pub mismatched_facets: Vec<usize>,
    /// Human-readable reasons, empty when `ok`.
    pub notes: Vec<String>,
}

/// Compares the report's momentum image with the input polytope. Vertices
/// are matched by active set and must carry identical label values
/// `L_s(v) = ⟨x, e_s⟩`; face lattices must have the same sets.
pub fn roundtrip_check(report: &ReductionReport, input: &LabelledPolytope) -> RoundTrip {
    let mut notes = Vec::new();
    let mut mismatched = Vec::new();
    let lattice = match input.face_lattice() {
        Ok(l) => l,
        Err(e) => {
            return RoundTrip {
                ok: false,
                mismatched_facets: Vec::new(),
                notes: vec![format!("input polytope: {e}")],
            }
        }
    };
    if input.facet_count() != report.facet_count {
        notes.push(format!(
            "input has {} labels, report has {}",
            input.facet_count(),
            report.facet_count
        ));
    }
    if lattice.vertices.len() != report.vertices.len() {
        notes.push(format!(
            "input has {} vertices, report has {}",
            lattice.vertices.len(),
            report.vertices.len()
        ));
    }
    for v in &lattice.vertices {
        let Some(r) = report.vertices.iter().find(|r| r.active == v.active) else {
            notes.push(format!("no report vertex with active set {:?}", v.active));
            continue;
        };
        for s in 0..input.facet_count().min(r.label_values.len()) {
            if input.label_value(s, &v.point) != r.label_values[s] {
                if !mismatched.contains(&s) {
                    mismatched.push(s);
                }
                notes.push(format!(
                    "facet {s} at vertex {:?}: input {} vs report {}",
                    v.active,
                    input.label_value(s, &v.point),
                    r.label_values[s]
                ));
            }
        }
    }
    let input_sets: Vec<&Vec<usize>> = lattice.faces.iter().map(|f| &f.set).collect();
    let report_sets: Vec<&Vec<usize>> = report.faces.iter().map(|f| &f.set).collect();
    if input_sets != report_sets {
        notes.push("face lattices differ".into());
    }
    mismatched.sort_unstable();
    RoundTrip {
        ok: notes.is_empty(),
        mismatched_facets: mismatched,
        notes,
    }
}

/// The identity `L` on `ℚ^{m+1}` with `ε = (1, …, 1)` and the standard simplex.
pub fn sphere_model(m: usize) -> (LabelledPolytope, RatMatrix, Vec<Rational>) {
    let eps = vec![Rational::one(); m + 1];
    let l = RatMatrix::identity(m + 1);
    let labels = (0..m + 1).map(|j| l.column(j)).collect();
    let poly = LabelledPolytope::new(eps.clone(), labels).expect("simplex data is well formed");
    (poly, l, eps)
}

/// The unit square with labels `x, y, 1 − x, 1 − y` on `ε = (1, 0, 0)`.
pub fn square_model() -> (LabelledPolytope, RatMatrix, Vec<Rational>) {
    let l = RatMatrix::from_i64(3, 4, &[0, 0, 1, 1, 1, 0, -1, 0, 0, 1, 0, -1]);
    let eps = vec![Rational::one(), Rational::zero(), Rational::zero()];
    let labels = (0..4).map(|j| l.column(j)).collect();
    let poly = LabelledPolytope::new(eps.clone(), labels).expect("square data is well formed");
    (poly, l, eps)
}

/// Checks the report's radii: nonnegative at every listed point, zero
/// exactly on the labels active there.
pub fn radii_consistent(report: &ReductionReport) -> bool {
    let nv = report.vertices.len();
    report.level_sets.iter().enumerate().all(|(i, ls)| {
        ls.radii_squared.iter().enumerate().all(|(s, r)| {
            if r.is_negative() {
                return false;
            }
            match report.vertices.get(i).filter(|_| i < nv) {
                Some(v) => r.is_zero() == v.active.contains(&s),
                None => r.is_positive(),
            }
        })
    })
}
