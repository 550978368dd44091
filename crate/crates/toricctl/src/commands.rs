//! One function per command. Each returns an [`Outcome`] for analyses that
//! ran, and a [`CliError`] when the file cannot be analysed at all.

use clap::ValueEnum;
use serde_json::{Map, Value};

use toric_core::construct::{
    from_grassmann_data, from_labelled_polytope, roundtrip_check, ConstructError, FaceReport, Pipeline,
    ReductionReport, Status,
};
use toric_core::exactnum::{MultiPoly, RatMatrix, Rational};
use toric_core::grassmann::{
    check_labels, face_snf, orbifold_group_in_lattice, orbifold_groups, AffineMap, GrassmannError,
    GrassmannPresentation, OrbifoldGroup,
};
use toric_core::levi::{LeviError, LeviPair, TorusData};
use toric_core::pencil::{classify_lcontact, is_fat, FatWitness, Fatness, SkewPencil, DEFAULT_SAMPLES};
use toric_core::polytope::{FaceLattice, LabelledPolytope, PolytopeError};

use crate::problem::{rational_value, vector_value, ProblemFile};
use crate::{CliError, Flags, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Vertices,
    Faces,
    Levi,
    Delzant,
    Orbifold,
    Pencil,
    Fat,
    Reslice,
    Construct,
    Roundtrip,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Vertices,
        Command::Faces,
        Command::Levi,
        Command::Delzant,
        Command::Orbifold,
        Command::Pencil,
        Command::Fat,
        Command::Reslice,
        Command::Construct,
        Command::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Vertices => "vertices",
            Command::Faces => "faces",
            Command::Levi => "levi",
            Command::Delzant => "delzant",
            Command::Orbifold => "orbifold",
            Command::Pencil => "pencil",
            Command::Fat => "fat",
            Command::Reslice => "reslice",
            Command::Construct => "construct",
            Command::Roundtrip => "roundtrip",
        }
    }
}

pub fn dispatch(command: Command, file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    match command {
        Command::Vertices => vertices(file, flags),
        Command::Faces => faces(file, flags),
        Command::Levi => levi(file, flags),
        Command::Delzant => delzant(file, flags),
        Command::Orbifold => orbifold(file, flags),
        Command::Pencil => pencil(file),
        Command::Fat => fat(file, flags),
        Command::Reslice => reslice(file, flags),
        Command::Construct => construct(file, flags),
        Command::Roundtrip => roundtrip(file, flags),
    }
}

type Obj = Map<String, Value>;

fn obj(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// Integers as JSON numbers when they fit, strings otherwise.
fn int_value(x: &impl ToString) -> Value {
    let s = x.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn ints_value<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn rows_value<T: ToString>(rows: &[Vec<T>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn missing(what: &str) -> CliError {
    CliError::new("MissingData", format!("this command needs {what}"))
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::new("Validation", e.to_string())
}

fn polytope_error(e: PolytopeError) -> CliError {
    let err = CliError::new("Polytope", e.to_string());
    match e {
        PolytopeError::Unbounded { direction } => err.with("direction", vector_value(&direction)),
        PolytopeError::TooManyFacets { count, max } => err
            .with("count", Value::from(count))
            .with("max", Value::from(max)),
        _ => err,
    }
}

fn levi_error(e: LeviError) -> CliError {
    match e {
        LeviError::Polytope(p) => polytope_error(p),
        other => validation(other),
    }
}

fn grassmann_error(e: GrassmannError) -> CliError {
    match e {
        GrassmannError::Levi(l) => levi_error(l),
        GrassmannError::Polytope(p) => polytope_error(p),
        other => validation(other),
    }
}

fn check_count(count: usize, flags: &Flags) -> Result<(), CliError> {
    if count > flags.max_facets {
        return Err(polytope_error(PolytopeError::TooManyFacets {
            count,
            max: flags.max_facets,
        }));
    }
    Ok(())
}

/// The labelled polytope given by the columns of `L_map`, with `L` itself.
fn polytope_of(file: &ProblemFile, flags: &Flags) -> Result<Option<(LabelledPolytope, RatMatrix)>, CliError> {
    let (Some(rows), Some(eps)) = (&file.l_map, &file.epsilon) else {
        return Ok(None);
    };
    let cols = rows.first().map_or(0, Vec::len);
    check_count(cols, flags)?;
    let l = RatMatrix::from_rows(cols, rows);
    let labels = (0..cols).map(|j| l.column(j)).collect();
    let poly = LabelledPolytope::new(eps.clone(), labels).map_err(polytope_error)?;
    Ok(Some((poly, l)))
}

fn torus_of(file: &ProblemFile, flags: &Flags) -> Result<Option<TorusData>, CliError> {
    let Some(t) = &file.torus else {
        return Ok(None);
    };
    check_count(t.labels.len(), flags)?;
    TorusData::new(t.dim, t.labels.clone()).map(Some).map_err(levi_error)
}

fn presentation_of(file: &ProblemFile, flags: &Flags) -> Result<Option<GrassmannPresentation>, CliError> {
    let Some(p) = &file.presentation else {
        return Ok(None);
    };
    let torus = torus_of(file, flags)?.ok_or_else(|| missing("a torus"))?;
    let n = torus.dim();
    let pres = if p.psi.is_empty() && p.g.len() == 1 {
        GrassmannPresentation::codimension_one(torus, p.g[0].clone(), p.lambda[0].clone())
    } else {
        let psi = p
            .psi
            .iter()
            .map(|c| AffineMap::new(c.constant.clone(), RatMatrix::from_rows(n, &c.linear)))
            .collect();
        GrassmannPresentation::new(torus, p.g.clone(), p.lambda.clone(), psi)
    };
    pres.map(Some).map_err(grassmann_error)
}

fn vertex_list(points: &[(Vec<Rational>, Vec<usize>)]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|(p, a)| obj(vec![("point", vector_value(p)), ("active", Value::from(a.clone()))]))
            .collect(),
    )
}

fn vertices(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let (space, points) = if let Some((poly, _)) = polytope_of(file, flags)? {
        let vs = poly.enumerate_vertices_with_limit(flags.max_facets).map_err(polytope_error)?;
        ("h*", vs.into_iter().map(|v| (v.point, v.active)).collect::<Vec<_>>())
    } else if let Some(p) = presentation_of(file, flags)? {
        let mut vs = p.sliced().ambient_vertices().map_err(polytope_error)?;
        vs.sort();
        ("t*", vs)
    } else {
        return Err(missing("L_map and epsilon, or a presentation"));
    };
    Ok(Outcome::ok(obj(vec![
        ("space", Value::String(space.into())),
        ("count", Value::from(points.len())),
        ("vertices", vertex_list(&points)),
    ])))
}

/// The face lattice from `L_map`, or from the presentation's slice.
fn lattice_of(file: &ProblemFile, flags: &Flags) -> Result<Option<FaceLattice>, CliError> {
    if let Some((poly, _)) = polytope_of(file, flags)? {
        return poly.face_lattice().map(Some).map_err(polytope_error);
    }
    Ok(presentation_of(file, flags)?.map(|p| p.lattice().clone()))
}

fn faces(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let lattice = lattice_of(file, flags)?.ok_or_else(|| missing("L_map and epsilon, or a presentation"))?;
    let faces: Vec<Value> = lattice
        .faces
        .iter()
        .map(|f| {
            obj(vec![
                ("set", Value::from(f.set.clone())),
                ("dim", Value::from(f.dim)),
                ("vertices", Value::from(f.vertices.clone())),
            ])
        })
        .collect();
    let verts: Vec<(Vec<Rational>, Vec<usize>)> = lattice
        .vertices
        .iter()
        .map(|v| (v.point.clone(), v.active.clone()))
        .collect();
    Ok(Outcome::ok(obj(vec![
        ("m", Value::from(lattice.m)),
        ("facet_count", Value::from(lattice.facet_count)),
        ("simple", Value::Bool(lattice.simple)),
        ("degenerate_facets", Value::from(lattice.degenerate_facets.clone())),
        ("vertices", vertex_list(&verts)),
        ("faces", Value::Array(faces)),
    ])))
}

fn pair_of(file: &ProblemFile, flags: &Flags) -> Result<Option<(TorusData, LeviPair)>, CliError> {
    if let Some(p) = presentation_of(file, flags)? {
        let pair = LeviPair::from_subspace(p.g(), p.lambda(), p.torus().dim()).map_err(levi_error)?;
        return Ok(Some((p.torus().clone(), pair)));
    }
    if let (Some(rows), Some(eps)) = (&file.l_map, &file.epsilon) {
        let cols = rows.first().map_or(0, Vec::len);
        check_count(cols, flags)?;
        let l = RatMatrix::from_rows(cols, rows);
        let pair = LeviPair::from_map(l, eps.clone()).map_err(levi_error)?;
        let torus = match torus_of(file, flags)? {
            Some(t) => t,
            None => TorusData::standard(cols),
        };
        return Ok(Some((torus, pair)));
    }
    Ok(None)
}

fn levi(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let (_, pair) = pair_of(file, flags)?.ok_or_else(|| missing("L_map and epsilon, or a presentation"))?;
    Ok(Outcome::ok(obj(vec![
        ("g", rows_value(pair.g())),
        ("lambda", vector_value(pair.lambda())),
        ("ell", Value::from(pair.ell())),
        ("m", Value::from(pair.m())),
        ("torus_dim", Value::from(pair.torus_dim())),
        ("u", rows_value(&pair.u().to_rows())),
        ("commutes", Value::Bool(pair.commutes())),
    ])))
}

/// Labels and face sets for the lattice checks: explicit `faces` first,
/// then the polytope's face lattice.
fn labelled_faces(file: &ProblemFile, flags: &Flags) -> Result<(TorusData, Vec<Vec<usize>>), CliError> {
    if let Some(sets) = &file.faces {
        let torus = torus_of(file, flags)?.ok_or_else(|| missing("a torus"))?;
        return Ok((torus, sets.clone()));
    }
    let lattice = lattice_of(file, flags)?.ok_or_else(|| missing("faces, L_map and epsilon, or a presentation"))?;
    let torus = match torus_of(file, flags)? {
        Some(t) => t,
        None => TorusData::standard(lattice.facet_count),
    };
    if torus.label_count() != lattice.facet_count {
        return Err(validation(format!(
            "torus has {} labels but the polytope has {} facets",
            torus.label_count(),
            lattice.facet_count
        )));
    }
    Ok((torus, lattice.faces.iter().map(|f| f.set.clone()).collect()))
}

fn delzant(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let (torus, sets) = labelled_faces(file, flags)?;
    let check = check_labels(&torus, &sets);
    let faces: Vec<Value> = sets
        .iter()
        .map(|s| match face_snf(&torus, s) {
            Some((f, rank)) => obj(vec![
                ("set", Value::from(s.clone())),
                ("snf", ints_value(&f)),
                ("rank", Value::from(rank)),
                ("delzant", Value::Bool(f.iter().all(|x| x.to_string() == "1"))),
            ]),
            None => obj(vec![
                ("set", Value::from(s.clone())),
                ("snf", Value::Null),
                ("rank", Value::Null),
                ("delzant", Value::Bool(false)),
            ]),
        })
        .collect();
    let mut report = Obj::new();
    report.insert("rational".into(), Value::Bool(check.rational));
    report.insert("delzant".into(), Value::Bool(check.delzant));
    report.insert("non_lattice_labels".into(), Value::from(check.non_lattice_labels.clone()));
    report.insert("faces".into(), Value::Array(faces));
    if !check.rational {
        report.insert(
            "witness".into(),
            obj(vec![("non_lattice_labels", Value::from(check.non_lattice_labels.clone()))]),
        );
        let msg = format!("labels {:?} are not in the lattice", check.non_lattice_labels);
        return Ok(Outcome::failed(Value::Object(report), format!("NotDelzant: {msg}")));
    }
    if let Some(d) = check.defects.first() {
        report.insert(
            "witness".into(),
            obj(vec![
                ("face", Value::from(d.set.clone())),
                ("snf", ints_value(&d.invariant_factors)),
                ("rank", Value::from(d.rank)),
            ]),
        );
        let factors: Vec<String> = d.invariant_factors.iter().map(ToString::to_string).collect();
        let msg = format!("face {:?} has invariant factors [{}]", d.set, factors.join(", "));
        return Ok(Outcome::failed(Value::Object(report), format!("NotDelzant: {msg}")));
    }
    Ok(Outcome::ok(Value::Object(report)))
}

fn group_value(g: &OrbifoldGroup) -> Value {
    ints_value(&g.invariant_factors)
}

fn orbifold(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let pair = pair_of(file, flags)?;
    let (torus, sets) = match (&pair, &file.faces) {
        (Some((t, _)), Some(sets)) => (t.clone(), sets.clone()),
        _ => labelled_faces(file, flags)?,
    };
    let mut faces = Vec::with_capacity(sets.len());
    for s in &sets {
        // without g the quotient lattice is Zⁿ itself
        let group = match &pair {
            Some((t, p)) => orbifold_groups(t, p, s),
            None => {
                let n = torus.dim();
                let basis = RatMatrix::identity(n).to_rows();
                let vectors: Vec<Vec<Rational>> = s.iter().map(|&i| torus.labels()[i].clone()).collect();
                orbifold_group_in_lattice(&basis, &vectors)
            }
        };
        match group {
            Ok(g) => faces.push(obj(vec![
                ("set", Value::from(s.clone())),
                ("group", group_value(&g)),
                ("order", int_value(&g.order())),
                ("trivial", Value::Bool(g.is_trivial())),
            ])),
            Err(GrassmannError::NotRational) => {
                let report = obj(vec![
                    ("rational", Value::Bool(false)),
                    ("witness", obj(vec![("face", Value::from(s.clone()))])),
                ]);
                return Ok(Outcome::failed(
                    report,
                    format!("NotRational: a label on face {s:?} is outside the quotient lattice"),
                ));
            }
            Err(e) => return Err(grassmann_error(e)),
        }
    }
    let smooth = faces.iter().all(|f| f["trivial"] == Value::Bool(true));
    Ok(Outcome::ok(obj(vec![
        ("rational", Value::Bool(true)),
        ("quotient", Value::String(if pair.is_some() { "u(Z^n)" } else { "Z^n" }.into())),
        ("status", Value::String(if smooth { "smooth" } else { "orbifold" }.into())),
        ("faces", Value::Array(faces)),
    ])))
}

fn pencil_of(file: &ProblemFile) -> Result<SkewPencil, CliError> {
    let p = file.pencil.as_ref().ok_or_else(|| missing("a pencil"))?;
    let mats = p
        .matrices
        .iter()
        .map(|w| RatMatrix::from_rows(2 * p.m, w))
        .collect();
    SkewPencil::new(p.ell, p.m, mats).map_err(validation)
}

fn pencil(file: &ProblemFile) -> Result<Outcome, CliError> {
    let p = pencil_of(file)?;
    let d = p.degeneracy_polynomial();
    let lcontact = match classify_lcontact(&d) {
        Some(c) => obj(vec![
            ("form", Value::String(MultiPoly::linear(&c.form).to_string())),
            ("coefficients", vector_value(&c.form)),
            ("multiplicity", Value::from(c.multiplicity)),
            ("scale", rational_value(&c.scale)),
        ]),
        None => Value::Null,
    };
    Ok(Outcome::ok(obj(vec![
        ("ell", Value::from(p.ell())),
        ("m", Value::from(p.m())),
        ("degeneracy_polynomial", Value::String(d.to_string())),
        ("lcontact", lcontact),
    ])))
}

fn witness_value(w: &FatWitness) -> Value {
    match w {
        FatWitness::Point(p) => obj(vec![("point", vector_value(p))]),
        FatWitness::Segment { from, to } => obj(vec![(
            "segment",
            obj(vec![("from", vector_value(from)), ("to", vector_value(to))]),
        )]),
    }
}

fn fat(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let p = pencil_of(file)?;
    let samples = flags.samples.or(file.options.samples).unwrap_or(DEFAULT_SAMPLES);
    let poly = p.degeneracy_polynomial();
    let exact = p.ell() <= 2;
    let report = match is_fat(&p, samples) {
        Fatness::Yes { evidence } => obj(vec![
            ("fat", Value::String("yes".into())),
            ("evidence", Value::String(evidence)),
        ]),
        Fatness::No { witness } => obj(vec![
            ("fat", Value::String("no".into())),
            ("witness", witness_value(&witness)),
        ]),
        Fatness::Unknown { samples } => obj(vec![
            ("fat", Value::String("unknown".into())),
            ("samples", Value::from(samples)),
        ]),
    };
    let Value::Object(mut m) = report else { unreachable!() };
    m.insert("exact".into(), Value::Bool(exact));
    m.insert("degeneracy_polynomial".into(), Value::String(poly.to_string()));
    Ok(Outcome::ok(Value::Object(m)))
}

fn reslice(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let p = presentation_of(file, flags)?.ok_or_else(|| missing("a presentation"))?;
    let lambda = flags
        .lambda
        .clone()
        .or_else(|| file.options.lambda.clone())
        .ok_or_else(|| missing("--lambda or options.lambda"))?;
    match p.reslice(&lambda) {
        Ok(r) => {
            let preserved = r.preserves_faces(p.lattice());
            let mut verts = r.presentation.sliced().ambient_vertices().map_err(polytope_error)?;
            verts.sort();
            let report = obj(vec![
                ("lambda", vector_value(&lambda)),
                ("vertex_map", Value::from(r.vertex_map.clone())),
                ("vertices", vertex_list(&verts)),
                ("faces_preserved", Value::Bool(preserved)),
            ]);
            if preserved {
                Ok(Outcome::ok(report))
            } else {
                Ok(Outcome::failed(report, "Degenerate: the face lattice changed"))
            }
        }
        Err(GrassmannError::Degenerate(reason)) => {
            let report = obj(vec![
                ("lambda", vector_value(&lambda)),
                ("faces_preserved", Value::Bool(false)),
                ("witness", obj(vec![("reason", Value::String(reason.clone()))])),
            ]);
            Ok(Outcome::failed(report, format!("Degenerate: {reason}")))
        }
        Err(e) => Err(grassmann_error(e)),
    }
}

fn face_value(f: &FaceReport) -> Value {
    obj(vec![
        ("set", Value::from(f.set.clone())),
        ("transversal", Value::Bool(f.transversal)),
        ("label_snf", ints_value(&f.label_factors)),
        ("label_rank", Value::from(f.label_rank)),
        ("orbifold", group_value(&f.orbifold)),
        ("free", Value::Bool(f.free)),
    ])
}

pub fn report_value(r: &ReductionReport) -> Value {
    let vertices = r
        .vertices
        .iter()
        .map(|v| {
            obj(vec![
                ("point", vector_value(&v.point)),
                ("active", Value::from(v.active.clone())),
                ("label_values", vector_value(&v.label_values)),
            ])
        })
        .collect();
    let level_sets = r
        .level_sets
        .iter()
        .map(|l| {
            obj(vec![
                ("point", vector_value(&l.point)),
                ("radii_squared", vector_value(&l.radii_squared)),
            ])
        })
        .collect();
    obj(vec![
        (
            "pipeline",
            Value::String(
                match r.pipeline {
                    Pipeline::LabelledPolytope => "labelled_polytope",
                    Pipeline::Grassmann => "grassmann",
                }
                .into(),
            ),
        ),
        (
            "status",
            Value::String(
                match r.status {
                    Status::Smooth => "smooth",
                    Status::OrbifoldOnly => "orbifold_only",
                }
                .into(),
            ),
        ),
        ("facet_count", Value::from(r.facet_count)),
        ("m", Value::from(r.m)),
        ("ell", Value::from(r.ell)),
        ("dim_n", Value::from(r.dim_n)),
        ("dim_m", Value::from(r.dim_m)),
        ("g", rows_value(&r.g)),
        ("lambda", vector_value(&r.lambda)),
        ("positivity", r.positivity.as_deref().map_or(Value::Null, vector_value)),
        ("faces", Value::Array(r.faces.iter().map(face_value).collect())),
        ("vertices", Value::Array(vertices)),
        ("level_sets", Value::Array(level_sets)),
        (
            "uniqueness",
            obj(vec![
                ("codimension_one", Value::Bool(r.uniqueness.codimension_one)),
                ("product", Value::Bool(r.uniqueness.product)),
            ]),
        ),
    ])
}

/// Property failures become exit 2 with a witness; malformed data is an
/// input error.
fn construct_failure(e: ConstructError) -> Result<Outcome, CliError> {
    let msg = e.to_string();
    let (kind, witness) = match e {
        ConstructError::NotSimple { vertex, active } => (
            "NotSimple",
            obj(vec![("vertex", vector_value(&vertex)), ("active", Value::from(active))]),
        ),
        ConstructError::DegenerateFacet(s) => ("DegenerateFacet", obj(vec![("facet", Value::from(s))])),
        ConstructError::InfeasiblePositivity(y) => ("InfeasiblePositivity", obj(vec![("certificate", vector_value(&y))])),
        ConstructError::NotTransversal(s) => ("NotTransversal", obj(vec![("face", Value::from(s))])),
        ConstructError::Labelling { facet, witness } => (
            "Labelling",
            obj(vec![("facet", Value::from(facet)), ("point", vector_value(&witness))]),
        ),
        ConstructError::NotDelzant(labels) => ("NotDelzant", obj(vec![("non_lattice_labels", Value::from(labels))])),
        ConstructError::NotReeb(x) => ("NotReeb", obj(vec![("vertex", vector_value(&x))])),
        ConstructError::Grassmann(GrassmannError::Invariant { vertex, what }) => (
            "Invariant",
            obj(vec![("vertex", vector_value(&vertex)), ("what", Value::String(what))]),
        ),
        ConstructError::Grassmann(GrassmannError::NotRational) => ("NotRational", obj(vec![])),
        ConstructError::Grassmann(GrassmannError::NotDelzantVertex(s)) => {
            ("NotDelzant", obj(vec![("face", Value::from(s))]))
        }
        ConstructError::Grassmann(GrassmannError::Degenerate(reason)) => {
            ("Degenerate", obj(vec![("reason", Value::String(reason))]))
        }
        ConstructError::Grassmann(g) => return Err(grassmann_error(g)),
        ConstructError::Levi(l) => return Err(levi_error(l)),
        ConstructError::Polytope(p) => return Err(polytope_error(p)),
        other @ (ConstructError::EpsilonMismatch | ConstructError::LabelCount { .. } | ConstructError::LabelMismatch(_)) => {
            return Err(validation(other))
        }
    };
    let report = obj(vec![
        ("failure", Value::String(kind.into())),
        ("witness", witness),
    ]);
    Ok(Outcome::failed(report, format!("{kind}: {msg}")))
}

/// The reduction report, preferring a presentation over `L_map`.
fn reduce(file: &ProblemFile, flags: &Flags) -> Result<Result<ReductionReport, ConstructError>, CliError> {
    if let Some(p) = presentation_of(file, flags)? {
        return Ok(from_grassmann_data(&p));
    }
    let (poly, l) = polytope_of(file, flags)?.ok_or_else(|| missing("a presentation, or L_map and epsilon"))?;
    Ok(from_labelled_polytope(&poly, &l, poly.epsilon()))
}

fn construct(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    match reduce(file, flags)? {
        Ok(r) => Ok(Outcome::ok(report_value(&r))),
        Err(e) => construct_failure(e),
    }
}

fn roundtrip(file: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let (input, _) = polytope_of(file, flags)?.ok_or_else(|| missing("L_map and epsilon"))?;
    let report = match reduce(file, flags)? {
        Ok(r) => r,
        Err(e) => return construct_failure(e),
    };
    let rt = roundtrip_check(&report, &input);
    let out = obj(vec![
        ("ok", Value::Bool(rt.ok)),
        ("mismatched_facets", Value::from(rt.mismatched_facets.clone())),
        ("notes", Value::from(rt.notes.clone())),
        ("vertex_count", Value::from(report.vertices.len())),
    ]);
    if rt.ok {
        Ok(Outcome::ok(out))
    } else {
        let msg = format!("RoundTrip: mismatched facets {:?}", rt.mismatched_facets);
        Ok(Outcome::failed(out, msg))
    }
}
