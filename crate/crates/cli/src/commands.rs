//! The four subcommands. Each returns the document to print and leaves
//! exit-code policy to `Failure`.

use serde_json::{json, Value};
use sphroot_core::engine::{
    demazure_roots, enumerate_and_certify, ray_in_valuation_lineality, DemazureRoots, VarietyKind, VarietySpec, Verdict,
    VerificationReport,
};
use sphroot_core::lattice::{fmt_q, Cone, QVector, Side};
use sphroot_core::roots::{RootDescription, RootFamily};
use sphroot_core::type1::{
    catalog_homogeneous, color_table, colored_cone, colored_cone_diagnostics, from_colored_cone, validate_type1, BorelSide, ColorRecord,
    ColoredCone, DivisorLabel, SphericalDataI,
};
use sphroot_core::type2::{colored_cone_type2, from_colored_cone_type2, validate_type2, Type2Data};
use sphroot_core::Error;

use crate::doc::*;

#[derive(Debug)]
pub enum Failure {
    /// Schema or syntax problem in the input.
    Parse(String),
    /// Well-formed input describing invalid data.
    Domain(Vec<String>),
    /// A bounded check could not settle the question.
    Inconclusive(String, Option<Value>),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Inconclusive(..) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Validation(d) => Failure::Domain(d),
            other => Failure::Domain(vec![other.to_string()]),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

/// A spec after schema checks, before domain validation.
pub enum Variety {
    Type1(SphericalDataI),
    Type2 { sigma: Cone, e: Vec<i64> },
}

pub fn resolve(doc: &SpecDocument) -> Outcome<Variety> {
    match &doc.body {
        Body::Type1(p) => type1_data(p).map(Variety::Type1).map_err(Failure::Parse),
        Body::Type2(p) => {
            let n = p.e.len();
            if let Some(bad) = p.sigma.iter().find(|g| g.len() != n) {
                return Err(Failure::Parse(format!("sigma generator has length {}, expected {n}", bad.len())));
            }
            let sigma = Cone::from_lattice(Side::N, n, &p.sigma).map_err(|e| Failure::Parse(e.to_string()))?;
            Ok(Variety::Type2 { sigma, e: p.e.clone() })
        }
        Body::Catalog(p) => {
            let spec = subgroup_spec(&p.kind, p.param).map_err(|e| Failure::Domain(vec![e]))?;
            Ok(Variety::Type1(catalog_homogeneous(spec)?.0))
        }
        Body::ColoredCone(_) | Body::ColoredConeType2(_) => {
            Err(Failure::Parse("colored cone documents are only accepted by `cone --inverse`".into()))
        }
    }
}

fn validated(v: Variety) -> Outcome<VarietyKind> {
    match v {
        Variety::Type1(d) => {
            let diag = validate_type1(&d);
            if diag.is_empty() {
                Ok(VarietyKind::TypeI(d))
            } else {
                Err(Failure::Domain(diag))
            }
        }
        Variety::Type2 { sigma, e } => Ok(VarietyKind::TypeII(validate_type2(&sigma, &e)?)),
    }
}

fn kind_name(v: &VarietyKind) -> &'static str {
    match v {
        VarietyKind::TypeI(_) => "type1",
        VarietyKind::TypeII(_) => "type2",
    }
}

fn qjson(v: &[sphroot_core::lattice::Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

fn rays_json(c: &Cone) -> Value {
    Value::Array(c.rays().iter().map(|r| qjson(r)).collect())
}

pub fn validate(doc: &SpecDocument) -> Outcome<Value> {
    let v = validated(resolve(doc)?)?;
    Ok(json!({ "kind": kind_name(&v), "valid": true, "diagnostics": [] }))
}

fn family_json(f: &RootFamily) -> Value {
    json!({
        "distinguished_ray": qjson(&f.distinguished_ray),
        "equalities": f.equalities.iter().map(|(a, c)| json!({ "normal": qjson(a), "value": fmt_q(c) })).collect::<Vec<_>>(),
        "inequalities": f.inequalities.iter().map(|b| qjson(b)).collect::<Vec<_>>(),
        "lattice": f.lattice.as_ref().map(|l| json!(l.basis)),
    })
}

fn description_json(d: &RootDescription) -> Value {
    json!({
        "provenance": d.provenance.as_str(),
        "families": d.families.iter().map(family_json).collect::<Vec<_>>(),
    })
}

fn report_json(r: &VerificationReport) -> Value {
    let (verdict, reason) = match &r.verdict {
        Verdict::Pass => ("pass", None),
        Verdict::Fail(w) => ("fail", Some(w.clone())),
    };
    json!({
        "root": r.root,
        "derivation": r.derivation_summary,
        "brackets": r.commutator_results.iter().map(|b| json!({ "name": b.name, "passed": b.passed, "witness": b.witness })).collect::<Vec<_>>(),
        "preservation_bound": r.preservation_bound,
        "verdict": verdict,
        "reason": reason,
    })
}

pub struct RootsArgs {
    pub side: BorelSide,
    pub bound: Option<i64>,
    pub certify: bool,
    pub preservation_bound: i64,
}

pub fn roots(doc: &SpecDocument, args: &RootsArgs) -> Outcome<Value> {
    let kind = validated(resolve(doc)?)?;
    let e = match &kind {
        VarietyKind::TypeI(d) => d.e.clone(),
        VarietyKind::TypeII(d) => d.e.clone(),
    };
    let name = kind_name(&kind);
    let x = VarietySpec { kind, side: args.side };
    let dr: DemazureRoots = demazure_roots(&x)?;
    let mut out = json!({
        "kind": name,
        "side": args.side.as_str(),
        "gamma": rays_json(&dr.gamma),
        "root_description": {
            "exterior": description_json(&dr.exterior),
            "interior": description_json(&dr.interior),
        },
    });
    let enum_bound = args.bound.or(args.certify.then_some(args.preservation_bound));
    if let Some(b) = enum_bound {
        let (ext, int) = dr.enumerate(b);
        let flags: Vec<Value> = int
            .iter()
            .map(|t| json!({ "root": t, "ray_in_e_perp": ray_in_valuation_lineality(&dr, &e, t) }))
            .collect();
        out["enumerated"] = json!({ "bound": b, "exterior": ext, "interior": int });
        out["interior_flags"] = Value::Array(flags);
        if args.certify {
            let certs = enumerate_and_certify(&x, b, args.preservation_bound)?;
            let failed: Vec<String> = certs.iter().filter(|(_, r)| !r.passed()).map(|(t, _)| format!("{t:?}")).collect();
            out["certificates"] = Value::Array(certs.iter().map(|(_, r)| report_json(r)).collect());
            if !failed.is_empty() {
                let msg = format!("certification failed for enumerated roots {}", failed.join(", "));
                return Err(Failure::Inconclusive(msg, Some(out)));
            }
        }
    }
    Ok(out)
}

pub fn cone(doc: &SpecDocument, side: BorelSide) -> Outcome<SpecDocument> {
    match validated(resolve(doc)?)? {
        VarietyKind::TypeI(d) => {
            let cc = colored_cone(&d, side)?;
            let diag = colored_cone_diagnostics(&cc, &d.e);
            if !diag.is_empty() {
                return Err(Failure::Domain(diag));
            }
            let payload = ColoredConePayload {
                side: side.into(),
                cone: cc.cone.rays().iter().map(|r| nums(r)).collect(),
                colors: color_table(&d)?
                    .into_iter()
                    .filter(|c| c.is_color && c.side == side)
                    .map(|c| ColorEntry { label: c.label.to_string(), image: nums(&c.image), in_cone: cc.colors.contains(&c) })
                    .collect(),
                homogeneous: homogeneous_payload(&d.homogeneous()),
            };
            Ok(SpecDocument::new(Body::ColoredCone(payload)))
        }
        VarietyKind::TypeII(d) => {
            let (cc, quo) = colored_cone_type2(&d, side)?;
            let rays = cc.cone.rays();
            let payload = ColoredConeType2Payload {
                side: side.into(),
                cone: rays.iter().map(|r| nums(r)).collect(),
                color: nums(&cc.colors[0].image),
                rho: d.rho(side).clone(),
                lifted_rays: rays.iter().map(|r| nums(&quo.lift(r))).collect(),
                e: d.e.clone(),
            };
            Ok(SpecDocument::new(Body::ColoredConeType2(payload)))
        }
    }
}

fn colored_cone_of(p: &ColoredConePayload) -> Outcome<(ColoredCone, sphroot_core::type1::HomogeneousData)> {
    let h = homogeneous_data(&p.homogeneous);
    let n = h.e.len();
    let hv = &p.homogeneous;
    if hv.v0.len() != n || hv.v1.len() != n || p.cone.iter().chain(p.colors.iter().map(|c| &c.image)).any(|r| r.len() != n) {
        return Err(Failure::Parse(format!("vectors must have length {n}")));
    }
    let side: BorelSide = p.side.into();
    let gens: Vec<QVector> = p.cone.iter().map(|r| rats(r)).collect();
    let cone = Cone::from_generators(Side::N, n, &gens).map_err(|e| Failure::Parse(e.to_string()))?;
    let colors = p
        .colors
        .iter()
        .filter(|c| c.in_cone)
        .map(|c| {
            let image = rats(&c.image);
            ColorRecord { label: DivisorLabel::Horizontal(image.clone()), image, is_color: true, side }
        })
        .collect();
    Ok((ColoredCone { cone, colors, side }, h))
}

pub fn cone_inverse(doc: &SpecDocument) -> Outcome<SpecDocument> {
    match &doc.body {
        Body::ColoredCone(p) => {
            let (cc, h) = colored_cone_of(p)?;
            let d = from_colored_cone(&cc, &h)?;
            let diag = validate_type1(&d);
            if !diag.is_empty() {
                return Err(Failure::Domain(diag));
            }
            Ok(SpecDocument::new(Body::Type1(type1_payload(&d))))
        }
        Body::ColoredConeType2(p) => {
            let n = p.e.len();
            if p.rho.len() != n || p.lifted_rays.iter().any(|r| r.len() != n) {
                return Err(Failure::Parse(format!("vectors must have length {n}")));
            }
            let gens: Vec<QVector> = p.lifted_rays.iter().map(|r| rats(r)).collect();
            let lifted = Cone::from_generators(Side::N, n, &gens).map_err(|e| Failure::Parse(e.to_string()))?;
            let sigma = from_colored_cone_type2(&lifted, &p.rho)?;
            let d: Type2Data = validate_type2(&sigma, &p.e)?;
            Ok(SpecDocument::new(Body::Type2(Type2Payload { sigma: d.sigma.rays_lattice(), e: d.e })))
        }
        _ => Err(Failure::Parse("`cone --inverse` expects a colored_cone or colored_cone_type2 document".into())),
    }
}

pub fn catalog(kind: &str, param: Option<i64>) -> Outcome<SpecDocument> {
    let spec = subgroup_spec(kind, param).map_err(|e| Failure::Domain(vec![e]))?;
    let (d, _) = catalog_homogeneous(spec)?;
    Ok(SpecDocument::new(Body::Type1(type1_payload(&d))))
}

/// Plain-text rendering of a result document: one `key: value` line per
/// scalar leaf, vectors inline.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("({})", a.iter().filter_map(inline).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array()) => {
            let parts: Option<Vec<String>> = a.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn walk(v: &Value, path: &str, out: &mut String) {
    if let Some(s) = inline(v) {
        out.push_str(&format!("{path}: {s}\n"));
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, &p, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => unreachable!("scalars are inlined"),
    }
}
