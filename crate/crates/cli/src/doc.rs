//! JSON documents read and written by the CLI.
//!
//! Rationals travel as strings (`"p/q"` or `"p"`); lattice vectors as
//! integer arrays. Integers are accepted wherever a rational is expected.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sphroot_core::lattice::{fmt_q, Cone, LatticeVector, Polyhedron, QVector, Rational, Side};
use sphroot_core::type1::{BorelSide, Case, HomogeneousData, SphericalDataI, SubgroupSpec};

pub const SCHEMA_VERSION: &str = "1";

/// A rational number as written in a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Num, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse_rational(v).map(Num).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

pub fn nums(v: &[Rational]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

pub fn rats(v: &[Num]) -> QVector {
    v.iter().map(|n| n.0.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Minus,
    Plus,
}

impl From<SideName> for BorelSide {
    fn from(s: SideName) -> BorelSide {
        match s {
            SideName::Minus => BorelSide::Minus,
            SideName::Plus => BorelSide::Plus,
        }
    }
}

impl From<BorelSide> for SideName {
    fn from(s: BorelSide) -> SideName {
        match s {
            BorelSide::Minus => SideName::Minus,
            BorelSide::Plus => SideName::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    Reflexive,
    Skew,
}

impl From<CaseName> for Case {
    fn from(c: CaseName) -> Case {
        match c {
            CaseName::Reflexive => Case::Reflexive,
            CaseName::Skew => Case::Skew,
        }
    }
}

impl From<Case> for CaseName {
    fn from(c: Case) -> CaseName {
        match c {
            Case::Reflexive => CaseName::Reflexive,
            Case::Skew => CaseName::Skew,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<SideName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Type1Payload {
    pub case: CaseName,
    /// `"A1"` or `"P1"`; inferred from `delta_inf` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    pub v0: Vec<Num>,
    pub v1: Vec<Num>,
    /// Generators of sigma.
    pub sigma: Vec<Vec<Num>>,
    /// Vertices of Delta_inf; its tail is sigma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_inf: Option<Vec<Vec<Num>>>,
    pub e: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Type2Payload {
    pub sigma: Vec<LatticeVector>,
    pub e: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogPayload {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogeneousPayload {
    pub case: CaseName,
    pub v0: Vec<Num>,
    pub v1: Vec<Num>,
    pub e: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorEntry {
    pub label: String,
    pub image: Vec<Num>,
    /// Whether the color belongs to the colored cone's color set.
    pub in_cone: bool,
}

/// A type I colored cone, as emitted by `cone` and read by `cone --inverse`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredConePayload {
    pub side: SideName,
    pub cone: Vec<Vec<Num>>,
    pub colors: Vec<ColorEntry>,
    pub homogeneous: HomogeneousPayload,
}

/// A type II colored cone in `N / Z rho`, with the data needed to lift it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredConeType2Payload {
    pub side: SideName,
    pub cone: Vec<Vec<Num>>,
    pub color: Vec<Num>,
    pub rho: LatticeVector,
    /// Lifts of the quotient cone's rays back to `N`.
    pub lifted_rays: Vec<Vec<Num>>,
    pub e: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    Type1(Type1Payload),
    Type2(Type2Payload),
    Catalog(CatalogPayload),
    ColoredCone(ColoredConePayload),
    ColoredConeType2(ColoredConeType2Payload),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub version: String,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

impl SpecDocument {
    pub fn new(body: Body) -> SpecDocument {
        SpecDocument { version: SCHEMA_VERSION.into(), body, options: None }
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn parse_document(text: &str) -> Result<SpecDocument, String> {
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.version != SCHEMA_VERSION {
        return Err(format!("unsupported schema version {:?}", doc.version));
    }
    Ok(doc)
}

/// Builds the library data; errors are schema-level (wrong lengths, bad curve tag).
pub fn type1_data(p: &Type1Payload) -> Result<SphericalDataI, String> {
    let n = p.e.len();
    let check = |name: &str, v: &[Num]| {
        if v.len() == n {
            Ok(())
        } else {
            Err(format!("{name} has length {}, expected {n}", v.len()))
        }
    };
    check("v0", &p.v0)?;
    check("v1", &p.v1)?;
    for g in &p.sigma {
        check("sigma generator", g)?;
    }
    let gens: Vec<QVector> = p.sigma.iter().map(|g| rats(g)).collect();
    let sigma = Cone::from_generators(Side::N, n, &gens).map_err(|e| e.to_string())?;
    let p1 = match p.curve.as_deref() {
        None => p.delta_inf.is_some(),
        Some("A1") => false,
        Some("P1") => true,
        Some(other) => return Err(format!("unknown curve {other:?}")),
    };
    let delta_inf = match (&p.delta_inf, p1) {
        (None, false) => None,
        (Some(v), true) => {
            for x in v {
                check("Delta_inf vertex", x)?;
            }
            let pts: Vec<QVector> = v.iter().map(|x| rats(x)).collect();
            if pts.is_empty() {
                return Err("Delta_inf needs at least one vertex".into());
            }
            Some(Polyhedron::new(&pts, sigma.clone()).map_err(|e| e.to_string())?)
        }
        (None, true) => return Err("curve P1 needs delta_inf".into()),
        (Some(_), false) => return Err("delta_inf given for curve A1".into()),
    };
    Ok(SphericalDataI { case: p.case.into(), v0: rats(&p.v0), v1: rats(&p.v1), sigma, delta_inf, e: p.e.clone() })
}

/// Canonical payload: sigma by its rays, Delta_inf by its vertices.
pub fn type1_payload(d: &SphericalDataI) -> Type1Payload {
    Type1Payload {
        case: d.case.into(),
        curve: Some(if d.delta_inf.is_some() { "P1" } else { "A1" }.into()),
        v0: nums(&d.v0),
        v1: nums(&d.v1),
        sigma: d.sigma.rays().iter().map(|r| nums(r)).collect(),
        delta_inf: d.delta_inf.as_ref().map(|p| p.vertices().iter().map(|v| nums(v)).collect()),
        e: d.e.clone(),
    }
}

pub fn homogeneous_payload(h: &HomogeneousData) -> HomogeneousPayload {
    HomogeneousPayload { case: h.case.into(), v0: nums(&h.v0), v1: nums(&h.v1), e: h.e.clone() }
}

pub fn homogeneous_data(p: &HomogeneousPayload) -> HomogeneousData {
    HomogeneousData { case: p.case.into(), v0: rats(&p.v0), v1: rats(&p.v1), e: p.e.clone() }
}

pub fn subgroup_spec(kind: &str, param: Option<i64>) -> Result<SubgroupSpec, String> {
    let need = |p: Option<i64>| p.ok_or_else(|| format!("{kind} needs a parameter"));
    match kind {
        "Q1" => Ok(SubgroupSpec::Q1(need(param)?)),
        "Q2" => Ok(SubgroupSpec::Q2),
        "N1" => Ok(SubgroupSpec::N1(need(param)?)),
        "N2" => Ok(SubgroupSpec::N2(need(param)?)),
        other => Err(format!("unknown catalog type {other:?}")),
    }
}
