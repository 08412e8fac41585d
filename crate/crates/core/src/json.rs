//! JSON encodings. Rationals are `"p/q"` strings and the tropical zero is
//! `"-inf"`, so every value round-trips exactly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::congruence::{ConstructionStep, CongruencePair, Failure, GeneratorCertificate, KPrime, VerifyReport};
use crate::curves::{Chart, Construction, CurveComplex, GeometricReport};
use crate::error::{check_dim, Error, Result};
use crate::polyhedra::{ConeV, HalfSpace, PolyhedralUnion, Polyhedron};
use crate::scalar::{format_q, parse_q, ExtendedRational, Q};
use crate::tropical::{AffineForm, TropicalPoly, TropicalRational};

/// A domain value with a serde representation.
pub trait Codec: Sized {
    type Dto: Serialize + DeserializeOwned;
    fn to_dto(&self) -> Self::Dto;
    fn from_dto(dto: Self::Dto) -> Result<Self>;
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_string<T: Codec>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(&value.to_dto()).expect("DTOs serialize");
    s.push('\n');
    s
}

pub fn from_str<T: Codec>(s: &str) -> Result<T> {
    let dto: T::Dto = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    T::from_dto(dto)
}

fn rationals(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

fn parse_rationals(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_q(s)).collect()
}

/// Parses a point given as a JSON array of rational strings or integers, or
/// as a comma-separated list.
pub fn parse_point(s: &str) -> Result<Vec<Q>> {
    let t = s.trim();
    if t.starts_with('[') {
        let raw: Vec<serde_json::Value> = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        return raw
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) if n.is_i64() => parse_q(&n.to_string()),
                other => Err(Error::Parse(format!("not an exact rational: {other}"))),
            })
            .collect();
    }
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_q).collect()
}

pub fn point_to_json(p: &[Q]) -> serde_json::Value {
    serde_json::Value::from(rationals(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exp: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl Codec for TropicalPoly {
    type Dto = PolyJson;

    fn to_dto(&self) -> PolyJson {
        let terms = self.terms().map(|(e, c)| TermJson { coeff: format_q(c), exp: e.clone() }).collect();
        PolyJson { nvars: self.nvars(), terms }
    }

    fn from_dto(dto: PolyJson) -> Result<Self> {
        let mut forms = Vec::new();
        for t in dto.terms {
            check_dim(dto.nvars, t.exp.len())?;
            let coeff: ExtendedRational = t.coeff.parse()?;
            forms.push(AffineForm::new(coeff, t.exp));
        }
        TropicalPoly::from_forms(dto.nvars, forms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

impl Codec for TropicalRational {
    type Dto = RationalJson;

    fn to_dto(&self) -> RationalJson {
        RationalJson { num: self.num().to_dto(), den: self.den().to_dto() }
    }

    fn from_dto(dto: RationalJson) -> Result<Self> {
        TropicalRational::new(TropicalPoly::from_dto(dto.num)?, TropicalPoly::from_dto(dto.den)?)
    }
}

/// Either schema; a bare polynomial is read as a rational with denominator 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionJson {
    Rational(RationalJson),
    Poly(PolyJson),
}

impl FunctionJson {
    pub fn into_rational(self) -> Result<TropicalRational> {
        match self {
            FunctionJson::Rational(r) => TropicalRational::from_dto(r),
            FunctionJson::Poly(p) => Ok(TropicalRational::from_poly(TropicalPoly::from_dto(p)?)),
        }
    }
}

/// Reads a function file holding either a rational function or a polynomial.
pub fn function_from_str(s: &str) -> Result<TropicalRational> {
    let dto: FunctionJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    dto.into_rational()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub lhs: FunctionJson,
    pub rhs: FunctionJson,
}

impl Codec for CongruencePair {
    type Dto = PairJson;

    fn to_dto(&self) -> PairJson {
        PairJson { lhs: FunctionJson::Rational(self.lhs().to_dto()), rhs: FunctionJson::Rational(self.rhs().to_dto()) }
    }

    fn from_dto(dto: PairJson) -> Result<Self> {
        CongruencePair::new(dto.lhs.into_rational()?, dto.rhs.into_rational()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub normal: Vec<i64>,
    pub offset: String,
}

impl Codec for HalfSpace {
    type Dto = HalfSpaceJson;

    fn to_dto(&self) -> HalfSpaceJson {
        HalfSpaceJson { normal: self.normal().to_vec(), offset: format_q(self.offset()) }
    }

    fn from_dto(dto: HalfSpaceJson) -> Result<Self> {
        HalfSpace::new(dto.normal, parse_q(&dto.offset)?).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    pub halfspaces: Vec<HalfSpaceJson>,
}

fn polyhedron_from_dto(dto: PolyhedronJson, hint: Option<usize>) -> Result<Polyhedron> {
    let hs: Vec<HalfSpace> = dto.halfspaces.into_iter().map(HalfSpace::from_dto).collect::<Result<_>>()?;
    let n = dto
        .nvars
        .or(hint)
        .or_else(|| hs.first().map(HalfSpace::nvars))
        .ok_or_else(|| Error::Parse("cannot infer nvars of a polyhedron without half-spaces".into()))?;
    if let (Some(a), Some(b)) = (dto.nvars, hint) {
        check_dim(b, a)?;
    }
    Polyhedron::new(n, hs)
}

impl Codec for Polyhedron {
    type Dto = PolyhedronJson;

    fn to_dto(&self) -> PolyhedronJson {
        PolyhedronJson { nvars: Some(self.nvars()), halfspaces: self.halfspaces().iter().map(Codec::to_dto).collect() }
    }

    fn from_dto(dto: PolyhedronJson) -> Result<Self> {
        polyhedron_from_dto(dto, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    pub pieces: Vec<PolyhedronJson>,
}

impl Codec for PolyhedralUnion {
    type Dto = UnionJson;

    fn to_dto(&self) -> UnionJson {
        UnionJson { nvars: Some(self.nvars()), pieces: self.pieces().iter().map(Codec::to_dto).collect() }
    }

    fn from_dto(dto: UnionJson) -> Result<Self> {
        let hint = dto.nvars.or_else(|| {
            dto.pieces
                .iter()
                .find_map(|p| p.nvars.or_else(|| p.halfspaces.first().map(|h| h.normal.len())))
        });
        let Some(n) = hint else {
            return Err(Error::Parse("cannot infer nvars of the union".into()));
        };
        let pieces = dto.pieces.into_iter().map(|p| polyhedron_from_dto(p, Some(n))).collect::<Result<_>>()?;
        PolyhedralUnion::new(n, pieces)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    pub generators: Vec<Vec<i64>>,
}

impl Codec for ConeV {
    type Dto = ConeJson;

    fn to_dto(&self) -> ConeJson {
        ConeJson { nvars: Some(self.nvars()), generators: self.generators().to_vec() }
    }

    fn from_dto(dto: ConeJson) -> Result<Self> {
        let n = dto
            .nvars
            .or_else(|| dto.generators.first().map(Vec::len))
            .ok_or_else(|| Error::Parse("cannot infer nvars of a cone without generators".into()))?;
        ConeV::new(n, dto.generators)
    }
}

/// `k′` as an integer or the string `"unverified"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KPrimeJson {
    Value(u64),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub f: RationalJson,
    pub variety: UnionJson,
    pub k_prime: KPrimeJson,
    pub log: Vec<ConstructionStep>,
    #[serde(default)]
    pub improper: bool,
}

impl Codec for GeneratorCertificate {
    type Dto = CertificateJson;

    fn to_dto(&self) -> CertificateJson {
        let k_prime = match self.k_prime {
            KPrime::Verified(k) => KPrimeJson::Value(k),
            KPrime::Unverified => KPrimeJson::Label("unverified".into()),
        };
        CertificateJson {
            f: self.f.to_dto(),
            variety: self.variety.to_dto(),
            k_prime,
            log: self.log.clone(),
            improper: self.improper,
        }
    }

    fn from_dto(dto: CertificateJson) -> Result<Self> {
        let f = TropicalRational::from_dto(dto.f)?;
        let variety = PolyhedralUnion::from_dto(dto.variety)?;
        check_dim(f.nvars(), variety.nvars())?;
        let k_prime = match dto.k_prime {
            KPrimeJson::Value(0) => return Err(Error::Parse("k_prime must be positive".into())),
            KPrimeJson::Value(k) => KPrime::Verified(k),
            KPrimeJson::Label(s) if s == "unverified" => KPrime::Unverified,
            KPrimeJson::Label(s) => return Err(Error::Parse(format!("bad k_prime {s:?}"))),
        };
        Ok(GeneratorCertificate { f, variety, k_prime, log: dto.log, improper: dto.improper })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayJson {
    pub base: usize,
    pub dir: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub nvars: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub segments: Vec<[usize; 2]>,
    #[serde(default)]
    pub rays: Vec<RayJson>,
}

impl Codec for CurveComplex {
    type Dto = ComplexJson;

    fn to_dto(&self) -> ComplexJson {
        ComplexJson {
            nvars: self.nvars(),
            vertices: self.vertices().iter().map(|v| rationals(v)).collect(),
            segments: self.segments().iter().map(|&(a, b)| [a, b]).collect(),
            rays: self.rays().iter().map(|(b, d)| RayJson { base: *b, dir: d.clone() }).collect(),
        }
    }

    fn from_dto(dto: ComplexJson) -> Result<Self> {
        let vertices = dto.vertices.iter().map(|v| parse_rationals(v)).collect::<Result<Vec<_>>>()?;
        for v in &vertices {
            check_dim(dto.nvars, v.len())?;
        }
        for r in &dto.rays {
            check_dim(dto.nvars, r.dir.len())?;
        }
        CurveComplex::new(
            dto.nvars,
            vertices,
            dto.segments.iter().map(|s| (s[0], s[1])).collect(),
            dto.rays.into_iter().map(|r| (r.base, r.dir)).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartJson {
    pub num: PolyJson,
    pub den: PolyJson,
    pub base_point: Vec<String>,
    pub construction: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::RayBump => "ray-bump",
        Construction::SegmentTent => "segment-tent",
        Construction::VertexStar => "vertex-star",
    }
}

impl Codec for Chart {
    type Dto = ChartJson;

    fn to_dto(&self) -> ChartJson {
        let f = self.f.to_dto();
        ChartJson {
            num: f.num,
            den: f.den,
            base_point: rationals(&self.base_point),
            construction: construction_name(self.construction).into(),
            warnings: self.warnings.clone(),
        }
    }

    fn from_dto(dto: ChartJson) -> Result<Self> {
        let construction = match dto.construction.as_str() {
            "ray-bump" => Construction::RayBump,
            "segment-tent" => Construction::SegmentTent,
            "vertex-star" => Construction::VertexStar,
            other => return Err(Error::Parse(format!("unknown construction {other:?}"))),
        };
        let f = TropicalRational::from_dto(RationalJson { num: dto.num, den: dto.den })?;
        let base_point = parse_rationals(&dto.base_point)?;
        check_dim(f.nvars(), base_point.len())?;
        Ok(Chart { f, base_point, construction, warnings: dto.warnings })
    }
}

/// A float rendered with 12 significant digits.
pub fn format_approx(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureJson {
    pub kind: crate::congruence::FailureKind,
    pub point: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReportJson {
    pub passed: bool,
    pub seed: u64,
    pub samples: usize,
    pub on_variety_points: usize,
    pub off_variety_points: usize,
    pub domination_checks: usize,
    /// Largest observed `dist/f`, 12 significant digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_distance_ratio_approx: Option<String>,
    pub failures: Vec<FailureJson>,
}

fn failure_json(f: &Failure) -> FailureJson {
    FailureJson { kind: f.kind, point: rationals(&f.point), detail: f.detail.clone() }
}

pub fn verify_report_json(r: &VerifyReport) -> VerifyReportJson {
    VerifyReportJson {
        passed: r.passed(),
        seed: r.seed,
        samples: r.samples,
        on_variety_points: r.on_variety_points,
        off_variety_points: r.off_variety_points,
        domination_checks: r.domination_checks,
        max_distance_ratio_approx: r.max_distance_ratio.map(format_approx),
        failures: r.failures.iter().map(failure_json).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricReportJson {
    pub passed: bool,
    pub connected: bool,
    pub dimension: u8,
    pub duplicate_rays: Vec<[usize; 2]>,
    pub congruence_conditions: String,
}

pub fn geometric_report_json(r: &GeometricReport) -> GeometricReportJson {
    GeometricReportJson {
        passed: r.passed(),
        connected: r.connected,
        dimension: r.dimension,
        duplicate_rays: r.duplicate_rays.iter().map(|&(a, b)| [a, b]).collect(),
        congruence_conditions: GeometricReport::CONGRUENCE_CONDITIONS.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::synthesize_generator;
    use crate::scalar::q;

    #[test]
    fn poly_round_trip_and_neg_inf_terms() {
        let s = r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [0]}, {"coeff": "-3", "exp": [1]},
                    {"coeff": "-inf", "exp": [5]}, {"coeff": "1/2", "exp": [2]}]}"#;
        let p: TropicalPoly = from_str(s).unwrap();
        assert_eq!(p.len(), 3);
        let back: TropicalPoly = from_str(&to_string(&p)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_decimals_and_bad_dimensions() {
        let s = r#"{"nvars": 1, "terms": [{"coeff": "0.5", "exp": [0]}]}"#;
        assert!(matches!(from_str::<TropicalPoly>(s), Err(Error::Parse(_))));
        let s = r#"{"nvars": 2, "terms": [{"coeff": "0", "exp": [0]}]}"#;
        assert!(matches!(from_str::<TropicalPoly>(s), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(from_str::<TropicalPoly>("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn certificate_round_trip() {
        let u: PolyhedralUnion = from_str(
            r#"{"pieces": [{"halfspaces": [{"normal": [1, 0], "offset": "0"}, {"normal": [0, 1], "offset": "-1/2"}]}]}"#,
        )
        .unwrap();
        let cert = synthesize_generator(&u).unwrap();
        let text = to_string(&cert);
        let back: GeneratorCertificate = from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn function_files_accept_polynomials() {
        let f = function_from_str(r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [1]}]}"#).unwrap();
        assert_eq!(f.eval_finite(&[q(3)]).unwrap(), q(3));
        assert_eq!(parse_point("[\"1/2\", -3]").unwrap(), vec![crate::scalar::q_frac(1, 2), q(-3)]);
        assert_eq!(parse_point("1/2,-3").unwrap(), vec![crate::scalar::q_frac(1, 2), q(-3)]);
    }

    #[test]
    fn approx_formatting() {
        assert_eq!(format_approx(std::f64::consts::SQRT_2), "1.41421356237");
        assert_eq!(format_approx(1234.5), "1234.50000000");
    }
}
