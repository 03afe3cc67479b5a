//! JSON wire formats.
//!
//! Pencils: `{"field": "q" | "gf(p)", "m": .., "n": .., "G0": [[..]],
//! "G1": [[..]]}` with GF(p) residues as integers and rationals as `"num"`
//! or `"num/den"` strings. Structures: `{"hfactors": [{"inf_mult": m,
//! "finite": [coeffs]}]}`, coefficients lowest degree first. Serialization
//! uses typed structs so the key order is fixed; reading back a written
//! value reproduces it bit-exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{scalar_from_str, FieldSpec, Scalar, SpecPoint};
use crate::homog::HomogPoly;
use crate::mat::{Mat, ScalarMat};
use crate::pencil::Pencil;
use crate::poly::Poly;
use crate::reach::{ApplicabilityReport, InterlaceReport};
use crate::synth::{SynthCertificate, SynthStep};
use crate::weier::WeierstrassStructure;

pub fn field_to_string(f: FieldSpec) -> String {
    f.to_string()
}

pub fn field_from_string(s: &str) -> Result<FieldSpec> {
    let t = s.trim().to_ascii_lowercase();
    if t == "q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(inner) = t.strip_prefix("gf(").and_then(|x| x.strip_suffix(')')) {
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field modulus `{inner}`")))?;
        return FieldSpec::prime_field(p);
    }
    Err(Error::Parse(format!(
        "unknown field `{s}`, expected `q` or `gf(p)`"
    )))
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Mod { val, .. } => Value::from(*val),
        Scalar::Rat(_) => Value::from(s.to_string()),
    }
}

pub fn scalar_from_value(field: FieldSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("entry {n} is not an integer")))?;
            Ok(field.from_i64(i))
        }
        Value::String(s) => scalar_from_str(field, s),
        other => Err(Error::Parse(format!(
            "entry {other} is neither number nor string"
        ))),
    }
}

// ---------------------------------------------------------------------
// pencil
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct PencilDto {
    pub field: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "G0")]
    pub g0: Vec<Vec<Value>>,
    #[serde(rename = "G1")]
    pub g1: Vec<Vec<Value>>,
}

fn mat_to_rows(m: &ScalarMat) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| scalar_to_value(m.at(i, j))).collect())
        .collect()
}

fn mat_from_rows(field: FieldSpec, rows: &[Vec<Value>], m: usize, n: usize) -> Result<ScalarMat> {
    if rows.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("matrix is not {m}x{n}")));
    }
    let mut out = Mat::zeros(m, n, field);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out.set(i, j, scalar_from_value(field, v)?);
        }
    }
    Ok(out)
}

pub fn pencil_to_dto(p: &Pencil) -> PencilDto {
    PencilDto {
        field: field_to_string(p.field()),
        m: p.rows(),
        n: p.cols(),
        g0: mat_to_rows(p.g0()),
        g1: mat_to_rows(p.g1()),
    }
}

pub fn pencil_from_dto(dto: &PencilDto) -> Result<Pencil> {
    let field = field_from_string(&dto.field)?;
    let g0 = mat_from_rows(field, &dto.g0, dto.m, dto.n).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("G0: {msg}")),
        other => other,
    })?;
    let g1 = mat_from_rows(field, &dto.g1, dto.m, dto.n).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("G1: {msg}")),
        other => other,
    })?;
    Pencil::new(g0, g1)
}

// ---------------------------------------------------------------------
// structure
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct HfactorDto {
    pub inf_mult: usize,
    pub finite: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
pub struct StructureDto {
    pub hfactors: Vec<HfactorDto>,
}

pub fn structure_to_dto(s: &WeierstrassStructure) -> StructureDto {
    StructureDto {
        hfactors: s
            .hfactors()
            .iter()
            .map(|h| {
                let (m, f) = h.parts().expect("valid structure");
                HfactorDto {
                    inf_mult: m,
                    finite: f.coeffs().iter().map(scalar_to_value).collect(),
                }
            })
            .collect(),
    }
}

pub fn structure_from_dto(field: FieldSpec, dto: &StructureDto) -> Result<WeierstrassStructure> {
    let mut hf = Vec::with_capacity(dto.hfactors.len());
    for h in &dto.hfactors {
        let coeffs = h
            .finite
            .iter()
            .map(|v| scalar_from_value(field, v))
            .collect::<Result<Vec<_>>>()?;
        let poly = Poly::new(field, coeffs);
        if poly.is_zero() {
            return Err(Error::Parse("zero finite part in a structure".into()));
        }
        if !poly.is_monic() {
            return Err(Error::Parse("finite parts must be monic".into()));
        }
        hf.push(HomogPoly::from_parts(h.inf_mult, poly).1);
    }
    WeierstrassStructure::new(hf)
}

// ---------------------------------------------------------------------
// synthesis input and certificate
// ---------------------------------------------------------------------

/// `{"a": pencil, "b": pencil}` or `{"a": pencil, "psi": structure}`.
#[derive(Serialize, Deserialize)]
pub struct PairDto {
    pub a: PencilDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<PencilDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<StructureDto>,
}

fn step_to_string(s: &SynthStep) -> String {
    match s {
        SynthStep::FullRank => "FullRank".into(),
        SynthStep::ConstantCore => "ConstantCore".into(),
        SynthStep::Inflate => "Inflate".into(),
        SynthStep::LeadingConjugate => "LeadingConjugate".into(),
        SynthStep::Mobius(SpecPoint::Infinity) => "Mobius(inf)".into(),
        SynthStep::Mobius(SpecPoint::Finite(c)) => format!("Mobius({c})"),
        SynthStep::Scalar => "Scalar".into(),
        SynthStep::SearchBackend => "SearchBackend".into(),
        SynthStep::SharedBlockSplit => "SharedBlockSplit".into(),
    }
}

#[derive(Serialize, Deserialize)]
pub struct DetClaimDto {
    pub k: Value,
    pub psi: HfactorDto,
}

#[derive(Serialize, Deserialize)]
pub struct CertificateDto {
    pub field: String,
    pub n: usize,
    pub rank: usize,
    pub path: Vec<String>,
    #[serde(rename = "P")]
    pub p: PencilDto,
    pub achieved: StructureDto,
    pub target: StructureDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<DetClaimDto>,
}

pub fn certificate_to_dto(
    cert: &SynthCertificate,
    target: &WeierstrassStructure,
    det: Option<(&Scalar, &HomogPoly)>,
) -> CertificateDto {
    CertificateDto {
        field: field_to_string(cert.p.field()),
        n: cert.p.rows(),
        rank: cert.rank,
        path: cert.path.iter().map(step_to_string).collect(),
        p: pencil_to_dto(&cert.p),
        achieved: structure_to_dto(&cert.achieved),
        target: structure_to_dto(target),
        det: det.map(|(k, psi)| {
            let (m, f) = psi.parts().expect("nonzero target");
            DetClaimDto {
                k: scalar_to_value(k),
                psi: HfactorDto {
                    inf_mult: m,
                    finite: f.coeffs().iter().map(scalar_to_value).collect(),
                },
            }
        }),
    }
}

// ---------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct SpectrumEntryDto {
    pub point: Value,
    pub mu_a: usize,
    pub multiplicities: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct AnalyzeDto {
    pub field: String,
    pub m: usize,
    pub n: usize,
    pub regular: bool,
    pub normal_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hfactors: Option<Vec<HfactorDto>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_det: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<SpectrumEntryDto>>,
}

pub fn point_to_value(p: &SpecPoint) -> Value {
    match p {
        SpecPoint::Infinity => Value::from("inf"),
        SpecPoint::Finite(c) => scalar_to_value(c),
    }
}

#[derive(Serialize, Deserialize)]
pub struct InterlaceDto {
    pub rank: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<(usize, String)>,
}

pub fn interlace_to_dto(rep: &InterlaceReport) -> InterlaceDto {
    InterlaceDto {
        rank: rep.r,
        holds: rep.holds,
        first_violation: rep
            .first_violation
            .map(|(i, side)| (i, format!("{side:?}").to_ascii_lowercase())),
    }
}

#[derive(Serialize, Deserialize)]
pub struct ApplicabilityDto {
    pub joint_spectrum_covers_field: bool,
    pub witness_c: Option<Value>,
    pub shared_multiplicity_lambda0: Option<Value>,
    pub scalar_exception: bool,
}

pub fn applicability_to_dto(rep: &ApplicabilityReport) -> ApplicabilityDto {
    ApplicabilityDto {
        joint_spectrum_covers_field: rep.joint_spectrum_covers_field,
        witness_c: rep.witness_c.as_ref().map(point_to_value),
        shared_multiplicity_lambda0: rep.shared_multiplicity_lambda0.as_ref().map(point_to_value),
        scalar_exception: rep.scalar_exception,
    }
}

#[derive(Serialize, Deserialize)]
pub struct CheckDto {
    pub interlace: InterlaceDto,
    pub applicability: ApplicabilityDto,
    /// Constant-perturbation bound over the base field; informational (the
    /// underlying statement assumes an algebraically closed field).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub const_rank_bound_informational: Option<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct OracleMissingDto {
    pub structure: StructureDto,
    pub applicability: ApplicabilityDto,
}

#[derive(Serialize, Deserialize)]
pub struct OracleReportDto {
    pub field: String,
    pub n: usize,
    pub rank: usize,
    pub reachable: Vec<StructureDto>,
    pub predicate: Vec<StructureDto>,
    pub missing: Vec<OracleMissingDto>,
    pub extra: Vec<StructureDto>,
}

// ---------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let text = to_canonical_string(value)?;
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field(p).unwrap()
    }

    #[test]
    fn pencil_round_trip_bit_exact() {
        let f = FieldSpec::Rationals;
        let mut g0 = Mat::zeros(2, 2, f);
        g0.set(0, 0, Scalar::rational(-7, 3));
        g0.set(1, 1, f.from_i64(4));
        let p = Pencil::new(g0, Mat::identity(2, f)).unwrap();
        let text = to_canonical_string(&pencil_to_dto(&p)).unwrap();
        let dto: PencilDto = serde_json::from_str(&text).unwrap();
        let back = pencil_from_dto(&dto).unwrap();
        assert_eq!(back, p);
        let text2 = to_canonical_string(&pencil_to_dto(&back)).unwrap();
        assert_eq!(text, text2, "serialized form is canonical");
    }

    #[test]
    fn pencil_gf_entries_accept_negatives() {
        let json = r#"{"field":"gf(5)","m":1,"n":1,"G0":[[-1]],"G1":[["3"]]}"#;
        let dto: PencilDto = serde_json::from_str(json).unwrap();
        let p = pencil_from_dto(&dto).unwrap();
        assert_eq!(p.g0().at(0, 0), &gf(5).from_i64(4));
        assert_eq!(p.g1().at(0, 0), &gf(5).from_i64(3));
    }

    #[test]
    fn structure_round_trip() {
        let f = gf(2);
        let s =
            WeierstrassStructure::from_parts(f, &[(0, &[1]), (0, &[1, 1]), (1, &[1, 1])]).unwrap();
        let text = to_canonical_string(&structure_to_dto(&s)).unwrap();
        let dto: StructureDto = serde_json::from_str(&text).unwrap();
        assert_eq!(structure_from_dto(f, &dto).unwrap(), s);
    }

    #[test]
    fn bad_inputs_are_parse_errors() {
        assert!(field_from_string("gf(4)").is_err());
        assert!(field_from_string("real").is_err());
        let bad = r#"{"field":"q","m":2,"n":2,"G0":[[1,2]],"G1":[[1,2],[3,4]]}"#;
        let dto: PencilDto = serde_json::from_str(bad).unwrap();
        assert!(matches!(pencil_from_dto(&dto), Err(Error::Parse(_))));
    }
}
