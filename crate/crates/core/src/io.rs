//! JSON file formats and report rendering.
//!
//! Complex numbers are `[re, im]` pairs. Report floats are rounded to 12
//! significant digits so golden files are reproducible.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::braid::{BraidReport, QuasiTriangularCheck, ResidualCheck};
use crate::concurrence::ConditionReport;
use crate::entangler::{EntanglerSpec, PropositionCheck, UnitarityCheck};
use crate::matrix::OperatorMatrix;
use crate::oracle::{verdicts_agree, OracleVerdict};
use crate::state::PureState;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum FileError {
    Io(String),
    Schema(String),
}

impl FileError {
    pub fn exit_code(&self) -> i32 {
        match self {
            FileError::Io(_) => 1,
            FileError::Schema(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            FileError::Io(m) | FileError::Schema(m) => m,
        }
    }
}

impl From<crate::Error> for FileError {
    fn from(e: crate::Error) -> Self {
        FileError::Schema(e.to_string())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntanglerFile {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: Vec<[f64; 2]>,
}

fn to_complex(pairs: &[[f64; 2]], field: &str) -> Result<Vec<Complex64>, FileError> {
    pairs
        .iter()
        .enumerate()
        .map(|(k, [re, im])| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex64::new(*re, *im))
            } else {
                Err(FileError::Schema(format!("{field}[{k}]: entry is not finite")))
            }
        })
        .collect()
}

impl StateFile {
    pub fn into_state(self) -> Result<(PureState, String), FileError> {
        if self.dims.is_empty() {
            return Err(FileError::Schema("dims: at least one subsystem is required".into()));
        }
        if let Some(k) = self.dims.iter().position(|&d| d < 2) {
            return Err(FileError::Schema(format!("dims[{k}]: dimension must be at least 2")));
        }
        let expected = self
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| FileError::Schema("dims: product overflows".into()))?;
        if self.amplitudes.len() != expected {
            return Err(FileError::Schema(format!(
                "amplitudes: expected {expected} entries (product of dims {:?}), found {}",
                self.dims,
                self.amplitudes.len()
            )));
        }
        let amps = to_complex(&self.amplitudes, "amplitudes")?;
        let label = self.label.unwrap_or_default();
        Ok((PureState::new(&self.dims, amps)?, label))
    }
}

impl EntanglerFile {
    pub fn into_spec(self) -> Result<EntanglerSpec, FileError> {
        if self.m < 2 {
            return Err(FileError::Schema(format!("m: entangler needs m >= 2, got {}", self.m)));
        }
        if self.n < 2 {
            return Err(FileError::Schema(format!("N: entangler needs N >= 2, got {}", self.n)));
        }
        let expected = self
            .n
            .checked_pow(self.m as u32)
            .ok_or_else(|| FileError::Schema("N^m overflows".into()))?;
        if self.alpha.len() != expected {
            return Err(FileError::Schema(format!(
                "alpha: expected {expected} entries (N^m with N = {}, m = {}), found {}",
                self.n,
                self.m,
                self.alpha.len()
            )));
        }
        let alpha = to_complex(&self.alpha, "alpha")?;
        Ok(EntanglerSpec::new(self.m, self.n, alpha)?)
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|e| FileError::Io(format!("{}: {e}", path.display())))
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, path: &Path) -> Result<T, FileError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        if field == "." || field.is_empty() {
            FileError::Schema(format!("{}: {inner}", path.display()))
        } else {
            FileError::Schema(format!("{}: {field}: {inner}", path.display()))
        }
    })
}

pub fn load_state(path: &Path) -> Result<(PureState, String), FileError> {
    let text = read(path)?;
    parse::<StateFile>(&text, path)?.into_state()
}

pub fn load_entangler(path: &Path) -> Result<EntanglerSpec, FileError> {
    let text = read(path)?;
    parse::<EntanglerFile>(&text, path)?.into_spec()
}

/// Square matrix stored as a list of rows of `[re, im]` pairs.
pub fn load_matrix(path: &Path) -> Result<OperatorMatrix, FileError> {
    let text = read(path)?;
    let rows: Vec<Vec<[f64; 2]>> = parse(&text, path)?;
    let n = rows.len();
    if n == 0 {
        return Err(FileError::Schema("matrix: no rows".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(FileError::Schema(format!(
                "matrix row {r}: expected {n} entries for a square matrix, found {}",
                row.len()
            )));
        }
        data.extend(to_complex(row, &format!("matrix row {r}"))?);
    }
    Ok(OperatorMatrix::from_rows(&[n], data)?)
}

/// Rounds to 12 significant digits; magnitudes below 1e-14 print as zero.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x.abs() < 1e-14 {
        return json!(0.0);
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(rounded)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

/// Fixed 12-significant-digit lowercase scientific notation.
pub fn sci(x: f64) -> String {
    let x = if x.abs() < 1e-14 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn sci_c(z: Complex64) -> String {
    let im = if z.im.abs() < 1e-14 { 0.0 } else { z.im };
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", sci(z.re), sci(im.abs()))
}

pub fn condition_report_json(r: &ConditionReport) -> Value {
    json!({
        "description": r.description,
        "dims": r.dims,
        "norm_sq": num(r.norm_sq),
        "tolerance": num(r.tolerance),
        "conditions": r.conditions.iter().map(|c| json!({
            "kind": c.kind,
            "pair": [c.pair.0, c.pair.1],
            "value": complex(c.value),
            "magnitude": num(c.magnitude),
            "normalized_magnitude": num(c.normalized_magnitude),
            "fires": c.fires,
        })).collect::<Vec<_>>(),
        "verdict": r.verdict,
    })
}

pub fn oracle_json(v: &OracleVerdict) -> Value {
    json!({
        "label": v.label.to_string(),
        "tie": v.tie.map(|t| t.to_string()),
        "purities": v.purities.iter().map(|&p| num(p)).collect::<Vec<_>>(),
        "pairwise_concurrences": v.pairwise_concurrences.as_ref().map(|pc| pc.iter().map(|(p, c)| json!({
            "pair": [p.0, p.1],
            "concurrence": num(*c),
        })).collect::<Vec<_>>()),
        "three_tangle": v.three_tangle.map(num),
    })
}

fn agreement(report: &ConditionReport, oracle: Option<&OracleVerdict>) -> Option<&'static str> {
    oracle.map(|o| if verdicts_agree(report.verdict, o.label) { "AGREE" } else { "DISAGREE" })
}

pub fn classify_json(report: &ConditionReport, oracle: Option<&OracleVerdict>) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "report": condition_report_json(report),
        "oracle": oracle.map(oracle_json),
        "agreement": agreement(report, oracle),
    })
}

pub fn classify_text(report: &ConditionReport, oracle: Option<&OracleVerdict>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state: {}", if report.description.is_empty() { "(unlabeled)" } else { &report.description });
    let _ = writeln!(out, "dims: {:?}  norm^2: {}", report.dims, sci(report.norm_sq));
    let _ = writeln!(out, "tolerance: {}", sci(report.tolerance));
    let _ = writeln!(out, "conditions:");
    for c in &report.conditions {
        let _ = writeln!(
            out,
            "  {:<3} {}  value {}  |value| {}  normalized {}  {}",
            c.kind.to_string(),
            c.pair,
            sci_c(c.value),
            sci(c.magnitude),
            sci(c.normalized_magnitude),
            if c.fires { "FIRES" } else { "-" }
        );
    }
    let _ = writeln!(out, "verdict: {}", report.verdict.as_str());
    if let Some(o) = oracle {
        out.push_str(&oracle_text(o));
        let _ = writeln!(out, "agreement: {}", agreement(report, Some(o)).unwrap_or("-"));
    }
    out
}

pub fn oracle_text(o: &OracleVerdict) -> String {
    let mut out = String::new();
    let _ = write!(out, "oracle: {}", o.label);
    if let Some(t) = o.tie {
        let _ = write!(out, " (tie with {t})");
    }
    out.push('\n');
    let purities: Vec<String> = o.purities.iter().map(|&p| sci(p)).collect();
    let _ = writeln!(out, "  purities: [{}]", purities.join(", "));
    if let Some(pc) = &o.pairwise_concurrences {
        for (p, c) in pc {
            let _ = writeln!(out, "  concurrence {p}: {}", sci(*c));
        }
    }
    if let Some(t) = o.three_tangle {
        let _ = writeln!(out, "  three-tangle: {}", sci(t));
    }
    out
}

fn expansions_json(p: &PropositionCheck) -> Value {
    match &p.expansions {
        Some(e) => json!(e
            .iter()
            .map(|(q, v)| json!({ "pair": [q.0, q.1], "value": complex(*v) }))
            .collect::<Vec<_>>()),
        None => Value::Null,
    }
}

/// Condition report for one evaluation target, with both families' explicit
/// expansions when the entangler is three-partite. `epr` and `ghz` must be
/// checks of the same spec and target.
pub fn proposition_json(epr: &PropositionCheck, ghz: &PropositionCheck) -> Value {
    json!({
        "target": ghz.target,
        "state": ghz.state.amps().iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "report": condition_report_json(&ghz.report),
        "expansions": {
            "EPR": expansions_json(epr),
            "GHZ": expansions_json(ghz),
        },
        "oracle": oracle_json(&ghz.oracle),
        "agreement": agreement(&ghz.report, Some(&ghz.oracle)),
    })
}

pub fn unitarity_json(u: &UnitarityCheck) -> Value {
    json!({ "deviation": num(u.deviation), "unitary": u.unitary })
}

pub fn residual_json(r: &ResidualCheck) -> Value {
    json!({ "residual": num(r.residual), "holds": r.holds })
}

pub fn braid_json(ybe: &ResidualCheck, braid: &BraidReport, qt: &QuasiTriangularCheck, tol: f64) -> Value {
    let rel = |v: &[crate::braid::RelationResidual]| {
        v.iter()
            .map(|r| json!({ "i": r.i, "j": r.j, "residual": num(r.residual) }))
            .collect::<Vec<_>>()
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "braid",
        "tolerance": num(tol),
        "strands": braid.strands,
        "ybe": residual_json(ybe),
        "braid_relations": {
            "far_commutation": rel(&braid.far_commutation),
            "adjacent": rel(&braid.adjacent),
            "max_far_commutation": num(braid.max_far_commutation),
            "max_adjacent": num(braid.max_adjacent),
            "holds": braid.holds,
        },
        "quasitriangular": {
            "relation": residual_json(&qt.relation),
            "braided_ybe": residual_json(&qt.braided_ybe),
        },
    })
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_to_twelve_digits() {
        assert_eq!(num(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(num(2.0f64.sqrt() * 1e5), json!(141421.356237));
        assert_eq!(num(-3e-17), json!(0.0));
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(sci(0.5), "5.00000000000e-1");
        assert_eq!(sci_c(Complex64::new(1.0, -2.0)), "1.00000000000e0 - 2.00000000000e0i");
    }

    #[test]
    fn state_file_length_message() {
        let f: StateFile = serde_json::from_str(r#"{"dims":[2,2,2],"amplitudes":[[1,0],[0,0]]}"#).unwrap();
        let e = f.into_state().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.message().contains("amplitudes: expected 8 entries"), "{}", e.message());
    }

    #[test]
    fn entangler_file_validation() {
        let f: EntanglerFile = serde_json::from_str(r#"{"m":2,"N":2,"alpha":[[1,0],[1,0],[1,0]]}"#).unwrap();
        assert!(f.into_spec().unwrap_err().message().starts_with("alpha: expected 4"));
        let f: EntanglerFile = serde_json::from_str(r#"{"m":1,"N":2,"alpha":[[1,0],[1,0]]}"#).unwrap();
        assert!(f.into_spec().unwrap_err().message().starts_with("m:"));
        assert!(serde_json::from_str::<EntanglerFile>(r#"{"m":2,"n":2,"alpha":[]}"#).is_err());
    }
}
