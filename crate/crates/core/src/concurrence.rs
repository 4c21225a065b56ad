//! Concurrence-class condition functionals.
//!
//! The canonical value of a condition is the unconjugated bilinear form
//! `Σ_{j,k} a_j a_k Δ̃[j,k]`. For three-partite states the explicit expansions
//! are also provided; they relate to the bilinear form by a factor `+2`
//! (EPR) and `−2` (GHZ).

use num_complex::Complex64;
use serde::Serialize;

use crate::class_ops::{class_operator, ClassKind, ClassOperatorSpec, Pair};
use crate::error::{arg, Error, Result};
use crate::matrix::{OperatorMatrix, ZERO};
use crate::state::PureState;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Bilinear form over the value of the EPR expansion.
pub const EPR_FACTOR: f64 = 2.0;
/// Bilinear form over the value of the GHZ expansion.
pub const GHZ_FACTOR: f64 = -2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionValue {
    pub kind: ClassKind,
    pub pair: Pair,
    pub value: Complex64,
    pub magnitude: f64,
    /// `magnitude / norm²`, zero for the zero vector.
    pub normalized_magnitude: f64,
    pub fires: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NoConditionFires,
    WClassConditions,
    GhzClassConditions,
    Both,
}

impl Verdict {
    pub fn from_families(epr_fires: bool, ghz_fires: bool) -> Self {
        match (epr_fires, ghz_fires) {
            (false, false) => Verdict::NoConditionFires,
            (true, false) => Verdict::WClassConditions,
            (false, true) => Verdict::GhzClassConditions,
            (true, true) => Verdict::Both,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoConditionFires => "NO_CONDITION_FIRES",
            Verdict::WClassConditions => "W_CLASS_CONDITIONS",
            Verdict::GhzClassConditions => "GHZ_CLASS_CONDITIONS",
            Verdict::Both => "BOTH",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub description: String,
    pub dims: Vec<usize>,
    pub norm_sq: f64,
    pub tolerance: f64,
    /// EPR conditions for every pair, then GHZ conditions for every pair.
    pub conditions: Vec<ConditionValue>,
    pub verdict: Verdict,
}

impl ConditionReport {
    pub fn family(&self, kind: ClassKind) -> impl Iterator<Item = &ConditionValue> {
        self.conditions.iter().filter(move |c| c.kind == kind)
    }

    pub fn get(&self, kind: ClassKind, pair: Pair) -> Option<&ConditionValue> {
        self.conditions.iter().find(|c| c.kind == kind && c.pair == pair)
    }

    pub fn any_fires(&self, kind: ClassKind) -> bool {
        self.family(kind).any(|c| c.fires)
    }
}

/// `Σ_{j,k} a_j a_k op[j,k]` over the unconjugated amplitudes.
pub fn bilinear_condition(s: &PureState, op: &OperatorMatrix) -> Result<Complex64> {
    if op.size() != s.len() {
        return Err(Error::Dimension {
            expected: s.len(),
            found: op.size(),
        });
    }
    let a = s.amps();
    Ok(a.iter()
        .enumerate()
        .filter(|(_, aj)| **aj != ZERO)
        .map(|(j, aj)| aj * op.row(j).iter().zip(a).map(|(o, ak)| o * ak).sum::<Complex64>())
        .sum())
}

fn require_tripartite(s: &PureState, pair: Pair) -> Result<()> {
    if s.num_subsystems() != 3 {
        return arg(format!(
            "three-partite expansion needs m = 3, state has m = {}",
            s.num_subsystems()
        ));
    }
    pair.validate(3)?;
    Ok(())
}

/// Amplitude lookup with 0-based digits.
fn amp3(s: &PureState, d: [usize; 3]) -> Complex64 {
    let dims = s.dims();
    s.amps()[(d[0] * dims[1] + d[1]) * dims[2] + d[2]]
}

/// Explicit three-partite EPR/W expansion for `pair`:
/// `Σ_{k<l} Σ_{k<l} Σ_x (α[r₁=k, r₂=l, x] α[r₁=l, r₂=k, x] − α[r₁=k, r₂=k, x] α[r₁=l, r₂=l, x])`,
/// where `x` runs over the shared digit of the remaining subsystem.
pub fn epr_expansion_3q(s: &PureState, pair: Pair) -> Result<Complex64> {
    require_tripartite(s, pair)?;
    let Pair(r1, r2) = pair;
    let other = 6 - r1 - r2;
    let dims = s.dims();
    let (n1, n2, nt) = (dims[r1 - 1], dims[r2 - 1], dims[other - 1]);
    let at = |a: usize, b: usize, x: usize| {
        let mut d = [0; 3];
        d[r1 - 1] = a;
        d[r2 - 1] = b;
        d[other - 1] = x;
        amp3(s, d)
    };
    let mut sum = ZERO;
    for k1 in 0..n1 {
        for l1 in k1 + 1..n1 {
            for k2 in 0..n2 {
                for l2 in k2 + 1..n2 {
                    for x in 0..nt {
                        sum += at(k1, l2, x) * at(l1, k2, x) - at(k1, k2, x) * at(l1, l2, x);
                    }
                }
            }
        }
    }
    Ok(sum)
}

/// Explicit three-partite GHZ expansion. With `T1 = α_{k₁l₂l₃}α_{l₁k₂k₃}`,
/// `T2 = α_{k₁l₂k₃}α_{l₁k₂l₃}`, `T3 = α_{k₁k₂l₃}α_{l₁l₂k₃}` and
/// `T4 = α_{k₁k₂k₃}α_{l₁l₂l₃}` summed over `k < l` on every slot:
/// pair (1,2) is `T1 + T2 − T3 − T4`, pair (1,3) is `T1 − T2 + T3 − T4`,
/// pair (2,3) is `−T1 + T2 + T3 − T4`.
pub fn ghz_expansion_3q(s: &PureState, pair: Pair) -> Result<Complex64> {
    require_tripartite(s, pair)?;
    let signs: [f64; 3] = match pair {
        Pair(1, 2) => [1.0, 1.0, -1.0],
        Pair(1, 3) => [1.0, -1.0, 1.0],
        _ => [-1.0, 1.0, 1.0],
    };
    let dims = s.dims();
    let mut sum = ZERO;
    for k1 in 0..dims[0] {
        for l1 in k1 + 1..dims[0] {
            for k2 in 0..dims[1] {
                for l2 in k2 + 1..dims[1] {
                    for k3 in 0..dims[2] {
                        for l3 in k3 + 1..dims[2] {
                            let t1 = amp3(s, [k1, l2, l3]) * amp3(s, [l1, k2, k3]);
                            let t2 = amp3(s, [k1, l2, k3]) * amp3(s, [l1, k2, l3]);
                            let t3 = amp3(s, [k1, k2, l3]) * amp3(s, [l1, l2, k3]);
                            let t4 = amp3(s, [k1, k2, k3]) * amp3(s, [l1, l2, l3]);
                            sum += t1 * signs[0] + t2 * signs[1] + t3 * signs[2] - t4;
                        }
                    }
                }
            }
        }
    }
    Ok(sum)
}

/// Expansion value for the matching kind.
pub fn expansion_3q(s: &PureState, kind: ClassKind, pair: Pair) -> Result<Complex64> {
    match kind {
        ClassKind::Epr => epr_expansion_3q(s, pair),
        ClassKind::Ghz => ghz_expansion_3q(s, pair),
    }
}

/// The class operators for a shape, EPR family first. Reuse across many states.
pub fn class_operators_for(dims: &[usize]) -> Vec<(ClassOperatorSpec, OperatorMatrix)> {
    [ClassKind::Epr, ClassKind::Ghz]
        .into_iter()
        .flat_map(|kind| ClassOperatorSpec::enumerate(dims, kind))
        .map(|spec| {
            let op = class_operator(&spec).expect("enumerated pairs are valid");
            (spec, op)
        })
        .collect()
}

/// Evaluates every EPR and GHZ condition and summarizes which families fire.
pub fn classify(s: &PureState, tol: f64) -> Result<ConditionReport> {
    classify_with(s, tol, &class_operators_for(s.dims()), "")
}

/// [`classify`] against prebuilt operators from [`class_operators_for`].
pub fn classify_with(
    s: &PureState,
    tol: f64,
    ops: &[(ClassOperatorSpec, OperatorMatrix)],
    description: &str,
) -> Result<ConditionReport> {
    if tol.is_nan() || tol <= 0.0 {
        return arg(format!("tolerance must be positive, got {tol}"));
    }
    let norm_sq = s.norm_sq();
    let conditions = ops
        .iter()
        .map(|(spec, op)| {
            let value = bilinear_condition(s, op)?;
            let magnitude = value.norm();
            let normalized_magnitude = if norm_sq > 0.0 { magnitude / norm_sq } else { 0.0 };
            Ok(ConditionValue {
                kind: spec.kind,
                pair: spec.pair,
                value,
                magnitude,
                normalized_magnitude,
                fires: normalized_magnitude > tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fires = |k: ClassKind| conditions.iter().any(|c| c.kind == k && c.fires);
    let verdict = Verdict::from_families(fires(ClassKind::Epr), fires(ClassKind::Ghz));
    Ok(ConditionReport {
        description: description.to_string(),
        dims: s.dims().to_vec(),
        norm_sq,
        tolerance: tol,
        conditions,
        verdict,
    })
}
