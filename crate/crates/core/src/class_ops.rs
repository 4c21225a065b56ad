//! Phase POVM elements and the EPR/GHZ class operators built from them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::matrix::{OperatorMatrix, ZERO};

/// Full `N × N` table of quantum phases `φ[k][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    n: usize,
    phases: Vec<f64>,
}

impl PhaseTable {
    /// Checks antisymmetry `φ[k][l] = −φ[l][k]` and a zero diagonal to `tol`.
    pub fn new(n: usize, phases: Vec<f64>, tol: f64) -> Result<Self> {
        if phases.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: phases.len(),
            });
        }
        for k in 0..n {
            if phases[k * n + k].abs() > tol {
                return Err(Error::Validation(format!(
                    "phase ({}, {}) must be zero, found {}",
                    k + 1,
                    k + 1,
                    phases[k * n + k]
                )));
            }
            for l in k + 1..n {
                let (a, b) = (phases[k * n + l], phases[l * n + k]);
                if (a + b).abs() > tol {
                    return Err(Error::Validation(format!(
                        "phases ({}, {}) = {a} and ({}, {}) = {b} are not antisymmetric",
                        k + 1,
                        l + 1,
                        l + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { n, phases })
    }

    /// Antisymmetric table from the upper-triangle phases listed row by row
    /// (`φ₁₂, φ₁₃, …, φ₁N, φ₂₃, …, φ_{N−1,N}`).
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: upper.len(),
            });
        }
        let mut phases = vec![0.0; n * n];
        let mut it = upper.iter();
        for k in 0..n {
            for l in k + 1..n {
                let p = *it.next().expect("length checked");
                phases[k * n + l] = p;
                phases[l * n + k] = -p;
            }
        }
        Ok(Self { n, phases })
    }

    pub fn uniform(n: usize, phi: f64) -> Self {
        Self::from_upper(n, &vec![phi; n * (n - 1) / 2]).expect("uniform table has the right length")
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.phases[k * self.n + l]
    }
}

/// One value of `φ` shared by every pair `k < l` of a subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAssignment {
    pub n: usize,
    pub phi: f64,
}

impl PhaseAssignment {
    /// `φ = π/2`, the slots carrying the concurrence pair.
    pub fn half_pi(n: usize) -> Self {
        Self { n, phi: FRAC_PI_2 }
    }

    /// `φ = π`, the σₓ-like slots of the GHZ operators.
    pub fn pi(n: usize) -> Self {
        Self { n, phi: PI }
    }

    pub fn table(&self) -> PhaseTable {
        PhaseTable::uniform(self.n, self.phi)
    }

    pub fn tilde(&self) -> OperatorMatrix {
        tilde_operator(self.n, self.phi)
    }
}

/// Exact `e^{iφ}` for the phases this crate uses, so that `i·i` is exactly `−1`.
fn phase(phi: f64) -> Complex64 {
    let quarter = phi / FRAC_PI_2;
    if quarter == quarter.round() && quarter.abs() < 1e6 {
        match (quarter as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, phi)
    }
}

/// POVM element with entries `e^{iφ_{k,l}}` (ones on the diagonal).
pub fn povm_element(table: &PhaseTable) -> OperatorMatrix {
    OperatorMatrix::from_fn(&[table.n], |k, l| phase(table.get(k, l)))
}

/// Zero-diagonal phase matrix: `e^{iφ}` above the diagonal, `e^{−iφ}` below.
pub fn tilde_operator(n: usize, phi: f64) -> OperatorMatrix {
    let table = PhaseTable::uniform(n, phi);
    let mut m = povm_element(&table);
    for k in 0..n {
        m.set(k, k, ZERO);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClassKind {
    Epr,
    Ghz,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Epr => "EPR",
            ClassKind::Ghz => "GHZ",
        })
    }
}

/// Subsystem pair `(r₁, r₂)`, 1-based with `r₁ < r₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair(pub usize, pub usize);

impl Pair {
    pub fn validate(self, m: usize) -> Result<Self> {
        let Pair(r1, r2) = self;
        if r1 == 0 || r1 >= r2 || r2 > m {
            return arg(format!("pair ({r1}, {r2}) invalid for m = {m}; need 1 <= r1 < r2 <= m"));
        }
        Ok(self)
    }

    /// All `C(m, 2)` pairs in lexicographic order.
    pub fn all(m: usize) -> Vec<Pair> {
        (1..=m)
            .flat_map(|a| (a + 1..=m).map(move |b| Pair(a, b)))
            .collect()
    }

    pub fn contains(self, r: usize) -> bool {
        self.0 == r || self.1 == r
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassOperatorSpec {
    pub dims: Vec<usize>,
    pub kind: ClassKind,
    pub pair: Pair,
}

impl ClassOperatorSpec {
    pub fn new(dims: &[usize], kind: ClassKind, pair: Pair) -> Result<Self> {
        pair.validate(dims.len())?;
        Ok(Self {
            dims: dims.to_vec(),
            kind,
            pair,
        })
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    /// Every spec of the given kind for `dims`, one per subsystem pair.
    pub fn enumerate(dims: &[usize], kind: ClassKind) -> Vec<Self> {
        Pair::all(dims.len())
            .into_iter()
            .map(|pair| Self {
                dims: dims.to_vec(),
                kind,
                pair,
            })
            .collect()
    }
}

/// Tensor-product class operator: `Δ̃(π/2)` on both paired slots, and on the
/// remaining slots the identity (EPR) or `Δ̃(π)` (GHZ).
pub fn class_operator(spec: &ClassOperatorSpec) -> Result<OperatorMatrix> {
    spec.pair.validate(spec.m())?;
    let factors: Vec<OperatorMatrix> = spec
        .dims
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            if spec.pair.contains(k + 1) {
                PhaseAssignment::half_pi(n).tilde()
            } else {
                match spec.kind {
                    ClassKind::Epr => OperatorMatrix::identity(&[n]),
                    ClassKind::Ghz => PhaseAssignment::pi(n).tilde(),
                }
            }
        })
        .collect();
    OperatorMatrix::kron_all(&factors)
}
