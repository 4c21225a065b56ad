//! The diagonal-plus-antidiagonal entangler family.
//!
//! `R` carries `α_{1…1}` and `α_{N…N}` on the diagonal corners; interior row
//! `q` holds a single entry in column `N^m + 1 − q` equal to the `α` indexed
//! by that column, i.e. the digit complement `j → N + 1 − j` of row `q`.

use num_complex::Complex64;
use serde::Serialize;

use crate::class_ops::{ClassKind, Pair};
use crate::concurrence::{classify, expansion_3q, ConditionReport};
use crate::error::{arg, Error, Result};
use crate::matrix::OperatorMatrix;
use crate::oracle::{oracle_classify, OracleVerdict};
use crate::state::{uniform_input, PureState};

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglerSpec {
    m: usize,
    n: usize,
    alpha: Vec<Complex64>,
}

impl EntanglerSpec {
    /// `alpha` is indexed by ascending multi-index, `1…1` first and `N…N` last.
    pub fn new(m: usize, n: usize, alpha: Vec<Complex64>) -> Result<Self> {
        if m < 2 {
            return arg(format!("entangler needs m >= 2 subsystems, got m = {m}"));
        }
        if n < 2 {
            return arg(format!("entangler needs N >= 2, got N = {n}"));
        }
        let expected = n
            .checked_pow(m as u32)
            .ok_or_else(|| Error::Argument(format!("N^m overflows for N = {n}, m = {m}")))?;
        if alpha.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: alpha.len(),
            });
        }
        if let Some(q) = alpha.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Validation(format!("alpha[{q}] is not finite")));
        }
        Ok(Self { m, n, alpha })
    }

    pub fn from_real(m: usize, n: usize, alpha: &[f64]) -> Result<Self> {
        Self::new(m, n, alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Unimodular parameters `e^{iθ_q}`.
    pub fn from_phases(m: usize, n: usize, thetas: &[f64]) -> Result<Self> {
        Self::new(m, n, thetas.iter().map(|&t| Complex64::from_polar(1.0, t)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.n; self.m]
    }

    pub fn size(&self) -> usize {
        self.alpha.len()
    }

    /// `max_q ||α_q| − 1|`.
    pub fn max_modulus_defect(&self) -> f64 {
        self.alpha.iter().map(|a| (a.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// The formal state `Σ_q α_q |q⟩`.
    pub fn coefficient_state(&self) -> PureState {
        PureState::new(&self.dims(), self.alpha.clone()).expect("spec invariants match state invariants")
    }
}

/// 0-based column of the single nonzero entry in row `q`.
pub fn partner(q: usize, size: usize) -> usize {
    if q == 0 || q == size - 1 {
        q
    } else {
        size - 1 - q
    }
}

pub fn build_r(spec: &EntanglerSpec) -> OperatorMatrix {
    let size = spec.size();
    let mut r = OperatorMatrix::zeros(&spec.dims());
    for q in 0..size {
        let col = partner(q, size);
        r.set(q, col, spec.alpha[col]);
    }
    r
}

/// The swap gate: fixes the first and last basis vectors and reverses the interior.
pub fn swap_gate(m: usize, n: usize) -> Result<OperatorMatrix> {
    if m < 2 || n < 2 {
        return arg(format!("swap gate needs m >= 2 and N >= 2, got m = {m}, N = {n}"));
    }
    let size = n.pow(m as u32);
    let perm: Vec<usize> = (0..size).map(|q| partner(q, size)).collect();
    OperatorMatrix::permutation(&vec![n; m], &perm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitarityCheck {
    /// `‖R·R† − I‖_max`.
    pub deviation: f64,
    pub unitary: bool,
}

pub fn check_unitary(r: &OperatorMatrix, tol: f64) -> UnitarityCheck {
    let rr = r.matmul(&r.adjoint()).expect("same size");
    let deviation = rr
        .max_abs_diff(&OperatorMatrix::identity(r.dims()))
        .expect("same size");
    UnitarityCheck {
        deviation,
        unitary: deviation <= tol,
    }
}

pub fn apply_entangler(spec: &EntanglerSpec, input: &PureState) -> Result<PureState> {
    if input.len() != spec.size() {
        return Err(Error::Dimension {
            expected: spec.size(),
            found: input.len(),
        });
    }
    let out = build_r(spec).apply(input.amps())?;
    PureState::new(&spec.dims(), out)
}

/// Which of `P·R` and `R·P` has the `α` vector, in ascending multi-index order,
/// on its diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagonalOrder {
    SwapThenR,
    RThenSwap,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSwapDecomposition {
    pub swap: OperatorMatrix,
    /// `P·R`.
    pub swap_r: OperatorMatrix,
    /// `R·P`.
    pub r_swap: OperatorMatrix,
    pub ordering: DiagonalOrder,
}

impl PhaseSwapDecomposition {
    pub fn both_diagonal(&self) -> bool {
        self.swap_r.is_exactly_diagonal() && self.r_swap.is_exactly_diagonal()
    }
}

pub fn decompose(spec: &EntanglerSpec) -> PhaseSwapDecomposition {
    let r = build_r(spec);
    let swap = swap_gate(spec.m, spec.n).expect("spec has m, N >= 2");
    let swap_r = swap.matmul(&r).expect("same size");
    let r_swap = r.matmul(&swap).expect("same size");
    let matches = |d: &OperatorMatrix| d.is_exactly_diagonal() && d.diagonal() == spec.alpha;
    let ordering = match (matches(&swap_r), matches(&r_swap)) {
        (true, true) => DiagonalOrder::Both,
        (true, false) => DiagonalOrder::SwapThenR,
        (false, true) => DiagonalOrder::RThenSwap,
        (false, false) => DiagonalOrder::Neither,
    };
    PhaseSwapDecomposition {
        swap,
        swap_r,
        r_swap,
        ordering,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvaluationTarget {
    /// The formal state `Σ α_q |q⟩`.
    Coefficients,
    /// `R` applied to the uniform product input.
    Output,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionCheck {
    pub kind: ClassKind,
    pub target: EvaluationTarget,
    pub state: PureState,
    pub report: ConditionReport,
    /// Pairs whose `kind` condition fires.
    pub fired_pairs: Vec<Pair>,
    /// Explicit three-partite expansion values of `kind`, when `m = 3`.
    pub expansions: Option<Vec<(Pair, Complex64)>>,
    pub oracle: OracleVerdict,
}

impl PropositionCheck {
    pub fn fires(&self) -> bool {
        !self.fired_pairs.is_empty()
    }
}

/// Evaluates the `kind` conditions on the coefficient state or on the state
/// produced from the uniform input, together with the oracle verdict.
pub fn proposition_check(
    spec: &EntanglerSpec,
    kind: ClassKind,
    target: EvaluationTarget,
    tol: f64,
) -> Result<PropositionCheck> {
    let state = match target {
        EvaluationTarget::Coefficients => spec.coefficient_state(),
        EvaluationTarget::Output => apply_entangler(spec, &uniform_input(spec.m, spec.n)?)?,
    };
    let mut report = classify(&state, tol)?;
    report.description = format!("{target:?} of entangler (m = {}, N = {})", spec.m, spec.n);
    let fired_pairs = report
        .family(kind)
        .filter(|c| c.fires)
        .map(|c| c.pair)
        .collect();
    let expansions = if spec.m == 3 {
        Some(
            Pair::all(3)
                .into_iter()
                .map(|p| Ok((p, expansion_3q(&state, kind, p)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let oracle = oracle_classify(&state, tol)?;
    Ok(PropositionCheck {
        kind,
        target,
        state,
        report,
        fired_pairs,
        expansions,
        oracle,
    })
}
