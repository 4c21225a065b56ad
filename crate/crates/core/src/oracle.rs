//! Brute-force entanglement oracle: reduced density matrices, purities,
//! Wootters concurrence and the three-tangle. None of this shares code with
//! the class-condition path, so agreement between the two is evidence.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::class_ops::Pair;
use crate::concurrence::Verdict;
use crate::error::{arg, Error, Result};
use crate::matrix::{OperatorMatrix, ZERO};
use crate::state::PureState;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    /// Dimensions of the retained subsystems.
    pub dims: Vec<usize>,
    pub matrix: OperatorMatrix,
}

fn to_nalgebra(m: &OperatorMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.size(), m.size(), m.data())
}

impl DensityMatrix {
    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(to_nalgebra(&self.matrix)).eigenvalues.iter().copied().collect()
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let h = self.matrix.hermiticity_defect();
        if h > HERMITIAN_TOL {
            return Err(Error::Validation(format!("density matrix not Hermitian (defect {h:e})")));
        }
        let t = self.matrix.trace();
        if (t.re - 1.0).abs() > TRACE_TOL || t.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!("density matrix trace {t} is not 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::Validation(format!("density matrix has eigenvalue {min:e} < 0")));
        }
        Ok(())
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Reduced state on the 1-based subsystems in `keep`, normalized to unit trace.
pub fn partial_trace(s: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return arg("partial_trace needs at least one retained subsystem");
    }
    let m = s.num_subsystems();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept[0] == 0 || kept[kept.len() - 1] > m {
        return arg(format!("invalid subsystem selection {keep:?} for m = {m}"));
    }
    let norm_sq = s.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Validation("cannot reduce a zero-norm state".into()));
    }
    let dims = s.dims();
    let keep_dims: Vec<usize> = kept.iter().map(|&k| dims[k - 1]).collect();
    let rest: Vec<usize> = (1..=m).filter(|k| !kept.contains(k)).collect();
    let ks: usize = keep_dims.iter().product();
    let rs: usize = rest.iter().map(|&k| dims[k - 1]).product();

    // amplitudes reshaped to (kept, rest)
    let mut block = vec![ZERO; ks * rs];
    let strides: Vec<usize> = (0..m).map(|k| dims[k + 1..].iter().product()).collect();
    for (q, a) in s.amps().iter().enumerate() {
        let digit = |k: usize| (q / strides[k - 1]) % dims[k - 1];
        let ki = kept.iter().fold(0, |acc, &k| acc * dims[k - 1] + digit(k));
        let ri = rest.iter().fold(0, |acc, &k| acc * dims[k - 1] + digit(k));
        block[ki * rs + ri] = *a;
    }
    let matrix = OperatorMatrix::from_fn(&keep_dims, |i, j| {
        let row_i = &block[i * rs..(i + 1) * rs];
        let row_j = &block[j * rs..(j + 1) * rs];
        row_i.iter().zip(row_j).map(|(a, b)| a * b.conj()).sum::<Complex64>() / norm_sq
    });
    Ok(DensityMatrix {
        dims: keep_dims,
        matrix,
    })
}

fn sigma_y_sigma_y() -> OperatorMatrix {
    let i = Complex64::new(0.0, 1.0);
    let sy = OperatorMatrix::from_rows(&[2], vec![ZERO, -i, i, ZERO]).expect("2x2");
    sy.kron(&sy)
}

/// Eigenvalues of `ρ` at or below this are treated as rounding noise.
const RANK_CUTOFF: f64 = 1e-14;

/// Two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, where `λ` are the
/// decreasing square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `λ` are evaluated as the singular values of `τ = Wᵀ (σ_y⊗σ_y) W`,
/// where the columns of `W` are the eigenvectors of `ρ` scaled by the square
/// roots of their eigenvalues. This keeps full precision for rank-deficient
/// `ρ`, where a square root of the spin-flipped product would amplify
/// rounding noise to about `1e-8`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims != [2, 2] {
        return arg(format!("Wootters concurrence needs a two-qubit state, got dims {:?}", rho.dims));
    }
    rho.validate()?;
    let eig = SymmetricEigen::new(to_nalgebra(&rho.matrix));
    let kept: Vec<usize> = (0..4).filter(|&k| eig.eigenvalues[k] > RANK_CUTOFF).collect();
    let w = DMatrix::from_fn(4, kept.len(), |r, c| {
        eig.eigenvectors[(r, kept[c])] * eig.eigenvalues[kept[c]].sqrt()
    });
    let tau = w.transpose() * to_nalgebra(&sigma_y_sigma_y()) * &w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.resize(4, 0.0);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// `2|a₁₁a₂₂ − a₁₂a₂₁| / norm²` for a two-qubit pure state.
pub fn pure_two_qubit_concurrence(s: &PureState) -> Result<f64> {
    if !s.is_qubits(2) {
        return arg(format!("expected a two-qubit state, got dims {:?}", s.dims()));
    }
    let a = s.amps();
    let norm_sq = s.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Validation("zero-norm state".into()));
    }
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm() / norm_sq)
}

/// Three-tangle `4|d₁ − 2d₂ + 4d₃|` of the normalized three-qubit state.
pub fn three_tangle(s: &PureState) -> Result<f64> {
    if !s.is_qubits(3) {
        return arg(format!("three-tangle needs dims [2, 2, 2], got {:?}", s.dims()));
    }
    let n = s.normalize()?;
    let a = |i: usize, j: usize, k: usize| n.amps()[i * 4 + j * 2 + k];
    let sq = |z: Complex64| z * z;
    let d1 = sq(a(0, 0, 0)) * sq(a(1, 1, 1))
        + sq(a(0, 0, 1)) * sq(a(1, 1, 0))
        + sq(a(0, 1, 0)) * sq(a(1, 0, 1))
        + sq(a(1, 0, 0)) * sq(a(0, 1, 1));
    let d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1)
        + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
    let d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1)
        + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleLabel {
    Product,
    /// The given 1-based subsystem factors off; the other two are entangled.
    Biseparable(usize),
    WClass,
    GhzClass,
    /// Entangled, for shapes other than three qubits where no finer label is computed.
    Entangled,
}

impl fmt::Display for OracleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleLabel::Product => f.write_str("PRODUCT"),
            OracleLabel::Biseparable(k) => write!(f, "BISEPARABLE({k})"),
            OracleLabel::WClass => f.write_str("W_CLASS"),
            OracleLabel::GhzClass => f.write_str("GHZ_CLASS"),
            OracleLabel::Entangled => f.write_str("ENTANGLED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub purities: Vec<f64>,
    /// Wootters concurrence of every two-qubit marginal, for all-qubit states.
    pub pairwise_concurrences: Option<Vec<(Pair, f64)>>,
    pub three_tangle: Option<f64>,
    pub label: OracleLabel,
    /// The competing label when the deciding quantity lies within a factor
    /// of ten of the tolerance.
    pub tie: Option<OracleLabel>,
}

fn near(x: f64, tol: f64) -> bool {
    x > tol / 10.0 && x <= tol * 10.0
}

/// Labels a pure state. Priority is PRODUCT > BISEPARABLE > GHZ > W.
pub fn oracle_classify(s: &PureState, tol: f64) -> Result<OracleVerdict> {
    let m = s.num_subsystems();
    let purities = (1..=m)
        .map(|k| partial_trace(s, &[k]).map(|r| r.purity()))
        .collect::<Result<Vec<_>>>()?;
    let mixedness: Vec<f64> = purities.iter().map(|p| (1.0 - p).abs()).collect();

    let all_qubits = s.dims().iter().all(|&d| d == 2);
    let pairwise_concurrences = if all_qubits && m >= 2 {
        Some(
            Pair::all(m)
                .into_iter()
                .map(|p| Ok((p, wootters_concurrence(&partial_trace(s, &[p.0, p.1])?)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let tangle = if s.is_qubits(3) { Some(three_tangle(s)?) } else { None };

    let worst = mixedness.iter().copied().fold(0.0, f64::max);
    let pure: Vec<usize> = (1..=m).filter(|&k| mixedness[k - 1] <= tol).collect();
    let mut tie = None;
    let label = if pure.len() == m {
        if near(worst, tol) {
            tie = Some(OracleLabel::Entangled);
        }
        OracleLabel::Product
    } else if let Some(t) = tangle {
        if let Some(&k) = pure.first() {
            if pure.len() > 1 {
                tie = Some(OracleLabel::Biseparable(pure[1]));
            }
            OracleLabel::Biseparable(k)
        } else if t > tol {
            if near(t, tol) {
                tie = Some(OracleLabel::WClass);
            }
            OracleLabel::GhzClass
        } else {
            if near(t, tol) {
                tie = Some(OracleLabel::GhzClass);
            }
            OracleLabel::WClass
        }
    } else {
        if near(worst, tol) {
            tie = Some(OracleLabel::Product);
        }
        OracleLabel::Entangled
    };
    if tie.is_none() && matches!(label, OracleLabel::Biseparable(_) | OracleLabel::GhzClass | OracleLabel::WClass) {
        let least_mixed = mixedness.iter().copied().filter(|&x| x > tol).fold(f64::INFINITY, f64::min);
        if near(least_mixed, tol) {
            tie = Some(OracleLabel::Product);
        }
    }
    Ok(OracleVerdict {
        purities,
        pairwise_concurrences,
        three_tangle: tangle,
        label,
        tie,
    })
}

/// Whether a condition verdict is consistent with an oracle label.
///
/// No condition firing pairs with PRODUCT. EPR-only firing pairs with W_CLASS
/// or a biseparable split. Any GHZ firing pairs with GHZ_CLASS. For shapes
/// without a fine label, firing pairs with ENTANGLED.
pub fn verdicts_agree(verdict: Verdict, label: OracleLabel) -> bool {
    match (verdict, label) {
        (Verdict::NoConditionFires, OracleLabel::Product) => true,
        (Verdict::WClassConditions, OracleLabel::WClass | OracleLabel::Biseparable(_)) => true,
        (Verdict::GhzClassConditions | Verdict::Both, OracleLabel::GhzClass) => true,
        (Verdict::NoConditionFires, _) | (_, OracleLabel::Product) => false,
        (_, OracleLabel::Entangled) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ghz() -> PureState {
        let h = FRAC_1_SQRT_2;
        PureState::from_real(&[2, 2, 2], &[h, 0., 0., 0., 0., 0., 0., h]).unwrap()
    }

    fn w() -> PureState {
        let t = 1.0 / 3f64.sqrt();
        PureState::from_real(&[2, 2, 2], &[0., t, t, 0., t, 0., 0., 0.]).unwrap()
    }

    fn bell() -> PureState {
        PureState::from_real(&[2, 2], &[FRAC_1_SQRT_2, 0., 0., FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn partial_trace_examples() {
        let r = partial_trace(&ghz(), &[1]).unwrap();
        assert!((r.matrix.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((r.matrix.get(1, 1).re - 0.5).abs() < 1e-15);
        assert_eq!(r.matrix.get(0, 1), ZERO);

        let r = partial_trace(&bell(), &[2]).unwrap();
        let half = OperatorMatrix::identity(&[2]).scale(Complex64::new(0.5, 0.0));
        assert!(r.matrix.max_abs_diff(&half).unwrap() < 1e-15);

        let prod = PureState::from_real(&[2, 3], &[1., 2., 0., 2., 4., 0.]).unwrap();
        for k in 1..=2 {
            let r = partial_trace(&prod, &[k]).unwrap();
            assert!((r.purity() - 1.0).abs() < 1e-12);
            r.validate().unwrap();
        }
    }

    #[test]
    fn partial_trace_rejects_bad_selection() {
        assert!(partial_trace(&ghz(), &[]).is_err());
        assert!(partial_trace(&ghz(), &[4]).is_err());
        assert!(partial_trace(&ghz(), &[1, 1]).is_err());
    }

    #[test]
    fn wootters_examples() {
        let c = wootters_concurrence(&partial_trace(&bell(), &[1, 2]).unwrap()).unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        let prod = PureState::from_real(&[2, 2], &[0.6, 0.8, 0., 0.]).unwrap();
        assert!(wootters_concurrence(&partial_trace(&prod, &[1, 2]).unwrap()).unwrap() < 1e-10);
        for p in Pair::all(3) {
            let c = wootters_concurrence(&partial_trace(&w(), &[p.0, p.1]).unwrap()).unwrap();
            assert!((c - 2.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn wootters_werner_states() {
        // p|ψ−⟩⟨ψ−| + (1 − p) I/4 has concurrence max(0, (3p − 1)/2)
        let h = FRAC_1_SQRT_2;
        let singlet = PureState::from_real(&[2, 2], &[0., h, -h, 0.]).unwrap();
        let proj = partial_trace(&singlet, &[1, 2]).unwrap().matrix;
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 0.95] {
            let quarter = OperatorMatrix::identity(&[2, 2]).scale(Complex64::new((1.0 - p) / 4.0, 0.0));
            let m = OperatorMatrix::from_fn(&[2, 2], |r, c| proj.get(r, c) * p + quarter.get(r, c));
            let rho = DensityMatrix { dims: vec![2, 2], matrix: m };
            let c = wootters_concurrence(&rho).unwrap();
            let want = ((3.0 * p - 1.0) / 2.0_f64).max(0.0);
            assert!((c - want).abs() < 1e-12, "p = {p}: {c} vs {want}");
        }
    }

    #[test]
    fn wootters_rejects_invalid_input() {
        let bad = DensityMatrix {
            dims: vec![2, 2],
            matrix: OperatorMatrix::identity(&[2, 2]),
        };
        assert!(wootters_concurrence(&bad).is_err());
        let single = partial_trace(&ghz(), &[1]).unwrap();
        assert!(wootters_concurrence(&single).is_err());
    }

    #[test]
    fn three_tangle_examples() {
        assert!((three_tangle(&ghz()).unwrap() - 1.0).abs() < 1e-12);
        assert!(three_tangle(&w()).unwrap() < 1e-15);
        assert!(three_tangle(&PureState::basis(&[2, 2, 2], &[2, 1, 2]).unwrap()).unwrap() < 1e-15);
        assert!(three_tangle(&bell()).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(oracle_classify(&ghz(), 1e-9).unwrap().label, OracleLabel::GhzClass);
        let v = oracle_classify(&w(), 1e-9).unwrap();
        assert_eq!(v.label, OracleLabel::WClass);
        assert!(v.tie.is_none());

        let one = PureState::basis(&[2], &[1]).unwrap();
        let mut amps = Vec::new();
        for a in one.amps() {
            amps.extend(bell().amps().iter().map(|b| a * b));
        }
        let s = PureState::new(&[2, 2, 2], amps).unwrap();
        let v = oracle_classify(&s, 1e-9).unwrap();
        assert_eq!(v.label, OracleLabel::Biseparable(1));
        let pc = v.pairwise_concurrences.unwrap();
        assert!((pc[2].1 - 1.0).abs() < 1e-10);

        let p = PureState::basis(&[3, 3], &[2, 3]).unwrap();
        assert_eq!(oracle_classify(&p, 1e-9).unwrap().label, OracleLabel::Product);
        let e = PureState::from_real(&[3, 2], &[1., 0., 0., 1., 0., 0.]).unwrap();
        assert_eq!(oracle_classify(&e, 1e-9).unwrap().label, OracleLabel::Entangled);
    }

    #[test]
    fn agreement_table() {
        assert!(verdicts_agree(Verdict::NoConditionFires, OracleLabel::Product));
        assert!(verdicts_agree(Verdict::GhzClassConditions, OracleLabel::GhzClass));
        assert!(verdicts_agree(Verdict::Both, OracleLabel::GhzClass));
        assert!(verdicts_agree(Verdict::WClassConditions, OracleLabel::WClass));
        assert!(verdicts_agree(Verdict::WClassConditions, OracleLabel::Biseparable(2)));
        assert!(!verdicts_agree(Verdict::GhzClassConditions, OracleLabel::WClass));
        assert!(!verdicts_agree(Verdict::NoConditionFires, OracleLabel::GhzClass));
        assert!(!verdicts_agree(Verdict::WClassConditions, OracleLabel::Product));
        assert!(verdicts_agree(Verdict::Both, OracleLabel::Entangled));
        assert!(!verdicts_agree(Verdict::NoConditionFires, OracleLabel::Entangled));
    }
}
