//! Yang-Baxter equation, Artin braid relations for the strand representation
//! `τ(bᵢ) = I^{⊗(i−1)} ⊗ R ⊗ I^{⊗(n−i−1)}`, and the universal R-matrix
//! relation `ℛ₁₂ℛ₁₃ℛ₂₃ = ℛ₂₃ℛ₁₃ℛ₁₂`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{arg, Result};
use crate::matrix::OperatorMatrix;

/// Largest total dimension `d^n` a strand representation may reach.
pub const MAX_STRAND_DIM: usize = 4096;

/// Per-strand dimension `d` of a `d² × d²` two-strand operator.
pub fn strand_dim(r: &OperatorMatrix) -> Result<usize> {
    let size = r.size();
    let d = (size as f64).sqrt().round() as usize;
    if d < 2 || d * d != size {
        return arg(format!(
            "two-strand operator must be d^2 x d^2 with d >= 2, got {size} x {size}"
        ));
    }
    Ok(d)
}

/// Swap `Π` on `V ⊗ V` with `dim V = d`.
pub fn swap_operator(d: usize) -> OperatorMatrix {
    let perm: Vec<usize> = (0..d * d).map(|q| (q % d) * d + q / d).collect();
    OperatorMatrix::permutation(&[d, d], &perm).expect("transposition of a d x d grid is a permutation")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualCheck {
    pub residual: f64,
    pub holds: bool,
}

impl ResidualCheck {
    fn new(residual: f64, tol: f64) -> Self {
        Self {
            residual,
            holds: residual <= tol,
        }
    }
}

/// `‖(R⊗I)(I⊗R)(R⊗I) − (I⊗R)(R⊗I)(I⊗R)‖_max`.
pub fn check_ybe(r: &OperatorMatrix, tol: f64) -> Result<ResidualCheck> {
    let d = strand_dim(r)?;
    let id = OperatorMatrix::identity(&[d]);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let lhs = OperatorMatrix::chain(&[&r12, &r23, &r12])?;
    let rhs = OperatorMatrix::chain(&[&r23, &r12, &r23])?;
    Ok(ResidualCheck::new(lhs.max_abs_diff(&rhs)?, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiTriangularCheck {
    /// Residual of `ℛ₁₂ℛ₁₃ℛ₂₃ = ℛ₂₃ℛ₁₃ℛ₁₂`.
    pub relation: ResidualCheck,
    /// Yang-Baxter residual of the braided operator `Π·ℛ`.
    pub braided_ybe: ResidualCheck,
}

pub fn check_quasitriangular(r: &OperatorMatrix, tol: f64) -> Result<QuasiTriangularCheck> {
    let d = strand_dim(r)?;
    let id = OperatorMatrix::identity(&[d]);
    let pi = swap_operator(d);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let swap23 = id.kron(&pi);
    let r13 = OperatorMatrix::chain(&[&swap23, &r12, &swap23])?;
    let lhs = OperatorMatrix::chain(&[&r12, &r13, &r23])?;
    let rhs = OperatorMatrix::chain(&[&r23, &r13, &r12])?;
    let braided = pi.matmul(r)?;
    Ok(QuasiTriangularCheck {
        relation: ResidualCheck::new(lhs.max_abs_diff(&rhs)?, tol),
        braided_ybe: check_ybe(&braided, tol)?,
    })
}

/// Representation of the braid group on `n` strands induced by a two-strand operator.
#[derive(Debug)]
pub struct StrandRep {
    n: usize,
    d: usize,
    r: OperatorMatrix,
    generators: Vec<OnceLock<OperatorMatrix>>,
}

impl StrandRep {
    pub fn new(r: OperatorMatrix, n: usize) -> Result<Self> {
        let d = strand_dim(&r)?;
        if n < 2 {
            return arg(format!("strand representation needs n >= 2, got {n}"));
        }
        let total = d.checked_pow(n as u32).filter(|&t| t <= MAX_STRAND_DIM);
        if total.is_none() {
            return arg(format!("{d}^{n} exceeds the dense limit of {MAX_STRAND_DIM}"));
        }
        Ok(Self {
            n,
            d,
            r,
            generators: (1..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn strand_dim(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> &OperatorMatrix {
        &self.r
    }

    /// `τ(bᵢ)` for `1 ≤ i ≤ n − 1`, built on first use.
    pub fn generator(&self, i: usize) -> Result<&OperatorMatrix> {
        if i == 0 || i >= self.n {
            return arg(format!("generator b{i} out of range for {} strands", self.n));
        }
        Ok(self.generators[i - 1].get_or_init(|| {
            let left = OperatorMatrix::identity(&vec![self.d; i - 1]);
            let right = OperatorMatrix::identity(&vec![self.d; self.n - i - 1]);
            left.kron(&self.r).kron(&right)
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationResidual {
    pub i: usize,
    pub j: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BraidReport {
    pub strands: usize,
    /// `τ(bᵢ)τ(bⱼ) = τ(bⱼ)τ(bᵢ)` for `|i − j| ≥ 2`.
    pub far_commutation: Vec<RelationResidual>,
    /// `τ(bᵢ)τ(bᵢ₊₁)τ(bᵢ) = τ(bᵢ₊₁)τ(bᵢ)τ(bᵢ₊₁)`.
    pub adjacent: Vec<RelationResidual>,
    pub max_far_commutation: f64,
    pub max_adjacent: f64,
    pub holds: bool,
}

pub fn check_braid_relations(rep: &StrandRep, tol: f64) -> Result<BraidReport> {
    let n = rep.n;
    let mut far = Vec::new();
    for i in 1..n {
        for j in i + 2..n {
            let (a, b) = (rep.generator(i)?, rep.generator(j)?);
            let residual = a.matmul(b)?.max_abs_diff(&b.matmul(a)?)?;
            far.push(RelationResidual { i, j, residual });
        }
    }
    let mut adjacent = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (a, b) = (rep.generator(i)?, rep.generator(i + 1)?);
        let lhs = OperatorMatrix::chain(&[a, b, a])?;
        let rhs = OperatorMatrix::chain(&[b, a, b])?;
        adjacent.push(RelationResidual {
            i,
            j: i + 1,
            residual: lhs.max_abs_diff(&rhs)?,
        });
    }
    let max = |v: &[RelationResidual]| v.iter().map(|r| r.residual).fold(0.0, f64::max);
    let (max_far, max_adj) = (max(&far), max(&adjacent));
    Ok(BraidReport {
        strands: n,
        far_commutation: far,
        adjacent,
        max_far_commutation: max_far,
        max_adjacent: max_adj,
        holds: max_far <= tol && max_adj <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangler::{build_r, check_unitary, EntanglerSpec};
    use num_complex::Complex64;

    #[test]
    fn identity_and_swap_solve_ybe() {
        let id = OperatorMatrix::identity(&[2, 2]);
        assert_eq!(check_ybe(&id, 1e-12).unwrap().residual, 0.0);
        let swap = build_r(&EntanglerSpec::from_real(2, 2, &[1.0; 4]).unwrap());
        assert_eq!(swap, swap_operator(2));
        assert!(check_ybe(&swap, 1e-12).unwrap().residual < 1e-12);
        assert!(check_ybe(&swap_operator(3), 1e-12).unwrap().holds);
    }

    #[test]
    fn two_qubit_entangler_with_phase() {
        let mut alpha = vec![Complex64::new(1.0, 0.0); 4];
        alpha[3] = Complex64::from_polar(1.0, 0.7);
        let r = build_r(&EntanglerSpec::new(2, 2, alpha).unwrap());
        let check = check_ybe(&r, 1e-12).unwrap();
        assert!(check.residual.is_finite());
    }

    #[test]
    fn rejects_non_square_dims() {
        assert!(check_ybe(&OperatorMatrix::identity(&[2]), 1e-12).is_err());
        assert!(check_ybe(&OperatorMatrix::identity(&[3, 2]), 1e-12).is_err());
        assert!(check_quasitriangular(&OperatorMatrix::identity(&[8]), 1e-12).is_err());
        assert!(StrandRep::new(OperatorMatrix::identity(&[2, 2]), 1).is_err());
        assert!(StrandRep::new(OperatorMatrix::identity(&[2, 2]), 13).is_err());
    }

    #[test]
    fn generators_place_r_on_adjacent_slots() {
        let r = OperatorMatrix::from_fn(&[2, 2], |a, b| Complex64::new(a as f64, b as f64));
        let rep = StrandRep::new(r.clone(), 4).unwrap();
        let id = OperatorMatrix::identity(&[2]);
        assert_eq!(rep.generator(1).unwrap(), &r.kron(&id).kron(&id));
        assert_eq!(rep.generator(2).unwrap(), &id.kron(&r).kron(&id));
        assert_eq!(rep.generator(3).unwrap(), &id.kron(&id).kron(&r));
        assert!(rep.generator(0).is_err());
        assert!(rep.generator(4).is_err());
    }

    #[test]
    fn non_ybe_braid_residual_equals_ybe_residual() {
        let r = OperatorMatrix::from_fn(&[2, 2], |a, b| Complex64::new((a * 3 + b) as f64 * 0.1, (a as f64 - b as f64) * 0.2));
        let ybe = check_ybe(&r, 1e-12).unwrap();
        assert!(ybe.residual > 1e-6);
        for n in [3, 4] {
            let report = check_braid_relations(&StrandRep::new(r.clone(), n).unwrap(), 1e-12).unwrap();
            assert_eq!(report.adjacent[0].residual, ybe.residual);
            assert!(report.max_far_commutation < 1e-12);
        }
    }

    #[test]
    fn unitary_r_gives_unitary_generators() {
        let mut alpha = vec![Complex64::new(0.0, 1.0); 4];
        alpha[1] = Complex64::from_polar(1.0, 2.1);
        let r = build_r(&EntanglerSpec::new(2, 2, alpha).unwrap());
        let rep = StrandRep::new(r, 4).unwrap();
        for i in 1..4 {
            assert!(check_unitary(rep.generator(i).unwrap(), 1e-12).unitary);
        }
    }

    #[test]
    fn diagonal_solves_quasitriangular_relation() {
        let diag = OperatorMatrix::from_fn(&[2, 2], |a, b| {
            if a == b {
                Complex64::from_polar(1.0, a as f64 * 0.9)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let q = check_quasitriangular(&diag, 1e-12).unwrap();
        assert!(q.relation.residual < 1e-14);
        assert!(q.braided_ybe.holds);
        assert_eq!(check_quasitriangular(&OperatorMatrix::identity(&[2, 2]), 1e-12).unwrap().relation.residual, 0.0);
    }
}
