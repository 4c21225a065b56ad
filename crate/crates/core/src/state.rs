//! Multipartite pure states as flat complex amplitude vectors.
//!
//! Amplitudes are stored row-major with subsystem 1 as the most significant
//! digit, so for three qubits the order is 111, 112, 121, 122, 211, 212, 221,
//! 222. User-facing digits are 1-based; flat offsets are 0-based.

use num_complex::Complex64;

use crate::error::{arg, Error, Result};
use crate::matrix::{OperatorMatrix, ONE, ZERO};

/// A per-subsystem index tuple together with its flat offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    /// 1-based digits, one per subsystem.
    pub digits: Vec<usize>,
    /// 0-based row-major offset.
    pub flat: usize,
}

impl MultiIndex {
    pub fn new(digits: &[usize], dims: &[usize]) -> Result<Self> {
        Ok(Self {
            flat: flatten(digits, dims)?,
            digits: digits.to_vec(),
        })
    }

    pub fn from_flat(flat: usize, dims: &[usize]) -> Result<Self> {
        Ok(Self {
            digits: unflatten(flat, dims)?,
            flat,
        })
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return arg("at least one subsystem is required");
    }
    if let Some(k) = dims.iter().position(|&d| d < 2) {
        return arg(format!(
            "subsystem {} has dimension {}, expected at least 2",
            k + 1,
            dims[k]
        ));
    }
    Ok(())
}

/// Maps 1-based digits to the 0-based row-major offset.
pub fn flatten(digits: &[usize], dims: &[usize]) -> Result<usize> {
    if digits.len() != dims.len() {
        return Err(Error::Dimension {
            expected: dims.len(),
            found: digits.len(),
        });
    }
    let mut flat = 0;
    for (k, (&j, &n)) in digits.iter().zip(dims).enumerate() {
        if j == 0 || j > n {
            return Err(Error::Index {
                subsystem: k + 1,
                digit: j,
                dim: n,
            });
        }
        flat = flat * n + (j - 1);
    }
    Ok(flat)
}

/// Inverse of [`flatten`].
pub fn unflatten(flat: usize, dims: &[usize]) -> Result<Vec<usize>> {
    let total: usize = dims.iter().product();
    if flat >= total {
        return arg(format!("flat offset {flat} out of range for {total} amplitudes"));
    }
    let mut digits = vec![0; dims.len()];
    let mut rest = flat;
    for (k, &n) in dims.iter().enumerate().rev() {
        digits[k] = rest % n + 1;
        rest /= n;
    }
    Ok(digits)
}

/// Unnormalized pure state of `dims.len()` subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: &[usize], amps: Vec<Complex64>) -> Result<Self> {
        check_dims(dims)?;
        let expected: usize = dims.iter().product();
        if amps.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: amps.len(),
            });
        }
        if let Some(q) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Validation(format!("amplitude {q} is not finite")));
        }
        Ok(Self {
            dims: dims.to_vec(),
            amps,
        })
    }

    pub fn from_real(dims: &[usize], amps: &[f64]) -> Result<Self> {
        Self::new(dims, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis vector with the given 1-based digits.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let mut amps = vec![ZERO; dims.iter().product()];
        amps[flatten(digits, dims)?] = ONE;
        Ok(Self {
            dims: dims.to_vec(),
            amps,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Amplitude at 1-based digits.
    pub fn amp(&self, digits: &[usize]) -> Result<Complex64> {
        Ok(self.amps[flatten(digits, &self.dims)?])
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_qubits(&self, m: usize) -> bool {
        self.dims.len() == m && self.dims.iter().all(|&d| d == 2)
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Validation("cannot normalize a zero-norm state".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// Reorders subsystems so that new subsystem `k` is old subsystem `order[k]` (1-based).
    pub fn permute_subsystems(&self, order: &[usize]) -> Result<Self> {
        let m = self.dims.len();
        let mut seen = vec![false; m];
        if order.len() != m {
            return Err(Error::Dimension {
                expected: m,
                found: order.len(),
            });
        }
        for &o in order {
            if o == 0 || o > m || seen[o - 1] {
                return arg(format!("invalid subsystem order {order:?}"));
            }
            seen[o - 1] = true;
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o - 1]).collect();
        let mut amps = vec![ZERO; self.amps.len()];
        let mut old = vec![0; m];
        for (q, a) in amps.iter_mut().enumerate() {
            let new = unflatten(q, &new_dims)?;
            for (k, &o) in order.iter().enumerate() {
                old[o - 1] = new[k];
            }
            *a = self.amps[flatten(&old, &self.dims)?];
        }
        Ok(Self {
            dims: new_dims,
            amps,
        })
    }

    /// Exchanges subsystems `r1` and `r2` (1-based).
    pub fn swap_subsystems(&self, r1: usize, r2: usize) -> Result<Self> {
        let m = self.dims.len();
        if r1 == 0 || r2 == 0 || r1 > m || r2 > m {
            return arg(format!("subsystems ({r1}, {r2}) out of range for m = {m}"));
        }
        let mut order: Vec<usize> = (1..=m).collect();
        order.swap(r1 - 1, r2 - 1);
        self.permute_subsystems(&order)
    }

    /// Applies a single-subsystem operator to subsystem `slot` (1-based).
    pub fn apply_local(&self, slot: usize, op: &OperatorMatrix) -> Result<Self> {
        let m = self.dims.len();
        if slot == 0 || slot > m {
            return arg(format!("subsystem {slot} out of range for m = {m}"));
        }
        let d = self.dims[slot - 1];
        if op.size() != d {
            return Err(Error::Dimension {
                expected: d,
                found: op.size(),
            });
        }
        let inner: usize = self.dims[slot..].iter().product();
        let outer: usize = self.dims[..slot - 1].iter().product();
        let mut amps = vec![ZERO; self.amps.len()];
        for o in 0..outer {
            for i in 0..inner {
                for r in 0..d {
                    let mut acc = ZERO;
                    for c in 0..d {
                        acc += op.get(r, c) * self.amps[(o * d + c) * inner + i];
                    }
                    amps[(o * d + r) * inner + i] = acc;
                }
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }
}

/// The conjugation operator: replaces every amplitude by its complex conjugate.
pub fn conjugate_state(s: &PureState) -> PureState {
    PureState {
        dims: s.dims.clone(),
        amps: s.amps.iter().map(|a| a.conj()).collect(),
    }
}

/// Tensor product of single-subsystem states.
pub fn product_state(factors: &[PureState]) -> Result<PureState> {
    if factors.is_empty() {
        return arg("product_state needs at least one factor");
    }
    if let Some(k) = factors.iter().position(|f| f.num_subsystems() != 1) {
        return arg(format!(
            "factor {} has {} subsystems, expected 1",
            k + 1,
            factors[k].num_subsystems()
        ));
    }
    let mut dims = Vec::with_capacity(factors.len());
    let mut amps = vec![ONE];
    for f in factors {
        dims.push(f.dims[0]);
        amps = amps
            .iter()
            .flat_map(|a| f.amps.iter().map(move |b| a * b))
            .collect();
    }
    Ok(PureState { dims, amps })
}

/// The unnormalized uniform product input `(|1⟩ + … + |N⟩)^⊗m`.
pub fn uniform_input(m: usize, n: usize) -> Result<PureState> {
    if m == 0 {
        return arg("m must be at least 1");
    }
    PureState::new(&vec![n; m], vec![ONE; n.pow(m as u32)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten(&[1, 1, 1], &[2, 2, 2]).unwrap(), 0);
        assert_eq!(flatten(&[2, 2, 2], &[2, 2, 2]).unwrap(), 7);
        assert_eq!(flatten(&[2, 1], &[2, 3]).unwrap(), 3);
    }

    #[test]
    fn flatten_matches_row_major_enumeration() {
        let dims = [2, 3];
        let mut expected = 0;
        for j1 in 1..=2 {
            for j2 in 1..=3 {
                assert_eq!(flatten(&[j1, j2], &dims).unwrap(), expected);
                expected += 1;
            }
        }
    }

    #[test]
    fn flatten_bijection_exhaustive() {
        for dims in [vec![2], vec![3, 2], vec![2, 2, 2], vec![3, 3, 3], vec![2, 3, 3]] {
            let total: usize = dims.iter().product();
            for q in 0..total {
                let d = unflatten(q, &dims).unwrap();
                assert_eq!(flatten(&d, &dims).unwrap(), q);
                let mi = MultiIndex::from_flat(q, &dims).unwrap();
                assert_eq!(MultiIndex::new(&mi.digits, &dims).unwrap(), mi);
            }
        }
    }

    #[test]
    fn flatten_names_offending_subsystem() {
        match flatten(&[1, 3, 1], &[2, 2, 2]) {
            Err(Error::Index { subsystem, digit, dim }) => {
                assert_eq!((subsystem, digit, dim), (2, 3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(flatten(&[0, 1], &[2, 2]), Err(Error::Index { subsystem: 1, .. })));
        assert!(flatten(&[1, 1], &[2, 2, 2]).is_err());
        assert!(unflatten(8, &[2, 2, 2]).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let real = PureState::from_real(&[2, 2], &[0.5, -1.0, 2.0, 0.0]).unwrap();
        assert_eq!(conjugate_state(&real), real);
        let s = PureState::new(&[2], vec![c(0., 1.), ZERO]).unwrap();
        assert_eq!(conjugate_state(&s).amps(), &[c(0., -1.), ZERO]);
    }

    #[test]
    fn product_examples() {
        let e1 = PureState::from_real(&[2], &[1., 0.]).unwrap();
        let p = product_state(&[e1.clone(), e1]).unwrap();
        assert_eq!(p.amps(), &[ONE, ZERO, ZERO, ZERO]);

        let plus = PureState::from_real(&[2], &[1., 1.]).unwrap();
        let p = product_state(&[plus.clone(), plus.clone(), plus]).unwrap();
        assert_eq!(p.amps(), &[ONE; 8]);

        let u = PureState::new(&[2], vec![c(1., 0.), c(0., 2.)]).unwrap();
        let v = PureState::from_real(&[2], &[3., 0.]).unwrap();
        let p = product_state(&[u, v]).unwrap();
        assert_eq!(p.amps(), &[c(3., 0.), ZERO, c(0., 6.), ZERO]);
        assert_eq!(p.dims(), &[2, 2]);
    }

    #[test]
    fn product_errors() {
        assert!(product_state(&[]).is_err());
        let two = PureState::from_real(&[2, 2], &[1., 0., 0., 0.]).unwrap();
        assert!(product_state(&[two]).is_err());
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_input(1, 2).unwrap().amps(), &[ONE; 2]);
        let s = uniform_input(3, 2).unwrap();
        assert_eq!(s.amps(), &[ONE; 8]);
        assert_eq!(s.dims(), &[2, 2, 2]);
        assert_eq!(uniform_input(2, 3).unwrap().amps(), &[ONE; 9]);
        assert!(uniform_input(0, 2).is_err());
        assert!(uniform_input(2, 1).is_err());
    }

    #[test]
    fn new_validates() {
        assert!(PureState::new(&[2, 2], vec![ONE; 3]).is_err());
        assert!(PureState::new(&[], vec![]).is_err());
        assert!(PureState::new(&[1], vec![ONE]).is_err());
        assert!(PureState::new(&[2], vec![ONE, c(f64::NAN, 0.)]).is_err());
    }

    #[test]
    fn normalize_unit_norm() {
        let s = PureState::new(&[2, 3], (0..6).map(|k| c(k as f64, 1.0)).collect()).unwrap();
        assert!((s.normalize().unwrap().norm_sq() - 1.0).abs() < 1e-12);
        let z = PureState::new(&[2], vec![ZERO, ZERO]).unwrap();
        assert!(z.normalize().is_err());
    }

    #[test]
    fn swap_subsystems_moves_digits() {
        let s = PureState::basis(&[2, 3, 2], &[1, 3, 2]).unwrap();
        let t = s.swap_subsystems(1, 2).unwrap();
        assert_eq!(t.dims(), &[3, 2, 2]);
        assert_eq!(t.amp(&[3, 1, 2]).unwrap(), ONE);
        assert_eq!(t.swap_subsystems(1, 2).unwrap(), s);
    }

    #[test]
    fn apply_local_flips_middle_qubit() {
        let x = OperatorMatrix::from_rows(&[2], vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let s = PureState::basis(&[2, 2, 2], &[1, 1, 2]).unwrap();
        let t = s.apply_local(2, &x).unwrap();
        assert_eq!(t, PureState::basis(&[2, 2, 2], &[1, 2, 2]).unwrap());
        assert!(s.apply_local(4, &x).is_err());
    }
}
