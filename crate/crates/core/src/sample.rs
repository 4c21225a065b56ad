//! Random states, operators and entangler specs for property tests and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::entangler::EntanglerSpec;
use crate::matrix::OperatorMatrix;
use crate::state::{product_state, PureState};

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed direction with a random overall scale.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let total: usize = dims.iter().product();
    let amps = (0..total).map(|_| gaussian_complex(rng)).collect();
    PureState::new(dims, amps).expect("dims come from the caller")
}

pub fn random_product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let factors: Vec<PureState> = dims.iter().map(|&d| random_state(&[d], rng)).collect();
    product_state(&factors).expect("single-subsystem factors")
}

/// Random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> OperatorMatrix {
    let n: usize = dims.iter().product();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    OperatorMatrix::from_fn(dims, |r, c| cols[c][r])
}

pub fn random_unimodular_spec<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> EntanglerSpec {
    let thetas: Vec<f64> = (0..n.pow(m as u32))
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    EntanglerSpec::from_phases(m, n, &thetas).expect("m, n supplied by caller are valid")
}
