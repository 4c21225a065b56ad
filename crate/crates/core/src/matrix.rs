//! Dense complex square matrices tagged with their tensor-factor dimensions.

use num_complex::Complex64;

use crate::error::{arg, Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex square matrix. `dims` records the subsystem
/// dimensions whose product is the matrix size.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dims: Vec<usize>,
    size: usize,
    data: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dims: &[usize]) -> Self {
        let size = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            size,
            data: vec![ZERO; size * size],
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let mut m = Self::zeros(dims);
        for i in 0..m.size {
            m.data[i * m.size + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. The entry count must be `size²`.
    pub fn from_rows(dims: &[usize], data: Vec<Complex64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if data.len() != size * size {
            return Err(Error::Dimension {
                expected: size * size,
                found: data.len(),
            });
        }
        Ok(Self {
            dims: dims.to_vec(),
            size,
            data,
        })
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let size: usize = dims.iter().product();
        let mut data = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                data.push(f(r, c));
            }
        }
        Self {
            dims: dims.to_vec(),
            size,
            data,
        }
    }

    /// Permutation matrix with a one at `(perm[c], c)`: column `c` is sent to row `perm[c]`.
    pub fn permutation(dims: &[usize], perm: &[usize]) -> Result<Self> {
        let mut m = Self::zeros(dims);
        if perm.len() != m.size {
            return Err(Error::Dimension {
                expected: m.size,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; m.size];
        for (c, &r) in perm.iter().enumerate() {
            if r >= m.size || seen[r] {
                return arg(format!("not a permutation: entry {r} at position {c}"));
            }
            seen[r] = true;
            m.data[r * m.size + c] = ONE;
        }
        Ok(m)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.size + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.size + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.size..(r + 1) * self.size]
    }

    /// Kronecker product; the result's dims are the concatenation of both operands' dims.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.size * other.size;
        let mut data = vec![ZERO; n * n];
        for i in 0..self.size {
            for j in 0..self.size {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.size {
                    let row = (i * other.size + k) * n + j * other.size;
                    for l in 0..other.size {
                        data[row + l] = a * other.get(k, l);
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, size: n, data }
    }

    /// Kronecker product of a non-empty list of factors, left to right.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a OperatorMatrix>) -> Result<Self> {
        let mut it = factors.into_iter();
        let first = match it.next() {
            Some(f) => f.clone(),
            None => return arg("empty Kronecker factor list"),
        };
        Ok(it.fold(first, |acc, f| acc.kron(f)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: other.size,
            });
        }
        let n = self.size;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let out = &mut data[i * n..(i + 1) * n];
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            size: n,
            data,
        })
    }

    /// Product of a non-empty chain `m[0]·m[1]·…`.
    pub fn chain(ms: &[&OperatorMatrix]) -> Result<Self> {
        let (first, rest) = match ms.split_first() {
            Some(x) => x,
            None => return arg("empty matrix product"),
        };
        rest.iter().try_fold((*first).clone(), |acc, m| acc.matmul(m))
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: v.len(),
            });
        }
        Ok((0..self.size)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(&self.dims, |r, c| self.get(c, r).conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            size: self.size,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            size: self.size,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: other.size,
            });
        }
        Ok(Self {
            dims: self.dims.clone(),
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    /// Entry-wise max modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entry-wise max modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_exactly_diagonal(&self) -> bool {
        (0..self.size).all(|r| (0..self.size).all(|c| r == c || self.get(r, c) == ZERO))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.size).map(|i| self.get(i, i)).collect()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.size {
            for c in r..self.size {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn retag(mut self, dims: &[usize]) -> Result<Self> {
        let size: usize = dims.iter().product();
        if size != self.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: size,
            });
        }
        self.dims = dims.to_vec();
        Ok(self)
    }
}
