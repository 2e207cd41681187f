//! Square matrices of arbitrary-precision nonnegative integers.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// A dense square matrix over `BigUint`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![BigUint::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigUint::one();
        }
        m
    }

    /// Builds a matrix from rows of small counts.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * dim + j] = BigUint::from(v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.dim + j]
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigUint {
        &mut self.data[i * self.dim + j]
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                *t.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    /// Sum of entries over `rows x cols`.
    pub fn block_sum(&self, rows: &[usize], cols: &[usize]) -> BigUint {
        let mut s = BigUint::zero();
        for &i in rows {
            for &j in cols {
                s += self.get(i, j);
            }
        }
        s
    }

    pub fn trace(&self) -> BigUint {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Lossy conversion to floating point rows.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(f64::INFINITY))
                    .collect()
            })
            .collect()
    }

    /// Rows as small integers, for tests and display. Panics on overflow.
    pub fn to_u64_rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j).to_u64().expect("entry exceeds u64"))
                    .collect()
            })
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "IntMatrix{:?}", rows)
    }
}

/// Memoized powers of one matrix.
///
/// Experiments evaluate many entries of `A^p` for a handful of exponents;
/// the cache keeps each power computed once.
#[derive(Debug, Clone)]
pub struct PowerCache {
    base: IntMatrix,
    powers: HashMap<u64, IntMatrix>,
}

impl PowerCache {
    pub fn new(base: IntMatrix) -> Self {
        PowerCache {
            base,
            powers: HashMap::new(),
        }
    }

    pub fn power(&mut self, n: u64) -> &IntMatrix {
        let base = &self.base;
        self.powers.entry(n).or_insert_with(|| base.pow(n))
    }

    pub fn entry(&mut self, n: u64, i: usize, j: usize) -> BigUint {
        self.power(n).get(i, j).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_zero_is_identity() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(a.pow(0), IntMatrix::identity(2));
    }

    #[test]
    fn fibonacci_powers() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(a.pow(5).to_u64_rows(), vec![vec![8, 5], vec![5, 3]]);
        let big = a.pow(100);
        assert_eq!(
            big.get(0, 0).to_string(),
            "573147844013817084101" // F(101)
        );
    }

    #[test]
    fn cache_matches_direct_power() {
        let a = IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]]);
        let mut cache = PowerCache::new(a.clone());
        assert_eq!(cache.power(7), &a.pow(7));
        assert_eq!(cache.entry(4, 1, 1), BigUint::from(16u32));
    }
}
