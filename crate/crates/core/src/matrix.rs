use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dense square matrix indexed by Fock numbers `(n, m)`, both in `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

pub type ComplexMatrix = SquareMatrix<Complex64>;
pub type RealMatrix = SquareMatrix<f64>;

impl<T: Copy + Default> SquareMatrix<T> {
    pub fn zeros(n_max: usize) -> Self {
        let dim = n_max + 1;
        Self { dim, data: vec![T::default(); dim * dim] }
    }
}

impl<T: Copy> SquareMatrix<T> {
    pub fn from_fn(n_max: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let dim = n_max + 1;
        let mut data = Vec::with_capacity(dim * dim);
        for n in 0..dim {
            for m in 0..dim {
                data.push(f(n, m));
            }
        }
        Self { dim, data }
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> T {
        self.data[n * self.dim + m]
    }

    #[inline]
    pub fn set(&mut self, n: usize, m: usize, value: T) {
        self.data[n * self.dim + m] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Iterates `(n, m, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let dim = self.dim;
        self.data.iter().enumerate().map(move |(k, v)| (k / dim, k % dim, *v))
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(usize, usize, T) -> U) -> SquareMatrix<U> {
        SquareMatrix::from_fn(self.n_max(), |n, m| f(n, m, self.get(n, m)))
    }
}

impl ComplexMatrix {
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|n| self.get(n, n)).sum()
    }
}

impl RealMatrix {
    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}
