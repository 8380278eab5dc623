//! Seeded sampling of states, observables and bases.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, and Gaussians are `rand_distr::StandardNormal` draws from
//! it. Both are platform-independent, so a seed reproduces the same stream
//! everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::hermitian::HermitianOperator;
use super::ket::{vdot, Ket};
use super::matrix::CMatrix;
use crate::scalar::{Real, C};

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.random_range(lo..=hi)
    }

    /// Standard normal.
    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn complex_gaussian<T: Real>(&mut self) -> C<T> {
        C::new(T::lit(self.gaussian()), T::lit(self.gaussian()))
    }

    /// Random subset of `0..n` with exactly `k` elements, ascending.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k.min(n) {
            let j = self.int_in(i, n - 1);
            idx.swap(i, j);
        }
        let mut out = idx[..k.min(n)].to_vec();
        out.sort_unstable();
        out
    }
}

/// Haar-distributed ket: independent complex Gaussians, normalized.
pub fn haar_ket<T: Real>(rng: &mut SeededRng, dim: usize) -> Ket<T> {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let amps: Vec<C<T>> = (0..dim).map(|_| rng.complex_gaussian()).collect();
        if let Ok(k) = Ket::normalized(amps) {
            return k;
        }
    }
}

/// Deterministic Haar ket for a given seed.
pub fn random_haar_ket<T: Real>(dim: usize, seed: u64) -> Ket<T> {
    haar_ket(&mut SeededRng::new(seed), dim)
}

/// GUE-type Hermitian matrix `(G + G^dag) / 2` with complex Gaussian `G`.
pub fn random_hermitian<T: Real>(rng: &mut SeededRng, dim: usize) -> HermitianOperator<T> {
    let g = CMatrix::from_fn(dim, dim, |_, _| rng.complex_gaussian::<T>());
    let half = C::new(T::lit(0.5), T::zero());
    let h = g.add(&g.adjoint()).expect("square").scale(half);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

/// Haar-random orthonormal basis (Gram-Schmidt, two passes, on Haar kets).
pub fn random_orthonormal_basis<T: Real>(rng: &mut SeededRng, dim: usize) -> Vec<Ket<T>> {
    let mut basis: Vec<Ket<T>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = haar_ket::<T>(rng, dim).into_amps();
        for _ in 0..2 {
            for b in &basis {
                let proj = vdot(b.amps(), &v);
                for (x, y) in v.iter_mut().zip(b.amps()) {
                    *x -= *y * proj;
                }
            }
        }
        if let Ok(k) = Ket::normalized(v) {
            basis.push(k);
        }
    }
    basis
}
