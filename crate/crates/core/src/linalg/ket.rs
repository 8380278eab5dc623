use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real, C};
use crate::tolerance::TOL;

/// `<u|v>` for raw amplitude slices (conjugate-linear in `u`).
pub fn vdot<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

pub fn norm_sqr<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}

/// Normalized pure state in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<T> {
    amps: Vec<C<T>>,
}

impl<T: Real> Ket<T> {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if !amps.iter().all(|a| is_finite_c(*a)) {
            return Err(Error::NullVector);
        }
        let norm = norm_sqr(&amps).sqrt();
        if (norm - T::one()).abs() > T::tol(TOL.normalization) {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<C<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let norm = norm_sqr(&amps).sqrt();
        if !norm.is_finite() || norm <= T::min_positive_value().sqrt() {
            return Err(Error::NullVector);
        }
        let inv = T::one() / norm;
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[T]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| C::new(x, T::zero())).collect())
    }

    /// Computational basis state `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if k >= dim {
            return Err(Error::InvalidParameter(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = vec![C::zero(); dim];
        amps[k] = C::one();
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C<T>> {
        self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket<T>) -> C<T> {
        vdot(&self.amps, &other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Ket<T>) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }

    /// Multiplies by a global phase factor of unit modulus.
    pub fn with_phase(&self, phase: C<T>) -> Self {
        Self { amps: self.amps.iter().map(|a| *a * phase).collect() }
    }

    /// Index of the first amplitude with modulus above the zero threshold.
    pub fn first_nonzero(&self) -> Option<usize> {
        first_nonzero(&self.amps)
    }

    /// Fixes the global phase so the first nonzero amplitude is real positive.
    pub fn canonical_phase(&self) -> Self {
        match self.first_nonzero() {
            Some(i) => {
                let a = self.amps[i];
                self.with_phase(a.conj() / a.norm())
            }
            None => self.clone(),
        }
    }
}

pub(crate) fn first_nonzero<T: Real>(v: &[C<T>]) -> Option<usize> {
    let z = T::tol(TOL.amplitude_zero);
    v.iter().position(|a| a.norm() > z)
}

/// Orthonormality check of a list of kets: max `|<u_i|u_j> - delta_ij|`.
pub fn gram_deviation<T: Real>(basis: &[Ket<T>]) -> T {
    let mut dev = T::zero();
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            let target = if i == j { C::one() } else { C::zero() };
            dev = dev.max((u.inner(v) - target).norm());
        }
    }
    dev
}
