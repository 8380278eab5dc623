//! Hermitian operators and their spectral decomposition.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. Each rotation is the
//! real symmetric Jacobi rotation conjugated by the phase of the pivot, so the
//! pivot `(p, q)` is annihilated exactly and the diagonal stays real. At the
//! dimensions handled here (d <= 32) this converges quadratically in a handful
//! of sweeps.
//!
//! Output ordering is deterministic: eigenvalues ascend; every eigenvector has
//! its first nonzero amplitude real positive; inside a degenerate cluster the
//! vectors are ordered lexicographically by `(-|amp_i|, arg amp_i)`.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::ket::Ket;
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cis, principal_arg, Real, C};
use crate::tolerance::TOL;

/// Eigenvalues (ascending) with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Ket<T>>,
}

/// Hermitian observable with a lazily computed, cached spectrum.
#[derive(Debug)]
pub struct HermitianOperator<T> {
    entries: CMatrix<T>,
    spectrum: OnceLock<Result<Spectrum<T>>>,
}

impl<T: Real> Clone for HermitianOperator<T> {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Self { entries: self.entries.clone(), spectrum }
    }
}

impl<T: Real> PartialEq for HermitianOperator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Real> HermitianOperator<T> {
    /// Validates Hermiticity (relative to `max(1, max|A_ij|)`) and stores the
    /// exactly symmetrized matrix.
    pub fn new(entries: CMatrix<T>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare { rows: entries.rows(), cols: entries.cols() });
        }
        if entries.rows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if !entries.is_finite() {
            return Err(Error::InvalidParameter("non-finite operator entry".into()));
        }
        let scale = entries.as_slice().iter().fold(T::one(), |m, a| m.max(a.norm()));
        let deviation = entries.hermiticity_deviation();
        if deviation > T::tol(TOL.hermiticity) * scale {
            return Err(Error::NonHermitian { deviation: deviation.as_f64() });
        }
        let n = entries.rows();
        let half = T::lit(0.5);
        let sym = CMatrix::from_fn(n, n, |i, j| (entries[(i, j)] + entries[(j, i)].conj()) * half);
        Ok(Self { entries: sym, spectrum: OnceLock::new() })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(diag))
    }

    /// `sum_k a_k |v_k><v_k|` for orthonormal `vectors`.
    pub fn from_spectrum(values: &[T], vectors: &[Ket<T>]) -> Result<Self> {
        let dim = vectors.first().map(Ket::dim).ok_or(Error::EmptyDimension)?;
        if values.len() != vectors.len() {
            return Err(Error::DimensionMismatch { expected: vectors.len(), found: values.len() });
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (a, v) in values.iter().zip(vectors) {
            v.check_dim(dim)?;
            m = m.add(&CMatrix::outer(v.amps(), v.amps()).scale(C::new(*a, T::zero())))?;
        }
        Self::new(m)
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C::zero(), C::one());
        Self::new(CMatrix::from_rows(&[vec![o, l], vec![l, o]]).expect("2x2")).expect("Hermitian")
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (C::zero(), C::i());
        Self::new(CMatrix::from_rows(&[vec![o, -i], vec![i, o]]).expect("2x2")).expect("Hermitian")
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[T::one(), -T::one()]).expect("Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: dim })
        }
    }

    /// Cached spectral decomposition.
    pub fn spectrum(&self) -> Result<&Spectrum<T>> {
        self.spectrum.get_or_init(|| jacobi_eigen(&self.entries)).as_ref().map_err(Clone::clone)
    }

    pub fn eigenvalues(&self) -> Result<&[T]> {
        Ok(&self.spectrum()?.values)
    }

    pub fn eigenvectors(&self) -> Result<&[Ket<T>]> {
        Ok(&self.spectrum()?.vectors)
    }

    /// `A v` on raw amplitudes.
    pub fn apply(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        self.entries.apply(v)
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, psi: &Ket<T>) -> Result<T> {
        let av = self.apply(psi.amps())?;
        Ok(super::ket::vdot(psi.amps(), &av).re)
    }

    /// `<psi|A^2|psi> = ||A psi||^2`.
    pub fn square_expectation(&self, psi: &Ket<T>) -> Result<T> {
        Ok(super::ket::norm_sqr(&self.apply(psi.amps())?))
    }
}

/// Eigenvalues ascending with orthonormal eigenvectors, as owned values.
pub fn hermitian_eigendecomposition<T: Real>(op: &HermitianOperator<T>) -> Result<(Vec<T>, Vec<Ket<T>>)> {
    let s = op.spectrum()?;
    Ok((s.values.clone(), s.vectors.clone()))
}

/// `U(theta) = exp(-i A theta)` via the spectral decomposition.
pub fn unitary_from_generator<T: Real>(gen: &HermitianOperator<T>, theta: T) -> Result<CMatrix<T>> {
    let s = gen.spectrum()?;
    let n = gen.dim();
    let mut u = CMatrix::zeros(n, n);
    for (a, v) in s.values.iter().zip(&s.vectors) {
        let phase = cis(-*a * theta);
        let amps = v.amps();
        for i in 0..n {
            let vi = amps[i] * phase;
            for j in 0..n {
                u[(i, j)] += vi * amps[j].conj();
            }
        }
    }
    Ok(u)
}

/// `||A^2||_op = (max_k |a_k|)^2`.
pub fn operator_norm_sq<T: Real>(op: &HermitianOperator<T>) -> Result<T> {
    let m = op.eigenvalues()?.iter().fold(T::zero(), |m, a| m.max(a.abs()));
    Ok(m * m)
}

fn jacobi_eigen<T: Real>(input: &CMatrix<T>) -> Result<Spectrum<T>> {
    let n = input.rows();
    let mut a = input.clone();
    let mut v = CMatrix::<T>::identity(n);
    let frob = a.frobenius_norm();
    let threshold = T::tol(TOL.jacobi_offdiag) * frob;
    let two = T::lit(2.0);

    let mut converged = frob.is_zero();
    let mut sweep = 0;
    while !converged && sweep < TOL.jacobi_max_sweeps {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag.is_zero() {
                    continue;
                }
                let e = b / mag;
                let (alpha, beta) = (a[(p, p)].re, a[(q, q)].re);
                let theta = (beta - alpha) / (two * mag);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                rotate(&mut a, &mut v, p, q, cs, sn, e);
            }
        }
        sweep += 1;
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: TOL.jacobi_max_sweeps });
    }

    let mut pairs: Vec<(T, Ket<T>)> = (0..n)
        .map(|k| {
            let col: Vec<C<T>> = (0..n).map(|i| v[(i, k)]).collect();
            let ket = Ket::normalized(col).expect("Jacobi columns are unit vectors");
            (a[(k, k)].re, ket.canonical_phase())
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));

    // Reorder inside degenerate clusters.
    let gap = T::tol(TOL.degeneracy_gap);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 < gap {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| lexicographic_amp_order(x.1.amps(), y.1.amps()));
        }
        start = end;
    }

    let (values, vectors) = pairs.into_iter().unzip();
    Ok(Spectrum { values, vectors })
}

/// Applies `A <- V^dag A V`, `W <- W V` with
/// `V = [[c, s e], [-s conj(e), c]]` acting on indices `(p, q)`.
fn rotate<T: Real>(a: &mut CMatrix<T>, w: &mut CMatrix<T>, p: usize, q: usize, cs: T, sn: T, e: C<T>) {
    let n = a.rows();
    let (cc, se, sec) = (C::new(cs, T::zero()), e * sn, e.conj() * sn);
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * cc - akq * sec;
        a[(k, q)] = akp * se + akq * cc;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * cc - aqk * se;
        a[(q, k)] = apk * sec + aqk * cc;
    }
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
    for k in 0..n {
        let (wkp, wkq) = (w[(k, p)], w[(k, q)]);
        w[(k, p)] = wkp * cc - wkq * sec;
        w[(k, q)] = wkp * se + wkq * cc;
    }
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn lexicographic_amp_order<T: Real>(x: &[C<T>], y: &[C<T>]) -> Ordering {
    let tol = T::tol(TOL.amplitude_zero);
    let key = |z: C<T>| {
        let m = z.norm();
        let arg = if m > tol { principal_arg(z) } else { T::zero() };
        (-m, arg)
    };
    for (a, b) in x.iter().zip(y) {
        let (ka, kb) = (key(*a), key(*b));
        if (ka.0 - kb.0).abs() > tol {
            return ka.0.partial_cmp(&kb.0).unwrap_or(Ordering::Equal);
        }
        if (ka.1 - kb.1).abs() > tol {
            return ka.1.partial_cmp(&kb.1).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}
