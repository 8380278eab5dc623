//! Kirkwood-Dirac quasiprobabilities of a pure state with respect to the
//! eigenbasis of the generator (rows) and the postselection basis (columns).
//!
//! The real part of the KD entry splits into the two-step projective joint
//! probability (the "Wigner formula") plus a correction built from the
//! nonselective post-measurement state `rho'`; the imaginary part equals the
//! companion term built with the `pi/2`-rotated projector.
//! [`QuantumModification`] keeps the two pieces apart.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fisher::{qfi_postselected_derivative, selected_numerator_weight};
use crate::linalg::{CMatrix, HermitianOperator, Ket};
use crate::scalar::{Real, C};
use crate::states::{EncodingConfig, Postselection};
use crate::tolerance::TOL;

/// Real `rows x cols` table.
pub type RealTable<T> = Vec<Vec<T>>;

/// `q[m][k] = <psi|a_m><a_m|f_k><f_k|psi>`.
#[derive(Debug, Clone, PartialEq)]
pub struct KdTable<T> {
    /// Eigenvalue of each row, ascending.
    pub row_values: Vec<T>,
    pub row_basis: Vec<Ket<T>>,
    pub col_basis: Vec<Ket<T>>,
    pub entries: Vec<Vec<C<T>>>,
}

impl<T: Real> KdTable<T> {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_basis.len()
    }

    pub fn total(&self) -> C<T> {
        self.entries.iter().flatten().fold(C::zero(), |a, b| a + b)
    }

    pub fn row_marginals(&self) -> Vec<C<T>> {
        self.entries.iter().map(|r| r.iter().fold(C::zero(), |a, b| a + b)).collect()
    }

    pub fn col_marginals(&self) -> Vec<C<T>> {
        (0..self.cols()).map(|k| self.entries.iter().fold(C::zero(), |a, r| a + r[k])).collect()
    }
}

/// `e[j][l][k] = <f_k|a_j><a_j|rho|a_l><a_l|f_k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedKdTable<T> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Real> ExtendedKdTable<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, l: usize, k: usize) -> C<T> {
        self.entries[(j * self.dim + l) * self.dim + k]
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn total(&self) -> C<T> {
        self.entries.iter().fold(C::zero(), |a, b| a + b)
    }

    pub fn classicality(&self) -> ClassicalityReport<T> {
        classicality_of(self.entries.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalityReport<T> {
    pub min_real: T,
    pub max_abs_imag: T,
    pub classical: bool,
}

/// Both pieces of `Re(q) - Q` and `Im(q)` as traces against `rho - rho'`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumModification<T> {
    /// `Tr((rho - rho') F_k) / 2`.
    pub real_part: RealTable<T>,
    /// `Tr((rho - rho') F_k^{pi/2}) / 2`.
    pub rotated: RealTable<T>,
}

impl<T: Real> QuantumModification<T> {
    /// `real_part + rotated`, the two terms added together.
    pub fn combined(&self) -> RealTable<T> {
        self.real_part.iter().zip(&self.rotated).map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x + *y).collect()).collect()
    }

    pub fn max_abs(&self) -> T {
        self.real_part.iter().chain(&self.rotated).flatten().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck<T> {
    /// `max |Re q - Q - real_part|`.
    pub max_residual: T,
    /// `max |Im q - rotated|`.
    pub max_imag_residual: T,
    /// `max |Im q| > 1e-10`.
    pub imag_flagged: bool,
}

/// The two terms of `xi` over the KD distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyDecomposition<T> {
    /// `4 sum_{k in F} p_k |A_w^k|^2`.
    pub weak_value_term: T,
    /// `(4/p) |sum_m sum_{k in F} a_m q_{m,k}|^2`.
    pub kd_term: T,
    pub xi: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Report<T> {
    /// `<a_m|psi><f_k|a_m> = <f_k|psi>` for all `m` and every selected `k`
    /// with non-vanishing overlap.
    pub uniform_cond48: bool,
    /// `q = Q` on every selected column.
    pub entrywise_equal: bool,
    pub xi: T,
}

pub fn kd_distribution<T: Real>(psi: &Ket<T>, gen: &HermitianOperator<T>, ps: &Postselection<T>) -> Result<KdTable<T>> {
    check(psi, gen, ps)?;
    let s = gen.spectrum()?;
    let entries = s
        .vectors
        .iter()
        .map(|a| {
            let pa = psi.inner(a);
            ps.basis().iter().map(|f| pa * a.inner(f) * f.inner(psi)).collect()
        })
        .collect();
    Ok(KdTable { row_values: s.values.clone(), row_basis: s.vectors.clone(), col_basis: ps.basis().to_vec(), entries })
}

pub fn extended_kd_distribution<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<ExtendedKdTable<T>> {
    check(psi, gen, ps)?;
    let s = gen.spectrum()?;
    let d = psi.dim();
    // <f_k|a_j> and <a_j|psi>
    let fa: Vec<Vec<C<T>>> = ps.basis().iter().map(|f| s.vectors.iter().map(|a| f.inner(a)).collect()).collect();
    let ap: Vec<C<T>> = s.vectors.iter().map(|a| a.inner(psi)).collect();
    let mut entries = Vec::with_capacity(d * d * d);
    for j in 0..d {
        for l in 0..d {
            let rho_jl = ap[j] * ap[l].conj();
            for row in &fa {
                entries.push(row[j] * rho_jl * row[l].conj());
            }
        }
    }
    Ok(ExtendedKdTable { dim: d, entries })
}

/// `4 sum q a a' / p - 4 |sum q a / p|^2` over the selected columns.
pub fn postselected_qfi_from_quasiprob<T: Real>(
    table: &ExtendedKdTable<T>,
    eigenvalues: &[T],
    selected: &[usize],
    p_ps: T,
) -> Result<T> {
    let d = table.dim();
    if eigenvalues.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: eigenvalues.len() });
    }
    if let Some(&k) = selected.iter().find(|&&k| k >= d) {
        return Err(Error::InvalidPostselection(format!("index {k} out of range for dim {d}")));
    }
    if p_ps < T::lit(TOL.postselection_prob) {
        return Err(Error::VanishingPostselection { prob: p_ps.as_f64() });
    }
    let mut second = T::zero();
    let mut first = C::zero();
    for &k in selected {
        for (j, aj) in eigenvalues.iter().enumerate() {
            for (l, al) in eigenvalues.iter().enumerate() {
                let q = table.get(j, l, k);
                second += (q * (*aj * *al)).re;
                first += q * *aj;
            }
        }
    }
    let four = T::lit(4.0);
    Ok(four * second / p_ps - four * (first / p_ps).norm_sqr())
}

/// `Q[m][k] = Tr(rho A_m F_k A_m)`.
pub fn wigner_formula<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<RealTable<T>> {
    check(psi, gen, ps)?;
    let s = gen.spectrum()?;
    let rho = CMatrix::outer(psi.amps(), psi.amps());
    let fs: Vec<CMatrix<T>> = ps.basis().iter().map(|f| CMatrix::outer(f.amps(), f.amps())).collect();
    s.vectors
        .iter()
        .map(|a| {
            let am = CMatrix::outer(a.amps(), a.amps());
            let rho_a = rho.matmul(&am)?;
            fs.iter().map(|f| Ok(rho_a.matmul(f)?.matmul(&am)?.trace().re)).collect()
        })
        .collect()
}

pub fn quantum_modification<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<QuantumModification<T>> {
    check(psi, gen, ps)?;
    let s = gen.spectrum()?;
    let d = psi.dim();
    let id = CMatrix::identity(d);
    let rho = CMatrix::outer(psi.amps(), psi.amps());
    let fs: Vec<CMatrix<T>> = ps.basis().iter().map(|f| CMatrix::outer(f.amps(), f.amps())).collect();
    let half = T::lit(0.5);
    let mut real_part = Vec::with_capacity(d);
    let mut rotated = Vec::with_capacity(d);
    for a in &s.vectors {
        let p = CMatrix::outer(a.amps(), a.amps());
        let q = id.sub(&p)?;
        let rho_prime = p.matmul(&rho)?.matmul(&p)?.add(&q.matmul(&rho)?.matmul(&q)?)?;
        let delta = rho.sub(&rho_prime)?;
        // exp(-i pi/2 A_m) = 1 + (e^{-i pi/2} - 1) A_m
        let u = id.add(&p.scale(-C::<T>::i() - C::one()))?;
        let u_dag = u.adjoint();
        let mut row_re = Vec::with_capacity(d);
        let mut row_rot = Vec::with_capacity(d);
        for f in &fs {
            row_re.push(delta.matmul(f)?.trace().re * half);
            let f_rot = u.matmul(f)?.matmul(&u_dag)?;
            row_rot.push(delta.matmul(&f_rot)?.trace().re * half);
        }
        real_part.push(row_re);
        rotated.push(row_rot);
    }
    Ok(QuantumModification { real_part, rotated })
}

pub fn kd_identity_check<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<IdentityCheck<T>> {
    let kd = kd_distribution(psi, gen, ps)?;
    let wig = wigner_formula(psi, gen, ps)?;
    let modif = quantum_modification(psi, gen, ps)?;
    let mut max_residual = T::zero();
    let mut max_imag_residual = T::zero();
    let mut max_imag = T::zero();
    for (m, row) in kd.entries.iter().enumerate() {
        for (k, q) in row.iter().enumerate() {
            max_residual = max_residual.max((q.re - wig[m][k] - modif.real_part[m][k]).abs());
            max_imag_residual = max_imag_residual.max((q.im - modif.rotated[m][k]).abs());
            max_imag = max_imag.max(q.im.abs());
        }
    }
    Ok(IdentityCheck { max_residual, max_imag_residual, imag_flagged: max_imag > T::lit(TOL.kd_classical) })
}

pub fn classicality_report<T: Real>(table: &KdTable<T>) -> ClassicalityReport<T> {
    classicality_of(table.entries.iter().flatten().copied())
}

fn classicality_of<T: Real>(entries: impl Iterator<Item = C<T>>) -> ClassicalityReport<T> {
    let (mut min_real, mut max_abs_imag) = (T::infinity(), T::zero());
    for q in entries {
        min_real = min_real.min(q.re);
        max_abs_imag = max_abs_imag.max(q.im.abs());
    }
    let tol = T::tol(TOL.kd_classical);
    ClassicalityReport { min_real, max_abs_imag, classical: min_real >= -tol && max_abs_imag <= tol }
}

/// `xi = 4 sum p_k |A_w^k|^2 - (4/p) |sum_m sum_k a_m q_{m,k}|^2` for the state
/// `psi` (already encoded).
pub fn efficiency_decomposition<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<EfficiencyDecomposition<T>> {
    let kd = kd_distribution(psi, gen, ps)?;
    let prob = ps.selected().iter().fold(T::zero(), |acc, &k| acc + ps.basis()[k].fidelity(psi));
    if prob < T::lit(TOL.postselection_prob) {
        return Err(Error::VanishingPostselection { prob: prob.as_f64() });
    }
    let four = T::lit(4.0);
    let weak_value_term = four * selected_numerator_weight(psi, gen, ps)?;
    let mut s = C::zero();
    for (a, row) in kd.row_values.iter().zip(&kd.entries) {
        for &k in ps.selected() {
            s += row[k] * *a;
        }
    }
    let kd_term = four * s.norm_sqr() / prob;
    Ok(EfficiencyDecomposition { weak_value_term, kd_term, xi: weak_value_term - kd_term })
}

pub fn theorem2_check<T: Real>(
    psi_theta: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<Theorem2Report<T>> {
    check(psi_theta, gen, ps)?;
    let xi = qfi_postselected_derivative(psi_theta, &EncodingConfig::new(gen, T::zero()), ps)?.xi;
    let s = gen.spectrum()?;
    let kd = kd_distribution(psi_theta, gen, ps)?;
    let wig = wigner_formula(psi_theta, gen, ps)?;

    let amp_tol = T::tol(TOL.amplitude_zero);
    let cond_tol = T::tol(TOL.uniform_condition);
    let uniform_cond48 = ps.selected().iter().all(|&k| {
        let f = &ps.basis()[k];
        let target = f.inner(psi_theta);
        target.norm() <= amp_tol
            || s.vectors.iter().all(|a| (a.inner(psi_theta) * f.inner(a) - target).norm() < cond_tol)
    });
    let kd_tol = T::tol(TOL.kd_classical);
    let entrywise_equal = kd
        .entries
        .iter()
        .zip(&wig)
        .all(|(q, w)| ps.selected().iter().all(|&k| (q[k] - C::new(w[k], T::zero())).norm() < kd_tol));
    Ok(Theorem2Report { uniform_cond48, entrywise_equal, xi })
}

fn check<T: Real>(psi: &Ket<T>, gen: &HermitianOperator<T>, ps: &Postselection<T>) -> Result<()> {
    gen.check_dim(psi.dim())?;
    psi.check_dim(ps.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::qfi_postselected_operator;
    use crate::linalg::{haar_ket, random_hermitian, random_orthonormal_basis, SeededRng};
    use crate::scalar::{c, cis};
    use std::f64::consts::FRAC_PI_8;

    fn plus() -> Ket<f64> {
        Ket::from_real(&[1.0, 1.0]).unwrap()
    }

    fn pm_basis() -> Postselection<f64> {
        Postselection::new(vec![plus(), Ket::from_real(&[1.0, -1.0]).unwrap()], [0]).unwrap()
    }

    /// Rows in computational order.
    fn z() -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn kd_simple_table() {
        let t = kd_distribution(&Ket::basis(2, 0).unwrap(), &z(), &pm_basis()).unwrap();
        let expect = [[0.5, 0.5], [0.0, 0.0]];
        for (row, want) in t.entries.iter().zip(expect) {
            for (q, x) in row.iter().zip(want) {
                assert!((q - c(x, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kd_commuting_is_diagonal() {
        let mut rng = SeededRng::new(6);
        let a = random_hermitian::<f64>(&mut rng, 4);
        let psi = haar_ket(&mut rng, 4);
        let ps = Postselection::new(a.eigenvectors().unwrap().to_vec(), [0, 1]).unwrap();
        let t = kd_distribution(&psi, &a, &ps).unwrap();
        for m in 0..4 {
            for k in 0..4 {
                let expect = if m == k { t.row_basis[m].fidelity(&psi) } else { 0.0 };
                assert!((t.entries[m][k] - c(expect, 0.0)).norm() < 1e-12);
            }
        }
        assert!(classicality_report(&t).classical);
    }

    #[test]
    fn kd_marginals() {
        let mut rng = SeededRng::new(61);
        for _ in 0..100 {
            let d = rng.int_in(2, 6);
            let a = random_hermitian::<f64>(&mut rng, d);
            let psi = haar_ket(&mut rng, d);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), [0]).unwrap();
            let t = kd_distribution(&psi, &a, &ps).unwrap();
            assert!((t.total() - c(1.0, 0.0)).norm() < 1e-10);
            for (m, r) in t.row_marginals().iter().enumerate() {
                assert!((r - c(t.row_basis[m].fidelity(&psi), 0.0)).norm() < 1e-10);
            }
            for (k, col) in t.col_marginals().iter().enumerate() {
                assert!((col - c(ps.basis()[k].fidelity(&psi), 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn extended_simple_table() {
        let e = extended_kd_distribution(&Ket::basis(2, 0).unwrap(), &z(), &pm_basis()).unwrap();
        for j in 0..2 {
            for l in 0..2 {
                for k in 0..2 {
                    let expect = if j == 0 && l == 0 { 0.5 } else { 0.0 };
                    assert!((e.get(j, l, k) - c(expect, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn extended_invariants_and_factorization() {
        let mut rng = SeededRng::new(62);
        for _ in 0..50 {
            let d = rng.int_in(2, 5);
            let a = random_hermitian::<f64>(&mut rng, d);
            let psi = haar_ket(&mut rng, d);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), [0]).unwrap();
            let e = extended_kd_distribution(&psi, &a, &ps).unwrap();
            let q = kd_distribution(&psi, &a, &ps).unwrap();
            assert!((e.total() - c(1.0, 0.0)).norm() < 1e-10);
            for k in 0..d {
                let pk = ps.basis()[k].fidelity(&psi);
                for j in 0..d {
                    assert!(e.get(j, j, k).im.abs() < 1e-12 && e.get(j, j, k).re >= -1e-12);
                    for l in 0..d {
                        let lhs = e.get(j, l, k) * pk;
                        let rhs = q.entries[j][k].conj() * q.entries[l][k];
                        assert!((lhs - rhs).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn quasiprob_qfi_matches_operator_form() {
        let mut rng = SeededRng::new(63);
        for _ in 0..100 {
            let d = rng.int_in(2, 6);
            let a = random_hermitian::<f64>(&mut rng, d);
            let psi = haar_ket(&mut rng, d);
            let rank = rng.int_in(1, d);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), rng.subset(d, rank)).unwrap();
            let p: f64 = ps.selected().iter().map(|&k| ps.basis()[k].fidelity(&psi)).sum();
            if p < 1e-6 {
                continue;
            }
            let e = extended_kd_distribution(&psi, &a, &ps).unwrap();
            let via_kd = postselected_qfi_from_quasiprob(&e, a.eigenvalues().unwrap(), ps.selected(), p).unwrap();
            let direct = qfi_postselected_operator(&psi, &EncodingConfig::new(&a, 0.0), &ps).unwrap();
            assert!((via_kd - direct).abs() <= 1e-9 * direct.abs().max(1.0), "{via_kd} {direct}");
            if rank == 1 {
                assert!(via_kd.abs() < 1e-9);
            }
        }
        let e = extended_kd_distribution(&plus(), &z(), &pm_basis()).unwrap();
        assert!(matches!(
            postselected_qfi_from_quasiprob(&e, &[0.0, 1.0], &[0], 0.0),
            Err(Error::VanishingPostselection { .. })
        ));
    }

    #[test]
    fn wigner_and_modification_worked_instance() {
        let ps = Postselection::new(vec![plus(), Ket::from_real(&[1.0, -1.0]).unwrap()], [0]).unwrap();
        let w = wigner_formula(&plus(), &z(), &ps).unwrap();
        let m = quantum_modification(&plus(), &z(), &ps).unwrap();
        let q = kd_distribution(&plus(), &z(), &ps).unwrap();
        assert!((w[0][0] - 0.25).abs() < 1e-15);
        assert!((m.real_part[0][0] - 0.25).abs() < 1e-15);
        assert!(m.rotated[0][0].abs() < 1e-15);
        assert!((m.combined()[0][0] - 0.25).abs() < 1e-15);
        assert!((q.entries[0][0].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wigner_closed_form() {
        let mut rng = SeededRng::new(64);
        let a = random_hermitian::<f64>(&mut rng, 4);
        let psi = haar_ket(&mut rng, 4);
        let ps = Postselection::new(random_orthonormal_basis(&mut rng, 4), [2]).unwrap();
        let w = wigner_formula(&psi, &a, &ps).unwrap();
        let vecs = a.eigenvectors().unwrap();
        for (row, a_m) in w.iter().zip(vecs) {
            for (x, f) in row.iter().zip(ps.basis()) {
                let expect = a_m.fidelity(&psi) * a_m.fidelity(f);
                assert!((x - expect).abs() < 1e-12 && *x >= 0.0);
            }
        }
    }

    #[test]
    fn identity_on_random_states() {
        let mut rng = SeededRng::new(65);
        for _ in 0..100 {
            let d = rng.int_in(2, 5);
            let a = random_hermitian::<f64>(&mut rng, d);
            let psi = haar_ket(&mut rng, d);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), [0]).unwrap();
            let r = kd_identity_check(&psi, &a, &ps).unwrap();
            assert!(r.max_residual < 1e-10 && r.max_imag_residual < 1e-10);
        }
    }

    #[test]
    fn commuting_collapse() {
        let mut rng = SeededRng::new(66);
        let a = random_hermitian::<f64>(&mut rng, 4);
        let psi = haar_ket(&mut rng, 4);
        let ps = Postselection::new(a.eigenvectors().unwrap().to_vec(), [0, 3]).unwrap();
        let m = quantum_modification(&psi, &a, &ps).unwrap();
        assert!(m.max_abs() < 1e-12);
        let r = kd_identity_check(&psi, &a, &ps).unwrap();
        assert!(r.max_residual < 1e-12 && !r.imag_flagged);
    }

    #[test]
    fn constructed_nonclassical_witness() {
        let chi = 3.0 * std::f64::consts::FRAC_PI_4;
        let f0 = Ket::normalized(vec![c(FRAC_PI_8.cos(), 0.0), cis(chi) * FRAC_PI_8.sin()]).unwrap();
        let f1 = Ket::normalized(vec![c(-FRAC_PI_8.sin(), 0.0), cis(chi) * FRAC_PI_8.cos()]).unwrap();
        let ps = Postselection::new(vec![f0.clone(), f1], [0]).unwrap();
        let t = kd_distribution(&plus(), &z(), &ps).unwrap();
        // entry (|1>, f0) by direct product
        let one = Ket::basis(2, 1).unwrap();
        let direct = plus().inner(&one) * one.inner(&f0) * f0.inner(&plus());
        assert!(direct.re < 0.0);
        assert!((t.entries[1][0] - direct).norm() < 1e-14);
        assert!(!classicality_report(&t).classical);
    }

    #[test]
    fn decomposition_matches_xi() {
        let mut rng = SeededRng::new(67);
        for _ in 0..30 {
            let d = rng.int_in(2, 5);
            let a = random_hermitian::<f64>(&mut rng, d);
            let psi = haar_ket(&mut rng, d);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), rng.subset(d, 2)).unwrap();
            let dec = efficiency_decomposition(&psi, &a, &ps).unwrap();
            let m = qfi_postselected_derivative(&psi, &EncodingConfig::new(&a, 0.0), &ps).unwrap();
            assert!((dec.xi - m.xi).abs() < 1e-9 * m.xi.max(1.0));
        }
    }

    #[test]
    fn uniform_condition_one_dimensional_instance() {
        let a = HermitianOperator::from_real_diagonal(&[0.7]).unwrap();
        let psi = Ket::normalized(vec![cis(0.4)]).unwrap();
        let ps = Postselection::computational(1, [0]).unwrap();
        let r = theorem2_check(&psi, &a, &ps).unwrap();
        assert!(r.uniform_cond48 && r.entrywise_equal && r.xi < 1e-8);
    }

    #[test]
    fn uniform_condition_never_holds_for_qubits() {
        let mut rng = SeededRng::new(68);
        for _ in 0..200 {
            let psi = haar_ket::<f64>(&mut rng, 2);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, 2), [rng.int_in(0, 1)]).unwrap();
            if let Ok(r) = theorem2_check(&psi, &HermitianOperator::pauli_z(), &ps) {
                assert!(!r.uniform_cond48);
            }
        }
    }

    #[test]
    fn commuting_equality_without_uniform_condition() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let psi = Ket::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let ps = Postselection::computational(3, [0, 1]).unwrap();
        let r = theorem2_check(&psi, &a, &ps).unwrap();
        assert!(!r.uniform_cond48 && r.entrywise_equal);
        assert!(r.xi > 0.5);
        assert!(matches!(
            theorem2_check(&Ket::basis(3, 2).unwrap(), &a, &ps),
            Err(Error::VanishingPostselection { .. })
        ));
    }
}
