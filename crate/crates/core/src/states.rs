//! Parameter encoding `|psi_theta> = exp(-i A theta)|psi_i>` and projective
//! postselection onto a subset of an orthonormal basis.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{gram_deviation, CMatrix, HermitianOperator, Ket};
use crate::scalar::{cis, Real, C};
use crate::tolerance::TOL;

/// Generator and parameter value of the encoding unitary.
#[derive(Debug, Clone, Copy)]
pub struct EncodingConfig<'a, T> {
    pub generator: &'a HermitianOperator<T>,
    pub theta: T,
}

impl<'a, T: Real> EncodingConfig<'a, T> {
    pub fn new(generator: &'a HermitianOperator<T>, theta: T) -> Self {
        Self { generator, theta }
    }
}

/// Orthonormal basis `{|f_k>}` with the selected subset defining
/// `F = sum_{k in selected} |f_k><f_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Postselection<T> {
    basis: Vec<Ket<T>>,
    selected: Vec<usize>,
}

impl<T: Real> Postselection<T> {
    pub fn new(basis: Vec<Ket<T>>, selected: impl IntoIterator<Item = usize>) -> Result<Self> {
        let dim = basis.first().map(Ket::dim).ok_or(Error::EmptyDimension)?;
        if basis.len() != dim {
            return Err(Error::InvalidPostselection(format!("basis has {} vectors in dimension {dim}", basis.len())));
        }
        for b in &basis {
            b.check_dim(dim)?;
        }
        let deviation = gram_deviation(&basis);
        if deviation > T::tol(TOL.orthonormality) {
            return Err(Error::NotOrthonormal { deviation: deviation.as_f64() });
        }
        let mut selected: Vec<usize> = selected.into_iter().collect();
        if selected.is_empty() {
            return Err(Error::InvalidPostselection("selected set is empty".into()));
        }
        if let Some(&k) = selected.iter().find(|&&k| k >= dim) {
            return Err(Error::InvalidPostselection(format!("index {k} out of range for dim {dim}")));
        }
        selected.sort_unstable();
        if selected.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPostselection("duplicate selected index".into()));
        }
        Ok(Self { basis, selected })
    }

    /// Computational basis with the given selection.
    pub fn computational(dim: usize, selected: impl IntoIterator<Item = usize>) -> Result<Self> {
        let basis = (0..dim).map(|k| Ket::basis(dim, k)).collect::<Result<Vec<_>>>()?;
        Self::new(basis, selected)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Ket<T>] {
        &self.basis
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn rank(&self) -> usize {
        self.selected.len()
    }

    pub fn is_selected(&self, k: usize) -> bool {
        self.selected.binary_search(&k).is_ok()
    }

    /// Indices of the failed (discarded) outcomes.
    pub fn rejected(&self) -> Vec<usize> {
        (0..self.dim()).filter(|k| !self.is_selected(*k)).collect()
    }

    /// The complementary postselection, absent when `F = 1`.
    pub fn complement(&self) -> Option<Self> {
        let rejected = self.rejected();
        if rejected.is_empty() {
            None
        } else {
            Some(Self { basis: self.basis.clone(), selected: rejected })
        }
    }

    /// Dense projector `F`.
    pub fn projector(&self) -> CMatrix<T> {
        let n = self.dim();
        let mut f = CMatrix::zeros(n, n);
        for &k in &self.selected {
            let v = self.basis[k].amps();
            for i in 0..n {
                for j in 0..n {
                    f[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        f
    }
}

/// One selected branch: `<f_k|psi_theta>` and its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch<T> {
    pub index: usize,
    pub amplitude: C<T>,
    pub prob: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostselectionOutcome<T> {
    /// Total success probability `p_theta^ps`.
    pub prob: T,
    /// Renormalized postselected state; `None` below the probability threshold.
    pub state: Option<Ket<T>>,
    /// Selected branches in ascending index order, including near-zero ones.
    pub per_branch: Vec<Branch<T>>,
}

/// `U(theta)|psi_i>`, computed in the eigenbasis of the generator.
pub fn encode<T: Real>(psi_i: &Ket<T>, cfg: &EncodingConfig<'_, T>) -> Result<Ket<T>> {
    cfg.generator.check_dim(psi_i.dim())?;
    let s = cfg.generator.spectrum()?;
    let mut out = vec![C::zero(); psi_i.dim()];
    for (a, v) in s.values.iter().zip(&s.vectors) {
        let coeff = v.inner(psi_i) * cis(-*a * cfg.theta);
        for (o, x) in out.iter_mut().zip(v.amps()) {
            *o += *x * coeff;
        }
    }
    Ket::normalized(out)
}

pub fn postselect<T: Real>(psi_theta: &Ket<T>, ps: &Postselection<T>) -> Result<PostselectionOutcome<T>> {
    psi_theta.check_dim(ps.dim())?;
    let per_branch: Vec<Branch<T>> = ps
        .selected()
        .iter()
        .map(|&k| {
            let amplitude = ps.basis()[k].inner(psi_theta);
            Branch { index: k, amplitude, prob: amplitude.norm_sqr() }
        })
        .collect();
    let prob = per_branch.iter().fold(T::zero(), |acc, b| acc + b.prob);
    let state = if prob >= T::lit(TOL.postselection_prob) {
        let mut amps = vec![C::zero(); ps.dim()];
        for b in &per_branch {
            for (o, f) in amps.iter_mut().zip(ps.basis()[b.index].amps()) {
                *o += *f * b.amplitude;
            }
        }
        Some(Ket::normalized(amps)?)
    } else {
        None
    };
    Ok(PostselectionOutcome { prob, state, per_branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_ket, random_hermitian, random_orthonormal_basis, SeededRng};
    use crate::scalar::c;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn plus() -> Ket<f64> {
        Ket::from_real(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn encode_eigenstate_only_picks_phase() {
        let z = HermitianOperator::<f64>::pauli_z();
        let out = encode(&Ket::basis(2, 0).unwrap(), &EncodingConfig::new(&z, 0.77)).unwrap();
        assert!((out.fidelity(&Ket::basis(2, 0).unwrap()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn encode_plus_state_direct_product() {
        let z = HermitianOperator::pauli_z();
        let out = encode(&plus(), &EncodingConfig::new(&z, FRAC_PI_4)).unwrap();
        // diag(e^{-i pi/4}, e^{i pi/4}) |+>
        let expected =
            [c(FRAC_PI_4.cos(), -FRAC_PI_4.sin()) * FRAC_1_SQRT_2, c(FRAC_PI_4.cos(), FRAC_PI_4.sin()) * FRAC_1_SQRT_2];
        for (a, b) in out.amps().iter().zip(expected) {
            assert!((*a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn encode_identity_at_zero_and_dimension_check() {
        let mut rng = SeededRng::new(4);
        let a = random_hermitian::<f64>(&mut rng, 3);
        let psi = haar_ket(&mut rng, 3);
        let out = encode(&psi, &EncodingConfig::new(&a, 0.0)).unwrap();
        assert!(out.amps().iter().zip(psi.amps()).all(|(x, y)| (*x - *y).norm() < 1e-13));
        assert!(matches!(encode(&plus(), &EncodingConfig::new(&a, 0.1)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn postselect_examples() {
        let half = postselect(&plus(), &Postselection::computational(2, [0]).unwrap()).unwrap();
        assert!((half.prob - 0.5).abs() < 1e-15);
        assert_eq!(half.state.unwrap(), Ket::basis(2, 0).unwrap());

        let zero = Ket::<f64>::basis(2, 0).unwrap();
        let full = postselect(&zero, &Postselection::computational(2, [0, 1]).unwrap()).unwrap();
        assert_eq!(full.prob, 1.0);
        assert_eq!(full.state.unwrap(), zero);

        let none = postselect(&zero, &Postselection::computational(2, [1]).unwrap()).unwrap();
        assert_eq!(none.prob, 0.0);
        assert!(none.state.is_none());
        assert_eq!(none.per_branch.len(), 1);
    }

    #[test]
    fn invalid_postselections() {
        assert!(Postselection::<f64>::computational(2, []).is_err());
        assert!(Postselection::<f64>::computational(2, [0, 0]).is_err());
        assert!(Postselection::<f64>::computational(2, [2]).is_err());
        let skew = vec![Ket::basis(2, 0).unwrap(), plus()];
        assert!(matches!(Postselection::new(skew, [0]), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn conservation_idempotence_unitarity() {
        let mut rng = SeededRng::new(99);
        for trial in 0..100 {
            let d = 2 + trial % 5;
            let psi = haar_ket::<f64>(&mut rng, d);
            let phi = haar_ket::<f64>(&mut rng, d);
            let rank = rng.int_in(1, d - 1);
            let ps = Postselection::new(random_orthonormal_basis(&mut rng, d), rng.subset(d, rank)).unwrap();
            let out = postselect(&psi, &ps).unwrap();
            let rest = postselect(&psi, &ps.complement().unwrap()).unwrap();
            assert!((out.prob + rest.prob - 1.0).abs() < 1e-12);
            let again = postselect(out.state.as_ref().unwrap(), &ps).unwrap();
            assert!((again.prob - 1.0).abs() < 1e-10);

            let a = random_hermitian::<f64>(&mut rng, d);
            let cfg = EncodingConfig::new(&a, rng.uniform_in(-3.0, 3.0));
            let lhs = encode(&psi, &cfg).unwrap().inner(&encode(&phi, &cfg).unwrap());
            assert!((lhs - psi.inner(&phi)).norm() < 1e-10);
        }
    }
}
