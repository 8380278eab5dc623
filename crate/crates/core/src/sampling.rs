//! Random metrology instances for Monte-Carlo checks.
//!
//! Trial `t` of a run with seed `s` draws from its own generator seeded with
//! `s + t`, so any single trial can be replayed in isolation.

use crate::error::{Error, Result};
use crate::linalg::{haar_ket, random_hermitian, random_orthonormal_basis, HermitianOperator, Ket, SeededRng};
use crate::scalar::Real;
use crate::states::Postselection;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance<T: Real> {
    pub psi_i: Ket<T>,
    pub gen: HermitianOperator<T>,
    pub ps: Postselection<T>,
    pub theta: T,
}

/// Haar state, GUE generator, Haar basis with a uniformly sized random
/// selection (rank in `1..=dim`, or exactly `rank`), `theta` uniform in `[0, 2 pi)`.
pub fn random_instance<T: Real>(rng: &mut SeededRng, dim: usize, rank: Option<usize>) -> Result<RandomInstance<T>> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let rank = match rank {
        Some(r) if r == 0 || r > dim => {
            return Err(Error::InvalidParameter(format!("rank {r} outside 1..={dim}")));
        }
        Some(r) => r,
        None => rng.int_in(1, dim),
    };
    let psi_i = haar_ket(rng, dim);
    let gen = random_hermitian(rng, dim);
    let basis = random_orthonormal_basis(rng, dim);
    let selected = rng.subset(dim, rank);
    let theta = T::lit(rng.uniform_in(0.0, std::f64::consts::TAU));
    Ok(RandomInstance { psi_i, gen, ps: Postselection::new(basis, selected)?, theta })
}

/// Instance for trial `trial` of a run seeded with `seed`.
pub fn trial_instance<T: Real>(seed: u64, trial: u64, dim: usize, rank: Option<usize>) -> Result<RandomInstance<T>> {
    random_instance(&mut SeededRng::new(seed.wrapping_add(trial)), dim, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_replayable() {
        let a = trial_instance::<f64>(42, 7, 4, None).unwrap();
        let b = trial_instance::<f64>(49, 0, 4, None).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, trial_instance::<f64>(42, 8, 4, None).unwrap());
    }

    #[test]
    fn rank_bounds() {
        let mut rng = SeededRng::new(0);
        for _ in 0..50 {
            let r = random_instance::<f64>(&mut rng, 3, None).unwrap();
            assert!((1..=3).contains(&r.ps.rank()));
        }
        assert_eq!(random_instance::<f64>(&mut rng, 5, Some(2)).unwrap().ps.rank(), 2);
        assert!(random_instance::<f64>(&mut rng, 3, Some(0)).is_err());
        assert!(random_instance::<f64>(&mut rng, 3, Some(4)).is_err());
        assert!(random_instance::<f64>(&mut rng, 0, None).is_err());
    }
}
