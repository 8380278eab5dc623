//! Dense complex linear algebra at desk scale (d <= 32).

pub mod hermitian;
pub mod ket;
pub mod matrix;
pub mod random;

pub use hermitian::{
    hermitian_eigendecomposition, operator_norm_sq, unitary_from_generator, HermitianOperator, Spectrum,
};
pub use ket::{gram_deviation, norm_sqr, vdot, Ket};
pub use matrix::CMatrix;
pub use random::{haar_ket, random_haar_ket, random_hermitian, random_orthonormal_basis, SeededRng};
