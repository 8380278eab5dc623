//! Numerical thresholds, in one place.

/// Every threshold used by the library. Values are `f64` and converted to the
/// working scalar at the point of use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|A_ij - conj(A_ji)|` allowed for a Hermitian operator.
    pub hermiticity: f64,
    /// `| ||psi|| - 1 |` allowed for a ket.
    pub normalization: f64,
    /// Gram matrix deviation allowed for an orthonormal basis.
    pub orthonormality: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm falls below this
    /// fraction of the full Frobenius norm.
    pub jacobi_offdiag: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues closer than this form one degenerate cluster.
    pub degeneracy_gap: f64,
    /// Amplitudes below this are treated as zero when fixing phases.
    pub amplitude_zero: f64,
    /// Below this postselection probability no renormalized state exists.
    pub postselection_prob: f64,
    /// Below this `|<f_k|psi>|` the intrinsic weak value is undefined.
    pub weak_value_overlap: f64,
    /// Negative variances smaller than this are clamped to zero.
    pub variance_clamp: f64,
    /// Slack on the efficiency bounds.
    pub bound_slack: f64,
    /// Threshold for the saturation conditions (zero mean, zero failed-branch numerators).
    pub saturation: f64,
    /// `|<A>|` below this is the anomalous regime with no finite optimal weak value.
    pub anomalous_mean: f64,
    /// `<A^2>` below this means `A|psi>` is the null vector.
    pub null_vector: f64,
    /// Negative-real and imaginary thresholds for KD classicality.
    pub kd_classical: f64,
    /// Bargmann products below this magnitude have no defined phase.
    pub bargmann_degenerate: f64,
    /// Residual allowed in the uniform Wigner-equality condition.
    pub uniform_condition: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-12,
        normalization: 1e-10,
        orthonormality: 1e-10,
        jacobi_offdiag: 1e-13,
        jacobi_max_sweeps: 100,
        degeneracy_gap: 1e-9,
        amplitude_zero: 1e-10,
        postselection_prob: 1e-12,
        weak_value_overlap: 1e-10,
        variance_clamp: 1e-12,
        bound_slack: 1e-9,
        saturation: 1e-9,
        anomalous_mean: 1e-12,
        null_vector: 1e-14,
        kd_classical: 1e-10,
        bargmann_degenerate: 1e-12,
        uniform_condition: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Library-wide thresholds.
pub const TOL: Tolerances = Tolerances::DEFAULT;
