//! Postselected quantum metrology at desk scale.
//!
//! Pure states in dimension up to a few dozen, dense complex matrices and a
//! Jacobi eigensolver. Everything is generic over [`Real`] (`f32` or `f64`);
//! the `*64` and `*32` aliases below fix the precision.
//!
//! ```
//! use psmetro_core::{qfi_postselected_derivative, EncodingConfig, HermitianOperator64, Ket64, Postselection64};
//!
//! let z = HermitianOperator64::pauli_z();
//! let plus = Ket64::from_real(&[1.0, 1.0]).unwrap();
//! let all = Postselection64::computational(2, [0, 1]).unwrap();
//! let m = qfi_postselected_derivative(&plus, &EncodingConfig::new(&z, 0.3), &all).unwrap();
//! assert!((m.qfi.unwrap() - 4.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod fisher;
pub mod linalg;
pub mod protocols;
pub mod quasiprob;
pub mod sampling;
pub mod scalar;
pub mod states;
pub mod tolerance;
pub mod weakvalue;

pub use error::{Error, Result};
pub use fisher::{
    check_saturation_conditions, check_theorem1, efficiency_xi, info_cost_rate, qfi_finite_difference, qfi_optimal,
    qfi_postselected_derivative, qfi_postselected_operator, qfi_postselected_weakvalues, qfi_pure, weak_value_records,
    CostModel, ProtocolMetrics, SaturationFlags, Theorem1Check, WeakValueRecord,
};
pub use linalg::{
    hermitian_eigendecomposition, operator_norm_sq, random_haar_ket, unitary_from_generator, CMatrix,
    HermitianOperator, Ket, SeededRng, Spectrum,
};
pub use protocols::{
    kd_tables_at_optimum, sweep, three_level_engine_metrics, three_level_limits, three_level_metrics,
    three_level_setup, SweepGrid, SweepRecord, ThreeLevelConfig, ThreeLevelLimits, ThreeLevelMetrics,
};
pub use quasiprob::{
    classicality_report, efficiency_decomposition, extended_kd_distribution, kd_distribution, kd_identity_check,
    postselected_qfi_from_quasiprob, quantum_modification, theorem2_check, wigner_formula, ClassicalityReport,
    ExtendedKdTable, KdTable, QuantumModification,
};
pub use sampling::{random_instance, trial_instance, RandomInstance};
pub use scalar::{Real, C};
pub use states::{encode, postselect, EncodingConfig, Postselection, PostselectionOutcome};
pub use tolerance::{Tolerances, TOL};
pub use weakvalue::{
    efficiency_via_phases, entangled_probe, entangled_scaling_report, first_order_meter_average, geometric_phase,
    optimal_postselection, optimal_wv_and_prob, phase_factors, spin_half_report, weak_value, wva_efficiency,
    EntangledProbeConfig, GeometricPhaseResult, MeterModel,
};

pub type Complex64 = C<f64>;
pub type Ket64 = Ket<f64>;
pub type HermitianOperator64 = HermitianOperator<f64>;
pub type Postselection64 = Postselection<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type ProtocolMetrics64 = ProtocolMetrics<f64>;
pub type ThreeLevelConfig64 = ThreeLevelConfig<f64>;
pub type KdTable64 = KdTable<f64>;

pub type Complex32 = C<f32>;
pub type Ket32 = Ket<f32>;
pub type HermitianOperator32 = HermitianOperator<f32>;
pub type Postselection32 = Postselection<f32>;
pub type CMatrix32 = CMatrix<f32>;
pub type ProtocolMetrics32 = ProtocolMetrics<f32>;
pub type ThreeLevelConfig32 = ThreeLevelConfig<f32>;
pub type KdTable32 = KdTable<f32>;
