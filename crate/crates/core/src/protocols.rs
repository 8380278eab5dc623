//! Three-level information-preserving protocol.
//!
//! Basis order is `|lambda>, |lambda_tilde>, |-lambda>` and the observable is
//! `diag(lambda, lambda_tilde, -lambda)`. Postselection keeps `f1, f2` of
//!
//! ```text
//! f1 = (|lambda> - |-lambda>) / sqrt 2
//! f2 = cos(alpha) (|lambda> + |-lambda>) / sqrt 2 + sin(alpha) |lambda_tilde>
//! f3 = -sin(alpha) (|lambda> + |-lambda>) / sqrt 2 + cos(alpha) |lambda_tilde>
//! ```
//!
//! and the encoded state is `(e^{ix}|lambda> + e^{-ix}|-lambda>)/sqrt 2` with
//! `x = phi - lambda delta_theta`. As `x -> 0` the protocol loses no Fisher
//! information to the discarded outcome while `I_Q -> 4 lambda^2 sec^2 alpha`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fisher::{qfi_postselected_derivative, weak_value_records, ProtocolMetrics};
use crate::linalg::{HermitianOperator, Ket};
use crate::quasiprob::{kd_distribution, wigner_formula, KdTable, RealTable};
use crate::scalar::{cis, Real, C};
use crate::states::{encode, EncodingConfig, Postselection};
use crate::tolerance::TOL;

/// `x` at which the optimum tables are evaluated.
pub const OPTIMUM_X: f64 = 1e-8;

const ALPHA_SINGULAR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelConfig<T> {
    pub lambda: T,
    pub lambda_tilde: T,
    pub alpha: T,
    pub phi: T,
    pub theta0: T,
    pub delta_theta: T,
}

impl<T: Real> ThreeLevelConfig<T> {
    pub fn new(lambda: T, lambda_tilde: T, alpha: T, phi: T, theta0: T, delta_theta: T) -> Result<Self> {
        for (name, v) in [
            ("lambda", lambda),
            ("lambda_tilde", lambda_tilde),
            ("alpha", alpha),
            ("phi", phi),
            ("theta0", theta0),
            ("delta_theta", delta_theta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if lambda.is_nan() || lambda <= T::zero() {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        if (lambda - lambda_tilde.abs()).abs() <= T::tol(TOL.degeneracy_gap) * lambda.max(T::one()) {
            return Err(Error::DegenerateSpectrum { lambda: lambda.as_f64(), lambda_tilde: lambda_tilde.as_f64() });
        }
        Ok(Self { lambda, lambda_tilde, alpha, phi, theta0, delta_theta })
    }

    /// Configuration with `phi = x`, `theta0 = delta_theta = 0`.
    pub fn from_x(lambda: T, lambda_tilde: T, alpha: T, x: T) -> Result<Self> {
        Self::new(lambda, lambda_tilde, alpha, x, T::zero(), T::zero())
    }

    /// `x = phi - lambda delta_theta`.
    pub fn x(&self) -> T {
        self.phi - self.lambda * self.delta_theta
    }

    pub fn theta(&self) -> T {
        self.theta0 + self.delta_theta
    }

    /// Same anchor and offset, with `phi` moved so that `x` takes the given value.
    pub fn with_x_alpha(&self, x: T, alpha: T) -> Self {
        Self { phi: x + self.lambda * self.delta_theta, alpha, ..*self }
    }

    /// `|cos alpha| < 1e-8`.
    pub fn alpha_singular(&self) -> bool {
        self.alpha.cos().abs() < T::lit(ALPHA_SINGULAR)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelSetup<T: Real> {
    pub psi_i: Ket<T>,
    pub gen: HermitianOperator<T>,
    pub ps: Postselection<T>,
}

pub fn three_level_setup<T: Real>(cfg: &ThreeLevelConfig<T>) -> Result<ThreeLevelSetup<T>> {
    let gen = HermitianOperator::from_real_diagonal(&[cfg.lambda, cfg.lambda_tilde, -cfg.lambda])?;
    let h = T::FRAC_1_SQRT_2();
    // U^dag(theta0) applied to the state prepared at phase phi
    let shift = cfg.phi + cfg.lambda * cfg.theta0;
    let psi_i = Ket::normalized(vec![cis(shift) * h, C::zero(), cis(-shift) * h])?;
    let (s, c) = cfg.alpha.sin_cos();
    let real = |v: [T; 3]| Ket::from_real(&v).map(|k| k.canonical_phase());
    let basis = vec![real([h, T::zero(), -h])?, real([c * h, s, c * h])?, real([-s * h, c, -s * h])?];
    let ps = Postselection::new(basis, [0, 1])?;
    Ok(ThreeLevelSetup { psi_i, gen, ps })
}

/// Metrics with the weak values of the two kept branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelMetrics<T> {
    pub metrics: ProtocolMetrics<T>,
    pub aw1: Option<C<T>>,
    pub aw2: Option<C<T>>,
}

impl<T: Real> ThreeLevelMetrics<T> {
    pub fn divergent(&self) -> bool {
        self.metrics.qfi.is_none() || self.aw1.is_none() || self.aw2.is_none()
    }
}

/// Closed-form `p`, `I_Q`, `xi` and weak values.
pub fn three_level_metrics<T: Real>(cfg: &ThreeLevelConfig<T>) -> ThreeLevelMetrics<T> {
    let x = cfg.x();
    let (sx, cx) = x.sin_cos();
    let ca = cfg.alpha.cos();
    let l2 = cfg.lambda * cfg.lambda;
    let four = T::lit(4.0);
    let prob = sx * sx + ca * ca * cx * cx;
    let numer = four * l2 * ca * ca;
    let qfi = (prob >= T::lit(TOL.postselection_prob)).then(|| numer / (prob * prob));
    let xi = if prob > T::zero() { numer / prob } else { T::zero() };
    let wv_tol = T::tol(TOL.weak_value_overlap);
    let aw1 = (sx.abs() >= wv_tol).then(|| C::new(T::zero(), -cfg.lambda * cx / sx));
    let aw2 = (cx.abs() >= wv_tol).then(|| C::new(T::zero(), cfg.lambda * sx / cx));
    ThreeLevelMetrics { metrics: ProtocolMetrics { prob, qfi, xi, cost_rate: None }, aw1, aw2 }
}

/// The same quantities through the generic encode / postselect / QFI pipeline.
pub fn three_level_engine_metrics<T: Real>(cfg: &ThreeLevelConfig<T>) -> Result<ThreeLevelMetrics<T>> {
    let setup = three_level_setup(cfg)?;
    let enc = EncodingConfig::new(&setup.gen, cfg.theta());
    let psi_theta = encode(&setup.psi_i, &enc)?;
    let records = weak_value_records(&psi_theta, &setup.gen, &setup.ps)?;
    let metrics = match qfi_postselected_derivative(&setup.psi_i, &enc, &setup.ps) {
        Ok(m) => m,
        Err(Error::VanishingPostselection { prob }) => {
            ProtocolMetrics { prob: T::lit(prob), qfi: None, xi: T::zero(), cost_rate: None }
        }
        Err(e) => return Err(e),
    };
    Ok(ThreeLevelMetrics { metrics, aw1: records[0].weak_value, aw2: records[1].weak_value })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelLimits<T> {
    pub prob: T,
    pub qfi: T,
    pub xi: T,
}

/// `(cos^2 alpha, 4 lambda^2 sec^2 alpha, 4 lambda^2)`.
pub fn three_level_limits<T: Real>(lambda: T, alpha: T) -> Result<ThreeLevelLimits<T>> {
    let c = alpha.cos();
    if c.abs() < T::lit(ALPHA_SINGULAR) {
        return Err(Error::AlphaSingular { cos_alpha: c.as_f64() });
    }
    let xi = T::lit(4.0) * lambda * lambda;
    Ok(ThreeLevelLimits { prob: c * c, qfi: xi / (c * c), xi })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    x_values: Vec<T>,
    alpha_values: Vec<T>,
}

impl<T: Real> SweepGrid<T> {
    pub fn new(x_values: Vec<T>, alpha_values: Vec<T>) -> Result<Self> {
        for (name, v) in [("x", &x_values), ("alpha", &alpha_values)] {
            if v.is_empty() {
                return Err(Error::InvalidParameter(format!("{name} grid is empty")));
            }
            if v.iter().any(|t| !t.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!("{name} grid must be finite and strictly increasing")));
            }
        }
        Ok(Self { x_values, alpha_values })
    }

    /// Evenly spaced grids, endpoints included. One step keeps only the lower end.
    pub fn linspace(x: (T, T, usize), alpha: (T, T, usize)) -> Result<Self> {
        Self::new(linspace(x.0, x.1, x.2)?, linspace(alpha.0, alpha.1, alpha.2)?)
    }

    pub fn x_values(&self) -> &[T] {
        &self.x_values
    }

    pub fn alpha_values(&self) -> &[T] {
        &self.alpha_values
    }

    pub fn len(&self) -> usize {
        self.x_values.len() * self.alpha_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn linspace<T: Real>(lo: T, hi: T, steps: usize) -> Result<Vec<T>> {
    match steps {
        0 => Err(Error::InvalidParameter("grid needs at least one step".into())),
        1 => Ok(vec![lo]),
        n => {
            let step = (hi - lo) / T::lit((n - 1) as f64);
            Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + step * T::lit(i as f64) }).collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord<T> {
    pub x: T,
    pub alpha: T,
    pub p_ps: T,
    pub qfi: Option<T>,
    pub xi: T,
    pub aw1: Option<C<T>>,
    pub aw2: Option<C<T>>,
    pub divergent: bool,
}

/// Closed-form metrics on every grid cell, alpha-major.
pub fn sweep<T: Real>(base: &ThreeLevelConfig<T>, grid: &SweepGrid<T>) -> Vec<SweepRecord<T>> {
    let mut out = Vec::with_capacity(grid.len());
    for &alpha in grid.alpha_values() {
        for &x in grid.x_values() {
            let m = three_level_metrics(&base.with_x_alpha(x, alpha));
            out.push(SweepRecord {
                x,
                alpha,
                p_ps: m.metrics.prob,
                qfi: m.metrics.qfi,
                xi: m.metrics.xi,
                aw1: m.aw1,
                aw2: m.aw2,
                divergent: m.divergent(),
            });
        }
    }
    out
}

/// KD table and Wigner formula of the encoded state at `x = 1e-8`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumTables<T> {
    pub kd: KdTable<T>,
    pub wigner: RealTable<T>,
    /// `"lambda"`, `"lambda_tilde"` or `"-lambda"` for each row.
    pub row_labels: Vec<&'static str>,
    /// Success probability of every basis vector `f1, f2, f3`.
    pub branch_probs: Vec<T>,
}

impl<T: Real> OptimumTables<T> {
    pub fn row_of(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| *l == label)
    }
}

pub fn kd_tables_at_optimum<T: Real>(alpha: T, lambda: T) -> Result<OptimumTables<T>> {
    let cfg = ThreeLevelConfig::from_x(lambda, T::zero(), alpha, T::lit(OPTIMUM_X))?;
    let setup = three_level_setup(&cfg)?;
    let psi = encode(&setup.psi_i, &EncodingConfig::new(&setup.gen, cfg.theta()))?;
    let kd = kd_distribution(&psi, &setup.gen, &setup.ps)?;
    let wigner = wigner_formula(&psi, &setup.gen, &setup.ps)?;
    let gap = T::tol(TOL.degeneracy_gap) * lambda.max(T::one());
    let row_labels = kd
        .row_values
        .iter()
        .map(|v| {
            if (*v - lambda).abs() < gap {
                "lambda"
            } else if (*v + lambda).abs() < gap {
                "-lambda"
            } else {
                "lambda_tilde"
            }
        })
        .collect();
    let branch_probs = setup.ps.basis().iter().map(|f| f.fidelity(&psi)).collect();
    Ok(OptimumTables { kd, wigner, row_labels, branch_probs })
}
