//! Weak values, weak-value-amplification efficiency and its geometric-phase
//! form, the entangled-probe optimization and the first-order meter shift.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{vdot, HermitianOperator, Ket};
use crate::scalar::{cis, principal_arg, Real, C};
use crate::tolerance::TOL;

/// Largest Hilbert-space dimension the entangled probe will build.
pub const ENTANGLED_DIM_CAP: usize = 4096;

/// `<psi_f|A|psi_i> / <psi_f|psi_i>`.
pub fn weak_value<T: Real>(psi_i: &Ket<T>, psi_f: &Ket<T>, gen: &HermitianOperator<T>) -> Result<C<T>> {
    psi_i.check_dim(psi_f.dim())?;
    gen.check_dim(psi_i.dim())?;
    let overlap = psi_f.inner(psi_i);
    if overlap.norm() < T::tol(TOL.weak_value_overlap) {
        return Err(Error::OrthogonalPrePost { overlap: overlap.norm().as_f64() });
    }
    Ok(vdot(psi_f.amps(), &gen.apply(psi_i.amps())?) / overlap)
}

/// `eta = p_s |A_w|^2 = |<psi_f|A|psi_i>|^2`.
pub fn wva_efficiency<T: Real>(psi_i: &Ket<T>, psi_f: &Ket<T>, gen: &HermitianOperator<T>) -> Result<T> {
    psi_i.check_dim(psi_f.dim())?;
    gen.check_dim(psi_i.dim())?;
    Ok(vdot(psi_f.amps(), &gen.apply(psi_i.amps())?).norm_sqr())
}

/// `A|psi_i> / sqrt(<A^2>)`, the postselection maximizing `eta`.
pub fn optimal_postselection<T: Real>(psi_i: &Ket<T>, gen: &HermitianOperator<T>) -> Result<Ket<T>> {
    let a_psi = gen.apply(psi_i.amps())?;
    if crate::linalg::norm_sqr(&a_psi) < T::tol(TOL.null_vector) {
        return Err(Error::NullVector);
    }
    Ket::normalized(a_psi)
}

/// Weak value `<A^2>/<A>` and success probability `<A>^2/<A^2>` at the
/// optimal postselection.
pub fn optimal_wv_and_prob<T: Real>(psi_i: &Ket<T>, gen: &HermitianOperator<T>) -> Result<(C<T>, T)> {
    let mean = gen.expectation(psi_i)?;
    let mean_sq = gen.square_expectation(psi_i)?;
    let (aw, p) = optimal_from_moments(mean, mean_sq)?;
    Ok((C::new(aw, T::zero()), p))
}

fn optimal_from_moments<T: Real>(mean: T, mean_sq: T) -> Result<(T, T)> {
    if mean.abs() < T::tol(TOL.anomalous_mean) {
        return Err(Error::ZeroMean { mean: mean.as_f64() });
    }
    Ok((mean_sq / mean, mean * mean / mean_sq))
}

/// `n` copies of a subsystem of dimension `sub_dim` whose observable carries
/// eigenvalues `lambda_x`, `lambda_y` on the first two basis states (and `0`
/// on the rest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledProbeConfig<T> {
    pub n: usize,
    pub lambda_x: T,
    pub lambda_y: T,
    pub sub_dim: usize,
}

impl<T: Real> EntangledProbeConfig<T> {
    pub fn new(n: usize, lambda_x: T, lambda_y: T, sub_dim: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if sub_dim < 2 {
            return Err(Error::InvalidParameter("sub_dim must be at least 2".into()));
        }
        if !lambda_x.is_finite() || !lambda_y.is_finite() {
            return Err(Error::InvalidParameter("eigenvalues must be finite".into()));
        }
        let cfg = Self { n, lambda_x, lambda_y, sub_dim };
        cfg.total_dim()?;
        Ok(cfg)
    }

    pub fn total_dim(&self) -> Result<usize> {
        u32::try_from(self.n)
            .ok()
            .and_then(|n| self.sub_dim.checked_pow(n))
            .filter(|d| *d <= ENTANGLED_DIM_CAP)
            .ok_or(Error::DimensionCapExceeded { n: self.n, sub_dim: self.sub_dim, cap: ENTANGLED_DIM_CAP })
    }

    /// Single-subsystem eigenvalues.
    pub fn local_spectrum(&self) -> Vec<T> {
        let mut a = vec![T::zero(); self.sub_dim];
        a[0] = self.lambda_x;
        a[1] = self.lambda_y;
        a
    }

    /// Diagonal of `sum_k I x .. x a x .. x I` in the product basis.
    pub fn total_diagonal(&self) -> Result<Vec<T>> {
        let dim = self.total_dim()?;
        let local = self.local_spectrum();
        Ok((0..dim)
            .map(|mut idx| {
                let mut s = T::zero();
                for _ in 0..self.n {
                    s += local[idx % self.sub_dim];
                    idx /= self.sub_dim;
                }
                s
            })
            .collect())
    }

    /// `(|x>^n + |y>^n) / sqrt 2`.
    pub fn initial_state(&self) -> Result<Ket<T>> {
        let dim = self.total_dim()?;
        let mut amps = vec![C::zero(); dim];
        let ones: usize = (0..self.n).map(|k| self.sub_dim.pow(k as u32)).sum();
        let h = T::FRAC_1_SQRT_2();
        amps[0] += C::new(h, T::zero());
        amps[ones] += C::new(h, T::zero());
        Ket::normalized(amps)
    }
}

/// GHZ-type probe state and the collective observable.
pub fn entangled_probe<T: Real>(cfg: &EntangledProbeConfig<T>) -> Result<(Ket<T>, HermitianOperator<T>)> {
    let psi = cfg.initial_state()?;
    let gen = HermitianOperator::from_real_diagonal(&cfg.total_diagonal()?)?;
    Ok((psi, gen))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledScalingReport<T> {
    pub mean: T,
    pub mean_sq: T,
    pub weak_value: T,
    pub prob: T,
    /// `n^2 lambda_x^2 / A_w^2`.
    pub approx_prob: T,
    pub relative_gap: T,
    /// `lambda_y` sits nearer `-lambda_x` than the non-anomalous root.
    pub anomalous: bool,
    /// `n lambda_x / sqrt(p_s)`.
    pub linear_weak_value: T,
    /// `lambda_y` roots reproducing the requested weak value, if asked for.
    pub target_roots: Option<(T, T)>,
}

pub fn entangled_scaling_report<T: Real>(
    cfg: &EntangledProbeConfig<T>,
    weak_value_target: Option<T>,
) -> Result<EntangledScalingReport<T>> {
    let psi = cfg.initial_state()?;
    let diag = cfg.total_diagonal()?;
    let (mut mean, mut mean_sq) = (T::zero(), T::zero());
    for (a, x) in diag.iter().zip(psi.amps()) {
        mean += *a * x.norm_sqr();
        mean_sq += *a * *a * x.norm_sqr();
    }
    let (aw, prob) = optimal_from_moments(mean, mean_sq)?;
    let n = T::lit(cfg.n as f64);
    let nlx = n * cfg.lambda_x;
    let approx_prob = nlx * nlx / (aw * aw);
    let two = T::lit(2.0);
    let regular_root = (aw - nlx) / (two * n);
    let anomalous = (cfg.lambda_y + cfg.lambda_x).abs() < (cfg.lambda_y - regular_root).abs();
    let target_roots = weak_value_target.map(|t| lambda_y_roots(cfg.n, cfg.lambda_x, t)).transpose()?;
    Ok(EntangledScalingReport {
        mean,
        mean_sq,
        weak_value: aw,
        prob,
        approx_prob,
        relative_gap: (prob - approx_prob).abs() / prob,
        anomalous,
        linear_weak_value: nlx.abs() / prob.sqrt(),
        target_roots,
    })
}

/// Solutions of `n (lx^2 + ly^2) / (lx + ly) = A_w` for `ly`.
pub fn lambda_y_roots<T: Real>(n: usize, lambda_x: T, weak_value: T) -> Result<(T, T)> {
    let n = T::lit(n as f64);
    let disc =
        weak_value * weak_value - T::lit(4.0) * n * n * lambda_x * lambda_x + T::lit(4.0) * n * weak_value * lambda_x;
    if disc < T::zero() {
        return Err(Error::InvalidParameter("weak value unreachable for this lambda_x".into()));
    }
    let two_n = T::lit(2.0) * n;
    Ok(((weak_value + disc.sqrt()) / two_n, (weak_value - disc.sqrt()) / two_n))
}

/// Phase of the three-vertex Bargmann invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricPhaseResult<T> {
    pub phase: T,
    /// `<psi_f|a><a|psi_i><psi_i|psi_f>`.
    pub bargmann_product: C<T>,
    pub degenerate: bool,
}

pub fn geometric_phase<T: Real>(psi_i: &Ket<T>, a: &Ket<T>, psi_f: &Ket<T>) -> Result<GeometricPhaseResult<T>> {
    psi_i.check_dim(a.dim())?;
    psi_i.check_dim(psi_f.dim())?;
    let b = psi_f.inner(a) * a.inner(psi_i) * psi_i.inner(psi_f);
    let degenerate = b.norm() < T::tol(TOL.bargmann_degenerate);
    Ok(GeometricPhaseResult {
        phase: if degenerate { T::zero() } else { principal_arg(b) },
        bargmann_product: b,
        degenerate,
    })
}

/// `eta` rebuilt from magnitudes and geometric phases over the eigenbasis of
/// `gen`. When `<psi_i|psi_f>` vanishes the third vertex is dropped, which only
/// removes a common phase.
pub fn efficiency_via_phases<T: Real>(psi_i: &Ket<T>, psi_f: &Ket<T>, gen: &HermitianOperator<T>) -> Result<T> {
    psi_i.check_dim(psi_f.dim())?;
    gen.check_dim(psi_i.dim())?;
    let s = gen.spectrum()?;
    let closing = psi_i.inner(psi_f);
    let closed = closing.norm() >= T::tol(TOL.bargmann_degenerate);
    let mut sum = C::zero();
    for (a, v) in s.values.iter().zip(&s.vectors) {
        let open = psi_f.inner(v) * v.inner(psi_i);
        let magnitude = open.norm();
        if magnitude < T::tol(TOL.bargmann_degenerate) {
            continue;
        }
        let phase = if closed { geometric_phase(psi_i, v, psi_f)?.phase } else { principal_arg(open) };
        sum += cis(phase) * (*a * magnitude);
    }
    Ok(sum.norm_sqr())
}

/// Phase factor of one eigenvector relative to the global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPhase<T> {
    pub eigenvalue: T,
    /// `exp(i Phi_g) conj(exp(i phi))`; absent for a degenerate triangle.
    pub relative_factor: Option<C<T>>,
    /// `sgn(a_k)`, with `sgn(0) = +1`.
    pub sign: T,
    pub null_eigenvalue: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFactorReport<T> {
    /// `phi = arg <psi_i|psi_f>`.
    pub global_phase: T,
    pub branches: Vec<BranchPhase<T>>,
}

impl<T: Real> PhaseFactorReport<T> {
    /// Largest `|relative_factor - sgn(a_k)|` over non-degenerate, non-null branches.
    pub fn max_sign_law_deviation(&self) -> T {
        self.branches
            .iter()
            .filter(|b| !b.null_eigenvalue)
            .filter_map(|b| b.relative_factor.map(|f| (f - C::new(b.sign, T::zero())).norm()))
            .fold(T::zero(), T::max)
    }
}

pub fn phase_factors<T: Real>(
    psi_i: &Ket<T>,
    psi_f: &Ket<T>,
    gen: &HermitianOperator<T>,
) -> Result<PhaseFactorReport<T>> {
    gen.check_dim(psi_i.dim())?;
    let s = gen.spectrum()?;
    let global_phase = principal_arg(psi_i.inner(psi_f));
    let unphase = cis(-global_phase);
    let zero_tol = T::tol(TOL.amplitude_zero);
    let branches = s
        .values
        .iter()
        .zip(&s.vectors)
        .map(|(a, v)| {
            let g = geometric_phase(psi_i, v, psi_f)?;
            Ok(BranchPhase {
                eigenvalue: *a,
                relative_factor: (!g.degenerate).then(|| cis(g.phase) * unphase),
                sign: if *a < T::zero() { -T::one() } else { T::one() },
                null_eigenvalue: a.abs() < zero_tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseFactorReport { global_phase, branches })
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn spin_half_state<T: Real>(theta: T, phi: T) -> Ket<T> {
    let half = theta / T::lit(2.0);
    Ket::normalized(vec![C::new(half.cos(), T::zero()), cis(phi) * half.sin()]).expect("unit vector")
}

/// Bloch-antipodal-in-longitude pair `((theta, phi), (theta, phi + pi))`.
pub fn spin_half_pair<T: Real>(theta: T, phi: T) -> (Ket<T>, Ket<T>) {
    (spin_half_state(theta, phi), spin_half_state(theta, phi + T::PI()))
}

/// Weak-value-amplification summary for the `sigma_z` spin-half demo.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHalfReport<T> {
    pub weak_value: Option<C<T>>,
    pub prob: T,
    pub efficiency: T,
    pub phases: PhaseFactorReport<T>,
}

pub fn spin_half_report<T: Real>(theta: T, phi: T) -> Result<SpinHalfReport<T>> {
    let (psi_i, psi_f) = spin_half_pair(theta, phi);
    let z = HermitianOperator::pauli_z();
    let weak_value = match weak_value(&psi_i, &psi_f, &z) {
        Ok(w) => Some(w),
        Err(Error::OrthogonalPrePost { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(SpinHalfReport {
        weak_value,
        prob: psi_f.fidelity(&psi_i),
        efficiency: wva_efficiency(&psi_i, &psi_f, &z)?,
        phases: phase_factors(&psi_i, &psi_f, &z)?,
    })
}

/// Meter readout model to first order in the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeterModel<T> {
    pub weak_value: C<T>,
    /// `<R F>` on the meter state.
    pub correlation: C<T>,
    pub coupling: T,
}

impl<T: Real> MeterModel<T> {
    pub fn new(weak_value: C<T>, correlation: C<T>, coupling: T) -> Self {
        Self { weak_value, correlation, coupling }
    }

    /// `|g| <= 0.1`.
    pub fn first_order_valid(&self) -> bool {
        self.coupling.abs() <= T::lit(0.1)
    }
}

/// `<R> ~ 2 g [Re A_w Im alpha + Im A_w Re alpha]`.
pub fn first_order_meter_average<T: Real>(model: &MeterModel<T>) -> T {
    let (w, a) = (model.weak_value, model.correlation);
    T::lit(2.0) * model.coupling * (w.re * a.im + w.im * a.re)
}
