//! Quantum Fisher information of pure states, before and after postselection.
//!
//! The postselected QFI is available through three algebraically independent
//! routes that must agree:
//!
//! * [`qfi_postselected_derivative`] differentiates the unnormalized filtered
//!   state `F U(theta)|psi_i>` analytically,
//! * [`qfi_postselected_operator`] evaluates the trace form with dense
//!   `rho_theta`, `F` and `A`,
//! * [`qfi_postselected_weakvalues`] sums the pairwise weak-value differences,
//!   in the cross-product form `|n_i o_j - n_j o_i|^2` so branches with a
//!   vanishing overlap still contribute their finite share.
//!
//! [`qfi_finite_difference`] is a numerical oracle on the renormalized states.
//!
//! Intrinsic weak values are oriented as ordinary weak values with
//! preselection `|psi_theta>` and postselection `|f_k>`:
//! `A_w^k = <f_k|A|psi_theta> / <f_k|psi_theta>`. The opposite orientation is
//! the complex conjugate and leaves every Fisher-information formula unchanged.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{norm_sqr, operator_norm_sq, CMatrix, HermitianOperator, Ket};
use crate::scalar::{Real, C};
use crate::states::{encode, postselect, EncodingConfig, Postselection};
use crate::tolerance::TOL;

/// Intrinsic weak value data for one selected branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueRecord<T> {
    pub index: usize,
    /// `<f_k|psi_theta>`.
    pub overlap: C<T>,
    /// `<f_k|A|psi_theta>`.
    pub numerator: C<T>,
    /// `|<f_k|psi_theta>|^2`.
    pub prob: T,
    /// `numerator / overlap`, absent when the overlap is below threshold.
    pub weak_value: Option<C<T>>,
}

/// Success probability, postselected QFI, efficiency and (optionally) the
/// information-cost rate of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolMetrics<T> {
    pub prob: T,
    /// `None` flags a divergent QFI (vanishing probability).
    pub qfi: Option<T>,
    pub xi: T,
    pub cost_rate: Option<T>,
}

impl<T: Real> ProtocolMetrics<T> {
    pub fn from_prob_qfi(prob: T, qfi: T) -> Self {
        Self { prob, qfi: Some(qfi), xi: efficiency_xi(prob, qfi), cost_rate: None }
    }

    pub fn is_divergent(&self) -> bool {
        self.qfi.is_none()
    }

    /// Attaches `R^ps`. Divergent records get no rate.
    pub fn with_cost(mut self, cost: &CostModel<T>) -> Result<Self> {
        if let Some(q) = self.qfi {
            self.cost_rate = Some(info_cost_rate(self.prob, q, cost)?);
        }
        Ok(self)
    }
}

/// Per-event costs of preparation, final measurement and postselection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel<T> {
    pub prep: T,
    pub measure: T,
    pub postselect: T,
}

impl<T: Real> CostModel<T> {
    pub fn new(prep: T, measure: T, postselect: T) -> Result<Self> {
        for (name, v) in [("prep", prep), ("measure", measure), ("postselect", postselect)] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidParameter(format!("{name} cost must be finite and >= 0")));
            }
        }
        if prep + postselect <= T::zero() && measure <= T::zero() {
            return Err(Error::ZeroCostDenominator);
        }
        Ok(Self { prep, measure, postselect })
    }
}

/// Outcome of the `0 <= xi <= 4 ||A^2||` check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Check<T> {
    pub xi: T,
    pub bound: T,
    pub within: bool,
}

/// Information-preservation conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationFlags {
    /// `<psi_i|A|psi_i> = 0`.
    pub mean_a_zero: bool,
    /// `<f_k|A|psi_theta> = 0` for every discarded `k`.
    pub failed_branch_wv_zero: bool,
}

impl SaturationFlags {
    pub fn saturates(&self) -> bool {
        self.mean_a_zero && self.failed_branch_wv_zero
    }
}

/// `4 Var(A)` in `psi_0`.
pub fn qfi_pure<T: Real>(psi_0: &Ket<T>, gen: &HermitianOperator<T>) -> Result<T> {
    gen.check_dim(psi_0.dim())?;
    let mean = gen.expectation(psi_0)?;
    let sq = gen.square_expectation(psi_0)?;
    Ok(clamp_nonneg(T::lit(4.0) * (sq - mean * mean), T::lit(4.0) * sq))
}

/// `(a_max - a_min)^2`, the QFI maximized over input states.
pub fn qfi_optimal<T: Real>(gen: &HermitianOperator<T>) -> Result<T> {
    let vals = gen.eigenvalues()?;
    let spread = vals[vals.len() - 1] - vals[0];
    Ok(spread * spread)
}

pub fn weak_value_records<T: Real>(
    psi_theta: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<Vec<WeakValueRecord<T>>> {
    gen.check_dim(psi_theta.dim())?;
    psi_theta.check_dim(ps.dim())?;
    let a_psi = gen.apply(psi_theta.amps())?;
    Ok(ps.selected().iter().map(|&k| branch_record(ps.basis()[k].amps(), psi_theta, &a_psi, k)).collect())
}

fn branch_record<T: Real>(f: &[C<T>], psi: &Ket<T>, a_psi: &[C<T>], k: usize) -> WeakValueRecord<T> {
    let overlap = crate::linalg::vdot(f, psi.amps());
    let numerator = crate::linalg::vdot(f, a_psi);
    let weak_value = (overlap.norm() >= T::tol(TOL.weak_value_overlap)).then(|| numerator / overlap);
    WeakValueRecord { index: k, overlap, numerator, prob: overlap.norm_sqr(), weak_value }
}

/// `4 <dPsi|dPsi>/p - 4 |<dPsi|Psi>|^2 / p^2` with `|Psi> = F|psi_theta>`,
/// `|dPsi> = F(-iA)|psi_theta>`.
pub fn qfi_postselected_derivative<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
) -> Result<ProtocolMetrics<T>> {
    check_dims(psi_i, cfg, ps)?;
    let psi = encode(psi_i, cfg)?;
    let d_psi: Vec<C<T>> = cfg.generator.apply(psi.amps())?.into_iter().map(|x| x * -C::i()).collect();

    let mut prob = T::zero();
    let mut dd = T::zero();
    let mut cross = C::zero();
    for &k in ps.selected() {
        let f = ps.basis()[k].amps();
        let c = crate::linalg::vdot(f, psi.amps());
        let d = crate::linalg::vdot(f, &d_psi);
        prob += c.norm_sqr();
        dd += d.norm_sqr();
        cross += d.conj() * c;
    }
    require_prob(prob)?;
    let four = T::lit(4.0);
    let first = four * dd / prob;
    let qfi = clamp_nonneg(first - four * cross.norm_sqr() / (prob * prob), first);
    Ok(ProtocolMetrics::from_prob_qfi(prob, qfi))
}

/// `(4/p) Tr(F A rho A) - (4/p^2) |Tr(F rho A)|^2` with dense matrices.
pub fn qfi_postselected_operator<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
) -> Result<T> {
    check_dims(psi_i, cfg, ps)?;
    let psi = encode(psi_i, cfg)?;
    let rho = CMatrix::outer(psi.amps(), psi.amps());
    let f = ps.projector();
    let a = cfg.generator.entries();
    let prob = f.matmul(&rho)?.trace().re;
    require_prob(prob)?;
    let fa = f.matmul(a)?;
    let t1 = fa.matmul(&rho)?.matmul(a)?.trace().re;
    let t2 = f.matmul(&rho)?.matmul(a)?.trace();
    let four = T::lit(4.0);
    let first = four * t1 / prob;
    Ok(clamp_nonneg(first - four * t2.norm_sqr() / (prob * prob), first))
}

/// `I_Q p^2 = 4 sum_{i<j} p_i p_j |A_w^i - A_w^j|^2`, evaluated as
/// `4 sum_{i<j} |n_i o_j - n_j o_i|^2`.
pub fn qfi_postselected_weakvalues<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
) -> Result<T> {
    check_dims(psi_i, cfg, ps)?;
    let psi = encode(psi_i, cfg)?;
    let records = weak_value_records(&psi, cfg.generator, ps)?;
    let prob = records.iter().fold(T::zero(), |acc, r| acc + r.prob);
    require_prob(prob)?;
    Ok(T::lit(4.0) * weak_value_pair_sum(&records) / (prob * prob))
}

/// `sum_{i<j} |n_i o_j - n_j o_i|^2`, i.e. `sum_{i<j} p_i p_j |A_w^i - A_w^j|^2`.
pub fn weak_value_pair_sum<T: Real>(records: &[WeakValueRecord<T>]) -> T {
    let mut s = T::zero();
    for (i, ri) in records.iter().enumerate() {
        for rj in &records[i + 1..] {
            s += (ri.numerator * rj.overlap - rj.numerator * ri.overlap).norm_sqr();
        }
    }
    s
}

/// `I_Q ~ 4 (2 - F_+ - F_-) / h^2` with `F_pm = |<psi^ps_theta|psi^ps_{theta pm h}>|`.
pub fn qfi_finite_difference<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
    h: T,
) -> Result<T> {
    check_dims(psi_i, cfg, ps)?;
    if h.is_nan() || h <= T::zero() {
        return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
    }
    let state_at = |theta: T| -> Result<Ket<T>> {
        let out = postselect(&encode(psi_i, &EncodingConfig::new(cfg.generator, theta))?, ps)?;
        if out.prob < T::lit(10.0 * TOL.postselection_prob) {
            return Err(Error::VanishingPostselection { prob: out.prob.as_f64() });
        }
        Ok(out.state.expect("probability above threshold"))
    };
    let centre = state_at(cfg.theta)?;
    let plus = centre.inner(&state_at(cfg.theta + h)?).norm();
    let minus = centre.inner(&state_at(cfg.theta - h)?).norm();
    let two = T::lit(2.0);
    Ok((T::lit(4.0) * (two - plus - minus) / (h * h)).max(T::zero()))
}

/// `xi = p I_Q`.
pub fn efficiency_xi<T: Real>(prob: T, qfi: T) -> T {
    if prob.is_zero() {
        T::zero()
    } else {
        prob * qfi
    }
}

pub fn check_theorem1<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
) -> Result<Theorem1Check<T>> {
    let m = qfi_postselected_derivative(psi_i, cfg, ps)?;
    let bound = T::lit(4.0) * operator_norm_sq(cfg.generator)?;
    let slack = T::lit(TOL.bound_slack);
    Ok(Theorem1Check { xi: m.xi, bound, within: m.xi >= -slack && m.xi <= bound + slack })
}

pub fn check_saturation_conditions<T: Real>(
    psi_i: &Ket<T>,
    cfg: &EncodingConfig<'_, T>,
    ps: &Postselection<T>,
) -> Result<SaturationFlags> {
    check_dims(psi_i, cfg, ps)?;
    let tol = T::tol(TOL.saturation);
    let mean_a_zero = cfg.generator.expectation(psi_i)?.abs() < tol;
    let psi = encode(psi_i, cfg)?;
    let a_psi = cfg.generator.apply(psi.amps())?;
    let failed_branch_wv_zero =
        ps.rejected().iter().all(|&k| crate::linalg::vdot(ps.basis()[k].amps(), &a_psi).norm() < tol);
    Ok(SaturationFlags { mean_a_zero, failed_branch_wv_zero })
}

/// `R^ps = p I_Q / (C_P + p C_M + C_ps)`.
pub fn info_cost_rate<T: Real>(prob: T, qfi: T, cost: &CostModel<T>) -> Result<T> {
    let denom = cost.prep + prob * cost.measure + cost.postselect;
    if denom.is_nan() || denom <= T::zero() {
        return Err(Error::ZeroCostDenominator);
    }
    Ok(efficiency_xi(prob, qfi) / denom)
}

fn check_dims<T: Real>(psi_i: &Ket<T>, cfg: &EncodingConfig<'_, T>, ps: &Postselection<T>) -> Result<()> {
    cfg.generator.check_dim(psi_i.dim())?;
    psi_i.check_dim(ps.dim())
}

fn require_prob<T: Real>(prob: T) -> Result<()> {
    if prob < T::lit(TOL.postselection_prob) {
        Err(Error::VanishingPostselection { prob: prob.as_f64() })
    } else {
        Ok(())
    }
}

/// Clamps round-off negatives (relative to `scale`) to zero.
fn clamp_nonneg<T: Real>(v: T, scale: T) -> T {
    if v < T::zero() && v >= -T::tol(TOL.variance_clamp) * scale.abs().max(T::one()) {
        T::zero()
    } else {
        v
    }
}

/// `sum_k |<f_k|A|psi>|^2` over the selected branches.
pub(crate) fn selected_numerator_weight<T: Real>(
    psi: &Ket<T>,
    gen: &HermitianOperator<T>,
    ps: &Postselection<T>,
) -> Result<T> {
    let a_psi = gen.apply(psi.amps())?;
    let numerators: Vec<C<T>> =
        ps.selected().iter().map(|&k| crate::linalg::vdot(ps.basis()[k].amps(), &a_psi)).collect();
    Ok(norm_sqr(&numerators))
}
