use std::f64::consts::FRAC_PI_4;

use clap::{ArgGroup, Args, ValueEnum};
use psmetro_core::linalg::{haar_ket, random_hermitian, random_orthonormal_basis};
use psmetro_core::protocols::OPTIMUM_X;
use psmetro_core::weakvalue::{spin_half_report, EntangledProbeConfig};
use psmetro_core::{
    classicality_report, encode, entangled_scaling_report, kd_distribution, kd_identity_check, operator_norm_sq,
    qfi_postselected_derivative, quantum_modification, sweep, three_level_limits, three_level_metrics,
    three_level_setup, trial_instance, wigner_formula, CostModel, EncodingConfig, Error, HermitianOperator64, Ket64,
    Postselection64, SeededRng, SweepGrid, ThreeLevelConfig64, C,
};

use crate::output::{Report, Value};
use crate::Common;

pub const THREE_LEVEL_COLUMNS: [&str; 10] =
    ["x", "alpha", "p_ps", "qfi", "xi", "aw1_re", "aw1_im", "aw2_re", "aw2_im", "divergent"];

#[derive(Debug)]
pub enum CliError {
    /// Bad flags; exit code 2.
    Usage(String),
    /// Numeric failure; exit code 1.
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::DegenerateSpectrum { .. } | Error::ZeroCostDenominator => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

/// A report plus whether the run counts as a success.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, ok: true }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn complex_cells(z: Option<C<f64>>) -> [Value; 2] {
    match z {
        Some(z) => [z.re.into(), z.im.into()],
        None => [Value::Missing, Value::Missing],
    }
}

#[allow(clippy::too_many_arguments)]
fn three_level_row(
    x: f64,
    alpha: f64,
    p: f64,
    qfi: Option<f64>,
    xi: f64,
    aw1: Option<C<f64>>,
    aw2: Option<C<f64>>,
    divergent: bool,
) -> Vec<Value> {
    let mut row = vec![x.into(), alpha.into(), p.into(), Value::opt(qfi), xi.into()];
    row.extend(complex_cells(aw1));
    row.extend(complex_cells(aw2));
    row.push(divergent.into());
    row
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("point").required(true).args(["x", "phi"])))]
pub struct ThreeLevelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_tilde: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// phi - lambda * delta_theta.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["delta_theta", "theta0"])]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta_theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0: f64,
    /// Also report the x -> 0 limits; fails when cos(alpha) vanishes.
    #[arg(long)]
    pub limit: bool,
    #[arg(long)]
    pub prep_cost: Option<f64>,
    #[arg(long)]
    pub measure_cost: Option<f64>,
    #[arg(long)]
    pub postselect_cost: Option<f64>,
}

pub fn three_level(a: &ThreeLevelArgs, _common: &Common) -> CmdResult {
    let cfg = match (a.x, a.phi) {
        (Some(x), _) => ThreeLevelConfig64::from_x(a.lambda, a.lambda_tilde, a.alpha, x)?,
        (None, Some(phi)) => ThreeLevelConfig64::new(a.lambda, a.lambda_tilde, a.alpha, phi, a.theta0, a.delta_theta)?,
        (None, None) => return usage("one of --x or --phi is required"),
    };
    let m = three_level_metrics(&cfg);
    let costs = [a.prep_cost, a.measure_cost, a.postselect_cost];
    let cost = if costs.iter().any(Option::is_some) {
        let [p, me, s] = costs.map(|c| c.unwrap_or(0.0));
        Some(CostModel::new(p, me, s)?)
    } else {
        None
    };

    let mut params =
        vec![("lambda", a.lambda.into()), ("lambda_tilde", a.lambda_tilde.into()), ("alpha", a.alpha.into())];
    match a.phi {
        Some(phi) if a.x.is_none() => {
            params.extend([("phi", phi.into()), ("theta0", a.theta0.into()), ("delta_theta", a.delta_theta.into())])
        }
        _ => params.push(("x", cfg.x().into())),
    }
    let mut columns = THREE_LEVEL_COLUMNS.to_vec();
    if cost.is_some() {
        columns.push("cost_rate");
    }
    let mut report = Report::new("three-level", params, &columns);
    let mut row =
        three_level_row(cfg.x(), cfg.alpha, m.metrics.prob, m.metrics.qfi, m.metrics.xi, m.aw1, m.aw2, m.divergent());
    if let Some(cost) = &cost {
        row.push(Value::opt(m.metrics.with_cost(cost)?.cost_rate));
    }
    report.push(row);
    report.summary.push(("alpha_singular", cfg.alpha_singular().into()));
    if a.limit {
        let lim = three_level_limits(a.lambda, a.alpha)?;
        report.summary.extend([("p_lim", lim.prob.into()), ("qfi_lim", lim.qfi.into()), ("xi_lim", lim.xi.into())]);
    }
    Ok(Outcome::ok(report))
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_tilde: f64,
    #[arg(long, default_value_t = -1.5, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 61)]
    pub x_steps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 31)]
    pub alpha_steps: usize,
}

pub fn three_level_sweep(a: &SweepArgs, _common: &Common) -> CmdResult {
    let base = ThreeLevelConfig64::from_x(a.lambda, a.lambda_tilde, 0.0, 0.0)?;
    let grid = SweepGrid::linspace((a.x_min, a.x_max, a.x_steps), (a.alpha_min, a.alpha_max, a.alpha_steps))?;
    let params = vec![
        ("lambda", a.lambda.into()),
        ("lambda_tilde", a.lambda_tilde.into()),
        ("x_min", a.x_min.into()),
        ("x_max", a.x_max.into()),
        ("x_steps", a.x_steps.into()),
        ("alpha_min", a.alpha_min.into()),
        ("alpha_max", a.alpha_max.into()),
        ("alpha_steps", a.alpha_steps.into()),
    ];
    let mut report = Report::new("three-level-sweep", params, &THREE_LEVEL_COLUMNS);
    let records = sweep(&base, &grid);
    let mut max_xi = 0.0f64;
    for r in &records {
        max_xi = max_xi.max(r.xi);
        report.push(three_level_row(r.x, r.alpha, r.p_ps, r.qfi, r.xi, r.aw1, r.aw2, r.divergent));
    }
    report.summary.extend([
        ("cells", records.len().into()),
        ("divergent", records.iter().filter(|r| r.divergent).count().into()),
        ("max_xi", max_xi.into()),
        ("xi_ceiling", (4.0 * a.lambda * a.lambda).into()),
    ]);
    Ok(Outcome::ok(report))
}

#[derive(Args, Debug)]
pub struct BoundCheckArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Fixed postselection rank; random in 1..=dim when absent.
    #[arg(long)]
    pub rank: Option<usize>,
}

pub fn bound_check(a: &BoundCheckArgs, common: &Common) -> CmdResult {
    if !(2..=8).contains(&a.dim) {
        return usage(format!("--dim must be in 2..=8, got {}", a.dim));
    }
    if a.trials == 0 {
        return usage("--trials must be at least 1");
    }
    if let Some(r) = a.rank {
        if r == 0 || r > a.dim {
            return usage(format!("--rank must be in 1..={}", a.dim));
        }
    }
    let params = vec![
        ("dim", a.dim.into()),
        ("trials", a.trials.into()),
        ("rank", a.rank.map_or(Value::Missing, Value::from)),
        ("seed", common.seed.into()),
        ("tol", common.tol.into()),
    ];
    let columns = ["trial", "dim", "rank", "p_ps", "qfi", "xi", "bound", "ratio", "status"];
    let mut report = Report::new("bound-check", params, &columns);
    let (mut violations, mut vanishing, mut max_ratio) = (0u64, 0u64, 0.0f64);
    for trial in 0..a.trials {
        let inst = trial_instance::<f64>(common.seed, trial, a.dim, a.rank)?;
        let bound = 4.0 * operator_norm_sq(&inst.gen)?;
        let enc = EncodingConfig::new(&inst.gen, inst.theta);
        let (p, qfi, xi, status) = match qfi_postselected_derivative(&inst.psi_i, &enc, &inst.ps) {
            Ok(m) => {
                let status = if m.xi < -common.tol || m.xi > bound + common.tol { "violation" } else { "ok" };
                (m.prob, m.qfi, m.xi, status)
            }
            Err(Error::VanishingPostselection { prob }) => (prob, None, 0.0, "vanishing"),
            Err(e) => return Err(e.into()),
        };
        match status {
            "violation" => violations += 1,
            "vanishing" => vanishing += 1,
            _ => {}
        }
        let ratio = xi / bound;
        max_ratio = max_ratio.max(ratio);
        report.push(vec![
            trial.into(),
            a.dim.into(),
            inst.ps.rank().into(),
            p.into(),
            Value::opt(qfi),
            xi.into(),
            bound.into(),
            ratio.into(),
            status.into(),
        ]);
    }
    report.summary.extend([
        ("trials", a.trials.into()),
        ("violations", violations.into()),
        ("vanishing", vanishing.into()),
        ("max_ratio", max_ratio.into()),
    ]);
    Ok(Outcome { report, ok: violations == 0 })
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdDemo {
    ThreeLevel,
    Commuting,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["demo", "random"])))]
pub struct KdArgs {
    #[arg(long, value_enum)]
    pub demo: Option<KdDemo>,
    /// Haar state, random generator and random postselection basis.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
}

fn kd_inputs(a: &KdArgs, seed: u64) -> Result<(Ket64, HermitianOperator64, Postselection64), CliError> {
    if a.demo == Some(KdDemo::ThreeLevel) {
        let cfg = ThreeLevelConfig64::from_x(a.lambda, 0.0, a.alpha, OPTIMUM_X)?;
        let s = three_level_setup(&cfg)?;
        let psi = encode(&s.psi_i, &EncodingConfig::new(&s.gen, cfg.theta()))?;
        return Ok((psi, s.gen, s.ps));
    }
    if !(1..=32).contains(&a.dim) {
        return usage(format!("--dim must be in 1..=32, got {}", a.dim));
    }
    let mut rng = SeededRng::new(seed);
    let gen = random_hermitian(&mut rng, a.dim);
    let psi = haar_ket(&mut rng, a.dim);
    let basis = if a.random { random_orthonormal_basis(&mut rng, a.dim) } else { gen.eigenvectors()?.to_vec() };
    Ok((psi, gen, Postselection64::new(basis, [0])?))
}

pub fn kd(a: &KdArgs, common: &Common) -> CmdResult {
    let (psi, gen, ps) = kd_inputs(a, common.seed)?;
    let mode = match a.demo {
        Some(KdDemo::ThreeLevel) => "three-level",
        Some(KdDemo::Commuting) => "commuting",
        None => "random",
    };
    let mut params = vec![("mode", mode.into())];
    if a.demo == Some(KdDemo::ThreeLevel) {
        params.extend([("alpha", a.alpha.into()), ("lambda", a.lambda.into()), ("x", OPTIMUM_X.into())]);
    } else {
        params.extend([("dim", a.dim.into()), ("seed", common.seed.into())]);
    }
    let table = kd_distribution(&psi, &gen, &ps)?;
    let wig = wigner_formula(&psi, &gen, &ps)?;
    let modif = quantum_modification(&psi, &gen, &ps)?;
    let id = kd_identity_check(&psi, &gen, &ps)?;
    let cls = classicality_report(&table);

    let mut report = Report::new("kd", params, &["table", "row", "col", "eigenvalue", "re", "im"]);
    let real_rows = |name: &str, t: &[Vec<f64>], report: &mut Report| {
        for (m, row) in t.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                report.push(vec![name.into(), m.into(), k.into(), table.row_values[m].into(), (*v).into(), 0.0.into()]);
            }
        }
    };
    for (m, row) in table.entries.iter().enumerate() {
        for (k, q) in row.iter().enumerate() {
            report.push(vec!["kd".into(), m.into(), k.into(), table.row_values[m].into(), q.re.into(), q.im.into()]);
        }
    }
    real_rows("wigner", &wig, &mut report);
    real_rows("modification_real", &modif.real_part, &mut report);
    real_rows("modification_rotated", &modif.rotated, &mut report);

    let identity_ok = id.max_residual <= common.tol && id.max_imag_residual <= common.tol;
    report.summary.extend([
        ("classical", cls.classical.into()),
        ("min_real", cls.min_real.into()),
        ("max_abs_imag", cls.max_abs_imag.into()),
        ("modification_max_abs", modif.max_abs().into()),
        ("identity_max_residual", id.max_residual.into()),
        ("identity_max_imag_residual", id.max_imag_residual.into()),
        ("imag_flagged", id.imag_flagged.into()),
        ("identity_ok", identity_ok.into()),
    ]);
    Ok(Outcome::ok(report))
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["entangled", "spin_half"])))]
pub struct WvaArgs {
    /// GHZ probe over n subsystems.
    #[arg(long)]
    pub entangled: bool,
    #[arg(long, requires = "entangled")]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true, requires = "entangled")]
    pub lx: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "entangled")]
    pub ly: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub sub_dim: usize,
    /// Solve for the lambda_y giving this weak value.
    #[arg(long, allow_negative_numbers = true, requires = "entangled")]
    pub target_aw: Option<f64>,
    /// Spin-half pre/postselection pair at (theta, phi) and (theta, phi + pi).
    #[arg(long)]
    pub spin_half: bool,
    #[arg(long, allow_negative_numbers = true, requires = "spin_half")]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "spin_half")]
    pub phi: Option<f64>,
}

pub fn wva(a: &WvaArgs, common: &Common) -> CmdResult {
    if a.entangled {
        wva_entangled(a)
    } else {
        wva_spin_half(a, common)
    }
}

fn wva_entangled(a: &WvaArgs) -> CmdResult {
    let (Some(n), Some(lx), Some(ly)) = (a.n, a.lx, a.ly) else {
        return usage("--entangled needs --n, --lx and --ly");
    };
    let cfg = EntangledProbeConfig::new(n, lx, ly, a.sub_dim)?;
    let r = entangled_scaling_report(&cfg, a.target_aw)?;
    let params = vec![
        ("n", n.into()),
        ("lx", lx.into()),
        ("ly", ly.into()),
        ("sub_dim", a.sub_dim.into()),
        ("target_aw", Value::opt(a.target_aw)),
    ];
    let columns = [
        "n",
        "mean",
        "mean_sq",
        "weak_value",
        "prob",
        "approx_prob",
        "relative_gap",
        "anomalous",
        "linear_weak_value",
        "ly_root_minus",
        "ly_root_plus",
    ];
    let mut report = Report::new("wva", params, &columns);
    report.push(vec![
        n.into(),
        r.mean.into(),
        r.mean_sq.into(),
        r.weak_value.into(),
        r.prob.into(),
        r.approx_prob.into(),
        r.relative_gap.into(),
        r.anomalous.into(),
        r.linear_weak_value.into(),
        Value::opt(r.target_roots.map(|t| t.1)),
        Value::opt(r.target_roots.map(|t| t.0)),
    ]);
    report.summary.extend([("efficiency", r.mean_sq.into()), ("dim", cfg.total_dim()?.into())]);
    Ok(Outcome::ok(report))
}

fn wva_spin_half(a: &WvaArgs, common: &Common) -> CmdResult {
    let (Some(theta), Some(phi)) = (a.theta, a.phi) else {
        return usage("--spin-half needs --theta and --phi");
    };
    let r = spin_half_report(theta, phi)?;
    let params = vec![("theta", theta.into()), ("phi", phi.into())];
    let columns = ["theta", "phi", "weak_value_re", "weak_value_im", "prob", "efficiency", "sign_law_deviation"];
    let mut report = Report::new("wva", params, &columns);
    let dev = r.phases.max_sign_law_deviation();
    let mut row = vec![theta.into(), phi.into()];
    row.extend(complex_cells(r.weak_value));
    row.extend([r.prob.into(), r.efficiency.into(), dev.into()]);
    report.push(row);
    report.summary.push(("saturated", ((r.efficiency - 1.0).abs() <= common.tol).into()));
    Ok(Outcome::ok(report))
}

#[derive(Args, Debug)]
pub struct IdentityCheckArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 5)]
    pub max_dim: usize,
}

pub fn identity_check(a: &IdentityCheckArgs, common: &Common) -> CmdResult {
    if !(2..=32).contains(&a.max_dim) {
        return usage(format!("--max-dim must be in 2..=32, got {}", a.max_dim));
    }
    if a.trials == 0 {
        return usage("--trials must be at least 1");
    }
    let params = vec![
        ("trials", a.trials.into()),
        ("max_dim", a.max_dim.into()),
        ("seed", common.seed.into()),
        ("tol", common.tol.into()),
    ];
    let columns = ["trial", "dim", "max_residual", "max_imag_residual", "imag_flagged", "status"];
    let mut report = Report::new("identity-check", params, &columns);
    let (mut failures, mut worst, mut worst_imag) = (0u64, 0.0f64, 0.0f64);
    for trial in 0..a.trials {
        let mut rng = SeededRng::new(common.seed.wrapping_add(trial));
        let dim = rng.int_in(2, a.max_dim);
        let gen = random_hermitian::<f64>(&mut rng, dim);
        let psi = haar_ket(&mut rng, dim);
        let ps = Postselection64::new(random_orthonormal_basis(&mut rng, dim), [0])?;
        let id = kd_identity_check(&psi, &gen, &ps)?;
        let pass = id.max_residual <= common.tol && id.max_imag_residual <= common.tol;
        failures += u64::from(!pass);
        worst = worst.max(id.max_residual);
        worst_imag = worst_imag.max(id.max_imag_residual);
        report.push(vec![
            trial.into(),
            dim.into(),
            id.max_residual.into(),
            id.max_imag_residual.into(),
            id.imag_flagged.into(),
            (if pass { "ok" } else { "fail" }).into(),
        ]);
    }
    report.summary.extend([
        ("trials", a.trials.into()),
        ("failures", failures.into()),
        ("max_residual", worst.into()),
        ("max_imag_residual", worst_imag.into()),
    ]);
    Ok(Outcome { report, ok: failures == 0 })
}
