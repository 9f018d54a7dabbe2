//! Spot checks of emitted rows and the `verify` oracle suite.

use clap::Args;
use nlse_core::delta_well::{bound_state, transition_diagnostics};
use nlse_core::oracle::{adaptive_simpson, argument_principle_count, nlse_residual, shoot, Delta, Rectangle, SampledFunction};
use nlse_core::shell_linear::{
    amplitude_ratio_linear, find_poles, pole_condition, reduced_pole_condition, s_matrix, ShellConfig,
};
use nlse_core::shell_nonlinear::{scan_resonances, solve_at};
use nlse_core::{complete_k, jacobi, Complex64, EllipticModulus};
use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, CliError};
use crate::output::{Report, Table};

/// Bound on the residual of a spot-checked row, relative to `1 + |μψ|`.
pub const ROW_RESIDUAL_TOL: f64 = 1e-5;
const ROW_STEP: f64 = 1e-4;
const EVERY: usize = 100;

/// Residual of the stationary equation at `x` from a five-point sample.
pub fn local_residual(psi: impl Fn(f64) -> f64, x: f64, mu: f64, g: f64) -> Result<f64, CliError> {
    let grid = SampledFunction::sample(&psi, x - 2.0 * ROW_STEP, x + 2.0 * ROW_STEP, ROW_STEP);
    let r = nlse_residual(&grid, mu, g, &[])?;
    Ok(r.max_residual / (1.0 + (mu * psi(x)).abs()))
}

/// Tracks the worst residual over every hundredth row.
pub struct RowCheck {
    enabled: bool,
    rows: usize,
    worst: f64,
}

impl RowCheck {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, rows: 0, worst: 0.0 }
    }

    pub fn due(&self, row: usize) -> bool {
        self.enabled && row.is_multiple_of(EVERY)
    }

    pub fn record(&mut self, residual: f64) {
        self.rows += 1;
        self.worst = self.worst.max(residual);
    }

    pub fn finish(self, report: &mut Report) -> Option<CliError> {
        if !self.enabled {
            return None;
        }
        report.note("verified_rows", self.rows);
        report.note("verified_max_residual", self.worst);
        (self.worst > ROW_RESIDUAL_TOL).then(|| {
            CliError::Verification(format!("row residual {:e} exceeds {ROW_RESIDUAL_TOL:e}", self.worst))
        })
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Side of the (u, p) grid for the elliptic identities.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
}

struct Checks {
    table: Table,
    failed: Vec<String>,
}

impl Checks {
    fn add(&mut self, name: &str, value: f64, tolerance: f64) {
        let pass = value <= tolerance;
        if !pass {
            self.failed.push(name.to_string());
        }
        self.table.push(vec![name.into(), value.into(), tolerance.into(), pass.into()]);
    }
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<(Report, Option<CliError>), CliError> {
    if args.grid < 2 {
        return invalid(format!("--grid must be at least 2, got {}", args.grid));
    }
    let mut c = Checks { table: Table::new("checks", &["check", "value", "tolerance", "pass"]), failed: Vec::new() };
    let n = args.grid;

    let mut identity: f64 = 0.0;
    let mut k_err: f64 = 0.0;
    for i in 0..n {
        let p = EllipticModulus::new(i as f64 / (n - 1) as f64)?;
        for j in 0..n {
            let t = jacobi(-10.0 + 20.0 * j as f64 / (n - 1) as f64, p);
            identity = identity.max((t.sn * t.sn + t.cn * t.cn - 1.0).abs());
            identity = identity.max((t.dn * t.dn + p.value() * t.sn * t.sn - 1.0).abs());
        }
        let q = 0.99 * p.value();
        let oracle = adaptive_simpson(|t: f64| 1.0 / (1.0 - q * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-13);
        k_err = k_err.max((complete_k(EllipticModulus::new(q)?)? - oracle).abs() / oracle);
    }
    c.add("jacobi identities", identity, 1e-10);
    c.add("complete_k vs quadrature (relative)", k_err, 1e-12);

    let (mut res, mut jump, mut norm, mut shot) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (lambda, g) in [(-0.2, -1.0), (0.2, -1.0), (0.0, -1.0), (-1.0, 1.0), (-0.7, 1.0), (-1.0, 0.0)] {
        let Some(s) = bound_state(lambda, g)?.state().copied() else {
            c.add(&format!("bound state exists for lambda = {lambda}, g = {g}"), 1.0, 0.0);
            continue;
        };
        let h = 1e-4;
        let half = ((s.x0.max(0.0) + 25.0 / s.k) / h).ceil() * h;
        let grid = SampledFunction::sample(|x| s.psi(x), -half, half, h);
        let r = nlse_residual(&grid, s.mu, g, &[Delta { pos: 0.0, strength: lambda }])?;
        res = res.max(r.max_residual);
        jump = jump.max(r.max_jump_defect());
        norm = norm.max((s.norm() - 1.0).abs());
        let traj = shoot(s.mu, g, &[], 5.0, (s.psi(0.0), s.dpsi(0.0)), 1e-3)?;
        for i in (0..traj.len()).step_by(50) {
            shot = shot.max((traj.values[i] - s.psi(traj.x(i))).abs());
        }
    }
    c.add("bound-state residual", res, 1e-5);
    c.add("bound-state jump defect", jump, 1e-5);
    c.add("bound-state norm", norm, 1e-8);
    c.add("bound-state vs shooting", shot, 1e-9);

    let t = transition_diagnostics(0.26)?;
    c.add("norm per period at lambda = 0.26 vs reference", (t.norm_per_period - 0.925_449_0).abs(), 1e-6);

    let cfg = ShellConfig::new(1.0, 10.0)?;
    let poles = find_poles(cfg, 5)?;
    let pole_defect = poles.poles.iter().map(|p| pole_condition(cfg, p.k()).norm()).fold(0.0, f64::max);
    c.add("pole condition residual", pole_defect, 1e-12);
    let rect = Rectangle { re_min: 0.0, re_max: 12.0, im_min: -3.0, im_max: 0.0 };
    let counted = argument_principle_count(|k| reduced_pole_condition(cfg, k), rect, 4000)?;
    let listed = poles.resonances().filter(|r| r.k.re < rect.re_max && r.k.im > rect.im_min).count();
    c.add("argument principle vs pole list (count difference)", (counted as f64 - listed as f64).abs(), 0.0);
    let mut unitarity: f64 = 0.0;
    for i in 1..=100 {
        let s = s_matrix(cfg, Complex64::new(0.2 * i as f64, 0.0))?;
        unitarity = unitarity.max(s.value().map_or(f64::INFINITY, |s| (s.norm() - 1.0).abs()));
    }
    c.add("S-matrix unitarity", unitarity, 1e-12);

    let mut matching: f64 = 0.0;
    for (g, g_eff, mu) in [(-1.0, -5.0, 33.0), (-1.0, -2.0, 12.0), (1.0, 5.0, 48.0), (1.0, 2.0, 21.0)] {
        let sol = solve_at(cfg, g, g_eff, mu)?;
        let (cont, jmp) = sol.condition_defects(cfg);
        matching = matching.max((cont + jmp) / sol.left.amplitude.max(1.0));
    }
    c.add("nonlinear matching conditions", matching, 1e-8);
    let scan = scan_resonances(cfg, -1.0, 0.0, (1.0, 50.0), 200)?;
    let mut linear_gap: f64 = 0.0;
    for (mu, r) in scan.mu_grid.iter().zip(&scan.ratio) {
        let lin = amplitude_ratio_linear(cfg, *mu)?;
        linear_gap = linear_gap.max(r.map_or(f64::INFINITY, |r| (r - lin).abs()));
    }
    c.add("nonlinear scan at g_eff = 0 vs linear ratio", linear_gap, 1e-3);

    let mut report = Report::new("verify");
    report.note("checks", c.table.rows.len());
    report.note("failed", c.failed.len());
    report.tables.push(c.table);
    let failure = (!c.failed.is_empty()).then(|| CliError::Verification(c.failed.join("; ")));
    Ok((report, failure))
}
