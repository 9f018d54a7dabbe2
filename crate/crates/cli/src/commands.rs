use clap::Args;
use nlse_core::delta_well::{bound_state, transition_diagnostics, BoundStateOutcome, LAMBDA_C_ATTRACTIVE};
use nlse_core::shell_linear::{amplitude_ratio_linear, find_poles, resonance_wavefunction, Pole, ShellConfig};
use nlse_core::shell_nonlinear::{
    mu_greater_approx, mu_less_approx, repulsive_existence_threshold, scan_resonances, solve_at, DEFAULT_SCAN_POINTS,
};

use crate::error::{invalid, CliError};
use crate::output::{Cell, Report, Table};
use crate::verify::{local_residual, RowCheck};

fn finite(name: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => invalid(format!("{name} must be finite, got {v}")),
        None => Ok(()),
    }
}

fn grid_at_least(grid: usize, min: usize) -> Result<(), CliError> {
    if grid < min {
        return invalid(format!("--grid must be at least {min}, got {grid}"));
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

#[derive(Debug, Args)]
pub struct BoundStateArgs {
    /// Delta strength(s), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
    /// Nonlinearity g (negative: attractive), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub g: Vec<f64>,
    /// Half width of the sampling window; chosen from the decay length when omitted.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Samples per wavefunction table.
    #[arg(long, default_value_t = 801)]
    pub grid: usize,
    /// Treat a missing bound state as an error (exit code 4).
    #[arg(long)]
    pub strict: bool,
    /// Check the equation residual on 1% of the emitted rows.
    #[arg(long)]
    pub verify_rows: bool,
}

pub fn bound_state_cmd(args: &BoundStateArgs) -> Result<(Report, Option<CliError>), CliError> {
    finite("--lambda", &args.lambda)?;
    finite("--g", &args.g)?;
    grid_at_least(args.grid, 2)?;
    if let Some(x) = args.x_max {
        if !(x > 0.0 && x.is_finite()) {
            return invalid(format!("--x-max must be positive, got {x}"));
        }
    }

    let mut outcomes = Vec::new();
    for &g in &args.g {
        for &lambda in &args.lambda {
            outcomes.push(bound_state(lambda, g)?);
        }
    }
    let half_width = args.x_max.unwrap_or_else(|| {
        outcomes
            .iter()
            .filter_map(BoundStateOutcome::state)
            .map(|s| if s.k > 0.0 { s.x0.abs() + 12.0 / s.k } else { 40.0 / s.lambda.abs() })
            .fold(1.0, f64::max)
    });

    let mut report = Report::new("bound-state");
    report.note("x_max", half_width);
    let mut states = Table::new(
        "states",
        &["lambda", "g", "status", "mu", "k", "x0", "amplitude", "norm", "lambda_c", "g_c", "mu_c", "message"],
    );
    let mut check = RowCheck::new(args.verify_rows);
    for outcome in &outcomes {
        match outcome {
            BoundStateOutcome::Bound(s) => {
                states.push(vec![
                    s.lambda.into(),
                    s.g.into(),
                    s.family.name().into(),
                    s.mu.into(),
                    s.k.into(),
                    s.x0.into(),
                    s.amplitude().into(),
                    s.norm().into(),
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                ]);
                let mut wave = Table::new(format!("wavefunction lambda={} g={}", s.lambda, s.g), &["x", "psi"]);
                for (i, x) in linspace(-half_width, half_width, args.grid).enumerate() {
                    if check.due(i) && x.abs() > 1e-3 {
                        check.record(local_residual(|x| s.psi(x), x, s.mu, s.g)?);
                    }
                    wave.push(vec![x.into(), s.psi(x).into()]);
                }
                report.tables.push(wave);
            }
            BoundStateOutcome::NoBoundState { lambda, g, critical } => {
                let message = format!(
                    "no bound state for lambda = {lambda}, g = {g} (lambda_c = {}, g_c = {})",
                    critical.lambda_c, critical.g_c
                );
                if args.strict {
                    return Err(CliError::NoSolution(message));
                }
                eprintln!("note: {message}");
                states.push(vec![
                    (*lambda).into(),
                    (*g).into(),
                    "no_bound_state".into(),
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    critical.lambda_c.into(),
                    critical.g_c.into(),
                    critical.mu_c.into(),
                    message.into(),
                ]);
            }
        }
    }
    report.tables.insert(0, states);
    let failure = check.finish(&mut report);
    Ok((report, failure))
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    /// Explicit delta strengths (g = −1); overrides the range.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 81)]
    pub grid: usize,
}

pub fn transition_cmd(args: &TransitionArgs) -> Result<Report, CliError> {
    let lambdas: Vec<f64> = if args.lambda.is_empty() {
        finite("--lambda-min/--lambda-max", &[args.lambda_min, args.lambda_max])?;
        grid_at_least(args.grid, 2)?;
        if args.lambda_min >= args.lambda_max {
            return invalid("--lambda-min must be below --lambda-max");
        }
        linspace(args.lambda_min, args.lambda_max, args.grid).collect()
    } else {
        finite("--lambda", &args.lambda)?;
        args.lambda.clone()
    };

    let mut report = Report::new("transition");
    report.note("g", -1.0);
    report.note("lambda_c", LAMBDA_C_ATTRACTIVE);
    let mut table = Table::new("transition", &["lambda", "regime", "x0", "norm_per_period", "period", "mu"]);
    let mut skipped = Vec::new();
    for lambda in lambdas {
        if (lambda - LAMBDA_C_ATTRACTIVE).abs() < 1e-12 {
            skipped.push(lambda.to_string());
            continue;
        }
        let t = transition_diagnostics(lambda)?;
        let regime = if t.period.is_some() { "scattering" } else { "bound" };
        table.push(vec![
            t.lambda.into(),
            regime.into(),
            t.x0.into(),
            t.norm_per_period.into(),
            t.period.into(),
            t.mu.into(),
        ]);
    }
    if !skipped.is_empty() {
        eprintln!("note: skipped the singular point lambda = lambda_c");
    }
    report.note("skipped_lambda", skipped.join(";"));
    report.tables.push(table);
    Ok(report)
}

#[derive(Debug, Args)]
pub struct ShellLinearArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Number of resonance bands searched for poles.
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Energy window (E_min, E_max] of the amplitude-ratio table.
    #[arg(long, default_value_t = 0.0)]
    pub e_min: f64,
    #[arg(long, default_value_t = 30.0)]
    pub e_max: f64,
    /// Samples in the ratio and wavefunction tables.
    #[arg(long, default_value_t = 600)]
    pub grid: usize,
    /// Right end of the resonance wavefunction window.
    #[arg(long, default_value_t = 3.0)]
    pub x_max: f64,
}

pub fn shell_linear_cmd(args: &ShellLinearArgs) -> Result<Report, CliError> {
    finite("shell parameters", &[args.a, args.lambda, args.e_min, args.e_max, args.x_max])?;
    grid_at_least(args.grid, 1)?;
    if !(args.e_min >= 0.0 && args.e_max > args.e_min) {
        return invalid("energy window needs 0 <= e_min < e_max");
    }
    if args.x_max <= 0.0 || args.n_max == 0 {
        return invalid("--x-max and --n-max must be positive");
    }
    let cfg = ShellConfig::new(args.a, args.lambda).map_err(|e| CliError::Invalid(e.to_string()))?;

    let mut report = Report::new("shell-linear");
    report.note("a", cfg.a);
    report.note("lambda", cfg.lambda);
    let mut poles = Table::new("poles", &["kind", "n", "k_re", "k_im", "energy_re", "energy_im", "gamma"]);
    let mut most_stable = None;
    if cfg.lambda == 0.0 {
        report.note("poles", "none: lambda = 0 leaves a bare hard wall");
    } else {
        let found = find_poles(cfg, args.n_max)?;
        report.note("lambda_a_above_critical", found.lambda_a_above_critical);
        let first = found.resonances().min_by(|x, y| x.e.total_cmp(&y.e));
        if let Some(r) = first {
            report.note("first_pole", format!("{:.6} - {:.6}i", r.e, r.gamma / 2.0));
            report.note("first_pole_energy_re", r.energy.re);
            report.note("first_pole_energy_im", r.energy.im);
        }
        most_stable = found.resonances().min_by(|x, y| x.gamma.total_cmp(&y.gamma)).copied();
        for p in &found.poles {
            let (k, energy) = (p.k(), p.k() * p.k() / 2.0);
            let (n, gamma) = match p {
                Pole::Resonance(r) => (Cell::from(r.n), Cell::from(r.gamma)),
                _ => (Cell::Null, Cell::Null),
            };
            poles.push(vec![p.kind().into(), n, k.re.into(), k.im.into(), energy.re.into(), energy.im.into(), gamma]);
        }
    }
    report.tables.push(poles);

    let mut ratio = Table::new("amplitude_ratio", &["energy", "ratio"]);
    let step = (args.e_max - args.e_min) / args.grid as f64;
    for i in 1..=args.grid {
        let e = if i == args.grid { args.e_max } else { args.e_min + step * i as f64 };
        ratio.push(vec![e.into(), amplitude_ratio_linear(cfg, e)?.into()]);
    }
    report.tables.push(ratio);

    if let Some(r) = most_stable {
        report.note("wavefunction_pole_energy_re", r.energy.re);
        report.note("wavefunction_pole_energy_im", r.energy.im);
        let mut wave = Table::new("resonance_wavefunction", &["x", "abs2", "re", "im"]);
        for x in linspace(0.0, args.x_max, args.grid.max(2)) {
            let psi = resonance_wavefunction(cfg, r.k, x)?;
            wave.push(vec![x.into(), psi.norm_sqr().into(), psi.re.into(), psi.im.into()]);
        }
        report.tables.push(wave);
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct ShellScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Effective nonlinearities, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub g_eff: Vec<f64>,
    /// Nonlinearity g; only its sign matters. Defaults to the sign of each
    /// g_eff (−1 for g_eff = 0).
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 80.0)]
    pub mu_max: f64,
    #[arg(long, default_value_t = DEFAULT_SCAN_POINTS)]
    pub grid: usize,
    /// Re-solve and check the equation on 1% of the emitted rows.
    #[arg(long)]
    pub verify_rows: bool,
}

fn scan_sign(g: Option<f64>, g_eff: f64) -> Result<f64, CliError> {
    let sign = match g {
        Some(0.0) => return invalid("--g must be nonzero"),
        Some(g) => g.signum(),
        None if g_eff > 0.0 => 1.0,
        None => -1.0,
    };
    if sign * g_eff < 0.0 {
        return invalid(format!("g_eff = {g_eff} has the opposite sign to g"));
    }
    Ok(sign)
}

pub fn shell_scan_cmd(args: &ShellScanArgs) -> Result<(Report, Option<CliError>), CliError> {
    finite("shell parameters", &[args.a, args.lambda, args.mu_min, args.mu_max])?;
    finite("--g-eff", &args.g_eff)?;
    grid_at_least(args.grid, 3)?;
    if !(args.mu_min > 0.0 && args.mu_max > args.mu_min) {
        return invalid("scan window needs 0 < mu_min < mu_max");
    }
    let cfg = ShellConfig::new(args.a, args.lambda).map_err(|e| CliError::Invalid(e.to_string()))?;
    let signs: Vec<f64> = args.g_eff.iter().map(|&g_eff| scan_sign(args.g, g_eff)).collect::<Result<_, _>>()?;

    let mut report = Report::new("shell-scan");
    report.note("a", cfg.a);
    report.note("lambda", cfg.lambda);
    let mut resonances = Table::new(
        "resonances",
        &[
            "g_eff",
            "n",
            "mu_n",
            "peak_ratio",
            "mu_less",
            "mu_greater",
            "width_fwhm",
            "width_delta",
            "mu_less_approx",
            "mu_greater_approx",
        ],
    );
    let mut check = RowCheck::new(args.verify_rows);
    let mut gaps = 0;
    for (&g_eff, &g) in args.g_eff.iter().zip(&signs) {
        let scan = scan_resonances(cfg, g, g_eff, (args.mu_min, args.mu_max), args.grid)?;
        for r in &scan.resonances {
            resonances.push(vec![
                g_eff.into(),
                r.n.into(),
                r.mu_n.into(),
                r.peak_ratio.into(),
                r.mu_less.into(),
                r.mu_greater.into(),
                r.width_fwhm.into(),
                r.width_delta.into(),
                mu_less_approx(cfg, r.n, g_eff).ok().into(),
                mu_greater_approx(cfg, r.n, g_eff).into(),
            ]);
        }
        let repulsive = g_eff > 0.0;
        let columns: &[&str] = if repulsive { &["mu", "ratio", "threshold"] } else { &["mu", "ratio"] };
        let mut series = Table::new(format!("scan g_eff={g_eff}"), columns);
        for (i, (&mu, &ratio)) in scan.mu_grid.iter().zip(&scan.ratio).enumerate() {
            gaps += usize::from(ratio.is_none());
            if ratio.is_some() && check.due(i) {
                let sol = solve_at(cfg, g, g_eff, mu)?;
                let (cont, jump) = sol.condition_defects(cfg);
                let scale = sol.left.amplitude.max(1.0);
                check.record((cont + jump) / scale);
                for x in [0.5 * cfg.a, 1.5 * cfg.a] {
                    check.record(local_residual(|x| sol.psi(x, cfg.a), x, mu, g)?);
                }
            }
            let mut row = vec![mu.into(), ratio.into()];
            if repulsive {
                row.push(repulsive_existence_threshold(mu, g_eff, cfg.a)?.into());
            }
            series.push(row);
        }
        report.tables.push(series);
    }
    report.note("no_solution_points", gaps);
    report.tables.insert(0, resonances);
    let failure = check.finish(&mut report);
    Ok((report, failure))
}
