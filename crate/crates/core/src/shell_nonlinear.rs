//! Nonlinear delta-shell: matched Jacobi-elliptic waves on either side of
//! `x = a`, effective nonlinearity, amplitude-ratio scans and the resonance
//! side points `μₙ^<`, `μₙ^>`.
//!
//! Inside the shell the wave vanishes at the hard wall:
//!
//! * attractive (`g < 0`): `ψ_l = A_l cn(4K(x/L + 1/4) | p_l)`, `p_l ∈ [0, 1/2)`
//! * repulsive (`g > 0`):  `ψ_l = A_l sn(4K x/L | p_l)`, `p_l ∈ [0, 1)`
//!
//! Outside, a wave of the same kind and chemical potential with its own
//! parameter `p_r` and shift. Continuity at `a` fixes the shift, the
//! derivative jump fixes `p_r`.

use std::f64::consts::PI;

use crate::elliptic::EllipticModulus;
use crate::error::{domain, ensure_finite, Error, Result};
use crate::quadrature::gauss_legendre;
use crate::roots::{bisect, brent, scan_brackets};
use crate::shell_linear::ShellConfig;
use crate::wave::{invariant, PeriodicWave, WaveKind};

/// Default number of μ grid points in a scan.
pub const DEFAULT_SCAN_POINTS: usize = 2000;
/// Scans exclude chemical potentials below this.
pub const MU_FLOOR: f64 = 1e-6;
/// Lower end of the `p_l` bracket of the inner solve.
pub const P_MIN: f64 = 1e-12;
const REDUCED_SCAN_POINTS: usize = 200;

fn p_max(kind: WaveKind) -> f64 {
    match kind {
        WaveKind::Cn => 0.5 - 1e-9,
        WaveKind::Sn => 1.0 - 1e-9,
    }
}

fn check_sign(g: f64, kind: WaveKind) -> Result<()> {
    match kind {
        WaveKind::Cn if g < 0.0 => Ok(()),
        WaveKind::Sn if g > 0.0 => Ok(()),
        _ => domain(format!("{kind:?} waves need g of the matching sign, got g = {g}")),
    }
}

/// Inside wave for `(μ, g, p_l)`. The period follows from the μ relation and
/// the amplitude from `A = 4√p K/(√|g| L)`; `ψ(0) = 0` by construction.
pub fn left_wave_for(mu: f64, g: f64, p_l: EllipticModulus, kind: WaveKind, a: f64) -> Result<PeriodicWave> {
    if !(a > 0.0) {
        return domain(format!("shell radius must be positive, got {a}"));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return domain(format!("left wave needs mu > 0, got {mu}"));
    }
    check_sign(g, kind)?;
    let p = p_l.value();
    let limit = match kind {
        WaveKind::Cn => 0.5,
        WaveKind::Sn => 1.0,
    };
    if p >= limit {
        return domain(format!("p_l = {p} outside the admissible range of {kind:?}"));
    }
    let wave = PeriodicWave::from_modulus(kind, mu, p_l, g, 0.0)?;
    Ok(with_wall_shift(wave))
}

/// Inside wave of the linear problem, unit amplitude.
pub fn linear_left_wave(mu: f64, kind: WaveKind) -> Result<PeriodicWave> {
    Ok(with_wall_shift(PeriodicWave::linear(kind, mu, 1.0, 0.0)?))
}

fn with_wall_shift(wave: PeriodicWave) -> PeriodicWave {
    let x0 = match wave.kind {
        WaveKind::Cn => -0.25 * wave.period,
        WaveKind::Sn => 0.0,
    };
    PeriodicWave { x0, ..wave }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedShellSolution {
    pub left: PeriodicWave,
    pub right: PeriodicWave,
    pub mu: f64,
    pub g: f64,
    pub g_eff: f64,
    pub amplitude_ratio: f64,
    /// Shift in the outside argument `β_r (x + x₀)`.
    pub x0_right: f64,
}

impl MatchedShellSolution {
    /// `ψ` on the half line: left wave for `x ≤ a`, right wave beyond.
    pub fn psi(&self, x: f64, a: f64) -> f64 {
        if x <= a {
            self.left.psi(x)
        } else {
            self.right.psi(x)
        }
    }

    /// `|ψ_l(a) − ψ_r(a)|`, `|ψ_r'(a) − ψ_l'(a) − 2λψ(a)|` by direct evaluation.
    pub fn condition_defects(&self, cfg: ShellConfig) -> (f64, f64) {
        let (pl, sl) = self.left.psi_and_slope(cfg.a);
        let (pr, sr) = self.right.psi_and_slope(cfg.a);
        ((pl - pr).abs(), (sr - sl - 2.0 * cfg.lambda * pl).abs())
    }

    /// The amplitude ratio from the elliptic parameters alone.
    pub fn ratio_from_parameters(&self) -> Option<f64> {
        let (pl, pr) = (self.left.p.value(), self.right.p.value());
        if self.g == 0.0 || pr == 0.0 {
            return None;
        }
        let sq = match self.left.kind {
            WaveKind::Cn => pl * (1.0 - 2.0 * pr) / ((1.0 - 2.0 * pl) * pr),
            WaveKind::Sn => pl * (pr + 1.0) / ((pl + 1.0) * pr),
        };
        Some(sq.sqrt())
    }
}

/// Printed reduced form of the matching conditions, LHS − RHS, as a function
/// of the outside parameter:
///
/// ```text
/// cn: (2λ²/μ) p_l/(1−2p_l) cn² − (4λ/√(2μ)) p_l/(1−2p_l)^{3/2} cn dn sn
///       − [(1−p_r)p_r/(1−2p_r)² − (1−p_l)p_l/(1−2p_l)²]
/// sn: (2λ²/μ) p_l/(p_l+1) sn² + (4λ/√(2μ)) p_l/(p_l+1)^{3/2} cn dn sn
///       − [p_r/(p_r+1)² − p_l/(p_l+1)²]
/// ```
///
/// with all elliptic functions at the left phase `u_l` at `x = a`.
pub fn reduced_condition(left: &PeriodicWave, cfg: ShellConfig, p_r: f64) -> f64 {
    let (mu, lam) = (left.mu, cfg.lambda);
    let pl = left.p.value();
    let t = crate::elliptic::jacobi(left.phase(cfg.a), left.p);
    let s = 4.0 * lam / (2.0 * mu).sqrt();
    match left.kind {
        WaveKind::Cn => {
            let q = 1.0 - 2.0 * pl;
            let lhs = 2.0 * lam * lam / mu * pl / q * t.cn * t.cn - s * pl / q.powf(1.5) * t.cn * t.dn * t.sn;
            lhs - (cn_invariant_scale(p_r) - cn_invariant_scale(pl))
        }
        WaveKind::Sn => {
            let q = pl + 1.0;
            let lhs = 2.0 * lam * lam / mu * pl / q * t.sn * t.sn + s * pl / q.powf(1.5) * t.cn * t.dn * t.sn;
            lhs - (sn_invariant_scale(p_r) - sn_invariant_scale(pl))
        }
    }
}

/// `(1−p)p/(1−2p)²`: the cn first integral in units of `4μ²/|g|`.
fn cn_invariant_scale(p: f64) -> f64 {
    (1.0 - p) * p / (1.0 - 2.0 * p).powi(2)
}

/// `p/(p+1)²`: the sn first integral in units of `4μ²/g`.
fn sn_invariant_scale(p: f64) -> f64 {
    p / (p + 1.0).powi(2)
}

/// Builds the outside wave with parameter `p_r`, fixes its shift by
/// continuity (choosing the branch whose slope satisfies the jump), and
/// verifies both matching conditions by direct evaluation.
pub fn match_at_shell(left: &PeriodicWave, cfg: ShellConfig, p_r: EllipticModulus) -> Result<MatchedShellSolution> {
    let a = cfg.a;
    let (psi_a, slope_l) = left.psi_and_slope(a);
    let slope_r = slope_l + 2.0 * cfg.lambda * psi_a;
    let (mu, g) = (left.mu, left.g);

    let unshifted = if g == 0.0 {
        if p_r.value() != 0.0 {
            return domain("linear matching needs p_r = 0");
        }
        let beta = (2.0 * mu).sqrt();
        let c = invariant(psi_a, slope_r, mu, 0.0);
        PeriodicWave::linear(left.kind, mu, c.sqrt() / beta, 0.0)?
    } else {
        PeriodicWave::from_modulus(left.kind, mu, p_r, g, 0.0)?
    };
    let amp_r = unshifted.amplitude;
    if !(amp_r > 0.0) {
        return Err(Error::NoSolution { reason: format!("outside amplitude vanishes at p_r = {}", p_r.value()) });
    }
    if psi_a.abs() > amp_r * (1.0 + 1e-12) {
        return Err(Error::NoSolution {
            reason: format!("continuity impossible: |psi(a)| = {} exceeds A_r = {amp_r}", psi_a.abs()),
        });
    }
    let beta_r = unshifted.beta();
    let u = unshifted.phase_for_state(psi_a / amp_r, slope_r / (amp_r * beta_r));
    let right = PeriodicWave { x0: a - u / beta_r, ..unshifted };

    let (pr_a, sr_a) = right.psi_and_slope(a);
    let cont = (pr_a - psi_a).abs();
    let jump = (sr_a - slope_r).abs();
    let cont_tol = 1e-9 * psi_a.abs() + 1e-12 * left.amplitude;
    let jump_tol = 1e-8 * slope_l.abs().max(slope_r.abs()).max(1.0);
    if !(cont <= cont_tol && jump <= jump_tol) {
        return Err(Error::NoSolution {
            reason: format!("p_r = {} violates matching: continuity {cont:e}, jump {jump:e}", p_r.value()),
        });
    }

    let g_eff = interior_nonlinearity(left, a);
    Ok(MatchedShellSolution {
        left: *left,
        right,
        mu,
        g,
        g_eff,
        amplitude_ratio: left.amplitude / amp_r,
        x0_right: u / beta_r - a,
    })
}

/// Finds `p_r` from the reduced condition (scan plus bisection) and returns
/// the matched solution with the smallest matching defect.
pub fn solve_matching(left: &PeriodicWave, cfg: ShellConfig) -> Result<MatchedShellSolution> {
    if left.g == 0.0 {
        return match_at_shell(left, cfg, EllipticModulus::ZERO);
    }
    let hi = match left.kind {
        WaveKind::Cn => 0.5 - 1e-12,
        WaveKind::Sn => 1.0 - 1e-12,
    };
    let f = |p: f64| reduced_condition(left, cfg, p);
    let brackets = scan_brackets(f, 0.0, hi, REDUCED_SCAN_POINTS);
    if brackets.is_empty() {
        return Err(Error::NoSolution {
            reason: format!("reduced condition has no root for p_r in [0, {hi}] at mu = {}", left.mu),
        });
    }
    let mut best: Option<(MatchedShellSolution, f64)> = None;
    let mut last_err = None;
    for (lo, hi) in brackets {
        let p = bisect(f, lo, hi)?;
        match match_at_shell(left, cfg, EllipticModulus::new(p)?) {
            Ok(sol) => {
                let (c, j) = sol.condition_defects(cfg);
                let score = c + j;
                if best.as_ref().is_none_or(|(_, s)| score < *s) {
                    best = Some((sol, score));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some((sol, _)) => Ok(sol),
        None => Err(last_err.unwrap_or(Error::NoSolution { reason: "no admissible p_r".into() })),
    }
}

/// Closed-form inverse of the reduced condition: the outside parameter whose
/// first integral equals `c`. `None` for sn when `c` exceeds the separatrix.
pub fn outside_parameter_from_invariant(kind: WaveKind, mu: f64, g: f64, c: f64) -> Option<f64> {
    let t = c * g.abs() / (4.0 * mu * mu);
    match kind {
        WaveKind::Cn => Some(0.5 * (1.0 - 1.0 / (1.0 + 4.0 * t).sqrt())),
        WaveKind::Sn => {
            if t > 0.25 {
                None
            } else if t == 0.0 {
                Some(0.0)
            } else {
                Some(((1.0 - 2.0 * t) - (1.0 - 4.0 * t).sqrt()) / (2.0 * t))
            }
        }
    }
}

/// `g ∫₀^a |ψ_l|² dx`.
pub fn interior_nonlinearity(left: &PeriodicWave, a: f64) -> f64 {
    if left.g == 0.0 {
        return 0.0;
    }
    let kq = left.quarter_period();
    let half_periods = 2.0 * a / left.period;
    let panels = ((half_periods + 1.0) * (8.0 + 2.0 * kq)).ceil() as usize;
    left.g * gauss_legendre(|x| left.psi(x).powi(2), 0.0, a, panels)
}

/// Effective nonlinearity of a matched solution.
pub fn effective_nonlinearity(sol: &MatchedShellSolution, cfg: ShellConfig) -> f64 {
    interior_nonlinearity(&sol.left, cfg.a)
}

/// The `p_l` for which the inside wave at chemical potential μ carries the
/// requested effective nonlinearity, bracketed inside `[P_MIN, p_max]` by
/// moving the upper end outward until the residual changes sign.
pub fn solve_left_modulus(mu: f64, g: f64, kind: WaveKind, g_eff: f64, a: f64) -> Result<EllipticModulus> {
    check_sign(g, kind)?;
    if g_eff == 0.0 || g_eff.signum() != g.signum() {
        return domain(format!("target g_eff = {g_eff} incompatible with g = {g}"));
    }
    let residual = |p: f64| -> f64 {
        match left_wave_for(mu, g, EllipticModulus::new(p).expect("bracket inside [0, 1)"), kind, a) {
            Ok(w) => interior_nonlinearity(&w, a) - g_eff,
            Err(_) => f64::NAN,
        }
    };
    // Walk the upper end toward p_max; cn waves near p = 1/2 oscillate very
    // fast, so the endpoint itself is only evaluated if nothing earlier
    // brackets the target.
    let limit: f64 = match kind {
        WaveKind::Cn => 0.5,
        WaveKind::Sn => 1.0,
    };
    let mut lo = P_MIN;
    let mut flo = residual(lo);
    let mut bracket = None;
    for gap in [0.5, 0.25, 0.1, 0.03, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8] {
        let hi = (limit * (1.0 - gap)).max(lo).min(p_max(kind));
        let fhi = residual(hi);
        if flo.is_finite() && fhi.is_finite() && flo.signum() != fhi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        if fhi.is_finite() {
            lo = hi;
            flo = fhi;
        }
    }
    if bracket.is_none() {
        let hi = p_max(kind);
        let fhi = residual(hi);
        if flo.is_finite() && fhi.is_finite() && flo.signum() != fhi.signum() {
            bracket = Some((lo, hi));
        }
    }
    let (lo, hi) = bracket.ok_or_else(|| Error::NoSolution { reason: format!("g_eff = {g_eff} unreachable at mu = {mu}") })?;
    EllipticModulus::new(brent(residual, lo, hi, 0.0)?)
}

/// Matched solution at chemical potential μ with the given effective
/// nonlinearity (`g_eff = 0` takes the linear path).
pub fn solve_at(cfg: ShellConfig, g: f64, g_eff: f64, mu: f64) -> Result<MatchedShellSolution> {
    ensure_finite("g_eff", g_eff)?;
    let kind = WaveKind::for_nonlinearity(g);
    let left = if g_eff == 0.0 {
        linear_left_wave(mu, kind)?
    } else {
        let p = solve_left_modulus(mu, g, kind, g_eff, cfg.a)?;
        left_wave_for(mu, g, p, kind, cfg.a)?
    };
    solve_matching(&left, cfg)
}

/// A resonance located on a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub mu_n: f64,
    pub peak_ratio: f64,
    pub mu_less: Option<f64>,
    pub mu_greater: Option<f64>,
    pub width_fwhm: Option<f64>,
    pub width_delta: Option<f64>,
    /// Number of half-periods of the inside wave begun before `x = a`.
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceScan {
    pub g_eff: f64,
    pub mu_grid: Vec<f64>,
    /// `None` where no matched solution exists.
    pub ratio: Vec<Option<f64>>,
    pub resonances: Vec<Resonance>,
}

impl ResonanceScan {
    pub fn resonance(&self, n: u32) -> Option<&Resonance> {
        self.resonances.iter().find(|r| r.n == n)
    }
}

fn ratio_or_nan(cfg: ShellConfig, g: f64, g_eff: f64, mu: f64) -> f64 {
    solve_at(cfg, g, g_eff, mu).map(|s| s.amplitude_ratio).unwrap_or(f64::NAN)
}

fn node_index(left: &PeriodicWave, a: f64) -> u32 {
    let kq = left.quarter_period();
    (left.beta() * a / (2.0 * kq)).floor() as u32 + 1
}

/// Golden-section maximisation of the ratio on `[lo, hi]`.
fn refine_peak(cfg: ShellConfig, g: f64, g_eff: f64, lo: f64, hi: f64, guess: (f64, f64)) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |mu: f64| ratio_or_nan(cfg, g, g_eff, mu);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = guess;
    for _ in 0..60 {
        if !(fc.is_finite() && fd.is_finite()) {
            break;
        }
        if fc > best.1 {
            best = (c, fc);
        }
        if fd > best.1 {
            best = (d, fd);
        }
        if (b - a) <= 1e-12 * b.abs() {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    best
}

fn refine_crossing(cfg: ShellConfig, g: f64, g_eff: f64, lo: f64, hi: f64, level: f64, grid: (f64, f64)) -> f64 {
    let f = |mu: f64| ratio_or_nan(cfg, g, g_eff, mu) - level;
    match brent(f, lo, hi, 1e-12) {
        Ok(mu) => mu,
        Err(_) => interpolate_level(lo, grid.0, hi, grid.1, level),
    }
}

fn interpolate_level(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}

/// Amplitude ratio along a uniform μ grid with resonances, their `A_l = A_r`
/// side points and widths. Points without a solution are recorded as `None`.
pub fn scan_resonances(cfg: ShellConfig, g: f64, g_eff: f64, mu_range: (f64, f64), n_points: usize) -> Result<ResonanceScan> {
    ensure_finite("g", g)?;
    ensure_finite("g_eff", g_eff)?;
    let (mu_lo, mu_hi) = mu_range;
    if !(mu_lo >= MU_FLOOR && mu_hi > mu_lo && mu_hi.is_finite()) {
        return domain(format!("mu range must satisfy {MU_FLOOR} <= lo < hi, got [{mu_lo}, {mu_hi}]"));
    }
    if n_points < 2 {
        return domain("a scan needs at least two points");
    }
    if g_eff != 0.0 && (g == 0.0 || g.signum() != g_eff.signum()) {
        return domain(format!("g_eff = {g_eff} incompatible with g = {g}"));
    }
    let mu_grid: Vec<f64> =
        (0..n_points).map(|i| mu_lo + (mu_hi - mu_lo) * i as f64 / (n_points - 1) as f64).collect();
    let ratio: Vec<Option<f64>> =
        mu_grid.iter().map(|&mu| solve_at(cfg, g, g_eff, mu).ok().map(|s| s.amplitude_ratio)).collect();

    let mut resonances = Vec::new();
    for i in 1..n_points.saturating_sub(1) {
        let (Some(prev), Some(here), Some(next)) = (ratio[i - 1], ratio[i], ratio[i + 1]) else { continue };
        if !(here > 1.0 && here > prev && here > next) {
            continue;
        }
        let (mu_n, peak) = refine_peak(cfg, g, g_eff, mu_grid[i - 1], mu_grid[i + 1], (mu_grid[i], here));

        let crossing = |level: f64, downward: bool| -> Option<f64> {
            let mut j = i;
            loop {
                let (k0, k1) = if downward {
                    if j == 0 {
                        return None;
                    }
                    (j - 1, j)
                } else {
                    if j + 1 >= n_points {
                        return None;
                    }
                    (j, j + 1)
                };
                let (r0, r1) = (ratio[k0]?, ratio[k1]?);
                let outer = if downward { r0 } else { r1 };
                if outer <= level {
                    return Some(refine_crossing(cfg, g, g_eff, mu_grid[k0], mu_grid[k1], level, (r0, r1)));
                }
                j = if downward { k0 } else { k1 };
            }
        };
        let fwhm_crossing = |level: f64, downward: bool| -> Option<f64> {
            let mut j = i;
            loop {
                let (k0, k1) = if downward {
                    if j == 0 {
                        return None;
                    }
                    (j - 1, j)
                } else {
                    if j + 1 >= n_points {
                        return None;
                    }
                    (j, j + 1)
                };
                let (r0, r1) = (ratio[k0]?, ratio[k1]?);
                let outer = if downward { r0 } else { r1 };
                if outer <= level {
                    return Some(interpolate_level(mu_grid[k0], r0, mu_grid[k1], r1, level));
                }
                j = if downward { k0 } else { k1 };
            }
        };

        let mu_less = crossing(1.0, true);
        let mu_greater = crossing(1.0, false);
        let half = 1.0 + 0.5 * (peak - 1.0);
        let width_fwhm = match (fwhm_crossing(half, true), fwhm_crossing(half, false)) {
            (Some(l), Some(r)) => Some(r - l),
            _ => None,
        };
        let n = solve_at(cfg, g, g_eff, mu_n).map(|s| node_index(&s.left, cfg.a)).unwrap_or(0);
        resonances.push(Resonance {
            mu_n,
            peak_ratio: peak,
            mu_less,
            mu_greater,
            width_fwhm,
            width_delta: mu_less.zip(mu_greater).map(|(l, r)| r - l),
            n,
        });
    }
    Ok(ResonanceScan { g_eff, mu_grid, ratio, resonances })
}

/// `μₙ^>` directly: the chemical potential at which the inside wave has its
/// n-th node at `x = a` (the outside wave then continues it unchanged).
pub fn mu_greater_exact(cfg: ShellConfig, g: f64, g_eff: f64, n: u32, bracket: (f64, f64)) -> Result<f64> {
    let kind = WaveKind::for_nonlinearity(g);
    let f = |mu: f64| -> f64 {
        let left = if g_eff == 0.0 {
            linear_left_wave(mu, kind)
        } else {
            solve_left_modulus(mu, g, kind, g_eff, cfg.a).and_then(|p| left_wave_for(mu, g, p, kind, cfg.a))
        };
        match left {
            Ok(w) => w.beta() * cfg.a - 2.0 * n as f64 * w.quarter_period(),
            Err(_) => f64::NAN,
        }
    };
    brent(f, bracket.0, bracket.1, 1e-12)
}

/// `μₙ^> ≈ n²π²/(2a²) + 3g_eff/(2a)`, first order in `g_eff`.
pub fn mu_greater_approx(cfg: ShellConfig, n: u32, g_eff: f64) -> f64 {
    let n = n as f64;
    n * n * PI * PI / (2.0 * cfg.a * cfg.a) + 1.5 * g_eff / cfg.a
}

/// Linear period `L_n^<` from `tan(2πa/L) = −2π/(λL)`, solved in the n-th
/// branch: `2πa/L ∈ ((n − 1/2)π, nπ)` for `λ > 0`, `(nπ, (n + 1/2)π)` for
/// `λ < 0`.
pub fn solve_l_less(cfg: ShellConfig, n: u32) -> Result<f64> {
    if cfg.lambda == 0.0 || n == 0 {
        return domain("L_n^< needs lambda != 0 and n >= 1");
    }
    let la = cfg.lambda * cfg.a;
    // θ = 2πa/L; tan θ = −θ/(λa) written without poles
    let f = |theta: f64| theta.sin() + theta * theta.cos() / la;
    let nf = n as f64;
    let (lo, hi) = if cfg.lambda > 0.0 { ((nf - 0.5) * PI, nf * PI) } else { (nf * PI, (nf + 0.5) * PI) };
    let theta = brent(f, lo, hi, 1e-15).map_err(|_| Error::NonConvergence {
        detail: format!("no root of tan(2 pi a/L) = -2 pi/(lambda L) in branch n = {n}"),
        trace: vec![format!("theta bracket [{lo}, {hi}]")],
    })?;
    Ok(2.0 * PI * cfg.a / theta)
}

/// `μₙ^< ≈ 2π²/L² + (3g_eff/(2a)) (1 − sin(4πa/L)/(4πa/L))⁻¹` with `L = L_n^<`.
pub fn mu_less_approx(cfg: ShellConfig, n: u32, g_eff: f64) -> Result<f64> {
    let l = solve_l_less(cfg, n)?;
    let z = 4.0 * PI * cfg.a / l;
    Ok(2.0 * PI * PI / (l * l) + 1.5 * g_eff / cfg.a / (1.0 - z.sin() / z))
}

/// `(2 g_eff/(aμ))^{1/2}`: approximate lowest amplitude ratio for which a
/// repulsive solution exists.
pub fn repulsive_existence_threshold(mu: f64, g_eff: f64, a: f64) -> Result<f64> {
    if !(mu > 0.0) || g_eff < 0.0 || !(a > 0.0) {
        return domain(format!("threshold needs mu > 0, g_eff >= 0, a > 0; got mu = {mu}, g_eff = {g_eff}, a = {a}"));
    }
    Ok((2.0 * g_eff / (a * mu)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell_linear::amplitude_ratio_linear;

    fn strong() -> ShellConfig {
        ShellConfig::new(1.0, 10.0).unwrap()
    }

    fn m(p: f64) -> EllipticModulus {
        EllipticModulus::new(p).unwrap()
    }

    #[test]
    fn left_wave_vanishes_at_wall() {
        let cn = left_wave_for(10.0, -1.0, m(0.3), WaveKind::Cn, 1.0).unwrap();
        assert!(cn.psi(0.0).abs() < 1e-14 * cn.amplitude);
        let sn = left_wave_for(10.0, 1.0, m(0.7), WaveKind::Sn, 1.0).unwrap();
        assert_eq!(sn.psi(0.0), 0.0);
    }

    #[test]
    fn left_wave_domain() {
        assert!(left_wave_for(10.0, 1.0, m(0.3), WaveKind::Cn, 1.0).is_err());
        assert!(left_wave_for(10.0, -1.0, m(0.5), WaveKind::Cn, 1.0).is_err());
        assert!(left_wave_for(-1.0, 1.0, m(0.3), WaveKind::Sn, 1.0).is_err());
        assert!(left_wave_for(10.0, -1.0, m(0.3), WaveKind::Cn, 0.0).is_err());
    }

    #[test]
    fn sn_zero_modulus_saturates_period_bound() {
        let mu = 7.0;
        let w = left_wave_for(mu, 1.0, EllipticModulus::ZERO, WaveKind::Sn, 1.0).unwrap();
        assert!((w.period - 2.0 * PI / (2.0 * mu).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn matched_solution_satisfies_conditions() {
        for (g, kind, p) in [(-1.0, WaveKind::Cn, 0.2), (1.0, WaveKind::Sn, 0.3)] {
            let left = left_wave_for(30.0, g, m(p), kind, 1.0).unwrap();
            let sol = solve_matching(&left, strong()).unwrap();
            let (c, j) = sol.condition_defects(strong());
            assert!(c < 1e-9 * left.psi(1.0).abs(), "{kind:?}: continuity {c}");
            assert!(j < 1e-8, "{kind:?}: jump {j}");
            let from_p = sol.ratio_from_parameters().unwrap();
            assert!((from_p - sol.amplitude_ratio).abs() < 1e-10 * from_p);
        }
    }

    #[test]
    fn closed_form_outside_parameter() {
        let left = left_wave_for(30.0, -1.0, m(0.2), WaveKind::Cn, 1.0).unwrap();
        let sol = solve_matching(&left, strong()).unwrap();
        let (psi, s) = left.psi_and_slope(1.0);
        let c = invariant(psi, s + 20.0 * psi, 30.0, -1.0);
        let p = outside_parameter_from_invariant(WaveKind::Cn, 30.0, -1.0, c).unwrap();
        assert!((p - sol.right.p.value()).abs() < 1e-12);
    }

    #[test]
    fn linear_matching_reproduces_linear_ratio() {
        for e in [2.0, 4.488, 20.0] {
            let sol = solve_at(strong(), -1.0, 0.0, e).unwrap();
            let lin = amplitude_ratio_linear(strong(), e).unwrap();
            assert!((sol.amplitude_ratio - lin).abs() < 1e-12 * lin);
        }
    }

    #[test]
    fn inner_solve_hits_target() {
        for (g, target) in [(-1.0, -5.0), (1.0, 5.0), (-1.0, -1e-4)] {
            let kind = WaveKind::for_nonlinearity(g);
            let p = solve_left_modulus(40.0, g, kind, target, 1.0).unwrap();
            let w = left_wave_for(40.0, g, p, kind, 1.0).unwrap();
            let got = interior_nonlinearity(&w, 1.0);
            assert!((got - target).abs() < 1e-10 * target.abs(), "{got} vs {target}");
        }
        assert!(solve_left_modulus(40.0, -1.0, WaveKind::Cn, 5.0, 1.0).is_err());
    }

    #[test]
    fn approximations() {
        let cfg = strong();
        assert!((mu_greater_approx(cfg, 3, 0.0) - 4.5 * PI * PI).abs() < 1e-12);
        assert!((mu_greater_approx(cfg, 3, -5.0) - (4.5 * PI * PI - 7.5)).abs() < 1e-12);
        let l = solve_l_less(cfg, 3).unwrap();
        assert!((l - 0.7215).abs() < 1e-4, "{l}");
        let mu = mu_less_approx(cfg, 3, 0.0).unwrap();
        assert!((mu - 2.0 * PI * PI / (l * l)).abs() < 1e-12);
        let huge = ShellConfig::new(1.0, 1e12).unwrap();
        assert!((solve_l_less(huge, 3).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn threshold_formula() {
        assert_eq!(repulsive_existence_threshold(40.0, 0.0, 1.0).unwrap(), 0.0);
        assert!((repulsive_existence_threshold(40.0, 5.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(repulsive_existence_threshold(0.0, 5.0, 1.0).is_err());
    }

    #[test]
    fn scan_validation() {
        let cfg = strong();
        assert!(scan_resonances(cfg, -1.0, -5.0, (0.0, 10.0), 10).is_err());
        assert!(scan_resonances(cfg, -1.0, -5.0, (1.0, 10.0), 1).is_err());
        assert!(scan_resonances(cfg, 1.0, -5.0, (1.0, 10.0), 10).is_err());
    }
}
