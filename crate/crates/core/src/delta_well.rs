//! Stationary states for a single delta potential `V(x) = λ δ(x)`.
//!
//! Bound states are matched free solutions, symmetric about the delta:
//!
//! | g     | ψ(x), x ≥ 0                          | shift                 |
//! |-------|---------------------------------------|-----------------------|
//! | g < 0 | `k/√|g| · sech(k(x − x₀))`            | `tanh(k x₀) = λ/k`    |
//! | g > 0 | `k/√g · cosech(k(x − x₀))`, `x₀ < 0`  | `tanh(k x₀) = k/λ`    |
//! | g = 0 | `√|λ| · e^{λ x}`                      | none                  |
//!
//! with `k = −λ − g/2` and `μ = −k²/2` from normalisation. At `g = −2λ`
//! (repulsive nonlinearity) the state degenerates to the rational function
//! `1/(√g (x − 1/λ))` with `μ = 0`.

use crate::elliptic::{complete_k, inverse_cn, jacobi, EllipticModulus};
use crate::error::{domain, ensure_finite, Error, Result};
use crate::quadrature::{adaptive_simpson, adaptive_simpson_panels};
use crate::roots::{brackets_on, brent, scan_brackets};
use crate::wave::{PeriodicWave, WaveKind};

/// Attractive-nonlinearity critical strength for `g = −1`.
pub const LAMBDA_C_ATTRACTIVE: f64 = 0.25;
/// Critical chemical potential for `g = −1`.
pub const MU_C_ATTRACTIVE: f64 = -1.0 / 32.0;
/// Repulsive-nonlinearity critical strength for `g = +1`.
pub const LAMBDA_C_REPULSIVE: f64 = -0.5;

/// `ψ'(a+) − ψ'(a−) − 2λψ(a)`; zero iff the delta matching condition holds.
pub fn matching_defect(psi_left_slope: f64, psi_right_slope: f64, psi_at_delta: f64, lambda: f64) -> f64 {
    (psi_right_slope - psi_left_slope) - 2.0 * lambda * psi_at_delta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolitonFamily {
    BrightSech,
    Cosech,
    LinearExp,
    CriticalRational,
}

impl SolitonFamily {
    pub fn name(self) -> &'static str {
        match self {
            SolitonFamily::BrightSech => "bright-sech",
            SolitonFamily::Cosech => "cosech",
            SolitonFamily::LinearExp => "linear-exp",
            SolitonFamily::CriticalRational => "critical-rational",
        }
    }
}

/// A normalisable bound state of the single delta potential.
///
/// For `LinearExp` there is no shift and `x0` is reported as 0. For
/// `CriticalRational`, `k = 0` and `x0 = 1/λ` is the pole of the rational
/// profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonState {
    pub mu: f64,
    pub k: f64,
    pub x0: f64,
    pub lambda: f64,
    pub g: f64,
    pub family: SolitonFamily,
}

impl SolitonState {
    /// Prefactor of the profile (`k/√|g|`, `√|λ|` or `1/√g`).
    pub fn amplitude(&self) -> f64 {
        match self.family {
            SolitonFamily::BrightSech | SolitonFamily::Cosech => self.k / self.g.abs().sqrt(),
            SolitonFamily::LinearExp => self.lambda.abs().sqrt(),
            SolitonFamily::CriticalRational => 1.0 / self.g.sqrt(),
        }
    }

    pub fn psi(&self, x: f64) -> f64 {
        let r = x.abs();
        let amp = self.amplitude();
        match self.family {
            SolitonFamily::BrightSech => amp / (self.k * (r - self.x0)).cosh(),
            SolitonFamily::Cosech => amp / (self.k * (r - self.x0)).sinh(),
            SolitonFamily::LinearExp => amp * (self.lambda * r).exp(),
            SolitonFamily::CriticalRational => amp / (r - self.x0),
        }
    }

    /// `ψ'(x)` for `x ≠ 0`; at `x = 0` the right-hand limit.
    pub fn dpsi(&self, x: f64) -> f64 {
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let r = x.abs();
        let amp = self.amplitude();
        let d = match self.family {
            SolitonFamily::BrightSech => {
                let y = self.k * (r - self.x0);
                -amp * self.k * y.tanh() / y.cosh()
            }
            SolitonFamily::Cosech => {
                let y = self.k * (r - self.x0);
                -amp * self.k / (y.sinh() * y.tanh())
            }
            SolitonFamily::LinearExp => amp * self.lambda * (self.lambda * r).exp(),
            SolitonFamily::CriticalRational => -amp / (r - self.x0).powi(2),
        };
        sign * d
    }

    /// Matching defect at the delta, from the analytic one-sided slopes.
    pub fn matching_defect(&self) -> f64 {
        let right = self.dpsi(0.0);
        matching_defect(-right, right, self.psi(0.0), self.lambda)
    }

    /// `∫|ψ|² dx` by adaptive Simpson on a finite window plus the analytic
    /// tail integral.
    pub fn norm(&self) -> f64 {
        let scale = if self.k > 0.0 { 1.0 / self.k } else { 1.0 };
        let cut = self.x0.max(0.0) + (20.0 * scale).min(40.0);
        let amp2 = self.amplitude().powi(2);
        let tail = match self.family {
            SolitonFamily::BrightSech => amp2 / self.k * (1.0 - (self.k * (cut - self.x0)).tanh()),
            SolitonFamily::Cosech => amp2 / self.k * (1.0 / (self.k * (cut - self.x0)).tanh() - 1.0),
            SolitonFamily::LinearExp => 0.5 * (2.0 * self.lambda * cut).exp(),
            SolitonFamily::CriticalRational => amp2 / (cut - self.x0),
        };
        let inner = adaptive_simpson_panels(|x| self.psi(x).powi(2), 0.0, cut, 1e-11, 16);
        2.0 * (inner + tail)
    }
}

/// Critical values bounding the existence of bound states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    /// Critical delta strength at `|g| = 1`.
    pub lambda_c: f64,
    /// Chemical potential at which the bound state disappears (`|g| = 1`).
    pub mu_c: f64,
    /// Critical nonlinearity `−2λ` for the supplied λ.
    pub g_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearitySign {
    Attractive,
    Repulsive,
}

pub fn critical_values(lambda: f64, sign: NonlinearitySign) -> CriticalValues {
    let (lambda_c, mu_c) = match sign {
        NonlinearitySign::Attractive => (LAMBDA_C_ATTRACTIVE, MU_C_ATTRACTIVE),
        NonlinearitySign::Repulsive => (LAMBDA_C_REPULSIVE, 0.0),
    };
    CriticalValues { lambda_c, mu_c, g_c: -2.0 * lambda }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundStateOutcome {
    Bound(SolitonState),
    NoBoundState { lambda: f64, g: f64, critical: CriticalValues },
}

impl BoundStateOutcome {
    pub fn state(&self) -> Option<&SolitonState> {
        match self {
            BoundStateOutcome::Bound(s) => Some(s),
            BoundStateOutcome::NoBoundState { .. } => None,
        }
    }
}

/// The normalisable bound state for `(λ, g)`, if any.
pub fn bound_state(lambda: f64, g: f64) -> Result<BoundStateOutcome> {
    ensure_finite("lambda", lambda)?;
    ensure_finite("g", g)?;
    let none = || {
        let sign = if g < 0.0 { NonlinearitySign::Attractive } else { NonlinearitySign::Repulsive };
        Ok(BoundStateOutcome::NoBoundState { lambda, g, critical: critical_values(lambda, sign) })
    };

    if g == 0.0 {
        if lambda < 0.0 {
            return Ok(BoundStateOutcome::Bound(SolitonState {
                mu: -0.5 * lambda * lambda,
                k: -lambda,
                x0: 0.0,
                lambda,
                g,
                family: SolitonFamily::LinearExp,
            }));
        }
        return none();
    }

    let k = -lambda - 0.5 * g;
    let mu = -0.125 * (2.0 * lambda + g).powi(2);
    if g < 0.0 {
        // |tanh(k x₀)| = |λ|/k < 1  ⇔  λ < −g/4
        if k > 0.0 && lambda.abs() < k {
            let x0 = (lambda / k).atanh() / k;
            return Ok(BoundStateOutcome::Bound(SolitonState {
                mu,
                k,
                x0,
                lambda,
                g,
                family: SolitonFamily::BrightSech,
            }));
        }
        return none();
    }

    let scale = lambda.abs().max(g.abs());
    if k.abs() <= 4.0 * f64::EPSILON * scale {
        return Ok(BoundStateOutcome::Bound(SolitonState {
            mu: 0.0,
            k: 0.0,
            x0: 1.0 / lambda,
            lambda,
            g,
            family: SolitonFamily::CriticalRational,
        }));
    }
    if k > 0.0 {
        // λ < −g/2 < 0 here, so k/λ ∈ (−1, 0) and x₀ < 0.
        let x0 = (k / lambda).atanh() / k;
        return Ok(BoundStateOutcome::Bound(SolitonState {
            mu,
            k,
            x0,
            lambda,
            g,
            family: SolitonFamily::Cosech,
        }));
    }
    none()
}

/// `√(−λ)/(|x| − 2λ)`, the closed form for the critical wavefunction
/// at `g = g_c`.
///
/// This profile is normalised, but it is not the `k → 0` limit of the cosech
/// states: that limit is `1/(√(−2λ) (|x| − 1/λ))`, which is what
/// [`bound_state`] returns as `CriticalRational` and what
/// [`critical_limit_wavefunction`] evaluates. The two agree with the
/// `1/(|x| + 2)` profile at `λ = −1/2, g = 1` only for the limit form.
pub fn critical_wavefunction(lambda: f64, x: f64) -> Result<f64> {
    if !(lambda < 0.0) {
        return domain(format!("critical wavefunction needs lambda < 0, got {lambda}"));
    }
    Ok((-lambda).sqrt() / (x.abs() - 2.0 * lambda))
}

/// The `g → g_c = −2λ` limit of the cosech bound state.
pub fn critical_limit_wavefunction(lambda: f64, x: f64) -> Result<f64> {
    if !(lambda < 0.0) {
        return domain(format!("critical wavefunction needs lambda < 0, got {lambda}"));
    }
    Ok(1.0 / ((-2.0 * lambda).sqrt() * (x.abs() - 1.0 / lambda)))
}

/// `(μ, ψ(0))` of the bright-soliton family continued to any λ, `g = −1`:
/// `μ = −(2λ − 1)²/8` and `|ψ(0)|² = |1/4 − λ|`.
pub fn continuation_targets(lambda: f64) -> (f64, f64) {
    let mu = -0.125 * (2.0 * lambda - 1.0).powi(2);
    (mu, (0.25 - lambda).abs().sqrt())
}

/// Symmetric periodic cn state `ψ(x) = A cn(β(|x| − x₀) | p)` for `g = −1`
/// with prescribed `μ < 0` and `ψ(0)`, matched at the delta.
///
/// For each trial `p ∈ (1/2, 1)` the shift is fixed by `ψ(0)` (inverting cn
/// on its first quarter period) and the remaining unknown is found from the
/// derivative jump.
pub fn bright_scattering_state(lambda: f64, mu: f64, psi0: f64) -> Result<PeriodicWave> {
    ensure_finite("lambda", lambda)?;
    if !(mu < 0.0) || !(psi0 > 0.0) {
        return domain(format!("bright scattering state needs mu < 0 and psi(0) > 0, got mu = {mu}, psi0 = {psi0}"));
    }
    let k = (-2.0 * mu).sqrt();

    let shift_for = |p: f64| -> Option<(f64, f64, f64)> {
        let m = EllipticModulus::new(p).ok()?;
        let beta = k / (2.0 * p - 1.0).sqrt();
        let amp = p.sqrt() * beta;
        let c = psi0 / amp;
        if c > 1.0 {
            return None;
        }
        let u = inverse_cn(c, m).ok()?;
        Some((beta, amp, u))
    };
    let defect = |p: f64| -> f64 {
        match shift_for(p) {
            Some((beta, amp, u)) => {
                let t = jacobi(u, EllipticModulus::new(p).unwrap());
                amp * beta * t.sn * t.dn - lambda * psi0
            }
            None => f64::NAN,
        }
    };

    let (lo, hi) = (0.5 + 1e-9, 1.0 - 1e-13);
    let mut grid: Vec<f64> = (0..=400).map(|i| lo + (hi - lo) * i as f64 / 400.0).collect();
    grid.extend((20..=130).map(|j| 1.0 - 10f64.powf(-j as f64 / 10.0)));
    grid.retain(|&p| p >= lo && p <= hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut best: Option<(f64, f64)> = None;
    for (a, b) in brackets_on(defect, &grid) {
        let Ok(p) = brent(defect, a, b, 1e-16) else { continue };
        let err = defect(p).abs();
        if best.is_none_or(|(_, e)| err < e) {
            best = Some((p, err));
        }
    }
    let Some((p, _)) = best else {
        return Err(Error::NoSolution {
            reason: format!("matching condition has no root for p in [{lo}, {hi}] at lambda = {lambda}"),
        });
    };
    let (beta, _, u) = shift_for(p).expect("root lies in the admissible region");
    PeriodicWave::from_modulus(WaveKind::Cn, mu, EllipticModulus::new(p)?, -1.0, u / beta)
}

/// Symmetric periodic sn state `ψ(x) = A sn(β(|x| − x₀) | p)` for `g = +1`,
/// with `μ > 0` and `p` chosen freely; the shift is fixed by the matching
/// condition at the delta (first root with `β x₀` in `(−2K, 0]`).
pub fn repulsive_scattering_state(lambda: f64, mu: f64, p: EllipticModulus) -> Result<PeriodicWave> {
    ensure_finite("lambda", lambda)?;
    if !(mu > 0.0) {
        return domain(format!("periodic sn states need mu > 0, got {mu}"));
    }
    let wave = PeriodicWave::from_modulus(WaveKind::Sn, mu, p, 1.0, 0.0)?;
    let beta = wave.beta();
    let kq = complete_k(p)?;
    // At x = 0 the phase is u = −β x₀; matching needs β cn dn = λ sn.
    let f = |u: f64| {
        let t = jacobi(u, p);
        beta * t.cn * t.dn - lambda * t.sn
    };
    let (a, b) = scan_brackets(f, 0.0, 2.0 * kq, 64)
        .into_iter()
        .next()
        .ok_or(Error::NoBracket { lo: 0.0, hi: 2.0 * kq })?;
    let u = brent(f, a, b, 1e-15)?;
    Ok(PeriodicWave { x0: -u / beta, ..wave })
}

/// Evaluates a delta-matched periodic wave as the symmetric function
/// `ψ(|x|)`.
pub fn symmetric_psi(wave: &PeriodicWave, x: f64) -> f64 {
    wave.psi(x.abs())
}

/// Transition diagnostics across `λ_c = 1/4` at `g = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPoint {
    pub lambda: f64,
    /// Position of the first maximum of `|ψ|²` for `x > 0`.
    pub x0: f64,
    /// `∫_{−L/2}^{L/2} |ψ|² dx`; 1 for bound states.
    pub norm_per_period: f64,
    /// Period of the scattering state; `None` below λ_c.
    pub period: Option<f64>,
    pub mu: f64,
}

pub fn transition_diagnostics(lambda: f64) -> Result<TransitionPoint> {
    ensure_finite("lambda", lambda)?;
    if lambda == LAMBDA_C_ATTRACTIVE {
        return domain("transition diagnostics are singular at lambda_c = 1/4");
    }
    let (mu, psi0) = continuation_targets(lambda);
    if lambda < LAMBDA_C_ATTRACTIVE {
        let k = 0.5 - lambda;
        return Ok(TransitionPoint {
            lambda,
            x0: (lambda / k).atanh() / k,
            norm_per_period: 1.0,
            period: None,
            mu,
        });
    }
    let wave = bright_scattering_state(lambda, mu, psi0)?;
    let half = 0.5 * wave.period;
    let panels = 64;
    let norm = 2.0 * adaptive_simpson_panels(|x| wave.psi(x).powi(2), 0.0, half, 1e-11, panels);
    Ok(TransitionPoint {
        lambda,
        x0: wave.x0,
        norm_per_period: norm,
        period: Some(wave.period),
        mu,
    })
}

/// Dark soliton pair `√μ tanh(√μ (x − x₀))` on both sides of the delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkSoliton {
    pub mu: f64,
    pub lambda: f64,
    pub x0: f64,
}

impl DarkSoliton {
    pub fn psi(&self, x: f64) -> f64 {
        let s = self.mu.sqrt();
        s * (s * (x - self.x0)).tanh()
    }

    pub fn dpsi(&self, x: f64) -> f64 {
        let s = self.mu.sqrt();
        self.mu / (s * (x - self.x0)).cosh().powi(2)
    }

    pub fn matching_defect(&self) -> f64 {
        matching_defect(self.dpsi(0.0), self.dpsi(0.0), self.psi(0.0), self.lambda)
    }
}

/// Matches tanh branches on both sides of the delta. Continuity forces a
/// common shift (tanh is injective), so both slopes agree at `x = 0` and the
/// jump condition reduces to `λ ψ(0) = 0`, i.e. `x₀ = 0` for every λ.
pub fn dark_soliton(mu: f64, lambda: f64) -> Result<DarkSoliton> {
    ensure_finite("lambda", lambda)?;
    if !(mu > 0.0) {
        return domain(format!("dark soliton needs mu > 0, got {mu}"));
    }
    if lambda == 0.0 {
        return Ok(DarkSoliton { mu, lambda, x0: 0.0 });
    }
    let s = mu.sqrt();
    let reach = 10.0 / s;
    let x0 = brent(|x0| -2.0 * lambda * s * (-s * x0).tanh(), -reach, reach, 1e-15)?;
    Ok(DarkSoliton { mu, lambda, x0 })
}

/// Norm of a bound state computed directly by quadrature of the sampled
/// profile over `[−R, R]`; used as a cross-check of [`SolitonState::norm`].
pub fn windowed_norm(state: &SolitonState, half_width: f64) -> f64 {
    2.0 * adaptive_simpson(|x| state.psi(x).powi(2), 0.0, half_width, 1e-11)
}
