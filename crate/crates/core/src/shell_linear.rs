//! Linear delta-shell: hard wall at `x = 0`, `V = λ δ(x − a)` for `x ≥ 0`.
//!
//! The regular solution is `sin(kx)` inside and
//! `sin(kx) + (2λ/k) sin(ka) sin(k(x − a))` outside. Writing the outside wave
//! as `A_r sin(kx + δ)` gives
//!
//! ```text
//! tan δ = (cos 2ka − 1) / (sin 2ka + k/λ)
//! S(k)  = (1 + i tan δ)/(1 − i tan δ)
//! ```
//!
//! and S has poles where `e^{2ika} = 1 − ik/λ`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, ensure_finite, Error, Result};
use crate::roots::brent;

const NEWTON_MAX_ITER: usize = 60;
const POLE_RESIDUAL: f64 = 1e-12;
/// Roots closer than this to the real axis are not classified.
pub const AXIS_TOLERANCE: f64 = 1e-10;
/// Roots closer than this are the same root.
pub const DEDUP_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellConfig {
    pub a: f64,
    pub lambda: f64,
}

impl ShellConfig {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        ensure_finite("lambda", lambda)?;
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("shell radius must be positive, got {a}"));
        }
        Ok(Self { a, lambda })
    }

    /// `c = (2λ/k) sin(ka)`, the coefficient of the outgoing correction.
    fn jump_coefficient(&self, k: f64) -> f64 {
        2.0 * self.lambda / k * (k * self.a).sin()
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    Ok(())
}

/// Regular scattering solution normalised to `sin(kx)` inside the shell.
pub fn linear_wavefunction(cfg: ShellConfig, k: f64, x: f64) -> Result<f64> {
    check_k(k)?;
    if x < 0.0 {
        return domain(format!("x = {x} lies behind the hard wall"));
    }
    let inner = (k * x).sin();
    if x <= cfg.a {
        return Ok(inner);
    }
    Ok(inner + cfg.jump_coefficient(k) * (k * (x - cfg.a)).sin())
}

/// `ψ'(x)`; at `x = a` this is the outside (right-hand) limit.
pub fn linear_slope(cfg: ShellConfig, k: f64, x: f64) -> Result<f64> {
    check_k(k)?;
    if x < 0.0 {
        return domain(format!("x = {x} lies behind the hard wall"));
    }
    let inner = k * (k * x).cos();
    if x < cfg.a {
        return Ok(inner);
    }
    Ok(inner + cfg.jump_coefficient(k) * k * (k * (x - cfg.a)).cos())
}

/// `δ(k) = atan2(cos 2ka − 1, sin 2ka + k/λ)`.
pub fn phase_shift(cfg: ShellConfig, k: f64) -> Result<f64> {
    check_k(k)?;
    if cfg.lambda == 0.0 {
        return domain("phase shift formula needs lambda != 0");
    }
    let arg = 2.0 * k * cfg.a;
    let num = arg.cos() - 1.0;
    let den = arg.sin() + k / cfg.lambda;
    if num == 0.0 && den == 0.0 {
        return domain(format!("phase shift undefined at k = {k}"));
    }
    Ok(num.atan2(den))
}

/// Phase shifts along increasing `ks`, made continuous by adding multiples of
/// π whenever consecutive values jump by more than π/2.
pub fn phase_shift_scan(cfg: ShellConfig, ks: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ks.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &k in ks {
        let raw = phase_shift(cfg, k)?;
        if let Some(p) = prev {
            let mut d = raw + offset - p;
            while d > PI / 2.0 {
                offset -= PI;
                d -= PI;
            }
            while d < -PI / 2.0 {
                offset += PI;
                d += PI;
            }
        }
        let v = raw + offset;
        out.push(v);
        prev = Some(v);
    }
    Ok(out)
}

/// Value of the S-matrix, or a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SMatrixValue {
    Value(Complex64),
    Pole,
}

impl SMatrixValue {
    pub fn value(self) -> Option<Complex64> {
        match self {
            SMatrixValue::Value(v) => Some(v),
            SMatrixValue::Pole => None,
        }
    }
}

/// `S(k) = (D + iN)/(D − iN)` with `N = cos 2ka − 1`, `D = sin 2ka + k/λ`,
/// continued to complex k.
pub fn s_matrix(cfg: ShellConfig, k: Complex64) -> Result<SMatrixValue> {
    if k == Complex64::new(0.0, 0.0) || !k.is_finite() {
        return domain(format!("S-matrix needs finite k != 0, got {k}"));
    }
    if cfg.lambda == 0.0 {
        return Ok(SMatrixValue::Value(Complex64::new(1.0, 0.0)));
    }
    let arg = k * (2.0 * cfg.a);
    let num = arg.cos() - 1.0;
    let den = arg.sin() + k / cfg.lambda;
    let i = Complex64::i();
    let bottom = den - i * num;
    let top = den + i * num;
    if bottom == Complex64::new(0.0, 0.0) {
        return Ok(SMatrixValue::Pole);
    }
    let s = top / bottom;
    if s.is_finite() {
        Ok(SMatrixValue::Value(s))
    } else {
        Ok(SMatrixValue::Pole)
    }
}

/// `e^{2ika} − 1 + ik/λ`; zero exactly at the S-matrix poles (and at the
/// trivial `k = 0`).
pub fn pole_condition(cfg: ShellConfig, k: Complex64) -> Complex64 {
    let i = Complex64::i();
    (i * k * (2.0 * cfg.a)).exp() - 1.0 + i * k / cfg.lambda
}

/// `(e^{2ika} − 1)/k + i/λ`: the pole condition with the trivial root at
/// `k = 0` divided out. Same nontrivial zeros, analytic at the origin.
pub fn reduced_pole_condition(cfg: ShellConfig, k: Complex64) -> Complex64 {
    let i = Complex64::i();
    let z = i * k * (2.0 * cfg.a);
    let ratio = if z.norm() < 1e-5 {
        // (e^z − 1)/z by its Taylor series
        1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - 1.0) / z
    };
    ratio * (i * 2.0 * cfg.a) + i / cfg.lambda
}

fn pole_condition_derivative(cfg: ShellConfig, k: Complex64) -> Complex64 {
    let i = Complex64::i();
    i * (2.0 * cfg.a) * (i * k * (2.0 * cfg.a)).exp() + i / cfg.lambda
}

/// A lower-half-plane pole `𝓔 = k²/2 = E − iΓ/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePole {
    pub k: Complex64,
    pub energy: Complex64,
    pub e: f64,
    pub gamma: f64,
    /// Branch index: the root satisfies `2ak = 2πn − i Log(1 − ik/λ)`.
    pub n: i64,
}

impl ResonancePole {
    fn new(cfg: ShellConfig, k: Complex64) -> Self {
        let energy = k * k / 2.0;
        Self { k, energy, e: energy.re, gamma: -2.0 * energy.im, n: branch_index(cfg, k) }
    }
}

fn branch_index(cfg: ShellConfig, k: Complex64) -> i64 {
    let i = Complex64::i();
    let w = (2.0 * cfg.a) * k + i * (1.0 - i * k / cfg.lambda).ln();
    (w.re / (2.0 * PI)).round() as i64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    /// Positive imaginary axis.
    Bound { k: Complex64, energy: f64 },
    /// Negative imaginary axis.
    Virtual { k: Complex64, energy: f64 },
    Resonance(ResonancePole),
    /// Too close to the real axis to classify.
    Ambiguous { k: Complex64 },
}

impl Pole {
    pub fn k(&self) -> Complex64 {
        match self {
            Pole::Bound { k, .. } | Pole::Virtual { k, .. } | Pole::Ambiguous { k } => *k,
            Pole::Resonance(r) => r.k,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Pole::Bound { .. } => "bound",
            Pole::Virtual { .. } => "virtual",
            Pole::Resonance(_) => "resonance",
            Pole::Ambiguous { .. } => "ambiguous",
        }
    }

    fn classify(cfg: ShellConfig, k: Complex64) -> Self {
        let scale = k.norm().max(1.0);
        if k.im.abs() < AXIS_TOLERANCE {
            return Pole::Ambiguous { k };
        }
        if k.re.abs() < AXIS_TOLERANCE * scale {
            let k = Complex64::new(0.0, k.im);
            let energy = -0.5 * k.im * k.im;
            return if k.im > 0.0 { Pole::Bound { k, energy } } else { Pole::Virtual { k, energy } };
        }
        if k.im < 0.0 && k.re > 0.0 {
            return Pole::Resonance(ResonancePole::new(cfg, k));
        }
        Pole::Ambiguous { k }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    pub poles: Vec<Pole>,
    /// Truth value of the inequality `λa > −1/2`. A bound pole exists
    /// exactly when it is false.
    pub lambda_a_above_critical: bool,
}

impl PoleReport {
    pub fn resonances(&self) -> impl Iterator<Item = &ResonancePole> {
        self.poles.iter().filter_map(|p| match p {
            Pole::Resonance(r) => Some(r),
            _ => None,
        })
    }

    pub fn bound(&self) -> Option<&Pole> {
        self.poles.iter().find(|p| matches!(p, Pole::Bound { .. }))
    }

    pub fn virtual_state(&self) -> Option<&Pole> {
        self.poles.iter().find(|p| matches!(p, Pole::Virtual { .. }))
    }
}

fn newton(cfg: ShellConfig, seed: Complex64, trace: &mut Vec<String>) -> Option<Complex64> {
    let mut k = seed;
    for it in 0..NEWTON_MAX_ITER {
        let f = pole_condition(cfg, k);
        let df = pole_condition_derivative(cfg, k);
        if !(f.is_finite() && df.is_finite()) || df.norm() == 0.0 {
            trace.push(format!("seed {seed}: breakdown at iteration {it}, k = {k}"));
            return None;
        }
        let step = f / df;
        k -= step;
        if step.norm() <= 1e-15 * k.norm().max(1.0) {
            break;
        }
    }
    let res = pole_condition(cfg, k).norm();
    if res < POLE_RESIDUAL && k.norm() > 1e-8 {
        Some(k)
    } else {
        trace.push(format!("seed {seed}: ended at k = {k}, residual {res:e}"));
        None
    }
}

/// Seed from a few sweeps of the fixed-point form
/// `k = (2πn − i Log(1 − ik/λ)) / (2a)` of branch n.
fn fixed_point_seed(cfg: ShellConfig, n: i64) -> Complex64 {
    let i = Complex64::i();
    let mut k = Complex64::new(n as f64 * PI / cfg.a, 0.0);
    for _ in 0..8 {
        let next = (2.0 * PI * n as f64 - i * (1.0 - i * k / cfg.lambda).ln()) / (2.0 * cfg.a);
        if !next.is_finite() {
            break;
        }
        k = next;
    }
    k
}

/// Root of `e^{−2κa} − 1 − κ/λ` on the positive (bound) or negative
/// (virtual) imaginary axis, `k = iκ`.
fn imaginary_axis_root(cfg: ShellConfig) -> Result<Option<f64>> {
    let (a, lambda) = (cfg.a, cfg.lambda);
    if lambda >= 0.0 {
        return Ok(None);
    }
    let h = |kappa: f64| (-2.0 * kappa * a).exp_m1() - kappa / lambda;
    // h(κ) ≈ κ(1/|λ| − 2a) + 2a²κ² near the origin
    let slope = 1.0 / lambda.abs() - 2.0 * a;
    if slope == 0.0 {
        return Ok(None);
    }
    let near = 0.5 * slope.abs() / (2.0 * a * a);
    // h < 0 just off the origin on the side where the root lies
    let lo = if slope < 0.0 { near } else { -near };
    if !(h(lo) < 0.0) {
        return Ok(None);
    }
    let mut hi = 2.0 * lo;
    let mut guard = 0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence {
                detail: "imaginary-axis root not bracketed".into(),
                trace: vec![format!("last bracket [{lo}, {hi}]")],
            });
        }
    }
    let (x, y) = if lo < hi { (lo, hi) } else { (hi, lo) };
    Ok(Some(brent(h, x, y, 1e-15)?))
}

/// All S-matrix poles in the first `n_max` resonance bands plus the
/// imaginary-axis pole, if any.
pub fn find_poles(cfg: ShellConfig, n_max: usize) -> Result<PoleReport> {
    if cfg.lambda == 0.0 {
        return domain("find_poles needs lambda != 0");
    }
    let mut roots: Vec<Complex64> = Vec::new();
    let push = |k: Complex64, roots: &mut Vec<Complex64>| {
        if !roots.iter().any(|r| (r - k).norm() < DEDUP_TOLERANCE) {
            roots.push(k);
        }
    };

    if let Some(kappa) = imaginary_axis_root(cfg)? {
        push(Complex64::new(0.0, kappa), &mut roots);
    }

    let mut trace = Vec::new();
    for n in 1..=n_max as i64 {
        let box_level = n as f64 * PI / cfg.a;
        let mut seeds = vec![
            fixed_point_seed(cfg, n),
            Complex64::new(box_level, -box_level / (2.0 * cfg.a * cfg.a * cfg.lambda * cfg.lambda)),
        ];
        for re in [-0.4, -0.2, 0.0, 0.2, 0.4] {
            for im in [-1e-3, -0.01, -0.1, -0.5, -1.0, -2.0] {
                seeds.push(Complex64::new(box_level + re * PI / cfg.a, im));
            }
        }
        let mut found = false;
        for seed in seeds {
            if let Some(k) = newton(cfg, seed, &mut trace) {
                if k.re > 0.0 && branch_index(cfg, k) == n {
                    push(k, &mut roots);
                    found = true;
                    break;
                }
                trace.push(format!("seed {seed}: converged to k = {k} outside branch {n}"));
            }
        }
        if !found {
            return Err(Error::NonConvergence { detail: format!("no pole found in band n = {n}"), trace });
        }
    }

    let mut poles: Vec<Pole> = roots.into_iter().map(|k| Pole::classify(cfg, k)).collect();
    poles.sort_by(|x, y| x.k().re.total_cmp(&y.k().re).then(y.k().im.total_cmp(&x.k().im)));
    Ok(PoleReport { poles, lambda_a_above_critical: cfg.lambda * cfg.a > -0.5 })
}

/// Amplitude of the outside sinusoid for unit inside amplitude.
pub fn outside_amplitude(cfg: ShellConfig, k: f64) -> f64 {
    let c = cfg.jump_coefficient(k);
    let (s, co) = (k * cfg.a).sin_cos();
    (1.0 + c * co).hypot(c * s)
}

/// `A_l/A_r` at energy `E = k²/2` with `A_l = 1`.
pub fn amplitude_ratio_linear(cfg: ShellConfig, e: f64) -> Result<f64> {
    if !(e > 0.0 && e.is_finite()) {
        return domain(format!("amplitude ratio needs E > 0, got {e}"));
    }
    Ok(1.0 / outside_amplitude(cfg, (2.0 * e).sqrt()))
}

/// Regular solution continued to complex k; at a resonance pole the outside
/// part is a purely outgoing wave growing like `e^{|Im k| x}`.
pub fn resonance_wavefunction(cfg: ShellConfig, k: Complex64, x: f64) -> Result<Complex64> {
    if x < 0.0 {
        return domain(format!("x = {x} lies behind the hard wall"));
    }
    let inner = (k * x).sin();
    if x <= cfg.a {
        return Ok(inner);
    }
    let c = (k * cfg.a).sin() * (2.0 * cfg.lambda) / k;
    Ok(inner + c * (k * (x - cfg.a)).sin())
}
