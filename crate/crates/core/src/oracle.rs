//! Independent numerical checks for the analytic constructions.
//!
//! Nothing here knows about sech, cosech or Jacobi functions: residuals are
//! plain central differences, [`shoot`] integrates the ODE with RK4, and
//! [`argument_principle_count`] counts zeros of an arbitrary complex function.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
pub use crate::quadrature::{adaptive_simpson, adaptive_simpson_panels};

/// Coarsest grid accepted by [`nlse_residual`].
pub const MAX_RESIDUAL_STEP: f64 = 1e-2;

/// A point interaction `λ δ(x − pos)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub pos: f64,
    pub strength: f64,
}

/// Values of a function on the uniform grid `x_i = start + i·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl SampledFunction {
    /// Samples `f` on `[start, end]` with roughly `step` spacing; the step is
    /// shrunk so that `end` is hit exactly.
    pub fn sample<F: Fn(f64) -> f64>(f: F, start: f64, end: f64, step: f64) -> Self {
        let n = ((end - start) / step).round().max(1.0) as usize;
        let h = (end - start) / n as f64;
        let values = (0..=n).map(|i| f(start + h * i as f64)).collect();
        Self { start, step: h, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpDefect {
    pub pos: f64,
    /// `ψ'(a+) − ψ'(a−) − 2λψ(a)` from second-order one-sided differences.
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub grid_step: f64,
    pub excluded_points: Vec<f64>,
    pub jump_defects: Vec<JumpDefect>,
}

impl ResidualReport {
    pub fn max_jump_defect(&self) -> f64 {
        self.jump_defects.iter().map(|j| j.defect.abs()).fold(0.0, f64::max)
    }
}

/// Central-difference residual of `−½ψ'' + gψ³ − μψ` on the grid, skipping
/// stencils that straddle a delta, plus the derivative-jump defect at each
/// delta that falls on a grid point.
pub fn nlse_residual(psi: &SampledFunction, mu: f64, g: f64, deltas: &[Delta]) -> Result<ResidualReport> {
    let h = psi.step;
    if !(h > 0.0) {
        return domain("grid step must be positive");
    }
    if h > MAX_RESIDUAL_STEP {
        return Err(Error::GridTooCoarse { h, max: MAX_RESIDUAL_STEP });
    }
    let v = &psi.values;
    let n = v.len();
    let mut max_residual: f64 = 0.0;
    for i in 1..n.saturating_sub(1) {
        let (lo, hi) = (psi.x(i - 1), psi.x(i + 1));
        if deltas.iter().any(|d| d.pos >= lo - 1e-12 * h && d.pos <= hi + 1e-12 * h) {
            continue;
        }
        let second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        let r = -0.5 * second + g * v[i].powi(3) - mu * v[i];
        max_residual = max_residual.max(r.abs());
    }

    let mut jump_defects = Vec::new();
    for d in deltas {
        let t = (d.pos - psi.start) / h;
        let j = t.round();
        if (t - j).abs() > 1e-6 || j < 2.0 || j as usize + 2 >= n {
            continue;
        }
        let j = j as usize;
        let right = (-3.0 * v[j] + 4.0 * v[j + 1] - v[j + 2]) / (2.0 * h);
        let left = (3.0 * v[j] - 4.0 * v[j - 1] + v[j - 2]) / (2.0 * h);
        jump_defects.push(JumpDefect {
            pos: d.pos,
            defect: right - left - 2.0 * d.strength * v[j],
        });
    }

    Ok(ResidualReport {
        max_residual,
        grid_step: h,
        excluded_points: deltas.iter().map(|d| d.pos).collect(),
        jump_defects,
    })
}

/// Integrates `ψ'' = 2(gψ³ − μψ)` from `x = 0` to `x_end` with fixed-step RK4,
/// applying `ψ' → ψ' + 2λψ` exactly at every delta position. Steps are split
/// so that each delta is hit exactly. Returns ψ on the grid `0, h, 2h, ...`.
pub fn shoot(mu: f64, g: f64, deltas: &[Delta], x_end: f64, init: (f64, f64), h: f64) -> Result<SampledFunction> {
    if !(h > 0.0) || !(x_end > 0.0) {
        return domain("shoot needs h > 0 and x_end > 0");
    }
    let rhs = |y: [f64; 2]| [y[1], 2.0 * (g * y[0] * y[0] * y[0] - mu * y[0])];
    let rk4 = |y: [f64; 2], dx: f64| {
        let k1 = rhs(y);
        let k2 = rhs([y[0] + 0.5 * dx * k1[0], y[1] + 0.5 * dx * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * dx * k2[0], y[1] + 0.5 * dx * k2[1]]);
        let k4 = rhs([y[0] + dx * k3[0], y[1] + dx * k3[1]]);
        [
            y[0] + dx / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + dx / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };

    let mut events: Vec<Delta> = deltas.iter().copied().filter(|d| d.pos >= 0.0 && d.pos <= x_end).collect();
    events.sort_by(|a, b| a.pos.total_cmp(&b.pos));
    let mut pending = events.iter().peekable();

    let n = (x_end / h).round().max(1.0) as usize;
    let h = x_end / n as f64;
    let mut y = [init.0, init.1];
    // A delta sitting exactly at the start acts on the initial slope.
    while let Some(d) = pending.next_if(|d| d.pos <= 0.0) {
        y[1] += 2.0 * d.strength * y[0];
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(y[0]);
    for i in 0..n {
        let x_lo = h * i as f64;
        let x_hi = if i + 1 == n { x_end } else { h * (i + 1) as f64 };
        let mut x = x_lo;
        while let Some(d) = pending.next_if(|d| d.pos <= x_hi) {
            if d.pos > x {
                y = rk4(y, d.pos - x);
                x = d.pos;
            }
            y[1] += 2.0 * d.strength * y[0];
        }
        if x_hi > x {
            y = rk4(y, x_hi - x);
        }
        if !(y[0].is_finite() && y[1].is_finite()) || y[0].abs() > 1e100 {
            return Err(Error::Overflow { position: x_hi });
        }
        values.push(y[0]);
    }
    Ok(SampledFunction { start: 0.0, step: h, values })
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

const CONTOUR_MIN_MODULUS: f64 = 1e-8;
const MAX_PHASE_STEP: f64 = std::f64::consts::FRAC_PI_4;

/// Number of zeros of `f` inside `rect`, from the winding number of `f` along
/// the counter-clockwise boundary. Each edge is sampled at `n_samples` points
/// and refined wherever the phase moves by more than π/4 between neighbours.
pub fn argument_principle_count<F>(f: F, rect: Rectangle, n_samples: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    let corners = [
        Complex64::new(rect.re_min, rect.im_min),
        Complex64::new(rect.re_max, rect.im_min),
        Complex64::new(rect.re_max, rect.im_max),
        Complex64::new(rect.re_min, rect.im_max),
    ];
    let n = n_samples.max(4);
    let mut total = 0.0;
    let mut min_modulus = f64::INFINITY;
    for e in 0..4 {
        let (za, zb) = (corners[e], corners[(e + 1) % 4]);
        let mut prev_z = za;
        let mut prev_f = f(za);
        min_modulus = min_modulus.min(prev_f.norm());
        for i in 1..=n {
            let z = za + (zb - za) * (i as f64 / n as f64);
            let fz = f(z);
            min_modulus = min_modulus.min(fz.norm());
            if min_modulus < CONTOUR_MIN_MODULUS {
                return Err(Error::ContourTooClose { min_modulus });
            }
            total += phase_change(&f, prev_z, prev_f, z, fz, 40, &mut min_modulus)?;
            prev_z = z;
            prev_f = fz;
        }
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

fn phase_change<F>(
    f: &F,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    fb: Complex64,
    depth: u32,
    min_modulus: &mut f64,
) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let d = (fb / fa).arg();
    if d.abs() <= MAX_PHASE_STEP || depth == 0 {
        return Ok(d);
    }
    let zm = 0.5 * (za + zb);
    let fm = f(zm);
    *min_modulus = min_modulus.min(fm.norm());
    if *min_modulus < CONTOUR_MIN_MODULUS {
        return Err(Error::ContourTooClose { min_modulus: *min_modulus });
    }
    Ok(phase_change(f, za, fa, zm, fm, depth - 1, min_modulus)? + phase_change(f, zm, fm, zb, fb, depth - 1, min_modulus)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_zero_residual() {
        let s = SampledFunction::sample(|_| 0.0, -1.0, 1.0, 1e-3);
        let r = nlse_residual(&s, 0.3, -1.0, &[Delta { pos: 0.0, strength: 2.0 }]).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.max_jump_defect(), 0.0);
    }

    #[test]
    fn coarse_grid_rejected() {
        let s = SampledFunction::sample(|x| x, 0.0, 1.0, 0.05);
        assert!(matches!(nlse_residual(&s, 1.0, 0.0, &[]), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn free_sine_passes() {
        let k = 2.0_f64;
        let s = SampledFunction::sample(|x| (k * x).sin(), 0.0, 3.0, 1e-3);
        let r = nlse_residual(&s, 0.5 * k * k, 0.0, &[]).unwrap();
        assert!(r.max_residual < 1e-6);
    }

    #[test]
    fn shoot_from_rest_stays_at_rest() {
        let s = shoot(2.0, -1.0, &[Delta { pos: 0.5, strength: 3.0 }], 2.0, (0.0, 0.0), 1e-3).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn shoot_reports_blow_up() {
        let err = shoot(0.0, 1.0, &[], 10.0, (1.0, 5.0), 1e-2).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn single_linear_zero() {
        let n = argument_principle_count(
            |z| z - Complex64::new(1.0, -1.0),
            Rectangle { re_min: 0.0, re_max: 2.0, im_min: -2.0, im_max: 0.0 },
            64,
        )
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn counts_polynomial_roots() {
        // z³ − 1 has roots at 1, e^{±2πi/3}
        let n = argument_principle_count(
            |z| z * z * z - 1.0,
            Rectangle { re_min: -2.0, re_max: 2.0, im_min: -2.0, im_max: 2.0 },
            64,
        )
        .unwrap();
        assert_eq!(n, 3);
        let upper = argument_principle_count(
            |z| z * z * z - 1.0,
            Rectangle { re_min: -2.0, re_max: 2.0, im_min: 0.1, im_max: 2.0 },
            64,
        )
        .unwrap();
        assert_eq!(upper, 1);
    }

    #[test]
    fn contour_through_zero_is_rejected() {
        let err = argument_principle_count(
            |z| z - Complex64::new(1.0, 0.0),
            Rectangle { re_min: 0.0, re_max: 2.0, im_min: 0.0, im_max: 1.0 },
            8,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ContourTooClose { .. }));
    }
}
