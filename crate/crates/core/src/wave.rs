//! Periodic Jacobi-elliptic solutions of the free stationary NLSE
//! `−½ψ'' + g ψ³ = μ ψ`.
//!
//! A wave is stored as `ψ(x) = A · f(β (x − x₀) | p)` with `f ∈ {cn, sn}` and
//! `β = 4K(p)/L`. The chemical potential fixes `β` through
//!
//! * cn: `μ = β² (1 − 2p) / 2`  (i.e. `μ = 8(1 − 2p)K²/L²`)
//! * sn: `μ = β² (1 + p) / 2`   (i.e. `μ = 8(1 + p)K²/L²`)
//!
//! and the nonlinearity fixes the amplitude, `A² = p β² / |g|`. For `g = 0`
//! the wave is a plain sinusoid with `p = 0` and a free amplitude.

use crate::elliptic::{complete_k, jacobi, EllipticModulus};
use crate::error::{domain, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveKind {
    Cn,
    Sn,
}

impl WaveKind {
    /// The kind whose free solutions are bounded for a nonlinearity of this
    /// sign: cn for attractive, sn for repulsive.
    pub fn for_nonlinearity(g: f64) -> Self {
        if g < 0.0 {
            WaveKind::Cn
        } else {
            WaveKind::Sn
        }
    }

    fn beta_squared(self, mu: f64, p: f64) -> f64 {
        match self {
            WaveKind::Cn => 2.0 * mu / (1.0 - 2.0 * p),
            WaveKind::Sn => 2.0 * mu / (1.0 + p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicWave {
    pub kind: WaveKind,
    pub amplitude: f64,
    pub period: f64,
    pub x0: f64,
    pub p: EllipticModulus,
    pub mu: f64,
    pub g: f64,
}

impl PeriodicWave {
    /// Builds the wave of the given kind from `(μ, p, g)`; the period follows
    /// from the μ relation and the amplitude from `A² = p β²/|g|`.
    pub fn from_modulus(kind: WaveKind, mu: f64, p: EllipticModulus, g: f64, x0: f64) -> Result<Self> {
        let pv = p.value();
        if g == 0.0 {
            return domain("g = 0 has no amplitude relation; use PeriodicWave::linear");
        }
        if pv >= 1.0 {
            return domain("p = 1 has infinite period");
        }
        let beta2 = kind.beta_squared(mu, pv);
        if !(beta2.is_finite() && beta2 > 0.0) {
            return domain(format!("no real {kind:?} wave for mu = {mu}, p = {pv}"));
        }
        let beta = beta2.sqrt();
        let k = complete_k(p)?;
        Ok(Self {
            kind,
            amplitude: (pv / g.abs()).sqrt() * beta,
            period: 4.0 * k / beta,
            x0,
            p,
            mu,
            g,
        })
    }

    /// Linear (`g = 0`) sinusoid `A cos(k(x − x₀))` or `A sin(k(x − x₀))` with
    /// `μ = k²/2`.
    pub fn linear(kind: WaveKind, mu: f64, amplitude: f64, x0: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return domain(format!("linear wave needs mu > 0, got {mu}"));
        }
        let beta = (2.0 * mu).sqrt();
        Ok(Self {
            kind,
            amplitude,
            period: 2.0 * std::f64::consts::PI / beta,
            x0,
            p: EllipticModulus::ZERO,
            mu,
            g: 0.0,
        })
    }

    /// Low-level constructor; no relation between the fields is enforced.
    pub fn from_parts(
        kind: WaveKind,
        amplitude: f64,
        period: f64,
        x0: f64,
        p: EllipticModulus,
        mu: f64,
        g: f64,
    ) -> Self {
        Self { kind, amplitude, period, x0, p, mu, g }
    }

    pub fn quarter_period(&self) -> f64 {
        complete_k(self.p).expect("wave modulus is below 1")
    }

    /// `β = 4K(p)/L`, the factor multiplying `x − x₀` inside the elliptic
    /// function.
    pub fn beta(&self) -> f64 {
        4.0 * self.quarter_period() / self.period
    }

    pub fn phase(&self, x: f64) -> f64 {
        self.beta() * (x - self.x0)
    }

    pub fn psi(&self, x: f64) -> f64 {
        let t = jacobi(self.phase(x), self.p);
        self.amplitude
            * match self.kind {
                WaveKind::Cn => t.cn,
                WaveKind::Sn => t.sn,
            }
    }

    pub fn dpsi(&self, x: f64) -> f64 {
        let beta = self.beta();
        let t = jacobi(beta * (x - self.x0), self.p);
        self.amplitude
            * beta
            * match self.kind {
                WaveKind::Cn => -t.sn * t.dn,
                WaveKind::Sn => t.cn * t.dn,
            }
    }

    /// Value and slope at `x` from a single Jacobi evaluation.
    pub fn psi_and_slope(&self, x: f64) -> (f64, f64) {
        let beta = self.beta();
        let t = jacobi(beta * (x - self.x0), self.p);
        match self.kind {
            WaveKind::Cn => (self.amplitude * t.cn, -self.amplitude * beta * t.sn * t.dn),
            WaveKind::Sn => (self.amplitude * t.sn, self.amplitude * beta * t.cn * t.dn),
        }
    }

    /// First integral `ψ'² − g ψ⁴ + 2μ ψ²`, constant along any solution of the
    /// free equation.
    pub fn first_integral(&self) -> f64 {
        let (psi, slope) = self.psi_and_slope(self.x0 + 0.3 * self.period);
        invariant(psi, slope, self.mu, self.g)
    }

    /// Phase `u ∈ [0, 4K)` at which the orbit `(f(u), f'(u))` of the unit
    /// wave points in the direction of `(psi_unit, slope_unit)`.
    ///
    /// The polar angle of `(cn, −sn·dn)` and of `(sn, cn·dn)` is strictly
    /// decreasing in `u`, so bisection on the unwrapped angle is robust even
    /// at the turning points, where inverting `cn` or `sn` alone loses half
    /// the digits. If `(psi_unit, slope_unit)` lies on the orbit (equal first
    /// integrals) the returned phase reproduces both components.
    pub fn phase_for_state(&self, psi_unit: f64, slope_unit: f64) -> f64 {
        let kq = self.quarter_period();
        let point = |u: f64| {
            let t = jacobi(u, self.p);
            match self.kind {
                WaveKind::Cn => (t.cn, -t.sn * t.dn),
                WaveKind::Sn => (t.sn, t.cn * t.dn),
            }
        };
        let (x0, y0) = point(0.0);
        let start = y0.atan2(x0);
        let wrap = |theta: f64| {
            let mut d = theta - start;
            while d > 0.0 {
                d -= 2.0 * PI;
            }
            while d <= -2.0 * PI {
                d += 2.0 * PI;
            }
            d
        };
        let target = wrap(slope_unit.atan2(psi_unit));
        if target == 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 4.0 * kq);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (x, y) = point(mid);
            let mut theta = wrap(y.atan2(x));
            if theta == 0.0 && mid > 2.0 * kq {
                theta = -2.0 * PI;
            }
            if theta > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `L ≥ 2π/√(2μ)` for sn waves.
    pub fn satisfies_period_bound(&self) -> bool {
        match self.kind {
            WaveKind::Sn => self.mu > 0.0 && self.period >= 2.0 * std::f64::consts::PI / (2.0 * self.mu).sqrt() * (1.0 - 1e-14),
            WaveKind::Cn => true,
        }
    }
}

pub(crate) fn invariant(psi: f64, slope: f64, mu: f64, g: f64) -> f64 {
    slope * slope - g * psi.powi(4) + 2.0 * mu * psi * psi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cn_small_p_recovers_box_relation() {
        let w = PeriodicWave::from_modulus(WaveKind::Cn, 3.0, EllipticModulus::new(1e-12).unwrap(), -1.0, 0.0)
            .unwrap();
        let expected = 2.0 * PI * PI / (w.period * w.period);
        assert!((w.mu - expected).abs() / expected < 1e-10);
    }

    #[test]
    fn sn_period_bound_saturates_at_zero_modulus() {
        let mu = 2.5;
        let w = PeriodicWave::from_modulus(WaveKind::Sn, mu, EllipticModulus::new(0.0).unwrap(), 1.0, 0.0).unwrap();
        assert!((w.period - 2.0 * PI / (2.0 * mu).sqrt()).abs() < 1e-14);
        assert!(w.satisfies_period_bound());
        for p in [0.1, 0.5, 0.99] {
            let w = PeriodicWave::from_modulus(WaveKind::Sn, mu, EllipticModulus::new(p).unwrap(), 1.0, 0.0).unwrap();
            assert!(w.period > 2.0 * PI / (2.0 * mu).sqrt());
        }
    }

    #[test]
    fn first_integral_is_constant() {
        for (kind, g, p) in [(WaveKind::Cn, -2.0, 0.3), (WaveKind::Sn, 0.5, 0.7), (WaveKind::Cn, -1.0, 0.8)] {
            let mu = if p > 0.5 && kind == WaveKind::Cn { -0.4 } else { 1.7 };
            let w = PeriodicWave::from_modulus(kind, mu, EllipticModulus::new(p).unwrap(), g, 0.2).unwrap();
            let c0 = w.first_integral();
            for x in [-1.0, 0.0, 0.37, 2.5] {
                let (psi, s) = w.psi_and_slope(x);
                assert!((invariant(psi, s, mu, g) - c0).abs() < 1e-11 * c0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = EllipticModulus::new(0.6).unwrap();
        assert!(PeriodicWave::from_modulus(WaveKind::Cn, 1.0, p, -1.0, 0.0).is_err());
        assert!(PeriodicWave::from_modulus(WaveKind::Sn, -1.0, p, 1.0, 0.0).is_err());
        assert!(PeriodicWave::from_modulus(WaveKind::Sn, 1.0, p, 0.0, 0.0).is_err());
        assert!(PeriodicWave::linear(WaveKind::Sn, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn phase_for_state_inverts_orbit() {
        for (kind, g, mu, p) in [(WaveKind::Cn, -1.0, 3.0, 0.3), (WaveKind::Sn, 1.0, 3.0, 0.9), (WaveKind::Cn, -1.0, 3.0, 0.0)] {
            let w = if p == 0.0 {
                PeriodicWave::linear(kind, mu, 1.0, 0.0).unwrap()
            } else {
                PeriodicWave::from_modulus(kind, mu, EllipticModulus::new(p).unwrap(), g, 0.0).unwrap()
            };
            let beta = w.beta();
            let kq = w.quarter_period();
            for frac in [0.0, 0.1, 0.999, 1.0, 1.5, 2.0, 3.2, 3.99999] {
                let u = frac * kq;
                let (psi, slope) = w.psi_and_slope(u / beta);
                let back = w.phase_for_state(psi / w.amplitude, slope / (w.amplitude * beta));
                let (psi2, slope2) = w.psi_and_slope(back / beta);
                assert!((psi - psi2).abs() < 1e-13 * w.amplitude, "{kind:?} u = {u}");
                assert!((slope - slope2).abs() < 1e-12 * w.amplitude * beta, "{kind:?} u = {u}");
            }
        }
    }
}
