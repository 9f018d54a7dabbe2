//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions sn, cn, dn.
//!
//! The parameter `p` is used exactly as in `cn(u | p)`: `K(p) = ∫₀^{π/2}
//! (1 − p sin²θ)^{-1/2} dθ`, `dn² + p sn² = 1`. No `k` vs `k²` conversion
//! happens anywhere in the public surface.
//!
//! K(p) uses the arithmetic-geometric mean; sn/cn/dn use the descending
//! Gauss (Landen) transformation on the same AGM sequence, followed by the
//! cotangent back-recursion, which keeps `dn` accurate near `u = K` where the
//! textbook `cos φ₀ / cos(φ₁ − φ₀)` form degenerates to 0/0.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};
use crate::roots::bisect;

const AGM_REL_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

/// Elliptic parameter `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub const ZERO: Self = Self(0.0);
    pub const ONE: Self = Self(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            domain(format!("elliptic parameter p = {p} outside [0, 1]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter `1 − p`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for EllipticModulus {
    type Error = crate::Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

/// `(sn, cn, dn)` at a common argument and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complete elliptic integral of the first kind, `K(p)` for `0 ≤ p < 1`.
pub fn complete_k(p: EllipticModulus) -> Result<f64> {
    let m = p.value();
    if m >= 1.0 {
        return domain("K(p) diverges at p = 1");
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() < AGM_REL_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// Jacobi elliptic functions `sn(u|p)`, `cn(u|p)`, `dn(u|p)`.
pub fn jacobi(u: f64, p: EllipticModulus) -> JacobiTriple {
    let m = p.value();
    if m == 0.0 {
        let (s, c) = u.sin_cos();
        return JacobiTriple { sn: s, cn: c, dn: 1.0 };
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return JacobiTriple { sn: u.tanh(), cn: sech, dn: sech };
    }

    // Descending AGM: a_n (arithmetic means) and b_n (geometric means).
    let mut arith = [0.0_f64; AGM_MAX_ITER + 1];
    let mut geom = [0.0_f64; AGM_MAX_ITER + 1];
    let mut a = 1.0_f64;
    let mut mc = 1.0 - m;
    let mut last = 0;
    let mut mean = 1.0;
    for i in 0..AGM_MAX_ITER {
        last = i;
        arith[i] = a;
        mc = mc.sqrt();
        geom[i] = mc;
        mean = 0.5 * (a + mc);
        if (a - mc).abs() < AGM_REL_TOL * a {
            break;
        }
        mc *= a;
        a = mean;
    }

    let v = u * mean;
    let (mut sn, cn0) = v.sin_cos();
    let mut cn = cn0;
    let mut dn = 1.0;
    if sn != 0.0 {
        let mut ratio = cn / sn;
        let mut c = mean * ratio;
        for i in (0..=last).rev() {
            let b = arith[i];
            ratio *= c;
            c *= dn;
            dn = (geom[i] + ratio) / (b + ratio);
            ratio = c / b;
        }
        let s = 1.0 / c.hypot(1.0);
        sn = if sn >= 0.0 { s } else { -s };
        cn = c * sn;
    }
    JacobiTriple { sn, cn, dn }
}

/// Inverse of `cn` on its principal monotone branch: the `u ∈ [0, 2K(p)]`
/// with `cn(u|p) = c`. Requires `p < 1` and `|c| ≤ 1`.
pub fn inverse_cn(c: f64, p: EllipticModulus) -> Result<f64> {
    if !(-1.0..=1.0).contains(&c) {
        return domain(format!("cn value {c} outside [-1, 1]"));
    }
    let k = complete_k(p)?;
    bisect(|u| jacobi(u, p).cn - c, 0.0, 2.0 * k)
}

/// Inverse of `sn` on its principal monotone branch: the `u ∈ [−K(p), K(p)]`
/// with `sn(u|p) = s`. Requires `p < 1` and `|s| ≤ 1`.
pub fn inverse_sn(s: f64, p: EllipticModulus) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s) {
        return domain(format!("sn value {s} outside [-1, 1]"));
    }
    let k = complete_k(p)?;
    bisect(|u| jacobi(u, p).sn - s, -k, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(p: f64) -> EllipticModulus {
        EllipticModulus::new(p).unwrap()
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert_eq!(complete_k(EllipticModulus::ZERO).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_rejects_one_and_out_of_range() {
        assert!(complete_k(EllipticModulus::ONE).is_err());
        assert!(EllipticModulus::new(-1e-3).is_err());
        assert!(EllipticModulus::new(1.0 + 1e-12).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
    }

    #[test]
    fn k_diverges_logarithmically() {
        let k = complete_k(modulus(0.999999)).unwrap();
        assert!(k > 7.0);
        // K(p) ≈ ln(4/√(1−p)) as p → 1
        let approx = (4.0 / (1e-6f64).sqrt()).ln();
        assert!((k - approx).abs() < 1e-5);
    }

    #[test]
    fn identity_case() {
        for p in [0.0, 0.3, 0.9, 1.0] {
            let t = jacobi(0.0, modulus(p));
            assert_eq!((t.sn, t.cn, t.dn), (0.0, 1.0, 1.0));
        }
    }

    #[test]
    fn trigonometric_degeneration() {
        let t = jacobi(1.0, EllipticModulus::ZERO);
        assert_eq!(t.sn, 1f64.sin());
        assert_eq!(t.cn, 1f64.cos());
        assert_eq!(t.dn, 1.0);
    }

    #[test]
    fn hyperbolic_degeneration() {
        let t = jacobi(0.7, EllipticModulus::ONE);
        assert!((t.sn - 0.7f64.tanh()).abs() < 1e-15);
        assert!((t.cn - 1.0 / 0.7f64.cosh()).abs() < 1e-15);
        assert_eq!(t.cn, t.dn);
        // continuity into p = 1
        let near = jacobi(0.7, modulus(1.0 - 1e-12));
        assert!((near.sn - t.sn).abs() < 1e-10);
        assert!((near.dn - t.dn).abs() < 1e-10);
    }

    #[test]
    fn quarter_period_zero_of_cn() {
        for p in [1e-6, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999999] {
            let m = modulus(p);
            let k = complete_k(m).unwrap();
            let t = jacobi(k, m);
            assert!(t.cn.abs() < 1e-10, "p = {p}: cn(K) = {}", t.cn);
            assert!((t.sn - 1.0).abs() < 1e-12);
            assert!((t.dn - (1.0 - p).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn periodicity() {
        for p in [0.2, 0.5, 0.95] {
            let m = modulus(p);
            let k = complete_k(m).unwrap();
            for u in [-3.0, 0.1, 1.7, 8.0] {
                let a = jacobi(u, m);
                let b = jacobi(u + 4.0 * k, m);
                assert!((a.sn - b.sn).abs() < 1e-12);
                assert!((a.cn - b.cn).abs() < 1e-12);
                // sn(u + 2K) = −sn(u), dn has period 2K
                let c = jacobi(u + 2.0 * k, m);
                assert!((a.sn + c.sn).abs() < 1e-12);
                assert!((a.dn - c.dn).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_parameter_tracks_sine() {
        let m = modulus(1e-8);
        let worst = (0..=1000)
            .map(|i| {
                let u = 10.0 * i as f64 / 1000.0;
                (jacobi(u, m).sn - u.sin()).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "worst = {worst}");
    }

    #[test]
    fn odd_and_even_symmetry() {
        let m = modulus(0.6);
        let a = jacobi(1.3, m);
        let b = jacobi(-1.3, m);
        assert_eq!(a.sn, -b.sn);
        assert!((a.cn - b.cn).abs() < 1e-15);
        assert!((a.dn - b.dn).abs() < 1e-15);
    }

    #[test]
    fn inverses_round_trip() {
        let m = modulus(0.4);
        let k = complete_k(m).unwrap();
        for u in [0.0, 0.3, 1.0, k, 1.9 * k] {
            let c = jacobi(u, m).cn;
            let back = inverse_cn(c, m).unwrap();
            assert!((jacobi(back, m).cn - c).abs() < 1e-15);
        }
        for u in [-0.9 * k, -0.2, 0.0, 0.8, k] {
            let s = jacobi(u, m).sn;
            let back = inverse_sn(s, m).unwrap();
            assert!((jacobi(back, m).sn - s).abs() < 1e-15);
        }
        assert!(inverse_cn(1.1, m).is_err());
        assert!(inverse_sn(0.5, EllipticModulus::ONE).is_err());
    }
}
