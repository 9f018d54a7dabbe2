//! Bracketed scalar root finding.
//!
//! Every transcendental equation in the crate is solved through [`brent`] on a
//! bracket established by the caller, or by [`scan_brackets`] when the number
//! of roots is not known in advance.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Brent's method (bisection safeguarded inverse quadratic interpolation).
///
/// Terminates when the bracket is narrower than `xtol` plus a few ulps of the
/// current iterate, or when the function vanishes exactly.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonConvergence {
                detail: format!("non-finite function value at {b}"),
                trace: Vec::new(),
            });
        }
    }
    Err(Error::NonConvergence {
        detail: format!("brent exceeded {MAX_ITER} iterations on [{lo}, {hi}]"),
        trace: Vec::new(),
    })
}

/// Plain bisection down to the floating point resolution of the bracket.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    let sa = fa.signum();
    for _ in 0..2100 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Samples `f` at `n` uniformly spaced points and returns every sub-interval
/// across which the (finite) values change sign.
pub fn scan_brackets<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let n = n.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp == 0.0 || fp.signum() != fx.signum() {
                out.push((xp, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}

/// Like [`scan_brackets`] but on caller-supplied, increasing abscissae.
pub fn brackets_on<F>(mut f: F, points: &[f64]) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in points {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp == 0.0 || fp.signum() != fx.signum() {
                out.push((xp, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt_two() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_missing_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn bisect_reaches_float_resolution() {
        let r = bisect(|x| x.cos(), 1.0, 2.0).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 4e-16);
    }

    #[test]
    fn scan_finds_all_sign_changes() {
        let b = scan_brackets(|x| x.sin(), 0.5, 10.0, 200);
        assert_eq!(b.len(), 3);
        for (lo, hi) in b {
            let r = brent(|x| x.sin(), lo, hi, 1e-14).unwrap();
            let n = (r / std::f64::consts::PI).round();
            assert!((r - n * std::f64::consts::PI).abs() < 1e-12);
        }
    }
}
