//! Brent's method for one-dimensional root finding.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Find a root of `f` in [a,b] with f(a)·f(b) <= 0.
///
/// Stops when the bracket shrinks below `x_tol_rel` relatively (plus a
/// machine floor) or when |f| falls below `f_tol` (pass 0.0 to disable).
pub fn brent(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    x_tol_rel: f64,
    f_tol: f64,
) -> Result<f64> {
    let mut a = a;
    let mut b = b;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket("brent endpoints have the same sign"));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol_rel * b.abs().max(1e-300);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= f_tol {
            return Ok(b);
        }
        if e.abs() < tol || fa.abs() <= fb.abs() {
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * m * s, 1.0 - s)
            } else {
                // inverse quadratic interpolation
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
    }
    Ok(b)
}

/// Expand a bracket upward geometrically until `f` changes sign.
/// Returns (lo, hi) with f(lo)·f(hi) <= 0; `f(x0)` seeds the lower end.
pub fn bracket_up(f: impl Fn(f64) -> f64, x0: f64, factor: f64) -> Result<(f64, f64)> {
    debug_assert!(x0 > 0.0 && factor > 1.0);
    let f0 = f(x0);
    if f0 == 0.0 {
        return Ok((x0, x0));
    }
    let mut lo = x0;
    let mut hi = x0;
    for _ in 0..400 {
        hi *= factor;
        if f(hi).signum() != f0.signum() {
            return Ok((lo, hi));
        }
        lo = hi;
    }
    Err(Error::NoBracket("no sign change within expansion budget"))
}
