//! Special functions in double precision: log-gamma, digamma, log-beta,
//! regularized incomplete gamma and beta functions, and their inverses.
//!
//! Everything here is hand-rolled on purpose: the expansion and estimator
//! code needs the complementary (small) side of each incomplete function
//! evaluated with full relative accuracy, which generic CDF crates do not
//! guarantee.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837877066409345483560659472811;
/// Machine-level floor used by the Lentz continued-fraction recurrences.
const TINY: f64 = 1e-300;

// Lanczos approximation, g = 7, 9 coefficients. Relative error of the
// gamma value is below 2e-15 on the positive axis.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function, x > 0.
pub fn log_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "log_gamma requires x > 0");
    if x < 0.5 {
        // recurrence keeps the Lanczos kernel on its accurate range
        return log_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * LN_2PI + (z + 0.5) * t.ln() - t + s.ln()
}

/// Gamma function, x > 0 (overflows for x > ~171.6).
pub fn gamma(x: f64) -> f64 {
    log_gamma(x).exp()
}

/// Digamma function ψ(x) = Γ'(x)/Γ(x), x > 0.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "digamma requires x > 0");
    let mut x = x;
    let mut acc = 0.0;
    while x < 8.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli coefficients; x >= 8 keeps the
    // truncation below 1e-13 relative
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))))));
    acc + x.ln() - 0.5 * inv - series
}

/// Natural log of the Beta function B(a,b), a,b > 0.
pub fn log_beta(a: f64, b: f64) -> f64 {
    log_gamma(a) + log_gamma(b) - log_gamma(a + b)
}

/// Beta function B(a,b).
pub fn beta(a: f64, b: f64) -> f64 {
    log_beta(a, b).exp()
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - log_gamma(a)).exp()
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..500 {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // Lentz's algorithm for the continued fraction of Q(a,x)
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 3e-16 {
            break;
        }
    }
    gamma_prefactor(a, x) * h
}

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
pub fn reg_gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a,x) = 1 − P(a,x).
pub fn reg_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_pdf(a: f64, x: f64) -> f64 {
    // d/dx P(a,x) = x^{a-1} e^{-x} / Γ(a)
    ((a - 1.0) * x.ln() - x - log_gamma(a)).exp()
}

/// Inverse of Q(a,·): the x with reg_gamma_q(a,x) = q.
pub fn inv_reg_gamma_q(a: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain("inverse incomplete gamma needs q in (0,1)"));
    }
    // bracket: Q is strictly decreasing from 1 to 0
    let mut lo = a + 1.0;
    let mut hi = a + 1.0;
    while reg_gamma_q(a, lo) < q {
        lo *= 0.5;
        if lo < 1e-300 {
            break;
        }
    }
    while reg_gamma_q(a, hi) > q {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoBracket("incomplete gamma inverse (upper)"));
        }
    }
    newton_monotone(
        |x| reg_gamma_q(a, x) - q,
        |x| -gamma_pdf(a, x),
        lo,
        hi,
        q.abs() * 1e-15,
    )
}

/// Inverse of P(a,·): the x with reg_gamma_p(a,x) = p.
pub fn inv_reg_gamma_p(a: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain("inverse incomplete gamma needs p in (0,1)"));
    }
    let mut lo = a + 1.0;
    let mut hi = a + 1.0;
    while reg_gamma_p(a, lo) > p {
        lo *= 0.5;
        if lo < 1e-300 {
            break;
        }
    }
    while reg_gamma_p(a, hi) < p {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoBracket("incomplete gamma inverse (lower)"));
        }
    }
    newton_monotone(
        |x| reg_gamma_p(a, x) - p,
        |x| gamma_pdf(a, x),
        lo,
        hi,
        p.abs() * 1e-15,
    )
}

/// Bracketed Newton iteration for a monotone target; falls back to
/// geometric bisection whenever a step leaves the bracket. `lo`/`hi`
/// must satisfy f(lo)·f(hi) <= 0.
fn newton_monotone(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    f_tol: f64,
) -> Result<f64> {
    let increasing = f(hi) >= f(lo);
    let mut x = (lo * hi).sqrt().max(0.5 * (lo + hi) * 1e-8);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        let g = df(x);
        let mut xn = if g != 0.0 && g.is_finite() {
            // multiplicative form keeps relative accuracy for tiny roots
            let rel = (-fx / (g * x)).max(-30.0).min(30.0);
            x * rel.exp()
        } else {
            f64::NAN
        };
        if !(xn > lo && xn < hi) {
            xn = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        }
        if (xn - x).abs() <= 1e-15 * x.abs() {
            return Ok(xn);
        }
        x = xn;
    }
    Ok(x)
}

fn betacf(a: f64, b: f64, x: f64) -> f64 {
    // continued fraction for the incomplete beta (Lentz)
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=400 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0 && (0.0..=1.0).contains(&x));
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    // ln(1-x) via ln_1p only when x came in small; for x near 1 the caller
    // is expected to use the mirrored call on the complementary argument
    let front = (a * x.ln() + b * (-x).ln_1p() - log_beta(a, b)).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - (b * (1.0 - x).ln() + a * x.ln() - log_beta(a, b)).exp() * betacf(b, a, 1.0 - x) / b
    }
}

fn beta_pdf(a: f64, b: f64, x: f64) -> f64 {
    ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - log_beta(a, b)).exp()
}

/// Inverse of I_·(a,b): the x in (0,1) with reg_inc_beta(a,b,x) = p.
///
/// Full relative accuracy is kept on the small-x side; callers that need
/// x near 1 accurately should invert the mirrored identity
/// I_x(a,b) = 1 − I_{1−x}(b,a) themselves with the complementary p.
pub fn inv_reg_inc_beta(a: f64, b: f64, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain("inverse incomplete beta needs p in [0,1]"));
    }
    // seed from the small-x asymptotic I_x ≈ x^a/(a B(a,b))
    let mut x = ((p.ln() + a.ln() + log_beta(a, b)) / a).exp();
    if !(x > 0.0 && x < 0.9) {
        x = 0.5;
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    for _ in 0..200 {
        let fx = reg_inc_beta(a, b, x) - p;
        if fx.abs() <= 1e-15 * p {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let g = beta_pdf(a, b, x);
        let mut xn = if g > 0.0 && g.is_finite() {
            if x < 0.25 {
                let rel = (-fx / (g * x)).max(-30.0).min(30.0);
                x * rel.exp()
            } else {
                x - fx / g
            }
        } else {
            f64::NAN
        };
        if !(xn > lo && xn < hi) {
            xn = if lo > 0.0 && hi < 2.0 * lo {
                0.5 * (lo + hi)
            } else if lo > 0.0 {
                (lo * hi).sqrt()
            } else {
                0.5 * x
            };
        }
        if (xn - x).abs() <= 1e-15 * x {
            return Ok(xn);
        }
        x = xn;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_gamma_reference_values() {
        assert_relative_eq!(log_gamma(1e-6), 13.81550998074943166921, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(0.5), 0.5723649429247000870717, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(1.5), -0.1207822376352452223455, max_relative = 1e-12);
        assert_relative_eq!(log_gamma(3.7), 1.428072326665387921872, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(10.0), 12.80182748008146961121, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(171.5), 709.1431630309282422724, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(1e3), 5905.220423209181211826, max_relative = 1e-13);
        assert_relative_eq!(log_gamma(1e6), 12815504.56914761165998, max_relative = 1e-13);
        // zeros of log-gamma
        assert!(log_gamma(1.0).abs() < 1e-14);
        assert!(log_gamma(2.0).abs() < 1e-14);
        assert_relative_eq!(gamma(1.5), 0.8862269254527580136491, max_relative = 1e-13);
    }

    #[test]
    fn digamma_reference_values() {
        assert_relative_eq!(digamma(1e-4), -10000.57705118351433485, max_relative = 1e-13);
        assert_relative_eq!(digamma(0.5), -1.963510026021423479441, max_relative = 1e-13);
        assert_relative_eq!(digamma(1.0), -0.5772156649015328606065, max_relative = 1e-13);
        assert!(digamma(1.4616321449683623).abs() < 1e-12);
        assert_relative_eq!(digamma(2.0), 0.4227843350984671393935, max_relative = 1e-13);
        assert_relative_eq!(digamma(6.25), 1.750453526883736028382, max_relative = 1e-13);
        assert_relative_eq!(digamma(1e3), 6.90725519564881205205, max_relative = 1e-13);
        assert_relative_eq!(digamma(1e6), 13.81551005796419077077, max_relative = 1e-13);
    }

    #[test]
    fn log_beta_reference_values() {
        assert_relative_eq!(log_beta(0.5, 0.5), 1.144729885849400174143, max_relative = 1e-13);
        assert_relative_eq!(log_beta(3.0, 2.0), -2.48490664978800031023, max_relative = 1e-13);
        assert_relative_eq!(
            log_beta(2.5, 4.25),
            -3.716776093508254780739,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            log_beta(1e-3, 1e-3),
            7.600900817008347399318,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            log_beta(100.0, 0.5),
            -1.728970155277522692136,
            max_relative = 1e-12
        );
    }

    #[test]
    fn incomplete_gamma_reference_values() {
        assert_relative_eq!(
            reg_gamma_q(0.5, 1.0),
            0.1572992070502851306588,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(1.0, 1.0),
            0.3678794411714423215955,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(2.0, 0.5),
            0.9097959895689501354057,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(2.0, 20.0),
            4.328422607120971438728e-8,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(0.5, 18.4),
            1.30890250127144265801e-9,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(7.5, 3.0),
            0.9797477467178133651373,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(3.0, 40.0),
            3.572865928700226345072e-15,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_q(0.5, 0.01),
            0.8875370839817151077967,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_p(0.5, 1.0),
            0.8427007929497148693412,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_p(2.0, 0.5),
            0.0902040104310498645943,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_p(3.0, 0.1),
            0.0001546530702646716535048,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_gamma_p(2.0, 1e-8),
            4.999999966666666791667e-17,
            max_relative = 1e-13
        );
    }

    #[test]
    fn incomplete_beta_reference_values() {
        assert_relative_eq!(reg_inc_beta(0.5, 0.5, 0.25), 1.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(reg_inc_beta(2.0, 2.0, 0.3), 0.216, max_relative = 1e-13);
        assert_relative_eq!(reg_inc_beta(2.0, 3.0, 0.5), 0.6875, max_relative = 1e-13);
        assert_relative_eq!(
            reg_inc_beta(5.0, 1.5, 0.9),
            0.7761721343162156059714,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            reg_inc_beta(0.5, 0.5, 1e-6),
            0.0006366198784709244841838,
            max_relative = 1e-13
        );
        assert_relative_eq!(reg_inc_beta(2.0, 2.0, 1e-4), 2.9998e-8, max_relative = 1e-13);
        assert_relative_eq!(
            reg_inc_beta(1.5, 3.5, 0.999),
            0.9999999999264041901671,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            reg_inc_beta(4.0, 2.0, 0.97),
            0.9915279472,
            max_relative = 1e-9
        );
    }

    #[test]
    fn inverse_gamma_round_trips() {
        for &(a, q) in &[
            (0.5, 1e-6),
            (0.5, 0.1572992070502851306588),
            (1.0, 0.5),
            (2.0, 1e-10),
            (7.5, 0.97),
            (0.5, 0.999),
        ] {
            let x = inv_reg_gamma_q(a, q).unwrap();
            assert_relative_eq!(reg_gamma_q(a, x), q, max_relative = 1e-11);
        }
        for &(a, p) in &[(0.5, 1e-8), (2.0, 0.3), (3.0, 1e-4), (1.0, 0.9)] {
            let x = inv_reg_gamma_p(a, p).unwrap();
            assert_relative_eq!(reg_gamma_p(a, x), p, max_relative = 1e-11);
        }
        // frozen: quantile of Γ(1/2,1) at survival 1e-6
        assert_relative_eq!(
            inv_reg_gamma_q(0.5, 1e-6).unwrap(),
            11.9640634884674144243,
            max_relative = 1e-11
        );
    }

    #[test]
    fn inverse_beta_round_trips() {
        for &(a, b, p) in &[
            (0.5, 0.5, 1e-8),
            (0.5, 0.5, 0.5),
            (2.0, 2.0, 1e-10),
            (2.0, 3.0, 0.6875),
            (1.0, 2.0, 0.2),
            (5.0, 1.5, 0.97),
            (0.25, 4.0, 1e-4),
        ] {
            let x = inv_reg_inc_beta(a, b, p).unwrap();
            assert_relative_eq!(reg_inc_beta(a, b, x), p, max_relative = 1e-11);
        }
        // exact value: I_x(2,2) = x^2(3-2x), at p = 2.9998e-8 the root is 1e-4
        assert_relative_eq!(
            inv_reg_inc_beta(2.0, 2.0, 2.9998e-8).unwrap(),
            1e-4,
            max_relative = 1e-11
        );
    }

    #[test]
    fn incomplete_functions_are_monotone() {
        let mut last = 1.0;
        for i in 1..40 {
            let x = 0.5 * i as f64;
            let q = reg_gamma_q(1.7, x);
            assert!(q < last);
            last = q;
        }
        let mut last = 0.0;
        for i in 1..40 {
            let x = i as f64 / 40.0;
            let p = reg_inc_beta(1.3, 0.7, x);
            assert!(p > last);
            last = p;
        }
    }
}
