//! Sample-based small-tail-probability estimation for X = R·S.
//!
//! Two pipelines, each in a "(R,S) samples" and an "X samples only"
//! variant: the heavy-tail pipeline built on the Hill statistic with a
//! second-order bias correction, and the Weibull-tail pipeline built on
//! bias-reduced log-spacing regression plus the same heavy machinery
//! applied to the transformed deflator 1/(1−S).

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracle::{SampleSet, Seq};
use crate::specfun::gamma;

/// Which coordinates of a SampleSet feed a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UseSamples {
    /// Estimate from R and S samples separately.
    Rs,
    /// Estimate from the products alone.
    X,
}

/// Rule for the second-order rate plug-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoRule {
    /// User-supplied fixed value, must be negative.
    Fixed(f64),
    /// The simulation default: ρ̂ = −H_{k,n}, so τ̂ = −1.
    NegHill,
}

/// Output of the heavy-tail pipeline at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyTailEstimates {
    pub k: usize,
    pub h_kn: f64,
    pub rho_hat: f64,
    pub tau_hat: f64,
    pub delta_hat: f64,
    pub alpha_hat: f64,
    pub fbar_hat: f64,
    /// Ê{S^α̂}; NaN for the X-only variant.
    pub moment_alpha: f64,
    /// Ê{S^{α̂−τ̂}}; NaN for the X-only variant.
    pub moment_shift: f64,
    pub p_hat: f64,
    /// False when the bias correction drives 1/α̂ or the plug-in bracket
    /// nonpositive; the numbers are kept as computed.
    pub valid: bool,
}

/// Output of the Weibull-tail pipeline at one k. The deflator-machinery
/// fields are NaN for the X-only variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullTailEstimates {
    pub k: usize,
    pub theta_hat: f64,
    pub b_hat: f64,
    pub rho_prime_hat: f64,
    pub fbar_hat: f64,
    pub v_hat: f64,
    pub bv_hat: f64,
    pub gbar_hat: f64,
    pub a_hat: f64,
    pub alpha2_hat: f64,
    pub tau2_hat: f64,
    pub delta2_hat: f64,
    pub p_hat: f64,
    pub valid: bool,
}

/// Hill statistic H_{k,n} on ascending data: mean log-excess of the top
/// k values over the (k+1)-th from the top. Ratios are formed before
/// taking logs, so rescaling the data by a power of two is exactly
/// neutral.
pub fn hill(samples: &[f64], k: usize) -> Result<f64> {
    let n = samples.len();
    if k < 1 || k + 1 > n {
        return Err(Error::Domain("need 1 <= k <= n-1 for the Hill statistic"));
    }
    debug_assert!(samples.windows(2).all(|w| w[0] <= w[1]), "samples must be ascending");
    let base = samples[n - k - 1];
    if base <= 0.0 {
        return Err(Error::Domain("top k+1 order statistics must be positive"));
    }
    let mut acc = 0.0;
    for i in 0..k {
        acc += (samples[n - 1 - i] / base).ln();
    }
    Ok(acc / k as f64)
}

/// E_{k,n}(s): mean s-th power of the top-k ratios to the (k+1)-th
/// upper order statistic.
pub fn tail_ratio_moment(samples: &[f64], k: usize, s: f64) -> Result<f64> {
    let n = samples.len();
    if k < 1 || k + 1 > n {
        return Err(Error::Domain("need 1 <= k <= n-1 for the ratio moment"));
    }
    let base = samples[n - k - 1];
    if base <= 0.0 {
        return Err(Error::Domain("top k+1 order statistics must be positive"));
    }
    let mut acc = 0.0;
    for i in 0..k {
        acc += (samples[n - 1 - i] / base).powf(s);
    }
    Ok(acc / k as f64)
}

struct HeavyBits {
    h: f64,
    rho: f64,
    tau: f64,
    delta: f64,
    alpha_inv: f64,
    alpha: f64,
}

fn heavy_bits(sorted: &[f64], k: usize, rho_rule: RhoRule) -> Result<HeavyBits> {
    let h = hill(sorted, k)?;
    if h <= 0.0 {
        return Err(Error::Domain("Hill statistic vanished: top order statistics tied"));
    }
    let rho = match rho_rule {
        RhoRule::NegHill => -h,
        RhoRule::Fixed(r) => {
            if r >= 0.0 {
                return Err(Error::Domain("fixed second-order rate must be negative"));
            }
            r
        }
    };
    let tau = rho / h;
    let e_tau = tail_ratio_moment(sorted, k, tau)?;
    let omr = 1.0 - rho;
    let delta = h * (1.0 - 2.0 * rho) * omr * omr * omr / (rho * rho * rho * rho)
        * (e_tau - 1.0 / omr);
    let alpha_inv = h - delta * rho / omr;
    Ok(HeavyBits { h, rho, tau, delta, alpha_inv, alpha: 1.0 / alpha_inv })
}

/// Plug-in tail value (k/n)·(y(1+δ̂(1−y^τ̂)))^{−α̂}; returns the inner
/// bracket alongside so callers can flag sign degeneracies.
fn plugin_tail(bits: &HeavyBits, n: usize, k: usize, y: f64) -> (f64, f64) {
    let bracket = y * (1.0 + bits.delta * (1.0 - y.powf(bits.tau)));
    let fbar = (k as f64 / n as f64) * bracket.powf(-bits.alpha);
    (bracket, fbar)
}

/// Heavy-tail estimate of P(X > x_n) at one k.
pub fn heavy_pipeline(
    samples: &SampleSet,
    k: usize,
    x_n: f64,
    use_samples: UseSamples,
    rho_rule: RhoRule,
) -> Result<HeavyTailEstimates> {
    let n = samples.n();
    let sorted = match use_samples {
        UseSamples::Rs => samples.sorted(Seq::R),
        UseSamples::X => samples.sorted(Seq::X),
    };
    let bits = heavy_bits(sorted, k, rho_rule)?;
    let base = sorted[n - k - 1];
    if x_n <= base {
        return Err(Error::Domain("threshold must exceed the (k+1)-th upper order statistic"));
    }
    let y = x_n / base;
    let (bracket, fbar) = plugin_tail(&bits, n, k, y);
    let (moment_alpha, moment_shift, p_hat) = match use_samples {
        UseSamples::Rs => {
            let s_vals = samples.values(Seq::S);
            let nf = n as f64;
            let mut ma = 0.0;
            let mut ms = 0.0;
            for &s in s_vals {
                ma += s.powf(bits.alpha);
                ms += s.powf(bits.alpha - bits.tau);
            }
            ma /= nf;
            ms /= nf;
            (ma, ms, fbar * (ma + (ms - ma) * bits.delta / bits.h))
        }
        UseSamples::X => (f64::NAN, f64::NAN, fbar),
    };
    let valid = bits.alpha_inv > 0.0
        && bracket > 0.0
        && fbar < 1.0
        && p_hat.is_finite()
        && p_hat >= 0.0;
    Ok(HeavyTailEstimates {
        k,
        h_kn: bits.h,
        rho_hat: bits.rho,
        tau_hat: bits.tau,
        delta_hat: bits.delta,
        alpha_hat: bits.alpha,
        fbar_hat: fbar,
        moment_alpha,
        moment_shift,
        p_hat,
        valid,
    })
}

/// Bias-reduced Weibull-tail coefficient regression: returns (θ̂, b̂)
/// from the least-squares fit of the rescaled log-spacings
/// Z_j = j·log(n/j)·(log R_{n−j+1,n} − log R_{n−j,n}) against the levels
/// x_j = log(n/k)/log(n/j), j = 1..k.
pub fn weibull_theta(samples: &[f64], k: usize) -> Result<(f64, f64)> {
    let n = samples.len();
    if k < 3 || k + 1 > n {
        return Err(Error::Domain("need 3 <= k <= n-1 for the tail-coefficient regression"));
    }
    debug_assert!(samples.windows(2).all(|w| w[0] <= w[1]), "samples must be ascending");
    if samples[n - k - 1] <= 0.0 {
        return Err(Error::Domain("top k+1 order statistics must be positive"));
    }
    let nf = n as f64;
    let log_nk = (nf / k as f64).ln();
    let mut xs = Vec::with_capacity(k);
    let mut zs = Vec::with_capacity(k);
    for j in 1..=k {
        let log_nj = (nf / j as f64).ln();
        xs.push(log_nk / log_nj);
        zs.push(j as f64 * log_nj * (samples[n - j] / samples[n - j - 1]).ln());
    }
    let kf = k as f64;
    let xbar = xs.iter().sum::<f64>() / kf;
    let zbar = zs.iter().sum::<f64>() / kf;
    let mut sxx = 0.0;
    let mut sxz = 0.0;
    for j in 0..k {
        let dx = xs[j] - xbar;
        sxx += dx * dx;
        sxz += dx * zs[j];
    }
    if sxx == 0.0 {
        return Err(Error::Domain("degenerate level spread in the tail regression"));
    }
    let b_hat = sxz / sxx;
    Ok((zbar - b_hat * xbar, b_hat))
}

/// Plug-in log-tail V̂(x) = log(n/k)·y^{1/θ̂}·exp(−b̂(y^{ρ̂'/θ̂}−1)/(θ̂ρ̂'))
/// with y = x over the (k+1)-th upper order statistic.
fn weibull_v_hat(theta: f64, b: f64, rho_prime: f64, log_nk: f64, y: f64) -> f64 {
    let growth = y.powf(1.0 / theta);
    let bias = (-b * (y.powf(rho_prime / theta) - 1.0) / (theta * rho_prime)).exp();
    log_nk * growth * bias
}

/// Weibull-tail estimate of P(X > x) at one k.
pub fn weibull_pipeline(
    samples: &SampleSet,
    k: usize,
    x: f64,
    use_samples: UseSamples,
    rho_prime_hat: f64,
) -> Result<WeibullTailEstimates> {
    if rho_prime_hat >= 0.0 {
        return Err(Error::Domain("rho' plug-in must be negative"));
    }
    let n = samples.n();
    let nf = n as f64;
    let sorted = match use_samples {
        UseSamples::Rs => samples.sorted(Seq::R),
        UseSamples::X => samples.sorted(Seq::X),
    };
    let (theta_hat, b_hat) = weibull_theta(sorted, k)?;
    let base = sorted[n - k - 1];
    if x <= base {
        return Err(Error::Domain("threshold must exceed the (k+1)-th upper order statistic"));
    }
    let log_nk = (nf / k as f64).ln();
    let v_hat = weibull_v_hat(theta_hat, b_hat, rho_prime_hat, log_nk, x / base);
    let fbar_hat = (-v_hat).exp();
    let bv_hat = b_hat * (v_hat / log_nk).powf(rho_prime_hat);
    match use_samples {
        UseSamples::Rs => {
            let s_vals = samples.values(Seq::S);
            if s_vals.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
                return Err(Error::Domain("deflator samples must lie in (0,1)"));
            }
            let mut s_star: Vec<f64> = s_vals.iter().map(|&s| 1.0 / (1.0 - s)).collect();
            s_star.sort_unstable_by(f64::total_cmp);
            let bits = heavy_bits(&s_star, k, RhoRule::NegHill)?;
            let tau2 = -1.0;
            let y2 = v_hat / s_star[n - k - 1];
            let (bracket2, gbar_hat) = plugin_tail(&bits, n, k, y2);
            let a_hat = bits.alpha * tau2 * bits.delta * y2.powf(tau2);
            let alpha2 = bits.alpha;
            let gamma_ratio =
                gamma(alpha2 - tau2 + 1.0) / (theta_hat.powf(tau2) * gamma(alpha2 + 1.0));
            let correction = (alpha2 / theta_hat) * bv_hat
                + (gamma_ratio - 1.0) / tau2 * a_hat
                - alpha2 * (alpha2 + 1.0) * (theta_hat + 1.0) / (2.0 * v_hat);
            let p_hat = fbar_hat
                * gbar_hat
                * gamma(alpha2 + 1.0)
                * theta_hat.powf(alpha2)
                * (1.0 + correction);
            let valid = v_hat > 0.0
                && fbar_hat < 1.0
                && bits.alpha_inv > 0.0
                && bracket2 > 0.0
                && p_hat.is_finite()
                && p_hat >= 0.0;
            Ok(WeibullTailEstimates {
                k,
                theta_hat,
                b_hat,
                rho_prime_hat,
                fbar_hat,
                v_hat,
                bv_hat,
                gbar_hat,
                a_hat,
                alpha2_hat: alpha2,
                tau2_hat: tau2,
                delta2_hat: bits.delta,
                p_hat,
                valid,
            })
        }
        UseSamples::X => {
            let valid = v_hat > 0.0 && fbar_hat < 1.0 && fbar_hat.is_finite();
            Ok(WeibullTailEstimates {
                k,
                theta_hat,
                b_hat,
                rho_prime_hat,
                fbar_hat,
                v_hat,
                bv_hat,
                gbar_hat: f64::NAN,
                a_hat: f64::NAN,
                alpha2_hat: f64::NAN,
                tau2_hat: f64::NAN,
                delta2_hat: f64::NAN,
                p_hat: fbar_hat,
                valid,
            })
        }
    }
}

/// Estimation method for a path over k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMethod {
    HeavyRs,
    HeavyX,
    WeibullRs,
    WeibullX,
}

/// One row of an estimator path: the shape estimate (α̂ or θ̂) and the
/// tail probability estimate at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathRow {
    pub k: usize,
    pub estimate_index: f64,
    pub p_hat: f64,
    pub valid: bool,
}

/// Estimates along a k-grid; invalid k are marked, never dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorPath {
    pub method: PathMethod,
    pub rows: Vec<PathRow>,
    pub true_p: Option<f64>,
}

/// Run one method over a strictly increasing k-grid at threshold x.
/// Pipeline errors at a particular k (k too small, threshold not beyond
/// the order statistic, ties) become invalid rows. Defaults are used for
/// the rate plug-ins: ρ̂ = −H_{k,n} and ρ̂' = −1.
pub fn estimator_path(
    samples: &SampleSet,
    method: PathMethod,
    k_grid: &[usize],
    x: f64,
    true_p: Option<f64>,
) -> Result<EstimatorPath> {
    for w in k_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain("k grid must be strictly increasing"));
        }
    }
    if let Some(&kmax) = k_grid.last() {
        if kmax + 1 > samples.n() {
            return Err(Error::Domain("largest k must stay below the sample size"));
        }
    }
    if k_grid.first() == Some(&0) {
        return Err(Error::Domain("k grid must start at 1 or larger"));
    }
    let mut rows = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let row = match method {
            PathMethod::HeavyRs | PathMethod::HeavyX => {
                let use_samples = if method == PathMethod::HeavyRs {
                    UseSamples::Rs
                } else {
                    UseSamples::X
                };
                match heavy_pipeline(samples, k, x, use_samples, RhoRule::NegHill) {
                    Ok(est) => PathRow {
                        k,
                        estimate_index: est.alpha_hat,
                        p_hat: est.p_hat,
                        valid: est.valid,
                    },
                    Err(_) => PathRow { k, estimate_index: f64::NAN, p_hat: f64::NAN, valid: false },
                }
            }
            PathMethod::WeibullRs | PathMethod::WeibullX => {
                let use_samples = if method == PathMethod::WeibullRs {
                    UseSamples::Rs
                } else {
                    UseSamples::X
                };
                match weibull_pipeline(samples, k, x, use_samples, -1.0) {
                    Ok(est) => PathRow {
                        k,
                        estimate_index: est.theta_hat,
                        p_hat: est.p_hat,
                        valid: est.valid,
                    },
                    Err(_) => PathRow { k, estimate_index: f64::NAN, p_hat: f64::NAN, valid: false },
                }
            }
        };
        rows.push(row);
    }
    Ok(EstimatorPath { method, rows, true_p })
}

/// Operational stable-k window [0.04n, 0.3n], floored at 3.
pub fn stable_k_range(n: usize) -> (usize, usize) {
    let lo = ((0.04 * n as f64).ceil() as usize).max(3);
    let hi = ((0.3 * n as f64).floor() as usize).min(n.saturating_sub(1));
    (lo, hi.max(lo))
}

/// Median of the finite entries; NaN when none are finite.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_unstable_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
