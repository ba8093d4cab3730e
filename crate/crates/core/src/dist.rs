//! Parametric tail-model catalog.
//!
//! Each family carries hard-coded second-order metadata (tail indices,
//! second-order parameters, auxiliary functions). The metadata are analytic
//! facts about the families, not fitted quantities, so they live next to
//! the evaluators as plain formulas.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quad;
use crate::root;
use crate::specfun::{
    digamma, inv_reg_gamma_p, inv_reg_gamma_q, inv_reg_inc_beta, log_beta, reg_gamma_p,
    reg_gamma_q, reg_inc_beta,
};

/// Survival mass of the unit truncated Gumbel model: 1 - e^{-1}.
const TG_NORM: f64 = 0.632120558828557678404476229838539;

/// Max-domain of attraction of the extreme value limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mda {
    Frechet,
    Gumbel,
    Weibull,
}

/// Supported parametric families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Pareto { alpha: f64, theta: f64 },
    Frechet { alpha: f64 },
    Burr { a: f64, b: f64 },
    HallWeiss { alpha: f64, tau: f64 },
    LogGamma { alpha: f64, beta: f64 },
    InvGamma { alpha: f64, beta: f64 },
    AbsT { v: f64 },
    Beta { a: f64, b: f64 },
    Beta2 { a: f64, b: f64 },
    ReverseBurr { a: f64, b: f64 },
    Gamma { alpha: f64, lambda: f64 },
    AbsNormal,
    Weibull { beta: f64, c: f64 },
    PerturbedWeibull { beta: f64, alpha: f64, big_c: f64, big_d: f64 },
    BenktanderII { beta: f64, lambda: f64 },
    Logistic,
    TruncGumbel,
    /// Exponential-type model with finite right endpoint 1:
    /// survival exp(-c x/(1-x)) on [0,1).
    FiniteExp { c: f64 },
}

/// A validated tail model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    family: Family,
}

impl TailModel {
    pub fn new(family: Family) -> Result<Self> {
        validate(family)?;
        Ok(TailModel { family })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Support endpoints (x_low, x_F); x_F may be infinite.
    pub fn support(&self) -> (f64, f64) {
        use Family::*;
        match self.family {
            HallWeiss { .. } | LogGamma { .. } | BenktanderII { .. } => (1.0, f64::INFINITY),
            Beta { .. } | FiniteExp { .. } => (0.0, 1.0),
            ReverseBurr { .. } => (f64::NEG_INFINITY, 1.0),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn mda(&self) -> Mda {
        use Family::*;
        match self.family {
            Pareto { .. } | Frechet { .. } | Burr { .. } | HallWeiss { .. } | LogGamma { .. }
            | InvGamma { .. } | AbsT { .. } | Beta2 { .. } => Mda::Frechet,
            Gamma { .. } | AbsNormal | Weibull { .. } | PerturbedWeibull { .. }
            | BenktanderII { .. } | Logistic | TruncGumbel | FiniteExp { .. } => Mda::Gumbel,
            Beta { .. } | ReverseBurr { .. } => Mda::Weibull,
        }
    }

    /// Survival function P(X > x).
    pub fn survival(&self, x: f64) -> f64 {
        use Family::*;
        let (lo, hi) = self.support();
        if x <= lo {
            return 1.0;
        }
        if x >= hi {
            return 0.0;
        }
        match self.family {
            Pareto { alpha, theta } => (alpha * (theta.ln() - (theta + x).ln())).exp(),
            Frechet { alpha } => -(-x.powf(-alpha)).exp_m1(),
            Burr { a, b } => (-a * x.powf(b).ln_1p()).exp(),
            HallWeiss { alpha, tau } => 0.5 * x.powf(-alpha) * (1.0 + x.powf(tau)),
            LogGamma { alpha, beta } => reg_gamma_q(beta, alpha * x.ln()),
            InvGamma { alpha, beta } => reg_gamma_p(alpha, beta / x),
            AbsT { v } => reg_inc_beta(0.5 * v, 0.5, v / (v + x * x)),
            Beta { .. } => self.survival_one_minus(1.0 - x),
            Beta2 { a, b } => reg_inc_beta(b, a, 1.0 / (1.0 + x)),
            ReverseBurr { .. } => self.survival_one_minus(1.0 - x),
            Gamma { alpha, lambda } => reg_gamma_q(alpha, lambda * x),
            AbsNormal => reg_gamma_q(0.5, 0.5 * x * x),
            Weibull { beta, c } => (-c * x.powf(beta)).exp(),
            PerturbedWeibull { .. } => (-self.big_v(x)).exp(),
            BenktanderII { beta, lambda } => {
                ((beta - 1.0) * x.ln() - lambda / beta * (x.powf(beta) - 1.0)).exp()
            }
            Logistic => 2.0 / (1.0 + x.exp()),
            TruncGumbel => -(-(-x).exp()).exp_m1() / TG_NORM,
            FiniteExp { c } => (-c * x / (1.0 - x)).exp(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    /// Survival at x_F − u for families with a finite right endpoint;
    /// keeps full relative accuracy for small u.
    pub fn survival_one_minus(&self, u: f64) -> f64 {
        use Family::*;
        debug_assert!(self.support().1.is_finite());
        if u <= 0.0 {
            return 0.0;
        }
        match self.family {
            Beta { a, b } => reg_inc_beta(b, a, u.min(1.0)),
            ReverseBurr { a, b } => (-a * u.powf(-b).ln_1p()).exp(),
            FiniteExp { c } => {
                if u >= 1.0 {
                    1.0
                } else {
                    (-c * (1.0 - u) / u).exp()
                }
            }
            _ => self.survival(self.support().1 - u),
        }
    }

    /// Density, where the family has one on the interior of its support.
    pub fn density(&self, x: f64) -> f64 {
        use Family::*;
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self.family {
            Pareto { alpha, theta } => {
                alpha / theta * ((alpha + 1.0) * (theta.ln() - (theta + x).ln())).exp()
            }
            Frechet { alpha } => {
                alpha * x.powf(-alpha - 1.0) * (-x.powf(-alpha)).exp()
            }
            Burr { a, b } => {
                a * b * x.powf(b - 1.0) * (-(a + 1.0) * x.powf(b).ln_1p()).exp()
            }
            HallWeiss { alpha, tau } => {
                0.5 * x.powf(-alpha - 1.0) * (alpha + (alpha - tau) * x.powf(tau))
            }
            LogGamma { alpha, beta } => (beta * alpha.ln() - crate::specfun::log_gamma(beta)
                + (beta - 1.0) * x.ln().ln()
                - (alpha + 1.0) * x.ln())
            .exp(),
            InvGamma { alpha, beta } => (alpha * beta.ln() - crate::specfun::log_gamma(alpha)
                - (alpha + 1.0) * x.ln()
                - beta / x)
            .exp(),
            AbsT { v } => (core::f64::consts::LN_2
                + crate::specfun::log_gamma(0.5 * (v + 1.0))
                - crate::specfun::log_gamma(0.5 * v)
                - 0.5 * (v * core::f64::consts::PI).ln()
                - 0.5 * (v + 1.0) * (x * x / v).ln_1p())
            .exp(),
            Beta { a, b } => {
                ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - log_beta(a, b)).exp()
            }
            Beta2 { a, b } => {
                ((a - 1.0) * x.ln() - (a + b) * x.ln_1p() - log_beta(a, b)).exp()
            }
            ReverseBurr { .. } => self.density_one_minus(1.0 - x),
            Gamma { alpha, lambda } => (alpha * lambda.ln() - crate::specfun::log_gamma(alpha)
                + (alpha - 1.0) * x.ln()
                - lambda * x)
            .exp(),
            AbsNormal => (2.0 / core::f64::consts::PI).sqrt() * (-0.5 * x * x).exp(),
            Weibull { beta, c } => c * beta * x.powf(beta - 1.0) * (-c * x.powf(beta)).exp(),
            PerturbedWeibull { beta, alpha, big_c, big_d } => {
                let dv = beta * big_c * x.powf(beta - 1.0)
                    + (beta - alpha) * big_d * x.powf(beta - alpha - 1.0);
                dv * (-self.big_v(x)).exp()
            }
            BenktanderII { beta, lambda } => {
                self.survival(x) * ((1.0 - beta) / x + lambda * x.powf(beta - 1.0))
            }
            Logistic => {
                let e = (-x).exp();
                2.0 * e / ((1.0 + e) * (1.0 + e))
            }
            TruncGumbel => (-x - (-x).exp()).exp() / TG_NORM,
            FiniteExp { c } => {
                if x >= 1.0 {
                    0.0
                } else {
                    (-c * x / (1.0 - x)).exp() * c / ((1.0 - x) * (1.0 - x))
                }
            }
        }
    }

    /// Density at x_F − u, accurate for small u (finite-endpoint families).
    pub fn density_one_minus(&self, u: f64) -> f64 {
        use Family::*;
        debug_assert!(self.support().1.is_finite());
        match self.family {
            Beta { a, b } => {
                ((b - 1.0) * u.ln() + (a - 1.0) * (-u).ln_1p() - log_beta(a, b)).exp()
            }
            ReverseBurr { a, b } => {
                a * b * u.powf(-b - 1.0) * (-(a + 1.0) * u.powf(-b).ln_1p()).exp()
            }
            FiniteExp { c } => (-c * (1.0 - u) / u).exp() * c / (u * u),
            _ => self.density(self.support().1 - u),
        }
    }

    /// Upper quantile: the x with survival(x) = v.
    pub fn quantile_upper(&self, v: f64) -> Result<f64> {
        use Family::*;
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::Domain("quantile level must be in (0,1]"));
        }
        if v == 1.0 {
            return Ok(self.support().0);
        }
        Ok(match self.family {
            Pareto { alpha, theta } => theta * (-v.ln() / alpha).exp_m1(),
            Frechet { alpha } => (-(-v).ln_1p()).powf(-1.0 / alpha),
            Burr { a, b } => (-v.ln() / a).exp_m1().powf(1.0 / b),
            HallWeiss { alpha, tau } => {
                let lo = (2.0 * v).powf(-1.0 / alpha).max(1.0);
                let hi = v.powf(-1.0 / alpha).max(lo * (1.0 + 1e-12));
                let _ = tau;
                root::brent(|x| self.survival(x) - v, lo, hi, 1e-14, 0.0)?
            }
            LogGamma { alpha, beta } => (inv_reg_gamma_q(beta, v)? / alpha).exp(),
            InvGamma { alpha, beta } => beta / inv_reg_gamma_p(alpha, v)?,
            AbsT { v: dof } => {
                let z = inv_reg_inc_beta(0.5 * dof, 0.5, v)?;
                (dof / z - dof).sqrt()
            }
            Beta { a, b } => 1.0 - inv_reg_inc_beta(b, a, v)?,
            Beta2 { a, b } => {
                let u = inv_reg_inc_beta(b, a, v)?;
                (1.0 - u) / u
            }
            ReverseBurr { .. } => 1.0 - self.quantile_upper_one_minus(v)?,
            Gamma { alpha, lambda } => inv_reg_gamma_q(alpha, v)? / lambda,
            AbsNormal => (2.0 * inv_reg_gamma_q(0.5, v)?).sqrt(),
            Weibull { beta, c } => (-v.ln() / c).powf(1.0 / beta),
            PerturbedWeibull { beta, big_c, .. } => {
                let l = -v.ln();
                let hi = (l / big_c).powf(1.0 / beta);
                let mut lo = hi;
                while self.big_v(lo) > l {
                    lo *= 0.5;
                    if lo < 1e-300 {
                        break;
                    }
                }
                root::brent(|x| self.big_v(x) - l, lo, hi, 1e-14, 0.0)?
            }
            BenktanderII { beta, lambda } => {
                let l = -v.ln();
                let hi = (beta * l / lambda + 1.0).powf(1.0 / beta) + 1.0;
                root::brent(|x| self.big_v(x) - l, 1.0, hi, 1e-14, 0.0)?
            }
            Logistic => (2.0 * (1.0 - v) / v).ln_1p(),
            TruncGumbel => -(-(-TG_NORM * v).ln_1p()).ln(),
            FiniteExp { c } => {
                let l = -v.ln();
                l / (c + l)
            }
        })
    }

    /// Quantile at probability p: inf{x : F(x) >= p}.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p >= 0.0 && p < 1.0) {
            return Err(Error::Domain("quantile probability must be in [0,1)"));
        }
        if p == 0.0 {
            return Ok(self.support().0);
        }
        self.quantile_upper(1.0 - p)
    }

    /// x_F − quantile_upper(v), accurate for small v (finite-endpoint
    /// families): the distance from the right endpoint at survival level v.
    pub fn quantile_upper_one_minus(&self, v: f64) -> Result<f64> {
        use Family::*;
        debug_assert!(self.support().1.is_finite());
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::Domain("quantile level must be in (0,1]"));
        }
        Ok(match self.family {
            Beta { a, b } => inv_reg_inc_beta(b, a, v)?,
            ReverseBurr { a, b } => (-v.ln() / a).exp_m1().powf(-1.0 / b),
            FiniteExp { c } => c / (c - v.ln()),
            _ => self.support().1 - self.quantile_upper(v)?,
        })
    }

    /// Cumulative hazard V(x) = −log survival(x), in closed form where the
    /// family admits one.
    pub fn big_v(&self, x: f64) -> f64 {
        use Family::*;
        match self.family {
            Weibull { beta, c } => c * x.powf(beta),
            PerturbedWeibull { beta, alpha, big_c, big_d } => {
                big_c * x.powf(beta) + big_d * x.powf(beta - alpha)
            }
            BenktanderII { beta, lambda } => {
                (1.0 - beta) * x.ln() + lambda / beta * (x.powf(beta) - 1.0)
            }
            Logistic => x + (-x).exp().ln_1p() - core::f64::consts::LN_2,
            FiniteExp { c } => c * x / (1.0 - x),
            _ => -self.survival(x).ln(),
        }
    }

    pub fn frechet_meta(&self) -> Result<FrechetMeta> {
        use Family::*;
        let (alpha1, tau1) = match self.family {
            Pareto { alpha, .. } => (alpha, -1.0),
            Frechet { alpha } => (alpha, -alpha),
            Burr { a, b } => (a * b, -b),
            HallWeiss { alpha, tau } => (alpha, tau),
            LogGamma { alpha, .. } => (alpha, 0.0),
            InvGamma { alpha, .. } => (alpha, -1.0),
            AbsT { v } => (v, -2.0),
            Beta2 { b, .. } => (b, -1.0),
            _ => return Err(Error::Regime("model is not in the Fréchet domain")),
        };
        Ok(FrechetMeta { alpha1, tau1, fam: self.family })
    }

    pub fn gumbel_meta(&self) -> Result<GumbelMeta> {
        use Family::*;
        let rho = match self.family {
            Gamma { .. } | AbsNormal | Weibull { .. } | BenktanderII { .. }
            | FiniteExp { .. } => 0.0,
            Logistic | TruncGumbel => -1.0,
            _ => {
                return Err(Error::Regime(
                    "model has no Gumbel-domain second-order metadata",
                ))
            }
        };
        Ok(GumbelMeta { rho, fam: self.family })
    }

    pub fn weibull_tail_meta(&self) -> Result<WeibullTailMeta> {
        use Family::*;
        let (theta, rho_prime) = match self.family {
            Gamma { .. } => (1.0, -1.0),
            AbsNormal => (0.5, -1.0),
            Weibull { beta, .. } => (1.0 / beta, f64::NEG_INFINITY),
            PerturbedWeibull { beta, alpha, .. } => (1.0 / beta, -alpha / beta),
            BenktanderII { beta, .. } => (1.0 / beta, -1.0),
            Logistic => (1.0, -1.0),
            _ => return Err(Error::Regime("model is not a Weibull tail distribution")),
        };
        Ok(WeibullTailMeta { theta, rho_prime, fam: self.family })
    }

    pub fn weibull_mda_meta(&self) -> Result<WeibullMdaMeta> {
        use Family::*;
        let (alpha1, tau1) = match self.family {
            Beta { b, .. } => (b, -1.0),
            ReverseBurr { a, b } => (a * b, -b),
            _ => return Err(Error::Regime("model is not in the Weibull domain")),
        };
        Ok(WeibullMdaMeta { alpha1, tau1, fam: self.family })
    }

    /// Deflator-side metadata: L(x) = x^{α₂}·Ḡ(1−1/x) slowly varying with
    /// second-order index τ₂ and auxiliary A.
    pub fn deflator_meta(&self) -> Result<DeflatorMeta> {
        use Family::*;
        match self.family {
            Beta { a, b } => Ok(DeflatorMeta { alpha2: b, tau2: -1.0, a_par: a }),
            _ => Err(Error::Regime(
                "deflator metadata requires a regularly varying unit-interval model",
            )),
        }
    }

    /// E{S^p} for models supported inside [0,1].
    pub fn mellin_moment(&self, p: f64) -> Result<f64> {
        use Family::*;
        match self.family {
            Beta { a, b } => {
                if a + p <= 0.0 {
                    return Err(Error::Domain("moment order p must exceed -a"));
                }
                Ok((log_beta(a + p, b) - log_beta(a, b)).exp())
            }
            _ => {
                self.require_unit_support()?;
                let r = quad::integrate(
                    |v| self.quantile_upper(v).unwrap_or(f64::NAN).powf(p),
                    0.0,
                    1.0,
                    1e-11,
                    1e-15,
                )?;
                Ok(r.value)
            }
        }
    }

    /// E{S^p · log(1/S)} for models supported inside [0,1].
    pub fn mellin_log_moment(&self, p: f64) -> Result<f64> {
        use Family::*;
        match self.family {
            Beta { a, b } => {
                if a + p <= 0.0 {
                    return Err(Error::Domain("moment order p must exceed -a"));
                }
                let m = (log_beta(a + p, b) - log_beta(a, b)).exp();
                Ok(m * (digamma(a + b + p) - digamma(a + p)))
            }
            _ => {
                self.require_unit_support()?;
                let r = quad::integrate(
                    |v| {
                        let s = self.quantile_upper(v).unwrap_or(f64::NAN);
                        s.powf(p) * -s.ln()
                    },
                    0.0,
                    1.0,
                    1e-11,
                    1e-15,
                )?;
                Ok(r.value)
            }
        }
    }

    pub(crate) fn require_unit_support(&self) -> Result<()> {
        let (lo, hi) = self.support();
        if lo >= 0.0 && hi <= 1.0 {
            Ok(())
        } else {
            Err(Error::Regime("operation requires support inside [0,1]"))
        }
    }
}

/// Fréchet-domain metadata: survival in 2RV_{−α₁,τ₁} with auxiliary Ã.
#[derive(Debug, Clone, Copy)]
pub struct FrechetMeta {
    pub alpha1: f64,
    pub tau1: f64,
    fam: Family,
}

impl FrechetMeta {
    /// Auxiliary function Ã(t) of the survival ratio expansion.
    pub fn a_tilde(&self, t: f64) -> f64 {
        use Family::*;
        match self.fam {
            Pareto { alpha, theta } => alpha * theta / t,
            Frechet { alpha } => 0.5 * alpha * t.powf(-alpha),
            Burr { a, b } => a * b * t.powf(-b),
            HallWeiss { tau, .. } => tau * t.powf(tau),
            LogGamma { beta, .. } => (beta - 1.0) / t.ln(),
            InvGamma { alpha, beta } => alpha * beta / ((alpha + 1.0) * t),
            AbsT { v } => v * v * (v + 1.0) / ((v + 2.0) * t * t),
            Beta2 { a, b } => b * (a + b) / ((b + 1.0) * t),
            _ => unreachable!("constructed only for Fréchet families"),
        }
    }
}

/// Gumbel-domain metadata: tail quantile U in 2ERV_{0,ρ} with auxiliary
/// functions a (scale) and Ã (second order), both closed in log t.
#[derive(Debug, Clone, Copy)]
pub struct GumbelMeta {
    pub rho: f64,
    fam: Family,
}

impl GumbelMeta {
    /// Scale auxiliary a(t), written as a function of L = log t.
    /// Families without a printed closed form return None.
    pub fn a_of_logt(&self, l: f64) -> Option<f64> {
        use Family::*;
        match self.fam {
            Gamma { alpha, lambda } => Some((1.0 + (alpha - 1.0) / l) / lambda),
            AbsNormal => {
                let m = l + core::f64::consts::LN_2;
                let s = (2.0 * m).sqrt();
                let u1 = s - (4.0 * core::f64::consts::PI * m).ln() / (2.0 * s);
                Some(u1 / (2.0 * m))
            }
            Weibull { beta, c } => Some(l.powf(1.0 / beta - 1.0) / (beta * c.powf(1.0 / beta))),
            Logistic | TruncGumbel => Some(1.0),
            FiniteExp { c } => Some(c / ((c + l) * (c + l))),
            BenktanderII { .. } => None,
            _ => unreachable!("constructed only for Gumbel families"),
        }
    }

    /// Second-order auxiliary Ã(t) as a function of L = log t.
    pub fn a_tilde_of_logt(&self, l: f64) -> f64 {
        use Family::*;
        match self.fam {
            Gamma { alpha, .. } => (1.0 - alpha) / (l * l),
            AbsNormal => -0.5 / l,
            Weibull { beta, .. } => (1.0 / beta - 1.0) / l,
            Logistic => 0.5 * (-l).exp(),
            TruncGumbel => 0.5 * TG_NORM * (-l).exp(),
            FiniteExp { c } => -2.0 / (c + l),
            BenktanderII { beta, .. } => (1.0 / beta - 1.0) / l,
            _ => unreachable!("constructed only for Gumbel families"),
        }
    }

    /// Reciprocal mean-excess scaling w(x) = 1/a(1/F̄(x)), with v = V(x).
    /// Falls back to the Weibull-tail form V/(x(θ + b(V))) when no closed
    /// a is printed for the family.
    pub fn w(&self, x: f64, v: f64) -> f64 {
        if let Some(a) = self.a_of_logt(v) {
            1.0 / a
        } else {
            let model = TailModel { family: self.fam };
            let wt = model
                .weibull_tail_meta()
                .expect("families without closed a carry Weibull-tail data");
            v / (x * (wt.theta + wt.b(v)))
        }
    }
}

/// Weibull-tail metadata: V^← (L) = L^θ ℓ(L), ℓ in 2RV_{0,ρ'} with
/// auxiliary b.
#[derive(Debug, Clone, Copy)]
pub struct WeibullTailMeta {
    pub theta: f64,
    pub rho_prime: f64,
    fam: Family,
}

impl WeibullTailMeta {
    /// Auxiliary b(L); L is the cumulative-hazard level.
    pub fn b(&self, l: f64) -> f64 {
        use Family::*;
        match self.fam {
            Gamma { alpha, .. } => (1.0 - alpha) * l.ln() / l,
            AbsNormal => l.ln() / (4.0 * l),
            Weibull { .. } => 0.0,
            PerturbedWeibull { beta, alpha, big_c, big_d } => {
                alpha * big_d / (beta * beta) * big_c.powf(alpha / beta - 1.0)
                    * l.powf(-alpha / beta)
            }
            BenktanderII { beta, lambda } => {
                let _ = lambda;
                (1.0 - beta) * l.ln() / (beta * beta * l)
            }
            Logistic => -core::f64::consts::LN_2 / l,
            _ => unreachable!("constructed only for Weibull tail families"),
        }
    }
}

/// Weibull-domain metadata for a risk with x_F = 1: 1−U in
/// 2RV_{−1/α₁, τ₁/α₁} with quantile-side auxiliary Ã.
#[derive(Debug, Clone, Copy)]
pub struct WeibullMdaMeta {
    pub alpha1: f64,
    pub tau1: f64,
    fam: Family,
}

impl WeibullMdaMeta {
    /// Quantile-side auxiliary Ã(t).
    pub fn a_tilde_u(&self, t: f64) -> f64 {
        use Family::*;
        match self.fam {
            Beta { a, b } => {
                let scale = ((b.ln() + log_beta(a, b)) / b).exp();
                -(a - 1.0) / (b * (b + 1.0)) * scale * t.powf(-1.0 / b)
            }
            ReverseBurr { a, b } => -t.powf(-1.0 / a) / (a * b),
            _ => unreachable!("constructed only for Weibull-domain families"),
        }
    }
}

/// Deflator metadata: L(x) = x^{α₂} Ḡ(1−1/x) in 2RV_{0,τ₂} with
/// auxiliary A.
#[derive(Debug, Clone, Copy)]
pub struct DeflatorMeta {
    pub alpha2: f64,
    pub tau2: f64,
    a_par: f64,
}

impl DeflatorMeta {
    /// Auxiliary A(t) of the slowly varying part.
    pub fn a(&self, t: f64) -> f64 {
        let (a, b) = (self.a_par, self.alpha2);
        b * (a - 1.0) / ((b + 1.0) * t)
    }
}

fn validate(family: Family) -> Result<()> {
    use Family::*;
    let bad = |family, msg| Err(Error::BadParam { family, msg });
    match family {
        Pareto { alpha, theta } => {
            if !(alpha > 0.0 && theta > 0.0) {
                return bad("pareto", "alpha and theta must be positive");
            }
        }
        Frechet { alpha } => {
            if !(alpha > 0.0) {
                return bad("frechet", "alpha must be positive");
            }
        }
        Burr { a, b } => {
            if !(a > 0.0 && b > 0.0) {
                return bad("burr", "a and b must be positive");
            }
        }
        HallWeiss { alpha, tau } => {
            if !(alpha > 0.0) {
                return bad("hallweiss", "alpha must be positive");
            }
            if !(tau < 0.0) {
                return bad("hallweiss", "tau must be negative");
            }
        }
        LogGamma { alpha, beta } => {
            if !(alpha > 0.0 && beta > 0.0) {
                return bad("loggamma", "alpha and beta must be positive");
            }
        }
        InvGamma { alpha, beta } => {
            if !(alpha > 0.0 && beta > 0.0) {
                return bad("invgamma", "alpha and beta must be positive");
            }
        }
        AbsT { v } => {
            if !(v > 0.0) {
                return bad("abst", "v must be positive");
            }
        }
        Beta { a, b } | Beta2 { a, b } => {
            if !(a > 0.0 && b > 0.0) {
                return bad("beta", "a and b must be positive");
            }
        }
        ReverseBurr { a, b } => {
            if !(a > 0.0 && b > 0.0) {
                return bad("revburr", "a and b must be positive");
            }
        }
        Gamma { alpha, lambda } => {
            if !(alpha > 0.0 && lambda > 0.0) {
                return bad("gamma", "alpha and lambda must be positive");
            }
        }
        AbsNormal | Logistic | TruncGumbel => {}
        Weibull { beta, c } => {
            if !(beta > 0.0 && c > 0.0) {
                return bad("weibull", "beta and c must be positive");
            }
        }
        PerturbedWeibull { beta, alpha, big_c, big_d } => {
            if !(beta > 0.0 && alpha > 0.0 && big_c > 0.0) {
                return bad("pweibull", "beta, alpha and c must be positive");
            }
            if !(big_d >= 0.0) {
                return bad("pweibull", "d must be nonnegative");
            }
            if !(beta > alpha) {
                return bad("pweibull", "beta must exceed alpha");
            }
        }
        BenktanderII { beta, lambda } => {
            if !(beta > 0.0 && beta < 1.0) {
                return bad("benktander2", "beta must lie in (0,1)");
            }
            if !(lambda > 0.0) {
                return bad("benktander2", "lambda must be positive");
            }
        }
        FiniteExp { c } => {
            if !(c > 0.0) {
                return bad("e1c", "c must be positive");
            }
        }
    }
    Ok(())
}

/// Catalog listing: (id, parameter names).
pub fn catalog() -> &'static [(&'static str, &'static str)] {
    &[
        ("pareto", "alpha,theta"),
        ("frechet", "alpha"),
        ("burr", "a,b"),
        ("hallweiss", "alpha,tau"),
        ("loggamma", "alpha,beta"),
        ("invgamma", "alpha,beta"),
        ("abst", "v"),
        ("beta", "a,b"),
        ("beta2", "a,b"),
        ("revburr", "a,b"),
        ("gamma", "alpha,lambda"),
        ("absnormal", ""),
        ("weibull", "beta,c"),
        ("pweibull", "beta,alpha,c,d"),
        ("benktander2", "beta,lambda"),
        ("logistic", ""),
        ("truncgumbel", ""),
        ("e1c", "c"),
    ]
}

/// Parse a model specification string `family:key=value,...`
/// (case-insensitive; hyphens and underscores in the family id ignored).
pub fn parse_spec(text: &str) -> Result<TailModel> {
    let text = text.trim();
    let (name_raw, params_raw) = match text.split_once(':') {
        Some((n, p)) => (n, p),
        None => (text, ""),
    };
    let mut name = String::new();
    for ch in name_raw.chars() {
        let ch = ch.to_ascii_lowercase();
        if ch != '-' && ch != '_' {
            name.push(ch);
        }
    }
    let mut pairs: Vec<(String, f64)> = Vec::new();
    for item in params_raw.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (k, v) = item
            .split_once('=')
            .ok_or(Error::Domain("model parameters must be key=value pairs"))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Domain("model parameter value is not a number"))?;
        pairs.push((k.trim().to_ascii_lowercase(), value));
    }
    let get = |key: &str| -> Result<f64> {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
            .ok_or(Error::Domain("missing model parameter"))
    };
    use Family::*;
    let family = match name.as_str() {
        "pareto" => Pareto { alpha: get("alpha")?, theta: get("theta")? },
        "frechet" => Frechet { alpha: get("alpha")? },
        "burr" => Burr { a: get("a")?, b: get("b")? },
        "hallweiss" => HallWeiss { alpha: get("alpha")?, tau: get("tau")? },
        "loggamma" => LogGamma { alpha: get("alpha")?, beta: get("beta")? },
        "invgamma" | "inversegamma" => InvGamma { alpha: get("alpha")?, beta: get("beta")? },
        "abst" | "absolutet" => AbsT { v: get("v")? },
        "beta" => Beta { a: get("a")?, b: get("b")? },
        "beta2" | "betaprime" => Beta2 { a: get("a")?, b: get("b")? },
        "revburr" | "reverseburr" => ReverseBurr { a: get("a")?, b: get("b")? },
        "gamma" => Gamma { alpha: get("alpha")?, lambda: get("lambda")? },
        "absnormal" | "absolutenormal" => AbsNormal,
        "weibull" => Weibull { beta: get("beta")?, c: get("c")? },
        "pweibull" | "perturbedweibull" => PerturbedWeibull {
            beta: get("beta")?,
            alpha: get("alpha")?,
            big_c: get("c")?,
            big_d: get("d")?,
        },
        "benktander2" | "benktanderii" => {
            BenktanderII { beta: get("beta")?, lambda: get("lambda")? }
        }
        "logistic" => Logistic,
        "truncgumbel" | "truncatedgumbel" | "truncgumbelunit" => TruncGumbel,
        "e1c" => FiniteExp { c: get("c")? },
        _ => return Err(Error::UnknownFamily(name)),
    };
    TailModel::new(family)
}

/// Normalized specification string; `parse_spec ∘ spec_string` is the
/// identity on valid models.
pub fn spec_string(model: &TailModel) -> String {
    use Family::*;
    match model.family {
        Pareto { alpha, theta } => format!("pareto:alpha={alpha},theta={theta}"),
        Frechet { alpha } => format!("frechet:alpha={alpha}"),
        Burr { a, b } => format!("burr:a={a},b={b}"),
        HallWeiss { alpha, tau } => format!("hallweiss:alpha={alpha},tau={tau}"),
        LogGamma { alpha, beta } => format!("loggamma:alpha={alpha},beta={beta}"),
        InvGamma { alpha, beta } => format!("invgamma:alpha={alpha},beta={beta}"),
        AbsT { v } => format!("abst:v={v}"),
        Beta { a, b } => format!("beta:a={a},b={b}"),
        Beta2 { a, b } => format!("beta2:a={a},b={b}"),
        ReverseBurr { a, b } => format!("revburr:a={a},b={b}"),
        Gamma { alpha, lambda } => format!("gamma:alpha={alpha},lambda={lambda}"),
        AbsNormal => "absnormal".to_string(),
        Weibull { beta, c } => format!("weibull:beta={beta},c={c}"),
        PerturbedWeibull { beta, alpha, big_c, big_d } => {
            format!("pweibull:beta={beta},alpha={alpha},c={big_c},d={big_d}")
        }
        BenktanderII { beta, lambda } => format!("benktander2:beta={beta},lambda={lambda}"),
        Logistic => "logistic".to_string(),
        TruncGumbel => "truncgumbel".to_string(),
        FiniteExp { c } => format!("e1c:c={c}"),
    }
}

/// All catalog families instantiated with representative parameters;
/// used by the metadata convergence checks.
pub fn reference_models() -> Vec<TailModel> {
    use Family::*;
    [
        Pareto { alpha: 2.0, theta: 1.0 },
        Frechet { alpha: 2.0 },
        Burr { a: 1.5, b: 2.0 },
        HallWeiss { alpha: 2.0, tau: -0.5 },
        LogGamma { alpha: 2.0, beta: 2.5 },
        InvGamma { alpha: 2.0, beta: 1.5 },
        AbsT { v: 3.0 },
        Beta { a: 2.0, b: 1.5 },
        Beta2 { a: 2.0, b: 2.0 },
        ReverseBurr { a: 1.5, b: 2.0 },
        Gamma { alpha: 2.0, lambda: 1.0 },
        AbsNormal,
        Weibull { beta: 0.5, c: 1.0 },
        PerturbedWeibull { beta: 0.75, alpha: 0.5, big_c: 1.0, big_d: 0.5 },
        BenktanderII { beta: 0.5, lambda: 1.0 },
        Logistic,
        TruncGumbel,
        FiniteExp { c: 1.0 },
    ]
    .into_iter()
    .map(|f| TailModel::new(f).expect("reference parameters are valid"))
    .collect()
}

/// Measured second-order residual of a Fréchet-domain survival ratio at
/// scale t and point x: the relative gap between
/// (F̄(tx)/F̄(t) − x^{−α})/Ã(t) and its limit x^{−α}(x^τ−1)/τ (log for τ=0).
pub fn rv2_residual(model: &TailModel, x: f64, t: f64) -> Result<f64> {
    let meta = model.frechet_meta()?;
    let ratio = model.survival(t * x) / model.survival(t);
    let h = (ratio - x.powf(-meta.alpha1)) / meta.a_tilde(t);
    let limit = if meta.tau1 < 0.0 {
        x.powf(-meta.alpha1) * (x.powf(meta.tau1) - 1.0) / meta.tau1
    } else {
        x.powf(-meta.alpha1) * x.ln()
    };
    Ok((h / limit - 1.0).abs())
}

/// Measured second-order residual of a Gumbel-domain tail quantile at
/// scale t and point x: the gap between the symmetric second difference
/// (U(tx) − 2U(t) + U(t/x)) / (a(t)·Ã(t)) and ψ(x) + ψ(1/x), where
/// ψ(x) = (x^ρ−1)/ρ (log²x/2 for ρ=0). The symmetric form cancels every
/// contribution linear in log x, so it needs a(t) only to first order.
pub fn erv2_residual(model: &TailModel, x: f64, t: f64) -> Result<f64> {
    let meta = model.gumbel_meta()?;
    let l = t.ln();
    let a = meta
        .a_of_logt(l)
        .ok_or(Error::Unsupported("family has no closed-form scale auxiliary"))?;
    let u_t = model.quantile_upper(1.0 / t)?;
    let u_up = model.quantile_upper(1.0 / (t * x))?;
    let u_dn = model.quantile_upper(x / t)?;
    let h = (u_up - 2.0 * u_t + u_dn) / (a * meta.a_tilde_of_logt(l));
    let limit = if meta.rho < 0.0 {
        (x.powf(meta.rho) + x.powf(-meta.rho) - 2.0) / meta.rho
    } else {
        x.ln() * x.ln()
    };
    Ok((h / limit - 1.0).abs())
}

/// Measured second-order residual of a Weibull-tail slowly varying part:
/// the gap between (ℓ(Ls)/ℓ(L) − 1)/b(L) and (s^{ρ'}−1)/ρ'. For families
/// with b ≡ 0 the raw ratio gap |ℓ(Ls)/ℓ(L) − 1| is returned.
pub fn wt_residual(model: &TailModel, s: f64, l: f64) -> Result<f64> {
    let meta = model.weibull_tail_meta()?;
    let ell = |ll: f64| -> Result<f64> {
        let x = model.quantile_upper((-ll).exp())?;
        Ok(x / ll.powf(meta.theta))
    };
    let ratio = ell(l * s)? / ell(l)?;
    let b = meta.b(l);
    if b == 0.0 {
        return Ok((ratio - 1.0).abs());
    }
    let limit = if meta.rho_prime.is_finite() && meta.rho_prime < 0.0 {
        (s.powf(meta.rho_prime) - 1.0) / meta.rho_prime
    } else {
        s.ln()
    };
    Ok(((ratio - 1.0) / b / limit - 1.0).abs())
}

/// Measured second-order residual of a Weibull-domain (x_F=1) tail
/// quantile: the gap between ((1−U(tx))/(1−U(t)) − x^{−1/α₁})/Ã(t) and
/// x^{−1/α₁}(x^{τ₁/α₁}−1)/(τ₁/α₁).
pub fn weibull_mda_residual(model: &TailModel, x: f64, t: f64) -> Result<f64> {
    let meta = model.weibull_mda_meta()?;
    let one_minus_u_t = model.quantile_upper_one_minus(1.0 / t)?;
    let one_minus_u_tx = model.quantile_upper_one_minus(1.0 / (t * x))?;
    let idx = -1.0 / meta.alpha1;
    let tau_u = meta.tau1 / meta.alpha1;
    let h = (one_minus_u_tx / one_minus_u_t - x.powf(idx)) / meta.a_tilde_u(t);
    let limit = x.powf(idx) * (x.powf(tau_u) - 1.0) / tau_u;
    Ok((h / limit - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_quantile_round_trip() {
        for m in reference_models() {
            for &v in &[0.9f64, 0.5, 0.1, 1e-3, 1e-6] {
                let x = m.quantile_upper(v).unwrap();
                let s = m.survival(x);
                assert!(
                    (s - v).abs() <= 2e-8 * v,
                    "{:?}: v={v} x={x} s={s}",
                    m.family()
                );
            }
        }
    }

    #[test]
    fn one_minus_forms_round_trip_deep() {
        for m in reference_models() {
            if !m.support().1.is_finite() {
                continue;
            }
            for &v in &[1e-3f64, 1e-8, 1e-12] {
                let u = m.quantile_upper_one_minus(v).unwrap();
                let s = m.survival_one_minus(u);
                assert!(
                    (s - v).abs() <= 1e-11 * v,
                    "{:?}: v={v} u={u} s={s}",
                    m.family()
                );
            }
        }
    }

    #[test]
    fn survival_monotone() {
        for m in reference_models() {
            let mut prev = f64::INFINITY;
            for &v in &[0.95f64, 0.7, 0.4, 0.2, 0.05, 1e-2, 1e-4, 1e-7] {
                let x = m.quantile_upper(v).unwrap();
                let s = m.survival(x);
                assert!(s < prev, "{:?} at v={v}", m.family());
                prev = s;
            }
        }
    }

    #[test]
    fn density_integrates_against_survival() {
        // -d/dx survival = density, checked by a symmetric difference.
        for m in reference_models() {
            let x = match m.family() {
                Family::HallWeiss { .. } | Family::LogGamma { .. }
                | Family::BenktanderII { .. } => 1.7,
                Family::Beta { .. } | Family::FiniteExp { .. } => 0.4,
                Family::ReverseBurr { .. } => 0.3,
                _ => 1.3,
            };
            let h = 1e-5 * x;
            let num = (m.survival(x - h) - m.survival(x + h)) / (2.0 * h);
            let den = m.density(x);
            assert!(
                (num - den).abs() <= 1e-7 * den.abs().max(1e-12),
                "{:?}: numeric {num} analytic {den}",
                m.family()
            );
        }
    }

    #[test]
    fn big_v_matches_closed_forms() {
        use Family::*;
        for m in reference_models() {
            let x = match m.family() {
                BenktanderII { .. } => 4.0,
                FiniteExp { .. } => 0.7,
                Beta { .. } => 0.5,
                ReverseBurr { .. } => 0.5,
                _ => 3.0,
            };
            let direct = -m.survival(x).ln();
            let v = m.big_v(x);
            assert!(
                (v - direct).abs() <= 1e-10 * direct.abs().max(1e-12),
                "{:?}: big_v {v} vs -ln survival {direct}",
                m.family()
            );
        }
    }

    #[test]
    fn beta_mellin_closed_forms() {
        let s = TailModel::new(Family::Beta { a: 1.0, b: 2.0 }).unwrap();
        assert!((s.mellin_moment(2.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((s.mellin_moment(3.0).unwrap() - 1.0 / 10.0).abs() < 1e-14);
        let s23 = TailModel::new(Family::Beta { a: 2.0, b: 3.0 }).unwrap();
        // E{S log(1/S)} = (2/5)(1/3 + 1/4 + 1/5)
        let want = 0.4 * (47.0 / 60.0);
        assert!((s23.mellin_log_moment(1.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn mellin_quadrature_path_matches_density_integral() {
        let s = TailModel::new(Family::FiniteExp { c: 2.0 }).unwrap();
        let m2 = s.mellin_moment(2.0).unwrap();
        let direct = crate::quad::integrate(
            |x| x * x * s.density(x),
            0.0,
            1.0,
            1e-11,
            1e-15,
        )
        .unwrap()
        .value;
        assert!((m2 - direct).abs() < 1e-9 * direct);
        let ml = s.mellin_log_moment(1.0).unwrap();
        let direct_l = crate::quad::integrate(
            |x| x * (-x.ln()) * s.density(x),
            0.0,
            1.0,
            1e-11,
            1e-15,
        )
        .unwrap()
        .value;
        assert!((ml - direct_l).abs() < 1e-9 * direct_l);
    }

    #[test]
    fn spec_strings_round_trip() {
        for m in reference_models() {
            let s = spec_string(&m);
            let back = parse_spec(&s).unwrap();
            assert_eq!(m, back, "spec {s}");
        }
    }

    #[test]
    fn parse_accepts_aliases_and_case() {
        let a = parse_spec("Beta:a=1,b=2").unwrap();
        let b = parse_spec("beta: a = 1, b = 2").unwrap();
        assert_eq!(a, b);
        assert!(parse_spec("truncated-gumbel").is_ok());
        assert!(parse_spec("TruncGumbelUnit").is_ok());
        assert!(parse_spec("reverse_burr:a=1,b=2").is_ok());
        assert!(parse_spec("PerturbedWeibull:beta=0.75,alpha=0.5,c=1,d=0.5").is_ok());
        match parse_spec("nosuchfamily:x=1") {
            Err(Error::UnknownFamily(name)) => assert_eq!(name, "nosuchfamily"),
            other => panic!("expected unknown family, got {other:?}"),
        }
        assert!(parse_spec("pareto:alpha=2").is_err()); // theta missing
        assert!(parse_spec("pareto:alpha=-1,theta=1").is_err());
    }

    #[test]
    fn gumbel_w_closed_forms() {
        let g = TailModel::new(Family::Gamma { alpha: 2.0, lambda: 3.0 }).unwrap();
        let meta = g.gumbel_meta().unwrap();
        let v = 7.0;
        assert!((meta.w(0.0, v) - 3.0 * v / (v + 1.0)).abs() < 1e-14);
        let e = TailModel::new(Family::FiniteExp { c: 2.0 }).unwrap();
        let em = e.gumbel_meta().unwrap();
        let x: f64 = 0.75;
        let vv = e.big_v(x);
        let w = em.w(x, vv);
        assert!((w - 2.0 / ((1.0 - x) * (1.0 - x))).abs() < 1e-12 * w);
    }

    #[test]
    fn benktander_w_uses_hazard_ratio() {
        let m = TailModel::new(Family::BenktanderII { beta: 0.5, lambda: 1.0 }).unwrap();
        let meta = m.gumbel_meta().unwrap();
        let x = 9.0;
        let v = m.big_v(x);
        let wt = m.weibull_tail_meta().unwrap();
        let want = v / (x * (wt.theta + wt.b(v)));
        assert!((meta.w(x, v) - want).abs() < 1e-14 * want);
    }

    #[test]
    fn deflator_metadata_beta() {
        let s = TailModel::new(Family::Beta { a: 2.0, b: 1.5 }).unwrap();
        let d = s.deflator_meta().unwrap();
        assert_eq!(d.alpha2, 1.5);
        assert_eq!(d.tau2, -1.0);
        assert!((d.a(10.0) - 1.5 * 1.0 / (2.5 * 10.0)).abs() < 1e-15);
        let r = TailModel::new(Family::Pareto { alpha: 2.0, theta: 1.0 }).unwrap();
        assert!(r.deflator_meta().is_err());
    }

    #[test]
    fn residual_checks_shrink_for_sample_families() {
        let burr = TailModel::new(Family::Burr { a: 1.5, b: 2.0 }).unwrap();
        let r1 = rv2_residual(&burr, 2.0, 1e2).unwrap();
        let r2 = rv2_residual(&burr, 2.0, 1e3).unwrap();
        assert!(r2 < r1 && r2 < 1e-3, "burr residuals {r1} {r2}");

        let gamma = TailModel::new(Family::Gamma { alpha: 2.0, lambda: 1.0 }).unwrap();
        let e1 = erv2_residual(&gamma, 2.0, 1e4).unwrap();
        let e2 = erv2_residual(&gamma, 2.0, 1e8).unwrap();
        assert!(e2 < e1, "gamma erv2 residuals {e1} {e2}");

        let w1 = wt_residual(&gamma, 2.0, 10.0).unwrap();
        let w2 = wt_residual(&gamma, 2.0, 100.0).unwrap();
        assert!(w2 < w1, "gamma wt residuals {w1} {w2}");

        let beta = TailModel::new(Family::Beta { a: 2.0, b: 1.5 }).unwrap();
        let m1 = weibull_mda_residual(&beta, 2.0, 1e3).unwrap();
        let m2 = weibull_mda_residual(&beta, 2.0, 1e5).unwrap();
        assert!(m2 < m1, "beta mda residuals {m1} {m2}");
    }

    #[test]
    fn mda_classification() {
        use Family::*;
        let frechet = [
            Pareto { alpha: 2.0, theta: 1.0 },
            Frechet { alpha: 2.0 },
            Burr { a: 1.0, b: 2.0 },
            HallWeiss { alpha: 2.0, tau: -1.0 },
            LogGamma { alpha: 2.0, beta: 2.0 },
            InvGamma { alpha: 2.0, beta: 1.0 },
            AbsT { v: 3.0 },
            Beta2 { a: 1.0, b: 2.0 },
        ];
        for f in frechet {
            assert_eq!(TailModel::new(f).unwrap().mda(), Mda::Frechet);
        }
        assert_eq!(
            TailModel::new(Beta { a: 1.0, b: 2.0 }).unwrap().mda(),
            Mda::Weibull
        );
        assert_eq!(TailModel::new(Logistic).unwrap().mda(), Mda::Gumbel);
    }
}
