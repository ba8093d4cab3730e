//! First- and second-order approximations of the deflated tail
//! P(R·S > x) in all three max-domains of attraction, plus the Gumbel
//! shift ratio and the Weibull-tail closure of the product.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::collections::BTreeMap;

use crate::dist::{Mda, TailModel};
use crate::error::{Error, Result};
use crate::specfun::{beta, digamma, gamma};

/// A second-order tail approximation at a point.
///
/// `second_order = leading * (1 + correction)` always holds; `terms` maps
/// the named contributions whose plain sum equals `correction`; `extras`
/// carries auxiliary values (scale functions, propagated second-order
/// auxiliaries, closure data) that are not summands of the correction.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub x: f64,
    pub leading: f64,
    pub correction: f64,
    pub second_order: f64,
    pub regime: Mda,
    pub terms: BTreeMap<&'static str, f64>,
    pub extras: BTreeMap<&'static str, f64>,
}

impl Expansion {
    pub(crate) fn assemble(
        x: f64,
        leading: f64,
        regime: Mda,
        terms: BTreeMap<&'static str, f64>,
        extras: BTreeMap<&'static str, f64>,
    ) -> Expansion {
        let correction: f64 = terms.values().sum();
        Expansion {
            x,
            leading,
            correction,
            second_order: leading * (1.0 + correction),
            regime,
            terms,
            extras,
        }
    }
}

/// Coefficient K(α₂, ρ) of the Gumbel-domain risk second-order term.
pub fn k_coefficient(alpha2: f64, rho: f64) -> Result<f64> {
    if !(alpha2 > 0.0) {
        return Err(Error::Domain("alpha2 must be positive"));
    }
    if !(rho <= 0.0) {
        return Err(Error::Domain("rho must be nonpositive"));
    }
    if rho == 0.0 {
        Ok(0.5 * alpha2 * gamma(alpha2 + 2.0))
    } else {
        // ((1-rho)^{-alpha2} - 1)/rho, kept stable for rho near 0.
        Ok((-alpha2 * (-rho).ln_1p()).exp_m1() / rho * gamma(alpha2 + 1.0))
    }
}

/// Tail-scale function η(x) = x·w(x), where w is the reciprocal mean
/// excess of the risk. For models carrying Weibull-tail metadata the
/// hazard shortcut V(x)/(θ + b(V(x))) is used.
pub fn eta(model_r: &TailModel, x: f64) -> Result<f64> {
    if model_r.mda() != Mda::Gumbel {
        return Err(Error::Regime("eta requires a Gumbel-domain model"));
    }
    let v = model_r.big_v(x);
    if let Ok(wt) = model_r.weibull_tail_meta() {
        Ok(v / (wt.theta + wt.b(v)))
    } else {
        let meta = model_r.gumbel_meta()?;
        Ok(x * meta.w(x, v))
    }
}

/// Fréchet-domain expansion of P(R·S > x).
///
/// leading = E{S^{α₁}}·F̄(x); the correction is the deflation-induced
/// second-order term, and the propagated auxiliary A*(x) of the product
/// tail is exposed in `extras`.
pub fn frechet_expand(model_r: &TailModel, model_s: &TailModel, x: f64) -> Result<Expansion> {
    let meta = model_r.frechet_meta()?;
    let (slo, shi) = model_s.support();
    if !(slo >= 0.0 && shi <= 1.0) {
        return Err(Error::Regime("deflator support must lie inside [0,1]"));
    }
    let a1 = meta.alpha1;
    let t1 = meta.tau1;
    let m_a = model_s.mellin_moment(a1)?;
    let at = meta.a_tilde(x);
    let (corr, ratio_shift) = if t1 < 0.0 {
        let m_shift = model_s.mellin_moment(a1 - t1)?;
        ((m_shift / m_a - 1.0) / t1 * at, m_shift / m_a)
    } else {
        let m_log = model_s.mellin_log_moment(a1)?;
        (m_log / m_a * at, 1.0)
    };
    let leading = m_a * model_r.survival(x);
    let mut terms = BTreeMap::new();
    terms.insert("Atilde", corr);
    let mut extras = BTreeMap::new();
    extras.insert("A_star", ratio_shift * at);
    extras.insert("moment_alpha1", m_a);
    Ok(Expansion::assemble(x, leading, Mda::Frechet, terms, extras))
}

/// Gumbel-domain expansion of P(R·S > x).
///
/// leading = F̄(x)·Ḡ(1−1/η(x))·Γ(α₂+1); the correction is reported
/// relative to Γ(α₂+1) so that second_order = leading·(1+correction);
/// multiply the relative terms by extras["gamma_factor"] for the
/// additive form.
pub fn gumbel_expand(model_r: &TailModel, model_s: &TailModel, x: f64) -> Result<Expansion> {
    let meta = model_r.gumbel_meta()?;
    let defl = model_s.deflator_meta()?;
    if defl.tau2 >= 0.0 {
        return Err(Error::Unsupported(
            "deflator with nonnegative second-order index",
        ));
    }
    let a2 = defl.alpha2;
    let t2 = defl.tau2;
    let v = model_r.big_v(x);
    let w = meta.w(x, v);
    let eta_x = x * w;
    if !(eta_x > 0.0) {
        return Err(Error::Guard(
            "evaluation point below the asymptotic regime of the expansion",
        ));
    }
    let gm = gamma(a2 + 1.0);
    let fbar = model_r.survival(x);
    let gbar = model_s.survival_one_minus(1.0 / eta_x);
    let leading = fbar * gbar * gm;
    let k = k_coefficient(a2, meta.rho)?;
    let add_a = (gamma(a2 - t2 + 1.0) - gm) / t2 * defl.a(eta_x);
    let add_eta = -a2 * gamma(a2 + 2.0) / eta_x;
    let add_k = k * meta.a_tilde_of_logt(v);
    let mut terms = BTreeMap::new();
    terms.insert("A(eta)", add_a / gm);
    terms.insert("1/eta", add_eta / gm);
    terms.insert("Atilde", add_k / gm);
    let mut extras = BTreeMap::new();
    extras.insert("eta", eta_x);
    extras.insert("w", w);
    extras.insert("gamma_factor", gm);
    extras.insert("K", k);
    Ok(Expansion::assemble(x, leading, Mda::Gumbel, terms, extras))
}

/// Second-order auxiliaries (ă, Ă) of the product's tail quantile, both
/// evaluated at the scale where the product quantile equals `u_x`.
/// The product is 2ERV with ρ = 0 regardless of the risk's ρ.
pub fn product_shift_aux(
    model_r: &TailModel,
    model_s: &TailModel,
    u_x: f64,
) -> Result<(f64, f64)> {
    let meta = model_r.gumbel_meta()?;
    let defl = model_s.deflator_meta()?;
    let a2 = defl.alpha2;
    let v = model_r.big_v(u_x);
    let a_tilde = meta.a_tilde_of_logt(v);
    let a_small = 1.0 / meta.w(u_x, v);
    let a_breve = a_small * (1.0 - a2 * a_small / u_x + a2 * a_tilde);
    let big_a_breve = -a2 * a2 * a_small * a_small / (u_x * u_x) + a_tilde;
    Ok((a_breve, big_a_breve))
}

/// Ratio H̄(x + z/w(x)) / (e^{−z}·H̄(x)) of the deflated tail under a
/// mean-excess-scaled shift, to second order. leading = 1; the
/// correction collects the two shift terms; extras expose the product's
/// own 2ERV auxiliaries ă, Ă at the scale anchored to x.
pub fn gumbel_shift_ratio(
    model_r: &TailModel,
    model_s: &TailModel,
    x: f64,
    z: f64,
) -> Result<Expansion> {
    let meta = model_r.gumbel_meta()?;
    let defl = model_s.deflator_meta()?;
    if defl.tau2 >= 0.0 {
        return Err(Error::Unsupported(
            "deflator with nonnegative second-order index",
        ));
    }
    let a2 = defl.alpha2;
    let rho = meta.rho;
    let v = model_r.big_v(x);
    let w = meta.w(x, v);
    let eta_x = x * w;
    if !(eta_x > 0.0) {
        return Err(Error::Guard(
            "evaluation point below the asymptotic regime of the expansion",
        ));
    }
    let a_tilde = meta.a_tilde_of_logt(v);
    // psi(e^{-z}) for the 2ERV limit: ((e^{-z})^rho - 1)/rho, log^2/2 at rho=0.
    let (psi, growth) = if rho == 0.0 {
        (0.5 * z * z, z)
    } else {
        ((-rho * z).exp_m1() / rho, (rho * z).exp_m1() / rho)
    };
    let t_shift = (psi + a2 * growth) * a_tilde;
    let t_eta = -a2 * z / eta_x;
    let mut terms = BTreeMap::new();
    terms.insert("psi_Atilde", t_shift);
    terms.insert("z/eta", t_eta);
    let (a_breve, big_a_breve) = product_shift_aux(model_r, model_s, x)?;
    let mut extras = BTreeMap::new();
    extras.insert("a_breve", a_breve);
    extras.insert("A_breve", big_a_breve);
    extras.insert("eta", eta_x);
    extras.insert("w", w);
    Ok(Expansion::assemble(x, 1.0, Mda::Gumbel, terms, extras))
}

/// Closure of the Weibull-tail class under deflation: the product is
/// again of Weibull-tail type with θ* = θ, ρ'* = max(ρ', −1) and
/// auxiliary b*(l) = b(l) + θα₂·log(l)/l.
#[derive(Debug, Clone, Copy)]
pub struct WeibullTailClosure {
    pub theta_star: f64,
    pub rho_prime_star: f64,
    wt: crate::dist::WeibullTailMeta,
    alpha2: f64,
}

impl WeibullTailClosure {
    pub fn b_star(&self, l: f64) -> f64 {
        self.wt.b(l) + self.theta_star * self.alpha2 * l.ln() / l
    }
}

pub fn weibull_tail_closure(
    model_r: &TailModel,
    model_s: &TailModel,
) -> Result<WeibullTailClosure> {
    let wt = model_r.weibull_tail_meta()?;
    let defl = model_s.deflator_meta()?;
    Ok(WeibullTailClosure {
        theta_star: wt.theta,
        rho_prime_star: wt.rho_prime.max(-1.0),
        wt,
        alpha2: defl.alpha2,
    })
}

/// Gumbel-domain expansion written in Weibull-tail form.
///
/// leading = e^{−V(x)}·Ḡ(1−1/V(x))·Γ(α₂+1)·θ^{α₂}; the correction is
/// already relative. extras carry the hazard level and the closure data
/// of the product evaluated at that level.
pub fn weibull_tail_expand(
    model_r: &TailModel,
    model_s: &TailModel,
    x: f64,
) -> Result<Expansion> {
    let wt = model_r.weibull_tail_meta()?;
    let defl = model_s.deflator_meta()?;
    if defl.tau2 >= 0.0 {
        return Err(Error::Unsupported(
            "deflator with nonnegative second-order index",
        ));
    }
    let a2 = defl.alpha2;
    let t2 = defl.tau2;
    let theta = wt.theta;
    let v = model_r.big_v(x);
    if !(v > 1.0) {
        return Err(Error::Guard(
            "evaluation point below the asymptotic regime of the expansion",
        ));
    }
    let gm = gamma(a2 + 1.0);
    let leading = (-v).exp() * model_s.survival_one_minus(1.0 / v) * gm * theta.powf(a2);
    let t_b = a2 / theta * wt.b(v);
    let t_a = (gamma(a2 - t2 + 1.0) / (theta.powf(t2) * gm) - 1.0) / t2 * defl.a(v);
    let t_v = -a2 * (a2 + 1.0) * (theta + 1.0) / (2.0 * v);
    let mut terms = BTreeMap::new();
    terms.insert("b(V)", t_b);
    terms.insert("A(V)", t_a);
    terms.insert("1/V", t_v);
    let closure = weibull_tail_closure(model_r, model_s)?;
    let mut extras = BTreeMap::new();
    extras.insert("V", v);
    extras.insert("theta_star", closure.theta_star);
    extras.insert("rho_prime_star", closure.rho_prime_star);
    extras.insert("b_star(V)", closure.b_star(v));
    extras.insert("gamma_factor", gm);
    Ok(Expansion::assemble(x, leading, Mda::Gumbel, terms, extras))
}

/// Which form of the risk's second-order auxiliary the Weibull-domain
/// expansion evaluates. The two are algebraically equivalent
/// reassociations for the catalog's metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeibullMdaVariant {
    /// Tail-quantile auxiliary Ã of 1−U, evaluated at 1/F̄(x).
    QuantileAux,
    /// Survival-side auxiliary Ã*(t) = −α₁²·Ã(1/F̄(x_F − 1/t)) at t = 1/(1−x).
    SurvivalAux,
}

/// Weibull-domain (finite endpoint x_F = 1) expansion of P(R·S > x)
/// for x in (0,1).
///
/// leading = F̄(x)·Ḡ(x)·α₁B(α₁,α₂+1); correction is relative to the
/// beta factor; extras expose the additive form.
pub fn weibull_mda_expand(
    model_r: &TailModel,
    model_s: &TailModel,
    x: f64,
    variant: WeibullMdaVariant,
) -> Result<Expansion> {
    let meta = model_r.weibull_mda_meta()?;
    let defl = model_s.deflator_meta()?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain("evaluation point must lie in (0,1)"));
    }
    let a1 = meta.alpha1;
    let t1 = meta.tau1;
    let a2 = defl.alpha2;
    let t2 = defl.tau2;
    let omx = 1.0 - x;
    let fbar = model_r.survival_one_minus(omx);
    let gbar = model_s.survival_one_minus(omx);
    let b0 = a1 * beta(a1, a2 + 1.0);
    let leading = fbar * gbar * b0;

    // Risk-side second-order term.
    let a_val = meta.a_tilde_u(1.0 / fbar);
    let bracket1 = if t1 == 0.0 {
        -beta(a2, a1 + 1.0) * (digamma(a1 + 1.0) - digamma(a1 + a2 + 1.0))
    } else {
        (beta(a2, a1 - t1 + 1.0) - beta(a2, a1 + 1.0)) / t1
    };
    let t_risk = match variant {
        WeibullMdaVariant::QuantileAux => -(a1 * a1 * a2) * bracket1 * a_val,
        WeibullMdaVariant::SurvivalAux => {
            let a_star = -(a1 * a1) * a_val;
            a2 * bracket1 * a_star
        }
    };

    // Deflator-side second-order term.
    let bracket2 = if t2 == 0.0 {
        -beta(a1, a2 + 1.0) * (digamma(a2 + 1.0) - digamma(a1 + a2 + 1.0))
    } else {
        (beta(a1, a2 - t2 + 1.0) - beta(a1, a2 + 1.0)) / t2
    };
    let t_defl = a1 * bracket2 * defl.a(1.0 / omx);

    // Endpoint-distance term.
    let t_edge = a1 * a2 * beta(a1 + 1.0, a2 + 1.0) * omx;

    let mut terms = BTreeMap::new();
    terms.insert("Atilde", t_risk / b0);
    terms.insert("A", t_defl / b0);
    terms.insert("one_minus_x", t_edge / b0);
    let mut extras = BTreeMap::new();
    extras.insert("E_additive", t_risk + t_defl + t_edge);
    extras.insert("beta_factor", b0);
    Ok(Expansion::assemble(x, leading, Mda::Weibull, terms, extras))
}
