//! Tail asymptotics of the aggregated risk V(λ) = λV₁ + √(1−λ²)V₂ for
//! bivariate scale mixtures: V(λ) = R·S(λ) with
//! S(λ) = λ·I₁·S + √(1−λ²)·I₂·√(1−S²), where S is a unit deflator and
//! (I₁, I₂) a sign pair. The local behavior of P(S(λ) > 1−x) combines
//! with the risk's domain-of-attraction data into a second-order
//! expansion of the aggregated tail.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dist::{Family, Mda, TailModel};
use crate::error::{Error, Result};
use crate::expand::{self, Expansion, WeibullMdaVariant};
use crate::quad;
use crate::rng::Counter;
use crate::specfun::{beta as beta_fn, digamma, gamma, inv_reg_inc_beta};

/// Smallness guard for the local expansion of P(S(λ) > 1−x): the
/// asymptotic formulas are refused at x ≥ X_CUT.
pub const X_CUT: f64 = 0.05;

/// Joint law of the sign pair (I₁, I₂) on {−1, 1}².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignLaw {
    pp: f64,
    pm: f64,
    mp: f64,
    mm: f64,
}

impl SignLaw {
    /// Probabilities of (+,+), (+,−), (−,+), (−,−); must form a pmf.
    pub fn new(pp: f64, pm: f64, mp: f64, mm: f64) -> Result<SignLaw> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !(ok(pp) && ok(pm) && ok(mp) && ok(mm)) {
            return Err(Error::Domain("sign probabilities must lie in [0,1]"));
        }
        if ((pp + pm + mp + mm) - 1.0).abs() > 1e-9 {
            return Err(Error::Domain("sign probabilities must sum to one"));
        }
        Ok(SignLaw { pp, pm, mp, mm })
    }

    /// Independent fair signs: each combination has probability 1/4.
    pub fn fair_independent() -> SignLaw {
        SignLaw { pp: 0.25, pm: 0.25, mp: 0.25, mm: 0.25 }
    }

    /// Independent signs with P(I₁=1) = p1, P(I₂=1) = p2.
    pub fn independent(p1: f64, p2: f64) -> Result<SignLaw> {
        if !((0.0..=1.0).contains(&p1) && (0.0..=1.0).contains(&p2)) {
            return Err(Error::Domain("sign probabilities must lie in [0,1]"));
        }
        Ok(SignLaw {
            pp: p1 * p2,
            pm: p1 * (1.0 - p2),
            mp: (1.0 - p1) * p2,
            mm: (1.0 - p1) * (1.0 - p2),
        })
    }

    pub fn p_first_plus(&self) -> f64 {
        self.pp + self.pm
    }

    pub fn p_second_plus(&self) -> f64 {
        self.pp + self.mp
    }

    pub fn p_both_plus(&self) -> f64 {
        self.pp
    }

    fn branches(&self) -> [(f64, f64, f64); 4] {
        [
            (self.pp, 1.0, 1.0),
            (self.pm, 1.0, -1.0),
            (self.mp, -1.0, 1.0),
            (self.mm, -1.0, -1.0),
        ]
    }
}

/// Sign mass driving the aggregated tail: P(I₁=I₂=1) strictly between
/// the axes, P(I₂=1) at λ=0, P(I₁=1) at λ=1.
pub fn q_lambda(sign_law: &SignLaw, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain("lambda must lie in [0,1]"));
    }
    Ok(if lambda == 0.0 {
        sign_law.p_second_plus()
    } else if lambda == 1.0 {
        sign_law.p_first_plus()
    } else {
        sign_law.p_both_plus()
    })
}

/// Local coefficients of P(S(λ) > 1−x) ~ q·c·(scale(x))^{α/2}·(1+...):
/// the constant c, index α, second-order rate τ, and the slowly varying
/// factor L represented by its limiting constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCoeffs {
    pub c: f64,
    pub alpha: f64,
    pub tau: f64,
    pub l_const: f64,
}

/// Local coefficients at the axes for a Beta(a,b) deflator.
pub fn beta_local_coeffs(a: f64, b: f64, lambda: f64) -> Result<LocalCoeffs> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("beta parameters must be positive"));
    }
    if lambda == 0.0 {
        Ok(LocalCoeffs {
            c: 1.0 / (a * beta_fn(a, b)),
            alpha: a,
            tau: 1.0,
            l_const: -(b - 1.0) * a / (a + 1.0),
        })
    } else if lambda == 1.0 {
        Ok(LocalCoeffs {
            c: 1.0 / (b * beta_fn(a, b)),
            alpha: b,
            tau: 1.0,
            l_const: -(a - 1.0) * b / (b + 1.0),
        })
    } else {
        Err(Error::Domain("closed beta coefficients exist only on the axes"))
    }
}

/// Local coefficients at interior λ for a deflator with a smooth
/// density g: α = 1, c = 2g(λ), τ = 2, L-constant = ratio/6 where the
/// caller supplies the density derivative ratio at λ.
pub fn smooth_local_coeffs<F: Fn(f64) -> f64>(
    g: F,
    g3_over_g1: f64,
    lambda: f64,
) -> Result<LocalCoeffs> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain("interior coefficients need lambda in (0,1)"));
    }
    let g_l = g(lambda);
    if !(g_l > 0.0) {
        return Err(Error::Domain("density must be positive at lambda"));
    }
    if !g3_over_g1.is_finite() {
        return Err(Error::Domain(
            "derivative ratio undefined (density critical at lambda)",
        ));
    }
    Ok(LocalCoeffs { c: 2.0 * g_l, alpha: 1.0, tau: 2.0, l_const: g3_over_g1 / 6.0 })
}

/// The aggregation input: mixing weight, sign mass, local coefficients
/// of the deflator at λ, the risk model, and optionally the concrete
/// deflator model (enabling exact-tail oracles and the λ=1 delegation
/// to the plain-product expansions).
#[derive(Clone)]
pub struct AggregationModel {
    pub lambda: f64,
    pub q: f64,
    pub coeffs: LocalCoeffs,
    pub model_r: TailModel,
    pub model_s: Option<TailModel>,
    /// Optional slowly varying map for L; when absent the limiting
    /// constant from `coeffs` is used.
    pub l_map: Option<fn(f64) -> f64>,
}

impl AggregationModel {
    pub fn new(lambda: f64, q: f64, coeffs: LocalCoeffs, model_r: TailModel) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain("lambda must lie in [0,1]"));
        }
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain("sign mass must lie in (0,1]"));
        }
        if !(coeffs.c > 0.0 && coeffs.alpha > 0.0 && coeffs.tau > 0.0) {
            return Err(Error::Domain("local coefficients must be positive"));
        }
        Ok(AggregationModel { lambda, q, coeffs, model_r, model_s: None, l_map: None })
    }

    /// Attach the concrete deflator model.
    pub fn with_deflator(mut self, model_s: TailModel) -> Result<Self> {
        let (lo, hi) = model_s.support();
        if !(lo >= 0.0 && hi <= 1.0) {
            return Err(Error::Regime("deflator support must lie inside [0,1]"));
        }
        self.model_s = Some(model_s);
        Ok(self)
    }

    /// Attach a non-constant slowly varying factor L.
    pub fn with_l_map(mut self, f: fn(f64) -> f64) -> Self {
        self.l_map = Some(f);
        self
    }

    fn l_at(&self, u: f64) -> f64 {
        match self.l_map {
            Some(f) => f(u),
            None => self.coeffs.l_const,
        }
    }
}

/// Local tail of the mixed deflator: (value, correction) with
/// value = leading·(1 + correction) for P(S(λ) > 1−x), x small.
pub fn s_lambda_tail(model: &AggregationModel, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain("x must be positive"));
    }
    if x >= X_CUT {
        return Err(Error::Guard("local expansion evaluated outside its smallness guard"));
    }
    let LocalCoeffs { c, alpha, tau, .. } = model.coeffs;
    let q = model.q;
    let lam = model.lambda;
    let (base, corr) = if lam == 0.0 {
        let base = q * c * (2.0 * x).powf(0.5 * alpha);
        let corr = model.l_at(x.sqrt()) * (2.0 * x).powf(0.5 * tau) - alpha * x / 4.0;
        (base, corr)
    } else if lam == 1.0 {
        let base = q * c * x.powf(alpha);
        let corr = model.l_at(x) * x.powf(tau);
        (base, corr)
    } else {
        let oml = 1.0 - lam * lam;
        let scale = 2.0 * x * oml;
        let base = q * c * scale.powf(0.5 * alpha);
        let corr = model.l_at(x.sqrt()) * scale.powf(0.5 * tau)
            - alpha * lam * x.sqrt() / (2.0 * oml).sqrt();
        (base, corr)
    };
    Ok((base * (1.0 + corr), corr))
}

/// Regular-variation parameters of the aggregated deflation factor:
/// the index α and second-order rate τ entering the aggregated
/// expansion.
pub fn aggregated_params(model: &AggregationModel) -> (f64, f64) {
    let LocalCoeffs { alpha: al, tau: tl, .. } = model.coeffs;
    let lam = model.lambda;
    if lam == 1.0 {
        (al, -tl)
    } else if lam == 0.0 {
        (0.5 * al, -0.5 * tl.min(2.0))
    } else {
        (0.5 * al, -0.5 * tl.min(1.0))
    }
}

/// Aggregated auxiliary function A(t) = τ·𝒜_λ(1/t), where 𝒜_λ is the
/// local correction of `s_lambda_tail`.
pub fn aggregated_a(model: &AggregationModel, t: f64) -> Result<f64> {
    let (_, tau) = aggregated_params(model);
    let (_, corr) = s_lambda_tail(model, 1.0 / t)?;
    Ok(tau * corr)
}

fn scale_by_q(mut e: Expansion, q: f64) -> Expansion {
    e.leading *= q;
    e.second_order = e.leading * (1.0 + e.correction);
    e.extras.insert("q", q);
    e
}

/// Second-order expansion of the aggregated tail.
///
/// Gumbel-domain risk (case a): evaluates P(V(λ) > x) directly at x.
/// Weibull-domain risk with endpoint 1 (case b): x is the distance to
/// the endpoint and the expansion is of P(V(λ) > 1−x); the Expansion's
/// `x` field carries the level 1−x.
///
/// At λ = 1 with a concrete deflator attached, the plain-product
/// expansion is taken verbatim and scaled by the sign mass q, so the
/// I₁ ≡ 1 case coincides with it bit for bit.
pub fn aggregate_expand(model: &AggregationModel, x: f64) -> Result<Expansion> {
    if model.lambda == 1.0 {
        if let Some(ref s) = model.model_s {
            let e = match model.model_r.mda() {
                Mda::Gumbel => expand::gumbel_expand(&model.model_r, s, x)?,
                Mda::Weibull => {
                    expand::weibull_mda_expand(&model.model_r, s, 1.0 - x, WeibullMdaVariant::QuantileAux)?
                }
                Mda::Frechet => {
                    return Err(Error::Regime(
                        "aggregated expansion covers Gumbel and Weibull domains",
                    ))
                }
            };
            return Ok(scale_by_q(e, model.q));
        }
    }
    let (alpha, tau) = aggregated_params(model);
    match model.model_r.mda() {
        Mda::Gumbel => {
            let meta = model.model_r.gumbel_meta()?;
            let v = model.model_r.big_v(x);
            let w = meta.w(x, v);
            let eta_x = x * w;
            if !(eta_x > 0.0) {
                return Err(Error::Guard(
                    "evaluation point below the asymptotic regime of the expansion",
                ));
            }
            let (s_val, s_corr) = s_lambda_tail(model, 1.0 / eta_x)?;
            let gm = gamma(alpha + 1.0);
            let fbar = model.model_r.survival(x);
            let leading = fbar * s_val * gm;
            let a_eta = tau * s_corr;
            let add_a = (gamma(alpha - tau + 1.0) - gm) / tau * a_eta;
            let k = expand::k_coefficient(alpha, meta.rho)?;
            let add_k = k * meta.a_tilde_of_logt(v);
            let mut terms = BTreeMap::new();
            terms.insert("A(eta)", add_a / gm);
            terms.insert("Atilde", add_k / gm);
            let mut extras = BTreeMap::new();
            extras.insert("eta", eta_x);
            extras.insert("w", w);
            extras.insert("gamma_factor", gm);
            extras.insert("K", k);
            extras.insert("q", model.q);
            extras.insert("s_value", s_val);
            extras.insert("s_correction", s_corr);
            extras.insert("alpha_agg", alpha);
            extras.insert("tau_agg", tau);
            Ok(Expansion::assemble(x, leading, Mda::Gumbel, terms, extras))
        }
        Mda::Weibull => {
            let meta = model.model_r.weibull_mda_meta()?;
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Domain("endpoint distance must lie in (0,1)"));
            }
            let (s_val, s_corr) = s_lambda_tail(model, x)?;
            let a1 = meta.alpha1;
            let t1 = meta.tau1;
            let fbar = model.model_r.survival_one_minus(x);
            let b0 = a1 * beta_fn(a1, alpha + 1.0);
            let leading = fbar * s_val * b0;
            let a_u = meta.a_tilde_u(1.0 / fbar);
            let bracket1 = if t1 == 0.0 {
                beta_fn(alpha, a1 + 1.0) * (digamma(a1 + 1.0) - digamma(alpha + a1 + 1.0))
            } else {
                (beta_fn(alpha, a1 + 1.0) - beta_fn(alpha, a1 - t1 + 1.0)) / t1
            };
            let t_risk = alpha * a1 * a1 * bracket1 * a_u;
            let a_agg = tau * s_corr;
            let bracket2 = (beta_fn(a1, alpha - tau + 1.0) - beta_fn(a1, alpha + 1.0)) / tau;
            let t_defl = a1 * bracket2 * a_agg;
            let mut terms = BTreeMap::new();
            terms.insert("Atilde", t_risk / b0);
            terms.insert("A", t_defl / b0);
            let mut extras = BTreeMap::new();
            extras.insert("beta_factor", b0);
            extras.insert("E_additive", t_risk + t_defl);
            extras.insert("q", model.q);
            extras.insert("s_value", s_val);
            extras.insert("s_correction", s_corr);
            extras.insert("alpha_agg", alpha);
            extras.insert("tau_agg", tau);
            Ok(Expansion::assemble(1.0 - x, leading, Mda::Weibull, terms, extras))
        }
        Mda::Frechet => Err(Error::Regime(
            "aggregated expansion covers Gumbel and Weibull domains",
        )),
    }
}

/// Quadrature ground truth for P(V(λ) > x): integrates the risk tail
/// against the deflator density over each sign branch of
/// S(λ) = λ·i₁·s + √(1−λ²)·i₂·√(1−s²).
pub fn agg_exact_tail(
    model_r: &TailModel,
    model_s: &TailModel,
    sign_law: &SignLaw,
    lambda: f64,
    x: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain("lambda must lie in [0,1]"));
    }
    if !(x > 0.0) {
        return Err(Error::Domain("level must be positive"));
    }
    let (lo_s, hi_s) = model_s.support();
    if !(lo_s >= 0.0 && hi_s <= 1.0) {
        return Err(Error::Regime("deflator support must lie inside [0,1]"));
    }
    let rt = (1.0 - lambda * lambda).max(0.0).sqrt();
    let mut total = 0.0;
    let mut abs_floor = 1e-300;
    for &(p, e1, e2) in sign_law.branches().iter() {
        if p <= 0.0 {
            continue;
        }
        // region of s in (0,1) where the mixed factor is positive
        let (lo, hi) = if e1 > 0.0 && e2 > 0.0 {
            (0.0, 1.0)
        } else if e1 > 0.0 {
            if lambda == 0.0 {
                continue;
            }
            (rt, 1.0)
        } else if e2 > 0.0 {
            if lambda == 1.0 {
                continue;
            }
            (0.0, rt)
        } else {
            continue;
        };
        if hi <= lo {
            continue;
        }
        let f = |s: f64| {
            let mix = lambda * e1 * s + rt * e2 * (1.0 - s * s).max(0.0).sqrt();
            if mix <= 0.0 {
                0.0
            } else {
                model_r.survival(x / mix) * model_s.density(s)
            }
        };
        let mut points: Vec<f64> = alloc::vec![lo, hi];
        for cand in [lambda, rt, 0.5 * (lo + hi)] {
            if cand > lo + 1e-12 && cand < hi - 1e-12 {
                points.push(cand);
            }
        }
        points.sort_unstable_by(f64::total_cmp);
        points.dedup();
        let r = quad::integrate_split(&f, &points, 3e-10, abs_floor)?;
        total += p * r.value;
        abs_floor = (total.abs() * 1e-13).max(1e-300);
    }
    Ok(total.min(1.0))
}

/// A stratified Monte Carlo estimate with its binomial uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// One binomial standard deviation of `estimate`.
    pub sigma: f64,
    pub hits: u64,
    pub draws: u64,
    /// Exact probability of the conditioning window.
    pub window_prob: f64,
}

struct CachedQuantile {
    w_lo: f64,
    dw: f64,
    vals: Vec<f64>,
    ders: Vec<f64>,
}

impl CachedQuantile {
    fn eval(&self, w: f64) -> f64 {
        let t = (w - self.w_lo) / self.dw;
        let j = (t.max(0.0) as usize).min(self.vals.len() - 2);
        let xi = (t - j as f64).clamp(0.0, 1.0);
        let xi2 = xi * xi;
        let xi3 = xi2 * xi;
        (2.0 * xi3 - 3.0 * xi2 + 1.0) * self.vals[j]
            + (xi3 - 2.0 * xi2 + xi) * self.dw * self.ders[j]
            + (-2.0 * xi3 + 3.0 * xi2) * self.vals[j + 1]
            + (xi3 - xi2) * self.dw * self.ders[j + 1]
    }
}

const MC_KNOTS: usize = 2048;

fn beta_params(model_s: &TailModel) -> Result<(f64, f64)> {
    match model_s.family() {
        Family::Beta { a, b } => Ok((a, b)),
        _ => Err(Error::Unsupported(
            "endpoint-window sampling needs a Beta deflator",
        )),
    }
}

/// Stratified Monte Carlo estimate of P(S(λ) > 1−x): draws are taken
/// conditionally inside an exact-probability window that covers the
/// event region, and each draw is tested against the exact event
/// inequality. Deterministic in (seed, n), independent of chunking.
pub fn mc_s_lambda_tail(
    model_s: &TailModel,
    sign_law: &SignLaw,
    lambda: f64,
    x: f64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::Domain("need at least one draw"));
    }
    if !(x > 0.0 && x < X_CUT) {
        return Err(Error::Guard("event size must lie in (0, X_CUT)"));
    }
    let q = q_lambda(sign_law, lambda)?;
    if q <= 0.0 {
        return Err(Error::Domain("sign mass is zero; the event has the same order as rounding"));
    }
    let gen = Counter::new(seed, 0);
    let c = 1.0 - x;
    let (window_prob, cache, hit): (f64, CachedQuantile, HitTest) = if lambda == 0.0 {
        // event: s² < x(2−x); window [0, 1.5·√(x(2−x))] in cdf coordinates
        let (a, b) = beta_params(model_s)?;
        let s0 = (x * (2.0 - x)).sqrt();
        let hi = (1.5 * s0).min(1.0);
        let u_hi = model_s.cdf(hi);
        let w_hi = u_hi.powf(1.0 / a);
        let dw = w_hi / MC_KNOTS as f64;
        let mut vals = Vec::with_capacity(MC_KNOTS + 1);
        let mut ders = Vec::with_capacity(MC_KNOTS + 1);
        vals.push(0.0);
        ders.push((a * beta_fn(a, b)).powf(1.0 / a));
        for j in 1..=MC_KNOTS {
            let w = dw * j as f64;
            let u = w.powf(a);
            let s = inv_reg_inc_beta(a, b, u)?;
            vals.push(s);
            ders.push(a * w.powf(a - 1.0) / model_s.density(s));
        }
        let cq = CachedQuantile { w_lo: 0.0, dw, vals, ders };
        (u_hi, cq, HitTest::BelowSq { s0sq: x * (2.0 - x) })
    } else if lambda == 1.0 {
        // event: S > 1−x; window S > 1−x₀ in survival coordinates,
        // tracked as the distance from the endpoint for precision
        let (a, b) = beta_params(model_s)?;
        let x0 = X_CUT.min(50.0 * x);
        let v_hi = model_s.survival_one_minus(x0);
        let w_hi = v_hi.powf(1.0 / b);
        let dw = w_hi / MC_KNOTS as f64;
        let mut vals = Vec::with_capacity(MC_KNOTS + 1);
        let mut ders = Vec::with_capacity(MC_KNOTS + 1);
        vals.push(0.0);
        ders.push((b * beta_fn(a, b)).powf(1.0 / b));
        for j in 1..=MC_KNOTS {
            let w = dw * j as f64;
            let v = w.powf(b);
            let om = model_s.quantile_upper_one_minus(v)?;
            vals.push(om);
            ders.push(b * w.powf(b - 1.0) / model_s.density_one_minus(om));
        }
        let cq = CachedQuantile { w_lo: 0.0, dw, vals, ders };
        (v_hi, cq, HitTest::OmBelow { x })
    } else {
        // event: λs + √((1−λ²)(1−s²)) > c, i.e. s in (s₋, s₊); padded window
        let oml = 1.0 - lambda * lambda;
        let half = ((1.0 - c * c) * oml).sqrt();
        let s_m = lambda * c - half;
        let s_p = lambda * c + half;
        if !(s_m > 0.0 && s_p < 1.0) {
            return Err(Error::Guard("event window escapes the unit interval"));
        }
        let pad = 0.25 * (s_p - s_m);
        let lo = (s_m - pad).max(0.0);
        let hi = (s_p + pad).min(1.0);
        let u_lo = model_s.cdf(lo);
        let u_hi = model_s.cdf(hi);
        let du = (u_hi - u_lo) / MC_KNOTS as f64;
        let mut vals = Vec::with_capacity(MC_KNOTS + 1);
        let mut ders = Vec::with_capacity(MC_KNOTS + 1);
        for j in 0..=MC_KNOTS {
            let u = u_lo + du * j as f64;
            let s = model_s.quantile(u)?;
            vals.push(s);
            ders.push(1.0 / model_s.density(s));
        }
        let cq = CachedQuantile { w_lo: u_lo, dw: du, vals, ders };
        (
            u_hi - u_lo,
            cq,
            HitTest::Mixed { lambda, rt: oml.sqrt(), c },
        )
    };

    let mut hits: u64 = 0;
    match hit {
        HitTest::BelowSq { s0sq } => {
            let (a, _) = beta_params(model_s)?;
            let inv_a = 1.0 / a;
            for i in 0..n {
                let u = gen.f64_at(i) * window_prob;
                let s = cache.eval(u.powf(inv_a));
                if s * s < s0sq {
                    hits += 1;
                }
            }
        }
        HitTest::OmBelow { x } => {
            let (_, b) = beta_params(model_s)?;
            let inv_b = 1.0 / b;
            for i in 0..n {
                let v = gen.f64_at(i) * window_prob;
                let om = cache.eval(v.powf(inv_b));
                if om < x {
                    hits += 1;
                }
            }
        }
        HitTest::Mixed { lambda, rt, c } => {
            for i in 0..n {
                let u = cache.w_lo + gen.f64_at(i) * window_prob;
                let s = cache.eval(u);
                if lambda * s + rt * (1.0 - s * s).max(0.0).sqrt() > c {
                    hits += 1;
                }
            }
        }
    }
    let h = hits as f64 / n as f64;
    Ok(McEstimate {
        estimate: q * window_prob * h,
        sigma: q * window_prob * (h * (1.0 - h) / n as f64).sqrt(),
        hits,
        draws: n,
        window_prob,
    })
}

enum HitTest {
    BelowSq { s0sq: f64 },
    OmBelow { x: f64 },
    Mixed { lambda: f64, rt: f64, c: f64 },
}
