//! Ground truth for the deflated risk X = R·S: exact tail probabilities by
//! adaptive quadrature, exact quantiles by bracketed root-finding, and
//! reproducible inverse-transform sampling.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::dist::TailModel;
use crate::error::{Error, Result};
use crate::quad;
use crate::rng::Counter;
use crate::root;

fn require_deflator(model_s: &TailModel) -> Result<()> {
    let (lo, hi) = model_s.support();
    if lo >= 0.0 && hi <= 1.0 {
        Ok(())
    } else {
        Err(Error::Regime("deflator support must lie inside [0,1]"))
    }
}

/// P(R·S > x) by adaptive quadrature over the deflator's density,
/// relative tolerance 1e-10.
///
/// The integral ∫ F̄_R(x/s)·g(s) ds is split into an interior patch and a
/// near-endpoint patch written in u = 1−s coordinates, which keeps full
/// relative accuracy where the deflator mass concentrates and tames
/// endpoint singularities of Beta-type densities.
pub fn exact_tail(model_r: &TailModel, model_s: &TailModel, x: f64) -> Result<f64> {
    require_deflator(model_s)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    let xf_r = model_r.support().1;
    let s_min = if xf_r.is_finite() {
        let m = x / xf_r;
        if m >= 1.0 {
            return Ok(0.0);
        }
        m
    } else {
        0.0
    };
    let s_split = s_min + 0.75 * (1.0 - s_min);
    let u_hi = 1.0 - s_split;
    // near-endpoint patch first: it carries the mass for deep tails
    let near = quad::integrate(
        |u| model_r.survival(x / (1.0 - u)) * model_s.density_one_minus(u),
        0.0,
        u_hi,
        3e-11,
        1e-300,
    )?;
    let abs_floor = (near.value.abs() * 1e-13).max(1e-300);
    let interior = quad::integrate(
        |s| model_r.survival(x / s) * model_s.density(s),
        s_min,
        s_split,
        3e-11,
        abs_floor,
    )?;
    Ok((near.value + interior.value).min(1.0))
}

/// P(R·S > x) via the deflator's quantile (Stieltjes substitution
/// s = Q↑_S(v)); slower than the density form but free of endpoint
/// singularities. Retained as an independent cross-check.
pub fn exact_tail_qsub(model_r: &TailModel, model_s: &TailModel, x: f64) -> Result<f64> {
    require_deflator(model_s)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    let xf_r = model_r.support().1;
    let v_hi = if xf_r.is_finite() {
        let m = x / xf_r;
        if m >= 1.0 {
            return Ok(0.0);
        }
        model_s.survival(m)
    } else {
        1.0
    };
    let f = |v: f64| {
        let s = model_s.quantile_upper(v).unwrap_or(f64::NAN);
        model_r.survival(x / s)
    };
    let r = quad::integrate_split(&f, &[0.0, 0.5 * v_hi, v_hi], 3e-11, 1e-300)?;
    Ok(r.value.min(1.0))
}

/// x with P(R·S > x) = 1−p, found by bracketed root-finding on the
/// quadrature tail; the product tail never exceeds the risk tail, so
/// [0, Q↑_R(1−p)] always brackets.
pub fn exact_quantile(model_r: &TailModel, model_s: &TailModel, p: f64) -> Result<f64> {
    let oracle = ProductOracle::new(*model_r, *model_s)?;
    oracle.quantile(p)
}

/// Caching wrapper around the exact product tail; reuses tail values
/// across quantile solves and grid evaluations within a process.
pub struct ProductOracle {
    model_r: TailModel,
    model_s: TailModel,
    cache: RefCell<BTreeMap<u64, f64>>,
}

impl ProductOracle {
    pub fn new(model_r: TailModel, model_s: TailModel) -> Result<Self> {
        require_deflator(&model_s)?;
        Ok(ProductOracle {
            model_r,
            model_s,
            cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn model_r(&self) -> &TailModel {
        &self.model_r
    }

    pub fn model_s(&self) -> &TailModel {
        &self.model_s
    }

    /// Cached exact_tail.
    pub fn tail(&self, x: f64) -> Result<f64> {
        let key = x.to_bits();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return Ok(v);
        }
        let v = exact_tail(&self.model_r, &self.model_s, x)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// Product quantile at probability p.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain("probability must be in (0,1)"));
        }
        let v = 1.0 - p;
        let hi = self.model_r.quantile_upper(v)?;
        if hi <= 0.0 {
            return Ok(0.0);
        }
        let f = |x: f64| self.tail(x).unwrap_or(f64::NAN) - v;
        root::brent(f, 0.0, hi, 1e-12, 1e-9 * v)
    }
}

/// A reproducible sample of (R, S, X=R·S) with cached ascending order
/// statistics.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub seed: u64,
    r: Vec<f64>,
    s: Vec<f64>,
    x: Vec<f64>,
    r_sorted: Vec<f64>,
    s_sorted: Vec<f64>,
    x_sorted: Vec<f64>,
}

/// Which coordinate of a SampleSet an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seq {
    R,
    S,
    X,
}

impl SampleSet {
    /// Assemble from draws; x is recomputed as r·s and all order
    /// statistics are cached.
    pub fn from_draws(seed: u64, r: Vec<f64>, s: Vec<f64>) -> Result<SampleSet> {
        if r.len() != s.len() || r.is_empty() {
            return Err(Error::Domain("need equally many r and s draws, at least one"));
        }
        let x: Vec<f64> = r.iter().zip(&s).map(|(&ri, &si)| ri * si).collect();
        let mut r_sorted = r.clone();
        let mut s_sorted = s.clone();
        let mut x_sorted = x.clone();
        r_sorted.sort_unstable_by(f64::total_cmp);
        s_sorted.sort_unstable_by(f64::total_cmp);
        x_sorted.sort_unstable_by(f64::total_cmp);
        Ok(SampleSet { seed, r, s, x, r_sorted, s_sorted, x_sorted })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn values(&self, which: Seq) -> &[f64] {
        match which {
            Seq::R => &self.r,
            Seq::S => &self.s,
            Seq::X => &self.x,
        }
    }

    /// Ascending order statistics of the selected coordinate.
    pub fn sorted(&self, which: Seq) -> &[f64] {
        match which {
            Seq::R => &self.r_sorted,
            Seq::S => &self.s_sorted,
            Seq::X => &self.x_sorted,
        }
    }
}

/// Inverse-transform sampling keyed by (seed, stream, index): stream 0
/// feeds the risk, stream 1 the deflator; output is independent of
/// evaluation order.
pub fn draw_samples(
    model_r: &TailModel,
    model_s: &TailModel,
    n: usize,
    seed: u64,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1"));
    }
    let gen_r = Counter::new(seed, 0);
    let gen_s = Counter::new(seed, 1);
    let mut r = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        r.push(model_r.quantile_upper(gen_r.f64_at(i as u64))?);
        s.push(model_s.quantile_upper(gen_s.f64_at(i as u64))?);
    }
    SampleSet::from_draws(seed, r, s)
}

/// Fraction of the selected values strictly greater than x.
pub fn empirical_tail(set: &SampleSet, which: Seq, x: f64) -> f64 {
    let sorted = set.sorted(which);
    let below_or_eq = sorted.partition_point(|&v| v <= x);
    (sorted.len() - below_or_eq) as f64 / sorted.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Family;
    use crate::specfun::{reg_gamma_q, reg_inc_beta};

    fn model(f: Family) -> TailModel {
        TailModel::new(f).unwrap()
    }

    #[test]
    fn tail_at_zero_is_one() {
        let r = model(Family::Pareto { alpha: 2.0, theta: 1.0 });
        let s = model(Family::Beta { a: 1.0, b: 2.0 });
        assert_eq!(exact_tail(&r, &s, 0.0).unwrap(), 1.0);
        assert_eq!(exact_tail(&r, &s, -1.0).unwrap(), 1.0);
    }

    #[test]
    fn gamma_beta_identity() {
        // Gamma(a+b, lambda) risk deflated by Beta(a,b) is Gamma(a, lambda).
        let cases = [(0.5, 0.5, 1.0), (1.0, 1.0, 2.0)];
        for (a, b, lambda) in cases {
            let r = model(Family::Gamma { alpha: a + b, lambda });
            let s = model(Family::Beta { a, b });
            for &x in &[0.3, 1.0, 2.5, 6.0] {
                let got = exact_tail(&r, &s, x).unwrap();
                let want = reg_gamma_q(a, lambda * x);
                assert!(
                    (got - want).abs() <= 1e-10 * want.max(1e-12),
                    "a={a} b={b} x={x}: {got} vs {want}"
                );
            }
        }
        // spec-level spot value
        let r = model(Family::Gamma { alpha: 1.0, lambda: 1.0 });
        let s = model(Family::Beta { a: 0.5, b: 0.5 });
        let got = exact_tail(&r, &s, 1.0).unwrap();
        assert!((got - 0.1572992070502851306588).abs() < 2e-11);
    }

    #[test]
    fn beta_beta_identity() {
        // Beta(a1,b1)·Beta(a2,b2) with a2+b2=a1 is Beta(a2, b1+b2).
        let (a2, b2, b1) = (1.5, 1.0, 2.0);
        let a1 = a2 + b2;
        let r = model(Family::Beta { a: a1, b: b1 });
        let s = model(Family::Beta { a: a2, b: b2 });
        for &x in &[0.2, 0.5, 0.9, 0.99] {
            let got = exact_tail(&r, &s, x).unwrap();
            let want = reg_inc_beta(b1 + b2, a2, 1.0 - x);
            assert!(
                (got - want).abs() <= 1e-10 * want.max(1e-12),
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn beta2_beta_identity() {
        // Beta2(c+d, b)·Beta(c,d) is Beta2(c, b).
        let (c, d, b) = (1.0, 1.5, 2.0);
        let r = model(Family::Beta2 { a: c + d, b });
        let s = model(Family::Beta { a: c, b: d });
        let target = model(Family::Beta2 { a: c, b });
        for &x in &[0.5, 2.0, 10.0, 100.0] {
            let got = exact_tail(&r, &s, x).unwrap();
            let want = target.survival(x);
            assert!(
                (got - want).abs() <= 1e-9 * want,
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn density_and_quantile_forms_agree() {
        let pairs = [
            (
                model(Family::Pareto { alpha: 2.0, theta: 1.0 }),
                model(Family::Beta { a: 1.0, b: 2.0 }),
                alloc::vec![1.0, 10.0, 100.0],
            ),
            (
                model(Family::Gamma { alpha: 2.0, lambda: 1.0 }),
                model(Family::Beta { a: 0.5, b: 0.5 }),
                alloc::vec![0.5, 3.0, 12.0],
            ),
            (
                model(Family::Beta { a: 2.0, b: 1.5 }),
                model(Family::Beta { a: 1.5, b: 2.5 }),
                alloc::vec![0.3, 0.8, 0.97],
            ),
        ];
        for (r, s, xs) in pairs {
            for &x in &xs {
                let d = exact_tail(&r, &s, x).unwrap();
                let q = exact_tail_qsub(&r, &s, x).unwrap();
                assert!(
                    (d - q).abs() <= 1e-9 * d.max(1e-14),
                    "{:?}x{:?} at {x}: density {d} qsub {q}",
                    r.family(),
                    s.family()
                );
            }
        }
    }

    #[test]
    fn tail_monotone_and_dominated() {
        let r = model(Family::Gamma { alpha: 2.0, lambda: 1.0 });
        let s = model(Family::Beta { a: 1.0, b: 2.0 });
        let mut prev = 1.0f64;
        for i in 0..12 {
            let x = 0.5 * 1.6f64.powi(i);
            let h = exact_tail(&r, &s, x).unwrap();
            assert!(h <= prev * (1.0 + 1e-12), "not nonincreasing at {x}");
            assert!(h <= r.survival(x) * (1.0 + 1e-10), "exceeds risk tail at {x}");
            assert!(h <= 1.0);
            prev = h;
        }
    }

    #[test]
    fn quantile_inverts_tail() {
        let r = model(Family::Gamma { alpha: 1.0, lambda: 1.0 });
        let s = model(Family::Beta { a: 0.5, b: 0.5 });
        // X is Gamma(1/2, 1): tail 0.15729... at x=1
        let p = 1.0 - 0.1572992070502851306588;
        let x = exact_quantile(&r, &s, p).unwrap();
        assert!((x - 1.0).abs() < 1e-7, "quantile {x}");

        let r2 = model(Family::Pareto { alpha: 2.0, theta: 1.0 });
        let s2 = model(Family::Beta { a: 1.0, b: 2.0 });
        let oracle = ProductOracle::new(r2, s2).unwrap();
        for &p in &[0.9, 0.99, 0.9999] {
            let xq = oracle.quantile(p).unwrap();
            let back = oracle.tail(xq).unwrap();
            assert!(
                (back - (1.0 - p)).abs() <= 1e-8 * (1.0 - p),
                "p={p}: tail(quantile) {back}"
            );
        }
    }

    #[test]
    fn shift_ratio_tracks_oracle() {
        // Gumbel shift-ratio expansion vs direct quadrature at moderate depth.
        let r = model(Family::Gamma { alpha: 2.0, lambda: 1.0 });
        let s = model(Family::Beta { a: 1.0, b: 2.0 });
        let x = 20.0;
        let z = 1.0;
        let e = crate::expand::gumbel_shift_ratio(&r, &s, x, z).unwrap();
        let w = e.extras["w"];
        let h_x = exact_tail(&r, &s, x).unwrap();
        let h_shift = exact_tail(&r, &s, x + z / w).unwrap();
        let truth = h_shift / ((-z).exp() * h_x);
        assert!(
            (e.second_order - truth).abs() < 0.03 * truth,
            "expansion {} vs oracle {truth}",
            e.second_order
        );
    }

    #[test]
    fn draws_are_deterministic_and_stream_separated() {
        let r = model(Family::Pareto { alpha: 2.0, theta: 1.0 });
        let s = model(Family::Beta { a: 1.0, b: 2.0 });
        let one = draw_samples(&r, &s, 64, 9001).unwrap();
        let two = draw_samples(&r, &s, 64, 9001).unwrap();
        assert_eq!(one.values(Seq::R), two.values(Seq::R));
        assert_eq!(one.values(Seq::X), two.values(Seq::X));
        let other = draw_samples(&r, &s, 64, 9002).unwrap();
        assert_ne!(one.values(Seq::R), other.values(Seq::R));
        // x = r*s bitwise
        for i in 0..64 {
            assert_eq!(
                one.values(Seq::X)[i],
                one.values(Seq::R)[i] * one.values(Seq::S)[i]
            );
        }
        assert!(one.values(Seq::S).iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn sample_means_match_moments() {
        let r = model(Family::Pareto { alpha: 2.0, theta: 1.0 });
        let uniform = model(Family::Beta { a: 1.0, b: 1.0 });
        let set = draw_samples(&r, &uniform, 100_000, 11).unwrap();
        let mean_s: f64 =
            set.values(Seq::S).iter().sum::<f64>() / set.n() as f64;
        let sigma = (1.0f64 / 12.0).sqrt() / (set.n() as f64).sqrt();
        assert!((mean_s - 0.5).abs() < 3.0 * sigma, "mean {mean_s}");
        // empirical P(R > 10) vs (1/11)^2
        let p = (1.0f64 / 11.0).powi(2);
        let emp = empirical_tail(&set, Seq::R, 10.0);
        let band = 3.0 * (p * (1.0 - p) / set.n() as f64).sqrt();
        assert!((emp - p).abs() < band, "emp {emp} vs {p}");
    }

    #[test]
    fn empirical_tail_order_statistics() {
        let set = SampleSet::from_draws(
            0,
            alloc::vec![4.0, 1.0, 3.0, 2.0],
            alloc::vec![0.5, 0.5, 0.5, 0.5],
        )
        .unwrap();
        assert_eq!(empirical_tail(&set, Seq::R, 0.5), 1.0);
        assert_eq!(empirical_tail(&set, Seq::R, 4.0), 0.0);
        assert_eq!(empirical_tail(&set, Seq::R, 2.0), 0.5);
        assert_eq!(empirical_tail(&set, Seq::X, 1.0), 0.5);
    }

    #[test]
    fn monte_carlo_consistency_band() {
        // |empirical - exact| within 4 sqrt(p(1-p)/n) across a grid.
        let r = model(Family::Pareto { alpha: 2.0, theta: 1.0 });
        let s = model(Family::Beta { a: 1.0, b: 2.0 });
        let n = 1_000_000;
        let set = draw_samples(&r, &s, n, 20240817).unwrap();
        for i in 0..20 {
            let x = 0.05 + 0.45 * i as f64;
            let p = exact_tail(&r, &s, x).unwrap();
            let emp = empirical_tail(&set, Seq::X, x);
            let band = 4.0 * (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (emp - p).abs() <= band,
                "x={x}: empirical {emp} exact {p} band {band}"
            );
        }
    }
}
