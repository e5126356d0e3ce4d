//! Sampling primitives, closed-form CDFs of sums of exponentials, and the
//! Kolmogorov-Smirnov and dominance checks used to test distributional claims.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flp::{kappa, CostProfile};
use crate::rng::sample_exp;

/// Smallest sample accepted by the KS tests.
pub const KS_MIN_SAMPLES: usize = 10;

/// `H_n`, summed from the smallest term up. `H_0 = 0`.
pub fn harmonic(n: usize) -> f64 {
    harmonic_range(1, n)
}

/// `sum_{i=lo}^{hi} 1/i`; zero when `lo > hi`.
pub fn harmonic_range(lo: usize, hi: usize) -> f64 {
    assert!(lo >= 1 || lo > hi, "harmonic terms start at 1");
    (lo..=hi).rev().map(|i| 1.0 / i as f64).sum()
}

/// `sum_{i=lo}^{hi} 1/i^2`; zero when `lo > hi`.
pub fn harmonic_range_sq(lo: usize, hi: usize) -> f64 {
    assert!(lo >= 1 || lo > hi, "harmonic terms start at 1");
    (lo..=hi).rev().map(|i| 1.0 / (i as f64 * i as f64)).sum()
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    let k = k.min(n - k);
    (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum()
}

/// Rates of independent exponential summands.
#[derive(Debug, Clone, PartialEq)]
pub struct RateList(Vec<f64>);

impl RateList {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::invalid("rate list is empty"));
        }
        if let Some(i) = rates.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::invalid(format!("rate[{i}] = {} is not positive", rates[i])));
        }
        Ok(RateList(rates))
    }

    /// Integer rates `lo, lo+1, ..., hi`.
    pub fn integer_range(lo: usize, hi: usize) -> Result<Self> {
        Self::new((lo..=hi).map(|i| i as f64).collect())
    }

    pub fn rates(&self) -> &[f64] {
        &self.0
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().map(|r| 1.0 / r).sum()
    }
}

/// Erlang distribution: integer shape, positive rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSpec {
    shape: u32,
    rate: f64,
}

impl GammaSpec {
    pub fn new(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 {
            return Err(Error::invalid("gamma shape must be >= 1"));
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::invalid(format!("gamma rate {rate} is not positive")));
        }
        Ok(GammaSpec { shape, rate })
    }

    pub fn shape(&self) -> u32 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn mean(&self) -> f64 {
        self.shape as f64 / self.rate
    }
}

/// One draw of `sum_i Exp(rate_i)`.
pub fn sample_exp_sum<R: Rng + ?Sized>(rates: &RateList, rng: &mut R) -> f64 {
    rates.0.iter().map(|&r| sample_exp(r, rng)).sum()
}

/// One draw of `Gamma(shape, rate)` as a sum of `shape` exponentials.
pub fn sample_gamma_int<R: Rng + ?Sized>(spec: &GammaSpec, rng: &mut R) -> f64 {
    (0..spec.shape).map(|_| sample_exp(spec.rate, rng)).sum()
}

/// The `j`-th smallest (1-based) of `m` i.i.d. `Exp(1)` draws.
pub fn sample_exp_order_stat<R: Rng + ?Sized>(m: usize, j: usize, rng: &mut R) -> f64 {
    assert!((1..=m).contains(&j));
    let mut xs: Vec<f64> = (0..m).map(|_| sample_exp(1.0, rng)).collect();
    let (_, x, _) = xs.select_nth_unstable_by(j - 1, f64::total_cmp);
    *x
}

/// CDF of `sum_{i=kappa}^{n-1} Exp(i)` at `x`.
///
/// Uses the order-statistic form: the sum has the law of the `(n-kappa)`-th
/// smallest of `n-1` unit exponentials, so the CDF is
/// `sum_{j=n-kappa}^{n-1} C(n-1, j) p^j q^(n-1-j)` with `p = 1 - e^-x`, `q = e^-x`.
pub fn sum_exp_range_cdf(x: f64, kappa: usize, n: usize) -> Result<f64> {
    if kappa < 1 || kappa + 1 > n {
        return Err(Error::invalid(format!("need 1 <= kappa <= n-1, got kappa={kappa}, n={n}")));
    }
    if x.is_nan() {
        return Err(Error::invalid("x is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let m = (n - 1) as u64;
    let ln_p = (-(-x).exp_m1()).ln();
    let term = |j: u64| (ln_binomial(m, j) + j as f64 * ln_p - (m - j) as f64 * x).exp();
    let split = (n - kappa) as u64;
    let upper: f64 = (split..=m).rev().map(term).sum();
    if upper <= 0.5 {
        return Ok(upper);
    }
    // near 1 the complement is the accurate side
    let lower: f64 = (0..split).map(term).sum();
    Ok((1.0 - lower).clamp(0.0, 1.0))
}

/// `P(max of m scaled exponentials <= x) = (1 - e^{-c x})^m`, zero for `x < 0`.
pub fn scaled_max_cdf(x: f64, c: f64, m: u32) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (-(-c * x).exp_m1()).powi(m as i32)
}

/// One draw of ALG from its law: `F_kappa + sum_{i=kappa}^{n-1} Exp(i)`,
/// or exactly `F_n` when `kappa = n`.
pub fn sample_alg_direct<R: Rng + ?Sized>(costs: &CostProfile, rng: &mut R) -> f64 {
    let n = costs.n();
    let k = kappa(costs);
    if k.kappa == n {
        return k.prefix_cost;
    }
    let conn: f64 = (k.kappa..n).map(|i| sample_exp(i as f64, rng)).sum();
    k.prefix_cost + conn
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SampleSize {
    One(usize),
    Two([usize; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: SampleSize,
}

/// Asymptotic Kolmogorov critical coefficient `c(alpha)`.
pub fn ks_coefficient(alpha: f64) -> Result<f64> {
    if alpha == 0.05 {
        Ok(1.358)
    } else if alpha == 0.01 {
        Ok(1.628)
    } else {
        Err(Error::invalid(format!("significance {alpha} not supported (use 0.05 or 0.01)")))
    }
}

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid("sample contains NaN"));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample KS test of `samples` against a continuous `cdf`.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64, alpha: f64) -> Result<KsResult> {
    let n = samples.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n, min: KS_MIN_SAMPLES });
    }
    let c = ks_coefficient(alpha)?;
    let xs = sorted(samples)?;
    let nf = n as f64;
    let mut stat: f64 = 0.0;
    let mut i = 0;
    while i < n {
        // step over ties so the ECDF jump is taken at once
        let x = xs[i];
        let mut j = i;
        while j < n && xs[j] == x {
            j += 1;
        }
        let fx = cdf(x);
        stat = stat.max(j as f64 / nf - fx).max(fx - i as f64 / nf);
        i = j;
    }
    let threshold = c / nf.sqrt();
    Ok(KsResult { statistic: stat, threshold, pass: stat <= threshold, n: SampleSize::One(n) })
}

/// Pairs `(F_a(x) - F_b(x))` over every pooled sample point, in ascending `x`.
fn ecdf_gaps<'a>(a: &'a [f64], b: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        if i >= a.len() && j >= b.len() {
            return None;
        }
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        Some(i as f64 / na - j as f64 / nb)
    })
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<KsResult> {
    for s in [a, b] {
        if s.len() < KS_MIN_SAMPLES {
            return Err(Error::TooFewSamples { got: s.len(), min: KS_MIN_SAMPLES });
        }
    }
    let c = ks_coefficient(alpha)?;
    let (sa, sb) = (sorted(a)?, sorted(b)?);
    let stat = ecdf_gaps(&sa, &sb).fold(0.0_f64, |m, g| m.max(g.abs()));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let threshold = c * ((na + nb) / (na * nb)).sqrt();
    Ok(KsResult {
        statistic: stat,
        threshold,
        pass: stat <= threshold,
        n: SampleSize::Two([a.len(), b.len()]),
    })
}

/// Default tolerance band for [`dominance_check`]: the two-sample KS
/// threshold at `alpha = 0.01`.
pub fn default_dominance_band(n_dominant: usize, n_dominated: usize) -> f64 {
    let (na, nb) = (n_dominant as f64, n_dominated as f64);
    1.628 * ((na + nb) / (na * nb)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceResult {
    pub dominates: bool,
    /// `max_x (F_dominant(x) - F_dominated(x))`, clamped below at 0.
    pub max_violation: f64,
    pub band: f64,
}

/// Empirical check that `dominant` is stochastically at least as large as
/// `dominated`: `F_dominant(x) <= F_dominated(x) + band` at every pooled point.
pub fn dominance_check(dominant: &[f64], dominated: &[f64], band: f64) -> Result<DominanceResult> {
    if dominant.is_empty() || dominated.is_empty() {
        return Err(Error::invalid("dominance check needs two nonempty samples"));
    }
    let (a, b) = (sorted(dominant)?, sorted(dominated)?);
    let max_violation = ecdf_gaps(&a, &b).fold(0.0_f64, f64::max);
    Ok(DominanceResult { dominates: max_violation <= band, max_violation, band })
}

/// Whether `sum_i Exp(rate_i)` dominates `Gamma(m, eta)`, i.e.
/// `prod rate_i <= eta^m`, compared in log space with a relative slack of
/// `1e-12` so exact boundary cases are not lost to rounding.
pub fn gamma_dominance_condition(rates: &RateList, eta: f64) -> Result<bool> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::invalid(format!("eta = {eta} is not positive")));
    }
    let lhs: f64 = rates.0.iter().map(|r| r.ln()).sum();
    let rhs = rates.0.len() as f64 * eta.ln();
    Ok(lhs <= rhs + 1e-12 * lhs.abs().max(rhs.abs()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_from_seed;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(4) - 25.0 / 12.0).abs() < 1e-15);
        assert_eq!(harmonic_range(5, 4), 0.0);
    }

    #[test]
    fn ln_binomial_small() {
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-13);
        assert_eq!(ln_binomial(7, 0), 0.0);
        assert!((ln_binomial(7, 7)).abs() < 1e-15);
    }

    #[test]
    fn rate_and_gamma_validation() {
        assert!(RateList::new(vec![]).is_err());
        assert!(RateList::new(vec![1.0, 0.0]).is_err());
        assert!(GammaSpec::new(0, 1.0).is_err());
        assert!(GammaSpec::new(2, -1.0).is_err());
    }

    #[test]
    fn exp_sum_mean() {
        let rates = RateList::integer_range(4, 9).unwrap();
        let mut rng = stream_from_seed(3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_exp_sum(&rates, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = rates.rates().iter().map(|r| 1.0 / (r * r)).sum::<f64>();
        assert!((rates.mean() - 0.995635).abs() < 1e-6);
        assert!((mean - rates.mean()).abs() < 4.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn gamma_mean_and_erlang_cdf() {
        let spec = GammaSpec::new(3, 2.0).unwrap();
        let mut rng = stream_from_seed(4);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gamma_int(&spec, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let se = (3.0 / 4.0 / n as f64).sqrt();
        assert!((mean - 1.5).abs() < 4.0 * se);

        let e2 = GammaSpec::new(2, 1.0).unwrap();
        let ys: Vec<f64> = (0..20_000).map(|_| sample_gamma_int(&e2, &mut rng)).collect();
        let ks = ks_one_sample(&ys, |x| 1.0 - (-x).exp() * (1.0 + x), 0.01).unwrap();
        assert!(ks.pass, "{ks:?}");
    }

    #[test]
    fn gamma_shape_one_is_exponential() {
        let spec = GammaSpec::new(1, 2.5).unwrap();
        let mut a = stream_from_seed(5);
        let mut b = stream_from_seed(5);
        for _ in 0..100 {
            assert_eq!(sample_gamma_int(&spec, &mut a), sample_exp(2.5, &mut b));
        }
    }

    #[test]
    fn range_cdf_special_cases() {
        let n = 7;
        for &x in &[0.01, 0.3, 1.0, 2.5] {
            let single = sum_exp_range_cdf(x, n - 1, n).unwrap();
            assert!((single - (1.0 - (-(6.0 * x)).exp())).abs() < 1e-14);
            let max = sum_exp_range_cdf(x, 1, n).unwrap();
            assert!((max - (1.0 - (-x).exp()).powi(6)).abs() < 1e-14);
            assert!((max - scaled_max_cdf(x, 1.0, 6)).abs() < 1e-14);
        }
        assert_eq!(sum_exp_range_cdf(-1.0, 2, 5).unwrap(), 0.0);
        assert!(sum_exp_range_cdf(1.0, 0, 5).is_err());
        assert!(sum_exp_range_cdf(1.0, 5, 5).is_err());
    }

    #[test]
    fn range_cdf_large_n_is_finite() {
        let v = sum_exp_range_cdf(3.0, 50, 400).unwrap();
        assert!(v.is_finite() && (0.0..=1.0).contains(&v));
        assert!(sum_exp_range_cdf(50.0, 1, 400).unwrap() > 0.999);
    }

    #[test]
    fn scaled_max_examples() {
        assert!((scaled_max_cdf(2f64.ln(), 1.0, 2) - 0.25).abs() < 1e-15);
        assert!((scaled_max_cdf(0.7, 3.0, 1) - (1.0 - (-2.1f64).exp())).abs() < 1e-15);
        assert_eq!(scaled_max_cdf(-0.1, 3.0, 4), 0.0);
    }

    #[test]
    fn alg_direct_cases() {
        let mut rng = stream_from_seed(6);
        let all_open = CostProfile::equal(0.25, 4).unwrap();
        for _ in 0..10 {
            assert_eq!(sample_alg_direct(&all_open, &mut rng), 1.0);
        }
        let c = CostProfile::equal(0.3, 10).unwrap();
        for _ in 0..1000 {
            assert!(sample_alg_direct(&c, &mut rng) >= 1.2 - 1e-15);
        }
    }

    #[test]
    fn ks_rejects_wrong_rate() {
        let mut rng = stream_from_seed(7);
        let xs: Vec<f64> = (0..10_000).map(|_| sample_exp(1.0, &mut rng)).collect();
        let r = ks_one_sample(&xs, |x| 1.0 - (-2.0 * x).exp(), 0.01).unwrap();
        assert!(!r.pass);
        assert!((r.statistic - 0.25).abs() < 0.03, "{r:?}");
        let ok = ks_one_sample(&xs, |x| 1.0 - (-x).exp(), 0.05).unwrap();
        assert!(ok.pass, "{ok:?}");
    }

    #[test]
    fn ks_point_mass() {
        let xs = vec![1.0; 1000];
        let r = ks_one_sample(&xs, |x| 1.0 - (-x).exp(), 0.05).unwrap();
        assert!(r.statistic >= 0.5);
    }

    #[test]
    fn ks_errors() {
        assert!(matches!(
            ks_one_sample(&[1.0; 9], |x| x, 0.05),
            Err(Error::TooFewSamples { got: 9, min: 10 })
        ));
        assert!(ks_two_sample(&[1.0; 9], &[1.0; 20], 0.05).is_err());
        assert!(ks_one_sample(&[1.0; 20], |x| x, 0.1).is_err());
    }

    #[test]
    fn ks_two_sample_cases() {
        let mut rng = stream_from_seed(8);
        let a: Vec<f64> = (0..10_000).map(|_| sample_exp(1.0, &mut rng)).collect();
        let same = ks_two_sample(&a, &a, 0.01).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert!(same.pass);
        let b: Vec<f64> = (0..10_000).map(|_| sample_exp(3.0, &mut rng)).collect();
        assert!(!ks_two_sample(&a, &b, 0.01).unwrap().pass);
    }

    #[test]
    fn dominance_cases() {
        let mut rng = stream_from_seed(9);
        let base: Vec<f64> = (0..5000).map(|_| sample_exp(1.0, &mut rng)).collect();
        let shifted: Vec<f64> = base.iter().map(|x| x + 1.0).collect();
        assert!(dominance_check(&shifted, &base, 0.0).unwrap().dominates);

        let slow: Vec<f64> = (0..5000).map(|_| sample_exp(0.5, &mut rng)).collect();
        let band = default_dominance_band(5000, 5000);
        // Exp(1/2) is the larger one, so Exp(1) cannot dominate it
        assert!(!dominance_check(&base, &slow, band).unwrap().dominates);
        assert!(dominance_check(&slow, &base, band).unwrap().dominates);
        assert!(dominance_check(&[], &base, band).is_err());
    }

    #[test]
    fn gamma_condition_examples() {
        let eta = 1.7;
        assert!(gamma_dominance_condition(&RateList::new(vec![eta; 5]).unwrap(), eta).unwrap());
        assert!(gamma_dominance_condition(&RateList::new(vec![1.0, 4.0]).unwrap(), 2.0).unwrap());
        assert!(!gamma_dominance_condition(&RateList::new(vec![1.0, 4.1]).unwrap(), 2.0).unwrap());

        let (n, k) = (8usize, 3usize);
        let c = (n * (n - 1) / 2) as f64;
        let rates = RateList::new((0..k).map(|i| (c - i as f64) / (k - i) as f64).collect()).unwrap();
        let eta = std::f64::consts::E * c / k as f64;
        assert!(gamma_dominance_condition(&rates, eta).unwrap());
    }

    #[test]
    fn order_stat_sampler_picks_rank() {
        let mut rng = stream_from_seed(10);
        let mut r2 = stream_from_seed(10);
        let x = sample_exp_order_stat(5, 5, &mut rng);
        let xs: Vec<f64> = (0..5).map(|_| sample_exp(1.0, &mut r2)).collect();
        assert_eq!(x, xs.iter().cloned().fold(f64::MIN, f64::max));
    }
}
