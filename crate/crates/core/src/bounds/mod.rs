//! Closed-form bounds: the lower tail of OPT, the Gamma lower bound on
//! `OPT_{n-k}`, exponential-integral machinery, moment bounds and the
//! assembled bound on the expected approximation ratio.

mod expint;
mod moments;
mod pade;

use std::f64::consts::E;

use rand::Rng;
use serde::Serialize;

pub use expint::{exp_integral, normalized_exp_integral, TRUNCATION};
pub use moments::{moment_bounds, pairs, theorem2_bound, BoundReport, MomentBounds};
pub use pade::{pade_bounds, supported_combinations, PadeSandwich};

use crate::error::{Error, Result};
use crate::flp::{kappa, CostProfile};
use crate::stochastics::{ln_binomial, sample_gamma_int, GammaSpec};

/// Upper bound on `P(OPT < z)`:
///
/// `sum_{i=1}^{zeta} C(n,i) C(n-1,i-1) (1 - e^{-(z - F_i)})^{n-i}`,
/// `zeta = max{k : z >= F_k}`, clamped to `[0, 1]`.
pub fn opt_lower_tail_bound(z: f64, costs: &CostProfile) -> f64 {
    let n = costs.n();
    if z.is_nan() || z <= costs.prefix(1) {
        return 0.0;
    }
    if z > costs.prefix(n) {
        return 1.0;
    }
    let zeta = (1..=n).rev().find(|&k| z >= costs.prefix(k)).unwrap_or(0);
    let nu = n as u64;
    let mut total = 0.0;
    for i in (1..=zeta).rev() {
        let gap = z - costs.prefix(i);
        let power = (n - i) as f64;
        let ln_prob = if power == 0.0 { 0.0 } else { power * (-(-gap).exp_m1()).ln() };
        total += (ln_binomial(nu, i as u64) + ln_binomial(nu - 1, i as u64 - 1) + ln_prob).exp();
    }
    total.min(1.0)
}

/// One draw of `F_{n-k} + Z_k`, `Z_k ~ Gamma(k, e C(n,2) / k)`.
pub fn sample_opt_nk_lb<R: Rng + ?Sized>(costs: &CostProfile, k: usize, rng: &mut R) -> Result<f64> {
    let n = costs.n();
    if !(1..n).contains(&k) {
        return Err(Error::invalid(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let spec = GammaSpec::new(k as u32, E * pairs(n) as f64 / k as f64)?;
    Ok(costs.prefix(n - k) + sample_gamma_int(&spec, rng))
}

/// Asymptotic regime of the equal-cost ratio bound at a concrete `(n, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `f n^3 < 1`: ratio `1 + o(1)`.
    OnePlusO1,
    /// `f n (ln n)^{1/3} <= 1`: ratio `O(1)`.
    Constant,
    /// kappa >= n/2: ratio `O((ln n)^{1/4})`.
    QuarterRootLog,
    /// kappa < n/2; the small-kappa analysis applies instead.
    NotApplicable,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::OnePlusO1 => "one-plus-o1",
            Regime::Constant => "constant",
            Regime::QuarterRootLog => "quarter-root-log",
            Regime::NotApplicable => "not-applicable",
        }
    }
}

/// Classifies an equal-cost profile. `kappa >= n/2` stands in for
/// "kappa linear in n".
pub fn corollary_regime(n: usize, f: f64) -> Result<Regime> {
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    let costs = CostProfile::equal(f, n)?;
    let nf = n as f64;
    Ok(if f * nf.powi(3) < 1.0 {
        Regime::OnePlusO1
    } else if f * nf * nf.ln().cbrt() <= 1.0 {
        Regime::Constant
    } else if 2 * kappa(&costs).kappa >= n {
        Regime::QuarterRootLog
    } else {
        Regime::NotApplicable
    })
}
