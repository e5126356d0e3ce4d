//! Closed-form bounds on the moments of `X_k = 1/(F_{n-k} + Z_k)^2` with
//! `Z_k ~ Gamma(k, e C / k)`, `C = n(n-1)/2`, and the ratio bound they feed.
//!
//! The rationals come from integrating the Gamma density against
//! `(F + x)^-2` and `(F + x)^-4` and replacing the resulting exponential
//! integrals by Padé bounds (see [`super::pade`]).

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flp::{alg_moments, kappa, CostProfile};
use crate::numfmt::csv_num;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentBounds {
    pub k: usize,
    /// `F_{n-k}`.
    pub prefix_cost: f64,
    pub exk_lower: f64,
    pub exk_upper: f64,
    pub exk2_upper: f64,
    /// `exk2_upper - exk_lower^2`.
    pub var_upper: f64,
}

/// `C(n, 2)` as an exact integer.
pub fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * (n - 1) / 2
}

/// Upper bound on `E[X_k]`.
pub fn exk_upper(a: f64, k: f64, f: f64) -> f64 {
    let a2 = a * a;
    (a2 * f + 2.0 * k * a) / (a2 * f.powi(3) + 2.0 * k * (k + 1.0) * a * f * f + k.powi(3) * (k + 1.0) * f)
}

/// Lower bound on `E[X_k]`.
pub fn exk_lower(a: f64, k: f64, f: f64) -> f64 {
    let a2 = a * a;
    a2 / (a2 * f * f + 2.0 * k * k * a * f + k.powi(3) * (k - 1.0))
}

/// Upper bound on `E[X_k^2]`; `k = 1` has its own rational.
pub fn exk2_upper(a: f64, k: usize, f: f64) -> f64 {
    if k == 1 {
        let a2 = a * a;
        return (3.0 * a2 * f + 2.0 * a)
            / (3.0 * a2 * f.powi(5) + 12.0 * a * f.powi(4) + 6.0 * f.powi(3));
    }
    let kf = k as f64;
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    let num = a4 * f + 4.0 * kf * a3;
    // the last term vanishes exactly at k = 2
    let den = a4 * f.powi(5)
        + 4.0 * kf * (kf + 1.0) * a3 * f.powi(4)
        + 6.0 * kf.powi(3) * (kf + 1.0) * a2 * f.powi(3)
        + 4.0 * kf.powi(4) * (kf * kf - 1.0) * a * f * f
        + kf.powi(5) * (kf * kf - 1.0) * (kf - 2.0) * f;
    num / den
}

pub fn moment_bounds(n: usize, k: usize, prefix_cost: f64) -> Result<MomentBounds> {
    if n < 2 || !(1..n).contains(&k) {
        return Err(Error::invalid(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    if !(prefix_cost.is_finite() && prefix_cost > 0.0) {
        return Err(Error::invalid(format!("F = {prefix_cost} must be positive")));
    }
    let a = E * pairs(n) as f64;
    let kf = k as f64;
    let lo = exk_lower(a, kf, prefix_cost);
    let up = exk_upper(a, kf, prefix_cost);
    let up2 = exk2_upper(a, k, prefix_cost);
    Ok(MomentBounds {
        k,
        prefix_cost,
        exk_lower: lo,
        exk_upper: up,
        exk2_upper: up2,
        var_upper: (up2 - lo * lo).max(0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub kappa: usize,
    pub theorem2_value: f64,
    pub per_k: Vec<MomentBounds>,
    /// `max{1/F_n^2, max_k exk_upper}`.
    pub max_term: f64,
    pub variance_sum: f64,
    pub alg_second_moment: f64,
}

impl BoundReport {
    /// Per-k table: `k,F_{n-k},exk_lower,exk_upper,exk2_upper,var_upper`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,F_{n-k},exk_lower,exk_upper,exk2_upper,var_upper\n");
        for r in &self.per_k {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.k,
                csv_num(r.prefix_cost),
                csv_num(r.exk_lower),
                csv_num(r.exk_upper),
                csv_num(r.exk2_upper),
                csv_num(r.var_upper)
            ));
        }
        out
    }
}

/// Upper bound on `E[ALG/OPT]`:
///
/// `sqrt(E[ALG^2]) * sqrt(max{1/F_n^2, max_k E[X_k]} + sqrt(sum_k Var(X_k)))`
///
/// with every expectation replaced by its closed-form bound. Total for every
/// cost profile; nothing checks that kappa is large.
pub fn theorem2_bound(costs: &CostProfile) -> BoundReport {
    let n = costs.n();
    let (_, alg_second_moment) = alg_moments(costs);
    let per_k: Vec<MomentBounds> = (1..n)
        .map(|k| moment_bounds(n, k, costs.prefix(n - k)).expect("k in range, F positive"))
        .collect();
    let fnn = costs.prefix(n);
    let max_term = per_k.iter().map(|b| b.exk_upper).fold(1.0 / (fnn * fnn), f64::max);
    let variance_sum: f64 = per_k.iter().map(|b| b.var_upper).sum();
    let theorem2_value = alg_second_moment.sqrt() * (max_term + variance_sum.sqrt()).sqrt();
    BoundReport {
        n,
        kappa: kappa(costs).kappa,
        theorem2_value,
        per_k,
        max_term,
        variance_sum,
        alg_second_moment,
    }
}
