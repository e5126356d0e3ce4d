//! Rational Padé bounds on the normalized exponential integral
//! `alpha^m e^alpha int_alpha^inf e^-t / t^m dt`.
//!
//! Supported `(m, order)` combinations:
//!
//! | order | m     | lower | upper |
//! |-------|-------|-------|-------|
//! | 1     | 1     | yes   | yes   |
//! | 2     | >= 1  | yes   | yes   |
//! | 3     | 1     | no    | yes   |
//! | 4     | 1     | yes   | yes   |
//! | 4     | >= 2  | no    | yes   |
//!
//! Order 2 and the order-4 upper bound come in a family indexed by `m`; at
//! `m = 1` the order-2 family coincides with the plain order-2 approximant.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PadeSandwich {
    pub alpha: f64,
    pub m: u32,
    pub order: u32,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl PadeSandwich {
    pub fn contains(&self, value: f64) -> bool {
        self.lower.is_none_or(|l| l <= value) && self.upper.is_none_or(|u| value <= u)
    }
}

/// Polynomial coefficients, highest degree first.
type Poly = Vec<f64>;

fn horner(p: &[f64], a: f64) -> f64 {
    p.iter().fold(0.0, |acc, c| acc * a + c)
}

/// `num(a) / den(a)`; near 1 it is evaluated as `1 - (den - num)/den` so the
/// gap between two close approximants survives rounding.
fn rational(num: &[f64], den: &[f64], a: f64) -> f64 {
    let d = horner(den, a);
    let direct = horner(num, a) / d;
    if direct < 0.5 {
        return direct;
    }
    let pad = den.len() - num.len();
    let diff: Poly = den
        .iter()
        .enumerate()
        .map(|(i, c)| if i < pad { *c } else { c - num[i - pad] })
        .collect();
    1.0 - horner(&diff, a) / d
}

fn order1(a: f64) -> (f64, f64) {
    (rational(&[1.0, 0.0], &[1.0, 1.0], a), rational(&[1.0, 1.0], &[1.0, 2.0], a))
}

/// Order-2 family; `k = m + 1`.
fn order2(a: f64, m: u32) -> (f64, f64) {
    let k = m as f64 + 1.0;
    let lower = rational(&[1.0, k + 1.0, 0.0], &[1.0, 2.0 * k, k * (k - 1.0)], a);
    let upper = rational(&[1.0, k + 3.0, 2.0], &[1.0, 2.0 * (k + 1.0), k * (k + 1.0)], a);
    (lower, upper)
}

fn order3_upper(a: f64) -> f64 {
    rational(&[1.0, 11.0, 26.0, 6.0], &[1.0, 12.0, 36.0, 24.0], a)
}

fn order4_lower(a: f64) -> f64 {
    rational(&[1.0, 15.0, 58.0, 50.0, 0.0], &[1.0, 16.0, 72.0, 96.0, 24.0], a)
}

/// Order-4 upper family; `k = m + 3`.
fn order4_upper(a: f64, m: u32) -> f64 {
    let k = m as f64 + 3.0;
    let num = [
        1.0,
        3.0 * k + 7.0,
        3.0 * (k * k + 3.0 * k + 6.0),
        (k + 3.0) * (k * k - k + 10.0),
        24.0,
    ];
    let den = [
        1.0,
        4.0 * (k + 1.0),
        6.0 * k * (k + 1.0),
        4.0 * k * (k * k - 1.0),
        k * (k * k - 1.0) * (k - 2.0),
    ];
    rational(&num, &den, a)
}

pub fn pade_bounds(alpha: f64, m: u32, order: u32) -> Result<PadeSandwich> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(format!("alpha = {alpha} must be positive")));
    }
    let (lower, upper) = match (order, m) {
        (1, 1) => {
            let (l, u) = order1(alpha);
            (Some(l), Some(u))
        }
        (2, m) if m >= 1 => {
            let (l, u) = order2(alpha, m);
            (Some(l), Some(u))
        }
        (3, 1) => (None, Some(order3_upper(alpha))),
        (4, 1) => (Some(order4_lower(alpha)), Some(order4_upper(alpha, 1))),
        (4, m) if m >= 2 => (None, Some(order4_upper(alpha, m))),
        _ => return Err(Error::UnsupportedPade { m, order }),
    };
    Ok(PadeSandwich { alpha, m, order, lower, upper })
}

/// Every supported `(m, order)` pair with `m <= max_m`.
pub fn supported_combinations(max_m: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(1, 1)];
    out.extend((1..=max_m).map(|m| (m, 2)));
    out.push((1, 3));
    out.extend((1..=max_m).map(|m| (m, 4)));
    out
}
