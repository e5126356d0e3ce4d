//! Uncapacitated facility location on a metric with sorted opening costs.
//!
//! Facility `i` of the sorted cost profile sits at vertex `i` (0-based), so
//! vertex 0 is always the cheapest facility.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{EdgeWeights, Metric};
use crate::stochastics::{harmonic_range, harmonic_range_sq};

/// Exact enumeration refuses instances above this size.
pub const MAX_ENUM_N: usize = 20;

/// Default exponent `q` of the polynomial cost-ratio assumption `f_n / f_1 <= n^q`.
pub const DEFAULT_RATIO_EXPONENT: f64 = 3.0;

/// Opening costs sorted ascending, with prefix sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProfile {
    f: Vec<f64>,
    /// `prefix[k] = f_1 + ... + f_k`, `prefix[0] = 0`.
    prefix: Vec<f64>,
}

impl CostProfile {
    pub fn new(mut raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::invalid("costs: empty cost list"));
        }
        if let Some(i) = raw.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::invalid(format!(
                "costs[{i}] = {} is not a positive finite number",
                raw[i]
            )));
        }
        raw.sort_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(raw.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &c in &raw {
            acc += c;
            prefix.push(acc);
        }
        Ok(CostProfile { f: raw, prefix })
    }

    pub fn equal(f: f64, n: usize) -> Result<Self> {
        Self::new(vec![f; n])
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Sorted costs, 0-based: `costs()[i]` is `f_{i+1}`.
    pub fn costs(&self) -> &[f64] {
        &self.f
    }

    /// `f_i` for 1-based `i`.
    pub fn f(&self, i: usize) -> f64 {
        self.f[i - 1]
    }

    /// `F_k`, with `F_0 = 0`.
    pub fn prefix(&self, k: usize) -> f64 {
        self.prefix[k]
    }

    /// `f_n / f_1`.
    pub fn spread(&self) -> f64 {
        self.f[self.f.len() - 1] / self.f[0]
    }

    /// Expected cost of opening the `k` cheapest facilities:
    /// `g(k) = F_k + H_{n-1} - H_{k-1}`.
    pub fn expected_cost_k_cheapest(&self, k: usize) -> f64 {
        assert!((1..=self.n()).contains(&k), "k out of range");
        self.prefix(k) + harmonic_range(k, self.n() - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    metric: Metric,
    costs: CostProfile,
    weights: Option<EdgeWeights>,
    warnings: Vec<String>,
}

impl Instance {
    /// Pairs a metric with raw opening costs (sorted here). Warns when the
    /// cost spread exceeds `n^3`.
    pub fn new(metric: Metric, raw_costs: Vec<f64>) -> Result<Self> {
        Self::with_ratio_exponent(metric, raw_costs, DEFAULT_RATIO_EXPONENT)
    }

    pub fn with_ratio_exponent(metric: Metric, raw_costs: Vec<f64>, q: f64) -> Result<Self> {
        if raw_costs.len() != metric.n() {
            return Err(Error::invalid(format!(
                "costs: expected {} entries to match the metric, got {}",
                metric.n(),
                raw_costs.len()
            )));
        }
        let costs = CostProfile::new(raw_costs)?;
        let n = costs.n() as f64;
        let mut warnings = Vec::new();
        if costs.spread() > n.powf(q) {
            let msg = format!(
                "cost spread f_n/f_1 = {:e} exceeds n^{q} = {:e}",
                costs.spread(),
                n.powf(q)
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        Ok(Instance { metric, costs, weights: None, warnings })
    }

    /// Attaches the edge weights the metric was built from, so the instance
    /// can be written in its `weights` form.
    pub fn with_weights(mut self, weights: EdgeWeights) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn n(&self) -> usize {
        self.metric.n()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn costs(&self) -> &CostProfile {
        &self.costs
    }

    pub fn weights(&self) -> Option<&EdgeWeights> {
        self.weights.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// An open-facility set and its cost breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Open vertices, ascending, 0-based.
    pub open: Vec<usize>,
    pub opening_cost: f64,
    pub connection_cost: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaInfo {
    pub kappa: usize,
    /// `F_kappa`.
    pub prefix_cost: f64,
}

/// `kappa = max { i : f_i < 1/(i-1) }`; the predicate holds vacuously for `i = 1`.
pub fn kappa(costs: &CostProfile) -> KappaInfo {
    let kappa = (2..=costs.n())
        .rev()
        .find(|&i| costs.f(i) < 1.0 / (i - 1) as f64)
        .unwrap_or(1);
    KappaInfo { kappa, prefix_cost: costs.prefix(kappa) }
}

/// `c(U) = f(U) + sum_v min_{u in U} d(u, v)`.
pub fn solution_cost(inst: &Instance, open: &[usize]) -> Result<Solution> {
    if open.is_empty() {
        return Err(Error::invalid("open set must be nonempty"));
    }
    let n = inst.n();
    let mut set = open.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&u| u >= n) {
        return Err(Error::invalid(format!("vertex {bad} out of range for n={n}")));
    }
    let opening_cost: f64 = set.iter().map(|&u| inst.costs.costs()[u]).sum();
    let connection_cost: f64 = (0..n)
        .map(|v| {
            set.iter()
                .map(|&u| inst.metric.dist(u, v))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(Solution { open: set, opening_cost, connection_cost, total: opening_cost + connection_cost })
}

/// Opens the `kappa` cheapest facilities.
pub fn alg_solve(inst: &Instance) -> Solution {
    let k = kappa(&inst.costs).kappa;
    let open: Vec<usize> = (0..k).collect();
    solution_cost(inst, &open).expect("kappa >= 1")
}

fn lex_less(a: &[usize], b: &[usize]) -> bool {
    a.cmp(b) == Ordering::Less
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

struct Enumerator<'a> {
    inst: &'a Instance,
    n: usize,
    only_size: Option<usize>,
    /// `mins[depth * n + v]`: distance from v to the open set chosen so far.
    mins: Vec<f64>,
    /// best (total, opening, connection, mask) per set size, index = size
    best: Vec<Option<(f64, f64, f64, u32)>>,
}

impl Enumerator<'_> {
    fn offer(&mut self, size: usize, opening: f64, conn: f64, mask: u32) {
        let total = opening + conn;
        let slot = &mut self.best[size];
        let replace = match *slot {
            None => true,
            Some((t, _, _, m)) => {
                total < t || (total == t && lex_less(&mask_to_vec(mask), &mask_to_vec(m)))
            }
        };
        if replace {
            *slot = Some((total, opening, conn, mask));
        }
    }

    /// Decides vertex `i`; `depth` indexes the current `mins` row.
    fn visit(&mut self, i: usize, depth: usize, size: usize, opening: f64, conn: f64, mask: u32) {
        let n = self.n;
        if let Some(k) = self.only_size {
            if size > k || size + (n - i) < k {
                return;
            }
        }
        if i == n {
            if size > 0 {
                self.offer(size, opening, conn, mask);
            }
            return;
        }
        // include vertex i
        let (cur, next) = self.mins.split_at_mut((depth + 1) * n);
        let cur = &cur[depth * n..];
        let next = &mut next[..n];
        let row = self.inst.metric.row(i);
        let mut sum = 0.0;
        for v in 0..n {
            let m = cur[v].min(row[v]);
            next[v] = m;
            sum += m;
        }
        let f = self.inst.costs.costs()[i];
        self.visit(i + 1, depth + 1, size + 1, opening + f, sum, mask | (1 << i));
        // exclude vertex i
        self.visit(i + 1, depth, size, opening, conn, mask);
    }
}

/// Best solution of every size `1..=n` (index `k-1`), or of one size only.
fn enumerate(inst: &Instance, only_size: Option<usize>) -> Result<Vec<Option<Solution>>> {
    let n = inst.n();
    if n > MAX_ENUM_N {
        return Err(Error::SizeLimit { n, max: MAX_ENUM_N });
    }
    let mins = vec![f64::INFINITY; (n + 1) * n];
    let mut e = Enumerator { inst, n, only_size, mins, best: vec![None; n + 1] };
    e.visit(0, 0, 0, 0.0, f64::INFINITY, 0);
    Ok(e.best[1..]
        .iter()
        .map(|b| {
            b.map(|(total, opening, conn, mask)| Solution {
                open: mask_to_vec(mask),
                opening_cost: opening,
                connection_cost: conn,
                total,
            })
        })
        .collect())
}

/// `OPT_k` for every `k = 1..=n` in one pass; entry `k-1` holds size `k`.
pub fn opt_exact_by_size(inst: &Instance) -> Result<Vec<Solution>> {
    Ok(enumerate(inst, None)?
        .into_iter()
        .map(|s| s.expect("every size has a subset"))
        .collect())
}

/// Optimal solution over all nonempty subsets; among equal totals the
/// lexicographically smallest vertex list wins.
pub fn opt_exact(inst: &Instance) -> Result<Solution> {
    let per_size = opt_exact_by_size(inst)?;
    Ok(best_of(per_size.into_iter()))
}

pub(crate) fn best_of(sols: impl Iterator<Item = Solution>) -> Solution {
    sols.reduce(|a, b| {
        if b.total < a.total || (b.total == a.total && lex_less(&b.open, &a.open)) {
            b
        } else {
            a
        }
    })
    .expect("nonempty")
}

/// Best solution opening exactly `k` facilities.
pub fn opt_exact_k(inst: &Instance, k: usize) -> Result<Solution> {
    let n = inst.n();
    if !(1..=n).contains(&k) {
        return Err(Error::invalid(format!("k = {k} outside 1..={n}")));
    }
    let mut best = enumerate(inst, Some(k))?;
    Ok(best.swap_remove(k - 1).expect("size k reachable"))
}

/// `(E[ALG], E[ALG^2])` from the known law of the heuristic's cost.
pub fn alg_moments(costs: &CostProfile) -> (f64, f64) {
    let n = costs.n();
    let KappaInfo { kappa, prefix_cost } = kappa(costs);
    if kappa == n {
        return (prefix_cost, prefix_cost * prefix_cost);
    }
    let mean = prefix_cost + harmonic_range(kappa, n - 1);
    (mean, mean * mean + harmonic_range_sq(kappa, n - 1))
}
