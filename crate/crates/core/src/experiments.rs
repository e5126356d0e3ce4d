//! Seeded Monte Carlo harness.
//!
//! Replication `r` of an experiment draws everything from a stream seeded by
//! `derive_seed(master_seed, &[.., r, ..])`, replications run on the ambient
//! rayon pool, and records are collected in replication order. Results are
//! therefore bit-identical for any worker count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{opt_lower_tail_bound, sample_opt_nk_lb, theorem2_bound};
use crate::error::{Error, Result};
use crate::flp::{alg_moments, alg_solve, best_of, kappa, opt_exact_by_size, CostProfile, Instance, MAX_ENUM_N};
use crate::metric::{build_metric, sample_edge_weights};
use crate::numfmt::{csv_num, format_sig};
use crate::rng::{derive_seed, stream_from_seed, Stream};
use crate::stochastics::{
    dominance_check, ks_coefficient, ks_one_sample, ks_two_sample, sample_alg_direct,
    sample_exp_order_stat, sample_exp_sum, sum_exp_range_cdf, DominanceResult, KsResult, RateList,
};

/// Largest `n` the bound suite accepts (it needs every `OPT_k`).
pub const MAX_BOUND_SUITE_N: usize = 16;

/// Slack, in standard errors, granted to empirical estimates compared with
/// exact bounds.
pub const SE_SLACK: f64 = 3.0;

/// Allowed increase of the mean ratio from the smallest to the largest `n`
/// in a sweep.
pub const TREND_SLACK: f64 = 0.05;

// stream tags
const TAG_DIRECT: u64 = 1;
const TAG_RENYI: u64 = 2;
const TAG_LOWER: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostSpec {
    Equal(f64),
    Explicit(Vec<f64>),
}

impl CostSpec {
    pub fn raw(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            CostSpec::Equal(f) => Ok(vec![*f; n]),
            CostSpec::Explicit(v) if v.len() == n => Ok(v.clone()),
            CostSpec::Explicit(v) => Err(Error::invalid(format!(
                "cost list has {} entries but n = {n}",
                v.len()
            ))),
        }
    }

    pub fn profile(&self, n: usize) -> Result<CostProfile> {
        CostProfile::new(self.raw(n)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Ratio,
    Distribution,
    Bounds,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub costs: CostSpec,
    pub replications: usize,
    pub master_seed: u64,
    /// KS significance, 0.05 or 0.01.
    pub alpha: f64,
    /// `(lo, hi, steps)` for the OPT tail grid; defaults to `(F_1, 3.0, 20)`.
    pub z_grid: Option<(f64, f64, usize)>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, costs: CostSpec, replications: usize, master_seed: u64) -> Self {
        ExperimentConfig { kind, n, costs, replications, master_seed, alpha: 0.01, z_grid: None }
    }

    fn validate(&self, max_n: usize) -> Result<CostProfile> {
        if self.replications == 0 {
            return Err(Error::invalid("replications must be >= 1"));
        }
        if self.n < 2 {
            return Err(Error::invalid(format!("need n >= 2, got {}", self.n)));
        }
        if self.n > max_n {
            return Err(Error::SizeLimit { n: self.n, max: max_n });
        }
        ks_coefficient(self.alpha)?;
        self.costs.profile(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub seed: u64,
    pub alg: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    /// `OPT_k` for `k = 1..=n`.
    pub opt_k: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean: f64,
    /// Standard error of the mean.
    pub se: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn of(xs: &[f64]) -> Aggregate {
        let count = xs.len();
        assert!(count > 0);
        let nf = count as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = if count > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0)
        } else {
            0.0
        };
        Aggregate {
            count,
            mean,
            se: (var / nf).sqrt(),
            min: xs.iter().cloned().fold(f64::INFINITY, f64::min),
            max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedKs {
    pub name: String,
    #[serde(flatten)]
    pub result: KsResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedDominance {
    pub k: usize,
    #[serde(flatten)]
    pub result: DominanceResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailPoint {
    pub z: f64,
    pub empirical: f64,
    pub se: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBoundComparison {
    pub empirical_mean: f64,
    pub empirical_se: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub kappa: usize,
    pub alg: Aggregate,
    pub opt: Option<Aggregate>,
    pub ratio: Option<Aggregate>,
    pub ks: Vec<NamedKs>,
    pub dominance: Vec<NamedDominance>,
    pub tail_grid: Vec<TailPoint>,
    pub ratio_bound: Option<RatioBoundComparison>,
    pub verdicts: Vec<Verdict>,
    pub records: Vec<ReplicationRecord>,
}

impl ExperimentResult {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// Per-replication rows: `rep,seed,ALG,OPT,ratio`.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("rep,seed,ALG,OPT,ratio\n");
        let opt = |x: Option<f64>| x.map(csv_num).unwrap_or_default();
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{}", r.rep, r.seed, csv_num(r.alg), opt(r.opt), opt(r.ratio));
        }
        out
    }

    /// Fixed-column text summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "{:?} experiment: n={} kappa={} reps={} seed={}",
            c.kind, c.n, self.kappa, c.replications, c.master_seed
        );
        let _ = writeln!(out, "{:<12} {:>14} {:>12} {:>14} {:>14}", "quantity", "mean", "se", "min", "max");
        let mut row = |name: &str, a: &Aggregate| {
            let _ = writeln!(
                out,
                "{:<12} {:>14} {:>12} {:>14} {:>14}",
                name,
                format_sig(a.mean, 8),
                format_sig(a.se, 4),
                format_sig(a.min, 8),
                format_sig(a.max, 8)
            );
        };
        row("ALG", &self.alg);
        if let Some(a) = &self.opt {
            row("OPT", a);
        }
        if let Some(a) = &self.ratio {
            row("ALG/OPT", a);
        }
        let _ = writeln!(out, "{:<40} {:>6}  detail", "verdict", "pass");
        for v in &self.verdicts {
            let _ = writeln!(out, "{:<40} {:>6}  {}", v.name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        }
        out
    }
}

struct Replication {
    alg: f64,
    opt_k: Option<Vec<f64>>,
    opt: Option<f64>,
}

fn replicate(costs: &CostProfile, n: usize, seed: u64, with_opt: bool) -> Replication {
    let mut rng = stream_from_seed(seed);
    let weights = sample_edge_weights(n, &mut rng).expect("n >= 2");
    let metric = build_metric(&weights);
    let inst = Instance::new(metric, costs.costs().to_vec()).expect("validated costs");
    let alg = alg_solve(&inst).total;
    if !with_opt {
        return Replication { alg, opt_k: None, opt: None };
    }
    let by_size = opt_exact_by_size(&inst).expect("size checked");
    let opt_k: Vec<f64> = by_size.iter().map(|s| s.total).collect();
    let opt = best_of(by_size.into_iter()).total;
    Replication { alg, opt_k: Some(opt_k), opt: Some(opt) }
}

fn replicate_all(costs: &CostProfile, n: usize, reps: usize, seed_of: impl Fn(usize) -> u64 + Sync, with_opt: bool) -> Vec<ReplicationRecord> {
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let seed = seed_of(r);
            let rep = replicate(costs, n, seed, with_opt);
            ReplicationRecord {
                rep: r,
                seed,
                alg: rep.alg,
                opt: rep.opt,
                ratio: rep.opt.map(|o| rep.alg / o),
                opt_k: rep.opt_k,
            }
        })
        .collect()
}

fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v[((v.len() - 1) as f64 * q).floor() as usize]
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Per-replication invariants: `f_1 <= OPT <= ALG`, `ratio >= 1`, and
/// `OPT = min_k OPT_k`.
fn record_invariants(records: &[ReplicationRecord], costs: &CostProfile) -> Vec<Verdict> {
    let f1 = costs.prefix(1);
    let bad_order = records
        .iter()
        .filter(|r| r.opt.is_some_and(|o| !(f1 <= o && o <= r.alg)))
        .count();
    let bad_ratio = records.iter().filter(|r| r.ratio.is_some_and(|x| x < 1.0)).count();
    let bad_min = records
        .iter()
        .filter(|r| match (&r.opt_k, r.opt) {
            (Some(ks), Some(o)) => ks.iter().cloned().fold(f64::INFINITY, f64::min) != o,
            _ => false,
        })
        .count();
    vec![
        Verdict::new("f1<=OPT<=ALG", bad_order == 0, format!("{bad_order} violating replications")),
        Verdict::new("ratio>=1", bad_ratio == 0, format!("{bad_ratio} violating replications")),
        Verdict::new("OPT=min_k OPT_k", bad_min == 0, format!("{bad_min} violating replications")),
    ]
}

/// `P(ALG > x, OPT < y) <= 2 sqrt(P(ALG > x) P(OPT < y))` on a 3x3 quartile grid.
pub fn joint_event_check(records: &[ReplicationRecord]) -> Verdict {
    let pairs: Vec<(f64, f64)> = records.iter().filter_map(|r| r.opt.map(|o| (r.alg, o))).collect();
    if pairs.is_empty() {
        return Verdict::new("joint-event", true, "no OPT data");
    }
    let algs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let opts: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let n = pairs.len();
    let nf = n as f64;
    let mut worst = f64::NEG_INFINITY;
    for qx in [0.25, 0.5, 0.75] {
        let x = quantile(&algs, qx);
        for qy in [0.25, 0.5, 0.75] {
            let y = quantile(&opts, qy);
            let pa = algs.iter().filter(|&&a| a > x).count() as f64 / nf;
            let pb = opts.iter().filter(|&&o| o < y).count() as f64 / nf;
            let pj = pairs.iter().filter(|&&(a, o)| a > x && o < y).count() as f64 / nf;
            let margin = pj - 2.0 * (pa * pb).sqrt() - SE_SLACK * binomial_se(pj, n);
            worst = worst.max(margin);
        }
    }
    Verdict::new("joint-event", worst <= 0.0, format!("worst margin {}", format_sig(worst, 6)))
}

/// `P(OPT<y) E[ALG/OPT | OPT<y] <= P(OPT<y)/d^2 + int_{1/d^2}^inf P(ALG >= sqrt x) dx`
/// with `d = f_1` and `y` the median of OPT. The integral equals
/// `E[(ALG^2 - 1/d^2)^+]`.
pub fn conditional_ratio_check(records: &[ReplicationRecord], f1: f64) -> Verdict {
    let pairs: Vec<(f64, f64)> = records.iter().filter_map(|r| r.opt.map(|o| (r.alg, o))).collect();
    if pairs.len() < 2 {
        return Verdict::new("conditional-ratio", true, "not enough OPT data");
    }
    let opts: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let y = quantile(&opts, 0.5);
    let cut = 1.0 / (f1 * f1);
    let diffs: Vec<f64> = pairs
        .iter()
        .map(|&(a, o)| {
            let ind = if o < y { 1.0 } else { 0.0 };
            ind * a / o - ind * cut - (a * a - cut).max(0.0)
        })
        .collect();
    let agg = Aggregate::of(&diffs);
    Verdict::new(
        "conditional-ratio",
        agg.mean <= SE_SLACK * agg.se,
        format!("mean(lhs-rhs) = {} (se {})", format_sig(agg.mean, 6), format_sig(agg.se, 4)),
    )
}

fn ratio_experiment_with_path(cfg: &ExperimentConfig, prefix: &[u64]) -> Result<ExperimentResult> {
    let costs = cfg.validate(MAX_ENUM_N)?;
    let n = cfg.n;
    let master = cfg.master_seed;
    let records = replicate_all(
        &costs,
        n,
        cfg.replications,
        |r| {
            let mut path = prefix.to_vec();
            path.push(r as u64);
            derive_seed(master, &path)
        },
        true,
    );
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    let algs: Vec<f64> = records.iter().map(|r| r.alg).collect();
    let opts: Vec<f64> = records.iter().filter_map(|r| r.opt).collect();
    let ratio = Aggregate::of(&ratios);
    let k = kappa(&costs).kappa;

    let mut verdicts = record_invariants(&records, &costs);
    verdicts.push(joint_event_check(&records));
    verdicts.push(conditional_ratio_check(&records, costs.prefix(1)));

    let ratio_bound = (2 * k >= n).then(|| {
        let bound = theorem2_bound(&costs).theorem2_value;
        let pass = ratio.mean - SE_SLACK * ratio.se <= bound;
        verdicts.push(Verdict::new(
            "ratio<=bound",
            pass,
            format!("mean {} vs bound {}", format_sig(ratio.mean, 8), format_sig(bound, 8)),
        ));
        RatioBoundComparison { empirical_mean: ratio.mean, empirical_se: ratio.se, bound, pass }
    });

    let mut config = cfg.clone();
    config.kind = ExperimentKind::Ratio;
    Ok(ExperimentResult {
        config,
        kappa: k,
        alg: Aggregate::of(&algs),
        opt: Some(Aggregate::of(&opts)),
        ratio: Some(ratio),
        ks: vec![],
        dominance: vec![],
        tail_grid: vec![],
        ratio_bound,
        verdicts,
        records,
    })
}

/// ALG versus exact OPT over seeded random metrics.
pub fn run_ratio_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    ratio_experiment_with_path(cfg, &[])
}

/// Distributional checks on the heuristic's cost and on exponential order
/// statistics.
pub fn run_distribution_suite(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let costs = cfg.validate(MAX_ENUM_N)?;
    let n = cfg.n;
    let reps = cfg.replications;
    let master = cfg.master_seed;
    let info = kappa(&costs);
    let (k, fk) = (info.kappa, info.prefix_cost);

    let records = replicate_all(&costs, n, reps, |r| derive_seed(master, &[r as u64]), false);
    let algs: Vec<f64> = records.iter().map(|r| r.alg).collect();
    let direct: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| sample_alg_direct(&costs, &mut stream_from_seed(derive_seed(master, &[r as u64, TAG_DIRECT]))))
        .collect();

    let mut ks = Vec::new();
    let mut verdicts = Vec::new();
    let need_ks = reps >= crate::stochastics::KS_MIN_SAMPLES;

    if k == n {
        let constant = algs.iter().all(|&a| a == fk);
        verdicts.push(Verdict::new("ALG=F_n", constant, format!("F_n = {}", format_sig(fk, 17))));
    } else if need_ks {
        let shifted: Vec<f64> = algs.iter().map(|a| a - fk).collect();
        let r = ks_one_sample(&shifted, |x| sum_exp_range_cdf(x, k, n).expect("1<=kappa<n"), cfg.alpha)?;
        verdicts.push(Verdict::new("ks:ALG-F_kappa", r.pass, ks_detail(&r)));
        ks.push(NamedKs { name: "ALG-F_kappa vs closed form".into(), result: r });
    }
    if need_ks {
        let r = ks_two_sample(&algs, &direct, cfg.alpha)?;
        verdicts.push(Verdict::new("ks:pipeline-vs-direct", r.pass, ks_detail(&r)));
        ks.push(NamedKs { name: "pipeline ALG vs direct draws".into(), result: r });

        for i in 1..n {
            let rates = RateList::integer_range(i, n - 1)?;
            let (order, sums): (Vec<f64>, Vec<f64>) = (0..reps)
                .into_par_iter()
                .map(|r| {
                    let mut rng: Stream =
                        stream_from_seed(derive_seed(master, &[r as u64, TAG_RENYI, i as u64]));
                    (sample_exp_order_stat(n - 1, n - i, &mut rng), sample_exp_sum(&rates, &mut rng))
                })
                .unzip();
            let r = ks_two_sample(&order, &sums, cfg.alpha)?;
            verdicts.push(Verdict::new(format!("ks:renyi i={i}"), r.pass, ks_detail(&r)));
            ks.push(NamedKs { name: format!("order statistic {} of {} vs exp sum from {i}", n - i, n - 1), result: r });
        }
    }

    let alg = Aggregate::of(&algs);
    let (mean, _) = alg_moments(&costs);
    let pass = if alg.se == 0.0 {
        (alg.mean - mean).abs() <= 1e-12 * mean.abs().max(1.0)
    } else {
        (alg.mean - mean).abs() <= 4.0 * alg.se
    };
    verdicts.push(Verdict::new(
        "mean ALG",
        pass,
        format!("sample {} vs exact {} (se {})", format_sig(alg.mean, 8), format_sig(mean, 8), format_sig(alg.se, 4)),
    ));

    let mut config = cfg.clone();
    config.kind = ExperimentKind::Distribution;
    Ok(ExperimentResult {
        config,
        kappa: k,
        alg,
        opt: None,
        ratio: None,
        ks,
        dominance: vec![],
        tail_grid: vec![],
        ratio_bound: None,
        verdicts,
        records,
    })
}

fn ks_detail(r: &KsResult) -> String {
    format!("D = {} vs {}", format_sig(r.statistic, 6), format_sig(r.threshold, 6))
}

/// `(F_1, max(3, F_1), 20)`.
pub fn default_z_grid(costs: &CostProfile) -> (f64, f64, usize) {
    let f1 = costs.prefix(1);
    (f1, f1.max(3.0), 20)
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn z_grid_points((lo, hi, steps): (f64, f64, usize)) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || steps == 0 {
        return Err(Error::invalid(format!("bad z grid {lo}:{hi}:{steps}")));
    }
    Ok((0..steps)
        .map(|i| if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect())
}

/// The OPT tail bound on a z-grid and the Gamma lower bound on `OPT_{n-k}`
/// for every `k`, both against exact enumeration.
pub fn run_bound_suite(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let costs = cfg.validate(MAX_BOUND_SUITE_N)?;
    let n = cfg.n;
    let reps = cfg.replications;
    let master = cfg.master_seed;
    let k_info = kappa(&costs);

    let records = replicate_all(&costs, n, reps, |r| derive_seed(master, &[r as u64]), true);
    let lower: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_from_seed(derive_seed(master, &[r as u64, TAG_LOWER]));
            (1..n).map(|k| sample_opt_nk_lb(&costs, k, &mut rng).expect("k < n")).collect()
        })
        .collect();

    let opts: Vec<f64> = records.iter().filter_map(|r| r.opt).collect();
    let zs = z_grid_points(cfg.z_grid.unwrap_or_else(|| default_z_grid(&costs)))?;
    let steps = zs.len();
    let tail_grid: Vec<TailPoint> = zs
        .into_iter()
        .map(|z| {
            let empirical = opts.iter().filter(|&&o| o < z).count() as f64 / opts.len() as f64;
            let se = binomial_se(empirical, opts.len());
            let bound = opt_lower_tail_bound(z, &costs);
            TailPoint { z, empirical, se, bound, pass: empirical <= bound + SE_SLACK * se }
        })
        .collect();

    let mut verdicts = record_invariants(&records, &costs);
    let tail_fail = tail_grid.iter().filter(|p| !p.pass).count();
    verdicts.push(Verdict::new(
        "opt-tail-bound",
        tail_fail == 0,
        format!("{tail_fail} of {steps} grid points violate"),
    ));
    let f1 = costs.prefix(1);
    let below = opts.iter().filter(|&&o| o < f1).count();
    verdicts.push(Verdict::new(
        "P(OPT<F_1)=0",
        below == 0 && opt_lower_tail_bound(f1, &costs) == 0.0,
        format!("{below} replications below F_1"),
    ));

    let band = ks_coefficient(cfg.alpha)? * (2.0 / reps as f64).sqrt();
    let mut dominance = Vec::new();
    for k in 1..n {
        let opt_nk: Vec<f64> = records
            .iter()
            .map(|r| r.opt_k.as_ref().expect("with_opt")[n - k - 1])
            .collect();
        let lb: Vec<f64> = lower.iter().map(|row| row[k - 1]).collect();
        let d = dominance_check(&opt_nk, &lb, band)?;
        verdicts.push(Verdict::new(
            format!("dominance k={k}"),
            d.dominates,
            format!("max violation {} vs band {}", format_sig(d.max_violation, 6), format_sig(band, 6)),
        ));
        dominance.push(NamedDominance { k, result: d });
    }

    let mut config = cfg.clone();
    config.kind = ExperimentKind::Bounds;
    Ok(ExperimentResult {
        config,
        kappa: k_info.kappa,
        alg: Aggregate::of(&records.iter().map(|r| r.alg).collect::<Vec<_>>()),
        opt: Some(Aggregate::of(&opts)),
        ratio: Some(Aggregate::of(&records.iter().filter_map(|r| r.ratio).collect::<Vec<_>>())),
        ks: vec![],
        dominance,
        tail_grid,
        ratio_bound: None,
        verdicts,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub kappa: usize,
    pub ratio: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub trend_pass: bool,
    pub verdicts: Vec<Verdict>,
    pub results: Vec<ExperimentResult>,
}

impl SweepTable {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,kappa,mean_ratio,se,min,max\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                r.kappa,
                csv_num(r.ratio.mean),
                csv_num(r.ratio.se),
                csv_num(r.ratio.min),
                csv_num(r.ratio.max)
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{:>4} {:>6} {:>14} {:>12}\n", "n", "kappa", "mean ratio", "se");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4} {:>6} {:>14} {:>12}",
                r.n,
                r.kappa,
                format_sig(r.ratio.mean, 8),
                format_sig(r.ratio.se, 4)
            );
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "{:<24} {}  {}", v.name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        }
        out
    }
}

/// Ratio experiments over several `n`; replication `r` at size `n` uses
/// `derive_seed(master, &[n, r])`. The cost spec must be `Equal` unless all
/// sizes coincide with the explicit list length.
pub fn run_sweep(template: &ExperimentConfig, n_values: &[usize]) -> Result<SweepTable> {
    if n_values.is_empty() {
        return Err(Error::invalid("sweep needs at least one n"));
    }
    let mut results: Vec<ExperimentResult> = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let mut cfg = template.clone();
        cfg.n = n;
        results.push(ratio_experiment_with_path(&cfg, &[n as u64])?);
    }
    let rows: Vec<SweepRow> = results
        .iter()
        .map(|r| SweepRow { n: r.config.n, kappa: r.kappa, ratio: r.ratio.expect("ratio experiment") })
        .collect();
    let smallest = rows.iter().min_by_key(|r| r.n).expect("nonempty");
    let largest = rows.iter().max_by_key(|r| r.n).expect("nonempty");
    let trend_pass = largest.ratio.mean <= smallest.ratio.mean + TREND_SLACK;
    let all_ge_one = rows.iter().all(|r| r.ratio.mean >= 1.0);
    let mut verdicts = vec![
        Verdict::new(
            "trend",
            trend_pass,
            format!(
                "mean ratio {} at n={} vs {} at n={} (+{TREND_SLACK})",
                format_sig(largest.ratio.mean, 8),
                largest.n,
                format_sig(smallest.ratio.mean, 8),
                smallest.n
            ),
        ),
        Verdict::new("mean ratio>=1", all_ge_one, ""),
    ];
    for r in &results {
        for v in &r.verdicts {
            verdicts.push(Verdict::new(format!("n={}: {}", r.config.n, v.name), v.pass, v.detail.clone()));
        }
    }
    for r in &mut results {
        r.config.kind = ExperimentKind::Sweep;
    }
    Ok(SweepTable { rows, trend_pass, verdicts, results })
}
