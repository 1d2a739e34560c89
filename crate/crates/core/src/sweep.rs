//! Scaling sweeps over `n` and log-log slope fits.

use std::io::Write;

use crate::distribution::EdgeCountDistribution;
use crate::error::{Error, Result};
use crate::graph::{choose2, gen_gnm};
use crate::models::{kolmogorov_distance, normal_model};
use crate::rng::{derive_seed, Domain};
use crate::sampling::sample_edge_counts;

/// Ordinary least squares `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 for an exact fit and NaN for 2 points.
    pub slope_se: f64,
    pub points: usize,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::invalid("x and y lengths differ"));
    }
    if n < 2 {
        return Err(Error::invalid("need at least 2 points"));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric("all x values equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_se = if n > 2 { (rss / (n - 2) as f64 / sxx).sqrt() } else { f64::NAN };
    Ok(LineFit { slope, intercept, slope_se, points: n })
}

/// Fits `ln(value)` against `ln(n)`. Grids with fewer than 3 distinct `n`
/// are rejected.
pub fn loglog_slope(ns: &[usize], values: &[f64]) -> Result<LineFit> {
    let mut distinct: Vec<usize> = ns.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::invalid(format!("slope fitting needs >= 3 grid points, got {}", distinct.len())));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Numeric(format!("cannot take the log of {v}")));
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    ols(&x, &y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMetric {
    /// Kolmogorov distance to the normal model.
    Ks,
    /// `E|e(S) − K·M/N|`, which grows like the standard deviation.
    MeanAbsDev,
}

impl SweepMetric {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ks" => Ok(SweepMetric::Ks),
            "mean_abs_dev" => Ok(SweepMetric::MeanAbsDev),
            _ => Err(Error::invalid(format!("unknown sweep metric {s:?} (expected ks or mean_abs_dev)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepMetric::Ks => "ks",
            SweepMetric::MeanAbsDev => "mean_abs_dev",
        }
    }

    pub fn evaluate(&self, dist: &EdgeCountDistribution) -> Result<f64> {
        match self {
            SweepMetric::Ks => Ok(kolmogorov_distance(dist, &normal_model(dist.n, dist.k, dist.m)?)?.value),
            SweepMetric::MeanAbsDev => {
                let mu = normal_model(dist.n, dist.k, dist.m)?.mu;
                let s: f64 = dist.counts.iter().map(|(&z, &c)| c as f64 * (z as f64 - mu).abs()).sum();
                Ok(s / dist.total as f64)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    /// Derived seed used for both the graph and the sample.
    pub seed: u64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub grid: Vec<usize>,
    pub seeds: u32,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub metric: SweepMetric,
}

/// For each `n` and replicate `i`: `G(n, ⌊N/2⌋)`, `k = n/2`, `samples`
/// draws, all seeded by `derive_seed(seed, Sweep, position)`.
pub fn run_sweep(plan: &SweepPlan, mut progress: impl FnMut(&SweepRow)) -> Result<(Vec<SweepRow>, LineFit)> {
    if plan.grid.len() < 3 {
        return Err(Error::invalid(format!("slope fitting needs >= 3 grid points, got {}", plan.grid.len())));
    }
    if plan.seeds == 0 {
        return Err(Error::invalid("seeds must be >= 1"));
    }
    let mut rows = Vec::new();
    for (gi, &n) in plan.grid.iter().enumerate() {
        for i in 0..plan.seeds {
            let pos = gi as u32 * plan.seeds + i;
            let seed = derive_seed(plan.seed, Domain::Sweep, pos);
            let g = gen_gnm(n, choose2(n as u64) / 2, seed)?;
            let dist = sample_edge_counts(&g, n / 2, plan.samples, seed, plan.workers)?;
            let row = SweepRow { n, seed, value: plan.metric.evaluate(&dist)? };
            progress(&row);
            rows.push(row);
        }
    }
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let vs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let fit = loglog_slope(&ns, &vs)?;
    Ok((rows, fit))
}

/// CSV `n,seed,metric,value`.
pub fn write_rows(rows: &[SweepRow], metric: SweepMetric, mut w: impl Write) -> Result<()> {
    let mut out = String::from("n,seed,metric,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.seed, metric.name(), r.value));
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}
