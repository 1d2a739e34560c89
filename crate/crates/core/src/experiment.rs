//! Command implementations shared by the CLI and the C interface. Each
//! command turns a resolved [`ExperimentConfig`] into JSON record lines and
//! named artifacts; nothing here touches stdout or the filesystem except to
//! read an input graph.

use std::fs::File;
use std::io::BufReader;

use crate::distribution::EdgeCountDistribution;
use crate::error::{Error, Result};
use crate::exact::{binomial, exact_distribution};
use crate::graph::{band_warnings, choose2, gen_gnm, gen_gnp, stats, third_moment_stat, Graph};
use crate::models::{interval_error, interval_upper_check, kolmogorov_distance, llt_error, normal_model, NormalModel};
use crate::report::*;
use crate::rng::{self, Domain};
use crate::sampling::{sample_edge_counts, SubsetSampler};
use crate::smoothing::{
    centered_interval, difference_defect, interval_length_for_t, schedule, smoothing_defect, window_vs_binomial,
    WindowMode, ZWindow,
};
use crate::stein::{drift_check, enumerated_moments, estimate_ab, sigma11_vs_lambda, SteinMatrices};
use crate::sweep::{run_sweep, write_rows, SweepMetric, SweepPlan};

pub const COMMANDS: [&str; 9] = ["gen", "stats", "sample", "exact", "clt", "llt", "stein", "smooth", "sweep"];

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
    /// The command's main product; printed in place of the records when no
    /// destination is configured.
    pub primary: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutput {
    /// JSON lines, header first.
    pub lines: Vec<String>,
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
}

impl RunOutput {
    fn push<T: serde::Serialize>(&mut self, rec: &T) -> Result<()> {
        self.lines.push(to_line(rec)?);
        Ok(())
    }

    fn file(&mut self, name: &str, bytes: Vec<u8>, primary: bool) {
        self.artifacts.push(Artifact { name: name.into(), bytes, primary });
    }

    pub fn records_text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Loads the configured graph file, or generates `G(n,M)` (default
/// `M = ⌊N/2⌋`) or `G(n,p)` from the run seed.
pub fn resolve_graph(cfg: &mut ExperimentConfig) -> Result<Graph> {
    let g = if let Some(path) = &cfg.graph {
        let g = Graph::read_from(BufReader::new(File::open(path)?))?;
        if cfg.n.is_some_and(|n| n != g.n()) {
            return Err(Error::invalid(format!("n = {} conflicts with graph file ({} vertices)", cfg.n.unwrap(), g.n())));
        }
        g
    } else {
        let n = cfg.n.ok_or_else(|| Error::invalid("either graph or n is required"))?;
        match (cfg.m, cfg.p) {
            (Some(_), Some(_)) => return Err(Error::invalid("give M or p, not both")),
            (None, Some(p)) => gen_gnp(n, p, cfg.seed)?,
            (m, None) => {
                let m = m.unwrap_or(choose2(n as u64) / 2);
                cfg.m = Some(m);
                gen_gnm(n, m, cfg.seed)?
            }
        }
    };
    cfg.n = Some(g.n());
    if cfg.graph.is_some() {
        cfg.m = Some(g.m());
    }
    Ok(g)
}

fn need_k(cfg: &ExperimentConfig, g: &Graph) -> Result<usize> {
    let k = cfg.k.unwrap_or(g.n() / 2);
    if k < 2 || k + 2 > g.n() {
        return Err(Error::invalid(format!("need 2 <= k <= n-2, got k = {k}, n = {}", g.n())));
    }
    Ok(k)
}

fn check_common(cfg: &ExperimentConfig) -> Result<()> {
    if !COMMANDS.contains(&cfg.command.as_str()) {
        return Err(Error::invalid(format!("unknown command {:?}", cfg.command)));
    }
    if cfg.workers == 0 {
        return Err(Error::invalid("workers must be >= 1"));
    }
    if !(cfg.window > 0.0) {
        return Err(Error::invalid(format!("window must be > 0, got {}", cfg.window)));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 0.5) {
        return Err(Error::invalid(format!("delta must lie in (0, 1/2), got {}", cfg.delta)));
    }
    if let Some(p) = cfg.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Runs one command. `progress` receives human-readable status lines.
pub fn run(cfg: &ExperimentConfig, mut progress: impl FnMut(&str)) -> Result<RunOutput> {
    check_common(cfg)?;
    let mut cfg = cfg.clone();
    let mut out = RunOutput::default();
    if cfg.command == "smooth" && cfg.graph.is_none() && cfg.k.is_none() {
        return smooth_schedule_only(cfg, out);
    }
    if cfg.command == "sweep" {
        return sweep(cfg, out, progress);
    }
    let g = resolve_graph(&mut cfg)?;
    let k = if cfg.command == "gen" || cfg.command == "stats" { cfg.k } else { Some(need_k(&cfg, &g)?) };
    cfg.k = k;
    out.warnings.extend(band_warnings(g.n(), k, g.m(), cfg.delta));
    out.push(&RunHeader::new(cfg.clone()))?;
    match cfg.command.as_str() {
        "gen" => {
            let mut bytes = Vec::new();
            g.write_to(&mut bytes)?;
            out.file("graph.txt", bytes, true);
            out.push(&stats_record(&g))?;
        }
        "stats" => out.push(&stats_record(&g))?,
        "sample" | "exact" => {
            let exact = cfg.command == "exact" || cfg.exact;
            let dist = distribution(&cfg, &g, k.unwrap(), exact, &mut progress)?;
            let mut csv = Vec::new();
            dist.write_csv(&mut csv)?;
            out.file(&format!("{}.csv", cfg.command), csv, true);
            out.file(&format!("{}.meta.json", cfg.command), serde_json::to_vec_pretty(&dist.meta())?, false);
            out.push(&metric(&cfg, &dist, "mean", dist.mean(), None))?;
        }
        "clt" => clt(&cfg, &g, k.unwrap(), &mut out, &mut progress)?,
        "llt" => llt(&cfg, &g, k.unwrap(), &mut out, &mut progress)?,
        "stein" => stein(&cfg, &g, k.unwrap(), &mut out, &mut progress)?,
        "smooth" => smooth_window(&cfg, &g, k.unwrap(), &mut out)?,
        _ => unreachable!("checked above"),
    }
    Ok(out)
}

fn stats_record(g: &Graph) -> StatsRecord {
    let s = stats(g);
    let (lhs, rhs) = s.path_identity();
    StatsRecord::new(
        s.n,
        s.m,
        s.pairs,
        s.density_f64,
        s.mean_degree_f64,
        s.v(),
        s.paths3 as u64,
        lhs == rhs,
        third_moment_stat(g),
        g.is_regular(),
    )
}

fn distribution(
    cfg: &ExperimentConfig,
    g: &Graph,
    k: usize,
    exact: bool,
    progress: &mut impl FnMut(&str),
) -> Result<EdgeCountDistribution> {
    if exact {
        progress(&format!("enumerating {} subsets", binomial(g.n() as u64, k as u64)));
        exact_distribution(g, k, cfg.budget)
    } else {
        progress(&format!("sampling {} subsets on {} worker(s)", cfg.samples, cfg.workers));
        sample_edge_counts(g, k, cfg.samples, cfg.seed, cfg.workers)
    }
}

fn metric(cfg: &ExperimentConfig, dist: &EdgeCountDistribution, name: &str, value: f64, window: Option<f64>) -> MetricRecord {
    let empirical = dist.kind == crate::DistributionKind::Empirical;
    MetricRecord::new(
        name.into(),
        value,
        dist.n,
        dist.k,
        dist.m,
        empirical.then_some(dist.total),
        window,
        empirical.then_some(cfg.seed),
    )
}

/// `z,count,prob,pdf` for overlay plots.
fn histogram(dist: &EdgeCountDistribution, model: &NormalModel) -> Result<Vec<u8>> {
    let mut s = String::from("z,count,prob,pdf\n");
    for (&z, &c) in &dist.counts {
        s.push_str(&format!("{z},{c},{},{}\n", c as f64 / dist.total as f64, model.pdf(z as f64)?));
    }
    Ok(s.into_bytes())
}

/// Interval endpoints at multiples of σ around μ, in σ units.
const INTERVALS: [(f64, f64); 8] = [
    (f64::NEG_INFINITY, -2.0),
    (-2.0, -1.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (1.0, 2.0),
    (2.0, f64::INFINITY),
    (-1.0, 1.0),
    (-2.0, 2.0),
];

fn clt(cfg: &ExperimentConfig, g: &Graph, k: usize, out: &mut RunOutput, progress: &mut impl FnMut(&str)) -> Result<()> {
    let dist = distribution(cfg, g, k, cfg.exact, progress)?;
    let model = normal_model(g.n(), k, g.m())?;
    let sd = model.sd()?;
    let ks = kolmogorov_distance(&dist, &model)?;
    out.push(&metric(cfg, &dist, "ks", ks.value, None))?;
    out.push(&metric(cfg, &dist, "ks_z", ks.z as f64, None))?;
    let mut worst: f64 = 0.0;
    for (a, b) in INTERVALS {
        worst = worst.max(interval_error(&dist, &model, model.mu + a * sd, model.mu + b * sd)?);
    }
    out.push(&metric(cfg, &dist, "interval_max", worst, None))?;
    let r = (g.n() as f64).powf(0.8).ceil() as u64;
    let upper = interval_upper_check(&dist, r, cfg.c)?;
    out.push(&metric(cfg, &dist, "interval_upper_ratio", upper.ratio, None))?;
    out.file("clt_hist.csv", histogram(&dist, &model)?, false);
    Ok(())
}

fn llt(cfg: &ExperimentConfig, g: &Graph, k: usize, out: &mut RunOutput, progress: &mut impl FnMut(&str)) -> Result<()> {
    let dist = distribution(cfg, g, k, cfg.exact, progress)?;
    let model = normal_model(g.n(), k, g.m())?;
    let w = Some(cfg.window);
    let e = llt_error(&dist, &model, cfg.window)?;
    if e.noisy {
        out.warnings.push(format!(
            "per-point Monte Carlo error is {:.1}% of the peak density; increase samples",
            100.0 * e.noise_ratio
        ));
    }
    out.push(&metric(cfg, &dist, "llt", e.value, w))?;
    out.push(&metric(cfg, &dist, "llt_z", e.z as f64, w))?;
    out.push(&metric(cfg, &dist, "llt_noise_ratio", e.noise_ratio, w))?;
    let window = ZWindow::around(&model, cfg.window)?;
    match schedule(g.n(), cfg.beta, cfg.eps) {
        Ok(s) => {
            let d = smoothing_defect(&dist, s.a, window)?;
            out.push(&metric(cfg, &dist, "smoothing_a", s.a as f64, w))?;
            out.push(&metric(cfg, &dist, "smoothing_defect", d.value, w))?;
            out.push(&metric(cfg, &dist, "smoothing_defect_noise", d.noise, w))?;
            if let Some(r) = cfg.r {
                let dd = difference_defect(&dist, s.a.min(r), r, window)?;
                out.push(&metric(cfg, &dist, "difference_defect", dd.value, w))?;
                out.push(&metric(cfg, &dist, "difference_defect_noise", dd.noise, w))?;
                out.push(&metric(cfg, &dist, "interval_bound", dd.interval_bound, w))?;
            }
        }
        Err(e) => out.warnings.push(format!("smoothing defect skipped: {e}")),
    }
    out.file("llt_hist.csv", histogram(&dist, &model)?, false);
    Ok(())
}

/// Subsets checked for the exact drift identity.
const DRIFT_SUBSETS: u32 = 10;

fn stein(cfg: &ExperimentConfig, g: &Graph, k: usize, out: &mut RunOutput, progress: &mut impl FnMut(&str)) -> Result<()> {
    let s = stats(g);
    let mats = SteinMatrices::new(&s, k)?;
    let mut sampler = SubsetSampler::new(g.n());
    let mut worst = num::BigRational::from_integer(0.into());
    for i in 0..DRIFT_SUBSETS {
        // indices above the worker range of estimate_ab
        let mut r = rng::stream(cfg.seed, Domain::Stein, (1 << 31) + i);
        let subset: Vec<usize> = sampler.draw(&mut r, k).iter().map(|&v| v as usize).collect();
        let err = drift_check(g, &subset)?;
        if err > worst {
            worst = err;
        }
    }
    let sigma_rel_error = if binomial(g.n() as u64, k as u64) <= cfg.budget as u128 {
        progress("enumerating subsets for the covariance check");
        let em = enumerated_moments(g, k, cfg.budget)?;
        let (a, b) = (mats.sigma_f64, em.cov.to_f64());
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        Some(a.max_abs_diff(&b) / scale)
    } else {
        None
    };
    let diag = if mats.is_singular() {
        out.warnings.push("Σ is singular (regular graph); A and B are not defined".into());
        None
    } else {
        progress(&format!("estimating A and B over {} subsets", cfg.outer));
        Some(estimate_ab(g, k, cfg.outer, cfg.seed, cfg.workers)?)
    };
    let rec = SteinRecord::new(
        g.n(),
        k,
        g.m(),
        mats.lambda,
        mats.sigma11,
        sigma11_vs_lambda(&s, k)?,
        mats.is_singular(),
        worst.to_string(),
        DRIFT_SUBSETS as u64,
        sigma_rel_error,
        diag.as_ref().map(|d| d.a_hat),
        diag.as_ref().map(|d| d.a_se),
        diag.as_ref().map(|d| d.b_hat),
        diag.as_ref().map(|d| d.b_se),
        diag.as_ref().map(|d| d.t_hat),
        cfg.seed,
    );
    out.push(&rec)
}

fn schedule_record(cfg: &ExperimentConfig, n: usize, out: &mut RunOutput) -> Result<u64> {
    let s = schedule(n, cfg.beta, cfg.eps)?;
    let mut csv = Vec::new();
    s.write_csv(&mut csv)?;
    out.file("schedule.csv", csv, false);
    out.push(&ScheduleRecord::new(
        n,
        s.beta,
        s.eps,
        s.j0,
        s.a,
        s.total_t(),
        s.all_valid(),
        s.a_in_target(),
        s.target.0,
        s.target.1,
    ))?;
    Ok(s.a)
}

fn smooth_schedule_only(mut cfg: ExperimentConfig, mut out: RunOutput) -> Result<RunOutput> {
    let n = cfg.n.ok_or_else(|| Error::invalid("smooth needs n"))?;
    cfg.k = None;
    out.push(&RunHeader::new(cfg.clone()))?;
    schedule_record(&cfg, n, &mut out)?;
    Ok(out)
}

/// Schedule for `n`, then the window-vs-binomial deviation for `t`
/// (default `k/20`) in both modes.
fn smooth_window(cfg: &ExperimentConfig, g: &Graph, k: usize, out: &mut RunOutput) -> Result<()> {
    schedule_record(cfg, g.n(), out)?;
    let t = cfg.t.unwrap_or((k / 20).max(1));
    let a = interval_length_for_t(t as u64, g.n(), cfg.beta)?;
    let p = g.m() as f64 / g.pairs() as f64;
    let trials = ((k - t) * t) as f64 + choose2(t as u64) as f64;
    let (lo, hi) = centered_interval(trials * p, a);
    for (mode, name) in [(WindowMode::UniformT, "uniform-T"), (WindowMode::DisjointFamily, "disjoint-family")] {
        let d = window_vs_binomial(g, k, t, (lo, hi), mode, cfg.samples, cfg.seed, None)?;
        out.push(&WindowRecord::new(
            g.n(),
            k,
            t,
            lo,
            hi,
            name.into(),
            if mode == WindowMode::UniformT { cfg.samples } else { 0 },
            cfg.seed,
            d.p,
            d.proportion,
            d.binomial_mass,
            d.deviation,
            d.draws,
        ))?;
    }
    Ok(())
}

fn sweep(mut cfg: ExperimentConfig, mut out: RunOutput, mut progress: impl FnMut(&str)) -> Result<RunOutput> {
    let metric_kind = SweepMetric::parse(&cfg.metric)?;
    cfg.n = None;
    cfg.k = None;
    out.push(&RunHeader::new(cfg.clone()))?;
    let plan = SweepPlan {
        grid: cfg.grid.clone(),
        seeds: cfg.seeds,
        samples: cfg.samples,
        seed: cfg.seed,
        workers: cfg.workers,
        metric: metric_kind,
    };
    let (rows, fit) = run_sweep(&plan, |r| progress(&format!("n = {}: {} = {}", r.n, metric_kind.name(), r.value)))?;
    for r in &rows {
        out.push(&MetricRecord::new(
            metric_kind.name().into(),
            r.value,
            r.n,
            r.n / 2,
            choose2(r.n as u64) / 2,
            Some(cfg.samples),
            None,
            Some(r.seed),
        ))?;
    }
    out.push(&FitRecord::new(metric_kind.name().into(), fit.slope, fit.slope_se, fit.intercept, fit.points))?;
    let mut csv = Vec::new();
    write_rows(&rows, metric_kind, &mut csv)?;
    out.file("sweep.csv", csv, false);
    Ok(out)
}
