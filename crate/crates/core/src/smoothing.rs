//! Interval smoothing: valid triples, the `a_j`/`t_j` schedule,
//! concentration of the increment against a binomial window, and the
//! smoothing and difference defects of an edge-count distribution.

use std::collections::VecDeque;
use std::io::Write;

use rand::Rng;

use crate::bits;
use crate::distribution::{DistributionKind, EdgeCountDistribution};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{BinomialModel, NormalModel};
use crate::rng::{self, Domain};
use crate::sampling::SubsetSampler;

/// Hard cap on schedule iterations.
pub const MAX_STEPS: usize = 64;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 0.1) {
        return Err(Error::invalid(format!("beta must lie in (0, 1/10), got {beta}")));
    }
    Ok(())
}

fn pow(n: usize, e: f64) -> f64 {
    (n as f64).powf(e)
}

/// Largest integer `x >= 0` with `x³ <= y`.
fn floor_cbrt(y: f64) -> u64 {
    let mut x = y.cbrt().floor().max(0.0) as u64;
    while x > 0 && ((x as f64).powi(3)) > y {
        x -= 1;
    }
    while ((x + 1) as f64).powi(3) <= y {
        x += 1;
    }
    x
}

/// Smallest integer `x >= 0` with `x³ >= y`.
fn ceil_cbrt(y: f64) -> u64 {
    let mut x = y.cbrt().ceil().max(0.0) as u64;
    while x > 0 && ((x - 1) as f64).powi(3) >= y {
        x -= 1;
    }
    while (x as f64).powi(3) < y {
        x += 1;
    }
    x
}

/// `t = ⌈(a²·n^{1−4β})^{1/3}⌉`.
pub fn t_for(a: u64, n: usize, beta: f64) -> u64 {
    ceil_cbrt((a as f64).powi(2) * pow(n, 1.0 - 4.0 * beta))
}

/// `⌊(a·n^{2−5β})^{1/3}⌋`, the largest `r` reachable from `a` in one step.
pub fn next_a(a: u64, n: usize, beta: f64) -> u64 {
    floor_cbrt(a as f64 * pow(n, 2.0 - 5.0 * beta))
}

/// Largest `a` whose step size `t_for(a)` does not exceed `t`, i.e.
/// `⌊t^{3/2}·n^{2β−1/2}⌋` (the `c = 1` end of condition (ii)).
pub fn interval_length_for_t(t: u64, n: usize, beta: f64) -> Result<u64> {
    check_beta(beta)?;
    if t == 0 {
        return Err(Error::invalid("t must be >= 1"));
    }
    let mut a = ((t as f64).powf(1.5) * pow(n, 2.0 * beta - 0.5)).floor() as u64;
    while a > 0 && t_for(a, n, beta) > t {
        a -= 1;
    }
    while t_for(a + 1, n, beta) <= t {
        a += 1;
    }
    Ok(a.max(1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleConditions {
    /// (i) `a <= r`.
    pub a_le_r: bool,
    /// (ii) `1/2 <= c <= 1`.
    pub c_in_range: bool,
    /// (iii) `r <= n^{−β}·√(n·t)`.
    pub r_bounded: bool,
}

impl TripleConditions {
    pub fn all(&self) -> bool {
        self.a_le_r && self.c_in_range && self.r_bounded
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidTriple {
    pub a: u64,
    pub r: u64,
    pub t: u64,
    pub beta: f64,
    pub n: usize,
    /// `a / (t^{3/2}·n^{2β−1/2})`.
    pub c: f64,
    pub conditions: TripleConditions,
}

impl ValidTriple {
    /// Evaluates the three conditions for an arbitrary `(a, r, t)`.
    pub fn evaluate(a: u64, r: u64, t: u64, n: usize, beta: f64) -> Self {
        let c = a as f64 / ((t as f64).powf(1.5) * pow(n, 2.0 * beta - 0.5));
        let conditions = TripleConditions {
            a_le_r: a <= r,
            c_in_range: (0.5..=1.0).contains(&c),
            r_bounded: r as f64 <= pow(n, -beta) * (n as f64 * t as f64).sqrt(),
        };
        ValidTriple { a, r, t, beta, n, c, conditions }
    }

    pub fn is_valid(&self) -> bool {
        self.conditions.all()
    }
}

/// Builds the triple with `t = ⌈(a²n^{1−4β})^{1/3}⌉`, after checking
/// `r³·n^{−2+5β} <= a <= r`.
pub fn make_valid_triple(a: u64, r: u64, n: usize, beta: f64) -> Result<ValidTriple> {
    check_beta(beta)?;
    if a == 0 || n < 2 {
        return Err(Error::invalid(format!("need a >= 1 and n >= 2, got a = {a}, n = {n}")));
    }
    if a > r {
        return Err(Error::invalid(format!("a <= r violated: a = {a}, r = {r}")));
    }
    if r > next_a(a, n, beta) {
        return Err(Error::invalid(format!(
            "r³·n^(-2+5β) <= a violated: r = {r} exceeds {} for a = {a}",
            next_a(a, n, beta)
        )));
    }
    let triple = ValidTriple::evaluate(a, r, t_for(a, n, beta), n, beta);
    if !triple.is_valid() {
        return Err(Error::Numeric(format!("triple ({a}, {r}, {}) fails {:?}", triple.t, triple.conditions)));
    }
    Ok(triple)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingSchedule {
    pub n: usize,
    pub beta: f64,
    pub eps: f64,
    /// `(a_j, a_{j+1}, t_j)` for `j < j0`.
    pub steps: Vec<ValidTriple>,
    pub j0: usize,
    /// `a_{j0}`.
    pub a: u64,
    /// `[n^{1−5β/2−ε}, n^{1−5β/2}]`.
    pub target: (f64, f64),
}

impl SmoothingSchedule {
    /// Iterates `a_{j+1} = ⌊(a_j·n^{2−5β})^{1/3}⌋` from `a_0 = 1` until `a_j`
    /// enters the target window.
    pub fn new(n: usize, beta: f64, eps: f64) -> Result<Self> {
        check_beta(beta)?;
        let eps_max = (1.0 - 10.0 * beta) / 4.0;
        if !(eps > 0.0 && eps < eps_max) {
            return Err(Error::invalid(format!("eps must lie in (0, {eps_max}), got {eps}")));
        }
        if n < 2 {
            return Err(Error::invalid("n must be >= 2"));
        }
        let hi = pow(n, 1.0 - 2.5 * beta);
        let lo = pow(n, 1.0 - 2.5 * beta - eps);
        let in_window = |a: u64| (a as f64) >= lo && (a as f64) <= hi;
        let mut steps = Vec::new();
        let mut a = 1u64;
        while !in_window(a) {
            if steps.len() == MAX_STEPS {
                return Err(Error::Numeric(format!("schedule did not reach [{lo:.3}, {hi:.3}] within {MAX_STEPS} steps")));
            }
            let r = next_a(a, n, beta);
            if r <= a {
                return Err(Error::Numeric(format!("schedule stalled at a = {a} below the target window")));
            }
            steps.push(ValidTriple::evaluate(a, r, t_for(a, n, beta), n, beta));
            a = r;
        }
        Ok(SmoothingSchedule { n, beta, eps, j0: steps.len(), a, steps, target: (lo, hi) })
    }

    pub fn all_valid(&self) -> bool {
        self.steps.iter().all(ValidTriple::is_valid)
    }

    pub fn a_in_target(&self) -> bool {
        (self.a as f64) >= self.target.0 && (self.a as f64) <= self.target.1
    }

    /// `Σ_{j<j0} t_j`, the number of vertices consumed by the smoothing steps.
    pub fn total_t(&self) -> u64 {
        self.steps.iter().map(|s| s.t).sum()
    }

    /// Whether the steps fit inside a k-set, `Σt_j <= k/2`.
    pub fn fits(&self, k: usize) -> bool {
        2 * self.total_t() <= k as u64
    }

    /// The sequence `a_0, …, a_{j0}`.
    pub fn a_values(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.steps.iter().map(|s| s.a).collect();
        v.push(self.a);
        v
    }

    /// `n^{(1−5β/2)(1−3^{−j})}`, the continuous approximation to `a_j`.
    pub fn exponent_track(&self, j: usize) -> f64 {
        pow(self.n, (1.0 - 2.5 * self.beta) * (1.0 - 3f64.powi(-(j as i32))))
    }

    /// CSV rows `j,a_j,t_j,c_j,valid`; the terminal row leaves `t_j` and
    /// `c_j` empty and reports window membership.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "j,a_j,t_j,c_j,valid")?;
        for (j, s) in self.steps.iter().enumerate() {
            writeln!(w, "{j},{},{},{:.9},{}", s.a, s.t, s.c, s.is_valid())?;
        }
        writeln!(w, "{},{},,,{}", self.j0, self.a, self.a_in_target())?;
        Ok(())
    }
}

pub fn schedule(n: usize, beta: f64, eps: f64) -> Result<SmoothingSchedule> {
    SmoothingSchedule::new(n, beta, eps)
}

/// An inclusive interval `[lo, hi]` of `a` integers centred on `mean`.
pub fn centered_interval(mean: f64, a: u64) -> (i64, i64) {
    let lo = (mean - a as f64 / 2.0).ceil() as i64;
    (lo, lo + a as i64 - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowMode {
    /// Chunk the complement of `S'` into `⌊(n−k+t)/t⌋` disjoint `t`-sets.
    DisjointFamily,
    /// Independent uniform `t`-sets from the complement of `S'`.
    UniformT,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowDeviation {
    /// Fraction of `T` with `e(S'∪T) − e(S') ∈ A`.
    pub proportion: f64,
    /// `P(Y ∈ A)`.
    pub binomial_mass: f64,
    pub deviation: f64,
    /// Number of `T` examined.
    pub draws: u64,
    pub trials: u64,
    pub p: f64,
}

/// `|#{T : increment ∈ A}/#T − P(Y ∈ A)|` with `Y ~ Bin((k−t)t + C(t,2), p)`
/// and `p = M/N` unless given. `S'` is drawn once from stream
/// `(seed, Split, 0)`; uniform `T` come from the same stream.
#[allow(clippy::too_many_arguments)]
pub fn window_vs_binomial(
    g: &Graph,
    k: usize,
    t: usize,
    interval: (i64, i64),
    mode: WindowMode,
    samples: u64,
    seed: u64,
    p: Option<f64>,
) -> Result<WindowDeviation> {
    let n = g.n();
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    if t < 1 || 2 * t > k {
        return Err(Error::invalid(format!("need 1 <= t <= k/2, got t = {t}, k = {k}")));
    }
    let model = BinomialModel::for_split(k as u64, t as u64, p.unwrap_or(g.m() as f64 / g.pairs().max(1) as f64))?;
    let (lo, hi) = interval;
    if lo > hi || hi < 0 || lo > model.trials as i64 {
        return Err(Error::invalid(format!("interval [{lo}, {hi}] misses [0, {}]", model.trials)));
    }
    if mode == WindowMode::UniformT && samples == 0 {
        return Err(Error::invalid("samples must be >= 1"));
    }
    let mut rng = rng::stream(seed, Domain::Split, 0);
    let mut sampler = SubsetSampler::new(n);
    let drawn = sampler.draw(&mut rng, k - t);
    let mut base = vec![0u64; g.words()];
    for &v in drawn {
        bits::set(&mut base, v as usize);
    }
    let mut rest: Vec<u32> = sampler.permutation()[k - t..].to_vec();
    // d_{S'}(x) for every x outside S'
    let into: Vec<u64> = (0..n).map(|x| bits::and_count(g.row(x), &base) as u64).collect();
    let mut tbits = vec![0u64; g.words()];
    let mut increment = |set: &[u32]| {
        for &x in set {
            bits::set(&mut tbits, x as usize);
        }
        let mut inc = 0u64;
        let mut twice = 0u64;
        for &x in set {
            inc += into[x as usize];
            twice += bits::and_count(g.row(x as usize), &tbits) as u64;
        }
        for &x in set {
            bits::clear(&mut tbits, x as usize);
        }
        inc + twice / 2
    };
    let hit = |inc: u64| (inc as i64) >= lo && (inc as i64) <= hi;
    let (mut inside, mut draws) = (0u64, 0u64);
    match mode {
        WindowMode::DisjointFamily => {
            for block in rest.chunks_exact(t) {
                inside += hit(increment(block)) as u64;
                draws += 1;
            }
        }
        WindowMode::UniformT => {
            let len = rest.len();
            for _ in 0..samples {
                for i in 0..t {
                    let j = rng.gen_range(i..len);
                    rest.swap(i, j);
                }
                inside += hit(increment(&rest[..t])) as u64;
                draws += 1;
            }
        }
    }
    let proportion = inside as f64 / draws as f64;
    let binomial_mass = model.mass_between(lo, hi);
    Ok(WindowDeviation {
        proportion,
        binomial_mass,
        deviation: (proportion - binomial_mass).abs(),
        draws,
        trials: model.trials,
        p: model.p,
    })
}

/// Inclusive range of `z` values scanned by the defect statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZWindow {
    pub lo: i64,
    pub hi: i64,
}

impl ZWindow {
    /// `|z − μ| <= half_width·σ`.
    pub fn around(model: &NormalModel, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::invalid(format!("window must be > 0, got {half_width}")));
        }
        let sd = model.sd()?;
        Ok(ZWindow { lo: (model.mu - half_width * sd).ceil() as i64, hi: (model.mu + half_width * sd).floor() as i64 })
    }

    /// The whole support of `dist`.
    pub fn support(dist: &EdgeCountDistribution) -> Result<Self> {
        match (dist.support_min(), dist.support_max()) {
            (Some(lo), Some(hi)) => Ok(ZWindow { lo: lo as i64, hi: hi as i64 }),
            _ => Err(Error::invalid("empty distribution")),
        }
    }
}

/// Prefix counts over `[lo, hi]`: `pre[i] = #{e(S) < lo + i}`.
struct Prefix {
    lo: i64,
    pre: Vec<u64>,
}

impl Prefix {
    fn new(dist: &EdgeCountDistribution, lo: i64, hi: i64) -> Self {
        let mut pre = Vec::with_capacity((hi - lo + 2) as usize);
        let mut acc = dist.count_between(i64::MIN, lo - 1);
        pre.push(acc);
        for z in lo..=hi {
            acc += if z >= 0 { dist.count(z as u64) } else { 0 };
            pre.push(acc);
        }
        Prefix { lo, pre }
    }

    /// `#{e(S) ∈ [z, z+len)}`, for `[z, z+len)` inside the prefix range.
    fn mass(&self, z: i64, len: u64) -> u64 {
        let i = (z - self.lo) as usize;
        self.pre[i + len as usize] - self.pre[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothingDefect {
    pub value: f64,
    pub z: i64,
    /// `value = numerator / (a·total)`, exactly.
    pub numerator: u128,
    pub denominator: u128,
    /// Four standard deviations of the Monte Carlo error; 0 for exact input.
    pub noise: f64,
}

fn noise4(dist: &EdgeCountDistribution, mass: f64) -> f64 {
    match dist.kind {
        DistributionKind::Exact => 0.0,
        DistributionKind::Empirical => 4.0 * (2.0 * mass / dist.total as f64).sqrt(),
    }
}

fn nonempty(dist: &EdgeCountDistribution, w: &ZWindow) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::invalid("empty distribution"));
    }
    if w.lo > w.hi {
        return Err(Error::invalid(format!("empty window [{}, {}]", w.lo, w.hi)));
    }
    Ok(())
}

/// `max_z |P(z) − a⁻¹·P([z, z+a))|` over the window, with integer
/// numerators `|a·#(z) − #[z, z+a)|` so ranking is exact.
pub fn smoothing_defect(dist: &EdgeCountDistribution, a: u64, window: ZWindow) -> Result<SmoothingDefect> {
    nonempty(dist, &window)?;
    if a < 1 {
        return Err(Error::invalid("a must be >= 1"));
    }
    let pre = Prefix::new(dist, window.lo, window.hi + a as i64);
    let mut best = (0u128, window.lo);
    for z in window.lo..=window.hi {
        let point = pre.mass(z, 1) as i128 * a as i128;
        let num = (point - pre.mass(z, a) as i128).unsigned_abs();
        if num > best.0 {
            best = (num, z);
        }
    }
    let denominator = a as u128 * dist.total as u128;
    let pmax = (window.lo..=window.hi).map(|z| pre.mass(z, 1)).max().unwrap_or(0) as f64 / dist.total as f64;
    Ok(SmoothingDefect {
        value: best.0 as f64 / denominator as f64,
        z: best.1,
        numerator: best.0,
        denominator,
        noise: noise4(dist, pmax),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferenceDefect {
    /// `max |P([z1, z1+a)) − P([z2, z2+a))|` over `|z1 − z2| <= r`.
    pub value: f64,
    pub z1: i64,
    pub z2: i64,
    /// `sup_z P([z, z+a))·n/a` over the window.
    pub interval_bound: f64,
    pub noise: f64,
}

/// Scans interval masses `m(z) = #[z, z+a)` and takes the largest spread
/// within every run of `r+1` consecutive starts, by monotone deques.
pub fn difference_defect(dist: &EdgeCountDistribution, a: u64, r: u64, window: ZWindow) -> Result<DifferenceDefect> {
    nonempty(dist, &window)?;
    if a < 1 || a > r {
        return Err(Error::invalid(format!("need 1 <= a <= r, got a = {a}, r = {r}")));
    }
    let pre = Prefix::new(dist, window.lo, window.hi + a as i64);
    let masses: Vec<u64> = (window.lo..=window.hi).map(|z| pre.mass(z, a)).collect();
    let span = r as usize;
    let (mut maxq, mut minq) = (VecDeque::<usize>::new(), VecDeque::<usize>::new());
    let mut best = (0u64, 0usize, 0usize);
    for (i, &m) in masses.iter().enumerate() {
        while maxq.back().is_some_and(|&j| masses[j] <= m) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| masses[j] >= m) {
            minq.pop_back();
        }
        minq.push_back(i);
        while i - maxq[0] > span {
            maxq.pop_front();
        }
        while i - minq[0] > span {
            minq.pop_front();
        }
        let (hi, lo) = (maxq[0], minq[0]);
        let spread = masses[hi] - masses[lo];
        if spread > best.0 {
            best = (spread, hi, lo);
        }
    }
    let total = dist.total as f64;
    let peak = masses.iter().copied().max().unwrap_or(0) as f64 / total;
    Ok(DifferenceDefect {
        value: best.0 as f64 / total,
        z1: window.lo + best.1 as i64,
        z2: window.lo + best.2 as i64,
        interval_bound: peak * dist.n as f64 / a as f64,
        noise: noise4(dist, peak),
    })
}
