//! Independent uniform k-subset draws.

use rand::Rng;

use crate::bits;
use crate::distribution::{DistributionKind, EdgeCountDistribution};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, Domain};

/// Draws uniform k-subsets by partial Fisher–Yates over a persistent
/// permutation. Any starting permutation gives a uniform prefix, so the
/// buffer is never reset between draws.
#[derive(Clone, Debug)]
pub struct SubsetSampler {
    perm: Vec<u32>,
}

impl SubsetSampler {
    pub fn new(n: usize) -> Self {
        SubsetSampler { perm: (0..n as u32).collect() }
    }

    /// Returns a uniform `size`-subset as the first `size` entries of the
    /// permutation; entries after it form a uniform ordering of the rest.
    pub fn draw<R: Rng>(&mut self, rng: &mut R, size: usize) -> &[u32] {
        let n = self.perm.len();
        for i in 0..size.min(n.saturating_sub(1)) {
            let j = rng.gen_range(i..n);
            self.perm.swap(i, j);
        }
        &self.perm[..size]
    }

    pub fn permutation(&self) -> &[u32] {
        &self.perm
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 || k + 2 > n {
        return Err(Error::invalid(format!("need 2 <= k <= n-2, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Edge counts of a worker's share of samples. Draws the smaller of the
/// subset and its complement and converts with
/// `e(S) = M − Σ_{v∉S} d(v) + e(S̄)`.
fn sample_worker(g: &Graph, k: usize, samples: u64, mut rng: rng::StreamRng) -> EdgeCountDistribution {
    let n = g.n();
    let words = g.words();
    let flip = 2 * k > n;
    let size = if flip { n - k } else { k };
    let mut sampler = SubsetSampler::new(n);
    let mut set = vec![0u64; words];
    let mut dist = EdgeCountDistribution::new(DistributionKind::Empirical, n, k, g.m());
    let mut tally = std::collections::HashMap::<u64, u64>::new();
    for _ in 0..samples {
        set.iter_mut().for_each(|w| *w = 0);
        let drawn = sampler.draw(&mut rng, size);
        let mut deg_sum = 0u64;
        for &v in drawn {
            bits::set(&mut set, v as usize);
            deg_sum += g.degree(v as usize) as u64;
        }
        let inside = bits::induced_edges(g.rows(), words, &set);
        let e = if flip { g.m() + inside - deg_sum } else { inside };
        *tally.entry(e).or_insert(0) += 1;
    }
    for (z, c) in tally {
        dist.add(z, c);
    }
    dist
}

/// Empirical distribution of `e(S)` over `samples` independent uniform
/// k-subsets. Worker `w` uses stream `(seed, Sampling, w)` and takes
/// `samples / workers` draws plus one if `w < samples % workers`; the result
/// depends only on `(seed, workers)`.
pub fn sample_edge_counts(g: &Graph, k: usize, samples: u64, seed: u64, workers: usize) -> Result<EdgeCountDistribution> {
    check_k(g.n(), k)?;
    if samples == 0 {
        return Err(Error::invalid("samples must be >= 1"));
    }
    let workers = workers.max(1);
    let share = |w: usize| samples / workers as u64 + ((w as u64) < samples % workers as u64) as u64;
    let parts: Vec<EdgeCountDistribution> = if workers == 1 {
        vec![sample_worker(g, k, samples, rng::stream(seed, Domain::Sampling, 0))]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let rng = rng::stream(seed, Domain::Sampling, w as u32);
                    scope.spawn(move || sample_worker(g, k, share(w), rng))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sampling worker panicked")).collect()
        })
    };
    let mut dist = EdgeCountDistribution::new(DistributionKind::Empirical, g.n(), k, g.m());
    dist.seed = Some(seed);
    for p in &parts {
        dist.merge(p);
    }
    Ok(dist)
}

/// One draw of `S = S' ∪ T` with `|T| = t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDraw {
    pub base: Vec<usize>,
    pub extra: Vec<usize>,
    /// `e(S')`.
    pub base_edges: u64,
    /// `e(S' ∪ T) − e(S')`.
    pub increment: u64,
}

fn check_split(n: usize, k: usize, t: usize) -> Result<()> {
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    if t < 1 || 2 * t > k {
        return Err(Error::invalid(format!("need 1 <= t <= k/2, got t = {t}, k = {k}")));
    }
    Ok(())
}

/// `Σ_{x∈T} d_{S'}(x) + e(T)`.
pub(crate) fn increment_of(g: &Graph, base_bits: &[u64], extra: &[usize]) -> u64 {
    let mut inc = 0u64;
    for (i, &x) in extra.iter().enumerate() {
        inc += bits::and_count(g.row(x), base_bits) as u64;
        for &y in &extra[i + 1..] {
            inc += g.has_edge(x, y) as u64;
        }
    }
    inc
}

fn split_with<R: Rng>(g: &Graph, k: usize, t: usize, sampler: &mut SubsetSampler, rng: &mut R) -> SplitDraw {
    let drawn: Vec<usize> = sampler.draw(rng, k).iter().map(|&v| v as usize).collect();
    let (base, extra) = drawn.split_at(k - t);
    let mut base_bits = vec![0u64; g.words()];
    for &v in base {
        bits::set(&mut base_bits, v);
    }
    SplitDraw {
        base_edges: bits::induced_edges(g.rows(), g.words(), &base_bits),
        increment: increment_of(g, &base_bits, extra),
        base: base.to_vec(),
        extra: extra.to_vec(),
    }
}

/// Draws a uniform `(k−t)`-set `S'` and a uniform `t`-set `T` from its
/// complement, so that `S' ∪ T` is a uniform k-set.
pub fn split_sample(g: &Graph, k: usize, t: usize, seed: u64) -> Result<SplitDraw> {
    check_split(g.n(), k, t)?;
    let mut rng = rng::stream(seed, Domain::Split, 0);
    Ok(split_with(g, k, t, &mut SubsetSampler::new(g.n()), &mut rng))
}

/// `draws` independent split samples from one stream.
pub fn split_increments(g: &Graph, k: usize, t: usize, draws: u64, seed: u64) -> Result<Vec<u64>> {
    check_split(g.n(), k, t)?;
    let mut rng = rng::stream(seed, Domain::Split, 0);
    let mut sampler = SubsetSampler::new(g.n());
    Ok((0..draws).map(|_| split_with(g, k, t, &mut sampler, &mut rng).increment).collect())
}
