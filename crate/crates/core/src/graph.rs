//! Dense graphs with bit-row adjacency, the two Erdős–Rényi generators and
//! the degree statistics every downstream formula is built from.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num::{BigInt, BigRational};
use rand::Rng;

use crate::bits;
use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// Largest supported vertex count. Edge indices must fit in `u64` comfortably
/// and the adjacency matrix (n² bits) in memory.
pub const MAX_VERTICES: usize = 1 << 16;

pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Immutable simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    deg: Vec<u32>,
    m: u64,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!("n = {n} exceeds {MAX_VERTICES}")));
        }
        let words = bits::words_for(n);
        Ok(Graph { n, words, adj: vec![0; n * words], deg: vec![0; n], m: 0 })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        Ok(g)
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge {u}-{v} out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::invalid(format!("duplicate edge {u}-{v}")));
            }
            g.insert(u, v);
        }
        Ok(g)
    }

    fn insert(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        bits::set(self.row_mut(u), v);
        bits::set(self.row_mut(v), u);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.m += 1;
    }

    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of vertex pairs, `C(n, 2)`.
    pub fn pairs(&self) -> u64 {
        choose2(self.n as u64)
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.deg[v]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.deg
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits::ones(self.row(u)).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_regular(&self) -> bool {
        self.deg.windows(2).all(|w| w[0] == w[1])
    }

    /// Checks symmetry, irreflexivity and degree bookkeeping.
    pub fn validate(&self) -> Result<()> {
        let mut twice_m = 0u64;
        for v in 0..self.n {
            if self.has_edge(v, v) {
                return Err(Error::Numeric(format!("self-loop at {v}")));
            }
            let pop: u32 = self.row(v).iter().map(|w| w.count_ones()).sum();
            if pop != self.deg[v] {
                return Err(Error::Numeric(format!("degree of {v} is {} but row has {pop} bits", self.deg[v])));
            }
            for u in bits::ones(self.row(v)) {
                if u >= self.n || !self.has_edge(u, v) {
                    return Err(Error::Numeric(format!("asymmetric adjacency at {v}-{u}")));
                }
            }
            twice_m += pop as u64;
        }
        if twice_m != 2 * self.m {
            return Err(Error::Numeric(format!("degree sum {twice_m} != 2M = {}", 2 * self.m)));
        }
        Ok(())
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "{} {}", self.n, self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(buf, "{u} {v}").unwrap();
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    /// Reads the `n M` / `u v` text format.
    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(s) if s.trim().is_empty() => None,
            Ok(s) => Some(Ok((i + 1, s))),
            Err(e) => Some(Err(e)),
        });
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })??;
        let (n, m) = parse_pair(line, &header)?;
        let n = usize::try_from(n).map_err(|_| Error::Parse { line, msg: "n too large".into() })?;
        if m > choose2(n as u64) {
            return Err(Error::Parse { line, msg: format!("M = {m} exceeds C({n},2)") });
        }
        let mut g = Self::empty(n).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        for item in lines {
            let (line, text) = item?;
            let (u, v) = parse_pair(line, &text)?;
            let (u, v) = (u as usize, v as usize);
            if u >= v {
                let msg = if u == v { format!("self-loop at {u}") } else { format!("edge {u} {v} must have u < v") };
                return Err(Error::Parse { line, msg });
            }
            if v >= n {
                return Err(Error::Parse { line, msg: format!("vertex {v} out of range for n = {n}") });
            }
            if g.has_edge(u, v) {
                return Err(Error::Parse { line, msg: format!("duplicate edge {u} {v}") });
            }
            g.insert(u, v);
        }
        if g.m != m {
            return Err(Error::Parse { line: 1, msg: format!("header declares {m} edges, file has {}", g.m) });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(u64, u64)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<u64> {
        it.next()
            .ok_or_else(|| Error::Parse { line, msg: "expected two integers".into() })?
            .parse::<u64>()
            .map_err(|e| Error::Parse { line, msg: e.to_string() })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing tokens".into() });
    }
    Ok(pair)
}

/// Maps a pair index in `0..C(n,2)` (row-major over `u < v`) to the pair.
fn decode_pair(n: u64, idx: u64) -> (usize, usize) {
    // offset(u) = u*n - u(u+1)/2 is the index of pair (u, u+1)
    let offset = |u: u64| u * n - u * (u + 1) / 2;
    let nf = n as f64 - 0.5;
    let mut u = (nf - (nf * nf - 2.0 * idx as f64).max(0.0).sqrt()).floor() as u64;
    u = u.min(n - 2);
    while u > 0 && offset(u) > idx {
        u -= 1;
    }
    while u + 1 < n - 1 && offset(u + 1) <= idx {
        u += 1;
    }
    let v = u + 1 + (idx - offset(u));
    (u as usize, v as usize)
}

/// Uniform random graph with exactly `m` edges.
///
/// Dense targets stream over all pairs with selection sampling (each pair
/// kept with probability `still_needed / still_available`), which is exactly
/// uniform over `m`-subsets. Sparse targets (`m < N/64`) draw pair indices
/// with rejection of repeats.
pub fn gen_gnm(n: usize, m: u64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid(format!("G(n,M) needs n >= 2, got {n}")));
    }
    let pairs = choose2(n as u64);
    if m > pairs {
        return Err(Error::invalid(format!("M = {m} exceeds C({n},2) = {pairs}")));
    }
    let mut g = Graph::empty(n)?;
    let mut rng = rng::stream(seed, Domain::Graph, 0);
    if m < pairs / 64 {
        let mut chosen = HashSet::with_capacity(m as usize);
        while (chosen.len() as u64) < m {
            let idx = rng.gen_range(0..pairs);
            if chosen.insert(idx) {
                let (u, v) = decode_pair(n as u64, idx);
                g.insert(u, v);
            }
        }
    } else {
        let mut needed = m;
        let mut left = pairs;
        'outer: for u in 0..n {
            for v in u + 1..n {
                if needed == 0 {
                    break 'outer;
                }
                if rng.gen_range(0..left) < needed {
                    g.insert(u, v);
                    needed -= 1;
                }
                left -= 1;
            }
        }
    }
    Ok(g)
}

/// Binomial random graph: each pair independently with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("G(n,p) needs n >= 2, got {n}")));
    }
    let mut g = Graph::empty(n)?;
    let mut rng = rng::stream(seed, Domain::Graph, 0);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

/// Exact degree statistics of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphStats {
    pub n: u64,
    /// `C(n, 2)`.
    pub pairs: u64,
    pub m: u64,
    pub density: BigRational,
    pub density_f64: f64,
    /// Average degree `2M/n`.
    pub mean_degree: BigRational,
    pub mean_degree_f64: f64,
    /// `n` times the degree variance, times `n` again so it is an integer:
    /// `n·Σd(v)² − 4M²`.
    pub nv: i128,
    /// Number of paths on three vertices, `Σ C(d(v), 2)`.
    pub paths3: u128,
}

impl GraphStats {
    /// `V` itself (n times the degree variance).
    pub fn v(&self) -> f64 {
        self.nv as f64 / self.n as f64
    }

    pub fn v_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.nv), BigInt::from(self.n))
    }

    /// Both sides of `2Pn = Vn + 4M² − 2Mn`.
    pub fn path_identity(&self) -> (i128, i128) {
        let n = self.n as i128;
        let m = self.m as i128;
        (2 * self.paths3 as i128 * n, self.nv + 4 * m * m - 2 * m * n)
    }
}

pub fn stats(g: &Graph) -> GraphStats {
    let n = g.n as u64;
    let sum_sq: u128 = g.deg.iter().map(|&d| d as u128 * d as u128).sum();
    let paths3: u128 = g.deg.iter().map(|&d| d as u128 * (d as u128).saturating_sub(1) / 2).sum();
    let m = g.m;
    let nv = n as i128 * sum_sq as i128 - 4 * (m as i128) * (m as i128);
    let pairs = g.pairs();
    let density = if pairs == 0 { BigRational::from_integer(0.into()) } else { BigRational::new(m.into(), pairs.into()) };
    let mean_degree = if n == 0 { BigRational::from_integer(0.into()) } else { BigRational::new((2 * m).into(), n.into()) };
    let s = GraphStats {
        n,
        pairs,
        m,
        density_f64: if pairs == 0 { 0.0 } else { m as f64 / pairs as f64 },
        density,
        mean_degree_f64: if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 },
        mean_degree,
        nv,
        paths3,
    };
    let (lhs, rhs) = s.path_identity();
    assert_eq!(lhs, rhs, "2Pn = Vn + 4M^2 - 2Mn violated");
    assert!(nv >= 0);
    s
}

/// `(1/n)·Σ_v |d(v) − d(G)|³`, the third absolute central moment of the
/// degree sequence.
pub fn third_moment_stat(g: &Graph) -> f64 {
    if g.n == 0 {
        return 0.0;
    }
    let n = g.n as f64;
    let two_m = 2.0 * g.m as f64;
    // |d - 2M/n|^3 = |n d - 2M|^3 / n^3 keeps the regular case exactly zero
    let s: f64 = g.deg.iter().map(|&d| (n * d as f64 - two_m).abs().powi(3)).sum();
    s / n.powi(4)
}

/// Warnings (never errors) for parameters outside the dense band
/// `M/N, k/n ∈ [δ, 1−δ]`.
pub fn band_warnings(n: usize, k: Option<usize>, m: u64, delta: f64) -> Vec<String> {
    let mut out = Vec::new();
    let pairs = choose2(n as u64);
    if pairs > 0 {
        let p = m as f64 / pairs as f64;
        if p < delta || p > 1.0 - delta {
            out.push(format!("edge density M/N = {p:.4} outside [{delta}, {}]", 1.0 - delta));
        }
    }
    if let Some(k) = k {
        let r = k as f64 / n as f64;
        if r < delta || r > 1.0 - delta {
            out.push(format!("subset fraction k/n = {r:.4} outside [{delta}, {}]", 1.0 - delta));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn star4() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn decode_covers_all_pairs_in_order() {
        for n in 2..20u64 {
            let mut idx = 0;
            for u in 0..n as usize {
                for v in u + 1..n as usize {
                    assert_eq!(decode_pair(n, idx), (u, v), "n={n} idx={idx}");
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn gnm_extremes() {
        let k4 = gen_gnm(4, 6, 99).unwrap();
        assert_eq!(k4, Graph::complete(4).unwrap());
        assert!(k4.degrees().iter().all(|&d| d == 3));
        let e5 = gen_gnm(5, 0, 3).unwrap();
        assert_eq!(e5.m(), 0);
        assert!(e5.degrees().iter().all(|&d| d == 0));
    }

    #[test]
    fn gnm_rejects_bad_input() {
        assert!(gen_gnm(1, 0, 0).is_err());
        assert!(gen_gnm(5, 11, 0).is_err());
    }

    #[test]
    fn gnm_deterministic_and_valid() {
        let a = gen_gnm(10, 20, 1).unwrap();
        let b = gen_gnm(10, 20, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m(), 20);
        a.validate().unwrap();
        // sparse path
        let s = gen_gnm(200, 100, 5).unwrap();
        assert_eq!(s.m(), 100);
        s.validate().unwrap();
    }

    #[test]
    fn gnm_edge_frequencies_uniform() {
        // Each of the 45 pairs is present with probability 20/45.
        let (n, m, reps) = (10usize, 20u64, 100_000u64);
        let mut freq = vec![0u64; 45];
        for seed in 0..reps {
            let g = gen_gnm(n, m, seed).unwrap();
            let mut idx = 0;
            for u in 0..n {
                for v in u + 1..n {
                    freq[idx] += g.has_edge(u, v) as u64;
                    idx += 1;
                }
            }
        }
        let p = m as f64 / 45.0;
        let mean = reps as f64 * p;
        let sd = (reps as f64 * p * (1.0 - p)).sqrt();
        for (i, &f) in freq.iter().enumerate() {
            assert!((f as f64 - mean).abs() <= 4.0 * sd, "pair {i}: {f} vs {mean}");
        }
    }

    #[test]
    fn gnm_sparse_frequencies_uniform() {
        // m < N/64 exercises the rejection path: n=40 has 780 pairs, m=10.
        let (n, m, reps) = (40usize, 10u64, 20_000u64);
        let mut freq = vec![0u64; 780];
        for seed in 0..reps {
            let g = gen_gnm(n, m, seed).unwrap();
            for (u, v) in g.edges() {
                freq[u * n - u * (u + 1) / 2 + (v - u - 1)] += 1;
            }
        }
        let p = m as f64 / 780.0;
        let mean = reps as f64 * p;
        let sd = (reps as f64 * p * (1.0 - p)).sqrt();
        // chi-square over 780 cells, df 779: mean 779, sd ~39.5
        let chi: f64 = freq.iter().map(|&f| (f as f64 - mean).powi(2) / (mean * (1.0 - p))).sum();
        assert!(chi < 779.0 + 5.0 * (2.0f64 * 779.0).sqrt(), "chi2 {chi}");
        assert!(freq.iter().all(|&f| (f as f64 - mean).abs() <= 5.0 * sd));
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gen_gnp(6, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gen_gnp(6, 1.0, 1).unwrap(), Graph::complete(6).unwrap());
        assert!(gen_gnp(6, 1.5, 1).is_err());
        assert!(gen_gnp(6, -0.1, 1).is_err());
    }

    #[test]
    fn gnp_edge_count_mean() {
        let reps = 10_000;
        let pairs = 4950.0;
        let mean: f64 = (0..reps).map(|s| gen_gnp(100, 0.5, s).unwrap().m() as f64).sum::<f64>() / reps as f64;
        let sd = (pairs * 0.25 / reps as f64).sqrt();
        assert!((mean - 2475.0).abs() <= 4.0 * sd, "mean {mean}");
    }

    #[test]
    fn stats_path_and_complete() {
        let s = stats(&path3());
        assert_eq!((s.m, s.paths3, s.nv), (2, 1, 2));
        assert_eq!(s.v_exact(), BigRational::new(2.into(), 3.into()));
        assert_eq!(s.path_identity(), (6, 6));

        let s = stats(&Graph::complete(4).unwrap());
        assert_eq!((s.m, s.paths3, s.nv), (6, 12, 0));
        assert_eq!(s.path_identity(), (96, 96));

        let s = stats(&Graph::empty(7).unwrap());
        assert_eq!((s.m, s.paths3, s.nv), (0, 0, 0));
    }

    #[test]
    fn v_zero_iff_regular() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(c5.is_regular());
        assert_eq!(stats(&c5).nv, 0);
        assert!(!path3().is_regular());
        assert!(stats(&path3()).nv > 0);
    }

    #[test]
    fn third_moment_examples() {
        assert_eq!(third_moment_stat(&Graph::complete(5).unwrap()), 0.0);
        assert!((third_moment_stat(&star4()) - 0.9375).abs() < 1e-15);
    }

    #[test]
    fn file_round_trip_and_rejections() {
        let g = gen_gnp(30, 0.4, 11).unwrap();
        let mut buf = Vec::new();
        g.write_to(&mut buf).unwrap();
        let back = Graph::read_from(buf.as_slice()).unwrap();
        assert_eq!(g, back);

        let k4 = Graph::complete(4).unwrap();
        let mut buf = Vec::new();
        k4.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);

        for bad in ["3 1\n1 1\n", "3 2\n0 1\n0 1\n", "3 1\n0 3\n", "3 2\n0 1\n", "3 1\n2 1\n", "x\n"] {
            assert!(Graph::read_from(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn band() {
        assert!(band_warnings(100, Some(50), 2475, 0.1).is_empty());
        assert_eq!(band_warnings(100, Some(5), 10, 0.1).len(), 2);
    }
}
