//! A k-subset of a graph with its induced edge count and the number of
//! edges from every vertex into the subset, kept consistent under swaps.

use num::{BigInt, BigRational};

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetState {
    members: Vec<u64>,
    k: usize,
    edges: u64,
    /// `into[v]` = number of edges from `v` to the subset.
    into: Vec<u32>,
    degree_sum: u64,
}

impl SubsetState {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `e(S)`.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    /// `d_S(v)`.
    pub fn degree_into(&self, v: usize) -> u32 {
        self.into[v]
    }

    pub fn degrees_into(&self) -> &[u32] {
        &self.into
    }

    pub fn contains(&self, v: usize) -> bool {
        bits::test(&self.members, v)
    }

    pub fn member_bits(&self) -> &[u64] {
        &self.members
    }

    pub fn members(&self) -> Vec<usize> {
        bits::ones(&self.members).collect()
    }

    pub fn non_members(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&v| !self.contains(v)).collect()
    }

    /// `e(S̄)`, from `e(S) + e(S̄) + e(S, S̄) = M`.
    pub fn complement_edges(&self, g: &Graph) -> u64 {
        g.m() + self.edges - self.degree_sum
    }

    /// Recomputes everything from scratch and compares.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let rebuilt = build_state(g, &self.members())?;
        if &rebuilt != self {
            return Err(Error::Numeric("subset state out of sync with graph".into()));
        }
        let half: u64 = self.members().iter().map(|&v| self.into[v] as u64).sum();
        if half != 2 * self.edges {
            return Err(Error::Numeric("e(S) != sum of d_S over S / 2".into()));
        }
        Ok(())
    }
}

pub fn build_state(g: &Graph, subset: &[usize]) -> Result<SubsetState> {
    let n = g.n();
    let mut members = vec![0u64; g.words()];
    for &v in subset {
        if v >= n {
            return Err(Error::invalid(format!("vertex {v} out of range for n = {n}")));
        }
        if bits::test(&members, v) {
            return Err(Error::invalid(format!("vertex {v} listed twice")));
        }
        bits::set(&mut members, v);
    }
    let into: Vec<u32> = (0..n).map(|v| bits::and_count(g.row(v), &members)).collect();
    let half: u64 = subset.iter().map(|&v| into[v] as u64).sum();
    let degree_sum = subset.iter().map(|&v| g.degree(v) as u64).sum();
    Ok(SubsetState { members, k: subset.len(), edges: half / 2, into, degree_sum })
}

fn check_swap(g: &Graph, st: &SubsetState, x: usize, xb: usize) -> Result<()> {
    if x >= g.n() || xb >= g.n() {
        return Err(Error::invalid(format!("swap ({x}, {xb}) out of range")));
    }
    if !st.contains(x) {
        return Err(Error::invalid(format!("vertex {x} is not in S")));
    }
    if st.contains(xb) {
        return Err(Error::invalid(format!("vertex {xb} is already in S")));
    }
    Ok(())
}

#[inline]
pub(crate) fn delta_unchecked(g: &Graph, st: &SubsetState, x: usize, xb: usize) -> i64 {
    st.into[xb] as i64 - st.into[x] as i64 - g.has_edge(x, xb) as i64
}

/// `e(S − x + x̄) − e(S)` = `d_S(x̄) − d_S(x) − [x ~ x̄]`.
pub fn swap_delta(g: &Graph, st: &SubsetState, x: usize, xb: usize) -> Result<i64> {
    check_swap(g, st, x, xb)?;
    Ok(delta_unchecked(g, st, x, xb))
}

/// Replaces `x` by `xb` in place and returns the change in `e(S)`.
pub fn apply_swap(g: &Graph, st: &mut SubsetState, x: usize, xb: usize) -> Result<i64> {
    check_swap(g, st, x, xb)?;
    let delta = delta_unchecked(g, st, x, xb);
    bits::clear(&mut st.members, x);
    bits::set(&mut st.members, xb);
    for u in bits::ones(g.row(x)) {
        st.into[u] -= 1;
    }
    for u in bits::ones(g.row(xb)) {
        st.into[u] += 1;
    }
    st.edges = (st.edges as i64 + delta) as u64;
    st.degree_sum = st.degree_sum - g.degree(x) as u64 + g.degree(xb) as u64;
    Ok(delta)
}

/// Second moments of the degrees into a fixed subset.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeMoments {
    /// `Var_x d_S(x)` for `x` uniform in `S`.
    pub var_inside: BigRational,
    /// `Var_x̄ d_S(x̄)` for `x̄` uniform in the complement.
    pub var_outside: BigRational,
    /// `Cov_x̄(d_S(x̄), d_S̄(x̄))`.
    pub cov_outside: BigRational,
}

impl DegreeMoments {
    pub fn as_f64(&self) -> (f64, f64, f64) {
        use num::ToPrimitive;
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        (f(&self.var_inside), f(&self.var_outside), f(&self.cov_outside))
    }
}

fn population_cov(pairs: impl Iterator<Item = (i128, i128)>) -> BigRational {
    let (mut cnt, mut sa, mut sb, mut sab) = (0i128, 0i128, 0i128, 0i128);
    for (a, b) in pairs {
        cnt += 1;
        sa += a;
        sb += b;
        sab += a * b;
    }
    if cnt == 0 {
        return BigRational::from_integer(0.into());
    }
    BigRational::new(BigInt::from(cnt * sab - sa * sb), BigInt::from(cnt * cnt))
}

pub fn fixed_subset_degree_stats(g: &Graph, subset: &[usize]) -> Result<DegreeMoments> {
    let n = g.n();
    let k = subset.len();
    if k < 2 || k + 2 > n {
        return Err(Error::invalid(format!("need 2 <= k <= n-2, got k = {k}, n = {n}")));
    }
    let st = build_state(g, subset)?;
    let inside = st.members();
    let outside = st.non_members(n);
    let d_in = |v: usize| st.into[v] as i128;
    let d_out = |v: usize| g.degree(v) as i128 - st.into[v] as i128;
    Ok(DegreeMoments {
        var_inside: population_cov(inside.iter().map(|&v| (d_in(v), d_in(v)))),
        var_outside: population_cov(outside.iter().map(|&v| (d_in(v), d_in(v)))),
        cov_outside: population_cov(outside.iter().map(|&v| (d_in(v), d_out(v)))),
    })
}
