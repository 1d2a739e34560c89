//! Exhaustive enumeration of k-subsets in revolving-door order.

use std::collections::BTreeMap;

use crate::bits;
use crate::distribution::{DistributionKind, EdgeCountDistribution};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Revolving-door (minimal change) order of the `t`-subsets of `0..n`:
/// successive subsets differ by removing one element and adding one.
///
/// Starts at `{0, …, t−1}`; each call to [`RevolvingDoor::next_swap`] returns
/// the `(removed, added)` pair leading to the next subset.
#[derive(Clone, Debug)]
pub struct RevolvingDoor {
    // c[1..=t] ascending, c[t+1] = n sentinel; c[0] unused
    c: Vec<usize>,
    t: usize,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, t: usize) -> Self {
        assert!(t <= n);
        let mut c = vec![0; t + 2];
        for j in 1..=t {
            c[j] = j - 1;
        }
        c[t + 1] = n;
        RevolvingDoor { c, t, done: t == 0 || t == n }
    }

    pub fn current(&self) -> &[usize] {
        &self.c[1..=self.t]
    }

    pub fn next_swap(&mut self) -> Option<(usize, usize)> {
        if self.done {
            return None;
        }
        let t = self.t;
        let c = &mut self.c;
        let mut j = 2;
        let mut increase = if t % 2 == 1 {
            if c[1] + 1 < c[2] {
                c[1] += 1;
                return Some((c[1] - 1, c[1]));
            }
            false
        } else {
            if c[1] > 0 {
                c[1] -= 1;
                return Some((c[1] + 1, c[1]));
            }
            true
        };
        while j <= t {
            if increase {
                // c[j-1] == j-2 here
                if c[j] + 1 < c[j + 1] {
                    let removed = c[j - 1];
                    c[j - 1] = c[j];
                    c[j] += 1;
                    return Some((removed, c[j]));
                }
            } else {
                // c[j] == c[j-1] + 1 here
                if c[j] >= j {
                    let removed = c[j];
                    c[j] = c[j - 1];
                    c[j - 1] = j - 2;
                    return Some((removed, j - 2));
                }
            }
            j += 1;
            increase = !increase;
        }
        self.done = true;
        None
    }
}

/// Visits every k-subset once, passing its member bits, `e(S)` and `e(S̄)`.
/// Each step costs O(n/64) words. Refuses outright when `C(n,k) > budget`.
pub fn for_each_subset(g: &Graph, k: usize, budget: u64, mut visit: impl FnMut(&[u64], u64, u64)) -> Result<u64> {
    let n = g.n();
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    let total = binomial(n as u64, k as u64);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    let mut door = RevolvingDoor::new(n, k);
    let mut set = vec![0u64; g.words()];
    let mut deg_sum = 0u64;
    for &v in door.current() {
        bits::set(&mut set, v);
        deg_sum += g.degree(v) as u64;
    }
    let mut e = bits::induced_edges(g.rows(), g.words(), &set);
    let m = g.m();
    visit(&set, e, m + e - deg_sum);
    let mut visited = 1u64;
    while let Some((out, inn)) = door.next_swap() {
        let gain = bits::and_count(g.row(inn), &set) as u64 - g.has_edge(out, inn) as u64;
        let loss = bits::and_count(g.row(out), &set) as u64;
        e = e + gain - loss;
        bits::clear(&mut set, out);
        bits::set(&mut set, inn);
        deg_sum = deg_sum + g.degree(inn) as u64 - g.degree(out) as u64;
        visit(&set, e, m + e - deg_sum);
        visited += 1;
    }
    debug_assert_eq!(visited as u128, total);
    Ok(visited)
}

/// Exact distribution of `e(S)` over all k-subsets.
pub fn exact_distribution(g: &Graph, k: usize, budget: u64) -> Result<EdgeCountDistribution> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for_each_subset(g, k, budget, |_, e, _| *counts.entry(e).or_insert(0) += 1)?;
    let mut d = EdgeCountDistribution::new(DistributionKind::Exact, g.n(), k, g.m());
    for (z, c) in counts {
        d.add(z, c);
    }
    Ok(d)
}

/// Exact joint counts of `(e(S), e(S̄))` over all k-subsets.
pub fn exact_joint(g: &Graph, k: usize, budget: u64) -> Result<BTreeMap<(u64, u64), u64>> {
    let mut joint = BTreeMap::new();
    for_each_subset(g, k, budget, |_, e, eb| *joint.entry((e, eb)).or_insert(0) += 1)?;
    Ok(joint)
}
