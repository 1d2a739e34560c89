//! Distributions of `e(S)` over k-subsets, exact or sampled.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Exact,
    Empirical,
}

/// Counts of each edge-count value `z`, with the experiment that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCountDistribution {
    pub kind: DistributionKind,
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
    pub n: usize,
    pub k: usize,
    pub m: u64,
    pub seed: Option<u64>,
}

/// Metadata sidecar for a distribution CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionMeta {
    pub format: String,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub kind: DistributionKind,
    pub total: u64,
    pub seed: Option<u64>,
}

impl EdgeCountDistribution {
    pub fn new(kind: DistributionKind, n: usize, k: usize, m: u64) -> Self {
        EdgeCountDistribution { kind, counts: BTreeMap::new(), total: 0, n, k, m, seed: None }
    }

    pub fn add(&mut self, z: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(z).or_insert(0) += count;
            self.total += count;
        }
    }

    /// Adds another run of the same experiment. Merging is associative.
    pub fn merge(&mut self, other: &EdgeCountDistribution) {
        for (&z, &c) in &other.counts {
            self.add(z, c);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, z: u64) -> u64 {
        self.counts.get(&z).copied().unwrap_or(0)
    }

    pub fn prob(&self, z: i64) -> f64 {
        if z < 0 || self.total == 0 {
            return 0.0;
        }
        self.count(z as u64) as f64 / self.total as f64
    }

    /// Number of observations with `lo <= z <= hi`.
    pub fn count_between(&self, lo: i64, hi: i64) -> u64 {
        if hi < lo || hi < 0 {
            return 0;
        }
        self.counts.range(lo.max(0) as u64..=hi as u64).map(|(_, c)| c).sum()
    }

    pub fn support_min(&self) -> Option<u64> {
        self.counts.keys().next().copied()
    }

    pub fn support_max(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn mean(&self) -> f64 {
        self.counts.iter().map(|(&z, &c)| z as f64 * c as f64).sum::<f64>() / self.total as f64
    }

    pub fn mean_exact(&self) -> BigRational {
        let s: u128 = self.counts.iter().map(|(&z, &c)| z as u128 * c as u128).sum();
        BigRational::new(BigInt::from(s), BigInt::from(self.total))
    }

    pub fn total_variation(&self, other: &EdgeCountDistribution) -> f64 {
        let mut keys: Vec<u64> = self.counts.keys().chain(other.counts.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys.iter().map(|&z| (self.prob(z as i64) - other.prob(z as i64)).abs()).sum::<f64>()
    }

    pub fn check(&self) -> Result<()> {
        let sum: u64 = self.counts.values().sum();
        if sum != self.total {
            return Err(Error::Numeric(format!("counts sum to {sum}, total is {}", self.total)));
        }
        let kk = crate::graph::choose2(self.k as u64);
        if let Some(z) = self.support_max() {
            if z > kk {
                return Err(Error::Numeric(format!("support point {z} exceeds C(k,2) = {kk}")));
            }
        }
        Ok(())
    }

    pub fn meta(&self) -> DistributionMeta {
        DistributionMeta {
            format: crate::FORMAT_VERSION.to_string(),
            n: self.n,
            k: self.k,
            m: self.m,
            kind: self.kind,
            total: self.total,
            seed: self.seed,
        }
    }

    /// `z,count` rows sorted by `z`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let mut out = String::from("z,count\n");
        for (z, c) in &self.counts {
            out.push_str(&format!("{z},{c}\n"));
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn read_csv(r: impl BufRead, meta: &DistributionMeta) -> Result<Self> {
        let mut d = EdgeCountDistribution::new(meta.kind, meta.n, meta.k, meta.m);
        d.seed = meta.seed;
        let mut last: Option<u64> = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if i == 0 {
                if line.trim() != "z,count" {
                    return Err(Error::Parse { line: 1, msg: "expected header z,count".into() });
                }
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.into() };
            let (z, c) = line.split_once(',').ok_or_else(|| bad("expected z,count"))?;
            let z: u64 = z.trim().parse().map_err(|_| bad("bad z"))?;
            let c: u64 = c.trim().parse().map_err(|_| bad("bad count"))?;
            if last.is_some_and(|l| l >= z) {
                return Err(bad("rows must be strictly increasing in z"));
            }
            last = Some(z);
            d.add(z, c);
        }
        if d.total != meta.total {
            return Err(Error::Parse { line: 0, msg: format!("rows sum to {}, sidecar says {}", d.total, meta.total) });
        }
        Ok(d)
    }
}
