//! Gaussian and binomial reference models, and the distances between them
//! and an edge-count distribution.

use std::f64::consts::{E, PI};

use num::{BigRational, ToPrimitive};
use libm::erfc;

use crate::distribution::{DistributionKind, EdgeCountDistribution};
use crate::error::{Error, Result};
use crate::graph::choose2;
use crate::stein::lambda_exact;

/// `N(K·M/N, λn²)`, the Gaussian model for `e(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalModel {
    pub mu: f64,
    pub mu_exact: BigRational,
    pub sigma2: f64,
    pub n: usize,
    pub k: usize,
    pub m: u64,
}

pub fn normal_model(n: usize, k: usize, m: u64) -> Result<NormalModel> {
    let lambda = lambda_exact(n, k, m)?;
    let mu_exact = BigRational::new((choose2(k as u64) as i128 * m as i128).into(), (choose2(n as u64) as i128).into());
    let sigma2 = (lambda * BigRational::from_integer(((n * n) as i128).into())).to_f64().unwrap_or(f64::NAN);
    Ok(NormalModel { mu: mu_exact.to_f64().unwrap_or(f64::NAN), mu_exact, sigma2, n, k, m })
}

impl NormalModel {
    fn sigma(&self) -> Result<f64> {
        if self.sigma2 > 0.0 && self.sigma2.is_finite() {
            Ok(self.sigma2.sqrt())
        } else {
            Err(Error::Numeric(format!("degenerate normal model: variance {}", self.sigma2)))
        }
    }

    /// `P(Z <= z)`, via the complementary error function (musl port, about
    /// one ulp).
    pub fn cdf(&self, z: f64) -> Result<f64> {
        let s = self.sigma()?;
        Ok(0.5 * erfc(-(z - self.mu) / (s * std::f64::consts::SQRT_2)))
    }

    pub fn pdf(&self, z: f64) -> Result<f64> {
        let s = self.sigma()?;
        let x = (z - self.mu) / s;
        Ok((-0.5 * x * x).exp() / (s * (2.0 * PI).sqrt()))
    }

    /// `P(Z ∈ [z0, z1])`; infinite endpoints allowed.
    pub fn interval(&self, z0: f64, z1: f64) -> Result<f64> {
        let hi = if z1 == f64::INFINITY { 1.0 } else { self.cdf(z1)? };
        let lo = if z0 == f64::NEG_INFINITY { 0.0 } else { self.cdf(z0)? };
        Ok(hi - lo)
    }

    /// `1/(σ√(2π))`, the maximum of the density.
    pub fn pdf_bound(&self) -> Result<f64> {
        Ok(1.0 / (self.sigma()? * (2.0 * PI).sqrt()))
    }

    /// `1/(σ²√(2πe))`, a Lipschitz constant for the density.
    pub fn pdf_lipschitz(&self) -> Result<f64> {
        self.sigma()?;
        Ok(1.0 / (self.sigma2 * (2.0 * PI * E).sqrt()))
    }

    pub fn sd(&self) -> Result<f64> {
        self.sigma()
    }
}

pub fn normal_cdf(model: &NormalModel, z: f64) -> Result<f64> {
    model.cdf(z)
}

pub fn normal_pdf(model: &NormalModel, z: f64) -> Result<f64> {
    model.pdf(z)
}

/// `Bin(trials, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialModel {
    pub trials: u64,
    pub p: f64,
}

impl BinomialModel {
    pub fn new(trials: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
        }
        Ok(BinomialModel { trials, p })
    }

    /// The increment model for adding `t` vertices to a `(k−t)`-set:
    /// `(k−t)·t + C(t,2)` trials.
    pub fn for_split(k: u64, t: u64, p: f64) -> Result<Self> {
        if t > k {
            return Err(Error::invalid(format!("t = {t} exceeds k = {k}")));
        }
        Self::new((k - t) * t + choose2(t), p)
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.p
    }

    pub fn variance(&self) -> f64 {
        self.trials as f64 * self.p * (1.0 - self.p)
    }

    pub fn pmf(&self, m: u64) -> Result<f64> {
        if m > self.trials {
            return Err(Error::invalid(format!("m = {m} outside [0, {}]", self.trials)));
        }
        Ok(binomial_pmf_raw(m, self.trials, self.p))
    }

    /// `P(lo <= Y <= hi)`, clamped to the support.
    pub fn mass_between(&self, lo: i64, hi: i64) -> f64 {
        let lo = lo.max(0) as u64;
        if hi < 0 || lo > self.trials {
            return 0.0;
        }
        let hi = (hi as u64).min(self.trials);
        (lo..=hi).map(|m| binomial_pmf_raw(m, self.trials, self.p)).sum()
    }
}

pub fn binomial_pmf(model: &BinomialModel, m: u64) -> Result<f64> {
    model.pmf(m)
}

/// `(√(π/(8·Var)), π/(4·Var))`: a bound on any point probability and a
/// Lipschitz constant in `m` for any sum of independent Bernoullis.
pub fn binomial_bounds(model: &BinomialModel) -> Result<(f64, f64)> {
    let var = model.variance();
    if var <= 0.0 {
        return Err(Error::Numeric("binomial variance is zero".into()));
    }
    Ok(((PI / (8.0 * var)).sqrt(), PI / (4.0 * var)))
}

// ln(n!) − ln(√(2πn)(n/e)^n) for n = 1..=15
const STIRLING_ERR: [f64; 15] = [
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirling_err(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLING_ERR[n as usize - 1];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x·ln(x/np) + np − x`, with a series near `x = np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Binomial point probability by the saddle-point expansion
/// (Stirling-error terms plus deviances), accurate to a few ulps in relative
/// terms across the whole support.
fn binomial_pmf_raw(x: u64, n: u64, p: f64) -> f64 {
    let q = 1.0 - p;
    if p == 0.0 {
        return (x == 0) as u8 as f64;
    }
    if q == 0.0 {
        return (x == n) as u8 as f64;
    }
    let (xf, nf) = (x as f64, n as f64);
    if x == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
        return lc.exp();
    }
    let lc = stirling_err(nf) - stirling_err(xf) - stirling_err(nf - xf) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

fn nonempty(dist: &EdgeCountDistribution) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::invalid("empty distribution"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsDistance {
    pub value: f64,
    /// Support point where the supremum is attained.
    pub z: u64,
    /// Whether it is attained at the left limit `z⁻`.
    pub left_limit: bool,
}

/// `sup_z |P(e(S) <= z) − P(Z <= z)|`. The empirical CDF is a right-continuous
/// step function, so the supremum is attained at a support point, either at
/// the point itself or at its left limit.
pub fn kolmogorov_distance(dist: &EdgeCountDistribution, model: &NormalModel) -> Result<KsDistance> {
    nonempty(dist)?;
    let total = dist.total as f64;
    let mut below = 0u64;
    let mut best = KsDistance { value: -1.0, z: 0, left_limit: false };
    for (&z, &c) in &dist.counts {
        if c == 0 {
            continue;
        }
        let phi = model.cdf(z as f64)?;
        let left = (below as f64 / total - phi).abs();
        below += c;
        let right = (below as f64 / total - phi).abs();
        if left > best.value {
            best = KsDistance { value: left, z, left_limit: true };
        }
        if right > best.value {
            best = KsDistance { value: right, z, left_limit: false };
        }
    }
    Ok(best)
}

/// `|P(e(S) ∈ [z0, z1]) − P(Z ∈ [z0, z1])|`.
pub fn interval_error(dist: &EdgeCountDistribution, model: &NormalModel, z0: f64, z1: f64) -> Result<f64> {
    nonempty(dist)?;
    if z0 > z1 || z0.is_nan() || z1.is_nan() {
        return Err(Error::invalid(format!("empty interval [{z0}, {z1}]")));
    }
    let lo = if z0 == f64::NEG_INFINITY { i64::MIN } else { z0.ceil() as i64 };
    let hi = if z1 == f64::INFINITY { i64::MAX } else { z1.floor() as i64 };
    let emp = dist.count_between(lo, hi) as f64 / dist.total as f64;
    Ok((emp - model.interval(z0, z1)?).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LltError {
    /// `max n·|P(z) − φ(z)|` over the window.
    pub value: f64,
    pub z: i64,
    pub points: u64,
    /// Largest per-point Monte Carlo standard error divided by `φ(μ)`.
    pub noise_ratio: f64,
    /// Set when `noise_ratio > 0.1`, i.e. the sample is too small to resolve
    /// point probabilities.
    pub noisy: bool,
}

/// Largest scaled pointwise deviation `n·|P(e(S)=z) − φ(z)|` over the
/// integers with `|z − μ| <= window·σ`.
pub fn llt_error(dist: &EdgeCountDistribution, model: &NormalModel, window: f64) -> Result<LltError> {
    nonempty(dist)?;
    if !(window > 0.0) {
        return Err(Error::invalid(format!("window must be > 0, got {window}")));
    }
    let sd = model.sd()?;
    let lo = (model.mu - window * sd).ceil() as i64;
    let hi = (model.mu + window * sd).floor() as i64;
    let n = dist.n as f64;
    let total = dist.total as f64;
    let mut out = LltError { value: 0.0, z: lo, points: 0, noise_ratio: 0.0, noisy: false };
    let peak = model.pdf(model.mu)?;
    for z in lo..=hi {
        let p = dist.prob(z);
        let dev = n * (p - model.pdf(z as f64)?).abs();
        if dev > out.value || out.points == 0 {
            out.value = dev;
            out.z = z;
        }
        out.points += 1;
        if dist.kind == DistributionKind::Empirical {
            let se = (p * (1.0 - p) / total).sqrt();
            out.noise_ratio = out.noise_ratio.max(se / peak);
        }
    }
    out.noisy = out.noise_ratio > 0.1;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperCheck {
    pub z: u64,
    /// `sup_z P(e(S) ∈ [z, z+r])·n/(C·r)`; at most 1 when the bound holds.
    pub ratio: f64,
}

pub fn interval_upper_check(dist: &EdgeCountDistribution, r: u64, c: f64) -> Result<UpperCheck> {
    nonempty(dist)?;
    if r < 1 {
        return Err(Error::invalid("r must be >= 1"));
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!("C must be > 0, got {c}")));
    }
    let mut best = UpperCheck { z: 0, ratio: -1.0 };
    let scale = dist.n as f64 / (c * r as f64 * dist.total as f64);
    // the maximising window can always be slid so its left end is a support point
    for &z in dist.counts.keys() {
        let mass = dist.count_between(z as i64, (z + r) as i64);
        let ratio = mass as f64 * scale;
        if ratio > best.ratio {
            best = UpperCheck { z, ratio };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DistributionKind;
    use num::BigInt;
    use proptest::prelude::*;

    fn c4_exact() -> EdgeCountDistribution {
        let mut d = EdgeCountDistribution::new(DistributionKind::Exact, 4, 2, 4);
        d.add(0, 2);
        d.add(1, 4);
        d
    }

    /// C(n, m) p^m q^(n−m) in exact rationals, p = num/den.
    fn exact_pmf(n: u64, m: u64, num: i64, den: i64) -> f64 {
        let mut c = BigInt::from(1);
        for i in 0..m {
            c = c * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        let p = BigRational::new(num.into(), den.into());
        let q = BigRational::new((den - num).into(), den.into());
        let v = BigRational::from_integer(c) * num::pow(p, m as usize) * num::pow(q, (n - m) as usize);
        v.to_f64().unwrap()
    }

    #[test]
    fn normal_model_examples() {
        let m = normal_model(4, 2, 3).unwrap();
        assert_eq!(m.mu, 0.5);
        assert!((m.sigma2 - 0.375).abs() < 1e-15);
        let z = normal_model(10, 4, 0).unwrap();
        assert_eq!(z.sigma2, 0.0);
        assert!(z.cdf(1.0).is_err());
        assert!(z.pdf(1.0).is_err());

        let n = 2000usize;
        let pairs = choose2(n as u64);
        let big = normal_model(n, 1000, pairs / 2).unwrap();
        let lam = big.sigma2 / (n * n) as f64;
        assert!((lam - 3.0 / 128.0).abs() < 1e-5, "{lam}");
        assert!((big.mu - choose2(1000) as f64 / 2.0).abs() < 1.0);
    }

    #[test]
    fn cdf_matches_high_precision_values() {
        let std = NormalModel { mu: 0.0, mu_exact: BigRational::from_integer(0.into()), sigma2: 1.0, n: 1, k: 1, m: 0 };
        for (x, want) in [
            (-8.0, 6.220960574271784123515995e-16),
            (-3.0, 0.001349898031630094526651815),
            (0.1, 0.5398278372770289814654046),
            (2.5, 0.9937903346742238648330219),
            (6.0, 0.9999999990134123549623019),
        ] {
            let got = std.cdf(x).unwrap();
            assert!((got - want).abs() < 1e-15, "x = {x}: {got:e} vs {want:e}");
        }
        assert_eq!(std.cdf(0.0).unwrap(), 0.5);
        assert!((std.pdf(0.0).unwrap() - std.pdf_bound().unwrap()).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn cdf_symmetric_and_monotone(mu in -50.0f64..50.0, s in 0.1f64..100.0, x in 0.0f64..400.0, dx in 0.0f64..10.0) {
            let m = NormalModel { mu, mu_exact: BigRational::from_integer(0.into()), sigma2: s * s, n: 1, k: 1, m: 0 };
            let sum = m.cdf(mu + x).unwrap() + m.cdf(mu - x).unwrap();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(m.cdf(mu + x + dx).unwrap() >= m.cdf(mu + x).unwrap());
        }
    }

    #[test]
    fn pdf_bounds_hold_on_random_triples() {
        use rand::Rng;
        let mut rng = crate::rng::stream(17, crate::rng::Domain::Corpus, 1);
        for _ in 0..100_000 {
            let s: f64 = rng.gen_range(0.01..1000.0);
            let m = NormalModel { mu: 0.0, mu_exact: BigRational::from_integer(0.into()), sigma2: s * s, n: 1, k: 1, m: 0 };
            let x = rng.gen_range(-6.0..6.0) * s;
            let y = rng.gen_range(-6.0..6.0) * s;
            let (px, py) = (m.pdf(x).unwrap(), m.pdf(y).unwrap());
            assert!(px <= m.pdf_bound().unwrap() * (1.0 + 1e-12));
            assert!((px - py).abs() <= (x - y).abs() * m.pdf_lipschitz().unwrap() * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn binomial_matches_exact_rationals() {
        for n in [1u64, 2, 7, 30, 100, 200] {
            for (num, den) in [(1i64, 2i64), (3, 10), (1, 20), (19, 20)] {
                let b = BinomialModel::new(n, num as f64 / den as f64).unwrap();
                for m in 0..=n {
                    let want = exact_pmf(n, m, num, den);
                    let got = b.pmf(m).unwrap();
                    if want > 1e-300 {
                        assert!(((got - want) / want).abs() <= 1e-12, "n={n} p={num}/{den} m={m}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_examples() {
        let b = BinomialModel::new(1, 0.5).unwrap();
        assert_eq!(b.pmf(0).unwrap(), 0.5);
        assert_eq!(b.pmf(1).unwrap(), 0.5);
        assert!((binomial_bounds(&b).unwrap().0 - (PI / 2.0).sqrt()).abs() < 1e-15);
        assert!(b.pmf(2).is_err());

        let b = BinomialModel::new(100, 0.5).unwrap();
        let peak = b.pmf(50).unwrap();
        assert!((peak - 0.07958923738717877).abs() < 1e-15);
        let (point, slope) = binomial_bounds(&b).unwrap();
        assert!((point - (PI / 200.0).sqrt()).abs() < 1e-15);
        assert!(peak <= point);
        for m in 0..100 {
            assert!((b.pmf(m + 1).unwrap() - b.pmf(m).unwrap()).abs() <= slope);
        }
        assert_eq!(BinomialModel::for_split(10, 3, 0.5).unwrap().trials, 24);
        assert!(BinomialModel::new(3, 1.1).is_err());
    }

    #[test]
    fn binomial_sums_to_one() {
        for (n, p) in [(10u64, 0.3), (1000, 0.5), (100_000, 0.05), (100_000, 0.5), (37, 0.999)] {
            let b = BinomialModel::new(n, p).unwrap();
            let s = b.mass_between(0, n as i64);
            assert!((s - 1.0).abs() <= 1e-10, "n={n} p={p}: {s}");
        }
    }

    #[test]
    fn ks_examples() {
        // point mass at an integer mean gives exactly 1/2
        let model = normal_model(6, 3, 5).unwrap();
        assert_eq!(model.mu, 1.0);
        let mut point = EdgeCountDistribution::new(DistributionKind::Exact, 6, 3, 5);
        point.add(1, 20);
        let ks = kolmogorov_distance(&point, &model).unwrap();
        assert!((ks.value - 0.5).abs() < 1e-15);

        // C4, k = 2: mu = 2/3, sigma² = 1/3; CDF values from high precision
        let model = normal_model(4, 2, 4).unwrap();
        assert!((model.sigma2 - 1.0 / 3.0).abs() < 1e-15);
        let (phi0, phi1) = (0.12410653949496179174, 0.71814856917461348563);
        let want = [1.0 / 3.0 - phi0, phi0, 1.0 - phi1, phi1 - 1.0 / 3.0].into_iter().fold(0.0, f64::max);
        let ks = kolmogorov_distance(&c4_exact(), &model).unwrap();
        assert!((ks.value - want).abs() < 1e-14);
        assert_eq!((ks.z, ks.left_limit), (1, true));

        let empty = EdgeCountDistribution::new(DistributionKind::Exact, 4, 2, 4);
        assert!(kolmogorov_distance(&empty, &model).is_err());
    }

    #[test]
    fn ks_ignores_zero_count_points() {
        let model = normal_model(4, 2, 4).unwrap();
        let mut d = c4_exact();
        let base = kolmogorov_distance(&d, &model).unwrap().value;
        d.counts.insert(3, 0);
        d.counts.insert(2, 0);
        assert_eq!(kolmogorov_distance(&d, &model).unwrap().value, base);
    }

    #[test]
    fn interval_error_examples() {
        let model = normal_model(4, 2, 4).unwrap();
        let d = c4_exact();
        assert!(interval_error(&d, &model, f64::NEG_INFINITY, f64::INFINITY).unwrap() < 1e-12);
        let point = interval_error(&d, &model, 1.0, 1.0).unwrap();
        assert!((point - 4.0 / 6.0).abs() < 1e-15);
        assert!(interval_error(&d, &model, 1.0, 0.0).is_err());
        let ks = kolmogorov_distance(&d, &model).unwrap().value;
        for (a, b) in [(0.0, 1.0), (-1.0, 0.0), (0.5, 3.0), (0.0, 0.0)] {
            assert!(interval_error(&d, &model, a, b).unwrap() <= 2.0 * ks + 1e-15);
        }
    }

    #[test]
    fn llt_scan_matches_direct() {
        let model = normal_model(4, 2, 4).unwrap();
        let d = c4_exact();
        let r = llt_error(&d, &model, 2.0).unwrap();
        let sd = model.sd().unwrap();
        let mut want: f64 = 0.0;
        for z in -10i64..10 {
            if (z as f64 - model.mu).abs() <= 2.0 * sd {
                want = want.max(4.0 * (d.prob(z) - model.pdf(z as f64).unwrap()).abs());
            }
        }
        assert_eq!(r.value, want);
        assert!(llt_error(&d, &model, 0.0).is_err());
        assert!(!r.noisy);
    }

    #[test]
    fn upper_check() {
        let d = c4_exact();
        let r = interval_upper_check(&d, 2, 4.0).unwrap();
        assert!((r.ratio - 4.0 / (4.0 * 2.0)).abs() < 1e-15);
        let r = interval_upper_check(&d, 1, 4.0).unwrap();
        assert_eq!(r.z, 0);
        assert!(interval_upper_check(&d, 0, 4.0).is_err());
    }
}
