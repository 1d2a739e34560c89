//! The exchangeable pair `(W, W')` obtained by swapping a uniform vertex of
//! `S` with a uniform vertex of its complement, where
//! `W = ((e(S) − K·M/N)/n, (e(S̄) − K̄·M/N)/n)`.
//!
//! Drift and covariance identities are computed in exact rationals; only the
//! matrix square roots and the A/B diagnostics use doubles.

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::bits;
use crate::error::{Error, Result};
use crate::exact::for_each_subset;
use crate::graph::{choose2, Graph, GraphStats};
use crate::mat2::{Mat2, RatMat2};
use crate::rng::{self, Domain};
use crate::sampling::SubsetSampler;

fn rat(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The normalised pair `(W, W̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WVector {
    pub w: BigRational,
    pub wbar: BigRational,
}

impl WVector {
    pub fn new(n: usize, k: usize, m: u64, edges: u64, complement_edges: u64) -> Self {
        let pairs = choose2(n as u64) as i128;
        let kk = choose2(k as u64) as i128;
        let kb = choose2((n - k) as u64) as i128;
        let n = n as i128;
        let m = m as i128;
        // (e − K·M/N)/n = (N·e − K·M)/(n·N)
        WVector {
            w: rat(pairs * edges as i128 - kk * m, n * pairs),
            wbar: rat(pairs * complement_edges as i128 - kb * m, n * pairs),
        }
    }

    pub fn as_array(&self) -> [BigRational; 2] {
        [self.w.clone(), self.wbar.clone()]
    }

    pub fn as_f64(&self) -> [f64; 2] {
        [to_f64(&self.w), to_f64(&self.wbar)]
    }
}

fn check_k_inner(n: usize, k: usize) -> Result<()> {
    if k < 2 || k + 2 > n {
        return Err(Error::invalid(format!("need 2 <= k <= n-2, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// `λ = ((n²−k²)k²/(2n⁴))·(M(N−M)/N²)`, exactly.
pub fn lambda_exact(n: usize, k: usize, m: u64) -> Result<BigRational> {
    check_k_inner(n, k)?;
    let pairs = choose2(n as u64) as i128;
    if m as i128 > pairs {
        return Err(Error::invalid(format!("M = {m} exceeds C({n},2) = {pairs}")));
    }
    let (n, k, m) = (n as i128, k as i128, m as i128);
    Ok(rat((n * n - k * k) * k * k, 2 * n * n * n * n) * rat(m * (pairs - m), pairs * pairs))
}

pub fn lambda_scalar(n: usize, k: usize, m: u64) -> Result<f64> {
    lambda_exact(n, k, m).map(|r| to_f64(&r))
}

/// The drift matrix `Λ` with `E[W' − W | W] = −ΛW`, and its inverse.
pub fn lambda_matrix(n: usize, k: usize) -> Result<(RatMat2, RatMat2)> {
    if k < 1 || k >= n {
        return Err(Error::invalid(format!("need 1 <= k <= n-1, got k = {k}, n = {n}")));
    }
    let (n, k) = (n as i128, k as i128);
    let kb = n - k;
    let lam = RatMat2([[int(n + kb - 1), int(k - 1)], [int(kb - 1), int(n + k - 1)]]).scale(&rat(1, k * kb));
    let inv = RatMat2([[int(n + k - 1), int(1 - k)], [int(1 - kb), int(n + kb - 1)]]).scale(&rat(k * kb, 2 * n * (n - 1)));
    Ok((lam, inv))
}

/// Exact covariance matrix `Σ = E[W Wᵀ]` from the degree statistics.
pub fn sigma_matrix(stats: &GraphStats, k: usize) -> Result<RatMat2> {
    let n = stats.n as usize;
    if n < 4 {
        return Err(Error::invalid(format!("Σ needs n >= 4, got {n}")));
    }
    check_k_inner(n, k)?;
    let pairs = stats.pairs as i128;
    let kb = (n - k) as i128;
    let (ni, ki, m) = (n as i128, k as i128, stats.m as i128);
    let kk = choose2(k as u64) as i128;
    let kkb = choose2(kb as u64) as i128;
    let base = int(m * (pairs - m));
    let nv = stats.v_exact() * int(pairs);
    let prefactor = rat(2 * kk * kkb, ni * ni * pairs * pairs * (ni - 2) * (ni - 3));
    let a11 = &base + &nv * rat(ki - 2, kb - 1);
    let a22 = &base + &nv * rat(kb - 2, ki - 1);
    let off = &base - &nv;
    Ok(RatMat2([[a11, off.clone()], [off, a22]]).scale(&prefactor))
}

/// Principal square root of a symmetric positive definite 2×2 matrix and
/// its inverse: `Σ^{1/2} = (Σ + √det·I)/√(tr + 2√det)`.
pub fn sqrt_2x2(sigma: &Mat2) -> Result<(Mat2, Mat2)> {
    let a = &sigma.0;
    if (a[0][1] - a[1][0]).abs() > 1e-12 * sigma.max_abs() {
        return Err(Error::Numeric("matrix is not symmetric".into()));
    }
    let det = sigma.det();
    let tr = sigma.trace();
    if !(det > 0.0 && tr > 0.0) || det <= 1e-14 * tr * tr {
        return Err(Error::Singular(format!("det = {det:e}, trace = {tr:e}")));
    }
    let s = det.sqrt();
    let t = (tr + 2.0 * s).sqrt();
    let half = Mat2([[(a[0][0] + s) / t, a[0][1] / t], [a[1][0] / t, (a[1][1] + s) / t]]);
    // det(half) = √det, so the inverse is the adjugate over √det
    let h = &half.0;
    let neg = Mat2([[h[1][1] / s, -h[0][1] / s], [-h[1][0] / s, h[0][0] / s]]);
    Ok((half, neg))
}

/// Everything the exchangeable-pair argument needs for one `(G, k)`.
#[derive(Clone, Debug)]
pub struct SteinMatrices {
    pub n: usize,
    pub k: usize,
    pub m: u64,
    pub lambda: f64,
    pub lambda_exact: BigRational,
    pub drift: RatMat2,
    pub drift_inv: RatMat2,
    pub sigma: RatMat2,
    pub sigma_f64: Mat2,
    /// `None` exactly when Σ is singular (regular graphs).
    pub sigma_half: Option<Mat2>,
    pub sigma_neg_half: Option<Mat2>,
    pub sigma11: f64,
}

impl SteinMatrices {
    pub fn new(stats: &GraphStats, k: usize) -> Result<Self> {
        let n = stats.n as usize;
        let sigma = sigma_matrix(stats, k)?;
        let lambda_exact = lambda_exact(n, k, stats.m)?;
        let (drift, drift_inv) = lambda_matrix(n, k)?;
        let sigma_f64 = sigma.to_f64();
        let roots = if sigma.det().is_positive() { sqrt_2x2(&sigma_f64).ok() } else { None };
        Ok(SteinMatrices {
            n,
            k,
            m: stats.m,
            lambda: to_f64(&lambda_exact),
            lambda_exact,
            drift,
            drift_inv,
            sigma11: sigma_f64.0[0][0],
            sigma_f64,
            sigma_half: roots.map(|r| r.0),
            sigma_neg_half: roots.map(|r| r.1),
            sigma,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.sigma.det().is_zero()
    }

    /// `λ^{(i)} = Σ_m |(Σ^{−1/2} Λ^{−1} Σ^{1/2})_{m,i}|`.
    pub fn weights(&self) -> Result<[f64; 2]> {
        let (half, neg) = match (self.sigma_half, self.sigma_neg_half) {
            (Some(h), Some(g)) => (h, g),
            _ => return Err(Error::Singular("Σ is singular (regular graph)".into())),
        };
        let l = neg.mul(&self.drift_inv.to_f64()).mul(&half).0;
        Ok([l[0][0].abs() + l[1][0].abs(), l[0][1].abs() + l[1][1].abs()])
    }
}

/// Averages `(W' − W, W̄' − W̄)` over all `k·k̄` swaps of a fixed `S` and
/// returns the largest absolute deviation from `−Λ(W, W̄)`. The identity is
/// exact, so the result is zero.
pub fn drift_check(g: &Graph, subset: &[usize]) -> Result<BigRational> {
    let n = g.n();
    let k = subset.len();
    let st = crate::subset::build_state(g, subset)?;
    if k < 1 || k >= n {
        return Err(Error::invalid(format!("need 1 <= k <= n-1, got k = {k}, n = {n}")));
    }
    let inside = st.members();
    let outside = st.non_members(n);
    let out_deg = |v: usize| g.degree(v) as i128 - st.degree_into(v) as i128;
    let (mut sum_e, mut sum_eb) = (0i128, 0i128);
    for &x in &inside {
        for &xb in &outside {
            let adj = g.has_edge(x, xb) as i128;
            sum_e += st.degree_into(xb) as i128 - st.degree_into(x) as i128 - adj;
            sum_eb += out_deg(x) - out_deg(xb) - adj;
        }
    }
    let swaps = (k * (n - k)) as i128;
    let scale = rat(1, n as i128 * swaps);
    let lhs = [int(sum_e) * &scale, int(sum_eb) * &scale];
    let w = WVector::new(n, k, g.m(), st.edges(), st.complement_edges(g));
    let (drift, _) = lambda_matrix(n, k)?;
    let rhs = drift.apply(&w.as_array());
    let d0 = (&lhs[0] + &rhs[0]).abs();
    let d1 = (&lhs[1] + &rhs[1]).abs();
    Ok(if d0 > d1 { d0 } else { d1 })
}

/// Exact first and second moments of `(W, W̄)` over every k-subset.
#[derive(Clone, Debug)]
pub struct EnumeratedMoments {
    pub mean: [BigRational; 2],
    pub cov: RatMat2,
    pub subsets: u64,
}

pub fn enumerated_moments(g: &Graph, k: usize, budget: u64) -> Result<EnumeratedMoments> {
    let n = g.n();
    let (mut s1, mut s2, mut s11, mut s12, mut s22) = (0u128, 0u128, 0u128, 0u128, 0u128);
    let total = for_each_subset(g, k, budget, |_, e, eb| {
        let (e, eb) = (e as u128, eb as u128);
        s1 += e;
        s2 += eb;
        s11 += e * e;
        s12 += e * eb;
        s22 += eb * eb;
    })?;
    let t = BigInt::from(total);
    let big = |v: u128| BigInt::from(v);
    let cov = |sxy: u128, sx: u128, sy: u128| {
        BigRational::new(&t * big(sxy) - big(sx) * big(sy), &t * &t * BigInt::from(n * n))
    };
    let kk = choose2(k as u64) as i128;
    let kb = choose2((n - k) as u64) as i128;
    let pairs = choose2(n as u64) as i128;
    let m = g.m() as i128;
    // E[W] = (E e − K·M/N)/n
    let mean_of = |s: u128, kq: i128| {
        (BigRational::new(big(s), t.clone()) - rat(kq * m, pairs.max(1))) * rat(1, n as i128)
    };
    let c12 = cov(s12, s1, s2);
    Ok(EnumeratedMoments {
        mean: [mean_of(s1, kk), mean_of(s2, kb)],
        cov: RatMat2([[cov(s11, s1, s1), c12.clone()], [c12, cov(s22, s2, s2)]]),
        subsets: total,
    })
}

/// `|Σ₁₁/λ − 1|`.
pub fn sigma11_vs_lambda(stats: &GraphStats, k: usize) -> Result<f64> {
    let sigma = sigma_matrix(stats, k)?;
    let lambda = lambda_exact(stats.n as usize, k, stats.m)?;
    if lambda.is_zero() {
        return Err(Error::Numeric("λ = 0 (empty or complete graph)".into()));
    }
    Ok(to_f64(&(&sigma.0[0][0] / &lambda - int(1)).abs()))
}

/// Monte Carlo estimates of the A and B error terms for `d = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinDiagnostics {
    pub weights: [f64; 2],
    pub a_hat: f64,
    pub a_se: f64,
    pub b_hat: f64,
    pub b_se: f64,
    pub t_hat: f64,
    pub outer: u64,
}

/// `T = (1/(4d))·(A/2 + √(√d·B + A²/4))²`.
pub fn t_term(a: f64, b: f64, d: usize) -> f64 {
    let d = d as f64;
    (a / 2.0 + (d.sqrt() * b + a * a / 4.0).sqrt()).powi(2) / (4.0 * d)
}

/// Conditional swap moments for one fixed `S`: the mean of `u_i u_j` with
/// `u = Σ^{−1/2}(W' − W)` over all `k·k̄` swaps, and the mean of
/// `Σ_{i,j,l} λ^{(i)} |u_i u_j u_l|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapMoments {
    pub q: [[f64; 2]; 2],
    pub third: f64,
}

pub fn swap_moments(g: &Graph, members: &[u64], neg_half: &Mat2, weights: [f64; 2]) -> SwapMoments {
    let n = g.n();
    let into: Vec<i64> = (0..n).map(|v| bits::and_count(g.row(v), members) as i64).collect();
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| bits::test(members, v));
    let out_deg: Vec<i64> = (0..n).map(|v| g.degree(v) as i64 - into[v]).collect();
    let p = &neg_half.0;
    let inv_n = 1.0 / n as f64;
    let (mut q11, mut q12, mut q22, mut third) = (0.0, 0.0, 0.0, 0.0);
    for &x in &inside {
        let row = g.row(x);
        for &xb in &outside {
            let adj = bits::test(row, xb) as i64;
            let de = (into[xb] - into[x] - adj) as f64 * inv_n;
            let deb = (out_deg[x] - out_deg[xb] - adj) as f64 * inv_n;
            let u1 = p[0][0] * de + p[0][1] * deb;
            let u2 = p[1][0] * de + p[1][1] * deb;
            q11 += u1 * u1;
            q12 += u1 * u2;
            q22 += u2 * u2;
            let s = u1.abs() + u2.abs();
            third += (weights[0] * u1.abs() + weights[1] * u2.abs()) * s * s;
        }
    }
    let swaps = (inside.len() * outside.len()) as f64;
    SwapMoments { q: [[q11 / swaps, q12 / swaps], [q12 / swaps, q22 / swaps]], third: third / swaps }
}

/// Estimates A and B over `outer` independent uniform k-subsets. For each
/// subset the swap average is exact; the variance in A is taken over `S`,
/// which refines the conditioning on `W` and so can only overstate A.
pub fn estimate_ab(g: &Graph, k: usize, outer: u64, seed: u64, workers: usize) -> Result<SteinDiagnostics> {
    if outer < 100 {
        return Err(Error::invalid(format!("outer sample count must be >= 100, got {outer}")));
    }
    let stats = crate::graph::stats(g);
    let mats = SteinMatrices::new(&stats, k)?;
    let weights = mats.weights()?;
    let neg = mats.sigma_neg_half.expect("weights() checked non-singular");
    let n = g.n();
    let workers = workers.max(1);
    let share = |w: usize| outer / workers as u64 + ((w as u64) < outer % workers as u64) as u64;
    let run = |w: usize| {
        let mut rng = rng::stream(seed, Domain::Stein, w as u32);
        let mut sampler = SubsetSampler::new(n);
        let mut set = vec![0u64; g.words()];
        (0..share(w))
            .map(|_| {
                set.iter_mut().for_each(|x| *x = 0);
                for &v in sampler.draw(&mut rng, k) {
                    bits::set(&mut set, v as usize);
                }
                swap_moments(g, &set, &neg, weights)
            })
            .collect::<Vec<_>>()
    };
    let per_subset: Vec<SwapMoments> = if workers == 1 {
        run(0)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers).map(|w| scope.spawn(move || run(w))).collect();
            handles.into_iter().flat_map(|h| h.join().expect("stein worker panicked")).collect()
        })
    };

    let count = per_subset.len() as f64;
    let (mut a_hat, mut a_se) = (0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            let xs: Vec<f64> = per_subset.iter().map(|s| s.q[i][j]).collect();
            let mean = xs.iter().sum::<f64>() / count;
            let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / count;
            let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / count;
            let var = m2 * count / (count - 1.0);
            let sd = var.sqrt();
            a_hat += weights[i] * sd;
            // delta method: se(√v) ≈ se(v)/(2√v)
            if sd > 0.0 {
                a_se += weights[i] * ((m4 - m2 * m2).max(0.0) / count).sqrt() / (2.0 * sd);
            }
        }
    }
    let thirds: Vec<f64> = per_subset.iter().map(|s| s.third).collect();
    let b_hat = thirds.iter().sum::<f64>() / count;
    let b_var = thirds.iter().map(|x| (x - b_hat).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(SteinDiagnostics {
        weights,
        a_hat,
        a_se,
        b_hat,
        b_se: (b_var / count).sqrt(),
        t_hat: t_term(a_hat, b_hat, 2),
        outer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnm, gen_gnp, stats};
    use crate::subset::build_state;

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_exact(4, 2, 3).unwrap(), rat(3, 128));
        assert_eq!(lambda_scalar(10, 4, 0).unwrap(), 0.0);
        assert_eq!(lambda_scalar(10, 4, 45).unwrap(), 0.0);
        assert!(lambda_scalar(4, 4, 3).is_err());
        assert!(lambda_scalar(4, 1, 3).is_err());
        assert!(lambda_scalar(4, 2, 7).is_err());
    }

    #[test]
    fn drift_matrix_examples() {
        let (l, inv) = lambda_matrix(4, 2).unwrap();
        assert_eq!(l, RatMat2([[rat(5, 4), rat(1, 4)], [rat(1, 4), rat(5, 4)]]));
        assert_eq!(l.mul(&inv), RatMat2::identity());
        assert!(lambda_matrix(4, 0).is_err());
        assert!(lambda_matrix(4, 4).is_err());
        let (_, inv) = lambda_matrix(100, 37).unwrap();
        assert!(inv.to_f64().max_abs() <= 200.0);
    }

    #[test]
    fn sigma_for_cycle() {
        let s = sigma_matrix(&stats(&c4()), 2).unwrap();
        for row in &s.0 {
            for e in row {
                assert_eq!(*e, rat(1, 72));
            }
        }
        let m = enumerated_moments(&c4(), 2, 1000).unwrap();
        assert_eq!(m.cov, s);
        assert!(sigma_matrix(&stats(&Graph::complete(3).unwrap()), 2).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let (h, g) = sqrt_2x2(&Mat2::IDENTITY).unwrap();
        assert!(h.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        assert!(g.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        let (h, _) = sqrt_2x2(&Mat2([[4.0, 0.0], [0.0, 9.0]])).unwrap();
        assert!(h.max_abs_diff(&Mat2([[2.0, 0.0], [0.0, 3.0]])) < 1e-15);
        assert!(matches!(sqrt_2x2(&Mat2([[1.0, 1.0], [1.0, 1.0]])), Err(Error::Singular(_))));
    }

    #[test]
    fn regular_graph_is_singular() {
        let st = stats(&c4());
        let mats = SteinMatrices::new(&st, 2).unwrap();
        assert!(mats.is_singular());
        assert!(mats.sigma_half.is_none());
        assert!(matches!(mats.weights(), Err(Error::Singular(_))));
        // all four entries equal
        let s = &mats.sigma.0;
        assert!(s[0][0] == s[0][1] && s[0][1] == s[1][1]);
    }

    #[test]
    fn drift_is_exact_on_small_graphs() {
        let k5 = Graph::complete(5).unwrap();
        assert!(drift_check(&k5, &[1, 3]).unwrap().is_zero());
        assert!(drift_check(&Graph::empty(7).unwrap(), &[0, 2, 5]).unwrap().is_zero());
        for seed in 0..10 {
            let g = gen_gnp(9, 0.5, seed).unwrap();
            for k in 1..9 {
                let s: Vec<usize> = (0..k).map(|i| (i * 5 + seed as usize) % 9).collect();
                let mut s2 = s.clone();
                s2.sort();
                s2.dedup();
                if s2.len() != k {
                    continue;
                }
                assert!(drift_check(&g, &s).unwrap().is_zero(), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn symmetric_weights_at_half() {
        let g = gen_gnm(100, 2475, 3).unwrap();
        let mats = SteinMatrices::new(&stats(&g), 50).unwrap();
        let w = mats.weights().unwrap();
        assert!((w[0] - w[1]).abs() <= 1e-9 * w[0], "{w:?}");
    }

    #[test]
    fn w_mean_zero_and_sigma_matches() {
        for seed in 0..8 {
            let g = gen_gnp(8, 0.5, 40 + seed).unwrap();
            let st = stats(&g);
            for k in 2..=6 {
                let m = enumerated_moments(&g, k, 1_000_000).unwrap();
                assert!(m.mean[0].is_zero() && m.mean[1].is_zero());
                assert_eq!(m.cov, sigma_matrix(&st, k).unwrap());
            }
        }
    }

    #[test]
    fn swap_moments_match_recount() {
        // Independent route: recompute e(S') and e(S̄') from scratch for every swap.
        let g = gen_gnp(10, 0.5, 77).unwrap();
        let st = stats(&g);
        let mats = SteinMatrices::new(&st, 4).unwrap();
        let weights = mats.weights().unwrap();
        let neg = mats.sigma_neg_half.unwrap();
        let subset = [0usize, 3, 4, 8];
        let base = build_state(&g, &subset).unwrap();
        let (e0, eb0) = (base.edges() as f64, base.complement_edges(&g) as f64);
        let mut want = SwapMoments { q: [[0.0; 2]; 2], third: 0.0 };
        let mut count = 0.0;
        for &x in &subset {
            for xb in (0..10).filter(|v| !subset.contains(v)) {
                let s2: Vec<usize> = subset.iter().map(|&v| if v == x { xb } else { v }).collect();
                let st2 = build_state(&g, &s2).unwrap();
                let dw = [(st2.edges() as f64 - e0) / 10.0, (st2.complement_edges(&g) as f64 - eb0) / 10.0];
                let u = neg.apply(dw);
                for i in 0..2 {
                    for j in 0..2 {
                        want.q[i][j] += u[i] * u[j];
                        for l in 0..2 {
                            want.third += weights[i] * (u[i] * u[j] * u[l]).abs();
                        }
                    }
                }
                count += 1.0;
            }
        }
        let got = swap_moments(&g, base.member_bits(), &neg, weights);
        for i in 0..2 {
            for j in 0..2 {
                assert!((got.q[i][j] - want.q[i][j] / count).abs() < 1e-12);
            }
        }
        assert!((got.third - want.third / count).abs() < 1e-12);
    }

    #[test]
    fn t_term_formula() {
        assert_eq!(t_term(0.0, 0.0, 2), 0.0);
        // A = 0: T = √d·B/(4d)
        assert!((t_term(0.0, 2.0, 2) - 2f64.sqrt() * 2.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn estimate_ab_rejects_bad_input() {
        let g = gen_gnp(30, 0.5, 1).unwrap();
        assert!(estimate_ab(&g, 15, 10, 0, 1).is_err());
        let c = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(matches!(estimate_ab(&c, 3, 100, 0, 1), Err(Error::Singular(_))));
    }

    #[test]
    fn estimate_ab_deterministic() {
        let g = gen_gnp(60, 0.5, 5).unwrap();
        let a = estimate_ab(&g, 30, 100, 3, 1).unwrap();
        let b = estimate_ab(&g, 30, 100, 3, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.a_hat.is_finite() && a.a_hat >= 0.0 && a.b_hat >= 0.0);
        assert!((a.t_hat - t_term(a.a_hat, a.b_hat, 2)).abs() == 0.0);
    }
}
