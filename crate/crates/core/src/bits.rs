//! Word-level kernels over `u64` bit rows.

#[inline(always)]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline(always)]
pub fn test(row: &[u64], v: usize) -> bool {
    row[v >> 6] >> (v & 63) & 1 == 1
}

#[inline(always)]
pub fn set(row: &mut [u64], v: usize) {
    row[v >> 6] |= 1 << (v & 63);
}

#[inline(always)]
pub fn clear(row: &mut [u64], v: usize) {
    row[v >> 6] &= !(1 << (v & 63));
}

/// Iterates the set bits of `row` in increasing order.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

#[inline(always)]
fn and_count_generic(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Edge count of the subgraph induced by `set`: half the sum over `v` in
/// `set` of `|N(v) ∩ set|`. Full rows keep the inner loop branch-free.
#[inline(always)]
fn induced_generic(rows: &[u64], words: usize, set: &[u64]) -> u64 {
    let mut total = 0u64;
    for (w, &word) in set.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let v = w * 64 + rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += and_count_generic(&rows[v * words..(v + 1) * words], set) as u64;
        }
    }
    total / 2
}

#[cfg(target_arch = "x86_64")]
mod x86 {
    #[target_feature(enable = "popcnt")]
    pub unsafe fn and_count(a: &[u64], b: &[u64]) -> u32 {
        super::and_count_generic(a, b)
    }

    #[target_feature(enable = "popcnt")]
    pub unsafe fn induced(rows: &[u64], words: usize, set: &[u64]) -> u64 {
        super::induced_generic(rows, words, set)
    }

    #[target_feature(enable = "avx512f,avx512vpopcntdq,popcnt")]
    pub unsafe fn induced_avx512(rows: &[u64], words: usize, set: &[u64]) -> u64 {
        super::induced_generic(rows, words, set)
    }
}

#[cfg(target_arch = "x86_64")]
#[inline]
fn has_avx512_popcnt() -> bool {
    std::arch::is_x86_feature_detected!("avx512vpopcntdq") && std::arch::is_x86_feature_detected!("avx512f")
}

#[cfg(target_arch = "x86_64")]
#[inline]
fn has_popcnt() -> bool {
    std::arch::is_x86_feature_detected!("popcnt")
}

/// `popcount(a & b)`.
#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    #[cfg(target_arch = "x86_64")]
    if has_popcnt() {
        // SAFETY: the CPU supports popcnt.
        return unsafe { x86::and_count(a, b) };
    }
    and_count_generic(a, b)
}

/// Edge count of the subgraph induced by `set`, where `rows` holds the
/// symmetric adjacency matrix, `words` words per row.
pub fn induced_edges(rows: &[u64], words: usize, set: &[u64]) -> u64 {
    debug_assert_eq!(set.len(), words);
    #[cfg(target_arch = "x86_64")]
    {
        if has_avx512_popcnt() {
            // SAFETY: the CPU supports the enabled features.
            return unsafe { x86::induced_avx512(rows, words, set) };
        }
        if has_popcnt() {
            // SAFETY: the CPU supports popcnt.
            return unsafe { x86::induced(rows, words, set) };
        }
    }
    induced_generic(rows, words, set)
}
