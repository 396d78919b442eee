//! Enumeration of treatment assignments with a fixed number of treated
//! clusters, in lexicographic order of the treated index sets.

use rand::Rng;

/// `C(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Index set of the `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot;
        loop {
            // subsets whose `slot`-th element is `next`
            let block = binomial(n - next - 1, remaining - 1).expect("rank fits in u128");
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances `idx` to the next `k`-subset of `0..n`; returns false after the last.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographic iterator over all `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        if next_combination(&mut nxt, self.n) {
            self.current = Some(nxt);
        }
        Some(cur)
    }
}

/// Uniformly random `k`-subset of `0..n`, written sorted into `out`.
pub fn random_combination<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, scratch: &mut Vec<usize>, out: &mut Vec<usize>) {
    scratch.clear();
    scratch.extend(0..n);
    for i in 0..k {
        let j = rng.random_range(i..n);
        scratch.swap(i, j);
    }
    out.clear();
    out.extend_from_slice(&scratch[..k]);
    out.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(10, 5), Some(252));
        assert_eq!(binomial(100, 50), Some(100_891_344_545_564_193_334_812_497_256));
        assert_eq!(binomial(300, 150), None);
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = Combinations::new(6, 3).collect();
        assert_eq!(all.len(), 20);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[19], vec![3, 4, 5]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unrank_matches_iteration() {
        for (n, k) in [(7, 3), (9, 4), (5, 5), (4, 1)] {
            for (r, c) in Combinations::new(n, k).enumerate() {
                assert_eq!(unrank(n, k, r as u128), c);
            }
        }
    }

    #[test]
    fn random_subsets_are_uniform() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(3);
        let (mut s, mut o) = (Vec::new(), Vec::new());
        let mut counts = std::collections::HashMap::new();
        for _ in 0..60_000 {
            random_combination(&mut rng, 4, 2, &mut s, &mut o);
            *counts.entry(o.clone()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for &c in counts.values() {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{c}");
        }
    }
}
