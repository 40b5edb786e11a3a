//! Small enumeration helpers shared by the exhaustive searches.

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
/// Stops early when `f` returns `false`.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Calls `f` on every `k`-subset of `0..n` in colexicographic order (sorted
/// by largest element first). The position in this order is the colex rank.
pub fn for_each_combination_colex(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // smallest i whose element can grow without colliding with idx[i + 1]
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { idx[i + 1] } else { n };
            if idx[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k {
            return;
        }
        idx[i] += 1;
        for (j, slot) in idx.iter_mut().enumerate().take(i) {
            *slot = j;
        }
    }
}

/// Collects all `k`-subsets of `items` (lexicographic by position).
pub fn subsets_of<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for_each_combination(items.len(), k, |idx| {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        true
    });
    out
}

/// Calls `f` on every permutation of `0..n` in lexicographic order. Stops
/// when `f` returns `false`.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut used = vec![false; n];
    let mut cur = Vec::with_capacity(n);
    fn rec(
        n: usize,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == n {
            return f(cur);
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                let go = rec(n, used, cur, f);
                cur.pop();
                used[v] = false;
                if !go {
                    return false;
                }
            }
        }
        true
    }
    rec(n, &mut used, &mut cur, &mut f);
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128)
}

pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}
