//! Colexicographic enumeration and ranking of k-subsets.

/// All k-subsets of `0..n` in colex order (compare largest element first).
pub fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance: find the smallest position that can be incremented
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Position of a sorted subset in colex order.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(i, &s)| binomial(s, i + 1)).sum()
}

/// Sign of the permutation that sorts `seq` (entries distinct).
pub fn sort_sign(seq: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}
