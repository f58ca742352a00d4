//! k-subsets of `{0, .., n-1}`: lexicographic enumeration and colex ranking.

/// All `k`-subsets of `0..n` as sorted vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations { n, current: if k <= n { Some((0..k).collect()) } else { None } }
}

pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Colexicographic rank of a sorted subset: `Σ C(s_i, i+1)`.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(i, &s)| binomial(s, i + 1)).sum()
}

/// Sorted subset of size `k` with the given colex rank.
pub fn colex_unrank(mut rank: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (0..k).rev() {
        // largest s with C(s, i+1) <= rank
        let mut s = i;
        while binomial(s + 1, i + 1) <= rank {
            s += 1;
        }
        rank -= binomial(s, i + 1);
        out[i] = s;
    }
    out
}
