use crate::error::{arg_err, Result};
use std::fmt;

/// An ordered list of 1-based tensor indices.
///
/// The dimension is not stored; [`IndexTuple::new`] and
/// [`IndexTuple::validate`] check the entries against it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        let t = IndexTuple(indices.to_vec());
        t.validate(n)?;
        Ok(t)
    }

    /// Builds a tuple without range checks; callers validate against `n` later.
    pub fn unchecked(indices: Vec<usize>) -> Self {
        IndexTuple(indices)
    }

    pub fn empty() -> Self {
        IndexTuple(Vec::new())
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return arg_err(format!("dimension must be at least 2, got {n}"));
        }
        if let Some(bad) = self.0.iter().find(|&&i| i == 0 || i > n) {
            return arg_err(format!("index {bad} outside 1..={n}"));
        }
        Ok(())
    }

    pub fn canonical(&self) -> Self {
        IndexTuple(canonical(&self.0))
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn canonical(indices: &[usize]) -> Vec<usize> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    v
}

/// All distinct rearrangements of a multiset, in lexicographic order.
pub fn distinct_arrangements(indices: &[usize]) -> Vec<Vec<usize>> {
    let mut current = canonical(indices);
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Non-decreasing tuples of length `rank` over `1..=n`.
pub fn canonical_tuples(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(rank);
    fn rec(n: usize, rank: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == rank {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(n, rank, i, cur, out);
            cur.pop();
        }
    }
    rec(n, rank, 1, &mut cur, &mut out);
    out
}

/// Every tuple of length `rank` over `1..=n` (`n^rank` of them).
pub fn all_tuples(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(rank)];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=n).map(move |i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of distinct orderings of a multiset: `r! / ∏ cᵢ!`.
pub fn multiplicity(indices: &[usize]) -> u64 {
    let sorted = canonical(indices);
    let mut denom = 1u64;
    let mut run = 0u64;
    for (i, v) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *v {
            run += 1;
        } else {
            run = 1;
        }
        denom *= run;
    }
    factorial(sorted.len()) / denom
}

/// Distinct sub-multisets of size `p` of a canonical tuple, each canonical.
pub fn sub_multisets(indices: &[usize], p: usize) -> Vec<Vec<usize>> {
    let sorted = canonical(indices);
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &v in &sorted {
        match groups.last_mut() {
            Some((val, count)) if *val == v => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        groups: &[(usize, usize)],
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let Some((&(val, count), rest)) = groups.split_first() else {
            return;
        };
        for take in (0..=count.min(left)).rev() {
            for _ in 0..take {
                cur.push(val);
            }
            rec(rest, left - take, cur, out);
            for _ in 0..take {
                cur.pop();
            }
        }
    }
    rec(&groups, p, &mut cur, &mut out);
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i as u64 + 1);
    }
    acc
}

pub fn is_sorted(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}
