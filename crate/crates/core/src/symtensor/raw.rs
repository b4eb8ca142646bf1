use super::{accumulate, Scalar};
use crate::error::{arg_err, Result};
use crate::polygauss::Rational;
use std::collections::BTreeMap;

/// A tensor without any assumed symmetry, keyed by full 1-based index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTensor<S> {
    n: usize,
    rank: usize,
    pub(crate) components: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> RawTensor<S> {
    pub fn new(n: usize, rank: usize) -> Result<Self> {
        if n < 2 {
            return arg_err(format!("dimension must be at least 2, got {n}"));
        }
        Ok(RawTensor {
            n,
            rank,
            components: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, idx: &[usize]) -> Option<&S> {
        self.components.get(idx)
    }

    pub fn set(&mut self, idx: &[usize], value: S) -> Result<()> {
        self.check_key(idx)?;
        if value.is_zero() {
            self.components.remove(idx);
        } else {
            self.components.insert(idx.to_vec(), value);
        }
        Ok(())
    }

    /// Adds `value` to the component at `idx`.
    pub fn add_at(&mut self, idx: &[usize], value: S) -> Result<()> {
        self.check_key(idx)?;
        accumulate(&mut self.components, idx.to_vec(), value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.components.iter()
    }

    pub fn nnz(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = RawTensor {
            n: self.n,
            rank: self.rank,
            components: BTreeMap::new(),
        };
        for (k, v) in &self.components {
            accumulate(&mut out.components, k.clone(), v.scale(c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.components {
            accumulate(&mut out.components, k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RawTensor<T> {
        let mut components = BTreeMap::new();
        for (k, v) in &self.components {
            let mapped = f(v);
            if !mapped.is_zero() {
                components.insert(k.clone(), mapped);
            }
        }
        RawTensor {
            n: self.n,
            rank: self.rank,
            components,
        }
    }

    /// Reorders index positions: output position `i` carries the index that
    /// sat at input position `perm[i]`.
    pub fn permute_positions(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.rank {
            return arg_err("permutation length differs from rank");
        }
        let mut seen = vec![false; self.rank];
        for &p in perm {
            if p >= self.rank || seen[p] {
                return arg_err("not a permutation of positions");
            }
            seen[p] = true;
        }
        let mut out = RawTensor::new(self.n, self.rank)?;
        for (k, v) in &self.components {
            let mut target = vec![0; self.rank];
            for (i, &p) in perm.iter().enumerate() {
                target[i] = k[p];
            }
            out.components.insert(target, v.clone());
        }
        Ok(out)
    }

    /// True if the tensor is invariant under any permutation of `group`.
    pub fn is_symmetric_in(&self, group: &[usize]) -> bool {
        if group.len() < 2 {
            return true;
        }
        for (k, v) in &self.components {
            for w in group.windows(2) {
                let mut swapped = k.clone();
                swapped.swap(w[0], w[1]);
                if self.components.get(&swapped) != Some(v) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        crate::error::check_dim(self.n, other.n)?;
        if self.rank != other.rank {
            return arg_err(format!("rank mismatch: {} vs {}", self.rank, other.rank));
        }
        Ok(())
    }

    fn check_key(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.rank {
            return arg_err(format!(
                "tuple of length {} for rank-{} tensor",
                idx.len(),
                self.rank
            ));
        }
        if let Some(bad) = idx.iter().find(|&&i| i == 0 || i > self.n) {
            return arg_err(format!("index {bad} outside 1..={}", self.n));
        }
        Ok(())
    }
}
