use super::raw::RawTensor;
use super::{accumulate, canonical, Scalar};
use crate::error::{arg_err, check_dim, Result};
use crate::polygauss::Rational;
use std::collections::BTreeMap;

/// Fully symmetric tensor stored by canonical (non-decreasing) index tuple.
/// Missing components are zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymStorage<S> {
    n: usize,
    rank: usize,
    pub(crate) components: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> SymStorage<S> {
    pub fn new(n: usize, rank: usize) -> Result<Self> {
        if n < 2 {
            return arg_err(format!("dimension must be at least 2, got {n}"));
        }
        Ok(SymStorage {
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

    /// Component at any ordering of the index tuple.
    pub fn get(&self, idx: &[usize]) -> Option<&S> {
        if idx.len() != self.rank {
            return None;
        }
        self.components.get(&canonical(idx))
    }

    pub fn set(&mut self, idx: &[usize], value: S) -> Result<()> {
        let key = self.check_key(idx)?;
        if value.is_zero() {
            self.components.remove(&key);
        } else {
            self.components.insert(key, value);
        }
        Ok(())
    }

    pub fn add_at(&mut self, idx: &[usize], value: S) -> Result<()> {
        let key = self.check_key(idx)?;
        accumulate(&mut self.components, key, value);
        Ok(())
    }

    /// Stored (nonzero) components keyed by canonical tuple.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.components.iter()
    }

    pub fn nnz(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        if self.rank != other.rank {
            return arg_err(format!("rank mismatch: {} vs {}", self.rank, other.rank));
        }
        let mut out = self.clone();
        for (k, v) in &other.components {
            accumulate(&mut out.components, k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v.scale(c))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymStorage<T> {
        let mut components = BTreeMap::new();
        for (k, v) in &self.components {
            let mapped = f(v);
            if !mapped.is_zero() {
                components.insert(k.clone(), mapped);
            }
        }
        SymStorage {
            n: self.n,
            rank: self.rank,
            components,
        }
    }

    /// Expands into every ordering of every stored tuple.
    pub fn to_raw(&self) -> RawTensor<S> {
        let mut out = RawTensor::new(self.n, self.rank).expect("n validated");
        for (k, v) in &self.components {
            for arrangement in super::distinct_arrangements(k) {
                out.components.insert(arrangement, v.clone());
            }
        }
        out
    }

    /// Reads a raw tensor that must already be fully symmetric.
    pub fn from_raw(raw: &RawTensor<S>) -> Result<Self> {
        let positions: Vec<usize> = (0..raw.rank()).collect();
        if !raw.is_symmetric_in(&positions) {
            return arg_err("tensor is not symmetric in all positions");
        }
        let mut out = SymStorage::new(raw.n(), raw.rank())?;
        for (k, v) in raw.iter() {
            if super::index::is_sorted(k) {
                out.components.insert(k.clone(), v.clone());
            }
        }
        Ok(out)
    }

    fn check_key(&self, idx: &[usize]) -> Result<Vec<usize>> {
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
        Ok(canonical(idx))
    }
}

/// Tensor in `S^{rank1} ⊗ S^{rank2}`: symmetric within each index group,
/// with no symmetry across the groups.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSymStorage<S> {
    n: usize,
    rank1: usize,
    rank2: usize,
    pub(crate) components: BTreeMap<(Vec<usize>, Vec<usize>), S>,
}

impl<S: Scalar> BiSymStorage<S> {
    pub fn new(n: usize, rank1: usize, rank2: usize) -> Result<Self> {
        if n < 2 {
            return arg_err(format!("dimension must be at least 2, got {n}"));
        }
        Ok(BiSymStorage {
            n,
            rank1,
            rank2,
            components: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.rank1, self.rank2)
    }

    pub fn get(&self, first: &[usize], second: &[usize]) -> Option<&S> {
        if first.len() != self.rank1 || second.len() != self.rank2 {
            return None;
        }
        self.components.get(&(canonical(first), canonical(second)))
    }

    pub fn set(&mut self, first: &[usize], second: &[usize], value: S) -> Result<()> {
        let key = self.check_key(first, second)?;
        if value.is_zero() {
            self.components.remove(&key);
        } else {
            self.components.insert(key, value);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vec<usize>, Vec<usize>), &S)> {
        self.components.iter()
    }

    pub fn nnz(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        if self.ranks() != other.ranks() {
            return arg_err("bi-symmetric rank mismatch");
        }
        let mut out = self.clone();
        for (k, v) in &other.components {
            accumulate(&mut out.components, k.clone(), v.neg());
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BiSymStorage<T> {
        let mut components = BTreeMap::new();
        for (k, v) in &self.components {
            let mapped = f(v);
            if !mapped.is_zero() {
                components.insert(k.clone(), mapped);
            }
        }
        BiSymStorage {
            n: self.n,
            rank1: self.rank1,
            rank2: self.rank2,
            components,
        }
    }

    /// Expands into a raw tensor with the first group at positions
    /// `0..rank1` and the second at `rank1..rank1+rank2`.
    pub fn to_raw(&self) -> RawTensor<S> {
        let mut out = RawTensor::new(self.n, self.rank1 + self.rank2).expect("n validated");
        for ((a, b), v) in &self.components {
            for ra in super::distinct_arrangements(a) {
                for rb in super::distinct_arrangements(b) {
                    let mut key = ra.clone();
                    key.extend_from_slice(&rb);
                    out.components.insert(key, v.clone());
                }
            }
        }
        out
    }

    /// Every component on the full index grid, zeros included, as
    /// `(first, second)` tuples in canonical form.
    pub fn canonical_keys(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let firsts = super::canonical_tuples(self.n, self.rank1);
        let seconds = super::canonical_tuples(self.n, self.rank2);
        let mut out = Vec::with_capacity(firsts.len() * seconds.len());
        for a in &firsts {
            for b in &seconds {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    fn check_key(&self, first: &[usize], second: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        if first.len() != self.rank1 || second.len() != self.rank2 {
            return arg_err("tuple lengths do not match the bi-symmetric ranks");
        }
        if let Some(bad) = first
            .iter()
            .chain(second.iter())
            .find(|&&i| i == 0 || i > self.n)
        {
            return arg_err(format!("index {bad} outside 1..={}", self.n));
        }
        Ok((canonical(first), canonical(second)))
    }
}
