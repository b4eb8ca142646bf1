//! Sparse storage for symmetric, block-symmetric and unsymmetrized tensors
//! over an arbitrary scalar, plus the index algebra the operators need:
//! symmetrization over position groups, pair alternation, restriction of
//! leading indices and contraction with powers of a vector.
//!
//! Indices are 1-based (`1..=n`) everywhere in this module's public API.
//! Index *positions* inside a tuple are 0-based.

mod index;
mod raw;
mod storage;

pub use index::is_sorted as index_is_sorted;
pub use index::{
    all_tuples, binomial, canonical, canonical_tuples, distinct_arrangements, factorial,
    multiplicity, sub_multisets, IndexTuple,
};
pub use raw::RawTensor;
pub use storage::{BiSymStorage, SymStorage};

use crate::error::{arg_err, Result};
use crate::polygauss::Rational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Scalar type stored in a tensor.
///
/// Addition is only ever performed between values living in the same
/// tensor, so implementations may assume compatible operands (same
/// polynomial dimension, for instance); fallible variants live on the
/// concrete types.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Scalar for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Scalar for f64 {
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c.to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn accumulate<K: Ord, S: Scalar>(
    map: &mut std::collections::BTreeMap<K, S>,
    key: K,
    value: S,
) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            if !value.is_zero() {
                e.insert(value);
            }
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&value);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Averages `t` over all permutations of the index positions in `group`.
///
/// Positions outside the group are left untouched. Computed by pushing each
/// stored component onto the distinct rearrangements of its group values,
/// weighted by one over their number.
pub fn symmetrize<S: Scalar>(t: &RawTensor<S>, group: &[usize]) -> Result<RawTensor<S>> {
    validate_positions(t.rank(), group)?;
    let mut out = RawTensor::new(t.n(), t.rank())?;
    if group.len() < 2 {
        return Ok(t.clone());
    }
    for (key, value) in t.iter() {
        let values: Vec<usize> = group.iter().map(|&p| key[p]).collect();
        let arrangements = distinct_arrangements(&canonical(&values));
        let weight = Rational::new(1.into(), (arrangements.len() as u64).into());
        let share = value.scale(&weight);
        for arrangement in arrangements {
            let mut target = key.clone();
            for (&pos, &idx) in group.iter().zip(arrangement.iter()) {
                target[pos] = idx;
            }
            accumulate(&mut out.components, target, share.clone());
        }
    }
    Ok(out)
}

/// Alternation over a pair of positions: `(t − t∘swap) / 2`.
pub fn alternate<S: Scalar>(t: &RawTensor<S>, pair: (usize, usize)) -> Result<RawTensor<S>> {
    let (a, b) = pair;
    if a == b {
        return arg_err(format!(
            "alternation needs two distinct positions, got {a} twice"
        ));
    }
    validate_positions(t.rank(), &[a, b])?;
    let half = Rational::new(1.into(), 2.into());
    let mut out = RawTensor::new(t.n(), t.rank())?;
    for (key, value) in t.iter() {
        let share = value.scale(&half);
        let mut swapped = key.clone();
        swapped.swap(a, b);
        accumulate(&mut out.components, key.clone(), share.clone());
        accumulate(&mut out.components, swapped, share.neg());
    }
    Ok(out)
}

/// Fixes the leading indices of a symmetric tensor:
/// `(f^{i₁…i_ℓ})_{j₁…} = f_{i₁…i_ℓ j₁…}`.
pub fn restrict<S: Scalar>(f: &SymStorage<S>, fixed: &IndexTuple) -> Result<SymStorage<S>> {
    let ell = fixed.len();
    if ell > f.rank() {
        return arg_err(format!(
            "cannot fix {ell} indices of a rank-{} tensor",
            f.rank()
        ));
    }
    fixed.validate(f.n())?;
    let fixed = canonical(fixed.as_slice());
    let mut out = SymStorage::new(f.n(), f.rank() - ell)?;
    for (key, value) in f.iter() {
        if let Some(rest) = multiset_difference(key, &fixed) {
            out.components.insert(rest, value.clone());
        }
    }
    Ok(out)
}

/// Contracts the first `p` slots of a symmetric tensor with `v`.
pub fn contract_with_power<S: Scalar>(
    t: &SymStorage<S>,
    v: &[Rational],
    p: usize,
) -> Result<SymStorage<S>> {
    crate::error::check_dim(t.n(), v.len())?;
    if p > t.rank() {
        return arg_err(format!(
            "cannot contract {p} slots of a rank-{} tensor",
            t.rank()
        ));
    }
    let mut out = SymStorage::new(t.n(), t.rank() - p)?;
    for (key, value) in t.iter() {
        for sub in sub_multisets(key, p) {
            let mut coef = Rational::from_integer(multiplicity(&sub).into());
            for &j in &sub {
                coef *= &v[j - 1];
            }
            if Zero::is_zero(&coef) {
                continue;
            }
            let rest = multiset_difference(key, &sub).expect("sub-multiset");
            accumulate(&mut out.components, rest, value.scale(&coef));
        }
    }
    Ok(out)
}

/// Sorted multiset difference `whole − part`, or `None` if `part ⊄ whole`.
pub(crate) fn multiset_difference(whole: &[usize], part: &[usize]) -> Option<Vec<usize>> {
    let mut rest = whole.to_vec();
    for idx in part {
        let pos = rest.iter().position(|x| x == idx)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn validate_positions(rank: usize, group: &[usize]) -> Result<()> {
    for (i, &p) in group.iter().enumerate() {
        if p >= rank {
            return arg_err(format!("position {p} out of range for rank {rank}"));
        }
        if group[..i].contains(&p) {
            return arg_err(format!("position {p} repeated in group"));
        }
    }
    Ok(())
}

/// Largest absolute value among rational entries, zero for an empty iterator.
pub(crate) fn max_abs<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values
        .map(|v| v.abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
}

#[cfg(test)]
mod tests;
