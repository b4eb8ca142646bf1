//! Differential operators on symmetric polynomial-Gaussian fields: inner
//! differentiation `d`, the Saint Venant operator `W`, its generalization
//! `W^k` of order `m − k`, the alternated derivative operator `R`, and the
//! linear conversions between `R f` and `W f`.
//!
//! Everything is exact. Symmetrizations are evaluated by averaging over the
//! distinct rearrangements of each canonical tuple, and the partial
//! derivatives of each component are memoized by sorted direction list.

use crate::error::{arg_err, Result};
use crate::mutation::Mutation;
use crate::polygauss::rational::{from_u64, rat};
use crate::polygauss::{PolyGauss, Rational};
use crate::symtensor::{
    all_tuples, alternate, binomial, canonical, canonical_tuples, distinct_arrangements,
    index_is_sorted, symmetrize, BiSymStorage, RawTensor, Scalar, SymStorage,
};
use crate::{BiSymField, SymField};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Size summary of an operator result, used to certify exact zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorReport {
    pub max_abs_coefficient: Rational,
    pub is_zero: bool,
}

impl OperatorReport {
    fn from_components<'a>(values: impl Iterator<Item = &'a PolyGauss>) -> Self {
        let mut max = Rational::zero();
        let mut is_zero = true;
        for v in values {
            if !v.is_zero() {
                is_zero = false;
            }
            let c = v.max_abs_coefficient();
            if c > max {
                max = c;
            }
        }
        OperatorReport {
            max_abs_coefficient: max,
            is_zero,
        }
    }

    pub fn of_sym(f: &SymField) -> Self {
        Self::from_components(f.iter().map(|(_, v)| v))
    }

    pub fn of_bisym(f: &BiSymField) -> Self {
        Self::from_components(f.iter().map(|(_, v)| v))
    }

    pub fn of_raw(f: &RawTensor<PolyGauss>) -> Self {
        Self::from_components(f.iter().map(|(_, v)| v))
    }
}

/// Memoized partial derivatives of the components of one field.
pub(crate) struct DerivativeCache<'a> {
    field: &'a SymField,
    cache: HashMap<(Vec<usize>, Vec<usize>), PolyGauss>,
    orders: BTreeSet<usize>,
}

impl<'a> DerivativeCache<'a> {
    pub(crate) fn new(field: &'a SymField) -> Self {
        DerivativeCache {
            field,
            cache: HashMap::new(),
            orders: BTreeSet::new(),
        }
    }

    /// `∂^{|dirs|} f_{component} / ∂x^{dirs…}`.
    pub(crate) fn get(&mut self, component: &[usize], dirs: &[usize]) -> Result<PolyGauss> {
        self.orders.insert(dirs.len());
        self.lookup(canonical(component), canonical(dirs))
    }

    fn lookup(&mut self, component: Vec<usize>, dirs: Vec<usize>) -> Result<PolyGauss> {
        if dirs.is_empty() {
            return Ok(self
                .field
                .get(&component)
                .cloned()
                .unwrap_or_else(|| PolyGauss::zero(self.field.n())));
        }
        let key = (component, dirs);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let (component, dirs) = key;
        let (&last, rest) = dirs.split_last().expect("nonempty");
        let base = self.lookup(component.clone(), rest.to_vec())?;
        let value = if base.is_zero() {
            base
        } else {
            base.derive(last)?
        };
        self.cache.insert((component, dirs), value.clone());
        Ok(value)
    }
}

fn sum_weighted(
    cache: &mut DerivativeCache<'_>,
    weights: BTreeMap<(Vec<usize>, Vec<usize>), Rational>,
    n: usize,
) -> Result<PolyGauss> {
    let mut acc = PolyGauss::zero(n);
    for ((component, dirs), w) in weights {
        if Zero::is_zero(&w) {
            continue;
        }
        let d = cache.get(&component, &dirs)?;
        acc = acc.add(&d.scale(&w));
    }
    Ok(acc)
}

fn add_weight(
    weights: &mut BTreeMap<(Vec<usize>, Vec<usize>), Rational>,
    component: &[usize],
    dirs: &[usize],
    w: Rational,
) {
    *weights
        .entry((canonical(component), canonical(dirs)))
        .or_insert_with(Rational::zero) += w;
}

/// Inner (symmetrized) derivative: `(du)_{i₁…i_{m+1}} = σ(∂u_{i₁…i_m}/∂x^{i_{m+1}})`.
pub fn inner_derivative(u: &SymField) -> Result<SymField> {
    let n = u.n();
    let r = u.rank();
    let mut out = SymStorage::new(n, r + 1)?;
    let total = from_u64(r as u64 + 1);
    for key in canonical_tuples(n, r + 1) {
        let mut acc = PolyGauss::zero(n);
        let mut prev = 0;
        for (pos, &v) in key.iter().enumerate() {
            if v == prev {
                continue;
            }
            prev = v;
            let count = key.iter().filter(|&&w| w == v).count();
            let mut rest = key.clone();
            rest.remove(pos);
            if let Some(comp) = u.get(&rest) {
                let w = from_u64(count as u64) / &total;
                acc = acc.add(&comp.derive(v)?.scale(&w));
            }
        }
        out.set(&key, acc)?;
    }
    Ok(out)
}

/// `d` applied `times` times.
pub fn iterate_d(v: &SymField, times: usize) -> Result<SymField> {
    let mut f = v.clone();
    for _ in 0..times {
        f = inner_derivative(&f)?;
    }
    Ok(f)
}

/// The Saint Venant operator `W: S^m → S^m ⊗ S^m`,
///
/// `(Wf)_{i,j} = σ(i)σ(j) Σ_ℓ (−1)^ℓ C(m,ℓ) ∂^m f_{i₁…i_{m−ℓ} j₁…j_ℓ} / ∂x^{j_{ℓ+1}}…∂x^{j_m} ∂x^{i_{m−ℓ+1}}…∂x^{i_m}`.
pub fn saint_venant(f: &SymField) -> Result<BiSymField> {
    let m = f.rank();
    if m == 0 {
        return arg_err("the Saint Venant operator needs rank at least 1");
    }
    let n = f.n();
    let mut cache = DerivativeCache::new(f);
    let mut out = BiSymStorage::new(n, m, m)?;
    let tuples = canonical_tuples(n, m);
    for i_key in &tuples {
        let i_arr = distinct_arrangements(i_key);
        for j_key in &tuples {
            let j_arr = distinct_arrangements(j_key);
            let norm = rat(1, (i_arr.len() * j_arr.len()) as i64);
            let mut weights = BTreeMap::new();
            for a in &i_arr {
                for b in &j_arr {
                    for ell in 0..=m {
                        let sign = if ell % 2 == 0 { 1 } else { -1 };
                        let w = &norm * from_u64(binomial(m, ell)) * rat(sign, 1);
                        let mut comp = a[..m - ell].to_vec();
                        comp.extend_from_slice(&b[..ell]);
                        let mut dirs = b[ell..].to_vec();
                        dirs.extend_from_slice(&a[m - ell..]);
                        add_weight(&mut weights, &comp, &dirs, w);
                    }
                }
            }
            let value = sum_weighted(&mut cache, weights, n)?;
            out.set(i_key, j_key, value)?;
        }
    }
    Ok(out)
}

/// Result of [`generalized_saint_venant_traced`]: the field plus the set of
/// derivative orders the evaluation actually requested.
#[derive(Clone, Debug)]
pub struct TracedResult {
    pub field: BiSymField,
    pub derivative_orders: BTreeSet<usize>,
}

/// The generalized Saint Venant operator `W^k: S^m → S^{m−k} ⊗ S^m`.
///
/// The output's first group is `p₁…p_{m−k}`; the second is the combined
/// group `q₁…q_{m−k} i₁…i_k`, which is what the outer symmetrization acts on.
/// At `k = 0` this coincides with [`saint_venant`]; at `k = m` it returns `f`.
pub fn generalized_saint_venant(f: &SymField, k: usize) -> Result<BiSymField> {
    Ok(generalized_saint_venant_traced(f, k, None)?.field)
}

/// [`generalized_saint_venant`] with an optional deliberate corruption.
pub fn generalized_saint_venant_mutated(
    f: &SymField,
    k: usize,
    mutation: Option<&Mutation>,
) -> Result<BiSymField> {
    Ok(generalized_saint_venant_traced(f, k, mutation)?.field)
}

pub fn generalized_saint_venant_traced(
    f: &SymField,
    k: usize,
    mutation: Option<&Mutation>,
) -> Result<TracedResult> {
    let m = f.rank();
    if k > m {
        return arg_err(format!("order k = {k} exceeds rank m = {m}"));
    }
    let n = f.n();
    let order = m - k;
    let mut cache = DerivativeCache::new(f);
    let mut out = BiSymStorage::new(n, order, m)?;
    let p_tuples = canonical_tuples(n, order);
    let q_tuples = canonical_tuples(n, m);
    let terms: Vec<(Rational, usize)> = (0..=order)
        .map(|ell| {
            let (flip, binom) = Mutation::wk_weight(mutation, ell, binomial(order, ell));
            let mut sign = if ell % 2 == 0 { 1 } else { -1 };
            if flip {
                sign = -sign;
            }
            (rat(sign, 1) * from_u64(binom), ell)
        })
        .collect();
    for p_key in &p_tuples {
        let p_arr = distinct_arrangements(p_key);
        for q_key in &q_tuples {
            let q_arr = distinct_arrangements(q_key);
            let norm = rat(1, (p_arr.len() * q_arr.len()) as i64);
            let mut weights = BTreeMap::new();
            for a in &p_arr {
                for b in &q_arr {
                    let (q, fixed) = b.split_at(order);
                    for (coef, ell) in &terms {
                        let ell = *ell;
                        let mut comp = fixed.to_vec();
                        comp.extend_from_slice(&a[..order - ell]);
                        comp.extend_from_slice(&q[..ell]);
                        let mut dirs = a[order - ell..].to_vec();
                        dirs.extend_from_slice(&q[ell..]);
                        add_weight(&mut weights, &comp, &dirs, &norm * coef);
                    }
                }
            }
            let value = sum_weighted(&mut cache, weights, n)?;
            out.set(p_key, q_key, value)?;
        }
    }
    Ok(TracedResult {
        field: out,
        derivative_orders: cache.orders,
    })
}

/// `(Rf)_{i₁j₁…i_mj_m} = α(i₁j₁)…α(i_mj_m) ∂^m f_{i₁…i_m}/∂x^{j₁}…∂x^{j_m}`.
///
/// The result is a raw rank-`2m` tensor with the pairs interleaved:
/// position `2s` holds `i_{s+1}` and position `2s+1` holds `j_{s+1}`.
pub fn operator_r(f: &SymField) -> Result<RawTensor<PolyGauss>> {
    let m = f.rank();
    if m == 0 {
        return arg_err("the operator R needs rank at least 1");
    }
    let n = f.n();
    let mut cache = DerivativeCache::new(f);
    let mut d = RawTensor::new(n, 2 * m)?;
    let tuples = all_tuples(n, m);
    for i in &tuples {
        if f.get(i).is_none() {
            continue;
        }
        for j in &tuples {
            let value = cache.get(i, j)?;
            if value.is_zero() {
                continue;
            }
            d.set(&interleave(i, j), value)?;
        }
    }
    let mut r = d;
    for s in 0..m {
        r = alternate(&r, (2 * s, 2 * s + 1))?;
    }
    Ok(r)
}

pub(crate) fn interleave(i: &[usize], j: &[usize]) -> Vec<usize> {
    i.iter().zip(j).flat_map(|(a, b)| [*a, *b]).collect()
}

/// Scalar relating `σ(i)σ(j) R f` to `W f`: `W f = 2^m σ(i)σ(j) R f`.
pub fn w_from_r_factor(m: usize) -> Rational {
    from_u64(1u64 << m)
}

/// Scalar relating `α…α W f` back to `R f`: `R f = α(i₁j₁)…α(i_mj_m) W f / (m+1)`.
pub fn r_from_w_factor(m: usize) -> Rational {
    rat(1, m as i64 + 1)
}

/// Converts an `R f` tensor (interleaved layout) to `W f`.
pub fn w_from_r(rf: &RawTensor<PolyGauss>) -> Result<BiSymField> {
    let m = pair_count(rf.rank())?;
    let evens: Vec<usize> = (0..m).map(|s| 2 * s).collect();
    let odds: Vec<usize> = (0..m).map(|s| 2 * s + 1).collect();
    let sym = symmetrize(&symmetrize(rf, &evens)?, &odds)?;
    let factor = w_from_r_factor(m);
    let mut out = BiSymStorage::new(rf.n(), m, m)?;
    for (key, value) in sym.iter() {
        let i: Vec<usize> = evens.iter().map(|&p| key[p]).collect();
        let j: Vec<usize> = odds.iter().map(|&p| key[p]).collect();
        if index_is_sorted(&i) && index_is_sorted(&j) {
            out.set(&i, &j, value.scale(&factor))?;
        }
    }
    Ok(out)
}

/// Converts `W f` (ranks `(m, m)`) to `R f` in the interleaved layout.
pub fn r_from_w(wf: &BiSymField) -> Result<RawTensor<PolyGauss>> {
    let (m1, m2) = wf.ranks();
    if m1 != m2 || m1 == 0 {
        return arg_err(format!(
            "expected equal nonzero ranks for W f, got ({m1}, {m2})"
        ));
    }
    let m = m1;
    let mut t = RawTensor::new(wf.n(), 2 * m)?;
    for ((a, b), value) in wf.iter() {
        for ra in distinct_arrangements(a) {
            for rb in distinct_arrangements(b) {
                t.set(&interleave(&ra, &rb), value.clone())?;
            }
        }
    }
    for s in 0..m {
        t = alternate(&t, (2 * s, 2 * s + 1))?;
    }
    Ok(t.scale(&r_from_w_factor(m)))
}

fn pair_count(rank: usize) -> Result<usize> {
    if rank == 0 || rank % 2 == 1 {
        return arg_err(format!("expected an even positive rank, got {rank}"));
    }
    Ok(rank / 2)
}

/// Difference between `W^k f` and `σ(q ∪ i)` applied to `W(f^{i₁…i_k})`
/// assembled over all fixed tuples `i`. Zero when both routes agree.
///
/// `W` on the restricted rank-`(m−k)` fields uses [`saint_venant`], an
/// implementation independent of [`generalized_saint_venant`]; at `k = m`
/// it is the identity on scalars.
pub fn restriction_relation_report(
    f: &SymField,
    k: usize,
    mutation: Option<&Mutation>,
) -> Result<OperatorReport> {
    let m = f.rank();
    if k > m {
        return arg_err(format!("order k = {k} exceeds rank m = {m}"));
    }
    let n = f.n();
    let order = m - k;
    let wk = generalized_saint_venant_mutated(f, k, mutation)?.to_raw();
    let mut assembled = RawTensor::new(n, order + m)?;
    for fixed in all_tuples(n, k) {
        let h = crate::symtensor::restrict(f, &crate::symtensor::IndexTuple::new(&fixed, n)?)?;
        let wh = if order == 0 {
            let mut s = BiSymStorage::new(n, 0, 0)?;
            if let Some(v) = h.get(&[]) {
                s.set(&[], &[], v.clone())?;
            }
            s
        } else {
            saint_venant(&h)?
        };
        for (key, value) in wh.to_raw().iter() {
            let mut full = key.clone();
            full.extend_from_slice(&fixed);
            assembled.set(&full, value.clone())?;
        }
    }
    let combined: Vec<usize> = (order..order + m).collect();
    let assembled = symmetrize(&assembled, &combined)?;
    Ok(OperatorReport::of_raw(&wk.sub(&assembled)?))
}

/// Exact equality certificate for two bi-symmetric fields.
pub fn bisym_difference_report(a: &BiSymField, b: &BiSymField) -> Result<OperatorReport> {
    Ok(OperatorReport::of_bisym(&a.sub(b)?))
}

#[cfg(test)]
mod tests;
