//! Evaluators for the transform-level identities: recovery of restricted
//! transforms from `J⁰…J^r`, powers of the John operator, the collapsed
//! derivative identity, the block symmetrization relation, restriction
//! versus contraction, translation and homogeneity laws, and the vanishing
//! statements that hold on the kernel of `W^k`.
//!
//! Every check works at a rational phase point, where all line moments
//! share one factor, so residuals are computed as exact rationals and only
//! converted to `f64` for reporting.

use super::expression::{partial, MomentExpression};
use super::point::PhasePoint;
use super::transform::{to_f64, transform_j_coef, PointMoments};
use crate::error::{arg_err, Result};
use crate::mutation::Mutation;
use crate::polygauss::rational::{from_u64, int, rat};
use crate::polygauss::{ExactReal, Rational};
use crate::symtensor::{
    all_tuples, binomial, distinct_arrangements, factorial, restrict, symmetrize, IndexTuple,
    RawTensor,
};
use crate::SymField;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest deviation found by a check.
///
/// `exact_zero` is `Some(..)` when the residual was computed in exact
/// arithmetic and records whether it vanished literally.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub max_abs: f64,
    pub exact_zero: Option<bool>,
}

impl Residual {
    pub fn exact_zero() -> Self {
        Residual {
            max_abs: 0.0,
            exact_zero: Some(true),
        }
    }

    pub fn float(value: f64) -> Self {
        Residual {
            max_abs: value.abs(),
            exact_zero: None,
        }
    }

    /// Residual from an exact coefficient of a point factor.
    pub fn from_coef(coef: &Rational, factor: f64) -> Self {
        Residual {
            max_abs: to_f64(&coef.abs()) * factor,
            exact_zero: Some(coef.is_zero()),
        }
    }

    pub fn merge(self, other: Residual) -> Residual {
        Residual {
            max_abs: self.max_abs.max(other.max_abs),
            exact_zero: match (self.exact_zero, other.exact_zero) {
                (Some(a), Some(b)) => Some(a && b),
                _ => None,
            },
        }
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.exact_zero == Some(true)
    }
}

fn factor_f64(pt: &PhasePoint) -> f64 {
    pt.factor().to_f64()
}

/// Right-hand side of the recovery formula for `J⁰ f^{i₁…i_r}`:
///
/// `((m−r)!/m!) σ(i₁…i_r) Σ_p (−1)^p C(r,p) ∂^r J^p f / ∂x^{i₁}…∂x^{i_p} ∂ξ^{i_{p+1}}…∂ξ^{i_r}`
///
/// built symbolically from `dx` / `dxi` rewrites.
pub fn recover_restricted_expression(
    f: &SymField,
    fixed: &IndexTuple,
    mutation: Option<&Mutation>,
) -> Result<MomentExpression> {
    let m = f.rank();
    let r = fixed.len();
    if r > m {
        return arg_err(format!("cannot fix {r} indices of a rank-{m} field"));
    }
    fixed.validate(f.n())?;
    let arrangements = distinct_arrangements(fixed.as_slice());
    let norm =
        from_u64(factorial(m - r)) / (from_u64(factorial(m)) * from_u64(arrangements.len() as u64));
    let mut total = MomentExpression::zero(f.n());
    for p in 0..=r {
        let (flip, binom) = Mutation::recovery_weight(mutation, p, binomial(r, p));
        let mut sign = if p % 2 == 0 { 1 } else { -1 };
        if flip {
            sign = -sign;
        }
        let weight = &norm * from_u64(binom) * int(sign);
        let base = MomentExpression::atom(p, f.clone());
        for arr in &arrangements {
            let mut e = base.clone();
            for &i in &arr[p..] {
                e = e.dxi(i)?;
            }
            for &i in &arr[..p] {
                e = e.dx(i)?;
            }
            total = total.try_add(&e.scale(&weight))?;
        }
    }
    Ok(total)
}

/// Value of the recovery formula at a point; compare with
/// `J⁰(restrict(f, fixed))`.
pub fn recover_restricted(f: &SymField, fixed: &IndexTuple, pt: &PhasePoint) -> Result<ExactReal> {
    recover_restricted_expression(f, fixed, None)?.evaluate(pt)
}

/// `recover_restricted − J⁰ f^{fixed}` at a point.
pub fn recovery_residual(
    f: &SymField,
    fixed: &IndexTuple,
    pt: &PhasePoint,
    mutation: Option<&Mutation>,
) -> Result<Residual> {
    let lhs = recover_restricted_expression(f, fixed, mutation)?.evaluate_coef(pt)?;
    let rhs = transform_j_coef(&restrict(f, fixed)?, 0, pt)?;
    Ok(Residual::from_coef(&(lhs - rhs), factor_f64(pt)))
}

/// Expansions of `𝒥_{p₁q₁}…𝒥_{p_sq_s} J⁰h` for a rank-`s` field `h`, keyed by
/// the interleaved tuple `(p₁,q₁,…,p_s,q_s)`. Tuples with some `p = q` are
/// omitted (the operator vanishes there).
pub fn john_power_expressions(h: &SymField) -> Result<BTreeMap<Vec<usize>, MomentExpression>> {
    let mut out = BTreeMap::new();
    let root = MomentExpression::atom(0, h.clone());
    john_dfs(&root, h.n(), h.rank(), &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn john_dfs(
    e: &MomentExpression,
    n: usize,
    depth: usize,
    prefix: &mut Vec<usize>,
    out: &mut BTreeMap<Vec<usize>, MomentExpression>,
) -> Result<()> {
    if prefix.len() == 2 * depth {
        out.insert(prefix.clone(), e.clone());
        return Ok(());
    }
    for p in 1..=n {
        for q in 1..=n {
            if p == q {
                continue;
            }
            let next = e.john(p, q)?;
            prefix.push(p);
            prefix.push(q);
            john_dfs(&next, n, depth, prefix, out)?;
            prefix.truncate(prefix.len() - 2);
        }
    }
    Ok(())
}

/// Values of [`john_power_expressions`] at a point, as coefficients of the
/// point factor.
pub fn john_power_values(h: &SymField, pt: &PhasePoint) -> Result<BTreeMap<Vec<usize>, Rational>> {
    john_power_expressions(h)?
        .into_iter()
        .map(|(k, e)| Ok((k, e.evaluate_coef(pt)?)))
        .collect()
}

/// Constant `c_s` in `𝒥^s(J⁰h) = c_s · J⁰(R h)` for a rank-`s` field:
/// `(−2)^s s!`.
pub fn john_power_constant(s: usize) -> Rational {
    let sign = if s.is_multiple_of(2) { 1 } else { -1 };
    int(sign) * from_u64(1u64 << s) * from_u64(factorial(s))
}

/// Powers of the John operator applied to `J⁰ f^{i₁…i_k}`, expanded once
/// and evaluated at any number of points.
#[derive(Clone, Debug)]
pub struct JohnPowers {
    h: SymField,
    rh: RawTensor<crate::PolyGauss>,
    exprs: BTreeMap<Vec<usize>, MomentExpression>,
}

impl JohnPowers {
    pub fn new(f: &SymField, k: usize, fixed: &IndexTuple) -> Result<Self> {
        let m = f.rank();
        if k >= m {
            return arg_err(format!("need k < m, got k = {k}, m = {m}"));
        }
        if fixed.len() != k {
            return arg_err(format!("expected {k} fixed indices, got {}", fixed.len()));
        }
        let h = restrict(f, fixed)?;
        let rh = crate::diffops::operator_r(&h)?;
        let exprs = john_power_expressions(&h)?;
        Ok(JohnPowers { h, rh, exprs })
    }

    pub fn order(&self) -> usize {
        self.h.rank()
    }

    fn values(&self, moments: &mut PointMoments) -> Result<BTreeMap<&Vec<usize>, Rational>> {
        self.exprs
            .iter()
            .map(|(k, e)| Ok((k, e.evaluate_coef_with(moments)?)))
            .collect()
    }

    /// Deviation from `𝒥^s J⁰h = constant · J⁰(R h)` over every `(p, q)`.
    pub fn identity_residual(&self, pt: &PhasePoint, constant: &Rational) -> Result<Residual> {
        Ok(self.residuals(pt, constant)?.0)
    }

    /// Deviation from
    /// `ξ^{p₁}…ξ^{p_s} (𝒥^s J⁰h)_{p₁q₁…p_sq_s} = (−1)^s s! ∂^s_{x^{q…}} J⁰h`
    /// over every `q` tuple.
    pub fn collapsed_residual(&self, pt: &PhasePoint) -> Result<Residual> {
        Ok(self.residuals(pt, &Rational::zero())?.1)
    }

    /// Both residuals from a single evaluation of the expansions.
    pub fn residuals(&self, pt: &PhasePoint, constant: &Rational) -> Result<(Residual, Residual)> {
        let mut moments = PointMoments::new(pt);
        let values = self.values(&mut moments)?;
        let factor = factor_f64(pt);
        let n = self.h.n();
        let s = self.order();

        let mut power = Residual::exact_zero();
        for key in all_tuples(n, 2 * s) {
            let lhs = values.get(&key).cloned().unwrap_or_else(Rational::zero);
            let rhs = match self.rh.get(&key) {
                Some(component) => moments.line_moment_coef(component, 0)? * constant,
                None => Rational::zero(),
            };
            power = power.merge(Residual::from_coef(&(lhs - rhs), factor));
        }

        let sign = if s.is_multiple_of(2) { 1 } else { -1 };
        let collapse = int(sign) * from_u64(factorial(s));
        let mut collapsed = Residual::exact_zero();
        for q in all_tuples(n, s) {
            let mut lhs = Rational::zero();
            for p in all_tuples(n, s) {
                let key = crate::diffops::interleave(&p, &q);
                if let Some(v) = values.get(&key) {
                    let mut w = v.clone();
                    for &pi in &p {
                        w *= &pt.xi()[pi - 1];
                    }
                    lhs += w;
                }
            }
            let mut g = self.h.clone();
            for &qi in &q {
                g = partial(&g, qi)?;
            }
            let rhs = moments.transform_j_coef(&g, 0)? * &collapse;
            collapsed = collapsed.merge(Residual::from_coef(&(lhs - rhs), factor));
        }
        Ok((power, collapsed))
    }
}

/// Checks `𝒥^{m−k}(J⁰f^{i₁…i_k}) = (−2)^{m−k}(m−k)! · J⁰((R f^{i₁…i_k})_{p₁q₁…})`
/// for every `(p, q)` choice; returns the largest deviation.
pub fn john_power_identity_check(
    f: &SymField,
    k: usize,
    fixed: &IndexTuple,
    pt: &PhasePoint,
) -> Result<Residual> {
    john_power_identity_check_with(
        f,
        k,
        fixed,
        pt,
        &john_power_constant(f.rank().saturating_sub(k)),
    )
}

/// Same as [`john_power_identity_check`] with an explicit constant.
pub fn john_power_identity_check_with(
    f: &SymField,
    k: usize,
    fixed: &IndexTuple,
    pt: &PhasePoint,
    constant: &Rational,
) -> Result<Residual> {
    JohnPowers::new(f, k, fixed)?.identity_residual(pt, constant)
}

/// Checks `ξ^{p₁}…ξ^{p_s} (𝒥^s J⁰f^{i…})_{p₁q₁…p_sq_s} = (−1)^s s! ∂^s_{x^{q…}} J⁰f^{i…}`
/// with `s = m − k`, for every `q` tuple. Holds for arbitrary `f`.
pub fn collapsed_derivative_check(
    f: &SymField,
    k: usize,
    fixed: &IndexTuple,
    pt: &PhasePoint,
) -> Result<Residual> {
    JohnPowers::new(f, k, fixed)?.collapsed_residual(pt)
}

/// For a rank-`m` tensor symmetric in its first `m−k` and last `k`
/// positions, checks
///
/// `σ(all) t = (1/m) σ(all but the last) (k·t + (m−k)·t')`
///
/// where `t'` moves the last index to the front.
pub fn symmetrization_relation_check(t: &RawTensor<Rational>, k: usize) -> Result<Residual> {
    let m = t.rank();
    if k > m {
        return arg_err(format!("block size {k} exceeds rank {m}"));
    }
    let front: Vec<usize> = (0..m - k).collect();
    let back: Vec<usize> = (m - k..m).collect();
    if !t.is_symmetric_in(&front) || !t.is_symmetric_in(&back) {
        return arg_err("tensor is not symmetric within its two blocks");
    }
    let all: Vec<usize> = (0..m).collect();
    let lhs = symmetrize(t, &all)?;
    let rhs = if k == 0 {
        symmetrize(t, &all)?
    } else {
        let mut perm: Vec<usize> = (1..m).collect();
        perm.push(0);
        let rotated = t.permute_positions(&perm)?;
        let combo = t
            .scale(&from_u64(k as u64))
            .add(&rotated.scale(&from_u64((m - k) as u64)))?;
        let rest: Vec<usize> = (0..m - 1).collect();
        symmetrize(&combo, &rest)?.scale(&rat(1, m as i64))
    };
    let diff = lhs.sub(&rhs)?;
    let max = crate::symtensor::max_abs(diff.iter().map(|(_, v)| v));
    Ok(Residual {
        max_abs: to_f64(&max),
        exact_zero: Some(diff.is_zero()),
    })
}

/// `J⁰ f^{i₁…i_r} = Σ_{j} ξ^{j₁}…ξ^{j_{k−r}} J⁰ f^{i₁…i_r j₁…j_{k−r}}` for `r ≤ k ≤ m`.
pub fn restriction_contraction_check(
    f: &SymField,
    k: usize,
    fixed: &IndexTuple,
    pt: &PhasePoint,
) -> Result<Residual> {
    let m = f.rank();
    let r = fixed.len();
    if r > k || k > m {
        return arg_err(format!("need r ≤ k ≤ m, got r = {r}, k = {k}, m = {m}"));
    }
    let lhs = transform_j_coef(&restrict(f, fixed)?, 0, pt)?;
    let mut rhs = Rational::zero();
    for extra in all_tuples(f.n(), k - r) {
        let mut w = Rational::from_integer(1.into());
        for &j in &extra {
            w *= &pt.xi()[j - 1];
        }
        if w.is_zero() {
            continue;
        }
        let mut idx = fixed.as_slice().to_vec();
        idx.extend_from_slice(&extra);
        let g = restrict(f, &IndexTuple::new(&idx, f.n())?)?;
        rhs += w * transform_j_coef(&g, 0, pt)?;
    }
    Ok(Residual::from_coef(&(lhs - rhs), factor_f64(pt)))
}

/// The fields `∂^{m−r}_{x^{q…}} f^{i₁…i_r}` behind
/// [`kernel_derivative_tensor`], built once for evaluation at many points.
#[derive(Clone, Debug)]
pub struct KernelDerivative {
    n: usize,
    m: usize,
    /// `(q ++ i, scalar field)` for every index tuple.
    parts: Vec<(Vec<usize>, SymField)>,
}

impl KernelDerivative {
    pub fn new(f: &SymField, r: usize) -> Result<Self> {
        let m = f.rank();
        if r > m {
            return arg_err(format!("cannot fix {r} indices of a rank-{m} field"));
        }
        let n = f.n();
        let mut parts = Vec::new();
        for i in all_tuples(n, r) {
            let h = restrict(f, &IndexTuple::new(&i, n)?)?;
            for q in all_tuples(n, m - r) {
                let mut g = h.clone();
                for &qi in &q {
                    g = partial(&g, qi)?;
                }
                let mut key = q.clone();
                key.extend_from_slice(&i);
                parts.push((key, g));
            }
        }
        Ok(KernelDerivative { n, m, parts })
    }

    pub fn tensor(&self, pt: &PhasePoint) -> Result<RawTensor<Rational>> {
        let mut moments = PointMoments::new(pt);
        let mut t = RawTensor::new(self.n, self.m)?;
        for (key, g) in &self.parts {
            t.set(key, moments.transform_j_coef(g, 0)?)?;
        }
        let all: Vec<usize> = (0..self.m).collect();
        symmetrize(&t, &all)
    }

    pub fn residual(&self, pt: &PhasePoint) -> Result<Residual> {
        let t = self.tensor(pt)?;
        let max = crate::symtensor::max_abs(t.iter().map(|(_, v)| v));
        Ok(Residual {
            max_abs: to_f64(&max) * factor_f64(pt),
            exact_zero: Some(t.is_zero()),
        })
    }
}

/// `σ(q₁…q_{m−r} i₁…i_r)[∂^{m−r}_{x^{q…}} J⁰ f^{i₁…i_r}]` over every index
/// tuple, as a fully symmetrized rank-`m` tensor of point-factor
/// coefficients. It vanishes for every `r ≤ k` when `W^k f = 0`.
pub fn kernel_derivative_tensor(
    f: &SymField,
    r: usize,
    pt: &PhasePoint,
) -> Result<RawTensor<Rational>> {
    KernelDerivative::new(f, r)?.tensor(pt)
}

/// Largest entry of [`kernel_derivative_tensor`].
pub fn kernel_derivative_check(f: &SymField, r: usize, pt: &PhasePoint) -> Result<Residual> {
    KernelDerivative::new(f, r)?.residual(pt)
}

/// `⟨ξ, ∂_x⟩ J^k f + k J^{k−1} f` (integration by parts along the line).
pub fn translation_check(f: &SymField, k: usize, pt: &PhasePoint) -> Result<Residual> {
    let e = MomentExpression::atom(k, f.clone());
    let mut moments = PointMoments::new(pt);
    let mut acc = Rational::zero();
    for i in 1..=f.n() {
        acc += &pt.xi()[i - 1] * e.dx(i)?.evaluate_coef_with(&mut moments)?;
    }
    if k > 0 {
        acc += from_u64(k as u64) * moments.transform_j_coef(f, k - 1)?;
    }
    Ok(Residual::from_coef(&acc, factor_f64(pt)))
}

/// `⟨ξ, ∂_ξ⟩ e − degree · e` for an expression positively homogeneous of
/// the given degree in `ξ`.
pub fn euler_check(e: &MomentExpression, degree: i64, pt: &PhasePoint) -> Result<Residual> {
    let mut moments = PointMoments::new(pt);
    let mut acc = Rational::zero();
    for i in 1..=e.n() {
        acc += &pt.xi()[i - 1] * e.dxi(i)?.evaluate_coef_with(&mut moments)?;
    }
    acc -= int(degree) * e.evaluate_coef_with(&mut moments)?;
    Ok(Residual::from_coef(&acc, factor_f64(pt)))
}

/// Homogeneity degree of `J^q g` for `g` of rank `r`: `r − q − 1`.
pub fn atom_degree(rank: usize, q: usize) -> i64 {
    rank as i64 - q as i64 - 1
}

/// Sampled magnitudes of `∂^{dirs}_x J^q f` along oriented lines pushed
/// away from the origin, for the decay diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayProfile {
    pub radii: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

impl DecayProfile {
    /// True when `magnitude · (1 + radius)^power` is strictly decreasing over
    /// the sampled radii beyond the first.
    pub fn decays_faster_than(&self, power: i32) -> bool {
        let scaled: Vec<f64> = self
            .radii
            .iter()
            .zip(&self.magnitudes)
            .map(|(r, v)| v * (1.0 + r).powi(power))
            .collect();
        scaled.windows(2).skip(1).all(|w| w[1] < w[0])
    }
}

/// Evaluates `∂_x^{dirs} J^q f` at `(s·u, ξ)` for each radius `s`, where `u`
/// is the rational offset of `base` (assumed orthogonal to `ξ`).
pub fn decay_profile(
    f: &SymField,
    q: usize,
    dirs: &[usize],
    base: &PhasePoint,
    radii: &[Rational],
) -> Result<DecayProfile> {
    let mut e = MomentExpression::atom(q, f.clone());
    for &d in dirs {
        e = e.dx(d)?;
    }
    let mut magnitudes = Vec::with_capacity(radii.len());
    for s in radii {
        let x: Vec<Rational> = base.x().iter().map(|v| v * s).collect();
        let pt = PhasePoint::new(x, base.xi().to_vec())?;
        magnitudes.push(e.evaluate(&pt)?.to_f64().abs());
    }
    Ok(DecayProfile {
        radii: radii.iter().map(to_f64).collect(),
        magnitudes,
    })
}
