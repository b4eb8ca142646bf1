use super::point::{PhasePoint, TSPoint};
use crate::error::{arg_err, check_dim, Result};
use crate::polygauss::rational::{from_u64, pow};
use crate::polygauss::{line_moment, line_moment_f64, ExactReal, PolyGauss, Polynomial, Rational};
use crate::symtensor::{binomial, multiplicity};
use crate::SymField;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

/// `J^q f` at a rational phase point, as a coefficient of the point's
/// common factor (see [`PhasePoint::factor`]).
pub fn transform_j_coef(f: &SymField, q: usize, pt: &PhasePoint) -> Result<Rational> {
    check_dim(f.n(), pt.n())?;
    let a = pt.xi_norm_sq();
    let mut acc = Rational::zero();
    for (key, component) in f.iter() {
        let mut weight = from_u64(multiplicity(key));
        for &j in key {
            weight *= &pt.xi()[j - 1];
        }
        if weight.is_zero() {
            continue;
        }
        let moment = line_moment(component, q, pt.x(), pt.xi())?;
        if moment.is_zero() {
            continue;
        }
        debug_assert_eq!(moment.radicand(), &a);
        acc += weight * moment.coef();
    }
    Ok(acc)
}

/// Memoized monomial line moments at one rational point.
///
/// `J^q` is linear in the polynomial coefficients, so once the moment of
/// each monomial `x^e` is known, transforms of arbitrary fields are plain
/// weighted sums. Produces the same coefficients as [`transform_j_coef`].
#[derive(Debug)]
pub struct PointMoments<'a> {
    pt: &'a PhasePoint,
    cache: HashMap<(Vec<u32>, usize), Rational>,
}

impl<'a> PointMoments<'a> {
    pub fn new(pt: &'a PhasePoint) -> Self {
        PointMoments {
            pt,
            cache: HashMap::new(),
        }
    }

    pub fn point(&self) -> &PhasePoint {
        self.pt
    }

    fn monomial(&mut self, exp: &[u32], q: usize) -> Result<Rational> {
        if let Some(v) = self.cache.get(&(exp.to_vec(), q)) {
            return Ok(v.clone());
        }
        let n = self.pt.n();
        let g = PolyGauss::new(Polynomial::monomial(n, exp.to_vec(), Rational::one())?);
        let v = line_moment(&g, q, self.pt.x(), self.pt.xi())?
            .coef()
            .clone();
        self.cache.insert((exp.to_vec(), q), v.clone());
        Ok(v)
    }

    /// Coefficient of `∫ t^q g(x+tξ) dt` relative to the point factor.
    pub fn line_moment_coef(&mut self, g: &PolyGauss, q: usize) -> Result<Rational> {
        check_dim(g.n(), self.pt.n())?;
        let mut acc = Rational::zero();
        for (exp, c) in g.poly().terms() {
            acc += c * self.monomial(exp, q)?;
        }
        Ok(acc)
    }

    /// Same value as [`transform_j_coef`].
    pub fn transform_j_coef(&mut self, f: &SymField, q: usize) -> Result<Rational> {
        check_dim(f.n(), self.pt.n())?;
        let mut acc = Rational::zero();
        for (key, component) in f.iter() {
            let mut weight = from_u64(multiplicity(key));
            for &j in key {
                weight *= &self.pt.xi()[j - 1];
            }
            if weight.is_zero() {
                continue;
            }
            acc += weight * self.line_moment_coef(component, q)?;
        }
        Ok(acc)
    }
}

/// Extended moment transform `(J^q f)(x, ξ) = ∫ t^q ⟨f(x+tξ), ξ^m⟩ dt`,
/// exact at rational points.
pub fn transform_j(f: &SymField, q: usize, pt: &PhasePoint) -> Result<ExactReal> {
    let coef = transform_j_coef(f, q, pt)?;
    Ok(pt.factor().scale(&coef))
}

/// [`transform_j`] at floating point coordinates.
pub fn transform_j_f64(f: &SymField, q: usize, x: &[f64], xi: &[f64]) -> Result<f64> {
    check_dim(f.n(), x.len())?;
    check_dim(f.n(), xi.len())?;
    if xi.iter().all(|v| *v == 0.0) {
        return arg_err("direction ξ must be nonzero");
    }
    let mut acc = 0.0;
    for (key, component) in f.iter() {
        let mut weight = multiplicity(key) as f64;
        for &j in key {
            weight *= xi[j - 1];
        }
        if weight == 0.0 {
            continue;
        }
        acc += weight * line_moment_f64(component, q, x, xi)?;
    }
    Ok(acc)
}

/// Momentum ray transform `I^q f` on an oriented line.
pub fn transform_i(f: &SymField, q: usize, pt: &TSPoint) -> Result<f64> {
    transform_j_f64(f, q, pt.x(), pt.xi())
}

/// `I^q f` evaluated exactly; the line must carry rational coordinates.
pub fn transform_i_exact(f: &SymField, q: usize, pt: &TSPoint) -> Result<ExactReal> {
    match pt.exact_point() {
        Some(p) => transform_j(f, q, p),
        None => arg_err("oriented line has no exact rational coordinates"),
    }
}

/// `(I⁰f, …, I^k f)` at one oriented line.
pub fn moment_stack(f: &SymField, k: usize, pt: &TSPoint) -> Result<Vec<f64>> {
    (0..=k).map(|q| transform_i(f, q, pt)).collect()
}

/// Exact version of [`moment_stack`].
pub fn moment_stack_exact(f: &SymField, k: usize, pt: &TSPoint) -> Result<Vec<ExactReal>> {
    (0..=k).map(|q| transform_i_exact(f, q, pt)).collect()
}

/// Rebuilds `J^q f (x, ξ)` of a rank-`m` field from `I⁰f, …, I^q f` taken on
/// the projected line `(x − ⟨x,ξ⟩ξ/|ξ|², ξ/|ξ|)`:
///
/// `J^q = |ξ|^{m−2q−1} Σ_ℓ (−1)^{q−ℓ} C(q,ℓ) |ξ|^ℓ ⟨ξ,x⟩^{q−ℓ} I^ℓ`.
pub fn convert_i_to_j(i_values: &[f64], m: usize, q: usize, x: &[f64], xi: &[f64]) -> Result<f64> {
    conversion_sum(i_values, m, q, x, xi, false)
}

/// The conversion sum with every term replaced by its absolute value; the
/// natural scale for the rounding error of [`convert_i_to_j`].
pub fn convert_i_to_j_magnitude(
    i_values: &[f64],
    m: usize,
    q: usize,
    x: &[f64],
    xi: &[f64],
) -> Result<f64> {
    conversion_sum(i_values, m, q, x, xi, true)
}

fn conversion_sum(
    i_values: &[f64],
    m: usize,
    q: usize,
    x: &[f64],
    xi: &[f64],
    absolute: bool,
) -> Result<f64> {
    check_dim(x.len(), xi.len())?;
    if i_values.len() < q + 1 {
        return arg_err(format!("need I^0..I^{q}, got {} values", i_values.len()));
    }
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return arg_err("direction ξ must be nonzero");
    }
    let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    let mut acc = 0.0;
    for (ell, value) in i_values.iter().enumerate().take(q + 1) {
        let sign = if (q - ell).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let term = sign
            * binomial(q, ell) as f64
            * norm.powi(ell as i32)
            * dot.powi((q - ell) as i32)
            * value;
        acc += if absolute { term.abs() } else { term };
    }
    Ok(norm.powi(m as i32 - 2 * q as i32 - 1) * acc)
}

/// `λ^{m−q−1}` as an exact rational for integer exponents of either sign.
pub fn homogeneity_factor(lambda: &Rational, m: usize, q: usize) -> Rational {
    let e = m as i64 - q as i64 - 1;
    if e >= 0 {
        pow(lambda, e as usize)
    } else {
        pow(&lambda.recip(), (-e) as usize)
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
