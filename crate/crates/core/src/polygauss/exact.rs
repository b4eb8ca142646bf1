use super::polynomial::poly_mul;
use super::rational::{self, Rational};
use super::{LineScalar, PolyGauss};
use crate::error::{arg_err, check_dim, Error, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact real number `coef · √π · exp(exponent) / √radicand`.
///
/// Every line moment of a polynomial-Gaussian field at a rational phase
/// point has this shape, and all moments taken at the same point share the
/// factor `√π·e^E/√a`, so sums and differences of them stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactReal {
    coef: Rational,
    radicand: Rational,
    exponent: Rational,
}

impl ExactReal {
    pub fn new(coef: Rational, radicand: Rational, exponent: Rational) -> Result<Self> {
        if !radicand.is_positive() {
            return arg_err("radicand must be positive");
        }
        Ok(ExactReal {
            coef,
            radicand,
            exponent,
        }
        .normalized())
    }

    pub fn zero() -> Self {
        ExactReal {
            coef: Rational::zero(),
            radicand: Rational::one(),
            exponent: Rational::zero(),
        }
    }

    /// `c·√π`.
    pub fn sqrt_pi_multiple(c: Rational) -> Self {
        ExactReal {
            coef: c,
            radicand: Rational::one(),
            exponent: Rational::zero(),
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.coef.is_zero() {
            self.radicand = Rational::one();
            self.exponent = Rational::zero();
        }
        self
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let c = self.coef.to_f64().unwrap_or(f64::NAN);
        let a = self.radicand.to_f64().unwrap_or(f64::NAN);
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        c * std::f64::consts::PI.sqrt() * e.exp() / a.sqrt()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactReal {
            coef: &self.coef * c,
            radicand: self.radicand.clone(),
            exponent: self.exponent.clone(),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Exact sum when both values share the exponential factor and their
    /// radicands differ by a rational square; otherwise an error.
    pub fn try_add(&self, other: &ExactReal) -> Result<ExactReal> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.exponent != other.exponent {
            return Err(Error::Unsupported(
                "exact values with different exponential factors".into(),
            ));
        }
        if self.radicand == other.radicand {
            return Ok(ExactReal {
                coef: &self.coef + &other.coef,
                radicand: self.radicand.clone(),
                exponent: self.exponent.clone(),
            }
            .normalized());
        }
        // 1/√b = s/√a with s = √(a/b)
        let ratio = &self.radicand / &other.radicand;
        match rational::rational_sqrt(&ratio) {
            Some(s) => Ok(ExactReal {
                coef: &self.coef + &other.coef * s,
                radicand: self.radicand.clone(),
                exponent: self.exponent.clone(),
            }
            .normalized()),
            None => Err(Error::Unsupported(
                "exact values with incommensurable radicals".into(),
            )),
        }
    }

    pub fn try_sub(&self, other: &ExactReal) -> Result<ExactReal> {
        self.try_add(&other.neg())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(
            f,
            "{}·√π·exp({})/√({})",
            rational::format_rational(&self.coef),
            rational::format_rational(&self.exponent),
            rational::format_rational(&self.radicand)
        )
    }
}

/// Rational `q` with `∫ t^k e^{−t²} dt = q·√π`: zero for odd `k`,
/// `(2j−1)!!/2^j` for `k = 2j`.
pub fn gaussian_moment_coefficient(k: usize) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let mut q = Rational::one();
    let mut i = 1;
    while i < k {
        // M_{i+1} = i/2 · M_{i-1}
        q *= rational::rat(i as i64, 2);
        i += 2;
    }
    q
}

/// `∫_ℝ t^k e^{−t²} dt` as an exact multiple of `√π`.
pub fn gaussian_moment(k: usize) -> ExactReal {
    ExactReal::sqrt_pi_multiple(gaussian_moment_coefficient(k))
}

/// Sum `Σ_j c_j ∫ t^j e^{−a(t+h)²} dt` without the common `√π/√a` factor.
/// `coeffs` are in powers of `t`.
fn completed_square_sum<T: LineScalar>(coeffs: &[T], h: &T, inv_a: &T) -> T {
    // Taylor shift: G(w) = F(w − h)
    let shift = [-h.clone(), T::one()];
    let mut shifted = vec![T::zero()];
    for c in coeffs.iter().rev() {
        shifted = poly_mul(&shifted, &shift);
        shifted[0] = shifted[0].clone() + c.clone();
    }
    let mut acc = T::zero();
    let mut inv_a_pow = T::one();
    for (i, g) in shifted.iter().enumerate() {
        if i % 2 == 1 {
            continue;
        }
        if i > 0 {
            inv_a_pow = inv_a_pow * inv_a.clone();
        }
        acc =
            acc + g.clone() * inv_a_pow.clone() * T::from_rational(&gaussian_moment_coefficient(i));
    }
    acc
}

fn line_coefficients<T: LineScalar>(g: &PolyGauss, q: usize, x: &[T], xi: &[T]) -> Result<Vec<T>> {
    let mut coeffs = g.poly().along_line(x, xi)?;
    if q > 0 {
        let mut shifted = vec![T::zero(); q];
        shifted.append(&mut coeffs);
        coeffs = shifted;
    }
    Ok(coeffs)
}

/// Exact `∫ t^q p(x+tξ) e^{−|x+tξ|²} dt` at a rational line.
///
/// With `a = |ξ|²`, `b = ⟨x,ξ⟩`, `c = |x|²` the exponent is
/// `a(t + b/a)² − (b²/a − c)`; shifting and rescaling turns each power of
/// `t` into Gaussian moments, of which only the even ones survive.
pub fn line_moment(g: &PolyGauss, q: usize, x: &[Rational], xi: &[Rational]) -> Result<ExactReal> {
    check_dim(g.n(), x.len())?;
    check_dim(g.n(), xi.len())?;
    let a: Rational = xi.iter().map(|v| v * v).sum();
    if a.is_zero() {
        return arg_err("direction ξ must be nonzero");
    }
    let b: Rational = x.iter().zip(xi).map(|(u, v)| u * v).sum();
    let c: Rational = x.iter().map(|v| v * v).sum();
    let h = &b / &a;
    let exponent = &b * &h - c;
    let coeffs = line_coefficients(g, q, x, xi)?;
    let coef = completed_square_sum(&coeffs, &h, &a.recip());
    ExactReal::new(coef, a, exponent)
}

/// Floating point version of [`line_moment`] for lines with irrational data.
pub fn line_moment_f64(g: &PolyGauss, q: usize, x: &[f64], xi: &[f64]) -> Result<f64> {
    check_dim(g.n(), x.len())?;
    check_dim(g.n(), xi.len())?;
    let a: f64 = xi.iter().map(|v| v * v).sum();
    if a == 0.0 {
        return arg_err("direction ξ must be nonzero");
    }
    let b: f64 = x.iter().zip(xi).map(|(u, v)| u * v).sum();
    let c: f64 = x.iter().map(|v| v * v).sum();
    let h = b / a;
    let coeffs = line_coefficients(g, q, x, xi)?;
    let sum = completed_square_sum(&coeffs, &h, &(1.0 / a));
    Ok(sum * std::f64::consts::PI.sqrt() * (b * h - c).exp() / a.sqrt())
}
