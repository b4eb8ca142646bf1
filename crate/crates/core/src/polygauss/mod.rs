//! Scalar fields `p(x)·exp(−|x|²)` with exact rational polynomial `p`.
//!
//! The class is closed under partial derivatives, rational linear
//! combinations and multiplication by coordinates, and its line integrals
//! have closed forms: along `t ↦ x + tξ` the exponent is a quadratic in `t`,
//! so completing the square reduces every moment to Gaussian moments
//! `∫ u^k e^{−u²} du`. For rational `x, ξ` the result is exactly
//! `c·√π·e^E/√a` with rational `c`, `E` and `a = |ξ|²`.

mod exact;
mod polynomial;
mod random;
pub mod rational;

pub use exact::{
    gaussian_moment, gaussian_moment_coefficient, line_moment, line_moment_f64, ExactReal,
};
pub use polynomial::Polynomial;
pub use random::{monomials_up_to, random_field, random_polynomial};
pub use rational::Rational;

use crate::error::{check_dim, Error, Result};
use crate::symtensor::Scalar;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number types the closed-form line integral runs over: exact rationals
/// for certification, `f64` for points with irrational coordinates.
pub trait LineScalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn from_u64(v: u64) -> Self;
    fn pow_n(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl LineScalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_u64(v: u64) -> Self {
        rational::from_u64(v)
    }
}

impl LineScalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn pow_n(&self, e: usize) -> Self {
        self.powi(e as i32)
    }
}

/// The scalar field `poly(x)·exp(−|x|²)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyGauss {
    poly: Polynomial,
}

impl PolyGauss {
    pub fn new(poly: Polynomial) -> Self {
        PolyGauss { poly }
    }

    /// `exp(−|x|²)` itself.
    pub fn gaussian(n: usize) -> Self {
        PolyGauss::new(Polynomial::one(n))
    }

    pub fn zero(n: usize) -> Self {
        PolyGauss::new(Polynomial::zero(n))
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `∂/∂x^i` of `p·e^{−|x|²}` is `(∂p/∂x^i − 2x^i p)·e^{−|x|²}`.
    pub fn derive(&self, i: usize) -> Result<PolyGauss> {
        let dp = self.poly.derivative(i)?;
        let mut exp = vec![0; self.n()];
        exp[i - 1] = 1;
        let xp = self.poly.mul_monomial(&exp)?.scale(&rational::int(-2));
        Ok(PolyGauss::new(dp.try_add(&xp)?))
    }

    /// Repeated derivative along the listed (1-based) directions.
    pub fn derive_many(&self, dirs: &[usize]) -> Result<PolyGauss> {
        let mut g = self.clone();
        for &d in dirs {
            g = g.derive(d)?;
        }
        Ok(g)
    }

    pub fn try_add(&self, other: &PolyGauss) -> Result<PolyGauss> {
        Ok(PolyGauss::new(self.poly.try_add(&other.poly)?))
    }

    pub fn scale(&self, c: &Rational) -> PolyGauss {
        PolyGauss::new(self.poly.scale(c))
    }

    pub fn multiply_by_monomial(&self, exp: &[u32]) -> Result<PolyGauss> {
        Ok(PolyGauss::new(self.poly.mul_monomial(exp)?))
    }

    /// Multiplication by the coordinate `x^i` (1-based).
    pub fn multiply_by_coordinate(&self, i: usize) -> Result<PolyGauss> {
        let x = Polynomial::variable(self.n(), i)?;
        Ok(PolyGauss::new(self.poly.try_mul(&x)?))
    }

    /// Multiplication by a plain polynomial stays in the class.
    pub fn multiply_by_polynomial(&self, p: &Polynomial) -> Result<PolyGauss> {
        Ok(PolyGauss::new(self.poly.try_mul(p)?))
    }

    /// Always fails: the product carries `exp(−2|x|²)`, which is outside
    /// the class.
    pub fn try_mul(&self, other: &PolyGauss) -> Result<PolyGauss> {
        check_dim(self.n(), other.n())?;
        Err(Error::Unsupported(
            "product of two polynomial-Gaussian fields leaves the class".into(),
        ))
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Ok(self.poly.eval_f64(x)? * (-r2).exp())
    }

    /// Exact value at a rational point as `(p(x), −|x|²)`: the field equals
    /// `p(x)·exp(−|x|²)`.
    pub fn evaluate_exact(&self, x: &[Rational]) -> Result<(Rational, Rational)> {
        let value = self.poly.eval_rational(x)?;
        let r2: Rational = x.iter().map(|v| v * v).sum();
        Ok((value, -r2))
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.poly.max_abs_coefficient()
    }

    /// Upper bound `‖p‖₁·(1+|x|)^deg·e^{−|x|²}` for `|value(x)|`.
    pub fn decay_bound(&self, x: &[f64]) -> f64 {
        let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let l1 = self.poly.l1_norm().to_f64().unwrap_or(f64::INFINITY);
        l1 * (1.0 + r).powi(self.poly.degree() as i32) * (-r * r).exp()
    }
}

impl Scalar for PolyGauss {
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n(), other.n());
        self.try_add(other)
            .expect("components share the field dimension")
    }
    fn scale(&self, c: &Rational) -> Self {
        PolyGauss::scale(self, c)
    }
}

impl fmt::Display for PolyGauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·exp(-|x|^2)", self.poly)
    }
}
