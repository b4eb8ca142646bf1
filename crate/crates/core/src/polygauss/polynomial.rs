use super::rational::Rational;
use super::LineScalar;
use crate::error::{arg_err, check_dim, Result};
use crate::symtensor::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Multivariate polynomial in `n` variables with exact rational coefficients.
///
/// Terms are keyed by exponent vectors of length `n`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(n, vec![0; n], c).expect("constant exponent has length n")
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn monomial(n: usize, exp: Vec<u32>, c: Rational) -> Result<Self> {
        check_dim(n, exp.len())?;
        let mut p = Polynomial::zero(n);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        Ok(p)
    }

    /// The coordinate function `x^i` (1-based).
    pub fn variable(n: usize, i: usize) -> Result<Self> {
        check_var(n, i)?;
        let mut exp = vec![0; n];
        exp[i - 1] = 1;
        Self::monomial(n, exp, Rational::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        crate::symtensor::max_abs(self.terms.values())
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Rational) -> Result<()> {
        check_dim(self.n, exp.len())?;
        self.add_term_unchecked(exp, c);
        Ok(())
    }

    fn add_term_unchecked(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term_unchecked(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &[u32]) -> Result<Polynomial> {
        check_dim(self.n, exp.len())?;
        Ok(Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    let shifted = e.iter().zip(exp).map(|(a, b)| a + b).collect();
                    (shifted, v.clone())
                })
                .collect(),
        })
    }

    /// Product of two polynomials.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        let mut out = Polynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term_unchecked(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Plain partial derivative `∂p/∂x^i` (1-based).
    pub fn derivative(&self, i: usize) -> Result<Polynomial> {
        check_var(self.n, i)?;
        let v = i - 1;
        let mut out = Polynomial::zero(self.n);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut de = e.clone();
            de[v] -= 1;
            out.add_term_unchecked(de, c * Rational::from_integer(e[v].into()));
        }
        Ok(out)
    }

    pub fn eval_rational(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.n, x.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                term *= super::rational::pow(xi, k as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.n, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut term = c.to_f64().unwrap_or(f64::NAN);
                for (xi, &k) in x.iter().zip(e) {
                    term *= xi.powi(k as i32);
                }
                term
            })
            .sum())
    }

    /// Sum of absolute coefficients, an upper bound for `|p(x)|` on the unit box.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Coefficients `c_j` of `t ↦ p(x + tξ) = Σ c_j t^j`.
    pub fn along_line<T: LineScalar>(&self, x: &[T], xi: &[T]) -> Result<Vec<T>> {
        check_dim(self.n, x.len())?;
        check_dim(self.n, xi.len())?;
        let deg = self.degree() as usize;
        // powers[v][e] = coefficients of (x_v + t ξ_v)^e
        let mut powers: Vec<Vec<Vec<T>>> = Vec::with_capacity(self.n);
        for v in 0..self.n {
            let max_e = self.terms.keys().map(|e| e[v]).max().unwrap_or(0) as usize;
            let mut pv = Vec::with_capacity(max_e + 1);
            for e in 0..=max_e {
                let mut coeffs = Vec::with_capacity(e + 1);
                for j in 0..=e {
                    let binom = T::from_u64(binomial(e, j));
                    coeffs.push(binom * x[v].pow_n(e - j) * xi[v].pow_n(j));
                }
                pv.push(coeffs);
            }
            powers.push(pv);
        }
        let mut out = vec![T::zero(); deg + 1];
        for (e, c) in &self.terms {
            let mut acc = vec![T::from_rational(c)];
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                acc = poly_mul(&acc, &powers[v][k as usize]);
            }
            for (j, a) in acc.into_iter().enumerate() {
                out[j] = out[j].clone() + a;
            }
        }
        Ok(out)
    }
}

pub(crate) fn poly_mul<T: LineScalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

pub(crate) fn check_var(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return arg_err(format!("variable index {i} outside 1..={n}"));
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", super::rational::format_rational(c))?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{}", v + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
