use super::point::PhasePoint;
use super::transform::{transform_j_coef, transform_j_f64, PointMoments};
use crate::error::{arg_err, check_dim, Result};
use crate::polygauss::rational::from_u64;
use crate::polygauss::{ExactReal, Rational};
use crate::symtensor::{restrict, IndexTuple, Scalar, SymStorage};
use crate::SymField;
use num_traits::Zero;
use std::collections::BTreeMap;

/// One ray-transform atom: the function `(x, ξ) ↦ (J^q field)(x, ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentAtom {
    pub q: usize,
    pub field: SymField,
}

/// Formal rational-linear combination of atoms `J^q(g)`.
///
/// `J^q` is linear in the field, so atoms sharing `(q, rank)` are merged by
/// adding their fields; coefficients are absorbed into the fields. The
/// number of stored atoms is therefore bounded by the distinct `(q, rank)`
/// pairs regardless of how many rewrites produced the expression.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentExpression {
    n: usize,
    atoms: BTreeMap<(usize, usize), SymField>,
}

impl MomentExpression {
    pub fn zero(n: usize) -> Self {
        MomentExpression {
            n,
            atoms: BTreeMap::new(),
        }
    }

    /// `J^q field`.
    pub fn atom(q: usize, field: SymField) -> Self {
        let mut e = MomentExpression::zero(field.n());
        e.push(q, field);
        e
    }

    /// `Σ c · J^q(g)` from explicit terms.
    pub fn from_terms(n: usize, terms: Vec<(Rational, MomentAtom)>) -> Result<Self> {
        let mut e = MomentExpression::zero(n);
        for (c, atom) in terms {
            check_dim(n, atom.field.n())?;
            e.push(atom.q, atom.field.scale(&c));
        }
        Ok(e)
    }

    fn push(&mut self, q: usize, field: SymField) {
        if field.is_zero() {
            return;
        }
        let key = (q, field.rank());
        match self.atoms.remove(&key) {
            None => {
                self.atoms.insert(key, field);
            }
            Some(existing) => {
                let sum = existing.add(&field).expect("same dimension and rank");
                if !sum.is_zero() {
                    self.atoms.insert(key, sum);
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Terms as `(coefficient, atom)`; merged atoms carry coefficient one.
    pub fn terms(&self) -> Vec<(Rational, MomentAtom)> {
        self.atoms
            .iter()
            .map(|(&(q, _), field)| {
                (
                    from_u64(1),
                    MomentAtom {
                        q,
                        field: field.clone(),
                    },
                )
            })
            .collect()
    }

    pub fn try_add(&self, other: &MomentExpression) -> Result<MomentExpression> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        for (&(q, _), field) in &other.atoms {
            out.push(q, field.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MomentExpression {
        let mut out = MomentExpression::zero(self.n);
        for (&(q, _), field) in &self.atoms {
            out.push(q, field.scale(c));
        }
        out
    }

    /// `∂/∂x^i`: differentiation under the integral, `∂_{x^i} J^q(g) = J^q(∂_i g)`.
    pub fn dx(&self, i: usize) -> Result<MomentExpression> {
        check_index(self.n, i)?;
        let mut out = MomentExpression::zero(self.n);
        for (&(q, _), field) in &self.atoms {
            out.push(q, partial(field, i)?);
        }
        Ok(out)
    }

    /// `∂/∂ξ^i`: `∂_{ξ^i} J^q(g) = J^{q+1}(∂_i g) + r·J^q(g^{i})` for `g` of
    /// rank `r`, where `g^{i}` fixes one index to `i`.
    pub fn dxi(&self, i: usize) -> Result<MomentExpression> {
        check_index(self.n, i)?;
        let mut out = MomentExpression::zero(self.n);
        for (&(q, r), field) in &self.atoms {
            out.push(q + 1, partial(field, i)?);
            if r > 0 {
                let restricted = restrict(field, &IndexTuple::new(&[i], self.n)?)?;
                out.push(q, restricted.scale(&from_u64(r as u64)));
            }
        }
        Ok(out)
    }

    /// John operator `𝒥_{pq} = ∂²/∂x^p∂ξ^q − ∂²/∂x^q∂ξ^p`.
    pub fn john(&self, p: usize, q: usize) -> Result<MomentExpression> {
        if p == q {
            return arg_err(format!(
                "John operator needs distinct indices, got {p} twice"
            ));
        }
        let a = self.dxi(q)?.dx(p)?;
        let b = self.dxi(p)?.dx(q)?;
        a.try_add(&b.scale(&-from_u64(1)))
    }

    /// Exact value as a coefficient of the point's common factor.
    pub fn evaluate_coef(&self, pt: &PhasePoint) -> Result<Rational> {
        check_dim(self.n, pt.n())?;
        let mut acc = Rational::zero();
        for (&(q, _), field) in &self.atoms {
            acc += transform_j_coef(field, q, pt)?;
        }
        Ok(acc)
    }

    /// [`evaluate_coef`](Self::evaluate_coef) through a shared moment cache.
    pub fn evaluate_coef_with(&self, moments: &mut PointMoments) -> Result<Rational> {
        check_dim(self.n, moments.point().n())?;
        let mut acc = Rational::zero();
        for (&(q, _), field) in &self.atoms {
            acc += moments.transform_j_coef(field, q)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, pt: &PhasePoint) -> Result<ExactReal> {
        Ok(pt.factor().scale(&self.evaluate_coef(pt)?))
    }

    pub fn evaluate_f64(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (&(q, _), field) in &self.atoms {
            acc += transform_j_f64(field, q, x, xi)?;
        }
        Ok(acc)
    }
}

impl Scalar for MomentExpression {
    fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other)
            .expect("expressions share the dimension")
    }
    fn scale(&self, c: &Rational) -> Self {
        MomentExpression::scale(self, c)
    }
}

/// Componentwise `∂/∂x^i` of a field.
pub fn partial(field: &SymField, i: usize) -> Result<SymField> {
    let mut out = SymStorage::new(field.n(), field.rank())?;
    for (key, value) in field.iter() {
        out.set(key, value.derive(i)?)?;
    }
    Ok(out)
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return arg_err(format!("index {i} outside 1..={n}"));
    }
    Ok(())
}
