use crate::error::{arg_err, check_dim, Result};
use crate::polygauss::rational::rat;
use crate::polygauss::{ExactReal, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// A point `(x, ξ)` of `Rⁿ × (Rⁿ∖{0})` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoint {
    x: Vec<Rational>,
    xi: Vec<Rational>,
}

impl PhasePoint {
    pub fn new(x: Vec<Rational>, xi: Vec<Rational>) -> Result<Self> {
        check_dim(x.len(), xi.len())?;
        if x.len() < 2 {
            return arg_err(format!("dimension must be at least 2, got {}", x.len()));
        }
        if xi.iter().all(|v| v.is_zero()) {
            return arg_err("direction ξ must be nonzero");
        }
        Ok(PhasePoint { x, xi })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(x: &[(i64, i64)], xi: &[(i64, i64)]) -> Result<Self> {
        PhasePoint::new(
            x.iter().map(|&(a, b)| rat(a, b)).collect(),
            xi.iter().map(|&(a, b)| rat(a, b)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn xi(&self) -> &[Rational] {
        &self.xi
    }

    pub fn x_f64(&self) -> Vec<f64> {
        to_f64s(&self.x)
    }

    pub fn xi_f64(&self) -> Vec<f64> {
        to_f64s(&self.xi)
    }

    pub fn xi_norm_sq(&self) -> Rational {
        self.xi.iter().map(|v| v * v).sum()
    }

    pub fn x_dot_xi(&self) -> Rational {
        self.x.iter().zip(&self.xi).map(|(a, b)| a * b).sum()
    }

    /// The common factor `√π·e^E/√|ξ|²` shared by every line moment at this
    /// point, with `E = ⟨x,ξ⟩²/|ξ|² − |x|²`.
    pub fn factor(&self) -> ExactReal {
        let a = self.xi_norm_sq();
        let b = self.x_dot_xi();
        let c: Rational = self.x.iter().map(|v| v * v).sum();
        let e = &b * &b / &a - c;
        ExactReal::new(Rational::one(), a, e).expect("|ξ|² > 0")
    }

    /// `(x + sξ, ξ)`.
    pub fn shifted(&self, s: &Rational) -> PhasePoint {
        PhasePoint {
            x: self
                .x
                .iter()
                .zip(&self.xi)
                .map(|(a, b)| a + s * b)
                .collect(),
            xi: self.xi.clone(),
        }
    }

    /// `(x, λξ)` for `λ > 0`.
    pub fn scaled_direction(&self, lambda: &Rational) -> Result<PhasePoint> {
        if !lambda.is_positive() {
            return arg_err("direction scale must be positive");
        }
        Ok(PhasePoint {
            x: self.x.clone(),
            xi: self.xi.iter().map(|v| v * lambda).collect(),
        })
    }

    /// True when `|ξ| = 1` and `⟨x, ξ⟩ = 0` hold exactly.
    pub fn is_on_tangent_bundle(&self) -> bool {
        self.xi_norm_sq().is_one() && self.x_dot_xi().is_zero()
    }

    /// `x − ⟨x,ξ⟩ξ/|ξ|²`, exactly.
    pub fn projected_x(&self) -> Vec<Rational> {
        let h = self.x_dot_xi() / self.xi_norm_sq();
        self.x
            .iter()
            .zip(&self.xi)
            .map(|(a, b)| a - &h * b)
            .collect()
    }
}

fn to_f64s(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
}

const TS_TOLERANCE: f64 = 1e-12;

/// A point of `TS^{n−1}` (an oriented line): `|ξ| = 1`, `⟨x, ξ⟩ = 0`.
///
/// Floating point coordinates are always present; when the point was built
/// from rational data that satisfies the constraints exactly, the rational
/// coordinates are kept as well so transforms can be evaluated exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TSPoint {
    x: Vec<f64>,
    xi: Vec<f64>,
    exact: Option<PhasePoint>,
    projection_residual: f64,
}

impl TSPoint {
    /// Wraps a rational point that already lies on `TS^{n−1}` exactly.
    pub fn exact(pt: PhasePoint) -> Result<Self> {
        if !pt.is_on_tangent_bundle() {
            return arg_err("point is not on the tangent bundle of the unit sphere");
        }
        Ok(TSPoint {
            x: pt.x_f64(),
            xi: pt.xi_f64(),
            exact: Some(pt),
            projection_residual: 0.0,
        })
    }

    /// Normalizes `ξ`, removes the `ξ` component from `x`, and records how
    /// far the floating result is from satisfying the constraints.
    pub fn project(x: &[f64], xi: &[f64]) -> Result<Self> {
        check_dim(x.len(), xi.len())?;
        let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return arg_err("direction ξ must be nonzero and finite");
        }
        let xi: Vec<f64> = xi.iter().map(|v| v / norm).collect();
        let dot: f64 = x.iter().zip(&xi).map(|(a, b)| a * b).sum();
        let x: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| a - dot * b).collect();
        let residual = residual_of(&x, &xi);
        if residual > TS_TOLERANCE {
            return arg_err(format!("projection residual {residual:e} too large"));
        }
        Ok(TSPoint {
            x,
            xi,
            exact: None,
            projection_residual: residual,
        })
    }

    /// The projected line `(x − ⟨x,ξ⟩ξ/|ξ|², ξ/|ξ|)` of a phase point; the
    /// offset is computed exactly before rounding.
    pub fn from_phase_point(pt: &PhasePoint) -> Result<Self> {
        if pt.is_on_tangent_bundle() {
            return TSPoint::exact(pt.clone());
        }
        let x = to_f64s(&pt.projected_x());
        let norm = pt.xi_norm_sq().to_f64().unwrap_or(f64::NAN).sqrt();
        let xi: Vec<f64> = pt.xi_f64().iter().map(|v| v / norm).collect();
        let residual = residual_of(&x, &xi);
        if residual > TS_TOLERANCE {
            return arg_err(format!("projection residual {residual:e} too large"));
        }
        Ok(TSPoint {
            x,
            xi,
            exact: None,
            projection_residual: residual,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn exact_point(&self) -> Option<&PhasePoint> {
        self.exact.as_ref()
    }

    pub fn projection_residual(&self) -> f64 {
        self.projection_residual
    }
}

fn residual_of(x: &[f64], xi: &[f64]) -> f64 {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    (norm - 1.0).abs().max(dot.abs())
}

fn quarter<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    rat(rng.gen_range(lo..=hi), 4)
}

/// Random rational phase point: coordinates on the grid `Z/4`,
/// `|ξ| ∈ [1/2, 2]`, and `x` kept at least ~18° away from `±ξ`.
pub fn random_phase_point<R: Rng>(rng: &mut R, n: usize) -> PhasePoint {
    loop {
        let xi: Vec<Rational> = (0..n).map(|_| quarter(rng, -6, 6)).collect();
        let a: Rational = xi.iter().map(|v| v * v).sum();
        if a < rat(1, 4) || a > rat(4, 1) {
            continue;
        }
        let x: Vec<Rational> = (0..n).map(|_| quarter(rng, -5, 5)).collect();
        let c: Rational = x.iter().map(|v| v * v).sum();
        let b: Rational = x.iter().zip(&xi).map(|(u, v)| u * v).sum();
        // cos² of the angle between x and ξ must stay below 0.9
        if !c.is_zero() && &b * &b >= rat(9, 10) * &a * &c {
            continue;
        }
        return PhasePoint::new(x, xi).expect("nonzero direction");
    }
}

/// Random point of `TS^{n−1}` with exact rational coordinates. The unit
/// direction comes from inverse stereographic projection of a rational
/// point of `R^{n−1}`, which keeps `|ξ| = 1` exact.
pub fn random_ts_point<R: Rng>(rng: &mut R, n: usize) -> TSPoint {
    let u: Vec<Rational> = (0..n - 1).map(|_| quarter(rng, -8, 8)).collect();
    let s: Rational = u.iter().map(|v| v * v).sum();
    let denom = &s + Rational::one();
    let mut xi: Vec<Rational> = u.iter().map(|v| rat(2, 1) * v / &denom).collect();
    xi.push((&s - Rational::one()) / &denom);
    let y: Vec<Rational> = (0..n).map(|_| quarter(rng, -5, 5)).collect();
    let dot: Rational = y.iter().zip(&xi).map(|(a, b)| a * b).sum();
    let x: Vec<Rational> = y.iter().zip(&xi).map(|(a, b)| a - &dot * b).collect();
    TSPoint::exact(PhasePoint::new(x, xi).expect("unit direction")).expect("exact projection")
}
