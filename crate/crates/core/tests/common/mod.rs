//! Gauss–Hermite quadrature, used as an oracle for the closed-form line
//! moments. Shares no code with the library's integration routines.

#![allow(dead_code)]

use moment_kernel::{PolyGauss, SymField};
use num_traits::ToPrimitive;

/// Nodes and weights for `∫ e^{−u²} h(u) du`, exact for polynomial `h` of
/// degree below `2·len`.
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence, seeded with
    /// the usual asymptotic root estimates.
    pub fn new(len: usize) -> Self {
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let mut nodes = vec![0.0; len];
        let mut weights = vec![0.0; len];
        let nf = len as f64;
        let mut z = 0.0f64;
        for i in 0..len.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..len {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let step = p1 / pp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[len - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[len - 1 - i] = weights[i];
        }
        GaussHermite { nodes, weights }
    }

    /// `∫ t^q g(x + tξ) dt` for `g = p·e^{−|x|²}`: completing the square in
    /// `t` turns the integrand into `e^{−u²}` times a polynomial in `u`.
    pub fn line_moment(&self, g: &PolyGauss, q: usize, x: &[f64], xi: &[f64]) -> f64 {
        self.integrate(q, x, xi, |y| eval_poly(g, y))
    }

    /// `∫ t^q ⟨f(x + tξ), ξ^m⟩ dt`, contracting every index tuple.
    pub fn transform(&self, f: &SymField, q: usize, x: &[f64], xi: &[f64]) -> f64 {
        let tuples = all_tuples(f.n(), f.rank());
        self.integrate(q, x, xi, |y| {
            let mut acc = 0.0;
            for idx in &tuples {
                if let Some(c) = f.get(idx) {
                    let w: f64 = idx.iter().map(|&j| xi[j - 1]).product();
                    acc += w * eval_poly(c, y);
                }
            }
            acc
        })
    }

    fn integrate(&self, q: usize, x: &[f64], xi: &[f64], p: impl Fn(&[f64]) -> f64) -> f64 {
        let a: f64 = xi.iter().map(|v| v * v).sum();
        let b: f64 = x.iter().zip(xi).map(|(u, v)| u * v).sum();
        let c: f64 = x.iter().map(|v| v * v).sum();
        let shift = b / a;
        let root = a.sqrt();
        let mut acc = 0.0;
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            let t = u / root - shift;
            let y: Vec<f64> = x.iter().zip(xi).map(|(p, d)| p + t * d).collect();
            acc += w * t.powi(q as i32) * p(&y);
        }
        acc * (b * b / a - c).exp() / root
    }
}

/// The polynomial part of `g` at `y`, term by term.
fn eval_poly(g: &PolyGauss, y: &[f64]) -> f64 {
    g.poly()
        .terms()
        .map(|(exp, c)| {
            let mono: f64 = exp.iter().zip(y).map(|(&e, v)| v.powi(e as i32)).product();
            c.to_f64().unwrap() * mono
        })
        .sum()
}

/// Every index tuple of length `rank` over `1..=n`.
pub fn all_tuples(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |i| {
                    let mut v = t.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// Largest absolute polynomial coefficient over the components of `f`.
pub fn field_scale(f: &SymField) -> f64 {
    f.iter()
        .map(|(_, g)| g.max_abs_coefficient().to_f64().unwrap())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}
