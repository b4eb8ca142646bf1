use super::rational::{rat, Rational};
use super::{PolyGauss, Polynomial};
use crate::error::Result;
use crate::symtensor::{canonical_tuples, SymStorage};
use crate::SymField;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exponent vectors of total degree `≤ degree` in `n` variables, graded
/// then lexicographic.
pub fn monomials_up_to(n: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, d, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        fill(cur, pos + 1, left - v, out);
    }
    cur[pos] = 0;
}

/// Polynomial with coefficients drawn from `{−3,…,3}/{1,2}`; never zero.
pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, degree: u32) -> Polynomial {
    let monomials = monomials_up_to(n, degree);
    loop {
        let mut p = Polynomial::zero(n);
        for exp in &monomials {
            let c = small_rational(rng);
            if !c.is_zero() {
                p.add_term(exp.clone(), c).expect("exponent length n");
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=2);
    rat(num, den)
}

/// Deterministic random symmetric field: every canonical component gets an
/// independent random polynomial of total degree `≤ degree`.
pub fn random_field(n: usize, rank: usize, degree: u32, seed: u64) -> Result<SymField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SymStorage::new(n, rank)?;
    for key in canonical_tuples(n, rank) {
        let p = random_polynomial(&mut rng, n, degree);
        f.set(&key, PolyGauss::new(p))?;
    }
    Ok(f)
}
