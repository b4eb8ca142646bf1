//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use common::{field_scale, GaussHermite};
use moment_kernel::diffops::{
    bisym_difference_report, generalized_saint_venant, operator_r, r_from_w,
    restriction_relation_report, saint_venant, w_from_r,
};
use moment_kernel::moments::{
    atom_degree, convert_i_to_j, euler_check, john_power_constant, moment_stack,
    random_phase_point, random_ts_point, recover_restricted_expression,
    symmetrization_relation_check, transform_i, transform_j, translation_check, JohnPowers,
    MomentExpression, PhasePoint, PointMoments, TSPoint,
};
use moment_kernel::mutation::Mutation;
use moment_kernel::polygauss::{line_moment, random_field};
use moment_kernel::symtensor::{all_tuples, canonical_tuples, restrict, symmetrize};
use moment_kernel::verify::{
    generate_potential, run_suites, separation_witness, SuiteConfig, SuiteKind,
};
use moment_kernel::{IndexTuple, Rational, RawTensor, Result, SymField};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

/// `(n, m, k)` with `n ∈ {2, 3}`, `1 ≤ m ≤ 3`, `k < m`.
fn kernel_configs() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for m in 1..=3 {
            for k in 0..m {
                out.push((n, m, k));
            }
        }
    }
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn phase_points(n: usize, seed: u64, count: usize) -> Vec<PhasePoint> {
    let mut r = rng(seed);
    (0..count).map(|_| random_phase_point(&mut r, n)).collect()
}

fn config_seed(n: usize, m: usize, k: usize, seed: u64) -> u64 {
    seed * 1000 + (n * 100 + m * 10 + k) as u64
}

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn kernel_forward() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut nonzero_wk = 0;
    let mut cases = 0;
    for (n, m, k) in kernel_configs() {
        for seed in 0..5 {
            let s = config_seed(n, m, k, seed);
            let (_, f) = generate_potential(n, m, k, 2, s)?;
            if !generalized_saint_venant(&f, k)?.is_zero() {
                nonzero_wk += 1;
            }
            let scale = field_scale(&f);
            let mut r = rng(s ^ 0xA5);
            for _ in 0..20 {
                let pt = random_ts_point(&mut r, n);
                for q in 0..=k {
                    worst = worst.max(transform_i(&f, q, &pt)?.abs() / scale);
                }
            }
            cases += 1;
        }
    }
    outcome(
        nonzero_wk == 0 && worst <= 1e-10,
        format!("{cases} potentials, W^k nonzero in {nonzero_wk}, max |I^q f|/scale = {worst:.2e}"),
    )
}

fn kernel_separation() -> Result<Outcome> {
    let mut worst_rate = usize::MAX;
    let mut extra_draws = 0;
    let mut extra_rounds = 0;
    let mut total = 0;
    for (n, m, k) in kernel_configs() {
        let mut separated = 0;
        for seed in 0..100 {
            let w = separation_witness(n, m, k, 2, config_seed(n, m, k, seed), 20)?;
            if w.separated() {
                separated += 1;
            }
            extra_draws += w.field_draws - 1;
            extra_rounds += w.point_rounds - 1;
            total += 1;
        }
        worst_rate = worst_rate.min(separated);
    }
    outcome(
        worst_rate >= 99,
        format!(
            "{total} fields, worst configuration {worst_rate}/100 separated, \
             re-drawn fields {extra_draws}, extra sampling rounds {extra_rounds}"
        ),
    )
}

fn conversion() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut worst_at_zero = 0.0f64;
    let mut zeros = 0;
    let mut count = 0;
    for n in 2..=3 {
        for m in 0..=3 {
            let f = random_field(n, m, 2, (10 * n + m) as u64)?;
            let scale = field_scale(&f);
            for pt in phase_points(n, (100 + 10 * n + m) as u64, 50) {
                let ts = TSPoint::from_phase_point(&pt)?;
                let stack = moment_stack(&f, 3, &ts)?;
                for q in 0..=3 {
                    let direct = transform_j(&f, q, &pt)?;
                    let conv = convert_i_to_j(&stack, m, q, &pt.x_f64(), &pt.xi_f64())?;
                    if direct.is_zero() {
                        // relative error is undefined at an exact zero
                        zeros += 1;
                        worst_at_zero = worst_at_zero.max(conv.abs() / scale);
                    } else {
                        worst = worst.max(relative(direct.to_f64(), conv));
                    }
                    count += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-10 && worst_at_zero <= 1e-10,
        format!(
            "{count} comparisons, max relative error {worst:.2e}; \
             {zeros} exact zeros, max |conversion|/scale there {worst_at_zero:.2e}"
        ),
    )
}

fn round_trip() -> Result<Outcome> {
    let mut failures = 0;
    let mut count = 0;
    for n in 2..=3 {
        for m in 1..=3 {
            for seed in 0..2 {
                let f = random_field(n, m, 2, config_seed(n, m, 0, seed))?;
                let r = operator_r(&f)?;
                let w = saint_venant(&f)?;
                if !bisym_difference_report(&w_from_r(&r)?, &w)?.is_zero {
                    failures += 1;
                }
                if !r_from_w(&w)?.sub(&r)?.is_zero() {
                    failures += 1;
                }
                count += 2;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{count} exact comparisons, {failures} nonzero"),
    )
}

fn recovery() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut inexact = 0;
    let mut count = 0;
    for n in 2..=3 {
        for m in 0..=3 {
            let f = random_field(n, m, 1, (20 + 10 * n + m) as u64)?;
            let mut parts = Vec::new();
            for r in 0..=m {
                for fixed in canonical_tuples(n, r) {
                    let fixed = IndexTuple::new(&fixed, n)?;
                    parts.push((
                        recover_restricted_expression(&f, &fixed, None)?,
                        restrict(&f, &fixed)?,
                    ));
                }
            }
            for pt in phase_points(n, (200 + 10 * n + m) as u64, 20) {
                let mut moments = PointMoments::new(&pt);
                let factor = pt.factor().to_f64();
                for (expr, h) in &parts {
                    let diff =
                        expr.evaluate_coef_with(&mut moments)? - moments.transform_j_coef(h, 0)?;
                    if diff != Rational::default() {
                        inexact += 1;
                    }
                    worst = worst.max(diff.abs().to_f64().unwrap() * factor);
                    count += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("{count} comparisons, {inexact} not exactly zero, max residual {worst:.2e}"),
    )
}

fn john_identities() -> Result<Outcome> {
    let mut worst_id = 0.0f64;
    let mut worst_col = 0.0f64;
    let mut count = 0;
    for (n, m, k) in [(2, 2, 0), (2, 2, 1), (3, 3, 1), (3, 3, 2)] {
        let f = random_field(n, m, 2, config_seed(n, m, k, 7))?;
        let pts = phase_points(n, config_seed(n, m, k, 8), 10);
        for fixed in canonical_tuples(n, k) {
            let jp = JohnPowers::new(&f, k, &IndexTuple::new(&fixed, n)?)?;
            let constant = john_power_constant(jp.order());
            for pt in &pts {
                let (id, col) = jp.residuals(pt, &constant)?;
                worst_id = worst_id.max(id.max_abs);
                worst_col = worst_col.max(col.max_abs);
                count += 1;
            }
        }
    }
    outcome(
        worst_id <= 1e-9 && worst_col <= 1e-9,
        format!(
            "{count} evaluations, max residual {worst_id:.2e} (power), {worst_col:.2e} (collapsed)"
        ),
    )
}

/// Random rational tensor symmetric within positions `0..m−k` and `m−k..m`.
fn block_symmetric(n: usize, m: usize, k: usize, seed: u64) -> Result<RawTensor<Rational>> {
    let mut r = rng(seed);
    let mut t = RawTensor::new(n, m)?;
    for key in all_tuples(n, m) {
        let v = Rational::new(r.gen_range(-9..=9).into(), r.gen_range(1..=5).into());
        t.set(&key, v)?;
    }
    let front: Vec<usize> = (0..m - k).collect();
    let back: Vec<usize> = (m - k..m).collect();
    symmetrize(&symmetrize(&t, &front)?, &back)
}

fn exact_relations() -> Result<Outcome> {
    let mut failures = 0;
    let mut count = 0;
    for n in 2..=3 {
        for m in 1..=3 {
            let f = random_field(n, m, 2, (30 + 10 * n + m) as u64)?;
            for k in 0..=m.min(2) {
                if !restriction_relation_report(&f, k, None)?.is_zero {
                    failures += 1;
                }
                let t = block_symmetric(n, m, k, config_seed(n, m, k, 3))?;
                if !symmetrization_relation_check(&t, k)?.is_exactly_zero() {
                    failures += 1;
                }
                count += 2;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{count} exact checks, {failures} nonzero"),
    )
}

fn translation_euler() -> Result<Outcome> {
    let mut worst_t = 0.0f64;
    let mut worst_e = 0.0f64;
    for n in 2..=3 {
        for m in 0..=3 {
            let f = random_field(n, m, 2, (40 + 10 * n + m) as u64)?;
            let mut fields: Vec<SymField> = vec![f.clone()];
            for r in 1..=m {
                fields.push(restrict(&f, &IndexTuple::new(&vec![1; r], n)?)?);
            }
            for pt in phase_points(n, (300 + 10 * n + m) as u64, 10) {
                for k in 0..=3 {
                    worst_t = worst_t.max(translation_check(&f, k, &pt)?.max_abs);
                    for g in &fields {
                        let e = MomentExpression::atom(k, g.clone());
                        let res = euler_check(&e, atom_degree(g.rank(), k), &pt)?;
                        worst_e = worst_e.max(res.max_abs);
                    }
                }
            }
        }
    }
    outcome(
        worst_t <= 1e-10 && worst_e <= 1e-10,
        format!("max residual {worst_t:.2e} (integration by parts), {worst_e:.2e} (Euler)"),
    )
}

fn quadrature_oracle() -> Result<Outcome> {
    let gh = GaussHermite::new(24);
    let mut worst = 0.0f64;
    let mut r = rng(9);
    for i in 0..200u64 {
        let n = 2 + (i % 2) as usize;
        let m = (i % 4) as usize;
        let q = ((i / 4) % 4) as usize;
        let f = random_field(n, m, 3, 5000 + i)?;
        let pt = random_phase_point(&mut r, n);
        let (x, xi) = (pt.x_f64(), pt.xi_f64());
        for (_, g) in f.iter() {
            let closed = line_moment(g, q, pt.x(), pt.xi())?.to_f64();
            let oracle = gh.line_moment(g, q, &x, &xi);
            worst = worst.max(relative(closed, oracle));
        }
        let closed = transform_j(&f, q, &pt)?.to_f64();
        worst = worst.max(relative(closed, gh.transform(&f, q, &x, &xi)));
    }
    outcome(
        worst <= 1e-12,
        format!("200 triples, max relative deviation {worst:.2e}"),
    )
}

fn relative(exact: f64, approx: f64) -> f64 {
    let d = (exact - approx).abs();
    if d == 0.0 {
        0.0
    } else {
        d / exact.abs()
    }
}

fn mutation_sensitivity() -> Result<Outcome> {
    let mut sites = 0;
    let mut missed = Vec::new();
    for m in 1..=3 {
        for k in 0..m {
            for site in Mutation::all_sites(m, k) {
                let cfg = SuiteConfig {
                    m,
                    k,
                    samples: 5,
                    mutation: Some(site),
                    ..SuiteConfig::default()
                };
                let results = run_suites(SuiteKind::All, &cfg)?;
                if results.iter().all(|r| r.pass) {
                    missed.push(format!("{site} at m={m} k={k}"));
                }
                sites += 1;
            }
        }
    }
    outcome(
        missed.is_empty(),
        format!("{sites} mutated runs, undetected: {missed:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("kernel theorem, potentials", kernel_forward),
        ("kernel theorem, separation", kernel_separation),
        ("I-to-J conversion", conversion),
        ("R/W round trip", round_trip),
        ("restricted transform recovery", recovery),
        (
            "John power and collapsed derivative identities",
            john_identities,
        ),
        ("restriction and symmetrization relations", exact_relations),
        ("integration by parts and homogeneity", translation_euler),
        ("closed form vs Gauss-Hermite", quadrature_oracle),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(Ok(o)) => (o.pass, o.detail),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        all &= pass;
        println!(
            "criterion {:>2} {}: {name}; {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}", if all { "PASS" } else { "FAIL" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
