use super::report::{CheckRecord, SuiteResult};
use super::SuiteConfig;
use crate::diffops::{
    bisym_difference_report, generalized_saint_venant, generalized_saint_venant_mutated,
    inner_derivative, iterate_d, operator_r, r_from_w, restriction_relation_report, saint_venant,
    w_from_r, OperatorReport,
};
use crate::error::{arg_err, Result};
use crate::moments::{
    atom_degree, convert_i_to_j, convert_i_to_j_magnitude, decay_profile, euler_check,
    homogeneity_factor, john_power_constant, random_phase_point, random_ts_point,
    recover_restricted_expression, restriction_contraction_check, transform_i, transform_i_exact,
    transform_j, transform_j_coef, translation_check, JohnPowers, KernelDerivative,
    MomentExpression, PhasePoint, Residual, TSPoint,
};
use crate::mutation::Mutation;
use crate::polygauss::rational::{int, rat};
use crate::polygauss::{random_field, ExactReal, Rational};
use crate::symtensor::{
    canonical_tuples, contract_with_power, restrict, symmetrize, IndexTuple, RawTensor,
};
use crate::SymField;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Magnitude a moment stack must exceed to count as a nonzero witness.
pub const WITNESS_THRESHOLD: f64 = 1e-6;

const KERNEL: &str = "kernel";
const IDENTITIES: &str = "identities";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Kernel,
    Identities,
    All,
}

impl std::str::FromStr for SuiteKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(SuiteKind::Kernel),
            "identities" => Ok(SuiteKind::Identities),
            "all" => Ok(SuiteKind::All),
            other => arg_err(format!("unknown suite {other:?}")),
        }
    }
}

pub fn run_suites(kind: SuiteKind, cfg: &SuiteConfig) -> Result<Vec<SuiteResult>> {
    cfg.validate()?;
    let mut out = Vec::new();
    if matches!(kind, SuiteKind::Identities | SuiteKind::All) {
        out.push(suite_identities(cfg)?);
    }
    if matches!(kind, SuiteKind::Kernel | SuiteKind::All) {
        out.push(suite_kernel(cfg)?);
    }
    Ok(out)
}

/// `(v, d^{k+1} v)` for a random rank-`(m−k−1)` field `v`.
pub fn generate_potential(
    n: usize,
    m: usize,
    k: usize,
    degree: u32,
    seed: u64,
) -> Result<(SymField, SymField)> {
    if k + 1 > m {
        return arg_err(format!("a potential needs k + 1 ≤ m, got k = {k}, m = {m}"));
    }
    let v = random_field(n, m - k - 1, degree, seed)?;
    let f = iterate_d(&v, k + 1)?;
    Ok((v, f))
}

/// Outcome of the search for a field outside both kernels.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationWitness {
    pub field: SymField,
    pub wk_nonzero: bool,
    pub wk_max: f64,
    /// Largest `|I^q f|`, `q ≤ k`, over the sampled lines.
    pub witness: f64,
    /// Fields drawn before success (1 = the first draw worked).
    pub field_draws: usize,
    /// Rounds of line sampling used on the final field.
    pub point_rounds: usize,
}

impl SeparationWitness {
    pub fn separated(&self) -> bool {
        self.wk_nonzero && self.witness > WITNESS_THRESHOLD
    }
}

/// Draws random fields until one has `W^k f ≠ 0` and a moment-stack entry
/// above [`WITNESS_THRESHOLD`]; each field gets up to three rounds of line
/// sampling, doubling the count each round.
pub fn separation_witness(
    n: usize,
    m: usize,
    k: usize,
    degree: u32,
    seed: u64,
    samples: usize,
) -> Result<SeparationWitness> {
    const FIELD_DRAWS: usize = 5;
    const ROUNDS: usize = 3;
    let mut last = None;
    for draw in 0..FIELD_DRAWS {
        let fseed = seed.wrapping_add((draw as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let f = random_field(n, m, degree, fseed)?;
        let report = OperatorReport::of_bisym(&generalized_saint_venant(&f, k)?);
        let mut rng = ChaCha8Rng::seed_from_u64(fseed ^ 0x5EED);
        let mut count = samples.max(1);
        let mut witness = 0.0f64;
        let mut rounds = 0;
        for _ in 0..ROUNDS {
            rounds += 1;
            for _ in 0..count {
                let pt = random_ts_point(&mut rng, n);
                for q in 0..=k {
                    witness = witness.max(transform_i(&f, q, &pt)?.abs());
                }
            }
            if witness > WITNESS_THRESHOLD {
                break;
            }
            count *= 2;
        }
        let result = SeparationWitness {
            field: f,
            wk_nonzero: !report.is_zero,
            wk_max: report.max_abs_coefficient.to_f64().unwrap_or(f64::INFINITY),
            witness,
            field_draws: draw + 1,
            point_rounds: rounds,
        };
        if result.separated() {
            return Ok(result);
        }
        last = Some(result);
    }
    Ok(last.expect("at least one draw"))
}

fn field_scale(f: &SymField) -> f64 {
    let mut s = 0.0f64;
    for (_, g) in f.iter() {
        s = s.max(g.max_abs_coefficient().to_f64().unwrap_or(f64::INFINITY));
    }
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

fn ts_points(n: usize, seed: u64, count: usize) -> Vec<TSPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_ts_point(&mut rng, n)).collect()
}

fn phase_points(n: usize, seed: u64, count: usize) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_phase_point(&mut rng, n))
        .collect()
}

fn report_residual(r: &OperatorReport) -> Residual {
    Residual {
        max_abs: r.max_abs_coefficient.to_f64().unwrap_or(f64::INFINITY),
        exact_zero: Some(r.is_zero),
    }
}

fn exact_residual(d: &ExactReal) -> Residual {
    Residual {
        max_abs: d.to_f64().abs(),
        exact_zero: Some(d.is_zero()),
    }
}

fn relative(a: f64, b: f64, scale: f64) -> f64 {
    let diff = (a - b).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / b.abs().max(scale).max(f64::MIN_POSITIVE)
}

/// Membership of `W^k` kernel and of the moment-stack kernel, on potential
/// fields (both must hold) and on random fields (both must fail).
pub fn suite_kernel(cfg: &SuiteConfig) -> Result<SuiteResult> {
    cfg.validate()?;
    let (n, m, k) = (cfg.n, cfg.m, cfg.k);
    let tol = cfg.tol_float;
    let mutation = cfg.mutation.as_ref();
    let lines = ts_points(n, cfg.sub_seed(11), cfg.samples);
    let mut records = Vec::new();

    if k < m {
        let (_, pf) = generate_potential(n, m, k, cfg.degree, cfg.sub_seed(1))?;
        let wk = generalized_saint_venant_mutated(&pf, k, mutation)?;
        records.push(CheckRecord::zero(
            KERNEL,
            "potential.wk-zero",
            "theorem/kernel-equivalence",
            report_residual(&OperatorReport::of_bisym(&wk)),
            tol,
        ));
        let scale = field_scale(&pf);
        let mut float_max = 0.0f64;
        let mut exact = Residual::exact_zero();
        for pt in &lines {
            for q in 0..=k {
                float_max = float_max.max(transform_i(&pf, q, pt)?.abs() / scale);
                exact = exact.merge(exact_residual(&transform_i_exact(&pf, q, pt)?));
            }
        }
        records.push(CheckRecord::zero(
            KERNEL,
            "potential.stack-float",
            "moment/moment-stack",
            Residual::float(float_max),
            tol,
        ));
        let mut rec = CheckRecord::zero(
            KERNEL,
            "potential.stack-exact",
            "theorem/potential-characterization",
            exact,
            tol,
        );
        if k + 1 > n {
            rec = rec.with_detail("k exceeds n − 1; only the potential ⇒ kernel direction applies");
        }
        records.push(rec);
    }

    let w = separation_witness(n, m, k, cfg.degree, cfg.sub_seed(2), cfg.samples)?;
    records.push(CheckRecord::nonzero(
        KERNEL,
        "separation.wk-nonzero",
        "operator/generalized-saint-venant",
        Residual {
            max_abs: w.wk_max,
            exact_zero: Some(!w.wk_nonzero),
        },
        0.0,
    ));
    records.push(
        CheckRecord::nonzero(
            KERNEL,
            "separation.stack-witness",
            "theorem/kernel-equivalence",
            Residual::float(w.witness),
            WITNESS_THRESHOLD,
        )
        .with_detail(format!(
            "field draws {}, sampling rounds {}",
            w.field_draws, w.point_rounds
        )),
    );

    if let Some(f) = &cfg.field {
        let wk_zero = generalized_saint_venant_mutated(f, k, mutation)?.is_zero();
        let scale = field_scale(f);
        let mut stack = 0.0f64;
        for pt in &lines {
            for q in 0..=k {
                stack = stack.max(transform_i(f, q, pt)?.abs() / scale);
            }
        }
        let stack_zero = stack <= tol;
        records.push(
            CheckRecord::zero(
                KERNEL,
                "field.kernel-agreement",
                "theorem/kernel-equivalence",
                Residual {
                    max_abs: stack,
                    exact_zero: Some(wk_zero == stack_zero),
                },
                tol,
            )
            .with_detail(format!(
                "W^k f = 0: {wk_zero}; stack below tolerance: {stack_zero}"
            )),
        );
    }

    Ok(SuiteResult::new(KERNEL, records))
}

type Task<'a> = Box<dyn Fn() -> Result<Vec<CheckRecord>> + Send + Sync + 'a>;

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    f: SymField,
    points: Vec<PhasePoint>,
    lines: Vec<TSPoint>,
    mutation: Option<&'a Mutation>,
}

impl Ctx<'_> {
    fn zero(&self, id: &str, anchor: &str, r: Residual) -> CheckRecord {
        CheckRecord::zero(IDENTITIES, id, anchor, r, self.cfg.tol_float)
    }
}

/// Every operator and transform identity on one random (or loaded) field.
pub fn suite_identities(cfg: &SuiteConfig) -> Result<SuiteResult> {
    cfg.validate()?;
    let ctx = Ctx {
        cfg,
        f: cfg.field()?,
        points: phase_points(cfg.n, cfg.sub_seed(21), cfg.samples),
        lines: ts_points(cfg.n, cfg.sub_seed(22), cfg.samples),
        mutation: cfg.mutation.as_ref(),
    };
    let c = &ctx;
    let mut tasks: Vec<Task> = vec![
        Box::new(move || check_conversion(c)),
        Box::new(move || check_ts_restriction(c)),
        Box::new(move || check_homogeneity(c)),
        Box::new(move || check_translation(c)),
        Box::new(move || check_euler(c)),
        Box::new(move || check_gradient_transform(c)),
        Box::new(move || check_generalized_orders(c)),
        Box::new(move || check_restriction_relation(c)),
        Box::new(move || check_inner_derivative(c)),
        Box::new(move || check_symmetrize(c)),
        Box::new(move || check_restriction(c)),
        Box::new(move || check_john_operator(c)),
        Box::new(move || check_restriction_contraction(c)),
        Box::new(move || check_decay(c)),
    ];
    if cfg.m >= 1 {
        tasks.push(Box::new(move || check_r_w(c)));
        tasks.push(Box::new(move || check_block_symmetrization(c)));
    }
    for r in 0..=cfg.m {
        tasks.push(Box::new(move || check_recovery(c, r)));
    }
    if cfg.k < cfg.m {
        tasks.push(Box::new(move || check_john_power(c)));
        tasks.push(Box::new(move || check_kernel_lemma(c)));
    }
    let results: Vec<Result<Vec<CheckRecord>>> = tasks.par_iter().map(|t| t()).collect();
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    Ok(SuiteResult::new(IDENTITIES, records))
}

fn check_conversion(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let m = c.f.rank();
    let mut worst = 0.0f64;
    for pt in &c.points {
        let line = TSPoint::from_phase_point(pt)?;
        let (x, xi) = (pt.x_f64(), pt.xi_f64());
        let values: Vec<f64> = (0..=3)
            .map(|q| transform_i(&c.f, q, &line))
            .collect::<Result<_>>()?;
        for q in 0..=3 {
            let converted = convert_i_to_j(&values, m, q, &x, &xi)?;
            let scale = convert_i_to_j_magnitude(&values, m, q, &x, &xi)?;
            let direct = transform_j(&c.f, q, pt)?.to_f64();
            worst = worst.max(relative(converted, direct, scale));
        }
    }
    Ok(vec![c.zero(
        "transform.i-to-j",
        "moment/i-to-j-conversion",
        Residual::float(worst),
    )])
}

fn check_ts_restriction(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let scale = field_scale(&c.f);
    let mut worst = 0.0f64;
    for line in &c.lines {
        for q in 0..=3 {
            let float = transform_i(&c.f, q, line)?;
            let exact = transform_i_exact(&c.f, q, line)?;
            let r = if exact.is_zero() {
                float.abs() / scale
            } else {
                relative(float, exact.to_f64(), 0.0)
            };
            worst = worst.max(r);
        }
    }
    Ok(vec![c.zero(
        "transform.ts-restriction",
        "moment/extended-transform",
        Residual::float(worst),
    )])
}

fn check_homogeneity(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let m = c.f.rank();
    let mut res = Residual::exact_zero();
    for pt in &c.points {
        for lambda in [int(2), rat(1, 3)] {
            let scaled = pt.scaled_direction(&lambda)?;
            for q in 0..=3 {
                let lhs = transform_j(&c.f, q, &scaled)?;
                let rhs = transform_j(&c.f, q, pt)?.scale(&homogeneity_factor(&lambda, m, q));
                res = res.merge(exact_residual(&lhs.try_sub(&rhs)?));
            }
        }
    }
    Ok(vec![c.zero(
        "transform.homogeneity",
        "moment/homogeneity",
        res,
    )])
}

fn check_translation(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let mut shift = Residual::exact_zero();
    let mut along = Residual::exact_zero();
    let mut parts = Residual::exact_zero();
    for pt in &c.points {
        let base = transform_j(&c.f, 0, pt)?;
        for s in [int(1), rat(-2, 3)] {
            let moved = transform_j(&c.f, 0, &pt.shifted(&s))?;
            shift = shift.merge(exact_residual(&moved.try_sub(&base)?));
        }
        along = along.merge(translation_check(&c.f, 0, pt)?);
        for q in 1..=3 {
            parts = parts.merge(translation_check(&c.f, q, pt)?);
        }
    }
    Ok(vec![
        c.zero(
            "transform.translation",
            "moment/translation-invariance",
            shift,
        ),
        c.zero(
            "transform.x-derivative-along-line",
            "moment/translation-invariance",
            along,
        ),
        c.zero(
            "transform.integration-by-parts",
            "moment/integration-by-parts",
            parts,
        ),
    ])
}

fn check_euler(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let mut fields = vec![c.f.clone()];
    if c.f.rank() >= 1 {
        fields.push(restrict(&c.f, &IndexTuple::new(&[1], c.f.n())?)?);
    }
    let mut res = Residual::exact_zero();
    for g in &fields {
        for q in 0..=3 {
            let e = MomentExpression::atom(q, g.clone());
            for pt in &c.points {
                res = res.merge(euler_check(&e, atom_degree(g.rank(), q), pt)?);
            }
        }
    }
    Ok(vec![c.zero("transform.euler", "moment/homogeneity", res)])
}

fn check_gradient_transform(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let phi = random_field(c.cfg.n, 0, c.cfg.degree, c.cfg.sub_seed(31))?;
    let grad = inner_derivative(&phi)?;
    let scale = field_scale(&grad);
    let mut worst = 0.0f64;
    for line in &c.lines {
        worst = worst.max(transform_i(&grad, 0, line)?.abs() / scale);
    }
    Ok(vec![c.zero(
        "transform.gradient-vanishes",
        "moment/ray-transform",
        Residual::float(worst),
    )])
}

fn check_r_w(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let w = saint_venant(&c.f)?;
    let r = operator_r(&c.f)?;
    let forward = bisym_difference_report(&w, &w_from_r(&r)?)?;
    let back = OperatorReport::of_raw(&r_from_w(&w)?.sub(&r)?);
    let mut anti = Residual::exact_zero();
    for s in 0..c.f.rank() {
        let mut perm: Vec<usize> = (0..r.rank()).collect();
        perm.swap(2 * s, 2 * s + 1);
        let sum = r.add(&r.permute_positions(&perm)?)?;
        anti = anti.merge(report_residual(&OperatorReport::of_raw(&sum)));
    }
    Ok(vec![
        c.zero(
            "operator.saint-venant-from-r",
            "operator/saint-venant",
            report_residual(&forward),
        ),
        c.zero(
            "operator.r-from-saint-venant",
            "operator/r-w-relations",
            report_residual(&back),
        ),
        c.zero("operator.r-antisymmetry", "operator/alternation-r", anti),
    ])
}

fn check_generalized_orders(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let m = c.f.rank();
    let mut out = Vec::new();
    if m >= 1 {
        let w0 = generalized_saint_venant_mutated(&c.f, 0, c.mutation)?;
        let d = bisym_difference_report(&w0, &saint_venant(&c.f)?)?;
        out.push(c.zero(
            "operator.wk-order-zero",
            "operator/generalized-saint-venant",
            report_residual(&d),
        ));
    }
    let wm = generalized_saint_venant_mutated(&c.f, m, c.mutation)?;
    let diff = wm.to_raw().sub(&c.f.to_raw())?;
    out.push(c.zero(
        "operator.wk-order-m",
        "operator/generalized-saint-venant",
        report_residual(&OperatorReport::of_raw(&diff)),
    ));
    Ok(out)
}

fn check_restriction_relation(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let r = restriction_relation_report(&c.f, c.cfg.k, c.mutation)?;
    Ok(vec![c.zero(
        "operator.restriction-relation",
        "operator/restricted-saint-venant-relation",
        report_residual(&r),
    )])
}

/// `⟨d f, ξ^{m+1}⟩ = Σ_j ξ^j ∂_j ⟨f, ξ^m⟩`, compared as exact values at
/// the sample points.
fn check_inner_derivative(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let m = c.f.rank();
    let df = inner_derivative(&c.f)?;
    let mut res = Residual::exact_zero();
    for pt in &c.points {
        let xi = pt.xi();
        let lhs = contract_with_power(&df, xi, m + 1)?;
        let inner = contract_with_power(&c.f, xi, m)?;
        let lhs = lhs.get(&[]).map(|g| g.evaluate_exact(pt.x())).transpose()?;
        let mut acc = Rational::zero();
        if let Some(g) = inner.get(&[]) {
            for (j, v) in xi.iter().enumerate() {
                acc += v * g.derive(j + 1)?.evaluate_exact(pt.x())?.0;
            }
        }
        let lhs = lhs.map(|(p, _)| p).unwrap_or_else(Rational::zero);
        let d = lhs - acc;
        res = res.merge(Residual {
            max_abs: d.abs().to_f64().unwrap_or(f64::INFINITY),
            exact_zero: Some(d.is_zero()),
        });
    }
    Ok(vec![c.zero(
        "operator.inner-derivative-directional",
        "operator/inner-derivative",
        res,
    )])
}

fn random_raw(n: usize, rank: usize, seed: u64) -> Result<RawTensor<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = RawTensor::new(n, rank)?;
    for key in crate::symtensor::all_tuples(n, rank) {
        let v = rat(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        t.set(&key, v)?;
    }
    Ok(t)
}

fn check_symmetrize(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let m = c.f.rank().max(1);
    let t = random_raw(c.cfg.n, m, c.cfg.sub_seed(41))?;
    let all: Vec<usize> = (0..m).collect();
    let once = symmetrize(&t, &all)?;
    let twice = symmetrize(&once, &all)?;
    let d = twice.sub(&once)?;
    let mut res = rational_residual(&d);
    if !once.is_symmetric_in(&all) {
        res = res.merge(Residual {
            max_abs: f64::INFINITY,
            exact_zero: Some(false),
        });
    }
    let fixed = symmetrize(&c.f.to_raw(), &(0..c.f.rank()).collect::<Vec<_>>())?;
    let d2 = OperatorReport::of_raw(&fixed.sub(&c.f.to_raw())?);
    Ok(vec![c.zero(
        "tensor.symmetrize-projector",
        "tensor/symmetrization",
        res.merge(report_residual(&d2)),
    )])
}

fn rational_residual(t: &RawTensor<Rational>) -> Residual {
    let max = t
        .iter()
        .map(|(_, v)| v.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    Residual {
        max_abs: max.to_f64().unwrap_or(f64::INFINITY),
        exact_zero: Some(t.is_zero()),
    }
}

fn check_restriction(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let (n, m) = (c.f.n(), c.f.rank());
    let mut bad = 0usize;
    for key in canonical_tuples(n, m) {
        for split in 0..=m {
            let (head, tail) = key.split_at(split);
            let h = restrict(&c.f, &IndexTuple::new(head, n)?)?;
            if h.get(tail) != c.f.get(&key) {
                bad += 1;
            }
        }
    }
    if m >= 2 {
        for i in 1..=n {
            for j in 1..=n {
                let once = restrict(&c.f, &IndexTuple::new(&[i], n)?)?;
                let twice = restrict(&once, &IndexTuple::new(&[j], n)?)?;
                if twice != restrict(&c.f, &IndexTuple::new(&[i, j], n)?)? {
                    bad += 1;
                }
            }
        }
    }
    Ok(vec![c.zero(
        "tensor.restriction",
        "tensor/index-restriction",
        Residual {
            max_abs: bad as f64,
            exact_zero: Some(bad == 0),
        },
    )])
}

fn check_block_symmetrization(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let (n, m, k) = (c.cfg.n, c.cfg.m, c.cfg.k);
    let t = random_raw(n, m, c.cfg.sub_seed(51))?;
    let front: Vec<usize> = (0..m - k).collect();
    let back: Vec<usize> = (m - k..m).collect();
    let t = symmetrize(&symmetrize(&t, &front)?, &back)?;
    let res = crate::moments::symmetrization_relation_check(&t, k)?;
    Ok(vec![c.zero(
        "tensor.block-symmetrization",
        "tensor/block-symmetrization-relation",
        res,
    )])
}

fn check_recovery(c: &Ctx, r: usize) -> Result<Vec<CheckRecord>> {
    let n = c.f.n();
    let mut res = Residual::exact_zero();
    for fixed in canonical_tuples(n, r) {
        let fixed = IndexTuple::new(&fixed, n)?;
        let expr = recover_restricted_expression(&c.f, &fixed, c.mutation)?;
        let h = restrict(&c.f, &fixed)?;
        for pt in &c.points {
            let d = expr.evaluate_coef(pt)? - transform_j_coef(&h, 0, pt)?;
            res = res.merge(Residual::from_coef(&d, pt.factor().to_f64()));
        }
    }
    Ok(vec![c.zero(
        &format!("moment.recovery.r{r}"),
        "moment/restricted-transform-recovery",
        res,
    )])
}

fn check_john_power(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let (n, m, k) = (c.cfg.n, c.f.rank(), c.cfg.k);
    let constant = john_power_constant(m - k);
    let mut power = Residual::exact_zero();
    let mut collapsed = Residual::exact_zero();
    for fixed in canonical_tuples(n, k) {
        let jp = JohnPowers::new(&c.f, k, &IndexTuple::new(&fixed, n)?)?;
        for pt in &c.points {
            let (a, b) = jp.residuals(pt, &constant)?;
            power = power.merge(a);
            collapsed = collapsed.merge(b);
        }
    }
    Ok(vec![
        c.zero("moment.john-power", "moment/john-power-identity", power),
        c.zero(
            "moment.collapsed-derivative",
            "moment/collapsed-derivative-identity",
            collapsed,
        ),
    ])
}

fn check_john_operator(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let n = c.f.n();
    let scalar = random_field(n, 0, c.cfg.degree, c.cfg.sub_seed(61))?;
    let on_scalar = MomentExpression::atom(0, scalar);
    let on_field = MomentExpression::atom(1, c.f.clone());
    let mut annihilates = Residual::exact_zero();
    let mut anti = Residual::exact_zero();
    for p in 1..=n {
        for q in 1..=n {
            if p == q {
                continue;
            }
            let a = on_scalar.john(p, q)?;
            let sum = on_field.john(p, q)?.try_add(&on_field.john(q, p)?)?;
            for pt in &c.points {
                let factor = pt.factor().to_f64();
                annihilates = annihilates.merge(Residual::from_coef(&a.evaluate_coef(pt)?, factor));
                anti = anti.merge(Residual::from_coef(&sum.evaluate_coef(pt)?, factor));
            }
        }
    }
    Ok(vec![
        c.zero("moment.john-scalar", "moment/john-operator", annihilates),
        c.zero("moment.john-antisymmetry", "moment/john-operator", anti),
    ])
}

fn check_restriction_contraction(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let (n, k) = (c.f.n(), c.cfg.k);
    let mut res = Residual::exact_zero();
    for r in 0..=k {
        for fixed in canonical_tuples(n, r) {
            let fixed = IndexTuple::new(&fixed, n)?;
            for pt in &c.points {
                res = res.merge(restriction_contraction_check(&c.f, k, &fixed, pt)?);
            }
        }
    }
    Ok(vec![c.zero(
        "moment.restriction-contraction",
        "moment/restriction-contraction",
        res,
    )])
}

fn check_kernel_lemma(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let cfg = c.cfg;
    let (_, pf) = generate_potential(cfg.n, cfg.m, cfg.k, cfg.degree, cfg.sub_seed(1))?;
    let top_op = KernelDerivative::new(&pf, cfg.k)?;
    let lower_ops: Vec<KernelDerivative> = (0..cfg.k)
        .map(|r| KernelDerivative::new(&pf, r))
        .collect::<Result<_>>()?;
    let mut top = Residual::exact_zero();
    let mut lower = Residual::exact_zero();
    for pt in &c.points {
        top = top.merge(top_op.residual(pt)?);
        for op in &lower_ops {
            lower = lower.merge(op.residual(pt)?);
        }
    }
    let mut out = vec![c.zero("moment.kernel-lemma", "moment/kernel-derivative-lemma", top)];
    if cfg.k > 0 {
        out.push(c.zero(
            "moment.kernel-lemma-lower",
            "moment/higher-order-kernel-lemma",
            lower,
        ));
    }
    Ok(out)
}

/// Growth of `|∂_x^m J^q f|·(1+r)^4` as the line is pushed out to distance
/// `r` from the origin, relative to its first value; zero when it
/// decreases throughout.
fn check_decay(c: &Ctx) -> Result<Vec<CheckRecord>> {
    let distances = [4.0, 6.0, 8.0, 10.0, 12.0];
    let dirs = vec![1; c.f.rank()];
    let mut worst = 0.0f64;
    let mut used = 0;
    for line in c.lines.iter().take(5) {
        let base = line.exact_point().expect("sampled lines are exact");
        let norm = line.x().iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        used += 1;
        let radii: Vec<Rational> = distances
            .iter()
            .map(|d| rat((d / norm * 64.0).round() as i64, 64))
            .collect();
        for q in 0..=1 {
            let profile = decay_profile(&c.f, q, &dirs, base, &radii)?;
            let scaled: Vec<f64> = profile
                .radii
                .iter()
                .zip(&profile.magnitudes)
                .map(|(s, v)| v * (1.0 + s * norm).powi(4))
                .collect();
            let first = scaled[0].max(f64::MIN_POSITIVE);
            for w in scaled.windows(2) {
                worst = worst.max((w[1] - w[0]).max(0.0) / first);
            }
        }
    }
    Ok(vec![c
        .zero(
            "moment.decay",
            "moment/decay-diagnostic",
            Residual::float(worst),
        )
        .with_detail(format!("{used} lines"))])
}
