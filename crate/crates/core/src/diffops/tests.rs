use super::*;
use crate::polygauss::random_field;
use crate::polygauss::rational::int;
use crate::polygauss::Polynomial;
use crate::symtensor::factorial;
use proptest::prelude::*;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for slot in 0..=p.len() {
            let mut v = p.clone();
            v.insert(slot, k - 1);
            out.push(v);
        }
    }
    out
}

fn component(f: &SymField, idx: &[usize]) -> PolyGauss {
    f.get(idx)
        .cloned()
        .unwrap_or_else(|| PolyGauss::zero(f.n()))
}

/// `W^k f` straight from the definition: full permutation averages over
/// both index groups, derivatives taken with `derive_many`.
fn brute_wk(f: &SymField, k: usize) -> BiSymField {
    let n = f.n();
    let m = f.rank();
    let order = m - k;
    let mut out = BiSymStorage::new(n, order, m).unwrap();
    let perms_p = permutations(order);
    let perms_q = permutations(m);
    let norm = Rational::new(1.into(), ((factorial(order) * factorial(m)) as i64).into());
    for p_key in canonical_tuples(n, order) {
        for q_key in canonical_tuples(n, m) {
            let mut acc = PolyGauss::zero(n);
            for pp in &perms_p {
                let a: Vec<usize> = pp.iter().map(|&s| p_key[s]).collect();
                for qp in &perms_q {
                    let b: Vec<usize> = qp.iter().map(|&s| q_key[s]).collect();
                    let (q, fixed) = b.split_at(order);
                    for ell in 0..=order {
                        let sign = if ell % 2 == 0 { 1 } else { -1 };
                        let w = int(sign * binomial(order, ell) as i64);
                        let mut idx = fixed.to_vec();
                        idx.extend_from_slice(&a[..order - ell]);
                        idx.extend_from_slice(&q[..ell]);
                        let mut dirs = a[order - ell..].to_vec();
                        dirs.extend_from_slice(&q[ell..]);
                        let d = component(f, &idx).derive_many(&dirs).unwrap();
                        acc = acc.try_add(&d.scale(&w)).unwrap();
                    }
                }
            }
            out.set(&p_key, &q_key, acc.scale(&norm)).unwrap();
        }
    }
    out
}

fn assert_bisym_eq(a: &BiSymField, b: &BiSymField) {
    let d = bisym_difference_report(a, b).unwrap();
    assert!(d.is_zero, "max |Δ| = {}", d.max_abs_coefficient);
}

#[test]
fn saint_venant_rank_one_is_curl() {
    let f = random_field(3, 1, 2, 11).unwrap();
    let w = saint_venant(&f).unwrap();
    for i in 1..=3 {
        for j in 1..=3 {
            let expect = component(&f, &[i])
                .derive(j)
                .unwrap()
                .try_add(&component(&f, &[j]).derive(i).unwrap().scale(&int(-1)))
                .unwrap();
            let got = w
                .get(&[i], &[j])
                .cloned()
                .unwrap_or_else(|| PolyGauss::zero(3));
            assert_eq!(got, expect, "({i},{j})");
        }
    }
}

#[test]
fn saint_venant_planar_example() {
    // f₁ = x₂ e^{−|x|²}, f₂ = 0
    let mut f = SymStorage::new(2, 1).unwrap();
    f.set(&[1], PolyGauss::new(Polynomial::variable(2, 2).unwrap()))
        .unwrap();
    let w = saint_venant(&f).unwrap();
    let mut expect = Polynomial::constant(2, int(1));
    expect.add_term(vec![0, 2], int(-2)).unwrap();
    assert_eq!(w.get(&[1], &[2]).unwrap().poly(), &expect);
    assert_eq!(w.get(&[2], &[1]).unwrap().poly(), &expect.scale(&int(-1)));
}

#[test]
fn operators_reject_scalars_and_large_k() {
    let s = random_field(2, 0, 1, 1).unwrap();
    assert!(saint_venant(&s).is_err());
    assert!(operator_r(&s).is_err());
    let f = random_field(2, 2, 1, 1).unwrap();
    assert!(generalized_saint_venant(&f, 3).is_err());
    assert!(restriction_relation_report(&f, 3, None).is_err());
}

#[test]
fn generalized_matches_definition() {
    for (n, m) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
        let f = random_field(n, m, 2, (10 * n + m) as u64).unwrap();
        for k in 0..=m {
            assert_bisym_eq(&generalized_saint_venant(&f, k).unwrap(), &brute_wk(&f, k));
        }
    }
}

#[test]
fn generalized_endpoints() {
    let f = random_field(3, 2, 2, 4).unwrap();
    assert_bisym_eq(
        &generalized_saint_venant(&f, 0).unwrap(),
        &saint_venant(&f).unwrap(),
    );
    let top = generalized_saint_venant(&f, 2).unwrap();
    assert_eq!(top.ranks(), (0, 2));
    for (key, value) in f.iter() {
        assert_eq!(top.get(&[], key), Some(value));
    }
    assert_eq!(top.nnz(), f.nnz());
}

#[test]
fn potentials_are_annihilated() {
    let cases = [
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
        (3, 3),
        (4, 1),
        (4, 2),
    ];
    for (n, m) in cases {
        for k in 0..m {
            let v = random_field(n, m - k - 1, 2, (n * 100 + m * 10 + k) as u64).unwrap();
            let f = iterate_d(&v, k + 1).unwrap();
            assert_eq!(f.rank(), m);
            let w = generalized_saint_venant(&f, k).unwrap();
            assert!(w.is_zero(), "n={n} m={m} k={k}");
        }
    }
}

#[test]
fn generic_fields_are_not_annihilated() {
    for (n, m) in [(2, 1), (2, 2), (3, 2)] {
        let f = random_field(n, m, 2, 77).unwrap();
        for k in 0..m {
            assert!(!generalized_saint_venant(&f, k).unwrap().is_zero());
        }
    }
}

#[test]
fn inner_derivative_examples() {
    // d(x₁x₂ e^{−|x|²}) on a scalar: the gradient
    let mut u = SymStorage::new(2, 0).unwrap();
    u.set(
        &[],
        PolyGauss::new(Polynomial::monomial(2, vec![1, 1], int(1)).unwrap()),
    )
    .unwrap();
    let du = inner_derivative(&u).unwrap();
    for i in 1..=2 {
        assert_eq!(
            du.get(&[i]).unwrap(),
            &u.get(&[]).unwrap().derive(i).unwrap()
        );
    }
    // rank one: (dv)_{12} = (∂₂v₁ + ∂₁v₂)/2
    let v = random_field(2, 1, 2, 3).unwrap();
    let dv = inner_derivative(&v).unwrap();
    let expect = component(&v, &[1])
        .derive(2)
        .unwrap()
        .try_add(&component(&v, &[2]).derive(1).unwrap())
        .unwrap()
        .scale(&Rational::new(1.into(), 2.into()));
    assert_eq!(dv.get(&[1, 2]).unwrap(), &expect);
    assert_eq!(iterate_d(&v, 0).unwrap(), v);
    assert_eq!(iterate_d(&v, 2).unwrap().rank(), 3);
}

#[test]
fn traced_orders_are_m_minus_k() {
    let f = random_field(2, 3, 2, 8).unwrap();
    for k in 0..3 {
        let t = generalized_saint_venant_traced(&f, k, None).unwrap();
        assert_eq!(
            t.derivative_orders.into_iter().collect::<Vec<_>>(),
            vec![3 - k]
        );
    }
}

#[test]
fn r_is_antisymmetric_in_each_pair() {
    let f = random_field(3, 2, 2, 5).unwrap();
    let r = operator_r(&f).unwrap();
    for (a, b) in [(0, 1), (2, 3)] {
        let mut perm: Vec<usize> = (0..4).collect();
        perm.swap(a, b);
        assert!(r
            .add(&r.permute_positions(&perm).unwrap())
            .unwrap()
            .is_zero());
    }
}

#[test]
fn r_and_w_convert_both_ways() {
    for (n, m) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3), (3, 3)] {
        let f = random_field(n, m, 1, (n + 7 * m) as u64).unwrap();
        let r = operator_r(&f).unwrap();
        let w = saint_venant(&f).unwrap();
        assert_bisym_eq(&w_from_r(&r).unwrap(), &w);
        let back = r_from_w(&w).unwrap();
        assert!(back.sub(&r).unwrap().is_zero(), "n={n} m={m}");
    }
    assert_eq!(w_from_r_factor(3), int(8));
    assert_eq!(r_from_w_factor(3), Rational::new(1.into(), 4.into()));
}

#[test]
fn r_kills_potentials() {
    for (n, m) in [(2, 1), (2, 2), (3, 2)] {
        let v = random_field(n, m - 1, 2, 21).unwrap();
        assert!(operator_r(&inner_derivative(&v).unwrap())
            .unwrap()
            .is_zero());
    }
}

#[test]
fn conversions_reject_bad_shapes() {
    let odd = RawTensor::<PolyGauss>::new(2, 3).unwrap();
    assert!(w_from_r(&odd).is_err());
    let uneven = BiSymStorage::<PolyGauss>::new(2, 1, 2).unwrap();
    assert!(r_from_w(&uneven).is_err());
}

#[test]
fn restriction_relation_holds() {
    for (n, m) in [(2, 1), (2, 2), (3, 2), (2, 3), (3, 3)] {
        let f = random_field(n, m, 1, (3 * n + m) as u64).unwrap();
        for k in 0..=m {
            let rep = restriction_relation_report(&f, k, None).unwrap();
            assert!(rep.is_zero, "n={n} m={m} k={k}");
        }
    }
}

#[test]
fn restriction_relation_detects_mutation() {
    let f = random_field(2, 2, 2, 13).unwrap();
    for site in Mutation::all_sites(2, 0) {
        if let Mutation::WkSign { .. } | Mutation::WkBinomial { .. } = site {
            let rep = restriction_relation_report(&f, 0, Some(&site)).unwrap();
            assert!(!rep.is_zero, "{site}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wk_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, c in -3i64..=3, k in 0usize..=2) {
        let f = random_field(2, 2, 1, s1).unwrap();
        let g = random_field(2, 2, 1, s2).unwrap();
        let combo = f.scale(&int(c)).add(&g).unwrap();
        let lhs = generalized_saint_venant(&combo, k).unwrap();
        let wf = generalized_saint_venant(&f, k).unwrap();
        let wg = generalized_saint_venant(&g, k).unwrap();
        let rhs = wf.map(|v| v.scale(&int(c))).to_raw().add(&wg.to_raw()).unwrap();
        prop_assert!(lhs.to_raw().sub(&rhs).unwrap().is_zero());
    }
}
