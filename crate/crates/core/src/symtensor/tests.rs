use super::*;
use crate::polygauss::rational::{int, rat};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

/// All permutations of `0..k`, by recursion; independent of the
/// multiset machinery under test.
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

/// σ over `group` by averaging over every permutation of the group.
fn brute_symmetrize(t: &RawTensor<Rational>, group: &[usize]) -> RawTensor<Rational> {
    let perms = permutations(group.len());
    let mut out = RawTensor::new(t.n(), t.rank()).unwrap();
    for key in all_tuples(t.n(), t.rank()) {
        let mut acc = Rational::zero();
        for p in &perms {
            let mut src = key.clone();
            for (slot, &pi) in p.iter().enumerate() {
                src[group[slot]] = key[group[pi]];
            }
            if let Some(v) = t.get(&src) {
                acc += v;
            }
        }
        out.set(&key, acc / int(perms.len() as i64)).unwrap();
    }
    out
}

fn raw_from(n: usize, rank: usize, values: &[i64]) -> RawTensor<Rational> {
    let mut t = RawTensor::new(n, rank).unwrap();
    for (key, v) in all_tuples(n, rank).into_iter().zip(values) {
        t.set(&key, int(*v)).unwrap();
    }
    t
}

#[test]
fn index_tuple_validation() {
    assert!(IndexTuple::new(&[1, 2], 2).is_ok());
    assert!(IndexTuple::new(&[0], 2).is_err());
    assert!(IndexTuple::new(&[3], 2).is_err());
    assert!(IndexTuple::new(&[1], 1).is_err());
    let t = IndexTuple::new(&[3, 1, 2], 3).unwrap();
    assert_eq!(t.canonical().as_slice(), &[1, 2, 3]);
    assert!(t.canonical().is_canonical());
    assert_eq!(t.canonical().canonical(), t.canonical());
    assert_eq!(t.to_string(), "3,1,2");
}

#[test]
fn counting_helpers() {
    assert_eq!(canonical_tuples(3, 2).len(), 6);
    assert_eq!(all_tuples(3, 2).len(), 9);
    assert_eq!(multiplicity(&[1, 1, 2]), 3);
    assert_eq!(distinct_arrangements(&[1, 1, 2]).len(), 3);
    assert_eq!(distinct_arrangements(&[]).len(), 1);
    assert_eq!(binomial(5, 2), 10);
    assert_eq!(binomial(2, 5), 0);
    assert_eq!(factorial(0), 1);
    assert_eq!(factorial(5), 120);
    assert_eq!(sub_multisets(&[1, 1, 2], 2), vec![vec![1, 1], vec![1, 2]]);
}

#[test]
fn symmetrize_two_permutation_average() {
    let mut t = RawTensor::new(2, 2).unwrap();
    t.set(&[1, 2], int(1)).unwrap();
    let s = symmetrize(&t, &[0, 1]).unwrap();
    assert_eq!(s.get(&[1, 2]), Some(&q(1, 2)));
    assert_eq!(s.get(&[2, 1]), Some(&q(1, 2)));
    assert!(s.get(&[1, 1]).is_none());
}

#[test]
fn symmetrize_fixes_symmetric_tensor() {
    let t = raw_from(2, 2, &[3, 5, 5, -1]);
    assert_eq!(symmetrize(&t, &[0, 1]).unwrap(), t);
}

#[test]
fn symmetrize_partial_group_leaves_other_positions() {
    let t = raw_from(2, 3, &[1, 2, 3, 4, 5, 6, 7, 8]);
    let s = symmetrize(&t, &[0, 1]).unwrap();
    for key in all_tuples(2, 3) {
        let swapped = vec![key[1], key[0], key[2]];
        let expect = (t.get(&key).cloned().unwrap_or_default()
            + t.get(&swapped).cloned().unwrap_or_default())
            / int(2);
        assert_eq!(s.get(&key).cloned().unwrap_or_default(), expect, "{key:?}");
    }
}

#[test]
fn symmetrize_rejects_bad_positions() {
    let t = raw_from(2, 2, &[1, 2, 3, 4]);
    assert!(symmetrize(&t, &[0, 2]).is_err());
    assert!(symmetrize(&t, &[1, 1]).is_err());
}

#[test]
fn alternate_definition() {
    let mut t = RawTensor::new(2, 2).unwrap();
    t.set(&[1, 2], int(1)).unwrap();
    let a = alternate(&t, (0, 1)).unwrap();
    assert_eq!(a.get(&[1, 2]), Some(&q(1, 2)));
    assert_eq!(a.get(&[2, 1]), Some(&q(-1, 2)));
    let sym = raw_from(2, 2, &[1, 4, 4, 2]);
    assert!(alternate(&sym, (0, 1)).unwrap().is_zero());
    assert!(alternate(&t, (1, 1)).is_err());
}

#[test]
fn restrict_fixes_leading_indices() {
    let mut f = SymStorage::new(2, 2).unwrap();
    f.set(&[1, 1], int(1)).unwrap();
    f.set(&[1, 2], int(2)).unwrap();
    f.set(&[2, 2], int(3)).unwrap();
    let r = restrict(&f, &IndexTuple::new(&[2], 2).unwrap()).unwrap();
    assert_eq!(r.rank(), 1);
    assert_eq!(r.get(&[1]), Some(&int(2)));
    assert_eq!(r.get(&[2]), Some(&int(3)));
    let full = restrict(&f, &IndexTuple::new(&[2, 1], 2).unwrap()).unwrap();
    assert_eq!(full.get(&[]), Some(&int(2)));
    assert!(restrict(&f, &IndexTuple::new(&[1, 1, 1], 2).unwrap()).is_err());
    assert_eq!(restrict(&f, &IndexTuple::empty()).unwrap(), f);
}

#[test]
fn contraction_with_vector_powers() {
    // f = e1⊗e1 + 2 sym(e1⊗e2); ⟨f, v²⟩ = v1² + 4 v1 v2
    let mut f = SymStorage::new(2, 2).unwrap();
    f.set(&[1, 1], int(1)).unwrap();
    f.set(&[1, 2], int(2)).unwrap();
    let v = [int(3), int(-1)];
    let full = contract_with_power(&f, &v, 2).unwrap();
    assert_eq!(full.get(&[]), Some(&int(9 - 12)));
    let half = contract_with_power(&f, &v, 1).unwrap();
    assert_eq!(half.get(&[1]), Some(&int(3 - 2)));
    assert_eq!(half.get(&[2]), Some(&int(6)));
    assert!(contract_with_power(&f, &v, 3).is_err());
    assert!(contract_with_power(&f, &v[..1], 1).is_err());
}

#[test]
fn sym_storage_lookup_is_permutation_invariant() {
    let mut f = SymStorage::new(3, 3).unwrap();
    f.set(&[3, 1, 2], int(7)).unwrap();
    for arr in distinct_arrangements(&[1, 2, 3]) {
        assert_eq!(f.get(&arr), Some(&int(7)));
    }
    assert_eq!(f.nnz(), 1);
    assert!(f.set(&[4, 1, 1], int(1)).is_err());
    assert!(f.set(&[1, 1], int(1)).is_err());
}

#[test]
fn sym_storage_raw_round_trip() {
    let mut f = SymStorage::new(2, 2).unwrap();
    f.set(&[1, 2], q(1, 3)).unwrap();
    f.set(&[2, 2], int(-2)).unwrap();
    let raw = f.to_raw();
    assert_eq!(raw.get(&[2, 1]), Some(&q(1, 3)));
    assert_eq!(SymStorage::from_raw(&raw).unwrap(), f);
    let mut bad = RawTensor::new(2, 2).unwrap();
    bad.set(&[1, 2], int(1)).unwrap();
    assert!(SymStorage::from_raw(&bad).is_err());
}

#[test]
fn bisym_groups_are_independent() {
    let mut b = BiSymStorage::new(2, 1, 2).unwrap();
    b.set(&[2], &[2, 1], int(5)).unwrap();
    assert_eq!(b.get(&[2], &[1, 2]), Some(&int(5)));
    assert!(b.get(&[1], &[2, 2]).is_none());
    let raw = b.to_raw();
    assert_eq!(raw.get(&[2, 1, 2]), Some(&int(5)));
    assert_eq!(raw.get(&[2, 2, 1]), Some(&int(5)));
    assert!(raw.get(&[1, 2, 2]).is_none());
}

#[test]
fn permute_positions_moves_slots() {
    let t = raw_from(2, 3, &[1, 2, 3, 4, 5, 6, 7, 8]);
    let p = t.permute_positions(&[1, 2, 0]).unwrap();
    for key in all_tuples(2, 3) {
        let src = vec![key[2], key[0], key[1]];
        assert_eq!(p.get(&key), t.get(&src));
    }
    assert!(t.permute_positions(&[0, 0, 1]).is_err());
}

fn small_rank_tensor() -> impl Strategy<Value = RawTensor<Rational>> {
    (2usize..=3, 1usize..=3).prop_flat_map(|(n, rank)| {
        let len = n.pow(rank as u32);
        prop::collection::vec(-5i64..=5, len).prop_map(move |vals| raw_from(n, rank, &vals))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrize_matches_brute_force(t in small_rank_tensor()) {
        let all: Vec<usize> = (0..t.rank()).collect();
        prop_assert_eq!(symmetrize(&t, &all).unwrap(), brute_symmetrize(&t, &all));
        if t.rank() >= 2 {
            prop_assert_eq!(symmetrize(&t, &[0, 1]).unwrap(), brute_symmetrize(&t, &[0, 1]));
        }
    }

    #[test]
    fn symmetrize_is_idempotent_and_symmetric(t in small_rank_tensor()) {
        let all: Vec<usize> = (0..t.rank()).collect();
        let s = symmetrize(&t, &all).unwrap();
        prop_assert!(s.is_symmetric_in(&all));
        prop_assert_eq!(symmetrize(&s, &all).unwrap(), s);
    }

    #[test]
    fn alternation_is_antisymmetric(t in small_rank_tensor()) {
        prop_assume!(t.rank() >= 2);
        let a = alternate(&t, (0, 1)).unwrap();
        let mut perm: Vec<usize> = (0..t.rank()).collect();
        perm.swap(0, 1);
        let swapped = a.permute_positions(&perm).unwrap();
        prop_assert!(a.add(&swapped).unwrap().is_zero());
        prop_assert_eq!(alternate(&a, (0, 1)).unwrap(), a);
    }

    #[test]
    fn canonicalization_is_idempotent(v in prop::collection::vec(1usize..=4, 0..6)) {
        let c = canonical(&v);
        prop_assert!(index_is_sorted(&c));
        prop_assert_eq!(canonical(&c), c.clone());
        prop_assert_eq!(multiplicity(&c) as usize, distinct_arrangements(&c).len());
    }

    #[test]
    fn stored_keys_bounded_by_binomial(n in 2usize..=4, rank in 0usize..=4) {
        let keys = canonical_tuples(n, rank).len() as u64;
        prop_assert_eq!(keys, binomial(n + rank - 1, rank));
    }
}
