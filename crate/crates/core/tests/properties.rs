mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use sperkit_core::blowup::{is_wrt, transform_exponent, transform_relation, transform_value};
use sperkit_core::rational::{rat, ratio, Rational};
use sperkit_core::relreduce::{reduce_relations, RelationSystem};
use sperkit_core::resolve::{all_minimal_centers, choose_center, reduce_pair, resolve_binomial, DEFAULT_NODE_CAP};
use sperkit_core::sper::{cmp_abs, dominant_term, sign_at, AbsOrdering, Dominant, MonomialPoint};
use sperkit_core::witness::{build_witness, cone_member, truncate, ConeSystem};
use sperkit_core::{
    apply_sequence, divides, lex_cmp, mono_value, poly_normalize, rat_rank, BlowupSeq, ExponentVec, LexVec, Poly,
    Relation, Term, Transform, ValVec,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn lexvec(depth: usize) -> impl Strategy<Value = LexVec> {
    prop::collection::vec(rational(), depth).prop_map(|e| LexVec::new(e).unwrap())
}

fn same_depth<const K: usize>() -> impl Strategy<Value = [LexVec; K]> {
    (1usize..=4).prop_flat_map(|m| prop::array::uniform::<_, K>(lexvec(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lex_trichotomy([u, v] in same_depth::<2>()) {
        let uv = lex_cmp(&u, &v).unwrap();
        prop_assert_eq!(uv, lex_cmp(&v, &u).unwrap().reverse());
        prop_assert_eq!(uv == Ordering::Equal, u == v);
    }

    #[test]
    fn lex_order_is_translation_invariant([u, v, w] in same_depth::<3>()) {
        let lhs = lex_cmp(&u.checked_add(&w).unwrap(), &v.checked_add(&w).unwrap()).unwrap();
        prop_assert_eq!(lhs, lex_cmp(&u, &v).unwrap());
    }

    #[test]
    fn rat_rank_matches_subset_oracle(m in 1usize..=4, k in 0usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        // small entries make dependencies common
        let vecs: Vec<LexVec> = (0..k)
            .map(|_| LexVec::new((0..m).map(|_| small_rational(&mut r, -2, 2, 2)).collect()).unwrap())
            .collect();
        let raw: Vec<Vec<Rational>> = vecs.iter().map(|v| v.entries().to_vec()).collect();
        prop_assert_eq!(rat_rank(&vecs).unwrap(), naive_rank(&raw));
    }

    #[test]
    fn rat_rank_ignores_order_and_scaling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=4);
        let mut vecs: Vec<LexVec> =
            (0..r.gen_range(1..=5)).map(|_| LexVec::new((0..m).map(|_| small_rational(&mut r, -3, 3, 2)).collect()).unwrap()).collect();
        let rank = rat_rank(&vecs).unwrap();
        vecs.reverse();
        let i = r.gen_range(0..vecs.len());
        let mut c = small_rational(&mut r, -5, 5, 3);
        if c == rat(0) {
            c = rat(7);
        }
        vecs[i] = LexVec::new(vecs[i].entries().iter().map(|x| x * &c).collect()).unwrap();
        prop_assert_eq!(rat_rank(&vecs).unwrap(), rank);
    }

    #[test]
    fn normalize_is_idempotent_and_order_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let mut raw: Vec<(Rational, ExponentVec)> =
            (0..r.gen_range(0..8)).map(|_| (small_rational(&mut r, -3, 3, 2), exponents(&mut r, n, 2))).collect();
        let f = poly_normalize(n, raw.clone()).unwrap();
        let again = poly_normalize(n, f.terms().iter().map(|t| (t.coeff.clone(), t.exp.clone()))).unwrap();
        prop_assert_eq!(&again, &f);
        raw.reverse();
        prop_assert_eq!(poly_normalize(n, raw).unwrap(), f);
    }

    #[test]
    fn mono_value_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let a = valvec_upto(&mut r, n, 3);
        let (x, y) = (exponents(&mut r, n, 6), exponents(&mut r, n, 6));
        let sum = mono_value(&x.checked_add(&y).unwrap(), &a).unwrap();
        prop_assert_eq!(sum, mono_value(&x, &a).unwrap().checked_add(&mono_value(&y, &a).unwrap()).unwrap());
    }

    #[test]
    fn divisibility_orders_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let x = exponents(&mut r, n, 4);
        let y = x.checked_add(&exponents(&mut r, n, 2)).unwrap();
        prop_assert!(divides(&x, &y).is_some());
        let a = valvec_upto(&mut r, n, 3);
        prop_assert!(lex_cmp(&mono_value(&x, &a).unwrap(), &mono_value(&y, &a).unwrap()).unwrap().is_le());
    }

    #[test]
    fn exponent_transform_is_unimodular(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=6);
        let s = step(&mut r, n);
        // column k is the image of the k-th unit vector
        let cols: Vec<ExponentVec> = (0..n)
            .map(|k| transform_exponent(&s, &ExponentVec((0..n).map(|i| u32::from(i == k)).collect())).unwrap())
            .collect();
        let m: Vec<Vec<i64>> = (0..n).map(|i| cols.iter().map(|c| i64::from(c.0[i])).collect()).collect();
        prop_assert_eq!(det(&m).abs(), 1);
    }

    #[test]
    fn relations_are_transported(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=5);
        let a = valvec(&mut r, n, 1);
        let s = step_wrt(&mut r, &a);
        let a2 = transform_value(&s, &a).unwrap();
        // a relation satisfied by a: any integer vector orthogonal to it
        let first: Vec<Rational> = a.values().iter().map(|v| v.entries()[0].clone()).collect();
        let basis = kernel(&[first], n);
        let coeffs: Vec<Rational> = basis.iter().map(|_| rat(r.gen_range(-3..=3))).collect();
        let theta: Vec<Rational> = (0..n).map(|i| basis.iter().zip(&coeffs).map(|(b, c)| &b[i] * c).sum()).collect();
        let holds = |t: &[Rational], v: &ValVec| v.values().iter().zip(t).map(|(x, c)| &x.entries()[0] * c).sum::<Rational>() == rat(0);
        prop_assert!(holds(&theta, &a));
        let t2 = transform_relation(&s, &Relation(theta.clone())).unwrap();
        prop_assert!(holds(&t2.0, &a2));
        // and a relation not satisfied stays unsatisfied
        let mut off = theta;
        off[0] += rat(1);
        let off2 = transform_relation(&s, &Relation(off.clone())).unwrap();
        prop_assert_eq!(holds(&off, &a), holds(&off2.0, &a2));
    }

    #[test]
    fn trees_never_touch_common_zero_coordinates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let q = r.gen_range(0..n);
        let mut alpha = exponents(&mut r, n, 4);
        let mut gamma = exponents(&mut r, n, 4);
        alpha.0[q] = 0;
        gamma.0[q] = 0;
        let t = resolve_binomial(&alpha, &gamma, DEFAULT_NODE_CAP).unwrap();
        for leaf in t.leaf_paths() {
            prop_assert!(leaf.seq.is_independent_of(q));
        }
    }

    #[test]
    fn greedy_center_is_among_minimal_centers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=5);
        let st = reduce_pair(&exponents(&mut r, n, 6), &exponents(&mut r, n, 6)).unwrap();
        prop_assume!(st.divisibility().is_none());
        let all = all_minimal_centers(&st).unwrap();
        prop_assert!(all.contains(&choose_center(&st).unwrap()));
    }

    #[test]
    fn cmp_abs_agrees_with_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let p = MonomialPoint::new(valvec_upto(&mut r, n, 3), signs(&mut r, n), false).unwrap();
        let t1 = Term::new(small_rational(&mut r, 1, 5, 2), exponents(&mut r, n, 3));
        let t2 = Term::new(small_rational(&mut r, -5, -1, 2), exponents(&mut r, n, 3));
        let v = lex_cmp(&mono_value(&t1.exp, p.values()).unwrap(), &mono_value(&t2.exp, p.values()).unwrap()).unwrap();
        let c = cmp_abs(&t1, &t2, &p).unwrap();
        match v {
            Ordering::Less => prop_assert_eq!(c, AbsOrdering::Greater),
            Ordering::Greater => prop_assert_eq!(c, AbsOrdering::Less),
            Ordering::Equal => prop_assert!(c == AbsOrdering::Incomparable || t1.exp == t2.exp),
        }
    }

    #[test]
    fn unique_dominant_term_gives_the_sign(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let f = poly(&mut r, n, 6, 4);
        let p = MonomialPoint::new(valvec_upto(&mut r, n, 3), signs(&mut r, n), false).unwrap();
        if let Dominant::Unique(t) = dominant_term(&f, &p).unwrap() {
            prop_assert_eq!(sign_at(&f, &p).unwrap(), p.term_sign(&t).as_i8());
        }
    }

    #[test]
    fn blowups_preserve_monomial_signs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let mut p = MonomialPoint::new(valvec_upto(&mut r, n, 2), signs(&mut r, n), false).unwrap();
        let mut steps = Vec::new();
        let start = p.clone();
        for _ in 0..r.gen_range(1..=4) {
            let s = step_wrt(&mut r, p.values());
            prop_assert!(is_wrt(&s, p.values()).unwrap());
            p = p.transform(&s).unwrap();
            steps.push(s);
        }
        let seq = BlowupSeq::new(steps);
        prop_assert_eq!(apply_sequence(&seq, &start).unwrap(), p.clone());
        let t = Term::new(small_rational(&mut r, -4, 4, 2), exponents(&mut r, n, 4));
        let f = Poly::from_terms(n, [t.clone()]).unwrap();
        let pulled = Poly::from_terms(n, [Term::new(t.coeff.clone(), apply_sequence(&seq, &t.exp).unwrap())]).unwrap();
        prop_assert_eq!(sign_at(&f, &start).unwrap(), sign_at(&pulled, &p).unwrap());
    }

    #[test]
    fn witness_inequalities_are_strict_at_the_base(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let base = independent_point(&mut r, n);
        let polys: Vec<Poly> = (0..r.gen_range(1..=3)).map(|_| poly(&mut r, n, 5, 3)).collect();
        let w = build_witness(&base, &polys, &(0..n).collect::<Vec<_>>()).unwrap();
        for ineq in &w.inequalities {
            let l = mono_value(&ineq.lhs.exp, base.values()).unwrap();
            let rv = mono_value(&ineq.rhs.exp, base.values()).unwrap();
            prop_assert_eq!(lex_cmp(&l, &rv).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn truncation_keeps_first_component_decided_cones(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let a = valvec_upto(&mut r, n, 3);
        let rows = r.gen_range(1..=3);
        let omega = matrix(&mut r, rows, n, -3, 3);
        let first = |row: &Vec<Rational>| row.iter().zip(a.values()).map(|(w, v)| w * &v.entries()[0]).sum::<Rational>();
        prop_assume!(omega.iter().all(|row| first(row) != rat(0)));
        let cone = ConeSystem::strict_only(omega).unwrap();
        prop_assert_eq!(cone_member(&cone, &truncate(&a)).unwrap(), cone_member(&cone, &a).unwrap());
    }

    #[test]
    fn reduction_never_blows_up_zero_columns(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let mut theta = matrix(&mut r, 1, n, -3, 3);
        let q = r.gen_range(0..n);
        theta[0][q] = rat(0);
        prop_assume!(theta[0].iter().any(|x| *x != rat(0)));
        let sys = RelationSystem::new(n, theta).unwrap();
        for c in reduce_relations(&sys, DEFAULT_NODE_CAP).unwrap() {
            prop_assert!(c.seq.is_independent_of(q));
        }
    }

    #[test]
    fn value_vectors_round_trip_through_json(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let a = valvec_upto(&mut r, n, 3);
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<ValVec>(&s).unwrap(), a);
    }
}
