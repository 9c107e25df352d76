mod common;

use littlewood::forms::{construct_l, construct_t, random_form, Entries, MultilinearForm};
use littlewood::interp::{
    in_convex_hull, interpolate_exponents, trilinear_family_q, trilinear_report, TrilinearParams,
    Variant,
};
use littlewood::mixednorm::{
    mixed_norm, mixed_norm_exact, predicted_mixed_norm_l, predicted_mixed_norm_t,
    AdmissibilityMode, ExponentVector,
};
use littlewood::opnorm::{operator_norm, operator_norm_full};
use littlewood::rational::{rat, to_f64, Rational};
use num::Zero;
use proptest::prelude::*;

fn dims_strategy(max_arity: usize, max_dim: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=max_dim, 2..=max_arity)
}

fn exponent_strategy(m: usize) -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(8i64..=16, m)
        .prop_map(|ks| ExponentVector::new(ks.into_iter().map(|k| rat(k, 8)).collect()).unwrap())
}

fn form_and_q() -> impl Strategy<Value = (MultilinearForm, ExponentVector)> {
    (dims_strategy(4, 4), any::<u64>()).prop_flat_map(|(dims, seed)| {
        let m = dims.len();
        let form = random_form(&dims, seed, Entries::Range { lo: -5, hi: 5 }).unwrap();
        (Just(form), exponent_strategy(m))
    })
}

fn equality_q(m: usize) -> impl Strategy<Value = ExponentVector> {
    // Reciprocals r_i ∈ [1/2, 1] with Σ r_i = (m+1)/2: start from 1/2 each and
    // distribute the remaining 1/2 in multiples of 1/den.
    (prop::collection::vec(0u32..=20, m), 1i64..=12).prop_filter_map(
        "needs a positive total",
        move |(raw, den)| {
            let total: u32 = raw.iter().sum();
            if total == 0 {
                return None;
            }
            let mut extra: Vec<Rational> = raw
                .iter()
                .map(|&r| rat(r as i64, 2 * total as i64))
                .collect();
            // Snap to the 1/den grid without breaking the total.
            let den = den * 2;
            let mut used = Rational::zero();
            for x in extra.iter_mut().take(m - 1) {
                *x = (x.clone() * rat(den, 1)).floor() / rat(den, 1);
                used += x.clone();
            }
            extra[m - 1] = rat(1, 2) - used;
            if extra.iter().any(|x| *x > rat(1, 2)) {
                return None;
            }
            let r: Vec<Rational> = extra.into_iter().map(|x| x + rat(1, 2)).collect();
            ExponentVector::from_reciprocals(&r).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_norm_matches_dense_oracle((form, q) in form_and_q()) {
        let qf: Vec<f64> = q.as_slice().iter().map(to_f64).collect();
        let got = mixed_norm(&form, &q).unwrap();
        let want = common::dense_mixed_norm(&form, &qf);
        prop_assert!(common::relative_error(got, want) <= 1e-12, "{got} vs {want}");
    }

    #[test]
    fn exact_and_float_agree_on_extremal_forms(
        (m, q) in (2usize..=5).prop_flat_map(|m| (Just(m), equality_q(m)))
    ) {
        prop_assert!(q.admissible(AdmissibilityMode::Equality));
        let t = construct_t(m).unwrap();
        let l = construct_l(m).unwrap();
        let et = mixed_norm_exact(&t, &q).unwrap();
        let el = mixed_norm_exact(&l, &q).unwrap();
        prop_assert_eq!(&et, &predicted_mixed_norm_t(m, &q).unwrap());
        prop_assert_eq!(&el, &predicted_mixed_norm_l(m, &q).unwrap());
        prop_assert!(common::relative_error(mixed_norm(&t, &q).unwrap(), et.value()) <= 1e-12);
        prop_assert!(common::relative_error(mixed_norm(&l, &q).unwrap(), el.value()) <= 1e-12);
    }

    #[test]
    fn evaluation_is_multilinear(
        dims in dims_strategy(4, 4),
        seed in any::<u64>(),
        slot_pick in any::<usize>(),
        a in -3i64..=3,
        b in -3i64..=3,
        vals in prop::collection::vec(-4i64..=4, 48),
    ) {
        let form = random_form(&dims, seed, Entries::Range { lo: -3, hi: 3 }).unwrap();
        let mut it = vals.into_iter().cycle();
        let args: Vec<Vec<i64>> = dims.iter().map(|&n| it.by_ref().take(n).collect()).collect();
        let u: Vec<i64> = it.by_ref().take(dims[slot_pick % dims.len()]).collect();
        let v: Vec<i64> = it.by_ref().take(dims[slot_pick % dims.len()]).collect();
        let k = slot_pick % dims.len();
        let with = |x: Vec<i64>| {
            let mut a = args.clone();
            a[k] = x;
            form.evaluate_exact(&a).unwrap()
        };
        let combo: Vec<i64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        prop_assert_eq!(with(combo), a as i128 * with(u.clone()) + b as i128 * with(v.clone()));
    }

    #[test]
    fn operator_norm_matches_full_and_brute(dims in dims_strategy(4, 4), seed in any::<u64>()) {
        let form = random_form(&dims, seed, Entries::Range { lo: -2, hi: 2 }).unwrap();
        let fast = operator_norm(&form).unwrap();
        let full = operator_norm_full(&form).unwrap();
        prop_assert_eq!(fast.value, full.value);
        prop_assert_eq!(fast.value, common::brute_operator_norm(&form));
        let w = fast.witness_i64();
        prop_assert!(w.iter().flatten().all(|&s| s == 1 || s == -1));
        prop_assert_eq!(form.evaluate_exact(&w).unwrap().unsigned_abs() as i64, fast.value);
    }

    #[test]
    fn operator_norm_invariant_under_slot_permutation(
        dims in dims_strategy(3, 4),
        seed in any::<u64>(),
        rot in 0usize..3,
    ) {
        let form = random_form(&dims, seed, Entries::Signs).unwrap();
        let m = dims.len();
        let perm: Vec<usize> = (0..m).map(|k| (k + rot) % m).collect();
        let p = form.permute_slots(&perm).unwrap();
        prop_assert_eq!(operator_norm(&form).unwrap().value, operator_norm(&p).unwrap().value);
    }

    #[test]
    fn mixed_norm_homogeneous((form, q) in form_and_q(), c in 1i64..=5) {
        let scaled = form.scaled(c);
        let lhs = mixed_norm(&scaled, &q).unwrap();
        let rhs = c as f64 * mixed_norm(&form, &q).unwrap();
        prop_assert!(common::relative_error(lhs, rhs) <= 1e-12);
    }

    #[test]
    fn interpolation_has_hull_certificate(
        anchors_raw in prop::collection::vec(prop::collection::vec(8i64..=16, 3), 1..=5),
        weights_raw in prop::collection::vec(0i64..=6, 5),
    ) {
        let anchors: Vec<ExponentVector> = anchors_raw
            .iter()
            .map(|a| ExponentVector::new(a.iter().map(|&k| rat(k, 8)).collect()).unwrap())
            .collect();
        let n = anchors.len();
        let mut w: Vec<i64> = weights_raw[..n].to_vec();
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        let weights: Vec<Rational> = w.iter().map(|&x| rat(x, total)).collect();
        let q = interpolate_exponents(&anchors, &weights).unwrap();
        let verts: Vec<Vec<Rational>> = anchors.iter().map(ExponentVector::reciprocals).collect();
        let cert = in_convex_hull(&q.reciprocals(), &verts).unwrap();
        prop_assert!(cert.is_some());
        prop_assert!(cert.unwrap().verify(&q.reciprocals(), &verts));
    }

    #[test]
    fn trilinear_family_sharp_everywhere(
        tn in 0i64..=30, td in 1i64..=30, hn in 0i64..=30, hd in 1i64..=30, pos2 in any::<bool>()
    ) {
        prop_assume!(tn <= td && hn <= hd);
        let variant = if pos2 { Variant::Pos2 } else { Variant::Pos1 };
        let p = TrilinearParams::new(rat(tn, td), rat(hn, hd), variant).unwrap();
        let q = trilinear_family_q(&p);
        prop_assert!(q.admissible(AdmissibilityMode::Equality));
        let r = trilinear_report(&p).unwrap();
        prop_assert!(r.sharp);
        prop_assert_eq!(r.lower.log2, Some((rat(hn, hd) + rat(3, 1)) / rat(4, 1)));
    }
}
