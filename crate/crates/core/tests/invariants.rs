use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use recip::census::{classify_item, count_xyz_square, run_census, CensusConfig};
use recip::disc_lab::SplittingType;
use recip::fourier::{fourier_full, w_pointed_value, w_value, BinaryFormModP};
use recip::galois::{g3_test, G3Flag};
use recip::poly::{discriminant, expand};
use recip::{IntPoly, SymPair};

fn sigma_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["1", "2", "1^2", "1,1", "1,2", "3", "1^3", "1,1^2", "1,1,1"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w_is_positive_on_own_type(p in prop::sample::select(vec![3u64, 5, 7]), c in prop::collection::vec(0u64..7, 4)) {
        let f = BinaryFormModP::new(p, 3, c).unwrap();
        if let recip::disc_lab::SplitResult::Type(t) = recip::disc_lab::splitting_type_binary(&f.coeffs, 3, p) {
            prop_assert!(w_value(p, &t, &f).unwrap() >= 1);
        }
    }

    #[test]
    fn w_of_zero_is_positive(p in prop::sample::select(vec![3u64, 5]), s in sigma_strategy()) {
        let s: SplittingType = s.parse().unwrap();
        let zero = BinaryFormModP::new(p, 3, vec![0; 4]).unwrap();
        prop_assert!(w_value(p, &s, &zero).unwrap() >= 1);
        if let Ok(m) = s.with_mark(recip::disc_lab::Mark::Plus2) {
            prop_assert!(w_pointed_value(p, &m, &zero).unwrap() >= 1);
        }
    }

    #[test]
    fn transform_is_real_and_even(s in sigma_strategy(), p in prop::sample::select(vec![3u64, 5])) {
        let s: SplittingType = s.parse().unwrap();
        let t = fourier_full(p, 3, &s, false, false).unwrap();
        prop_assert!(t.value_at(0).as_rational().unwrap() > BigRational::zero());
        for g in t.frequencies().step_by(7) {
            let neg: Vec<u64> = g.iter().map(|&c| (p - c) % p).collect();
            prop_assert_eq!(t.value(&g).as_rational(), t.value(&neg).as_rational());
        }
    }

    #[test]
    fn k_invariant_under_negation(c in prop::collection::vec(-12i64..=12, 4)) {
        prop_assume!(c[3] != 0);
        let g = IntPoly::from_i64(&c);
        let p = SymPair::from_g(g.clone(), 3).unwrap();
        let q = SymPair::from_g(-&g, 3).unwrap();
        match (g3_test(&p, 200), g3_test(&q, 200)) {
            (Ok((fa, ka)), Ok((fb, kb))) => {
                prop_assert_eq!(ka, kb);
                if fa != G3Flag::Undetermined && fb != G3Flag::Undetermined {
                    prop_assert_eq!(fa, fb);
                }
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn census_item_flags_are_consistent(c in prop::collection::vec(-15i64..=15, 3)) {
        let t = classify_item(&c, 2, 200);
        prop_assert_eq!(t.total, 1);
        if t.inseparable == 1 {
            prop_assert_eq!(t.g1 + t.g2 + t.g3 + t.gg_not_sn + t.reducible_f, 0);
        } else {
            let f = expand(&IntPoly::from_i64(&c), 2).unwrap();
            prop_assert!(!discriminant(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn xyz_is_monotone(h in 1u64..2000) {
        prop_assert!(count_xyz_square(h) <= count_xyz_square(h + 1));
        prop_assert!(count_xyz_square(h) >= h);
    }
}

#[test]
fn census_tallies_are_monotone_in_h() {
    let mut prev = None;
    for h in 0..=6 {
        let r = run_census(&CensusConfig::new(2, h, false)).unwrap();
        assert_eq!(r.total, (2 * h + 1).pow(3));
        if let Some(p) = prev {
            let p: recip::census::CensusRecord = p;
            for (a, b) in [(p.g1, r.g1), (p.g2, r.g2), (p.inseparable, r.inseparable), (p.reducible_f, r.reducible_f), (p.gg_not_sn, r.gg_not_sn)] {
                assert!(a <= b);
            }
        }
        prev = Some(r);
    }
}

#[test]
fn disc_sign_matches_resultant_form() {
    // disc f = g(2) g(-2) (disc g)^2 with no extra sign
    for c in [[-1i64, 1, 1], [3, -2, 5], [7, 0, -1]] {
        let g = IntPoly::from_i64(&c);
        let f = expand(&g, 2).unwrap();
        let dg = discriminant(&g).unwrap();
        let rhs: BigInt = g.eval_i64(2) * g.eval_i64(-2) * &dg * &dg;
        assert_eq!(discriminant(&f).unwrap(), rhs);
        assert!(!rhs.is_negative() || (g.eval_i64(2) * g.eval_i64(-2)).is_negative());
    }
}
