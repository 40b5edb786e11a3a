//! Invariants of the exact bound calculators.

use hyperspectra::bounds::{
    construct_thm9_K, q_k_membership, split_a, thm10_alpha, thm11_alpha, thm11_l, thm11_l_exact_s2, thm6_threshold,
    thm8_interval, thm9_alpha,
};
use hyperspectra::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn lattice_membership_follows_the_representation(
        s in 2usize..=5,
        gap in 0usize..=4,
        a in 1i64..=64,
        b in 1i64..=64,
    ) {
        let k = s - 1 + gap;
        let p = 1i64 << (k + 1 - s);
        let alpha = Rational::integer(s as i64 - 1) - (Rational::integer(p) + Rational::new(a, b)).recip();
        let (lo, hi) = thm8_interval(s, k).unwrap();
        prop_assert!(lo < alpha && alpha < hi);
        let reduced = Rational::new(a, b);
        let expected = *reduced.numer() <= BigInt::from(p);
        prop_assert_eq!(q_k_membership(&alpha, s, k).unwrap(), expected);
    }

    #[test]
    fn cycle_alphas_lie_in_the_lattice(s in 3usize..=5, extra in 4usize..=7, a in 1u64..=200) {
        let k = s + extra;
        let Ok(alpha) = thm9_alpha(s, k, a) else { return Ok(()) };
        prop_assert!(q_k_membership(&alpha, s, k).unwrap());
        if let Ok((a1, a2, a3)) = split_a(s, k, a) {
            prop_assert_eq!(2 * a1 + 2 * a2 + 1 + a3, (1u64 << (k + 1 - s)) + a);
            prop_assert!(a2 < a1);
        }
    }

    #[test]
    fn limit_points_are_approached_from_above(s in 2usize..=4, k_extra in 0usize..=3, j in 1u64..=4) {
        let k = 11 + (s - 1) + k_extra;
        let limit = Rational::new(1, binom((k - 11) as u128, (s - 1) as u128) as i64);
        let Ok(here) = thm10_alpha(s, k, j) else { return Ok(()) };
        let next = thm10_alpha(s, k, j + 1).unwrap();
        prop_assert!(here.alpha > next.alpha && next.alpha > limit);
    }

    #[test]
    fn depth_bound_is_the_largest_fit(s in 2usize..=5, k_extra in 3usize..=14, m in 1u64..=50) {
        let k = s + k_extra;
        let l = thm11_l(s, k).unwrap() as u128;
        let cap = binom(k as u128, s as u128);
        prop_assert!(binom(l, s as u128 - 1) * (l + 2) <= cap);
        prop_assert!(binom(l + 1, s as u128 - 1) * (l + 3) > cap);
        if s == 2 {
            prop_assert_eq!(thm11_l_exact_s2(k) as u128, l);
        }
        if let (Ok(here), Ok(next)) = (thm11_alpha(s, k, m), thm11_alpha(s, k, m + 1)) {
            let limit = Rational::new(1, binom(l, s as u128 - 1) as i64);
            if here > limit {
                prop_assert!(next < here && next > limit);
            }
        }
    }
}

#[test]
fn thresholds_grow_with_rounds() {
    for s in 3..=6 {
        for k in s + 1..s + 8 {
            assert!(thm6_threshold(s, k + 1).unwrap() > thm6_threshold(s, k).unwrap());
        }
    }
}

#[test]
fn small_cycle_witnesses_have_the_predicted_density() {
    for (s, k) in [(3, 7), (3, 8), (4, 8)] {
        let mut a = 1;
        while let Ok(alpha) = thm9_alpha(s, k, a) {
            if let Ok((a1, a2, a3)) = split_a(s, k, a) {
                let w = construct_thm9_K(s, k, a1 as usize, a2 as usize, a3 as usize).unwrap();
                assert_eq!(w.density.recip(), alpha, "s={s} k={k} a={a}");
                assert_eq!(
                    hyperspectra::hypercore::max_density(&w.graph).density,
                    w.density,
                    "witness is balanced"
                );
            }
            a += 1;
        }
    }
}
