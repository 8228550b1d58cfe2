use num_bigint::BigInt;
use proptest::prelude::*;

use weillab_core::poly::ZPoly;
use weillab_core::zetarec::{
    exp_integer_series, expand_count_series, expand_counts, hankel_rank_bound, rational_reconstruct,
};
use weillab_core::{PowerSeriesZ, PrimePower, ZetaFunction};

/// An integer polynomial with constant term 1 and degree at most `max_deg`.
fn unit_poly(max_deg: usize) -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(-9i64..=9, 0..=max_deg).prop_map(|tail| {
        let mut c = vec![1i64];
        c.extend(tail);
        ZPoly::from_i64(&c)
    })
}

fn zeta() -> impl Strategy<Value = ZetaFunction> {
    (unit_poly(3), unit_poly(3)).prop_map(|(p, q)| ZetaFunction::new(PrimePower::new(5, 1).unwrap(), p, q))
}

fn cross_equal(a: &ZetaFunction, b: &ZetaFunction) -> bool {
    a.numerator().mul(b.denominator()) == b.numerator().mul(a.denominator())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reconstruction_recovers_the_rational_function(z in zeta(), h in 1usize..=3) {
        let deg = z.numerator().degree() + z.denominator().degree();
        // a unique fit needs more than 2 deg terms and a degree drop of two
        let len = (2 * deg + 1).max(deg + 2) + h;
        let series = PowerSeriesZ::new(z.q(), z.series(len));
        let fit = rational_reconstruct(&series, h).unwrap();
        prop_assert!(cross_equal(&fit, &z));
        prop_assert_eq!(fit.numerator().constant_term(), BigInt::from(1));
        prop_assert_eq!(fit.denominator().constant_term(), BigInt::from(1));
        prop_assert!(fit.numerator().degree() + fit.denominator().degree() <= deg);
        prop_assert_eq!(fit.series(len + 5), z.series(len + 5));
    }

    #[test]
    fn more_terms_never_lower_the_degree(z in zeta(), extra in 1usize..=6) {
        let deg = z.numerator().degree() + z.denominator().degree();
        let len = (2 * deg + 1).max(deg + 2) + 2;
        let short = rational_reconstruct(&PowerSeriesZ::new(z.q(), z.series(len)), 2).unwrap();
        let long = rational_reconstruct(&PowerSeriesZ::new(z.q(), z.series(len + extra)), 2).unwrap();
        prop_assert_eq!(short.numerator(), long.numerator());
        prop_assert_eq!(short.denominator(), long.denominator());
    }

    #[test]
    fn exponentiated_counts_are_integral_and_match_the_series(z in zeta(), t in 1usize..=12) {
        let counts = expand_count_series(&z, t);
        prop_assert_eq!(exp_integer_series(&counts, t).unwrap(), z.series(t + 1));
        for (m, n) in counts.iter().enumerate() {
            prop_assert_eq!(n, &expand_counts(&z, m + 1));
        }
    }

    #[test]
    fn series_satisfies_the_denominator_recurrence(z in zeta()) {
        let a = z.numerator().degree();
        let b = z.denominator().degree();
        let seq = z.series(a + 3 * b + 8);
        let rank = hankel_rank_bound(&seq, a + 1, b + 1).unwrap();
        prop_assert!(rank <= b, "rank {} > {}", rank, b);
    }

    #[test]
    fn counts_satisfy_a_recurrence_of_order_deg_p_plus_deg_q(z in zeta()) {
        let order = z.numerator().degree() + z.denominator().degree();
        let counts = expand_count_series(&z, 3 * order + 8);
        let rank = hankel_rank_bound(&counts, 0, order + 1).unwrap();
        prop_assert!(rank <= order);
    }
}

#[test]
fn too_short_a_series_is_rejected() {
    let z = ZetaFunction::new(PrimePower::new(3, 1).unwrap(), ZPoly::from_i64(&[1, 1, 3]), ZPoly::from_i64(&[1, -4, 3]));
    assert!(exp_integer_series(&expand_count_series(&z, 3), 4).is_err());
    assert!(rational_reconstruct(&PowerSeriesZ::new(z.q(), z.series(8)), 0).is_err());
}
