use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use weillab_core::modulartau::{delta_expansion, ramanujan_check};
use weillab_core::poly::{self, ZPoly};
use weillab_core::positivity::{
    closed_point_counts, closed_point_factors, dominance_check, power_sums, tensor_local_factor_series, LocalFactor,
};
use weillab_core::zetarec::expand_count_series;
use weillab_core::{PrimePower, ZetaFunction};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factor() -> impl Strategy<Value = LocalFactor> {
    (prop::collection::vec((-9i64..=9, 1i64..=9), 1..=4), 1u32..=2).prop_map(|(tail, deg)| {
        let mut c = vec![BigRational::one()];
        c.extend(tail.into_iter().map(|(n, d)| rat(n, d)));
        if c.last().unwrap().is_zero() {
            *c.last_mut().unwrap() = BigRational::one();
        }
        LocalFactor::new(c, PrimePower::new(5, deg).unwrap(), deg).unwrap()
    })
}

/// The zeta function of an elliptic curve over `F_p` with trace `a`.
fn elliptic_zeta() -> impl Strategy<Value = ZetaFunction> {
    prop::sample::select(vec![2i64, 3, 5, 7, 11, 13]).prop_flat_map(|p| {
        let bound = (2.0 * (p as f64).sqrt()).floor() as i64;
        (-bound..=bound).prop_map(move |a| {
            let base = PrimePower::new(p as u64, 1).unwrap();
            ZetaFunction::new(base, ZPoly::from_i64(&[1, -a, p]), ZPoly::from_i64(&[1, -1 - p, p]))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_tensor_powers_have_nonnegative_series(f in factor(), k in 1u32..=3) {
        let s = tensor_local_factor_series(&f, k, 12).unwrap();
        prop_assert!(s.iter().all(|c| !c.is_negative()));
        prop_assert!(s[0].is_one());
    }

    #[test]
    fn exponentiated_power_sums_invert_the_factor(f in factor()) {
        let t = 10;
        let s = power_sums(&f, t).unwrap();
        let direct = poly::expand_ratio(&[BigRational::one()], f.poly(), t + 1);
        prop_assert_eq!(poly::exp_series(&s, t), direct);
    }

    #[test]
    fn linear_factor_tensor_powers_are_geometric(n in -9i64..=9, d in 1i64..=9, k in 1u32..=3) {
        let alpha = rat(n, d);
        let f = LocalFactor::new(vec![BigRational::one(), -alpha.clone()], PrimePower::new(7, 1).unwrap(), 1).unwrap();
        let s = tensor_local_factor_series(&f, k, 8).unwrap();
        let beta = num_traits::pow(alpha, 2 * k as usize);
        for (i, c) in s.iter().enumerate() {
            prop_assert_eq!(c, &num_traits::pow(beta.clone(), i));
        }
    }

    #[test]
    fn closed_points_invert_point_counts(z in elliptic_zeta()) {
        let t = 12;
        let counts: Vec<BigUint> = expand_count_series(&z, t).into_iter().map(|c| c.to_biguint().unwrap()).collect();
        let a = closed_point_counts(&counts);
        prop_assert!(a.iter().all(|x| !x.is_negative()));
        for m in 1..=t {
            let total: BigInt = (1..=m).filter(|d| m % d == 0).map(|d| BigInt::from(d) * &a[d - 1]).sum();
            prop_assert_eq!(total, BigInt::from(counts[m - 1].clone()));
        }
        let report = dominance_check(&closed_point_factors(&counts, t), t).unwrap();
        prop_assert!(report.holds);
        let zs: Vec<BigRational> = z.series(t + 1).into_iter().map(BigRational::from_integer).collect();
        prop_assert_eq!(report.product, zs);
    }
}

/// `q prod (1 - q^n)^24` by repeated multiplication by `1 - q^j`.
fn naive_delta(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    c[0] = BigInt::one();
    for j in 1..n {
        for _ in 0..24 {
            for i in (j..n).rev() {
                let lower = c[i - j].clone();
                c[i] -= lower;
            }
        }
    }
    c
}

#[test]
fn delta_matches_the_naive_product() {
    let n = 300;
    assert_eq!(delta_expansion(n).coeffs(), &naive_delta(n)[..]);
}

#[test]
fn tau_is_multiplicative_with_the_prime_square_recursion() {
    let n = 400;
    let d = delta_expansion(n);
    let tau = |k: usize| d.get(k).clone();
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for a in 2..=20 {
        for b in 2..=20 {
            if gcd(a, b) == 1 {
                assert_eq!(tau(a * b), tau(a) * tau(b), "tau({a} * {b})");
            }
        }
    }
    for p in [2usize, 3, 5, 7, 11, 13, 17, 19] {
        assert_eq!(tau(p * p), tau(p) * tau(p) - BigInt::from(p).pow(11), "tau({p}^2)");
    }
}

#[test]
fn ramanujan_bound_for_small_primes() {
    let d = delta_expansion(100);
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
        let r = ramanujan_check(p, &d).unwrap();
        assert!(r.bound_holds && r.moduli_hold, "p = {p}: {r:?}");
    }
    assert!(ramanujan_check(101, &d).is_err());
    assert!(ramanujan_check(4, &d).is_err());
}
