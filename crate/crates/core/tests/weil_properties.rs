use num_bigint::BigInt;
use proptest::prelude::*;

use weillab_core::poly::ZPoly;
use weillab_core::weilverify::{duality_check, functional_equation_check, weight_split};
use weillab_core::{PrimePower, ZetaFunction};

fn projective_space_zeta(q: PrimePower, n: u32) -> ZetaFunction {
    let qq = BigInt::from(q.q());
    let den = (0..=n).fold(ZPoly::one(), |acc, i| acc.mul(&ZPoly::linear_factor(&qq.pow(i))));
    ZetaFunction::new(q, ZPoly::one(), den)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elliptic_zetas_are_pure_and_self_dual(
        (p, a) in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 17, 19, 23]).prop_flat_map(|p| {
            let b = (2.0 * (p as f64).sqrt()).floor() as i64;
            (Just(p), -b..=b)
        })
    ) {
        let q = PrimePower::new(p as u64, 1).unwrap();
        let z = ZetaFunction::new(q, ZPoly::from_i64(&[1, -a, p]), ZPoly::from_i64(&[1, -1 - p, p]));
        let split = weight_split(&z, 1).unwrap();
        prop_assert_eq!(split.betti_numbers(), vec![1, 2, 1]);
        let fe = functional_equation_check(&z, 1, Some(&split));
        prop_assert!(fe.holds);
        prop_assert_eq!(fe.epsilon, Some(1));
        prop_assert_eq!(fe.epsilon_rule_consistent, Some(true));
        prop_assert!(duality_check(&split).holds);
    }

    #[test]
    fn products_of_curves_with_the_line_keep_the_functional_equation(a in -4i64..=4) {
        // E x P^1 over F_5: numerator P_E(t) P_E(5 t), denominator
        // (1 - t)(1 - 5t)^2 (1 - 25t)
        let q = PrimePower::new(5, 1).unwrap();
        let pe = ZPoly::from_i64(&[1, -a, 5]);
        let pe5 = ZPoly::from_i64(&[1, -5 * a, 125]);
        let den = ZPoly::from_i64(&[1, -1]).mul(&ZPoly::from_i64(&[1, -5])).mul(&ZPoly::from_i64(&[1, -5])).mul(&ZPoly::from_i64(&[1, -25]));
        let z = ZetaFunction::new(q, pe.mul(&pe5), den);
        let split = weight_split(&z, 2).unwrap();
        prop_assert_eq!(split.betti_numbers(), vec![1, 2, 2, 2, 1]);
        let fe = functional_equation_check(&z, 2, Some(&split));
        prop_assert!(fe.holds);
        prop_assert_eq!(fe.epsilon_rule_consistent, Some(true));
        prop_assert!(duality_check(&split).holds);
    }
}

#[test]
fn projective_spaces_split_into_single_weights() {
    for p in [2u64, 3, 5, 7] {
        let q = PrimePower::new(p, 1).unwrap();
        for n in 0..=3u32 {
            let z = projective_space_zeta(q, n);
            let split = weight_split(&z, n).unwrap();
            let expected: Vec<usize> = (0..=2 * n).map(|i| usize::from(i % 2 == 0)).collect();
            assert_eq!(split.betti_numbers(), expected);
            let fe = functional_equation_check(&z, n, Some(&split));
            assert!(fe.holds);
            // the middle eigenvalue q^{n/2} has multiplicity one for even n
            assert_eq!(fe.epsilon, Some(if n % 2 == 0 { -1 } else { 1 }), "P^{n} over F_{p}");
            assert_eq!(fe.epsilon_rule_consistent, Some(true));
            assert!(duality_check(&split).holds);
        }
    }
}

#[test]
fn a_numerator_of_the_wrong_weight_is_rejected() {
    // reciprocal roots of modulus 5 in a curve's first cohomology
    let q = PrimePower::new(5, 1).unwrap();
    let z = ZetaFunction::new(q, ZPoly::from_i64(&[1, 0, 25]), ZPoly::from_i64(&[1, -6, 5]));
    let ok = match weight_split(&z, 1) {
        Err(_) => true,
        Ok(split) => split.betti_numbers() != vec![1, 2, 1] || !functional_equation_check(&z, 1, Some(&split)).holds,
    };
    assert!(ok);
}
