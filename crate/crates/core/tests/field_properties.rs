use num_bigint::BigUint;
use proptest::prelude::*;

use weillab_core::ffield::tables::{first_primitive_modulus, KernelField, ZechField};
use weillab_core::ffield::{embed, eval_fp_poly, FFElem, FieldCtx};
use weillab_core::PrimePower;

const FIELDS: [(u64, u32); 8] = [(2, 1), (2, 4), (3, 1), (3, 3), (5, 2), (7, 2), (11, 1), (13, 2)];

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|(p, k)| FieldCtx::new(p, k).unwrap())
}

fn field_with_elements(n: usize) -> impl Strategy<Value = (FieldCtx, Vec<u64>)> {
    field().prop_flat_map(move |f| {
        let q = f.prime_power().q_u64().unwrap();
        (Just(f), prop::collection::vec(0..q, n))
    })
}

proptest! {
    #[test]
    fn ring_axioms((f, ix) in field_with_elements(3)) {
        let [a, b, c] = [0, 1, 2].map(|i| f.element_at(ix[i]));
        prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        match f.inv(&a) {
            Some(inv) => prop_assert_eq!(f.mul(&a, &inv), f.one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn every_element_is_fixed_by_the_full_frobenius((f, ix) in field_with_elements(1)) {
        let a = f.element_at(ix[0]);
        let q = f.prime_power().q_u64().unwrap();
        prop_assert_eq!(f.pow_u64(&a, q), a.clone());
        prop_assert_eq!(f.pow(&a, &BigUint::from(q)), a);
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant((f, ix) in field_with_elements(2), c in 0u32..13) {
        let (a, b) = (f.element_at(ix[0]), f.element_at(ix[1]));
        let p = f.p();
        prop_assert_eq!(f.trace_to_prime(&f.add(&a, &b)), (f.trace_to_prime(&a) + f.trace_to_prime(&b)) % p);
        prop_assert_eq!(f.trace_to_prime(&f.scale(&a, c)), f.trace_to_prime(&a) * (c % p) % p);
        prop_assert_eq!(f.trace_to_prime(&f.frobenius_p(&a)), f.trace_to_prime(&a));
    }

    #[test]
    fn index_round_trip((f, ix) in field_with_elements(1)) {
        prop_assert_eq!(f.index_of(&f.element_at(ix[0])), ix[0]);
    }

    #[test]
    fn embeddings_are_ring_maps(
        (p, a, b) in prop::sample::select(vec![(2u64, 2u32, 2u32), (2, 1, 3), (3, 1, 2), (3, 2, 2), (5, 1, 3), (7, 1, 2)]),
        i in any::<u64>(),
        j in any::<u64>(),
    ) {
        let small = FieldCtx::new(p, a).unwrap();
        let big = FieldCtx::new(p, a * b).unwrap();
        let q = small.prime_power().q_u64().unwrap();
        let (x, y) = (small.element_at(i % q), small.element_at(j % q));
        let e = |v: &FFElem| embed(v, &small, &big).unwrap();
        prop_assert_eq!(e(&small.add(&x, &y)), big.add(&e(&x), &e(&y)));
        prop_assert_eq!(e(&small.mul(&x, &y)), big.mul(&e(&x), &e(&y)));
        // the image is fixed by the small field's Frobenius
        prop_assert_eq!(big.frobenius_q(&e(&x), small.prime_power()), e(&x));
    }
}

#[test]
fn zech_tables_agree_with_polynomial_arithmetic() {
    for (p, k) in [(2u64, 6u32), (3, 4), (5, 3), (7, 2), (13, 1)] {
        let pp = PrimePower::new(p, k).unwrap();
        let ctx = FieldCtx::new(p, k).unwrap();
        let z = ZechField::new(pp, true).unwrap();
        let q = z.size();
        // a root of the tables' primitive modulus; conjugate roots differ by
        // an automorphism, which preserves sums, products and traces
        let f = first_primitive_modulus(p as u32, k);
        let g = ctx.elements(q).unwrap().find(|x| eval_fp_poly(&ctx, &f, x).is_zero()).unwrap();
        let value = |e: u32| if z.is_zero(e) { ctx.zero() } else { ctx.pow_u64(&g, e as u64) };
        for i in (0..q).step_by(1 + q as usize / 40) {
            let a = z.element(i);
            check_trace(&ctx, &z, a, &value(a));
            for j in (0..q).step_by(1 + q as usize / 30) {
                let b = z.element(j);
                assert_eq!(value(z.add(a, b)), ctx.add(&value(a), &value(b)), "F_{p}^{k}: {i} + {j}");
                assert_eq!(value(z.mul(a, b)), ctx.mul(&value(a), &value(b)));
            }
            assert_eq!(value(z.neg(a)), ctx.neg(&value(a)));
            assert_eq!(value(z.pow(a, 5)), ctx.pow_u64(&value(a), 5));
        }
    }
}

fn check_trace(ctx: &FieldCtx, z: &ZechField, a: u32, value: &FFElem) {
    assert_eq!(z.trace(a), ctx.trace_to_prime(value));
}
