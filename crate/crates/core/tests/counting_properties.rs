use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use weillab_core::ffield::{projective_space_count, FFElem, FieldCtx};
use weillab_core::geometry::{count_points, plan_count, CountOptions, MPoly, Model, VarietySpec};
use weillab_core::PrimePower;

const BUDGET: CountOptions = CountOptions { budget: 1 << 24 };

/// Counts by evaluating every tuple with reference arithmetic.
fn naive_count(spec: &VarietySpec, m: u32) -> BigUint {
    let base = spec.base();
    let ext = base.extend(m);
    let ctx = FieldCtx::new(ext.p() as u64, ext.k()).unwrap();
    let q = ext.q_u64().unwrap();
    let n = spec.num_vars();
    let elems: Vec<FFElem> = ctx.elements(q).unwrap().collect();
    let mut idx = vec![0usize; n];
    let mut hits = 0u64;
    loop {
        let pt: Vec<FFElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        if spec.polys().iter().all(|f| f.eval(&ctx, &pt).is_zero()) {
            hits += 1;
        }
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    match spec.model() {
        Model::Affine => BigUint::from(hits),
        // drop the origin, then divide out the scalings
        Model::Projective => BigUint::from((hits - 1) / (q - 1)),
    }
}

fn vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A random polynomial over `F_p` in `n` variables.
fn poly(p: u32, n: usize, max_deg: u32, homogeneous: Option<u32>) -> impl Strategy<Value = MPoly> {
    let term = (-20i64..20, prop::collection::vec(0..=max_deg, n));
    prop::collection::vec(term, 1..5).prop_map(move |terms| {
        let terms: Vec<(BigInt, Vec<u32>)> = terms
            .into_iter()
            .map(|(c, mut e)| {
                if let Some(d) = homogeneous {
                    // cap the leading exponents, then give the rest of the
                    // degree to the last variable
                    let mut left = d;
                    for x in e.iter_mut().take(n - 1) {
                        *x = (*x).min(left);
                        left -= *x;
                    }
                    e[n - 1] = left;
                }
                (BigInt::from(c), e)
            })
            .collect();
        MPoly::from_integer_terms(p, n, &terms).unwrap()
    })
}

fn affine_spec(p: u64, n: usize) -> impl Strategy<Value = VarietySpec> {
    prop::collection::vec(poly(p as u32, n, 3, None), 1..3).prop_map(move |fs| {
        VarietySpec::new(PrimePower::new(p, 1).unwrap(), Model::Affine, vars(n), fs).unwrap()
    })
}

fn projective_spec(p: u64, d: u32) -> impl Strategy<Value = VarietySpec> {
    poly(p as u32, 3, d, Some(d)).prop_map(move |f| {
        VarietySpec::new(PrimePower::new(p, 1).unwrap(), Model::Projective, vars(3), vec![f]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_counts_match_naive_recount(spec in affine_spec(5, 2), m in 1u32..=2) {
        prop_assert_eq!(count_points(&spec, m, &BUDGET).unwrap(), naive_count(&spec, m));
    }

    #[test]
    fn three_variable_counts_match_naive_recount(spec in affine_spec(3, 3)) {
        prop_assert_eq!(count_points(&spec, 1, &BUDGET).unwrap(), naive_count(&spec, 1));
    }

    #[test]
    fn plane_curve_counts_match_naive_recount(spec in projective_spec(3, 3), m in 1u32..=2) {
        prop_assert_eq!(count_points(&spec, m, &BUDGET).unwrap(), naive_count(&spec, m));
    }

    #[test]
    fn affine_cone_relation(spec in projective_spec(5, 2), m in 1u32..=2) {
        let cone = VarietySpec::new(spec.base(), Model::Affine, spec.vars().to_vec(), spec.polys().to_vec()).unwrap();
        let q = spec.base().extend(m).q();
        let proj = count_points(&spec, m, &BUDGET).unwrap();
        prop_assert_eq!(count_points(&cone, m, &BUDGET).unwrap(), (q - 1u32) * proj + 1u32);
    }

    #[test]
    fn products_multiply_counts(a in affine_spec(5, 1), b in affine_spec(5, 2), m in 1u32..=2) {
        let prod = a.product(&b);
        prop_assert_eq!(
            count_points(&prod, m, &BUDGET).unwrap(),
            count_points(&a, m, &BUDGET).unwrap() * count_points(&b, m, &BUDGET).unwrap()
        );
    }

    #[test]
    fn chunk_order_does_not_matter(spec in projective_spec(7, 3), m in 1u32..=3) {
        let prepared = plan_count(&spec, m).prepare(1 << 24).unwrap();
        let forward: Vec<u128> = (0..prepared.num_chunks()).map(|i| prepared.count_chunk(i)).collect();
        let mut backward: Vec<u128> = (0..prepared.num_chunks()).rev().map(|i| prepared.count_chunk(i)).collect();
        backward.reverse();
        prop_assert_eq!(prepared.combine(&forward), prepared.combine(&backward));
        prop_assert_eq!(prepared.combine(&forward), count_points(&spec, m, &BUDGET).unwrap());
    }
}

#[test]
fn projective_space_counts() {
    for (p, k) in [(2u64, 1u32), (3, 1), (2, 3), (5, 1), (7, 1)] {
        let base = PrimePower::new(p, k).unwrap();
        for n in 0..=3u32 {
            let spec = VarietySpec::full_space(base, Model::Projective, n as usize + 1);
            for m in 1..=3 {
                let expected = projective_space_count(n, &base.q(), m);
                let direct: BigUint = (0..=n).map(|i| base.q().pow(m * i)).sum();
                assert_eq!(expected, direct);
                assert_eq!(count_points(&spec, m, &BUDGET).unwrap(), expected, "P^{n} over F_{p}^{k}, m = {m}");
            }
        }
    }
}

#[test]
fn budget_is_checked_before_enumeration() {
    let base = PrimePower::new(11, 1).unwrap();
    let f = MPoly::from_terms(11, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 1, 1, 0]), (1, &[0, 0, 1, 1]), (1, &[1, 0, 0, 1])]);
    let spec = VarietySpec::new(base, Model::Affine, vars(4), vec![f]).unwrap();
    let err = count_points(&spec, 3, &CountOptions { budget: 1000 }).unwrap_err();
    assert!(err.to_string().contains("budget"), "{err}");
}
