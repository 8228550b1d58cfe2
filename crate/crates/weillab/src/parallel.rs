//! Thread-parallel drivers for the chunked enumeration kernels.
//!
//! Workers claim chunk indices from a shared counter and every partial
//! result is stored under its chunk index, so the combined value does not
//! depend on the thread count or on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;

use weillab_core::cyclo::CyclotomicInt;
use weillab_core::expsum::{plan_exp_sum, ExpSumError};
use weillab_core::geometry::{plan_count, CountSeries, GeometryError, MPoly, VarietySpec};
use weillab_core::PrimePower;

/// Evaluates `work(0..n)` on up to `threads` workers; results are in index
/// order.
pub fn run_chunks<T: Send>(n: usize, threads: usize, work: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = threads.clamp(1, n.max(1));
    if threads == 1 {
        return (0..n).map(work).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = work(i);
                slots.lock().expect("no worker panicked")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every chunk ran")).collect()
}

pub fn count_points(spec: &VarietySpec, m: u32, budget: u64, threads: usize) -> Result<BigUint, GeometryError> {
    let prepared = plan_count(spec, m).prepare(budget)?;
    let partials = run_chunks(prepared.num_chunks(), threads, |i| prepared.count_chunk(i));
    Ok(prepared.combine(&partials))
}

pub fn count_series(spec: &VarietySpec, max_m: u32, budget: u64, threads: usize) -> Result<CountSeries, GeometryError> {
    let counts = (1..=max_m).map(|m| count_points(spec, m, budget, threads)).collect::<Result<_, _>>()?;
    Ok(CountSeries { q: spec.base(), counts })
}

pub fn exp_sum(poly: &MPoly, base: PrimePower, m: u32, budget: u64, threads: usize) -> Result<CyclotomicInt, ExpSumError> {
    let prepared = plan_exp_sum(poly, base, m).prepare(budget)?;
    let partials = run_chunks(prepared.num_chunks(), threads, |i| prepared.sum_chunk(i));
    Ok(prepared.combine(&partials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use weillab_core::geometry::{count_points as count_sequential, CountOptions, Model};

    #[test]
    fn order_is_preserved() {
        assert_eq!(run_chunks(100, 4, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
        assert!(run_chunks(0, 4, |i| i).is_empty());
    }

    #[test]
    fn matches_sequential_count() {
        let base = PrimePower::new(7, 1).unwrap();
        let f = MPoly::from_terms(7, 3, &[(1, &[0, 2, 1]), (-1, &[3, 0, 0]), (-1, &[1, 0, 2])]);
        let spec = VarietySpec::new(base, Model::Projective, vec!["x".into(), "y".into(), "z".into()], vec![f]).unwrap();
        for m in 1..=4 {
            let seq = count_sequential(&spec, m, &CountOptions::default()).unwrap();
            assert_eq!(count_points(&spec, m, 1 << 30, 4).unwrap(), seq);
        }
    }
}
