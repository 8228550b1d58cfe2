//! Counting plans and the enumeration kernel.
//!
//! A projective count is a sum over strata: for a coordinate order `pi`, the
//! `j`-th stratum has `x_{pi(0)} = .. = x_{pi(j-1)} = 0` and `x_{pi(j)} = 1`,
//! with the remaining coordinates free. Each stratum (and an affine count) is
//! an [`AffineTask`]:
//!
//! * variables that no polynomial mentions contribute a factor `Q` each;
//! * if a variable `y` occurs in exactly one polynomial `f`, and only in
//!   terms that involve no other variable, then `f = g(y) + h(rest)` and the
//!   number of `y` for given `rest` is `#{y : g(y) = -h(rest)}`, read off a
//!   histogram of `g`;
//! * everything else is enumerated.
//!
//! The coordinate order is chosen to minimise the planned work; ties go to
//! the lexicographically smallest order, so plans are deterministic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::{GeometryError, MPoly, Model, VarietySpec};
use crate::ffield::tables::{DenseField, KernelField, ZechField, ZECH_TABLE_CAP};
use crate::ffield::PrimePower;

/// Enumeration chunk length; fixed so the chunking never depends on how many
/// workers consume it.
pub const CHUNK_TUPLES: u128 = 1 << 15;

/// Largest ambient dimension for which every coordinate order is tried.
const MAX_PERMUTED_VARS: usize = 6;

pub(crate) type Monomial = Vec<(usize, u32)>;

/// A polynomial over the enumerated variables of a task.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LocalPoly {
    terms: Vec<(u32, Monomial)>,
}

impl LocalPoly {
    fn from_mpoly(f: &MPoly, index_of: &[Option<usize>]) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|t| {
                let mono = t
                    .exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (index_of[v].expect("variable is enumerated"), e))
                    .collect();
                (t.coeff, mono)
            })
            .collect();
        LocalPoly { terms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Separated {
    /// Terms `c y^e` of the separated polynomial.
    g: Vec<(u32, u32)>,
    /// The rest of that polynomial, over the enumerated variables.
    h: LocalPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TaskBody {
    /// Some polynomial is a nonzero constant.
    Empty,
    Enumerate { width: usize, polys: Vec<LocalPoly>, separated: Option<Separated> },
}

/// One affine counting problem of a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTask {
    free_vars: u32,
    body: TaskBody,
}

impl AffineTask {
    fn analyze(polys: &[MPoly], num_vars: usize) -> Self {
        let polys: Vec<&MPoly> = polys.iter().filter(|f| !f.is_zero()).collect();
        if polys.iter().any(|f| f.is_nonzero_constant()) {
            return AffineTask { free_vars: 0, body: TaskBody::Empty };
        }
        let used: Vec<usize> = (0..num_vars).filter(|&v| polys.iter().any(|f| f.uses_var(v))).collect();
        let free_vars = (num_vars - used.len()) as u32;

        let separated_choice = used.iter().find_map(|&y| {
            let mut users = polys.iter().enumerate().filter(|(_, f)| f.uses_var(y));
            let (idx, f) = users.next()?;
            if users.next().is_some() {
                return None;
            }
            let pure = f
                .terms()
                .iter()
                .filter(|t| t.exps[y] > 0)
                .all(|t| t.exps.iter().enumerate().all(|(v, &e)| v == y || e == 0));
            pure.then_some((y, idx))
        });

        let enumerated: Vec<usize> =
            used.iter().copied().filter(|&v| Some(v) != separated_choice.map(|c| c.0)).collect();
        let mut index_of = vec![None; num_vars];
        for (i, &v) in enumerated.iter().enumerate() {
            index_of[v] = Some(i);
        }
        let width = enumerated.len();
        match separated_choice {
            None => AffineTask {
                free_vars,
                body: TaskBody::Enumerate {
                    width,
                    polys: polys.iter().map(|f| LocalPoly::from_mpoly(f, &index_of)).collect(),
                    separated: None,
                },
            },
            Some((y, idx)) => {
                let f = polys[idx];
                let g = f.terms().iter().filter(|t| t.exps[y] > 0).map(|t| (t.coeff, t.exps[y])).collect();
                let h_terms: Vec<(u32, Monomial)> = f
                    .terms()
                    .iter()
                    .filter(|t| t.exps[y] == 0)
                    .map(|t| {
                        let mono = t
                            .exps
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(v, &e)| (index_of[v].expect("enumerated"), e))
                            .collect();
                        (t.coeff, mono)
                    })
                    .collect();
                let others = polys
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != idx)
                    .map(|(_, f)| LocalPoly::from_mpoly(f, &index_of))
                    .collect();
                AffineTask {
                    free_vars,
                    body: TaskBody::Enumerate {
                        width,
                        polys: others,
                        separated: Some(Separated { g, h: LocalPoly { terms: h_terms } }),
                    },
                }
            }
        }
    }

    /// Tuples visited: the enumeration plus the histogram build.
    fn cost(&self, q: u128) -> u128 {
        match &self.body {
            TaskBody::Empty => 0,
            TaskBody::Enumerate { width, separated, .. } => {
                let e = sat_pow(q, *width as u32);
                if separated.is_some() {
                    e.saturating_add(q)
                } else {
                    e
                }
            }
        }
    }

    fn needs_field(&self) -> bool {
        matches!(&self.body, TaskBody::Enumerate { width, separated, .. } if *width > 0 || separated.is_some())
    }
}

fn sat_pow(base: u128, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(base);
    }
    acc
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Counting strategy for one variety over one extension degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPlan {
    ext: PrimePower,
    m: u32,
    q_ext: u128,
    permutation: Vec<usize>,
    tasks: Vec<AffineTask>,
}

fn projective_tasks(spec: &VarietySpec, perm: &[usize]) -> Vec<AffineTask> {
    let n = spec.num_vars();
    (0..n)
        .map(|j| {
            let mut assign = vec![None; n];
            for &v in &perm[..j] {
                assign[v] = Some(0u8);
            }
            assign[perm[j]] = Some(1u8);
            let polys: Vec<MPoly> = spec.polys().iter().map(|f| f.specialize_01(&assign)).collect();
            AffineTask::analyze(&polys, n - j - 1)
        })
        .collect()
}

/// Plans the count of `#X(F_{q^m})` without touching any field tables.
pub fn plan_count(spec: &VarietySpec, m: u32) -> CountPlan {
    let ext = spec.base().extend(m);
    let q_ext = ext.q_u64().map(u128::from).unwrap_or(u128::MAX);
    let n = spec.num_vars();
    let total = |tasks: &[AffineTask]| tasks.iter().fold(0u128, |a, t| a.saturating_add(t.cost(q_ext)));
    let (permutation, tasks) = match spec.model() {
        Model::Affine => ((0..n).collect(), vec![AffineTask::analyze(spec.polys(), n)]),
        Model::Projective => {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best_tasks = projective_tasks(spec, &perm);
            let mut best = (total(&best_tasks), perm.clone());
            if n <= MAX_PERMUTED_VARS {
                while next_permutation(&mut perm) {
                    let tasks = projective_tasks(spec, &perm);
                    let c = total(&tasks);
                    if c < best.0 {
                        best = (c, perm.clone());
                        best_tasks = tasks;
                    }
                }
            }
            (best.1, best_tasks)
        }
    };
    CountPlan { ext, m, q_ext, permutation, tasks }
}

impl CountPlan {
    pub fn extension(&self) -> PrimePower {
        self.ext
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Coordinate order used for the projective strata.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    /// Tuples the plan will visit, saturating.
    pub fn planned_tuples(&self) -> u128 {
        self.tasks.iter().fold(0u128, |a, t| a.saturating_add(t.cost(self.q_ext)))
    }

    /// Checks the budget and builds field tables and histograms.
    pub fn prepare(&self, budget: u64) -> Result<PreparedCount, GeometryError> {
        let planned = self.planned_tuples();
        if planned > budget as u128 {
            return Err(GeometryError::BudgetExceeded { m: self.m, planned, budget });
        }
        let mut chunks = Vec::new();
        for (ti, t) in self.tasks.iter().enumerate() {
            if let TaskBody::Enumerate { width, .. } = &t.body {
                let total = sat_pow(self.q_ext, *width as u32);
                let mut start = 0u128;
                while start < total {
                    let end = (start + CHUNK_TUPLES).min(total);
                    chunks.push(Chunk { task: ti, start, end });
                    start = end;
                }
            }
        }
        let kernel = if !self.tasks.iter().any(AffineTask::needs_field) {
            Kernel::Trivial
        } else if self.q_ext <= ZECH_TABLE_CAP as u128 {
            Kernel::Zech(Typed::new(ZechField::new(self.ext, false)?, &self.tasks))
        } else {
            Kernel::Dense(Typed::new(DenseField::new(self.ext)?, &self.tasks))
        };
        Ok(PreparedCount { plan: self.clone(), chunks, kernel })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Chunk {
    task: usize,
    start: u128,
    end: u128,
}

pub(crate) type TypedPoly<E> = Vec<(E, Monomial)>;

struct TypedTask<E> {
    width: usize,
    polys: Vec<TypedPoly<E>>,
    separated: Option<(Vec<u32>, TypedPoly<E>)>,
}

struct Typed<F: KernelField> {
    field: F,
    tasks: Vec<Option<TypedTask<F::E>>>,
}

pub(crate) fn eval<F: KernelField>(f: &F, poly: &TypedPoly<F::E>, xs: &[F::E]) -> F::E {
    let mut acc = f.zero();
    for (c, mono) in poly {
        let mut t = *c;
        for &(v, e) in mono {
            t = f.mul(t, f.pow(xs[v], e));
        }
        acc = f.add(acc, t);
    }
    acc
}

impl<F: KernelField> Typed<F> {
    fn new(field: F, tasks: &[AffineTask]) -> Self {
        let typed = tasks
            .iter()
            .map(|t| match &t.body {
                TaskBody::Empty => None,
                TaskBody::Enumerate { width, polys, separated } => {
                    let conv = |lp: &LocalPoly| -> TypedPoly<F::E> {
                        lp.terms.iter().map(|(c, mono)| (field.from_prime(*c), mono.clone())).collect()
                    };
                    let separated = separated.as_ref().map(|s| {
                        let g: Vec<(F::E, u32)> = s.g.iter().map(|&(c, e)| (field.from_prime(c), e)).collect();
                        let mut hist = vec![0u32; field.size() as usize];
                        for i in 0..field.size() {
                            let y = field.element(i);
                            let v = g.iter().fold(field.zero(), |a, &(c, e)| field.add(a, field.mul(c, field.pow(y, e))));
                            hist[field.slot(v)] += 1;
                        }
                        (hist, conv(&s.h))
                    });
                    Some(TypedTask { width: *width, polys: polys.iter().map(conv).collect(), separated })
                }
            })
            .collect();
        Typed { field, tasks: typed }
    }

    fn count(&self, chunk: Chunk) -> u128 {
        let f = &self.field;
        let task = self.tasks[chunk.task].as_ref().expect("chunks only cover enumerated tasks");
        let q = f.size() as u128;
        let w = task.width;
        let mut digits = vec![0u64; w];
        let mut rest = chunk.start;
        for d in digits.iter_mut().rev() {
            *d = (rest % q) as u64;
            rest /= q;
        }
        let mut xs: Vec<F::E> = digits.iter().map(|&d| f.element(d)).collect();
        let mut total: u128 = 0;
        for _ in chunk.start..chunk.end {
            if task.polys.iter().all(|p| f.is_zero(eval(f, p, &xs))) {
                total += match &task.separated {
                    None => 1,
                    Some((hist, h)) => hist[f.slot(f.neg(eval(f, h, &xs)))] as u128,
                };
            }
            for i in (0..w).rev() {
                digits[i] += 1;
                if (digits[i] as u128) < q {
                    xs[i] = f.element(digits[i]);
                    break;
                }
                digits[i] = 0;
                xs[i] = f.element(0);
            }
        }
        total
    }
}

enum Kernel {
    Trivial,
    Zech(Typed<ZechField>),
    Dense(Typed<DenseField>),
}

/// A plan with its tables built, ready to be evaluated chunk by chunk.
/// Chunks may be counted in any order and on any thread; [`Self::combine`]
/// adds the partial counts exactly.
pub struct PreparedCount {
    plan: CountPlan,
    chunks: Vec<Chunk>,
    kernel: Kernel,
}

impl PreparedCount {
    pub fn plan(&self) -> &CountPlan {
        &self.plan
    }

    pub fn num_chunks(&self) -> usize {
        self.chunks.len()
    }

    pub fn count_chunk(&self, index: usize) -> u128 {
        let chunk = self.chunks[index];
        match &self.kernel {
            Kernel::Trivial => 1,
            Kernel::Zech(t) => t.count(chunk),
            Kernel::Dense(t) => t.count(chunk),
        }
    }

    /// Total count from the per-chunk partials (indexed like the chunks).
    pub fn combine(&self, partials: &[u128]) -> BigUint {
        assert_eq!(partials.len(), self.chunks.len());
        let mut per_task = vec![0u128; self.plan.tasks.len()];
        for (c, &v) in self.chunks.iter().zip(partials) {
            per_task[c.task] += v;
        }
        let q = self.plan.ext.q();
        self.plan
            .tasks
            .iter()
            .zip(per_task)
            .map(|(t, s)| BigUint::from(s) * q.pow(t.free_vars))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{count_points, CountOptions};
    use alloc::string::ToString;

    fn spec(p: u64, model: Model, n: usize, polys: Vec<MPoly>) -> VarietySpec {
        let vars = (0..n).map(|i| i.to_string()).collect();
        VarietySpec::new(PrimePower::new(p, 1).unwrap(), model, vars, polys).unwrap()
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut v = vec![0, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn separated_variable_is_detected() {
        // y^2 - x^3 - x - 1 in A^2: y is separated, only x is enumerated.
        let f = MPoly::from_terms(5, 2, &[(1, &[0, 2]), (-1, &[3, 0]), (-1, &[1, 0]), (-1, &[0, 0])]);
        let s = spec(5, Model::Affine, 2, vec![f]);
        let plan = plan_count(&s, 1);
        assert_eq!(plan.planned_tuples(), 5 + 5);
    }

    #[test]
    fn budget_is_checked_before_work() {
        let f = MPoly::from_terms(7, 3, &[(1, &[1, 1, 1]), (1, &[2, 1, 0]), (1, &[0, 1, 2])]);
        let s = spec(7, Model::Affine, 3, vec![f]);
        let err = count_points(&s, 2, &CountOptions { budget: 1000 }).unwrap_err();
        assert!(matches!(err, GeometryError::BudgetExceeded { m: 2, .. }));
    }

    #[test]
    fn free_variables_need_no_tables() {
        let s = VarietySpec::full_space(PrimePower::new(5, 1).unwrap(), Model::Affine, 3);
        let plan = plan_count(&s, 40);
        assert_eq!(plan.planned_tuples(), 1);
        let n = count_points(&s, 40, &CountOptions::default()).unwrap();
        assert_eq!(n, BigUint::from(5u32).pow(120));
    }
}
