use std::sync::Arc;

use crate::arith::{HalfInt, Prime};
use crate::dlalgebra::{pair_admissible, Op};
use crate::grading::{Bidegree, Grade};

use super::{AlgebraContext, FreeAlgError, Generator, Monomial, QClass};

struct Steps {
    used: u64,
    limit: u64,
}

impl Steps {
    fn new(limit: u64) -> Self {
        Steps { used: 0, limit }
    }

    fn tick(&mut self) -> Result<(), FreeAlgError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(FreeAlgError::BudgetExhausted {
                limit: self.limit,
                advice: "lower the degree or charge cutoff, or raise --budget",
            });
        }
        Ok(())
    }
}

/// Largest `l` with `p^l <= max_charge`, or `None` if even charge 1 is excluded.
fn max_length(prime: Prime, max_charge: u64) -> Option<u32> {
    if max_charge == 0 {
        return None;
    }
    let mut l = 0;
    while prime.as_i64() as u64 * prime.pow(l) <= max_charge {
        l += 1;
    }
    Some(l)
}

/// Whether some chain of at most `levels` further steps of `d -> step(d)`
/// can end at or below `max_degree`. `step` is increasing.
fn reachable(mut d: i64, levels: u32, max_degree: i64, step: impl Fn(i64) -> i64) -> bool {
    for _ in 0..=levels {
        if d <= max_degree {
            return true;
        }
        d = step(d);
    }
    false
}

#[derive(Clone, Copy)]
enum Mode {
    /// `e(I) + ε_1 > n`: every suffix has `2 s > d`.
    Strict,
    /// `e(I) >= n`: every suffix has `2 s >= d`, the top one `2 s - ε >= d`.
    Weak,
}

struct WordSearch<'a> {
    prime: Prime,
    twist_bit: i64,
    max_degree: i64,
    max_len: u32,
    mode: Mode,
    steps: &'a mut Steps,
    // innermost first
    stack: Vec<Op>,
    out: Vec<Vec<Op>>,
}

impl WordSearch<'_> {
    fn lower_bound(&self, d: i64) -> i64 {
        let p = self.prime.as_i64();
        match self.mode {
            Mode::Strict => p.saturating_mul(d).saturating_add(p - 2),
            Mode::Weak => p.saturating_mul(d).saturating_sub(1),
        }
    }

    fn run(&mut self, d: i64, emit: bool) -> Result<(), FreeAlgError> {
        self.steps.tick()?;
        if emit && d <= self.max_degree {
            self.out.push(self.stack.iter().rev().copied().collect());
        }
        let depth = self.stack.len() as u32;
        if depth >= self.max_len {
            return Ok(());
        }
        let p = self.prime.as_i64();
        let remaining = self.max_len - depth - 1;
        let upper = self.stack.last().map(|top| p * top.index.doubled() - 2 * top.epsilon());
        let mut s = match self.mode {
            Mode::Strict => d + 1,
            Mode::Weak => d,
        };
        if (s - self.twist_bit).rem_euclid(2) == 1 {
            s += 1;
        }
        loop {
            if upper.is_some_and(|u| s > u) {
                break;
            }
            let base = d + s * (p - 1);
            if !reachable(base - 1, remaining, self.max_degree, |x| self.lower_bound(x)) {
                break;
            }
            for bockstein in [false, true] {
                let op = Op::new(bockstein, HalfInt::from_doubled(s));
                if let Some(top) = self.stack.last() {
                    debug_assert!(pair_admissible(op, *top, self.prime));
                }
                let emit = match self.mode {
                    Mode::Strict => true,
                    Mode::Weak => s - op.epsilon() >= d,
                };
                self.stack.push(op);
                self.run(base - op.epsilon(), emit)?;
                self.stack.pop();
            }
            s += 2;
        }
        Ok(())
    }
}

fn search_words(
    ctx: &AlgebraContext,
    gen: &Generator,
    max_degree: i64,
    max_charge: u64,
    mode: Mode,
    steps: &mut Steps,
) -> Result<Vec<Vec<Op>>, FreeAlgError> {
    let prime = ctx.prime();
    let Some(max_len) = max_length(prime, max_charge) else {
        return Ok(Vec::new());
    };
    let mut search = WordSearch {
        prime,
        twist_bit: ctx.grading().lambda(&gen.bidegree.g),
        max_degree,
        max_len,
        mode,
        steps,
        stack: Vec::new(),
        out: Vec::new(),
    };
    search.run(gen.bidegree.n, true)?;
    Ok(search.out)
}

/// The classes `Q^I x` of `Q(S)` for one generator with internal degree at
/// most `max_degree` and charge at most `max_charge`, sorted.
pub fn enumerate_qset_for(
    ctx: &AlgebraContext,
    gen: &Arc<Generator>,
    max_degree: i64,
    max_charge: u64,
) -> Result<Vec<QClass>, FreeAlgError> {
    let mut steps = Steps::new(ctx.budget());
    let words = search_words(ctx, gen, max_degree, max_charge, Mode::Strict, &mut steps)?;
    let mut out: Vec<QClass> = words.into_iter().map(|w| QClass::new(Arc::clone(gen), w)).collect();
    out.sort();
    Ok(out)
}

/// `Q(S)` truncated at internal degree `max_degree` and charge `max_charge`, sorted.
pub fn enumerate_qset(ctx: &AlgebraContext, max_degree: i64, max_charge: u64) -> Result<Vec<QClass>, FreeAlgError> {
    let mut steps = Steps::new(ctx.budget());
    let mut out = Vec::new();
    for gen in ctx.generators() {
        for w in search_words(ctx, gen, max_degree, max_charge, Mode::Strict, &mut steps)? {
            out.push(QClass::new(Arc::clone(gen), w));
        }
    }
    out.sort();
    Ok(out)
}

/// Basis of the free allowable module on one generator: admissible `I` with
/// `e(I) >= n`. Without the charge cutoff the list is infinite
/// (`Q^0 Q^0 ... x` in degree 0), so both cutoffs are required.
pub fn enumerate_dmodule_basis(
    ctx: &AlgebraContext,
    gen: &Arc<Generator>,
    max_degree: i64,
    max_charge: u64,
) -> Result<Vec<QClass>, FreeAlgError> {
    let mut steps = Steps::new(ctx.budget());
    let words = search_words(ctx, gen, max_degree, max_charge, Mode::Weak, &mut steps)?;
    let mut out: Vec<QClass> = words.into_iter().map(|w| QClass::new(Arc::clone(gen), w)).collect();
    out.sort();
    Ok(out)
}

struct Factor {
    class: QClass,
    degree: i64,
    charge: u64,
    grade: Grade,
    even: bool,
}

/// Visits every sorted, square-respecting monomial with charge at most
/// `max_charge` and degree at most `max_degree`.
fn for_each_monomial(
    ctx: &AlgebraContext,
    max_degree: i64,
    max_charge: u64,
    mut visit: impl FnMut(&Monomial, i64, u64, &Grade),
) -> Result<(), FreeAlgError> {
    let prime = ctx.prime();
    let n_min = ctx.min_degree();
    // the other factors contribute at least charge * n_min
    let slack = (max_charge as i64).saturating_mul(-n_min);
    let qset = enumerate_qset(ctx, max_degree.saturating_add(slack), max_charge)?;
    let factors: Vec<Factor> = qset
        .into_iter()
        .map(|q| Factor {
            degree: q.degree(prime),
            charge: q.charge(prime),
            grade: q.grade(ctx),
            even: !q.is_odd(ctx),
            class: q,
        })
        .collect();

    struct Dfs<'a, F> {
        ctx: &'a AlgebraContext,
        factors: &'a [Factor],
        max_degree: i64,
        max_charge: u64,
        n_min: i64,
        steps: Steps,
        current: Vec<(QClass, u32)>,
        visit: F,
    }

    impl<F: FnMut(&Monomial, i64, u64, &Grade)> Dfs<'_, F> {
        fn feasible(&self, degree: i64, charge: u64) -> bool {
            degree + (self.max_charge - charge) as i64 * self.n_min <= self.max_degree
        }

        fn go(&mut self, start: usize, degree: i64, charge: u64, grade: Grade) -> Result<(), FreeAlgError> {
            self.steps.tick()?;
            if degree <= self.max_degree {
                let m = Monomial::from_sorted(self.current.clone());
                (self.visit)(&m, degree, charge, &grade);
            }
            for i in start..self.factors.len() {
                let f = &self.factors[i];
                let max_mult = if f.even { u32::MAX } else { 1 };
                let (mut d, mut c, mut g) = (degree, charge, grade.clone());
                let mut k = 0u32;
                while k < max_mult {
                    k += 1;
                    c += f.charge;
                    d += f.degree;
                    if c > self.max_charge || !self.feasible(d, c) {
                        break;
                    }
                    g = self.ctx.grading().add(&g, &f.grade);
                    self.current.push((f.class.clone(), k));
                    let r = self.go(i + 1, d, c, g.clone());
                    self.current.pop();
                    r?;
                }
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        ctx,
        factors: &factors,
        max_degree,
        max_charge,
        n_min,
        steps: Steps::new(ctx.budget()),
        current: Vec::new(),
        visit: &mut visit,
    };
    dfs.go(0, 0, 0, ctx.grading().group().zero())
}

/// All basis monomials with charge at most `max_charge` and internal degree
/// at most `max_degree`, in sorted order.
pub fn monomials_up_to(ctx: &AlgebraContext, max_degree: i64, max_charge: u64) -> Result<Vec<Monomial>, FreeAlgError> {
    let mut out = Vec::new();
    for_each_monomial(ctx, max_degree, max_charge, |m, _, _, _| out.push(m.clone()))?;
    out.sort();
    Ok(out)
}

/// Basis of `H_{g,n}` of the free algebra, restricted to charge at most `max_charge`.
pub fn basis(ctx: &AlgebraContext, bidegree: &Bidegree, max_charge: u64) -> Result<Vec<Monomial>, FreeAlgError> {
    ctx.grading().group().validate(&bidegree.g)?;
    let mut out = Vec::new();
    for_each_monomial(ctx, bidegree.n, max_charge, |m, d, _, g| {
        if d == bidegree.n && *g == bidegree.g {
            out.push(m.clone());
        }
    })?;
    out.sort();
    Ok(out)
}

pub(super) fn visit_monomials(
    ctx: &AlgebraContext,
    max_degree: i64,
    max_charge: u64,
    visit: impl FnMut(&Monomial, i64, u64, &Grade),
) -> Result<(), FreeAlgError> {
    for_each_monomial(ctx, max_degree, max_charge, visit)
}
