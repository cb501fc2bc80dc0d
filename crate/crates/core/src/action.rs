//! Action of `β^ε Q^s` on the free algebra basis.
//!
//! A single class `Q^J x` is handled by prepending the operation, rewriting
//! into admissible form and reading each word back as a basis class (or a
//! `p`-th power, or zero). Products go through the Cartan formula, splitting
//! off the first sorted factor.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::arith::{Fp, HalfInt, Sign};
use crate::dlalgebra::{Normalizer, Op, OpWord};
use crate::freealg::{multiply, AlgebraContext, AlgebraElement, FreeAlgError, Generator, Monomial, QClass};

/// Applies operations in a fixed context, memoizing results per monomial.
#[derive(Debug)]
pub struct Action {
    ctx: AlgebraContext,
    normalizer: Normalizer,
    memo: RwLock<HashMap<(Op, Monomial), AlgebraElement>>,
}

impl Action {
    pub fn new(ctx: AlgebraContext) -> Self {
        let normalizer = Normalizer::new(ctx.prime());
        Action { ctx, normalizer, memo: RwLock::new(HashMap::new()) }
    }

    /// Uses `budget` as the Adem rewrite budget per normalization.
    pub fn with_rewrite_budget(mut self, budget: u64) -> Self {
        self.normalizer = Normalizer::new(self.ctx.prime()).with_budget(budget);
        self
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn apply_op(&self, op: Op, e: &AlgebraElement) -> Result<AlgebraElement, FreeAlgError> {
        let mut out = AlgebraElement::zero(self.ctx.prime());
        for (m, c) in e.terms() {
            out.add_scaled(&self.apply_monomial(op, m)?, c);
        }
        Ok(out)
    }

    /// Applies a word, innermost operation first.
    pub fn apply_word(&self, ops: &[Op], e: &AlgebraElement) -> Result<AlgebraElement, FreeAlgError> {
        let mut cur = e.clone();
        for &op in ops.iter().rev() {
            cur = self.apply_op(op, &cur)?;
        }
        Ok(cur)
    }

    pub fn apply_monomial(&self, op: Op, m: &Monomial) -> Result<AlgebraElement, FreeAlgError> {
        let key = (op, m.clone());
        if let Some(hit) = self.memo.read().expect("action memo poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let result = match m.split_first() {
            None => self.apply_unit(op),
            Some((u, rest)) if rest.is_unit() => self.apply_class(op, &u)?,
            Some((u, rest)) => self.cartan(op, &u, &rest)?,
        };
        self.memo.write().expect("action memo poisoned").insert(key, result.clone());
        Ok(result)
    }

    fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.ctx.prime())
    }

    fn apply_unit(&self, op: Op) -> AlgebraElement {
        // only Q^0 survives on the unit, where it is 1^p = 1
        if !op.bockstein && op.index == HalfInt::ZERO {
            self.ctx.unit()
        } else {
            self.zero()
        }
    }

    fn apply_class(&self, op: Op, q: &QClass) -> Result<AlgebraElement, FreeAlgError> {
        let prime = self.ctx.prime();
        let twist = q.twist(&self.ctx);
        if op.index.twist_class() != twist {
            return Ok(self.zero());
        }
        let n = q.degree(prime);
        let s2 = op.index.doubled();
        if s2 < n + op.epsilon() {
            return Ok(self.zero());
        }
        if !op.bockstein && s2 == n {
            return Ok(self.power(q.clone(), 1));
        }
        let mut ops = Vec::with_capacity(q.len() + 1);
        ops.push(op);
        ops.extend_from_slice(q.ops());
        let normal = self.normalizer.normalize_word(&OpWord::new(ops, twist))?;
        let mut out = self.zero();
        for (word, c) in normal.words() {
            out.add_scaled(&self.evaluate_admissible(&word.ops, q.generator())?, c);
        }
        Ok(out)
    }

    /// `q^{p^k}` as an element; zero if `q` squares to zero.
    fn power(&self, q: QClass, k: u32) -> AlgebraElement {
        if q.is_odd(&self.ctx) {
            return self.zero();
        }
        let exp = self.ctx.prime().pow(k) as u32;
        AlgebraElement::from_monomial(Monomial::power_of(q, exp), self.ctx.prime())
    }

    /// `Q^I x` for admissible `I`: a basis class when the excess is strict,
    /// a `p`-th power of a shorter class on the equality boundary, else zero.
    fn evaluate_admissible(&self, ops: &[Op], gen: &Arc<Generator>) -> Result<AlgebraElement, FreeAlgError> {
        let prime = self.ctx.prime();
        let mut d = gen.bidegree.n;
        for (pos, op) in ops.iter().enumerate().rev() {
            let gap = op.index.doubled() - d;
            if gap < op.epsilon() {
                return Ok(self.zero());
            }
            if gap == 0 {
                // Q^{d/2} on degree d: this and every outer step are p-th powers
                let inner = QClass::new(Arc::clone(gen), ops[pos + 1..].to_vec());
                return self.apply_word(&ops[..pos], &self.power(inner, 1));
            }
            d += op.degree(prime);
        }
        let q = QClass::new(Arc::clone(gen), ops.to_vec());
        Ok(AlgebraElement::from_monomial(Monomial::single(q), prime))
    }

    /// `Q^s(uv) = shuffle(u,v) Σ_{j+k=s} (-1)^{2jk(p-1)} Q^j u Q^k v`, and for
    /// `βQ^s` the two Bockstein placements, the second with sign `(-1)^{|u|}`.
    fn cartan(&self, op: Op, u: &QClass, v: &Monomial) -> Result<AlgebraElement, FreeAlgError> {
        let ctx = &self.ctx;
        let prime = ctx.prime();
        let (gu, gv) = (u.grade(ctx), v.grade(ctx));
        let (lu, lv) = (ctx.grading().lambda(&gu), ctx.grading().lambda(&gv));
        if op.index.twist_class() != Sign::from_parity(lu + lv) {
            return Ok(self.zero());
        }
        let (nu, nv) = (u.degree(prime), v.degree(prime));
        let s2 = op.index.doubled();
        let shuffle = ctx.grading().shuffle_sign(&gu, &gv).to_fp(prime);
        let ue = AlgebraElement::from_monomial(Monomial::single(u.clone()), prime);
        let ve = AlgebraElement::from_monomial(v.clone(), prime);
        let half = prime.half();

        let mut j2 = nu + (nu - lu).rem_euclid(2);
        let mut out = self.zero();
        while j2 <= s2 - nv {
            let k2 = s2 - j2;
            // 2jk(p-1) = j2 * k2 * (p-1)/2
            let sign = Sign::from_parity(j2 * k2 * half).to_fp(prime) * shuffle;
            let (qj, qk) = (Op::q(j2), Op::q(k2));
            if op.bockstein {
                let left = multiply(&self.apply_op(Op::bq(j2), &ue)?, &self.apply_op(qk, &ve)?, ctx)?;
                out.add_scaled(&left, sign);
                let right = multiply(&self.apply_op(qj, &ue)?, &self.apply_op(Op::bq(k2), &ve)?, ctx)?;
                out.add_scaled(&right, sign * Sign::from_parity(nu).to_fp(prime));
            } else {
                let term = multiply(&self.apply_op(qj, &ue)?, &self.apply_op(qk, &ve)?, ctx)?;
                out.add_scaled(&term, sign);
            }
            j2 += 2;
        }
        Ok(out)
    }
}

/// The homology suspension into the context with every generator degree
/// raised by one: `Σ(Q^J x) = (-1)^{#β in J} Q^J(σx)`, zero on decomposables.
#[derive(Debug)]
pub struct Suspension {
    base: Action,
    shifted: Action,
}

impl Suspension {
    pub fn new(ctx: AlgebraContext) -> Self {
        let shifted = Action::new(ctx.suspended());
        Suspension { base: Action::new(ctx), shifted }
    }

    pub fn base(&self) -> &Action {
        &self.base
    }

    pub fn shifted(&self) -> &Action {
        &self.shifted
    }

    pub fn suspend(&self, e: &AlgebraElement) -> Result<AlgebraElement, FreeAlgError> {
        let prime = self.base.ctx.prime();
        let mut out = AlgebraElement::zero(prime);
        for (m, c) in e.terms() {
            let [(q, 1)] = m.factors() else { continue };
            let sigma = self.shifted.ctx.gen_element(&q.generator().name)?;
            let image = self.shifted.apply_word(q.ops(), &sigma)?;
            let sign = Sign::from_parity(q.ops().iter().filter(|o| o.bockstein).count() as i64);
            out.add_scaled(&image, c * sign.to_fp(prime));
        }
        Ok(out)
    }

    /// Whether `Σ(op e) = (-1)^ε op(Σ e)`.
    pub fn commutes(&self, op: Op, e: &AlgebraElement) -> Result<bool, FreeAlgError> {
        let lhs = self.suspend(&self.base.apply_op(op, e)?)?;
        let sign = Fp::new(if op.bockstein { -1 } else { 1 }, self.base.ctx.prime());
        let rhs = self.shifted.apply_op(op, &self.suspend(e)?)?.scaled(sign);
        Ok(lhs == rhs)
    }
}
