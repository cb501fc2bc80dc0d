use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::arith::{Fp, Prime, Sign};

use super::{add_into, adem_expand, pair_admissible, DlElement, DlError, Op, OpWord};

/// Orders words by length, then lexicographically by `(s_j, -ε_j)`. Every Adem
/// rewrite keeps the positions before the rewritten pair and strictly lowers
/// the pair's outer entry in this order, so expanding pending words from the
/// largest down visits each word once, after all its contributions arrived.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Measure(Vec<Op>);

impl Ord for Measure {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |op: &Op| (op.index.doubled(), !op.bockstein);
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().map(key).cmp(other.0.iter().map(key)))
    }
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub const DEFAULT_REWRITE_BUDGET: u64 = 1_000_000;

/// Cap on pending plus finished terms during one normalization. Words with
/// very negative inner indices have normal forms with millions of terms.
pub const DEFAULT_TERM_LIMIT: usize = 2_000_000;

/// Which inadmissible adjacent pair gets rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Outermost pair first.
    #[default]
    Leftmost,
    /// Innermost pair first.
    Rightmost,
}

type PairKey = (Op, Op, Sign);
type Expansion = Arc<Vec<(Op, Op, Fp)>>;

/// Rewrites elements into the admissible basis by repeated Adem expansion.
///
/// Expansions of individual pairs are memoized; the table is shared behind a
/// lock so one normalizer can serve several threads.
#[derive(Debug)]
pub struct Normalizer {
    prime: Prime,
    budget: u64,
    term_limit: usize,
    strategy: Strategy,
    cache: RwLock<HashMap<PairKey, Expansion>>,
}

impl Normalizer {
    pub fn new(prime: Prime) -> Self {
        Normalizer {
            prime,
            budget: DEFAULT_REWRITE_BUDGET,
            term_limit: DEFAULT_TERM_LIMIT,
            strategy: Strategy::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_term_limit(mut self, limit: usize) -> Self {
        self.term_limit = limit;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn expansion(&self, outer: Op, inner: Op, twist: Sign) -> Result<Expansion, DlError> {
        let key = (outer, inner, twist);
        if let Some(hit) = self.cache.read().expect("adem cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let rhs = adem_expand(outer, inner, twist, self.prime)?;
        let terms: Vec<(Op, Op, Fp)> = rhs.terms().map(|(ops, c)| (ops[0], ops[1], c)).collect();
        let terms = Arc::new(terms);
        self.cache.write().expect("adem cache poisoned").entry(key).or_insert_with(|| Arc::clone(&terms));
        Ok(terms)
    }

    fn find_pair(&self, ops: &[Op]) -> Option<usize> {
        let bad = |j: &usize| !pair_admissible(ops[*j], ops[*j + 1], self.prime);
        let n = ops.len().saturating_sub(1);
        match self.strategy {
            Strategy::Leftmost => (0..n).find(bad),
            Strategy::Rightmost => (0..n).rev().find(bad),
        }
    }

    pub fn normalize(&self, e: &DlElement) -> Result<DlElement, DlError> {
        self.normalize_counted(e).map(|(out, _)| out)
    }

    /// Like [`Normalizer::normalize`], also returning the number of Adem expansions used.
    pub fn normalize_counted(&self, e: &DlElement) -> Result<(DlElement, u64), DlError> {
        let twist = e.twist();
        let mut pending: BTreeMap<Measure, Fp> = BTreeMap::new();
        for (ops, c) in e.terms() {
            add_into(&mut pending, Measure(ops.to_vec()), c);
        }
        let mut done: BTreeMap<Vec<Op>, Fp> = BTreeMap::new();
        let mut steps = 0u64;

        while let Some((Measure(ops), c)) = pending.pop_last() {
            // operations outside the operative class act as zero
            if ops.iter().any(|op| op.index.twist_class() != twist) {
                continue;
            }
            let Some(j) = self.find_pair(&ops) else {
                add_into(&mut done, ops, c);
                continue;
            };
            steps += 1;
            if steps > self.budget {
                return Err(DlError::BudgetExhausted(self.budget));
            }
            for &(a, b, coeff) in self.expansion(ops[j], ops[j + 1], twist)?.iter() {
                let mut next = Vec::with_capacity(ops.len());
                next.extend_from_slice(&ops[..j]);
                next.push(a);
                next.push(b);
                next.extend_from_slice(&ops[j + 2..]);
                add_into(&mut pending, Measure(next), c * coeff);
            }
            if pending.len() + done.len() > self.term_limit {
                return Err(DlError::TermLimit(self.term_limit));
            }
        }
        Ok((DlElement::from_terms(self.prime, twist, done), steps))
    }

    pub fn normalize_word(&self, word: &OpWord) -> Result<DlElement, DlError> {
        self.normalize(&DlElement::from_word(word, self.prime))
    }
}
