//! Group homology read off free algebras on one point: symmetric groups with
//! trivial or sign coefficients, and alternating groups as their sum.
//!
//! The free E∞-algebra on a point of grading 1 splits by charge `k` into the
//! classifying spaces of `S_k`, so `H_q(S_k)` is the charge-`k`, degree-`q`
//! part. With a single generator of grading 1 the grading also equals `k`;
//! both counts are reported and must agree.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Prime, Sign};
use crate::freealg::{monomials_up_to, AlgebraContext, FreeAlgError, Generator};
use crate::grading::{Bidegree, Grade, GradingContext, GradingGroup, TwistCharacter};

/// `Γ = Z`, one generator `x` at `(1, 0)`, `chi(1) = twist`.
fn point_context(p: Prime, twist: Sign) -> AlgebraContext {
    let grading = GradingContext::new(p, GradingGroup::integers(), TwistCharacter::new(vec![twist]))
        .expect("rank-one character is valid");
    AlgebraContext::new(grading, vec![Generator::new("x", Bidegree::new(Grade::new(vec![1]), 0))])
        .expect("single generator is valid")
}

/// Sign coefficients: the braiding of the point with itself acts by `-1`.
pub fn sign_preset(p: Prime) -> AlgebraContext {
    point_context(p, Sign::Minus)
}

/// Trivial coefficients.
pub fn untwisted_preset(p: Prime) -> AlgebraContext {
    point_context(p, Sign::Plus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    SymmetricSign(u64),
    Symmetric(u64),
    Alternating(u64),
}

impl GroupLabel {
    pub fn k(self) -> u64 {
        match self {
            GroupLabel::SymmetricSign(k) | GroupLabel::Symmetric(k) | GroupLabel::Alternating(k) => k,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::SymmetricSign(k) => write!(f, "S_{k} sign"),
            GroupLabel::Symmetric(k) => write!(f, "S_{k}"),
            GroupLabel::Alternating(k) => write!(f, "A_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHomologyRow {
    pub group: GroupLabel,
    pub degree: i64,
    pub dimension: u64,
    /// Count taken from the charge grading.
    pub charge_dimension: u64,
    /// Count taken from the `Γ = Z` grading.
    pub grading_dimension: u64,
    pub basis: Vec<String>,
}

#[derive(Default)]
struct Counts {
    by_charge: BTreeMap<(u64, i64), Vec<String>>,
    by_grading: BTreeMap<(i64, i64), u64>,
}

fn counts(ctx: &AlgebraContext, max_k: u64, max_degree: i64) -> Result<Counts, FreeAlgError> {
    let prime = ctx.prime();
    let mut out = Counts::default();
    for m in monomials_up_to(ctx, max_degree, max_k)? {
        let d = m.degree(prime);
        out.by_charge.entry((m.charge(prime), d)).or_default().push(m.to_string());
        *out.by_grading.entry((m.grade(ctx).coords()[0], d)).or_default() += 1;
    }
    Ok(out)
}

fn rows_for(
    ctx: &AlgebraContext,
    label: fn(u64) -> GroupLabel,
    max_k: u64,
    max_degree: i64,
) -> Result<Vec<GroupHomologyRow>, FreeAlgError> {
    let c = counts(ctx, max_k, max_degree)?;
    let mut rows = Vec::new();
    for k in 0..=max_k {
        for q in 0..=max_degree {
            let basis = c.by_charge.get(&(k, q)).cloned().unwrap_or_default();
            let grading_dimension = c.by_grading.get(&(k as i64, q)).copied().unwrap_or(0);
            rows.push(GroupHomologyRow {
                group: label(k),
                degree: q,
                dimension: basis.len() as u64,
                charge_dimension: basis.len() as u64,
                grading_dimension,
                basis,
            });
        }
    }
    Ok(rows)
}

/// `H_q(S_k; F_p^sgn)` for `0 <= k <= max_k`, `0 <= q <= max_degree`.
pub fn sym_sign_table(p: Prime, max_k: u64, max_degree: i64) -> Result<Vec<GroupHomologyRow>, FreeAlgError> {
    rows_for(&sign_preset(p), GroupLabel::SymmetricSign, max_k, max_degree)
}

/// `H_q(S_k; F_p)` for `0 <= k <= max_k`, `0 <= q <= max_degree`.
pub fn sym_trivial_table(p: Prime, max_k: u64, max_degree: i64) -> Result<Vec<GroupHomologyRow>, FreeAlgError> {
    rows_for(&untwisted_preset(p), GroupLabel::Symmetric, max_k, max_degree)
}

/// `H_q(A_k; F_p) = H_q(S_k; F_p) ⊕ H_q(S_k; F_p^sgn)` for `2 <= k <= max_k`.
pub fn alternating_table(p: Prime, max_k: u64, max_degree: i64) -> Result<Vec<GroupHomologyRow>, FreeAlgError> {
    let trivial = sym_trivial_table(p, max_k, max_degree)?;
    let sign = sym_sign_table(p, max_k, max_degree)?;
    let rows = trivial
        .into_iter()
        .zip(sign)
        .filter(|(t, _)| t.group.k() >= 2)
        .map(|(t, s)| {
            debug_assert_eq!((t.group.k(), t.degree), (s.group.k(), s.degree));
            let mut basis = t.basis;
            basis.extend(s.basis);
            GroupHomologyRow {
                group: GroupLabel::Alternating(t.group.k()),
                degree: t.degree,
                dimension: t.dimension + s.dimension,
                charge_dimension: t.charge_dimension + s.charge_dimension,
                grading_dimension: t.grading_dimension + s.grading_dimension,
                basis,
            }
        })
        .collect();
    Ok(rows)
}

/// Looks up one row of a table.
pub fn row(rows: &[GroupHomologyRow], k: u64, degree: i64) -> Option<&GroupHomologyRow> {
    rows.iter().find(|r| r.group.k() == k && r.degree == degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn sign_examples() {
        let t = sym_sign_table(p3(), 4, 4).unwrap();
        let r = row(&t, 3, 1).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.basis, ["bQ^{1/2} x"]);
        assert_eq!(row(&t, 2, 0).unwrap().dimension, 0);
        assert_eq!(row(&t, 1, 0).unwrap().dimension, 1);
        assert!(t.iter().all(|r| r.charge_dimension == r.grading_dimension));
    }

    #[test]
    fn alternating_examples() {
        let t = alternating_table(p3(), 4, 2).unwrap();
        assert_eq!(row(&t, 3, 1).unwrap().dimension, 1);
        let a4 = row(&t, 4, 1).unwrap();
        assert_eq!(a4.dimension, 1);
        assert_eq!(a4.basis, ["x * bQ^{1/2} x"]);
        assert_eq!(row(&t, 3, 2).unwrap().dimension, 1);
        assert!(row(&t, 1, 0).is_none());
    }

    #[test]
    fn labels() {
        assert_eq!(GroupLabel::SymmetricSign(3).to_string(), "S_3 sign");
        assert_eq!(GroupLabel::Alternating(4).to_string(), "A_4");
    }
}
