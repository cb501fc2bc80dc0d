//! Lower-indexed operations `Q_{i(p-1)}`, `βQ_{i(p-1)}` and their Adem
//! relations. These exist to cross-check the upper-indexed relations: the two
//! formula families are evaluated independently and compared after converting
//! through [`lower_from_upper`].

use std::collections::BTreeMap;

use crate::arith::{binom_mod_p, half_factorial, v_const, Fp, Prime, Sign};

use super::{add_into, adem_expand, DlError, Op};

/// `Q_{index (p-1)}`, or `βQ_{index (p-1)}` when `bockstein` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LowerOp {
    pub bockstein: bool,
    pub index: i64,
}

impl LowerOp {
    pub fn new(bockstein: bool, index: i64) -> Self {
        LowerOp { bockstein, index }
    }

    /// Chain degree of the output when applied in degree `n`.
    pub fn target_degree(self, n: i64, prime: Prime) -> i64 {
        self.index * (prime.as_i64() - 1) + prime.as_i64() * n - self.bockstein as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerTerm {
    pub outer: LowerOp,
    pub inner: LowerOp,
    pub coeff: Fp,
}

/// An upper-indexed operation in degree `n` equals `coeff` times the
/// lower-indexed operation of the given index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerConversion {
    pub index: i64,
    pub coeff: Fp,
    /// The lower index is out of range, so the operation is zero.
    pub vanishes: bool,
}

impl LowerConversion {
    /// The subscript `index (p-1)` as written on `Q_{index (p-1)}`.
    pub fn subscript(&self, prime: Prime) -> i64 {
        self.index * (prime.as_i64() - 1)
    }
}

pub fn lower_from_upper(op: Op, n: i64, prime: Prime) -> LowerConversion {
    let s = op.index.doubled();
    // 2s - n in both the integer and the half-integer case
    let index = s - n;
    let coeff = match op.index.as_integer() {
        Some(k) => Sign::from_parity(k).to_fp(prime) * v_const(n, prime),
        None => {
            let t = op.index.floor();
            Sign::from_parity(t).to_fp(prime) * half_factorial(prime).pow(3) * v_const(n, prime)
        }
    };
    let vanishes = index < 0 || (op.bockstein && index <= 0);
    LowerConversion { index, coeff, vanishes }
}

/// Whether a lower-indexed operation is zero on `H_{g,n}` with `chi(g) = chi`,
/// by range or by the parity rule `(-1)^{n+i} chi = -1`.
pub fn lower_op_vanishes(op: LowerOp, n: i64, chi: Sign) -> bool {
    op.index < 0 || (op.bockstein && op.index <= 0) || (Sign::from_parity(n + op.index) * chi).is_minus()
}

/// The four shapes of lower-indexed Adem relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdemCase {
    QQ,
    BetaQQ,
    QBetaQ,
    BetaQBetaQ,
}

impl AdemCase {
    pub const ALL: [AdemCase; 4] = [AdemCase::QQ, AdemCase::BetaQQ, AdemCase::QBetaQ, AdemCase::BetaQBetaQ];

    pub fn outer_bockstein(self) -> bool {
        matches!(self, AdemCase::BetaQQ | AdemCase::BetaQBetaQ)
    }

    pub fn inner_bockstein(self) -> bool {
        matches!(self, AdemCase::QBetaQ | AdemCase::BetaQBetaQ)
    }

    fn check_range(self, r: i64, s: i64) -> Result<(), DlError> {
        if self.inner_bockstein() {
            if r < s {
                return Err(DlError::LowerRange { r, s, relation: ">=" });
            }
        } else if r <= s {
            return Err(DlError::LowerRange { r, s, relation: ">" });
        }
        Ok(())
    }
}

/// Right-hand side of the lower-indexed Adem relation for
/// `(β)Q_{r(p-1)} (β)Q_{s(p-1)}` on a class of degree `n` with twist `chi`.
///
/// The list is returned as the formulas produce it, before dropping terms
/// whose operations vanish; see [`reduce_lower_terms`].
pub fn adem_expand_lower(
    r: i64,
    s: i64,
    n: i64,
    chi: Sign,
    prime: Prime,
    case: AdemCase,
) -> Result<Vec<LowerTerm>, DlError> {
    case.check_range(r, s)?;
    let p = prime.as_i64();
    let h = prime.half();
    let q_gns = ((chi * Sign::from_parity(n)).pow(h) * Sign::from_parity(s * h)).to_fp(prime);
    let q_gr = (chi.pow(h) * Sign::from_parity(r * h)).to_fp(prime) * half_factorial(prime);
    let outer_b = case.outer_bockstein();

    let mut out = Vec::new();
    let mut push = |outer: LowerOp, inner: LowerOp, coeff: Fp| {
        if !coeff.is_zero() {
            out.push(LowerTerm { outer, inner, coeff });
        }
    };
    // (j - s)(p-1)/2 is an integer since p is odd.
    for j in (s - 1)..=(r + 1) {
        let a = (j - s) * h;
        if !case.inner_bockstein() {
            if (r - j) % 2 != 0 {
                continue;
            }
            let b = (r - j) / 2;
            let t = Sign::from_parity(b).to_fp(prime) * binom_mod_p(a - 1, b - 1, prime);
            push(LowerOp::new(outer_b, r + p * s - p * j), LowerOp::new(false, j), q_gns * t);
        } else {
            if (r - 1 - j) % 2 != 0 {
                continue;
            }
            let b = (r - 1 - j) / 2;
            let sign = Sign::from_parity(b).to_fp(prime);
            let t = sign * binom_mod_p(a - 1, b, prime);
            if outer_b {
                push(LowerOp::new(true, r + p * s - p * j), LowerOp::new(true, j), -(q_gns * t));
            } else {
                // (j-s)(p-1) / (pj - s(p-1) - r + 1) * binom(a-1, b) = a/(a-b) * binom(a-1, b)
                // = binom(a, b); the binomial form stays defined when a = b.
                let quotient_t = sign * binom_mod_p(a, b, prime);
                push(LowerOp::new(true, r - 1 + p * s - p * j), LowerOp::new(false, j), q_gr * quotient_t);
                push(LowerOp::new(false, r + p * s - p * j), LowerOp::new(true, j), -(q_gns * t));
            }
        }
    }
    Ok(out)
}

/// Merges like terms and drops terms whose inner or outer operation
/// vanishes on a class of degree `n` and twist `chi`. Output is sorted.
pub fn reduce_lower_terms(terms: &[LowerTerm], n: i64, chi: Sign, prime: Prime) -> Vec<LowerTerm> {
    let mut merged: BTreeMap<(LowerOp, LowerOp), Fp> = BTreeMap::new();
    for t in terms {
        if lower_op_vanishes(t.inner, n, chi) {
            continue;
        }
        if lower_op_vanishes(t.outer, t.inner.target_degree(n, prime), chi) {
            continue;
        }
        add_into(&mut merged, (t.outer, t.inner), t.coeff);
    }
    merged.into_iter().map(|((outer, inner), coeff)| LowerTerm { outer, inner, coeff }).collect()
}

/// The same relation computed through the upper-indexed Adem relation:
/// convert the left side to upper indexing, expand, and convert every output
/// term back. Returns the reduced term list (empty when the left side is a
/// zero operation).
pub fn upper_route(r: i64, s: i64, n: i64, chi: Sign, prime: Prime, case: AdemCase) -> Result<Vec<LowerTerm>, DlError> {
    case.check_range(r, s)?;
    let inner_l = LowerOp::new(case.inner_bockstein(), s);
    let outer_l = LowerOp::new(case.outer_bockstein(), r);
    let mid = inner_l.target_degree(n, prime);
    if lower_op_vanishes(inner_l, n, chi) || lower_op_vanishes(outer_l, mid, chi) {
        return Ok(Vec::new());
    }

    let inner_u = Op::new(inner_l.bockstein, crate::arith::HalfInt::from_doubled(s + n));
    let outer_u = Op::new(outer_l.bockstein, crate::arith::HalfInt::from_doubled(r + mid));
    let ci = lower_from_upper(inner_u, n, prime);
    let co = lower_from_upper(outer_u, mid, prime);
    debug_assert_eq!((ci.index, co.index), (s, r));
    let scale = (ci.coeff * co.coeff).inverse().expect("conversion constants are units");

    let rhs = adem_expand(outer_u, inner_u, chi, prime)?;
    let mut terms = Vec::new();
    for (ops, c) in rhs.terms() {
        let (a, b) = (ops[0], ops[1]);
        let cb = lower_from_upper(b, n, prime);
        let ca = lower_from_upper(a, n + b.degree(prime), prime);
        terms.push(LowerTerm {
            outer: LowerOp::new(a.bockstein, ca.index),
            inner: LowerOp::new(b.bockstein, cb.index),
            coeff: c * ca.coeff * cb.coeff * scale,
        });
    }
    Ok(reduce_lower_terms(&terms, n, chi, prime))
}
