use crate::arith::{binom_mod_p, twist_power, HalfInt, Prime, Sign};

use super::{pair_admissible, DlElement, DlError, Op};

/// Right-hand side of the Adem relation for the inadmissible pair
/// `outer · inner` acting on a class of twist `twist`.
///
/// Pairs whose indices are not both in the operative class of `twist` are
/// zero operations, so the zero element is returned for them.
pub fn adem_expand(outer: Op, inner: Op, twist: Sign, prime: Prime) -> Result<DlElement, DlError> {
    let mut out = DlElement::zero(prime, twist);
    if outer.index.twist_class() != twist || inner.index.twist_class() != twist {
        return Ok(out);
    }
    if pair_admissible(outer, inner, prime) {
        return Err(DlError::AlreadyAdmissible { outer, inner });
    }

    let p = prime.as_i64();
    let (r, s) = (outer.index.doubled(), inner.index.doubled());
    let chi_term = twist_power(twist, prime);

    // Nonzero terms need p i >= r and i <= r - (p-1) s (doubled here); widen
    // the window and let the binomials decide. i runs over the class of s.
    let base = r.div_euclid(p) - 4;
    let lo = base - (base - s).rem_euclid(2);
    let hi = r - (p - 1) * s + 2;

    for i in (lo..=hi).step_by(2) {
        // all quantities below are integers: r - i and i - s are even when doubled
        let i_minus_s = (i - s) / 2;
        let r_minus_i = (r - i) / 2;
        let tail = (r - (p - 1) * s - i) / 2;
        let sign = Sign::from_parity(r_minus_i).to_fp(prime);
        let top = HalfInt::from_doubled(r + s - i);
        let bottom = HalfInt::from_doubled(i);

        match (outer.bockstein, inner.bockstein) {
            (eps, false) => {
                let c = chi_term * sign * binom_mod_p(i_minus_s * (p - 1) - 1, tail - 1, prime);
                out.add_term(vec![Op::new(eps, top), Op::new(false, bottom)], c);
            }
            (false, true) => {
                // The βQ·Q sum carries the same twist prefactor as the others; without
                // it the relation disagrees with its lower-indexed form and with the
                // Cartan formula whenever chi^{(p-1)/2} = -1.
                let c1 = chi_term * sign * binom_mod_p(i_minus_s * (p - 1), tail, prime);
                out.add_term(vec![Op::new(true, top), Op::new(false, bottom)], c1);
                let c2 = -(chi_term * sign * binom_mod_p(i_minus_s * (p - 1) - 1, tail, prime));
                out.add_term(vec![Op::new(false, top), Op::new(true, bottom)], c2);
            }
            (true, true) => {
                let c = -(chi_term * sign * binom_mod_p(i_minus_s * (p - 1) - 1, tail, prime));
                out.add_term(vec![Op::new(true, top), Op::new(true, bottom)], c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn q2_q0_at_three() {
        let e = adem_expand(Op::q(4), Op::q(0), Sign::Plus, p(3)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&[Op::q(2), Op::q(2)]).value(), 2);
    }

    #[test]
    fn twisted_pair_vanishes() {
        let e = adem_expand(Op::q(5), Op::q(1), Sign::Minus, p(3)).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn mixed_parity_is_zero() {
        let e = adem_expand(Op::q(2), Op::q(1), Sign::Plus, p(3)).unwrap();
        assert!(e.is_zero());
        let e = adem_expand(Op::q(2), Op::q(1), Sign::Minus, p(3)).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn admissible_pair_is_rejected() {
        assert!(matches!(adem_expand(Op::q(6), Op::q(2), Sign::Plus, p(3)), Err(DlError::AlreadyAdmissible { .. })));
    }

    #[test]
    fn outputs_are_admissible_pairs() {
        for prime in [p(3), p(5), p(7)] {
            for twist in [Sign::Plus, Sign::Minus] {
                let off = twist.bit();
                for r in -12..=12 {
                    for s in -12..=12 {
                        for (eo, ei) in [(false, false), (true, false), (false, true), (true, true)] {
                            let outer = Op::new(eo, HalfInt::from_doubled(2 * r + off));
                            let inner = Op::new(ei, HalfInt::from_doubled(2 * s + off));
                            if pair_admissible(outer, inner, prime) {
                                continue;
                            }
                            let e = adem_expand(outer, inner, twist, prime).unwrap();
                            for (ops, _) in e.terms() {
                                assert!(pair_admissible(ops[0], ops[1], prime), "{outer} {inner} -> {ops:?}");
                                let before = outer.degree(prime) + inner.degree(prime);
                                assert_eq!(ops[0].degree(prime) + ops[1].degree(prime), before);
                            }
                        }
                    }
                }
            }
        }
    }
}
