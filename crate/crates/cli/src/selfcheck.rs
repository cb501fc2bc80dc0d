//! Quick run of the invariant suites against the installed library.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdl_core::action::Action;
use tdl_core::appcalc::{alternating_table, row, sign_preset, sym_sign_table, sym_trivial_table, untwisted_preset};
use tdl_core::arith::{binom_mod_p, Fp, HalfInt, Prime, Sign};
use tdl_core::dlalgebra::{
    adem_expand_lower, reduce_lower_terms, upper_route, AdemCase, DlElement, Normalizer, Op, OpWord, Strategy,
};
use tdl_core::freealg::{basis, enumerate_qset, AlgebraContext, AlgebraElement, Generator};
use tdl_core::grading::{Bidegree, Grade, GradingContext, GradingGroup, TwistCharacter};

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

fn prime(p: u32) -> Prime {
    Prime::new(p).expect("small odd prime")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_examples() -> Result<String, String> {
    let p = prime(3);
    let ctx = sign_preset(p);
    let b = |g: i64, n: i64| -> Result<Vec<String>, String> {
        let bd = Bidegree::new(Grade::new(vec![g]), n);
        Ok(basis(&ctx, &bd, 9).map_err(|e| e.to_string())?.iter().map(|m| m.to_string()).collect())
    };
    ensure(b(3, 1)? == ["bQ^{1/2} x"], || "basis (3,1)".into())?;
    ensure(b(3, 2)? == ["Q^{1/2} x"], || "basis (3,2)".into())?;
    ensure(b(2, 0)?.is_empty(), || "basis (2,0)".into())?;
    ensure(b(4, 1)? == ["x * bQ^{1/2} x"], || "basis (4,1)".into())?;
    let t = alternating_table(p, 4, 1).map_err(|e| e.to_string())?;
    for k in [3, 4] {
        ensure(row(&t, k, 1).map(|r| r.dimension) == Some(1), || format!("dim H_1(A_{k})"))?;
    }
    Ok("4 bases, 2 alternating dimensions".into())
}

fn charge_three_oracle() -> Result<String, String> {
    let p = prime(3);
    let sign = sym_sign_table(p, 3, 10).map_err(|e| e.to_string())?;
    let triv = sym_trivial_table(p, 3, 10).map_err(|e| e.to_string())?;
    for q in 0..=10i64 {
        let want_sign = u64::from(matches!(q.rem_euclid(4), 1 | 2));
        let want_triv = u64::from(matches!(q.rem_euclid(4), 0 | 3));
        ensure(row(&sign, 3, q).map(|r| r.dimension) == Some(want_sign), || format!("sign, degree {q}"))?;
        ensure(row(&triv, 3, q).map(|r| r.dimension) == Some(want_triv), || format!("trivial, degree {q}"))?;
    }
    Ok("degrees 0..=10, both coefficient systems".into())
}

fn random_word(rng: &mut ChaCha8Rng, twist: Sign) -> Vec<Op> {
    let len = rng.gen_range(1..=4);
    (0..len)
        .map(|_| {
            let mut s2: i64 = rng.gen_range(-40..=40);
            if (s2 - twist.bit()).rem_euclid(2) == 1 {
                s2 += if s2 == 40 { -1 } else { 1 };
            }
            Op::new(rng.gen_bool(0.5), HalfInt::from_doubled(s2))
        })
        .collect()
}

fn adem_rewriter() -> Result<String, String> {
    const WORDS: usize = 500;
    const BUDGET: u64 = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    let primes = [prime(3), prime(5), prime(7)];
    let left: Vec<Normalizer> = primes.iter().map(|&p| Normalizer::new(p).with_budget(BUDGET)).collect();
    let right: Vec<Normalizer> =
        primes.iter().map(|&p| Normalizer::new(p).with_budget(BUDGET).with_strategy(Strategy::Rightmost)).collect();
    let (mut checked, mut skipped) = (0, 0);
    for _ in 0..WORDS {
        let i = rng.gen_range(0..3);
        let p = primes[i];
        let twist = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let word = OpWord::new(random_word(&mut rng, twist), twist);
        let e = DlElement::from_word(&word, p);
        let (a, b) = match (left[i].normalize(&e), right[i].normalize(&e)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(x), _) | (_, Err(x)) if x.is_resource() => {
                skipped += 1;
                continue;
            }
            (Err(x), _) | (_, Err(x)) => return Err(x.to_string()),
        };
        ensure(a == b, || format!("strategies differ on {word:?}"))?;
        ensure(left[i].normalize(&a).map_err(|e| e.to_string())? == a, || format!("not idempotent on {word:?}"))?;
        for (w, _) in a.words() {
            ensure(w.is_admissible(p), || format!("inadmissible output for {word:?}"))?;
            ensure(w.degree(p) == word.degree(p) && w.charge(p) == word.charge(p), || {
                format!("degree or charge changed for {word:?}")
            })?;
        }
        checked += 1;
    }
    Ok(format!("{checked} words checked, {skipped} over the {BUDGET}-expansion budget"))
}

fn upper_lower() -> Result<String, String> {
    let mut n_checked = 0;
    for p in [prime(3), prime(5)] {
        for n in 0..=2 {
            for r in 0..=12 {
                for s in 0..r {
                    for case in AdemCase::ALL {
                        let lower = adem_expand_lower(r, s, n, Sign::Plus, p, case).map_err(|e| e.to_string())?;
                        let lower = reduce_lower_terms(&lower, n, Sign::Plus, p);
                        let upper = upper_route(r, s, n, Sign::Plus, p, case).map_err(|e| e.to_string())?;
                        ensure(lower == upper, || format!("p={p} r={r} s={s} n={n} {case:?}"))?;
                        n_checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{n_checked} relations"))
}

fn lucas() -> Result<String, String> {
    for p in [prime(3), prime(5), prime(7)] {
        for m in 0..=60i64 {
            // row of Pascal's triangle reduced mod p
            let mut row = vec![Fp::one(p)];
            for _ in 0..m {
                let mut next = vec![Fp::one(p); row.len() + 1];
                for j in 1..row.len() {
                    next[j] = row[j - 1] + row[j];
                }
                row = next;
            }
            for (n, &c) in row.iter().enumerate() {
                ensure(binom_mod_p(m, n as i64, p) == c, || format!("C({m},{n}) mod {p}"))?;
            }
        }
    }
    Ok("0 <= n <= m <= 60, p in {3, 5, 7}".into())
}

fn action_contracts() -> Result<String, String> {
    let p = prime(3);
    let mut count = 0;
    for ctx in [sign_preset(p), untwisted_preset(p)] {
        let a = Action::new(ctx.clone());
        let unit = ctx.unit();
        for s2 in -6..=6 {
            let op = Op::new(false, HalfInt::from_doubled(s2));
            let out = a.apply_op(op, &unit).map_err(|e| e.to_string())?;
            let want = if s2 == 0 { unit.clone() } else { AlgebraElement::zero(p) };
            ensure(out == want, || format!("Q^{{{}}}(1)", HalfInt::from_doubled(s2)))?;
            count += 1;
        }
    }
    Ok(format!("{count} unit evaluations"))
}

fn excess_law() -> Result<String, String> {
    let mut count = 0;
    for p in [prime(3), prime(5)] {
        for chi in [Sign::Plus, Sign::Minus] {
            for n in -2..=3 {
                let grading = GradingContext::new(p, GradingGroup::integers(), TwistCharacter::new(vec![chi]))
                    .map_err(|e| e.to_string())?;
                let g = Generator::new("x", Bidegree::new(Grade::new(vec![1]), n));
                let ctx = AlgebraContext::new(grading, vec![g]).map_err(|e| e.to_string())?;
                for q in enumerate_qset(&ctx, 30, 27).map_err(|e| e.to_string())? {
                    let d = q.degree(p);
                    let bound = q.charge(p) as i64 * n;
                    ensure(d >= bound && (d == bound) == q.is_empty(), || format!("{q} at n={n}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} classes"))
}

pub fn run() -> Vec<CheckResult> {
    type Suite = (&'static str, fn() -> Result<String, String>);
    let suites: [Suite; 7] = [
        ("worked examples", worked_examples),
        ("charge-3 oracle tables", charge_three_oracle),
        ("Adem rewriter", adem_rewriter),
        ("upper/lower cross-check", upper_lower),
        ("Lucas vs Pascal", lucas),
        ("unit action", action_contracts),
        ("excess/degree law", excess_law),
    ];
    suites.iter().map(|&(name, f)| CheckResult { name, outcome: f() }).collect()
}
