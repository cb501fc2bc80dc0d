//! Expression syntax shared by the commands.
//!
//! ```text
//! element := term ('+' term)*
//! term    := [coeff '*'] factor ('*' factor)*
//! factor  := opword? (genname | '1') ['^' k] | '(' opword? genname ')' '^' k
//! opword  := (('b')? 'Q' '^' '{' rational '}')+
//! ```
//!
//! `rational` is `a` or `a/2`. `gen^k` binds tighter than the operations, so
//! `Q^{1} x^3` is `Q^{1}(x^3)`; the printer writes `(Q^{1} x)^3` for a power
//! of a class. Whitespace is insignificant.

use tdl_core::action::Action;
use tdl_core::arith::{Fp, HalfInt, Prime, Sign};
use tdl_core::dlalgebra::{DlElement, Op};
use tdl_core::freealg::{multiply, power, AlgebraElement};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Q { bockstein: bool },
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Slash,
    Star,
    Plus,
    Minus,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Num(n)) => format!("number {n}"),
        Some(Tok::Ident(s)) => format!("name {s:?}"),
        Some(Tok::Q { bockstein: true }) => "'bQ'".into(),
        Some(Tok::Q { bockstein: false }) => "'Q'".into(),
        Some(Tok::Caret) => "'^'".into(),
        Some(Tok::LBrace) => "'{'".into(),
        Some(Tok::RBrace) => "'}'".into(),
        Some(Tok::LParen) => "'('".into(),
        Some(Tok::RParen) => "')'".into(),
        Some(Tok::Slash) => "'/'".into(),
        Some(Tok::Star) => "'*'".into(),
        Some(Tok::Plus) => "'+'".into(),
        Some(Tok::Minus) => "'-'".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, CliError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i].parse().map_err(|_| CliError::parse(start, "number too large"))?;
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "Q" => Tok::Q { bockstein: false },
                    "bQ" => Tok::Q { bockstein: true },
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            b'^' => Tok::Caret,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'/' => Tok::Slash,
            b'*' => Tok::Star,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(CliError::parse(start, format!("unexpected character {ch:?}")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Base of a factor: the unit or a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    One,
    Gen(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// `opword base^k`: the operations act on `base^k`.
    Apply { ops: Vec<Op>, base: Base, exponent: u32 },
    /// `(opword gen)^k`
    Power { ops: Vec<Op>, gen: String, exponent: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, CliError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: &str) -> CliError {
        CliError::parse(self.offset(), format!("expected {expected}, found {}", describe(self.peek())))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), CliError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn finish(&self) -> Result<(), CliError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("'+' or end of input"))
        }
    }

    fn number(&mut self) -> Result<i64, CliError> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn signed(&mut self) -> Result<i64, CliError> {
        let neg = self.eat(&Tok::Minus);
        let n = self.number()?;
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> Result<u32, CliError> {
        let at = self.offset();
        let k = self.number()?;
        u32::try_from(k).map_err(|_| CliError::parse(at, "exponent too large"))
    }

    /// `a` or `a/2`, as a doubled value.
    fn rational(&mut self) -> Result<HalfInt, CliError> {
        let a = self.signed()?;
        if self.eat(&Tok::Slash) {
            let at = self.offset();
            let d = self.number()?;
            if d != 2 {
                return Err(CliError::parse(at, "only the denominator 2 is allowed"));
            }
            Ok(HalfInt::from_doubled(a))
        } else {
            Ok(HalfInt::from_int(a))
        }
    }

    fn opword(&mut self) -> Result<Vec<Op>, CliError> {
        let mut ops = Vec::new();
        while let Some(&Tok::Q { bockstein }) = self.peek() {
            self.pos += 1;
            self.expect(&Tok::Caret, "'^'")?;
            self.expect(&Tok::LBrace, "'{'")?;
            let index = self.rational()?;
            self.expect(&Tok::RBrace, "'}'")?;
            ops.push(Op::new(bockstein, index));
        }
        Ok(ops)
    }

    fn factor(&mut self) -> Result<Factor, CliError> {
        if self.eat(&Tok::LParen) {
            let ops = self.opword()?;
            let gen = match self.peek() {
                Some(Tok::Ident(name)) => name.clone(),
                _ => return Err(self.error("a generator name")),
            };
            self.pos += 1;
            self.expect(&Tok::RParen, "')'")?;
            self.expect(&Tok::Caret, "'^'")?;
            let exponent = self.exponent()?;
            return Ok(Factor::Power { ops, gen, exponent });
        }
        let ops = self.opword()?;
        let base = match self.peek() {
            Some(Tok::Ident(name)) => Base::Gen(name.clone()),
            Some(Tok::Num(1)) => Base::One,
            _ => return Err(self.error("a generator name or '1'")),
        };
        self.pos += 1;
        let exponent = if self.eat(&Tok::Caret) { self.exponent()? } else { 1 };
        Ok(Factor::Apply { ops, base, exponent })
    }

    fn term(&mut self) -> Result<Term, CliError> {
        let mut coeff = 1;
        let leading_number = matches!(self.peek(), Some(Tok::Minus))
            || (matches!(self.peek(), Some(Tok::Num(_))) && self.peek_at(1) != Some(&Tok::Caret));
        if leading_number {
            coeff = self.signed()?;
            if !self.eat(&Tok::Star) {
                // a bare scalar
                return Ok(Term { coeff, factors: Vec::new() });
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors })
    }

    fn element(&mut self) -> Result<Expr, CliError> {
        let mut terms = vec![self.term()?];
        while self.eat(&Tok::Plus) {
            terms.push(self.term()?);
        }
        self.finish()?;
        Ok(Expr { terms })
    }

    /// `[coeff ['*']] (opword | '1')`
    fn dl_term(&mut self) -> Result<(i64, Vec<Op>), CliError> {
        let mut coeff = 1;
        if matches!(self.peek(), Some(Tok::Minus) | Some(Tok::Num(_))) {
            coeff = self.signed()?;
            self.eat(&Tok::Star);
        }
        let ops = self.opword()?;
        if ops.is_empty() && !matches!(self.peek(), Some(Tok::Plus) | None) {
            return Err(self.error("an operation"));
        }
        Ok((coeff, ops))
    }
}

pub fn parse_element(src: &str) -> Result<Expr, CliError> {
    Parser::new(src)?.element()
}

/// A single operation word such as `bQ^{1/2} Q^{3}`.
pub fn parse_opword(src: &str) -> Result<Vec<Op>, CliError> {
    let mut p = Parser::new(src)?;
    let ops = p.opword()?;
    if ops.is_empty() {
        return Err(p.error("an operation"));
    }
    p.finish()?;
    Ok(ops)
}

/// A linear combination of operation words. The twist class is read off the
/// indices: half-integers select `chi = -1`. Words mixing both kinds are
/// accepted and act as zero.
pub fn parse_dl_element(src: &str, prime: Prime) -> Result<DlElement, CliError> {
    let mut p = Parser::new(src)?;
    let mut terms = vec![p.dl_term()?];
    while p.eat(&Tok::Plus) {
        terms.push(p.dl_term()?);
    }
    p.finish()?;
    let twisted = terms.iter().flat_map(|(_, ops)| ops).any(|op| !op.index.is_integer());
    let twist = if twisted { Sign::Minus } else { Sign::Plus };
    let mut out = DlElement::zero(prime, twist);
    for (c, ops) in terms {
        out.add_term(ops, Fp::new(c, prime));
    }
    Ok(out)
}

fn eval_factor(f: &Factor, action: &Action) -> Result<AlgebraElement, CliError> {
    let ctx = action.context();
    let base = |b: &Base| match b {
        Base::One => Ok(ctx.unit()),
        Base::Gen(name) => ctx.gen_element(name),
    };
    Ok(match f {
        Factor::Apply { ops, base: b, exponent } => {
            let x = power(&base(b)?, *exponent, ctx)?;
            action.apply_word(ops, &x)?
        }
        Factor::Power { ops, gen, exponent } => {
            let x = action.apply_word(ops, &ctx.gen_element(gen)?)?;
            power(&x, *exponent, ctx)?
        }
    })
}

/// Evaluates a parsed element in the basis of the free algebra.
pub fn eval(expr: &Expr, action: &Action) -> Result<AlgebraElement, CliError> {
    let ctx = action.context();
    let prime = ctx.prime();
    let mut out = AlgebraElement::zero(prime);
    for term in &expr.terms {
        let mut value = ctx.unit();
        for f in &term.factors {
            value = multiply(&value, &eval_factor(f, action)?, ctx)?;
        }
        out.add_scaled(&value, Fp::new(term.coeff, prime));
    }
    Ok(out)
}

pub fn parse_and_eval(src: &str, action: &Action) -> Result<AlgebraElement, CliError> {
    eval(&parse_element(src)?, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tdl_core::appcalc::{sign_preset, untwisted_preset};

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn opwords() {
        assert_eq!(parse_opword("bQ^{1/2}").unwrap(), [Op::bq(1)]);
        assert_eq!(parse_opword(" Q^{ -3/2 } Q^{2}").unwrap(), [Op::q(-3), Op::q(4)]);
        assert!(parse_opword("Q^{1/3}").is_err());
        assert!(parse_opword("").is_err());
    }

    #[test]
    fn elements() {
        let a = Action::new(sign_preset(p3()));
        let e = parse_and_eval("x * bQ^{1/2} x", &a).unwrap();
        assert_eq!(e.to_string(), "x * bQ^{1/2} x");
        // reordering picks up a sign
        assert_eq!(parse_and_eval("bQ^{1/2} x * x", &a).unwrap().to_string(), "2 * x * bQ^{1/2} x");
        assert_eq!(parse_and_eval("x * x", &a).unwrap().to_string(), "0");
        assert_eq!(parse_and_eval("1 + 2", &a).unwrap().to_string(), "0");
        assert_eq!(parse_and_eval("2 * 1", &a).unwrap().to_string(), "2 * 1");
        assert_eq!(parse_and_eval("Q^{3} 1", &a).unwrap().to_string(), "0");
        assert_eq!(parse_and_eval("-1 * x + x", &a).unwrap().to_string(), "0");
    }

    #[test]
    fn powers() {
        let a = Action::new(untwisted_preset(p3()));
        assert_eq!(parse_and_eval("x^2", &a).unwrap().to_string(), "x^2");
        assert_eq!(parse_and_eval("Q^{0} x", &a).unwrap().to_string(), "x^3");
        assert_eq!(parse_and_eval("(Q^{1} x)^2", &a).unwrap().to_string(), "(Q^{1} x)^2");
    }

    #[test]
    fn errors_carry_columns() {
        let a = Action::new(sign_preset(p3()));
        let err = parse_and_eval("x + * x", &a).unwrap_err();
        assert!(matches!(err, CliError::Parse { column: 5, .. }), "{err}");
        let err = parse_and_eval("x $", &a).unwrap_err();
        assert!(matches!(err, CliError::Parse { column: 3, .. }), "{err}");
        let err = parse_element("Q^{1}").unwrap_err();
        assert!(err.to_string().contains("end of input"), "{err}");
        assert!(matches!(parse_and_eval("y", &a), Err(CliError::Invalid(_))));
    }

    #[test]
    fn dl_elements() {
        let e = parse_dl_element("2 Q^{1} Q^{1} + Q^{3}", p3()).unwrap();
        assert_eq!(e.twist(), Sign::Plus);
        assert_eq!(parse_dl_element(&e.to_string(), p3()).unwrap(), e);
        assert_eq!(parse_dl_element("bQ^{1/2}", p3()).unwrap().twist(), Sign::Minus);
        assert!(parse_dl_element("2 x", p3()).is_err());
    }
}
