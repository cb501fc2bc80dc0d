//! Exact arithmetic modulo an odd prime.
//!
//! Besides the field `F_p` itself this module carries the half-integer type used
//! for operation indices, binomial coefficients via Lucas' theorem, and the
//! normalization constants that relate upper and lower indexing.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
}

/// An odd prime `p >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, ArithError> {
        if p < 3 || p.is_multiple_of(2) || (3..).step_by(2).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(ArithError::NotOddPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// `(p - 1) / 2`
    pub fn half(self) -> i64 {
        (self.0 as i64 - 1) / 2
    }

    pub fn pow(self, k: u32) -> u64 {
        (self.0 as u64).pow(k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the prime field, stored as its canonical residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    prime: Prime,
}

impl Fp {
    pub fn new(value: i64, prime: Prime) -> Self {
        Fp { value: value.rem_euclid(prime.as_i64()) as u32, prime }
    }

    pub fn zero(prime: Prime) -> Self {
        Fp { value: 0, prime }
    }

    pub fn one(prime: Prime) -> Self {
        Fp { value: 1, prime }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.prime
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// `self^e`; negative exponents invert.
    pub fn pow(self, e: i64) -> Self {
        let base = if e < 0 { self.inverse().expect("negative power of zero") } else { self };
        let mut e = e.unsigned_abs();
        let p = self.prime.get() as u64;
        let mut acc = 1u64;
        let mut b = base.value as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        Fp { value: acc as u32, prime: self.prime }
    }

    pub fn inverse(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.prime.as_i64() - 2))
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.prime, rhs.prime);
        let p = self.prime.get();
        let v = self.value + rhs.value;
        Fp { value: if v >= p { v - p } else { v }, prime: self.prime }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp { value: self.prime.get() - self.value, prime: self.prime }
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.prime, rhs.prime);
        let v = self.value as u64 * rhs.value as u64 % self.prime.get() as u64;
        Fp { value: v as u32, prime: self.prime }
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

/// A value in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^k`
    pub fn from_parity(k: i64) -> Sign {
        if k.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// 0 for `+1`, 1 for `-1`.
    pub fn bit(self) -> i64 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn pow(self, e: i64) -> Sign {
        if e.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn to_fp(self, prime: Prime) -> Fp {
        match self {
            Sign::Plus => Fp::one(prime),
            Sign::Minus => -Fp::one(prime),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// An element of `Z ⊔ Z + 1/2`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(s: i64) -> Self {
        HalfInt(2 * s)
    }

    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    /// The twist class in which this index is operative: integers for `+1`,
    /// strict half-integers for `-1`.
    pub fn twist_class(self) -> Sign {
        Sign::from_parity(self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

/// `binom(m, n) mod p`, zero unless `0 <= n <= m`.
pub fn binom_mod_p(m: i64, n: i64, prime: Prime) -> Fp {
    if n < 0 || n > m {
        return Fp::zero(prime);
    }
    let p = prime.as_i64();
    let (mut m, mut n) = (m, n);
    let mut acc = Fp::one(prime);
    while n > 0 {
        let (mi, ni) = (m % p, n % p);
        if ni > mi {
            return Fp::zero(prime);
        }
        acc *= small_binom(mi, ni, prime);
        m /= p;
        n /= p;
    }
    acc
}

/// Binomial coefficient of half-integer arguments: zero if either argument
/// is not an integer.
pub fn binom_half(m: HalfInt, n: HalfInt, prime: Prime) -> Fp {
    match (m.as_integer(), n.as_integer()) {
        (Some(m), Some(n)) => binom_mod_p(m, n, prime),
        _ => Fp::zero(prime),
    }
}

// 0 <= n <= m < p, so the factorials are units.
fn small_binom(m: i64, n: i64, prime: Prime) -> Fp {
    let mut num = Fp::one(prime);
    let mut den = Fp::one(prime);
    for k in 0..n {
        num *= Fp::new(m - k, prime);
        den *= Fp::new(k + 1, prime);
    }
    num * den.inverse().expect("unit denominator")
}

/// `((p - 1) / 2)! mod p`
pub fn half_factorial(prime: Prime) -> Fp {
    (1..=prime.half()).fold(Fp::one(prime), |acc, k| acc * Fp::new(k, prime))
}

/// `v(n) = (-1)^{n(n-1)(p-1)/4} * (((p-1)/2)!)^n`.
pub fn v_const(n: i64, prime: Prime) -> Fp {
    // n(n-1)/2 is an integer and (p-1)/2 is an integer.
    let pairs = (n * (n - 1) / 2).rem_euclid(2);
    let sign = Sign::from_parity(pairs * prime.half());
    sign.to_fp(prime) * half_factorial(prime).pow(n)
}

/// `chi^{(p-1)/2}` as a field element.
pub fn twist_power(chi: Sign, prime: Prime) -> Fp {
    chi.pow(prime.half()).to_fp(prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        for q in [3, 5, 7, 11, 13, 101] {
            assert!(Prime::new(q).is_ok());
        }
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_mod_p(5, 7, p(3)).value(), 0);
        assert_eq!(binom_mod_p(4, 2, p(3)).value(), 0);
        assert_eq!(binom_mod_p(7, 2, p(3)).value(), 0);
        assert_eq!(binom_mod_p(8, 0, p(3)).value(), 1);
        assert_eq!(binom_mod_p(-1, 0, p(3)).value(), 0);
        assert_eq!(binom_mod_p(3, -1, p(5)).value(), 0);
    }

    #[test]
    fn v_examples() {
        assert_eq!(v_const(0, p(3)).value(), 1);
        assert_eq!(v_const(2, p(3)).value(), 2);
        assert_eq!(v_const(1, p(5)).value(), 2);
    }

    #[test]
    fn twist_power_examples() {
        assert_eq!(twist_power(Sign::Plus, p(7)).value(), 1);
        assert_eq!(twist_power(Sign::Minus, p(3)).value(), 2);
        assert_eq!(twist_power(Sign::Minus, p(5)).value(), 1);
    }

    #[test]
    fn half_factorial_square() {
        for q in [3, 5, 7, 11] {
            let c = half_factorial(p(q));
            let expected = Sign::from_parity(p(q).half() + 1).to_fp(p(q));
            assert_eq!(c * c, expected, "p = {q}");
        }
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt::from_int(3).to_string(), "3");
        assert_eq!(HalfInt::from_doubled(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::from_doubled(-3).floor(), -2);
    }

    #[test]
    fn field_inverse() {
        let q = p(7);
        for a in 1..7 {
            let x = Fp::new(a, q);
            assert_eq!(x * x.inverse().unwrap(), Fp::one(q));
        }
        assert!(Fp::zero(q).inverse().is_none());
        assert_eq!(Fp::new(3, q).pow(-1), Fp::new(5, q));
    }
}
