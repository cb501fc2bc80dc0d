//! Skeletal grading data: a finitely generated abelian group `Z^r ⊕ ⊕ Z/m_i`
//! together with a character `chi` into `{±1}`.
//!
//! `chi(g)` is the sign by which the self-braiding of `g` acts on the
//! coefficients. It decides which index parity of operation is operative on a
//! class of grading `g`, and when squares vanish.

use std::fmt;

use thiserror::Error;

use crate::arith::{Prime, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("torsion order {0} must be at least 2")]
    InvalidTorsionOrder(u32),
    #[error("expected {expected} coordinates, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("torsion coordinate {index} = {value} is outside 0..{order}")]
    TorsionOutOfRange { index: usize, value: i64, order: u32 },
    #[error("character has {actual} signs but the group has {expected} generators")]
    CharacterLength { expected: usize, actual: usize },
    #[error("generator {index} has odd order {order} and must have sign +1")]
    OddTorsionTwist { index: usize, order: u32 },
    #[error("scale factor must be non-negative, got {0}")]
    NegativeScale(i64),
}

/// An element of the grading group, as a coordinate vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Grade(Vec<i64>);

impl Grade {
    pub fn new(coords: Vec<i64>) -> Self {
        Grade(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingGroup {
    free_rank: usize,
    torsion_orders: Vec<u32>,
}

impl GradingGroup {
    pub fn new(free_rank: usize, torsion_orders: Vec<u32>) -> Result<Self, GradingError> {
        if let Some(&m) = torsion_orders.iter().find(|&&m| m < 2) {
            return Err(GradingError::InvalidTorsionOrder(m));
        }
        Ok(GradingGroup { free_rank, torsion_orders })
    }

    /// The group `Z`.
    pub fn integers() -> Self {
        GradingGroup { free_rank: 1, torsion_orders: Vec::new() }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        GradingGroup { free_rank: 0, torsion_orders: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[u32] {
        &self.torsion_orders
    }

    /// Number of generators (coordinates).
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion_orders.len()
    }

    pub fn zero(&self) -> Grade {
        Grade(vec![0; self.rank()])
    }

    pub fn validate(&self, g: &Grade) -> Result<(), GradingError> {
        if g.0.len() != self.rank() {
            return Err(GradingError::WrongLength { expected: self.rank(), actual: g.0.len() });
        }
        for (i, &order) in self.torsion_orders.iter().enumerate() {
            let value = g.0[self.free_rank + i];
            if value < 0 || value >= order as i64 {
                return Err(GradingError::TorsionOutOfRange { index: self.free_rank + i, value, order });
            }
        }
        Ok(())
    }

    /// Builds an element from arbitrary coordinates, reducing torsion parts.
    pub fn element(&self, coords: Vec<i64>) -> Result<Grade, GradingError> {
        if coords.len() != self.rank() {
            return Err(GradingError::WrongLength { expected: self.rank(), actual: coords.len() });
        }
        Ok(self.reduce(coords))
    }

    fn reduce(&self, mut coords: Vec<i64>) -> Grade {
        for (i, &order) in self.torsion_orders.iter().enumerate() {
            let c = &mut coords[self.free_rank + i];
            *c = c.rem_euclid(order as i64);
        }
        Grade(coords)
    }

    pub fn add(&self, a: &Grade, b: &Grade) -> Grade {
        debug_assert_eq!(a.0.len(), b.0.len());
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    /// `k * g`
    pub fn scale(&self, g: &Grade, k: i64) -> Result<Grade, GradingError> {
        if k < 0 {
            return Err(GradingError::NegativeScale(k));
        }
        Ok(self.reduce(g.0.iter().map(|x| x * k).collect()))
    }
}

/// One sign per group generator, defining `chi: Γ -> {±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCharacter {
    signs: Vec<Sign>,
}

impl TwistCharacter {
    pub fn new(signs: Vec<Sign>) -> Self {
        TwistCharacter { signs }
    }

    pub fn trivial(rank: usize) -> Self {
        TwistCharacter { signs: vec![Sign::Plus; rank] }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
}

/// Internal grading `g` together with the chain degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub g: Grade,
    pub n: i64,
}

impl Bidegree {
    pub fn new(g: Grade, n: i64) -> Self {
        Bidegree { g, n }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.n)
    }
}

/// The prime, the grading group and its twist character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingContext {
    prime: Prime,
    group: GradingGroup,
    chi: TwistCharacter,
}

impl GradingContext {
    pub fn new(prime: Prime, group: GradingGroup, chi: TwistCharacter) -> Result<Self, GradingError> {
        if chi.signs.len() != group.rank() {
            return Err(GradingError::CharacterLength { expected: group.rank(), actual: chi.signs.len() });
        }
        for (i, &order) in group.torsion_orders.iter().enumerate() {
            let index = group.free_rank + i;
            if order % 2 == 1 && chi.signs[index].is_minus() {
                return Err(GradingError::OddTorsionTwist { index, order });
            }
        }
        Ok(GradingContext { prime, group, chi })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn character(&self) -> &TwistCharacter {
        &self.chi
    }

    /// `chi(g)`, validating `g` first.
    pub fn chi(&self, g: &Grade) -> Result<Sign, GradingError> {
        self.group.validate(g)?;
        Ok(self.sign_of(g))
    }

    /// `chi(g)` for an element already known to be valid.
    pub fn sign_of(&self, g: &Grade) -> Sign {
        g.0.iter().zip(&self.chi.signs).fold(Sign::Plus, |acc, (&c, &s)| acc * s.pow(c))
    }

    /// `lambda(g)` in `{0, 1}` with `(-1)^lambda = chi`.
    pub fn lambda(&self, g: &Grade) -> i64 {
        self.sign_of(g).bit()
    }

    /// Sign for transposing adjacent factors of bidegrees `a` and `b`:
    /// `(-1)^{n_a n_b + lambda(g_a) lambda(g_b)}`.
    pub fn swap_sign(&self, a: &Bidegree, b: &Bidegree) -> Sign {
        Sign::from_parity(a.n * b.n + self.lambda(&a.g) * self.lambda(&b.g))
    }

    /// Whether a class of this bidegree squares to zero, i.e. `(-1)^n chi(g) = -1`.
    pub fn is_odd(&self, b: &Bidegree) -> bool {
        (b.n + self.lambda(&b.g)).rem_euclid(2) == 1
    }

    /// Action of the shuffle `(g+h)^{⊕p} -> g^{⊕p} ⊕ h^{⊕p}` on coefficients:
    /// `p(p-1)/2` braidings of `h` past `g`, each acting by `(-1)^{lambda(g) lambda(h)}`.
    pub fn shuffle_sign(&self, g: &Grade, h: &Grade) -> Sign {
        Sign::from_parity(self.lambda(g) * self.lambda(h) * self.prime.half())
    }

    pub fn add(&self, a: &Grade, b: &Grade) -> Grade {
        self.group.add(a, b)
    }

    pub fn scale(&self, g: &Grade, k: i64) -> Result<Grade, GradingError> {
        self.group.scale(g, k)
    }
}
