//! Dyer–Lashof operations for twisted grading data over `F_p`, `p` odd.
//!
//! The crate is layered: [`arith`] and [`grading`] provide scalars and the
//! skeletal grading, [`dlalgebra`] the operations and Adem rewriting,
//! [`freealg`] bases of free algebras, [`action`] the operation action on
//! them, and [`appcalc`] the ready-made example computations.

pub mod action;
pub mod appcalc;
pub mod arith;
pub mod dlalgebra;
pub mod freealg;
pub mod grading;
