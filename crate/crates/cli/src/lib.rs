//! Command-line front end: context documents, the expression syntax and the
//! command implementations behind the `tdl` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod selfcheck;
