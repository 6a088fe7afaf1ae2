//! Restrained (G_2 = 0) wild ramification over finite fields, made computable.
//!
//! The crate is `no_std` with `alloc`. Everything is exact arithmetic over an
//! explicit tower `F_p ⊆ F_q ⊆ F_{q^m}`:
//!
//! - [`ff`]: the field tower and its elements,
//! - [`linpoly`]: F_q-linear polynomials and the subspace/polynomial bijection,
//! - [`multipoly`] and [`invariants`]: sparse polynomials, Dickson and parabolic
//!   invariants, and the flag-variety ring relations,
//! - [`gnd`]: the groups `G_{n,d} = F_q^d ⋊ Z/n`,
//! - [`series`]: truncated Laurent series, Möbius maps and Hensel lifts,
//! - [`restrained`]: canonical actions, ramification filtrations, the
//!   ω-invariant and the classification of restrained extensions,
//! - [`degeneration`]: the one-parameter degenerating family and its special fiber,
//! - [`bounds`]: Riemann–Hurwitz–Zeuthen genus and automorphism bounds.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod arith;
pub mod bounds;
pub mod degeneration;
mod error;
pub mod ff;
pub mod gnd;
pub mod invariants;
pub mod linpoly;
pub mod matrix;
pub mod multipoly;
pub mod poly;
pub mod restrained;
pub mod series;

pub use algebra::Algebra;
pub use error::{Error, Result};
pub use ff::{Fe, FieldTower};
