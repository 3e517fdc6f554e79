//! Finite combinatorics behind the lax algebra structure on the standard
//! 1-simplex and its 2-Segal associativity criterion.
//!
//! Everything here is a pure value computation over explicitly enumerated
//! finite sets. The crate is `no_std` and only needs `alloc`; IO, file
//! formats and the command line live in the `segal-forge` companion crate.
//!
//! Module map:
//!
//! - [`finset`]: finite sets, total functions, pullbacks, pushouts and spans.
//! - [`alg`]: the category `Alg` of finite sets and maps with ordered fibres.
//! - [`poset`]: finite posets and categories, twisted arrows, `Cart(S)`.
//! - [`grothendieck`]: chains of simplicial operators and the posets `M_φ`.
//! - [`sset`]: truncated simplicial sets, colimits, evaluation and the
//!   spine/long-edge gluing maps.
//! - [`oplax`]: normal oplax functors into spans and functors out of `Tw(D)`.
//! - [`segal`]: 1-Segal and 2-Segal checkers and the lax associator.
//! - [`hall`]: exact rational convolution algebra on 1-simplices.
//! - [`lax`]: simplex-level data of the lax functor on `Alg`.

#![no_std]

extern crate alloc;

pub mod alg;
pub mod error;
pub mod finset;
pub mod grothendieck;
pub mod hall;
pub mod lax;
pub mod oplax;
pub mod poset;
pub mod segal;
pub mod sset;

pub use error::{Error, Result};
