//! Exact arithmetic and spectral tools for principal congruence subgroups of
//! `SL_n(Z)`.
//!
//! The crate is `no_std` (it needs `alloc`). It covers four areas:
//!
//! * [`matrix`] and [`word`]: arbitrary-precision integer matrices, elementary
//!   generator symbols and their products.
//! * [`stable_range`] and [`decompose`]: constructive bounded-generation words
//!   for elements of `Γ_n(m)`, recursing down to a `Γ_2(m)` residual.
//! * [`quotient`]: finite congruence quotients, semidirect products, Cayley
//!   graphs and brute-force identity checks.
//! * [`kazhdan`]: exact Kazhdan constants of finite abelian groups and
//!   certified spectral bounds for general finite groups.
//!
//! File formats, reports and the command-line tool live in the `congrkit`
//! crate.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod decompose;
pub mod error;
pub mod kazhdan;
pub mod matrix;
pub mod quotient;
pub mod smith;
pub mod stable_range;
pub mod word;

pub use error::{Error, Result};
pub use matrix::{is_in_gamma, make_y, CongruenceLevel, IntMatrix};
pub use word::{eval_word, steinberg_check, GenSymbol, SymbolKind, Word};
