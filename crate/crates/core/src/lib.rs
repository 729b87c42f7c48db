//! Verification that 22 is the only Perrin number whose decimal digits form a
//! palindromic concatenation of two repdigits, `d1^l d2^m d1^l`.
//!
//! The argument has three parts:
//!
//! 1. an exhaustive search of `P_n` for `n <= 700` ([`repdigit`]);
//! 2. absolute bounds on `l`, `m` and `n` from Matveev's theorem
//!    ([`bounds`]);
//! 3. three Dujella-Pethő reductions that bring `n` below 700
//!    ([`reduction`], built on [`contfrac`] and [`highprec`]).
//!
//! [`report::prove`] runs all of it and returns a [`report::ProofReport`].

pub mod bounds;
pub mod contfrac;
pub mod error;
pub mod highprec;
pub mod perrin;
pub mod reduction;
pub mod repdigit;
pub mod report;

pub use error::{Error, Result};
pub use highprec::{HpReal, PerrinRoots, RealContext, RootMode};
pub use report::{prove, ProofReport, ProveConfig, Verdict};
