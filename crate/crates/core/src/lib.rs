//! Lexicographic subshifts of the doubling map with a hole.
//!
//! The crate works with eventually periodic binary sequences throughout, so
//! every order comparison, shift condition and substitution is exact. Entropy
//! comes from the kneading series and is cross-checked by a finite automaton
//! that recognises the same subshift.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod entropy;
pub mod error;
pub mod poly;
pub mod renorm;
pub mod seq;
pub mod sft;
pub mod words;

pub use error::{Error, Extremal};
pub use seq::{EPSeq, Rat, Word};
