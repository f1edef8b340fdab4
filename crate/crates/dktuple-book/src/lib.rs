//! Doctest harness for the guide under `book/`.
//!
//! mdbook renders the chapters but does not execute them; including each
//! chapter as a module doc makes `cargo test --doc` compile and run every
//! `rust` code fence, so the book cannot drift away from the library. A
//! failing snippet names its chapter module in the test output.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/tuples.md")]
pub mod tuples {}

#[doc = include_str!("../../../book/src/gap-principles.md")]
pub mod gap_principles {}

#[doc = include_str!("../../../book/src/character-sums.md")]
pub mod character_sums {}

#[doc = include_str!("../../../book/src/larger-sieve.md")]
pub mod larger_sieve {}

#[doc = include_str!("../../../book/src/approximation.md")]
pub mod approximation {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
