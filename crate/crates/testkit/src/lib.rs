//! Test-side oracles and random corpora.
//!
//! Nothing here calls the matrix or invariant code of `kirby-core`; the
//! oracles work on plain `i128` matrices so they can check it independently.

pub mod oracles;
pub mod random;
