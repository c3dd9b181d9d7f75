//! Homology-level workbench for positive Dehn twist factorizations.
//!
//! The crate models factorizations in surface mapping class groups through
//! their action on first homology, checks spin conditions through quadratic
//! forms, performs fiber sums and breeding on twist words, computes the
//! characteristic numbers of the resulting Lefschetz fibrations and
//! certifies first homology of their total spaces with Smith normal forms.

pub mod bits;
pub mod constructions;
pub mod error;
pub mod factorization;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod meyer;
pub mod presentations;
pub mod snf;

pub use error::{Error, Result};
