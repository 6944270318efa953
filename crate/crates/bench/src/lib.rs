//! Benchmark fixtures shared by the criterion benches.

use afweak_core::{AffinePermutation, AffineType, BiclosedTriple};

/// `N(w)` for a word in the simple generators.
pub fn finite(ty: AffineType, word: &[usize]) -> BiclosedTriple {
    BiclosedTriple::finite(&AffinePermutation::from_word(ty, word).expect("valid word"))
}
