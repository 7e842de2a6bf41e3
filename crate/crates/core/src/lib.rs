//! Exact enumeration of permutations and signed permutations by peak set.
//!
//! Four counting regimes are supported: permutations (`P`), signed
//! permutations (`P_B`), and each of those with a zero prepended to the word
//! so that a peak may occur at position 1 (`P̂`, `P̂_B`).
//!
//! * [`peakcore`]: variants, peak sets, words, admissibility.
//! * [`oracle`]: exhaustive parallel enumeration used as ground truth.
//! * [`formulas`]: polynomial engine, count recursions, closed forms.
//! * [`analysis`]: theorem checkers and the full verification sweep.
//! * [`store`]: JSON persistence for the memo tables.

pub mod analysis;
pub mod cli;
pub mod formulas;
pub mod oracle;
pub mod peakcore;
pub mod store;

pub use formulas::{BinPoly, Engine};
pub use peakcore::{Count, Group, PeakSet, SignedPermutation, Variant};
