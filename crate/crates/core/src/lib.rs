//! Binary BBP-type formula toolkit.
//!
//! The crate models series of the form
//! `sum_k b^-k sum_j a_j / (k*l + j)^s` with `b = 2^m` ("P-notation"),
//! generates the eight parameterized binary families plus the named
//! particular formulas and zero relations, verifies every identity against
//! independent high-precision oracles, and extracts hex digits at arbitrary
//! bit offsets by modular exponentiation.
//!
//! Module map:
//! - [`exact`]: big integers, rationals, and error-tracked fixed-point reals
//! - [`pformula`]: the P-notation data model, evaluation, combination, serialization
//! - [`reference`](mod@reference): oracle evaluators (polylogarithms, Clausen
//!   sums, Bernoulli machinery)
//! - [`generators`]: the formula families and the named catalog
//! - [`digits`]: digit extraction at arbitrary offsets
//! - [`cli`]: the `bbp` command-line surface

pub mod cli;
pub mod digits;
pub mod exact;
pub mod generators;
pub mod pformula;
pub mod reference;
