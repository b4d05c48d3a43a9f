//! Shared inputs for the benchmarks in `benches/`.

use rasa_core::numerics::{ratio, Rational};
use rasa_core::ProbVector;

/// `{a/d : 0 ≤ a ≤ d}`
pub fn grid(d: i64) -> Vec<Rational> {
    (0..=d).map(|a| ratio(a, d)).collect()
}

/// A length-`m` vector with entries spread over `[0, 1]`.
pub fn spread_vector(m: usize) -> ProbVector {
    let d = m as i64 + 1;
    ProbVector::new((0..m).map(|i| ratio(i as i64 + 1, d)).collect()).expect("entries in (0, 1)")
}
