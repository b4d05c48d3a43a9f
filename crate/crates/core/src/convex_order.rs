//! Deciding `μ ≤cx ν` for finitely-supported distributions.
//!
//! With equal means, `μ ≤cx ν` iff the stop-loss transform of `μ` lies below
//! that of `ν` everywhere. Both transforms are piecewise linear with kinks
//! only at their own support points, so comparing them on the union of the
//! two supports decides the inequality everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bernstein::ConvexTestFunction;
use crate::distributions::DiscreteDistribution;
use crate::numerics::{ratio, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CxReason {
    MeansDiffer,
    StopLossViolation,
    Holds,
}

/// A point `t` where `E(X-t)+` under μ exceeds that under ν.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StopLossWitness {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CxVerdict {
    pub dominated: bool,
    pub reason: CxReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<StopLossWitness>,
}

impl CxVerdict {
    fn holds() -> Self {
        Self { dominated: true, reason: CxReason::Holds, witness: None }
    }
}

/// Decides `mu ≤cx nu`. A failure reports the smallest violating `t`.
pub fn is_cx_dominated(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> CxVerdict {
    if mu.mean() != nu.mean() {
        return CxVerdict { dominated: false, reason: CxReason::MeansDiffer, witness: None };
    }
    for t in merged_support(mu, nu) {
        let lhs = mu.stop_loss(&t);
        let rhs = nu.stop_loss(&t);
        if lhs > rhs {
            return CxVerdict {
                dominated: false,
                reason: CxReason::StopLossViolation,
                witness: Some(StopLossWitness { t, lhs, rhs }),
            };
        }
    }
    CxVerdict::holds()
}

fn merged_support(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Vec<Rational> {
    let mut points: Vec<Rational> = mu.support().chain(nu.support()).cloned().collect();
    points.sort();
    points.dedup();
    points
}

/// Searches for a convex `f` with `E_mu f > E_nu f` among random convex
/// piecewise-linear functions whose breakpoints are the union of the two
/// supports. Only ever refutes; `None` certifies nothing.
///
/// Does not consult stop-loss transforms, so it can cross-check
/// [`is_cx_dominated`].
pub fn cx_falsify_random(
    mu: &DiscreteDistribution,
    nu: &DiscreteDistribution,
    trials: usize,
    seed: u64,
) -> Option<ConvexTestFunction> {
    let breakpoints = merged_support(mu, nu);
    if breakpoints.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let f = random_convex_through(&breakpoints, &mut rng);
        let lhs = mu.expect(&f).expect("support within breakpoint span");
        let rhs = nu.expect(&f).expect("support within breakpoint span");
        if lhs > rhs {
            return Some(f);
        }
    }
    None
}

fn random_convex_through<R: Rng>(breakpoints: &[Rational], rng: &mut R) -> ConvexTestFunction {
    // Sparse slope increments: sums of a few hinges are the likeliest to
    // separate two distributions.
    let density = [0.15, 0.35, 0.7, 1.0][rng.random_range(0..4)];
    let mut value = ratio(rng.random_range(-4..=4), 2);
    let mut slope = ratio(rng.random_range(-4..=4), 2);
    let mut values = vec![value.clone()];
    for w in breakpoints.windows(2) {
        value += &slope * (&w[1] - &w[0]);
        values.push(value.clone());
        if rng.random_bool(density) {
            slope += ratio(rng.random_range(1..=8), 4);
        }
    }
    ConvexTestFunction::piecewise_linear(breakpoints.to_vec(), values)
        .expect("nondecreasing slopes give a convex interpolant")
}
