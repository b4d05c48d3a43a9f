//! Seeded generators of exact random inputs for property suites and sweeps.

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::distributions::DiscreteDistribution;
use crate::majorization::ProbVector;
use crate::numerics::{int, ratio, Rational};

/// `a/d` with `d ∈ 2..=max_den` and `0 ≤ a ≤ d`.
pub fn unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let d = rng.random_range(2..=max_den.max(2));
    ratio(rng.random_range(0..=d), d)
}

pub fn prob_vector<R: Rng>(rng: &mut R, m: usize, max_den: i64) -> ProbVector {
    ProbVector::new((0..m).map(|_| unit_rational(rng, max_den)).collect()).expect("entries in [0, 1]")
}

/// Moves `v[s]` and `v[t]` towards each other, keeping their sum.
pub fn random_pinch<R: Rng>(v: &mut [Rational], rng: &mut R) {
    if v.len() < 2 {
        return;
    }
    let s = rng.random_range(0..v.len());
    let t = (s + rng.random_range(1..v.len())) % v.len();
    let theta = ratio(rng.random_range(1..=4), 4);
    let shift = (&v[s] - &v[t]) * theta / int(2);
    v[s] -= &shift;
    v[t] += &shift;
}

/// `(p, p')` with `p ≻ p'`: `p'` is a shuffled copy of `p` after a few
/// random pinches.
pub fn majorized_pair<R: Rng>(rng: &mut R, m: usize, max_den: i64) -> (ProbVector, ProbVector) {
    let p = prob_vector(rng, m, max_den);
    let mut q = p.entries().to_vec();
    for _ in 0..rng.random_range(0..=3) {
        random_pinch(&mut q, rng);
    }
    q.shuffle(rng);
    (p, ProbVector::new(q).expect("pinches stay inside [0, 1]"))
}

/// `(p, p')` with equal sums, related by arbitrary mass transfers; they may
/// or may not be comparable under majorization.
pub fn equal_sum_pair<R: Rng>(rng: &mut R, m: usize, max_den: i64) -> (ProbVector, ProbVector) {
    let p = prob_vector(rng, m, max_den);
    let mut q = p.entries().to_vec();
    if m >= 2 {
        for _ in 0..rng.random_range(1..=3) {
            let i = rng.random_range(0..m);
            let j = (i + rng.random_range(1..m)) % m;
            let cap = (&q[i]).min(&(Rational::one() - &q[j])).clone();
            let delta = cap * ratio(rng.random_range(0..=4), 4);
            q[i] -= &delta;
            q[j] += &delta;
        }
    }
    (p, ProbVector::new(q).expect("transfers stay inside [0, 1]"))
}

fn random_distribution<R: Rng>(rng: &mut R, max_point: i64) -> DiscreteDistribution {
    let k = rng.random_range(1..=(max_point + 1).min(4));
    let weights: Vec<(i64, i64)> = (0..k).map(|_| (rng.random_range(0..=max_point), rng.random_range(1..=6))).collect();
    let total: i64 = weights.iter().map(|(_, w)| w).sum();
    DiscreteDistribution::from_atoms(weights.into_iter().map(|(p, w)| (int(p), ratio(w, total))))
        .expect("normalized weights")
}

/// Law on `{a, b}` with mean `mean`, `a ≤ mean ≤ b`.
fn two_point(a: i64, b: i64, mean: &Rational) -> DiscreteDistribution {
    if a == b {
        return DiscreteDistribution::dirac(int(a));
    }
    let upper = (mean - int(a)) / int(b - a);
    DiscreteDistribution::from_atoms([(int(a), Rational::one() - &upper), (int(b), upper)]).expect("two-point law")
}

/// Two distributions on `{0, …, max_point}` with the same mean, in random order.
pub fn equal_mean_pair<R: Rng>(rng: &mut R, max_point: i64) -> (DiscreteDistribution, DiscreteDistribution) {
    let mu = random_distribution(rng, max_point);
    let mean = mu.mean();
    let floor = mean.floor().to_integer().to_i64().expect("small mean");
    let ceil = mean.ceil().to_integer().to_i64().expect("small mean");
    let parts: Vec<DiscreteDistribution> = (0..rng.random_range(1..=3))
        .map(|_| two_point(rng.random_range(0..=floor), rng.random_range(ceil..=max_point), &mean))
        .collect();
    let raw: Vec<i64> = parts.iter().map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    let weighted: Vec<(Rational, DiscreteDistribution)> = raw.into_iter().map(|w| ratio(w, total)).zip(parts).collect();
    let nu = DiscreteDistribution::mixture(&weighted).expect("normalized weights");
    if rng.random_bool(0.5) {
        (mu, nu)
    } else {
        (nu, mu)
    }
}

/// Splits part of one atom's mass symmetrically about it: the result
/// dominates `d` in the convex order.
pub fn mean_preserving_spread<R: Rng>(d: &DiscreteDistribution, rng: &mut R) -> DiscreteDistribution {
    let (c, w) = d.atoms()[rng.random_range(0..d.len())].clone();
    let portion = w * ratio(rng.random_range(1..=4), 4);
    let left = int(rng.random_range(1..=2));
    let right = int(rng.random_range(1..=2));
    let span = &left + &right;
    let mut atoms: Vec<(Rational, Rational)> = d.atoms().to_vec();
    atoms.push((c.clone(), -portion.clone()));
    atoms.push((&c - &left, &portion * &right / &span));
    atoms.push((&c + &right, &portion * &left / &span));
    merge_signed(atoms)
}

fn merge_signed(atoms: Vec<(Rational, Rational)>) -> DiscreteDistribution {
    let mut merged = std::collections::BTreeMap::new();
    for (p, m) in atoms {
        *merged.entry(p).or_insert_with(Rational::zero) += m;
    }
    DiscreteDistribution::from_atoms(merged).expect("spread keeps masses nonnegative")
}
