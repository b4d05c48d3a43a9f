//! Majorization of probability vectors, pinch (Robin Hood) chains, and the
//! elementary-symmetric criterion for ordering Bernoulli convolutions.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::numerics::{
    binomial_coefficient, elementary_symmetric_all, format_rational, in_unit_interval, int, serde_rational_vec,
    Rational,
};

/// A nonempty tuple of probabilities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProbVector", into = "RawProbVector")]
pub struct ProbVector(Vec<Rational>);

impl ProbVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("probability vector must be nonempty".into()));
        }
        if let Some(bad) = entries.iter().find(|p| !in_unit_interval(p)) {
            return Err(Error::Domain(format!("entry {} outside [0, 1]", format_rational(bad))));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn mean(&self) -> Rational {
        self.sum() / int(self.len() as i64)
    }

    /// `Σ (p_i - p̄)²`.
    pub fn squared_deviation(&self) -> Rational {
        let mean = self.mean();
        self.0
            .iter()
            .map(|p| {
                let d = p - &mean;
                &d * &d
            })
            .sum()
    }

    pub fn sorted_desc(&self) -> Vec<Rational> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

#[derive(Serialize, Deserialize)]
struct RawProbVector {
    #[serde(with = "serde_rational_vec")]
    entries: Vec<Rational>,
}

impl TryFrom<RawProbVector> for ProbVector {
    type Error = Error;

    fn try_from(raw: RawProbVector) -> Result<Self> {
        Self::new(raw.entries)
    }
}

impl From<ProbVector> for RawProbVector {
    fn from(p: ProbVector) -> Self {
        Self { entries: p.0 }
    }
}

fn check_lengths(a: &ProbVector, b: &ProbVector) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::Domain(format!("vectors have different lengths {} and {}", a.len(), b.len())))
    }
}

/// True iff `q` majorizes `p` (`p ≺ q`): the descending prefix sums of `q`
/// dominate those of `p`, with equal totals.
pub fn majorizes(q: &ProbVector, p: &ProbVector) -> Result<bool> {
    check_lengths(q, p)?;
    let (qs, ps) = (q.sorted_desc(), p.sorted_desc());
    let mut gap = Rational::zero();
    for (a, b) in qs.iter().zip(&ps) {
        gap += a - b;
        if gap.is_negative() {
            return Ok(false);
        }
    }
    Ok(gap.is_zero())
}

/// Replaces positions `s` and `t` by values lying between the old ones,
/// with the same sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PinchStep {
    pub s: usize,
    pub t: usize,
    #[serde(with = "rational_pair")]
    pub before: (Rational, Rational),
    #[serde(with = "rational_pair")]
    pub after: (Rational, Rational),
}

mod rational_pair {
    use crate::numerics::{serde_rational_vec, Rational};
    use serde::{de::Error as _, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(pair: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&[pair.0.clone(), pair.1.clone()], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Rational, Rational), D::Error> {
        let v = serde_rational_vec::deserialize(d)?;
        <[Rational; 2]>::try_from(v).map(|[a, b]| (a, b)).map_err(|_| D::Error::custom("expected a pair of rationals"))
    }
}

impl PinchStep {
    /// Checks the step's own invariants and applies it to `v`.
    pub fn apply(&self, v: &mut [Rational]) -> Result<()> {
        let fail = |what: &str| Err(Error::Order(format!("invalid pinch step {}/{}: {what}", self.s, self.t)));
        if self.s == self.t || self.s >= v.len() || self.t >= v.len() {
            return fail("bad positions");
        }
        if v[self.s] != self.before.0 || v[self.t] != self.before.1 {
            return fail("before-values do not match the vector");
        }
        if &self.after.0 + &self.after.1 != &self.before.0 + &self.before.1 {
            return fail("sum not preserved");
        }
        let (lo, hi) = if self.before.0 <= self.before.1 {
            (&self.before.0, &self.before.1)
        } else {
            (&self.before.1, &self.before.0)
        };
        let between = |x: &Rational| lo <= x && x <= hi;
        if !between(&self.after.0) || !between(&self.after.1) {
            return fail("after-values not between the before-values");
        }
        v[self.s] = self.after.0.clone();
        v[self.t] = self.after.1.clone();
        Ok(())
    }
}

/// Replays `steps` from `start`, returning every intermediate vector
/// (including `start` and the final one).
pub fn replay(start: &[Rational], steps: &[PinchStep]) -> Result<Vec<Vec<Rational>>> {
    let mut current = start.to_vec();
    let mut trail = vec![current.clone()];
    for step in steps {
        step.apply(&mut current)?;
        trail.push(current.clone());
    }
    Ok(trail)
}

/// Pinch steps taking the descending rearrangement of `p` to the descending
/// rearrangement of `p_prime`, assuming `p ≻ p_prime`.
///
/// Each step picks the last position `j` where the current vector exceeds
/// the target and the first later position `k` where it falls short, then
/// moves `min(cur_j - target_j, target_k - cur_k)` from `j` to `k`. The
/// vector stays sorted, each step fixes at least one coordinate, and the
/// chain has at most `m - 1` steps.
pub fn pinch_chain(p: &ProbVector, p_prime: &ProbVector) -> Result<Vec<PinchStep>> {
    if !majorizes(p, p_prime)? {
        return Err(Error::Order("first vector does not majorize the second".into()));
    }
    let mut current = p.sorted_desc();
    let target = p_prime.sorted_desc();
    let mut steps = Vec::new();
    while let Some(j) = (0..current.len()).rev().find(|&i| current[i] > target[i]) {
        let k = (j + 1..current.len())
            .find(|&i| current[i] < target[i])
            .expect("majorization leaves a deficit after every surplus");
        let surplus = &current[j] - &target[j];
        let deficit = &target[k] - &current[k];
        let delta = surplus.min(deficit);
        let before = (current[j].clone(), current[k].clone());
        current[j] -= &delta;
        current[k] += &delta;
        steps.push(PinchStep { s: j, t: k, before, after: (current[j].clone(), current[k].clone()) });
    }
    Ok(steps)
}

/// Criterion on elementary symmetric polynomials for
/// `B(1,p_1)∗⋯∗B(1,p_m) ≤cx B(1,p'_1)∗⋯∗B(1,p'_m)`: `σ_1(p) = σ_1(p')` and,
/// for `k = 2..=m`,
/// `Σ_{j=k}^{m} (-1)^{j-k} C(j-2, k-2) (σ_j(p') - σ_j(p)) ≥ 0`.
///
/// The `k`-th alternating sum is the difference of the stop-loss transforms
/// at `k - 1`, written in factorial moments `E C(X, j) = σ_j`.
pub fn sigma_criterion(p: &ProbVector, p_prime: &ProbVector) -> Result<bool> {
    check_lengths(p, p_prime)?;
    let m = p.len();
    let s = elementary_symmetric_all(p.entries());
    let s_prime = elementary_symmetric_all(p_prime.entries());
    if s[1] != s_prime[1] {
        return Ok(false);
    }
    for k in 2..=m {
        let mut acc = Rational::zero();
        for j in k..=m {
            let c = Rational::from_integer(binomial_coefficient((j - 2) as u64, (k - 2) as i64));
            let term = c * (&s_prime[j] - &s[j]);
            if (j - k) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B(1,p_1) ∗ ⋯ ∗ B(1,p_m)`.
pub fn bernoulli_convolution(p: &ProbVector) -> DiscreteDistribution {
    p.entries()
        .iter()
        .map(|pi| DiscreteDistribution::bernoulli(pi).expect("entries in [0, 1]"))
        .fold(DiscreteDistribution::dirac(Rational::zero()), |acc, b| acc.convolve(&b))
}

/// `(p̄, …, p̄)` of the same length as `p`.
pub fn flattened(p: &ProbVector) -> ProbVector {
    ProbVector(vec![p.mean(); p.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_order::{is_cx_dominated, CxReason};
    use crate::numerics::ratio;
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pv(entries: &[(i64, i64)]) -> ProbVector {
        ProbVector::new(entries.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn ex1() -> (ProbVector, ProbVector) {
        (pv(&[(3, 4), (3, 4), (0, 1)]), pv(&[(5, 6), (1, 2), (1, 6)]))
    }

    fn ex2() -> (ProbVector, ProbVector) {
        (pv(&[(1, 1), (1, 2), (1, 2), (0, 1)]), pv(&[(5, 6), (5, 6), (1, 6), (1, 6)]))
    }

    #[test]
    fn construction_checks() {
        assert!(ProbVector::new(vec![]).is_err());
        assert!(ProbVector::new(vec![ratio(3, 2)]).is_err());
        let p: ProbVector = serde_json::from_str(r#"{"entries": ["3/4", "3/4", "0"]}"#).unwrap();
        assert_eq!(p, ex1().0);
        assert!(serde_json::from_str::<ProbVector>(r#"{"entries": ["-1/4"]}"#).is_err());
    }

    #[test]
    fn majorization_examples() {
        let (p, p2) = ex1();
        assert!(!majorizes(&p, &p2).unwrap());
        // prefix sums 1, 3/2, 2, 2 against 5/6, 5/3, 11/6, 2: fails at k = 2
        let (q, p) = ex2();
        assert!(!majorizes(&q, &p).unwrap());
        assert!(!majorizes(&p, &q).unwrap());
        let inner = pv(&[(3, 4), (1, 2), (1, 2), (1, 4)]);
        assert!(majorizes(&q, &inner).unwrap());
        assert!(majorizes(&p, &p).unwrap());
        assert!(matches!(majorizes(&q, &ex1().0), Err(Error::Domain(_))));
        // unequal totals never compare
        assert!(!majorizes(&pv(&[(1, 1), (0, 1)]), &pv(&[(1, 2), (1, 3)])).unwrap());
    }

    #[test]
    fn example_two_moments() {
        let (p, p2) = ex2();
        assert_eq!(p.mean(), p2.mean());
        assert_eq!(p.squared_deviation(), ratio(1, 2));
        assert_eq!(p2.squared_deviation(), ratio(4, 9));
    }

    #[test]
    fn pinch_examples() {
        let steps = pinch_chain(&pv(&[(1, 1), (0, 1)]), &pv(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(steps, vec![PinchStep { s: 0, t: 1, before: (int(1), int(0)), after: (ratio(1, 2), ratio(1, 2)) }]);
        let (p, not_majorized) = ex2();
        assert!(matches!(pinch_chain(&p, &not_majorized), Err(Error::Order(_))));
        let p2 = pv(&[(1, 4), (1, 2), (3, 4), (1, 2)]);
        let steps = pinch_chain(&p, &p2).unwrap();
        assert!(steps.len() <= 3);
        let trail = replay(&p.sorted_desc(), &steps).unwrap();
        assert_eq!(trail.last().unwrap(), &p2.sorted_desc());
        let permuted = pv(&[(0, 1), (1, 2), (1, 1), (1, 2)]);
        assert!(pinch_chain(&p, &permuted).unwrap().is_empty());
        let (a, b) = ex1();
        assert!(matches!(pinch_chain(&a, &b), Err(Error::Order(_))));
    }

    #[test]
    fn replay_rejects_bad_steps() {
        let v = vec![int(1), int(0)];
        let widen = PinchStep { s: 0, t: 1, before: (int(1), int(0)), after: (ratio(3, 2), ratio(-1, 2)) };
        assert!(replay(&v, &[widen]).is_err());
        let leak = PinchStep { s: 0, t: 1, before: (int(1), int(0)), after: (ratio(1, 2), ratio(1, 4)) };
        assert!(replay(&v, &[leak]).is_err());
        let stale = PinchStep { s: 0, t: 1, before: (int(0), int(1)), after: (ratio(1, 2), ratio(1, 2)) };
        assert!(replay(&v, &[stale]).is_err());
    }

    #[test]
    fn sigma_examples() {
        let (p, p2) = ex1();
        assert!(sigma_criterion(&p, &p2).unwrap());
        let (p, p2) = ex2();
        assert!(!sigma_criterion(&p, &p2).unwrap());
        assert!(sigma_criterion(&p, &p).unwrap());
        assert!(sigma_criterion(&p, &ex1().0).is_err());
    }

    #[test]
    fn bernoulli_convolution_examples() {
        let d = bernoulli_convolution(&ex2().1);
        let masses: Vec<Rational> = d.atoms().iter().map(|(_, m)| m.clone()).collect();
        let expected: Vec<Rational> = [25, 260, 726, 260, 25].iter().map(|&k| ratio(k, 1296)).collect();
        assert_eq!(masses, expected);
        let p = pv(&[(2, 5); 4]);
        assert_eq!(bernoulli_convolution(&p), DiscreteDistribution::binomial(4, &ratio(2, 5)).unwrap());
        let v = is_cx_dominated(&bernoulli_convolution(&ex2().0), &d);
        assert_eq!(v.reason, CxReason::StopLossViolation);
    }

    #[test]
    fn pinch_chains_replay_and_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..80 {
            let m = rng.random_range(1..=6);
            let (p, p2) = sample::majorized_pair(&mut rng, m, 12);
            let steps = pinch_chain(&p, &p2).unwrap();
            assert!(steps.len() < m.max(1));
            let trail = replay(&p.sorted_desc(), &steps).unwrap();
            assert_eq!(trail.last().unwrap(), &p2.sorted_desc());
            for w in trail.windows(2) {
                let (a, b) = (ProbVector::new(w[0].clone()).unwrap(), ProbVector::new(w[1].clone()).unwrap());
                assert!(majorizes(&a, &b).unwrap() && majorizes(&b, &p2).unwrap());
                assert!(is_cx_dominated(&bernoulli_convolution(&a), &bernoulli_convolution(&b)).dominated);
            }
        }
    }

    #[test]
    fn sigma_agrees_with_convex_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (mut yes, mut no) = (0, 0);
        for _ in 0..120 {
            let m = rng.random_range(2..=5);
            let (p, p2) = sample::equal_sum_pair(&mut rng, m, 12);
            let direct = is_cx_dominated(&bernoulli_convolution(&p), &bernoulli_convolution(&p2)).dominated;
            assert_eq!(sigma_criterion(&p, &p2).unwrap(), direct, "{p:?} vs {p2:?}");
            if direct {
                yes += 1
            } else {
                no += 1
            }
        }
        assert!(yes > 10 && no > 10, "{yes} / {no}");
    }
}
