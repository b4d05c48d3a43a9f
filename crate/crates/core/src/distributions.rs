//! Finitely-supported probability distributions on rational points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bernstein::ConvexTestFunction;
use crate::error::{Error, Result};
use crate::numerics::{binomial_coefficient, format_rational, in_unit_interval, parse_rational, Rational};

/// A probability measure with finitely many atoms.
///
/// Atoms are kept sorted by point, with duplicate points merged and
/// zero-mass atoms dropped, so two distributions are equal exactly when
/// their atom lists are equal. Masses always sum to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct DiscreteDistribution {
    atoms: Vec<(Rational, Rational)>,
}

impl DiscreteDistribution {
    /// Builds a distribution from `(point, mass)` pairs in any order.
    pub fn from_atoms<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut merged = BTreeMap::new();
        for (point, mass) in atoms {
            if mass.is_negative() {
                return Err(Error::Domain(format!(
                    "negative mass {} at point {}",
                    format_rational(&mass),
                    format_rational(&point)
                )));
            }
            *merged.entry(point).or_insert_with(Rational::zero) += mass;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("masses sum to {}, expected 1", format_rational(&total))));
        }
        Ok(Self::from_merged(merged))
    }

    fn from_merged(merged: BTreeMap<Rational, Rational>) -> Self {
        let atoms = merged.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Self { atoms }
    }

    /// The point mass at `c`.
    pub fn dirac(c: Rational) -> Self {
        Self { atoms: vec![(c, Rational::one())] }
    }

    pub fn bernoulli(p: &Rational) -> Result<Self> {
        check_probability(p)?;
        let mut merged = BTreeMap::new();
        merged.insert(Rational::zero(), Rational::one() - p);
        merged.insert(Rational::one(), p.clone());
        Ok(Self::from_merged(merged))
    }

    /// `B(n, p)`: mass `C(n,k) p^k (1-p)^(n-k)` at each `k = 0..=n`.
    pub fn binomial(n: u32, p: &Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("binomial requires n >= 1".into()));
        }
        check_probability(p)?;
        let q = Rational::one() - p;
        let merged = (0..=n)
            .map(|k| {
                let c = Rational::from_integer(binomial_coefficient(n as u64, k as i64));
                let mass = c * Pow::pow(p, k) * Pow::pow(&q, n - k);
                (Rational::from_integer(BigInt::from(k)), mass)
            })
            .collect();
        Ok(Self::from_merged(merged))
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.atoms.iter().map(|(point, _)| point)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn min_point(&self) -> &Rational {
        &self.atoms[0].0
    }

    pub fn max_point(&self) -> &Rational {
        &self.atoms[self.atoms.len() - 1].0
    }

    /// Mass at `point`, zero off the support.
    pub fn mass_at(&self, point: &Rational) -> Rational {
        self.atoms
            .binary_search_by(|(p, _)| p.cmp(point))
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Distribution of the sum of independent draws from `self` and `other`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut merged = BTreeMap::new();
        for (a, ma) in &self.atoms {
            for (b, mb) in &other.atoms {
                *merged.entry(a + b).or_insert_with(Rational::zero) += ma * mb;
            }
        }
        Self::from_merged(merged)
    }

    /// Convolution of every distribution in `parts`; `δ_0` when empty.
    pub fn convolve_all<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = &'a DiscreteDistribution>,
    {
        parts.into_iter().fold(Self::dirac(Rational::zero()), |acc, d| acc.convolve(d))
    }

    /// Convex combination `Σ w_i d_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(components: &[(Rational, DiscreteDistribution)]) -> Result<Self> {
        let mut total = Rational::zero();
        let mut merged = BTreeMap::new();
        for (w, d) in components {
            if w.is_negative() {
                return Err(Error::Domain(format!("negative mixture weight {}", format_rational(w))));
            }
            total += w;
            for (point, mass) in &d.atoms {
                *merged.entry(point.clone()).or_insert_with(Rational::zero) += w * mass;
            }
        }
        if !total.is_one() {
            return Err(Error::Domain(format!("mixture weights sum to {}, expected 1", format_rational(&total))));
        }
        Ok(Self::from_merged(merged))
    }

    /// Image under `t ↦ scale·t + shift`.
    pub fn affine_pushforward(&self, scale: &Rational, shift: &Rational) -> Self {
        let mut merged = BTreeMap::new();
        for (point, mass) in &self.atoms {
            *merged.entry(scale * point + shift).or_insert_with(Rational::zero) += mass;
        }
        Self::from_merged(merged)
    }

    pub fn mean(&self) -> Rational {
        self.atoms.iter().map(|(p, m)| p * m).sum()
    }

    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        self.atoms
            .iter()
            .map(|(p, m)| {
                let d = p - &mean;
                &d * &d * m
            })
            .sum()
    }

    /// Stop-loss transform `E max(X - t, 0)`.
    pub fn stop_loss(&self, t: &Rational) -> Rational {
        self.atoms.iter().filter(|(p, _)| p > t).map(|(p, m)| (p - t) * m).sum()
    }

    /// `E f(X)`. Fails if some support point lies outside the domain of `f`.
    pub fn expect(&self, f: &ConvexTestFunction) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (point, mass) in &self.atoms {
            acc += f.eval(point)? * mass;
        }
        Ok(acc)
    }
}

fn check_probability(p: &Rational) -> Result<()> {
    if in_unit_interval(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability {} outside [0, 1]", format_rational(p))))
    }
}

/// Wire form: `{"atoms": [["point", "mass"], …]}`.
#[derive(Serialize, Deserialize)]
struct RawDistribution {
    atoms: Vec<(String, String)>,
}

impl TryFrom<RawDistribution> for DiscreteDistribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        let atoms =
            raw.atoms.iter().map(|(p, m)| Ok((parse_rational(p)?, parse_rational(m)?))).collect::<Result<Vec<_>>>()?;
        Self::from_atoms(atoms)
    }
}

impl From<DiscreteDistribution> for RawDistribution {
    fn from(d: DiscreteDistribution) -> Self {
        Self { atoms: d.atoms.iter().map(|(p, m)| (format_rational(p), format_rational(m))).collect() }
    }
}
