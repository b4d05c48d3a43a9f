//! Bernstein basis polynomials, the Bernstein operator, and the
//! multi-index sums `Σ p_{n_1,i_1}(x_1)⋯p_{n_k,i_k}(x_k) f((i_1+⋯+i_k)/m)`.

mod function;

pub use function::{random_convex_on_unit, standard_battery, ConvexTestFunction, FunctionKind, Interval};

use num_traits::{One, Pow, Zero};

use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::numerics::{binomial_coefficient, format_rational, in_unit_interval, ratio, Rational};

fn check_unit(x: &Rational) -> Result<()> {
    if in_unit_interval(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument {} outside [0, 1]", format_rational(x))))
    }
}

/// `p_{n,i}(x) = C(n,i) x^i (1-x)^(n-i)`.
pub fn bernstein_basis(n: u32, i: u32, x: &Rational) -> Result<Rational> {
    if i > n {
        return Err(Error::Range(format!("basis index {i} exceeds degree {n}")));
    }
    check_unit(x)?;
    let c = Rational::from_integer(binomial_coefficient(n as u64, i as i64));
    Ok(c * Pow::pow(x, i) * Pow::pow(&(Rational::one() - x), n - i))
}

/// `(B_n f)(x) = Σ_i p_{n,i}(x) f(i/n)`.
pub fn bernstein_apply(n: u32, f: &ConvexTestFunction, x: &Rational) -> Result<Rational> {
    BernsteinWeights::new(n, x)?.apply(f)
}

/// The basis values `p_{n,0}(x), …, p_{n,n}(x)` at a fixed `x`, for applying
/// `B_n` to many functions at the same point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernsteinWeights {
    n: u32,
    x: Rational,
    weights: Vec<Rational>,
}

impl BernsteinWeights {
    pub fn new(n: u32, x: &Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Bernstein operator requires n >= 1".into()));
        }
        check_unit(x)?;
        let weights = (0..=n).map(|i| bernstein_basis(n, i, x)).collect::<Result<_>>()?;
        Ok(Self { n, x: x.clone(), weights })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn apply(&self, f: &ConvexTestFunction) -> Result<Rational> {
        if !f.domain().contains_interval(&Interval::unit()) {
            return Err(Error::Domain(format!("domain {} of {} does not contain [0, 1]", f.domain(), f.id())));
        }
        let mut acc = Rational::zero();
        for (i, w) in self.weights.iter().enumerate() {
            acc += w * f.eval(&ratio(i as i64, self.n as i64))?;
        }
        Ok(acc)
    }
}

/// Law of `(I_1 + ⋯ + I_k) / m` for independent `I_j ~ B(n_j, x_j)`, `m = Σ n_j`.
pub fn tensor_distribution(ns: &[u32], xs: &[Rational]) -> Result<DiscreteDistribution> {
    if ns.is_empty() || ns.len() != xs.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty degree and argument lists, got {} and {}",
            ns.len(),
            xs.len()
        )));
    }
    let parts = ns.iter().zip(xs).map(|(&n, x)| DiscreteDistribution::binomial(n, x)).collect::<Result<Vec<_>>>()?;
    let m: u32 = ns.iter().sum();
    Ok(DiscreteDistribution::convolve_all(&parts).affine_pushforward(&ratio(1, m as i64), &Rational::zero()))
}

/// The multi-index sum, evaluated as an expectation over the convolution of
/// the binomial laws rather than by nested loops.
pub fn tensor_sum(ns: &[u32], xs: &[Rational], f: &ConvexTestFunction) -> Result<Rational> {
    tensor_distribution(ns, xs)?.expect(f)
}
