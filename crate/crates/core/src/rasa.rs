//! Verifiers for the Raşa inequality family.
//!
//! Every verifier returns exact margins oriented so that a nonnegative
//! margin means the inequality holds. Distribution-side and summation-side
//! quantities come from different code paths, so agreement between related
//! margins is itself a check.

use num_traits::{Signed, Zero};

use crate::bernstein::{tensor_distribution, BernsteinWeights, ConvexTestFunction};
use crate::convex_order::{is_cx_dominated, CxVerdict};
use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::majorization::{majorizes, ProbVector};
use crate::numerics::{format_rational, in_unit_interval, int, ratio, Rational};

/// Identifiers of the checked inequalities, as they appear in reports.
pub mod ids {
    /// `Σ_i Σ_j (p_i(x)p_j(x) + p_i(y)p_j(y) - 2 p_i(x)p_j(y)) f((i+j)/2n) ≥ 0`
    pub const RASA: &str = "rasa";
    /// `Σ_i Σ_j p_i(x)p_j(y) f((i+j)/2n) · 2 ≤ (B_2n f)(x) + (B_2n f)(y)`
    pub const TWO_POINT: &str = "two-point";
    /// `2 (B_2n f)((x+y)/2) ≤ (B_2n f)(x) + (B_2n f)(y)`
    pub const MIDPOINT_JENSEN: &str = "midpoint-jensen";
    /// `Σ_i Σ_j p_i(x)p_j(y) f((i+j)/2n) ≤ (B_2n f)((x+y)/2)`
    pub const MIXED_CONCENTRATION: &str = "mixed-concentration";
    /// k-fold multi-index sum `≤ (B_m f)(x̄)`
    pub const TENSOR_CONCENTRATION: &str = "tensor-concentration";
    /// `(B_m f)(x̄) ≤ Σ (n_i/m) (B_m f)(x_i)`
    pub const WEIGHTED_JENSEN: &str = "weighted-jensen";
    /// k-fold multi-index sum `≤ Σ (n_i/m) (B_m f)(x_i)`
    pub const TENSOR_JENSEN: &str = "tensor-jensen";
    /// as [`TENSOR_JENSEN`], right side expanded as binomial expectations
    pub const TENSOR_JENSEN_EXPANDED: &str = "tensor-jensen-expanded";
    /// `Σ (B_n f)(p'_i) ≤ Σ (B_n f)(p_i)` for `p ≻ p'`
    pub const HLP_SUM: &str = "hlp-sum";
    /// adjacent stages of the block-merging chain
    pub const CONVOLUTION_CHAIN: &str = "convolution-chain";
    /// adjacent stages of the weighted Jensen chain
    pub const JENSEN_CHAIN: &str = "jensen-chain";
}

/// Both sides of one inequality at one grid point, `lhs ≤ rhs` expected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityMargin {
    pub inequality_id: String,
    /// Named grid arguments.
    pub point: Vec<(String, Rational)>,
    pub f_id: String,
    pub lhs: Rational,
    pub rhs: Rational,
    /// `rhs - lhs`
    pub margin: Rational,
}

impl InequalityMargin {
    pub fn new(
        inequality_id: &str,
        point: Vec<(String, Rational)>,
        f: &ConvexTestFunction,
        lhs: Rational,
        rhs: Rational,
    ) -> Self {
        let margin = &rhs - &lhs;
        Self { inequality_id: inequality_id.to_string(), point, f_id: f.id(), lhs, rhs, margin }
    }

    pub fn holds(&self) -> bool {
        !self.margin.is_negative()
    }
}

/// Successive expressions of a `≤`-chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainValues {
    pub values: Vec<Rational>,
}

impl ChainValues {
    /// Index `i` of the first pair with `values[i] > values[i + 1]`.
    pub fn first_descent(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[0] > w[1])
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.first_descent().is_none()
    }

    /// One margin per adjacent pair of stages.
    pub fn margins(
        &self,
        inequality_id: &str,
        point: &[(String, Rational)],
        f: &ConvexTestFunction,
    ) -> Vec<InequalityMargin> {
        self.values
            .windows(2)
            .enumerate()
            .map(|(stage, w)| {
                let mut point = point.to_vec();
                point.push(("stage".into(), int(stage as i64)));
                InequalityMargin::new(inequality_id, point, f, w[0].clone(), w[1].clone())
            })
            .collect()
    }
}

fn check_unit(name: &str, x: &Rational) -> Result<()> {
    if in_unit_interval(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {} outside [0, 1]", format_rational(x))))
    }
}

fn check_blocks(ns: &[u32], xs: &[Rational]) -> Result<()> {
    if ns.is_empty() || ns.len() != xs.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty degree and argument lists, got {} and {}",
            ns.len(),
            xs.len()
        )));
    }
    if ns.contains(&0) {
        return Err(Error::Domain("block degrees must be positive".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        check_unit(&format!("x{}", i + 1), x)?;
    }
    Ok(())
}

fn block_point(ns: &[u32], xs: &[Rational]) -> Vec<(String, Rational)> {
    let mut point: Vec<(String, Rational)> =
        ns.iter().enumerate().map(|(i, &n)| (format!("n{}", i + 1), int(n as i64))).collect();
    point.extend(xs.iter().enumerate().map(|(i, x)| (format!("x{}", i + 1), x.clone())));
    point
}

/// Precomputed distributions for the two-point inequalities at `(n, x, y)`,
/// all supported on the lattice `{j / 2n}`.
#[derive(Debug, Clone)]
pub struct PairCase {
    n: u32,
    x: Rational,
    y: Rational,
    cross: DiscreteDistribution,
    mixture: DiscreteDistribution,
    at_x: BernsteinWeights,
    at_y: BernsteinWeights,
    at_mid: BernsteinWeights,
}

impl PairCase {
    pub fn new(n: u32, x: &Rational, y: &Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        check_unit("x", x)?;
        check_unit("y", y)?;
        let bx = DiscreteDistribution::binomial(n, x)?;
        let by = DiscreteDistribution::binomial(n, y)?;
        let scale = ratio(1, 2 * n as i64);
        let zero = Rational::zero();
        let cross = bx.convolve(&by).affine_pushforward(&scale, &zero);
        let half = ratio(1, 2);
        let mixture = DiscreteDistribution::mixture(&[(half.clone(), bx.convolve(&bx)), (half, by.convolve(&by))])?
            .affine_pushforward(&scale, &zero);
        let mid = (x + y) / int(2);
        Ok(Self {
            n,
            x: x.clone(),
            y: y.clone(),
            cross,
            mixture,
            at_x: BernsteinWeights::new(2 * n, x)?,
            at_y: BernsteinWeights::new(2 * n, y)?,
            at_mid: BernsteinWeights::new(2 * n, &mid)?,
        })
    }

    pub fn point(&self) -> Vec<(String, Rational)> {
        vec![("n".into(), int(self.n as i64)), ("x".into(), self.x.clone()), ("y".into(), self.y.clone())]
    }

    /// The double sum itself as `rhs`, against `lhs = 0`. Evaluated as
    /// `2 (E f(mixture) - E f(cross))`.
    pub fn original(&self, f: &ConvexTestFunction) -> Result<InequalityMargin> {
        let double_sum = int(2) * (self.mixture.expect(f)? - self.cross.expect(f)?);
        Ok(InequalityMargin::new(ids::RASA, self.point(), f, Rational::zero(), double_sum))
    }

    /// Two-point form, midpoint Jensen step, and mixed concentration, in
    /// that order. Bernstein values here come from the basis sums.
    pub fn split(&self, f: &ConvexTestFunction) -> Result<Vec<InequalityMargin>> {
        let cross = self.cross.expect(f)?;
        let bx = self.at_x.apply(f)?;
        let by = self.at_y.apply(f)?;
        let bmid = self.at_mid.apply(f)?;
        let two = int(2);
        Ok(vec![
            InequalityMargin::new(ids::TWO_POINT, self.point(), f, &two * &cross, &bx + &by),
            InequalityMargin::new(ids::MIDPOINT_JENSEN, self.point(), f, &two * &bmid, &bx + &by),
            InequalityMargin::new(ids::MIXED_CONCENTRATION, self.point(), f, cross, bmid),
        ])
    }
}

pub fn rasa_original(n: u32, x: &Rational, y: &Rational, f: &ConvexTestFunction) -> Result<InequalityMargin> {
    PairCase::new(n, x, y)?.original(f)
}

pub fn split_inequalities(n: u32, x: &Rational, y: &Rational, f: &ConvexTestFunction) -> Result<Vec<InequalityMargin>> {
    PairCase::new(n, x, y)?.split(f)
}

/// `B(n,x) ∗ B(n,y) ≤cx B(2n, (x+y)/2)`
pub fn concentration_order(n: u32, x: &Rational, y: &Rational) -> Result<CxVerdict> {
    let lhs = DiscreteDistribution::binomial(n, x)?.convolve(&DiscreteDistribution::binomial(n, y)?);
    let rhs = DiscreteDistribution::binomial(2 * n, &((x + y) / int(2)))?;
    Ok(is_cx_dominated(&lhs, &rhs))
}

/// `B(2n, (x+y)/2) ≤cx ½ [B(n,x) ∗ B(n,x) + B(n,y) ∗ B(n,y)]`
pub fn mixture_order(n: u32, x: &Rational, y: &Rational) -> Result<CxVerdict> {
    let bx = DiscreteDistribution::binomial(n, x)?;
    let by = DiscreteDistribution::binomial(n, y)?;
    let lhs = DiscreteDistribution::binomial(2 * n, &((x + y) / int(2)))?;
    let half = ratio(1, 2);
    let rhs = DiscreteDistribution::mixture(&[(half.clone(), bx.convolve(&bx)), (half, by.convolve(&by))])?;
    Ok(is_cx_dominated(&lhs, &rhs))
}

/// Precomputed data for the k-block inequalities at `(ns, xs)`.
#[derive(Debug, Clone)]
pub struct BlockCase {
    ns: Vec<u32>,
    xs: Vec<Rational>,
    m: u32,
    tensor: DiscreteDistribution,
    at_mean: BernsteinWeights,
    at_blocks: Vec<BernsteinWeights>,
    binomial_at_blocks: Vec<DiscreteDistribution>,
}

impl BlockCase {
    pub fn new(ns: &[u32], xs: &[Rational]) -> Result<Self> {
        check_blocks(ns, xs)?;
        let m: u32 = ns.iter().sum();
        let mean = weighted_mean(ns, xs);
        let scale = ratio(1, m as i64);
        Ok(Self {
            ns: ns.to_vec(),
            xs: xs.to_vec(),
            m,
            tensor: tensor_distribution(ns, xs)?,
            at_mean: BernsteinWeights::new(m, &mean)?,
            at_blocks: xs.iter().map(|x| BernsteinWeights::new(m, x)).collect::<Result<_>>()?,
            binomial_at_blocks: xs
                .iter()
                .map(|x| Ok(DiscreteDistribution::binomial(m, x)?.affine_pushforward(&scale, &Rational::zero())))
                .collect::<Result<_>>()?,
        })
    }

    pub fn point(&self) -> Vec<(String, Rational)> {
        block_point(&self.ns, &self.xs)
    }

    /// Tensor concentration, weighted Jensen, their combination, and the
    /// combination with its right side expanded, in that order.
    pub fn margins(&self, f: &ConvexTestFunction) -> Result<Vec<InequalityMargin>> {
        let m = int(self.m as i64);
        let tensor = self.tensor.expect(f)?;
        let at_mean = self.at_mean.apply(f)?;
        let mut jensen = Rational::zero();
        let mut expanded = Rational::zero();
        for ((&n, weights), binomial) in self.ns.iter().zip(&self.at_blocks).zip(&self.binomial_at_blocks) {
            let w = int(n as i64) / &m;
            jensen += &w * weights.apply(f)?;
            expanded += &w * binomial.expect(f)?;
        }
        let point = self.point();
        Ok(vec![
            InequalityMargin::new(ids::TENSOR_CONCENTRATION, point.clone(), f, tensor.clone(), at_mean.clone()),
            InequalityMargin::new(ids::WEIGHTED_JENSEN, point.clone(), f, at_mean, jensen.clone()),
            InequalityMargin::new(ids::TENSOR_JENSEN, point.clone(), f, tensor.clone(), jensen),
            InequalityMargin::new(ids::TENSOR_JENSEN_EXPANDED, point, f, tensor, expanded),
        ])
    }
}

fn weighted_mean(ns: &[u32], xs: &[Rational]) -> Rational {
    let m: u32 = ns.iter().sum();
    let total: Rational = ns.iter().zip(xs).map(|(&n, x)| int(n as i64) * x).sum();
    total / int(m as i64)
}

pub fn generalized_inequalities(ns: &[u32], xs: &[Rational], f: &ConvexTestFunction) -> Result<Vec<InequalityMargin>> {
    BlockCase::new(ns, xs)?.margins(f)
}

/// `Σ (B_n f)(p'_i) ≤ Σ (B_n f)(p_i)` whenever `p ≻ p'`.
pub fn hlp_sum(n: u32, p: &ProbVector, p_prime: &ProbVector, f: &ConvexTestFunction) -> Result<InequalityMargin> {
    if !majorizes(p, p_prime)? {
        return Err(Error::Order("first vector does not majorize the second".into()));
    }
    let sum = |v: &ProbVector| -> Result<Rational> {
        v.entries().iter().map(|x| BernsteinWeights::new(n, x)?.apply(f)).sum()
    };
    let mut point = vec![("n".to_string(), int(n as i64))];
    point.extend(p.entries().iter().enumerate().map(|(i, x)| (format!("p{}", i + 1), x.clone())));
    point.extend(p_prime.entries().iter().enumerate().map(|(i, x)| (format!("q{}", i + 1), x.clone())));
    Ok(InequalityMargin::new(ids::HLP_SUM, point, f, sum(p_prime)?, sum(p)?))
}

/// Stage distributions of the block-merging chain: stage `j` replaces the
/// first `j` blocks by a single `B(ñ_j, x̃_j)` with `ñ_j = n_1+⋯+n_j` and
/// `x̃_j = (n_1 x_1+⋯+n_j x_j)/ñ_j`. Stage 1 is the original tensor sum and
/// stage `k` is `B(m, x̄)`.
#[derive(Debug, Clone)]
pub struct ChainCase {
    ns: Vec<u32>,
    xs: Vec<Rational>,
    m: u32,
    stages: Vec<DiscreteDistribution>,
    merged_points: Vec<BernsteinWeights>,
    block_points: Vec<BernsteinWeights>,
}

impl ChainCase {
    pub fn new(ns: &[u32], xs: &[Rational]) -> Result<Self> {
        check_blocks(ns, xs)?;
        let m: u32 = ns.iter().sum();
        let k = ns.len();
        let mut stages = Vec::with_capacity(k);
        let mut merged_points = Vec::with_capacity(k);
        for j in 1..=k {
            let merged_n: u32 = ns[..j].iter().sum();
            let merged_x = weighted_mean(&ns[..j], &xs[..j]);
            let mut stage_ns = vec![merged_n];
            stage_ns.extend_from_slice(&ns[j..]);
            let mut stage_xs = vec![merged_x.clone()];
            stage_xs.extend_from_slice(&xs[j..]);
            stages.push(tensor_distribution(&stage_ns, &stage_xs)?);
            merged_points.push(BernsteinWeights::new(m, &merged_x)?);
        }
        let block_points = xs.iter().map(|x| BernsteinWeights::new(m, x)).collect::<Result<_>>()?;
        Ok(Self { ns: ns.to_vec(), xs: xs.to_vec(), m, stages, merged_points, block_points })
    }

    pub fn point(&self) -> Vec<(String, Rational)> {
        block_point(&self.ns, &self.xs)
    }

    /// Tensor sum, then each merged stage, ending at `(B_m f)(x̄)`.
    pub fn convolution(&self, f: &ConvexTestFunction) -> Result<ChainValues> {
        let values = self.stages.iter().map(|d| d.expect(f)).collect::<Result<_>>()?;
        Ok(ChainValues { values })
    }

    /// From `(B_m f)(x̄)` up to `Σ (n_i/m)(B_m f)(x_i)`, un-merging one block
    /// per stage.
    pub fn jensen(&self, f: &ConvexTestFunction) -> Result<ChainValues> {
        let m = int(self.m as i64);
        let k = self.ns.len();
        let at_blocks: Vec<Rational> = self.block_points.iter().map(|w| w.apply(f)).collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(k);
        for j in (1..=k).rev() {
            let merged_n: u32 = self.ns[..j].iter().sum();
            let mut value = int(merged_n as i64) / &m * self.merged_points[j - 1].apply(f)?;
            for (&n, at) in self.ns[j..].iter().zip(&at_blocks[j..]) {
                value += int(n as i64) / &m * at;
            }
            values.push(value);
        }
        Ok(ChainValues { values })
    }
}

pub fn convolution_chain(ns: &[u32], xs: &[Rational], f: &ConvexTestFunction) -> Result<ChainValues> {
    ChainCase::new(ns, xs)?.convolution(f)
}

pub fn jensen_chain(ns: &[u32], xs: &[Rational], f: &ConvexTestFunction) -> Result<ChainValues> {
    ChainCase::new(ns, xs)?.jensen(f)
}
