//! Grid sweeps of the inequality verifiers, producing deterministic reports.
//!
//! Work is spread over a rayon pool; results are collected in case order and
//! then sorted, so the report does not depend on the number of threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bernstein::{standard_battery, ConvexTestFunction};
use crate::error::{Error, Result};
use crate::majorization::ProbVector;
use crate::numerics::{ratio, Rational};
use crate::rasa::{hlp_sum, BlockCase, ChainCase, InequalityMargin, PairCase};
use crate::report::Report;
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionSet {
    /// [`standard_battery`] on the lattice of each case.
    Battery,
    Fixed(Vec<ConvexTestFunction>),
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub grid_denominator: u32,
    pub seed: u64,
    pub functions: FunctionSet,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Block counts for the k-block sweep.
    pub ks: Vec<usize>,
    /// Fixed block degrees (k-block and chain sweeps).
    pub ns: Option<Vec<u32>>,
    /// Fixed block arguments, used together with `ns`.
    pub xs: Option<Vec<Rational>>,
    /// Number of random vector pairs for the majorization sweep.
    pub trials: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 5,
            grid_denominator: 8,
            seed: 0,
            functions: FunctionSet::Battery,
            threads: None,
            ks: vec![2, 3],
            ns: None,
            xs: None,
            trials: 300,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_denominator == 0 {
            return Err(Error::Domain("grid denominator must be at least 1".into()));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Domain(format!("invalid n range {}..{}", self.n_min, self.n_max)));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// `{a / d : 0 ≤ a ≤ d}`
    pub fn grid(&self) -> Vec<Rational> {
        let d = self.grid_denominator as i64;
        (0..=d).map(|a| ratio(a, d)).collect()
    }

    fn functions_for(&self, m: u32) -> Vec<ConvexTestFunction> {
        match &self.functions {
            FunctionSet::Battery => standard_battery(m, self.seed),
            FunctionSet::Fixed(fs) => fs.clone(),
        }
    }

    fn run<T, F>(&self, job: F) -> Result<T>
    where
        F: FnOnce() -> Result<T> + Send,
        T: Send,
    {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Domain(format!("cannot start {t} worker threads: {e}")))?
                .install(job),
            None => job(),
        }
    }
}

struct Batteries(BTreeMap<u32, Vec<ConvexTestFunction>>);

impl Batteries {
    fn new(cfg: &SweepConfig, lattices: impl IntoIterator<Item = u32>) -> Self {
        Self(lattices.into_iter().map(|m| (m, cfg.functions_for(m))).collect())
    }

    fn get(&self, m: u32) -> &[ConvexTestFunction] {
        &self.0[&m]
    }
}

fn collect<C, F>(cases: Vec<C>, eval: F) -> Result<Report>
where
    C: Sync,
    F: Fn(&C) -> Result<Vec<InequalityMargin>> + Sync + Send,
{
    let chunks = cases.par_iter().map(eval).collect::<Result<Vec<_>>>()?;
    Ok(Report::from_margins(chunks.into_iter().flatten().collect()))
}

fn pair_cases(cfg: &SweepConfig) -> Vec<(u32, Rational, Rational)> {
    let grid = cfg.grid();
    let mut cases = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        for x in &grid {
            for y in &grid {
                cases.push((n, x.clone(), y.clone()));
            }
        }
    }
    cases
}

/// The double-sum inequality on every `(n, x, y)` of the grid.
pub fn sweep_rasa(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let batteries = Batteries::new(cfg, (cfg.n_min..=cfg.n_max).map(|n| 2 * n));
    cfg.run(|| {
        collect(pair_cases(cfg), |(n, x, y)| {
            let case = PairCase::new(*n, x, y)?;
            batteries.get(2 * n).iter().map(|f| case.original(f)).collect()
        })
    })
}

/// Two-point form, midpoint Jensen step, and mixed concentration on the grid.
pub fn sweep_split(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let batteries = Batteries::new(cfg, (cfg.n_min..=cfg.n_max).map(|n| 2 * n));
    cfg.run(|| {
        collect(pair_cases(cfg), |(n, x, y)| {
            let case = PairCase::new(*n, x, y)?;
            let mut out = Vec::new();
            for f in batteries.get(2 * n) {
                out.extend(case.split(f)?);
            }
            Ok(out)
        })
    })
}

/// Nondecreasing index sequences of length `k` over `0..len`.
fn multisets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn extend(start: usize, len: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..len {
            current.push(i);
            extend(i, len, k, current, out);
            current.pop();
        }
    }
    extend(0, len, k, &mut current, &mut out);
    out
}

fn fixed_blocks(cfg: &SweepConfig) -> Result<Option<(Vec<u32>, Vec<Rational>)>> {
    match (&cfg.ns, &cfg.xs) {
        (Some(ns), Some(xs)) => Ok(Some((ns.clone(), xs.clone()))),
        (None, None) => Ok(None),
        _ => Err(Error::Domain("block degrees and arguments must be given together".into())),
    }
}

/// The k-block inequalities. With fixed `ns`/`xs` a single case is checked;
/// otherwise every multiset of `k` blocks `(n_i, x_i)` with
/// `n_i ∈ n_min..=n_max` and `x_i` on the grid, for each `k` in `ks`. The
/// checked quantities are symmetric under permuting blocks, so multisets
/// cover every ordered tuple.
pub fn sweep_general(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let cases: Vec<(Vec<u32>, Vec<Rational>)> = match fixed_blocks(cfg)? {
        Some(case) => vec![case],
        None => {
            let grid = cfg.grid();
            let blocks: Vec<(u32, Rational)> =
                (cfg.n_min..=cfg.n_max).flat_map(|n| grid.iter().map(move |x| (n, x.clone()))).collect();
            cfg.ks
                .iter()
                .flat_map(|&k| multisets(blocks.len(), k))
                .map(|idx| idx.into_iter().map(|i| blocks[i].clone()).unzip())
                .collect()
        }
    };
    let batteries = Batteries::new(cfg, cases.iter().map(|(ns, _)| ns.iter().sum()));
    cfg.run(|| {
        collect(cases, |(ns, xs)| {
            let case = BlockCase::new(ns, xs)?;
            let mut out = Vec::new();
            for f in batteries.get(ns.iter().sum()) {
                out.extend(case.margins(f)?);
            }
            Ok(out)
        })
    })
}

/// Both chains for each degree tuple (default `(1,1,2)` and `(1,2,3)`) over
/// every ordered tuple of grid arguments, unless `xs` is fixed.
pub fn sweep_chains(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let cases: Vec<(Vec<u32>, Vec<Rational>)> = match (&cfg.ns, &cfg.xs) {
        (Some(ns), Some(xs)) => vec![(ns.clone(), xs.clone())],
        (None, Some(_)) => return Err(Error::Domain("fixed arguments need fixed block degrees".into())),
        (ns, None) => {
            let degree_sets = match ns {
                Some(ns) => vec![ns.clone()],
                None => vec![vec![1, 1, 2], vec![1, 2, 3]],
            };
            let grid = cfg.grid();
            let mut cases = Vec::new();
            for ns in degree_sets {
                for xs in ordered_tuples(&grid, ns.len()) {
                    cases.push((ns.clone(), xs));
                }
            }
            cases
        }
    };
    let batteries = Batteries::new(cfg, cases.iter().map(|(ns, _)| ns.iter().sum()));
    cfg.run(|| {
        collect(cases, |(ns, xs)| {
            let case = ChainCase::new(ns, xs)?;
            let point = case.point();
            let mut out = Vec::new();
            for f in batteries.get(ns.iter().sum()) {
                out.extend(case.convolution(f)?.margins(crate::rasa::ids::CONVOLUTION_CHAIN, &point, f));
                out.extend(case.jensen(f)?.margins(crate::rasa::ids::JENSEN_CHAIN, &point, f));
            }
            Ok(out)
        })
    })
}

fn ordered_tuples(grid: &[Rational], k: usize) -> Vec<Vec<Rational>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                grid.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x.clone());
                    next
                })
            })
            .collect()
    })
}

/// `cfg.trials` seeded pairs `p ≻ p'` (length 1 to 6, denominators up to
/// 12), each checked for every `n` in range.
pub fn sweep_hlp(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(ProbVector, ProbVector)> = (0..cfg.trials)
        .map(|_| {
            let m = rng.random_range(1..=6);
            sample::majorized_pair(&mut rng, m, 12)
        })
        .collect();
    let mut cases = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        for (i, pair) in pairs.iter().enumerate() {
            cases.push((n, i, pair));
        }
    }
    let batteries = Batteries::new(cfg, cfg.n_min..=cfg.n_max);
    cfg.run(|| {
        collect(cases, |(n, i, (p, q))| {
            batteries
                .get(*n)
                .iter()
                .map(|f| {
                    let mut m = hlp_sum(*n, p, q, f)?;
                    m.point.insert(1, ("pair".into(), ratio(*i as i64, 1)));
                    Ok(m)
                })
                .collect()
        })
    })
}
