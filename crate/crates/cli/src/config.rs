use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rasa_core::numerics::parse_rational;
use rasa_core::sweep::{FunctionSet, SweepConfig};
use rasa_core::ConvexTestFunction;
use serde::de::DeserializeOwned;

use crate::{Family, SweepArgs};

/// Parses `a..b`, `a..=b`, or `a`.
pub fn parse_range(text: &str) -> Result<(u32, u32)> {
    let parse = |s: &str| -> Result<u32> {
        s.trim().parse().with_context(|| format!("invalid degree {s:?} in range {text:?}"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        bail!("degree range {text:?} must satisfy 1 <= a <= b");
    }
    Ok((lo, hi))
}

pub fn parse_functions(arg: &str) -> Result<FunctionSet> {
    let parse_t = |t: &str| parse_rational(t).with_context(|| format!("in --f {arg:?}"));
    Ok(match arg.split_once(':') {
        _ if arg == "battery" => FunctionSet::Battery,
        _ if arg == "square" => FunctionSet::Fixed(vec![ConvexTestFunction::square()]),
        Some(("hinge", t)) => FunctionSet::Fixed(vec![ConvexTestFunction::hinge(parse_t(t)?)]),
        Some(("abs", t)) => FunctionSet::Fixed(vec![ConvexTestFunction::abs(parse_t(t)?)]),
        _ => {
            let path = Path::new(arg);
            let text = fs::read_to_string(path)
                .with_context(|| format!("--f {arg:?} is neither a known function nor a readable file"))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).with_context(|| format!("parse error in {}", path.display()))?;
            let fs = if value.is_array() {
                serde_json::from_value(value)
            } else {
                serde_json::from_value(value).map(|f| vec![f])
            };
            FunctionSet::Fixed(fs.with_context(|| format!("invalid function in {}", path.display()))?)
        }
    })
}

/// Reads a JSON input file, reporting the path plus serde's line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parse error in {}", path.display()))
}

pub fn sweep_config(family: Family, args: &SweepArgs) -> Result<SweepConfig> {
    let default_n = match family {
        Family::General => (1, 3),
        _ => (1, 5),
    };
    let (n_min, n_max) = match &args.n {
        Some(text) => parse_range(text)?,
        None => default_n,
    };
    if args.grid_denominator == 0 {
        bail!("--grid-denominator must be at least 1");
    }
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let xs = args
        .xs
        .as_ref()
        .map(|xs| xs.iter().map(|x| parse_rational(x).context("in --xs")).collect::<Result<Vec<_>>>())
        .transpose()?;
    Ok(SweepConfig {
        n_min,
        n_max,
        grid_denominator: args.grid_denominator,
        seed: args.seed,
        functions: parse_functions(&args.f)?,
        threads: args.threads,
        ks: args.k.clone(),
        ns: args.ns.clone(),
        xs,
        trials: args.trials,
    })
}
