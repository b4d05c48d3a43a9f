use std::fs;
use std::path::Path;

use anyhow::{ensure, Context, Result};
use rasa_core::majorization::{flattened, replay};
use rasa_core::numerics::{format_rational, int, parse_rational};
use rasa_core::sweep::{sweep_chains, sweep_general, sweep_hlp, sweep_rasa, sweep_split};
use rasa_core::{
    bernoulli_convolution, cx_falsify_random, is_cx_dominated, majorizes, pinch_chain, sigma_criterion,
    ConvexTestFunction, DiscreteDistribution, ProbVector,
};
use serde_json::json;

use crate::config::{read_json, sweep_config};
use crate::{Family, Format, SweepArgs};

pub fn verify(family: Family, args: &SweepArgs) -> Result<bool> {
    let cfg = sweep_config(family, args)?;
    let report = match family {
        Family::Rasa => sweep_rasa(&cfg),
        Family::Split => sweep_split(&cfg),
        Family::General => sweep_general(&cfg),
        Family::Chains => sweep_chains(&cfg),
        Family::Hlp => sweep_hlp(&cfg),
    }?;
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &args.out {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{body}"),
    }
    eprintln!("{} records, {} failures", report.summary.total, report.summary.failures);
    Ok(report.is_clean())
}

pub fn check_cx(a: &Path, b: &Path, trials: usize, seed: u64) -> Result<bool> {
    let mu: DiscreteDistribution = read_json(a)?;
    let nu: DiscreteDistribution = read_json(b)?;
    let verdict = is_cx_dominated(&mu, &nu);
    let mut out = serde_json::to_value(&verdict)?;
    if verdict.dominated {
        // Cross-check with random convex functions; a hit here would be a bug.
        let refuted = cx_falsify_random(&mu, &nu, trials, seed).map(|f| f.id());
        out["oracle"] = json!({ "trials": trials, "seed": seed, "refuted_by": refuted });
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(verdict.dominated)
}

fn read_pair(p: &Path, q: &Path) -> Result<(ProbVector, ProbVector)> {
    Ok((read_json(p)?, read_json(q)?))
}

pub fn majorize(p: &Path, q: &Path) -> Result<bool> {
    let (p, q) = read_pair(p, q)?;
    let holds = majorizes(&p, &q)?;
    println!("{}", json!({ "majorizes": holds }));
    Ok(holds)
}

pub fn sigma(p: &Path, q: &Path) -> Result<bool> {
    let (p, q) = read_pair(p, q)?;
    let holds = sigma_criterion(&p, &q)?;
    println!("{}", json!({ "sigma_criterion": holds }));
    Ok(holds)
}

pub fn pinch(p: &Path, q: &Path) -> Result<bool> {
    let (p, q) = read_pair(p, q)?;
    let steps = pinch_chain(&p, &q)?;
    println!("{}", serde_json::to_string_pretty(&json!({ "steps": steps }))?);
    Ok(true)
}

fn vector(entries: &[&str]) -> Result<ProbVector> {
    let entries = entries.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(ProbVector::new(entries)?)
}

fn atoms(d: &DiscreteDistribution) -> String {
    let parts: Vec<String> =
        d.atoms().iter().map(|(x, m)| format!("{}: {}", format_rational(x), format_rational(m))).collect();
    parts.join(", ")
}

/// Prints both golden counterexamples, returning whether every value matched.
pub fn examples() -> Result<bool> {
    let mut ok = true;
    let mut check = |label: &str, got: String, want: &str| {
        let mark = if got == want { "ok" } else { "MISMATCH" };
        ok &= got == want;
        println!("  {label}: {got} [{mark}]");
    };

    let p = vector(&["3/4", "3/4", "0"])?;
    let q = vector(&["5/6", "1/2", "1/6"])?;
    let (mu, nu) = (bernoulli_convolution(&p), bernoulli_convolution(&q));
    println!("convex order without majorization: p = (3/4, 3/4, 0), p' = (5/6, 1/2, 1/6)");
    check("law of S(p)", atoms(&mu), "0/1: 1/16, 1/1: 3/8, 2/1: 9/16");
    check("law of S(p')", atoms(&nu), "0/1: 5/72, 1/1: 31/72, 2/1: 31/72, 3/1: 5/72");
    check("p majorizes p'", majorizes(&p, &q)?.to_string(), "false");
    check("S(p) <=cx S(p')", is_cx_dominated(&mu, &nu).dominated.to_string(), "true");
    check("sigma criterion", sigma_criterion(&p, &q)?.to_string(), "true");

    let p = vector(&["1", "1/2", "1/2", "0"])?;
    let q = vector(&["5/6", "5/6", "1/6", "1/6"])?;
    let (mu, nu) = (bernoulli_convolution(&p), bernoulli_convolution(&q));
    println!("variance ordering without convex order: p = (1, 1/2, 1/2, 0), p' = (5/6, 5/6, 1/6, 1/6)");
    check("law of S(p)", atoms(&mu), "1/1: 1/4, 2/1: 1/2, 3/1: 1/4");
    check("law of S(p')", atoms(&nu), "0/1: 25/1296, 1/1: 65/324, 2/1: 121/216, 3/1: 65/324, 4/1: 25/1296");
    let abs = ConvexTestFunction::abs(int(2)).with_domain(int(0), int(4))?;
    check("E|S(p) - 2|", format_rational(&mu.expect(&abs)?), "1/2");
    check("E|S(p') - 2|", format_rational(&nu.expect(&abs)?), "155/324");
    let verdict = is_cx_dominated(&mu, &nu);
    check(
        "S(p) <=cx S(p')",
        serde_json::to_value(verdict.reason)?.as_str().unwrap_or("").into(),
        "stop-loss-violation",
    );
    check("sum (p_i - mean)^2", format_rational(&p.squared_deviation()), "1/2");
    check("sum (p'_i - mean)^2", format_rational(&q.squared_deviation()), "4/9");
    check("sigma criterion", sigma_criterion(&p, &q)?.to_string(), "false");

    // Flattening to the constant vector always yields a cx-smaller sum.
    let flat = flattened(&p);
    let chain = pinch_chain(&p, &flat)?;
    let states = replay(p.entries(), &chain)?;
    ensure!(states.last().map(Vec::as_slice) == Some(flat.entries()), "pinch replay ended off target");
    println!("flattening p takes {} pinch steps", chain.len());
    Ok(ok)
}
