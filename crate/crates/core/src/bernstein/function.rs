use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{format_rational, int, ratio, serde_rational, serde_rational_vec, Rational};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("empty interval [{}, {}]", format_rational(&lo), format_rational(&hi))));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: Rational::zero(), hi: Rational::one() }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    /// `x ↦ max(x - t, 0)`
    Hinge { t: Rational },
    /// `x ↦ |x - t|`
    Abs { t: Rational },
    /// Linear interpolation through `(breakpoints[i], values[i])`.
    PiecewiseLinear { breakpoints: Vec<Rational>, values: Vec<Rational> },
    /// `Σ coefficients[k] · x^k`
    Polynomial { coefficients: Vec<Rational> },
}

/// A convex function on a closed rational interval, evaluated exactly.
///
/// Convexity is checked when the function is built, so anything holding a
/// `ConvexTestFunction` may rely on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct ConvexTestFunction {
    kind: FunctionKind,
    domain: Interval,
    label: Option<String>,
}

impl ConvexTestFunction {
    pub fn hinge(t: Rational) -> Self {
        Self { kind: FunctionKind::Hinge { t }, domain: Interval::unit(), label: None }
    }

    pub fn abs(t: Rational) -> Self {
        Self { kind: FunctionKind::Abs { t }, domain: Interval::unit(), label: None }
    }

    /// `x ↦ x²` on `[0, 1]`.
    pub fn square() -> Self {
        Self {
            kind: FunctionKind::Polynomial { coefficients: vec![int(0), int(0), int(1)] },
            domain: Interval::unit(),
            label: None,
        }
    }

    /// Piecewise-linear interpolant; the domain is the span of the breakpoints.
    pub fn piecewise_linear(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Domain(format!("{} breakpoints but {} values", breakpoints.len(), values.len())));
        }
        if breakpoints.is_empty() {
            return Err(Error::Domain("piecewise-linear function needs a breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("breakpoints must be strictly increasing".into()));
        }
        let slopes: Vec<Rational> =
            breakpoints.windows(2).zip(values.windows(2)).map(|(x, y)| (&y[1] - &y[0]) / (&x[1] - &x[0])).collect();
        if let Some(i) = slopes.windows(2).position(|s| s[0] > s[1]) {
            return Err(Error::Domain(format!(
                "not convex: slope decreases at breakpoint {}",
                format_rational(&breakpoints[i + 1])
            )));
        }
        let domain = Interval::new(breakpoints[0].clone(), breakpoints[breakpoints.len() - 1].clone())?;
        Ok(Self { kind: FunctionKind::PiecewiseLinear { breakpoints, values }, domain, label: None })
    }

    /// Polynomial with ascending coefficients on `[0, 1]`.
    pub fn polynomial(coefficients: Vec<Rational>) -> Result<Self> {
        let mut coefficients = coefficients;
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Rational::zero());
        }
        let f = Self { kind: FunctionKind::Polynomial { coefficients }, domain: Interval::unit(), label: None };
        f.check_polynomial_convexity()?;
        Ok(f)
    }

    /// Same function on a different domain, re-checking convexity there.
    pub fn with_domain(mut self, lo: Rational, hi: Rational) -> Result<Self> {
        let domain = Interval::new(lo, hi)?;
        if let FunctionKind::PiecewiseLinear { breakpoints, .. } = &self.kind {
            let span = Interval::new(breakpoints[0].clone(), breakpoints[breakpoints.len() - 1].clone())?;
            if !span.contains_interval(&domain) {
                return Err(Error::Domain(format!("domain {domain} exceeds the breakpoint span {span}")));
            }
        }
        self.domain = domain;
        self.check_polynomial_convexity()?;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    // Degree ≤ 2 is decided by the quadratic coefficient; higher degrees are
    // accepted only when every term of f'' is nonnegative on the domain.
    fn check_polynomial_convexity(&self) -> Result<()> {
        let FunctionKind::Polynomial { coefficients } = &self.kind else {
            return Ok(());
        };
        let degree = coefficients.len() - 1;
        let ok = match degree {
            0 | 1 => true,
            2 => !coefficients[2].is_negative(),
            _ => !self.domain.lo.is_negative() && coefficients[2..].iter().all(|c| !c.is_negative()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("polynomial of degree {degree} not certified convex on {}", self.domain)))
        }
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    /// Stable identifier used in reports.
    pub fn id(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        match &self.kind {
            FunctionKind::Hinge { t } => format!("hinge:{}", format_rational(t)),
            FunctionKind::Abs { t } => format!("abs:{}", format_rational(t)),
            FunctionKind::Polynomial { coefficients }
                if coefficients.len() == 3
                    && coefficients[0].is_zero()
                    && coefficients[1].is_zero()
                    && coefficients[2].is_one() =>
            {
                "square".to_string()
            }
            FunctionKind::Polynomial { coefficients } => {
                let cs: Vec<String> = coefficients.iter().map(format_rational).collect();
                format!("poly:{}", cs.join(","))
            }
            FunctionKind::PiecewiseLinear { breakpoints, values } => {
                let pts: Vec<String> = breakpoints
                    .iter()
                    .zip(values)
                    .map(|(x, y)| format!("{}@{}", format_rational(y), format_rational(x)))
                    .collect();
                format!("pl:{}", pts.join(","))
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!(
                "{} outside the domain {} of {}",
                format_rational(x),
                self.domain,
                self.id()
            )));
        }
        Ok(match &self.kind {
            FunctionKind::Hinge { t } => {
                if x > t {
                    x - t
                } else {
                    Rational::zero()
                }
            }
            FunctionKind::Abs { t } => (x - t).abs(),
            FunctionKind::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
            }
            FunctionKind::PiecewiseLinear { breakpoints, values } => {
                let i = breakpoints.partition_point(|b| b < x);
                if &breakpoints[i] == x {
                    values[i].clone()
                } else {
                    let (x0, x1) = (&breakpoints[i - 1], &breakpoints[i]);
                    let (y0, y1) = (&values[i - 1], &values[i]);
                    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
                }
            }
        })
    }
}

/// Functions used when an inequality must hold "for every convex f" on a
/// lattice `{j/m}`: every hinge and absolute value centred on the lattice,
/// `x²`, and 20 seeded random convex piecewise-linear functions.
pub fn standard_battery(m: u32, seed: u64) -> Vec<ConvexTestFunction> {
    let m = m.max(1);
    let lattice: Vec<Rational> = (0..=m).map(|j| ratio(j as i64, m as i64)).collect();
    let mut battery: Vec<_> = lattice.iter().cloned().map(ConvexTestFunction::hinge).collect();
    battery.extend(lattice.into_iter().map(ConvexTestFunction::abs));
    battery.push(ConvexTestFunction::square());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(m as u64);
    battery.extend((0..20).map(|i| random_convex_on_unit(&mut rng).with_label(format!("pl#{i}"))));
    battery
}

/// Random convex piecewise-linear function on `[0, 1]` with breakpoints on
/// the twelfths.
pub fn random_convex_on_unit<R: Rng>(rng: &mut R) -> ConvexTestFunction {
    let mut interior: Vec<i64> = (1..12).filter(|_| rng.random_bool(0.25)).collect();
    interior.truncate(4);
    let mut breakpoints = vec![int(0)];
    breakpoints.extend(interior.into_iter().map(|k| ratio(k, 12)));
    breakpoints.push(int(1));
    let mut value = ratio(rng.random_range(-4..=4), 4);
    let mut slope = ratio(rng.random_range(-8..=8), 4);
    let mut values = vec![value.clone()];
    for w in breakpoints.windows(2) {
        value += &slope * (&w[1] - &w[0]);
        values.push(value.clone());
        slope += ratio(rng.random_range(0..=8), 4);
    }
    ConvexTestFunction::piecewise_linear(breakpoints, values).expect("nondecreasing slopes give a convex interpolant")
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawKind {
    Hinge {
        #[serde(with = "serde_rational")]
        t: Rational,
    },
    Abs {
        #[serde(with = "serde_rational")]
        t: Rational,
    },
    Square,
    PiecewiseLinear {
        #[serde(with = "serde_rational_vec")]
        breakpoints: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        values: Vec<Rational>,
    },
    Polynomial {
        #[serde(with = "serde_rational_vec")]
        coefficients: Vec<Rational>,
    },
}

/// Wire form, e.g. `{"kind": "hinge", "t": "1/3"}` with an optional
/// `"domain": ["lo", "hi"]` and `"label"`.
#[derive(Serialize, Deserialize)]
struct RawFunction {
    #[serde(flatten)]
    kind: RawKind,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "domain_pair")]
    domain: Option<(Rational, Rational)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

mod domain_pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<(Rational, Rational)>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some((lo, hi)) => serde_rational_vec::serialize(&[lo.clone(), hi.clone()], s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(Rational, Rational)>, D::Error> {
        use serde::de::Error as _;
        let v = serde_rational_vec::deserialize(d)?;
        match <[Rational; 2]>::try_from(v) {
            Ok([lo, hi]) => Ok(Some((lo, hi))),
            Err(_) => Err(D::Error::custom("domain must be a [lo, hi] pair")),
        }
    }
}

impl TryFrom<RawFunction> for ConvexTestFunction {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        let f = match raw.kind {
            RawKind::Hinge { t } => Self::hinge(t),
            RawKind::Abs { t } => Self::abs(t),
            RawKind::Square => Self::square(),
            RawKind::PiecewiseLinear { breakpoints, values } => Self::piecewise_linear(breakpoints, values)?,
            RawKind::Polynomial { coefficients } => Self::polynomial(coefficients)?,
        };
        let f = match raw.domain {
            Some((lo, hi)) => f.with_domain(lo, hi)?,
            None => f,
        };
        Ok(match raw.label {
            Some(label) => f.with_label(label),
            None => f,
        })
    }
}

impl From<ConvexTestFunction> for RawFunction {
    fn from(f: ConvexTestFunction) -> Self {
        let kind = match f.kind {
            FunctionKind::Hinge { t } => RawKind::Hinge { t },
            FunctionKind::Abs { t } => RawKind::Abs { t },
            FunctionKind::PiecewiseLinear { breakpoints, values } => RawKind::PiecewiseLinear { breakpoints, values },
            FunctionKind::Polynomial { coefficients } => RawKind::Polynomial { coefficients },
        };
        Self { kind, domain: Some((f.domain.lo, f.domain.hi)), label: f.label }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let h = ConvexTestFunction::hinge(ratio(1, 2));
        assert_eq!(h.eval(&int(1)).unwrap(), ratio(1, 2));
        assert_eq!(h.eval(&ratio(1, 3)).unwrap(), int(0));
        let a = ConvexTestFunction::abs(ratio(1, 2));
        assert_eq!(a.eval(&int(0)).unwrap(), ratio(1, 2));
        let sq = ConvexTestFunction::square();
        assert_eq!(sq.eval(&ratio(2, 3)).unwrap(), ratio(4, 9));
        let pl = ConvexTestFunction::piecewise_linear(vec![int(0), ratio(1, 2), int(1)], vec![int(1), int(0), int(2)])
            .unwrap();
        assert_eq!(pl.eval(&ratio(1, 4)).unwrap(), ratio(1, 2));
        assert_eq!(pl.eval(&ratio(3, 4)).unwrap(), int(1));
        assert_eq!(pl.eval(&int(1)).unwrap(), int(2));
        assert_eq!(pl.eval(&int(0)).unwrap(), int(1));
    }

    #[test]
    fn domain_is_enforced() {
        let sq = ConvexTestFunction::square();
        assert!(matches!(sq.eval(&ratio(3, 2)), Err(Error::Domain(_))));
        let wide = sq.with_domain(int(-2), int(2)).unwrap();
        assert_eq!(wide.eval(&int(-2)).unwrap(), int(4));
        let pl = ConvexTestFunction::piecewise_linear(vec![int(0), int(1)], vec![int(0), int(1)]).unwrap();
        assert!(pl.with_domain(int(0), int(2)).is_err());
    }

    #[test]
    fn convexity_is_checked() {
        assert!(ConvexTestFunction::piecewise_linear(vec![int(0), ratio(1, 2), int(1)], vec![int(0), int(1), int(1)],)
            .is_err());
        assert!(ConvexTestFunction::piecewise_linear(vec![int(0), int(0)], vec![int(0), int(1)]).is_err());
        assert!(ConvexTestFunction::polynomial(vec![int(0), int(0), int(-1)]).is_err());
        assert!(ConvexTestFunction::polynomial(vec![int(0), int(5)]).is_ok());
        // x^3 is convex on [0, 1] but not certified on [-1, 1]
        let cube = ConvexTestFunction::polynomial(vec![int(0), int(0), int(0), int(1)]).unwrap();
        assert!(cube.with_domain(int(-1), int(1)).is_err());
        // x^3 - x^2 has a negative second-derivative term: conservatively rejected
        assert!(ConvexTestFunction::polynomial(vec![int(0), int(0), int(-1), int(1)]).is_err());
    }

    #[test]
    fn ids() {
        assert_eq!(ConvexTestFunction::hinge(ratio(1, 3)).id(), "hinge:1/3");
        assert_eq!(ConvexTestFunction::abs(int(2)).id(), "abs:2/1");
        assert_eq!(ConvexTestFunction::square().id(), "square");
        assert_eq!(ConvexTestFunction::square().with_label("q").id(), "q");
    }

    #[test]
    fn battery_is_deterministic_and_convex() {
        let a = standard_battery(6, 7);
        let b = standard_battery(6, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 7 + 7 + 1 + 20);
        assert_ne!(a, standard_battery(6, 8));
        for f in &a {
            assert_eq!(f.domain(), &Interval::unit());
        }
    }

    #[test]
    fn json_forms() {
        let f: ConvexTestFunction = serde_json::from_str(r#"{"kind": "hinge", "t": "1/3"}"#).unwrap();
        assert_eq!(f, ConvexTestFunction::hinge(ratio(1, 3)));
        let g: ConvexTestFunction = serde_json::from_str(
            r#"{"kind": "piecewise-linear", "breakpoints": ["0", "1/2", "1"], "values": ["1", "0", "1"]}"#,
        )
        .unwrap();
        assert_eq!(g.eval(&ratio(1, 4)).unwrap(), ratio(1, 2));
        let h: ConvexTestFunction = serde_json::from_str(r#"{"kind": "abs", "t": "2", "domain": ["0", "4"]}"#).unwrap();
        assert_eq!(h.eval(&int(4)).unwrap(), int(2));
        let back: ConvexTestFunction = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<ConvexTestFunction>(
            r#"{"kind": "polynomial", "coefficients": ["0", "0", "-1"]}"#
        )
        .is_err());
    }
}
