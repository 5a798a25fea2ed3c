//! Facility-location mechanisms behind one deterministic/randomized
//! interface.
//!
//! All single-facility deterministic rules here except the oracle reference
//! are phantom medians: the facility goes to the median of the reports
//! together with a fixed set of phantom reports.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Lottery, NumericPolicy, Placement, Profile};
use crate::objectives::Objective;
use crate::oracle;

/// Which mechanism to run, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum MechanismSpec {
    Leftmost,
    Median,
    MidOrNearest,
    PhantomMedian(Vec<f64>),
    EndPoint,
    EndPointGamma(f64),
    Lrm,
    /// Places the facility at an optimal complemented-Gini location.
    /// Not strategy-proof; used as a reference and manipulation demo.
    GiniOptOracle,
}

/// A mechanism's output on one profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Deterministic(Placement),
    Randomized(Lottery),
}

impl Outcome {
    pub fn facility_count(&self) -> usize {
        match self {
            Outcome::Deterministic(p) => p.facility_count(),
            Outcome::Randomized(l) => l.facility_count(),
        }
    }

    pub fn into_lottery(self) -> Lottery {
        match self {
            Outcome::Deterministic(p) => Lottery::certain(p),
            Outcome::Randomized(l) => l,
        }
    }

    /// Objective value, in expectation for lotteries.
    pub fn value(&self, profile: &Profile, objective: Objective) -> f64 {
        let mut scratch = Vec::with_capacity(profile.len());
        match self {
            Outcome::Deterministic(p) => objective.evaluate_with(profile, p, &mut scratch),
            Outcome::Randomized(l) => l.expectation(|p| objective.evaluate_with(profile, p, &mut scratch)),
        }
    }

    /// Expected nearest-facility distance from location `x`.
    pub fn expected_distance(&self, x: f64) -> f64 {
        match self {
            Outcome::Deterministic(p) => p.distance_from(x),
            Outcome::Randomized(l) => l.expectation(|p| p.distance_from(x)),
        }
    }

    pub fn reflect(&self) -> Self {
        match self {
            Outcome::Deterministic(p) => Outcome::Deterministic(p.reflect()),
            Outcome::Randomized(l) => Outcome::Randomized(l.reflect()),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Deterministic(p) => write!(f, "{p}"),
            Outcome::Randomized(l) => write!(f, "{l}"),
        }
    }
}

impl MechanismSpec {
    /// Builds a spec from a CLI-style name plus optional parameters.
    pub fn from_name(name: &str, gamma: Option<f64>, phantoms: Option<Vec<f64>>) -> Result<Self> {
        let spec = match name.trim().to_ascii_lowercase().as_str() {
            "leftmost" => MechanismSpec::Leftmost,
            "median" => MechanismSpec::Median,
            "midornearest" | "mid-or-nearest" => MechanismSpec::MidOrNearest,
            "phantom-median" | "phantom" => MechanismSpec::PhantomMedian(phantoms.unwrap_or_default()),
            "endpoint" => MechanismSpec::EndPoint,
            "endpoint-gamma" | "endpointgamma" => MechanismSpec::EndPointGamma(gamma.unwrap_or(0.25)),
            "lrm" => MechanismSpec::Lrm,
            "gini-opt-oracle" | "giniopt" => MechanismSpec::GiniOptOracle,
            _ => {
                return Err(Error::UnknownName {
                    what: "mechanism",
                    name: name.to_string(),
                })
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MechanismSpec::EndPointGamma(g) if !(0.0..=0.5).contains(g) => Err(Error::GammaOutOfRange(*g)),
            MechanismSpec::PhantomMedian(ph) => match ph.iter().find(|y| !(0.0..=1.0).contains(*y)) {
                Some(&y) => Err(Error::OutOfRange(y)),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn facility_count(&self) -> usize {
        match self {
            MechanismSpec::EndPoint | MechanismSpec::EndPointGamma(_) => 2,
            _ => 1,
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, MechanismSpec::Lrm)
    }

    pub fn is_strategy_proof(&self) -> bool {
        !matches!(self, MechanismSpec::GiniOptOracle)
    }

    pub fn apply(&self, profile: &Profile) -> Result<Outcome> {
        self.apply_with(profile, &NumericPolicy::default())
    }

    /// Runs the mechanism; `policy` only matters for the oracle reference.
    pub fn apply_with(&self, profile: &Profile, policy: &NumericPolicy) -> Result<Outcome> {
        Ok(match self {
            MechanismSpec::Leftmost => Outcome::Deterministic(leftmost(profile)),
            MechanismSpec::Median => Outcome::Deterministic(median(profile)),
            MechanismSpec::MidOrNearest => Outcome::Deterministic(mid_or_nearest(profile)),
            MechanismSpec::PhantomMedian(ph) => {
                if ph.len() >= profile.len() {
                    return Err(Error::TooManyPhantoms {
                        phantoms: ph.len(),
                        agents: profile.len(),
                    });
                }
                Outcome::Deterministic(phantom_median(profile, ph)?)
            }
            MechanismSpec::EndPoint => Outcome::Deterministic(endpoint(profile)),
            MechanismSpec::EndPointGamma(g) => Outcome::Deterministic(endpoint_gamma(profile, *g)?),
            MechanismSpec::Lrm => Outcome::Randomized(lrm(profile)),
            MechanismSpec::GiniOptOracle => Outcome::Deterministic(gini_opt_oracle_mechanism(profile, policy)),
        })
    }
}

impl fmt::Display for MechanismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismSpec::Leftmost => f.write_str("leftmost"),
            MechanismSpec::Median => f.write_str("median"),
            MechanismSpec::MidOrNearest => f.write_str("midornearest"),
            MechanismSpec::PhantomMedian(ph) => {
                let joined: Vec<String> = ph.iter().map(f64::to_string).collect();
                write!(f, "phantom-median({})", joined.join(";"))
            }
            MechanismSpec::EndPoint => f.write_str("endpoint"),
            MechanismSpec::EndPointGamma(g) => write!(f, "endpoint-gamma({g})"),
            MechanismSpec::Lrm => f.write_str("lrm"),
            MechanismSpec::GiniOptOracle => f.write_str("gini-opt-oracle"),
        }
    }
}

impl FromStr for MechanismSpec {
    type Err = Error;

    /// Accepts the [`fmt::Display`] form, e.g. `endpoint-gamma(0.25)` or
    /// `phantom-median(0.5;0.5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownName {
            what: "mechanism",
            name: s.to_string(),
        };
        let Some((name, rest)) = s.split_once('(') else {
            return Self::from_name(s, None, None);
        };
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let values = args
            .split(';')
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<f64>>>()?;
        match name.trim().to_ascii_lowercase().as_str() {
            "endpoint-gamma" | "endpointgamma" if values.len() == 1 => Self::from_name(name, Some(values[0]), None),
            "phantom-median" | "phantom" => Self::from_name(name, None, Some(values)),
            _ => Err(bad()),
        }
    }
}

fn at(y: f64) -> Placement {
    // Inputs come from a validated profile, so y is always in range.
    Placement::single(y).expect("facility inside [0, 1]")
}

fn at_pair(a: f64, b: f64) -> Placement {
    Placement::pair(a, b).expect("facilities inside [0, 1]")
}

/// Facility at the leftmost report.
pub fn leftmost(profile: &Profile) -> Placement {
    at(profile.leftmost())
}

/// Facility at the `ceil(n/2)`-th smallest report (the lower median).
pub fn median(profile: &Profile) -> Placement {
    let n = profile.len();
    at(profile.locations()[n.div_ceil(2) - 1])
}

/// `x_n` when every report is left of 1/2, `x_1` when every report is right
/// of it, and 1/2 otherwise.
pub fn mid_or_nearest(profile: &Profile) -> Placement {
    let (lo, hi) = (profile.leftmost(), profile.rightmost());
    if hi < 0.5 {
        at(hi)
    } else if lo > 0.5 {
        at(lo)
    } else {
        at(0.5)
    }
}

/// Lower median of the reports together with the phantom reports.
pub fn phantom_median(profile: &Profile, phantoms: &[f64]) -> Result<Placement> {
    if let Some(&y) = phantoms.iter().find(|y| !(0.0..=1.0).contains(*y)) {
        return Err(Error::OutOfRange(y));
    }
    let mut all: Vec<f64> = profile.locations().iter().chain(phantoms).copied().collect();
    let k = (all.len() - 1) / 2;
    let (_, m, _) = all.select_nth_unstable_by(k, f64::total_cmp);
    Placement::single(*m)
}

/// Facilities at the two extreme reports.
pub fn endpoint(profile: &Profile) -> Placement {
    at_pair(profile.leftmost(), profile.rightmost())
}

/// EndPoint with extremes truncated toward `[gamma, 1 - gamma]`; plain
/// EndPoint for two or fewer agents.
pub fn endpoint_gamma(profile: &Profile, gamma: f64) -> Result<Placement> {
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::GammaOutOfRange(gamma));
    }
    if profile.len() <= 2 {
        return Ok(endpoint(profile));
    }
    let (lo, hi) = (profile.leftmost(), profile.rightmost());
    let left = lo.max(gamma).min(hi);
    let right = lo.max((1.0 - gamma).min(hi));
    Ok(at_pair(left, right))
}

/// Left, right or midpoint: `x_1` w.p. 1/4, `(x_1 + x_n)/2` w.p. 1/2,
/// `x_n` w.p. 1/4. Coincident outcomes are merged.
pub fn lrm(profile: &Profile) -> Lottery {
    let (lo, hi) = (profile.leftmost(), profile.rightmost());
    if lo == hi {
        return Lottery::certain(at(lo));
    }
    Lottery::new(vec![(0.25, at(lo)), (0.5, at(0.5 * (lo + hi))), (0.25, at(hi))])
        .expect("LRM probabilities sum to one")
}

/// An optimal complemented-Gini placement, smallest coordinate on ties.
pub fn gini_opt_oracle_mechanism(profile: &Profile, policy: &NumericPolicy) -> Placement {
    oracle::opt_complemented_gini_1fac(profile, policy).best_placement
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(xs: &[f64]) -> Profile {
        Profile::new(xs.to_vec()).unwrap()
    }

    fn fac(p: Placement) -> Vec<f64> {
        p.facilities().to_vec()
    }

    #[test]
    fn leftmost_examples() {
        assert_eq!(fac(leftmost(&profile(&[0.2, 0.7]))), vec![0.2]);
        assert_eq!(fac(leftmost(&profile(&[0.0, 1.0, 1.0, 1.0]))), vec![0.0]);
        assert_eq!(fac(leftmost(&profile(&[0.4]))), vec![0.4]);
    }

    #[test]
    fn median_examples() {
        assert_eq!(fac(median(&profile(&[0.0, 1.0]))), vec![0.0]);
        assert_eq!(fac(median(&profile(&[0.0, 0.4, 1.0]))), vec![0.4]);
        assert_eq!(fac(median(&profile(&[0.0, 0.0, 1.0, 1.0]))), vec![0.0]);
    }

    #[test]
    fn mid_or_nearest_examples() {
        assert_eq!(fac(mid_or_nearest(&profile(&[0.0, 0.0, 0.5]))), vec![0.5]);
        assert_eq!(fac(mid_or_nearest(&profile(&[0.1, 0.3]))), vec![0.3]);
        assert_eq!(fac(mid_or_nearest(&profile(&[0.6, 0.9]))), vec![0.6]);
    }

    #[test]
    fn phantom_median_examples() {
        for a in [0.0, 0.2, 0.5] {
            assert_eq!(fac(phantom_median(&profile(&[0.0, a]), &[a]).unwrap()), vec![a]);
        }
        assert_eq!(fac(phantom_median(&profile(&[0.8]), &[]).unwrap()), vec![0.8]);
        assert_eq!(
            fac(phantom_median(&profile(&[0.0, 0.4, 1.0]), &[0.5, 0.5]).unwrap()),
            vec![0.5]
        );
        assert!(phantom_median(&profile(&[0.1]), &[1.2]).is_err());
    }

    #[test]
    fn phantom_count_is_checked_by_spec() {
        let spec = MechanismSpec::PhantomMedian(vec![0.5, 0.5]);
        assert!(spec.apply(&profile(&[0.1, 0.2, 0.3])).is_ok());
        assert_eq!(
            spec.apply(&profile(&[0.1, 0.2])),
            Err(Error::TooManyPhantoms { phantoms: 2, agents: 2 })
        );
    }

    #[test]
    fn endpoint_examples() {
        assert_eq!(fac(endpoint(&profile(&[0.0, 0.5, 0.5, 0.5, 1.0]))), vec![0.0, 1.0]);
        assert_eq!(fac(endpoint(&profile(&[0.3]))), vec![0.3, 0.3]);
        assert_eq!(fac(endpoint(&profile(&[0.2, 0.8]))), vec![0.2, 0.8]);
    }

    #[test]
    fn endpoint_gamma_examples() {
        let p = profile(&[0.0, 0.5, 0.75]);
        assert_eq!(fac(endpoint_gamma(&p, 0.25).unwrap()), vec![0.25, 0.75]);
        let p = profile(&[0.0, 0.5, 1.0]);
        assert_eq!(fac(endpoint_gamma(&p, 0.5).unwrap()), vec![0.5, 0.5]);
        let p = profile(&[0.1, 0.2]);
        assert_eq!(fac(endpoint_gamma(&p, 0.25).unwrap()), vec![0.1, 0.2]);
        assert_eq!(endpoint_gamma(&p, 0.6), Err(Error::GammaOutOfRange(0.6)));
        assert!(MechanismSpec::from_name("endpoint-gamma", Some(-0.1), None).is_err());
    }

    #[test]
    fn lrm_examples() {
        let expected = vec![(0.25, vec![0.0]), (0.5, vec![0.5]), (0.25, vec![1.0])];
        for xs in [&[0.0, 1.0][..], &[0.0, 0.0, 1.0][..]] {
            let got: Vec<(f64, Vec<f64>)> = lrm(&profile(xs))
                .outcomes()
                .iter()
                .map(|(p, y)| (*p, fac(*y)))
                .collect();
            assert_eq!(got, expected);
        }
        let merged = lrm(&profile(&[0.3, 0.3]));
        assert_eq!(merged.outcomes().len(), 1);
        assert_eq!(merged.outcomes()[0].0, 1.0);
        assert_eq!(fac(merged.outcomes()[0].1), vec![0.3]);
    }

    #[test]
    fn oracle_mechanism_examples() {
        let policy = NumericPolicy::default();
        assert_eq!(fac(gini_opt_oracle_mechanism(&profile(&[0.0, 0.5]), &policy)), vec![0.25]);
        assert_eq!(fac(gini_opt_oracle_mechanism(&profile(&[0.0, 1.0]), &policy)), vec![0.5]);
        assert_eq!(fac(gini_opt_oracle_mechanism(&profile(&[0.42]), &policy)), vec![0.42]);
    }

    #[test]
    fn names_round_trip() {
        let specs = [
            MechanismSpec::Leftmost,
            MechanismSpec::Median,
            MechanismSpec::MidOrNearest,
            MechanismSpec::PhantomMedian(vec![0.25, 0.5]),
            MechanismSpec::PhantomMedian(vec![]),
            MechanismSpec::EndPoint,
            MechanismSpec::EndPointGamma(0.25),
            MechanismSpec::Lrm,
            MechanismSpec::GiniOptOracle,
        ];
        for s in specs {
            assert_eq!(s.to_string().parse::<MechanismSpec>().unwrap(), s);
        }
        assert!("dictator".parse::<MechanismSpec>().is_err());
        assert!("endpoint-gamma(0.1;0.2)".parse::<MechanismSpec>().is_err());
    }
}
