use std::fmt;

use crate::error::Result;
use crate::mechanisms::MechanismSpec;
use crate::model::{NumericPolicy, Profile};
use crate::objectives::Objective;
use crate::oracle;

/// Where a profile under evaluation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Evaluated directly on a caller-supplied profile.
    Direct,
    /// One of the built-in worst-case instances.
    SeededFromPaper,
    RandomSample,
    LocalSearch,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Direct => "direct",
            Provenance::SeededFromPaper => "seeded",
            Provenance::RandomSample => "random",
            Provenance::LocalSearch => "local-search",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Provenance::Direct,
            Provenance::SeededFromPaper,
            Provenance::RandomSample,
            Provenance::LocalSearch,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A mechanism's objective value against the optimum on one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioFinding {
    pub profile: Profile,
    pub mechanism: MechanismSpec,
    pub objective: Objective,
    /// Mechanism value; expected value for randomized mechanisms.
    pub mech_value: f64,
    pub opt_value: f64,
    /// `opt / mech` for maximization, `mech / opt` for minimization;
    /// infinite when the mechanism scores zero against a positive optimum.
    pub ratio: f64,
    pub provenance: Provenance,
}

impl RatioFinding {
    pub fn is_unbounded(&self) -> bool {
        self.ratio.is_infinite()
    }
}

/// Ratio of optimum to achieved value, oriented so that 1 is optimal.
pub fn ratio_of(objective: Objective, mech_value: f64, opt_value: f64) -> f64 {
    let (num, den) = if objective.is_maximization() {
        (opt_value, mech_value)
    } else {
        (mech_value, opt_value)
    };
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Approximation ratio of `mechanism` on one profile.
pub fn approximation_ratio(
    profile: &Profile,
    mechanism: &MechanismSpec,
    objective: Objective,
    policy: &NumericPolicy,
) -> Result<RatioFinding> {
    evaluate(profile, mechanism, objective, policy, Provenance::Direct)
}

pub(crate) fn evaluate(
    profile: &Profile,
    mechanism: &MechanismSpec,
    objective: Objective,
    policy: &NumericPolicy,
    provenance: Provenance,
) -> Result<RatioFinding> {
    let outcome = mechanism.apply_with(profile, policy)?;
    let mech_value = outcome.value(profile, objective);
    let opt = oracle::optimum(profile, objective, outcome.facility_count(), policy)?;
    Ok(RatioFinding {
        profile: profile.clone(),
        mechanism: mechanism.clone(),
        objective,
        mech_value,
        opt_value: opt.best_value,
        ratio: ratio_of(objective, mech_value, opt.best_value),
        provenance,
    })
}
