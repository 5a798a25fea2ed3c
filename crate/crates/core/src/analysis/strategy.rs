//! Randomized strategy-proofness testing.
//!
//! An agent manipulates when some misreport strictly lowers its
//! nearest-facility distance (expected distance for lotteries), measured
//! from its true location.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::seeds::seeded_profiles;
use crate::error::{Error, Result};
use crate::mechanisms::MechanismSpec;
use crate::model::{NumericPolicy, Profile};

#[derive(Debug, Clone, PartialEq)]
pub struct ManipulationWitness {
    /// The truthful profile.
    pub profile: Profile,
    /// Index of the manipulating agent in the sorted profile (0-based).
    pub agent_index: usize,
    pub misreport: f64,
    pub honest_distance: f64,
    pub manipulated_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpTestConfig {
    pub mechanism: MechanismSpec,
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Checks one unilateral deviation.
pub fn check_misreport(
    mechanism: &MechanismSpec,
    profile: &Profile,
    agent_index: usize,
    misreport: f64,
    policy: &NumericPolicy,
) -> Result<Option<ManipulationWitness>> {
    let x = profile.locations()[agent_index];
    let honest_distance = mechanism.apply_with(profile, policy)?.expected_distance(x);
    let deviated = profile.with_report(agent_index, misreport)?;
    let manipulated_distance = mechanism.apply_with(&deviated, policy)?.expected_distance(x);
    Ok((manipulated_distance < honest_distance - policy.abs_tol).then(|| ManipulationWitness {
        profile: profile.clone(),
        agent_index,
        misreport,
        honest_distance,
        manipulated_distance,
    }))
}

/// Endpoints, the middle, quarter points, every other agent's report, the
/// agent's mirror image and small nudges around its own location.
fn structured_misreports(profile: &Profile, agent_index: usize) -> Vec<f64> {
    let x = profile.locations()[agent_index];
    let mut m = vec![0.0, 1.0, 0.5, 0.25, 0.75];
    m.extend(
        profile
            .locations()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != agent_index)
            .map(|(_, &y)| y),
    );
    m.push(1.0 - x);
    m.extend([x - 0.01, x + 0.01].into_iter().filter(|v| (0.0..=1.0).contains(v)));
    m
}

/// Searches for a profitable misreport. Seeded instances are scanned
/// exhaustively against the structured misreports first, so known
/// manipulations are found deterministically; then `trials` random
/// (profile, agent, misreport) triples are drawn, half of the misreports
/// uniform and half structured.
pub fn strategy_proofness_test(config: &SpTestConfig, policy: &NumericPolicy) -> Result<Option<ManipulationWitness>> {
    if config.n_min == 0 || config.n_min > config.n_max {
        return Err(Error::InvalidRange(format!("n range {}..={}", config.n_min, config.n_max)));
    }
    if config.trials == 0 {
        return Err(Error::InvalidRange("trials must be at least 1".into()));
    }
    policy.validate()?;
    config.mechanism.validate()?;
    let m = &config.mechanism;
    let admissible = |p: &Profile| m.apply_with(p, policy).is_ok();

    for n in config.n_min..=config.n_max {
        for p in seeded_profiles(n, m).into_iter().filter(|p| admissible(p)) {
            for agent in 0..n {
                for r in structured_misreports(&p, agent) {
                    if let Some(w) = check_misreport(m, &p, agent, r, policy)? {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for t in 0..config.trials {
        let n = rng.gen_range(config.n_min..=config.n_max);
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                if t % 4 == 3 {
                    (rng.gen_range(0..=8) as f64) / 8.0
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        let p = Profile::new(xs).expect("coordinates drawn from [0, 1]");
        if !admissible(&p) {
            continue;
        }
        let agent = rng.gen_range(0..n);
        let misreport = if rng.gen_bool(0.5) {
            rng.gen::<f64>()
        } else {
            let options = structured_misreports(&p, agent);
            options[rng.gen_range(0..options.len())]
        };
        if let Some(w) = check_misreport(m, &p, agent, misreport, policy)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
