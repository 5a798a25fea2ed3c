//! Worst-case approximation-ratio search.
//!
//! Three phases, all deterministic for a fixed seed:
//! 1. the seeded instance library for every `n` in range,
//! 2. random profiles (uniform coordinates, alternating with coordinates
//!    snapped to quarter points),
//! 3. coordinate-ascent local search from the best profiles found so far
//!    and from fresh random starts.
//!
//! For maximization objectives the optimum never exceeds 1, so
//! `1 / mech_value` bounds the ratio. With `prune` set, a random profile
//! whose bound cannot beat the best ratio already found for its `n` skips
//! the oracle. Pruned profiles are kept in the trace with their bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ratio::{evaluate, Provenance, RatioFinding};
use super::seeds::seeded_profiles;
use crate::error::{Error, Result};
use crate::mechanisms::MechanismSpec;
use crate::model::{NumericPolicy, Profile};
use crate::objectives::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub mechanism: MechanismSpec,
    pub objective: Objective,
    pub n_min: usize,
    pub n_max: usize,
    pub random_samples: usize,
    pub restarts: usize,
    pub seed: u64,
    pub prune: bool,
}

impl SearchConfig {
    pub fn new(mechanism: MechanismSpec, objective: Objective, n_min: usize, n_max: usize) -> Self {
        Self {
            mechanism,
            objective,
            n_min,
            n_max,
            random_samples: 10_000,
            restarts: 8,
            seed: 42,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub profile: Profile,
    pub provenance: Provenance,
    /// Restart index for local-search entries.
    pub restart: Option<usize>,
    /// Exact ratio, or the `1 / mech_value` upper bound when `pruned`.
    pub ratio: f64,
    pub pruned: bool,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: RatioFinding,
    /// Best finding for each `n` in range, ascending in `n`.
    pub best_per_n: Vec<RatioFinding>,
    pub trace: Vec<TraceEntry>,
}

impl SearchOutcome {
    pub fn evaluations(&self) -> usize {
        self.trace.len()
    }

    pub fn pruned(&self) -> usize {
        self.trace.iter().filter(|t| t.pruned).count()
    }
}

const LATTICE: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const MAX_STEPS_PER_RESTART: usize = 4000;

fn random_profile(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize, snapped: bool) -> Profile {
    let n = rng.gen_range(n_min..=n_max);
    let xs: Vec<f64> = (0..n)
        .map(|_| {
            if snapped && rng.gen_bool(0.5) {
                LATTICE[rng.gen_range(0..LATTICE.len())]
            } else {
                rng.gen::<f64>()
            }
        })
        .collect();
    Profile::new(xs).expect("coordinates drawn from [0, 1)")
}

fn beats(a: &RatioFinding, b: &RatioFinding) -> bool {
    a.ratio > b.ratio
}

struct State<'a> {
    config: &'a SearchConfig,
    policy: &'a NumericPolicy,
    best_per_n: Vec<Option<RatioFinding>>,
    trace: Vec<TraceEntry>,
}

impl State<'_> {
    fn slot(&mut self, n: usize) -> &mut Option<RatioFinding> {
        &mut self.best_per_n[n - self.config.n_min]
    }

    fn record(&mut self, finding: RatioFinding, restart: Option<usize>) {
        self.trace.push(TraceEntry {
            profile: finding.profile.clone(),
            provenance: finding.provenance,
            restart,
            ratio: finding.ratio,
            pruned: false,
        });
        let slot = self.slot(finding.profile.len());
        if slot.as_ref().is_none_or(|b| beats(&finding, b)) {
            *slot = Some(finding);
        }
    }

    fn consider(&mut self, profile: Profile, provenance: Provenance) -> Result<()> {
        let cfg = self.config;
        if cfg.prune && cfg.objective.is_maximization() {
            let outcome = cfg.mechanism.apply_with(&profile, self.policy)?;
            let mech = outcome.value(&profile, cfg.objective);
            let bound = if mech > 0.0 { 1.0 / mech } else { f64::INFINITY };
            let current = self.slot(profile.len()).as_ref().map(|b| b.ratio);
            if current.is_some_and(|c| bound <= c) {
                self.trace.push(TraceEntry {
                    profile,
                    provenance,
                    restart: None,
                    ratio: bound,
                    pruned: true,
                });
                return Ok(());
            }
        }
        let finding = evaluate(&profile, &cfg.mechanism, cfg.objective, self.policy, provenance)?;
        self.record(finding, None);
        Ok(())
    }
}

/// Coordinate ascent on the ratio with a halving step schedule from 0.1
/// down to `abs_tol`. Returns the trace of accepted moves and the final
/// finding.
fn local_search(
    start: Profile,
    config: &SearchConfig,
    policy: &NumericPolicy,
) -> Result<(RatioFinding, Vec<RatioFinding>)> {
    let eval = |p: &Profile| evaluate(p, &config.mechanism, config.objective, policy, Provenance::LocalSearch);
    let mut current = eval(&start)?;
    let mut visited = vec![current.clone()];
    let mut step = 0.1;
    let mut budget = MAX_STEPS_PER_RESTART;
    while step >= policy.abs_tol && budget > 0 && !current.is_unbounded() {
        let mut improved = false;
        for agent in 0..current.profile.len() {
            for dir in [1.0, -1.0] {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let x = current.profile.locations()[agent];
                let moved = (x + dir * step).clamp(0.0, 1.0);
                if moved == x {
                    continue;
                }
                let candidate = current.profile.with_report(agent, moved)?;
                let finding = eval(&candidate)?;
                if finding.ratio > current.ratio {
                    visited.push(finding.clone());
                    current = finding;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((current, visited))
}

/// Maximizes the approximation ratio of `config.mechanism` over profiles
/// with `n_min..=n_max` agents.
pub fn worst_case_search(config: &SearchConfig, policy: &NumericPolicy) -> Result<SearchOutcome> {
    if config.n_min == 0 || config.n_min > config.n_max {
        return Err(Error::InvalidRange(format!("n range {}..={}", config.n_min, config.n_max)));
    }
    policy.validate()?;
    config.mechanism.validate()?;
    let mut state = State {
        config,
        policy,
        best_per_n: vec![None; config.n_max - config.n_min + 1],
        trace: Vec::new(),
    };

    for n in config.n_min..=config.n_max {
        for p in seeded_profiles(n, &config.mechanism) {
            // Phantom medians need n > phantom count.
            if config.mechanism.apply_with(&p, policy).is_err() {
                continue;
            }
            state.consider(p, Provenance::SeededFromPaper)?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..config.random_samples {
        let p = random_profile(&mut rng, config.n_min, config.n_max, i % 2 == 1);
        if config.mechanism.apply_with(&p, policy).is_err() {
            continue;
        }
        state.consider(p, Provenance::RandomSample)?;
    }

    // Half of the restarts climb from the best profiles found so far, the
    // rest from fresh random starts.
    let mut ranked: Vec<&RatioFinding> = state.best_per_n.iter().flatten().collect();
    ranked.sort_by(|a, b| b.ratio.total_cmp(&a.ratio));
    let from_best = config.restarts.div_ceil(2).min(ranked.len());
    let mut starts: Vec<Profile> = ranked[..from_best].iter().map(|f| f.profile.clone()).collect();
    while starts.len() < config.restarts {
        let mut r = ChaCha8Rng::seed_from_u64(config.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(starts.len() as u64 + 1)));
        let p = random_profile(&mut r, config.n_min, config.n_max, false);
        starts.push(p);
    }
    starts.retain(|p| config.mechanism.apply_with(p, policy).is_ok());

    let climbs: Vec<Result<(RatioFinding, Vec<RatioFinding>)>> = starts
        .into_par_iter()
        .map(|s| local_search(s, config, policy))
        .collect();
    for (restart, climb) in climbs.into_iter().enumerate() {
        let (_, visited) = climb?;
        for f in visited {
            state.record(f, Some(restart));
        }
    }

    let best_per_n: Vec<RatioFinding> = state.best_per_n.into_iter().flatten().collect();
    let best = best_per_n
        .iter()
        .fold(None::<&RatioFinding>, |acc, f| match acc {
            Some(b) if !beats(f, b) => Some(b),
            _ => Some(f),
        })
        .cloned()
        .ok_or_else(|| Error::InvalidRange("no admissible profile in range".into()))?;
    Ok(SearchOutcome {
        best,
        best_per_n,
        trace: state.trace,
    })
}
