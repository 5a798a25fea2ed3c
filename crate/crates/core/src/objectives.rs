//! Equity and welfare objectives over a (profile, placement) pair.
//!
//! The Gini kernel is `sum_i sum_j |v_i - v_j| / (2 n sum_i v_i)`, applied to
//! either distances or utilities. When every value is zero the index is
//! defined as 0 (all values equal), so the complemented index is 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{distances, utilities, Lottery, Placement, Profile};

/// Objective selector used by the oracle and the ratio analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// `1 - G_u`, maximized.
    ComplementedGini,
    /// Geometric mean of utilities, maximized.
    NashWelfare,
    /// Largest nearest-facility distance, minimized. Diagnostic only.
    MaxDistance,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::ComplementedGini,
        Objective::NashWelfare,
        Objective::MaxDistance,
    ];

    pub fn is_maximization(self) -> bool {
        !matches!(self, Objective::MaxDistance)
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::ComplementedGini => "complemented-gini",
            Objective::NashWelfare => "nash",
            Objective::MaxDistance => "max-distance",
        }
    }

    pub fn evaluate(self, profile: &Profile, placement: &Placement) -> f64 {
        let mut scratch = Vec::with_capacity(profile.len());
        self.evaluate_with(profile, placement, &mut scratch)
    }

    /// Same as [`Objective::evaluate`], reusing `scratch` for the utility
    /// vector. Used in oracle inner loops.
    pub fn evaluate_with(self, profile: &Profile, placement: &Placement, scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend(profile.locations().iter().map(|&x| 1.0 - placement.distance_from(x)));
        self.of_utilities(scratch)
    }

    /// The objective as a function of the utility vector alone.
    pub fn of_utilities(self, u: &[f64]) -> f64 {
        match self {
            Objective::ComplementedGini => 1.0 - gini_kernel(u),
            Objective::NashWelfare => geometric_mean(u),
            Objective::MaxDistance => 1.0 - u.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complemented-gini" | "cgini" | "1-g" | "gini" => Ok(Objective::ComplementedGini),
            "nash" | "nash-welfare" => Ok(Objective::NashWelfare),
            "max-distance" | "maxdist" => Ok(Objective::MaxDistance),
            _ => Err(Error::UnknownName {
                what: "objective",
                name: s.to_string(),
            }),
        }
    }
}

fn gini_kernel(values: &[f64]) -> f64 {
    let n = values.len();
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut pairs = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            pairs += (a - b).abs();
        }
    }
    // The full double sum counts each unordered pair twice.
    (2.0 * pairs) / (2.0 * n as f64 * total)
}

fn check_non_negative(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| v.is_nan() || **v < 0.0) {
        Some(&v) => Err(Error::NegativeValue(v)),
        None => Ok(()),
    }
}

/// Gini index by the literal O(n^2) double sum.
pub fn gini(values: &[f64]) -> Result<f64> {
    check_non_negative(values)?;
    if values.is_empty() {
        return Ok(0.0);
    }
    Ok(gini_kernel(values))
}

/// Gini index via the sorted O(n log n) form
/// `sum_i (2i - n + 1) v_(i) / (n sum v)` with 0-based ranks.
pub fn gini_sorted(values: &[f64]) -> Result<f64> {
    check_non_negative(values)?;
    let n = values.len();
    let total: f64 = values.iter().sum();
    if n == 0 || total <= 0.0 {
        return Ok(0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, v)| (2.0 * i as f64 - n as f64 + 1.0) * v)
        .sum();
    Ok(weighted / (n as f64 * total))
}

fn geometric_mean(u: &[f64]) -> f64 {
    if u.iter().any(|&v| v <= 0.0) {
        return 0.0;
    }
    let mean_log = u.iter().map(|v| v.ln()).sum::<f64>() / u.len() as f64;
    mean_log.exp()
}

/// `G_d`: Gini index of the nearest-facility distances.
pub fn gini_of_distances(profile: &Profile, placement: &Placement) -> f64 {
    gini_kernel(&distances(profile, placement))
}

/// `G_u`: Gini index of the utilities.
pub fn gini_of_utilities(profile: &Profile, placement: &Placement) -> f64 {
    gini_kernel(&utilities(profile, placement))
}

pub fn complemented_gini_utilities(profile: &Profile, placement: &Placement) -> f64 {
    1.0 - gini_of_utilities(profile, placement)
}

/// Geometric mean of utilities; 0 when any agent has zero utility.
pub fn nash_welfare(profile: &Profile, placement: &Placement) -> f64 {
    geometric_mean(&utilities(profile, placement))
}

pub fn max_distance(profile: &Profile, placement: &Placement) -> f64 {
    distances(profile, placement).into_iter().fold(0.0, f64::max)
}

pub fn min_utility(profile: &Profile, placement: &Placement) -> f64 {
    utilities(profile, placement).into_iter().fold(1.0, f64::min)
}

/// Probability-weighted objective value over a lottery's outcomes.
pub fn expected_objective(profile: &Profile, lottery: &Lottery, objective: Objective) -> f64 {
    let mut scratch = Vec::with_capacity(profile.len());
    lottery.expectation(|placement| objective.evaluate_with(profile, placement, &mut scratch))
}

/// Every objective for one (profile, placement).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveReport {
    pub utilities: Vec<f64>,
    pub distances: Vec<f64>,
    pub gini_distances: f64,
    pub gini_utilities: f64,
    pub complemented_gini: f64,
    pub nash_welfare: f64,
    pub max_distance: f64,
    pub min_utility: f64,
}

impl ObjectiveReport {
    pub fn new(profile: &Profile, placement: &Placement) -> Self {
        let utilities = utilities(profile, placement);
        let distances = distances(profile, placement);
        let gini_utilities = gini_kernel(&utilities);
        let min_utility = utilities.iter().copied().fold(1.0, f64::min);
        Self {
            gini_distances: gini_kernel(&distances),
            gini_utilities,
            complemented_gini: 1.0 - gini_utilities,
            nash_welfare: geometric_mean(&utilities),
            max_distance: 1.0 - min_utility,
            min_utility,
            utilities,
            distances,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(xs: &[f64]) -> Profile {
        Profile::new(xs.to_vec()).unwrap()
    }

    fn one(y: f64) -> Placement {
        Placement::single(y).unwrap()
    }

    fn two(a: f64, b: f64) -> Placement {
        Placement::pair(a, b).unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} != {b}");
    }

    #[test]
    fn gini_examples() {
        close(gini(&[1.0, 0.0]).unwrap(), 0.5);
        close(gini(&[0.7, 0.7, 0.7]).unwrap(), 0.0);
        close(gini(&[1.0, 0.5, 0.5]).unwrap(), 1.0 / 6.0);
        assert_eq!(gini(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(gini(&[0.5, -0.1]), Err(Error::NegativeValue(-0.1)));
    }

    #[test]
    fn gini_of_distances_examples() {
        // n = 3 agents at 1/2 plus one at each end.
        let p = profile(&[0.0, 0.5, 0.5, 0.5, 1.0]);
        close(gini_of_distances(&p, &one(0.0)), 8.0 / 25.0);
        close(gini_of_distances(&p, &one(0.5)), 3.0 / 5.0);
        close(gini_of_distances(&profile(&[0.2, 0.6]), &one(0.4)), 0.0);
    }

    #[test]
    fn complemented_gini_examples() {
        close(complemented_gini_utilities(&profile(&[0.0, 1.0, 1.0, 1.0]), &one(0.0)), 0.25);
        close(
            complemented_gini_utilities(&profile(&[0.0, 0.5, 0.75]), &two(0.25, 0.75)),
            14.0 / 15.0,
        );
        close(
            complemented_gini_utilities(&profile(&[0.0, 0.5, 1.0]), &two(0.5, 0.5)),
            5.0 / 6.0,
        );
    }

    #[test]
    fn nash_examples() {
        close(nash_welfare(&profile(&[0.0, 1.0]), &one(0.5)), 0.5);
        assert_eq!(nash_welfare(&profile(&[0.0, 1.0]), &one(0.0)), 0.0);
        close(nash_welfare(&profile(&[0.0, 0.0, 0.5]), &one(0.5)), 2f64.powf(-2.0 / 3.0));
    }

    #[test]
    fn max_distance_examples() {
        let p = profile(&[0.0, 1.0]);
        close(max_distance(&p, &one(0.0)), 1.0);
        close(max_distance(&p, &one(0.5)), 0.5);
        close(max_distance(&profile(&[0.0, 0.5, 1.0]), &two(0.0, 1.0)), 0.5);
        close(min_utility(&p, &one(0.5)), 0.5);
    }

    #[test]
    fn expected_objective_examples() {
        let lrm = Lottery::new(vec![(0.25, one(0.0)), (0.5, one(0.5)), (0.25, one(1.0))]).unwrap();
        close(
            expected_objective(&profile(&[0.0, 1.0]), &lrm, Objective::ComplementedGini),
            0.75,
        );
        let p = profile(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        close(expected_objective(&p, &lrm, Objective::NashWelfare), 0.25);
        let point = Lottery::certain(one(0.3));
        close(
            expected_objective(&p, &point, Objective::NashWelfare),
            nash_welfare(&p, &one(0.3)),
        );
    }

    #[test]
    fn report_is_consistent() {
        let p = profile(&[0.0, 0.3, 0.9]);
        let r = ObjectiveReport::new(&p, &one(0.4));
        assert_eq!(r.complemented_gini, 1.0 - r.gini_utilities);
        close(r.max_distance, 1.0 - r.min_utility);
        let hi = r.utilities.iter().copied().fold(0.0, f64::max);
        assert!(r.nash_welfare >= r.min_utility && r.nash_welfare <= hi);
    }

    #[test]
    fn objective_names_round_trip() {
        for o in Objective::ALL {
            assert_eq!(o.name().parse::<Objective>().unwrap(), o);
        }
        assert!("hoover".parse::<Objective>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_values() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(0.0..=1.0f64, 1..12)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn scale_invariance(v in arb_values(), c in 0.01..100.0f64) {
                prop_assume!(v.iter().sum::<f64>() > 1e-6);
                let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
                prop_assert!((gini(&v).unwrap() - gini(&scaled).unwrap()).abs() < 1e-9);
            }

            #[test]
            fn permutation_invariance(v in arb_values(), seed in any::<u64>()) {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;
                let mut shuffled = v.clone();
                shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
                prop_assert!((gini(&v).unwrap() - gini(&shuffled).unwrap()).abs() < 1e-12);
            }

            #[test]
            fn double_sum_matches_sorted_form(v in arb_values()) {
                prop_assert!((gini(&v).unwrap() - gini_sorted(&v).unwrap()).abs() < 1e-12);
            }

            #[test]
            fn bounds_and_am_gm(
                xs in proptest::collection::vec(0.0..=1.0f64, 1..10),
                y in 0.0..=1.0f64,
            ) {
                let p = Profile::new(xs).unwrap();
                let r = ObjectiveReport::new(&p, &Placement::single(y).unwrap());
                for v in [r.gini_utilities, r.complemented_gini, r.nash_welfare, r.gini_distances] {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
                let mean = r.utilities.iter().sum::<f64>() / r.utilities.len() as f64;
                prop_assert!(r.nash_welfare <= mean + 1e-12);
            }

            #[test]
            fn equal_utilities_give_one(x in 0.0..=1.0f64, n in 1usize..8, y in 0.0..=1.0f64) {
                let p = Profile::new(vec![x; n]).unwrap();
                prop_assert_eq!(complemented_gini_utilities(&p, &Placement::single(y).unwrap()), 1.0);
            }
        }
    }
}
