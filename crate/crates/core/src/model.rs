//! Domain types: agent profiles, facility placements, lotteries over
//! placements, and the numeric tolerances shared by every computation.
//!
//! Everything here is immutable after construction. Agents and facilities
//! live on the unit interval; an agent's utility is one minus the distance
//! to its nearest facility.

use std::fmt;

use crate::error::{Error, Result};

fn check_unit(x: f64) -> Result<f64> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::OutOfRange(x))
    }
}

/// Reported agent locations, sorted non-decreasing. Duplicates are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    locations: Vec<f64>,
}

impl Profile {
    /// Validates and sorts a raw report vector.
    pub fn new(raw: impl Into<Vec<f64>>) -> Result<Self> {
        let mut locations = raw.into();
        if locations.is_empty() {
            return Err(Error::EmptyProfile);
        }
        for &x in &locations {
            check_unit(x)?;
        }
        locations.sort_by(f64::total_cmp);
        Ok(Self { locations })
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    /// Always false; a profile holds at least one agent.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leftmost(&self) -> f64 {
        self.locations[0]
    }

    pub fn rightmost(&self) -> f64 {
        self.locations[self.locations.len() - 1]
    }

    /// The mirror image `x -> 1 - x`, re-sorted.
    pub fn reflect(&self) -> Self {
        let locations = self.locations.iter().rev().map(|x| 1.0 - x).collect();
        Self { locations }
    }

    /// The profile obtained when agent `agent` (index into the sorted
    /// locations) reports `report` instead of its true location.
    pub fn with_report(&self, agent: usize, report: f64) -> Result<Self> {
        check_unit(report)?;
        let mut locations = self.locations.clone();
        locations[agent] = report;
        locations.sort_by(f64::total_cmp);
        Ok(Self { locations })
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.locations)
    }
}

fn write_coords(f: &mut fmt::Formatter<'_>, xs: &[f64]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

/// One or two facility locations; a pair is stored in non-decreasing order
/// and may coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    slots: [f64; 2],
    count: usize,
}

impl Placement {
    pub fn single(y: f64) -> Result<Self> {
        Ok(Self {
            slots: [check_unit(y)?, 0.0],
            count: 1,
        })
    }

    pub fn pair(a: f64, b: f64) -> Result<Self> {
        let (a, b) = (check_unit(a)?, check_unit(b)?);
        Ok(Self {
            slots: [a.min(b), a.max(b)],
            count: 2,
        })
    }

    pub fn new(facilities: &[f64]) -> Result<Self> {
        match *facilities {
            [y] => Self::single(y),
            [a, b] => Self::pair(a, b),
            _ => Err(Error::FacilityCount(facilities.len())),
        }
    }

    pub fn facilities(&self) -> &[f64] {
        &self.slots[..self.count]
    }

    pub fn facility_count(&self) -> usize {
        self.count
    }

    /// Distance from `x` to the nearest facility.
    #[inline]
    pub fn distance_from(&self, x: f64) -> f64 {
        let d = (x - self.slots[0]).abs();
        if self.count == 2 {
            d.min((x - self.slots[1]).abs())
        } else {
            d
        }
    }

    pub fn reflect(&self) -> Self {
        match self.count {
            1 => Self {
                slots: [1.0 - self.slots[0], 0.0],
                count: 1,
            },
            _ => Self {
                slots: [1.0 - self.slots[1], 1.0 - self.slots[0]],
                count: 2,
            },
        }
    }

    /// Lexicographic comparison of facility coordinates.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.facilities()
            .iter()
            .zip(other.facilities())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(self.count.cmp(&other.count))
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, self.facilities())
    }
}

/// Tolerance for probabilities summing to one.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// A finite probability distribution over placements with a common
/// facility count.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery {
    outcomes: Vec<(f64, Placement)>,
}

impl Lottery {
    pub fn new(outcomes: Vec<(f64, Placement)>) -> Result<Self> {
        let Some((_, first)) = outcomes.first() else {
            return Err(Error::InvalidLottery("no outcomes".into()));
        };
        let count = first.facility_count();
        let mut total = 0.0;
        for (p, placement) in &outcomes {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::InvalidLottery(format!("probability {p} not in (0, 1]")));
            }
            if placement.facility_count() != count {
                return Err(Error::InvalidLottery("mixed facility counts".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidLottery(format!("probabilities sum to {total}")));
        }
        Ok(Self { outcomes })
    }

    /// Point mass on a single placement.
    pub fn certain(placement: Placement) -> Self {
        Self {
            outcomes: vec![(1.0, placement)],
        }
    }

    pub fn outcomes(&self) -> &[(f64, Placement)] {
        &self.outcomes
    }

    pub fn facility_count(&self) -> usize {
        self.outcomes[0].1.facility_count()
    }

    /// Probability-weighted sum of `f` over the outcomes.
    pub fn expectation(&self, mut f: impl FnMut(&Placement) -> f64) -> f64 {
        self.outcomes.iter().map(|(p, placement)| p * f(placement)).sum()
    }

    pub fn reflect(&self) -> Self {
        let outcomes = self
            .outcomes
            .iter()
            .rev()
            .map(|(p, placement)| (*p, placement.reflect()))
            .collect();
        Self { outcomes }
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, placement)) in self.outcomes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({p}, {placement})")?;
        }
        write!(f, "}}")
    }
}

/// Numeric tolerances and search resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Absolute tolerance for equality checks.
    pub abs_tol: f64,
    /// Grid points per axis for grid-based two-facility search.
    pub grid_resolution: usize,
    /// Local refinement rounds after the coarse grid.
    pub refine_rounds: usize,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            grid_resolution: 2001,
            refine_rounds: 3,
        }
    }
}

impl NumericPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!("abs_tol {} must be positive", self.abs_tol)));
        }
        if self.grid_resolution < 3 {
            return Err(Error::InvalidPolicy(format!(
                "grid_resolution {} must be at least 3",
                self.grid_resolution
            )));
        }
        Ok(())
    }
}

/// Nearest-facility distance of every agent, in profile order.
pub fn distances(profile: &Profile, placement: &Placement) -> Vec<f64> {
    profile
        .locations()
        .iter()
        .map(|&x| placement.distance_from(x))
        .collect()
}

/// `u_i = 1 - d_i` for every agent, in profile order.
pub fn utilities(profile: &Profile, placement: &Placement) -> Vec<f64> {
    profile
        .locations()
        .iter()
        .map(|&x| 1.0 - placement.distance_from(x))
        .collect()
}
