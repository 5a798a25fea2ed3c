//! Optimal objective values over all placements.
//!
//! * One facility, complemented Gini: on every interval between the points
//!   `{0, 1} ∪ {x_i} ∪ {(x_i + x_j)/2}` both the pairwise-difference sum and
//!   the utility sum are affine in `y`, so the objective is a ratio of affine
//!   functions and is monotone there. Enumerating those points is exact.
//! * Two facilities, complemented Gini: the same argument in the plane. Over
//!   `y1 <= y2` the objective is a ratio of affine functions on every cell of
//!   the arrangement cut by the lines `y_k = c` (breakpoints and midpoints),
//!   `y1 + y2 = c` (nearest-facility switches and cross-group ties) and
//!   `y2 - y1 = c` (cross-group ties). The optimum sits on a cell vertex.
//! * Nash welfare: `sum_i ln(1 - |x_i - y|)` is concave in `y`, so a
//!   golden-section search is exact up to its bracket width. With two
//!   facilities agents split contiguously and the problem separates.
//! * A grid search with local refinement is kept as an independent route.
//!
//! Ties between optimal placements go to the largest total utility, then to
//! the lexicographically smallest placement.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{NumericPolicy, Placement, Profile};
use crate::objectives::Objective;

/// Values closer than this are treated as tied when picking a placement.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleMethod {
    CandidateExact,
    ConcaveSearch,
    GridRefined,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::CandidateExact => "candidate-exact",
            OracleMethod::ConcaveSearch => "concave-search",
            OracleMethod::GridRefined => "grid-refined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_value: f64,
    pub best_placement: Placement,
    pub method: OracleMethod,
    /// Bound on the distance to the true optimum; zero for exact methods.
    pub certified_gap: f64,
}

fn better(objective: Objective, a: f64, b: f64) -> bool {
    if objective.is_maximization() {
        a > b
    } else {
        a < b
    }
}

fn total_utility(profile: &Profile, placement: &Placement) -> f64 {
    profile.locations().iter().map(|&x| 1.0 - placement.distance_from(x)).sum()
}

/// Best value; among placements within [`TIE_TOL`] of it, the largest total
/// utility, then the lexicographically smallest placement.
///
/// The utility tie-break keeps the choice Pareto efficient, so a unanimous
/// profile (where every placement is perfectly equitable) gets the facility
/// at the agents' common location.
fn select(profile: &Profile, objective: Objective, scored: &[(f64, Placement)]) -> (f64, Placement) {
    let mut best = scored[0].0;
    for &(v, _) in scored {
        if better(objective, v, best) {
            best = v;
        }
    }
    let tied: Vec<(f64, f64, Placement)> = scored
        .iter()
        .filter(|(v, _)| (v - best).abs() <= TIE_TOL)
        .map(|&(v, p)| (v, total_utility(profile, &p), p))
        .collect();
    let top = tied.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    tied.into_iter()
        .filter(|t| t.1 >= top - TIE_TOL)
        .min_by(|a, b| a.2.lex_cmp(&b.2))
        .map(|(v, _, p)| (v, p))
        .expect("at least one candidate")
}

fn sorted_dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Breakpoints of the single-facility objective: `{0, 1}`, every report and
/// every pairwise midpoint.
pub fn one_facility_candidates(profile: &Profile) -> Vec<f64> {
    let xs = profile.locations();
    let mut c = Vec::with_capacity(2 + xs.len() * (xs.len() + 1) / 2);
    c.extend([0.0, 1.0]);
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i..] {
            c.push(0.5 * (a + b));
        }
    }
    sorted_dedup(c)
}

const SNAP: f64 = 1e-12;

fn snap_unit(v: f64) -> Option<f64> {
    if (-SNAP..=1.0 + SNAP).contains(&v) {
        Some(v.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Vertices of the two-facility arrangement inside `0 <= y1 <= y2 <= 1`.
pub fn two_facility_candidates(profile: &Profile) -> Vec<(f64, f64)> {
    let xs = profile.locations();
    let axis = one_facility_candidates(profile);
    let mut sums = Vec::new();
    let mut diffs = Vec::new();
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i..] {
            sums.push(a + b);
            diffs.push(b - a);
        }
    }
    let sums = sorted_dedup(sums);
    let diffs = sorted_dedup(diffs);

    let mut out = Vec::with_capacity(axis.len() * (axis.len() + 2 * sums.len() + 2 * diffs.len()) + sums.len() * diffs.len());
    let mut push = |a: f64, b: f64| {
        if let (Some(a), Some(b)) = (snap_unit(a), snap_unit(b)) {
            if a <= b + SNAP {
                out.push((a.min(b), b.max(a)));
            }
        }
    };
    for &a in &axis {
        for &b in &axis {
            push(a, b);
        }
        for &s in &sums {
            push(a, s - a);
            push(s - a, a);
        }
        for &d in &diffs {
            push(a, a + d);
            push(a - d, a);
        }
    }
    for &s in &sums {
        for &d in &diffs {
            push(0.5 * (s - d), 0.5 * (s + d));
        }
    }
    out
}

/// Exact maximum of the complemented Gini index with one facility.
pub fn opt_complemented_gini_1fac(profile: &Profile, _policy: &NumericPolicy) -> OracleResult {
    let objective = Objective::ComplementedGini;
    let mut scratch = Vec::with_capacity(profile.len());
    let scored: Vec<(f64, Placement)> = one_facility_candidates(profile)
        .into_iter()
        .map(|y| {
            let p = Placement::single(y).expect("candidate inside [0, 1]");
            (objective.evaluate_with(profile, &p, &mut scratch), p)
        })
        .collect();
    let (best_value, best_placement) = select(profile, objective, &scored);
    OracleResult {
        best_value,
        best_placement,
        method: OracleMethod::CandidateExact,
        certified_gap: 0.0,
    }
}

fn log_welfare(xs: &[f64], y: f64) -> f64 {
    xs.iter().map(|&x| (1.0 - (x - y).abs()).ln()).sum()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizer of the concave `sum ln(1 - |x_i - y|)` over the hull of `xs`,
/// also checking every report. Returns `(y, log value)`.
fn max_log_welfare(xs: &[f64], abs_tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (xs[0], xs[xs.len() - 1]);
    let width_tol = (abs_tol * 1e-4).max(1e-15);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (log_welfare(xs, c), log_welfare(xs, d));
    for _ in 0..200 {
        if hi - lo <= width_tol {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = log_welfare(xs, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = log_welfare(xs, d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let mut best = (mid, log_welfare(xs, mid));
    // Kinks sit at the reports; checking them makes kink optima exact.
    for &y in xs {
        let v = log_welfare(xs, y);
        if v > best.1 + TIE_TOL || ((v - best.1).abs() <= TIE_TOL && y < best.0) {
            best = (y, v);
        }
    }
    best
}

/// Maximum Nash welfare with one facility.
pub fn opt_nash_1fac(profile: &Profile, policy: &NumericPolicy) -> OracleResult {
    let objective = Objective::NashWelfare;
    let xs = profile.locations();
    let (y_star, _) = max_log_welfare(xs, policy.abs_tol);
    let mut scratch = Vec::with_capacity(xs.len());
    let mut candidates = vec![0.0, 1.0, y_star];
    candidates.extend_from_slice(xs);
    let scored: Vec<(f64, Placement)> = candidates
        .into_iter()
        .map(|y| {
            let p = Placement::single(y).expect("candidate inside [0, 1]");
            (objective.evaluate_with(profile, &p, &mut scratch), p)
        })
        .collect();
    let (best_value, best_placement) = select(profile, objective, &scored);
    OracleResult {
        best_value,
        best_placement,
        method: OracleMethod::ConcaveSearch,
        certified_gap: 0.0,
    }
}

fn max_distance_1fac(profile: &Profile) -> OracleResult {
    let (lo, hi) = (profile.leftmost(), profile.rightmost());
    OracleResult {
        best_value: 0.5 * (hi - lo),
        best_placement: Placement::single(0.5 * (lo + hi)).expect("midpoint inside [0, 1]"),
        method: OracleMethod::CandidateExact,
        certified_gap: 0.0,
    }
}

fn complemented_gini_2fac(profile: &Profile) -> OracleResult {
    let objective = Objective::ComplementedGini;
    let mut scratch = Vec::with_capacity(profile.len());
    let scored: Vec<(f64, Placement)> = two_facility_candidates(profile)
        .into_iter()
        .map(|(a, b)| {
            let p = Placement::pair(a, b).expect("vertex inside [0, 1]");
            (objective.evaluate_with(profile, &p, &mut scratch), p)
        })
        .collect();
    let (best_value, best_placement) = select(profile, objective, &scored);
    debug_assert!(assignment_is_contiguous(profile, &best_placement));
    OracleResult {
        best_value,
        best_placement,
        method: OracleMethod::CandidateExact,
        certified_gap: 0.0,
    }
}

/// Nearest-facility assignment of sorted agents never interleaves.
fn assignment_is_contiguous(profile: &Profile, placement: &Placement) -> bool {
    let f = placement.facilities();
    if f.len() < 2 {
        return true;
    }
    let served_right: Vec<bool> = profile
        .locations()
        .iter()
        .map(|&x| (x - f[1]).abs() < (x - f[0]).abs())
        .collect();
    served_right.windows(2).all(|w| w[0] <= w[1])
}

/// Every contiguous split of the sorted agents into a left group `0..k`
/// and a right group `k..n`.
fn splits(xs: &[f64]) -> impl Iterator<Item = (&[f64], &[f64])> {
    (0..=xs.len()).map(move |k| xs.split_at(k))
}

fn nash_2fac(profile: &Profile, policy: &NumericPolicy) -> OracleResult {
    let objective = Objective::NashWelfare;
    let xs = profile.locations();
    let mut scratch = Vec::with_capacity(xs.len());
    let scored: Vec<(f64, Placement)> = splits(xs)
        .map(|(left, right)| {
            let yl = (!left.is_empty()).then(|| max_log_welfare(left, policy.abs_tol).0);
            let yr = (!right.is_empty()).then(|| max_log_welfare(right, policy.abs_tol).0);
            let (a, b) = match (yl, yr) {
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) => (a, a),
                (None, Some(b)) => (b, b),
                (None, None) => unreachable!("profiles are non-empty"),
            };
            let p = Placement::pair(a, b).expect("inside [0, 1]");
            (objective.evaluate_with(profile, &p, &mut scratch), p)
        })
        .collect();
    let (best_value, best_placement) = select(profile, objective, &scored);
    OracleResult {
        best_value,
        best_placement,
        method: OracleMethod::ConcaveSearch,
        certified_gap: 0.0,
    }
}

fn max_distance_2fac(profile: &Profile) -> OracleResult {
    let xs = profile.locations();
    let half = |g: &[f64]| 0.5 * (g[g.len() - 1] - g[0]);
    let mid = |g: &[f64]| 0.5 * (g[0] + g[g.len() - 1]);
    let scored: Vec<(f64, Placement)> = splits(xs)
        .map(|(left, right)| {
            let (value, a, b) = match (left.is_empty(), right.is_empty()) {
                (false, false) => (half(left).max(half(right)), mid(left), mid(right)),
                (false, true) => (half(left), mid(left), mid(left)),
                (true, _) => (half(right), mid(right), mid(right)),
            };
            (value, Placement::pair(a, b).expect("inside [0, 1]"))
        })
        .collect();
    let (best_value, best_placement) = select(profile, Objective::MaxDistance, &scored);
    OracleResult {
        best_value,
        best_placement,
        method: OracleMethod::CandidateExact,
        certified_gap: 0.0,
    }
}

/// Optimal two-facility value for `objective`.
pub fn opt_2fac(profile: &Profile, objective: Objective, policy: &NumericPolicy) -> OracleResult {
    match objective {
        Objective::ComplementedGini => complemented_gini_2fac(profile),
        Objective::NashWelfare => nash_2fac(profile, policy),
        Objective::MaxDistance => max_distance_2fac(profile),
    }
}

/// Optimal value for `objective` with one or two facilities.
pub fn optimum(
    profile: &Profile,
    objective: Objective,
    facilities: usize,
    policy: &NumericPolicy,
) -> Result<OracleResult> {
    match (facilities, objective) {
        (1, Objective::ComplementedGini) => Ok(opt_complemented_gini_1fac(profile, policy)),
        (1, Objective::NashWelfare) => Ok(opt_nash_1fac(profile, policy)),
        (1, Objective::MaxDistance) => Ok(max_distance_1fac(profile)),
        (2, o) => Ok(opt_2fac(profile, o, policy)),
        (k, _) => Err(Error::FacilityCount(k)),
    }
}

/// Two-facility optimum by grid search plus local refinement.
///
/// Seeds with each contiguous split's group midpoints, scans the triangle
/// `y1 <= y2` at `policy.grid_resolution` points per axis, then runs
/// `policy.refine_rounds` rounds of a 201 x 201 local grid whose window
/// shrinks tenfold each round. `certified_gap` is the final spacing times
/// the Lipschitz bound `4n`.
pub fn opt_2fac_grid(profile: &Profile, objective: Objective, policy: &NumericPolicy) -> OracleResult {
    let xs = profile.locations();
    let mut scratch = Vec::with_capacity(xs.len());
    let mut eval = |a: f64, b: f64| {
        let p = Placement::pair(a, b).expect("grid point inside [0, 1]");
        (objective.evaluate_with(profile, &p, &mut scratch), p)
    };
    let mut incumbent = eval(xs[0], xs[xs.len() - 1]);
    let offer = |cand: (f64, Placement), inc: &mut (f64, Placement)| {
        let tied = (cand.0 - inc.0).abs() <= TIE_TOL;
        if (better(objective, cand.0, inc.0) && !tied) || (tied && cand.1.lex_cmp(&inc.1) == Ordering::Less) {
            *inc = cand;
        }
    };

    for (left, right) in splits(xs) {
        let mid = |g: &[f64]| 0.5 * (g[0] + g[g.len() - 1]);
        let a = if left.is_empty() { mid(right) } else { mid(left) };
        let b = if right.is_empty() { a } else { mid(right) };
        offer(eval(a, b), &mut incumbent);
    }

    let r = policy.grid_resolution;
    let mut spacing = 1.0 / (r - 1) as f64;
    for i in 0..r {
        let a = i as f64 * spacing;
        for j in i..r {
            offer(eval(a, (j as f64 * spacing).min(1.0)), &mut incumbent);
        }
    }

    const LOCAL: usize = 201;
    for _ in 0..policy.refine_rounds {
        let half = 10.0 * spacing;
        let step = 2.0 * half / (LOCAL - 1) as f64;
        let f = incumbent.1.facilities().to_vec();
        for i in 0..LOCAL {
            let a = f[0] - half + i as f64 * step;
            if !(0.0..=1.0).contains(&a) {
                continue;
            }
            for j in 0..LOCAL {
                let b = f[1] - half + j as f64 * step;
                if (0.0..=1.0).contains(&b) && a <= b {
                    offer(eval(a, b), &mut incumbent);
                }
            }
        }
        spacing = step;
    }

    OracleResult {
        best_value: incumbent.0,
        best_placement: incumbent.1,
        method: OracleMethod::GridRefined,
        certified_gap: spacing * 4.0 * xs.len() as f64,
    }
}

/// A placement giving every agent the same utility (within `abs_tol`), if
/// one exists among the exact candidate points.
pub fn equitable_certificate(profile: &Profile, facilities: usize, policy: &NumericPolicy) -> Result<Option<Placement>> {
    let candidates: Vec<Placement> = match facilities {
        1 => one_facility_candidates(profile)
            .into_iter()
            .map(|y| Placement::single(y).expect("inside [0, 1]"))
            .collect(),
        2 => two_facility_candidates(profile)
            .into_iter()
            .map(|(a, b)| Placement::pair(a, b).expect("inside [0, 1]"))
            .collect(),
        k => return Err(Error::FacilityCount(k)),
    };
    let equal = |p: &Placement| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in profile.locations() {
            let d = p.distance_from(x);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi - lo <= policy.abs_tol
    };
    Ok(candidates.into_iter().filter(equal).min_by(|a, b| a.lex_cmp(b)))
}
