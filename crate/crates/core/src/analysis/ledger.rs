//! Golden checks: each known worst-case instance evaluated through the
//! library and compared with its closed-form value.

use super::ratio::approximation_ratio;
use super::strategy::check_misreport;
use crate::error::Result;
use crate::mechanisms::MechanismSpec;
use crate::model::{Lottery, NumericPolicy, Placement, Profile};
use crate::objectives::{self, Objective};

/// Default comparison tolerance; every value checked here is a closed form.
pub const GOLDEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    /// Short group label, e.g. `leftmost-1g`.
    pub group: &'static str,
    pub claim: String,
    pub computed: f64,
    pub expected: f64,
}

impl LedgerRow {
    /// Absolute error; zero when both sides are the same infinity.
    pub fn abs_error(&self) -> f64 {
        if self.computed == self.expected {
            0.0
        } else {
            (self.computed - self.expected).abs()
        }
    }

    pub fn passed(&self) -> bool {
        self.abs_error() <= GOLDEN_TOL
    }
}

fn profile(parts: &[(usize, f64)]) -> Profile {
    let v: Vec<f64> = parts.iter().flat_map(|&(k, x)| std::iter::repeat_n(x, k)).collect();
    Profile::new(v).expect("golden profiles are valid")
}

fn one(y: f64) -> Placement {
    Placement::single(y).expect("valid facility")
}

fn two(a: f64, b: f64) -> Placement {
    Placement::pair(a, b).expect("valid facilities")
}

struct Rows {
    rows: Vec<LedgerRow>,
    policy: NumericPolicy,
}

impl Rows {
    fn push(&mut self, group: &'static str, claim: impl Into<String>, computed: f64, expected: f64) {
        self.rows.push(LedgerRow {
            group,
            claim: claim.into(),
            computed,
            expected,
        });
    }

    fn ratio(&self, p: &Profile, m: &MechanismSpec, o: Objective) -> Result<f64> {
        Ok(approximation_ratio(p, m, o, &self.policy)?.ratio)
    }

    fn mech_value(&self, p: &Profile, m: &MechanismSpec, o: Objective) -> Result<f64> {
        Ok(m.apply_with(p, &self.policy)?.value(p, o))
    }
}

/// Evaluates every golden instance. Rows are grouped by mechanism or
/// scenario, in a fixed order.
pub fn theorem_ledger(policy: &NumericPolicy) -> Result<Vec<LedgerRow>> {
    use MechanismSpec as M;
    use Objective::{ComplementedGini as CG, NashWelfare as NW};
    let mut r = Rows {
        rows: Vec::new(),
        policy: *policy,
    };

    // Leftmost: one agent at 0, n - 1 at 1 gives 1/n against an optimum of 1.
    for n in 2..=8 {
        let p = profile(&[(1, 0.0), (n - 1, 1.0)]);
        r.push("leftmost-1g", format!("Leftmost 1-G on [0, 1 x {}]", n - 1), r.mech_value(&p, &M::Leftmost, CG)?, 1.0 / n as f64);
        r.push("leftmost-1g", format!("Leftmost 1-G ratio, n = {n}"), r.ratio(&p, &M::Leftmost, CG)?, n as f64);
    }

    // Median.
    let p = profile(&[(1, 0.0), (1, 1.0)]);
    r.push("median-1g", "Median 1-G on [0, 1]", r.mech_value(&p, &M::Median, CG)?, 0.5);
    r.push("median-1g", "Median 1-G ratio on [0, 1]", r.ratio(&p, &M::Median, CG)?, 2.0);
    for k in 1..=3 {
        let p = profile(&[(k + 1, 0.0), (k, 1.0)]);
        let kf = k as f64;
        r.push(
            "median-1g",
            format!("Median 1-G, odd n = {}: 1 - k/(2k+1)", 2 * k + 1),
            r.mech_value(&p, &M::Median, CG)?,
            1.0 - kf / (2.0 * kf + 1.0),
        );
    }

    // MidOrNearest: n - 1 agents at 0 and one at 1/2.
    for n in 2..=8usize {
        let p = profile(&[(n - 1, 0.0), (1, 0.5)]);
        let nf = n as f64;
        r.push(
            "midornearest-1g",
            format!("MidOrNearest 1-G ratio, n = {n}: (n^2+n)/(n^2+1)"),
            r.ratio(&p, &M::MidOrNearest, CG)?,
            (nf * nf + nf) / (nf * nf + 1.0),
        );
    }
    r.push(
        "midornearest-1g",
        "MidOrNearest 1-G ratio on [0, 1/2]",
        r.ratio(&profile(&[(1, 0.0), (1, 0.5)]), &M::MidOrNearest, CG)?,
        6.0 / 5.0,
    );

    // EndPoint: one agent at each end, n - 2 in the middle.
    let p = profile(&[(1, 0.0), (3, 0.5), (1, 1.0)]);
    r.push("endpoint-1g", "EndPoint 1-G on [0, 1/2 x 3, 1]", r.mech_value(&p, &M::EndPoint, CG)?, 29.0 / 35.0);
    let opt = crate::oracle::opt_2fac(&p, CG, policy);
    r.push("endpoint-1g", "two-facility optimum on [0, 1/2 x 3, 1]", opt.best_value, 1.0);
    r.push("endpoint-1g", "optimal left facility 1/4", opt.best_placement.facilities()[0], 0.25);
    r.push("endpoint-1g", "optimal right facility 3/4", opt.best_placement.facilities()[1], 0.75);
    r.push("endpoint-1g", "EndPoint 1-G ratio on [0, 1/2 x 3, 1]", r.ratio(&p, &M::EndPoint, CG)?, 35.0 / 29.0);
    for n in 3..=8usize {
        let p = profile(&[(1, 0.0), (n - 2, 0.5), (1, 1.0)]);
        let nf = n as f64;
        r.push(
            "endpoint-1g",
            format!("EndPoint 1-G, n = {n}: 1 - 2(n-2)/(n(n+2))"),
            r.mech_value(&p, &M::EndPoint, CG)?,
            1.0 - 2.0 * (nf - 2.0) / (nf * (nf + 2.0)),
        );
    }

    // EndPoint-gamma.
    let quarter = M::EndPointGamma(0.25);
    let p = profile(&[(1, 0.0), (1, 0.5), (1, 0.75)]);
    r.push("endpoint-gamma-1g", "EndPoint-gamma(1/4) 1-G on [0, 1/2, 3/4]", r.mech_value(&p, &quarter, CG)?, 14.0 / 15.0);
    r.push("endpoint-gamma-1g", "EndPoint-gamma(1/4) ratio on [0, 1/2, 3/4]", r.ratio(&p, &quarter, CG)?, 15.0 / 14.0);
    let half = M::EndPointGamma(0.5);
    let p = profile(&[(1, 0.0), (1, 0.5), (1, 1.0)]);
    r.push("endpoint-gamma-1g", "EndPoint-gamma(1/2) 1-G on [0, 1/2, 1]", r.mech_value(&p, &half, CG)?, 5.0 / 6.0);
    r.push("endpoint-gamma-1g", "EndPoint-gamma(1/2) ratio on [0, 1/2, 1]", r.ratio(&p, &half, CG)?, 6.0 / 5.0);

    // LRM, complemented Gini.
    let p = profile(&[(1, 0.0), (1, 1.0)]);
    r.push("lrm-1g", "LRM expected 1-G on [0, 1]", r.mech_value(&p, &M::Lrm, CG)?, 0.75);
    r.push("lrm-1g", "LRM 1-G ratio on [0, 1]", r.ratio(&p, &M::Lrm, CG)?, 4.0 / 3.0);
    let a = 0.5;
    r.push(
        "lrm-1g",
        "LRM n = 2 extreme outcome on [0, 1/2]: 1 - a/(2(2-a))",
        objectives::complemented_gini_utilities(&profile(&[(1, 0.0), (1, a)]), &one(0.0)),
        1.0 - a / (2.0 * (2.0 - a)),
    );
    let p = profile(&[(2, 0.0), (1, 1.0)]);
    r.push("lrm-1g", "LRM expected 1-G on [0, 0, 1]", r.mech_value(&p, &M::Lrm, CG)?, 0.75);
    r.push("lrm-1g", "LRM 1-G ratio on [0, 0, 1]", r.ratio(&p, &M::Lrm, CG)?, 4.0 / 3.0);
    for (a, b) in [(0.1, 0.9), (0.2, 0.5), (0.0, 1.0), (0.25, 0.6)] {
        // Valid where 2a <= b.
        let p = profile(&[(1, 0.0), (1, a), (1, b)]);
        let at_mid = objectives::complemented_gini_utilities(&p, &one(b / 2.0));
        r.push(
            "lrm-1g",
            format!("n = 3 at b/2, (a, b) = ({a}, {b}): 1 - 4a/(3(6-3b+2a))"),
            at_mid,
            1.0 - 4.0 * a / (3.0 * (6.0 - 3.0 * b + 2.0 * a)),
        );
        r.push(
            "lrm-1g",
            format!("n = 3 at 0, (a, b) = ({a}, {b}): 1 - 2b/(3(3-a-b))"),
            objectives::complemented_gini_utilities(&p, &one(0.0)),
            1.0 - 2.0 * b / (3.0 * (3.0 - a - b)),
        );
        r.push(
            "lrm-1g",
            format!("n = 3 at b, (a, b) = ({a}, {b}): 1 - 2b/(3(3+a-2b))"),
            objectives::complemented_gini_utilities(&p, &one(b)),
            1.0 - 2.0 * b / (3.0 * (3.0 + a - 2.0 * b)),
        );
        let lottery = Lottery::new(vec![(0.25, one(0.0)), (0.5, one(b / 2.0)), (0.25, one(b))])?;
        r.push(
            "lrm-1g",
            format!("n = 3 expected, (a, b) = ({a}, {b})"),
            objectives::expected_objective(&p, &lottery, CG),
            1.0 - 2.0 * a / (3.0 * (6.0 - 3.0 * b + 2.0 * a)) - b / (6.0 * (3.0 - a - b)) - b / (6.0 * (3.0 + a - 2.0 * b)),
        );
    }
    for k in 1..=3 {
        let even = profile(&[(k, 0.0), (k, 1.0)]);
        let odd = profile(&[(k, 0.0), (k + 1, 1.0)]);
        r.push("lrm-1g", format!("LRM expected 1-G, {k} at 0 and {k} at 1"), r.mech_value(&even, &M::Lrm, CG)?, 0.75);
        r.push("lrm-1g", format!("LRM expected 1-G, {k} at 0 and {} at 1", k + 1), r.mech_value(&odd, &M::Lrm, CG)?, 0.75);
    }

    // Nash welfare.
    let p = profile(&[(1, 0.0), (1, 1.0)]);
    for m in [M::Leftmost, M::Median] {
        r.push("nash-unbounded", format!("{m} Nash ratio on [0, 1]"), r.ratio(&p, &m, NW)?, f64::INFINITY);
    }
    for n in [3usize, 5, 10] {
        let p = profile(&[(n - 1, 0.0), (1, 0.5)]);
        let nf = n as f64;
        r.push(
            "midornearest-nash",
            format!("MidOrNearest Nash, n = {n}: 2^(-(n-1)/n)"),
            r.mech_value(&p, &M::MidOrNearest, NW)?,
            2f64.powf(-(nf - 1.0) / nf),
        );
        r.push(
            "midornearest-nash",
            format!("optimal Nash, n = {n}: 2^(-1/n) at 0"),
            crate::oracle::opt_nash_1fac(&p, policy).best_value,
            2f64.powf(-1.0 / nf),
        );
        r.push(
            "midornearest-nash",
            format!("MidOrNearest Nash ratio, n = {n}: 2^((n-2)/n)"),
            r.ratio(&p, &M::MidOrNearest, NW)?,
            2f64.powf((nf - 2.0) / nf),
        );
    }
    for n in [4usize, 6, 10] {
        let p = profile(&[(n - 1, 0.0), (1, 1.0)]);
        r.push("lrm-nash", format!("LRM expected Nash, n = {n}, n - 1 at 0 and one at 1"), r.mech_value(&p, &M::Lrm, NW)?, 0.25);
    }
    r.push("lrm-nash", "LRM Nash ratio on [0, 1]", r.ratio(&profile(&[(1, 0.0), (1, 1.0)]), &M::Lrm, NW)?, 2.0);
    for n in [3usize, 5, 10] {
        let p = profile(&[(1, 0.0), (n - 2, 0.5), (1, 1.0)]);
        let nf = n as f64;
        r.push(
            "endpoint-nash",
            format!("EndPoint Nash, n = {n}: 2^(-(n-2)/n)"),
            r.mech_value(&p, &M::EndPoint, NW)?,
            2f64.powf(-(nf - 2.0) / nf),
        );
    }

    // Phantom at a with two agents (complemented Gini).
    for a in [0.0, 0.25, 0.5] {
        let ph = M::PhantomMedian(vec![a]);
        let left = profile(&[(1, 0.0), (1, a)]);
        let right = profile(&[(1, a), (1, 1.0)]);
        r.push("phantom-1g", format!("phantom {a}, [0, a]: (4-3a)/(4-2a)"), r.mech_value(&left, &ph, CG)?, (4.0 - 3.0 * a) / (4.0 - 2.0 * a));
        r.push("phantom-1g", format!("phantom {a}, [0, a] ratio: (4-2a)/(4-3a)"), r.ratio(&left, &ph, CG)?, (4.0 - 2.0 * a) / (4.0 - 3.0 * a));
        r.push("phantom-1g", format!("phantom {a}, [a, 1]: (1+3a)/(2+2a)"), r.mech_value(&right, &ph, CG)?, (1.0 + 3.0 * a) / (2.0 + 2.0 * a));
        r.push("phantom-1g", format!("phantom {a}, [a, 1] ratio: (2+2a)/(1+3a)"), r.ratio(&right, &ph, CG)?, (2.0 + 2.0 * a) / (1.0 + 3.0 * a));
    }

    // Phantom at a with two agents (Nash).
    for a in [0.25, 0.5] {
        let ph = M::PhantomMedian(vec![a]);
        let left = profile(&[(1, 0.0), (1, a)]);
        let right = profile(&[(1, a), (1, 1.0)]);
        r.push("phantom-nash", format!("phantom {a}, [0, a] ratio: (1-a/2)/sqrt(1-a)"), r.ratio(&left, &ph, NW)?, (1.0 - a / 2.0) / (1.0 - a).sqrt());
        r.push("phantom-nash", format!("phantom {a}, [a, 1] ratio: (a+1)/(2 sqrt a)"), r.ratio(&right, &ph, NW)?, (a + 1.0) / (2.0 * a.sqrt()));
    }
    // The worse of the two scenarios is smallest at a = 1/2.
    let mut best_a = (f64::INFINITY, 0.0);
    for i in 1..=200 {
        let a = i as f64 / 400.0;
        let ph = M::PhantomMedian(vec![a]);
        let worst = r
            .ratio(&profile(&[(1, 0.0), (1, a)]), &ph, NW)?
            .max(r.ratio(&profile(&[(1, a), (1, 1.0)]), &ph, NW)?);
        if worst < best_a.0 {
            best_a = (worst, a);
        }
    }
    r.push("phantom-nash", "minimax phantom location", best_a.1, 0.5);
    r.push("phantom-nash", "minimax ratio 3/(2 sqrt 2)", best_a.0, 3.0 / (2.0 * 2f64.sqrt()));

    // Gini of distances versus utilities, n = 3 agents at 1/2 plus both ends.
    for n in [3usize, 4] {
        let p = profile(&[(1, 0.0), (n, 0.5), (1, 1.0)]);
        let nf = n as f64;
        r.push("gini-distances", format!("G_d at 0, n = {n}: 2(n+1)/(n+2)^2"), objectives::gini_of_distances(&p, &one(0.0)), 2.0 * (nf + 1.0) / ((nf + 2.0) * (nf + 2.0)));
        r.push("gini-distances", format!("G_d at 1/2, n = {n}: n/(n+2)"), objectives::gini_of_distances(&p, &one(0.5)), nf / (nf + 2.0));
    }

    // Two-facility scenario: reported [0, 1/2, 1] with facilities 5/26, 21/26.
    let p = profile(&[(1, 0.0), (1, 0.5), (1, 1.0)]);
    r.push(
        "two-facility-scenario",
        "1-G on [0, 1/2, 1] at (5/26, 21/26)",
        objectives::complemented_gini_utilities(&p, &two(5.0 / 26.0, 21.0 / 26.0)),
        29.0 / 30.0,
    );
    r.push(
        "two-facility-scenario",
        "two-facility optimum on [0, 1/2, 3/4] at (1/8, 5/8)",
        crate::oracle::opt_2fac(&profile(&[(1, 0.0), (1, 0.5), (1, 0.75)]), CG, policy).best_value,
        1.0,
    );

    // Randomized scenario: reports 1/3 and 1 with the facility 2/3 -/+ x.
    let p = profile(&[(1, 1.0 / 3.0), (1, 1.0)]);
    for x in [0.0, 1.0 / 6.0, 1.0 / 3.0] {
        r.push("randomized-scenario", format!("G_u at 2/3 - {x:.4}: 3x/4"), objectives::gini_of_utilities(&p, &one(2.0 / 3.0 - x)), 0.75 * x);
        r.push("randomized-scenario", format!("G_u at 2/3 + {x:.4}: 3x/4"), objectives::gini_of_utilities(&p, &one(2.0 / 3.0 + x)), 0.75 * x);
    }
    r.push("randomized-scenario", "1-G at 1/2 is 7/8", objectives::complemented_gini_utilities(&p, &one(0.5)), 7.0 / 8.0);

    // The optimal-placement mechanism is manipulable on [0, 1/2].
    let p = profile(&[(1, 0.0), (1, 0.5)]);
    let w = check_misreport(&M::GiniOptOracle, &p, 1, 1.0, policy)?;
    r.push("impossibility", "oracle places 1/4 on [0, 1/2]", M::GiniOptOracle.apply_with(&p, policy)?.expected_distance(0.25), 0.0);
    r.push("impossibility", "honest distance of agent at 1/2", w.as_ref().map_or(f64::NAN, |w| w.honest_distance), 0.25);
    r.push("impossibility", "distance after reporting 1", w.as_ref().map_or(f64::NAN, |w| w.manipulated_distance), 0.0);

    Ok(r.rows)
}
