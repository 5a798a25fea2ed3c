//! Acceptance suite. Prints one PASS/FAIL line per criterion, with detail
//! lines below it, and exits with status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equifac::analysis::{
    check_misreport, reproduce_table1, strategy_proofness_test, theorem_ledger, worst_case_search, SearchConfig,
    SpTestConfig,
};
use equifac::objectives::{self, gini};
use equifac::oracle;
use equifac::{utilities, MechanismSpec, NumericPolicy, Objective, Outcome, Placement, Profile};

type Criterion = fn(&NumericPolicy) -> Verdict;

struct Verdict {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

fn random_profile(rng: &mut ChaCha8Rng, n_max: usize) -> Profile {
    let n = rng.gen_range(1..=n_max);
    Profile::new((0..n).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()).unwrap()
}

fn within(elapsed: Duration, limit: Duration, details: &mut Vec<String>) -> bool {
    let ok = elapsed < limit;
    details.push(format!(
        "runtime {:.2}s (limit {}s){}",
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if ok { "" } else { " EXCEEDED" }
    ));
    ok
}

fn golden_suite(policy: &NumericPolicy) -> Verdict {
    let start = Instant::now();
    let rows = theorem_ledger(policy).expect("ledger evaluates");
    let elapsed = start.elapsed();
    let mut details: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{} [{}] {}: computed {:.12} expected {:.12} error {:.1e}",
                if r.passed() { "PASS" } else { "FAIL" },
                r.group,
                r.claim,
                r.computed,
                r.expected,
                r.abs_error()
            )
        })
        .collect();
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let fast = within(elapsed, Duration::from_secs(1), &mut details);
    Verdict {
        passed: failed == 0 && fast,
        summary: format!("golden instances: {}/{} within 1e-9", rows.len() - failed, rows.len()),
        details,
    }
}

fn oracle_exactness(policy: &NumericPolicy) -> Verdict {
    const GRID: usize = 1_000_000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut dominated = 0;
    let mut scratch = Vec::new();
    for _ in 0..100 {
        let p = random_profile(&mut rng, 8);
        let exact = oracle::opt_complemented_gini_1fac(&p, policy).best_value;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=GRID {
            let y = i as f64 / GRID as f64;
            let v = Objective::ComplementedGini.evaluate_with(&p, &Placement::single(y).unwrap(), &mut scratch);
            best = best.max(v);
        }
        worst = worst.max((exact - best).abs());
        if best > exact + 1e-12 {
            dominated += 1;
        }
    }
    let mut details = vec![
        format!("max |oracle - grid| over 100 profiles (n <= 8, 10^6 + 1 grid points): {worst:.2e}"),
        format!("profiles where the grid beat the oracle: {dominated}"),
    ];
    let fast = within(start.elapsed(), Duration::from_secs(30), &mut details);
    Verdict {
        passed: worst <= 1e-6 && dominated == 0 && fast,
        summary: format!("one-facility oracle matches the grid within 1e-6 (max deviation {worst:.2e})"),
        details,
    }
}

struct BoundCase {
    mechanism: MechanismSpec,
    objective: Objective,
    n: (usize, usize),
    label: &'static str,
    bound: fn(usize) -> f64,
}

fn upper_bounds(policy: &NumericPolicy) -> Verdict {
    use MechanismSpec as M;
    use Objective::{ComplementedGini as CG, NashWelfare as NW};
    let cases = [
        BoundCase { mechanism: M::Median, objective: CG, n: (1, 8), label: "2", bound: |_| 2.0 },
        BoundCase {
            mechanism: M::MidOrNearest,
            objective: CG,
            n: (1, 8),
            label: "(n^2+n)/(n^2+1)",
            bound: |n| {
                let n = n as f64;
                (n * n + n) / (n * n + 1.0)
            },
        },
        BoundCase { mechanism: M::EndPoint, objective: CG, n: (2, 8), label: "35/29", bound: |_| 35.0 / 29.0 },
        BoundCase {
            mechanism: M::EndPointGamma(0.25),
            objective: CG,
            n: (3, 8),
            label: "15/14",
            bound: |_| 15.0 / 14.0,
        },
        BoundCase { mechanism: M::Lrm, objective: CG, n: (1, 8), label: "2", bound: |_| 2.0 },
        BoundCase { mechanism: M::MidOrNearest, objective: NW, n: (1, 8), label: "2", bound: |_| 2.0 },
        BoundCase { mechanism: M::EndPoint, objective: NW, n: (2, 8), label: "2", bound: |_| 2.0 },
        BoundCase { mechanism: M::Lrm, objective: NW, n: (4, 8), label: "4", bound: |_| 4.0 },
    ];
    let start = Instant::now();
    let mut details = Vec::new();
    let mut all_ok = true;
    for c in cases {
        let cfg = SearchConfig {
            random_samples: 100_000,
            restarts: 8,
            seed: 42,
            prune: false,
            ..SearchConfig::new(c.mechanism.clone(), c.objective, c.n.0, c.n.1)
        };
        let t = Instant::now();
        let out = worst_case_search(&cfg, policy).expect("search runs");
        let violations: Vec<_> = out.best_per_n.iter().filter(|f| f.ratio > (c.bound)(f.profile.len()) + 1e-6).collect();
        let ok = violations.is_empty();
        all_ok &= ok;
        details.push(format!(
            "{} {} {} n={}..{} bound {}: {} profiles, max ratio {:.12} at {} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            c.mechanism,
            c.objective.name(),
            c.n.0,
            c.n.1,
            c.label,
            out.evaluations(),
            out.best.ratio,
            out.best.profile,
            t.elapsed().as_secs_f64()
        ));
        for v in violations {
            details.push(format!(
                "    n = {}: ratio {:.12} > bound {:.12} at {} (mechanism {:.12}, optimum {:.12})",
                v.profile.len(),
                v.ratio,
                (c.bound)(v.profile.len()),
                v.profile,
                v.mech_value,
                v.opt_value
            ));
        }
    }
    let fast = within(start.elapsed(), Duration::from_secs(300), &mut details);
    Verdict {
        passed: all_ok && fast,
        summary: "searched worst cases stay within the stated upper bounds + 1e-6".into(),
        details,
    }
}

fn strategy_proofness(policy: &NumericPolicy) -> Verdict {
    use MechanismSpec as M;
    let start = Instant::now();
    let mut details = Vec::new();
    let mut all_ok = true;
    let named = [
        (M::Leftmost, 1),
        (M::Median, 1),
        (M::MidOrNearest, 1),
        (M::PhantomMedian(vec![0.3]), 2),
        (M::PhantomMedian(vec![0.2, 0.7]), 3),
        (M::EndPoint, 1),
        (M::EndPointGamma(0.25), 1),
        (M::EndPointGamma(0.5), 1),
        (M::Lrm, 1),
    ];
    for (m, n_min) in named {
        let cfg = SpTestConfig {
            mechanism: m.clone(),
            n_min,
            n_max: 6,
            trials: 100_000,
            seed: 42,
        };
        let found = strategy_proofness_test(&cfg, policy).expect("sp test runs");
        all_ok &= found.is_none();
        match found {
            None => details.push(format!("PASS {m}: no witness in 10^5 trials, n = {n_min}..6")),
            Some(w) => details.push(format!(
                "FAIL {m}: agent {} of {} reports {} and moves from {} to {}",
                w.agent_index + 1,
                w.profile,
                w.misreport,
                w.honest_distance,
                w.manipulated_distance
            )),
        }
    }
    let cfg = SpTestConfig {
        mechanism: M::GiniOptOracle,
        n_min: 1,
        n_max: 4,
        trials: 1000,
        seed: 42,
    };
    let w = strategy_proofness_test(&cfg, policy).expect("sp test runs");
    let expected = w.as_ref().is_some_and(|w| {
        w.profile.locations() == [0.0, 0.5]
            && w.agent_index == 1
            && w.misreport == 1.0
            && (w.honest_distance - 0.25).abs() < 1e-12
            && w.manipulated_distance.abs() < 1e-12
    });
    let direct = check_misreport(&M::GiniOptOracle, &Profile::new(vec![0.0, 0.5]).unwrap(), 1, 1.0, policy)
        .expect("misreport check runs")
        .is_some();
    all_ok &= expected && direct;
    details.push(format!(
        "{} gini-opt-oracle: witness {:?}",
        if expected && direct { "PASS" } else { "FAIL" },
        w.map(|w| (w.profile.to_string(), w.agent_index + 1, w.misreport, w.honest_distance, w.manipulated_distance))
    ));
    let fast = within(start.elapsed(), Duration::from_secs(120), &mut details);
    Verdict {
        passed: all_ok && fast,
        summary: "named mechanisms are not manipulable; the optimal-placement mechanism is".into(),
        details,
    }
}

fn table(policy: &NumericPolicy) -> Verdict {
    let rows = reproduce_table1(policy, 42).expect("table regenerates");
    let mut details = Vec::new();
    let mut disagreements = 0;
    let mut cells = 0;
    for r in &rows {
        for (col, c) in [("1-G", &r.gini), ("Nash", &r.nash)] {
            cells += 1;
            if !c.status.agrees() {
                disagreements += 1;
            }
            details.push(format!(
                "{} {} / {} / {}: published {} computed {} [{}] {}",
                if c.status.agrees() { "PASS" } else { "FAIL" },
                r.section,
                r.label,
                col,
                c.published,
                c.computed.map_or("-".to_string(), |v| format!("{v:.12}")),
                c.status,
                c.detail
            ));
        }
    }
    Verdict {
        passed: disagreements == 0,
        summary: format!("table cells agreeing with the published table: {}/{cells}", cells - disagreements),
        details,
    }
}

/// Runs `check` on 1000 seeded cases and reports the failures.
fn property(name: &str, seed: u64, mut check: impl FnMut(&mut ChaCha8Rng) -> bool, details: &mut Vec<String>) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let failures = (0..1000).filter(|_| !check(&mut rng)).count();
    details.push(format!("{} {name}: {} of 1000 cases failed", if failures == 0 { "PASS" } else { "FAIL" }, failures));
    failures == 0
}

fn random_mechanism(rng: &mut ChaCha8Rng, n: usize) -> MechanismSpec {
    use MechanismSpec as M;
    match rng.gen_range(0..8) {
        0 => M::Leftmost,
        1 => M::Median,
        2 => M::MidOrNearest,
        3 => M::PhantomMedian((0..rng.gen_range(0..n)).map(|_| rng.gen::<f64>()).collect()),
        4 => M::EndPoint,
        5 => M::EndPointGamma(rng.gen_range(0.0..=0.5)),
        6 => M::Lrm,
        _ => M::GiniOptOracle,
    }
}

fn all_facilities_at(outcome: &Outcome, x: f64) -> bool {
    outcome
        .clone()
        .into_lottery()
        .outcomes()
        .iter()
        .all(|(_, p)| p.facilities().iter().all(|&y| (y - x).abs() < 1e-12))
}

fn properties(policy: &NumericPolicy) -> Verdict {
    let mut d = Vec::new();
    let mut ok = true;
    let values = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..rng.gen_range(1..=10)).map(|_| rng.gen::<f64>()).collect() };

    ok &= property(
        "gini scale invariance",
        10,
        |rng| {
            let v = values(rng);
            let c = rng.gen_range(0.01..100.0);
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            (gini(&v).unwrap() - gini(&scaled).unwrap()).abs() < 1e-12
        },
        &mut d,
    );
    ok &= property(
        "gini permutation invariance",
        11,
        |rng| {
            let v = values(rng);
            let mut w = v.clone();
            w.shuffle(rng);
            (gini(&v).unwrap() - gini(&w).unwrap()).abs() < 1e-12
        },
        &mut d,
    );
    ok &= property(
        "complemented gini = 1 iff utilities are equal",
        12,
        |rng| {
            // Half the cases place agents symmetrically around the facility.
            let y = rng.gen::<f64>();
            let n = rng.gen_range(1..=8);
            let xs: Vec<f64> = if rng.gen_bool(0.5) {
                let r = rng.gen::<f64>() * y.min(1.0 - y);
                (0..n).map(|i| if i % 2 == 0 { y - r } else { y + r }).collect()
            } else {
                (0..n).map(|_| rng.gen::<f64>()).collect()
            };
            let p = Profile::new(xs).unwrap();
            let pl = Placement::single(y).unwrap();
            let u = utilities(&p, &pl);
            let equal = u.iter().all(|&v| (v - u[0]).abs() < 1e-12);
            let one = (objectives::complemented_gini_utilities(&p, &pl) - 1.0).abs() < 1e-12;
            equal == one
        },
        &mut d,
    );
    ok &= property(
        "nash welfare <= mean utility",
        13,
        |rng| {
            let p = random_profile(rng, 8);
            let pl = Placement::single(rng.gen::<f64>()).unwrap();
            let u = utilities(&p, &pl);
            let mean = u.iter().sum::<f64>() / u.len() as f64;
            objectives::nash_welfare(&p, &pl) <= mean + 1e-12
        },
        &mut d,
    );
    ok &= property(
        "unanimity for every mechanism",
        14,
        |rng| {
            let x = rng.gen::<f64>();
            let n = rng.gen_range(1..=8);
            let m = random_mechanism(rng, n);
            let p = Profile::new(vec![x; n]).unwrap();
            all_facilities_at(&m.apply_with(&p, policy).unwrap(), x)
        },
        &mut d,
    );
    ok &= property(
        "anonymity for every mechanism",
        15,
        |rng| {
            let n = rng.gen_range(1..=8);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let mut shuffled = raw.clone();
            shuffled.shuffle(rng);
            let m = random_mechanism(rng, n);
            let a = m.apply_with(&Profile::new(raw).unwrap(), policy).unwrap();
            let b = m.apply_with(&Profile::new(shuffled).unwrap(), policy).unwrap();
            a == b
        },
        &mut d,
    );
    ok &= property(
        "phantom-median identities (median, mid-or-nearest, leftmost)",
        16,
        |rng| {
            let p = random_profile(rng, 9);
            let n = p.len();
            let mut median_phantoms = vec![0.0; n / 2];
            median_phantoms.resize(n - 1, 1.0);
            let ph = |v: Vec<f64>| MechanismSpec::PhantomMedian(v).apply_with(&p, policy).unwrap();
            let m = |s: MechanismSpec| s.apply_with(&p, policy).unwrap();
            m(MechanismSpec::Median) == ph(median_phantoms)
                && m(MechanismSpec::MidOrNearest) == ph(vec![0.5; n - 1])
                && m(MechanismSpec::Leftmost) == ph(vec![0.0; n - 1])
        },
        &mut d,
    );
    ok &= property(
        "reflection equivariance (median with odd n, mid-or-nearest, endpoint, endpoint-gamma, lrm)",
        17,
        |rng| {
            let mut p = random_profile(rng, 8);
            let m = match rng.gen_range(0..5) {
                0 => {
                    if p.len().is_multiple_of(2) {
                        p = Profile::new([p.locations(), &[rng.gen::<f64>()]].concat()).unwrap();
                    }
                    MechanismSpec::Median
                }
                1 => MechanismSpec::MidOrNearest,
                2 => MechanismSpec::EndPoint,
                3 => MechanismSpec::EndPointGamma(rng.gen_range(0.0..=0.5)),
                _ => MechanismSpec::Lrm,
            };
            let direct = m.apply_with(&p, policy).unwrap().reflect().into_lottery();
            let mirrored = m.apply_with(&p.reflect(), policy).unwrap().into_lottery();
            let (a, b) = (direct.outcomes(), mirrored.outcomes());
            a.len() == b.len()
                && a.iter().zip(b).all(|((pa, la), (pb, lb))| {
                    (pa - pb).abs() < 1e-12
                        && la.facilities().iter().zip(lb.facilities()).all(|(x, y)| (x - y).abs() < 1e-12)
                })
        },
        &mut d,
    );
    ok &= property(
        "oracle dominates every mechanism and is reflection invariant",
        18,
        |rng| {
            let p = random_profile(rng, 6);
            let m = random_mechanism(rng, p.len());
            let o = [Objective::ComplementedGini, Objective::NashWelfare][rng.gen_range(0..2)];
            let outcome = m.apply_with(&p, policy).unwrap();
            let k = outcome.facility_count();
            let opt = oracle::optimum(&p, o, k, policy).unwrap().best_value;
            let mirrored = oracle::optimum(&p.reflect(), o, k, policy).unwrap().best_value;
            outcome.value(&p, o) <= opt + 1e-9 && (opt - mirrored).abs() <= 1e-9
        },
        &mut d,
    );
    Verdict {
        passed: ok,
        summary: "property suites, 1000 seeded cases each".into(),
        details: d,
    }
}

fn main() -> ExitCode {
    let policy = NumericPolicy::default();
    let criteria: [(&str, Criterion); 6] = [
        ("golden proof instances", golden_suite),
        ("oracle exactness", oracle_exactness),
        ("upper-bound conformance by search", upper_bounds),
        ("strategy-proofness", strategy_proofness),
        ("summary table regeneration", table),
        ("property suites", properties),
    ];
    let mut failed = 0;
    let mut lines = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run(&policy);
        println!("criterion {} ({name}): {} - {}", i + 1, if v.passed { "PASS" } else { "FAIL" }, v.summary);
        for line in &v.details {
            println!("    {line}");
        }
        if !v.passed {
            failed += 1;
        }
        lines.push(format!("criterion {}: {}", i + 1, if v.passed { "PASS" } else { "FAIL" }));
    }
    println!("\nsummary: {}", lines.join(", "));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
