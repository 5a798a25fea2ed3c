//! Built-in worst-case instances. Each family is the extremal profile from a
//! known ratio argument, instantiated at a given number of agents.

use crate::mechanisms::MechanismSpec;
use crate::model::Profile;

fn build(parts: &[(usize, f64)]) -> Option<Profile> {
    let v: Vec<f64> = parts.iter().flat_map(|&(k, x)| std::iter::repeat_n(x, k)).collect();
    Profile::new(v).ok()
}

/// Seed profiles with exactly `n` agents, tailored to `mechanism` where its
/// parameters matter. Deduplicated, in a fixed order.
pub fn seeded_profiles(n: usize, mechanism: &MechanismSpec) -> Vec<Profile> {
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<Profile> = Vec::new();
    let mut add = |p: Option<Profile>| {
        if let Some(p) = p {
            if p.len() == n && !out.contains(&p) {
                out.push(p);
            }
        }
    };
    if n == 1 {
        add(build(&[(1, 0.5)]));
        add(build(&[(1, 0.0)]));
        return out;
    }
    if n == 2 {
        add(build(&[(1, 0.0), (1, 0.5)]));
    }
    if n == 3 {
        add(build(&[(1, 0.0), (1, 0.5), (1, 0.75)]));
        add(build(&[(1, 0.0), (1, 0.5), (1, 1.0)]));
    }
    // One agent at 0, the rest at 1; and its mirror.
    add(build(&[(1, 0.0), (n - 1, 1.0)]));
    add(build(&[(n - 1, 0.0), (1, 1.0)]));
    // Balanced split between the endpoints.
    add(build(&[(n.div_ceil(2), 0.0), (n / 2, 1.0)]));
    add(build(&[(n / 2, 0.0), (n.div_ceil(2), 1.0)]));
    // n - 1 agents at 0 and one at 1/2.
    add(build(&[(n - 1, 0.0), (1, 0.5)]));
    // Extremes at 0 and 1 with everyone else in the middle.
    add(build(&[(1, 0.0), (n - 2, 0.5), (1, 1.0)]));
    // Splits between 0 and 1/2. Utilities 1/2 and 1 are most unequal when
    // about a fraction sqrt(2) - 1 of the agents get 1.
    let k = ((2.0 - std::f64::consts::SQRT_2) * n as f64).round() as usize;
    for zeros in [n.div_ceil(2), n / 2, k.clamp(1, n - 1)] {
        add(build(&[(zeros, 0.0), (n - zeros, 0.5)]));
    }
    match mechanism {
        MechanismSpec::EndPointGamma(g) => {
            add(build(&[(1, 0.0), (n - 2, 0.5), (1, 1.0 - g)]));
            add(build(&[(1, 0.0), (1, *g), (n - 2, 1.0)]));
        }
        MechanismSpec::PhantomMedian(ph) => {
            for &a in ph {
                add(build(&[(1, 0.0), (n - 1, a)]));
                add(build(&[(n - 1, a), (1, 1.0)]));
            }
        }
        _ => {
            add(build(&[(1, 0.0), (n - 2, 0.5), (1, 0.75)]));
            add(build(&[(1, 0.0), (1, 0.25), (n - 2, 1.0)]));
        }
    }
    out
}
