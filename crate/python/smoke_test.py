"""Smoke test for the pyequifac extension module.

Build and run from the repository root:

    cargo build --release -p equifac-py
    cp target/release/libpyequifac.so python/pyequifac.so
    python3 python/smoke_test.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import pyequifac as eq  # noqa: E402


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, (a, b)


def main():
    close(eq.gini([1.0, 0.5, 0.5]), 1 / 6)

    mid = eq.Mechanism("midornearest")
    out = mid.apply([0.0, 0.5, 1.0])
    assert out.outcomes() == [(1.0, [0.5])]
    close(out.value([0.0, 0.5, 1.0], "complemented-gini"), 5 / 6)

    lrm = eq.Mechanism("lrm")
    assert lrm.is_randomized and lrm.is_strategy_proof
    close(lrm.apply([0.0, 1.0]).value([0.0, 1.0], "complemented-gini"), 0.75)

    r = eq.approximation_ratio([0, 0.5, 0.5, 0.5, 1], eq.Mechanism("endpoint"), "complemented-gini")
    close(r["ratio"], 35 / 29)

    value, placement, method = eq.optimum([0, 0.5, 0.5, 0.5, 1], "cgini", 2)
    close(value, 1.0)
    assert placement == [0.25, 0.75] and method == "candidate-exact"

    report = eq.objective_report([0.0, 1.0], [0.0])
    close(report["complemented_gini"], 0.5)
    assert report["nash_welfare"] == 0.0

    r = eq.approximation_ratio([0.0, 1.0], eq.Mechanism("median"), "nash")
    assert math.isinf(r["ratio"])

    w = eq.strategy_proofness_test(eq.Mechanism("gini-opt-oracle"), 1, 4, 10)
    assert w["profile"] == [0.0, 0.5] and w["misreport"] == 1.0
    assert eq.strategy_proofness_test(mid, 1, 5, 2000) is None

    best = eq.worst_case_search(eq.Mechanism("leftmost"), "cgini", 4, 4, samples=200, restarts=2)
    close(best[0]["ratio"], 4.0)

    rows = eq.theorem_ledger()
    assert all(abs(c - e) <= 1e-9 or c == e for _, _, c, e in rows)

    try:
        eq.Mechanism("endpoint-gamma", gamma=0.9)
    except ValueError:
        pass
    else:
        raise AssertionError("gamma outside [0, 1/2] accepted")

    print(f"smoke test passed ({len(rows)} ledger rows)")


if __name__ == "__main__":
    main()
