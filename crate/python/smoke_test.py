"""Smoke test for the polar3 Python extension.

Build and run from the repository root:

    cargo build --release -p polar3-py --features extension-module
    cp target/release/libpolar3_py.so python/polar3.so
    python3 python/smoke_test.py
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import polar3  # noqa: E402


def main():
    sol = polar3.Structure.unimodular(1.0, 0.0, -1.0)
    assert sol.group == "Sol3", sol.group
    assert sol.is_unimodular()
    labels = [r.label for r in polar3.classify(sol)]
    assert labels == ["SOL_abelian", "SOL_nonabelian"], labels

    actions = polar3.polar_actions(sol)
    assert len(actions) == 1
    _, line, _ = actions[0]
    r = math.sqrt(0.5)
    assert max(abs(a - b) for a, b in zip(line, (r, 0.0, -r))) < 1e-12

    semi = polar3.Structure.non_unimodular(2.0, 0.0)
    ts = [k * 0.1 for k in range(-30, 31)]
    for rep in polar3.orbit_profile(semi, "h1", ts):
        assert abs(rep.mean + math.tanh(-rep.t)) < 1e-8, (rep.t, rep.mean)

    v0 = polar3.initial_normal(sol, "nonabelian")
    trace = polar3.integrate(sol, v0, 1.0, 1e-3)
    t, x, y, z = trace[-1]
    assert t == 1.0 and abs(y - math.tanh(1.0)) < 1e-8

    assert polar3.sweep_class_count(polar3.Structure.non_unimodular(2.0, 1.0), 2000) == 3

    report = json.loads(polar3.report_json(sol, t_max=2.0))
    assert report["classification"]["multiplicity"] == 2

    try:
        polar3.classify(polar3.Structure.unimodular(1.0, 1.0, 1.0))
    except polar3.Polar3Error as e:
        assert "dim Isom" in str(e)
    else:
        raise AssertionError("round sphere should not classify")

    print("polar3 smoke test: ok")


if __name__ == "__main__":
    main()
