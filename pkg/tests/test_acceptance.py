"""Acceptance criteria 1-10, one test each.

Every test prints a single ``criterion k: PASS|FAIL - detail`` line (also
repeated in the terminal summary). Slow criteria carry the ``slow`` marker but
are part of the default run.
"""

import itertools
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import cached_space, dense
from qcontext import analysis
from qcontext.configuration import from_quadric, from_space, hamming_distance, unsatisfied
from qcontext.exact import exact_degree, lower_bound_full, polarity_count
from qcontext.fixtures import available, load_fixture
from qcontext.io import make_configuration
from qcontext.pauli import multiply, parse_observable
from qcontext.polar_space import (
    iter_quadrics,
    negative_line_distribution,
    quadric,
    quadric_family_size,
    quadric_point_count,
)
from qcontext.solver import SearchState, SolverParams, incremental_update, solve

RESULTS: dict[int, str] = {}

#: N=6 search budget in seconds (the criterion allows up to 1800 s).
N6_BUDGET = float(os.environ.get("QCONTEXT_N6_BUDGET", "600"))


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str) -> bool:
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
        RESULTS[k] = line
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# -- 1 ------------------------------------------------------------------------

TABLE1 = {2: (15, 15, 3), 3: (63, 315, 90), 4: (255, 5355, 1908), 5: (1023, 86955, 35400),
          6: (4095, 1396395, 615888), 7: (16383, 22362795, 10352160)}

_N7_SCRIPT = """
import json, resource, time
t0 = time.perf_counter()
from qcontext.polar_space import build_space
s = build_space(7)
print(json.dumps([s.n_points, s.n_lines, s.n_negative, time.perf_counter() - t0,
                  resource.getrusage(resource.RUSAGE_SELF).ru_maxrss]))
"""


@pytest.mark.slow
def test_criterion_1_counts(report):
    t0 = time.perf_counter()
    small = {n: (s.n_points, s.n_lines, s.n_negative) for n in range(2, 7) for s in [cached_space(n)]}
    t_small = time.perf_counter() - t0
    out = subprocess.run([sys.executable, "-c", _N7_SCRIPT], capture_output=True, text=True, timeout=900)
    p, l, neg, t7, rss_kb = json.loads(out.stdout.strip().splitlines()[-1])
    small[7] = (p, l, neg)
    ok = small == TABLE1 and t_small < 300 and t7 < 900 and rss_kb < 4 * 1024**2
    assert report(1, ok, f"N=2..6 in {t_small:.1f}s, N=7 {small[7]} in {t7:.1f}s "
                         f"peak {rss_kb / 1024:.0f} MB")


# -- 2 ------------------------------------------------------------------------

TABLE2 = {
    ("hyperbolic", 2): (9, 6, {1: 9, 3: 1}),
    ("hyperbolic", 3): (35, 105, {27: 27, 39: 9}),
    ("hyperbolic", 4): (135, 1575, {532: 81, 604: 54, 612: 1}),
    ("elliptic", 2): (5, 0, {0: 6}),
    ("elliptic", 3): (27, 45, {9: 1, 13: 27}),
    ("elliptic", 4): (119, 1071, {360: 12, 384: 108}),
}


def test_criterion_2_quadric_tables(report):
    bad = []
    for (kind, n), (p, l, dist) in TABLE2.items():
        s = cached_space(n)
        qs = list(iter_quadrics(s, kind))
        got = ({q.n_points for q in qs}, {q.n_lines for q in qs}, negative_line_distribution(s, kind))
        if got != ({p}, {l}, dist) or len(qs) != quadric_family_size(n, kind) \
                or quadric_point_count(n, kind) != p:
            bad.append((kind, n, got))
    assert report(2, not bad, f"{len(TABLE2) - len(bad)}/{len(TABLE2)} rows match" +
                  (f"; mismatches {bad}" if bad else ""))


# -- 3 ------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_3_exact_degrees(report):
    cases = [("N=2 full", 2, "full", 3), ("N=2 hyperbolic", 2, "hyperbolic", 1),
             ("N=3 elliptic", 3, "elliptic", 9), ("N=3 hyperbolic", 3, "hyperbolic", 21)]
    parts, ok = [], True
    for name, n, geometry, want in cases:
        d, t = _timed(lambda: exact_degree(make_configuration(cached_space(n), geometry)))
        ok &= d == want and t < 300
        parts.append(f"{name}={d} ({t:.1f}s)")
    assert report(3, ok, ", ".join(parts))


# -- 4 ------------------------------------------------------------------------

def test_criterion_4_known_optima(report):
    cases = [("two-spread", load_fixture("two_spread").configuration(), 1),
             ("N=2 doily", from_space(cached_space(2)), 3),
             ("N=3 full", from_space(cached_space(3)), 63),
             ("N=3 hyperbolic", make_configuration(cached_space(3), "hyperbolic"), 21),
             ("N=3 elliptic", make_configuration(cached_space(3), "elliptic"), 9)]
    parts, ok = [], True
    for name, cfg, want in cases:
        r, t = _timed(lambda: solve(cfg, SolverParams(restarts=200, seed=0, target_distance=want)))
        ok &= r.best_distance == want and t < 60
        parts.append(f"{name}={r.best_distance} (restart {r.restart_index_of_best}, {t:.1f}s)")
    assert report(4, ok, ", ".join(parts))


# -- 5 ------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_5_four_qubits(report):
    s = cached_space(4)
    cases = [("full", from_space(s), 1575), ("hyperbolic", make_configuration(s, "hyperbolic"), 315),
             ("elliptic", make_configuration(s, "elliptic"), 315)]
    parts, ok = [], True
    for name, cfg, bound in cases:
        p = SolverParams(restarts=200, seed=1, target_distance=bound, time_budget=600)
        r, t = _timed(lambda: solve(cfg, p))
        ok &= r.best_distance <= bound and t < 600
        parts.append(f"{name}={r.best_distance} ({r.restarts_run} restarts, {t:.1f}s)")
    assert report(5, ok, ", ".join(parts))


# -- 6 ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def six_qubit_run():
    """Time-budgeted search on the full six-qubit space, shared with criterion 8."""
    cfg = from_space(cached_space(6))
    params = SolverParams(theta=0.9, gamma=0.5, restarts=10_000, seed=101,
                          target_distance=int(553140 * 1.01), time_budget=N6_BUDGET)
    r, t = _timed(lambda: solve(cfg, params))
    return cfg, r, t


@pytest.mark.slow
def test_criterion_6_five_and_six_qubits(report, six_qubit_run):
    s = cached_space(5)
    cases = [("full-5q", from_space(s), 31479), ("hyp-5q", make_configuration(s, "hyperbolic"), 6975),
             ("ell-5q", make_configuration(s, "elliptic"), 7087)]
    parts, ok = [], True
    for name, cfg, ref in cases:
        p = SolverParams(restarts=200, seed=0, target_distance=int(ref * 1.01), time_budget=1800)
        r, t = _timed(lambda: solve(cfg, p))
        ok &= r.best_distance <= ref * 1.01
        parts.append(f"{name}={r.best_distance} vs {ref} ({t:.1f}s)")
    _, r6, t6 = six_qubit_run
    ok &= r6.best_distance <= 553140 * 1.01
    parts.append(f"full-6q={r6.best_distance} vs 553140 "
                 f"({100 * (r6.best_distance / 553140 - 1):+.2f}%, {r6.restarts_run} restarts, {t6:.0f}s)")
    assert report(6, ok, ", ".join(parts))


# -- 7 ------------------------------------------------------------------------

TABLE3 = {2: 3, 3: 63, 4: 1071, 5: 17391, 6: 279279, 7: 4472559, 8: 71577327, 9: 1145302767}


def test_criterion_7_lower_bounds(report):
    got = {n: lower_bound_full(n) for n in TABLE3}
    pols = (polarity_count(2), polarity_count(3))
    ok = got == TABLE3 and pols == (28, 13888)
    assert report(7, ok, f"lower-bound rows N=2..9 {'match' if got == TABLE3 else got}; polarities {pols}")


# -- 8 ------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_8_structural_fixtures(report, six_qubit_run):
    parts, ok = [], True

    uns = load_fixture("elliptic4").unsatisfied()
    checks = analysis.known_structure_report(uns)["checks"]
    good = (len(uns) == 315 and analysis.matches_profile(uns, analysis.ELLIPTIC_4_DEGREES, analysis.ELLIPTIC_4_LINES)
            and checks["heawood_skeleton"] and checks["coxeter_components"] == 3 and checks["coxeter_skeletons"])
    ok &= good
    parts.append(f"elliptic4 {'ok' if good else checks}")

    uns = load_fixture("hyperbolic4").unsatisfied()
    good = len(uns) == 315 and analysis.dw52_profile(uns)
    ok &= good
    parts.append(f"hyperbolic4 {'ok' if good else analysis.degree_profile(uns)}")

    uns = load_fixture("full4").unsatisfied()
    checks = analysis.known_structure_report(uns)["checks"]
    good = (len(uns) == 1575 and analysis.matches_profile(uns, analysis.FULL_4_DEGREES, analysis.FULL_4_LINES)
            and checks.get("pg32_point_plane_skeleton", False))
    ok &= good
    parts.append(f"full4 {'ok' if good else checks}")

    if available("full6"):
        uns = load_fixture("full6").unsatisfied()
        checks = analysis.known_structure_report(uns)["checks"]
        good = len(uns) == 553140 and checks.get("solid_line_components") == [63, 63] \
            and checks.get("solid_components_are_hexagons", False)
        parts.append(f"full6 {'ok' if good else checks}")
    else:
        cfg, r6, _ = six_qubit_run
        prof = analysis.degree_profile(unsatisfied(cfg, r6.best_assignment))
        good = False
        parts.append(f"full6 fixture missing (no run reached 553140; best here {r6.best_distance} "
                     f"with {len(prof.histogram)} point degrees, reference has 2)")
    ok &= good
    assert report(8, ok, "; ".join(parts))


# -- 9 ------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_9_restriction_criteria(report):
    uns = load_fixture("full4").unsatisfied()
    ell = analysis.elliptic_restriction_criterion(uns)
    hyp = analysis.hyperbolic_restriction_criterion(uns)
    ok = (ell.n_quadrics, ell.n_matching) == (120, 120) and (hyp.n_quadrics, hyp.n_matching) == (136, 1)
    assert report(9, ok, f"elliptic {ell.n_matching}/{ell.n_quadrics} with the 315-line profile, "
                         f"hyperbolic {hyp.n_matching}/{hyp.n_quadrics} with the DW(5,2) profile")


# -- 10 -----------------------------------------------------------------------

def _incremental_sequences(n_sequences: int) -> bool:
    space = cached_space(3)
    configs = [from_space(space), from_quadric(space, quadric(space, "IIY"))]
    rng = np.random.default_rng(7)
    for k in range(n_sequences):
        cfg = configs[k % 2]
        st = SearchState(cfg, rng.choice(np.array([-1, 1], np.int8), cfg.n_points))
        for p in rng.integers(0, cfg.n_points, size=rng.integers(1, 12)):
            incremental_update(st, int(p))
        uns, d = st.recount()
        if d != st.distance or not np.array_equal(uns, st.uns) or d != hamming_distance(cfg, st.a):
            return False
    return True


def _dense_oracle() -> bool:
    for n in (1, 2):
        labels = ["".join(t) for t in itertools.product("IXYZ", repeat=n)]
        for a, b in itertools.product(labels, repeat=2):
            prod = multiply(parse_observable(a), parse_observable(b))
            if not np.allclose(dense(a) @ dense(b), prod.sign * dense(str(prod.observable))):
                return False
    s = cached_space(2)
    return all(np.allclose(dense(s.label(a)) @ dense(s.label(b)) @ dense(s.label(c)), sg * np.eye(4))
               for (a, b, c), sg in zip(s.lines, s.signs))


def _thread_reproducible() -> bool:
    cfg = from_space(cached_space(4))
    p = SolverParams(restarts=8, max_iterations=150, seed=5)
    ref = solve(cfg, p, n_jobs=1)
    for jobs in (2, 4, 8):
        r = solve(cfg, p, n_jobs=jobs)
        if r.best_assignment.tobytes() != ref.best_assignment.tobytes() or r.trace != ref.trace:
            return False
    return True


def test_criterion_10_property_suites(report):
    checks = {"incremental=recount over 10^4 sequences": _incremental_sequences(10_000),
              "dense-matrix phases N<=2": _dense_oracle(),
              "identical across 1/2/4/8 threads": _thread_reproducible()}
    assert report(10, all(checks.values()),
                  ", ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in checks.items()))
