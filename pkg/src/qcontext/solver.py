"""Threshold-driven stochastic local search for upper bounds on contextuality.

Starting from the all-(+1) assignment, every outer iteration takes the current
maximum ``M`` of the per-point unsatisfied-context counts and then visits the
points in canonical order; a point whose count exceeds ``theta * M`` has its
value flipped when a uniform draw exceeds ``gamma`` (so eligible points flip
with probability ``1 - gamma``). Counts are maintained incrementally and the
best assignment seen at the end of an outer iteration is kept.

Randomness
----------
Restart ``i`` of a run with seed ``s`` uses the stream seed
``mix64(s + (i + 1) * 0x9E3779B97F4A7C15 mod 2**64)`` where ``mix64`` is the
splitmix64 output function. That seed drives a splitmix64 generator whose
first four outputs initialise a xoshiro256** state; uniforms are the top 53
bits of xoshiro256** outputs scaled to [0, 1).
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from . import _kernels
from .configuration import Configuration, UnsatisfiedConfiguration, hamming_distance, unsatisfied
from .validation import check_configuration, check_positive_int, check_unit_interval

logger = logging.getLogger(__name__)

THREADS_ENV = "QCONTEXT_THREADS"
_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_CHUNK = 16


def mix64(z: int) -> int:
    """splitmix64 output function."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, restart: int) -> int:
    return mix64(seed + (restart + 1) * _GOLDEN)


def xoshiro_state(stream_seed: int) -> np.ndarray:
    """xoshiro256** state seeded from four splitmix64 outputs."""
    s = stream_seed & _MASK64
    words = []
    for _ in range(4):
        s = (s + _GOLDEN) & _MASK64
        words.append(mix64(s))
    return np.array(words, dtype=np.uint64)


def default_n_jobs() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SolverParams:
    theta: float = 0.8
    gamma: float = 0.9
    max_iterations: int = 1000
    restarts: int = 1
    seed: int = 0
    target_distance: int | None = None
    time_budget: float | None = None

    def __post_init__(self):
        check_unit_interval(self.theta, "theta")
        check_unit_interval(self.gamma, "gamma")
        check_positive_int(self.max_iterations, "max_iterations")
        check_positive_int(self.restarts, "restarts")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive seconds")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class SolveResult:
    best_assignment: np.ndarray
    best_distance: int
    unsatisfied_context_ids: np.ndarray
    params: SolverParams
    iterations_to_best: int
    restart_index_of_best: int
    runtime_ms: int
    restarts_run: int = 1
    timed_out: bool = False
    trace: list = field(default_factory=list)

    def convergence_csv(self) -> str:
        rows = ["iteration,best_distance"]
        rows += [f"{it},{d}" for it, d in self.trace]
        return "\n".join(rows) + "\n"


class SearchState:
    """Mutable state of one search: assignment, per-point counts, distance."""

    def __init__(self, config: Configuration, assignment=None):
        self.config = config
        self.a = config.all_plus() if assignment is None else np.array(assignment, dtype=np.int8)
        self.uns = np.zeros(config.n_points, dtype=np.int32)
        self.distance = int(_kernels.init_unsatisfied(config.contexts, config.expected_sign, self.a, self.uns))

    def recount(self):
        uns = np.zeros_like(self.uns)
        d = _kernels.init_unsatisfied(self.config.contexts, self.config.expected_sign, self.a.copy(), uns)
        return uns, int(d)

    def is_consistent(self) -> bool:
        uns, d = self.recount()
        return d == self.distance and np.array_equal(uns, self.uns)


def incremental_update(state: SearchState, point: int) -> SearchState:
    """Flip the value of local point ``point`` and update counts in place."""
    cfg = state.config
    offsets, inc = cfg.adjacency
    state.distance += int(_kernels.flip_point(cfg.contexts, cfg.expected_sign, offsets, inc,
                                              state.a, state.uns, int(point)))
    return state


def _run_restart(config: Configuration, params: SolverParams, restart: int, deadline):
    ctx = config.contexts
    eps = config.expected_sign
    offsets, inc = config.adjacency
    rng = xoshiro_state(derive_seed(params.seed, restart))
    a = config.all_plus()
    uns = np.zeros(config.n_points, dtype=np.int32)
    distance = int(_kernels.init_unsatisfied(ctx, eps, a, uns))
    best = distance
    best_a = a.copy()
    best_it = 0
    cap = min(params.max_iterations + 1, 1 << 16)
    trace_it = np.empty(cap, dtype=np.int64)
    trace_d = np.empty(cap, dtype=np.int64)
    trace_it[0], trace_d[0] = 0, best
    n_trace = 1
    done = 0
    timed_out = False
    while done < params.max_iterations and best > 0:
        if params.target_distance is not None and best <= params.target_distance:
            break
        if deadline is not None and time.monotonic() > deadline:
            timed_out = True
            break
        step = min(_CHUNK, params.max_iterations - done)
        distance, best, it, n_trace, ran = _kernels.run_sweeps(
            ctx, eps, offsets, inc, a, uns, rng, params.theta, params.gamma,
            step, done + 1, distance, best, best_a, trace_it, trace_d, n_trace)
        if it >= 0:
            best_it = int(it)
        done += int(ran)
        if ran < step:
            break
    trace = list(zip(trace_it[:n_trace].tolist(), trace_d[:n_trace].tolist()))
    return int(best), best_a, best_it, trace, timed_out


def solve_once(config: Configuration, params: SolverParams | None = None, restart: int = 0,
               _deadline=None) -> SolveResult:
    """One restart of the local search; ``restart`` selects the RNG stream."""
    config = check_configuration(config)
    params = params or SolverParams()
    t0 = time.perf_counter()
    deadline = _deadline
    if deadline is None and params.time_budget is not None:
        deadline = time.monotonic() + params.time_budget
    best, best_a, best_it, trace, timed_out = _run_restart(config, params, restart, deadline)
    uns = unsatisfied(config, best_a)
    assert len(uns) == best, "incremental distance drifted from recount"
    return SolveResult(best_a, best, uns.context_ids, params, best_it, restart,
                       int((time.perf_counter() - t0) * 1000), 1, timed_out, trace)


def _merge_traces(traces) -> list:
    events = sorted((it, d) for tr in traces for it, d in tr)
    out = []
    best = None
    for it, d in events:
        if best is None or d < best:
            best = d
            if out and out[-1][0] == it:
                out[-1] = (it, d)
            else:
                out.append((it, d))
    return out


def solve(config: Configuration, params: SolverParams | None = None, n_jobs: int | None = None) -> SolveResult:
    """Best of ``params.restarts`` independent restarts.

    Restarts are scheduled in index order. If ``target_distance`` is set, the
    run stops after the first restart index reaching it, and only restarts up
    to that index are considered, so the outcome does not depend on
    ``n_jobs``. Ties go to the lowest restart index. A ``time_budget`` makes
    the run wall-clock dependent.
    """
    config = check_configuration(config)
    params = params or SolverParams()
    n_jobs = n_jobs or default_n_jobs()
    t0 = time.perf_counter()
    deadline = None if params.time_budget is None else time.monotonic() + params.time_budget
    results: list = []
    timed_out = False
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        for start in range(0, params.restarts, n_jobs):
            batch = range(start, min(start + n_jobs, params.restarts))
            outs = list(pool.map(lambda i: _run_restart(config, params, i, deadline), batch))
            results.extend(outs)
            timed_out = any(o[4] for o in outs)
            hit = [i for i, o in zip(batch, outs)
                   if params.target_distance is not None and o[0] <= params.target_distance]
            if hit:
                del results[hit[0] + 1:]
                break
            if timed_out:
                break
    best_idx = min(range(len(results)), key=lambda i: (results[i][0], i))
    best, best_a, best_it, _, _ = results[best_idx]
    uns = unsatisfied(config, best_a)
    assert len(uns) == best, "incremental distance drifted from recount"
    logger.debug("solve: %d restarts, best %d from restart %d", len(results), best, best_idx)
    return SolveResult(
        best_assignment=best_a,
        best_distance=best,
        unsatisfied_context_ids=uns.context_ids,
        params=params,
        iterations_to_best=best_it,
        restart_index_of_best=best_idx,
        runtime_ms=int((time.perf_counter() - t0) * 1000),
        restarts_run=len(results),
        timed_out=timed_out,
        trace=_merge_traces(r[3] for r in results),
    )


class ContextualityDegreeSearch(BaseEstimator):
    """Estimator wrapper around :func:`solve`.

    ``fit(config)`` searches for an assignment with few unsatisfied contexts
    and stores it in ``assignment_``; ``distance_`` is the resulting upper
    bound on the degree of contextuality.

    Examples
    --------
    >>> from qcontext.polar_space import build_space
    >>> from qcontext.configuration import from_space
    >>> est = ContextualityDegreeSearch(n_restarts=20, random_state=1)
    >>> est.fit(from_space(build_space(2))).distance_
    3
    """

    def __init__(self, theta=0.8, gamma=0.9, max_iter=1000, n_restarts=1, random_state=0,
                 target_distance=None, time_budget=None, n_jobs=None):
        self.theta = theta
        self.gamma = gamma
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.random_state = random_state
        self.target_distance = target_distance
        self.time_budget = time_budget
        self.n_jobs = n_jobs

    def _params(self) -> SolverParams:
        seed = self.random_state
        if seed is None:
            seed = int(np.random.SeedSequence().entropy) & _MASK64
        return SolverParams(self.theta, self.gamma, self.max_iter, self.n_restarts, int(seed),
                            self.target_distance, self.time_budget)

    def fit(self, X: Configuration, y=None):
        X = check_configuration(X)
        self.result_ = solve(X, self._params(), n_jobs=self.n_jobs)
        self.assignment_ = self.result_.best_assignment
        self.distance_ = self.result_.best_distance
        self.n_iter_ = self.result_.iterations_to_best
        self.configuration_ = X
        return self

    def unsatisfied(self) -> UnsatisfiedConfiguration:
        if not hasattr(self, "assignment_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("call fit first")
        return unsatisfied(self.configuration_, self.assignment_)

    def score(self, X: Configuration, y=None) -> float:
        """Fraction of contexts satisfied by the fitted assignment on ``X``."""
        return 1.0 - hamming_distance(X, self.assignment_) / X.n_contexts
