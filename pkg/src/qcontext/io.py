"""Run records on disk and XOR-CNF export.

A run record is a versioned JSON document holding enough to rebuild the
configuration that was solved and the assignment that was found. Files whose
name ends in ``.gz`` are transparently gzip-compressed.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .configuration import Configuration, UnsatisfiedConfiguration, from_quadric, from_space, from_triples, unsatisfied
from .exceptions import ParseError
from .pauli import Observable, parse_observable
from .polar_space import QuadricKind, SymplecticSpace, build_space, canonical_hyperbolic_quadric, iter_quadrics, quadric

SCHEMA_VERSION = 1
GEOMETRIES = ("full", "hyperbolic", "elliptic", "custom")
POINT_ORDERING = (
    "canonical: point k (0-based) is the observable whose 2N-bit id mu_1..mu_N nu_1..nu_N "
    "(Z-part then X-part, qubit 1 most significant) equals k + 1"
)


def default_quadric_index(space: SymplecticSpace, kind) -> Observable:
    """Index used when none is given: the identity (symmetric-point quadric)
    for the hyperbolic family, the first elliptic index in canonical order otherwise."""
    kind = QuadricKind(kind)
    if kind is QuadricKind.HYPERBOLIC:
        return Observable.identity(space.n_qubits)
    return next(iter_quadrics(space, kind)).index


def make_configuration(space: SymplecticSpace, geometry: str, index: str | None = None,
                       contexts=None) -> Configuration:
    """Configuration for a geometry name as used on the command line and in records."""
    if geometry == "full":
        return from_space(space)
    if geometry in ("hyperbolic", "elliptic"):
        kind = QuadricKind(geometry)
        if space.n_qubits < 2 and kind is QuadricKind.ELLIPTIC:
            return Configuration(space, np.empty(0, np.int64), np.empty(0, np.int64), name="elliptic")
        obs = default_quadric_index(space, kind) if index is None else parse_observable(index)
        if obs.n_qubits != space.n_qubits:
            raise ParseError(f"index {index} has {obs.n_qubits} qubits, expected {space.n_qubits}")
        want = 0 if kind is QuadricKind.HYPERBOLIC else 1
        if obs.y_count % 2 != want:
            actual = "hyperbolic" if obs.y_count % 2 == 0 else "elliptic"
            raise ParseError(f"index {obs} defines a {actual} quadric, not a {geometry} one")
        q = canonical_hyperbolic_quadric(space) if obs.is_identity else quadric(space, obs)
        if q.n_points == 0:
            return Configuration(space, np.empty(0, np.int64), np.empty(0, np.int64), name=geometry)
        return from_quadric(space, q)
    if geometry == "custom":
        if contexts is None:
            raise ParseError("custom geometry needs explicit contexts")
        return from_triples(space, contexts)
    raise ParseError(f"unknown geometry {geometry!r}; expected one of {', '.join(GEOMETRIES)}")


@dataclass
class RunRecord:
    """Everything needed to reproduce and audit one solver run."""

    command: str
    qubits: int
    geometry: str
    params: dict
    best_distance: int
    assignment: list
    observables: list
    unsatisfied_contexts: list
    index_observable: str | None = None
    contexts: list | None = None
    iterations_to_best: int = 0
    restart_index_of_best: int = 0
    runtime_ms: int = 0
    restarts_run: int = 1
    timed_out: bool = False
    trace: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    point_ordering: str = POINT_ORDERING
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema_version {version!r}")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ParseError(f"unknown record fields: {sorted(unknown)}")
        data = dict(data)
        data["trace"] = [list(t) for t in data.get("trace", [])]
        if data.get("contexts") is not None:
            data["contexts"] = [list(t) for t in data["contexts"]]
        data["unsatisfied_contexts"] = [list(t) for t in data["unsatisfied_contexts"]]
        return cls(**data)

    def space(self) -> SymplecticSpace:
        return build_space(self.qubits)

    def configuration(self, space: SymplecticSpace | None = None) -> Configuration:
        space = space or self.space()
        return make_configuration(space, self.geometry, self.index_observable, self.contexts)

    def assignment_array(self, config: Configuration) -> np.ndarray:
        labels = config.labels()
        if labels != self.observables:
            raise ParseError("record observables do not match the rebuilt configuration")
        return np.asarray(self.assignment, dtype=np.int8)

    def unsatisfied(self, config: Configuration | None = None) -> UnsatisfiedConfiguration:
        """Recompute the unsatisfied configuration; checks it against the stored distance."""
        config = config or self.configuration()
        uns = unsatisfied(config, self.assignment_array(config))
        if len(uns) != self.best_distance:
            raise ParseError(f"stored distance {self.best_distance} but assignment leaves {len(uns)} unsatisfied")
        return uns


def record_from_result(command: str, config: Configuration, result, geometry: str,
                       index_observable: str | None = None, notes: dict | None = None) -> RunRecord:
    """Build a :class:`RunRecord` from a solver result on ``config``."""
    space = config.space
    lines = space.lines[result.unsatisfied_context_ids] if len(result.unsatisfied_context_ids) else []
    contexts = None
    if geometry == "custom":
        contexts = [[space.label(i) for i in space.lines[c]] for c in config.context_ids]
    return RunRecord(
        command=command,
        qubits=space.n_qubits,
        geometry=geometry,
        index_observable=index_observable,
        contexts=contexts,
        params=result.params.to_dict(),
        best_distance=int(result.best_distance),
        assignment=[int(x) for x in result.best_assignment],
        observables=config.labels(),
        unsatisfied_contexts=[[space.label(i) for i in row] for row in lines],
        iterations_to_best=int(result.iterations_to_best),
        restart_index_of_best=int(result.restart_index_of_best),
        runtime_ms=int(result.runtime_ms),
        restarts_run=int(getattr(result, "restarts_run", 1)),
        timed_out=bool(getattr(result, "timed_out", False)),
        trace=[[int(i), int(d)] for i, d in result.trace],
        notes=dict(notes or {}),
    )


def _open(path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def save_record(record: RunRecord, path) -> None:
    with _open(path, "w") as fh:
        json.dump(record.to_dict(), fh, indent=None, separators=(",", ":"))
        fh.write("\n")


def load_record(path) -> RunRecord:
    try:
        with _open(path, "r") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return RunRecord.from_dict(data)


def xor_cnf(config: Configuration, geometry: str | None = None) -> str:
    """MAX-XOR-SAT instance of a configuration in ``x``-clause CNF text.

    One variable per configuration point, numbered from 1 in canonical order.
    A negative context ``{a, b, c}`` becomes ``x a b c 0`` (odd parity); a
    positive one becomes ``x -a b c 0``.
    """
    space = config.space
    lines = [
        "c MAX-XOR-SAT instance of a Pauli configuration",
        f"c qubits {space.n_qubits}",
        f"c geometry {geometry or config.name}",
        f"c ordering {POINT_ORDERING}",
        "c variable v is true when the observable is assigned -1",
        f"p cnf {config.n_points} {config.n_contexts}",
    ]
    ctx = config.contexts + 1
    for (a, b, c), s in zip(ctx.tolist(), config.expected_sign.tolist()):
        first = a if s < 0 else -a
        lines.append(f"x {first} {b} {c} 0")
    return "\n".join(lines) + "\n"


def parse_xor_cnf(text: str):
    """Parse ``x``-clause CNF text into ``(n_vars, clauses)``.

    Each clause is ``(variables, parity)`` with 1-based variables; parity 1
    means an odd number of them must be true.
    """
    n_vars = None
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad header {line!r}")
            n_vars = int(parts[2])
            continue
        if not line.startswith("x"):
            raise ParseError(f"not an xor clause: {line!r}")
        lits = [int(t) for t in line[1:].split()]
        if lits[-1] != 0:
            raise ParseError(f"clause not terminated by 0: {line!r}")
        lits = lits[:-1]
        parity = 1
        for lit in lits:
            if lit < 0:
                parity ^= 1
        clauses.append((tuple(abs(v) for v in lits), parity))
    if n_vars is None:
        raise ParseError("missing 'p cnf' header")
    return n_vars, clauses
