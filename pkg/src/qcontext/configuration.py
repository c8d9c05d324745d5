"""Quantum configurations (points + line contexts) and their assignments.

A :class:`Configuration` keeps global space indices for points and contexts,
plus a dense local re-indexing of its own points that the solver hot loops
use. Assignments are ``int8`` arrays of +-1 aligned with ``point_ids``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .exceptions import QContextError
from .polar_space import Quadric, SymplecticSpace


@dataclass(eq=False)
class Configuration:
    """A pair (O, C) living in a host :class:`SymplecticSpace`.

    ``expected_sign[c]`` is +1 for a positive context and -1 for a negative
    one; the usual F_2 valuation vector is ``(1 - expected_sign) // 2``.
    """

    space: SymplecticSpace
    point_ids: np.ndarray
    context_ids: np.ndarray
    name: str = "custom"
    _local: np.ndarray = field(default=None, repr=False)
    _csr: tuple = field(default=None, repr=False)

    def __post_init__(self):
        self.point_ids = np.unique(np.asarray(self.point_ids, dtype=np.int64))
        self.context_ids = np.asarray(self.context_ids, dtype=np.int64)
        lines = self.space.lines[self.context_ids]
        local = np.searchsorted(self.point_ids, lines)
        local = np.minimum(local, max(len(self.point_ids) - 1, 0))
        if len(lines) and not np.array_equal(self.point_ids[local], lines):
            raise QContextError("every context's points must belong to the configuration")
        self._local = local.astype(np.int32).reshape(-1, 3)

    @property
    def n_points(self) -> int:
        return len(self.point_ids)

    @property
    def n_contexts(self) -> int:
        return len(self.context_ids)

    @property
    def contexts(self) -> np.ndarray:
        """(l, 3) contexts in local point indices."""
        return self._local

    @cached_property
    def expected_sign(self) -> np.ndarray:
        return self.space.signs[self.context_ids]

    @property
    def valuation(self) -> np.ndarray:
        """The F_2 valuation vector E (1 marks a negative context)."""
        return (self.expected_sign < 0).astype(np.uint8)

    @property
    def n_negative(self) -> int:
        return int(np.count_nonzero(self.expected_sign < 0))

    @property
    def adjacency(self):
        """Local CSR adjacency ``(offsets, context_positions)``."""
        if self._csr is None:
            self._csr = _kernels.build_csr(self._local, self.n_points)
        return self._csr

    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency[0])

    def labels(self) -> list[str]:
        return [self.space.label(i) for i in self.point_ids]

    def incidence_matrix(self) -> np.ndarray:
        """Dense l x p incidence matrix over F_2 (small configurations only)."""
        A = np.zeros((self.n_contexts, self.n_points), dtype=np.uint8)
        rows = np.repeat(np.arange(self.n_contexts), 3)
        A[rows, self._local.ravel()] = 1
        return A

    def all_plus(self) -> np.ndarray:
        return np.ones(self.n_points, dtype=np.int8)

    def __repr__(self) -> str:
        return (f"Configuration({self.name}, N={self.space.n_qubits}, points={self.n_points}, "
                f"contexts={self.n_contexts}, negative={self.n_negative})")


def from_space(space: SymplecticSpace) -> Configuration:
    return Configuration(space, np.arange(space.n_points), np.arange(space.n_lines), name="full")


def from_quadric(space: SymplecticSpace, quadric: Quadric) -> Configuration:
    if quadric.members.shape[0] != space.n_points:
        raise QContextError("quadric does not belong to this space")
    return Configuration(space, quadric.point_indices, quadric.line_ids, name=quadric.kind.value)


def from_triples(space: SymplecticSpace, triples, name: str = "custom") -> Configuration:
    """Configuration whose contexts are given as triples of observables/labels."""
    ids = [space.line_index(*(space.index_of(o) for o in t)) for t in triples]
    points = np.unique(space.lines[ids].ravel()) if ids else np.empty(0, dtype=np.int64)
    return Configuration(space, points, np.asarray(ids, dtype=np.int64), name=name)


def check_assignment(config: Configuration, assignment) -> np.ndarray:
    """Validate an assignment and return it as a local int8 array.

    Accepts a +-1 sequence aligned with ``config.point_ids`` or a mapping from
    global point index to +-1 covering exactly the configuration's points.
    """
    if isinstance(assignment, dict):
        if set(int(k) for k in assignment) != set(config.point_ids.tolist()):
            raise QContextError("assignment must be defined on exactly the configuration's points")
        a = np.array([assignment[int(i)] for i in config.point_ids], dtype=np.int8)
    else:
        a = np.asarray(assignment)
        if a.shape != (config.n_points,):
            raise QContextError(
                f"assignment has shape {a.shape}, expected ({config.n_points},)")
        a = a.astype(np.int8)
    if not np.all((a == 1) | (a == -1)):
        raise QContextError("assignment values must be +1 or -1")
    return a


def _violated(config: Configuration, a: np.ndarray) -> np.ndarray:
    if config.n_contexts == 0:
        return np.zeros(0, dtype=bool)
    prod = a[config.contexts].prod(axis=1, dtype=np.int8)
    return prod != config.expected_sign


def hamming_distance(config: Configuration, assignment) -> int:
    """Number of contexts whose assigned product differs from their sign."""
    a = check_assignment(config, assignment)
    return int(np.count_nonzero(_violated(config, a)))


@dataclass(eq=False)
class UnsatisfiedConfiguration:
    """Contexts of ``parent`` left unsatisfied by an assignment.

    ``context_ids`` and ``point_ids`` are global space indices. ``point_ids``
    is the full point set of the parent (or of a restriction) while
    :attr:`covered_points` keeps only points on some unsatisfied context.
    """

    parent: Configuration
    context_ids: np.ndarray
    point_ids: np.ndarray

    @property
    def space(self) -> SymplecticSpace:
        return self.parent.space

    @property
    def n_contexts(self) -> int:
        return len(self.context_ids)

    @property
    def lines(self) -> np.ndarray:
        return self.space.lines[self.context_ids]

    @property
    def covered_points(self) -> np.ndarray:
        return np.unique(self.lines.ravel()).astype(np.int64)

    def __len__(self) -> int:
        return self.n_contexts


def unsatisfied(config: Configuration, assignment) -> UnsatisfiedConfiguration:
    a = check_assignment(config, assignment)
    ids = config.context_ids[_violated(config, a)]
    return UnsatisfiedConfiguration(config, ids, config.point_ids.copy())


def _as_mask(space: SymplecticSpace, subset) -> np.ndarray:
    subset = np.asarray(subset)
    if subset.dtype == bool:
        if subset.shape != (space.n_points,):
            raise QContextError("point mask must cover every point of the space")
        return subset
    mask = np.zeros(space.n_points, dtype=bool)
    mask[subset.astype(np.int64)] = True
    return mask


def restrict(uns: UnsatisfiedConfiguration, point_subset) -> UnsatisfiedConfiguration:
    """Contexts of ``uns`` lying entirely inside ``point_subset``.

    ``point_subset`` is a boolean mask over the host space or an array of
    global point indices (e.g. ``quadric.members``).
    """
    mask = _as_mask(uns.space, point_subset)
    keep = mask[uns.lines].all(axis=1) if uns.n_contexts else np.zeros(0, dtype=bool)
    points = uns.point_ids[mask[uns.point_ids]]
    return UnsatisfiedConfiguration(uns.parent, uns.context_ids[keep], points)
