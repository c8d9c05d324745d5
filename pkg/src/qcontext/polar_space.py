"""Points, lines and quadrics of the symplectic polar space W(2N-1, 2).

Point index ``i`` of a :class:`SymplecticSpace` is the observable with
canonical id ``i + 1`` (see :mod:`qcontext.pauli`), so points are listed in
canonical id order and index arithmetic is plain integer arithmetic.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .exceptions import CapabilityError, InvalidIndexError
from .pauli import Observable, format_point_id, skew_ids, symplectic_ids

MAX_SPACE_QUBITS = 7


class QuadricKind(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"


def point_count(n_qubits: int) -> int:
    return 4**n_qubits - 1


def line_count(n_qubits: int) -> int:
    return (4**n_qubits - 1) * (4 ** (n_qubits - 1) - 1) // 3


def lines_per_point(n_qubits: int) -> int:
    return 4 ** (n_qubits - 1) - 1


def quadric_point_count(n_qubits: int, kind) -> int:
    kind = QuadricKind(kind)
    if kind is QuadricKind.HYPERBOLIC:
        return (2 ** (n_qubits - 1) + 1) * (2**n_qubits - 1)
    return (2 ** (n_qubits - 1) - 1) * (2**n_qubits + 1)


def quadric_family_size(n_qubits: int, kind) -> int:
    """Number of quadrics of the given kind in W(2N-1, 2)."""
    return quadric_point_count(n_qubits, kind) + 1


@dataclass(eq=False)
class SymplecticSpace:
    """The full point-line structure of W(2N-1, 2).

    Attributes
    ----------
    lines : (l, 3) int32 array of sorted point indices, lexicographic order.
    signs : (l,) int8 array, +1 for positive and -1 for negative lines.
    """

    n_qubits: int
    lines: np.ndarray
    signs: np.ndarray
    _csr: tuple = field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return point_count(self.n_qubits)

    @property
    def n_lines(self) -> int:
        return self.lines.shape[0]

    @property
    def n_negative(self) -> int:
        return int(np.count_nonzero(self.signs < 0))

    @property
    def point_ids(self) -> np.ndarray:
        """Canonical ids of the points, i.e. ``index + 1``."""
        return np.arange(1, self.n_points + 1, dtype=np.int64)

    @cached_property
    def points(self) -> list[Observable]:
        n = self.n_qubits
        return [Observable.from_point_id(i + 1, n) for i in range(self.n_points)]

    def label(self, index: int) -> str:
        return format_point_id(int(index) + 1, self.n_qubits)

    def index_of(self, observable) -> int:
        """Point index of an :class:`Observable` or letter string."""
        if isinstance(observable, str):
            from .pauli import parse_observable

            observable = parse_observable(observable)
        if observable.n_qubits != self.n_qubits:
            raise InvalidIndexError(f"{observable} is not a {self.n_qubits}-qubit observable")
        if observable.is_identity:
            raise InvalidIndexError("the identity is not a point of the polar space")
        return observable.point_id - 1

    @property
    def point_to_lines(self):
        """CSR adjacency ``(offsets, line_ids)``; built on first use."""
        if self._csr is None:
            self._csr = _kernels.build_csr(self.lines, self.n_points)
        return self._csr

    def lines_through(self, index: int) -> np.ndarray:
        offsets, ids = self.point_to_lines
        return ids[offsets[index] : offsets[index + 1]]

    @cached_property
    def _line_keys(self) -> np.ndarray:
        p = np.int64(self.n_points)
        ln = self.lines.astype(np.int64)
        return (ln[:, 0] * p + ln[:, 1]) * p + ln[:, 2]

    def line_index(self, a: int, b: int, c: int) -> int:
        """Index of the line through three point indices; KeyError if none."""
        a, b, c = sorted((int(a), int(b), int(c)))
        p = self.n_points
        key = (a * p + b) * p + c
        pos = int(np.searchsorted(self._line_keys, key))
        if pos < self.n_lines and self._line_keys[pos] == key:
            return pos
        raise KeyError(f"no line through points {a}, {b}, {c}")


def build_space(n_qubits: int) -> SymplecticSpace:
    """Enumerate W(2N-1, 2) for ``1 <= N <= 7``."""
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_SPACE_QUBITS:
        raise CapabilityError(f"n_qubits must be in 1..{MAX_SPACE_QUBITS}, got {n_qubits!r}")
    n = int(n_qubits)
    expected = line_count(n)
    lines, signs, k = _kernels.enumerate_lines(n, expected)
    assert k == expected, (k, expected)
    return SymplecticSpace(n, lines, signs)


@dataclass(eq=False)
class Quadric:
    kind: QuadricKind
    index: Observable
    members: np.ndarray  # bool mask over space point indices
    line_ids: np.ndarray

    @property
    def n_points(self) -> int:
        return int(np.count_nonzero(self.members))

    @property
    def n_lines(self) -> int:
        return int(self.line_ids.shape[0])

    @property
    def point_indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def negative_line_count(self, space: SymplecticSpace) -> int:
        return int(np.count_nonzero(space.signs[self.line_ids] < 0))

    def __repr__(self) -> str:
        return f"Quadric({self.kind.value}, index={self.index}, points={self.n_points}, lines={self.n_lines})"


def _membership(space: SymplecticSpace, index_id: int) -> np.ndarray:
    ids = space.point_ids
    n = space.n_qubits
    # symmetric & commuting, or skew & anticommuting
    return skew_ids(ids, n) == symplectic_ids(ids, np.full_like(ids, index_id), n)


def _lines_inside(space: SymplecticSpace, members: np.ndarray) -> np.ndarray:
    return np.flatnonzero(members[space.lines].all(axis=1))


def quadric(space: SymplecticSpace, index) -> Quadric:
    """The quadric whose index observable is ``index`` (a point of the space)."""
    if isinstance(index, str):
        from .pauli import parse_observable

        index = parse_observable(index)
    if index.n_qubits != space.n_qubits:
        raise InvalidIndexError(f"index {index} has {index.n_qubits} qubits, space has {space.n_qubits}")
    if index.is_identity:
        raise InvalidIndexError("quadric index must not be the identity; use canonical_hyperbolic_quadric")
    kind = QuadricKind.HYPERBOLIC if index.y_count % 2 == 0 else QuadricKind.ELLIPTIC
    if kind is QuadricKind.ELLIPTIC and space.n_qubits < 2:
        raise CapabilityError("elliptic quadrics need at least two qubits")
    members = _membership(space, index.point_id)
    q = Quadric(kind, index, members, _lines_inside(space, members))
    assert q.n_points == quadric_point_count(space.n_qubits, kind)
    return q


def canonical_hyperbolic_quadric(space: SymplecticSpace) -> Quadric:
    """The hyperbolic quadric attached to the identity: all symmetric points."""
    members = skew_ids(space.point_ids, space.n_qubits) == 0
    q = Quadric(QuadricKind.HYPERBOLIC, Observable.identity(space.n_qubits), members,
                _lines_inside(space, members))
    assert q.n_points == quadric_point_count(space.n_qubits, QuadricKind.HYPERBOLIC)
    return q


def iter_quadrics(space: SymplecticSpace, kind, include_identity: bool = True):
    """Yield the quadrics of one kind, in canonical order of their index.

    For the hyperbolic family the identity-indexed quadric comes first unless
    ``include_identity`` is False.
    """
    kind = QuadricKind(kind)
    if kind is QuadricKind.ELLIPTIC and space.n_qubits < 2:
        raise CapabilityError("elliptic quadrics need at least two qubits")
    skew = skew_ids(space.point_ids, space.n_qubits)
    want = 1 if kind is QuadricKind.ELLIPTIC else 0
    if kind is QuadricKind.HYPERBOLIC and include_identity:
        yield canonical_hyperbolic_quadric(space)
    for i in np.flatnonzero(skew == want):
        yield quadric(space, Observable.from_point_id(int(i) + 1, space.n_qubits))


def enumerate_quadrics(space: SymplecticSpace, kind, include_identity: bool = True) -> list[Quadric]:
    """List form of :func:`iter_quadrics`; holds every line set in memory."""
    return list(iter_quadrics(space, kind, include_identity))


def negative_line_distribution(space: SymplecticSpace, kind) -> dict[int, int]:
    """Map number-of-negative-lines -> number of quadrics of that kind."""
    counts = Counter(q.negative_line_count(space) for q in iter_quadrics(space, kind))
    return dict(sorted(counts.items()))
