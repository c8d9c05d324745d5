"""Bit-packed canonical N-qubit Pauli observables.

An observable ``A_1 A_2 ... A_N`` with ``A_k`` in ``{I, X, Y, Z}`` is stored as
two N-bit integers: ``mu`` (Z-part) and ``nu`` (X-part), qubit ``k`` (0-based)
sitting at bit ``k``. The letter table is::

    I <-> (0, 0)   X <-> (0, 1)   Y <-> (1, 1)   Z <-> (1, 0)

Phases follow the standard matrices (``XY = iZ``, ``YZ = iX``, ``ZX = iY``).

Downstream modules address points through the *canonical point id*: the 2N-bit
integer ``(mu_1 ... mu_N nu_1 ... nu_N)`` read with ``mu_1`` most significant.
Array helpers at the bottom of this module work directly on such ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, NotALineError, ParseError

MAX_QUBITS = 64

_LETTER_BITS = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


def _reverse_bits(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


@dataclass(frozen=True, order=True)
class Observable:
    """Canonical (phase +1) Pauli observable on ``n_qubits`` qubits."""

    mu: int
    nu: int
    n_qubits: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DimensionError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.mu < limit and 0 <= self.nu < limit):
            raise ValueError("mu/nu carry bits above position n_qubits - 1")

    @classmethod
    def identity(cls, n_qubits: int) -> "Observable":
        return cls(0, 0, n_qubits)

    @classmethod
    def from_point_id(cls, point_id: int, n_qubits: int) -> "Observable":
        """Inverse of :attr:`point_id`."""
        mask = (1 << n_qubits) - 1
        mu = _reverse_bits(point_id >> n_qubits, n_qubits)
        nu = _reverse_bits(point_id & mask, n_qubits)
        return cls(mu, nu, n_qubits)

    @property
    def point_id(self) -> int:
        n = self.n_qubits
        return (_reverse_bits(self.mu, n) << n) | _reverse_bits(self.nu, n)

    @property
    def is_identity(self) -> bool:
        return self.mu == 0 and self.nu == 0

    @property
    def y_count(self) -> int:
        return (self.mu & self.nu).bit_count()

    def letter(self, k: int) -> str:
        return _BITS_LETTER[((self.mu >> k) & 1, (self.nu >> k) & 1)]

    def __str__(self) -> str:
        return format_observable(self)

    def __repr__(self) -> str:
        return f"Observable('{format_observable(self)}')"


@dataclass(frozen=True)
class PhasedProduct:
    """``i**phase_exponent`` times a canonical observable."""

    observable: Observable
    phase_exponent: int

    @property
    def sign(self) -> complex:
        return 1j ** self.phase_exponent


def parse_observable(text: str) -> Observable:
    """Parse a letter string such as ``"YXYI"``.

    The all-``I`` string is accepted and yields the identity; callers that need
    a point of the polar space have to reject it themselves.
    """
    if not isinstance(text, str) or not text:
        raise ParseError("observable text must be a nonempty string")
    if len(text) > MAX_QUBITS:
        raise ParseError(f"at most {MAX_QUBITS} qubits supported")
    mu = nu = 0
    for k, ch in enumerate(text):
        try:
            m, n = _LETTER_BITS[ch]
        except KeyError:
            raise ParseError(f"invalid character {ch!r} at position {k}") from None
        mu |= m << k
        nu |= n << k
    return Observable(mu, nu, len(text))


def format_observable(p: Observable) -> str:
    return "".join(p.letter(k) for k in range(p.n_qubits))


def _check_dims(*ops: Observable) -> None:
    n = ops[0].n_qubits
    for op in ops[1:]:
        if op.n_qubits != n:
            raise DimensionError(f"qubit counts differ: {n} vs {op.n_qubits}")


def symplectic_form(p: Observable, q: Observable) -> int:
    """0 if ``p`` and ``q`` commute, 1 otherwise."""
    _check_dims(p, q)
    return ((p.mu & q.nu) ^ (p.nu & q.mu)).bit_count() & 1


def commute(p: Observable, q: Observable) -> bool:
    return symplectic_form(p, q) == 0


def _product_phase(zp: int, xp: int, zq: int, xq: int) -> int:
    # Write P(z, x) = i^(z.x) X^x Z^z; moving Z^zp past X^xq costs (-1)^(zp.xq).
    zr, xr = zp ^ zq, xp ^ xq
    return (
        (zp & xp).bit_count()
        + (zq & xq).bit_count()
        + 2 * (zp & xq).bit_count()
        - (zr & xr).bit_count()
    ) % 4


def multiply(p: Observable, q: Observable) -> PhasedProduct:
    _check_dims(p, q)
    obs = Observable(p.mu ^ q.mu, p.nu ^ q.nu, p.n_qubits)
    return PhasedProduct(obs, _product_phase(p.mu, p.nu, q.mu, q.nu))


def triple_sign(p: Observable, q: Observable, r: Observable) -> int:
    """Sign ``s`` with ``p.q.r = s I``, for three observables forming a line."""
    _check_dims(p, q, r)
    if (p.mu ^ q.mu ^ r.mu) or (p.nu ^ q.nu ^ r.nu):
        raise NotALineError(f"{p}, {q}, {r} do not multiply to a multiple of the identity")
    if symplectic_form(p, q) or symplectic_form(p, r) or symplectic_form(q, r):
        raise NotALineError(f"{p}, {q}, {r} are not pairwise commuting")
    # (p.q) is i^e r, and r.r = I with no phase.
    e = _product_phase(p.mu, p.nu, q.mu, q.nu)
    assert e in (0, 2), "odd phase on a commuting product"
    return 1 if e == 0 else -1


def is_symmetric(p: Observable) -> bool:
    """True iff the observable has an even number of ``Y`` factors."""
    return p.y_count % 2 == 0


# ---------------------------------------------------------------------------
# Vectorized helpers on canonical point ids (numpy integer arrays).

def split_ids(ids, n_qubits: int):
    ids = np.asarray(ids, dtype=np.int64)
    return ids >> n_qubits, ids & ((1 << n_qubits) - 1)


def symplectic_ids(a, b, n_qubits: int) -> np.ndarray:
    za, xa = split_ids(a, n_qubits)
    zb, xb = split_ids(b, n_qubits)
    return (np.bitwise_count((za & xb) ^ (xa & zb)) & 1).astype(np.int8)


def skew_ids(ids, n_qubits: int) -> np.ndarray:
    """1 for skew-symmetric (odd number of Y), 0 for symmetric."""
    z, x = split_ids(ids, n_qubits)
    return (np.bitwise_count(z & x) & 1).astype(np.int8)


def line_sign_ids(a, b, n_qubits: int) -> np.ndarray:
    """Sign of the line through commuting points ``a`` and ``b`` (third point ``a ^ b``)."""
    za, xa = split_ids(a, n_qubits)
    zb, xb = split_ids(b, n_qubits)
    e = (
        np.bitwise_count(za & xa).astype(np.int64)
        + np.bitwise_count(zb & xb)
        + 2 * np.bitwise_count(za & xb).astype(np.int64)
        - np.bitwise_count((za ^ zb) & (xa ^ xb))
    ) & 3
    return np.where(e == 0, 1, -1).astype(np.int8)


def format_point_id(point_id: int, n_qubits: int) -> str:
    return format_observable(Observable.from_point_id(point_id, n_qubits))


def parse_point_id(text: str) -> int:
    return parse_observable(text).point_id
