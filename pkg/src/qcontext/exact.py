"""Exact degree of contextuality and closed-form bounds.

The degree is the distance from the valuation vector E to the column space
Im(A) of the incidence matrix. At small rank it is found by walking every
codeword of Im(A) in Gray-code order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels
from .configuration import Configuration
from .exceptions import BudgetExceededError

DEFAULT_BUDGET = 1 << 30


@dataclass
class Gf2Basis:
    """Row basis of Im(A) packed as ``(rank, words)`` uint64 bit vectors.

    Bit ``c`` of a vector is context ``c`` of the configuration. ``pivots[j]``
    is the leading bit of ``generators[j]``; no later generator has it set.
    """

    generators: np.ndarray
    pivots: np.ndarray
    n_bits: int

    @property
    def rank(self) -> int:
        return int(self.generators.shape[0])

    def reduce(self, v: np.ndarray):
        """Reduce ``v`` against the basis; return (remainder, used generator mask)."""
        rem, used = _reduce(self.generators, self.pivots, v.copy())
        return rem, used

    def contains(self, v: np.ndarray) -> bool:
        rem, _ = self.reduce(v)
        return not rem.any()


def pack_bits(bits) -> np.ndarray:
    """Pack a 0/1 vector into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    words = max(1, -(-len(bits) // 64))
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[: len(bits)] = bits
    return np.packbits(padded, bitorder="little").view(np.uint64).copy()


@njit(cache=True, nogil=True)
def _reduce(gens, pivots, v):
    used = np.zeros(gens.shape[0], dtype=np.bool_)
    for j in range(gens.shape[0]):
        b = pivots[j]
        if (v[b >> 6] >> np.uint64(b & 63)) & np.uint64(1):
            for t in range(v.shape[0]):
                v[t] ^= gens[j, t]
            used[j] = True
    return v, used


@njit(cache=True, nogil=True)
def _eliminate(vectors):
    n, words = vectors.shape
    gens = np.empty((n, words), dtype=np.uint64)
    pivots = np.empty(n, dtype=np.int64)
    rank = 0
    for i in range(n):
        v = vectors[i].copy()
        for j in range(rank):
            b = pivots[j]
            if (v[b >> 6] >> np.uint64(b & 63)) & np.uint64(1):
                for t in range(words):
                    v[t] ^= gens[j, t]
        lead = -1
        for t in range(words):
            if v[t] != 0:
                x = v[t]
                k = 0
                while (x & np.uint64(1)) == 0:
                    x >>= np.uint64(1)
                    k += 1
                lead = t * 64 + k
                break
        if lead >= 0:
            gens[rank] = v
            pivots[rank] = lead
            rank += 1
    return gens[:rank].copy(), pivots[:rank].copy()


@njit(cache=True, nogil=True)
def _point_columns(ctx, n_points, words):
    cols = np.zeros((n_points, words), dtype=np.uint64)
    for c in range(ctx.shape[0]):
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        for j in range(3):
            cols[ctx[c, j], w] |= bit
    return cols


def incidence_rank(config: Configuration) -> Gf2Basis:
    """Basis of the span of the point-columns of the incidence matrix."""
    words = max(1, -(-config.n_contexts // 64))
    cols = _point_columns(config.contexts, config.n_points, words)
    gens, pivots = _eliminate(cols)
    return Gf2Basis(gens, pivots, config.n_contexts)


def exact_degree(config: Configuration, budget: int = DEFAULT_BUDGET, n_jobs: int = 1) -> int:
    """Minimum number of unsatisfiable contexts, by exhaustive coset search.

    Raises :class:`BudgetExceededError` (carrying the rank) when ``2**rank``
    exceeds ``budget``; no approximation is ever returned.
    """
    l = config.n_contexts
    if l == 0:
        return 0
    basis = incidence_rank(config)
    rank = basis.rank
    if 2**rank > budget:
        raise BudgetExceededError(
            f"rank {rank} needs 2^{rank} codewords, over the budget of {budget}", rank=rank, budget=budget)
    target = pack_bits(config.valuation)
    gens = basis.generators
    ones = pack_bits(np.ones(l, dtype=np.uint8))
    rem, used = basis.reduce(ones)
    complement_trick = rank > 0 and not rem.any()
    if complement_trick:
        # all-ones is a codeword: wt(E ^ w ^ 1) = l - wt(E ^ w), so half the walk suffices
        drop = int(np.flatnonzero(used)[-1])
        gens = np.delete(gens, drop, axis=0)
    total = 1 << gens.shape[0]
    n_chunks = max(1, min(n_jobs, total))
    bounds = np.linspace(0, total, n_chunks + 1).astype(np.int64)
    gens = np.ascontiguousarray(gens) if gens.shape[0] else np.zeros((1, target.shape[0]), np.uint64)
    with ThreadPoolExecutor(max_workers=n_chunks) as pool:
        parts = list(pool.map(lambda k: _kernels.gray_walk(target, gens, int(bounds[k]), int(bounds[k + 1])),
                              range(n_chunks)))
    lo = min(p[0] for p in parts)
    hi = max(p[1] for p in parts)
    return int(min(lo, l - hi) if complement_trick else lo)


def lower_bound_full(n_qubits: int) -> int:
    """Closed-form lower bound on the degree of the full W(2N-1, 2)."""
    if n_qubits < 2:
        raise ValueError("lower bound defined for N >= 2")
    return (4**n_qubits - 1) * (4 ** (n_qubits - 1) - 1) // 15


def polarity_count(n_qubits: int) -> int:
    """Number of non-degenerate symplectic polarities of PG(2N-1, 2)."""
    if n_qubits < 2:
        raise ValueError("polarity count defined for N >= 2")
    out = 2 ** (((2 * n_qubits - 1) ** 2 - 1) // 4)
    for i in range(1, n_qubits):
        out *= 2 ** (2 * i + 1) - 1
    return out
