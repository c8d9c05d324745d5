"""Numba-compiled inner loops.

Everything here works on flat numpy arrays so the public modules can keep
their objects small. All kernels release the GIL.
"""

import numpy as np
from numba import njit, uint64

_M1 = uint64(0x5555555555555555)
_M2 = uint64(0x3333333333333333)
_M4 = uint64(0x0F0F0F0F0F0F0F0F)
_H01 = uint64(0x0101010101010101)
_GOLDEN = uint64(0x9E3779B97F4A7C15)
_MIX1 = uint64(0xBF58476D1CE4E5B9)
_MIX2 = uint64(0x94D049BB133111EB)


@njit(cache=True, nogil=True, inline="always")
def popcount64(x):
    x = uint64(x)
    x = x - ((x >> uint64(1)) & _M1)
    x = (x & _M2) + ((x >> uint64(2)) & _M2)
    x = (x + (x >> uint64(4))) & _M4
    return np.int64((x * _H01) >> uint64(56))


# ---------------------------------------------------------------------------
# RNG: splitmix64 for seeding, xoshiro256** for streams.

@njit(cache=True, nogil=True, inline="always")
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(cache=True, nogil=True)
def splitmix64_next(state):
    """Advance a one-word splitmix64 state held in ``state[0]``; return output."""
    state[0] = state[0] + _GOLDEN
    z = state[0]
    z = (z ^ (z >> uint64(30))) * _MIX1
    z = (z ^ (z >> uint64(27))) * _MIX2
    return z ^ (z >> uint64(31))


@njit(cache=True, nogil=True, inline="always")
def xoshiro_next(s):
    result = _rotl(s[1] * uint64(5), 7) * uint64(9)
    t = s[1] << uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True, nogil=True, inline="always")
def xoshiro_uniform(s):
    return np.float64(xoshiro_next(s) >> uint64(11)) * (1.0 / 9007199254740992.0)


# ---------------------------------------------------------------------------
# Polar space enumeration.

@njit(cache=True, nogil=True)
def enumerate_lines(n, n_lines):
    """All totally isotropic lines of W(2n-1, 2) as sorted point-index triples.

    Point index ``i`` stands for canonical id ``i + 1``. A line {p, q, p^q} is
    emitted once, from its smallest point p and second point q < p^q, which
    makes the output lexicographically sorted.
    """
    mask = (1 << n) - 1
    total = 1 << (2 * n)
    lines = np.empty((n_lines, 3), dtype=np.int32)
    signs = np.empty(n_lines, dtype=np.int8)
    k = 0
    for p in range(1, total):
        zp = p >> n
        xp = p & mask
        yp = popcount64(zp & xp)
        for q in range(p + 1, total):
            r = p ^ q
            if r < q:
                continue
            zq = q >> n
            xq = q & mask
            if popcount64((zp & xq) ^ (xp & zq)) & 1:
                continue
            e = (
                yp
                + popcount64(zq & xq)
                + 2 * popcount64(zp & xq)
                - popcount64((zp ^ zq) & (xp ^ xq))
            ) & 3
            lines[k, 0] = p - 1
            lines[k, 1] = q - 1
            lines[k, 2] = r - 1
            signs[k] = 1 if e == 0 else -1
            k += 1
    return lines, signs, k


@njit(cache=True, nogil=True)
def build_csr(ctx, n_points):
    """Point -> incident context ids, as (offsets, indices)."""
    counts = np.zeros(n_points + 1, dtype=np.int64)
    for c in range(ctx.shape[0]):
        for j in range(3):
            counts[ctx[c, j] + 1] += 1
    for i in range(n_points):
        counts[i + 1] += counts[i]
    fill = counts[:-1].copy()
    indices = np.empty(counts[n_points], dtype=np.int32)
    for c in range(ctx.shape[0]):
        for j in range(3):
            o = ctx[c, j]
            indices[fill[o]] = c
            fill[o] += 1
    return counts, indices


# ---------------------------------------------------------------------------
# Local search.

@njit(cache=True, nogil=True)
def init_unsatisfied(ctx, eps, a, uns):
    """Fill ``uns`` from scratch and return the current distance."""
    uns[:] = 0
    d = 0
    for c in range(ctx.shape[0]):
        s = a[ctx[c, 0]] * a[ctx[c, 1]] * a[ctx[c, 2]]
        if s != eps[c]:
            d += 1
            uns[ctx[c, 0]] += 1
            uns[ctx[c, 1]] += 1
            uns[ctx[c, 2]] += 1
    return d


@njit(cache=True, nogil=True)
def flip_point(ctx, eps, offsets, incidence, a, uns, o):
    """Negate ``a[o]`` and update ``uns``; return the change in distance."""
    a[o] = -a[o]
    delta = 0
    for k in range(offsets[o], offsets[o + 1]):
        c = incidence[k]
        i0 = ctx[c, 0]
        i1 = ctx[c, 1]
        i2 = ctx[c, 2]
        if a[i0] * a[i1] * a[i2] == eps[c]:
            step = -1
        else:
            step = 1
        uns[i0] += step
        uns[i1] += step
        uns[i2] += step
        delta += step
    return delta


@njit(cache=True, nogil=True)
def run_sweeps(ctx, eps, offsets, incidence, a, uns, rng, theta, gamma,
               n_sweeps, first_iteration, distance, best_distance, best_a,
               trace_iter, trace_dist, n_trace):
    """Run ``n_sweeps`` outer iterations of the threshold local search.

    ``a``, ``uns``, ``rng``, ``best_a`` and the trace buffers are updated in
    place. Returns ``(distance, best_distance, best_iteration, n_trace,
    sweeps_done)``; ``best_iteration`` is -1 if no improvement happened.
    """
    n_points = a.shape[0]
    best_iteration = -1
    done = 0
    for it in range(n_sweeps):
        if distance == 0:
            break
        m = 0
        for o in range(n_points):
            if uns[o] > m:
                m = uns[o]
        threshold = theta * m
        for o in range(n_points):
            if uns[o] > threshold and xoshiro_uniform(rng) > gamma:
                distance += flip_point(ctx, eps, offsets, incidence, a, uns, o)
        done += 1
        if distance < best_distance:
            best_distance = distance
            best_iteration = first_iteration + it
            best_a[:] = a
            if n_trace < trace_iter.shape[0]:
                trace_iter[n_trace] = best_iteration
                trace_dist[n_trace] = best_distance
                n_trace += 1
    return distance, best_distance, best_iteration, n_trace, done


# ---------------------------------------------------------------------------
# Exact coset search.

@njit(cache=True, nogil=True)
def _weight(v):
    w = 0
    for j in range(v.shape[0]):
        w += popcount64(v[j])
    return w


@njit(cache=True, nogil=True)
def gray_walk(target, gens, start, stop):
    """Min and max of ``wt(target ^ w)`` over Gray-code indices [start, stop).

    ``gens`` is a (rank, words) uint64 matrix; index ``i`` denotes the codeword
    ``xor of gens[j]`` over the set bits ``j`` of ``i ^ (i >> 1)``.
    """
    words = target.shape[0]
    v = target.copy()
    g0 = start ^ (start >> 1)
    j = 0
    while g0:
        if g0 & 1:
            for t in range(words):
                v[t] ^= gens[j, t]
        g0 >>= 1
        j += 1
    w = _weight(v)
    lo = w
    hi = w
    for i in range(start + 1, stop):
        # bit flipped between gray(i-1) and gray(i) is the lowest set bit of i
        b = 0
        x = i
        while (x & 1) == 0:
            x >>= 1
            b += 1
        w = 0
        for t in range(words):
            v[t] ^= gens[b, t]
            w += popcount64(v[t])
        if w < lo:
            lo = w
        if w > hi:
            hi = w
    return lo, hi
