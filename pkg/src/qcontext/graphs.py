"""Small undirected graphs, reference constructions and isomorphism tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .exceptions import CapabilityError

MAX_ISO_VERTICES = 256


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertices ``0..n_vertices-1`` without loops or multi-edges.

    ``labels`` optionally names the vertices (e.g. observable strings).
    """

    n_vertices: int
    edges: frozenset
    labels: tuple | None = None

    @classmethod
    def from_edges(cls, n_vertices: int, edges, labels=None) -> "SimpleGraph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n_vertices - 1}")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise ValueError(f"repeated edge {e}")
            norm.add(e)
        return cls(int(n_vertices), frozenset(norm), tuple(labels) if labels is not None else None)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n_vertices, self.n_vertices), dtype=np.uint8)
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def is_regular(self, k: int | None = None) -> bool:
        d = self.degrees()
        if len(d) == 0:
            return True
        return bool(np.all(d == d[0]) and (k is None or d[0] == k))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    def girth(self) -> float:
        return nx.girth(self.to_networkx())

    def is_bipartite(self) -> bool:
        return nx.is_bipartite(self.to_networkx())

    def relabel(self, perm) -> "SimpleGraph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        perm = np.asarray(perm)
        return SimpleGraph.from_edges(self.n_vertices, ((perm[u], perm[v]) for u, v in self.edges))


def haar_graph(n: int) -> SimpleGraph:
    """Haar graph H(n) on 2k vertices, k the bit length of n.

    With ``n = sum b_j 2**j``, vertex ``u_i`` (index ``i``) is joined to
    ``v_{(i+j) mod k}`` (index ``k + (i+j) mod k``) whenever ``b_j = 1``.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    k = int(n).bit_length()
    bits = [j for j in range(k) if (n >> j) & 1]
    return SimpleGraph.from_edges(2 * k, ((i, k + (i + j) % k) for i in range(k) for j in bits))


def _nonzero_vectors(dim: int) -> list[int]:
    return list(range(1, 1 << dim))


def point_hyperplane_graph(d: int) -> SimpleGraph:
    """Point-hyperplane incidence graph of PG(d, 2).

    Points are the nonzero vectors of F_2^{d+1} (first block of vertices),
    hyperplanes the nonzero functionals (second block); a point lies on a
    hyperplane when the functional vanishes on it.
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    vecs = _nonzero_vectors(d + 1)
    m = len(vecs)
    edges = [(i, m + j) for i, x in enumerate(vecs) for j, f in enumerate(vecs)
             if (x & f).bit_count() % 2 == 0]
    return SimpleGraph.from_edges(2 * m, edges)


def complete_bipartite(m: int, n: int | None = None) -> SimpleGraph:
    n = m if n is None else n
    return SimpleGraph.from_edges(m + n, ((i, m + j) for i in range(m) for j in range(n)))


# Vertices are the 28 three-subsets of {0..6} that are not lines of the Fano
# plane {i, i+1, i+3 mod 7}, in lexicographic order; edges join disjoint ones.
_COXETER_EDGES = (
    (0, 25), (0, 26), (0, 27), (1, 21), (1, 24), (1, 26), (2, 20), (2, 21), (2, 23),
    (3, 20), (3, 22), (3, 25), (4, 18), (4, 19), (4, 27), (5, 16), (5, 17), (5, 26),
    (6, 15), (6, 17), (6, 19), (7, 13), (7, 14), (7, 24), (8, 14), (8, 19), (8, 23),
    (9, 13), (9, 18), (9, 22), (10, 12), (10, 13), (10, 16), (11, 12), (11, 15), (11, 20),
    (12, 27), (14, 25), (15, 24), (16, 23), (17, 22), (18, 21),
)


def coxeter_graph() -> SimpleGraph:
    """The Coxeter graph from a fixed 28-vertex edge table, checked on construction."""
    g = SimpleGraph.from_edges(28, _COXETER_EDGES)
    if not (g.n_edges == 42 and g.is_regular(3) and g.girth() == 7):
        raise AssertionError("Coxeter edge table is corrupt")
    return g


# Standard LCF [5, -5]^7 drawing of the Heawood graph.
def heawood_graph() -> SimpleGraph:
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + (5 if i % 2 == 0 else -5)) % 14) for i in range(0, 14, 2)]
    return SimpleGraph.from_edges(14, edges)


def _distance_signature(g: nx.Graph):
    rows = []
    for _, lengths in nx.all_pairs_shortest_path_length(g):
        rows.append(tuple(sorted(np.bincount(list(lengths.values())).tolist())))
    return sorted(rows)


def graphs_isomorphic(g1: SimpleGraph, g2: SimpleGraph) -> bool:
    """Exact isomorphism test for graphs of at most 256 vertices.

    Cheap invariants (order, size, degree sequence, per-vertex distance
    distributions) are compared first; the exact decision is VF2 matching.
    """
    for g in (g1, g2):
        if g.n_vertices > MAX_ISO_VERTICES:
            raise CapabilityError(
                f"isomorphism test limited to {MAX_ISO_VERTICES} vertices, got {g.n_vertices}")
    if g1.n_vertices != g2.n_vertices or g1.n_edges != g2.n_edges:
        return False
    if not np.array_equal(np.sort(g1.degrees()), np.sort(g2.degrees())):
        return False
    n1, n2 = g1.to_networkx(), g2.to_networkx()
    if _distance_signature(n1) != _distance_signature(n2):
        return False
    return nx.is_isomorphic(n1, n2)


def incidence_graph(lines) -> tuple[SimpleGraph, np.ndarray]:
    """Bipartite point-line incidence graph of a list of point triples.

    Returns the graph (points first, then lines) and the sorted point ids.
    """
    lines = np.asarray(lines, dtype=np.int64).reshape(-1, 3)
    pts = np.unique(lines)
    local = np.searchsorted(pts, lines)
    p = len(pts)
    edges = [(int(local[i, j]), p + i) for i in range(len(lines)) for j in range(3)]
    return SimpleGraph.from_edges(p + len(lines), edges), pts


def collinearity_graph(lines) -> tuple[SimpleGraph, np.ndarray]:
    """Graph joining two points when some given line contains both."""
    lines = np.asarray(lines, dtype=np.int64).reshape(-1, 3)
    pts = np.unique(lines)
    local = np.searchsorted(pts, lines)
    edges = {tuple(sorted((int(a), int(b)))) for row in local for a, b in itertools.combinations(row, 2)}
    return SimpleGraph.from_edges(len(pts), edges), pts
