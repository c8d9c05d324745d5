"""Combinatorial classification of unsatisfied configurations.

Every function here accepts either an :class:`UnsatisfiedConfiguration` or a
plain ``(l, 3)`` array of global point indices (one row per line), so the same
code analyses solver output, fixtures loaded from disk and hand-made
sub-configurations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .configuration import UnsatisfiedConfiguration, restrict
from .exceptions import ClassificationError
from .graphs import SimpleGraph, incidence_graph
from .polar_space import QuadricKind, iter_quadrics


def as_lines(obj) -> np.ndarray:
    """Rows of global point indices for an unsatisfied configuration or line array."""
    if isinstance(obj, UnsatisfiedConfiguration):
        return obj.lines.astype(np.int64)
    arr = np.asarray(obj, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 3), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (l, 3) array of point indices, got shape {arr.shape}")
    return arr


def point_degrees(obj) -> dict[int, int]:
    """Number of given lines through each covered point."""
    pts, counts = np.unique(as_lines(obj), return_counts=True)
    return dict(zip(pts.tolist(), counts.tolist()))


@dataclass(frozen=True)
class DegreeProfile:
    """Histogram degree -> number of points of that degree."""

    histogram: dict
    covered_point_count: int
    total_context_count: int

    def __post_init__(self):
        assert sum(d * c for d, c in self.histogram.items()) == 3 * self.total_context_count

    def to_dict(self) -> dict:
        return {"histogram": {str(k): v for k, v in self.histogram.items()},
                "covered_point_count": self.covered_point_count,
                "total_context_count": self.total_context_count}

    def __str__(self) -> str:
        parts = ", ".join(f"{c} points of degree {d}" for d, c in self.histogram.items())
        return f"{self.total_context_count} lines on {self.covered_point_count} points: {parts}"


@dataclass(frozen=True)
class LineTypeProfile:
    """Histogram sorted degree triple -> number of lines of that type."""

    classes: dict

    @property
    def total_context_count(self) -> int:
        return sum(self.classes.values())

    def to_dict(self) -> dict:
        return {",".join(map(str, k)): v for k, v in self.classes.items()}

    def __str__(self) -> str:
        return ", ".join(f"{v} lines of type {k}" for k, v in self.classes.items())


def degree_profile(obj) -> DegreeProfile:
    lines = as_lines(obj)
    deg = point_degrees(lines)
    hist = dict(sorted(Counter(deg.values()).items()))
    return DegreeProfile(hist, len(deg), len(lines))


def line_types(obj) -> np.ndarray:
    """(l, 3) array holding the sorted degrees of each line's points."""
    lines = as_lines(obj)
    if len(lines) == 0:
        return np.zeros((0, 3), dtype=np.int64)
    pts, inverse, counts = np.unique(lines, return_inverse=True, return_counts=True)
    return np.sort(counts[inverse.reshape(lines.shape)], axis=1)


def line_type_profile(obj) -> LineTypeProfile:
    types = line_types(obj)
    counts = Counter(tuple(int(x) for x in row) for row in types)
    return LineTypeProfile(dict(sorted(counts.items())))


def lines_of_type(obj, line_type) -> np.ndarray:
    """The lines whose point degrees (within ``obj``) form ``line_type``."""
    lines = as_lines(obj)
    key = np.sort(np.asarray(line_type, dtype=np.int64))
    return lines[np.all(line_types(lines) == key, axis=1)]


def skeleton_graph(obj, line_type, vertex_degree: int, mid_degree: int) -> SimpleGraph:
    """Graph on the ``vertex_degree`` points of a line class, one edge per line.

    Degrees are measured in the whole of ``obj``. Each line of the class must
    have two points of degree ``vertex_degree`` and one of ``mid_degree``;
    the two former become the ends of an edge. Vertex labels are the global
    point indices.
    """
    lines = as_lines(obj)
    deg = point_degrees(lines)
    sub = lines_of_type(lines, line_type)
    if len(sub) == 0:
        raise ClassificationError(f"no lines of type {tuple(line_type)}")
    ends = []
    for row in sub:
        d = [deg[int(x)] for x in row]
        verts = [int(x) for x, dx in zip(row, d) if dx == vertex_degree]
        mids = [int(x) for x, dx in zip(row, d) if dx == mid_degree]
        if vertex_degree == mid_degree or len(verts) != 2 or len(mids) != 1:
            raise ClassificationError(
                f"line {row.tolist()} with degrees {d} does not have two degree-{vertex_degree} "
                f"points and one degree-{mid_degree} point")
        ends.append(verts)
    vertices = np.unique(np.asarray(ends))
    local = np.searchsorted(vertices, np.asarray(ends))
    try:
        return SimpleGraph.from_edges(len(vertices), local, labels=vertices.tolist())
    except ValueError as exc:  # two lines over the same pair of vertices
        raise ClassificationError(str(exc)) from exc


def connected_components(obj, via=None) -> list[np.ndarray]:
    """Split lines into classes connected through shared points.

    With ``via`` (global point indices) only those points link lines, so a
    family sharing some hub points can still fall apart into pieces.
    Components are returned largest first, ties by smallest line row.
    """
    lines = as_lines(obj)
    if len(lines) == 0:
        return []
    pts, inverse = np.unique(lines, return_inverse=True)
    inverse = inverse.reshape(lines.shape)
    if via is not None:
        # give every non-linking occurrence a private node of its own
        linking = np.isin(pts, np.asarray(via, dtype=np.int64))[inverse]
        private = len(pts) + np.arange(inverse.size).reshape(inverse.shape)
        inverse = np.where(linking, inverse, private)
    parent = np.arange(int(inverse.max()) + 1)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c in inverse:
        ra, rb, rc = find(a), find(b), find(c)
        parent[rb] = ra
        parent[find(rc)] = ra
    roots = np.array([find(inverse[i, 0]) for i in range(len(lines))])
    groups = [lines[roots == r] for r in dict.fromkeys(roots.tolist())]
    groups.sort(key=lambda g: (-len(g), g[0].tolist()))
    return groups


def points_of_degree(obj, degree: int) -> np.ndarray:
    """Global indices of the points lying on exactly ``degree`` of the lines."""
    deg = point_degrees(obj)
    return np.array(sorted(p for p, d in deg.items() if d == degree), dtype=np.int64)


def recognize_hexagon(obj) -> bool:
    """True for a (63_3) configuration whose incidence graph has girth 12.

    This is the combinatorial profile of a generalized hexagon of order
    (2, 2); the split Cayley hexagon and its dual are not told apart.
    """
    lines = as_lines(obj)
    if len(lines) != 63:
        return False
    deg = point_degrees(lines)
    if len(deg) != 63 or set(deg.values()) != {3}:
        return False
    if any(len(set(row.tolist())) != 3 for row in lines):
        return False
    g, _ = incidence_graph(lines)
    return g.girth() == 12


def dw52_profile(obj) -> bool:
    """True for 135 points and 315 lines with every point on exactly 7 lines."""
    lines = as_lines(obj)
    prof = degree_profile(lines)
    return prof.total_context_count == 315 and prof.histogram == {7: 135}


# Reference profiles of minimal unsatisfied configurations at four and six qubits.
ELLIPTIC_4_DEGREES = {3: 14, 7: 21, 9: 84}
ELLIPTIC_4_LINES = {(3, 3, 7): 21, (7, 9, 9): 126, (9, 9, 9): 168}
FULL_4_DEGREES = {7: 30, 19: 105, 21: 120}
FULL_4_LINES = {(7, 7, 19): 105, (19, 19, 19): 210, (19, 21, 21): 1260}
FULL_6_DEGREES = {192: 126, 412: 3969}
FULL_6_LINES = {(192, 192, 192): 126, (192, 412, 412): 23814, (412, 412, 412): 529200}


def matches_profile(obj, degrees: dict, line_classes: dict) -> bool:
    return degree_profile(obj).histogram == degrees and line_type_profile(obj).classes == line_classes


@dataclass(frozen=True)
class RestrictionReport:
    """Outcome of intersecting an unsatisfied configuration with every quadric of one kind."""

    kind: QuadricKind
    n_quadrics: int
    n_matching: int
    profiles: dict  # (degree histogram, line classes) as sorted tuples -> quadric count

    @property
    def holds_for_all(self) -> bool:
        return self.n_matching == self.n_quadrics

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n_quadrics": self.n_quadrics, "n_matching": self.n_matching,
                "holds_for_all": self.holds_for_all,
                "profiles": [{"degrees": dict(d), "line_types": {",".join(map(str, k)): v for k, v in t},
                              "quadrics": n} for (d, t), n in self.profiles.items()]}


def restriction_report(uns: UnsatisfiedConfiguration, kind, predicate) -> RestrictionReport:
    """Restrict ``uns`` to each quadric of ``kind`` and count where ``predicate`` holds.

    ``predicate`` receives the restricted line array. The identity-indexed
    hyperbolic quadric is included, so every quadric of the family is seen.
    """
    kind = QuadricKind(kind)
    hits = 0
    total = 0
    seen: Counter = Counter()
    for q in iter_quadrics(uns.space, kind):
        sub = as_lines(restrict(uns, q.members))
        total += 1
        hits += bool(predicate(sub))
        key = (tuple(degree_profile(sub).histogram.items()), tuple(line_type_profile(sub).classes.items()))
        seen[key] += 1
    return RestrictionReport(kind, total, hits, dict(seen))


def elliptic_restriction_criterion(uns: UnsatisfiedConfiguration) -> RestrictionReport:
    """Four-qubit check: every elliptic section carries the minimal elliptic profile."""
    return restriction_report(uns, QuadricKind.ELLIPTIC,
                              lambda s: matches_profile(s, ELLIPTIC_4_DEGREES, ELLIPTIC_4_LINES))


def hyperbolic_restriction_criterion(uns: UnsatisfiedConfiguration) -> RestrictionReport:
    """Four-qubit check: hyperbolic sections with the DW(5,2) profile."""
    return restriction_report(uns, QuadricKind.HYPERBOLIC, dw52_profile)


def known_structure_report(obj) -> dict:
    """Check the graph and geometry claims that apply to a recognised profile.

    Returns a dict with the name of the matched reference profile (or None)
    and one boolean per structural claim tested.
    """
    from .graphs import coxeter_graph, graphs_isomorphic, heawood_graph, point_hyperplane_graph

    lines = as_lines(obj)
    checks: dict = {}
    if matches_profile(lines, ELLIPTIC_4_DEGREES, ELLIPTIC_4_LINES):
        name = "minimal elliptic, four qubits"
        heawood_lines = lines_of_type(lines, (3, 3, 7))
        checks["heawood_skeleton"] = graphs_isomorphic(skeleton_graph(lines, (3, 3, 7), 3, 7), heawood_graph())
        comps = connected_components(lines_of_type(lines, (7, 9, 9)), via=points_of_degree(lines, 9))
        checks["coxeter_components"] = len(comps)
        checks["coxeter_skeletons"] = len(comps) == 3 and all(
            graphs_isomorphic(skeleton_graph(c, (2, 3, 3), 3, 2), coxeter_graph()) for c in comps)
        checks["hexagons_with_heawood_lines"] = len(comps) == 3 and all(
            recognize_hexagon(np.vstack([heawood_lines, c])) for c in comps)
    elif dw52_profile(lines):
        name = "DW(5,2) profile"
        checks["dw52_profile"] = True
    elif matches_profile(lines, FULL_4_DEGREES, FULL_4_LINES):
        name = "minimal full space, four qubits"
        checks["pg32_point_plane_skeleton"] = graphs_isomorphic(
            skeleton_graph(lines, (7, 7, 19), 7, 19), point_hyperplane_graph(3))
    elif matches_profile(lines, FULL_6_DEGREES, FULL_6_LINES):
        name = "minimal full space, six qubits"
        comps = connected_components(lines_of_type(lines, (192, 192, 192)))
        checks["solid_line_components"] = [len(c) for c in comps]
        checks["solid_components_are_hexagons"] = len(comps) == 2 and all(recognize_hexagon(c) for c in comps)
    else:
        name = None
    return {"reference_profile": name, "checks": checks}


def restriction_criteria_report(uns: UnsatisfiedConfiguration) -> dict:
    """Sections by elliptic and hyperbolic quadrics with the four-qubit verdicts.

    The verdicts compare against the known minimal four-qubit profiles; for
    other qubit counts only the section profiles are reported.
    """
    out = {}
    ell = elliptic_restriction_criterion(uns) if uns.space.n_qubits >= 2 else None
    hyp = hyperbolic_restriction_criterion(uns)
    for key, rep in (("elliptic", ell), ("hyperbolic", hyp)):
        if rep is None:
            continue
        d = rep.to_dict()
        if uns.space.n_qubits != 4:
            d.pop("n_matching")
            d.pop("holds_for_all")
        out[key] = d
    return out
