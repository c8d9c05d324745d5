import itertools

import numpy as np
import pytest

from conftest import cached_space, dense
from qcontext.exceptions import CapabilityError, InvalidIndexError
from qcontext.pauli import Observable, commute, parse_observable
from qcontext.polar_space import (
    QuadricKind,
    build_space,
    canonical_hyperbolic_quadric,
    iter_quadrics,
    line_count,
    lines_per_point,
    negative_line_distribution,
    point_count,
    quadric,
    quadric_family_size,
    quadric_point_count,
)


class TestCounts:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_formulas_match_enumeration(self, n):
        s = cached_space(n)
        assert s.n_points == point_count(n)
        assert s.n_lines == line_count(n)
        if s.n_lines:
            assert np.all(np.diff(s.point_to_lines[0]) == lines_per_point(n))

    def test_single_qubit_has_no_lines(self):
        s = cached_space(1)
        assert s.n_points == 3 and s.n_lines == 0

    @pytest.mark.parametrize("bad", [0, 8, -1, 2.0])
    def test_out_of_range(self, bad):
        with pytest.raises(CapabilityError):
            build_space(bad)


class TestLines:
    def test_lines_sorted_and_closed(self, space3):
        ln = space3.lines.astype(np.int64) + 1  # canonical ids
        assert np.all(ln[:, 0] < ln[:, 1]) and np.all(ln[:, 1] < ln[:, 2])
        assert np.all((ln[:, 0] ^ ln[:, 1]) == ln[:, 2])
        keys = [tuple(r) for r in space3.lines.tolist()]
        assert keys == sorted(keys)

    def test_signs_against_matrices(self, space2):
        for (a, b, c), s in zip(space2.lines, space2.signs):
            prod = dense(space2.label(a)) @ dense(space2.label(b)) @ dense(space2.label(c))
            assert np.allclose(prod, s * np.eye(4))

    def test_line_lookup(self, space3):
        for k in (0, 17, space3.n_lines - 1):
            a, b, c = space3.lines[k]
            assert space3.line_index(c, a, b) == k
        with pytest.raises(KeyError):
            space3.line_index(0, 1, 3)  # ids 1 ^ 2 != 4

    def test_index_of(self, space2):
        assert space2.index_of("IX") == 0
        assert space2.label(space2.index_of("ZY")) == "ZY"
        with pytest.raises(InvalidIndexError):
            space2.index_of("II")
        with pytest.raises(InvalidIndexError):
            space2.index_of("XYZ")

    def test_lines_through(self, space3):
        p = space3.index_of("XYZ")
        for line in space3.lines_through(p):
            assert p in space3.lines[line]


class TestQuadrics:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("kind", ["hyperbolic", "elliptic"])
    def test_family_sizes_and_point_counts(self, n, kind):
        s = cached_space(n)
        qs = list(iter_quadrics(s, kind))
        assert len(qs) == quadric_family_size(n, kind)
        assert {q.n_points for q in qs} == {quadric_point_count(n, kind)}
        assert len({q.n_lines for q in qs}) == 1

    def test_membership_rule(self, space2):
        # symmetric points commuting with the index, or skew points anticommuting with it
        q = quadric(space2, "XZ")
        for i, obs in enumerate(space2.points):
            sym = obs.y_count % 2 == 0
            comm = commute(obs, parse_observable("XZ"))
            assert q.members[i] == (sym == comm)

    def test_identity_quadric_is_symmetric_points(self, space3):
        q = canonical_hyperbolic_quadric(space3)
        syms = [i for i, o in enumerate(space3.points) if o.y_count % 2 == 0]
        assert q.point_indices.tolist() == syms
        assert q.kind is QuadricKind.HYPERBOLIC

    def test_identity_index_rejected(self, space2):
        with pytest.raises(InvalidIndexError):
            quadric(space2, Observable.identity(2))

    def test_kind_from_index(self, space3):
        assert quadric(space3, "XZI").kind is QuadricKind.HYPERBOLIC
        assert quadric(space3, "IIY").kind is QuadricKind.ELLIPTIC

    def test_elliptic_two_qubits_has_no_lines(self, space2):
        assert {q.n_lines for q in iter_quadrics(space2, "elliptic")} == {0}

    def test_lines_inside_quadric(self, space3):
        q = quadric(space3, "YYY")
        assert np.all(q.members[space3.lines[q.line_ids]])
        outside = np.setdiff1d(np.arange(space3.n_lines), q.line_ids)
        assert not np.any(q.members[space3.lines[outside]].all(axis=1))

    def test_distribution_totals(self, space3):
        for kind in QuadricKind:
            dist = negative_line_distribution(space3, kind)
            assert sum(dist.values()) == quadric_family_size(3, kind)


def test_negative_lines_per_point_brute_force(space2):
    """Negative lines found by the kernel equal those found by brute force over triples."""
    labels = [space2.label(i) for i in range(space2.n_points)]
    neg = set()
    for a, b, c in itertools.combinations(range(15), 3):
        A, B, C = (dense(labels[i]) for i in (a, b, c))
        prod = A @ B @ C
        if np.allclose(A @ B, B @ A) and np.allclose(prod, -np.eye(4)):
            neg.add((a, b, c))
    got = {tuple(r) for r, s in zip(space2.lines.tolist(), space2.signs) if s < 0}
    assert got == neg
