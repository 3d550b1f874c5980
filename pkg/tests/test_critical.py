"""PL critical point classification."""

import numpy as np

from conftest import random_field
from sftopo import OrderField, classify_vertex, extract_critical_points


def by_index(cps):
    out = {}
    for cp in cps:
        out.setdefault(cp.index, []).append(cp)
    return out


class TestF0:
    def test_classification(self, grid33, f0):
        cps = by_index(extract_critical_points(grid33, f0))
        assert sorted(cp.vertex for cp in cps[0]) == [0, 2]
        assert [(cp.vertex, cp.multiplicity) for cp in cps[1]] == [(1, 1)]
        assert [cp.vertex for cp in cps[2]] == [8]
        assert {cp.value for cp in cps[0]} == {0.0, 2.0}

    def test_boundary_flags(self, grid33, f0):
        cps = extract_critical_points(grid33, f0)
        assert all(cp.boundary for cp in cps)   # center vertex 4 is regular

    def test_regular_vertices_emit_nothing(self, grid33, f0):
        assert classify_vertex(grid33, f0, 4) == []


class TestOctahedron:
    def test_monotone_field(self, octahedron):
        # single descending sweep from pole 4 down to pole 5
        f = OrderField(np.array([1.0, 3.0, 2.0, 4.0, 5.0, 0.0]))
        cps = by_index(extract_critical_points(octahedron, f))
        assert [cp.vertex for cp in cps[0]] == [5]
        assert [cp.vertex for cp in cps[2]] == [4]
        assert 1 not in cps

    def test_two_minima_field(self, octahedron):
        # minima at the antipodal poles 4 and 5, joined at equator
        # vertex 0; the remaining equator vertices are regular
        f = OrderField(np.array([2.0, 5.0, 3.0, 4.0, 0.0, 1.0]))
        cps = by_index(extract_critical_points(octahedron, f))
        assert sorted(cp.vertex for cp in cps[0]) == [4, 5]
        assert [(cp.vertex, cp.multiplicity) for cp in cps[1]] == [(0, 1)]
        assert [cp.vertex for cp in cps[2]] == [1]

    def test_euler_relation_random(self, octahedron, octahedron_sub1):
        rng = np.random.default_rng(7)
        for tri in (octahedron, octahedron_sub1):
            for _ in range(10):
                cps = extract_critical_points(tri, random_field(tri, rng))
                total = sum(
                    cp.multiplicity * (-1) ** cp.index for cp in cps)
                assert total == 2
