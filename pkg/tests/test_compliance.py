"""Matching of critical points to critical simplices and cancellation."""

import numpy as np

from conftest import random_field
from sftopo import (
    ImplicitGridTriangulation,
    SimplexRef,
    build_gradient,
    enforce_compliance,
    extract_critical_points,
    gradient_is_acyclic,
    match_critical_simplices,
)


def star_has_critical(tri, grad, cp):
    if cp.index == 0:
        return grad.is_critical(0, cp.vertex)
    star = tri.cofaces(SimplexRef(0, cp.vertex), cp.index)
    return any(grad.is_critical(cp.index, s) for s in star)


class TestMatching:
    def test_every_interior_point_matched(self, octahedron_sub1):
        rng = np.random.default_rng(11)
        for _ in range(10):
            f = random_field(octahedron_sub1, rng)
            g = build_gradient(octahedron_sub1, f)
            report = match_critical_simplices(octahedron_sub1, f, g)
            assert report.match_failures == []

    def test_star_property_on_grid_interior(self):
        tri = ImplicitGridTriangulation((6, 6))
        rng = np.random.default_rng(12)
        for _ in range(10):
            f = random_field(tri, rng)
            g = build_gradient(tri, f)
            for cp in extract_critical_points(tri, f):
                if not cp.boundary:
                    assert star_has_critical(tri, g, cp)

    def test_multiplicity_claims_several_simplices(self, octahedron_sub2):
        rng = np.random.default_rng(13)
        for _ in range(5):
            f = random_field(octahedron_sub2, rng)
            g = build_gradient(octahedron_sub2, f)
            report = match_critical_simplices(octahedron_sub2, f, g)
            for cp in extract_critical_points(octahedron_sub2, f):
                got = report.matched.get((cp.vertex, cp.index))
                if got is not None:
                    assert len(got) == cp.multiplicity


class TestEnforcement:
    def test_closed_surface_counts(self, octahedron, octahedron_sub1,
                                   octahedron_sub2):
        rng = np.random.default_rng(14)
        for tri in (octahedron, octahedron_sub1, octahedron_sub2):
            for _ in range(5):
                f = random_field(tri, rng)
                g = build_gradient(tri, f)
                report = enforce_compliance(tri, f, g)
                assert report.compliant
                pl = {}
                for cp in extract_critical_points(tri, f):
                    pl[cp.index] = pl.get(cp.index, 0) + cp.multiplicity
                for k in range(3):
                    assert len(g.critical_ids(k)) == pl.get(k, 0)
                assert gradient_is_acyclic(g)

    def test_3d_enforcement_reduces_residue(self):
        tri = ImplicitGridTriangulation((5, 5, 5))
        f = random_field(tri, np.random.default_rng(15))
        g = build_gradient(tri, f)
        before = match_critical_simplices(tri, f, g)
        n_before = sum(len(v) for v in before.spurious.values())
        report = enforce_compliance(tri, f, g)
        n_after = sum(len(v) for v in report.spurious.values())
        assert not report.match_failures
        assert n_after <= n_before
        assert gradient_is_acyclic(g)
