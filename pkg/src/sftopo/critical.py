"""Critical points of a piecewise-linear scalar field.

A vertex is classified by the connectivity of its lower and upper links:
the sub-complexes of its link spanned by vertices that come before
(resp. after) it in the total order.  Regular vertices have exactly one
lower and one upper component; minima have an empty lower link, maxima
an empty upper link, and saddles have more than one component on at
least one side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .order import OrderField
from .triangulation import SimplexRef, Triangulation


@dataclass(frozen=True)
class PLCriticalPoint:
    """A critical vertex of the field.

    ``index`` is 0 for minima, ``dim`` for maxima, otherwise the saddle
    index (1, or 2 in 3D).  ``multiplicity`` counts how many extra link
    components the saddle has (1 for simple saddles); it is 1 for
    extrema.  Degenerate 3D vertices whose lower *and* upper links are
    both disconnected are reported once per side, so the same vertex may
    appear with index 1 and index 2.
    """

    vertex: int
    index: int
    multiplicity: int
    value: float
    boundary: bool


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            return True
        return False

    def count(self):
        return sum(1 for x in self.parent if self.parent[x] == x)


def link_component_counts(tri: Triangulation, field: OrderField, v: int):
    """Number of connected components of the lower and upper link of ``v``."""
    d = tri.dim
    lower = _UnionFind([])
    upper = _UnionFind([])
    for f in tri.vertex_link(v):
        verts = tri.simplex_vertices(SimplexRef(d - 1, f))
        lo = [u for u in verts if field.less(u, v)]
        hi = [u for u in verts if not field.less(u, v)]
        for part, uf in ((lo, lower), (hi, upper)):
            for u in part:
                uf.parent.setdefault(u, u)
            for a, b in zip(part, part[1:]):
                uf.union(a, b)
    return lower.count(), upper.count()


def classify_vertex(tri: Triangulation, field: OrderField, v: int):
    """Classify one vertex; return a list of PLCriticalPoint (0-2 items)."""
    d = tri.dim
    n_lower, n_upper = link_component_counts(tri, field, v)
    if n_lower == 1 and n_upper == 1:
        return []
    boundary = tri.is_boundary(SimplexRef(0, v))
    value = float(field.values[v])
    out = []
    if n_lower == 0:
        out.append(PLCriticalPoint(v, 0, 1, value, boundary))
    elif n_lower >= 2:
        out.append(PLCriticalPoint(v, 1, n_lower - 1, value, boundary))
    if n_upper == 0:
        out.append(PLCriticalPoint(v, d, 1, value, boundary))
    elif n_upper >= 2 and d == 3:
        out.append(PLCriticalPoint(v, d - 1, n_upper - 1, value, boundary))
    elif n_upper >= 2 and d == 2 and n_lower < 2:
        # in 2D both sides describe the same saddle; report it once,
        # preferring the lower-link count when both are split
        out.append(PLCriticalPoint(v, 1, n_upper - 1, value, boundary))
    return out


def extract_critical_points(tri: Triangulation, field: OrderField):
    """All critical points, sorted by (vertex id, index).

    Requests the preconditions it needs (vertex links, cell vertex
    tables, boundary flags) on the triangulation.
    """
    if len(field) != tri.simplex_count(0):
        raise ValueError("field length does not match vertex count")
    for kind in ("vertex_stars", "vertex_links", "boundary_vertices"):
        tri.precondition(kind)
    out = []
    for v in range(tri.simplex_count(0)):
        out.extend(classify_vertex(tri, field, v))
    return out
