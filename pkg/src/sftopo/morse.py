"""Morse-Smale segmentation and separatrix geometry.

The descending segmentation labels every vertex with the minimum its
gradient path reaches; the ascending segmentation labels every d-cell
with the maximum its inverse path reaches (cells whose walk drains
through the boundary get label -1).  Separatrices are emitted as
barycentric polylines: minimum/saddle curves, saddle/maximum curves,
and (3D) saddle/saddle connectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gradient import (
    DiscreteGradient,
    _descend_children,
    trace_down_from_edge,
    trace_up_from_facet,
)
from .triangulation import SimplexRef


def descending_segmentation(grad: DiscreteGradient) -> np.ndarray:
    """Per-vertex label: the critical vertex its descending path reaches."""
    tri = grad.tri
    n = tri.simplex_count(0)
    labels = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        if labels[v] >= 0:
            continue
        path = []
        cur = v
        while labels[cur] < 0 and grad.pair_up[0][cur] >= 0:
            path.append(cur)
            e = int(grad.pair_up[0][cur])
            a, b = tri.simplex_vertices(SimplexRef(1, e))
            cur = int(b if a == cur else a)
        dest = labels[cur] if labels[cur] >= 0 else cur
        labels[cur] = dest
        for u in path:
            labels[u] = dest
    return labels


def ascending_segmentation(grad: DiscreteGradient) -> np.ndarray:
    """Per-d-cell label: the critical cell its ascending walk reaches.

    Walks that exit through a boundary facet get label -1.
    """
    tri, d = grad.tri, grad.tri.dim
    n = tri.simplex_count(d)
    labels = np.full(n, -2, dtype=np.int64)
    for y in range(n):
        if labels[y] != -2:
            continue
        path = []
        cur = y
        while labels[cur] == -2:
            if grad.pair_down[d][cur] < 0:      # critical cell
                labels[cur] = cur
                break
            path.append(cur)
            low = int(grad.pair_down[d][cur])
            nxt = [c for c in tri.cofaces(SimplexRef(d - 1, low), d)
                   if c != cur]
            if not nxt:                          # drains through the boundary
                labels[cur] = -1
                break
            cur = nxt[0]
        dest = labels[cur]
        for u in path:
            labels[u] = dest
    return labels


@dataclass
class Separatrix:
    """A polyline between two critical simplices.

    ``kind`` is "min-saddle", "saddle-max", or "saddle-saddle";
    ``source``/``target`` are (dim, id) pairs (target may be None when
    the path leaves the domain); ``points`` is an (n, 3) array.
    """

    kind: str
    source: tuple
    target: tuple | None
    points: np.ndarray


def _barycenter(tri, dim, sid) -> np.ndarray:
    verts = tri.simplex_vertices(SimplexRef(dim, sid))
    return np.mean([tri.vertex_point(v) for v in verts], axis=0)


def extract_separatrices(grad: DiscreteGradient) -> list:
    """All 1-separatrices of the gradient, deterministic order.

    Saddle/extremum curves follow the unique walks out of every
    critical (d-1)-simplex (up) and critical edge (down); in 3D one
    representative connector polyline is emitted per critical
    triangle/edge V-path family (the first path in depth-first order).
    """
    tri, d = grad.tri, grad.tri.dim
    out = []
    for e in grad.critical_ids(1):
        for path in trace_down_from_edge(grad, e):
            pts = [_barycenter(tri, 1, e)]
            for v, ee in path.pairs:
                pts.append(tri.vertex_point(v))
                pts.append(_barycenter(tri, 1, ee))
            pts.append(tri.vertex_point(path.lower))
            out.append(Separatrix("min-saddle", (1, e), (0, path.lower),
                                  np.array(pts)))
    for s in grad.critical_ids(d - 1):
        for path in trace_up_from_facet(grad, s):
            pts = [_barycenter(tri, d - 1, s)]
            for low, high in reversed(path.pairs):
                pts.append(_barycenter(tri, d, high))
                pts.append(_barycenter(tri, d - 1, low))
            target = None
            if path.upper is not None:
                pts.append(_barycenter(tri, d, path.upper))
                target = (d, path.upper)
            out.append(Separatrix("saddle-max", (d - 1, s), target,
                                  np.array(pts)))
    if d == 3:
        targets = set(grad.critical_ids(1))
        for tau in grad.critical_ids(2):
            for e, pairs in _first_connectors(grad, tau, targets).items():
                pts = [_barycenter(tri, 2, tau)]
                for low, high in pairs:
                    pts.append(_barycenter(tri, 1, low))
                    pts.append(_barycenter(tri, 2, high))
                pts.append(_barycenter(tri, 1, e))
                out.append(Separatrix("saddle-saddle", (2, tau), (1, e),
                                      np.array(pts)))
    return out


def _first_connectors(grad, tau, targets):
    """First (1,2) V-path from ``tau`` to each reachable critical edge."""
    found = {}

    def dfs(high, acc, seen):
        for low, nxt in _descend_children(grad, 1, high):
            if low in targets:
                found.setdefault(low, list(acc))
            elif nxt >= 0 and nxt not in seen:
                seen.add(nxt)
                dfs(nxt, acc + [(low, nxt)], seen)

    dfs(tau, [], {tau})
    return dict(sorted(found.items()))
