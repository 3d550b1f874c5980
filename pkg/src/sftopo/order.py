"""Total vertex order for scalar fields with tie-breaking offsets.

A scalar field is made injective by pairing each value with an integer
offset: ``u < v`` iff ``f(u) < f(v)``, or ``f(u) == f(v)`` and
``O(u) < O(v)``.  All downstream algorithms consume only the resulting
rank permutation, so simplifying a field amounts to rewriting values and
offsets while keeping this interface stable.
"""

from __future__ import annotations

import numpy as np


class OrderField:
    """Scalar field plus injective tie-breaking offsets on the vertices.

    Parameters
    ----------
    values:
        One scalar per vertex.
    offsets:
        Integer tie-breaker per vertex; defaults to the vertex id.
        Must be injective (checked).

    Attributes
    ----------
    ranks:
        ``ranks[v]`` is the position of vertex ``v`` in the ascending
        total order; ``order[i]`` is the vertex with rank ``i``.
    """

    def __init__(self, values, offsets=None):
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("values must be one scalar per vertex")
        n = len(self.values)
        if offsets is None:
            offsets = np.arange(n, dtype=np.int64)
        else:
            offsets = np.asarray(offsets, dtype=np.int64)
            if offsets.shape != (n,):
                raise ValueError("offsets must match values in length")
            if len(np.unique(offsets)) != n:
                raise ValueError("offsets must be injective")
        self.offsets = offsets
        self.order = np.lexsort((self.offsets, self.values))
        self.ranks = np.empty(n, dtype=np.int64)
        self.ranks[self.order] = np.arange(n)

    def __len__(self) -> int:
        return len(self.values)

    def less(self, u: int, v: int) -> bool:
        """True iff ``u`` comes before ``v`` in the total order."""
        return self.ranks[u] < self.ranks[v]

    def max_vertex(self, vertices) -> int:
        """Order-highest vertex of a simplex (its defining vertex)."""
        best = vertices[0]
        for v in vertices[1:]:
            if self.ranks[v] > self.ranks[best]:
                best = v
        return int(best)

    def min_vertex(self, vertices) -> int:
        best = vertices[0]
        for v in vertices[1:]:
            if self.ranks[v] < self.ranks[best]:
                best = v
        return int(best)

    def simplex_value(self, vertices) -> float:
        """Field value at the order-highest vertex of the simplex."""
        return float(self.values[self.max_vertex(vertices)])

    def simplex_key(self, vertices) -> tuple:
        """Vertex ranks sorted descending; lexicographic comparison of
        these keys is the total order on simplices used by the gradient
        construction."""
        return tuple(sorted((int(self.ranks[v]) for v in vertices),
                            reverse=True))
