"""Common query interface shared by explicit meshes and implicit grids.

All traversal queries operate on ``SimplexRef`` handles, a ``(dim, id)``
pair where ``id`` indexes the simplices of that dimension.  Explicit
triangulations answer queries from lookup tables that must be requested
up front through :meth:`Triangulation.precondition`; implicit grids
answer every query arithmetically and treat preconditioning as a no-op.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple


class SimplexRef(NamedTuple):
    """Handle to a simplex: its dimension and its index in that dimension."""

    dim: int
    id: int


class TriangulationError(Exception):
    """Base class for triangulation construction and query errors."""


class NotPreconditionedError(TriangulationError):
    """A query was issued before its precondition call.

    Raised only by explicit triangulations; carries the name of the
    precondition kind that should have been requested.
    """

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(
            f"query requires precondition({kind!r}) to be called first"
        )


#: Recognized precondition kinds.  Implicit grids accept them all as
#: no-ops.  ``vertex_links`` caches the full (d-1)-link of every vertex,
#: the heaviest table, used by link-based classification loops.
QUERY_KINDS = (
    "vertex_neighbors",
    "vertex_edges",
    "vertex_triangles",
    "vertex_stars",
    "vertex_links",
    "edge_list",
    "triangle_list",
    "edge_triangles",
    "edge_stars",
    "triangle_stars",
    "triangle_edges",
    "cell_edges",
    "cell_triangles",
    "boundary_vertices",
    "boundary_edges",
    "boundary_triangles",
    "boundary_cells",
)


class Triangulation:
    """Abstract 2D/3D simplicial triangulation with face/co-face queries.

    Concrete subclasses: :class:`~sftopo.triangulation.ExplicitTriangulation`
    and :class:`~sftopo.triangulation.ImplicitGridTriangulation`.
    """

    dim: int  # dimensionality of the complex (2 or 3)

    # -- preconditioning ------------------------------------------------
    def precondition(self, kind: str) -> None:
        """Request a query kind; builds any lookup table it relies on."""
        raise NotImplementedError

    def preconditioned_kinds(self) -> frozenset:
        """Set of query kinds requested so far (introspection aid)."""
        raise NotImplementedError

    # -- counts and identity --------------------------------------------
    def simplex_count(self, dim: int) -> int:
        raise NotImplementedError

    def simplex_vertices(self, s: SimplexRef) -> tuple:
        """Ascending vertex ids spanning ``s``."""
        raise NotImplementedError

    def vertex_point(self, v: int):
        """3D coordinates of vertex ``v``."""
        raise NotImplementedError

    # -- traversal ------------------------------------------------------
    def faces(self, s: SimplexRef, k: int) -> list:
        """All k-faces of ``s``, ids ascending."""
        raise NotImplementedError

    def cofaces(self, s: SimplexRef, l: int) -> list:
        """All l-co-faces of ``s``, ids ascending."""
        raise NotImplementedError

    def is_boundary(self, s: SimplexRef) -> bool:
        raise NotImplementedError

    # -- conveniences ---------------------------------------------------
    def vertex_neighbors(self, v: int) -> list:
        """Vertex ids sharing an edge with ``v``, ascending."""
        out = set()
        for e in self.cofaces(SimplexRef(0, v), 1):
            a, b = self.simplex_vertices(SimplexRef(1, e))
            out.add(b if a == v else a)
        return sorted(out)

    def vertex_link(self, v: int) -> list:
        """(d-1)-simplices opposite ``v`` in its star, ids ascending."""
        d = self.dim
        link = []
        for c in self.cofaces(SimplexRef(0, v), d):
            verts = self.simplex_vertices(SimplexRef(d, c))
            opp = tuple(u for u in verts if u != v)
            for f in self.faces(SimplexRef(d, c), d - 1):
                if self.simplex_vertices(SimplexRef(d - 1, f)) == opp:
                    link.append(f)
                    break
        return sorted(link)

    def all_simplices(self, dim: int) -> Iterable[SimplexRef]:
        return (SimplexRef(dim, i) for i in range(self.simplex_count(dim)))


def validate_pseudo_manifold(t: Triangulation) -> list:
    """Return the (d-1)-simplices with more than two d-co-faces.

    An empty list means the complex passes the pseudo-manifold check
    required by the downstream gradient and tree modules.
    """
    d = t.dim
    bad = []
    for i in range(t.simplex_count(d - 1)):
        if len(t.cofaces(SimplexRef(d - 1, i), d)) > 2:
            bad.append(SimplexRef(d - 1, i))
    return bad
