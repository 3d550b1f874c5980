"""Implicit triangulation of a regular grid (no stored connectivity).

Quads are split into 2 triangles along the (i,j) -> (i+1,j+1) diagonal;
voxels into the 6 tetrahedra of the Kuhn subdivision along the main
diagonal (i,j,k) -> (i+1,j+1,k+1).  Every simplex is translation of one
of a small set of *classes* (offset patterns anchored at its lowest
vertex), so identifiers can be laid out as contiguous per-class blocks
in row-major anchor order, and face/co-face queries reduce to adding a
precomputed per-class stencil of (class, anchor-delta) entries plus a
range check near the grid border.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .base import SimplexRef, Triangulation, TriangulationError


# --------------------------------------------------------------------------
# Simplex classes of the Kuhn subdivision, derived from the cell classes.
# --------------------------------------------------------------------------

def _cell_classes(gdim):
    """Vertex-offset patterns of the d-cells tiling one grid cell."""
    if gdim == 2:
        return [
            ((0, 0), (1, 0), (1, 1)),  # below the main diagonal
            ((0, 0), (0, 1), (1, 1)),  # above the main diagonal
        ]
    cells = []
    for perm in permutations(range(3)):
        v = [0, 0, 0]
        chain = [tuple(v)]
        for ax in perm:
            v[ax] += 1
            chain.append(tuple(v))
        cells.append(tuple(chain))
    return cells


def _offset_key(off):
    # axis-aligned before diagonal, x-fastest within: gives the paper's
    # horizontal / vertical / diagonal edge-block order in 2D
    return (sum(off), tuple(reversed(off)))


def _normalize(offsets):
    lo = tuple(min(o[a] for o in offsets) for a in range(len(offsets[0])))
    shifted = [tuple(o[a] - lo[a] for a in range(len(lo))) for o in offsets]
    return tuple(sorted(shifted, key=_offset_key)), lo


_EDGE_NAMES_2D = ("horizontal", "vertical", "diagonal")
_EDGE_NAMES_3D = (
    "axis_x", "axis_y", "axis_z",
    "diag_xy", "diag_xz", "diag_yz",
    "diag_xyz",
)


@dataclass(frozen=True)
class _SimplexClass:
    offsets: tuple        # vertex offsets, sorted by _offset_key
    support: tuple        # per axis: 1 if some offset spans it


@lru_cache(maxsize=None)
def _classes(gdim):
    """classes[k] = ordered list of _SimplexClass for k-simplices."""
    per_dim = []
    cells = _cell_classes(gdim)
    for k in range(gdim + 1):
        seen = {}
        for cell in cells:
            for sub in combinations(cell, k + 1):
                offs, _ = _normalize(sub)
                seen.setdefault(offs, None)
        ordered = sorted(seen, key=lambda offs: [_offset_key(o) for o in offs])
        per_dim.append([
            _SimplexClass(
                offs,
                tuple(int(any(o[a] for o in offs)) for a in range(gdim)),
            )
            for offs in ordered
        ])
    return per_dim


@lru_cache(maxsize=None)
def _face_stencils(gdim):
    """stencil[(i, ci, k)] = [(ck, delta), ...] for the k-faces."""
    classes = _classes(gdim)
    index = [
        {c.offsets: j for j, c in enumerate(dim_classes)}
        for dim_classes in classes
    ]
    out = {}
    for i in range(1, gdim + 1):
        for ci, cls in enumerate(classes[i]):
            for k in range(i):
                entries = []
                for sub in combinations(cls.offsets, k + 1):
                    offs, delta = _normalize(sub)
                    entries.append((index[k][offs], delta))
                out[(i, ci, k)] = entries
    return out


@lru_cache(maxsize=None)
def _coface_stencils(gdim):
    """stencil[(i, ci, l)] = [(cl, delta), ...]; delta in {-1, 0}^gdim."""
    classes = _classes(gdim)
    out = {}
    deltas = list(product((-1, 0), repeat=gdim))
    for i in range(gdim):
        for ci, cls in enumerate(classes[i]):
            mine = set(cls.offsets)
            for l in range(i + 1, gdim + 1):
                entries = []
                for cl, cand in enumerate(classes[l]):
                    cand_offs = set(cand.offsets)
                    for delta in deltas:
                        shifted = {
                            tuple(o[a] - delta[a] for a in range(gdim))
                            for o in mine
                        }
                        if shifted <= cand_offs:
                            entries.append((cl, delta))
                out[(i, ci, l)] = entries
    return out


# --------------------------------------------------------------------------


class ImplicitGridTriangulation(Triangulation):
    """Freudenthal/Kuhn triangulation of a regular grid, queried on the fly.

    Parameters
    ----------
    dims:
        Vertex counts per axis, ``(w, h)`` or ``(w, h, depth)``, each >= 2.
    """

    def __init__(self, dims):
        dims = tuple(int(n) for n in dims)
        if len(dims) not in (2, 3):
            raise TriangulationError("grid dims must have 2 or 3 axes")
        if any(n < 2 for n in dims):
            raise TriangulationError("each grid axis needs at least 2 vertices")
        self.dims = dims
        self.dim = len(dims)
        self._classes = _classes(self.dim)
        self._faces = _face_stencils(self.dim)
        self._cofaces = _coface_stencils(self.dim)
        # per dimension: anchor grid shape, block start, block size per class
        self._blocks = []
        for k in range(self.dim + 1):
            blocks, start = [], 0
            for cls in self._classes[k]:
                shape = tuple(
                    n - 1 if s else n for n, s in zip(dims, cls.support)
                )
                size = int(np.prod(shape))
                blocks.append((start, shape, size))
                start += size
            self._blocks.append((blocks, start))

    # -- identifier layout ----------------------------------------------

    def _anchor_index(self, shape, anchor):
        idx = 0
        for n, a in zip(reversed(shape), reversed(anchor)):
            idx = idx * n + a
        return idx

    def _decode(self, dim, sid):
        blocks, total = self._blocks[dim]
        if not 0 <= sid < total:
            raise TriangulationError(f"{dim}-simplex id {sid} out of range")
        for ci, (start, shape, size) in enumerate(blocks):
            if sid < start + size:
                rem = sid - start
                anchor = []
                for n in shape:
                    rem, a = divmod(rem, n)
                    anchor.append(a)
                return ci, tuple(anchor)
        raise AssertionError

    def _encode(self, dim, ci, anchor):
        start, shape, _ = self._blocks[dim][0][ci]
        return start + self._anchor_index(shape, anchor)

    def _anchor_valid(self, dim, ci, anchor):
        shape = self._blocks[dim][0][ci][1]
        return all(0 <= a < n for a, n in zip(anchor, shape))

    # -- Triangulation interface ----------------------------------------

    def precondition(self, kind: str) -> None:
        # stateless: every query is answered arithmetically
        return None

    def preconditioned_kinds(self) -> frozenset:
        return frozenset()

    def simplex_count(self, dim: int) -> int:
        if not 0 <= dim <= self.dim:
            raise TriangulationError(f"bad simplex dimension {dim}")
        return self._blocks[dim][1]

    def vertex_id(self, coords) -> int:
        idx = 0
        for n, c in zip(reversed(self.dims), reversed(tuple(coords))):
            idx = idx * n + c
        return idx

    def vertex_coords(self, v: int) -> tuple:
        out = []
        for n in self.dims:
            v, c = divmod(v, n)
            out.append(c)
        return tuple(out)

    def vertex_point(self, v: int):
        c = self.vertex_coords(v)
        return np.array(c + (0,) * (3 - len(c)), dtype=float)

    def simplex_vertices(self, s: SimplexRef) -> tuple:
        dim, sid = s
        if dim == 0:
            if not 0 <= sid < self._blocks[0][1]:
                raise TriangulationError(f"vertex id {sid} out of range")
            return (sid,)
        ci, anchor = self._decode(dim, sid)
        offs = self._classes[dim][ci].offsets
        return tuple(
            self.vertex_id(tuple(a + o for a, o in zip(anchor, off)))
            for off in offs
        )

    def faces(self, s: SimplexRef, k: int) -> list:
        dim, sid = s
        if not 0 <= k < dim:
            raise TriangulationError(f"bad face dimension {k} for dim {dim}")
        ci, anchor = self._decode(dim, sid)
        if k == 0:
            return sorted(self.simplex_vertices(s))
        out = [
            self._encode(
                k, ck, tuple(a + d for a, d in zip(anchor, delta))
            )
            for ck, delta in self._faces[(dim, ci, k)]
        ]
        out.sort()
        return out

    def cofaces(self, s: SimplexRef, l: int) -> list:
        dim, sid = s
        if not dim < l <= self.dim:
            raise TriangulationError(f"bad co-face dimension {l} for dim {dim}")
        if dim == 0:
            ci, anchor = 0, self.vertex_coords(sid)
            if not all(0 <= a < n for a, n in zip(anchor, self.dims)):
                raise TriangulationError(f"vertex id {sid} out of range")
        else:
            ci, anchor = self._decode(dim, sid)
        out = []
        for cl, delta in self._cofaces[(dim, ci, l)]:
            cand = tuple(a + d for a, d in zip(anchor, delta))
            if self._anchor_valid(l, cl, cand):
                out.append(self._encode(l, cl, cand))
        out.sort()
        return out

    def is_boundary(self, s: SimplexRef) -> bool:
        d = self.dim
        dim, _ = s
        if dim == d - 1:
            return len(self.cofaces(s, d)) == 1
        if dim == d:
            return any(
                len(self.cofaces(SimplexRef(d - 1, f), d)) == 1
                for f in self.faces(s, d - 1)
            )
        return any(
            len(self.cofaces(SimplexRef(d - 1, f), d)) == 1
            for f in self.cofaces(s, d - 1)
        )

    # -- grid specifics --------------------------------------------------

    def edge_class_name(self, ci: int) -> str:
        names = _EDGE_NAMES_2D if self.dim == 2 else _EDGE_NAMES_3D
        return names[ci]

    def classify_edge_identifier(self, e: int):
        """Invert the edge identifier map: (class name, anchor coords)."""
        ci, anchor = self._decode(1, e)
        return self.edge_class_name(ci), anchor

    def cell_array(self) -> np.ndarray:
        """All d-cells as an array of ascending vertex ids, in id order."""
        d = self.dim
        rows = []
        for ci, cls in enumerate(self._classes[d]):
            shape = self._blocks[d][0][ci][1]
            grids = np.meshgrid(
                *[np.arange(n) for n in shape], indexing="ij"
            )
            # _anchor_index iterates x fastest: sort flat index accordingly
            anchors = np.stack([g.ravel() for g in grids], axis=-1)
            order = np.zeros(len(anchors), dtype=np.int64)
            for n, col in zip(reversed(shape), reversed(range(d))):
                order = order * n + anchors[:, col]
            anchors = anchors[np.argsort(order, kind="stable")]
            verts = []
            for off in cls.offsets:
                coords = anchors + np.array(off)
                vid = np.zeros(len(coords), dtype=np.int64)
                for n, col in zip(reversed(self.dims), reversed(range(d))):
                    vid = vid * n + coords[:, col]
                verts.append(vid)
            rows.append(np.stack(verts, axis=-1))
        cells = np.concatenate(rows, axis=0)
        return np.sort(cells, axis=1)

    def point_array(self) -> np.ndarray:
        """Vertex coordinates in id order, padded to 3D."""
        n = self.simplex_count(0)
        pts = np.zeros((n, 3))
        coords = [self.vertex_coords(v) for v in range(n)]
        pts[:, : self.dim] = np.array(coords, dtype=float)
        return pts
