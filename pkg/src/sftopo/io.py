"""File formats: OFF meshes, scalar field / offset files, CSV and OBJ output.

Meshes are ASCII OFF.  Scalar fields are one ASCII real per line or raw
little-endian 32/64-bit floats; offset files hold one integer per line
(or raw int64).  Diagrams and critical points are written as CSV,
separatrices as Wavefront OBJ polylines, segmentations as one label per
line.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .order import OrderField
from .triangulation import (
    ExplicitTriangulation,
    ImplicitGridTriangulation,
    SimplexRef,
    Triangulation,
)


class DataError(Exception):
    """Unreadable or inconsistent input data."""


def _tokens(path):
    """Significant (line_number, fields) pairs of an OFF-style file."""
    with open(path, "r") as fh:
        for ln, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if body:
                yield ln, body.split()


def read_off(path: str):
    """Parse an ASCII OFF file into (points, cells) arrays.

    Faces may be triangles or tetrahedra (OFF is commonly abused for
    the latter); all faces in one file must have the same arity.
    """
    stream = _tokens(path)
    try:
        ln, fields = next(stream)
    except StopIteration:
        raise DataError(f"{path}: empty file")
    if fields == ["OFF"]:
        try:
            ln, fields = next(stream)
        except StopIteration:
            raise DataError(f"{path}: line {ln}: missing element counts")
    if len(fields) != 3:
        raise DataError(
            f"{path}: line {ln}: expected 'nVertices nFaces nEdges', "
            f"got {' '.join(fields)!r}"
        )
    try:
        nv, nf = int(fields[0]), int(fields[1])
    except ValueError:
        raise DataError(f"{path}: line {ln}: non-integer element count")
    points = np.zeros((nv, 3), dtype=np.float64)
    for i in range(nv):
        try:
            ln, fields = next(stream)
        except StopIteration:
            raise DataError(f"{path}: unexpected end of file in vertex list")
        if len(fields) < 3:
            raise DataError(
                f"{path}: line {ln}: vertex needs 3 coordinates"
            )
        try:
            points[i] = [float(x) for x in fields[:3]]
        except ValueError:
            raise DataError(f"{path}: line {ln}: bad coordinate")
    cells = []
    arity = None
    for _ in range(nf):
        try:
            ln, fields = next(stream)
        except StopIteration:
            raise DataError(f"{path}: unexpected end of file in face list")
        try:
            row = [int(x) for x in fields]
        except ValueError:
            raise DataError(f"{path}: line {ln}: bad face index")
        if not row or len(row) != row[0] + 1:
            raise DataError(
                f"{path}: line {ln}: face arity header does not match "
                f"the number of indices"
            )
        if row[0] not in (3, 4):
            raise DataError(
                f"{path}: line {ln}: only triangle/tetrahedron cells are "
                f"supported (got {row[0]} vertices)"
            )
        if arity is None:
            arity = row[0]
        elif row[0] != arity:
            raise DataError(f"{path}: line {ln}: mixed cell arities")
        if any(v < 0 or v >= nv for v in row[1:]):
            raise DataError(f"{path}: line {ln}: vertex index out of range")
        cells.append(row[1:])
    return points, np.asarray(cells, dtype=np.int64)


def read_field(path: str, fmt: str = "ascii") -> np.ndarray:
    """Read a scalar field file (one value per vertex)."""
    if fmt == "ascii":
        out = []
        with open(path, "r") as fh:
            for ln, line in enumerate(fh, start=1):
                body = line.split("#", 1)[0].strip()
                if not body:
                    continue
                try:
                    out.append(float(body))
                except ValueError:
                    raise DataError(
                        f"{path}: line {ln}: not a real number: {body!r}"
                    )
        return np.asarray(out, dtype=np.float64)
    if fmt in ("f32", "f64"):
        dtype = "<f4" if fmt == "f32" else "<f8"
        return np.fromfile(path, dtype=dtype).astype(np.float64)
    raise DataError(f"unknown field format: {fmt!r}")


def read_offsets(path: str) -> np.ndarray:
    """Read a tie-breaking offsets file (one integer per vertex)."""
    out = []
    with open(path, "r") as fh:
        for ln, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                out.append(int(body))
            except ValueError:
                raise DataError(
                    f"{path}: line {ln}: not an integer: {body!r}"
                )
    return np.asarray(out, dtype=np.int64)


def write_field(path: str, values: np.ndarray, fmt: str = "ascii") -> None:
    if fmt == "ascii":
        with open(path, "w") as fh:
            for v in values:
                fh.write("%.17g\n" % v)
    elif fmt in ("f32", "f64"):
        dtype = "<f4" if fmt == "f32" else "<f8"
        np.asarray(values).astype(dtype).tofile(path)
    else:
        raise DataError(f"unknown field format: {fmt!r}")


def write_offsets(path: str, offsets: np.ndarray) -> None:
    with open(path, "w") as fh:
        for v in offsets:
            fh.write("%d\n" % v)


@dataclass
class DatasetSpec:
    """Where a dataset comes from: an OFF mesh or a regular grid, plus
    a field file and optional offsets."""

    mesh: str | None = None
    grid: tuple | None = None
    values: str | None = None
    offsets: str | None = None
    fmt: str = "ascii"


def load(spec: DatasetSpec):
    """Build (triangulation, order field) from a dataset description."""
    if (spec.mesh is None) == (spec.grid is None):
        raise DataError("exactly one of mesh path / grid dims is required")
    if spec.mesh is not None:
        points, cells = read_off(spec.mesh)
        tri = ExplicitTriangulation(points, cells)
    else:
        tri = ImplicitGridTriangulation(spec.grid)
    if spec.values is None:
        raise DataError("a scalar field file is required")
    values = read_field(spec.values, spec.fmt)
    if len(values) != tri.simplex_count(0):
        raise DataError(
            f"field length {len(values)} does not match vertex count "
            f"{tri.simplex_count(0)}"
        )
    offsets = None
    if spec.offsets is not None:
        offsets = read_offsets(spec.offsets)
        if len(offsets) != len(values):
            raise DataError(
                f"offsets length {len(offsets)} does not match vertex "
                f"count {len(values)}"
            )
    try:
        field = OrderField(values, offsets)
    except ValueError as exc:
        raise DataError(str(exc))
    return tri, field


def write_diagram_csv(path: str, diagram) -> None:
    with open(path, "w") as fh:
        fh.write("birthVertex,deathVertex,birthValue,deathValue,"
                 "persistence,pairClass\n")
        for p in diagram.pairs:
            fh.write("%d,%d,%.17g,%.17g,%.17g,%s\n" % (
                p.birth_vertex, p.death_vertex, p.birth_value,
                p.death_value, p.persistence, p.class_label(diagram.dim)))


def write_curve_csv(path: str, curve) -> None:
    with open(path, "w") as fh:
        fh.write("threshold,pairs\n")
        for t, c in curve:
            fh.write("%.17g,%d\n" % (t, c))


def write_critical_points_csv(path: str, tri: Triangulation, cps) -> None:
    with open(path, "w") as fh:
        fh.write("vertexId,x,y,z,index,multiplicity,value,isBoundary\n")
        for cp in cps:
            x, y, z = tri.vertex_point(cp.vertex)
            fh.write("%d,%.17g,%.17g,%.17g,%d,%d,%.17g,%d\n" % (
                cp.vertex, x, y, z, cp.index, cp.multiplicity, cp.value,
                int(cp.boundary)))


def write_contour_tree_csv(path: str, tree, field: OrderField) -> None:
    """Arcs as CSV rows; node degrees recoverable from the arc list."""
    with open(path, "w") as fh:
        fh.write("arcId,downVertex,upVertex,downValue,upValue,nVertices\n")
        sizes = {}
        for a in tree.vertex_arc:
            sizes[int(a)] = sizes.get(int(a), 0) + 1
        for i, (lo, hi) in enumerate(tree.arcs):
            fh.write("%d,%d,%d,%.17g,%.17g,%d\n" % (
                i, lo, hi, field.values[lo], field.values[hi],
                sizes.get(i, 0)))


def write_separatrices_obj(path: str, separatrices) -> None:
    """Polylines as OBJ `v`/`l` records, one object per separatrix."""
    with open(path, "w") as fh:
        base = 1
        for i, sep in enumerate(separatrices):
            fh.write("o %s_%d\n" % (sep.kind.replace("-", "_"), i))
            for p in sep.points:
                fh.write("v %.17g %.17g %.17g\n" % tuple(p))
            idx = " ".join(str(base + j) for j in range(len(sep.points)))
            fh.write("l %s\n" % idx)
            base += len(sep.points)


def write_labels(path: str, labels: np.ndarray) -> None:
    with open(path, "w") as fh:
        for v in labels:
            fh.write("%d\n" % v)
