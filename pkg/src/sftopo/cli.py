"""Command-line front end.

One subcommand per pipeline stage plus an invariant checker::

    sftopo info              --grid 16x16 --values f.txt
    sftopo critical-points   --mesh m.off --values f.txt -o cp.csv
    sftopo persistence-diagram ... -o d.csv
    sftopo persistence-curve   ... -o c.csv
    sftopo contour-tree        ... -o t.csv
    sftopo morse-smale         ... -o sep.obj
    sftopo simplify --threshold 3 ... -o simplified.txt
    sftopo check ...

Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant
failure.  Log verbosity via the SFTOPO_LOG environment variable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io as sfio
from .checks import run_checks
from .compliance import enforce_compliance
from .critical import extract_critical_points
from .gradient import build_gradient
from .morse import (
    ascending_segmentation,
    descending_segmentation,
    extract_separatrices,
)
from .simplify import SimplificationError, select_by_persistence, \
    simplify_field
from .trees import (
    DomainTopologyError,
    build_diagram,
    build_merge_tree,
    combine_contour_tree,
    persistence_curve,
)
from .triangulation import TriangulationError

log = logging.getLogger("sftopo")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INVARIANT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text):
    parts = text.lower().split("x")
    if len(parts) not in (2, 3):
        raise _UsageError(f"--grid expects WxH or WxHxD, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise _UsageError(f"--grid expects integer dims, got {text!r}")
    if any(d < 2 for d in dims):
        raise _UsageError("--grid dims must all be >= 2")
    return dims


def _add_dataset_args(sub):
    src = sub.add_argument_group("input")
    src.add_argument("--mesh", help="ASCII OFF mesh file")
    src.add_argument("--grid", help="regular grid dims, WxH or WxHxD")
    src.add_argument("--values", required=True,
                     help="scalar field file (one value per vertex)")
    src.add_argument("--offsets",
                     help="tie-breaking offsets file (one int per vertex)")
    src.add_argument("--format", default="ascii",
                     choices=("ascii", "f32", "f64"),
                     help="field file encoding (default: ascii)")
    sub.add_argument("--threads", type=int, default=os.cpu_count(),
                     help="worker threads for the gradient build")


def _build_parser():
    parser = _Parser(prog="sftopo",
                     description="topological analysis of PL scalar fields")
    subs = parser.add_subparsers(dest="command", metavar="subcommand")
    specs = [
        ("info", "print dataset summary"),
        ("critical-points", "classify vertices, write CSV"),
        ("persistence-diagram", "write the persistence diagram CSV"),
        ("persistence-curve", "write the persistence curve CSV"),
        ("contour-tree", "write the contour tree arcs CSV"),
        ("morse-smale", "write separatrices (OBJ) and segmentations"),
        ("simplify", "remove low-persistence pairs, write new field"),
        ("check", "run the cross-module invariant suite"),
    ]
    for name, help_text in specs:
        sub = subs.add_parser(name, help=help_text)
        _add_dataset_args(sub)
        if name not in ("info", "check"):
            sub.add_argument("-o", "--output", required=True,
                             help="output file path")
        if name == "simplify":
            sub.add_argument("--threshold", type=float, required=True,
                             help="persistence threshold")
    return parser


def _load(args):
    spec = sfio.DatasetSpec(
        mesh=args.mesh,
        grid=_parse_grid(args.grid) if args.grid else None,
        values=args.values,
        offsets=args.offsets,
        fmt=args.format,
    )
    if spec.mesh is not None and spec.grid is not None:
        raise _UsageError("--mesh and --grid are mutually exclusive")
    if spec.mesh is None and spec.grid is None:
        raise _UsageError("one of --mesh / --grid is required")
    return sfio.load(spec)


def _compliant_gradient(tri, field, threads):
    grad = build_gradient(tri, field, threads=threads)
    enforce_compliance(tri, field, grad)
    return grad


def _diagram(tri, field, threads):
    grad = _compliant_gradient(tri, field, threads) if tri.dim == 3 else None
    return build_diagram(tri, field, grad)


def _cmd_info(args):
    tri, field = _load(args)
    names = ["vertices", "edges", "triangles", "tetrahedra"]
    print(f"dimension: {tri.dim}")
    for k in range(tri.dim + 1):
        print(f"{names[k]}: {tri.simplex_count(k)}")
    boundary = sum(1 for s in tri.all_simplices(tri.dim - 1)
                   if tri.is_boundary(s))
    print(f"boundary facets: {boundary}")
    print(f"field range: [{field.values.min():.17g}, "
          f"{field.values.max():.17g}]")
    return EXIT_OK


def _cmd_critical_points(args):
    tri, field = _load(args)
    cps = extract_critical_points(tri, field)
    sfio.write_critical_points_csv(args.output, tri, cps)
    return EXIT_OK


def _cmd_persistence_diagram(args):
    tri, field = _load(args)
    sfio.write_diagram_csv(args.output, _diagram(tri, field, args.threads))
    return EXIT_OK


def _cmd_persistence_curve(args):
    tri, field = _load(args)
    curve = persistence_curve(_diagram(tri, field, args.threads))
    sfio.write_curve_csv(args.output, curve)
    return EXIT_OK


def _cmd_contour_tree(args):
    tri, field = _load(args)
    join = build_merge_tree(tri, field, "join")
    split = build_merge_tree(tri, field, "split")
    tree = combine_contour_tree(join, split)
    sfio.write_contour_tree_csv(args.output, tree, field)
    return EXIT_OK


def _cmd_morse_smale(args):
    tri, field = _load(args)
    grad = _compliant_gradient(tri, field, args.threads)
    sfio.write_separatrices_obj(args.output, extract_separatrices(grad))
    sfio.write_labels(args.output + ".desc.labels",
                      descending_segmentation(grad))
    sfio.write_labels(args.output + ".asc.labels",
                      ascending_segmentation(grad))
    return EXIT_OK


def _cmd_simplify(args):
    tri, field = _load(args)
    req = select_by_persistence(_diagram(tri, field, args.threads),
                                args.threshold)
    out = simplify_field(tri, field, req)
    sfio.write_field(args.output, out.values, args.format)
    sfio.write_offsets(args.output + ".offsets", out.offsets)
    return EXIT_OK


def _cmd_check(args):
    tri, field = _load(args)
    results = run_checks(tri, field, threads=args.threads)
    failed = 0
    for r in results:
        status = "pass" if r.ok else "FAIL"
        suffix = f"  ({r.detail})" if r.detail else ""
        print(f"[{status}] {r.name}{suffix}")
        failed += not r.ok
    print(f"{len(results) - failed}/{len(results)} invariants hold")
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


_COMMANDS = {
    "info": _cmd_info,
    "critical-points": _cmd_critical_points,
    "persistence-diagram": _cmd_persistence_diagram,
    "persistence-curve": _cmd_persistence_curve,
    "contour-tree": _cmd_contour_tree,
    "morse-smale": _cmd_morse_smale,
    "simplify": _cmd_simplify,
    "check": _cmd_check,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("SFTOPO_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        if args.threads is not None and args.threads < 1:
            raise _UsageError("--threads must be >= 1")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"sftopo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:       # argparse --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (sfio.DataError, TriangulationError, DomainTopologyError,
            SimplificationError, OSError) as exc:
        print(f"sftopo: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
