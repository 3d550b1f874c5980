"""Unified topological simplification by sub/sur-level set flattening.

Given a set of extrema to preserve, the field and its tie-breaking
offsets are minimally edited so that the edited field's extrema are
exactly the preserved set: every other minimum's sub-level component is
raised to the value of the saddle where it merges with a surviving
component (symmetrically for maxima), with offsets rewritten so the
flattened region is ordered monotonically toward the saddle.  Every
downstream abstraction computed from the edited field is then
consistent with the simplification.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

import numpy as np

from .critical import extract_critical_points
from .order import OrderField
from .trees import (
    CLASS_ESSENTIAL,
    CLASS_MIN_SADDLE,
    CLASS_SADDLE_MAX,
    CLASS_SADDLE_SADDLE,
    PersistenceDiagram,
    build_merge_tree,
)
from .triangulation import Triangulation


class SimplificationError(Exception):
    """Invalid request or failure to converge."""


@dataclass
class SimplificationRequest:
    """Extrema to preserve, plus any pairs the procedure cannot remove.

    ``preserved`` holds vertex ids of extrema that must survive.
    ``unremovable_conflicts`` lists saddle/saddle pairs selected for
    removal; flattening extrema cannot remove those, so a request
    carrying any is rejected.
    """

    preserved: frozenset
    unremovable_conflicts: list = dc_field(default_factory=list)


def select_by_persistence(
    diagram: PersistenceDiagram, threshold: float
) -> SimplificationRequest:
    """Preserve the essential endpoints and every extremum whose pair
    persists at or above ``threshold``."""
    preserved = set()
    conflicts = []
    for p in diagram.pairs:
        if p.cls == CLASS_ESSENTIAL:
            preserved.add(p.birth_vertex)
            preserved.add(p.death_vertex)
        elif p.cls == CLASS_MIN_SADDLE and p.persistence >= threshold:
            preserved.add(p.birth_vertex)
        elif p.cls == CLASS_SADDLE_MAX and p.persistence >= threshold:
            preserved.add(p.death_vertex)
        elif p.cls == CLASS_SADDLE_SADDLE and p.persistence < threshold:
            conflicts.append(p)
    return SimplificationRequest(frozenset(preserved), conflicts)


def _component(tri, field, seed, bound_rank, below):
    """Connected set of vertices strictly below (or above) the bound
    containing ``seed``, in the 1-skeleton."""
    ranks = field.ranks
    seen = {seed}
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        for u in tri.vertex_neighbors(v):
            if u in seen:
                continue
            if (ranks[u] < bound_rank) == below and ranks[u] != bound_rank:
                seen.add(u)
                queue.append(u)
    return seen


def _preferred_pairs(tree, preserved):
    """Elder-rule-style pairs where preserved extrema always survive.

    At each merge, the surviving extremum is the oldest preserved one
    if any component carries one, otherwise the oldest; every other
    component's extremum pairs with the merge vertex.
    """
    field = tree.field
    ranks = field.ranks
    ascending = tree.variant == "join"
    children = {}
    for v in range(len(field)):
        s = tree.succ[v]
        if s >= 0:
            children.setdefault(int(s), []).append(v)
    sweep = field.order if ascending else field.order[::-1]
    best = {}
    pairs = []
    for v in sweep:
        v = int(v)
        ch = children.get(v, [])
        if not ch:
            best[v] = v
            continue
        extrema = sorted((best.pop(c) for c in ch), key=lambda x: ranks[x],
                         reverse=not ascending)
        keep = [e for e in extrema if e in preserved] or extrema
        survivor = keep[0]
        for e in extrema:
            if e != survivor:
                pairs.append((e, v))
        best[v] = survivor
    return pairs


def _flatten_minimum(tri, field, m, saddle):
    """Raise the sub-level component of ``m`` to the saddle's value.

    The component's offsets are rewritten so it sits immediately above
    the saddle in the total order, internally ordered by descending
    original order (monotone toward the saddle).
    """
    ranks = field.ranks
    comp = _component(tri, field, m, ranks[saddle], below=True)
    order = [int(v) for v in field.order if int(v) not in comp]
    pos = order.index(saddle)
    inside = sorted(comp, key=lambda v: ranks[v], reverse=True)
    order[pos + 1:pos + 1] = inside
    values = field.values.copy()
    values[list(comp)] = field.values[saddle]
    offsets = np.empty(len(field), dtype=np.int64)
    offsets[order] = np.arange(len(field))
    return OrderField(values, offsets)


def _flatten_maximum(tri, field, m, saddle):
    """Lower the sur-level component of ``m`` to the saddle's value."""
    ranks = field.ranks
    comp = _component(tri, field, m, ranks[saddle], below=False)
    order = [int(v) for v in field.order if int(v) not in comp]
    pos = order.index(saddle)
    inside = sorted(comp, key=lambda v: ranks[v])
    order[pos:pos] = inside
    values = field.values.copy()
    values[list(comp)] = field.values[saddle]
    offsets = np.empty(len(field), dtype=np.int64)
    offsets[order] = np.arange(len(field))
    return OrderField(values, offsets)


def _extrema(tri, field):
    cps = extract_critical_points(tri, field)
    mins = {cp.vertex for cp in cps if cp.index == 0}
    maxs = {cp.vertex for cp in cps if cp.index == tri.dim}
    return mins, maxs


_MAX_SWEEPS = 64


def simplify_field(
    tri: Triangulation, field: OrderField, req: SimplificationRequest
) -> OrderField:
    """Edit (values, offsets) so the PL extrema are exactly the
    preserved set; the input field is never modified.

    Raises SimplificationError for invalid requests (empty set, no
    minimum/maximum, non-extremal vertices, saddle/saddle conflicts) or
    if the flattening loop fails to stabilize.
    """
    if req.unremovable_conflicts:
        raise SimplificationError(
            "the request selects saddle-saddle pairs for removal; such "
            "pairs cannot be removed by extremum flattening (the general "
            "problem is NP-hard) - raise the threshold or simplify "
            "extrema only"
        )
    mins, maxs = _extrema(tri, field)
    preserved = set(req.preserved)
    if not preserved:
        raise SimplificationError("preserved extremum set is empty")
    if not preserved & mins:
        raise SimplificationError("preserved set contains no minimum")
    if not preserved & maxs:
        raise SimplificationError("preserved set contains no maximum")
    if preserved - (mins | maxs):
        raise SimplificationError(
            f"preserved vertices are not extrema: "
            f"{sorted(preserved - (mins | maxs))}"
        )
    cur = field
    for _ in range(_MAX_SWEEPS):
        mins, maxs = _extrema(tri, cur)
        if mins | maxs == preserved:
            return cur
        values = cur.values
        progressed = False
        # minima pass: repeatedly flatten the lowest-persistence
        # non-preserved minimum
        while mins - preserved:
            join = build_merge_tree(tri, cur, "join")
            cand = [
                (float(values[s]) - float(values[m]), cur.ranks[s], m, s)
                for m, s in _preferred_pairs(join, preserved)
                if m not in preserved
            ]
            if not cand:
                break
            cand.sort()
            _, _, m, s = cand[0]
            cur = _flatten_minimum(tri, cur, m, s)
            values = cur.values
            progressed = True
            mins, _ = _extrema(tri, cur)
        # maxima pass, symmetric via the split tree
        _, maxs = _extrema(tri, cur)
        while maxs - preserved:
            split = build_merge_tree(tri, cur, "split")
            cand = [
                (float(values[m]) - float(values[s]), -cur.ranks[s], m, s)
                for m, s in _preferred_pairs(split, preserved)
                if m not in preserved
            ]
            if not cand:
                break
            cand.sort()
            _, _, m, s = cand[0]
            cur = _flatten_maximum(tri, cur, m, s)
            values = cur.values
            progressed = True
            _, maxs = _extrema(tri, cur)
        if not progressed:
            break
    mins, maxs = _extrema(tri, cur)
    if mins | maxs != preserved:
        raise SimplificationError(
            "flattening did not stabilize on the preserved extremum set "
            f"within {_MAX_SWEEPS} sweeps (extrema: "
            f"{sorted(mins | maxs)}, preserved: {sorted(preserved)})"
        )
    return cur
