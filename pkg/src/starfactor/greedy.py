"""Deterministic greedy covers used when the randomized stages give up.

Both routines only ever need every target to have one neighbor in the
graph; then a star of size >= 1 can always be found for it, possibly by
splitting or re-rooting a star that is already in place.
"""

from __future__ import annotations

from typing import Iterable

from .errors import InputError
from .graph import Graph
from .packing import PackingBuilder, StarPacking


def _repair(g: Graph, b: PackingBuilder, t: int, allowed) -> None:
    """Cover ``t`` when all its allowed neighbors are already in the packing."""
    nbrs = sorted(x for x in g.adj(t) if x in allowed)
    if not nbrs:
        raise InputError(f"vertex {t} has no usable neighbor; no star can cover it")
    centers = [c for c in nbrs if b.is_center(c)]
    if centers:
        b.add_leaf(min(centers, key=lambda c: (b.size(c), c)), t)
        return
    # every neighbor is a leaf somewhere: prefer splitting off a leaf of a
    # big star, otherwise re-root a single-leaf star at that leaf
    w = max(nbrs, key=lambda x: (b.size(b.owner[x]), -x))
    c = b.owner[w]
    if b.size(c) >= 2:
        b.remove_leaf(w)
        b.add_star(w, [t])
    else:
        b.remove_star(c)
        b.add_star(w, [c, t])


def greedy_cover(
    g: Graph,
    targets: Iterable[int],
    base: StarPacking | PackingBuilder | None = None,
    allowed: Iterable[int] | None = None,
    preferred_centers: Iterable[int] = (),
) -> PackingBuilder:
    """Extend ``base`` so it covers every target.

    Targets are handled in increasing index. For an uncovered target, the
    free neighbor with the most free neighbors becomes a center (members of
    ``preferred_centers`` first) and claims all its free neighbors. A target
    with no free neighbor is covered by :func:`_repair`. Only vertices in
    ``allowed`` (default: all) are ever added.
    """
    b = base if isinstance(base, PackingBuilder) else PackingBuilder(base)
    targets = sorted(set(targets))
    allowed = frozenset(g.vertices()) if allowed is None else frozenset(allowed) | set(targets)
    preferred = frozenset(preferred_centers)
    for t in targets:
        if t in b:
            continue
        free = [x for x in g.adj(t) if x in allowed and x not in b]
        if not free:
            _repair(g, b, t, allowed)
            continue

        def residual(c):
            return sum(1 for y in g.adj(c) if y in allowed and y not in b)

        c = max(free, key=lambda c: (c in preferred, residual(c), -c))
        b.add_star(c, [y for y in g.adj(c) if y in allowed and y not in b])
    return b


def greedy_factor(g: Graph) -> StarPacking:
    """S_1-factor of a graph without isolated vertices.

    Vertices in decreasing degree order become centers claiming all their
    uncovered neighbors; leftovers are attached by :func:`_repair`.
    """
    b = PackingBuilder()
    allowed = frozenset(g.vertices())
    for v in sorted(g.vertices(), key=lambda v: (-g.degree(v), v)):
        if v in b:
            continue
        free = [x for x in g.adj(v) if x not in b]
        if free:
            b.add_star(v, free)
    for v in g.vertices():
        if v not in b:
            _repair(g, b, v, allowed)
    return b.build()
