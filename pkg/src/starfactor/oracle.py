"""Exact star-factor decisions on tiny graphs.

:func:`exists_factor` is a memoized backtracking search. Every star of size
>= ell splits into a *core* of exactly ell leaves plus extra leaves that
only need to be adjacent to its center, so the search places cores and
defers the other vertices, requiring each deferred vertex to end up next
to some core center. The state is (uncovered, deferred, uncovered vertices
already next to a placed center), each a bitmask.

:func:`max_factor_size_naive` is an independent brute force over all set
partitions, used to check the search on graphs with at most 6 vertices.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .errors import InputError
from .graph import Graph
from .packing import PackingBuilder, StarPacking

DEFAULT_LIMIT = 16


def _check_limit(g: Graph, limit: int) -> None:
    if g.vertex_count > limit:
        raise InputError(f"graph has {g.vertex_count} vertices, oracle limit is {limit}")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exists_factor(g: Graph, ell: int, limit: int = DEFAULT_LIMIT) -> tuple[bool, StarPacking | None]:
    """Decide whether ``g`` has an S_ell-factor; returns ``(answer, witness)``."""
    _check_limit(g, limit)
    if ell < 1:
        raise InputError(f"ell must be >= 1, got {ell}")
    n = g.vertex_count
    nb = [sum(1 << u for u in g.adj(v)) for v in range(n)]

    @lru_cache(maxsize=None)
    def search(free: int, deferred: int, near: int):
        """Cores [(center, leaves)] finishing the factor, or None.

        ``near`` holds the free vertices adjacent to an already placed center.
        """
        for x in _bits(deferred):
            # a deferred vertex needs a future center among the free vertices
            if not nb[x] & free:
                return None
        if not free:
            return []
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        # v is a core center
        opts = list(_bits(nb[v] & rest))
        if len(opts) >= ell:
            for leaves in combinations(opts, ell):
                left = rest & ~sum(1 << x for x in leaves)
                got = search(left, deferred & ~nb[v], (near | nb[v]) & left)
                if got is not None:
                    return [(v, leaves)] + got
        # v is a core leaf of a free neighbor c
        for c in _bits(nb[v] & rest):
            others = list(_bits(nb[c] & rest & ~(1 << c)))
            if len(others) < ell - 1:
                continue
            for extra in combinations(others, ell - 1):
                left = rest & ~((1 << c) | sum(1 << x for x in extra))
                got = search(left, deferred & ~nb[c], (near | nb[c]) & left)
                if got is not None:
                    return [(c, (v,) + extra)] + got
        # v is an extra leaf of a center placed earlier or later
        if near >> v & 1:
            got = search(rest, deferred, near & rest)
        elif nb[v] & rest:
            got = search(rest, deferred | (1 << v), near & rest)
        else:
            got = None
        return got

    cores = search((1 << n) - 1, 0, 0)
    search.cache_clear()
    if cores is None:
        return False, None
    b = PackingBuilder()
    for c, leaves in cores:
        b.add_star(c, leaves)
    for v in range(n):
        if v not in b:
            c = min(u for u in g.adj(v) if b.is_center(u))
            b.add_leaf(c, v)
    return True, b.build(ell)


def max_factor_size(g: Graph, limit: int = DEFAULT_LIMIT) -> int:
    """Largest ell for which ``g`` has an S_ell-factor.

    Returns 0 when ``g`` has an isolated vertex (no factor at all) or no
    vertices. Searches downward from the maximum degree.
    """
    _check_limit(g, limit)
    if g.vertex_count == 0 or g.min_degree() == 0:
        return 0
    for ell in range(g.max_degree(), 0, -1):
        if exists_factor(g, ell, limit)[0]:
            return ell
    raise AssertionError("a graph without isolated vertices always has an S_1-factor")


def has_isolated_vertex(g: Graph) -> bool:
    return any(g.degree(v) == 0 for v in g.vertices())


def set_partitions(items):
    """All set partitions of ``items`` (a list), as lists of blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _star_size(g: Graph, block) -> int | None:
    if len(block) < 2:
        return None
    for c in block:
        if all(x == c or g.has_edge(c, x) for x in block):
            return len(block) - 1
    return None


def max_factor_size_naive(g: Graph) -> int:
    """Brute-force maximum ell over all set partitions; only for n <= 6 or so."""
    if g.vertex_count > 8:
        raise InputError("naive oracle is limited to 8 vertices")
    if g.vertex_count == 0:
        return 0
    best = 0
    for part in set_partitions(list(g.vertices())):
        sizes = [_star_size(g, blk) for blk in part]
        if all(s is not None for s in sizes):
            best = max(best, min(sizes))
    return best
