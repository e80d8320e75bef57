"""Hall-type star factors of bipartite graphs.

``hall_star_factor`` turns a bipartite graph whose left side has degree at
least ``d1`` and whose right side has degree in ``[1, d2]`` into a star factor
with every left vertex a center of at least ``d1 // d2`` leaves. It replicates
each left vertex ``ell`` times and saturates the copies with a maximum
matching; Hall's condition guarantees that works.

``cover_left_side`` packs stars of size ``isqrt(d)`` over the left side of a
bipartite graph with left degrees at least ``d``: a greedy maximal packing of
right-centred stars, then a Hall factor on what is left.
"""

from __future__ import annotations

from collections import deque
from math import isqrt
from typing import Mapping, Sequence

from .errors import InputError, InvariantError
from .graph import BipartiteView
from .packing import PackingBuilder, StarPacking

_INF = float("inf")


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum matching of a bipartite graph given as left adjacency lists.

    Left vertices are ``0..len(adj)-1``, right vertices ``0..n_right-1``.
    Returns ``match_left`` with ``-1`` for unmatched left vertices.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    # greedy warm start
    for u in range(n_left):
        for w in adj[u]:
            if match_r[w] < 0:
                match_l[u] = w
                match_r[w] = u
                break
    dist = [0.0] * n_left
    while True:
        q = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for w in adj[u]:
                x = match_r[w]
                if x < 0:
                    found = True
                elif dist[x] == _INF:
                    dist[x] = dist[u] + 1
                    q.append(x)
        if not found:
            break
        it = [0] * n_left
        for root in range(n_left):
            if match_l[root] >= 0:
                continue
            # iterative DFS along the BFS layering
            path = [root]
            while path:
                u = path[-1]
                advanced = False
                while it[u] < len(adj[u]):
                    w = adj[u][it[u]]
                    it[u] += 1
                    x = match_r[w]
                    if x < 0:
                        # augment along the stack
                        for k in range(len(path) - 1, -1, -1):
                            uu = path[k]
                            prev = match_l[uu]
                            match_l[uu] = w
                            match_r[w] = uu
                            w = prev
                        path = []
                        advanced = True
                        break
                    if dist[x] == dist[u] + 1:
                        path.append(x)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = _INF
                    path.pop()
    return match_l


def replicated_matching(left_adj: Mapping[int, Sequence[int]], copies: int) -> dict[int, list[int]]:
    """Give every left vertex ``copies`` distinct right partners, if possible.

    Each left vertex is replicated ``copies`` times and a maximum matching
    of the copies is computed. Returns left vertex -> matched right vertices;
    vertices whose copies could not all be matched get fewer partners.
    """
    lefts = sorted(left_adj)
    rights = sorted({w for u in lefts for w in left_adj[u]})
    ridx = {w: i for i, w in enumerate(rights)}
    slot_owner = []
    adj = []
    for u in lefts:
        nbrs = sorted(ridx[w] for w in left_adj[u])
        for _ in range(copies):
            slot_owner.append(u)
            adj.append(nbrs)
    match = hopcroft_karp(adj, len(rights))
    out: dict[int, list[int]] = {u: [] for u in lefts}
    for slot, w in enumerate(match):
        if w >= 0:
            out[slot_owner[slot]].append(rights[w])
    return out


def _check_hall_preconditions(bv: BipartiteView, d1: int, d2: int) -> None:
    if d2 < 1 or d1 < d2:
        raise InputError(f"need d1 >= d2 >= 1, got d1={d1}, d2={d2}")
    for v in sorted(bv.left):
        if bv.degree(v) < d1:
            raise InputError(f"left vertex {v} has degree {bv.degree(v)} < d1={d1}")
    for w in sorted(bv.right):
        k = bv.degree(w)
        if not 1 <= k <= d2:
            raise InputError(f"right vertex {w} has degree {k} outside [1, {d2}]")


def hall_star_factor(bv: BipartiteView, d1: int, d2: int) -> StarPacking:
    """Star factor of ``bv`` with every left vertex a center of >= ``d1 // d2`` leaves.

    Right vertices left over after the matching join the adjacent center
    whose star is currently smallest (lowest index on ties).
    """
    _check_hall_preconditions(bv, d1, d2)
    ell = d1 // d2
    left_adj = {u: sorted(bv.neighbors(u)) for u in bv.left}
    matched = replicated_matching(left_adj, ell)
    b = PackingBuilder()
    for u in sorted(matched):
        if len(matched[u]) < ell:
            raise InvariantError(
                f"matching saturated only {len(matched[u])}/{ell} copies of {u} "
                "although Hall's condition holds"
            )
        b.add_star(u, matched[u])
    for w in sorted(bv.right):
        if w in b:
            continue
        c = min(bv.neighbors(w), key=lambda c: (b.size(c), c))
        b.add_leaf(c, w)
    return b.build(ell)


def greedy_right_stars(bv: BipartiteView, k: int) -> StarPacking:
    """Maximal packing of right-centred stars with exactly ``k`` left leaves.

    Right vertices are scanned once in increasing index; each takes its ``k``
    lowest uncovered left neighbors if it has that many. One pass is maximal
    because the uncovered left set only shrinks.
    """
    covered: set[int] = set()
    b = PackingBuilder()
    for w in sorted(bv.right):
        free = sorted(bv.neighbors(w) - covered)
        if len(free) >= k:
            b.add_star(w, free[:k])
            covered.update(free[:k])
    return b.build(k)


def cover_left_side(bv: BipartiteView, d: int) -> StarPacking:
    """Packing of stars of size >= ``isqrt(d)`` covering every left vertex of ``bv``."""
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    for v in sorted(bv.left):
        if bv.degree(v) < d:
            raise InputError(f"left vertex {v} has degree {bv.degree(v)} < d={d}")
    k = isqrt(d)
    b = PackingBuilder(greedy_right_stars(bv, k))
    # maximality under inclusion: uncovered left vertices next to a stage-1
    # center join that star, so the rest see only unused right vertices
    for v in sorted(bv.left):
        if v in b:
            continue
        cs = [c for c in bv.neighbors(v) if b.is_center(c)]
        if cs:
            b.add_leaf(min(cs, key=lambda c: (b.size(c), c)), v)
    rest_left = frozenset(v for v in bv.left if v not in b)
    if rest_left:
        rest_right = frozenset(
            w for w in bv.right
            if w not in b and bv.host.adj(w) & rest_left
        )
        residual = BipartiteView(bv.host, rest_left, rest_right)
        if k >= 2:
            d2 = max(residual.degree(w) for w in rest_right)
            if d2 > k - 1:
                raise InvariantError(f"stage-1 packing not maximal: right degree {d2} >= {k}")
            part = hall_star_factor(residual, d, k - 1)
        else:
            part = _matching_cover(residual)
        for s in part.stars:
            b.add_star(s.center, s.leaves)
    return b.build(k)


def _matching_cover(bv: BipartiteView) -> StarPacking:
    """Left-saturating matching as S_1 stars; the k = 1 case of :func:`cover_left_side`."""
    left_adj = {u: sorted(bv.neighbors(u)) for u in bv.left}
    matched = replicated_matching(left_adj, 1)
    b = PackingBuilder()
    for u, ws in sorted(matched.items()):
        if not ws:
            raise InvariantError(f"left vertex {u} unmatched although Hall's condition holds")
        b.add_star(u, ws)
    return b.build(1)
