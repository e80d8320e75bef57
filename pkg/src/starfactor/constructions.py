"""Instance generators: the three-layer lower-bound family and random graphs."""

from __future__ import annotations

import math
from math import isqrt

import numpy as np

from . import rng
from .errors import InputError
from .graph import Graph


def ceil_sqrt(d: int) -> int:
    r = isqrt(d)
    return r if r * r == d else r + 1


def lower_bound_layers(d: int, n: int) -> tuple[range, range, range]:
    """Index ranges of the A, B and C layers of ``lower_bound_graph(d, n)``."""
    k = ceil_sqrt(d)
    return range(0, n), range(n, n + k * n), range(n + k * n, n + k * n + d)


def lower_bound_graph(d: int, n: int, seed=0) -> Graph:
    """Three-layer graph with minimum degree d and no S_ell-factor for large ell.

    Vertices: A (``n``), then B (``ceil(sqrt d) * n``), then C (``d``). Each
    A-vertex in turn joins the d B-vertices of currently smallest A-degree;
    B and C are completely joined. The seed only orders ties among equal
    degrees.
    """
    if d < 1 or n < 1:
        raise InputError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    A, B, C = lower_bound_layers(d, n)
    if len(B) < d:
        raise InputError(f"|B| = {len(B)} < d = {d}: an A-vertex cannot get d B-neighbors")
    order = [B[i] for i in rng.stream(seed, "lower_bound").permutation(len(B))]
    # Taking the d smallest (A-degree, tie-rank) B-vertices each time visits
    # B cyclically in tie-rank order, so a rotating cursor implements it.
    edges = []
    cursor = 0
    for a in A:
        for j in range(d):
            edges.append((a, order[(cursor + j) % len(order)]))
        cursor = (cursor + d) % len(order)
    edges.extend((b, c) for b in B for c in C)
    return Graph(len(A) + len(B) + len(C), edges)


def lower_bound_threshold(d: int) -> int:
    """Smallest n with d*ceil(sqrt d) + (sqrt d + 1) n / (sqrt d + 2) < n.

    The inequality rearranges to n - 2dk > dk sqrt(d) with k = ceil(sqrt d),
    which is decided exactly by squaring: (n - 2dk)^2 > d^3 k^2.
    """
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    k = ceil_sqrt(d)
    return 2 * d * k + isqrt(d ** 3 * k * k) + 1


def counting_slack(d: int, n: int) -> float:
    """``n - (d ceil(sqrt d) + (sqrt d + 1) n / (sqrt d + 2))``; positive means no big factor."""
    r = math.sqrt(d)
    return n - (d * ceil_sqrt(d) + (r + 1) * n / (r + 2))


def random_min_degree_graph(n: int, d: int, seed=0) -> Graph:
    """Erdos-Renyi graph with p = 1.2 d / n, topped up to minimum degree d.

    Each deficient vertex (in index order) gains edges to uniformly random
    non-neighbors until its degree reaches d.
    """
    if not n > d >= 1:
        raise InputError(f"need n > d >= 1, got n={n}, d={d}")
    gen = rng.stream(seed, "min_degree")
    p = min(1.0, 1.2 * d / n)
    adj = [set() for _ in range(n)]
    for u in range(n - 1):
        hits = np.nonzero(gen.random(n - u - 1) < p)[0] + u + 1
        for v in hits.tolist():
            adj[u].add(v)
            adj[v].add(u)
    for v in range(n):
        need = d - len(adj[v])
        if need > 0:
            cand = np.array([u for u in range(n) if u != v and u not in adj[v]])
            for u in gen.choice(cand, size=need, replace=False).tolist():
                adj[u].add(v)
                adj[v].add(u)
    return Graph.from_adjacency(adj)


def _pairs_ok(pairs: np.ndarray, n: int) -> bool:
    u, v = pairs[:, 0], pairs[:, 1]
    if np.any(u == v):
        return False
    keys = np.minimum(u, v) * n + np.maximum(u, v)
    return len(np.unique(keys)) == len(keys)


def random_regular_graph(n: int, d: int, seed=0, max_restarts: int = 100) -> Graph:
    """d-regular simple graph from the configuration model.

    A pairing and up to ``max_restarts`` fresh ones are tried; if none is
    simple, the last one is repaired by random double-edge swaps that remove loops and
    parallel edges. For d > (n - 1) / 2 the complement of an (n - 1 - d)-regular
    graph is returned instead.
    """
    if (n * d) % 2:
        raise InputError(f"n*d must be even, got n={n}, d={d}")
    if not n > d >= 0:
        raise InputError(f"need n > d >= 0, got n={n}, d={d}")
    if 2 * d > n - 1:
        # dense: complement of a sparse regular graph, where pairings repair easily
        sparse = random_regular_graph(n, n - 1 - d, seed, max_restarts)
        return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n) if not sparse.has_edge(u, v)))
    gen = rng.stream(seed, "regular")
    stubs = np.repeat(np.arange(n), d)
    pairs = gen.permutation(stubs).reshape(-1, 2)
    for _ in range(max_restarts):
        if _pairs_ok(pairs, n):
            return Graph(n, map(tuple, pairs.tolist()))
        pairs = gen.permutation(stubs).reshape(-1, 2)
    return Graph(n, _swap_repair(pairs.tolist(), n, gen))


def _swap_repair(pairs: list[list[int]], n: int, gen: np.random.Generator) -> list[tuple[int, int]]:
    def key(a, b):
        return (a, b) if a < b else (b, a)

    count: dict[tuple[int, int], int] = {}
    for a, b in pairs:
        k = key(a, b)
        count[k] = count.get(k, 0) + 1

    def bad(i):
        a, b = pairs[i]
        return a == b or count[key(a, b)] > 1

    todo = [i for i in range(len(pairs)) if bad(i)]
    m = len(pairs)
    budget = 1000 * m + 1000
    while todo:
        budget -= 1
        if budget < 0:
            raise InputError("edge-swap repair did not converge")
        i = todo.pop()
        if not bad(i):
            continue
        j = int(gen.integers(m))
        if j == i:
            todo.append(i)
            continue
        a, b = pairs[i]
        c, e = pairs[j]
        if gen.random() < 0.5:
            c, e = e, c
        # proposed replacement: (a, c), (b, e)
        if a == c or b == e or key(a, c) == key(b, e):
            todo.append(i)
            continue
        if count.get(key(a, c), 0) or count.get(key(b, e), 0):
            todo.append(i)
            continue
        for k in (key(a, b), key(c, e)):
            count[k] -= 1
            if not count[k]:
                del count[k]
        pairs[i] = [a, c]
        pairs[j] = [b, e]
        count[key(a, c)] = 1
        count[key(b, e)] = 1
        for k in (i, j):
            if bad(k):
                todo.append(k)
    edges = sorted({key(a, b) for a, b in pairs})
    if len(edges) != len(pairs):
        raise InputError("edge-swap repair failed to produce a simple graph")
    return edges
