"""Simple undirected graphs on vertices ``0..n-1``.

A :class:`Graph` is immutable once built. Vertex subsets are passed around as
plain ``frozenset``/``set`` objects of vertex indices; :func:`vertex_set`
validates them against a graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InputError


class Graph:
    """Adjacency-set graph. Build it once, then only query it."""

    __slots__ = ("_n", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._adj = tuple(frozenset(a) for a in adj)
        self._m = sum(len(a) for a in self._adj) // 2

    @classmethod
    def from_adjacency(cls, adj: Iterable[Iterable[int]]) -> "Graph":
        """Build from per-vertex neighbor lists; the lists must be symmetric."""
        adj = [frozenset(a) for a in adj]
        g = cls.__new__(cls)
        g._n = len(adj)
        g._adj = tuple(adj)
        g._m = sum(len(a) for a in adj) // 2
        g.validate()
        return g

    @property
    def vertex_count(self) -> int:
        return self._n

    n = vertex_count

    @property
    def edge_count(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self._n)

    def adj(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u in range(self._n):
            for v in sorted(self._adj[u]):
                if v > u:
                    yield u, v

    def min_degree(self) -> int:
        return min((len(a) for a in self._adj), default=0)

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def validate(self) -> None:
        """Raise :class:`InputError` unless adjacency is symmetric and loop-free."""
        n = self._n
        for v, nbrs in enumerate(self._adj):
            for u in nbrs:
                if not 0 <= u < n:
                    raise InputError(f"neighbor {u} of {v} out of range")
                if u == v:
                    raise InputError(f"self-loop at vertex {v}")
                if v not in self._adj[u]:
                    raise InputError(f"asymmetric adjacency between {v} and {u}")

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"


def vertex_set(g: Graph, vs: Iterable[int]) -> frozenset[int]:
    """Validate ``vs`` against ``g`` and return it as a frozenset."""
    s = frozenset(vs)
    for v in s:
        if not 0 <= v < g.vertex_count:
            raise InputError(f"vertex {v} out of range for n={g.vertex_count}")
    return s


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise InputError(f"vertex {v} out of range for n={g.vertex_count}")


def degree_into(g: Graph, v: int, s) -> int:
    """Number of neighbors of ``v`` inside ``s``."""
    _check_vertex(g, v)
    if not isinstance(s, (set, frozenset)):
        s = set(s)
    return len(g.adj(v) & s)


def neighbors_in(g: Graph, v: int, s) -> frozenset[int]:
    return g.adj(v) & s


def edge_minimalize(g: Graph, target: int, exempt: Iterable[int] = ()) -> Graph:
    """Delete edges until none can go without dropping a non-exempt vertex below ``target``.

    Edges are scanned in lexicographic order, repeating full passes until a
    pass removes nothing. An edge is removable when each endpoint is either
    exempt or has degree above ``target``.
    """
    exempt = vertex_set(g, exempt)
    deg = g.degrees()
    for v in g.vertices():
        if v not in exempt and deg[v] < target:
            raise InputError(
                f"vertex {v} has degree {deg[v]} < target {target}"
            )
    adj = [set(a) for a in g._adj]

    def slack(x: int) -> bool:
        return x in exempt or deg[x] > target

    removed = True
    while removed:
        removed = False
        for u in range(g.vertex_count):
            for v in sorted(adj[u]):
                if v > u and slack(u) and slack(v):
                    adj[u].discard(v)
                    adj[v].discard(u)
                    deg[u] -= 1
                    deg[v] -= 1
                    removed = True
    return Graph.from_adjacency(adj)


def is_edge_minimal(g: Graph, target: int, exempt: Iterable[int] = ()) -> bool:
    """True iff every edge has an endpoint outside ``exempt`` of degree exactly ``target``."""
    exempt = frozenset(exempt)
    for u, v in g.edges():
        if not ((u not in exempt and g.degree(u) == target)
                or (v not in exempt and g.degree(v) == target)):
            return False
    return True


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``s`` relabeled ``0..|s|-1`` in increasing order.

    Returns the subgraph and ``index_map`` with ``index_map[i]`` the original
    label of new vertex ``i``.
    """
    index_map = sorted(vertex_set(g, s))
    local = {v: i for i, v in enumerate(index_map)}
    adj = [[local[u] for u in g.adj(v) if u in local] for v in index_map]
    return Graph.from_adjacency(adj), index_map


def is_independent_set(g: Graph, s: Iterable[int]) -> bool:
    s = vertex_set(g, s)
    return all(not (g.adj(v) & s) for v in s)


@dataclass(frozen=True)
class BipartiteView:
    """The bipartite subgraph of ``host`` between two disjoint vertex sets."""

    host: Graph
    left: frozenset[int]
    right: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "left", vertex_set(self.host, self.left))
        object.__setattr__(self, "right", vertex_set(self.host, self.right))
        both = self.left & self.right
        if both:
            raise InputError(f"vertex {min(both)} is on both sides of the view")

    def neighbors(self, v: int) -> frozenset[int]:
        """Neighbors of ``v`` on the opposite side."""
        if v in self.left:
            return self.host.adj(v) & self.right
        if v in self.right:
            return self.host.adj(v) & self.left
        raise InputError(f"vertex {v} is not in the view")

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def edges(self) -> Iterator[tuple[int, int]]:
        """``(left, right)`` pairs in increasing order."""
        for u in sorted(self.left):
            for w in sorted(self.host.adj(u) & self.right):
                yield u, w
