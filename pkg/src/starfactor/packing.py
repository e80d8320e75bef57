"""Star packings, the verifier, and the packing text format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ContractError, InputError
from .graph import Graph


@dataclass(frozen=True, order=True)
class Star:
    center: int
    leaves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(set(self.leaves))))

    @property
    def size(self) -> int:
        return len(self.leaves)

    def vertices(self) -> tuple[int, ...]:
        return (self.center,) + self.leaves


@dataclass(frozen=True)
class StarPacking:
    """Vertex-disjoint stars. ``declared_ell`` is metadata and never trusted."""

    stars: tuple[Star, ...] = ()
    declared_ell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "stars", tuple(self.stars))

    def __len__(self) -> int:
        return len(self.stars)

    def __iter__(self):
        return iter(self.stars)

    def covered(self) -> frozenset[int]:
        return frozenset(v for s in self.stars for v in s.vertices())

    def centers(self) -> frozenset[int]:
        return frozenset(s.center for s in self.stars)

    def leaves(self) -> frozenset[int]:
        return frozenset(v for s in self.stars for v in s.leaves)

    def min_size(self) -> int:
        return min((s.size for s in self.stars), default=0)

    def canonical(self) -> "StarPacking":
        """Same packing with stars sorted by center."""
        return StarPacking(tuple(sorted(self.stars)), self.declared_ell)

    def relabel(self, index_map) -> "StarPacking":
        """Translate every vertex ``v`` to ``index_map[v]``."""
        return StarPacking(
            tuple(Star(index_map[s.center], tuple(index_map[x] for x in s.leaves))
                  for s in self.stars),
            self.declared_ell,
        )

    def with_declared(self, ell: int) -> "StarPacking":
        return StarPacking(self.stars, ell)

    def attach_leaf(self, g: Graph, star_index: int, v: int) -> "StarPacking":
        """Return a copy with ``v`` added as a leaf of ``stars[star_index]``."""
        star = self.stars[star_index]
        if v in self.covered():
            raise ContractError(f"vertex {v} is already in the packing")
        if not g.has_edge(star.center, v):
            raise ContractError(f"vertex {v} is not adjacent to center {star.center}")
        stars = list(self.stars)
        stars[star_index] = Star(star.center, star.leaves + (v,))
        return StarPacking(tuple(stars), self.declared_ell)

    def prune_leaves(self, keep, floor: int = 1) -> "StarPacking":
        """Keep only leaves in ``keep``; centers stay. Raises if a star drops below ``floor``."""
        keep = keep if isinstance(keep, (set, frozenset)) else frozenset(keep)
        stars = []
        for i, s in enumerate(self.stars):
            kept = tuple(x for x in s.leaves if x in keep)
            if len(kept) < floor:
                raise ContractError(
                    f"star {i} (center {s.center}) would shrink to {len(kept)} < floor {floor}"
                )
            stars.append(Star(s.center, kept))
        return StarPacking(tuple(stars), self.declared_ell)

    def merge(self, other: "StarPacking") -> "StarPacking":
        return StarPacking(self.stars + other.stars, min(self.declared_ell, other.declared_ell))


@dataclass(frozen=True)
class Violation:
    kind: str  # "range" | "leaf-not-adjacent" | "reused" | "too-small" | "uncovered" | "malformed"
    vertex: int | None = None
    star: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        if self.kind == "uncovered":
            return f"uncovered: {self.vertex}"
        if self.kind == "reused":
            return f"reused: {self.vertex} (star {self.star})"
        if self.kind == "leaf-not-adjacent":
            return f"leaf-not-adjacent: {self.vertex} (star {self.star})"
        if self.kind == "too-small":
            return f"too-small: star {self.star} {self.detail}"
        return f"{self.kind}: {self.detail or self.vertex}"


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...]
    min_star_size: int
    star_count: int
    covered_count: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations]


def verify(g: Graph, p: StarPacking, ell: int, required_cover: Iterable[int]) -> VerificationReport:
    """Check that ``p`` is an S_ell-packing of ``g`` covering ``required_cover``.

    Never raises on bad packings; every problem becomes a :class:`Violation`.
    Passing ``required_cover = range(n)`` certifies an S_ell-factor.
    """
    n = g.vertex_count
    out: list[Violation] = []
    seen: dict[int, int] = {}

    def use(v, i):
        if not (isinstance(v, int) and 0 <= v < n):
            out.append(Violation("range", v, i, f"vertex {v!r} out of range in star {i}"))
            return False
        if v in seen:
            out.append(Violation("reused", v, i))
            return False
        seen[v] = i
        return True

    for i, s in enumerate(p.stars):
        center_ok = use(s.center, i)
        for x in s.leaves:
            if x == s.center:
                out.append(Violation("malformed", x, i, f"center {x} is its own leaf in star {i}"))
                continue
            if use(x, i) and center_ok and not g.has_edge(s.center, x):
                out.append(Violation("leaf-not-adjacent", x, i))
        if s.size < max(ell, 1):
            out.append(Violation("too-small", s.center, i, f"size {s.size} < {max(ell, 1)}"))
    for v in sorted(set(required_cover)):
        if v not in seen:
            out.append(Violation("uncovered", v))
    return VerificationReport(
        violations=tuple(out),
        min_star_size=p.min_size(),
        star_count=len(p.stars),
        covered_count=len(seen),
    )


class PackingBuilder:
    """Mutable star packing used internally while a solver grows stars.

    Tracks center -> leaves and vertex -> owning center so attachment and
    re-rooting stay O(1).
    """

    def __init__(self, p: StarPacking | None = None):
        self.leaves: dict[int, set[int]] = {}
        self.owner: dict[int, int] = {}
        if p is not None:
            for s in p.stars:
                self.add_star(s.center, s.leaves)

    def __contains__(self, v: int) -> bool:
        return v in self.owner

    def is_center(self, v: int) -> bool:
        return v in self.leaves

    def size(self, center: int) -> int:
        return len(self.leaves[center])

    def add_star(self, center: int, leaves: Iterable[int]) -> None:
        leaves = set(leaves)
        for v in leaves | {center}:
            if v in self.owner:
                raise ContractError(f"vertex {v} is already in the packing")
        self.leaves[center] = leaves
        self.owner[center] = center
        for x in leaves:
            self.owner[x] = center

    def add_leaf(self, center: int, v: int) -> None:
        if v in self.owner:
            raise ContractError(f"vertex {v} is already in the packing")
        self.leaves[center].add(v)
        self.owner[v] = center

    def remove_leaf(self, v: int) -> int:
        c = self.owner.pop(v)
        self.leaves[c].discard(v)
        return c

    def remove_star(self, center: int) -> set[int]:
        leaves = self.leaves.pop(center)
        del self.owner[center]
        for x in leaves:
            del self.owner[x]
        return leaves

    def covered(self) -> set[int]:
        return set(self.owner)

    def build(self, declared_ell: int | None = None) -> StarPacking:
        stars = tuple(Star(c, tuple(ls)) for c, ls in sorted(self.leaves.items()))
        if declared_ell is None:
            declared_ell = min((len(ls) for ls in self.leaves.values()), default=0)
        return StarPacking(stars, declared_ell)


def format_packing(p: StarPacking) -> str:
    """Serialize to the ``ell``/``s`` line format (canonical star order)."""
    lines = [f"ell {p.declared_ell}"]
    for s in p.canonical().stars:
        lines.append(" ".join(["s", str(s.center), *map(str, s.leaves)]))
    return "\n".join(lines) + "\n"


def parse_packing(text: str) -> StarPacking:
    """Parse the packing format; raises :class:`InputError` on malformed input."""
    ell = None
    stars = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise InputError(f"line {lineno}: non-integer token in {raw!r}") from None
        if any(x < 0 for x in nums):
            raise InputError(f"line {lineno}: negative vertex in {raw!r}")
        if parts[0] == "ell":
            if ell is not None or len(nums) != 1:
                raise InputError(f"line {lineno}: bad header {raw!r}")
            ell = nums[0]
        elif parts[0] == "s":
            if ell is None:
                raise InputError(f"line {lineno}: star before 'ell' header")
            if len(nums) < 1:
                raise InputError(f"line {lineno}: star without center")
            if len(set(nums[1:])) != len(nums) - 1:
                raise InputError(f"line {lineno}: repeated leaf in {raw!r}")
            stars.append(Star(nums[0], tuple(nums[1:])))
        else:
            raise InputError(f"line {lineno}: unknown record {parts[0]!r}")
    if ell is None:
        raise InputError("missing 'ell' header")
    return StarPacking(tuple(stars), ell)
