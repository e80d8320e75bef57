"""Graph text format.

::

    # comment
    graph <n>
    e <u> <v>      (0 <= u < v < n, one line per edge, no duplicates)

The packing format lives in :mod:`starfactor.packing`.
"""

from __future__ import annotations

from pathlib import Path

from .errors import InputError
from .graph import Graph
from .packing import StarPacking, format_packing, parse_packing


def format_graph(g: Graph) -> str:
    lines = [f"graph {g.vertex_count}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise InputError(f"line {lineno}: non-integer token in {raw!r}") from None
        if parts[0] == "graph":
            if n is not None or len(nums) != 1 or nums[0] < 0:
                raise InputError(f"line {lineno}: bad header {raw!r}")
            n = nums[0]
        elif parts[0] == "e":
            if n is None:
                raise InputError(f"line {lineno}: edge before 'graph' header")
            if len(nums) != 2:
                raise InputError(f"line {lineno}: edge needs two endpoints")
            u, v = nums
            if not 0 <= u < v < n:
                raise InputError(f"line {lineno}: edge must satisfy 0 <= u < v < n, got {u} {v}")
            if (u, v) in seen:
                raise InputError(f"line {lineno}: duplicate edge {u} {v}")
            seen.add((u, v))
            edges.append((u, v))
        else:
            raise InputError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise InputError("missing 'graph' header")
    return Graph(n, edges)


def read_graph(path) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8", newline="\n")


def read_packing(path) -> StarPacking:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_packing(text)


def write_packing(p: StarPacking, path) -> None:
    Path(path).write_text(format_packing(p), encoding="utf-8", newline="\n")
