"""Cover every vertex outside an exempt set ``S`` with large stars.

Input: a graph where every vertex outside ``S`` has degree >= d - 5 and
every vertex of ``S`` has degree <= d. The pipeline is

1. edge-minimalize (target d - 5, exempt ``S``), so every edge touches a
   non-exempt vertex of degree exactly d - 5;
2. split ``V - S`` into D (degree d - 5), H (higher degree, independent),
   Dp (D-vertices with many H-neighbors), A (many neighbors in Dp + S)
   and B (the rest);
3. phase 1: pick sparse random centers among A + B and use a Hall factor
   to cover B + Dp;
4. phase 2: randomly borrow some phase-1 leaves inside Dp + S and cover
   the rest of A with :func:`~starfactor.bipartite.cover_left_side`.

The asymptotic constants only become meaningful for astronomically large
d. ``faithful`` mode uses them verbatim and raises :class:`SolverFailure`
when a quantity is out of range; ``best_effort`` clamps them and falls back
to a greedy cover, recording every such event in the report.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

from .bipartite import cover_left_side, hall_star_factor
from .errors import InputError, InvariantError, SolverFailure
from .graph import BipartiteView, Graph, edge_minimalize, is_edge_minimal, vertex_set
from .greedy import greedy_cover
from .lll import (
    BadEvent,
    SubsetSelectionProblem,
    check_symmetric_condition,
    clamp_probability,
    count_above,
    count_at_least,
    count_below,
    select_subset,
)
from .packing import PackingBuilder, StarPacking, verify

log = logging.getLogger(__name__)

MODES = ("faithful", "best_effort")


@dataclass(frozen=True)
class CoverConfig:
    c_select: float = 8.0  # phase-1 center probability c * sqrt(log d) / d^(3/4)
    c_cap: float = 9.0  # phase-1 cap on V1-neighbors
    c_prune: float = 30.0  # phase-2 keep probability c * sqrt(log d) / d^(1/4)
    c_slack: float = 42.0  # phase-2 degree d - c * d^(3/4) sqrt(log d)
    keep_floor_factor: float = 2.0  # pruned stars keep >= factor * sqrt(d) leaves
    mode: str = "best_effort"
    seed: int = 0
    max_resamples: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("c_select", "c_cap", "c_prune", "c_slack", "keep_floor_factor"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")

    @property
    def faithful(self) -> bool:
        return self.mode == "faithful"


def sqrt_log(d: float) -> float:
    """sqrt(ln d), floored at 0.1 so probabilities never vanish for tiny d."""
    return max(math.sqrt(math.log(d)) if d > 1 else 0.0, 0.1)


def round12(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass
class CoverReport:
    ell: int = 0
    target_ell: float | None = None
    stages: list[dict] = field(default_factory=list)
    fallbacks: list[str] = field(default_factory=list)

    @property
    def resamples(self) -> int:
        return sum(st.get("resamples", 0) for st in self.stages)

    def stage(self, name: str, **info) -> dict:
        st = {"name": name, **info}
        self.stages.append(st)
        return st

    def fallback(self, what: str) -> None:
        log.info("fallback: %s", what)
        self.fallbacks.append(what)


# --------------------------------------------------------------------------
# partition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverPartition:
    D: frozenset[int]
    H: frozenset[int]
    Dp: frozenset[int]
    A: frozenset[int]
    B: frozenset[int]
    tau: float  # threshold actually used for Dp and the two degree bounds
    a_threshold: float  # threshold actually used for A
    d: int

    def check(self, g: Graph, s: Iterable[int]) -> list[str]:
        """Every violated partition invariant, as readable strings."""
        s = frozenset(s)
        d, tau = self.d, self.tau
        bad = []
        rest = frozenset(g.vertices()) - s
        if self.D | self.H != rest or self.D & self.H:
            bad.append("D and H do not partition V - S")
        for v in rest:
            want_d = g.degree(v) == d - 5
            if want_d != (v in self.D):
                bad.append(f"vertex {v}: degree {g.degree(v)} but D membership {v in self.D}")
            if (g.degree(v) > d - 5) != (v in self.H):
                bad.append(f"vertex {v}: degree {g.degree(v)} but H membership {v in self.H}")
        for v in self.H:
            if g.adj(v) & self.H:
                bad.append(f"H not independent at {v}")
        dp = frozenset(v for v in self.D if len(g.adj(v) & self.H) >= tau)
        if dp != self.Dp:
            bad.append("Dp does not match its definition")
        ds = self.Dp | s
        a = frozenset(v for v in self.H | (self.D - self.Dp)
                      if len(g.adj(v) & ds) >= self.a_threshold)
        if a != self.A:
            bad.append("A does not match its definition")
        if self.B != (self.H | self.D) - (self.Dp | self.A):
            bad.append("B does not match its definition")
        d_rest = self.D - self.Dp
        for v in self.B:
            if len(g.adj(v) & d_rest) < tau:
                bad.append(f"B vertex {v} has fewer than tau neighbors in D - Dp")
        ds_all = self.D | s
        for v in self.A | self.B:
            if len(g.adj(v) & ds_all) < d - 5 - tau:
                bad.append(f"vertex {v} in A+B has fewer than d-5-tau neighbors in D + S")
        return bad


def _thresholds(d: int, faithful: bool) -> tuple[float, float]:
    tau_raw = d ** 0.75 * sqrt_log(d)
    a_thr = d - 3 * tau_raw
    tau = tau_raw
    if not faithful:
        tau = min(tau_raw, d / 4)
        a_thr = max(a_thr, 0.0)
    return round12(tau), round12(a_thr)


def _check_cover_input(g: Graph, s: frozenset[int], d: int, faithful: bool) -> None:
    for v in g.vertices():
        if v in s:
            if g.degree(v) > d:
                raise InputError(f"exempt vertex {v} has degree {g.degree(v)} > d={d}")
        elif g.degree(v) < d - 5:
            raise InputError(f"vertex {v} has degree {g.degree(v)} < d-5={d - 5}")
    if faithful and g.max_degree() > d ** 5:
        raise InputError(f"maximum degree {g.max_degree()} exceeds d^5")


def partition_vertices(g: Graph, s: Iterable[int], d: int, mode: str = "best_effort") -> CoverPartition:
    """Split ``V - S`` of an edge-minimalized graph into D, H, Dp, A, B."""
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    s = vertex_set(g, s)
    _check_cover_input(g, s, d, mode == "faithful")
    if not is_edge_minimal(g, max(d - 5, 0), s):
        raise InputError("graph is not edge-minimal for target d-5 and the exempt set")
    tau, a_thr = _thresholds(d, mode == "faithful")
    rest = [v for v in g.vertices() if v not in s]
    D = frozenset(v for v in rest if g.degree(v) == d - 5)
    H = frozenset(v for v in rest if g.degree(v) > d - 5)
    Dp = frozenset(v for v in D if len(g.adj(v) & H) >= tau)
    ds = Dp | s
    A = frozenset(v for v in H | (D - Dp) if len(g.adj(v) & ds) >= a_thr)
    B = (H | D) - (Dp | A)
    return CoverPartition(D, H, Dp, A, B, tau, a_thr, d)


# --------------------------------------------------------------------------
# phase 1
# --------------------------------------------------------------------------


def _selection(prob: SubsetSelectionProblem, cfg: CoverConfig, stage: str):
    out = select_subset(prob, seed=(cfg.seed, stage), max_resamples=cfg.max_resamples)
    if prob.events:
        p_hat = out.initial_violations / len(prob.events)
        dep = prob.dependency_bound()
        log.debug("%s: %d events, dependency bound %d, symmetric condition %s",
                  stage, len(prob.events), dep, check_symmetric_condition(p_hat, dep))
    return out


def phase1_cover(
    g: Graph,
    part: CoverPartition,
    s: Iterable[int],
    d: int,
    cfg: CoverConfig = CoverConfig(),
    report: CoverReport | None = None,
    fallback_graph: Graph | None = None,
) -> StarPacking:
    """Packing covering B + Dp with centers in A + B.

    Random centers ``V1`` avoid two bad events per vertex: a target with
    no neighbor in ``V1``, and any vertex with too many. The Hall factor
    between ``V1`` and its neighbors in ``(D + S) - V1`` then covers the
    targets; stray H-vertices of B join a neighboring star.
    """
    s = frozenset(s)
    report = report if report is not None else CoverReport()
    fallback_graph = fallback_graph or g
    targets = part.B | part.Dp
    if not targets:
        report.stage("phase1", size=0, resamples=0, converged=True, fallback=False)
        return StarPacking()
    sl = sqrt_log(d)
    universe = part.A | part.B
    p = clamp_probability(cfg.c_select * sl / d ** 0.75)
    events = []
    for v in sorted(targets):
        events.append(BadEvent(2 * v, g.adj(v) & universe, count_below(sorted(g.adj(v) & universe), 1)))
    for v in g.vertices():
        cap = max(d, g.degree(v)) * cfg.c_cap * sl / d ** 0.75
        scope = g.adj(v) & universe
        if len(scope) >= cap:
            events.append(BadEvent(2 * v + 1, scope, count_at_least(sorted(scope), cap)))
    out = _selection(SubsetSelectionProblem(universe, p, tuple(events)), cfg, "phase1")
    stage = report.stage("phase1", p=round12(p), events=len(events), **out.diagnostics())

    def fallback(why: str) -> StarPacking:
        if cfg.faithful:
            raise SolverFailure("phase1", why, stage)
        report.fallback(f"phase1: {why}")
        stage["fallback"] = True
        b = greedy_cover(fallback_graph, targets, preferred_centers=universe)
        pk = b.build()
        stage.update(size=len(pk), ell=pk.min_size())
        return pk

    if not out.converged:
        return fallback(f"selection did not converge ({out.violated_count} events left)")
    V1 = out.chosen
    V2 = frozenset(w for w in (part.D | s) - V1 if g.adj(w) & V1)
    if not V2:
        return fallback("no right side for the Hall factor")
    d1 = min(len(g.adj(v) & V2) for v in V1)
    d2_real = max(len(g.adj(w) & V1) for w in V2)
    if cfg.faithful:
        d2 = max(1, math.ceil(round12(cfg.c_cap * d ** 0.25 * sl)) - 1)
    else:
        d2 = d2_real
    if d1 < 0.99 * d:
        log.debug("phase1: Hall d1=%d below 0.99d", d1)
    stage.update(d1=d1, d2=d2)
    if d1 < d2 or d2 < 1:
        return fallback(f"Hall condition out of range (d1={d1}, d2={d2})")
    pk = hall_star_factor(BipartiteView(g, V1, V2), d1, d2)
    b = PackingBuilder(pk)
    for v in sorted((part.B & part.H) - V1):
        cs = g.adj(v) & V1
        b.add_leaf(min(cs, key=lambda c: (b.size(c), c)), v)
    pk = b.build(d1 // d2)
    stage.update(size=len(pk), ell=pk.min_size(), fallback=False,
                 target_k=round12(d ** 0.75 / (10 * sl)))
    return pk


# --------------------------------------------------------------------------
# phase 2
# --------------------------------------------------------------------------


def phase2_degree(d: int, cfg: CoverConfig) -> float:
    return round12(d - cfg.c_slack * d ** 0.75 * sqrt_log(d))


def phase2_cover(
    g: Graph,
    part: CoverPartition,
    s: Iterable[int],
    phase1: StarPacking,
    d: int,
    cfg: CoverConfig = CoverConfig(),
    report: CoverReport | None = None,
    fallback_graph: Graph | None = None,
) -> StarPacking:
    """Extend the phase-1 packing so it also covers A."""
    s = frozenset(s)
    report = report if report is not None else CoverReport()
    fallback_graph = fallback_graph or g
    C = phase1.centers()
    used = phase1.covered()
    V1 = part.A - used
    if not V1:
        report.stage("phase2", size=0, resamples=0, converged=True, fallback=False)
        return phase1
    sl = sqrt_log(d)
    d_cover = phase2_degree(d, cfg)
    stage = report.stage("phase2", left=len(V1), d_cover=d_cover)

    def fail(why: str) -> None:
        if cfg.faithful:
            raise SolverFailure("phase2", why, stage)
        report.fallback(f"phase2: {why}")
        stage["fallback"] = True

    if cfg.faithful and d_cover <= 0:
        fail(f"degree parameter d - c_slack d^(3/4) sqrt(log d) = {d_cover} is not positive")
    ds = part.Dp | s
    Lu = {st.center: frozenset(st.leaves) & ds for st in phase1.stars}
    cand = frozenset().union(*Lu.values()) if Lu else frozenset()
    p2 = clamp_probability(cfg.c_prune * sl / d ** 0.25)
    keep_floor = cfg.keep_floor_factor * math.sqrt(d)
    events = []
    for u in sorted(C):
        lu = Lu[u]
        if not lu:
            continue
        thr = keep_floor if cfg.faithful else min(keep_floor, 2 / 3 * p2 * len(lu))
        if thr > 0:
            events.append(BadEvent(2 * u, lu, count_below(sorted(lu), thr)))
    for v in sorted(V1):
        scope = g.adj(v) & cand
        if cfg.faithful:
            thr = len(g.adj(v) & ds) - d_cover
        else:
            thr = 4 / 3 * p2 * len(scope)
        if len(scope) > thr:
            events.append(BadEvent(2 * v + 1, scope, count_above(sorted(scope), thr)))
    out = _selection(SubsetSelectionProblem(cand, p2, tuple(events)), cfg, "phase2")
    stage.update(p=round12(p2), events=len(events), **out.diagnostics())

    b = PackingBuilder(phase1)
    cover_ell = None
    if not out.converged:
        fail(f"selection did not converge ({out.violated_count} events left)")
        pending = V1
    else:
        borrowed = cand - out.chosen
        origin = {x: u for u, lu in Lu.items() for x in lu if x in borrowed}
        pruned = phase1.prune_leaves(frozenset(g.vertices()) - borrowed, floor=1)
        shrunk = [st.size for st, old in zip(pruned.stars, phase1.stars) if st.size < old.size]
        stage["min_pruned_size"] = min(shrunk, default=None)
        if cfg.faithful and shrunk and min(shrunk) < keep_floor:
            fail(f"pruned star fell to {min(shrunk)} < {keep_floor:.3f}")
        b = PackingBuilder(pruned)
        right = frozenset(x for x in ds if x not in b)
        view_deg = {v: len(g.adj(v) & right) for v in V1}
        if cfg.faithful:
            d_use = math.ceil(d_cover)
        else:
            d_use = max(math.ceil(max(d_cover, math.ceil(d / 2))), 1)
        ready = frozenset(v for v in V1 if view_deg[v] >= d_use)
        pending = V1 - ready
        if pending:
            fail(f"{len(pending)} vertices of A have view degree below {d_use}")
        if ready:
            view = BipartiteView(g, ready, frozenset(w for w in right if g.adj(w) & ready))
            left_cover = cover_left_side(view, d_use)
            cover_ell = left_cover.min_size()
            for st in left_cover.stars:
                b.add_star(st.center, st.leaves)
        for x in sorted(borrowed):
            if x not in b:
                b.add_leaf(origin[x], x)
        stage.update(borrowed=len(borrowed), cover_d=d_use, cover_ell=cover_ell)
    if pending:
        greedy_cover(fallback_graph, pending, base=b)
    pk = b.build()
    stage.update(size=len(pk), ell=pk.min_size())
    stage.setdefault("fallback", False)
    return pk


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def cover_excluding(
    g: Graph, s: Iterable[int], d: int, cfg: CoverConfig = CoverConfig()
) -> tuple[StarPacking, CoverReport]:
    """Star packing of ``g`` covering every vertex outside ``s``."""
    s = vertex_set(g, s)
    _check_cover_input(g, s, d, cfg.faithful)
    report = CoverReport()
    dl = phase2_degree(d, cfg)
    report.target_ell = round12(math.sqrt(dl)) if dl > 0 else None
    gm = edge_minimalize(g, max(d - 5, 0), s)
    part = partition_vertices(gm, s, d, cfg.mode)
    report.stage("partition", D=len(part.D), H=len(part.H), Dp=len(part.Dp),
                 A=len(part.A), B=len(part.B), tau=part.tau, a_threshold=part.a_threshold)
    p1 = phase1_cover(gm, part, s, d, cfg, report, fallback_graph=g)
    pk = phase2_cover(gm, part, s, p1, d, cfg, report, fallback_graph=g)
    need = frozenset(g.vertices()) - s
    missing = need - pk.covered()
    if missing:
        if cfg.faithful:
            raise InvariantError(f"phases left {len(missing)} vertices uncovered")
        report.fallback(f"final: {len(missing)} vertices covered greedily")
        pk = greedy_cover(g, missing, base=pk).build()
    ell = pk.min_size()
    pk = pk.with_declared(ell)
    rep = verify(g, pk, ell, need)
    if not rep.ok:
        raise InvariantError("cover produced an invalid packing: " + "; ".join(rep.lines()[:5]))
    report.ell = ell
    return pk, report
