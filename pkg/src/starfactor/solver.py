"""Star factors of graphs with minimum degree d.

:func:`solve` runs the full pipeline: strip vertices of huge degree with a
Hall factor, borrow a random subset of their leaves, cover the rest with
:func:`~starfactor.cover.cover_excluding`, and hand unused borrowed leaves
back. :func:`solve_regular` is the simpler route for d-regular graphs.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

from .bipartite import hall_star_factor
from .cover import CoverConfig, CoverReport, cover_excluding, round12, sqrt_log, MODES
from .errors import ContractError, InputError, InvariantError, SolverFailure
from .graph import BipartiteView, Graph, edge_minimalize, induced_subgraph, is_independent_set
from .greedy import greedy_factor
from .lll import (
    BadEvent,
    SubsetSelectionProblem,
    clamp_probability,
    count_above,
    count_below,
    missing_at_least,
    select_subset,
)
from .packing import PackingBuilder, StarPacking, verify

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    cover: CoverConfig = field(default_factory=CoverConfig)
    high_degree_exponent: float = 5.0
    big_star_exponent: float = 4.0
    gamma_floor: int = 6
    regular_c: float = 1.0
    mode: str = "best_effort"
    seed: int = 0
    max_resamples: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.high_degree_exponent < 1 or self.big_star_exponent < 1:
            raise InputError("exponents must be >= 1")
        if self.gamma_floor < 1:
            raise InputError("gamma_floor must be >= 1")
        if not self.regular_c > 0:
            raise InputError("regular_c must be positive")

    @property
    def faithful(self) -> bool:
        return self.mode == "faithful"

    def cover_config(self) -> CoverConfig:
        return replace(self.cover, mode=self.mode, seed=self.seed, max_resamples=self.max_resamples)

    def big_star(self, d: int) -> int:
        return math.floor(round12(d ** self.big_star_exponent))

    def borrow_keep(self, d: int) -> int:
        return self.big_star(d) - d

    @staticmethod
    def borrow_probability(d: int) -> float:
        return clamp_probability(1 - 1 / d ** 2)


@dataclass
class SolveReport:
    achieved_ell: int
    paper_target_ell: float
    d: int
    n: int
    mode: str
    seed: int
    stages: list[dict] = field(default_factory=list)
    fallbacks: list[str] = field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def resamples(self) -> int:
        return sum(st.get("resamples", 0) or 0 for st in self.stages)

    @property
    def c_tilde(self) -> float:
        """Empirical constant (sqrt(d) - ell) / (d^(1/4) sqrt(log d))."""
        return round12((math.sqrt(self.d) - self.achieved_ell) / (self.d ** 0.25 * sqrt_log(self.d)))

    @property
    def fallback_used(self) -> bool:
        return bool(self.fallbacks)

    def to_dict(self) -> dict:
        return {
            "achieved_ell": self.achieved_ell,
            "paper_target_ell": self.paper_target_ell,
            "c_tilde": self.c_tilde,
            "d": self.d,
            "n": self.n,
            "mode": self.mode,
            "seed": self.seed,
            "stages": self.stages,
            "resamples": self.resamples,
            "fallbacks": self.fallbacks,
            "wall_time_ms": self.wall_time_ms,
        }


def paper_target_ell(d: int, c: float = 42.0) -> float:
    """sqrt(d) - c d^(1/4) sqrt(log d); negative for every practical d."""
    return round12(math.sqrt(d) - c * d ** 0.25 * sqrt_log(d))


def _check_min_degree(g: Graph, d: int) -> None:
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    for v in g.vertices():
        if g.degree(v) < d:
            raise InputError(f"vertex {v} has degree {g.degree(v)} < d={d}")


def _finish(g: Graph, pk: StarPacking, report: SolveReport, t0: float):
    ell = pk.min_size()
    pk = pk.with_declared(ell).canonical()
    rep = verify(g, pk, ell, g.vertices())
    if not rep.ok:
        raise InvariantError("solver emitted an invalid factor: " + "; ".join(rep.lines()[:5]))
    report.achieved_ell = ell
    report.wall_time_ms = round((time.perf_counter() - t0) * 1000, 3)
    return pk, report


def solve(g: Graph, d: int, cfg: SolverConfig = SolverConfig()) -> tuple[StarPacking, SolveReport]:
    """S_ell-factor of ``g`` (minimum degree >= ``d``) and a report of how it was built."""
    t0 = time.perf_counter()
    _check_min_degree(g, d)
    report = SolveReport(0, paper_target_ell(d, cfg.cover.c_slack), d, g.vertex_count, cfg.mode, cfg.seed)
    try:
        pk = _pipeline(g, d, cfg, report)
    except (SolverFailure, ContractError, InputError) as exc:
        # the precondition was checked above, so InputError here comes from an
        # internal stage whose input the randomized steps failed to prepare
        if cfg.faithful:
            if isinstance(exc, SolverFailure):
                raise
            raise SolverFailure("pipeline", str(exc)) from exc
        report.fallbacks.append(f"terminal greedy: {exc}")
        report.stages.append({"name": "greedy", "fallback": True})
        pk = greedy_factor(g)
        return _finish(g, pk, report, t0)
    if not cfg.faithful:
        alt = greedy_factor(g)
        better = alt.min_size() > pk.min_size()
        report.stages.append({"name": "greedy_compare", "ell": alt.min_size(), "used": better})
        if better:
            report.fallbacks.append(f"greedy factor beat the pipeline ({alt.min_size()} > {pk.min_size()})")
            pk = alt
    return _finish(g, pk, report, t0)


def _pipeline(g: Graph, d: int, cfg: SolverConfig, report: SolveReport) -> StarPacking:
    n = g.vertex_count
    gm = edge_minimalize(g, d)
    hi = round12(d ** cfg.high_degree_exponent)
    H = frozenset(v for v in gm.vertices() if gm.degree(v) > hi)
    W = frozenset().union(*(gm.adj(h) for h in H)) if H else frozenset()
    if not is_independent_set(gm, H):
        raise InvariantError("high-degree set is not independent after minimalization")
    for w in W:
        if gm.degree(w) != d:
            raise InvariantError(f"neighbor {w} of the high-degree set has degree {gm.degree(w)} != d")
    stage = {"name": "high_degree", "H": len(H), "W": len(W)}
    report.stages.append(stage)

    hub = PackingBuilder()
    S: frozenset[int] = frozenset()
    if H:
        view = BipartiteView(gm, H, W)
        d1 = min(gm.degree(h) for h in H)
        d2 = max(view.degree(w) for w in W)
        hp = hall_star_factor(view, d1, d2)
        big = cfg.big_star(d)
        L = {st.center: st.leaves[:big] for st in hp.stars}
        if cfg.faithful and any(len(x) < big for x in L.values()):
            raise SolverFailure("high_degree", f"a hub star has fewer than {big} leaves")
        stage.update(ell=hp.min_size(), big_star=big)

        Vp = frozenset(gm.vertices()) - H - W
        events = []
        keep_max = cfg.borrow_keep(d)
        for u in sorted(H):
            events.append(BadEvent(u, L[u], count_above(L[u], keep_max)))
        gamma = {}
        for v in sorted(Vp):
            inside = len(gm.adj(v) & Vp)
            if inside < d - 5:
                gamma[v] = sorted(gm.adj(v) & W)[: d - inside]
                events.append(BadEvent(n + v, gamma[v], missing_at_least(gamma[v], cfg.gamma_floor)))
        prob = SubsetSelectionProblem(W, cfg.borrow_probability(d), tuple(events))
        out = select_subset(prob, seed=(cfg.seed, "borrow"), max_resamples=cfg.max_resamples)
        bstage = {"name": "borrow", "events": len(events), "gamma": len(gamma), **out.diagnostics()}
        report.stages.append(bstage)
        if not out.converged:
            raise SolverFailure("borrow", f"selection did not converge ({out.violated_count} events left)", bstage)
        S = out.chosen
        floor = d if cfg.faithful else 1
        pruned = hp.prune_leaves(frozenset(gm.vertices()) - S, floor=floor)
        hub = PackingBuilder(pruned)
        bstage.update(borrowed=len(S), min_pruned=pruned.min_size())
    else:
        Vp = frozenset(gm.vertices())

    sub, index_map = induced_subgraph(gm, Vp | S)
    local = {v: i for i, v in enumerate(index_map)}
    cover_pk, crep = cover_excluding(sub, [local[w] for w in S], d, cfg.cover_config())
    report.stages.extend(crep.stages)
    report.fallbacks.extend(crep.fallbacks)
    cover_pk = cover_pk.relabel(index_map)

    b = hub
    for st in cover_pk.stars:
        b.add_star(st.center, st.leaves)
    left_over = sorted(w for w in S if w not in b)
    for w in left_over:
        hubs = gm.adj(w) & H
        c = max(hubs, key=lambda c: (b.size(c), -c))
        b.add_leaf(c, w)
    report.stages.append({"name": "reattach", "count": len(left_over)})
    return b.build()


def regular_selection(g: Graph, d: int, c: float, seed, max_resamples=None):
    """Pick ``V1`` so every vertex has between 1 and ``cap`` neighbors in it.

    Returns ``(outcome, cap)``; inclusion probability is ``c log d / d``.
    """
    p = clamp_probability(c * math.log(d) / d) if d > 1 else 0.0
    cap = max(1, math.ceil(round12(3 * c * math.log(d)))) if d > 1 else 1
    events = []
    for v in g.vertices():
        nb = sorted(g.adj(v))
        events.append(BadEvent(2 * v, nb, count_below(nb, 1)))
        events.append(BadEvent(2 * v + 1, nb, count_above(nb, cap)))
    prob = SubsetSelectionProblem(frozenset(g.vertices()), p, tuple(events))
    return select_subset(prob, seed=seed, max_resamples=max_resamples), cap


def solve_regular(g: Graph, d: int, cfg: SolverConfig = SolverConfig()) -> tuple[StarPacking, SolveReport]:
    """Star factor of a d-regular graph through one sparse random center set.

    Retries with the probability constant doubled (up to four times) when
    the selection does not converge, then falls back to a greedy factor.
    """
    t0 = time.perf_counter()
    if d < 1 or any(g.degree(v) != d for v in g.vertices()):
        raise InputError(f"graph is not {d}-regular")
    report = SolveReport(0, paper_target_ell(d, cfg.cover.c_slack), d, g.vertex_count, cfg.mode, cfg.seed)
    c = cfg.regular_c
    attempts = 1 if cfg.faithful else 5
    for attempt in range(attempts):
        out, cap = regular_selection(g, d, c, (cfg.seed, "regular", attempt), cfg.max_resamples)
        stage = {"name": "regular_select", "attempt": attempt, "c": c, "cap": cap, **out.diagnostics()}
        report.stages.append(stage)
        if out.converged:
            break
        if cfg.faithful:
            raise SolverFailure("regular_select", "selection did not converge", stage)
        report.fallbacks.append(f"regular_select attempt {attempt} did not converge (c={c})")
        c *= 2
    else:
        report.fallbacks.append("terminal greedy")
        return _finish(g, greedy_factor(g), report, t0)

    V1 = out.chosen
    V2 = frozenset(g.vertices()) - V1
    view = BipartiteView(g, V1, V2)
    d1 = min((view.degree(v) for v in V1), default=0)
    d2 = max((view.degree(w) for w in V2), default=0)
    stage.update(V1=len(V1), d1=d1, d2=d2)
    if not V2 or d2 < 1 or d1 < d2:
        if cfg.faithful:
            raise SolverFailure("regular_hall", f"Hall parameters out of range (d1={d1}, d2={d2})", stage)
        report.fallbacks.append(f"regular_hall: d1={d1} < d2={d2}; terminal greedy")
        return _finish(g, greedy_factor(g), report, t0)
    pk = hall_star_factor(view, d1, d2)
    stage["ell"] = pk.min_size()
    return _finish(g, pk, report, t0)
