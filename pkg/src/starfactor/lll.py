"""Random subset selection with bad-event resampling (Moser-Tardos style).

A :class:`SubsetSelectionProblem` includes each universe element
independently with a fixed probability and lists bad events, each reading
only the elements in its ``scope``. :func:`select_subset` samples, then
repeatedly resamples the scope of the lowest-id violated event until no
event holds or the budget runs out.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import rng

Predicate = Callable[[set], bool]


@dataclass(frozen=True)
class BadEvent:
    id: int
    scope: frozenset[int]
    predicate: Predicate  # called with the live chosen set; must only read scope

    def __post_init__(self):
        object.__setattr__(self, "scope", frozenset(self.scope))


@dataclass(frozen=True)
class SubsetSelectionProblem:
    universe: frozenset[int]
    inclusion_probability: float
    events: tuple[BadEvent, ...] = ()

    def __post_init__(self):
        p = float(self.inclusion_probability)
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise ValueError(f"inclusion probability {p} outside [0, 1]")
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "inclusion_probability", p)
        object.__setattr__(self, "events", tuple(sorted(self.events, key=lambda e: e.id)))
        ids = [e.id for e in self.events]
        if len(set(ids)) != len(ids):
            raise ValueError("event ids must be unique")

    def default_budget(self) -> int:
        return 10 * len(self.universe) + 10 * len(self.events)

    def violated(self, chosen) -> list[int]:
        """Ids of events whose predicate holds on ``chosen``."""
        chosen = set(chosen)
        return [e.id for e in self.events if e.predicate(chosen)]

    def dependency_bound(self) -> int:
        """Cheap upper bound on the dependency degree: max over events of the
        number of other events sharing some variable with it (counted with
        multiplicity, so it may overestimate)."""
        per_var: dict[int, int] = {}
        for e in self.events:
            for x in e.scope & self.universe:
                per_var[x] = per_var.get(x, 0) + 1
        best = 0
        for e in self.events:
            best = max(best, sum(per_var.get(x, 0) - 1 for x in e.scope & self.universe))
        return best


@dataclass(frozen=True)
class LLLOutcome:
    chosen: frozenset[int]
    resample_count: int
    converged: bool
    violated_count: int = 0
    initial_violations: int = 0
    dependency_bound: int | None = field(default=None, compare=False)

    def diagnostics(self) -> dict:
        return {
            "resamples": self.resample_count,
            "converged": self.converged,
            "violated": self.violated_count,
            "initial_violations": self.initial_violations,
        }


def check_symmetric_condition(p: float, dep_degree: int) -> bool:
    """The symmetric Local Lemma condition ``e * p * (dep_degree + 1) <= 1``."""
    return math.e * p * (dep_degree + 1) <= 1.0


def clamp_probability(p: float) -> float:
    if math.isnan(p):
        return 0.0
    return min(1.0, max(0.0, p))


def select_subset(
    prob: SubsetSelectionProblem,
    seed=0,
    max_resamples: int | None = None,
) -> LLLOutcome:
    """Sample a subset avoiding every bad event, resampling violated scopes.

    The same ``(prob, seed, max_resamples)`` always gives the same outcome.
    On budget exhaustion the subset with the fewest violated events seen is
    returned with ``converged=False``.
    """
    if max_resamples is None:
        max_resamples = prob.default_budget()
    if max_resamples < 0:
        raise ValueError("max_resamples must be >= 0")
    gen = rng.stream(seed, "select_subset")
    p = prob.inclusion_probability
    universe = sorted(prob.universe)
    draws = gen.random(len(universe))
    chosen = {x for x, r in zip(universe, draws) if r < p}

    events = prob.events
    uni = prob.universe
    by_var: dict[int, list[int]] = {}
    scopes: list[list[int]] = []
    for i, e in enumerate(events):
        sc = sorted(e.scope & uni)
        scopes.append(sc)
        for x in sc:
            by_var.setdefault(x, []).append(i)

    bad = [e.predicate(chosen) for e in events]
    heap = [i for i, b in enumerate(bad) if b]  # event index order == id order
    heapq.heapify(heap)
    n_bad = len(heap)
    initial = n_bad
    best_bad, best = n_bad, frozenset(chosen)
    count = 0
    while n_bad:
        if count >= max_resamples:
            return LLLOutcome(best, count, False, best_bad, initial)
        i = heapq.heappop(heap)
        while not bad[i]:
            i = heapq.heappop(heap)
        count += 1
        sc = scopes[i]
        changed = []
        for x, r in zip(sc, gen.random(len(sc))):
            now = r < p
            if now != (x in chosen):
                changed.append(x)
                if now:
                    chosen.add(x)
                else:
                    chosen.discard(x)
        touched = {i}
        for x in changed:
            touched.update(by_var[x])
        for j in touched:
            was = bad[j]
            bad[j] = events[j].predicate(chosen)
            if bad[j] and not was:
                n_bad += 1
                heapq.heappush(heap, j)
            elif was and not bad[j]:
                n_bad -= 1
            elif bad[j] and j == i:
                heapq.heappush(heap, j)
        if n_bad < best_bad:
            best_bad, best = n_bad, frozenset(chosen)
    return LLLOutcome(frozenset(chosen), count, True, 0, initial)


def count_at_least(nbrs: Iterable[int], threshold: float) -> Predicate:
    """Predicate: at least ``threshold`` of ``nbrs`` are chosen."""
    nbrs = tuple(nbrs)

    def pred(chosen: set) -> bool:
        return sum(1 for x in nbrs if x in chosen) >= threshold

    return pred


def count_below(nbrs: Iterable[int], threshold: float) -> Predicate:
    """Predicate: fewer than ``threshold`` of ``nbrs`` are chosen."""
    nbrs = tuple(nbrs)

    def pred(chosen: set) -> bool:
        return sum(1 for x in nbrs if x in chosen) < threshold

    return pred


def count_above(nbrs: Iterable[int], threshold: float) -> Predicate:
    """Predicate: more than ``threshold`` of ``nbrs`` are chosen."""
    nbrs = tuple(nbrs)

    def pred(chosen: set) -> bool:
        return sum(1 for x in nbrs if x in chosen) > threshold

    return pred


def missing_at_least(nbrs: Iterable[int], threshold: float) -> Predicate:
    """Predicate: at least ``threshold`` of ``nbrs`` are *not* chosen."""
    nbrs = tuple(nbrs)

    def pred(chosen: set) -> bool:
        return sum(1 for x in nbrs if x not in chosen) >= threshold

    return pred
