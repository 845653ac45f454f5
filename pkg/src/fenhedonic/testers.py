"""Randomized one-sided-error testers.

Both testers draw ``ceil(ln(3) / epsilon)`` players uniformly with
replacement. If a property holds they always accept; if the input is
epsilon-far they reject with probability at least 2/3.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .game import FRIEND, SizeBound
from .oracles import GraphOracle, PartitionOracle, QueryLedger, snapshot_ledger
from .witness import StabilityConcept, WitnessReport, phi

Epsilon = float | Fraction


def sample_size(epsilon: Epsilon) -> int:
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    return math.ceil(math.log(3) / float(epsilon))


# One individual-concept witness evaluation spends at most d neighbour queries,
# d + 1 find queries and d member queries (one size check per friend's
# coalition), i.e. 3d + 1 <= 4d. The published constant leaves 10x headroom.
INDIVIDUAL_QUERY_CONSTANT = 40


def individual_query_bound(d: int, epsilon: Epsilon) -> int:
    """Worst-case ledger total of one verification run for the five individual concepts."""
    return INDIVIDUAL_QUERY_CONSTANT * d * sample_size(epsilon)


@dataclass(frozen=True)
class TesterConfig:
    epsilon: Epsilon
    concept: StabilityConcept | None = None
    c: SizeBound = None
    rng_seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.concept is not None:
            object.__setattr__(self, "concept", StabilityConcept.parse(self.concept))


@dataclass(frozen=True)
class ComponentViolation:
    """Reject evidence of the perfect-existence tester.

    ``component`` holds the players that any perfect structure would have to
    put into one coalition; it is either larger than ``c`` or contains both
    ends of ``enemy_edge``.
    """

    start: int
    reason: str
    component: tuple[int, ...]
    enemy_edge: tuple[int, int] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "start": self.start,
            "reason": self.reason,
            "component": list(self.component),
            "enemy_edge": list(self.enemy_edge) if self.enemy_edge else None,
        }


@dataclass(frozen=True)
class TesterVerdict:
    accept: bool
    sample: tuple[int, ...]
    witnesses: tuple[WitnessReport | ComponentViolation, ...] = ()
    ledger: QueryLedger = field(default_factory=QueryLedger)
    seed: int = 0
    epsilon: Epsilon = 1
    concept: str | None = None

    @property
    def decision(self) -> str:
        return "accept" if self.accept else "reject"

    def to_dict(self) -> dict[str, Any]:
        return {
            "decision": self.decision,
            "sample": list(self.sample),
            "witnesses": [w.to_dict() for w in self.witnesses],
            "queries": self.ledger.as_dict(),
            "seed": self.seed,
            "epsilon": str(self.epsilon),
            "concept": self.concept,
        }


def verification_tester(graph: GraphOracle, partition: PartitionOracle, config: TesterConfig) -> TesterVerdict:
    """Sample players and reject on the first witness against ``config.concept``."""
    if config.concept is None:
        raise ValueError("verification needs a stability concept")
    if graph.n != partition.n:
        raise ValueError("graph and partition oracles disagree on n")
    rng = random.Random(config.rng_seed)
    before = snapshot_ledger(graph, partition)
    sample = []
    witnesses = []
    if graph.n > 0:
        for _ in range(sample_size(config.epsilon)):
            i = rng.randrange(graph.n) + 1
            sample.append(i)
            report = phi(config.concept, graph, partition, i, config.c)
            if report.violated:
                witnesses.append(report)
                break
    return TesterVerdict(
        accept=not witnesses,
        sample=tuple(sample),
        witnesses=tuple(witnesses),
        ledger=snapshot_ledger(graph, partition) - before,
        seed=config.rng_seed,
        epsilon=config.epsilon,
        concept=config.concept.value,
    )


def _forced_component(graph: GraphOracle, start: int, c: int) -> ComponentViolation | None:
    """Breadth-first search along friend edges that force a shared coalition.

    A player with fewer than ``c`` friends shares its coalition with all of
    them in any perfect structure, so only its friend edges are followed. With
    ``c > d`` that is every friend edge.
    """
    enemies: dict[int, list[int]] = {}
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        friends, enemies[v] = [], []
        for idx in range(1, graph.d + 1):
            hit = graph.neighbor(v, idx)
            if hit is None:
                break
            (friends if hit[1] == FRIEND else enemies[v]).append(hit[0])
        if len(friends) >= c:
            continue
        for w in friends:
            if w not in seen:
                seen.add(w)
                order.append(w)
                if len(order) > c:
                    return ComponentViolation(start, "oversized friend component", tuple(order))
                queue.append(w)
    for v in order:
        for w in enemies.get(v, ()):
            if w in seen:
                return ComponentViolation(start, "enemy edge inside friend component", tuple(sorted(seen)), (min(v, w), max(v, w)))
    return None


def perfect_existence_tester(graph: GraphOracle, epsilon: Epsilon, c: SizeBound, rng_seed: int = 0) -> TesterVerdict:
    """Test whether the game admits a perfect structure with coalitions of size at most ``c``."""
    if c is None:
        raise ValueError("the perfect-existence tester needs a bounded coalition size")
    if c < 1:
        raise ValueError("size bound must be positive")
    rng = random.Random(rng_seed)
    before = snapshot_ledger(graph)
    sample = []
    witnesses = []
    if graph.n > 0:
        for _ in range(sample_size(epsilon)):
            v = rng.randrange(graph.n) + 1
            sample.append(v)
            found = _forced_component(graph, v, c)
            if found is not None:
                witnesses.append(found)
                break
    return TesterVerdict(
        accept=not witnesses,
        sample=tuple(sample),
        witnesses=tuple(witnesses),
        ledger=snapshot_ledger(graph) - before,
        seed=rng_seed,
        epsilon=epsilon,
        concept="perfect-existence",
    )
