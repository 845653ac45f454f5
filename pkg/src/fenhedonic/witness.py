"""Per-player witness predicates for six stability concepts, plus local repair.

A partition is stable w.r.t. a concept iff no player is a witness. Every
predicate here sees the game and the partition only through oracle queries,
and the number of queries it spends depends on ``d`` and ``c`` but not on ``n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .game import (
    ENEMY,
    FRIEND,
    CoalitionStructure,
    Edit,
    EditScript,
    FenGame,
    SizeBound,
    apply_edits,
)
from .oracles import GraphOracle, PartitionOracle, QueryLedger, snapshot_ledger

SINGLETON = "singleton"


class StabilityConcept(str, enum.Enum):
    PERFECT = "perfect"
    INDIVIDUALLY_RATIONAL = "ir"
    NASH = "nash"
    INDIVIDUALLY_STABLE = "is"
    CONTRACTUALLY_INDIVIDUALLY_STABLE = "cis"
    CORE_STABLE = "core"

    @classmethod
    def parse(cls, name: str | StabilityConcept) -> StabilityConcept:
        if isinstance(name, StabilityConcept):
            return name
        aliases = {
            "individually_rational": cls.INDIVIDUALLY_RATIONAL,
            "individually_stable": cls.INDIVIDUALLY_STABLE,
            "contractually_individually_stable": cls.CONTRACTUALLY_INDIVIDUALLY_STABLE,
            "core_stable": cls.CORE_STABLE,
        }
        key = name.lower().replace("-", "_")
        if key in aliases:
            return aliases[key]
        return cls(key)


ALL_CONCEPTS = tuple(StabilityConcept)
INDIVIDUAL_CONCEPTS = tuple(c for c in StabilityConcept if c is not StabilityConcept.CORE_STABLE)


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of one witness evaluation.

    Evidence, present exactly when ``violated``: ``target`` is the coalition
    key the player would move to (or ``"singleton"``); ``coalition`` is an
    explicit player set that the player (for perfection) or every member (for
    the core) strictly prefers.
    """

    player: int
    concept: StabilityConcept
    violated: bool
    target: int | str | None = None
    coalition: frozenset[int] | None = None
    queries: QueryLedger = field(default_factory=QueryLedger)

    @property
    def phi(self) -> int:
        return int(self.violated)

    def to_dict(self) -> dict[str, Any]:
        return {
            "player": self.player,
            "concept": self.concept.value,
            "verdict": self.phi,
            "evidence": {
                "target": self.target,
                "coalition": sorted(self.coalition) if self.coalition is not None else None,
            }
            if self.violated
            else None,
            "queries": self.queries.as_dict(),
        }


class _LocalView:
    """Neighbourhood of one player with the coalition key of every neighbour."""

    __slots__ = ("player", "own_key", "friends", "enemies", "own_utility", "friend_count")

    def __init__(self, graph: GraphOracle, partition: PartitionOracle, i: int):
        neighbours = []
        for idx in range(1, graph.d + 1):
            hit = graph.neighbor(i, idx)
            if hit is None:
                break
            neighbours.append(hit)
        self.player = i
        self.own_key = partition.find(i)
        self.friends = [(j, partition.find(j)) for j, lab in neighbours if lab == FRIEND]
        self.enemies = [(j, partition.find(j)) for j, lab in neighbours if lab == ENEMY]
        p = graph.params
        self.own_utility = p.f * self.count_friends(self.own_key) - p.e * self.count_enemies(self.own_key)
        self.friend_count = len(self.friends)

    def count_friends(self, key: int) -> int:
        return sum(1 for _, k in self.friends if k == key)

    def count_enemies(self, key: int) -> int:
        return sum(1 for _, k in self.enemies if k == key)

    def best_possible(self, f: int, c: SizeBound) -> int:
        return f * (self.friend_count if c is None else min(c - 1, self.friend_count))


def phi(
    concept: StabilityConcept | str,
    graph: GraphOracle,
    partition: PartitionOracle,
    i: int,
    c: SizeBound = None,
) -> WitnessReport:
    """Evaluate whether player ``i`` is a witness against ``concept``."""
    concept = StabilityConcept.parse(concept)
    if graph.n != partition.n:
        raise ValueError("graph and partition oracles disagree on n")
    before = snapshot_ledger(graph, partition)
    target, coalition = _EVALUATORS[concept](graph, partition, i, c)
    violated = target is not None or coalition is not None
    return WitnessReport(i, concept, violated, target, coalition, snapshot_ledger(graph, partition) - before)


def _perfect(graph, partition, i, c):
    view = _LocalView(graph, partition, i)
    f = graph.params.f
    if view.own_utility >= view.best_possible(f, c):
        return None, None
    # i plus as many friends as fit: strictly better than the current coalition
    room = len(view.friends) if c is None else min(c - 1, len(view.friends))
    return None, frozenset([i] + [j for j, _ in view.friends[:room]])


def _individually_rational(graph, partition, i, c):
    view = _LocalView(graph, partition, i)
    return (SINGLETON, None) if view.own_utility < 0 else (None, None)


def _deviation(graph, partition, i, c, *, welcome_only: bool, contractual: bool):
    view = _LocalView(graph, partition, i)
    if contractual and view.count_friends(view.own_key) > 0:
        return None, None
    if view.own_utility < 0:
        return SINGLETON, None
    p = graph.params
    tried: set[int] = set()
    for _, key in view.friends:
        if key == view.own_key or key in tried:
            continue
        tried.add(key)
        enemies_there = view.count_enemies(key)
        if welcome_only and enemies_there:
            continue
        if p.f * view.count_friends(key) - p.e * enemies_there <= view.own_utility:
            continue
        # room for i iff the coalition has fewer than c members
        if c is not None and partition.member(key, c) is not None:
            continue
        return key, None
    return None, None


def _nash(graph, partition, i, c):
    return _deviation(graph, partition, i, c, welcome_only=False, contractual=False)


def _individually_stable(graph, partition, i, c):
    return _deviation(graph, partition, i, c, welcome_only=True, contractual=False)


def _contractually_individually_stable(graph, partition, i, c):
    return _deviation(graph, partition, i, c, welcome_only=True, contractual=True)


def _core_stable(graph, partition, i, c):
    """Search friend-connected coalitions around ``i`` for one that blocks.

    If a coalition blocks, so does the friend-connected part of it containing
    ``i`` (members keep all their friends and lose only enemies), and no member
    can be a player already at its best possible utility.
    """
    views = {i: _LocalView(graph, partition, i)}
    root = views[i]
    if root.own_utility < 0:
        return None, frozenset([i])
    p = graph.params

    def improvable(v: _LocalView) -> bool:
        return v.own_utility < v.best_possible(p.f, c)

    if not improvable(root):
        return None, None

    def blocks(members: frozenset[int]) -> bool:
        for j in members:
            v = views[j]
            u = p.f * sum(1 for k, _ in v.friends if k in members) - p.e * sum(1 for k, _ in v.enemies if k in members)
            if u <= v.own_utility:
                return False
        return True

    frontier = [frozenset([i])]
    seen = set(frontier)
    size = 1
    while frontier and (c is None or size < c):
        grown = []
        for members in frontier:
            candidates = sorted({k for j in members for k, _ in views[j].friends} - members)
            for w in candidates:
                if w not in views:
                    views[w] = _LocalView(graph, partition, w)
                if not improvable(views[w]):
                    continue
                bigger = members | {w}
                if bigger in seen:
                    continue
                seen.add(bigger)
                if blocks(bigger):
                    return None, bigger
                grown.append(bigger)
        frontier = grown
        size += 1
    return None, None


_EVALUATORS = {
    StabilityConcept.PERFECT: _perfect,
    StabilityConcept.INDIVIDUALLY_RATIONAL: _individually_rational,
    StabilityConcept.NASH: _nash,
    StabilityConcept.INDIVIDUALLY_STABLE: _individually_stable,
    StabilityConcept.CONTRACTUALLY_INDIVIDUALLY_STABLE: _contractually_individually_stable,
    StabilityConcept.CORE_STABLE: _core_stable,
}


def all_witnesses(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept | str, c: SizeBound = None
) -> list[WitnessReport]:
    """Evaluate every player through fresh oracles and return the witnesses."""
    graph, part = GraphOracle(game), PartitionOracle(partition)
    reports = (phi(concept, graph, part, i, c) for i in game.players)
    return [r for r in reports if r.violated]


# -- repair --------------------------------------------------------------------


def repair_to_favourite(game: FenGame, partition: CoalitionStructure, i: int) -> EditScript:
    """Edits that make ``i``'s current coalition one of its favourites.

    Deletes enemy edges inside the coalition and friend edges leaving it; at
    most ``d`` edits, none when the coalition already contains all of ``i``'s
    friends and none of its enemies.
    """
    home = partition.coalition_of(i)
    edits = [Edit("delete", ENEMY, i, j) for j in game.enemies(i) if j in home]
    edits += [Edit("delete", FRIEND, i, j) for j in game.friends(i) if j not in home]
    return EditScript(tuple(edits))


def repair_all_witnesses(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept | str, c: SizeBound = None
) -> EditScript:
    """Concatenated favourite-repairs of all witnesses found on the original game.

    An edge shared by two witnesses is deleted once.
    """
    done: set[tuple[str, tuple[int, int]]] = set()
    edits = []
    for report in all_witnesses(game, partition, concept, c):
        for ed in repair_to_favourite(game, partition, report.player):
            if (ed.kind, ed.pair) not in done:
                done.add((ed.kind, ed.pair))
                edits.append(ed)
    return EditScript(tuple(edits))


def repaired_game(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept | str, c: SizeBound = None
) -> tuple[FenGame, EditScript]:
    script = repair_all_witnesses(game, partition, concept, c)
    return apply_edits(game, script), script
