"""Brute-force ground truth for small instances.

Everything here reads the game directly (no oracles, no sampling) and follows
the stability definitions literally, so it can serve as the reference the
witness predicates and testers are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator

from .game import (
    CoalitionStructure,
    Edit,
    FenGame,
    GameError,
    SizeBound,
    apply_edits,
    fits,
    is_favourite,
    max_utility,
    prefers,
    utility,
)
from .witness import StabilityConcept, repair_all_witnesses

BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class Violation:
    """One way a player violates a concept.

    ``target`` is the coalition ``i`` joins (``()`` for going alone) for the
    single-player deviation concepts; ``coalition`` is the strictly preferred
    or blocking player set otherwise.
    """

    player: int
    target: tuple[int, ...] | None = None
    coalition: frozenset[int] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "player": self.player,
            "target": list(self.target) if self.target is not None else None,
            "coalition": sorted(self.coalition) if self.coalition is not None else None,
        }


@dataclass(frozen=True)
class StabilityCertificate:
    stable: bool
    witnesses: tuple[Violation, ...] = ()
    structure: CoalitionStructure | None = None
    reason: str | None = None
    component: tuple[int, ...] | None = None
    enemy_edge: tuple[int, int] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"stable": self.stable, "witnesses": [w.to_dict() for w in self.witnesses]}
        if self.structure is not None:
            out["structure"] = [list(p) for p in self.structure.coalitions]
        if self.reason is not None:
            out["reason"] = self.reason
        if self.component is not None:
            out["component"] = list(self.component)
        if self.enemy_edge is not None:
            out["enemy_edge"] = list(self.enemy_edge)
        return out


# -- verification --------------------------------------------------------------


def _individual_violation(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept, i: int, c: SizeBound
) -> Violation | None:
    return next(_individual_violations(game, partition, concept, i, c), None)


def _individual_violations(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept, i: int, c: SizeBound
) -> Iterator[Violation]:
    home = partition.coalition_of(i)
    here = utility(game, i, home)
    if concept is StabilityConcept.INDIVIDUALLY_RATIONAL:
        if here < 0:
            yield Violation(i, target=())
        return
    if concept is StabilityConcept.PERFECT:
        if here < max_utility(game, i, c):
            room = len(game.friends(i)) if c is None else min(c - 1, len(game.friends(i)))
            yield Violation(i, coalition=frozenset((i, *game.friends(i)[:room])))
        return
    without_i = home - {i}
    for C in [()] + list(partition.coalitions):
        if i in C or not (c is None or len(C) < c):
            continue
        joined = frozenset(C) | {i}
        if not prefers(game, i, joined, home):
            continue
        if concept in (StabilityConcept.INDIVIDUALLY_STABLE, StabilityConcept.CONTRACTUALLY_INDIVIDUALLY_STABLE):
            if any(prefers(game, j, C, joined) for j in C):
                continue
        if concept is StabilityConcept.CONTRACTUALLY_INDIVIDUALLY_STABLE:
            if any(prefers(game, j, home, without_i) for j in without_i):
                continue
        yield Violation(i, target=tuple(C))


def connected_coalitions(game: FenGame, i: int, c: SizeBound) -> Iterator[frozenset[int]]:
    """All sets containing ``i`` that are connected in the friend-or-enemy graph, by size."""
    frontier = [frozenset([i])]
    seen = set(frontier)
    yield frontier[0]
    size = 1
    while frontier and (c is None or size < c):
        grown = []
        for members in frontier:
            for w in sorted({k for j in members for k in (*game.friends(j), *game.enemies(j))} - members):
                bigger = members | {w}
                if bigger not in seen:
                    seen.add(bigger)
                    grown.append(bigger)
                    yield bigger
        frontier = grown
        size += 1


def blocks(game: FenGame, partition: CoalitionStructure, coalition: frozenset[int]) -> bool:
    return all(prefers(game, j, coalition, partition.coalition_of(j)) for j in coalition)


def exact_verify(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept | str, c: SizeBound = None
) -> StabilityCertificate:
    """Check stability of ``partition`` by scanning every player; lists every witness."""
    concept = StabilityConcept.parse(concept)
    if game.n != partition.n:
        raise GameError("game and partition disagree on n")
    witnesses = []
    for i in game.players:
        if concept is StabilityConcept.CORE_STABLE:
            hit = next((C for C in connected_coalitions(game, i, c) if blocks(game, partition, C)), None)
            v = Violation(i, coalition=hit) if hit is not None else None
        else:
            v = _individual_violation(game, partition, concept, i, c)
        if v is not None:
            witnesses.append(v)
    return StabilityCertificate(stable=not witnesses, witnesses=tuple(witnesses))


# -- partitions ----------------------------------------------------------------


def iter_partitions(n: int, c: SizeBound = None) -> Iterator[CoalitionStructure]:
    """Every partition of ``1..n`` with parts of size at most ``c`` (restricted growth strings)."""
    labels = [0] * n
    sizes: list[int] = []

    def rec(pos: int):
        if pos == n:
            yield CoalitionStructure.from_labels(labels, c)
            return
        for lab in range(len(sizes) + 1):
            if lab == len(sizes):
                sizes.append(0)
            if fits(sizes[lab] + 1, c):
                labels[pos] = lab
                sizes[lab] += 1
                yield from rec(pos + 1)
                sizes[lab] -= 1
            if sizes[lab] == 0:
                sizes.pop()

    if n == 0:
        yield CoalitionStructure(0, ())
        return
    yield from rec(0)


# -- perfect existence ---------------------------------------------------------


def _friend_components(game: FenGame, forcing_only: bool, c: SizeBound) -> list[list[int]]:
    parent = list(range(game.n + 1))

    def root(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in game.friend_edges():
        if forcing_only and not (_forces(game, u, c) or _forces(game, v, c)):
            continue
        parent[root(u)] = root(v)
    groups: dict[int, list[int]] = {}
    for i in game.players:
        groups.setdefault(root(i), []).append(i)
    return sorted(groups.values())


def _forces(game: FenGame, i: int, c: SizeBound) -> bool:
    """A perfect structure must put ``i`` together with all of its friends."""
    return c is None or len(game.friends(i)) < c


def exact_perfect_exists(game: FenGame, c: SizeBound = None) -> StabilityCertificate:
    """Decide whether some partition with parts of size at most ``c`` is perfect.

    Players with fewer than ``c`` friends must share a coalition with all of
    them, so the components glued by such friend edges must fit in ``c`` and be
    enemy-free. When every player has fewer than ``c`` friends (always when
    ``c > d``) that is also sufficient, and the friend components themselves
    form a perfect structure. Otherwise the remaining components are searched
    exhaustively.
    """
    forced = _friend_components(game, True, c)
    for comp in forced:
        if not fits(len(comp), c):
            return StabilityCertificate(False, reason="oversized friend component", component=tuple(comp))
        members = set(comp)
        for u in comp:
            for v in game.enemies(u):
                if u < v and v in members:
                    return StabilityCertificate(
                        False, reason="enemy edge inside friend component", component=tuple(comp), enemy_edge=(u, v)
                    )
    parts: list[tuple[int, ...]] = []
    for comp in _friend_components(game, False, c):
        if all(_forces(game, i, c) for i in comp):
            parts.append(tuple(comp))
            continue
        found = _perfect_partition_of(game, comp, c)
        if found is None:
            # a non-forcing player has at least c friends, so comp exceeds c and
            # the search showed it cannot be split perfectly
            return StabilityCertificate(False, reason="oversized friend component", component=tuple(comp))
        parts.extend(found)
    return StabilityCertificate(True, structure=CoalitionStructure(game.n, tuple(parts), c))


def _perfect_partition_of(game: FenGame, comp: list[int], c: SizeBound) -> list[tuple[int, ...]] | None:
    if len(comp) > BRUTE_FORCE_MAX_N + 2:
        raise GameError(f"friend component of size {len(comp)} too large for exhaustive search")
    best = {i: max_utility(game, i, c) for i in comp}
    order = sorted(comp)
    groups: list[list[int]] = []

    def ok(group: list[int]) -> bool:
        return all(utility(game, j, group) == best[j] for j in group)

    def rec(pos: int) -> bool:
        if pos == len(order):
            return all(ok(g) for g in groups)
        i = order[pos]
        for g in groups:
            if fits(len(g) + 1, c):
                g.append(i)
                if rec(pos + 1):
                    return True
                g.pop()
        groups.append([i])
        if rec(pos + 1):
            return True
        groups.pop()
        return False

    return [tuple(g) for g in groups] if rec(0) else None


def exact_perfect_exists_bruteforce(game: FenGame, c: SizeBound = None) -> bool:
    """Try every partition of the players; only for ``n <= 10``."""
    if game.n > BRUTE_FORCE_MAX_N:
        raise GameError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got n={game.n}")
    return any(
        all(is_favourite(game, i, part.coalition_of(i), c) for i in game.players)
        for part in iter_partitions(game.n, c)
    )


# -- Nash-stable search --------------------------------------------------------


def potential(game: FenGame, partition: CoalitionStructure) -> int:
    return sum(utility(game, i, partition.coalition_of(i)) for i in game.players)


@dataclass(frozen=True)
class NashStep:
    player: int
    target: tuple[int, ...]
    potential_before: int
    potential_after: int


@dataclass
class NashSearch:
    structure: CoalitionStructure
    steps: list[NashStep] = field(default_factory=list)


def nash_local_search(game: FenGame, c: SizeBound = None) -> NashSearch:
    """Improving single-player moves from the all-singletons structure.

    Each round moves the smallest player with an improving deviation to the
    improving target with the smallest key (the empty coalition first, then by
    smallest member). The change in total utility is computed from the mover's
    and both coalitions' members' utilities and must be positive on every step.
    """
    where = {i: i for i in game.players}
    groups: dict[int, set[int]] = {i: {i} for i in game.players}
    next_key = game.n + 1
    total = 0
    steps: list[NashStep] = []
    f, e = game.params.f, game.params.e

    def value(j: int, i: int) -> int:
        lab = game.label(j, i)
        return f if lab == "friend" else -e if lab == "enemy" else 0

    while True:
        move = None
        for i in game.players:
            here = utility(game, i, groups[where[i]])
            if here < 0:
                move = (i, None)
                break
            keys = sorted({where[j] for j in game.friends(i)} - {where[i]}, key=lambda k: min(groups[k]))
            for k in keys:
                if fits(len(groups[k]) + 1, c) and utility(game, i, groups[k] | {i}) > here:
                    move = (i, k)
                    break
            if move:
                break
        if move is None:
            break
        i, k = move
        old = groups[where[i]]
        new = groups[k] if k is not None else set()
        delta = (
            utility(game, i, new | {i})
            - utility(game, i, old)
            + sum(value(j, i) for j in new)
            - sum(value(j, i) for j in old if j != i)
        )
        if delta <= 0:
            raise AssertionError(f"improving move by player {i} changed total utility by {delta}")
        target = tuple(sorted(new))
        old.discard(i)
        if not old:
            del groups[where[i]]
        if k is None:
            k, next_key = next_key, next_key + 1
            groups[k] = new
        new.add(i)
        where[i] = k
        steps.append(NashStep(i, target, total, total + delta))
        total += delta
    structure = CoalitionStructure(game.n, tuple(tuple(sorted(g)) for g in groups.values()), c)
    return NashSearch(structure, steps)


def find_nash_stable(game: FenGame, c: SizeBound = None, method: str = "local") -> CoalitionStructure:
    if method == "local":
        return nash_local_search(game, c).structure
    if method == "exhaustive":
        if game.n > 12:
            raise GameError("exhaustive Nash search limited to n <= 12")
        for part in iter_partitions(game.n, c):
            if exact_verify(game, part, StabilityConcept.NASH, c).stable:
                return part
        raise AssertionError("symmetric game without a Nash-stable structure")
    raise ValueError(f"unknown method {method!r}")


# -- distance to stability -----------------------------------------------------


def _pairs(i: int, others) -> set[tuple[int, int]]:
    return {(min(i, k), max(i, k)) for k in others if k != i}


def violation_slots(game: FenGame, partition: CoalitionStructure, concept: StabilityConcept, v: Violation) -> set:
    """Player pairs whose labels alone decide that ``v`` is a violation.

    Any edit sequence that leaves all of them untouched leaves ``v`` in place.
    """
    if concept is StabilityConcept.CORE_STABLE:
        assert v.coalition is not None
        out: set[tuple[int, int]] = set()
        for j in v.coalition:
            out |= _pairs(j, v.coalition | partition.coalition_of(j))
        return out
    home = partition.coalition_of(v.player)
    extra = v.coalition if v.coalition is not None else frozenset(v.target or ())
    return _pairs(v.player, home | extra)


@dataclass(frozen=True)
class DistanceBounds:
    lower: int
    upper: int
    packing: tuple[Violation, ...]
    repair_length: int
    witness_count: int

    def certifies_far(self, epsilon: float, d: int, n: int) -> bool:
        return self.lower > epsilon * d * n

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "witness_count": self.witness_count,
            "packing": [v.to_dict() for v in self.packing],
        }


def _all_violations(game, partition, concept, c) -> list[Violation]:
    out: list[Violation] = []
    for i in game.players:
        if concept is StabilityConcept.CORE_STABLE:
            out += [Violation(i, coalition=C) for C in connected_coalitions(game, i, c) if blocks(game, partition, C)]
        else:
            out += _individual_violations(game, partition, concept, i, c)
    return out


def certified_far_distance(
    game: FenGame, partition: CoalitionStructure, concept: StabilityConcept | str, c: SizeBound = None
) -> DistanceBounds:
    """Certified lower and upper bounds on the edit distance to making ``partition`` stable.

    Lower bound: violations whose deciding pairs are pairwise disjoint each
    need their own edit (greedy packing). Upper bound: length of the
    witness-repair script, which is checked to actually stabilize the game.
    """
    concept = StabilityConcept.parse(concept)
    violations = _all_violations(game, partition, concept, c)
    keyed = sorted(
        ((violation_slots(game, partition, concept, v), v) for v in violations),
        key=lambda sv: (len(sv[0]), sv[1].player),
    )
    used: set[tuple[int, int]] = set()
    packing = []
    for slots, v in keyed:
        if slots and not (slots & used):
            used |= slots
            packing.append(v)
    script = repair_all_witnesses(game, partition, concept, c)
    fixed = apply_edits(game, script)
    if not exact_verify(fixed, partition, concept, c).stable:
        raise AssertionError("witness repair did not stabilize the game")
    witness_count = len(exact_verify(game, partition, concept, c).witnesses)
    return DistanceBounds(len(packing), len(script), tuple(packing), len(script), witness_count)


_RELABEL_COST = {(None, "friend"): 1, (None, "enemy"): 1, ("friend", None): 1, ("enemy", None): 1,
                 ("friend", "enemy"): 2, ("enemy", "friend"): 2}


def exhaustive_distance(
    game: FenGame,
    partition: CoalitionStructure,
    concept: StabilityConcept | str,
    c: SizeBound = None,
    max_cost: int | None = None,
) -> int | None:
    """Smallest edit cost that makes ``partition`` stable, by trying all relabellings.

    Only for ``n <= 6``. Returns ``None`` if nothing within ``max_cost`` works.
    """
    concept = StabilityConcept.parse(concept)
    if game.n > 6:
        raise GameError("exhaustive distance limited to n <= 6")
    if max_cost is None:
        max_cost = game.n * (game.n - 1)
    pairs = list(itertools.combinations(game.players, 2))
    best = None
    for k in range(0, max_cost + 1):
        for chosen in itertools.combinations(pairs, k):
            for new_labels in itertools.product(*[[x for x in (None, "friend", "enemy") if x != game.label(u, v)]
                                                   for u, v in chosen]):
                cost = sum(_RELABEL_COST[(game.label(u, v), lab)] for (u, v), lab in zip(chosen, new_labels))
                if cost > max_cost or (best is not None and cost >= best):
                    continue
                edits = []
                for (u, v), lab in zip(chosen, new_labels):
                    old = game.label(u, v)
                    if old is not None:
                        edits.append(Edit("delete", old, u, v))  # type: ignore[arg-type]
                for (u, v), lab in zip(chosen, new_labels):
                    if lab is not None:
                        edits.append(Edit("insert", lab, u, v))  # type: ignore[arg-type]
                try:
                    target = apply_edits(game, edits)
                except GameError:
                    continue
                if exact_verify(target, partition, concept, c).stable:
                    best = cost
        # any later level changes at least k + 1 pairs
        if best is not None and best <= k + 1:
            return best
    return best
