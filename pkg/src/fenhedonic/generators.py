"""Seeded instance families with known stability or far-ness guarantees."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from .game import CoalitionStructure, FenGame, GameError, SizeBound, UtilityParams

FAMILIES = (
    "random-bounded-degree",
    "friend-clusters-perfect",
    "enemy-pairs-far",
    "friend-path-oversized",
    "planted-core-blocker",
    "friend-cycle-pairs",
)


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    d: int = 4
    c: SizeBound = 3
    preset: str = "custom"
    f: int = 1
    e: int = 1
    seed: int = 0
    # family knobs
    cluster_size: int | None = None
    density: float = 0.5
    friend_fraction: float = 0.5
    regular: bool = False
    tiled: bool = True

    def params(self) -> UtilityParams:
        if self.preset == "friends-appreciation":
            return UtilityParams.friends_appreciation(self.d)
        if self.preset == "enemies-aversion":
            return UtilityParams.enemies_aversion(self.d)
        if self.preset == "custom":
            return UtilityParams(self.f, self.e)
        raise GameError(f"unknown utility preset {self.preset!r}")


@dataclass(frozen=True)
class Instance:
    game: FenGame
    partition: CoalitionStructure | None
    certificate: dict[str, Any]


def generate(spec: InstanceSpec) -> Instance:
    if spec.family not in FAMILIES:
        raise GameError(f"unknown family {spec.family!r}; expected one of {', '.join(FAMILIES)}")
    if spec.n < 1 or spec.d < 1:
        raise GameError("n and d must be positive")
    rng = random.Random(spec.seed)
    builder = {
        "random-bounded-degree": _random_bounded_degree,
        "friend-clusters-perfect": _friend_clusters_perfect,
        "enemy-pairs-far": _enemy_pairs_far,
        "friend-path-oversized": _friend_path_oversized,
        "planted-core-blocker": _planted_core_blocker,
        "friend-cycle-pairs": _friend_cycle_pairs,
    }[spec.family]
    game, partition, cert = builder(spec, rng)
    cert = {"family": spec.family, "n": spec.n, "d": spec.d, "c": spec.c, "seed": spec.seed, **cert}
    return Instance(game, partition, cert)


def _add_random_edges(
    rng: random.Random,
    n: int,
    d: int,
    degree: list[int],
    taken: set[tuple[int, int]],
    attempts: int,
    allowed=lambda u, v: True,
) -> list[tuple[int, int]]:
    """Propose uniform random pairs; keep those that respect the degree bound."""
    out = []
    for _ in range(attempts):
        u, v = rng.randrange(1, n + 1), rng.randrange(1, n + 1)
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if (u, v) in taken or degree[u] >= d or degree[v] >= d or not allowed(u, v):
            continue
        taken.add((u, v))
        degree[u] += 1
        degree[v] += 1
        out.append((u, v))
    return out


def _random_bounded_degree(spec: InstanceSpec, rng: random.Random):
    degree = [0] * (spec.n + 1)
    edges = _add_random_edges(rng, spec.n, spec.d, degree, set(), int(spec.density * spec.n * spec.d / 2) * 2)
    friends, enemies = [], []
    for edge in edges:
        (friends if rng.random() < spec.friend_fraction else enemies).append(edge)
    return FenGame.from_edges(spec.n, spec.d, friends, enemies, spec.params()), None, {}


def _chunks(n: int, size: int) -> list[tuple[int, ...]]:
    return [tuple(range(s, min(s + size, n + 1))) for s in range(1, n + 1, size)]


def _friend_clusters_perfect(spec: InstanceSpec, rng: random.Random):
    limit = spec.d + 1 if spec.c is None else min(spec.c, spec.d + 1)
    size = spec.cluster_size or limit
    if not 1 <= size <= limit:
        raise GameError(f"cluster size must lie in 1..{limit}")
    clusters = _chunks(spec.n, size)
    friends = [(u, v) for cl in clusters for a, u in enumerate(cl) for v in cl[a + 1 :]]
    degree = [0] * (spec.n + 1)
    for u, v in friends:
        degree[u] += 1
        degree[v] += 1
    if spec.regular:
        # enemies at cyclic distance +-size, +-2 size, ...: every player looks alike
        if spec.n % size:
            raise GameError("regular layout needs n divisible by the cluster size")
        spare = (spec.d - (size - 1)) // 2
        if spec.n < (2 * spare + 1) * size:
            raise GameError("n too small for a regular enemy layout")
        enemies = sorted(
            {
                (min(u, v), max(u, v))
                for u in range(1, spec.n + 1)
                for step in range(1, spare + 1)
                for v in [(u - 1 + step * size) % spec.n + 1]
            }
        )
    else:
        cluster_of = {p: k for k, cl in enumerate(clusters) for p in cl}
        enemies = _add_random_edges(
            rng,
            spec.n,
            spec.d,
            degree,
            set(friends),
            int(spec.density * spec.n * spec.d / 2) * 2,
            allowed=lambda u, v: cluster_of[u] != cluster_of[v],
        )
    game = FenGame.from_edges(spec.n, spec.d, friends, enemies, spec.params())
    partition = CoalitionStructure(spec.n, tuple(clusters), spec.c)
    return game, partition, {"guarantee": "partition is perfect, hence stable for every concept", "cluster_size": size}


def _enemy_pairs_far(spec: InstanceSpec, rng: random.Random):
    if spec.c is not None and spec.c < 2:
        raise GameError("enemy-pairs-far needs c >= 2")
    m = spec.n // 2
    pairs = [(2 * q + 1, 2 * q + 2) for q in range(m)]
    parts = list(pairs) + ([(spec.n,)] if spec.n % 2 else [])
    game = FenGame.from_edges(spec.n, spec.d, (), pairs, spec.params())
    partition = CoalitionStructure(spec.n, tuple(parts), spec.c)
    return game, partition, {
        "concept": "ir",
        "witness_count": 2 * m,
        "distance": m,
        "far_below_epsilon": m / (spec.d * spec.n),
    }


def _friend_path_oversized(spec: InstanceSpec, rng: random.Random):
    c = spec.c
    if c is None or c < 2:
        raise GameError("friend-path-oversized needs a bounded c >= 2")
    if spec.d < 2:
        raise GameError("friend-path-oversized needs d >= 2")
    length = c + 1
    count = spec.n // length if spec.tiled else 1
    if count < 1:
        raise GameError(f"need n >= c + 1 = {length}")
    friends = [(s + k, s + k + 1) for s in range(1, count * length, length) for k in range(length - 1)]
    game = FenGame.from_edges(spec.n, spec.d, friends, (), spec.params())
    cert: dict[str, Any] = {"perfect_exists": False, "paths": count, "distance_lower_bound": 1}
    if spec.d < c:
        # nobody can ever have c friends, so perfect existence is edge monotone
        # and each path needs its own deletion
        cert["distance_lower_bound"] = count
        cert["far_below_epsilon"] = count / (spec.d * spec.n)
    return game, None, cert


def _planted_core_blocker(spec: InstanceSpec, rng: random.Random):
    size = spec.cluster_size or spec.c
    if size is None or size < 2:
        raise GameError("planted-core-blocker needs cliques of size >= 2")
    if spec.c is not None and size > spec.c:
        raise GameError("clique size exceeds c")
    if size - 1 > spec.d:
        raise GameError("clique size exceeds d + 1")
    cliques = [cl for cl in _chunks(spec.n, size) if len(cl) == size]
    friends = [(u, v) for cl in cliques for a, u in enumerate(cl) for v in cl[a + 1 :]]
    game = FenGame.from_edges(spec.n, spec.d, friends, (), spec.params())
    partition = CoalitionStructure.singletons(spec.n, spec.c)
    return game, partition, {
        "concept": "core",
        "witness_count": size * len(cliques),
        # every friend pair of singletons blocks on its own
        "distance": len(friends),
        "far_below_epsilon": len(friends) / (spec.d * spec.n),
    }


def _friend_cycle_pairs(spec: InstanceSpec, rng: random.Random):
    """Friend cycle split into consecutive pairs: every player looks alike."""
    if spec.n < 4 or spec.n % 2:
        raise GameError("friend-cycle-pairs needs an even n >= 4")
    if spec.d < 2 or (spec.c is not None and spec.c < 2):
        raise GameError("friend-cycle-pairs needs d >= 2 and c >= 2")
    friends = [(i, i + 1) for i in range(1, spec.n)] + [(1, spec.n)]
    game = FenGame.from_edges(spec.n, spec.d, friends, (), spec.params())
    partition = CoalitionStructure(spec.n, tuple((2 * q + 1, 2 * q + 2) for q in range(spec.n // 2)), spec.c)
    # below the full cycle, every friend-connected set is an arc whose end players gain nothing
    stable = ["ir", "nash", "is", "cis"]
    if spec.c is not None and spec.c < spec.n:
        stable.append("core")
    if spec.c == 2:
        stable.append("perfect")
    return game, partition, {"stable_concepts": stable}


def random_partition(n: int, c: SizeBound, seed: int) -> CoalitionStructure:
    """Assign players in order to a uniformly chosen open coalition or a new one."""
    if c is not None and c < 1:
        raise GameError("size bound must be positive")
    rng = random.Random(seed)
    groups: list[list[int]] = []
    open_groups: list[int] = []
    for i in range(1, n + 1):
        pick = rng.randrange(len(open_groups) + 1)
        if pick == len(open_groups):
            groups.append([i])
            gid = len(groups) - 1
            if c is None or c > 1:
                open_groups.append(gid)
        else:
            gid = open_groups[pick]
            groups[gid].append(i)
            if c is not None and len(groups[gid]) >= c:
                open_groups.pop(pick)
    return CoalitionStructure(n, tuple(tuple(g) for g in groups), c)
