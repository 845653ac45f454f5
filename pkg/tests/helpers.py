"""Random small instances and brute-force references shared by the test modules."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from fenhedonic import CoalitionStructure, FenGame, UtilityParams
from fenhedonic.generators import random_partition


def random_game(rng: random.Random, n: int, d: int, p_edge: float = 0.5, params=None) -> FenGame:
    """Visit pairs in random order and label each one while degrees allow."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    degree = [0] * (n + 1)
    friends, enemies = [], []
    for u, v in pairs:
        if rng.random() >= p_edge or degree[u] >= d or degree[v] >= d:
            continue
        degree[u] += 1
        degree[v] += 1
        (friends if rng.random() < 0.5 else enemies).append((u, v))
    return FenGame.from_edges(n, d, friends, enemies, params or UtilityParams())


def random_instance(rng: random.Random, n_max: int = 8, c_choices=(None, 2, 3)):
    n = rng.randint(1, n_max)
    d = rng.randint(1, 4)
    params = UtilityParams(rng.randint(1, 3), rng.randint(1, 3))
    game = random_game(rng, n, d, rng.choice([0.3, 0.6, 0.9]), params)
    c = rng.choice(c_choices)
    partition = random_partition(n, c, rng.randrange(2**32))
    return game, partition, c


@st.composite
def games(draw, n_max: int = 7, d_max: int = 4, params: bool = True):
    n = draw(st.integers(1, n_max))
    d = draw(st.integers(1, d_max))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    labels = draw(st.lists(st.sampled_from([None, "F", "E"]), min_size=len(pairs), max_size=len(pairs)))
    degree = [0] * (n + 1)
    friends, enemies = [], []
    for (u, v), lab in zip(pairs, labels):
        if lab is None or degree[u] >= d or degree[v] >= d:
            continue
        degree[u] += 1
        degree[v] += 1
        (friends if lab == "F" else enemies).append((u, v))
    f, e = (draw(st.integers(1, 4)), draw(st.integers(1, 4))) if params else (1, 1)
    return FenGame.from_edges(n, d, friends, enemies, UtilityParams(f, e))


@st.composite
def partitions(draw, n: int, c=None):
    labels = []
    sizes: dict[int, int] = {}
    for _ in range(n):
        open_labels = [k for k, s in sizes.items() if c is None or s < c]
        lab = draw(st.sampled_from(open_labels + [len(sizes)]))
        sizes[lab] = sizes.get(lab, 0) + 1
        labels.append(lab)
    return CoalitionStructure.from_labels(labels, c)


def brute_utility(game: FenGame, i: int, C) -> int:
    """Utility by walking over every member of C."""
    total = 0
    for j in C:
        lab = game.label(i, j)
        total += game.params.f if lab == "friend" else -game.params.e if lab == "enemy" else 0
    return total


def brute_max_utility(game: FenGame, i: int, c) -> int:
    others = [j for j in game.players if j != i]
    limit = len(others) if c is None else min(c - 1, len(others))
    return max(
        brute_utility(game, i, (i, *rest))
        for k in range(limit + 1)
        for rest in itertools.combinations(others, k)
    )


def brute_core_witnesses(game: FenGame, partition: CoalitionStructure, c) -> set[int]:
    """Players lying in some blocking coalition, trying every subset."""
    out: set[int] = set()
    players = list(game.players)
    limit = len(players) if c is None else c
    for k in range(1, limit + 1):
        for C in itertools.combinations(players, k):
            if all(brute_utility(game, j, C) > brute_utility(game, j, partition.coalition_of(j)) for j in C):
                out.update(C)
    return out
