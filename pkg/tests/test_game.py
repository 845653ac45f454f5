import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fenhedonic.game import (
    CoalitionStructure,
    Edit,
    EditError,
    EditScript,
    FenGame,
    GameError,
    UtilityParams,
    apply_edits,
    format_edit_script,
    format_game,
    format_partition,
    indifferent,
    is_favourite,
    max_utility,
    parse_edit_script,
    parse_game,
    parse_partition,
    prefers,
    utility,
    weakly_prefers,
)
from helpers import brute_max_utility, brute_utility, games, random_game


def test_utility_examples(game_a):
    assert utility(game_a, 1, {1, 2, 3}) == 0
    assert utility(game_a, 2, {1, 2, 3}) == 2
    for i in game_a.players:
        assert utility(game_a, i, {i}) == 0


def test_utility_requires_membership(game_a):
    with pytest.raises(GameError):
        utility(game_a, 1, {2, 3})


def test_preference_examples(game_a):
    assert prefers(game_a, 2, {1, 2, 3}, {2})
    assert indifferent(game_a, 3, {2, 3}, {2, 3})
    assert weakly_prefers(game_a, 1, {1}, {1, 3})
    assert not prefers(game_a, 1, {1, 3}, {1})


def test_max_utility_examples(game_a):
    assert max_utility(game_a, 2, None) == 2
    assert max_utility(game_a, 2, 2) == 1
    lonely = FenGame.from_edges(2, 1, [], [(1, 2)])
    assert max_utility(lonely, 1, None) == 0


def test_is_favourite_examples(game_a):
    assert is_favourite(game_a, 2, {1, 2, 3}, None)
    assert not is_favourite(game_a, 1, {1, 2, 3}, None)
    assert is_favourite(FenGame.from_edges(1, 1), 1, {1}, None)
    with pytest.raises(GameError):
        is_favourite(game_a, 2, {1, 2, 3}, 2)


def test_presets():
    assert UtilityParams.friends_appreciation(4) == UtilityParams(4, 1)
    assert UtilityParams.enemies_aversion(4) == UtilityParams(1, 4)
    with pytest.raises(GameError):
        UtilityParams(0, 1)


@pytest.mark.parametrize(
    "friends, enemies, d",
    [
        ([(1, 2)], [(1, 2)], 3),  # friend and enemy at once
        ([(1, 2), (1, 3), (1, 4)], [], 2),  # degree overflow
        ([(1, 1)], [], 2),  # self edge
        ([(1, 5)], [], 2),  # out of range
    ],
)
def test_invalid_games_rejected(friends, enemies, d):
    with pytest.raises(GameError):
        FenGame.from_edges(4, d, friends, enemies)


def test_asymmetric_adjacency_rejected():
    with pytest.raises(GameError, match="symmetric"):
        FenGame(2, 2, ((2,), ()), ((), ()))


def test_partition_validation():
    with pytest.raises(GameError):
        CoalitionStructure(3, ((1, 2), (2, 3)))
    with pytest.raises(GameError):
        CoalitionStructure(3, ((1, 2),))
    with pytest.raises(GameError, match="size bound"):
        CoalitionStructure(3, ((1, 2, 3),), c=2)
    p = CoalitionStructure(4, ((4, 2), (3, 1)))
    assert p.coalitions == ((1, 3), (2, 4))
    assert p.key_of(3) == p.key_of(1) != p.key_of(2)


# -- edits ---------------------------------------------------------------------


def test_apply_edits_examples(game_a):
    g = apply_edits(game_a, EditScript((Edit("delete", "enemy", 1, 3),)))
    assert g.enemy_edges() == []
    assert game_a.enemy_edges() == [(1, 3)]
    assert apply_edits(game_a, EditScript()) == game_a
    script = EditScript((Edit("delete", "enemy", 1, 3), Edit("insert", "friend", 1, 3)))
    tri = apply_edits(game_a, script)
    assert tri.friend_edges() == [(1, 2), (1, 3), (2, 3)]
    assert script.cost == 2


@pytest.mark.parametrize(
    "script, index",
    [
        ([Edit("insert", "friend", 1, 3)], 0),  # already an enemy
        ([Edit("delete", "friend", 1, 3)], 0),
        ([Edit("delete", "enemy", 1, 3), Edit("delete", "enemy", 3, 1)], 1),
        ([Edit("delete", "enemy", 1, 3), Edit("insert", "enemy", 1, 2)], 1),
    ],
)
def test_apply_edits_reports_offending_step(game_a, script, index):
    with pytest.raises(EditError) as info:
        apply_edits(game_a, script)
    assert info.value.index == index


def test_degree_overflow_rejected():
    g = FenGame.from_edges(3, 1, [(1, 2)])
    with pytest.raises(EditError, match="degree"):
        apply_edits(g, [Edit("insert", "enemy", 1, 3)])


def _random_valid_script(rng, game, length):
    edits = []
    g = game
    for _ in range(length):
        options = [Edit("delete", "friend", u, v) for u, v in g.friend_edges()]
        options += [Edit("delete", "enemy", u, v) for u, v in g.enemy_edges()]
        for u in g.players:
            for v in g.players:
                if u < v and g.label(u, v) is None and g.degree(u) < g.d and g.degree(v) < g.d:
                    options += [Edit("insert", "friend", u, v), Edit("insert", "enemy", u, v)]
        if not options:
            break
        ed = rng.choice(options)
        g = apply_edits(g, [ed])
        edits.append(ed)
    return EditScript(tuple(edits))


def test_inverse_script_is_identity():
    rng = random.Random(7)
    for _ in range(100):
        game = random_game(rng, rng.randint(2, 8), rng.randint(1, 4))
        script = _random_valid_script(rng, game, rng.randint(0, 6))
        assert apply_edits(apply_edits(game, script), script.inverse()) == game


# -- properties ----------------------------------------------------------------


@given(games(), st.data())
def test_responsiveness(game, data):
    i = data.draw(st.sampled_from(list(game.players)))
    C = data.draw(st.sets(st.sampled_from(list(game.players)))) | {i}
    p = game.params
    for j in game.players:
        if j in C:
            continue
        diff = utility(game, i, C | {j}) - utility(game, i, C)
        expected = p.f if j in game.friends(i) else -p.e if j in game.enemies(i) else 0
        assert diff == expected


def test_neutral_players_do_not_matter():
    rng = random.Random(11)
    for _ in range(1000):
        game = random_game(rng, rng.randint(1, 9), rng.randint(1, 4), params=UtilityParams(rng.randint(1, 3), rng.randint(1, 3)))
        i = rng.randint(1, game.n)
        C = {j for j in game.players if rng.random() < 0.5} | {i}
        D = {j for j in game.players if rng.random() < 0.5} | {i}
        hood = set(game.friends(i)) | set(game.enemies(i)) | {i}
        for rel in (weakly_prefers, prefers, indifferent):
            assert rel(game, i, C, D) == rel(game, i, C & hood, D & hood)
        assert utility(game, i, C) == brute_utility(game, i, C)


def test_deleting_an_edge_makes_the_pair_neutral():
    rng = random.Random(12)
    checked = 0
    while checked < 300:
        game = random_game(rng, rng.randint(2, 8), rng.randint(1, 4))
        for kind, edges in (("enemy", game.enemy_edges()), ("friend", game.friend_edges())):
            for u, v in edges:
                i, j = (u, v) if rng.random() < 0.5 else (v, u)
                after = apply_edits(game, [Edit("delete", kind, i, j)])
                C = {k for k in game.players if k != j and rng.random() < 0.5} | {i}
                # j becomes neutral for i
                assert utility(after, i, C | {j}) == utility(after, i, C)
                if kind == "enemy":
                    assert utility(game, i, C) > utility(game, i, C | {j})
                else:
                    assert utility(game, i, C | {j}) > utility(game, i, C)
                # strict preferences that relied on the edge survive
                A = C | {j} if kind == "enemy" else C
                B = {k for k in game.players if rng.random() < 0.5} | {i}
                if prefers(game, i, A, B):
                    assert prefers(after, i, A, B)
                checked += 1


@pytest.mark.parametrize("c", [2, 3, None])
def test_max_utility_matches_brute_force(c):
    rng = random.Random(13)
    for _ in range(60):
        game = random_game(rng, rng.randint(1, 10), rng.randint(1, 4))
        for i in game.players:
            assert max_utility(game, i, c) == brute_max_utility(game, i, c)


# -- text formats --------------------------------------------------------------


def test_game_format_roundtrip(game_a):
    text = format_game(game_a)
    assert text.splitlines()[0] == "fen 1 3 2 1 1"
    assert parse_game(text) == game_a


def test_game_parse_comments_and_errors():
    g = parse_game("# header next\nfen 1 3 2 2 1\n\nF 1 2  # friends\nE 2 3\n")
    assert g.params == UtilityParams(2, 1) and g.enemy_edges() == [(2, 3)]
    for bad in ["", "fen 2 3 2 1 1\n", "fen 1 3 2 1 1\nF 2 1\n", "fen 1 3 2 1 1\nX 1 2\n", "fen 1 3 1 1 1\nF 1 2\nF 2 3\n"]:
        with pytest.raises(GameError):
            parse_game(bad)


def test_partition_format_roundtrip():
    p = CoalitionStructure(5, ((1, 4), (2, 3, 5)), c=3)
    text = format_partition(p)
    assert text == "partition 5 3\n1 4\n2 3 5\n"
    assert parse_partition(text) == p
    assert parse_partition("partition 2 unbounded\n1 2\n").c is None
    with pytest.raises(GameError):
        parse_partition("partition 3 2\n1 2 3\n")
    with pytest.raises(GameError):
        parse_partition("partition 2 2\n2 1\n")


def test_edit_script_roundtrip():
    script = EditScript((Edit("delete", "friend", 2, 1), Edit("insert", "enemy", 1, 3)))
    assert parse_edit_script(format_edit_script(script)) == script
