import json

import pytest

from fenhedonic import cli
from fenhedonic.game import format_game, format_partition, parse_edit_script, parse_game
from fenhedonic import CoalitionStructure


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files_a(tmp_path, game_a):
    game = tmp_path / "a.game"
    game.write_text(format_game(game_a))
    paired = tmp_path / "paired.partition"
    paired.write_text(format_partition(CoalitionStructure(3, ((1, 2), (3,)))))
    singles = tmp_path / "singles.partition"
    singles.write_text(format_partition(CoalitionStructure.singletons(3)))
    return game, paired, singles


def test_gen_writes_files(tmp_path, capsys):
    prefix = tmp_path / "pairs"
    code, out, _ = run(capsys, "gen", "--family", "enemy-pairs-far", "--n", 1000, "--d", 4, "--seed", 7, "--out", prefix)
    assert code == 0
    info = json.loads(out)
    assert info["certificate"]["distance"] == 500
    assert parse_game((tmp_path / "pairs.game").read_text()).n == 1000
    assert (tmp_path / "pairs.partition").exists()
    assert json.loads((tmp_path / "pairs.cert.json").read_text())["witness_count"] == 1000


def test_gen_clusters_then_verify(tmp_path, capsys):
    prefix = tmp_path / "cl"
    assert run(capsys, "gen", "--family", "friend-clusters-perfect", "--n", 12, "--c", 3, "--out", prefix)[0] == 0
    for concept in ("perfect", "ir", "nash", "is", "cis", "core"):
        code, out, _ = run(capsys, "verify-exact", f"{prefix}.game", f"{prefix}.partition", "--concept", concept)
        assert code == 0 and json.loads(out)["stable"] is True


def test_gen_missing_n_is_usage_error(capsys):
    code, _, err = run(capsys, "gen", "--family", "enemy-pairs-far")
    assert code == 2 and "--n" in err


def test_verify_exact(files_a, capsys):
    game, paired, singles = files_a
    assert run(capsys, "verify-exact", game, paired, "--concept", "nash")[0] == 0
    code, out, _ = run(capsys, "verify-exact", game, singles, "--concept", "core", "--c", 3)
    data = json.loads(out)
    assert code == 1 and [w["player"] for w in data["witnesses"]] == [1, 2, 3]
    code, out, _ = run(capsys, "verify-exact", game, singles, "--concept", "core", "--c", 3, "--format", "csv")
    assert code == 1 and out.splitlines()[0] == "concept,c,stable,player,target,coalition"
    assert len(out.splitlines()) == 4


def test_malformed_input(tmp_path, files_a, capsys):
    _, paired, _ = files_a
    bad = tmp_path / "bad.game"
    bad.write_text("fen 1 3 2 1 1\nF 1 9\n")
    assert run(capsys, "verify-exact", bad, paired, "--concept", "nash")[0] == 2
    assert run(capsys, "verify-exact", tmp_path / "missing.game", paired, "--concept", "nash")[0] == 2
    assert run(capsys, "test", bad, "--mode", "exist", "--c", 3, "--epsilon", "2")[0] == 2


def test_test_command_stable_and_exist(files_a, capsys):
    game, paired, _ = files_a
    code, out, _ = run(capsys, "test", game, paired, "--concept", "nash", "--trials", 200, "--seed", 1)
    data = json.loads(out)
    assert code == 0 and data["aggregate"]["rejection_frequency"] == 0
    code, out, _ = run(capsys, "test", game, "--mode", "exist", "--epsilon", "0.9", "--c", 3, "--trials", 100)
    data = json.loads(out)
    assert code == 1 and data["aggregate"]["rejection_frequency"] == 1.0
    assert data["aggregate"]["sample_size"] == 2


def test_test_command_usage_errors(files_a, capsys):
    game, paired, _ = files_a
    assert run(capsys, "test", game, "--concept", "nash")[0] == 2
    assert run(capsys, "test", game, paired)[0] == 2
    assert run(capsys, "test", game, "--mode", "exist")[0] == 2


def test_test_command_is_byte_stable_and_seed_additive(files_a, capsys):
    game, _, singles = files_a
    argv = ("test", game, singles, "--concept", "core", "--c", 3, "--epsilon", "1/3", "--trials", 20, "--seed", 5)
    first = run(capsys, *argv, "--per-trial")[1]
    assert first == run(capsys, *argv, "--per-trial")[1]
    rows = json.loads(first)["trials"]
    assert [r["seed"] for r in rows] == list(range(5, 25))
    csv_out = run(capsys, *argv, "--format", "csv")[1].splitlines()
    assert len(csv_out) == 21 and csv_out[0].endswith("neighbor,find,member,total")


def test_parallel_trials_match_serial(files_a, capsys):
    game, _, singles = files_a
    argv = ("test", game, singles, "--concept", "nash", "--trials", 12, "--per-trial")
    assert run(capsys, *argv)[1] == run(capsys, *argv, "--jobs", 2)[1]


def test_repair(tmp_path, files_a, capsys):
    game, paired, singles = files_a
    code, out, _ = run(capsys, "repair", game, paired, "--concept", "nash")
    assert code == 0 and json.loads(out)["length"] == 0
    script_path = tmp_path / "fix.edits"
    code, out, _ = run(capsys, "repair", game, singles, "--concept", "nash", "--out", script_path)
    data = json.loads(out)
    assert code == 0 and data["stable_after"] and data["length"] <= data["bound"]
    assert len(parse_edit_script(script_path.read_text())) == data["length"]
    prefix = tmp_path / "m5"
    run(capsys, "gen", "--family", "enemy-pairs-far", "--n", 10, "--d", 4, "--out", prefix)
    code, out, _ = run(capsys, "repair", f"{prefix}.game", f"{prefix}.partition", "--concept", "ir")
    data = json.loads(out)
    assert code == 0 and data["length"] <= 10 * 4 and data["stable_after"]


def _csv_rows(text):
    lines = text.splitlines()
    head = lines[0].split(",")
    return [dict(zip(head, line.split(","))) for line in lines[1:]]


def test_bench_epsilon_sweep(capsys):
    code, out, _ = run(capsys, "bench", "--sweep", "epsilon", "--values", "0.5", "0.25", "0.125", "--n", 60, "--trials", 5)
    assert code == 0
    assert [r["sample_size"] for r in _csv_rows(out)] == ["3", "5", "9"]


def test_bench_n_sweep_is_flat(tmp_path, capsys):
    out_path = tmp_path / "n.csv"
    argv = ("bench", "--sweep", "n", "--values", 999, 9999, "--regular", "--concept", "nash", "--trials", 30, "--out", out_path)
    assert run(capsys, *argv)[0] == 0
    rows = _csv_rows(out_path.read_text())
    assert rows[0]["queries_max"] == rows[1]["queries_max"]
    assert {r["rejections"] for r in rows} == {"0"}


def test_bench_c_sweep_core_grows(capsys):
    argv = ("bench", "--sweep", "c", "--values", 2, 3, 4, "--family", "friend-cycle-pairs", "--concept", "core",
            "--n", 200, "--d", 2, "--trials", 10)
    code, out, _ = run(capsys, *argv)
    maxima = [int(r["queries_max"]) for r in _csv_rows(out)]
    assert code == 0 and maxima[0] < maxima[1] < maxima[2]


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
