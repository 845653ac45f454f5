"""Command-line entry point: ``fenhedonic {gen,verify-exact,test,repair,bench}``.

Exit codes: 0 stable / accept-dominant / success, 1 unstable / reject-dominant,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .exact import exact_verify
from .game import (
    CoalitionStructure,
    FenGame,
    GameError,
    apply_edits,
    format_edit_script,
    format_game,
    format_partition,
    format_size_bound,
    parse_game,
    parse_partition,
    parse_size_bound,
)
from .generators import FAMILIES, InstanceSpec, generate, random_partition
from .oracles import GraphOracle, PartitionOracle
from .testers import TesterConfig, perfect_existence_tester, sample_size, verification_tester
from .witness import StabilityConcept, all_witnesses, repair_all_witnesses

CONCEPT_CHOICES = [c.value for c in StabilityConcept]
_UNSET = object()


class UsageError(Exception):
    pass


def _size_bound(text: str):
    try:
        return parse_size_bound(text)
    except GameError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid epsilon {text!r}") from None
    if not 0 < eps <= 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1]")
    return eps


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _load_game(path: str) -> FenGame:
    return parse_game(Path(path).read_text(encoding="utf-8"))


def _load_partition(path: str) -> CoalitionStructure:
    return parse_partition(Path(path).read_text(encoding="utf-8"))


# -- gen -----------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    spec = InstanceSpec(
        family=args.family,
        n=args.n,
        d=args.d,
        c=args.c,
        preset=args.preset,
        f=args.f,
        e=args.e,
        seed=args.seed,
        cluster_size=args.cluster_size,
        density=args.density,
        regular=args.regular,
        tiled=not args.single,
    )
    inst = generate(spec)
    prefix = Path(args.out)
    written = {"game": str(prefix.with_suffix(".game"))}
    Path(written["game"]).write_text(format_game(inst.game), encoding="utf-8")
    partition = inst.partition
    if partition is None and args.with_partition:
        partition = random_partition(spec.n, spec.c, spec.seed)
    if partition is not None:
        written["partition"] = str(prefix.with_suffix(".partition"))
        Path(written["partition"]).write_text(format_partition(partition), encoding="utf-8")
    written["certificate"] = str(prefix.with_suffix(".cert.json"))
    Path(written["certificate"]).write_text(_dump(inst.certificate) + "\n", encoding="utf-8")
    print(_dump({"files": written, "certificate": inst.certificate}))
    return 0


# -- verify-exact --------------------------------------------------------------


def cmd_verify_exact(args: argparse.Namespace) -> int:
    game, partition = _load_game(args.game), _load_partition(args.partition)
    c = args.c if args.c is not _UNSET else partition.c
    cert = exact_verify(game, partition, args.concept, c)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["concept", "c", "stable", "player", "target", "coalition"])
        for w in cert.witnesses:
            fmt = lambda xs: " ".join(map(str, sorted(xs))) if xs is not None else ""  # noqa: E731
            writer.writerow([args.concept, format_size_bound(c), cert.stable, w.player, fmt(w.target), fmt(w.coalition)])
        if not cert.witnesses:
            writer.writerow([args.concept, format_size_bound(c), cert.stable, "", "", ""])
        sys.stdout.write(buf.getvalue())
    else:
        print(_dump({"concept": args.concept, "c": format_size_bound(c), **cert.to_dict()}))
    return 0 if cert.stable else 1


# -- test ----------------------------------------------------------------------


def _one_trial(job: tuple) -> dict[str, Any]:
    game, partition, mode, concept, epsilon, c, seed, timing = job
    start = time.perf_counter()
    graph = GraphOracle(game)
    if mode == "verify":
        verdict = verification_tester(graph, PartitionOracle(partition), TesterConfig(epsilon, concept, c, seed))
    else:
        verdict = perfect_existence_tester(graph, epsilon, c, seed)
    row = verdict.to_dict()
    if timing:
        row["seconds"] = time.perf_counter() - start
    return row


def run_trials(
    game: FenGame,
    partition: CoalitionStructure | None,
    *,
    mode: str,
    concept: str | None,
    epsilon: Fraction,
    c,
    seed: int,
    trials: int,
    jobs: int = 1,
    timing: bool = False,
) -> dict[str, Any]:
    """Run ``trials`` independent tester runs with seeds ``seed + t``."""
    work = [(game, partition, mode, concept, epsilon, c, seed + t, timing) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_one_trial, work, chunksize=max(1, trials // (4 * jobs))))
    else:
        rows = [_one_trial(w) for w in work]
    totals = [r["queries"]["total"] for r in rows]
    rejections = sum(r["decision"] == "reject" for r in rows)
    aggregate: dict[str, Any] = {
        "trials": trials,
        "rejections": rejections,
        "rejection_frequency": rejections / trials if trials else 0.0,
        "queries_min": min(totals, default=0),
        "queries_median": statistics.median(totals) if totals else 0,
        "queries_max": max(totals, default=0),
        "sample_size": sample_size(epsilon),
    }
    if timing:
        aggregate["seconds_per_trial"] = statistics.fmean(r["seconds"] for r in rows) if rows else 0.0
    config = {
        "mode": mode,
        "concept": concept,
        "epsilon": str(epsilon),
        "c": format_size_bound(c),
        "seed": seed,
        "n": game.n,
        "d": game.d,
    }
    return {"config": config, "aggregate": aggregate, "trials": rows}


def _trials_csv(result: dict[str, Any]) -> str:
    buf = io.StringIO()
    fields = ["trial", "seed", "decision", "sample_size", "neighbor", "find", "member", "total"]
    cfg = result["config"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(cfg) + fields)
    for t, row in enumerate(result["trials"]):
        q = row["queries"]
        writer.writerow(
            list(cfg.values())
            + [t, row["seed"], row["decision"], len(row["sample"]), q["neighbor"], q["find"], q["member"], q["total"]]
        )
    return buf.getvalue()


def cmd_test(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    partition = _load_partition(args.partition) if args.partition else None
    if args.mode == "verify":
        if partition is None:
            raise UsageError("--mode verify needs a partition file")
        if args.concept is None:
            raise UsageError("--mode verify needs --concept")
        c = args.c if args.c is not _UNSET else partition.c
        concept = args.concept
    else:
        if args.c is _UNSET or args.c is None:
            raise UsageError("--mode exist needs a bounded --c")
        c, concept = args.c, None
    result = run_trials(
        game,
        partition,
        mode=args.mode,
        concept=concept,
        epsilon=args.epsilon,
        c=c,
        seed=args.seed,
        trials=args.trials,
        jobs=args.jobs,
        timing=args.timing,
    )
    if args.format == "csv":
        sys.stdout.write(_trials_csv(result))
    else:
        print(_dump(result if args.per_trial else {k: v for k, v in result.items() if k != "trials"}))
    return 1 if result["aggregate"]["rejection_frequency"] > 0.5 else 0


# -- repair --------------------------------------------------------------------


def cmd_repair(args: argparse.Namespace) -> int:
    game, partition = _load_game(args.game), _load_partition(args.partition)
    c = args.c if args.c is not _UNSET else partition.c
    witnesses = all_witnesses(game, partition, args.concept, c)
    script = repair_all_witnesses(game, partition, args.concept, c)
    k = len(witnesses)
    if len(script) > k * game.d:
        raise AssertionError(f"repair script of length {len(script)} exceeds k*d = {k * game.d}")
    fixed = apply_edits(game, script)
    stable_after = exact_verify(fixed, partition, args.concept, c).stable
    if args.out:
        Path(args.out).write_text(format_edit_script(script), encoding="utf-8")
    summary = {
        "concept": args.concept,
        "c": format_size_bound(c),
        "witness_count": k,
        "d": game.d,
        "length": len(script),
        "bound": k * game.d,
        "stable_after": stable_after,
        "script": [str(e) for e in script],
    }
    print(_dump(summary))
    return 0 if stable_after else 1


# -- bench ---------------------------------------------------------------------

BENCH_FIELDS = [
    "sweep",
    "value",
    "family",
    "n",
    "d",
    "c",
    "epsilon",
    "concept",
    "sample_size",
    "trials",
    "rejections",
    "queries_min",
    "queries_median",
    "queries_max",
]


def cmd_bench(args: argparse.Namespace) -> int:
    rows = []
    for raw in args.values:
        n, eps, c = args.n, args.epsilon, args.c
        if args.sweep == "n":
            n = int(raw)
        elif args.sweep == "epsilon":
            eps = _epsilon(raw)
        else:
            c = _size_bound(raw)
        spec = InstanceSpec(
            family=args.family,
            n=n,
            d=args.d,
            c=c,
            seed=args.seed,
            cluster_size=args.cluster_size,
            regular=args.regular,
        )
        inst = generate(spec)
        partition = inst.partition if inst.partition is not None else random_partition(n, c, args.seed)
        mode = "exist" if args.concept == "perfect-existence" else "verify"
        result = run_trials(
            inst.game,
            partition,
            mode=mode,
            concept=None if mode == "exist" else args.concept,
            epsilon=eps,
            c=c,
            seed=args.seed,
            trials=args.trials,
            jobs=args.jobs,
            timing=args.timing,
        )
        agg = result["aggregate"]
        row = {
            "sweep": args.sweep,
            "value": raw,
            "family": args.family,
            "n": n,
            "d": args.d,
            "c": format_size_bound(c),
            "epsilon": str(eps),
            "concept": args.concept,
            "sample_size": agg["sample_size"],
            "trials": agg["trials"],
            "rejections": agg["rejections"],
            "queries_min": agg["queries_min"],
            "queries_median": agg["queries_median"],
            "queries_max": agg["queries_max"],
        }
        if args.timing:
            row["seconds_per_trial"] = f"{agg['seconds_per_trial']:.6f}"
        rows.append(row)
    fields = BENCH_FIELDS + (["seconds_per_trial"] if args.timing else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fenhedonic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, concept=False, c_default=_UNSET):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--c", type=_size_bound, default=c_default, help="coalition size bound or 'unbounded'")
        if concept:
            p.add_argument("--concept", choices=CONCEPT_CHOICES, required=concept == "required")

    g = sub.add_parser("gen", help="generate an instance family")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, default=4)
    common(g, c_default=3)
    g.add_argument("--preset", choices=["custom", "friends-appreciation", "enemies-aversion"], default="custom")
    g.add_argument("--f", type=int, default=1)
    g.add_argument("--e", type=int, default=1)
    g.add_argument("--cluster-size", type=int)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--regular", action="store_true", help="cyclic enemy layout for friend-clusters-perfect")
    g.add_argument("--single", action="store_true", help="one friend path instead of a tiling")
    g.add_argument("--with-partition", action="store_true", help="add a random partition when the family has none")
    g.add_argument("--out", default="instance", help="output prefix")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify-exact", help="exact stability check")
    v.add_argument("game")
    v.add_argument("partition")
    common(v, concept="required")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.set_defaults(func=cmd_verify_exact)

    t = sub.add_parser("test", help="run seeded tester trials")
    t.add_argument("game")
    t.add_argument("partition", nargs="?")
    t.add_argument("--mode", choices=["verify", "exist"], default="verify")
    common(t, concept=True)
    t.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10))
    t.add_argument("--trials", type=int, default=1)
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--format", choices=["json", "csv"], default="json")
    t.add_argument("--per-trial", action="store_true", help="include every trial in JSON output")
    t.add_argument("--timing", action="store_true", help="add wall-clock columns (not byte-stable)")
    t.set_defaults(func=cmd_test)

    r = sub.add_parser("repair", help="witness repair script")
    r.add_argument("game")
    r.add_argument("partition")
    common(r, concept="required")
    r.add_argument("--out", help="write the edit script here")
    r.set_defaults(func=cmd_repair)

    b = sub.add_parser("bench", help="query-count sweeps")
    b.add_argument("--sweep", choices=["n", "epsilon", "c"], required=True)
    b.add_argument("--values", nargs="+", required=True)
    b.add_argument("--family", choices=FAMILIES, default="friend-clusters-perfect")
    b.add_argument("--concept", choices=CONCEPT_CHOICES + ["perfect-existence"], default="nash")
    b.add_argument("--n", type=int, default=1000)
    b.add_argument("--d", type=int, default=6)
    common(b, c_default=3)
    b.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10))
    b.add_argument("--cluster-size", type=int)
    b.add_argument("--regular", action="store_true")
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--format", choices=["csv"], default="csv")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (GameError, UsageError, OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
