"""Empirical rejection rate against distance for partially planted enemy pairs.

Only the first m of the n/2 coalitions hold an enemy pair, so the game is
m/(d n)-far from IR-stability under the pairs partition. The tester's
rejection probability is exactly 1 - (1 - 2m/n)^s; the script prints both
next to the certified distance lower bound.

    python3 scripts/far_rejection.py --n 1000 --d 4 --epsilon 0.1 --trials 300
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from fenhedonic import CoalitionStructure, FenGame
from fenhedonic.exact import certified_far_distance
from fenhedonic.oracles import GraphOracle, PartitionOracle
from fenhedonic.testers import TesterConfig, sample_size, verification_tester


def partial_pairs(n: int, d: int, m: int) -> tuple[FenGame, CoalitionStructure]:
    pairs = [(2 * q + 1, 2 * q + 2) for q in range(n // 2)]
    game = FenGame.from_edges(n, d, (), pairs[:m])
    return game, CoalitionStructure(n, tuple(pairs) + (((n,),) if n % 2 else ()), 2)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--epsilon", type=Fraction, default=Fraction(1, 10))
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--steps", type=int, default=10)
    args = ap.parse_args()
    s = sample_size(args.epsilon)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["m", "distance_lower", "far_fraction", "certified_far", "rejection_frequency", "predicted"])
    for step in range(args.steps + 1):
        m = (args.n // 2) * step // args.steps
        game, part = partial_pairs(args.n, args.d, m)
        bounds = certified_far_distance(game, part, "ir", 2)
        rejected = sum(
            not verification_tester(GraphOracle(game), PartitionOracle(part), TesterConfig(args.epsilon, "ir", 2, t)).accept
            for t in range(args.trials)
        )
        predicted = 1 - (1 - 2 * m / args.n) ** s
        out.writerow(
            [
                m,
                bounds.lower,
                f"{bounds.lower / (args.d * args.n):.4f}",
                bounds.certifies_far(float(args.epsilon), args.d, args.n),
                f"{rejected / args.trials:.4f}",
                f"{predicted:.4f}",
            ]
        )


if __name__ == "__main__":
    main()
