"""Compare the deficiency condition with the exact game solver on exhaustive sweeps.

    python3 scripts/condition_sweep.py --pot 4 --sets 3 --t 1 2
    python3 scripts/condition_sweep.py --eta --pot 5 --sets 2
"""

import argparse
import time
from collections import Counter

from fixerbreaker.core import condition_holds
from fixerbreaker.game import FIXER
from fixerbreaker.strategy import exact_solve
from fixerbreaker.sweeps import eta_instances, plain_instances


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pot", type=int, default=4)
    ap.add_argument("--sets", type=int, default=3)
    ap.add_argument("--t", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--eta", action="store_true", help="sweep demands in {1,2} over pots up to --pot")
    args = ap.parse_args()

    gen = (eta_instances(args.pot, args.sets, tuple(args.t)) if args.eta
           else plain_instances(args.pot, args.sets, tuple(args.t)))
    start = time.perf_counter()
    tally: Counter = Counter()
    depth: Counter = Counter()
    for s in gen:
        res = exact_solve(s.family, s.config)
        holds = condition_holds(s.family, s.t, s.config.eta)
        tally[(holds, res.winner == FIXER)] += 1
        if res.winner == FIXER:
            depth[res.rounds] += 1
    total = sum(tally.values())
    mismatches = tally[(True, False)] + tally[(False, True)]
    print(f"instances        {total}")
    print(f"Fixer wins       {tally[(True, True)]}")
    print(f"Breaker wins     {tally[(False, False)]}")
    print(f"mismatches       {mismatches}")
    print("optimal rounds   " + ", ".join(f"{r}: {c}" for r, c in sorted(depth.items())))
    print(f"elapsed          {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
