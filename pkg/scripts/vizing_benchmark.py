"""Time the engine-driven Vizing coloring on Erdos-Renyi graphs.

    python3 scripts/vizing_benchmark.py --n 30 --p 0.1 0.5 0.9 --graphs 200
"""

import argparse
import random
import statistics
import time

from fixerbreaker.coloring import is_proper, vizing_color
from fixerbreaker.sweeps import gnp


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--p", type=float, nargs="+", default=[0.1, 0.5, 0.9])
    ap.add_argument("--graphs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'p':>5} {'mean ms':>9} {'max ms':>8} {'rounds':>8} {'Delta':>6} {'colors':>7}")
    for p in args.p:
        times, rounds, deltas, used = [], 0, [], []

        def count(*_):
            nonlocal rounds
            rounds += 1

        for _ in range(args.graphs):
            G = gnp(args.n, p, rng)
            start = time.perf_counter()
            c = vizing_color(G, on_round=count)
            times.append(time.perf_counter() - start)
            assert is_proper(G, c)
            deltas.append(G.max_degree())
            used.append(len(c.used()))
        print(f"{p:5.2f} {1000 * statistics.mean(times):9.2f} {1000 * max(times):8.2f} "
              f"{rounds / args.graphs:8.1f} {statistics.mean(deltas):6.1f} {statistics.mean(used):7.1f}")


if __name__ == "__main__":
    main()
