"""Fan witnesses on every small class-two multigraph.

Prints one line per isomorphism class with chi' >= Delta + 1: the edge list,
chi', and for each oriented critical edge the witness X and its sum.

    python3 scripts/fan_sweep.py --n 4 --mult 2
"""

import argparse

from fixerbreaker.coloring import chromatic_index, fan_witness, is_critical
from fixerbreaker.sweeps import multigraph_key, small_multigraphs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--mult", type=int, default=2)
    args = ap.parse_args()

    classes = {}
    for G in small_multigraphs(args.n, args.mult):
        classes.setdefault(multigraph_key(G), G)
    shown = 0
    for G in classes.values():
        chi = chromatic_index(G)
        if chi < G.max_degree() + 1:
            continue
        shown += 1
        parts = []
        for e, (x, y) in enumerate(G.edges):
            if e != G.edge_index(x, y) or not is_critical(G, e):
                continue
            for a, b in ((x, y), (y, x)):
                w = fan_witness(G, a, b)
                parts.append(f"{a}->{b}: X={list(w.X)} sum={w.total}")
        print(f"n={G.n} edges={list(G.edges)} chi'={chi} Delta={G.max_degree()}")
        for p in parts:
            print("    " + p)
    print(f"{shown} class-two graphs out of {len(classes)} isomorphism classes")


if __name__ == "__main__":
    main()
