"""Instance generators shared by the acceptance tests and the experiment scripts."""

from __future__ import annotations

import random
from itertools import combinations, permutations, product
from typing import Iterator, Optional

from .coloring import Multigraph
from .core import Pot, SetFamily
from .game import GameConfig, GameState


def nonempty_subsets(n: int) -> list[tuple[int, ...]]:
    return [s for r in range(1, n + 1) for s in combinations(range(n), r)]


def plain_instances(pot_size: int = 4, max_sets: int = 3, ts=(1, 2)) -> Iterator[GameState]:
    """Every ordered family of nonempty subsets of the pot, repetition allowed."""
    pot = Pot.of_size(pot_size)
    subsets = nonempty_subsets(pot_size)
    for k in range(1, max_sets + 1):
        for sets in product(subsets, repeat=k):
            for t in ts:
                yield GameState(SetFamily(sets), GameConfig(pot, t, (1,) * k))


def eta_instances(max_pot: int = 5, max_sets: int = 2, ts=(1, 2), demands=(1, 2)) -> Iterator[GameState]:
    """Families with per-set demand, restricted to pots covering the total demand."""
    for n in range(1, max_pot + 1):
        pot = Pot.of_size(n)
        subsets = nonempty_subsets(n)
        for k in range(1, max_sets + 1):
            for eta in product(demands, repeat=k):
                if sum(eta) > n:
                    continue
                for sets in product(subsets, repeat=k):
                    for t in ts:
                        yield GameState(SetFamily(sets), GameConfig(pot, t, eta))


def random_family(rng: random.Random, max_pot: int = 8, max_sets: int = 6) -> tuple[int, SetFamily]:
    n = rng.randint(1, max_pot)
    k = rng.randint(1, max_sets)
    sets = []
    for _ in range(k):
        size = rng.randint(1, n)
        sets.append(tuple(sorted(rng.sample(range(n), size))))
    return n, SetFamily(tuple(sets))


def simple_family(rng: random.Random, max_pot: int = 8, max_sets: int = 6) -> tuple[int, SetFamily]:
    """Sets of size at least 2, except possibly one of size 1."""
    n = rng.randint(2, max_pot)
    k = rng.randint(1, max_sets)
    small = rng.randrange(k) if rng.random() < 0.5 else None
    sets = []
    for i in range(k):
        lo = 1 if i == small else 2
        sets.append(tuple(sorted(rng.sample(range(n), rng.randint(lo, n)))))
    return n, SetFamily(tuple(sets))


def gnp(n: int, p: float, rng: random.Random) -> Multigraph:
    """Erdos-Renyi simple graph: each pair independently with probability ``p``."""
    edges = tuple(e for e in combinations(range(n), 2) if rng.random() < p)
    return Multigraph(n, edges, simple=True)


def small_multigraphs(max_n: int = 4, max_mult: int = 2,
                      min_edges: int = 1) -> Iterator[Multigraph]:
    """All labelled loopless multigraphs on ``2..max_n`` vertices with bounded multiplicity."""
    for n in range(2, max_n + 1):
        pairs = list(combinations(range(n), 2))
        for mult in product(range(max_mult + 1), repeat=len(pairs)):
            edges = tuple(p for p, m in zip(pairs, mult) for _ in range(m))
            if len(edges) >= min_edges:
                yield Multigraph(n, edges)


def multigraph_key(G: Multigraph) -> Optional[tuple]:
    """Canonical form under vertex relabelling (brute force, meant for ``n <= 6``)."""
    best = None
    for perm in permutations(range(G.n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in G.edges))
        if best is None or key < best:
            best = key
    return best
