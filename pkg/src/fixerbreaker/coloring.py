"""Edge-coloring applications: Vizing colorings via the Fixer engine, exact
chromatic index, critical edges and fan-equation witnesses.

Colors are ``1..k``.  Inside set families color ``c`` is element id ``c - 1``.
Edges are addressed by their index in ``Multigraph.edges``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core import DeficiencyWitness, InstanceError, Pot, SetFamily, deficiency_witness
from .game import (
    BreakerMove,
    DeclareWin,
    Direction,
    GameConfig,
    GameState,
    Swap,
    apply_breaker,
    apply_fixer,
)
from .strategy import FixerEngine

MAX_CHI_EDGES = 24


class PreconditionError(ValueError):
    pass


class CorollaryViolated(RuntimeError):
    """The fan corollary failed on an instance meeting its hypotheses."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    simple: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InstanceError("vertex count must be nonnegative")
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InstanceError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            edges.append((u, v))
        object.__setattr__(self, "edges", tuple(edges))
        if self.simple and not self.is_simple():
            raise InstanceError("graph is flagged simple but repeats an edge")

    def is_simple(self) -> bool:
        pairs = [frozenset(e) for e in self.edges]
        return len(set(pairs)) == len(pairs)

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    def max_degree(self) -> int:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0)

    def multiplicity(self, u: int, v: int) -> int:
        return sum(1 for e in self.edges if set(e) == {u, v})

    def neighbors(self, v: int) -> list[int]:
        return sorted({w for e in self.edges for w in e if v in e and w != v})

    def incidence(self) -> list[list[tuple[int, int]]]:
        """Per vertex, ``(edge index, other endpoint)`` pairs."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append((e, v))
            inc[v].append((e, u))
        return inc

    def without_edge(self, e: int) -> "Multigraph":
        return Multigraph(self.n, self.edges[:e] + self.edges[e + 1:], self.simple)

    def edge_index(self, x: int, y: int) -> int:
        for e, uv in enumerate(self.edges):
            if set(uv) == {x, y}:
                return e
        raise PreconditionError(f"no edge between {x} and {y}")


@dataclass(frozen=True)
class EdgeColoring:
    """Colors per edge instance; ``None`` marks an uncolored instance."""

    k: int
    colors: tuple[Optional[int], ...]

    def used(self) -> set[int]:
        return {c for c in self.colors if c is not None}


def is_proper(G: Multigraph, coloring: EdgeColoring) -> bool:
    if len(coloring.colors) != len(G.edges):
        return False
    seen: set[tuple[int, int]] = set()
    for (u, v), c in zip(G.edges, coloring.colors):
        if c is None:
            continue
        if not 1 <= c <= coloring.k:
            return False
        for w in (u, v):
            if (w, c) in seen:
                return False
            seen.add((w, c))
    return True


def _at(G: Multigraph, colors: Sequence[Optional[int]]) -> list[dict[int, int]]:
    at: list[dict[int, int]] = [{} for _ in range(G.n)]
    for e, ((u, v), c) in enumerate(zip(G.edges, colors)):
        if c is not None:
            at[u][c] = e
            at[v][c] = e
    return at


def missing(G: Multigraph, coloring: EdgeColoring, v: int) -> set[int]:
    present = {c for (a, b), c in zip(G.edges, coloring.colors) if c is not None and v in (a, b)}
    return set(range(1, coloring.k + 1)) - present


def _kempe(at, colors, edges, v: int, a: int, b: int) -> int:
    """Exchange ``a``/``b`` on the maximal alternating path from ``v``; return its far end."""
    first = b if b in at[v] else a
    other = a if first == b else b
    path = []
    cur, c = v, first
    while c in at[cur]:
        e = at[cur][c]
        path.append(e)
        u, w = edges[e]
        cur = w if u == cur else u
        c = other if c == first else first
    for e in path:
        u, w = edges[e]
        old = colors[e]
        for z in (u, w):
            if at[z].get(old) == e:
                del at[z][old]
    for e in path:
        u, w = edges[e]
        new = a if colors[e] == b else b
        colors[e] = new
        at[u][new] = e
        at[w][new] = e
    return cur


def kempe_swap(coloring: EdgeColoring, G: Multigraph, v: int, a: int,
               b: int) -> tuple[EdgeColoring, int]:
    """Swap colors ``a`` and ``b`` along the alternating path that starts at ``v``.

    Exactly one of ``a`` and ``b`` must be present at ``v``.  Returns the new
    coloring and the path's other endpoint.
    """
    if not is_proper(G, coloring):
        raise PreconditionError("coloring is not proper")
    at = _at(G, coloring.colors)
    if (a in at[v]) == (b in at[v]):
        raise PreconditionError(f"exactly one of colors {a}, {b} must be present at {v}")
    colors = list(coloring.colors)
    end = _kempe(at, colors, G.edges, v, a, b)
    return EdgeColoring(coloring.k, tuple(colors)), end


def peel_order(G: Multigraph) -> list[int]:
    """Vertices in removal order, always removing a maximum-degree vertex (lowest id on ties)."""
    inc = G.incidence()
    deg = [len(x) for x in inc]
    alive = set(range(G.n))
    order = []
    while alive:
        v = max(sorted(alive), key=lambda u: deg[u])
        order.append(v)
        alive.remove(v)
        for _, w in inc[v]:
            if w in alive:
                deg[w] -= 1
    return order


RoundHook = Callable[[GameState, object, BreakerMove], None]


def vizing_color(G: Multigraph, on_round: Optional[RoundHook] = None) -> EdgeColoring:
    """Proper edge coloring of a simple graph with at most ``Delta + 1`` colors.

    Vertices are re-inserted in reverse peel order.  At each insertion the
    missing-color sets of the already-present neighbours form a family that
    the Fixer engine plays on with ``t = 1``; each proposed swap is carried
    out as a Kempe exchange and the change it causes at the path's far end
    is fed back as Breaker's reply.
    """
    if not G.is_simple():
        raise PreconditionError("vizing_color needs a simple graph")
    k = G.max_degree() + 1
    pot = Pot(tuple(str(c) for c in range(1, k + 1)))
    palette = frozenset(range(k))
    colors: list[Optional[int]] = [None] * len(G.edges)
    at: list[dict[int, int]] = [{} for _ in range(G.n)]
    inc = G.incidence()
    present: set[int] = set()

    def miss(w: int) -> tuple[int, ...]:
        return tuple(sorted(palette - {c - 1 for c in at[w]}))

    for v in reversed(peel_order(G)):
        spokes = sorted((w, e) for e, w in inc[v] if w in present)
        present.add(v)
        if not spokes:
            continue
        nbrs = [w for w, _ in spokes]
        pos = {w: j for j, w in enumerate(nbrs)}
        state = GameState(SetFamily(tuple(miss(w) for w in nbrs)),
                          GameConfig(pot, 1, (1,) * len(nbrs)))
        engine = FixerEngine(state, check_limit=0)
        while True:
            move = engine.next_move(state)
            if isinstance(move, DeclareWin):
                break
            b, a = move.insert + 1, move.remove + 1
            end = _kempe(at, colors, G.edges, nbrs[move.set_index], a, b)
            j = pos.get(end)
            if j is None or j == move.set_index:
                reply = BreakerMove()
            elif b in at[end]:
                reply = BreakerMove((Swap(j, Direction.INSERT_Y_REMOVE_X),))
            else:
                reply = BreakerMove((Swap(j, Direction.INSERT_X_REMOVE_Y),))
            before = state
            state = apply_breaker(apply_fixer(state, move), reply)
            for w in (nbrs[move.set_index], end):
                if w in pos and state.family.sets[pos[w]] != miss(w):
                    raise AssertionError(f"family out of sync with the coloring at vertex {w}")
            if on_round is not None:
                on_round(before, move, reply)
        for (w, e), (_, reps) in zip(spokes, sorted(move.transversal.items())):
            c = reps[0] + 1
            colors[e] = c
            at[v][c] = e
            at[w][c] = e

    result = EdgeColoring(k, tuple(colors))
    if not is_proper(G, result) or None in result.colors:
        raise AssertionError("vizing_color produced an improper or partial coloring")
    return result


def _edge_order(G: Multigraph, skip: Optional[int]) -> list[int]:
    """Edges in an order that keeps each new edge adjacent to earlier ones."""
    idx = [e for e in range(len(G.edges)) if e != skip]
    if not idx:
        return []
    deg = [0] * G.n
    for e in idx:
        for w in G.edges[e]:
            deg[w] += 1
    order: list[int] = []
    placed: set[int] = set()
    touched: set[int] = set()
    remaining = set(idx)
    while remaining:
        frontier = [e for e in remaining if set(G.edges[e]) & touched]
        pool = frontier or list(remaining)
        e = max(sorted(pool), key=lambda f: (sum(w in touched for w in G.edges[f]),
                                             deg[G.edges[f][0]] + deg[G.edges[f][1]]))
        order.append(e)
        placed.add(e)
        remaining.discard(e)
        touched.update(G.edges[e])
    return order


def find_coloring(G: Multigraph, k: int, skip: Optional[int] = None) -> Optional[EdgeColoring]:
    """First proper ``k``-coloring found by lowest-color-first backtracking.

    ``skip`` leaves one edge instance uncolored.  New colors are opened in
    increasing order only, which removes color-permutation symmetry.
    """
    order = _edge_order(G, skip)
    colors: list[Optional[int]] = [None] * len(G.edges)
    used = [set() for _ in range(G.n)]

    def place(pos: int, opened: int) -> bool:
        if pos == len(order):
            return True
        e = order[pos]
        u, v = G.edges[e]
        for c in range(1, min(k, opened + 1) + 1):
            if c in used[u] or c in used[v]:
                continue
            colors[e] = c
            used[u].add(c)
            used[v].add(c)
            if place(pos + 1, max(opened, c)):
                return True
            used[u].discard(c)
            used[v].discard(c)
            colors[e] = None
        return False

    if not place(0, 0):
        return None
    return EdgeColoring(k, tuple(colors))


def chromatic_index(G: Multigraph, max_edges: int = MAX_CHI_EDGES) -> int:
    """Exact chromatic index by backtracking; refuses graphs above ``max_edges``."""
    if len(G.edges) > max_edges:
        raise PreconditionError(
            f"{len(G.edges)} edge instances exceed the exact-search guard of {max_edges}")
    k = G.max_degree()
    while find_coloring(G, k) is None:
        k += 1
    return k


def is_critical(G: Multigraph, e: int) -> bool:
    return chromatic_index(G.without_edge(e)) < chromatic_index(G)


@dataclass(frozen=True)
class FanFamily:
    x: int
    y: int
    k: int
    neighbors: tuple[int, ...]
    missing: tuple[frozenset[int], ...]
    incident: tuple[frozenset[int], ...]
    family: SetFamily
    eta: tuple[int, ...]

    @property
    def pot(self) -> Pot:
        return Pot(tuple(str(c) for c in range(1, self.k + 1)))

    def check(self, G: Multigraph) -> None:
        seen: set[int] = set()
        for v, m, d, s, eta in zip(self.neighbors, self.missing, self.incident,
                                   self.family.sets, self.eta):
            if d & seen:
                raise AssertionError("x-edge color sets overlap")
            seen |= d
            mu = G.multiplicity(self.x, v)
            if eta != mu:
                raise AssertionError(f"demand at {v} is {eta}, multiplicity {mu}")
            if v == self.y and len(d) != mu - 1:
                raise AssertionError("the removed edge must leave mu(xy) - 1 colors at y")
            if len(s) != self.k + mu - G.degree(v):
                raise AssertionError(f"|S_{v}| = {len(s)} != k + mu(xv) - d(v)")


def build_fan_family(G: Multigraph, x: int, y: int, coloring: EdgeColoring) -> FanFamily:
    """Sets ``S_v`` (missing colors at ``v`` plus colors on the ``x``-``v`` edges) for ``v`` in ``N(x)``.

    ``coloring`` colors every edge instance except one ``x``-``y`` instance.
    """
    blanks = [e for e, c in enumerate(coloring.colors) if c is None]
    if len(blanks) != 1 or set(G.edges[blanks[0]]) != {x, y}:
        raise PreconditionError("coloring must leave exactly one x-y edge uncolored")
    if not is_proper(G, coloring):
        raise PreconditionError("coloring is not proper")
    palette = frozenset(range(1, coloring.k + 1))
    at = _at(G, coloring.colors)
    nbrs = tuple(G.neighbors(x))
    miss, inc, sets, eta = [], [], [], []
    for v in nbrs:
        m = palette - set(at[v])
        d = frozenset(c for (a, b), c in zip(G.edges, coloring.colors)
                      if c is not None and {a, b} == {x, v})
        miss.append(frozenset(m))
        inc.append(d)
        sets.append(tuple(sorted(c - 1 for c in m | d)))
        eta.append(G.multiplicity(x, v))
    fam = FanFamily(x, y, coloring.k, nbrs, tuple(miss), tuple(inc),
                    SetFamily(tuple(sets)), tuple(eta))
    fam.check(G)
    return fam


@dataclass(frozen=True)
class FanWitness:
    x: int
    y: int
    X: tuple[int, ...]
    total: int
    chi: int
    witness: DeficiencyWitness


def fan_witness(G: Multigraph, x: int, y: int) -> FanWitness:
    """Find ``X`` in ``N(x)`` with ``y`` in ``X``, ``|X| >= 2`` and
    ``sum_{v in X} (d(v) + mu(xv) + 1 - chi')`` at least 2.

    Needs ``chi'(G) >= Delta + 1`` and a critical ``x``-``y`` edge.
    """
    e = G.edge_index(x, y)
    chi = chromatic_index(G)
    if chi < G.max_degree() + 1:
        raise PreconditionError(f"chi' = {chi} is below Delta + 1 = {G.max_degree() + 1}")
    k = chi - 1
    pi = find_coloring(G, k, skip=e)
    if pi is None:
        raise PreconditionError(f"edge {x}-{y} is not critical")
    fam = build_fan_family(G, x, y, pi)
    w = deficiency_witness(fam.family, 1, fam.eta)
    if w is None:
        raise CorollaryViolated(f"no deficient sub-family for edge {x}-{y}")
    X = tuple(fam.neighbors[i] for i in w.subset)
    total = sum(G.degree(v) + G.multiplicity(x, v) + 1 - chi for v in X)
    if y not in X or len(X) < 2 or total < 2:
        raise CorollaryViolated(f"witness X={X} with sum {total} breaks the corollary")
    return FanWitness(x, y, X, total, chi, w)
