"""Bipartite matching, transversals, eta-transversals and the spanner subgraph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import InstanceError, SetFamily, normalize_demand


@dataclass(frozen=True)
class Bipartite:
    left: int
    right: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adj) != self.left:
            raise InstanceError("adjacency must list every left vertex")
        adj = []
        for u, nbrs in enumerate(self.adj):
            nb = tuple(sorted(nbrs))
            if len(set(nb)) != len(nb):
                raise InstanceError(f"duplicate edge at left vertex {u}")
            if nb and (nb[0] < 0 or nb[-1] >= self.right):
                raise InstanceError(f"left vertex {u} has an out-of-range neighbour")
            adj.append(nb)
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def of_family(cls, family: SetFamily, n_elements: Optional[int] = None) -> "Bipartite":
        if n_elements is None:
            n_elements = max((s[-1] + 1 for s in family.sets if s), default=0)
        return cls(len(family), n_elements, family.sets)

    def right_adj(self) -> list[list[int]]:
        radj: list[list[int]] = [[] for _ in range(self.right)]
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                radj[v].append(u)
        return radj


def _augment(u: int, adj, match_r: dict, seen: set) -> bool:
    for v in adj[u]:
        if v in seen:
            continue
        seen.add(v)
        w = match_r.get(v)
        if w is None or _augment(w, adj, match_r, seen):
            match_r[v] = u
            return True
    return False


def _kuhn(adj: Sequence[Sequence[int]]) -> dict[int, int]:
    match_r: dict[int, int] = {}
    for u in range(len(adj)):
        _augment(u, adj, match_r, set())
    return {u: v for v, u in match_r.items()}


def max_matching(g: Bipartite) -> dict[int, int]:
    """Maximum matching as a partial map left -> right (augmenting paths, index order)."""
    return dict(sorted(_kuhn(g.adj).items()))


def _hall_violator(adj: Sequence[Sequence[int]], match: dict[int, int]) -> list[int]:
    """Left vertices alternating-reachable from the first unmatched one.

    For a maximum matching this set ``Z`` has ``|N(Z)| = |Z| - 1``.
    """
    match_r = {v: u for u, v in match.items()}
    start = next(u for u in range(len(adj)) if u not in match)
    reached = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            w = match_r.get(v)
            if w is not None and w not in reached:
                reached.add(w)
                stack.append(w)
    return sorted(reached)


def find_transversal(family: SetFamily) -> Optional[dict[int, int]]:
    """System of distinct representatives ``set index -> element``, or ``None``."""
    match = _kuhn(family.sets)
    if len(match) < len(family):
        return None
    return dict(sorted(match.items()))


def find_eta_transversal(family: SetFamily,
                         eta: Optional[Sequence[int]] = None) -> Optional[dict[int, tuple[int, ...]]]:
    """Disjoint representative sets of sizes ``eta``; ``None`` if none exist.

    Each set is copied ``eta[i]`` times and a transversal of the copies is
    regrouped by owner.
    """
    eta = normalize_demand(family, eta)
    owners = [i for i, e in enumerate(eta) for _ in range(e)]
    match = _kuhn([family.sets[i] for i in owners])
    if len(match) < len(owners):
        return None
    out: dict[int, list[int]] = {i: [] for i in range(len(family))}
    for c, x in match.items():
        out[owners[c]].append(x)
    return {i: tuple(sorted(xs)) for i, xs in out.items()}


def is_transversal(family: SetFamily, assignment: dict[int, int]) -> bool:
    if sorted(assignment) != list(range(len(family))):
        return False
    if len(set(assignment.values())) != len(assignment):
        return False
    return all(x in family.sets[i] for i, x in assignment.items())


def is_eta_transversal(family: SetFamily, eta: Optional[Sequence[int]],
                       assignment: dict[int, Sequence[int]]) -> bool:
    eta = normalize_demand(family, eta)
    if sorted(assignment) != list(range(len(family))):
        return False
    used: set[int] = set()
    for i, reps in assignment.items():
        reps = set(reps)
        if len(reps) != eta[i] or not reps <= set(family.sets[i]) or reps & used:
            return False
        used |= reps
    return True


@dataclass(frozen=True)
class SpannerSubgraph:
    """Covered left vertices with their matched right sets, and the covered right side."""

    left: dict[int, tuple[int, ...]]
    right: frozenset[int]

    def check(self, g: Bipartite, eta: Sequence[int]) -> None:
        """Assert the degree and closure properties against ``g``."""
        seen: list[int] = []
        for x, ys in self.left.items():
            if len(ys) != eta[x]:
                raise AssertionError(f"left vertex {x} has degree {len(ys)}, demand {eta[x]}")
            if not set(ys) <= set(g.adj[x]):
                raise AssertionError(f"left vertex {x} uses a non-edge")
            seen.extend(ys)
        if len(seen) != len(set(seen)) or set(seen) != self.right:
            raise AssertionError("right vertices must have degree exactly 1")
        for x, nbrs in enumerate(g.adj):
            if x not in self.left and self.right.intersection(nbrs):
                raise AssertionError(f"left vertex {x} touches a covered right vertex")


def _shrink(tight: list[int], radj, eta: Sequence[int]) -> tuple[list[int], dict[int, int]]:
    """Drop elements (highest id first) while ``|N(C)| <= |C|`` survives."""
    c = set(tight)
    cnt: dict[int, int] = {}
    for y in c:
        for x in radj[y]:
            cnt[x] = cnt.get(x, 0) + 1
    weight = sum(eta[x] for x in cnt)
    changed = True
    while changed and len(c) > 1:
        changed = False
        for y in sorted(c, reverse=True):
            if len(c) == 1:
                break
            loss = sum(eta[x] for x in radj[y] if cnt[x] == 1)
            if weight - loss <= len(c) - 1:
                c.remove(y)
                weight -= loss
                for x in radj[y]:
                    cnt[x] -= 1
                    if cnt[x] == 0:
                        del cnt[x]
                changed = True
    return sorted(c), cnt


def _closure(start: int, adj: Sequence[Sequence[int]], partner: dict[int, int]) -> frozenset[int]:
    """Right-side indices reachable from ``start`` via copy -> matched partner steps."""
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for k in adj[i]:
            j = partner[k]
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return frozenset(seen)


def spanner(g: Bipartite, eta: Optional[Sequence[int]] = None) -> SpannerSubgraph:
    """Nonempty subgraph H saturating its left side to ``eta`` and closed on the right.

    Requires ``|N(X)| >= sum eta``.  A tight right set ``C`` (``|N(C)| <= |C|``,
    counting ``eta`` copies) is shrunk one element at a time, highest id
    first, until no single element can be dropped.  If the copies of ``N(C)``
    then cannot be matched perfectly onto ``C``, shrinking restarts from the
    Hall violator.  Single deletions can stall above a minimal set, so ``C``
    is finally cut down to the closure of a sink component under
    "element -> matched partner of an adjacent copy"; that closure is tight
    and inclusion-minimal.
    """
    eta = tuple(eta) if eta is not None else (1,) * g.left
    if len(eta) != g.left or any(e < 1 for e in eta):
        raise InstanceError("eta must give a positive demand for every left vertex")
    radj = g.right_adj()
    covered = [y for y in range(g.right) if radj[y]]
    if len(covered) < sum(eta) or not covered:
        raise InstanceError(
            f"spanner needs |N(X)| >= sum eta, got {len(covered)} < {sum(eta)}")

    tight = covered
    while True:
        c, cnt = _shrink(tight, radj, eta)
        owners = [x for x in sorted(cnt) for _ in range(eta[x])]
        slot: dict[int, list[int]] = {}
        for k, x in enumerate(owners):
            slot.setdefault(x, []).append(k)
        # match C into the copies of N(C)
        adj = [[k for x in radj[y] for k in slot[x]] for y in c]
        match = _kuhn(adj)
        if len(match) == len(c) == len(owners):
            break
        tight = [c[i] for i in _hall_violator(adj, match)]

    partner = {k: i for i, k in match.items()}
    keep = _closure(0, adj, partner)
    shrunk = True
    while shrunk:
        shrunk = False
        for i in sorted(keep):
            sub = _closure(i, adj, partner)
            if sub < keep:
                keep, shrunk = sub, True
                break

    left: dict[int, list[int]] = {}
    for i in sorted(keep):
        left.setdefault(owners[match[i]], []).append(c[i])
    result = SpannerSubgraph({x: tuple(sorted(ys)) for x, ys in sorted(left.items())},
                             frozenset(c[i] for i in keep))
    result.check(g, eta)
    return result
