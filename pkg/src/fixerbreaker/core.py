"""Element universe, set families, degrees, t-values and the deficiency condition.

A family is an indexed tuple of sorted element-id tuples.  Two indices may
hold equal sets.  Elements are interned into a :class:`Pot` so that every
set operation works on small dense integers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

MAX_WITNESS_SETS = 24


class InstanceError(ValueError):
    """Raised for malformed pots, families, demands or index lists."""


class SearchTooLarge(ValueError):
    """Raised when an exhaustive search would exceed its size guard."""


class Element(NamedTuple):
    id: int
    name: str


@dataclass(frozen=True)
class Pot:
    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise InstanceError("pot must contain at least one element")
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            dup = sorted(n for n, c in Counter(names).items() if c > 1)
            raise InstanceError(f"duplicate pot element(s): {dup}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def of_size(cls, n: int) -> "Pot":
        """Pot with elements named ``"0" .. str(n-1)``."""
        return cls(tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return (Element(i, n) for i, n in enumerate(self.names))

    def id_of(self, name: str) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise InstanceError(f"element {name!r} is not in the pot") from None

    def name_of(self, i: int) -> str:
        return self.names[i]

    def element(self, name: str) -> Element:
        return Element(self.id_of(name), str(name))


@dataclass(frozen=True)
class SetFamily:
    """Indexed family of element sets; each set is a strictly sorted id tuple."""

    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        normal = []
        for i, s in enumerate(self.sets):
            t = tuple(sorted(int(x) for x in s))
            if len(set(t)) != len(t):
                raise InstanceError(f"set {i} repeats an element")
            if t and t[0] < 0:
                raise InstanceError(f"set {i} holds a negative element id")
            normal.append(t)
        object.__setattr__(self, "sets", tuple(normal))

    @classmethod
    def from_names(cls, pot: Pot, sets: Iterable[Iterable[str]]) -> "SetFamily":
        return cls(tuple(tuple(pot.id_of(n) for n in s) for s in sets))

    def names(self, pot: Pot) -> list[list[str]]:
        return [[pot.name_of(x) for x in s] for s in self.sets]

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.sets[i]

    def union(self, subset: Optional[Sequence[int]] = None) -> set[int]:
        idx = range(len(self.sets)) if subset is None else subset
        out: set[int] = set()
        for i in idx:
            out.update(self.sets[i])
        return out

    def replace(self, i: int, new: Iterable[int]) -> "SetFamily":
        sets = list(self.sets)
        sets[i] = tuple(sorted(new))
        return SetFamily(tuple(sets))

    def check_pot(self, pot: Pot) -> None:
        n = len(pot)
        for i, s in enumerate(self.sets):
            if s and s[-1] >= n:
                raise InstanceError(f"set {i} holds element id {s[-1]} outside the pot")


def normalize_demand(family: SetFamily, eta: Optional[Sequence[int]]) -> tuple[int, ...]:
    """Return ``eta`` as a validated tuple; ``None`` means demand 1 everywhere."""
    if eta is None:
        return (1,) * len(family)
    eta = tuple(int(e) for e in eta)
    if len(eta) != len(family):
        raise InstanceError(f"demand has {len(eta)} entries for {len(family)} sets")
    if any(e < 1 for e in eta):
        raise InstanceError("demand values must be positive integers")
    return eta


def _check_subset(family: SetFamily, subset: Sequence[int]) -> None:
    n = len(family)
    for i in subset:
        if not 0 <= i < n:
            raise InstanceError(f"set index {i} out of range 0..{n - 1}")
    if len(set(subset)) != len(subset):
        raise InstanceError("subset repeats a set index")


def degrees(family: SetFamily, subset: Optional[Sequence[int]] = None) -> Counter:
    """Degree of every element of the union of ``subset``."""
    idx = range(len(family)) if subset is None else subset
    c: Counter = Counter()
    for i in idx:
        c.update(family.sets[i])
    return c


def degree(family: SetFamily, subset: Sequence[int], x: int) -> int:
    """Number of sets indexed by ``subset`` that contain ``x``."""
    _check_subset(family, subset)
    return sum(1 for i in subset if x in family.sets[i])


def t_value_of_degrees(degs: Iterable[int], t: int) -> int:
    return sum((d - 1) // (t + 1) for d in degs if d > 0)


def t_value(family: SetFamily, subset: Sequence[int], t: int) -> int:
    """Sum over the union of ``subset`` of ``floor((d(x) - 1) / (t + 1))``."""
    if t < 1:
        raise InstanceError(f"t must be >= 1, got {t}")
    _check_subset(family, subset)
    return t_value_of_degrees(degrees(family, subset).values(), t)


@dataclass(frozen=True)
class DeficiencyWitness:
    subset: tuple[int, ...]
    union_size: int
    demand_sum: int
    t_value: int

    @property
    def slack(self) -> int:
        """``union_size - demand_sum + t_value``; negative for a genuine witness."""
        return self.union_size - self.demand_sum + self.t_value


def evaluate(family: SetFamily, subset: Sequence[int], t: int,
             eta: Optional[Sequence[int]] = None) -> DeficiencyWitness:
    """Union size, demand and t-value of ``subset``, whether or not it is deficient."""
    eta = normalize_demand(family, eta)
    degs = degrees(family, subset)
    return DeficiencyWitness(
        subset=tuple(subset),
        union_size=len(degs),
        demand_sum=sum(eta[i] for i in subset),
        t_value=t_value_of_degrees(degs.values(), t),
    )


def deficiency_witness(family: SetFamily, t: int,
                       eta: Optional[Sequence[int]] = None) -> Optional[DeficiencyWitness]:
    """Smallest (then lexicographically first) sub-family violating the condition.

    Returns ``None`` when ``|U W| >= sum eta(W) - nu_t(W)`` for every sub-family W.
    The search is exhaustive and refuses families with more than
    ``MAX_WITNESS_SETS`` sets.
    """
    if t < 1:
        raise InstanceError(f"t must be >= 1, got {t}")
    eta = normalize_demand(family, eta)
    n = len(family)
    if n > MAX_WITNESS_SETS:
        raise SearchTooLarge(
            f"deficiency search over {n} sets exceeds the limit of {MAX_WITNESS_SETS}")
    sets = family.sets
    for r in range(1, n + 1):
        for subset in combinations(range(n), r):
            degs: Counter = Counter()
            for i in subset:
                degs.update(sets[i])
            demand = sum(eta[i] for i in subset)
            # cheap reject: nu_t >= 0, so a big union can never be deficient
            if len(degs) >= demand:
                continue
            nu = t_value_of_degrees(degs.values(), t)
            if len(degs) < demand - nu:
                return DeficiencyWitness(subset, len(degs), demand, nu)
    return None


def condition_holds(family: SetFamily, t: int, eta: Optional[Sequence[int]] = None) -> bool:
    return deficiency_witness(family, t, eta) is None


def hall_condition(family: SetFamily, eta: Optional[Sequence[int]] = None) -> bool:
    """Plain (multi-)Hall condition by brute force; small families only."""
    eta = normalize_demand(family, eta)
    n = len(family)
    if n > MAX_WITNESS_SETS:
        raise SearchTooLarge(f"Hall check over {n} sets exceeds the limit")
    for r in range(1, n + 1):
        for subset in combinations(range(n), r):
            if len(family.union(subset)) < sum(eta[i] for i in subset):
                return False
    return True
