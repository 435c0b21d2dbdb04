"""Game rules: configuration, moves, legality, state transitions and the referee."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional, Sequence, Union

from .core import InstanceError, Pot, SetFamily, normalize_demand
from .matching import find_eta_transversal, is_eta_transversal


class IllegalMove(ValueError):
    """A move violates the rules; ``clause`` names the violated condition."""

    def __init__(self, clause: str, move=None):
        super().__init__(clause)
        self.clause = clause
        self.move = move


@dataclass(frozen=True)
class GameConfig:
    pot: Pot
    t: int
    eta: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.t < 1:
            raise InstanceError(f"t must be >= 1, got {self.t}")
        object.__setattr__(self, "eta", tuple(int(e) for e in self.eta))
        if any(e < 1 for e in self.eta):
            raise InstanceError("demand values must be positive integers")
        if len(self.pot) < sum(self.eta):
            raise InstanceError(
                f"pot size {len(self.pot)} is below the total demand {sum(self.eta)}")


@dataclass(frozen=True, order=True)
class FixerMove:
    set_index: int
    insert: int
    remove: int


class Direction(enum.Enum):
    INSERT_X_REMOVE_Y = "insert_x_remove_y"
    INSERT_Y_REMOVE_X = "insert_y_remove_x"


@dataclass(frozen=True)
class Swap:
    set_index: int
    direction: Direction


@dataclass(frozen=True)
class BreakerMove:
    swaps: tuple[Swap, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.swaps


Round = tuple[FixerMove, BreakerMove]


@dataclass(frozen=True)
class GameState:
    family: SetFamily
    config: GameConfig
    history: tuple[Round, ...] = ()
    pending: Optional[FixerMove] = None

    def __post_init__(self) -> None:
        self.family.check_pot(self.config.pot)
        if len(self.config.eta) != len(self.family):
            raise InstanceError(
                f"demand has {len(self.config.eta)} entries for {len(self.family)} sets")

    @classmethod
    def new(cls, pot: Pot, sets, t: int, eta: Optional[Sequence[int]] = None) -> "GameState":
        family = sets if isinstance(sets, SetFamily) else SetFamily.from_names(pot, sets)
        return cls(family, GameConfig(pot, t, normalize_demand(family, eta)))

    @property
    def t(self) -> int:
        return self.config.t


# -- raw-family move logic, shared by the referee and the exact solver --

def fixer_moves(sets: Sequence[Sequence[int]], pot_size: int) -> list[FixerMove]:
    out = []
    for i, s in enumerate(sets):
        members = set(s)
        for x in range(pot_size):
            if x in members:
                continue
            for y in s:
                out.append(FixerMove(i, x, y))
    return out


def swap_options(sets: Sequence[Sequence[int]], move: FixerMove) -> list[Swap]:
    """Every single-set swap Breaker may make after ``move`` has been applied."""
    x, y = move.insert, move.remove
    out = []
    for j, s in enumerate(sets):
        if j == move.set_index:
            continue
        has_x, has_y = x in s, y in s
        if has_x and not has_y:
            out.append(Swap(j, Direction.INSERT_Y_REMOVE_X))
        elif has_y and not has_x:
            out.append(Swap(j, Direction.INSERT_X_REMOVE_Y))
    return out


def breaker_moves(sets: Sequence[Sequence[int]], move: FixerMove, t: int) -> list[BreakerMove]:
    options = swap_options(sets, move)
    out = []
    for r in range(min(t, len(options)) + 1):
        for combo in combinations(options, r):
            out.append(BreakerMove(combo))
    return out


def swapped(s: Sequence[int], add: int, drop: int) -> tuple[int, ...]:
    return tuple(sorted([e for e in s if e != drop] + [add]))


def apply_fixer_raw(sets, move: FixerMove) -> tuple[tuple[int, ...], ...]:
    out = list(sets)
    out[move.set_index] = swapped(sets[move.set_index], move.insert, move.remove)
    return tuple(out)


def apply_breaker_raw(sets, move: FixerMove, reply: BreakerMove) -> tuple[tuple[int, ...], ...]:
    x, y = move.insert, move.remove
    out = list(sets)
    for sw in reply.swaps:
        if sw.direction is Direction.INSERT_X_REMOVE_Y:
            out[sw.set_index] = swapped(sets[sw.set_index], x, y)
        else:
            out[sw.set_index] = swapped(sets[sw.set_index], y, x)
    return tuple(out)


# -- validated transitions --

def check_fixer(state: GameState, m: FixerMove) -> None:
    sets = state.family.sets
    if state.pending is not None:
        raise IllegalMove("Breaker must answer the previous Fixer move first", m)
    if not 0 <= m.set_index < len(sets):
        raise IllegalMove("set index out of range", m)
    if not 0 <= m.insert < len(state.config.pot):
        raise IllegalMove("x in P violated", m)
    if m.insert in sets[m.set_index]:
        raise IllegalMove("x not in S violated", m)
    if m.remove not in sets[m.set_index]:
        raise IllegalMove("y in S violated", m)


def check_breaker(state: GameState, m: BreakerMove) -> None:
    last = state.pending
    if last is None:
        raise IllegalMove("no Fixer move to answer", m)
    if len(m.swaps) > state.t:
        raise IllegalMove(f"at most t={state.t} sets may be modified", m)
    idx = [sw.set_index for sw in m.swaps]
    if len(set(idx)) != len(idx):
        raise IllegalMove("swapped sets must be distinct", m)
    sets = state.family.sets
    for sw in m.swaps:
        j = sw.set_index
        if not 0 <= j < len(sets):
            raise IllegalMove("set index out of range", m)
        if j == last.set_index:
            raise IllegalMove("Breaker may not modify the set Fixer modified", m)
        if sw.direction is Direction.INSERT_X_REMOVE_Y:
            add, drop = last.insert, last.remove
        else:
            add, drop = last.remove, last.insert
        if add in sets[j]:
            raise IllegalMove(f"inserted element already in set {j}", m)
        if drop not in sets[j]:
            raise IllegalMove(f"removed element not in set {j}", m)


def legal_fixer_moves(state: GameState) -> list[FixerMove]:
    """All Fixer moves, ordered by set index, then inserted id, then removed id."""
    return fixer_moves(state.family.sets, len(state.config.pot))


def legal_breaker_moves(state: GameState, last: Optional[FixerMove] = None) -> list[BreakerMove]:
    last = state.pending if last is None else last
    if last is None:
        raise IllegalMove("no Fixer move to answer")
    return breaker_moves(state.family.sets, last, state.t)


def apply_fixer(state: GameState, m: FixerMove) -> GameState:
    check_fixer(state, m)
    return GameState(SetFamily(apply_fixer_raw(state.family.sets, m)), state.config,
                     state.history, m)


def apply_breaker(state: GameState, m: BreakerMove) -> GameState:
    check_breaker(state, m)
    last = state.pending
    return GameState(SetFamily(apply_breaker_raw(state.family.sets, last, m)), state.config,
                     state.history + ((last, m),), None)


def is_won(state: GameState) -> Optional[dict[int, tuple[int, ...]]]:
    return find_eta_transversal(state.family, state.config.eta)


# -- referee --

@dataclass(frozen=True)
class DeclareWin:
    """Fixer claims the current family already has the given eta-transversal."""

    transversal: dict = field(default_factory=dict)


FixerAgent = Callable[[GameState], Union[FixerMove, DeclareWin]]
BreakerAgent = Callable[[GameState, FixerMove], BreakerMove]

FIXER, BREAKER = "Fixer", "Breaker"


@dataclass
class Outcome:
    winner: str
    rounds: int
    transversal: Optional[dict[int, tuple[int, ...]]]
    trace: list[dict]
    forfeit: Optional[str] = None


def move_record(pot: Pot, m: FixerMove) -> dict:
    return {"set": m.set_index, "insert": pot.name_of(m.insert), "remove": pot.name_of(m.remove)}


def reply_record(m: BreakerMove) -> list[dict]:
    return [{"set": sw.set_index, "direction": sw.direction.value} for sw in m.swaps]


def play(initial: GameState, fixer_agent: FixerAgent, breaker_agent: BreakerAgent,
         round_limit: int) -> Outcome:
    """Referee one game.

    The win check runs before the first round and after every completed
    round.  An agent that answers with an illegal move forfeits; Breaker
    wins when ``round_limit`` rounds pass without a transversal.
    """
    if round_limit < 1:
        raise ValueError("round_limit must be >= 1")
    pot = initial.config.pot
    state = initial
    trace: list[dict] = []

    def fixer_wins(rounds: int) -> Optional[Outcome]:
        tr = is_won(state)
        if tr is not None:
            return Outcome(FIXER, rounds, tr, trace)
        return None

    for r in range(round_limit):
        done = fixer_wins(r)
        if done:
            return done
        m = fixer_agent(state)
        if isinstance(m, DeclareWin):
            return Outcome(BREAKER, r, None, trace, forfeit="Fixer declared a win without a transversal")
        try:
            state = apply_fixer(state, m)
        except IllegalMove as e:
            return Outcome(BREAKER, r, None, trace, forfeit=f"Fixer: {e.clause}")
        reply = breaker_agent(state, m)
        try:
            state = apply_breaker(state, reply)
        except IllegalMove as e:
            return Outcome(FIXER, r, None, trace, forfeit=f"Breaker: {e.clause}")
        trace.append({
            "round": r + 1,
            "fixer": move_record(pot, m),
            "breaker": reply_record(reply),
            "family": state.family.names(pot),
        })
    done = fixer_wins(round_limit)
    if done:
        return done
    return Outcome(BREAKER, round_limit, None, trace)


def validate_outcome(initial: GameState, outcome: Outcome) -> bool:
    """Replay-free sanity check: a Fixer win must carry a valid eta-transversal."""
    if outcome.winner != FIXER or outcome.forfeit:
        return True
    if not outcome.trace:
        fam = initial.family
    else:
        fam = SetFamily.from_names(initial.config.pot, outcome.trace[-1]["family"])
    return is_eta_transversal(fam, initial.config.eta, outcome.transversal)
