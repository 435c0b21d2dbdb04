"""Proof-derived Fixer and Breaker agents, and an exact solver used as oracle.

The Fixer engine locks a spanner block whenever the active sets have enough
elements between them, and otherwise swaps a fresh element in for a
high-degree one.  The Breaker engine keeps one deficient sub-family and
answers every Fixer move so that it stays deficient.
"""

from __future__ import annotations

import copy
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Optional, Sequence, Union

from .core import (
    SearchTooLarge,
    SetFamily,
    deficiency_witness,
    evaluate,
)
from .game import (
    BREAKER,
    FIXER,
    BreakerMove,
    DeclareWin,
    Direction,
    FixerMove,
    GameConfig,
    GameState,
    Swap,
    apply_breaker,
    apply_breaker_raw,
    apply_fixer,
    apply_fixer_raw,
    breaker_moves,
    fixer_moves,
    legal_breaker_moves,
    legal_fixer_moves,
    swapped,
)
from .matching import Bipartite, find_eta_transversal, is_eta_transversal, max_matching, spanner

log = logging.getLogger(__name__)

# exhaustive condition checks inside the Fixer engine are skipped above this
GUARD_CHECK_SETS = 12
MAX_ARENA_STATES = 60_000


class ConditionFails(RuntimeError):
    """The Fixer engine was asked to play from a losing position."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ProofGap(RuntimeError):
    """No legal Breaker reply realizes the selected case of the necessity argument."""


class EngineInvariantError(AssertionError):
    pass


# ---------------------------------------------------------------- Fixer

@dataclass(frozen=True)
class LockedBlock:
    sets: tuple[int, ...]
    reps: tuple[tuple[int, tuple[int, ...]], ...]


class FixerEngine:
    """Sufficiency strategy.

    ``active`` are the set indices still in play, ``locked`` the blocks whose
    representatives are fixed, ``reduced_pot`` the elements not used as
    locked representatives.  With ``guarded=False`` the engine keeps playing
    from losing positions instead of raising :class:`ConditionFails`;
    ``check_limit`` caps the active-set count for the exhaustive condition
    check run on every call.
    """

    def __init__(self, state: GameState, guarded: bool = True,
                 check_limit: int = GUARD_CHECK_SETS):
        self.config: GameConfig = state.config
        self.guarded = guarded
        self.check_limit = check_limit
        self.active: list[int] = list(range(len(state.family)))
        self.locked: list[LockedBlock] = []
        self.reduced_pot: set[int] = set(range(len(state.config.pot)))
        self._last: Optional[tuple[tuple[int, ...], int]] = None
        self.calls = 0

    def copy(self) -> "FixerEngine":
        return copy.deepcopy(self)

    def digest(self) -> tuple:
        return (tuple(self.active), tuple(self.locked), self._last)

    def transversal(self) -> dict[int, tuple[int, ...]]:
        out = {}
        for block in self.locked:
            out.update(dict(block.reps))
        return dict(sorted(out.items()))

    def check_locked(self, sets: Sequence[Sequence[int]]) -> None:
        for block in self.locked:
            for i, reps in block.reps:
                if not set(reps) <= set(sets[i]):
                    raise EngineInvariantError(f"locked representatives {reps} left set {i}")
                if set(reps) & self.reduced_pot:
                    raise EngineInvariantError("a locked representative is still in the pot")

    def _lock(self, sets) -> None:
        eta = self.config.eta
        g = Bipartite(len(self.active), len(self.config.pot), [sets[i] for i in self.active])
        h = spanner(g, [eta[i] for i in self.active])
        block = LockedBlock(
            tuple(self.active[k] for k in h.left),
            tuple((self.active[k], reps) for k, reps in h.left.items()),
        )
        self.locked.append(block)
        self.reduced_pot -= h.right
        self.active = [i for k, i in enumerate(self.active) if k not in h.left]

    def _active_witness(self, sets):
        sub = SetFamily(tuple(sets[i] for i in self.active))
        w = deficiency_witness(sub, self.config.t, [self.config.eta[i] for i in self.active])
        if w is None:
            return None
        return evaluate(SetFamily(tuple(sets)), [self.active[k] for k in w.subset],
                        self.config.t, self.config.eta)

    def next_move(self, state: GameState) -> Union[FixerMove, DeclareWin]:
        sets = state.family.sets
        eta, t = self.config.eta, self.config.t
        self.calls += 1
        self.check_locked(sets)
        if self._last is not None:
            prev_active, prev_union = self._last
            grown = len(set().union(*(sets[i] for i in prev_active)))
            if grown <= prev_union:
                raise EngineInvariantError(
                    f"union of the active sets did not grow ({prev_union} -> {grown})")

        while True:
            if not self.active:
                self._last = None
                return DeclareWin(self.transversal())
            degs: dict[int, int] = {}
            for i in self.active:
                for e in sets[i]:
                    degs[e] = degs.get(e, 0) + 1
            if len(degs) >= sum(eta[i] for i in self.active):
                self._lock(sets)
                continue
            break

        if self.guarded and len(self.active) <= self.check_limit:
            w = self._active_witness(sets)
            if w is not None:
                raise ConditionFails("condition fails on the active sets", w)

        fresh = [e for e in sorted(self.reduced_pot) if e not in degs]
        heavy = sorted((e for e, d in degs.items() if d >= t + 2), key=lambda e: (-degs[e], e))
        if fresh and heavy:
            y, x = fresh[0], heavy[0]
            i = next(i for i in self.active if x in sets[i])
            self._last = (tuple(self.active), len(degs))
            return FixerMove(i, y, x)
        if self.guarded:
            w = self._active_witness(sets) if len(self.active) <= 24 else None
            raise ConditionFails("no fresh element or no element of degree >= t+2", w)
        move = self._fallback(sets, degs)
        return DeclareWin(self.transversal()) if move is None else move

    def _fallback(self, sets, degs) -> Optional[FixerMove]:
        pot = sorted(self.reduced_pot, key=lambda e: (degs.get(e, 0), e))
        for x in sorted(degs, key=lambda e: (-degs[e], e)):
            for i in self.active:
                if x not in sets[i]:
                    continue
                for y in pot:
                    if y not in sets[i]:
                        # the union need not grow on this path
                        self._last = None
                        return FixerMove(i, y, x)
        return None

    __call__ = next_move


def fixer_next(engine: FixerEngine, state: GameState) -> Union[FixerMove, DeclareWin]:
    return engine.next_move(state)


# ---------------------------------------------------------------- Breaker

@dataclass
class GapEvent:
    family: tuple
    move: FixerMove
    reason: str
    resolved: bool = False


class BreakerEngine:
    """Necessity strategy holding one deficient sub-family ``witness``."""

    def __init__(self, state: GameState, witness: Optional[Sequence[int]] = None,
                 fallback: bool = True):
        self.config = state.config
        self.fallback = fallback
        if witness is None:
            w = deficiency_witness(state.family, self.config.t, self.config.eta)
            if w is None:
                raise ValueError("the condition holds; Breaker has no deficient sub-family")
            witness = w.subset
        self.witness: tuple[int, ...] = tuple(witness)
        self.gaps: list[GapEvent] = []
        if self.slack(state.family.sets) >= 0:
            raise ValueError(f"sub-family {self.witness} is not deficient")

    def slack(self, sets) -> int:
        """``|U W| - sum eta(W) + nu_t(W)``; the invariant is ``slack <= -1``."""
        d = self._degrees(sets)
        t = self.config.t
        nu = sum((k - 1) // (t + 1) for k in d.values())
        return len(d) - sum(self.config.eta[i] for i in self.witness) + nu

    def _degrees(self, sets) -> dict[int, int]:
        d: dict[int, int] = {}
        for i in self.witness:
            for e in sets[i]:
                d[e] = d.get(e, 0) + 1
        return d

    def _nu(self, sets) -> int:
        t = self.config.t
        return sum((d - 1) // (t + 1) for d in self._degrees(sets).values())

    def _case_reply(self, sets, last: FixerMove) -> Optional[BreakerMove]:
        """Reply chosen by the case analysis, or ``None`` if no legal swap fits."""
        i, x, y = last.set_index, last.insert, last.remove
        t = self.config.t
        if i not in self.witness:
            return BreakerMove()
        before = list(sets)
        before[i] = swapped(sets[i], y, x)
        others = [j for j in self.witness if j != i]
        with_x = [j for j in others if x in sets[j] and y not in sets[j]]
        with_y = [j for j in others if y in sets[j] and x not in sets[j]]
        d2 = self._degrees(sets)
        d2x, d2y = d2.get(x, 0), d2.get(y, 0)
        if self._degrees(before).get(x, 0) > 0:
            if self._nu(sets) <= self._nu(before):
                return BreakerMove()
            if d2y < d2x - 1:
                if not with_x:
                    return None
                return BreakerMove((Swap(with_x[0], Direction.INSERT_Y_REMOVE_X),))
            m = min(t, d2y + 1 - d2x)
        else:
            m = min(t, d2y)
        if len(with_y) < m:
            return None
        return BreakerMove(tuple(Swap(j, Direction.INSERT_X_REMOVE_Y) for j in with_y[:m]))

    def next_move(self, state: GameState, last: FixerMove) -> BreakerMove:
        sets = state.family.sets
        reply = self._case_reply(sets, last)
        if reply is not None:
            after = apply_breaker_raw(sets, last, reply)
            if self.slack(after) <= -1:
                return reply
            reason = "case reply did not restore the deficiency"
        else:
            reason = "no legal swap realizes the selected case"
        return self._resolve_gap(state, last, reason)

    def _resolve_gap(self, state: GameState, last: FixerMove, reason: str) -> BreakerMove:
        event = GapEvent(state.family.sets, last, reason)
        self.gaps.append(event)
        log.warning("proof-gap encountered: %s (move %s)", reason, last)
        if not self.fallback:
            raise ProofGap(reason)
        for reply in legal_breaker_moves(state, last):
            after = SetFamily(apply_breaker_raw(state.family.sets, last, reply))
            try:
                res = exact_solve(after, self.config)
            except SearchTooLarge:
                break
            if res.winner == BREAKER:
                w = deficiency_witness(after, self.config.t, self.config.eta)
                if w is not None:
                    self.witness = w.subset
                    event.resolved = True
                    return reply
        raise ProofGap(f"proof-gap encountered and the exact fallback failed: {reason}")

    __call__ = next_move


def greedy_breaker(state: GameState, last: FixerMove) -> BreakerMove:
    """Breaker for positions with no deficient sub-family: shrink the maximum matching."""
    best, best_size = BreakerMove(), None
    n = len(state.config.pot)
    for reply in legal_breaker_moves(state, last):
        sets = apply_breaker_raw(state.family.sets, last, reply)
        size = len(max_matching(Bipartite(len(sets), n, sets)))
        if best_size is None or size < best_size:
            best, best_size = reply, size
    return best


def breaker_next(engine: BreakerEngine, state: GameState, last: FixerMove) -> BreakerMove:
    return engine.next_move(state, last)


# ---------------------------------------------------------------- exact solver

@dataclass(frozen=True)
class SolveResult:
    winner: str
    first_move: Optional[FixerMove]
    rounds: Optional[int]
    states_explored: int


@dataclass
class _Arena:
    rank: dict
    best: dict
    size: int


@lru_cache(maxsize=256)
def _solve_arena(pot_size: int, sizes: tuple[int, ...], t: int,
                 eta: tuple[int, ...]) -> _Arena:
    """Least fixpoint of the Fixer attractor over every family with these set sizes.

    Set sizes never change during play, so this arena is closed under moves.
    """
    states = list(product(*(combinations(range(pot_size), k) for k in sizes)))
    rank: dict = {}
    for s in states:
        if find_eta_transversal(SetFamily(s), eta) is not None:
            rank[s] = 0
    moves: dict = {}
    for s in states:
        if s in rank:
            continue
        opts = []
        for m in fixer_moves(s, pot_size):
            mid = apply_fixer_raw(s, m)
            succ = {apply_breaker_raw(mid, m, b) for b in breaker_moves(mid, m, t)}
            opts.append((m, tuple(succ)))
        moves[s] = opts
    best: dict = {}
    n = 0
    while True:
        layer = {}
        for s, opts in moves.items():
            if s in rank:
                continue
            for m, succ in opts:
                if all(q in rank for q in succ):
                    layer[s] = m
                    break
        if not layer:
            break
        n += 1
        for s, m in layer.items():
            rank[s] = n
            best[s] = m
    return _Arena(rank, best, len(states))


def arena_size(pot_size: int, sizes: Iterable[int]) -> int:
    total = 1
    for k in sizes:
        total *= comb(pot_size, k)
    return total


def exact_solve(family: SetFamily, config: GameConfig,
                max_states: int = MAX_ARENA_STATES) -> SolveResult:
    """Decide the game from ``family`` by attractor computation.

    Fixer wins iff he can force an eta-transversal in finitely many rounds.
    Results for a whole arena (pot size, set sizes, t, demand) are cached.
    """
    sizes = tuple(len(s) for s in family.sets)
    pot_size = len(config.pot)
    n = arena_size(pot_size, sizes)
    if n > max_states:
        raise SearchTooLarge(f"state space of {n} families exceeds the guard of {max_states}")
    family.check_pot(config.pot)
    arena = _solve_arena(pot_size, sizes, config.t, tuple(config.eta))
    s = family.sets
    if s in arena.rank:
        return SolveResult(FIXER, arena.best.get(s), arena.rank[s], arena.size)
    return SolveResult(BREAKER, None, None, arena.size)


# ---------------------------------------------------------------- verification

@dataclass
class StrategyReport:
    instances: int = 0
    fixer_wins: int = 0
    breaker_wins: int = 0
    mismatches: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    max_rounds: int = 0
    branches: int = 0
    fixer_turns_checked: int = 0
    gaps: int = 0
    unresolved_gaps: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.failures and not self.unresolved_gaps


class StrategyFailure(AssertionError):
    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


def exhaust_fixer(state: GameState, limit: Optional[int] = None) -> tuple[int, int]:
    """Play the Fixer engine against every Breaker reply on every branch.

    Returns ``(worst-case rounds, distinct nodes visited)``.  Raises
    :class:`StrategyFailure` with the offending trace on any violation.
    """
    if limit is None:
        limit = len(state.family) * len(state.config.pot)
    config = state.config
    memo: dict = {}

    def visit(sets, engine: FixerEngine, depth: int, trace: list) -> int:
        key = (sets, engine.digest())
        if key in memo:
            return memo[key]
        if depth > limit:
            raise StrategyFailure(f"no win within {limit} rounds", trace)
        gs = GameState(SetFamily(sets), config)
        eng = engine.copy()
        try:
            move = eng.next_move(gs)
        except (ConditionFails, EngineInvariantError) as e:
            raise StrategyFailure(f"engine error: {e}", trace) from e
        if isinstance(move, DeclareWin):
            if not is_eta_transversal(gs.family, config.eta, move.transversal):
                raise StrategyFailure("declared win without a valid eta-transversal", trace)
            memo[key] = 0
            return 0
        after = apply_fixer(gs, move)
        worst = 0
        for reply in legal_breaker_moves(after):
            nxt = apply_breaker(after, reply)
            try:
                eng.check_locked(nxt.family.sets)
            except EngineInvariantError as e:
                raise StrategyFailure(str(e), trace) from e
            worst = max(worst, 1 + visit(nxt.family.sets, eng, depth + 1,
                                         trace + [(move, reply)]))
        memo[key] = worst
        return worst

    rounds = visit(state.family.sets, FixerEngine(state), 0, [])
    if rounds > limit:
        raise StrategyFailure(f"worst case {rounds} rounds exceeds {limit}")
    return rounds, len(memo)


def _hold_witness(breaker: BreakerEngine, gs: GameState, trace) -> None:
    # independent re-evaluation of the stored witness
    ev = evaluate(gs.family, breaker.witness, gs.config.t, gs.config.eta)
    if not ev.union_size < ev.demand_sum - ev.t_value:
        raise StrategyFailure(f"witness {breaker.witness} no longer deficient", trace)


def breaker_holds(state: GameState, fixer, horizon: int = 50) -> tuple[int, int]:
    """Run the Breaker engine against ``fixer`` and check the invariant every Fixer turn.

    ``fixer`` is a callable ``GameState -> FixerMove | DeclareWin``.  Returns
    ``(Fixer turns checked, proof-gap events)``.
    """
    breaker = BreakerEngine(state)
    gs = state
    trace: list = []
    checked = 0
    for _ in range(horizon):
        _hold_witness(breaker, gs, trace)
        checked += 1
        move = fixer(gs)
        if isinstance(move, DeclareWin):
            break
        gs = apply_fixer(gs, move)
        reply = breaker.next_move(gs, move)
        gs = apply_breaker(gs, reply)
        trace.append((move, reply))
    else:
        _hold_witness(breaker, gs, trace)
        checked += 1
    unresolved = [g for g in breaker.gaps if not g.resolved]
    if unresolved:
        raise StrategyFailure(f"unresolved proof gap: {unresolved[0].reason}", trace)
    return checked, len(breaker.gaps)


def random_fixer(rng: random.Random):
    def agent(state: GameState) -> Union[FixerMove, DeclareWin]:
        moves = legal_fixer_moves(state)
        return rng.choice(moves) if moves else DeclareWin()
    return agent


def verify_strategy_pair(instances: Iterable[GameState], horizon: int = 50,
                         random_games: int = 100, seed: int = 0) -> StrategyReport:
    """Check both engines on each instance against the exact solver's verdict."""
    from .core import condition_holds

    report = StrategyReport()
    rng = random.Random(seed)
    for state in instances:
        report.instances += 1
        holds = condition_holds(state.family, state.t, state.config.eta)
        solved = exact_solve(state.family, state.config)
        if holds != (solved.winner == FIXER):
            report.mismatches.append(state)
            continue
        try:
            if holds:
                report.fixer_wins += 1
                rounds, nodes = exhaust_fixer(state)
                report.max_rounds = max(report.max_rounds, rounds)
                report.branches += nodes
            else:
                report.breaker_wins += 1
                n, gaps = breaker_holds(state, FixerEngine(state, guarded=False), horizon)
                report.fixer_turns_checked += n
                report.gaps += gaps
                for _ in range(random_games):
                    n, gaps = breaker_holds(state, random_fixer(rng), horizon)
                    report.fixer_turns_checked += n
                    report.gaps += gaps
        except StrategyFailure as e:
            report.failures.append((state, str(e), e.trace))
        except ProofGap as e:
            report.unresolved_gaps += 1
            report.failures.append((state, str(e), []))
    return report
