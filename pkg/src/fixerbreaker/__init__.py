"""Fixer-versus-Breaker transversal games on set systems, with edge-coloring applications."""

from .core import (
    DeficiencyWitness,
    Element,
    InstanceError,
    Pot,
    SearchTooLarge,
    SetFamily,
    condition_holds,
    deficiency_witness,
    degree,
    t_value,
)
from .game import (
    BreakerMove,
    DeclareWin,
    Direction,
    FixerMove,
    GameConfig,
    GameState,
    IllegalMove,
    Outcome,
    Swap,
    apply_breaker,
    apply_fixer,
    is_won,
    legal_breaker_moves,
    legal_fixer_moves,
    play,
)
from .matching import (
    Bipartite,
    SpannerSubgraph,
    find_eta_transversal,
    find_transversal,
    max_matching,
    spanner,
)
from .strategy import (
    BreakerEngine,
    ConditionFails,
    FixerEngine,
    ProofGap,
    SolveResult,
    breaker_next,
    exact_solve,
    fixer_next,
    verify_strategy_pair,
)

__version__ = "0.1.0"
