"""Command line front end.

Every invocation prints one JSON document.  Exit status: 0 for a positive
verdict (Fixer wins, coloring produced), 1 for a negative one, 2 for input
or size-guard errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .coloring import (
    Multigraph,
    PreconditionError,
    chromatic_index,
    fan_witness,
    vizing_color,
)
from .core import InstanceError, Pot, SearchTooLarge, SetFamily, deficiency_witness
from .game import FIXER, GameState, play
from .strategy import BreakerEngine, FixerEngine, exact_solve, greedy_breaker

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


class InputError(ValueError):
    pass


def _require(obj: dict, key: str, kind, where: str = ""):
    if not isinstance(obj, dict):
        raise InputError(f"{where or 'document'}: expected a JSON object")
    if key not in obj:
        raise InputError(f"{where}missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise InputError(f"{where}{key!r} has the wrong type")
    return value


def parse_instance(obj: Any, t: Optional[int] = None) -> GameState:
    """Build a game state from an instance document ``{pot, sets, t, eta?}``."""
    pot_names = _require(obj, "pot", list)
    sets = _require(obj, "sets", list)
    if t is None:
        t = _require(obj, "t", int)
    for i, s in enumerate(sets):
        if not isinstance(s, list):
            raise InputError(f"sets[{i}]: expected a list of element names")
        for j, name in enumerate(s):
            if not isinstance(name, str):
                raise InputError(f"sets[{i}][{j}]: element names must be strings")
    eta = obj.get("eta")
    if eta is not None and (not isinstance(eta, list)
                            or not all(isinstance(e, int) and not isinstance(e, bool) for e in eta)):
        raise InputError("'eta' must be a list of integers")
    try:
        pot = Pot(tuple(pot_names))
        for i, s in enumerate(sets):
            for j, name in enumerate(s):
                if name not in pot.names:
                    raise InputError(f"sets[{i}][{j}]: element {name!r} is not in the pot")
        return GameState.new(pot, SetFamily.from_names(pot, sets), t, eta)
    except InstanceError as e:
        raise InputError(str(e)) from None


def dump_instance(state: GameState) -> dict:
    pot = state.config.pot
    out: dict = {"pot": list(pot.names), "sets": state.family.names(pot), "t": state.t}
    if any(e != 1 for e in state.config.eta):
        out["eta"] = list(state.config.eta)
    return out


def parse_graph(obj: Any) -> Multigraph:
    n = _require(obj, "n", int)
    edges = _require(obj, "edges", list)
    simple = obj.get("simple", False)
    if not isinstance(simple, bool):
        raise InputError("'simple' must be a boolean")
    pairs = []
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise InputError(f"edges[{i}]: expected a pair of vertex indices")
        pairs.append((e[0], e[1]))
    try:
        return Multigraph(n, tuple(pairs), simple)
    except InstanceError as e:
        raise InputError(str(e)) from None


def _transversal_json(pot: Pot, tr: Optional[dict]) -> Optional[dict]:
    if tr is None:
        return None
    return {str(i): [pot.name_of(x) for x in reps] for i, reps in sorted(tr.items())}


# -- commands: each returns (document, exit code) --

def cmd_check(state: GameState) -> tuple[Any, int]:
    w = deficiency_witness(state.family, state.t, state.config.eta)
    doc = {"fixer_wins": w is None, "witness": None if w is None else list(w.subset)}
    return doc, OK if w is None else NEGATIVE


def cmd_trace(state: GameState, round_limit: Optional[int] = None) -> tuple[Any, int]:
    if round_limit is None:
        round_limit = max(1, len(state.family) * len(state.config.pot))
    w = deficiency_witness(state.family, state.t, state.config.eta)
    fixer = FixerEngine(state, guarded=w is None)
    breaker = BreakerEngine(state, w.subset) if w is not None else greedy_breaker
    out = play(state, fixer, breaker, round_limit)
    doc = {
        "winner": out.winner,
        "rounds": out.rounds,
        "forfeit": out.forfeit,
        "transversal": _transversal_json(state.config.pot, out.transversal),
        "trace": out.trace,
    }
    return doc, OK if out.winner == FIXER else NEGATIVE


def cmd_oracle(state: GameState) -> tuple[Any, int]:
    res = exact_solve(state.family, state.config)
    pot = state.config.pot
    first = None
    if res.first_move is not None:
        m = res.first_move
        first = {"set": m.set_index, "insert": pot.name_of(m.insert), "remove": pot.name_of(m.remove)}
    doc = {"winner": res.winner, "first_move": first, "rounds": res.rounds,
           "states_explored": res.states_explored}
    return doc, OK if res.winner == FIXER else NEGATIVE


def cmd_color(G: Multigraph) -> tuple[Any, int]:
    c = vizing_color(G)
    return {"k": c.k, "colors": list(c.colors)}, OK


def cmd_chi(G: Multigraph) -> tuple[Any, int]:
    return chromatic_index(G), OK


def cmd_fan(G: Multigraph, x: int, y: int) -> tuple[Any, int]:
    try:
        w = fan_witness(G, x, y)
    except PreconditionError as e:
        return {"x": x, "y": y, "applicable": False, "reason": str(e)}, NEGATIVE
    return {"x": x, "y": y, "applicable": True, "X": list(w.X), "sum": w.total,
            "chi": w.chi}, OK


GAME_COMMANDS = {"check", "trace", "oracle"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fixerbreaker", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("inputs", nargs="+", type=Path, help="JSON input file(s)")
        sp.add_argument("--batch", action="store_true", help="accept several inputs; print a JSON list")
        sp.add_argument("--output", type=Path, help="write the JSON document here instead of stdout")

    for name, help_ in [("check", "decide the winner from the deficiency condition"),
                        ("trace", "referee the two proof engines and dump the rounds"),
                        ("oracle", "solve the game exactly (small instances)")]:
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--t", type=int, help="override the instance's t")
        if name == "trace":
            sp.add_argument("--round-limit", type=int, help="default |S|*|P|")
    for name, help_ in [("color", "Vizing (Delta+1) edge coloring of a simple graph"),
                        ("chi", "exact chromatic index")]:
        common(sub.add_parser(name, help=help_))
    sp = sub.add_parser("fan", help="fan-equation witness for a critical edge x-y")
    common(sp)
    sp.add_argument("x", type=int)
    sp.add_argument("y", type=int)
    return p


def _run_one(args, path: Path) -> tuple[Any, int]:
    try:
        obj = json.loads(path.read_text())
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}: {e.msg}") from None
    if args.command in GAME_COMMANDS:
        state = parse_instance(obj, args.t)
        if args.command == "check":
            return cmd_check(state)
        if args.command == "trace":
            return cmd_trace(state, args.round_limit)
        return cmd_oracle(state)
    G = parse_graph(obj)
    if args.command == "color":
        return cmd_color(G)
    if args.command == "chi":
        return cmd_chi(G)
    return cmd_fan(G, args.x, args.y)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.batch and len(args.inputs) != 1:
        parser.error("several inputs need --batch")
    docs, codes = [], []
    for path in args.inputs:
        try:
            doc, code = _run_one(args, path)
        except (InputError, SearchTooLarge, PreconditionError, InstanceError) as e:
            print(f"{path}: {e}", file=sys.stderr)
            doc, code = {"error": str(e)}, INPUT_ERROR
        docs.append(doc)
        codes.append(code)
    text = json.dumps(docs if args.batch else docs[0], indent=2) + "\n"
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
