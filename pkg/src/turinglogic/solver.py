"""Bounded three-valued game search, iterative-deepening evaluation,
strategy extraction and certificate checking."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional

from . import _deep
from . import syntax as S
from . import tarski
from .game import FORCED, A, E, Game, GameError, Player, Position, Sign, parse_move
from .quantifier import DEFAULT_CAP
from .structure import Assignment, Structure


class BoundedValue(enum.Enum):
    WIN = "Win"
    LOSE = "Lose"
    UNKNOWN = "Unknown"


class VerdictKind(enum.Enum):
    PROVEN_TRUE = "ProvenTrue"
    PROVEN_FALSE = "ProvenFalse"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    """``ProvenTrue``/``ProvenFalse`` carry the least deepening level at which
    the result was established; ``Unknown`` carries the exhausted budget."""

    kind: VerdictKind
    depth: int

    def __str__(self):
        label = "budget" if self.kind is VerdictKind.UNKNOWN else "depth"
        return f"{self.kind.value}({label}={self.depth})"

    @property
    def proven_true(self):
        return self.kind is VerdictKind.PROVEN_TRUE

    @property
    def proven_false(self):
        return self.kind is VerdictKind.PROVEN_FALSE

    @property
    def unknown(self):
        return self.kind is VerdictKind.UNKNOWN


def ProvenTrue(depth):
    return Verdict(VerdictKind.PROVEN_TRUE, depth)


def ProvenFalse(depth):
    return Verdict(VerdictKind.PROVEN_FALSE, depth)


def Unknown(budget):
    return Verdict(VerdictKind.UNKNOWN, budget)


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    memo_hits: int = 0

    def __str__(self):
        return (f"nodes={self.nodes} max_depth={self.max_depth} "
                f"memo_hits={self.memo_hits} elapsed={self.elapsed:.3f}s")


class Solver:
    """Three-valued AND-OR search over one game.

    ``value(p, r)`` is the player who can force a win within ``r`` further
    rounds from ``p``, or ``None``.  The memo stores wins with the smallest
    depth at which they were found (valid at every larger depth) and
    unknowns with the largest depth searched (valid at every smaller depth).
    ``static`` enables forced-win shortcuts through first-order subformulas;
    they only ever return wins that the full search would also find.
    """

    def __init__(self, game: Game, memo: bool = True, static: bool = True):
        self.game = game
        self.memo = {} if memo else None
        self.static = static
        self.stats = SearchStats()
        self._top = 0

    def value(self, p: Position, r: int) -> Optional[Player]:
        self._top = r
        return _deep.call(self._value, p, r, depth_hint=r)

    def _value(self, p: Position, r: int) -> Optional[Player]:
        game, stats = self.game, self.stats
        stats.nodes += 1
        reached = self._top - r
        if reached > stats.max_depth:
            stats.max_depth = reached
        w = game.terminal_status(p)
        if w is not None:
            return w
        if r <= 0:
            return None
        memo = self.memo
        if memo is not None:
            key = game.key(p)
            hit = memo.get(key)
            if hit is not None:
                val, d = hit
                if (val is None and d >= r) or (val is not None and d <= r):
                    stats.memo_hits += 1
                    return val
        result = None
        shortcut = game.static_winner(p, r) if self.static else None
        if shortcut is not None:
            result = shortcut[0]
        else:
            mover = game.mover(p)
            children = [c for _, c in game.successors(p)]
            if mover is None:
                result = self._value(children[0], r - 1)
            else:
                if any(game.terminal_status(c) is mover for c in children):
                    result = mover
                else:
                    result = mover.opponent
                    for c in children:
                        v = self._value(c, r - 1)
                        if v is mover:
                            result = mover
                            break
                        if v is None:
                            result = None
        if memo is not None:
            memo[key] = (result, r)
        return result


def _as_game(root_or_game, quantifiers=None, cap=DEFAULT_CAP) -> Game:
    return root_or_game if isinstance(root_or_game, Game) else Game(root_or_game, quantifiers, cap)


def bounded_value(p: Position, root, who: Player, d: int, memo: bool = True, static: bool = False,
                  solver: Solver = None) -> BoundedValue:
    """Win/Lose/Unknown for ``who`` within ``d`` rounds from ``p``."""
    if d < 0:
        raise ValueError("depth must be nonnegative")
    solver = solver or Solver(_as_game(root), memo=memo, static=static)
    v = solver.value(p, d)
    if v is None:
        return BoundedValue.UNKNOWN
    return BoundedValue.WIN if v is who else BoundedValue.LOSE


def deepening_schedule(budget: int, step: int = 1, geometric: bool = False) -> list:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if step < 1:
        raise ValueError("step must be at least 1")
    levels = []
    d = step
    while d < budget:
        levels.append(d)
        d = d * 2 if geometric else d + step
    levels.append(budget)
    return levels


def least_depth(solver: Solver, start: Position, budget: int, step: int = 1, geometric: bool = False):
    """``(winner, least d)`` or ``(None, budget)``.

    Levels follow the deepening schedule; when a level skips depths, the
    least one is recovered by bisection, which is exact because wins are
    monotone in the depth.
    """
    prev = 0
    for d in deepening_schedule(budget, step, geometric):
        v = solver.value(start, d)
        if v is not None:
            lo, hi = prev + 1, d
            while lo < hi:
                mid = (lo + hi) // 2
                if solver.value(start, mid) is v:
                    hi = mid
                else:
                    lo = mid + 1
            return v, lo
        prev = d
    return None, budget


def evaluate(structure: Structure, assignment: Assignment, formula, sign: Sign = Sign.PLUS,
             budget: int = 10000, step: int = 1, geometric: bool = False, memo: bool = True,
             static: bool = True, quantifiers: dict = None, cap: int = DEFAULT_CAP, game: Game = None):
    """Three-valued evaluation by iterative deepening.

    ``ProvenTrue`` means ∃ has a strategy winning ``G(structure, assignment,
    sign, formula)`` within the reported number of rounds, ``ProvenFalse``
    the same for ∀.  Returns ``(verdict, stats)``.
    """
    game = game or Game(formula, quantifiers, cap)
    start = game.initial_position(structure, assignment or Assignment(), sign)
    solver = Solver(game, memo=memo, static=static)
    t0 = time.perf_counter()
    winner, d = least_depth(solver, start, budget, step, geometric)
    solver.stats.elapsed = time.perf_counter() - t0
    if winner is E:
        return ProvenTrue(d), solver.stats
    if winner is A:
        return ProvenFalse(d), solver.stats
    return Unknown(budget), solver.stats


def eval_fo_tarski(structure: Structure, assignment: Assignment, formula) -> bool:
    """Tarski truth for the first-order fragment (no loops, no mutation, no
    generalized quantifiers)."""
    for node in S.iter_nodes(formula):
        if isinstance(node, S.Quant):
            raise tarski.NotFirstOrder("generalized quantifiers are outside the first-order fragment")
    return tarski.holds(structure, assignment or Assignment(), formula)


# -- strategies ------------------------------------------------------------------


@dataclass
class Strategy:
    """Positional strategy: canonical position text -> move."""

    owner: Player
    moves: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.moves)

    def choose(self, p: Position):
        return self.moves.get(p.canonical())

    def to_text(self) -> str:
        lines = [f"owner {self.owner.name}"]
        lines += [f"{k} => {m}" for k, m in sorted(self.moves.items(), key=lambda kv: kv[0])]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Strategy":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("owner "):
            raise ValueError("strategy text must start with 'owner EXISTS|FORALL'")
        owner = Player[lines[0].split()[1]]
        moves = {}
        for ln in lines[1:]:
            key, sep, move = ln.rpartition(" => ")
            if not sep:
                raise ValueError(f"bad strategy line {ln!r}")
            moves[key] = parse_move(move)
        return cls(owner, moves)


def extract_strategy(start: Position, root, who: Player, d: int, solver: Solver = None,
                     static: bool = True) -> Optional[Strategy]:
    """A positional strategy for ``who`` winning every play from ``start``
    within ``d`` rounds, or ``None`` if ``who`` cannot force that."""
    solver = solver or Solver(_as_game(root), static=static)
    return _deep.call(_extract, solver, start, who, d, depth_hint=d)


def _extract(solver: Solver, start: Position, who: Player, d: int):
    game = solver.game
    if solver.value(start, d) is not who:
        return None
    solver._top = d
    chosen = {}
    seen = set()
    stack = [(start, d)]
    while stack:
        p, r = stack.pop()
        if (p, r) in seen:
            continue
        seen.add((p, r))
        if game.terminal_status(p) is not None:
            continue
        mover = game.mover(p)
        succ = game.successors(p)
        if mover is None:
            stack.append((succ[0][1], r - 1))
        elif mover is who:
            key = p.canonical()
            prev = chosen.get(key)
            if prev is not None and prev[1] <= r:
                continue
            for m, c in succ:
                if solver._value(c, r - 1) is who:
                    break
            else:  # pragma: no cover - contradicts the value computed above
                raise GameError("strategy extraction lost its winning move")
            chosen[key] = (m, r)
            stack.append((c, r - 1))
        else:
            stack.extend((c, r - 1) for _, c in succ)
    return Strategy(who, {k: m for k, (m, _) in chosen.items()})


@dataclass(frozen=True)
class Verified:
    bound: int

    def __str__(self):
        return f"Verified(bound={self.bound})"


@dataclass(frozen=True)
class Counterexample:
    play: tuple  # ((canonical position, move text or None), ...)
    reason: str

    def __str__(self):
        return f"Counterexample({self.reason}, {len(self.play)} positions)"

    def transcript(self) -> str:
        return "\n".join(f"{pos}  ->  {mv}" if mv else pos for pos, mv in self.play)


def verify_strategy(strategy: Strategy, start: Position, root, max_rounds: int):
    """Replay ``strategy`` against every opponent choice.

    Returns :class:`Verified` with the longest play length when every play
    ends within ``max_rounds`` in a win for the owner, otherwise a
    :class:`Counterexample` holding one offending play.
    """
    game = _as_game(root)
    owner = strategy.owner
    parents = []  # (position, parent index, move)
    seen = set()
    stack = [(start, 0, -1, None)]
    longest = 0

    def play_to(idx, last_move=None):
        out = []
        while idx >= 0:
            pos, parent, move = parents[idx]
            out.append((pos.canonical(), str(move) if move is not None else None))
            idx = parent
        out.reverse()
        # moves are stored on the child; shift them to the position they leave
        shifted = [(out[i][0], out[i + 1][1]) for i in range(len(out) - 1)]
        shifted.append((out[-1][0], str(last_move) if last_move is not None else None))
        return tuple(shifted)

    while stack:
        p, rounds, parent, move = stack.pop()
        if (p, rounds) in seen:
            continue
        seen.add((p, rounds))
        idx = len(parents)
        parents.append((p, parent, move))
        w = game.terminal_status(p)
        if w is owner:
            longest = max(longest, rounds)
            continue
        if w is not None:
            return Counterexample(play_to(idx), f"{w} wins")
        if rounds >= max_rounds:
            return Counterexample(play_to(idx), f"play exceeds {max_rounds} rounds")
        mover = game.mover(p)
        if mover is owner:
            m = strategy.choose(p)
            if m is None:
                return Counterexample(play_to(idx), "strategy undefined")
            if m not in game.legal_moves(p):
                return Counterexample(play_to(idx, m), f"illegal move {m}")
            stack.append((game.apply_move(p, m), rounds + 1, idx, m))
        else:
            for m, c in reversed(game.successors(p)):
                stack.append((c, rounds + 1, idx, m))
    return Verified(longest)


def principal_line(game: Game, start: Position, d: int, solver: Solver = None, limit: int = 5000) -> list:
    """One play from ``start`` consistent with the value at depth ``d``:
    the winner keeps winning moves, otherwise moves that keep the value.

    Returns ``[(canonical position, move text or None)]``, one transition
    per entry.
    """
    solver = solver or Solver(game)

    def run():
        line = []
        p, r = start, d
        target = solver.value(p, r)
        while len(line) < limit:
            if game.terminal_status(p) is not None or r <= 0:
                line.append((p.canonical(), None))
                break
            succ = game.successors(p)
            pick = succ[0]
            if game.mover(p) is not None:
                for m, c in succ:
                    if solver._value(c, r - 1) is target:
                        pick = (m, c)
                        break
            line.append((p.canonical(), str(pick[0])))
            p, r = pick[1], r - 1
        return line

    return _deep.call(run, depth_hint=d)


def format_line(line) -> str:
    return "\n".join(f"{pos}  ->  {mv}" if mv else pos for pos, mv in line)


__all__ = [
    "BoundedValue", "Counterexample", "SearchStats", "Solver", "Strategy", "Verdict", "VerdictKind",
    "Verified", "ProvenFalse", "ProvenTrue", "Unknown", "bounded_value", "deepening_schedule",
    "eval_fo_tarski", "evaluate", "extract_strategy", "format_line", "least_depth", "principal_line",
    "verify_strategy", "FORCED",
]
