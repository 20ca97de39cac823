"""The semantic game as an explicit state machine.

A :class:`Game` fixes a root formula and precomputes per-node data (jump
targets, variable liveness, static forced-win targets).  Positions are
immutable values; every operation here is a pure function of its inputs.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Union

from . import syntax as S
from . import tarski
from .quantifier import DEFAULT_CAP, QuantifierDef, builtin_quantifiers, q_interpretation
from .structure import Assignment, Structure


class GameError(RuntimeError):
    """Illegal moves, unassigned variables and other runtime faults."""


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def flip(self) -> "Sign":
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Sign":
        if text in ("+", "plus"):
            return cls.PLUS
        if text in ("-", "minus", "−"):
            return cls.MINUS
        raise ValueError(f"sign must be '+' or '-', got {text!r}")


class Player(enum.Enum):
    EXISTS = "∃"
    FORALL = "∀"

    @property
    def opponent(self) -> "Player":
        return Player.FORALL if self is Player.EXISTS else Player.EXISTS

    def __str__(self):
        return self.value


E, A = Player.EXISTS, Player.FORALL


# -- moves ---------------------------------------------------------------------


@dataclass(frozen=True)
class PickConjunct:
    side: int  # 0 left, 1 right

    def __str__(self):
        return "left" if self.side == 0 else "right"


@dataclass(frozen=True)
class PickElement:
    element: int

    def __str__(self):
        return f"element {self.element}"


@dataclass(frozen=True)
class PickTuple:
    elements: tuple

    def __str__(self):
        return "tuple (" + ",".join(map(str, self.elements)) + ")"


@dataclass(frozen=True)
class JumpTo:
    path: tuple

    def __str__(self):
        return "jump " + _path_str(self.path)


@dataclass(frozen=True)
class PickWitnessSet:
    members: frozenset

    def __str__(self):
        return "set {" + ",".join(map(str, sorted(self.members))) + "}"


@dataclass(frozen=True)
class PickPoint:
    element: int
    inside: bool

    def __str__(self):
        return f"point {self.element} {'in' if self.inside else 'out'}"


@dataclass(frozen=True)
class Forced:
    def __str__(self):
        return "forced"


FORCED = Forced()
Move = Union[PickConjunct, PickElement, PickTuple, JumpTo, PickWitnessSet, PickPoint, Forced]


def _path_str(path) -> str:
    return "/" + ".".join(map(str, path))


def parse_move(text: str) -> Move:
    """Inverse of ``str(move)``; used by certificate files."""
    word, _, rest = text.strip().partition(" ")
    rest = rest.strip()
    if word in ("left", "right"):
        return PickConjunct(0 if word == "left" else 1)
    if word == "forced":
        return FORCED
    if word == "element":
        return PickElement(int(rest))
    if word == "tuple":
        inner = rest.strip("()")
        return PickTuple(tuple(int(v) for v in inner.split(",") if v))
    if word == "jump":
        body = rest[1:]
        return JumpTo(tuple(int(v) for v in body.split(".") if v))
    if word == "set":
        inner = rest.strip("{}")
        return PickWitnessSet(frozenset(int(v) for v in inner.split(",") if v))
    if word == "point":
        e, side = rest.split()
        return PickPoint(int(e), side == "in")
    raise ValueError(f"unrecognized move {text!r}")


# -- positions -----------------------------------------------------------------


@dataclass(frozen=True)
class Position:
    """``(structure, assignment, sign, at)``; ``pending`` holds the witness
    set during the second stage of a generalized-quantifier move."""

    structure: Structure
    assignment: Assignment
    sign: Sign
    at: tuple
    pending: Optional[frozenset] = None

    def canonical(self) -> str:
        text = f"{self.structure.canonical()} | {self.assignment.canonical()} | {self.sign.value} | {_path_str(self.at)}"
        if self.pending is not None:
            text += " | S={" + ",".join(map(str, sorted(self.pending))) + "}"
        return text


# -- static analysis helpers ---------------------------------------------------


def _is_fo(node) -> bool:
    return all(isinstance(n, (S.Rel, S.RelVarAtom, S.Eq, S.Not, S.And, S.Exists)) for n in S.iter_nodes(node))


@dataclass(frozen=True)
class _Target:
    path: tuple
    node: object  # FO formula, or None for a pathological loop atom
    cost: int
    parity: int
    forcer: Optional[Player]  # relative to sign + at the origin


class Game:
    """The game ``G(·, ·, ·, root)`` for a fixed root formula.

    ``quantifiers`` maps names to :class:`QuantifierDef` (builtins by
    default); ``cap`` bounds the domain size at which witness sets are
    enumerated.
    """

    STATIC_MAX_SPINE = 64

    def __init__(self, root: S.Formula, quantifiers: dict = None, cap: int = DEFAULT_CAP):
        if not S.is_core(root):
            root = S.desugar(root)
        self.root = root
        self.quantifiers = builtin_quantifiers() if quantifiers is None else dict(quantifiers)
        self.cap = cap
        self.nodes = {}
        self.labeled = {}
        for path, node in S.subformulae(root):
            self.nodes[path] = node
            if isinstance(node, S.Loop):
                self.labeled.setdefault(node.label, []).append(path)
            if isinstance(node, S.Quant) and node.name not in self.quantifiers:
                raise GameError(f"unknown quantifier {node.name}")
        self._symbols = {}
        for node in self.nodes.values():
            target = getattr(node, "symbol", None) or getattr(node, "target", None)
            if isinstance(target, S.RelSym):
                self._symbols[target.name] = target.arity
        self._live = self._liveness()
        self._fo_cache = {}
        self._targets = {}

    # -- basic access --------------------------------------------------------

    def node(self, p_or_path) -> S.Formula:
        path = p_or_path.at if isinstance(p_or_path, Position) else p_or_path
        try:
            return self.nodes[path]
        except KeyError:
            raise GameError(f"no subformula at {_path_str(path)}") from None

    def initial_position(self, structure: Structure, assignment: Assignment = None, sign: Sign = Sign.PLUS) -> Position:
        assignment = assignment if assignment is not None else Assignment()
        for name, k in self._symbols.items():
            if structure.arities.get(name) != k:
                raise GameError(f"structure does not interpret {name}/{k}")
        missing = sorted(
            v for v in S.free_variables(self.root) if isinstance(v, str) and v not in assignment.individual
        )
        if missing:
            raise GameError("unassigned free variable(s): " + ", ".join(missing))
        for x, a in assignment.individual.items():
            if a not in structure.domain:
                raise GameError(f"{x} is assigned {a}, which is not in the domain")
        return Position(structure, assignment, sign, ())

    # -- movers and moves ------------------------------------------------------

    def mover(self, p: Position) -> Optional[Player]:
        """The player to move, or ``None`` for forced positions."""
        node = self.node(p)
        plus = p.sign is Sign.PLUS
        if isinstance(node, S.And):
            return A if plus else E
        if isinstance(node, (S.Exists, S.Insert, S.Delete, S.LoopAtom)):
            return E if plus else A
        if isinstance(node, S.Quant):
            chooser = E if plus else A
            return chooser if p.pending is None else chooser.opponent
        if isinstance(node, (S.Not, S.New, S.Loop)):
            return None
        raise GameError(f"{type(node).__name__} positions have no mover")

    def legal_moves(self, p: Position) -> list:
        node = self.node(p)
        if isinstance(node, S.And):
            return [PickConjunct(0), PickConjunct(1)]
        if isinstance(node, S.Exists):
            return [PickElement(a) for a in sorted(p.structure.domain)]
        if isinstance(node, (S.Insert, S.Delete)):
            elems = sorted(p.structure.domain)
            return [PickTuple(t) for t in itertools.product(elems, repeat=len(node.args))]
        if isinstance(node, S.LoopAtom):
            return [JumpTo(path) for path in self.labeled.get(node.label, ())]
        if isinstance(node, (S.Not, S.New, S.Loop)):
            return [FORCED]
        if isinstance(node, S.Quant):
            if p.pending is None:
                q = self.quantifiers[node.name]
                return [PickWitnessSet(s) for s in q_interpretation(q, p.structure, self.cap)]
            inside = [PickPoint(a, True) for a in sorted(p.pending)]
            return inside + [PickPoint(a, False) for a in sorted(p.structure.domain - p.pending)]
        return []

    def apply_move(self, p: Position, m: Move) -> Position:
        node = self.node(p)
        s, g, sign, at = p.structure, p.assignment, p.sign, p.at
        if isinstance(node, S.Not) and m == FORCED:
            return Position(s, g, sign.flip(), at + (0,))
        if isinstance(node, S.Loop) and m == FORCED:
            return Position(s, g, sign, at + (0,))
        if isinstance(node, S.New) and m == FORCED:
            s2, b = s.add_fresh_point()
            return Position(s2, g.update({node.var: b}), sign, at + (0,))
        if isinstance(node, S.And) and isinstance(m, PickConjunct) and m.side in (0, 1):
            return Position(s, g, sign, at + (m.side,))
        if isinstance(node, S.Exists) and isinstance(m, PickElement):
            if m.element not in s.domain:
                raise GameError(f"element {m.element} is not in the domain")
            return Position(s, g.update({node.var: m.element}), sign, at + (0,))
        if isinstance(node, (S.Insert, S.Delete)) and isinstance(m, PickTuple):
            t = m.elements
            if len(t) != len(node.args) or any(a not in s.domain for a in t):
                raise GameError(f"illegal tuple {t}")
            binding = dict(zip(node.args, t))  # a repeated variable keeps its last value
            target = node.target
            if isinstance(target, S.RelSym):
                s2 = s.insert_tuple(target.name, t) if isinstance(node, S.Insert) else s.delete_tuple(target.name, t)
                return Position(s2, g.update(binding), sign, at + (0,))
            current = g.relation(target.name)
            new = current | {t} if isinstance(node, S.Insert) else current - {t}
            return Position(s, g.update(binding, {target.name: new}), sign, at + (0,))
        if isinstance(node, S.LoopAtom) and isinstance(m, JumpTo):
            if m.path not in self.labeled.get(node.label, ()):
                raise GameError(f"{_path_str(m.path)} is not a {node.label}-labeled subformula")
            return Position(s, g, sign, m.path)
        if isinstance(node, S.Quant):
            if p.pending is None and isinstance(m, PickWitnessSet):
                q = self.quantifiers[node.name]
                if not m.members <= s.domain or not q.accepts(s.size, len(m.members)):
                    raise GameError(f"{m} is not in the interpretation of {node.name}")
                return Position(s, g, sign, at, m.members)
            if p.pending is not None and isinstance(m, PickPoint):
                if m.element not in s.domain or (m.element in p.pending) != m.inside:
                    raise GameError(f"illegal point choice {m}")
                new_sign = sign if m.inside else sign.flip()
                return Position(s, g.update({node.var: m.element}), new_sign, at + (0,))
        raise GameError(f"move {m} is illegal at a {type(node).__name__} position")

    def successors(self, p: Position) -> list:
        """``[(move, position)]`` for all legal moves."""
        return [(m, self.apply_move(p, m)) for m in self.legal_moves(p)]

    # -- terminal positions ----------------------------------------------------

    def atomic_eval(self, s: Structure, g: Assignment, atom) -> bool:
        try:
            return tarski.atom_holds(s, g, atom)
        except (tarski.UnassignedVariable, tarski.NotFirstOrder) as err:
            raise GameError(str(err)) from None

    def terminal_status(self, p: Position) -> Optional[Player]:
        """The winner if ``p`` is terminal, otherwise ``None``."""
        node = self.node(p)
        if isinstance(node, S.ATOMS):
            truth = self.atomic_eval(p.structure, p.assignment, node)
            return E if truth == (p.sign is Sign.PLUS) else A
        if isinstance(node, S.LoopAtom) and not self.labeled.get(node.label):
            return E if p.sign is Sign.MINUS else A
        if isinstance(node, S.Quant) and p.pending is None:
            q = self.quantifiers[node.name]
            if not q.nonempty_on(p.structure.size):
                return A if p.sign is Sign.PLUS else E
        return None

    # -- keys ------------------------------------------------------------------

    def canonical(self, p: Position) -> str:
        return p.canonical()

    def key(self, p: Position) -> tuple:
        """Memo key: the position with the assignment projected onto the
        variables that can still be read from ``p.at``."""
        ind, rel = self._live[p.at]
        gi = p.assignment.individual
        return (
            p.at,
            p.sign,
            p.pending,
            p.structure,
            tuple(gi.get(v) for v in ind),
            tuple(p.assignment.relation(x) for x in rel),
        )

    def _liveness(self):
        uses, defs, succs = {}, {}, {}
        for path, node in self.nodes.items():
            ind_use, rel_use, ind_def, rel_def = set(), set(), set(), set()
            if isinstance(node, S.Rel):
                ind_use.update(node.args)
            elif isinstance(node, S.RelVarAtom):
                ind_use.update(node.args)
                rel_use.add(node.var.name)
            elif isinstance(node, S.Eq):
                ind_use.update((node.left, node.right))
            elif isinstance(node, (S.Exists, S.New, S.Quant)):
                ind_def.add(node.var)
            elif isinstance(node, (S.Insert, S.Delete)):
                ind_def.update(node.args)
                if isinstance(node.target, S.RelVar):
                    rel_use.add(node.target.name)
            uses[path] = (ind_use, rel_use)
            defs[path] = (ind_def, rel_def)
            if isinstance(node, S.LoopAtom):
                succs[path] = list(self.labeled.get(node.label, ()))
            else:
                succs[path] = [path + (i,) for i in range(len(node.children))]
        live = {path: (set(u[0]), set(u[1])) for path, u in uses.items()}
        order = sorted(self.nodes, key=len, reverse=True)
        changed = True
        while changed:
            changed = False
            for path in order:
                li, lr = live[path]
                di, dr = defs[path]
                for c in succs[path]:
                    ci, cr = live[c]
                    new_i = ci - di - li
                    new_r = cr - dr - lr
                    if new_i or new_r:
                        li |= new_i
                        lr |= new_r
                        changed = True
        return {path: (tuple(sorted(i)), tuple(sorted(r))) for path, (i, r) in live.items()}

    # -- static forced wins ----------------------------------------------------

    def _fo_info(self, path):
        info = self._fo_cache.get(path)
        if info is None:
            node = self.nodes[path]
            if _is_fo(node):
                fv = S.free_variables(node)
                rels = set()
                quantifies = False
                for n in S.iter_nodes(node):
                    if isinstance(n, S.Rel):
                        rels.add(n.symbol.name)
                    elif isinstance(n, S.RelVarAtom):
                        rels.add("$" + n.var.name)
                    elif isinstance(n, S.Exists):
                        quantifies = True
                info = (
                    True,
                    frozenset(v for v in fv if isinstance(v, str)),
                    frozenset(rels),
                    quantifies,
                    S.depth(node),
                )
            else:
                info = (False,)
            self._fo_cache[path] = info
        return info

    def static_targets(self, at: tuple) -> list:
        """Forced-win targets reachable from ``at`` along an uncontested spine.

        A target is an FO subformula (or a pathological loop atom) that one
        player can force the play into without the other player's choices
        mattering for its truth value.  Sorted by round cost.
        """
        cached = self._targets.get(at)
        if cached is not None:
            return cached
        out = []
        stack = [(at, 0, 0, None, frozenset(), frozenset(), False)]
        while stack:
            path, length, parity, forcer, rebound, modified, grew = stack.pop()
            node = self.nodes[path]
            info = self._fo_info(path)
            if info[0]:
                _, fv, rels, quantifies, height = info
                if not (fv & rebound) and not (rels & modified) and not (grew and quantifies):
                    out.append(_Target(path, node, length + height, parity, forcer))
                    continue
            if length >= self.STATIC_MAX_SPINE:
                continue
            step = length + 1
            if isinstance(node, S.Not):
                stack.append((path + (0,), step, parity ^ 1, forcer, rebound, modified, grew))
            elif isinstance(node, S.And):
                chooser = A if parity == 0 else E
                if forcer is not None and forcer is not chooser:
                    continue
                for i in (1, 0):
                    stack.append((path + (i,), step, parity, chooser, rebound, modified, grew))
            elif isinstance(node, S.Exists):
                stack.append((path + (0,), step, parity, forcer, rebound | {node.var}, modified, grew))
            elif isinstance(node, S.New):
                stack.append((path + (0,), step, parity, forcer, rebound | {node.var}, modified, True))
            elif isinstance(node, (S.Insert, S.Delete)):
                rb = rebound | set(node.args)
                target = node.target
                name = "$" + target.name if isinstance(target, S.RelVar) else target.name
                stack.append((path + (0,), step, parity, forcer, rb, modified | {name}, grew))
            elif isinstance(node, S.Loop):
                stack.append((path + (0,), step, parity, forcer, rebound, modified, grew))
            elif isinstance(node, S.LoopAtom) and not self.labeled.get(node.label):
                out.append(_Target(path, None, length, parity, forcer))
        out.sort(key=lambda t: t.cost)
        self._targets[at] = out
        return out

    def static_winner(self, p: Position, rounds: int):
        """``(winner, cost)`` if a forced win within ``rounds`` is certain."""
        if p.pending is not None:
            return None
        for t in self.static_targets(p.at):
            if t.cost > rounds:
                break
            sign_plus = (p.sign is Sign.PLUS) != bool(t.parity)
            if t.node is None:
                winner = A if sign_plus else E
            else:
                try:
                    truth = tarski.holds(p.structure, p.assignment, t.node)
                except (tarski.UnassignedVariable, tarski.NotFirstOrder):
                    continue
                winner = E if truth == sign_plus else A
            forcer = t.forcer
            if forcer is not None and p.sign is Sign.MINUS:
                forcer = forcer.opponent
            if forcer is None or forcer is winner:
                return winner, t.cost
        return None


def duality_mirror(p: Position) -> Position:
    """The same position with the sign flipped (players' roles swapped)."""
    return Position(p.structure, p.assignment, p.sign.flip(), p.at, p.pending)
