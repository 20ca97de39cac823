"""Deterministic one-tape Turing machines: simulation, compilation into a
looping sentence over word models, certificate emission, and classification
of structures through their bit encodings.

Tape conventions shared by :func:`simulate` and :func:`compile_tm`: cell 0
holds the blank boundary (the word model's letterless minimal element), the
input occupies cells ``1..|w|``, the head starts on cell 0, and a left move
on cell 0 leaves the head in place.  The blank is the absence of every
letter predicate and tape relation variable.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional

from . import syntax as S
from .game import E, Game, Sign
from .solver import Solver, Strategy, Verified, extract_strategy, verify_strategy
from .structure import SUCC, WordSpec, encode, letter_predicate, word_model, word_vocabulary


class TMError(ValueError):
    pass


_SYMBOL = re.compile(r"[A-Za-z0-9_]+")


class TuringMachine:
    """Transitions map ``(state, symbol)`` to ``(state, symbol, 'L'|'R')``;
    the blank is a symbol outside both alphabets."""

    def __init__(self, states, start, accept, reject, input_alphabet, tape_alphabet, blank, transitions):
        self.states = tuple(dict.fromkeys(states))
        self.start = start
        self.accept = frozenset(accept)
        self.reject = frozenset(reject)
        self.input_alphabet = tuple(dict.fromkeys(input_alphabet))
        self.tape_alphabet = tuple(dict.fromkeys(tape_alphabet))
        self.blank = blank
        self.transitions = dict(transitions)
        self._validate()

    def _validate(self):
        states = set(self.states)
        if not states:
            raise TMError("a machine needs at least one state")
        if self.start not in states:
            raise TMError(f"start state {self.start} is not declared")
        for q in self.accept | self.reject:
            if q not in states:
                raise TMError(f"final state {q} is not declared")
        both = self.accept & self.reject
        if both:
            raise TMError(f"states {sorted(both)} are both accepting and rejecting")
        if not self.input_alphabet:
            raise TMError("the input alphabet must be nonempty")
        overlap = set(self.input_alphabet) & set(self.tape_alphabet)
        if overlap:
            raise TMError(f"input and tape alphabets overlap on {sorted(overlap)}")
        if self.blank in self.input_alphabet or self.blank in self.tape_alphabet:
            raise TMError("the blank must not belong to either alphabet")
        for sym in self.symbols:
            if not _SYMBOL.fullmatch(sym):
                raise TMError(f"symbol {sym!r} must be alphanumeric")
        symbols = set(self.symbols)
        for (q, s), (q2, t, d) in self.transitions.items():
            if q not in states:
                raise TMError(f"transition from undeclared state {q}")
            if q2 not in states:
                raise TMError(f"transition ({q}, {s}) targets undeclared state {q2}")
            if s not in symbols or t not in symbols:
                raise TMError(f"transition ({q}, {s}) uses an unknown symbol")
            if d not in ("L", "R"):
                raise TMError(f"transition ({q}, {s}) has direction {d!r}")
            if q in self.accept or q in self.reject:
                raise TMError(f"final state {q} has an outgoing transition")

    @property
    def symbols(self) -> tuple:
        return self.input_alphabet + self.tape_alphabet + (self.blank,)

    def is_final(self, q) -> bool:
        return q in self.accept or q in self.reject

    def __eq__(self, other):
        if not isinstance(other, TuringMachine):
            return NotImplemented
        return (self.states, self.start, self.accept, self.reject, self.input_alphabet,
                self.tape_alphabet, self.blank, self.transitions) == (
            other.states, other.start, other.accept, other.reject, other.input_alphabet,
            other.tape_alphabet, other.blank, other.transitions)

    def __hash__(self):
        return hash((self.states, self.start, tuple(sorted(self.transitions.items()))))

    def to_text(self) -> str:
        lines = [
            "states " + " ".join(self.states),
            f"start {self.start}",
            "accept " + " ".join(sorted(self.accept)),
            "reject " + " ".join(sorted(self.reject)),
            "input_alphabet " + " ".join(self.input_alphabet),
            "tape_alphabet " + " ".join(self.tape_alphabet),
            f"blank {self.blank}",
        ]
        for (q, s), (q2, t, d) in self.transitions.items():
            lines.append(f"trans {q},{s} -> {q2},{t},{d}")
        return "\n".join(ln.rstrip() for ln in lines) + "\n"


# -- simulation ----------------------------------------------------------------


class Outcome(enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    EXHAUSTED = "ExhaustedBudget"


@dataclass(frozen=True)
class RunResult:
    outcome: Outcome
    steps: int
    state: str
    head: int
    tape: tuple  # cells 0..n, blanks written as the machine's blank symbol

    def __str__(self):
        return f"{self.outcome.value}({self.steps})"


def as_word(tm: TuringMachine, w) -> tuple:
    word = tuple(w)
    for c in word:
        if c not in tm.input_alphabet:
            raise TMError(f"symbol {c!r} is not in the input alphabet")
    return word


def simulate(tm: TuringMachine, w, budget: int) -> RunResult:
    """Run ``tm`` on ``w`` for at most ``budget`` transitions."""
    word = as_word(tm, w)
    tape = {i + 1: c for i, c in enumerate(word)}
    q, head, steps = tm.start, 0, 0

    def result(outcome):
        n = max([head] + list(tape)) if tape else head
        cells = tuple(tape.get(i, tm.blank) for i in range(n + 1))
        return RunResult(outcome, steps, q, head, cells)

    while True:
        if q in tm.accept:
            return result(Outcome.ACCEPT)
        if q in tm.reject:
            return result(Outcome.REJECT)
        if steps >= budget:
            return result(Outcome.EXHAUSTED)
        sym = tape.get(head, tm.blank)
        move = tm.transitions.get((q, sym))
        if move is None:
            return result(Outcome.REJECT)
        q, t, d = move
        if t == tm.blank:
            tape.pop(head, None)
        else:
            tape[head] = t
        head = head + 1 if d == "R" else max(head - 1, 0)
        steps += 1


# -- compilation -----------------------------------------------------------------

Y_HEAD = "y_head"
Y_HEAD1 = "y_head1"
Y_HEAD2 = "y_head2"
X_HEAD1 = "x_head1"
X_HEAD2 = "x_head2"
Y_STATE = "y_state"
LOOP_LABEL = 1

# compiler-internal bound variables
_DEL, _INS, _FRESH, _SU, _SV, _PROBE, _BIND = (f"_g{i}" for i in range(7))


def state_variable(tm: TuringMachine, q) -> str:
    return f"x_q{tm.states.index(q)}"


def tape_variable(symbol: str) -> S.RelVar:
    return S.RelVar("X_" + symbol, 1)


def _succ(a, b):
    return S.Rel(S.RelSym(SUCC, 2), (a, b))


def _eq(a, b):
    return S.Eq(a, b)


def _holder(tm, sym):
    """The unary predicate or relation variable that marks ``sym``."""
    if sym in tm.input_alphabet:
        return S.RelSym(letter_predicate(sym), 1)
    return tape_variable(sym)


def _reads(tm, sym, h):
    if sym == tm.blank:
        return S.conj([S.Not(_atom(_holder(tm, t), h)) for t in tm.input_alphabet + tm.tape_alphabet])
    return _atom(_holder(tm, sym), h)


def _atom(target, h):
    if isinstance(target, S.RelSym):
        return S.Rel(target, (h,))
    return S.RelVarAtom(target, (h,))


def _symbol_guard(tm, sym):
    """ψ_symbol: the scanned cell, whichever head variable is active, holds ``sym``."""
    return S.And(
        S.implies(_eq(Y_HEAD, Y_HEAD1), _reads(tm, sym, X_HEAD1)),
        S.implies(_eq(Y_HEAD, Y_HEAD2), _reads(tm, sym, X_HEAD2)),
    )


def _ending(tm, q2):
    if q2 in tm.accept:
        return S.top()
    if q2 in tm.reject:
        return S.bottom()
    return S.LoopAtom(LOOP_LABEL)


def _chi(tm, h, h_new, y_new, s, t, d, q2):
    """χ for the head tracked by ``h``: write, move into ``h_new``, switch
    ``y_head`` to ``y_new``, enter ``q2``.  Each binder is followed directly
    by the equality that pins its choice."""

    def finish(link):
        tail = S.Exists(Y_STATE, S.And(_eq(Y_STATE, state_variable(tm, q2)), _ending(tm, q2)))
        tail = S.Exists(Y_HEAD, S.And(_eq(Y_HEAD, y_new), tail))
        return S.Exists(h_new, S.And(link, tail))

    def write(body):
        if t != tm.blank:
            body = S.Insert(_holder(tm, t), (_INS,), S.And(_eq(_INS, h), body))
        if s != tm.blank:
            body = S.Delete(_holder(tm, s), (_DEL,), S.And(_eq(_DEL, h), body))
        return body

    if d == "R":
        alpha = S.Exists(_PROBE, _succ(h, _PROBE))
        present = write(finish(_succ(h, h_new)))
        extend = S.Insert(
            S.RelSym(SUCC, 2),
            (_SU, _SV),
            S.And(_eq(_SU, h), S.And(_eq(_SV, _FRESH), finish(_succ(h, h_new)))),
        )
        absent = write(S.New(_FRESH, extend))
    else:
        alpha = S.Exists(_PROBE, _succ(_PROBE, h))
        present = write(finish(_succ(h_new, h)))
        absent = write(finish(_eq(h_new, h)))
    return S.And(S.implies(alpha, present), S.implies(S.Not(alpha), absent))


def instruction_formula(tm: TuringMachine, q, s) -> S.Formula:
    """ψ_instr for the transition on ``(q, s)``; a missing transition on a
    nonfinal state compiles to a rejecting halt."""
    guard = S.And(_eq(Y_STATE, state_variable(tm, q)), _symbol_guard(tm, s))
    move = tm.transitions.get((q, s))
    if move is None:
        return S.implies(guard, S.bottom())
    q2, t, d = move
    beta = S.And(
        S.implies(_eq(Y_HEAD, Y_HEAD1), _chi(tm, X_HEAD1, X_HEAD2, Y_HEAD2, s, t, d, q2)),
        S.implies(_eq(Y_HEAD, Y_HEAD2), _chi(tm, X_HEAD2, X_HEAD1, Y_HEAD1, s, t, d, q2)),
    )
    return S.implies(guard, beta)


def instruction_pairs(tm: TuringMachine) -> list:
    """``(state, symbol)`` pairs with one ψ conjunct each: every transition,
    plus every missing pair of a nonfinal state."""
    return [(q, s) for q in tm.states if not tm.is_final(q) for s in tm.symbols]


def compile_tm(tm: TuringMachine) -> S.Formula:
    """The sentence φ_TM over the word-model vocabulary of the input alphabet."""
    body = [instruction_formula(tm, q, s) for q, s in instruction_pairs(tm)]
    if tm.start in tm.reject:
        body.append(S.implies(_eq(Y_STATE, state_variable(tm, tm.start)), S.bottom()))
    loop = S.Loop(LOOP_LABEL, S.conj(body))

    named = [Y_HEAD1, Y_HEAD2] + [state_variable(tm, q) for q in tm.states]
    at_start = S.conj(
        [S.Not(S.Exists(_PROBE, _succ(_PROBE, X_HEAD1)))] + [S.Not(_eq(X_HEAD1, v)) for v in named]
    )
    phi = S.Exists(Y_STATE, S.And(_eq(Y_STATE, state_variable(tm, tm.start)), loop))
    phi = S.Exists(X_HEAD2, S.And(_eq(X_HEAD2, X_HEAD1), phi))
    phi = S.Exists(X_HEAD1, S.And(at_start, phi))
    phi = S.Exists(Y_HEAD, S.And(_eq(Y_HEAD, Y_HEAD1), phi))
    # bind the tape relation variables, starting empty
    for sym in reversed(tm.tape_alphabet):
        phi = S.Delete(tape_variable(sym), (_BIND,), S.And(_eq(_BIND, Y_HEAD1), phi))
    for v in reversed(named):
        phi = S.New(v, phi)
    return phi


def compile_vocabulary(tm: TuringMachine) -> dict:
    return word_vocabulary(tm.input_alphabet)


def tm_word_model(tm: TuringMachine, w):
    return word_model(WordSpec(tm.input_alphabet, as_word(tm, w)))


# -- certificates ------------------------------------------------------------------


@dataclass
class Certificate:
    strategy: Strategy
    bound: int
    sign: Sign
    word: tuple

    @property
    def owner(self):
        return self.strategy.owner

    def to_text(self) -> str:
        head = f"word {' '.join(self.word) if self.word else '-'}\nsign {self.sign.value}\nbound {self.bound}\n"
        return head + self.strategy.to_text()


def rounds_per_step(tm: TuringMachine) -> int:
    """Upper bound on rounds one simulated step takes on the principal line."""
    return 2 * len(instruction_pairs(tm)) + 40


def game_budget(tm: TuringMachine, steps: int) -> int:
    return 30 + 2 * len(tm.states) + len(tm.tape_alphabet) * 3 + (steps + 1) * rounds_per_step(tm)


class _Compiled:
    cache = {}

    @classmethod
    def game(cls, tm):
        key = id(tm)
        hit = cls.cache.get(key)
        if hit is None or hit[0] is not tm:
            hit = (tm, Game(compile_tm(tm)))
            cls.cache[key] = hit
        return hit[1]


def compiled_game(tm: TuringMachine) -> Game:
    return _Compiled.game(tm)


def emit_certificate(tm: TuringMachine, w, budget: int) -> Optional[Certificate]:
    """A winning strategy for ∃ that tracks the run of ``tm`` on ``w``.

    Sign ``+`` for accepting runs, ``-`` for rejecting ones, ``None`` when the
    run does not halt within ``budget`` steps.  The strategy is read off a
    bounded search whose depth comes from the run length.
    """
    run = simulate(tm, w, budget)
    if run.outcome is Outcome.EXHAUSTED:
        return None
    sign = Sign.PLUS if run.outcome is Outcome.ACCEPT else Sign.MINUS
    game = compiled_game(tm)
    start = game.initial_position(tm_word_model(tm, w), None, sign)
    depth = game_budget(tm, run.steps)
    solver = Solver(game, memo=True, static=True)
    strategy = extract_strategy(start, game, E, depth, solver=solver)
    if strategy is None:
        return None
    return Certificate(strategy, depth, sign, as_word(tm, w))


def verify_certificate(tm: TuringMachine, cert: Certificate):
    game = compiled_game(tm)
    start = game.initial_position(tm_word_model(tm, cert.word), None, cert.sign)
    return verify_strategy(cert.strategy, start, game, cert.bound)


@dataclass(frozen=True)
class CertifyReport:
    run: RunResult
    certificate: Optional[Certificate]
    check: object  # Verified, Counterexample or None

    @property
    def verified(self) -> bool:
        return isinstance(self.check, Verified)


def certify(tm: TuringMachine, w, budget: int) -> CertifyReport:
    run = simulate(tm, w, budget)
    cert = emit_certificate(tm, w, budget)
    check = verify_certificate(tm, cert) if cert is not None else None
    return CertifyReport(run, cert, check)


# -- classification --------------------------------------------------------------


def classify(tm: TuringMachine, structure, element_order=None, symbol_order=None, budget: int = 10000) -> RunResult:
    """Run ``tm`` (input alphabet {0,1}) on the encoding of ``structure``."""
    if set(tm.input_alphabet) != {"0", "1"}:
        raise TMError("classification machines read encodings over the alphabet {0,1}")
    return simulate(tm, encode(structure, element_order, symbol_order), budget)


# -- sample machines -------------------------------------------------------------


def _machine(text: str) -> TuringMachine:
    from .parser import parse_tm

    return parse_tm(text)


EVEN_AS_SOURCE = """\
# accepts words over {a,b} with an even number of a's
states init even odd yes no
start init
accept yes
reject no
input_alphabet a b
tape_alphabet
blank B
trans init,B -> even,B,R
trans init,a -> no,a,R
trans init,b -> no,b,R
trans even,a -> odd,a,R
trans even,b -> even,b,R
trans even,B -> yes,B,R
trans odd,a -> even,a,R
trans odd,b -> odd,b,R
trans odd,B -> no,B,R
"""

RIGHT_FOREVER_SOURCE = """\
# walks right forever
states go
start go
accept
reject
input_alphabet a b
tape_alphabet
blank B
trans go,a -> go,a,R
trans go,b -> go,b,R
trans go,B -> go,B,R
"""

MARK_SOURCE = """\
# replaces each a by the tape symbol X, then accepts iff the first input cell now holds X
states init scan back check yes no
start init
accept yes
reject no
input_alphabet a b
tape_alphabet X
blank B
trans init,B -> scan,B,R
trans init,a -> no,a,R
trans init,b -> no,b,R
trans init,X -> no,X,R
trans scan,a -> scan,X,R
trans scan,b -> scan,b,R
trans scan,X -> scan,X,R
trans scan,B -> back,B,L
trans back,a -> back,a,L
trans back,b -> back,b,L
trans back,X -> back,X,L
trans back,B -> check,B,R
trans check,X -> yes,X,R
trans check,a -> no,a,R
trans check,b -> no,b,R
trans check,B -> no,B,R
"""

ENCODING_PARITY_SOURCE = """\
# checks the 0^n 1 prefix of a structure encoding, then accepts iff the
# payload has an even number of 1s
states init first zeros even odd yes no
start init
accept yes
reject no
input_alphabet 0 1
tape_alphabet
blank B
trans init,B -> first,B,R
trans init,0 -> no,0,R
trans init,1 -> no,1,R
trans first,0 -> zeros,0,R
trans first,1 -> no,1,R
trans first,B -> no,B,R
trans zeros,0 -> zeros,0,R
trans zeros,1 -> even,1,R
trans zeros,B -> no,B,R
trans even,0 -> even,0,R
trans even,1 -> odd,1,R
trans even,B -> yes,B,R
trans odd,0 -> odd,0,R
trans odd,1 -> even,1,R
trans odd,B -> no,B,R
"""


def even_as_machine() -> TuringMachine:
    return _machine(EVEN_AS_SOURCE)


def right_forever_machine() -> TuringMachine:
    return _machine(RIGHT_FOREVER_SOURCE)


def mark_machine() -> TuringMachine:
    return _machine(MARK_SOURCE)


def encoding_parity_machine() -> TuringMachine:
    return _machine(ENCODING_PARITY_SOURCE)
