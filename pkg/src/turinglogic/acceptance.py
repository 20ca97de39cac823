"""The eight acceptance checks, shared by ``turinglogic selftest`` and the
test suite.  Each check returns a :class:`CheckResult`; ``line()`` renders
the one-line pass/fail summary."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from . import generators as G
from . import syntax as S
from . import tmcompile as T
from .game import A, E, Game, Sign
from .quantifier import tarski_q_eval
from .solver import BoundedValue, Solver, bounded_value, eval_fo_tarski, evaluate
from .structure import Assignment, Structure, decode, encode

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number, title, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(number, title, passed, detail, time.perf_counter() - t0)


def fo_corpus(n_sentences: int = 500, seed: int = SEED):
    """``[(sentence, [structures])]``: each sentence with two random
    instantiations of every domain size 1..3."""
    rng = random.Random(seed)
    corpus = []
    for _ in range(n_sentences):
        phi = G.random_fo_sentence(rng, 3)
        models = [G.random_structure(rng, size) for size in (1, 2, 3) for _ in range(2)]
        corpus.append((phi, models))
    return corpus


def check_fo_tarski(n_sentences: int = 500):
    cases = agree = unknown = 0
    for phi, models in fo_corpus(n_sentences):
        for s in models:
            cases += 1
            verdict, _ = evaluate(s, Assignment(), phi, Sign.PLUS, budget=64, static=False)
            truth = eval_fo_tarski(s, Assignment(), phi)
            if verdict.unknown:
                unknown += 1
            elif verdict.proven_true == truth:
                agree += 1
    passed = agree == cases and unknown == 0 and n_sentences >= 500
    return passed, f"{agree}/{cases} verdicts match Tarski truth, {unknown} unknown, {n_sentences} sentences"


def check_duality(n_sentences: int = 500, max_depth: int = 10):
    cases = one_side = dual_ok = 0
    for phi, models in fo_corpus(n_sentences):
        game = Game(phi)
        for s in models:
            cases += 1
            plus, _ = evaluate(s, Assignment(), phi, Sign.PLUS, budget=64, static=False, game=game)
            minus, _ = evaluate(s, Assignment(), phi, Sign.MINUS, budget=64, static=False, game=game)
            if plus.proven_true != minus.proven_true and not plus.unknown and not minus.unknown:
                one_side += 1
            start_plus = game.initial_position(s, Assignment(), Sign.PLUS)
            start_minus = game.initial_position(s, Assignment(), Sign.MINUS)
            sp, sm = Solver(game, static=False), Solver(game, static=False)
            if all(
                bounded_value(start_minus, game, E, d, solver=sm) == bounded_value(start_plus, game, A, d, solver=sp)
                for d in range(max_depth + 1)
            ):
                dual_ok += 1
    passed = one_side == cases and dual_ok == cases
    return passed, (f"exactly one of +/- holds in {one_side}/{cases}; "
                    f"depth-wise duality (d <= {max_depth}) in {dual_ok}/{cases}")


def check_machine_equivalence(max_len: int = 4, eval_len: int = 1):
    tm = T.even_as_machine()
    game = T.compiled_game(tm)
    words = [w for n in range(max_len + 1) for w in itertools.product("ab", repeat=n)]
    ok = 0
    failures = []
    for w in words:
        run = T.simulate(tm, w, 1000)
        report = T.certify(tm, w, 1000)
        want_sign = Sign.PLUS if run.outcome is T.Outcome.ACCEPT else Sign.MINUS
        good = (
            run.outcome is not T.Outcome.EXHAUSTED
            and report.verified
            and report.certificate.sign is want_sign
            and report.certificate.owner is E
        )
        # the certificate for one sign must not exist for the other
        other = game.initial_position(T.tm_word_model(tm, w), None, want_sign.flip())
        if good and Solver(game).value(other, report.certificate.bound) is E:
            good = False
        if good and len(w) <= eval_len:
            expected_plus = run.outcome is T.Outcome.ACCEPT
            s = T.tm_word_model(tm, w)
            plus, _ = evaluate(s, None, None, Sign.PLUS, budget=500, game=game)
            minus, _ = evaluate(s, None, None, Sign.MINUS, budget=500, game=game)
            good = plus.proven_true == expected_plus and minus.proven_true == (not expected_plus)
            good = good and not plus.unknown and not minus.unknown
        ok += good
        if not good:
            failures.append("".join(w) or "ε")
    detail = f"{ok}/{len(words)} words (|w| <= {max_len}) certified consistently with simulation"
    if failures:
        detail += "; failing: " + ",".join(failures)
    return ok == len(words), detail


def check_divergence(max_len: int = 2, budget: int = 500):
    tm = T.right_forever_machine()
    game = T.compiled_game(tm)
    words = [w for n in range(max_len + 1) for w in itertools.product("ab", repeat=n)]
    ok = 0
    for w in words:
        run = T.simulate(tm, w, budget)
        s = T.tm_word_model(tm, w)
        # verdicts do not depend on the deepening schedule; doubling keeps this fast
        plus, _ = evaluate(s, None, None, Sign.PLUS, budget=budget, geometric=True, game=game)
        minus, _ = evaluate(s, None, None, Sign.MINUS, budget=budget, geometric=True, game=game)
        ok += run.outcome is T.Outcome.EXHAUSTED and plus.unknown and minus.unknown
    return ok == len(words), f"{ok}/{len(words)} words exhaust the machine and stay Unknown at budget {budget}"


def loop_witness_formula() -> S.Formula:
    """``1(P(x) ∨ 1)`` in core syntax."""
    P = S.RelSym("P", 1)
    return S.Loop(1, S.or_(S.Rel(P, ("x",)), S.LoopAtom(1)))


def check_loop_witness(budget: int = 100):
    phi = loop_witness_formula()
    g = Assignment({"x": 0})
    empty = Structure([0], {"P": []}, {"P": 1})
    full = Structure([0], {"P": [(0,)]}, {"P": 1})
    got = {
        ("P=∅", "+"): evaluate(empty, g, phi, Sign.PLUS, budget=budget)[0],
        ("a∈P", "+"): evaluate(full, g, phi, Sign.PLUS, budget=budget)[0],
        ("P=∅", "-"): evaluate(empty, g, phi, Sign.MINUS, budget=budget)[0],
        ("a∈P", "-"): evaluate(full, g, phi, Sign.MINUS, budget=budget)[0],
    }
    passed = (
        got[("P=∅", "+")].unknown
        and got[("a∈P", "+")].proven_true
        and got[("P=∅", "-")].unknown
        and got[("a∈P", "-")].proven_false
    )
    return passed, ", ".join(f"{k[0]} {k[1]}: {v}" for k, v in got.items())


def check_encoding(n: int = 200, seed: int = SEED):
    rng = random.Random(seed)
    length_ok = roundtrip_ok = 0
    for _ in range(n):
        size = rng.randint(1, 4)
        names = ["R1", "R2"][: rng.randint(0, 2)]
        vocab = {name: rng.randint(1, 2) for name in names}
        s = G.random_structure(rng, size, vocab)
        order = list(range(size))
        rng.shuffle(order)
        bits = encode(s, order, names)
        expected = size + 1 + sum(size ** k for k in vocab.values())
        length_ok += len(bits) == expected
        back = decode(bits, [vocab[name] for name in names], names)
        relabeled = back.relabel({i: order[i] for i in range(size)})
        roundtrip_ok += relabeled == s
    passed = length_ok == n and roundtrip_ok == n
    return passed, f"length formula holds for {length_ok}/{n}, decode∘encode identity for {roundtrip_ok}/{n}"


def check_quantifiers(n_sentences: int = 200, seed: int = SEED):
    rng = random.Random(seed + 7)
    cases = agree = unknown = 0
    for _ in range(n_sentences):
        phi = G.random_fo_sentence(rng, 3, G.BUILTIN_NAMES)
        game = Game(phi)
        for size in (1, 2, 3, 4):
            s = G.random_structure(rng, size)
            cases += 1
            verdict, _ = evaluate(s, Assignment(), phi, Sign.PLUS, budget=64, static=False, game=game)
            truth = tarski_q_eval(s, Assignment(), phi)
            if verdict.unknown:
                unknown += 1
            elif verdict.proven_true == truth:
                agree += 1
    passed = agree == cases and unknown == 0
    return passed, f"{agree}/{cases} game verdicts match the witness-set clause, {unknown} unknown"


def check_monotonicity(n_sentences: int = 200, seed: int = SEED, max_depth: int = 12):
    rng = random.Random(seed + 13)
    runs = monotone = decided = 0
    for _ in range(n_sentences):
        phi = G.random_loop_sentence(rng, 3)
        game = Game(phi)
        for size in (1, 2):
            s = G.random_structure(rng, size)
            start = game.initial_position(s, Assignment(), Sign.PLUS)
            for who in (E, A):
                runs += 1
                values = [bounded_value(start, game, who, d, static=False) for d in range(1, max_depth + 1)]
                settled = None
                ok = True
                for v in values:
                    if settled is not None and v is not settled:
                        ok = False
                    if v is not BoundedValue.UNKNOWN:
                        settled = v
                monotone += ok
                decided += settled is not None
    return monotone == runs, f"{monotone}/{runs} depth sequences never downgrade Win/Lose ({decided} decided by d={max_depth})"


CHECKS = (
    (1, "FO/Tarski agreement", check_fo_tarski),
    (2, "determinacy and duality", check_duality),
    (3, "machine/sentence equivalence (even a's, |w| <= 4)", check_machine_equivalence),
    (4, "divergence correspondence (right-forever, |w| <= 2)", check_divergence),
    (5, "indeterminate loop witness 1(P(x) | 1)", check_loop_witness),
    (6, "encoding length and round trip", check_encoding),
    (7, "generalized quantifier game/Tarski equivalence", check_quantifiers),
    (8, "depth monotonicity with loops", check_monotonicity),
)


def run_check(number: int) -> CheckResult:
    for n, title, fn in CHECKS:
        if n == number:
            return _timed(n, title, fn)
    raise KeyError(number)


def run_all(numbers=None, echo=print) -> list:
    results = []
    for n, title, fn in CHECKS:
        if numbers and n not in numbers:
            continue
        result = _timed(n, title, fn)
        if echo:
            echo(result.line())
        results.append(result)
    return results
