"""Seeded random formulas and structures for property tests."""
from __future__ import annotations

import itertools
import random

from . import syntax as S
from .structure import Structure

P1 = S.RelSym("P", 1)
R2 = S.RelSym("R", 2)
FO_VOCAB = {"P": 1, "R": 2}
VARS = ("x", "y", "z")
BUILTIN_NAMES = ("exists", "forall", "even", "majority")


def random_structure(rng: random.Random, size: int, vocab: dict = None, density: float = 0.5) -> Structure:
    vocab = FO_VOCAB if vocab is None else vocab
    rels = {}
    for name, k in sorted(vocab.items()):
        rels[name] = {t for t in itertools.product(range(size), repeat=k) if rng.random() < density}
    return Structure(range(size), rels, vocab)


def _atom(rng, bound):
    vs = sorted(bound)
    kind = rng.randrange(3)
    if kind == 0:
        return S.Rel(P1, (rng.choice(vs),))
    if kind == 1:
        return S.Rel(R2, (rng.choice(vs), rng.choice(vs)))
    return S.Eq(rng.choice(vs), rng.choice(vs))


def random_fo_sentence(rng: random.Random, max_depth: int = 3, quantifiers=()) -> S.Formula:
    """A core FO sentence over ``P/1, R/2`` with operator depth ≤ ``max_depth``.

    When ``quantifiers`` names are given, generalized quantifiers appear as
    an extra binder alongside ∃.
    """

    def gen(d, bound):
        if bound and (d == 0 or rng.random() < 0.25):
            return _atom(rng, bound)
        if not bound and d == 1:
            return binder(d, bound)
        r = rng.random()
        if r < 0.25:
            return S.Not(gen(d - 1, bound))
        if r < 0.55:
            return S.And(gen(d - 1, bound), gen(d - 1, bound))
        return binder(d, bound)

    def binder(d, bound):
        x = rng.choice(VARS)
        body = gen(d - 1, bound | {x})
        if quantifiers and rng.random() < 0.6:
            return S.Quant(rng.choice(quantifiers), x, body)
        return S.Exists(x, body)

    return gen(max_depth, frozenset())


def random_loop_sentence(rng: random.Random, max_depth: int = 3) -> S.Formula:
    """A sentence of the looping language (label 1 only, no non-standard
    jumps) mixing point insertion, tuple updates and loops."""
    X = S.RelVar("X", 1)

    def leaf(bound, in_loop):
        options = ["loop"] if in_loop else []
        if bound:
            options += ["atom", "atom", "relvar"]
        if not options:
            options = ["dangling"]
        kind = rng.choice(options)
        if kind in ("loop", "dangling"):
            return S.LoopAtom(1)
        if kind == "relvar":
            return S.RelVarAtom(X, (rng.choice(sorted(bound)),))
        return _atom(rng, bound)

    def gen(d, bound, in_loop, loops_left):
        if d == 0 or (rng.random() < 0.2 and (bound or in_loop)):
            return leaf(bound, in_loop)
        choices = ["not", "and", "exists", "new", "ins", "del", "insx"]
        if loops_left and not in_loop:
            choices += ["label", "label"]
        kind = rng.choice(choices)
        if kind == "not":
            return S.Not(gen(d - 1, bound, in_loop, loops_left))
        if kind == "and":
            left = gen(d - 1, bound, in_loop, loops_left)
            loops_left = loops_left and not any(isinstance(n, S.Loop) for n in S.iter_nodes(left))
            return S.And(left, gen(d - 1, bound, in_loop, loops_left))
        if kind == "label":
            return S.Loop(1, gen(d - 1, bound, True, False))
        x = rng.choice(VARS)
        if kind == "exists":
            return S.Exists(x, gen(d - 1, bound | {x}, in_loop, loops_left))
        if kind == "new":
            return S.New(x, gen(d - 1, bound | {x}, in_loop, loops_left))
        if kind == "insx":
            return S.Insert(X, (x,), gen(d - 1, bound | {x}, in_loop, loops_left))
        if rng.random() < 0.5:
            target, args = P1, (x,)
            new_bound = bound | {x}
        else:
            y = rng.choice(VARS)
            target, args = R2, (x, y)
            new_bound = bound | {x, y}
        ctor = S.Insert if kind == "ins" else S.Delete
        return ctor(target, args, gen(d - 1, new_bound, in_loop, loops_left))

    while True:
        phi = gen(max_depth, frozenset(), False, True)
        if S.is_sentence(phi) and not S.has_non_standard_jump(phi):
            return phi
