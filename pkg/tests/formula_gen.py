"""Random formulas over every constructor, for syntax and parser properties."""
import random

from turinglogic import syntax as S

VARS = ("x", "y", "z", "u", "_g0")
SYMS = (S.RelSym("P", 1), S.RelSym("R", 2), S.RelSym("Tri", 3))
RELVARS = (S.RelVar("X", 1), S.RelVar("Y", 2))
QUANTS = ("even", "majority", "exists", "forall")


def random_formula(rng: random.Random, depth: int, labels=(0, 1, 2)) -> S.Formula:
    """Any core formula (possibly open, possibly with non-standard jumps)."""
    def args(k):
        return tuple(rng.choice(VARS) for _ in range(k))

    def leaf():
        kind = rng.randrange(4)
        if kind == 0:
            sym = rng.choice(SYMS)
            return S.Rel(sym, args(sym.arity))
        if kind == 1:
            var = rng.choice(RELVARS)
            return S.RelVarAtom(var, args(var.arity))
        if kind == 2:
            return S.Eq(rng.choice(VARS), rng.choice(VARS))
        return S.LoopAtom(rng.choice(labels))

    def gen(d):
        if d == 0 or rng.random() < 0.2:
            return leaf()
        kind = rng.randrange(9)
        if kind == 0:
            return S.Not(gen(d - 1))
        if kind == 1:
            return S.And(gen(d - 1), gen(d - 1))
        if kind == 2:
            return S.Exists(rng.choice(VARS), gen(d - 1))
        if kind == 3:
            return S.New(rng.choice(VARS), gen(d - 1))
        if kind in (4, 5):
            target = rng.choice(SYMS + RELVARS)
            ctor = S.Insert if kind == 4 else S.Delete
            return ctor(target, args(target.arity), gen(d - 1))
        if kind == 6:
            return S.Loop(rng.choice(labels), gen(d - 1))
        if kind == 7:
            return S.Quant(rng.choice(QUANTS), rng.choice(VARS), gen(d - 1))
        return S.Not(gen(d - 1))

    return gen(depth)


def random_valid_formula(rng: random.Random, depth: int) -> S.Formula:
    while True:
        phi = random_formula(rng, depth)
        if not S.has_non_standard_jump(phi):
            return phi
