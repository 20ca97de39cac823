"""Unary width-one generalized quantifiers.

Such a quantifier is an isomorphism-closed class of pairs ``(A, B)`` with
``B ⊆ A``; up to isomorphism a pair is determined by ``(|A|, |B|)``, so a
quantifier is represented by a membership predicate on cardinalities.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable

from . import tarski

DEFAULT_CAP = 12


class QuantifierError(ValueError):
    pass


@dataclass(frozen=True)
class QuantifierDef:
    name: str
    membership: Callable[[int, int], bool] = field(compare=False, repr=False)

    def accepts(self, n: int, m: int) -> bool:
        return bool(self.membership(n, m))

    def nonempty_on(self, n: int) -> bool:
        """Whether ``Q^𝔄`` is nonempty on an ``n``-element domain."""
        return any(self.accepts(n, m) for m in range(n + 1))


_BUILTINS = (
    QuantifierDef("exists", lambda n, m: m >= 1),
    QuantifierDef("forall", lambda n, m: m == n),
    QuantifierDef("even", lambda n, m: m % 2 == 0),
    QuantifierDef("majority", lambda n, m: 2 * m > n),
)


def builtin_quantifiers() -> dict:
    return {q.name: q for q in _BUILTINS}


def register(registry: dict, q: QuantifierDef) -> dict:
    if q.name in registry:
        raise QuantifierError(f"quantifier {q.name} is already defined")
    out = dict(registry)
    out[q.name] = q
    return out


_QUANT_LINE = re.compile(r"quant\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(\d+)\s+(\d+)\s*->\s*([01])")


def load_quantifiers(text: str, registry: dict = None, cap: int = DEFAULT_CAP) -> dict:
    """Add table-defined quantifiers to ``registry`` (default: the builtins).

    Each line ``quant Name: n m -> 0|1`` fixes membership of ``(n, m)``;
    pairs not listed are outside the quantifier.
    """
    registry = builtin_quantifiers() if registry is None else dict(registry)
    tables = {}
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _QUANT_LINE.fullmatch(line)
        if not m:
            raise QuantifierError(f"line {no}: expected 'quant Name: n m -> 0|1'")
        name, n, k, bit = m.group(1), int(m.group(2)), int(m.group(3)), m.group(4)
        if n < 1 or k > n:
            raise QuantifierError(f"line {no}: need 1 <= n and m <= n")
        if n > cap:
            raise QuantifierError(f"line {no}: domain size {n} exceeds the cap {cap}")
        table = tables.setdefault(name, {})
        if (n, k) in table:
            raise QuantifierError(f"line {no}: entry ({n}, {k}) for {name} given twice")
        table[(n, k)] = bit == "1"
    for name, table in tables.items():
        registry = register(registry, QuantifierDef(name, lambda n, m, t=table: t.get((n, m), False)))
    return registry


def q_interpretation(q: QuantifierDef, structure, cap: int = DEFAULT_CAP) -> list:
    """``Q^𝔄``: all subsets ``S`` of the domain with ``(|A|, |S|)`` in ``q``,
    smallest first."""
    elems = sorted(structure.domain)
    n = len(elems)
    if n > cap:
        raise QuantifierError(f"domain of size {n} exceeds the enumeration cap {cap}")
    out = []
    for m in range(n + 1):
        if q.accepts(n, m):
            out.extend(frozenset(c) for c in itertools.combinations(elems, m))
    return out


def tarski_q_eval(structure, g, phi, quantifiers: dict = None, cap: int = DEFAULT_CAP) -> bool:
    """Truth of an FO+Q formula via the witness-set clause
    ``{a | 𝔄, f[x↦a] ⊨ φ} ∈ Q^𝔄``."""
    if structure.size > cap:
        raise QuantifierError(f"domain of size {structure.size} exceeds the enumeration cap {cap}")
    return tarski.holds(structure, g, phi, quantifiers if quantifiers is not None else builtin_quantifiers())
