"""Finite relational structures, assignments, word models and bitstring encodings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class StructureError(ValueError):
    pass


class Structure:
    """A finite relational model with integer elements.

    Structures are values: every mutation method returns a new structure and
    leaves the receiver untouched.  Tuples are stored in frozensets, and the
    canonical key (sorted domain, sorted tuples per symbol) drives equality and
    hashing.
    """

    __slots__ = ("domain", "relations", "arities", "_key", "_hash")

    def __init__(self, domain: Iterable[int], relations: Mapping[str, Iterable[tuple]] = (), arities=None):
        domain = frozenset(domain)
        if not domain:
            raise StructureError("structures must have a nonempty domain")
        if any(not isinstance(a, int) or a < 0 for a in domain):
            raise StructureError("elements are nonnegative integers")
        relations = dict(relations)
        arities = dict(arities or {})
        rels = {}
        for name, tuples in relations.items():
            tuples = frozenset(tuple(t) for t in tuples)
            k = arities.get(name)
            for t in tuples:
                if k is None:
                    k = len(t)
                if len(t) != k:
                    raise StructureError(f"tuple {t} in {name} does not have arity {k}")
                if any(a not in domain for a in t):
                    raise StructureError(f"tuple {t} in {name} leaves the domain")
            if k is None:
                raise StructureError(f"cannot infer the arity of empty relation {name}")
            arities[name] = k
            rels[name] = tuples
        for name in arities:
            rels.setdefault(name, frozenset())
        self._init(domain, rels, arities)

    def _init(self, domain, rels, arities):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "arities", arities)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, domain, rels, arities):
        s = cls.__new__(cls)
        s._init(domain, rels, arities)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Structure is immutable")

    # -- value semantics ---------------------------------------------------

    @property
    def key(self) -> tuple:
        if self._key is None:
            rels = tuple(
                (name, self.arities[name], tuple(sorted(self.relations[name])))
                for name in sorted(self.relations)
            )
            object.__setattr__(self, "_key", (tuple(sorted(self.domain)), rels))
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Structure):
            return NotImplemented
        return hash(self) == hash(other) and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key))
        return self._hash

    def __repr__(self):
        rels = ", ".join(f"{n}={sorted(self.relations[n])}" for n in sorted(self.relations))
        return f"Structure(domain={sorted(self.domain)}, {rels})"

    @property
    def size(self) -> int:
        return len(self.domain)

    @property
    def vocabulary(self) -> dict:
        return dict(self.arities)

    def elements(self) -> list:
        return sorted(self.domain)

    def holds(self, name: str, t: tuple) -> bool:
        return t in self.relations[name]

    def canonical(self) -> str:
        dom, rels = self.key
        parts = ["dom=" + ",".join(map(str, dom))]
        for name, _, tuples in rels:
            parts.append(name + "=" + "".join("(" + ",".join(map(str, t)) + ")" for t in tuples))
        return ";".join(parts)

    # -- game mutations ----------------------------------------------------

    def add_fresh_point(self):
        """Return ``(structure', b)`` where ``b = max(domain) + 1`` is isolated."""
        b = max(self.domain) + 1
        return Structure._raw(self.domain | {b}, self.relations, self.arities), b

    def _check_tuple(self, name, t):
        if name not in self.arities:
            raise StructureError(f"unknown relation symbol {name}")
        if len(t) != self.arities[name]:
            raise StructureError(f"{name} has arity {self.arities[name]}, got {t}")
        for a in t:
            if a not in self.domain:
                raise StructureError(f"element {a} is not in the domain")

    def insert_tuple(self, name: str, t: Sequence[int]) -> "Structure":
        t = tuple(t)
        self._check_tuple(name, t)
        if t in self.relations[name]:
            return self
        rels = dict(self.relations)
        rels[name] = rels[name] | {t}
        return Structure._raw(self.domain, rels, self.arities)

    def delete_tuple(self, name: str, t: Sequence[int]) -> "Structure":
        t = tuple(t)
        self._check_tuple(name, t)
        if t not in self.relations[name]:
            return self
        rels = dict(self.relations)
        rels[name] = rels[name] - {t}
        return Structure._raw(self.domain, rels, self.arities)

    def relabel(self, mapping: Mapping[int, int]) -> "Structure":
        """Isomorphic copy under an injective element renaming."""
        rels = {n: {tuple(mapping[a] for a in t) for t in ts} for n, ts in self.relations.items()}
        return Structure((mapping[a] for a in self.domain), rels, self.arities)


class Assignment:
    """Values of individual variables (elements) and relation variables
    (sets of tuples).  Immutable; :meth:`update` returns a new assignment."""

    __slots__ = ("individual", "relational", "_hash")

    def __init__(self, individual: Mapping[str, int] = None, relational: Mapping[str, Iterable[tuple]] = None):
        object.__setattr__(self, "individual", dict(individual or {}))
        object.__setattr__(
            self,
            "relational",
            {k: frozenset(tuple(t) for t in v) for k, v in (relational or {}).items()},
        )
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Assignment is immutable")

    def __getitem__(self, x: str) -> int:
        return self.individual[x]

    def __contains__(self, x) -> bool:
        return x in self.individual

    def relation(self, name: str) -> frozenset:
        """Value of a relation variable; unassigned ones read as ∅."""
        return self.relational.get(name, frozenset())

    def update(self, individual: Mapping[str, int] = None, relational: Mapping[str, Iterable[tuple]] = None,
               structure: Structure = None, arities: Mapping[str, int] = None) -> "Assignment":
        """Pointwise override ``f[x1↦b1, ..., X↦S]``.

        When ``structure`` is given, element values and relation tuples are
        checked against its domain; ``arities`` checks relation tuple lengths.
        """
        ind = dict(self.individual)
        rel = dict(self.relational)
        for x, a in (individual or {}).items():
            if structure is not None and a not in structure.domain:
                raise StructureError(f"{x} ↦ {a}: element not in the domain")
            ind[x] = a
        for name, tuples in (relational or {}).items():
            tuples = frozenset(tuple(t) for t in tuples)
            for t in tuples:
                if arities is not None and name in arities and len(t) != arities[name]:
                    raise StructureError(f"${name} has arity {arities[name]}, got {t}")
                if structure is not None and any(a not in structure.domain for a in t):
                    raise StructureError(f"${name}: tuple {t} leaves the domain")
            rel[name] = tuples
        new = Assignment.__new__(Assignment)
        object.__setattr__(new, "individual", ind)
        object.__setattr__(new, "relational", rel)
        object.__setattr__(new, "_hash", None)
        return new

    def key(self) -> tuple:
        return (
            tuple(sorted(self.individual.items())),
            tuple(sorted((k, tuple(sorted(v))) for k, v in self.relational.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return self.individual == other.individual and self.relational == other.relational

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key()))
        return self._hash

    def __repr__(self):
        parts = [f"{k}↦{v}" for k, v in sorted(self.individual.items())]
        parts += [f"${k}↦{sorted(v)}" for k, v in sorted(self.relational.items())]
        return "Assignment(" + ", ".join(parts) + ")"

    def canonical(self) -> str:
        parts = [f"{k}:{v}" for k, v in sorted(self.individual.items())]
        parts += [
            f"${k}:" + "".join("(" + ",".join(map(str, t)) + ")" for t in sorted(v))
            for k, v in sorted(self.relational.items())
        ]
        return ",".join(parts)


EMPTY = Assignment()


# -- word models ---------------------------------------------------------------

SUCC = "Succ"


def letter_predicate(symbol: str) -> str:
    return "P" + symbol


@dataclass(frozen=True)
class WordSpec:
    alphabet: tuple
    word: tuple

    def __init__(self, alphabet, word):
        alphabet = tuple(alphabet)
        word = tuple(word)
        if not alphabet:
            raise StructureError("alphabet must be nonempty")
        for c in word:
            if c not in alphabet:
                raise StructureError(f"symbol {c!r} is not in the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "word", word)


def word_vocabulary(alphabet) -> dict:
    vocab = {SUCC: 2}
    for a in alphabet:
        vocab[letter_predicate(a)] = 1
    return vocab


def word_model(spec: WordSpec) -> Structure:
    """Domain ``0..|w|``, canonical ``Succ``, element ``i ≥ 1`` in ``P_{w_i}``;
    element 0 carries no letter."""
    n = len(spec.word)
    rels = {SUCC: {(i, i + 1) for i in range(n)}}
    for a in spec.alphabet:
        rels[letter_predicate(a)] = {(i + 1,) for i, c in enumerate(spec.word) if c == a}
    return Structure(range(n + 1), rels, word_vocabulary(spec.alphabet))


# -- encoding ------------------------------------------------------------------


def encode(s: Structure, element_order: Sequence[int] = None, symbol_order: Sequence[str] = None) -> str:
    """``0^|A| · 1 · enc(R_1) ··· enc(R_p)``.

    ``enc(R)`` has one bit per k-tuple over the domain, tuples enumerated in
    the lexicographic order induced by ``element_order``.
    """
    order = list(element_order) if element_order is not None else s.elements()
    if sorted(order) != s.elements():
        raise StructureError("element order must list every domain element exactly once")
    symbols = list(symbol_order) if symbol_order is not None else sorted(s.relations)
    if sorted(symbols) != sorted(s.relations):
        raise StructureError("symbol order must cover the vocabulary exactly once")
    parts = ["0" * len(order), "1"]
    for name in symbols:
        rel = s.relations[name]
        parts.append(
            "".join("1" if t in rel else "0" for t in itertools.product(order, repeat=s.arities[name]))
        )
    return "".join(parts)


def decode(bits: str, arities: Sequence[int], names: Sequence[str] = None) -> Structure:
    """Inverse of :func:`encode`: element ``i`` is the i-th element of the order."""
    if set(bits) - {"0", "1"}:
        raise StructureError("encodings are strings over {0,1}")
    n = bits.find("1")
    if n <= 0:
        raise StructureError("encoding must start with 0^n·1 for some n ≥ 1")
    if set(bits[:n]) != {"0"}:
        raise StructureError("malformed domain prefix")
    payload = bits[n + 1:]
    need = sum(n ** k for k in arities)
    if len(payload) != need:
        raise StructureError(f"payload has {len(payload)} bits, expected {need}")
    names = list(names) if names is not None else [f"R{i + 1}" for i in range(len(arities))]
    if len(names) != len(arities):
        raise StructureError("need one name per arity")
    rels, ar = {}, {}
    pos = 0
    for name, k in zip(names, arities):
        chunk = payload[pos:pos + n ** k]
        pos += n ** k
        tuples = itertools.product(range(n), repeat=k)
        rels[name] = {t for t, bit in zip(tuples, chunk) if bit == "1"}
        ar[name] = k
    return Structure(range(n), rels, ar)
