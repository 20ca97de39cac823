"""Abstract syntax of the looping first-order language.

Core formulas are built from thirteen constructors (relation atoms,
relation-variable atoms, equality, loop atoms, negation, conjunction,
existential quantification, point insertion, tuple insertion/deletion for
relation symbols and relation variables, and labeled loops), plus the
generalized-quantifier node ``Quant``.  Derived connectives (``Or``,
``Implies``, ``Forall``, ``Top``, ``Bottom``) live in a separate surface layer
and are removed by :func:`desugar`.

Subformula *instances* are addressed by paths: tuples of child indices from
the root.  Two syntactically equal subformulas at different places have
different paths.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator, Union


@dataclass(frozen=True)
class RelSym:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"relation symbol {self.name} needs arity >= 1")


@dataclass(frozen=True)
class RelVar:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"relation variable ${self.name} needs arity >= 1")


Path = tuple  # tuple[int, ...]


class Formula:
    """Base class of all formula nodes.

    Nodes are immutable; equality is structural and the hash is cached, since
    large compiled formulas are hashed repeatedly by the game caches.
    """

    __slots__ = ()

    def _key(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
            return h

    @property
    def children(self) -> tuple:
        return ()

    def __str__(self):
        from .parser import pretty_print

        return pretty_print(self)


# -- core constructors -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Rel(Formula):
    symbol: RelSym
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, eq=False)
class RelVarAtom(Formula):
    var: RelVar
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, eq=False)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class LoopAtom(Formula):
    label: int

    def __post_init__(self):
        if self.label < 0:
            raise ValueError("loop labels are natural numbers")


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class New(Formula):
    """Point insertion ``Ix φ``."""

    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Insert(Formula):
    """Tuple insertion ``I_{R x1..xk} φ``; ``target`` is a RelSym or RelVar."""

    target: Union[RelSym, RelVar]
    args: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Delete(Formula):
    """Tuple deletion ``D_{R x1..xk} φ``; ``target`` is a RelSym or RelVar."""

    target: Union[RelSym, RelVar]
    args: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Loop(Formula):
    """Labeled formula ``kφ``; loop atoms ``k`` jump back here."""

    label: int
    body: Formula

    def __post_init__(self):
        if self.label < 0:
            raise ValueError("loop labels are natural numbers")

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Quant(Formula):
    """Unary generalized quantifier ``Q̂x φ``, referenced by name."""

    name: str
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)


ATOMS = (Rel, RelVarAtom, Eq)
BINDERS = (Exists, New, Insert, Delete, Quant)
CORE = (Rel, RelVarAtom, Eq, LoopAtom, Not, And, Exists, New, Insert, Delete, Loop, Quant)


# -- surface connectives -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    pass


TOP_VAR = "v"


def top() -> Formula:
    """Core form of ⊤: ``¬∃v ¬(v = v)``."""
    return Not(Exists(TOP_VAR, Not(Eq(TOP_VAR, TOP_VAR))))


def bottom() -> Formula:
    return Not(top())


def or_(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def forall(x: str, body: Formula) -> Formula:
    return Not(Exists(x, Not(body)))


def conj(parts) -> Formula:
    """Right-nested conjunction; the empty conjunction is ⊤."""
    parts = list(parts)
    if not parts:
        return top()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return bottom()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = or_(p, out)
    return out


def desugar(phi: Formula) -> Formula:
    """Rewrite surface connectives into core syntax.

    (φ ∨ ψ) ↦ ¬(¬φ ∧ ¬ψ), (φ → ψ) ↦ ¬(φ ∧ ¬ψ), ∀x φ ↦ ¬∃x ¬φ,
    ⊤ ↦ ¬∃v ¬(v=v), ⊥ ↦ ¬⊤.
    """
    if isinstance(phi, ATOMS) or isinstance(phi, LoopAtom):
        return phi
    if isinstance(phi, Top):
        return top()
    if isinstance(phi, Bottom):
        return bottom()
    if isinstance(phi, Or):
        return or_(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Implies):
        return implies(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Forall):
        return forall(phi.var, desugar(phi.body))
    if isinstance(phi, Not):
        return Not(desugar(phi.body))
    if isinstance(phi, And):
        return And(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Exists):
        return Exists(phi.var, desugar(phi.body))
    if isinstance(phi, New):
        return New(phi.var, desugar(phi.body))
    if isinstance(phi, Insert):
        return Insert(phi.target, phi.args, desugar(phi.body))
    if isinstance(phi, Delete):
        return Delete(phi.target, phi.args, desugar(phi.body))
    if isinstance(phi, Loop):
        return Loop(phi.label, desugar(phi.body))
    if isinstance(phi, Quant):
        return Quant(phi.name, phi.var, desugar(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def is_core(phi: Formula) -> bool:
    return all(isinstance(node, CORE) for _, node in subformulae(phi))


# -- traversal ---------------------------------------------------------------


def subformulae(phi: Formula) -> list:
    """Preorder list of ``(path, node)`` pairs, one per subformula instance."""
    out = []
    stack = [((), phi)]
    while stack:
        path, node = stack.pop()
        out.append((path, node))
        kids = node.children
        for i in range(len(kids) - 1, -1, -1):
            stack.append((path + (i,), kids[i]))
    return out


def node_at(phi: Formula, path: Path) -> Formula:
    node = phi
    for i in path:
        kids = node.children
        if not 0 <= i < len(kids):
            raise KeyError(f"no subformula at path {path}")
        node = kids[i]
    return node


def iter_nodes(phi: Formula) -> Iterator[Formula]:
    for _, node in subformulae(phi):
        yield node


def size(phi: Formula) -> int:
    return len(subformulae(phi))


def depth(phi: Formula) -> int:
    """Operator nesting depth; atoms and loop atoms have depth 0."""
    kids = phi.children
    if not kids:
        return 0
    return 1 + max(depth(k) for k in kids)


# -- free variables ----------------------------------------------------------


def free_variables(phi: Formula) -> frozenset:
    """Free individual variables (``str``) and relation variables (``RelVar``)."""
    if isinstance(phi, Rel):
        return frozenset(phi.args)
    if isinstance(phi, RelVarAtom):
        return frozenset(phi.args) | {phi.var}
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, LoopAtom):
        return frozenset()
    if isinstance(phi, (Not, Loop)):
        return free_variables(phi.body)
    if isinstance(phi, And):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, (Exists, New, Quant, Forall)):
        return free_variables(phi.body) - {phi.var}
    if isinstance(phi, (Insert, Delete)):
        bound = set(phi.args)
        if isinstance(phi.target, RelVar):
            bound.add(phi.target)
        return free_variables(phi.body) - bound
    if isinstance(phi, (Or, Implies)):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, (Top, Bottom)):
        return frozenset()
    raise TypeError(f"not a formula: {phi!r}")


def is_sentence(phi: Formula) -> bool:
    return not free_variables(phi)


# -- well-formedness ---------------------------------------------------------


class FormulaError(ValueError):
    """Raised by :func:`validate`; carries the offending path and rule name."""

    def __init__(self, message, path=(), rule=""):
        super().__init__(message)
        self.path = tuple(path)
        self.rule = rule


def loop_labels(phi: Formula) -> set:
    return {n.label for n in iter_nodes(phi) if isinstance(n, (Loop, LoopAtom))}


def non_standard_jumps(phi: Formula) -> list:
    """All ``(atom_path, labeled_path)`` pairs where the loop atom lies
    outside a labeled subformula carrying the same label."""
    atoms, labeled = [], []
    for path, node in subformulae(phi):
        if isinstance(node, LoopAtom):
            atoms.append((path, node.label))
        elif isinstance(node, Loop):
            labeled.append((path, node.label))
    bad = []
    for apath, k in atoms:
        for lpath, j in labeled:
            if j == k and apath[: len(lpath)] != lpath:
                bad.append((apath, lpath))
    return bad


def has_non_standard_jump(phi: Formula) -> bool:
    return bool(non_standard_jumps(phi))


def validate(phi: Formula, vocabulary=None, quantifiers=None) -> None:
    """Check that ``phi`` is a core formula of the restricted language.

    ``vocabulary`` maps relation-symbol names to arities; when given, every
    relation symbol must be declared with a matching arity.  Relation
    variables must be used with one arity per name.  ``quantifiers``, when
    given, is the set of admissible quantifier names.
    """
    relvar_arity = {}
    for path, node in subformulae(phi):
        if not isinstance(node, CORE):
            raise FormulaError(
                f"derived connective {type(node).__name__} in core formula", path, "core"
            )
        target = None
        args = ()
        if isinstance(node, Rel):
            target, args = node.symbol, node.args
        elif isinstance(node, RelVarAtom):
            target, args = node.var, node.args
        elif isinstance(node, (Insert, Delete)):
            target, args = node.target, node.args
        if target is not None:
            if len(args) != target.arity:
                raise FormulaError(
                    f"{target.name} has arity {target.arity} but is applied to {len(args)} variables",
                    path,
                    "arity",
                )
            if isinstance(target, RelSym) and vocabulary is not None:
                if target.name not in vocabulary:
                    raise FormulaError(f"undeclared relation symbol {target.name}", path, "undeclared")
                if vocabulary[target.name] != target.arity:
                    raise FormulaError(
                        f"{target.name} is declared with arity {vocabulary[target.name]}",
                        path,
                        "arity",
                    )
            if isinstance(target, RelVar):
                seen = relvar_arity.setdefault(target.name, target.arity)
                if seen != target.arity:
                    raise FormulaError(
                        f"relation variable ${target.name} used with arities {seen} and {target.arity}",
                        path,
                        "arity",
                    )
        if isinstance(node, Quant) and quantifiers is not None and node.name not in quantifiers:
            raise FormulaError(f"unknown quantifier {node.name}", path, "undeclared")
    bad = non_standard_jumps(phi)
    if bad:
        apath, lpath = bad[0]
        raise FormulaError(
            f"non-standard jump: loop atom at {apath} lies outside the labeled subformula at {lpath}",
            apath,
            "non-standard jump",
        )
