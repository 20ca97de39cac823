"""Direct Tarski-style truth evaluation for the first-order fragment
(atoms, ¬, ∧, ∃) extended with unary generalized quantifiers."""
from __future__ import annotations

from . import syntax as S


class NotFirstOrder(ValueError):
    """The formula uses a constructor outside the FO(+Q) fragment."""


class UnassignedVariable(LookupError):
    pass


def lookup(g, x):
    try:
        return g.individual[x]
    except KeyError:
        raise UnassignedVariable(f"variable {x} is unassigned") from None


def atom_holds(structure, g, atom) -> bool:
    if isinstance(atom, S.Eq):
        return lookup(g, atom.left) == lookup(g, atom.right)
    t = tuple(lookup(g, x) for x in atom.args)
    if isinstance(atom, S.Rel):
        try:
            return t in structure.relations[atom.symbol.name]
        except KeyError:
            raise NotFirstOrder(f"relation symbol {atom.symbol.name} is not interpreted") from None
    if isinstance(atom, S.RelVarAtom):
        return t in g.relation(atom.var.name)
    raise NotFirstOrder(f"{type(atom).__name__} is not an atom")


def holds(structure, g, phi, quantifiers=None) -> bool:
    """Truth of ``phi`` in ``(structure, g)``.

    ``quantifiers`` maps names to quantifier definitions; it is only needed
    when ``phi`` contains ``Quant`` nodes.
    """
    if isinstance(phi, S.ATOMS):
        return atom_holds(structure, g, phi)
    if isinstance(phi, S.Not):
        return not holds(structure, g, phi.body, quantifiers)
    if isinstance(phi, S.And):
        return holds(structure, g, phi.left, quantifiers) and holds(structure, g, phi.right, quantifiers)
    if isinstance(phi, S.Exists):
        x = phi.var
        return any(
            holds(structure, g.update({x: a}), phi.body, quantifiers) for a in sorted(structure.domain)
        )
    if isinstance(phi, S.Quant):
        if quantifiers is None or phi.name not in quantifiers:
            raise NotFirstOrder(f"unknown quantifier {phi.name}")
        q = quantifiers[phi.name]
        witnesses = [
            a for a in sorted(structure.domain)
            if holds(structure, g.update({phi.var: a}), phi.body, quantifiers)
        ]
        return q.accepts(len(structure.domain), len(witnesses))
    raise NotFirstOrder(f"{type(phi).__name__} is outside the first-order fragment")
