"""Generalized quantifiers as two-stage game moves.

The chooser names a witness set from the quantifier's interpretation; the
opponent then points inside it (keeping the sign) or outside it (flipping).
"""
from turinglogic.parser import parse_formula
from turinglogic.quantifier import builtin_quantifiers, load_quantifiers, tarski_q_eval
from turinglogic.solver import evaluate
from turinglogic.structure import Assignment, Structure

registry = load_quantifiers("quant Two: 3 2 -> 1\nquant Two: 4 2 -> 1\n", builtin_quantifiers())
vocab = {"P": 1}

for members in ([], [0], [0, 1], [0, 1, 2]):
    s = Structure(range(3), {"P": {(a,) for a in members}}, vocab)
    row = []
    for name in ("even", "majority", "Two"):
        phi = parse_formula(f"Q{name} x P(x)", vocab, registry)
        verdict, _ = evaluate(s, Assignment(), phi, budget=20, quantifiers=registry)
        truth = tarski_q_eval(s, Assignment(), phi, registry)
        row.append(f"{name}={verdict} (witness clause: {truth})")
    print(f"P={members}: " + ", ".join(row))
