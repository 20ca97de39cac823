"""A loop only the letter a can leave.

On a one-point word model, the looping sentence is decided when the point
carries a and stays undecided at every depth when it does not.
"""
from turinglogic.game import Sign
from turinglogic.parser import parse_formula
from turinglogic.solver import evaluate
from turinglogic.structure import Assignment, WordSpec, word_model

phi = parse_formula("#1{ (Pa(x) | #1) }", {"Succ": 2, "Pa": 1, "Pb": 1})
g = Assignment({"x": 1})

for word in ("a", "b"):
    s = word_model(WordSpec("ab", word))
    for sign in (Sign.PLUS, Sign.MINUS):
        verdict, stats = evaluate(s, g, phi, sign, budget=200)
        print(f"w={word} sign={sign}: {verdict}  ({stats.nodes} nodes)")
