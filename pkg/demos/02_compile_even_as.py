"""Compile the even-a's machine to a sentence and check it against the run.

For each short word the machine is simulated, the compiled sentence is
evaluated with both signs, and a certificate (a strategy for ∃) is extracted
and replayed against every ∀ choice.
"""
import itertools

from turinglogic import syntax as S
from turinglogic import tmcompile as T
from turinglogic.game import Sign
from turinglogic.solver import evaluate

tm = T.even_as_machine()
phi = T.compile_tm(tm)
print(f"compiled sentence: {S.size(phi)} nodes, depth {S.depth(phi)}")

game = T.compiled_game(tm)
for n in range(3):
    for w in itertools.product("ab", repeat=n):
        word = "".join(w) or "ε"
        run = T.simulate(tm, w, 100)
        s = T.tm_word_model(tm, w)
        plus, _ = evaluate(s, None, None, Sign.PLUS, budget=2000, geometric=True, game=game)
        minus, _ = evaluate(s, None, None, Sign.MINUS, budget=2000, geometric=True, game=game)
        report = T.certify(tm, w, 100)
        print(f"{word:>3}: run {run}, + {plus}, - {minus}, certificate {report.check}")
