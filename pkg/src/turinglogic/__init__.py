"""A looping, Turing-complete extension of first-order logic with
game-theoretic semantics: syntax, parsing, finite structures, the semantic
game, bounded game search, generalized quantifiers and a Turing-machine
compiler."""
from .game import A, E, Game, GameError, Player, Position, Sign
from .parser import ParseError, parse_formula, parse_model, parse_tm, pretty_print
from .quantifier import QuantifierDef, builtin_quantifiers, load_quantifiers, q_interpretation, tarski_q_eval
from .solver import (
    BoundedValue, Counterexample, SearchStats, Solver, Strategy, Verdict, VerdictKind, Verified,
    bounded_value, eval_fo_tarski, evaluate, extract_strategy, verify_strategy,
)
from .structure import Assignment, Structure, WordSpec, decode, encode, word_model
from .syntax import free_variables, has_non_standard_jump, is_sentence, subformulae, validate
from .tmcompile import (
    Outcome, RunResult, TMError, TuringMachine, certify, classify, compile_tm, emit_certificate, simulate,
)

__version__ = "0.1.0"
