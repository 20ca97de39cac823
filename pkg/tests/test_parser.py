import random

import pytest

from turinglogic import syntax as S
from turinglogic import tmcompile as T
from turinglogic.parser import ParseError, format_model, parse_formula, parse_model, parse_tm, pretty_print
from turinglogic.structure import Structure
from formula_gen import random_valid_formula

P = S.RelSym("P", 1)
R = S.RelSym("R", 2)


def test_parse_simple_existential():
    phi = parse_formula("exists x P(x)", {"P": 1})
    assert phi == S.Exists("x", S.Rel(P, ("x",)))


def test_parse_desugars_surface_connectives():
    phi = parse_formula("forall x (P(x) -> exists y R(x,y))", {"P": 1, "R": 2})
    assert S.is_core(phi)
    expected = S.desugar(S.Forall("x", S.Implies(S.Rel(P, ("x",)), S.Exists("y", S.Rel(R, ("x", "y"))))))
    assert phi == expected


def test_parse_loop_and_updates():
    phi = parse_formula("#1{ new x ins $X(x) (del R(x,y) $X(x) | #1) }", {"R": 2})
    assert isinstance(phi, S.Loop) and phi.label == 1
    new = phi.body
    assert isinstance(new, S.New)
    ins = new.body
    assert isinstance(ins, S.Insert) and ins.target == S.RelVar("X", 1)


def test_parse_generalized_quantifier():
    phi = parse_formula("Qeven x P(x)", {"P": 1}, {"even"})
    assert phi == S.Quant("even", "x", S.Rel(P, ("x",)))


def test_unknown_quantifier_is_reported():
    with pytest.raises(ParseError, match="unknown quantifier"):
        parse_formula("Qwhatever x P(x)", {"P": 1}, {"even"})


def test_top_and_bottom_letters():
    assert parse_formula("T") == S.desugar(S.Top())
    assert parse_formula("F") == S.desugar(S.Bottom())


def test_unparenthesized_binary_is_an_error():
    with pytest.raises(ParseError):
        parse_formula("P(x) & P(y)", {"P": 1})


def test_arity_error_span_covers_atom():
    text = "exists x R(x)"
    with pytest.raises(ParseError) as info:
        parse_formula(text, {"R": 2})
    span = info.value.diagnostic.span
    assert text.encode()[span.begin:span.end] == b"R(x)"
    assert span.line == 1 and span.column == 10


def test_undeclared_symbol():
    with pytest.raises(ParseError, match="undeclared"):
        parse_formula("exists x Q1(x)", {"P": 1})


def test_non_standard_jump_points_at_loop_atom():
    text = "(#2 & exists x #2{ P(x) })"
    with pytest.raises(ParseError) as info:
        parse_formula(text, {"P": 1})
    d = info.value.diagnostic
    assert text[d.span.begin:d.span.end] == "#2"
    assert "non-standard jump" in d.message


def test_diagnostic_line_and_column_on_later_line():
    text = "exists x\n  (P(x) &\n   R(x))"
    with pytest.raises(ParseError) as info:
        parse_formula(text, {"P": 1, "R": 2})
    span = info.value.diagnostic.span
    assert (span.line, span.column) == (3, 4)
    assert str(info.value).startswith("3:4: error:")


def test_span_offsets_are_utf8_bytes():
    text = "// é\nexists x R(x)"
    with pytest.raises(ParseError) as info:
        parse_formula(text, {"R": 2})
    span = info.value.diagnostic.span
    assert text.encode("utf-8")[span.begin:span.end] == b"R(x)"


def test_trailing_input():
    with pytest.raises(ParseError, match="trailing"):
        parse_formula("P(x) P(y)", {"P": 1})


def test_relvar_arity_conflict():
    with pytest.raises(ParseError, match="relation variable"):
        parse_formula("($X(x) & $X(x,y))")


def test_pretty_print_examples():
    phi = S.Loop(1, S.Not(S.And(S.Rel(P, ("x",)), S.LoopAtom(1))))
    assert pretty_print(phi) == "#1{~(P(x) & #1)}"
    assert pretty_print(S.Insert(S.RelVar("X", 1), ("x",), S.Eq("x", "y"))) == "ins $X(x) x = y"


def test_round_trip_on_random_formulas():
    rng = random.Random(2024)
    for _ in range(1000):
        phi = random_valid_formula(rng, rng.randint(0, 6))
        assert parse_formula(pretty_print(phi)) == phi


def test_round_trip_on_compiled_machines():
    for tm in (T.even_as_machine(), T.right_forever_machine(), T.mark_machine(), T.encoding_parity_machine()):
        phi = T.compile_tm(tm)
        assert parse_formula(pretty_print(phi), T.compile_vocabulary(tm)) == phi


# -- models ----------------------------------------------------------------------


def test_parse_model_example():
    vocab, s = parse_model("domain 3\nrel R/2 = (0,1) (1,2)  # chain\nrel P/1 =\n")
    assert vocab == {"R": 2, "P": 1}
    assert s.size == 3
    assert s.relations["R"] == {(0, 1), (1, 2)}
    assert s.relations["P"] == frozenset()


def test_format_model_round_trip():
    s = Structure(range(4), {"R": {(0, 1), (3, 3)}, "P": {(2,)}}, {"R": 2, "P": 1})
    assert parse_model(format_model(s))[1] == s


@pytest.mark.parametrize(
    "text, message",
    [
        ("domain 0", "nonempty"),
        ("rel R/1 = (0)", "before"),
        ("domain 2\nrel R/1 = (2)", "out of range"),
        ("domain 2\nrel R/1 = (0)(0)", "duplicate tuple"),
        ("domain 2\nrel R/2 = (0)", "arity"),
        ("domain 2\nrel R/1 = (0)\nrel R/1 = (1)", "twice"),
        ("domain 2\ndomain 3", "duplicate domain"),
        ("", "missing"),
    ],
)
def test_model_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_model(text)


def test_model_error_points_at_tuple():
    text = "domain 2\nrel R/1 = (0) (5)"
    with pytest.raises(ParseError) as info:
        parse_model(text)
    span = info.value.diagnostic.span
    assert text[span.begin:span.end] == "(5)"
    assert span.line == 2


# -- machines --------------------------------------------------------------------

EVEN = T.EVEN_AS_SOURCE


def test_parse_tm_matches_builtin():
    assert parse_tm(EVEN) == T.even_as_machine()


def test_tm_to_text_round_trip():
    for tm in (T.even_as_machine(), T.mark_machine(), T.encoding_parity_machine()):
        assert parse_tm(tm.to_text()) == tm


def test_tm_duplicate_transition():
    text = EVEN + "\ntrans even,a -> odd,a,L\n"
    with pytest.raises(ParseError, match="deterministic"):
        parse_tm(text)


def test_tm_bad_transition_syntax():
    with pytest.raises(ParseError, match="trans"):
        parse_tm(EVEN + "\ntrans even a -> odd\n")


def test_tm_unknown_section():
    with pytest.raises(ParseError, match="unknown section"):
        parse_tm(EVEN + "\ncolour blue\n")


def test_tm_semantic_error_becomes_parse_error():
    text = EVEN.replace("start init", "start nowhere")
    with pytest.raises(ParseError):
        parse_tm(text)
