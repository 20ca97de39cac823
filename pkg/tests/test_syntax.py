import random

import pytest

from turinglogic import syntax as S
from formula_gen import random_formula, random_valid_formula

P = S.RelSym("P", 1)
R = S.RelSym("R", 2)
X = S.RelVar("X", 1)


def Px(v="x"):
    return S.Rel(P, (v,))


# -- free variables ------------------------------------------------------------


def test_free_variables_of_loop_atom_is_empty():
    assert S.free_variables(S.LoopAtom(3)) == frozenset()


def test_free_variables_of_equality():
    assert S.free_variables(S.Eq("x", "y")) == {"x", "y"}


def test_relation_variable_insertion_binds_variable_and_arguments():
    phi = S.Insert(X, ("x",), S.RelVarAtom(X, ("x",)))
    assert S.free_variables(phi) == frozenset()


def test_free_variables_of_open_relvar_atom():
    assert S.free_variables(S.RelVarAtom(X, ("y",))) == {X, "y"}


def _oracle_free(phi):
    # written independently from the library, one clause per constructor
    t = type(phi).__name__
    if t == "Rel":
        return set(phi.args)
    if t == "RelVarAtom":
        return set(phi.args) | {phi.var}
    if t == "Eq":
        return {phi.left, phi.right}
    if t == "LoopAtom":
        return set()
    if t in ("Not", "Loop"):
        return _oracle_free(phi.body)
    if t == "And":
        return _oracle_free(phi.left) | _oracle_free(phi.right)
    if t in ("Exists", "New", "Quant"):
        return _oracle_free(phi.body) - {phi.var}
    if t in ("Insert", "Delete"):
        out = _oracle_free(phi.body) - set(phi.args)
        if isinstance(phi.target, S.RelVar):
            out.discard(phi.target)
        return out
    raise AssertionError(t)


def test_free_variables_match_oracle_on_random_formulas():
    rng = random.Random(11)
    for _ in range(1000):
        phi = random_formula(rng, rng.randint(0, 6))
        assert S.depth(phi) <= 6
        assert S.free_variables(phi) == _oracle_free(phi)


# -- subformulae -----------------------------------------------------------------


def test_syntactically_equal_conjuncts_are_distinct_instances():
    entries = S.subformulae(S.And(Px(), Px()))
    assert len(entries) == 3
    paths = [p for p, _ in entries]
    assert paths == [(), (0,), (1,)]


def test_atom_has_one_subformula():
    assert len(S.subformulae(Px())) == 1


def test_labeled_loop_preorder():
    phi = S.Loop(1, S.And(Px(), S.LoopAtom(1)))
    entries = S.subformulae(phi)
    assert [type(n).__name__ for _, n in entries] == ["Loop", "And", "Rel", "LoopAtom"]


def _count_nodes(phi):
    return 1 + sum(_count_nodes(c) for c in phi.children)


def test_subformulae_counts_nodes_with_distinct_paths():
    rng = random.Random(5)
    for _ in range(300):
        phi = random_formula(rng, 5)
        entries = S.subformulae(phi)
        assert len(entries) == _count_nodes(phi)
        assert len({p for p, _ in entries}) == len(entries)
        for path, node in entries:
            assert S.node_at(phi, path) is node


# -- jumps and validation --------------------------------------------------------


def test_two_loops_with_shared_label_have_non_standard_jump():
    k = 4
    arm = S.Loop(k, S.And(Px(), S.LoopAtom(k)))
    assert S.has_non_standard_jump(S.And(arm, arm))


def test_atom_before_labeled_subformula_is_non_standard():
    phi = S.And(S.LoopAtom(2), S.Exists("x", S.Loop(2, Px())))
    assert S.has_non_standard_jump(phi)


def test_atom_inside_its_label_is_standard():
    assert not S.has_non_standard_jump(S.Loop(1, S.And(Px(), S.LoopAtom(1))))


def test_validate_accepts_simple_sentence():
    S.validate(S.Exists("x", S.Eq("x", "x")), {})


def test_validate_reports_jump_with_path_and_rule():
    phi = S.And(S.LoopAtom(2), S.Exists("x", S.Loop(2, Px())))
    with pytest.raises(S.FormulaError) as info:
        S.validate(phi, {"P": 1})
    assert info.value.rule == "non-standard jump"
    assert info.value.path == (0,)


def test_validate_reports_arity_mismatch():
    phi = S.Rel(S.RelSym("P", 2), ("x", "y"))
    with pytest.raises(S.FormulaError) as info:
        S.validate(phi, {"P": 1})
    assert info.value.rule == "arity"


def test_validate_reports_undeclared_symbol():
    with pytest.raises(S.FormulaError) as info:
        S.validate(Px(), {"R": 2})
    assert info.value.rule == "undeclared"


def test_validate_rejects_surface_connectives():
    with pytest.raises(S.FormulaError) as info:
        S.validate(S.Or(Px(), Px()))
    assert info.value.rule == "core"


def test_relvar_arity_must_be_consistent():
    phi = S.And(S.RelVarAtom(S.RelVar("X", 1), ("x",)), S.RelVarAtom(S.RelVar("X", 2), ("x", "y")))
    with pytest.raises(S.FormulaError):
        S.validate(phi)


def test_multiple_labels_are_checked_independently():
    phi = S.And(S.Loop(1, S.LoopAtom(1)), S.Loop(2, S.LoopAtom(2)))
    S.validate(phi)


# -- desugaring --------------------------------------------------------------------


def test_top_is_closed_core_formula():
    top = S.desugar(S.Top())
    assert top == S.Not(S.Exists("v", S.Not(S.Eq("v", "v"))))
    assert S.is_sentence(top)
    assert S.is_core(top)


def test_disjunction_de_morgan():
    a, b = Px("x"), Px("y")
    assert S.desugar(S.Or(a, b)) == S.Not(S.And(S.Not(a), S.Not(b)))


def test_forall_becomes_not_exists_not():
    assert S.desugar(S.Forall("x", Px())) == S.Not(S.Exists("x", S.Not(Px())))


def test_implication_and_bottom():
    a, b = Px("x"), Px("y")
    assert S.desugar(S.Implies(a, b)) == S.Not(S.And(a, S.Not(b)))
    assert S.desugar(S.Bottom()) == S.Not(S.desugar(S.Top()))


def test_validate_after_desugar_on_surface_formulas():
    rng = random.Random(3)
    for _ in range(200):
        core = random_valid_formula(rng, 4)
        surface = S.Or(core, S.Forall("x", S.Implies(S.Top(), S.Bottom())))
        S.validate(S.desugar(surface))


# -- sentences ---------------------------------------------------------------------


def test_is_sentence_examples():
    assert S.is_sentence(S.Exists("x", S.Eq("x", "x")))
    assert not S.is_sentence(Px())


def test_replacing_loop_free_leaf_never_creates_jump():
    rng = random.Random(9)
    for _ in range(200):
        phi = random_valid_formula(rng, 4)
        leaves = [p for p, n in S.subformulae(phi) if isinstance(n, S.ATOMS)]
        if not leaves:
            continue
        target = rng.choice(leaves)
        replacement = S.And(Px("y"), S.Exists("z", S.Eq("z", "x")))
        assert not S.has_non_standard_jump(_replace(phi, target, replacement))


def _replace(phi, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    kids = list(phi.children)
    kids[i] = _replace(kids[i], rest, new)
    if isinstance(phi, S.And):
        return S.And(*kids)
    if isinstance(phi, (S.Not,)):
        return S.Not(kids[0])
    if isinstance(phi, S.Loop):
        return S.Loop(phi.label, kids[0])
    if isinstance(phi, (S.Exists, S.New)):
        return type(phi)(phi.var, kids[0])
    if isinstance(phi, S.Quant):
        return S.Quant(phi.name, phi.var, kids[0])
    return type(phi)(phi.target, phi.args, kids[0])


def test_nodes_are_hashable_values():
    a = S.And(Px(), S.LoopAtom(1))
    b = S.And(Px(), S.LoopAtom(1))
    assert a == b and hash(a) == hash(b)
    assert a != S.And(Px("y"), S.LoopAtom(1))
    with pytest.raises(Exception):
        a.left = Px("z")


def test_arity_must_be_positive():
    with pytest.raises(ValueError):
        S.RelSym("P", 0)
    with pytest.raises(ValueError):
        S.LoopAtom(-1)
