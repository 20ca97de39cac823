import random

import pytest

from turinglogic import generators as G
from turinglogic import syntax as S
from turinglogic.game import (
    A,
    E,
    FORCED,
    Game,
    GameError,
    JumpTo,
    PickConjunct,
    PickElement,
    PickPoint,
    PickTuple,
    PickWitnessSet,
    Position,
    Sign,
    duality_mirror,
    parse_move,
)
from turinglogic.structure import Assignment, Structure

P = S.RelSym("P", 1)
R = S.RelSym("R", 2)
X = S.RelVar("X", 1)


def Px(v="x"):
    return S.Rel(P, (v,))


def model(n=2, p=(), r=()):
    return Structure(range(n), {"P": {(a,) for a in p}, "R": set(r)}, {"P": 1, "R": 2})


def start(phi, s=None, g=None, sign=Sign.PLUS):
    game = Game(phi)
    return game, game.initial_position(s or model(), g or Assignment(), sign)


# -- movers ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "phi, plus, minus",
    [
        (S.And(S.Eq("x", "x"), S.Eq("x", "x")), A, E),
        (S.Exists("x", S.Eq("x", "x")), E, A),
        (S.Insert(P, ("x",), S.Eq("x", "x")), E, A),
        (S.Delete(P, ("x",), S.Eq("x", "x")), E, A),
        (S.Not(S.Eq("x", "x")), None, None),
        (S.New("x", S.Eq("x", "x")), None, None),
        (S.Loop(1, S.Eq("x", "x")), None, None),
    ],
)
def test_mover_table(phi, plus, minus):
    game = Game(phi)
    g = Assignment({"x": 0})
    assert game.mover(game.initial_position(model(), g, Sign.PLUS)) is plus
    assert game.mover(game.initial_position(model(), g, Sign.MINUS)) is minus


def test_loop_atom_mover_follows_sign():
    phi = S.Loop(1, S.Not(S.LoopAtom(1)))
    game = Game(phi)
    assert game.mover(Position(model(), Assignment(), Sign.PLUS, (0, 0))) is E
    assert game.mover(Position(model(), Assignment(), Sign.MINUS, (0, 0))) is A


def test_quantifier_two_stages():
    phi = S.Quant("even", "x", Px())
    game, p = start(phi)
    assert game.mover(p) is E
    q = game.apply_move(p, PickWitnessSet(frozenset()))
    assert q.at == () and q.pending == frozenset()
    assert game.mover(q) is A
    moves = game.legal_moves(q)
    assert moves == [PickPoint(0, False), PickPoint(1, False)]
    r = game.apply_move(q, PickPoint(1, False))
    assert r.sign is Sign.MINUS and r.assignment["x"] == 1 and r.at == (0,)


def test_quantifier_inside_point_keeps_sign():
    game, p = start(S.Quant("forall", "x", Px()))
    q = game.apply_move(p, PickWitnessSet(frozenset({0, 1})))
    r = game.apply_move(q, PickPoint(0, True))
    assert r.sign is Sign.PLUS


def test_illegal_witness_set_rejected():
    game, p = start(S.Quant("even", "x", Px()))
    with pytest.raises(GameError):
        game.apply_move(p, PickWitnessSet(frozenset({0})))


# -- moves ------------------------------------------------------------------------


def test_new_adds_fresh_point_and_binds():
    game, p = start(S.New("x", Px()))
    q = game.apply_move(p, FORCED)
    assert q.structure.size == 3 and q.assignment["x"] == 2
    assert game.terminal_status(q) is A


def test_negation_flips_sign():
    game, p = start(S.Not(S.Exists("x", Px())))
    q = game.apply_move(p, FORCED)
    assert q.sign is Sign.MINUS and q.at == (0,)


def test_insert_changes_structure_and_binds():
    game, p = start(S.Insert(R, ("x", "y"), S.Rel(R, ("y", "x"))))
    assert len(game.legal_moves(p)) == 4
    q = game.apply_move(p, PickTuple((0, 1)))
    assert (0, 1) in q.structure.relations["R"]
    assert q.assignment["x"] == 0 and q.assignment["y"] == 1
    assert game.terminal_status(q) is A


def test_delete_relation_variable():
    phi = S.Delete(X, ("x",), S.RelVarAtom(X, ("x",)))
    game = Game(phi)
    p = game.initial_position(model(), Assignment(relational={"X": [(0,), (1,)]}))
    q = game.apply_move(p, PickTuple((1,)))
    assert q.assignment.relation("X") == {(0,)}
    assert game.terminal_status(q) is A


def test_repeated_variable_keeps_last_value():
    game, p = start(S.Insert(R, ("x", "x"), Px()))
    q = game.apply_move(p, PickTuple((0, 1)))
    assert (0, 1) in q.structure.relations["R"]
    assert q.assignment["x"] == 1


def test_loop_atom_jumps_to_labeled_instances():
    arm = S.Loop(2, S.LoopAtom(2))
    phi = S.And(arm, S.Loop(2, S.Eq("x", "x")))
    game = Game(phi)
    p = Position(model(), Assignment(), Sign.PLUS, (0, 0))
    assert game.legal_moves(p) == [JumpTo((0,)), JumpTo((1,))]
    with pytest.raises(GameError):
        game.apply_move(p, JumpTo((0, 0)))


def test_exists_rejects_outside_element():
    game, p = start(S.Exists("x", Px()))
    with pytest.raises(GameError):
        game.apply_move(p, PickElement(9))


def test_mismatched_move_type():
    game, p = start(S.Exists("x", Px()))
    with pytest.raises(GameError):
        game.apply_move(p, PickConjunct(0))


# -- terminals --------------------------------------------------------------------


def test_atom_terminal_winner_table():
    game = Game(Px())
    s = model(p=[0])
    for a, sign, winner in [(0, Sign.PLUS, E), (0, Sign.MINUS, A), (1, Sign.PLUS, A), (1, Sign.MINUS, E)]:
        p = game.initial_position(s, Assignment({"x": a}), sign)
        assert game.terminal_status(p) is winner


def test_pathological_loop_atom():
    game = Game(S.LoopAtom(5))
    assert game.terminal_status(game.initial_position(model(), None, Sign.PLUS)) is A
    assert game.terminal_status(game.initial_position(model(), None, Sign.MINUS)) is E


def test_initial_position_checks():
    with pytest.raises(GameError, match="unassigned"):
        Game(Px()).initial_position(model())
    with pytest.raises(GameError, match="interpret"):
        Game(S.Exists("x", S.Rel(S.RelSym("Q", 1), ("x",)))).initial_position(model())
    with pytest.raises(GameError, match="domain"):
        Game(Px()).initial_position(model(), Assignment({"x": 7}))


def test_move_text_round_trip():
    moves = [PickConjunct(0), PickConjunct(1), PickElement(3), PickTuple((0, 2)), JumpTo((0, 1, 1)),
             JumpTo(()), PickWitnessSet(frozenset({1, 2})), PickWitnessSet(frozenset()),
             PickPoint(4, True), PickPoint(0, False), FORCED]
    for m in moves:
        assert parse_move(str(m)) == m


def test_canonical_position_text():
    game, p = start(S.Exists("x", Px()), model(n=1, p=[0]))
    q = game.apply_move(p, PickElement(0))
    assert q.canonical() == "dom=0;P=(0);R= | x:0 | + | /0"


# -- invariants over random plays ---------------------------------------------------


def _random_plays(seed, n, rounds=40):
    rng = random.Random(seed)
    for _ in range(n):
        phi = G.random_loop_sentence(rng, 4)
        game = Game(phi)
        p = game.initial_position(G.random_structure(rng, rng.randint(1, 2)), Assignment(), Sign.PLUS)
        trail = [p]
        for _ in range(rounds):
            if game.terminal_status(p) is not None:
                break
            moves = game.legal_moves(p)
            assert moves, "nonterminal positions must have moves"
            m = rng.choice(moves)
            node = game.node(p)
            q = game.apply_move(p, m)
            yield game, node, p, m, q
            p = q
            trail.append(p)


def test_positions_have_finitely_many_legal_moves():
    for game, node, p, m, q in _random_plays(1, 150):
        moves = game.legal_moves(p)
        assert len(moves) == len(set(moves))
        assert m in moves


def test_sign_flips_only_at_negation():
    for game, node, p, m, q in _random_plays(2, 150):
        flipped = p.sign is not q.sign
        if isinstance(node, S.Not):
            assert flipped
        elif isinstance(node, S.Quant):
            assert flipped == (isinstance(m, PickPoint) and not m.inside)
        else:
            assert not flipped


def test_domain_grows_only_at_new():
    for game, node, p, m, q in _random_plays(3, 150):
        if isinstance(node, S.New):
            assert q.structure.size == p.structure.size + 1
            assert p.structure.domain < q.structure.domain
        else:
            assert q.structure.domain == p.structure.domain


def test_duality_by_simultaneous_traversal():
    # the game from the mirrored position is the original game with roles swapped
    rng = random.Random(4)
    for _ in range(100):
        phi = G.random_loop_sentence(rng, 4)
        game = Game(phi)
        p = game.initial_position(G.random_structure(rng, 2), Assignment(), Sign.PLUS)
        for _ in range(30):
            d = duality_mirror(p)
            term = game.terminal_status(p)
            if term is not None:
                assert game.terminal_status(d) is term.opponent
                break
            mover = game.mover(p)
            assert game.mover(d) is (None if mover is None else mover.opponent)
            moves = game.legal_moves(p)
            assert game.legal_moves(d) == moves
            m = rng.choice(moves)
            assert game.apply_move(d, m) == duality_mirror(game.apply_move(p, m))
            p = game.apply_move(p, m)


def test_memo_key_ignores_dead_variables():
    phi = S.Exists("x", S.And(Px(), S.Exists("y", S.Eq("y", "y"))))
    game = Game(phi)
    s = model()
    a = Position(s, Assignment({"x": 0}), Sign.PLUS, (0, 1))
    b = Position(s, Assignment({"x": 1}), Sign.PLUS, (0, 1))
    assert game.key(a) == game.key(b)
    c = Position(s, Assignment({"x": 0}), Sign.PLUS, (0, 0))
    d = Position(s, Assignment({"x": 1}), Sign.PLUS, (0, 0))
    assert game.key(c) != game.key(d)
