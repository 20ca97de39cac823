import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from turinglogic.structure import (
    Assignment,
    Structure,
    StructureError,
    WordSpec,
    decode,
    encode,
    word_model,
    word_vocabulary,
)


def edge():
    return Structure(range(2), {"R": {(0, 1)}}, {"R": 2})


def test_empty_domain_rejected():
    with pytest.raises(StructureError):
        Structure([], {}, {})


def test_out_of_domain_tuple_rejected():
    with pytest.raises(StructureError):
        Structure(range(2), {"R": {(0, 2)}}, {"R": 2})


def test_empty_relation_needs_arity():
    with pytest.raises(StructureError):
        Structure(range(2), {"R": set()})
    assert Structure(range(2), {"R": set()}, {"R": 2}).arities == {"R": 2}


def test_add_fresh_point_is_isolated_and_leaves_original():
    s = edge()
    s2, b = s.add_fresh_point()
    assert b == 2
    assert s2.domain == {0, 1, 2}
    assert s2.relations["R"] == s.relations["R"]
    assert s.size == 2


def test_insert_and_delete_are_pure():
    s = edge()
    s2 = s.insert_tuple("R", (1, 0))
    assert (1, 0) in s2.relations["R"] and (1, 0) not in s.relations["R"]
    assert s2.delete_tuple("R", (1, 0)) == s
    assert s.insert_tuple("R", (0, 1)) is s
    with pytest.raises(StructureError):
        s.insert_tuple("R", (0,))
    with pytest.raises(StructureError):
        s.insert_tuple("Q", (0, 0))


def test_structures_are_immutable_values():
    a, b = edge(), edge()
    assert a == b and hash(a) == hash(b)
    with pytest.raises(AttributeError):
        a.domain = frozenset()


def test_relabel():
    s = edge().relabel({0: 5, 1: 3})
    assert s.domain == {3, 5}
    assert s.relations["R"] == {(5, 3)}


def test_canonical_text():
    assert edge().canonical() == "dom=0,1;R=(0,1)"


def test_assignment_update_and_relation_default():
    g = Assignment({"x": 0})
    h = g.update({"y": 1}, {"X": [(0,)]})
    assert "y" not in g and h["y"] == 1
    assert h.relation("X") == {(0,)}
    assert g.relation("X") == frozenset()


def test_assignment_update_checks_domain():
    with pytest.raises(StructureError):
        Assignment().update({"x": 7}, structure=edge())
    with pytest.raises(StructureError):
        Assignment().update(relational={"X": [(0, 1)]}, arities={"X": 1})


def test_word_model_abbaa():
    s = word_model(WordSpec("ab", "abbaa"))
    assert s.size == 6
    assert s.relations["Succ"] == {(i, i + 1) for i in range(5)}
    assert s.relations["Pa"] == {(1,), (4,), (5,)}
    assert s.relations["Pb"] == {(2,), (3,)}
    assert word_vocabulary("ab") == {"Succ": 2, "Pa": 1, "Pb": 1}


def test_word_model_rejects_foreign_symbol():
    with pytest.raises(StructureError):
        WordSpec("ab", "abc")


def test_encode_examples():
    assert encode(edge()) == "0010100"
    assert encode(Structure([0], {}, {})) == "01"
    assert encode(edge(), [1, 0]) == "0010010"


def test_encode_symbol_order():
    s = Structure(range(1), {"A": {(0,)}, "B": set()}, {"A": 1, "B": 1})
    assert encode(s) == "0110"
    assert encode(s, symbol_order=["B", "A"]) == "0101"


def test_decode_errors():
    with pytest.raises(StructureError):
        decode("1", [])
    with pytest.raises(StructureError):
        decode("0010", [2])
    with pytest.raises(StructureError):
        decode("01x", [])


def _structures(max_size=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_size))
        arities = draw(st.lists(st.integers(1, 2), max_size=3))
        names = [f"R{i}" for i in range(len(arities))]
        rels = {}
        for name, k in zip(names, arities):
            all_t = list(itertools.product(range(n), repeat=k))
            rels[name] = {t for t in all_t if draw(st.booleans())}
        order = draw(st.permutations(range(n)))
        return Structure(range(n), rels, dict(zip(names, arities))), names, arities, list(order)

    return build()


@settings(max_examples=200, deadline=None)
@given(_structures())
def test_encode_decode_round_trip(data):
    s, names, arities, order = data
    bits = encode(s, order, names)
    assert len(bits) == s.size + 1 + sum(s.size ** k for k in arities)
    back = decode(bits, arities, names)
    assert back.relabel({i: order[i] for i in range(s.size)}) == s


def test_isomorphic_copies_share_encoding_under_matching_orders():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 4)
        s = Structure(range(n), {"R": {t for t in itertools.product(range(n), repeat=2) if rng.random() < 0.4}}, {"R": 2})
        perm = list(range(n))
        rng.shuffle(perm)
        iso = s.relabel(dict(enumerate(perm)))
        assert encode(s) == encode(iso, [perm[i] for i in range(n)])
