"""Machines as structure classifiers.

A structure is written as a bit string (domain prefix, then one bit per
tuple) and handed to a machine over {0,1}.  The parity machine accepts when
the relation part holds an even number of tuples, so its answer does not
depend on the element order used for the encoding.
"""
import itertools

from turinglogic import tmcompile as T
from turinglogic.structure import Structure, encode

tm = T.encoding_parity_machine()
s = Structure(range(3), {"R": {(0, 1), (1, 2)}}, {"R": 2})
for order in itertools.permutations(range(3)):
    bits = encode(s, list(order))
    print(f"order {order}: {bits} -> {T.classify(tm, s, list(order))}")
