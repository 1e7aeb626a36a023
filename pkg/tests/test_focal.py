"""Bit-vector focal sets against a plain name-set oracle."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from credence import (
    FocalSet,
    FrameSignature,
    UnknownElementError,
    cardinality,
    complement,
    intersect,
    is_empty,
    is_subset,
    union,
)
from credence.errors import FrameMismatchError

SIG = FrameSignature("F", ("a", "b", "c", "d", "e"))


def test_bit_assignment_follows_declaration_order():
    assert SIG.bit_of("a") == 0
    assert SIG.bit_of("e") == 4
    assert SIG.width == 5
    assert SIG.full_code == 0b11111


def test_encode_decode_round_trip():
    s = SIG.encode(["d", "a"])
    assert s.code == 0b01001
    assert SIG.decode(s) == ["a", "d"]  # declaration order, not input order
    assert SIG.encode([]).code == 0


def test_unknown_element_rejected():
    with pytest.raises(UnknownElementError):
        SIG.bit_of("z")
    with pytest.raises(UnknownElementError):
        SIG.encode(["a", "z"])


def test_duplicate_elements_rejected():
    with pytest.raises(Exception):
        FrameSignature("F", ("a", "a"))


def test_code_range_checked():
    with pytest.raises(Exception):
        FocalSet("F", 1 << 5, 5)
    with pytest.raises(Exception):
        FocalSet("F", -1, 5)


def test_cross_frame_operations_rejected():
    other = FrameSignature("G", ("a", "b")).encode(["a"])
    with pytest.raises(FrameMismatchError):
        intersect(SIG.encode(["a"]), other)


def test_operators_match_functions():
    x = SIG.encode(["a", "b"])
    y = SIG.encode(["b", "c"])
    assert (x & y).code == intersect(x, y).code == 0b00010
    assert (x | y).code == union(x, y).code == 0b00111
    assert (~x).code == complement(x).code == 0b11100
    assert len(x) == cardinality(x) == 2
    assert bool(SIG.empty_set()) is False
    assert is_empty(SIG.empty_set())


members = st.sets(st.sampled_from(SIG.elements))


@given(members, members)
def test_algebra_matches_set_oracle(a_names, b_names):
    a, b = SIG.encode(a_names), SIG.encode(b_names)
    assert set(SIG.decode(intersect(a, b))) == a_names & b_names
    assert set(SIG.decode(union(a, b))) == a_names | b_names
    assert set(SIG.decode(complement(a))) == set(SIG.elements) - a_names
    assert is_subset(a, b) == (a_names <= b_names)
    assert cardinality(a) == len(a_names)
    assert is_empty(a) == (not a_names)


@given(members)
def test_complement_involution(a_names):
    a = SIG.encode(a_names)
    assert complement(complement(a)).code == a.code


def test_wide_frame_codes_are_exact():
    wide = FrameSignature("W", tuple(f"e{i}" for i in range(130)))
    s = wide.encode(["e0", "e129"])
    assert s.code == 1 | (1 << 129)
    assert wide.decode(complement(s)) == [f"e{i}" for i in range(1, 129)]
