"""The compiled and pure combination kernels must be interchangeable."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credence import _kernel_py, kernel


def brute_force_combine(a, b):
    """Independent oracle: enumerate every focal pair, no hashing tricks."""
    acc = {}
    conflict = 0.0
    for ca, ma in a.items():
        for cb, mb in b.items():
            c = ca & cb
            if c == 0:
                conflict += ma * mb
            else:
                acc[c] = acc.get(c, 0.0) + ma * mb
    if conflict >= 1.0 - 1e-12:
        return None, conflict
    return {c: m / (1.0 - conflict) for c, m in acc.items()}, conflict


def random_masses(draw, width, max_focals=6):
    n = draw(st.integers(1, max_focals))
    codes = draw(
        st.lists(
            st.integers(1, (1 << width) - 1),
            min_size=n,
            max_size=n,
            unique=True,
        )
    )
    weights = draw(
        st.lists(
            st.floats(0.01, 1.0, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    total = sum(weights)
    return {c: w / total for c, w in zip(codes, weights)}


@st.composite
def mass_pair(draw, width=6):
    return random_masses(draw, width), random_masses(draw, width)


@settings(max_examples=300)
@given(mass_pair())
def test_compiled_matches_pure(pair):
    a, b = pair
    if not kernel.HAVE_COMPILED:
        pytest.skip("compiled kernel unavailable")
    got_c, k_c = kernel._compiled.combine_masses(a, b, 1e-12)
    got_p, k_p = _kernel_py.combine_masses(a, b, 1e-12)
    assert math.isclose(k_c, k_p, abs_tol=1e-12)
    if got_p is None:
        assert got_c is None
        return
    assert got_c.keys() == got_p.keys()
    for code in got_p:
        assert math.isclose(got_c[code], got_p[code], abs_tol=1e-12)


@settings(max_examples=300)
@given(mass_pair())
def test_pure_matches_brute_force(pair):
    a, b = pair
    got, k = _kernel_py.combine_masses(a, b, 1e-12)
    want, k_want = brute_force_combine(a, b)
    assert math.isclose(k, k_want, abs_tol=1e-12)
    if want is None:
        assert got is None
        return
    assert got.keys() == want.keys()
    for code in want:
        assert math.isclose(got[code], want[code], abs_tol=1e-12)


@given(mass_pair(), st.integers(1, 63))
def test_bel_matches_subset_sum(pair, target):
    a, _ = pair
    want = sum(m for code, m in a.items() if code & target == code)
    assert math.isclose(
        kernel.bel_of(a, target, 6), want, abs_tol=1e-12
    )
    assert math.isclose(
        _kernel_py.bel_of(a, target), want, abs_tol=1e-12
    )


def test_total_conflict_returns_none():
    got, k = kernel.combine_masses({0b01: 1.0}, {0b10: 1.0}, 1e-12, 2)
    assert got is None
    assert math.isclose(k, 1.0)


def test_near_total_conflict_respects_tolerance():
    a = {0b01: 1.0 - 1e-15, 0b11: 1e-15}
    b = {0b10: 1.0}
    got, _ = kernel.combine_masses(a, b, 1e-12, 2)
    assert got is None  # conflict within tol of 1: treated as total


def test_wide_frames_take_the_pure_path():
    width = 100
    hi = 1 << 99
    a = {hi | 1: 0.5, (1 << width) - 1: 0.5}
    b = {hi: 1.0}
    got, k = kernel.combine_masses(a, b, 1e-12, width)
    assert got == {hi: 1.0}
    assert k == 0.0
    assert kernel.active_kernel_name(width) == "pure-python"


def test_dispatch_names():
    name = kernel.active_kernel_name(19)
    assert name in ("compiled", "pure-python")
    if kernel.HAVE_COMPILED:
        assert name == "compiled"


def test_empty_never_appears_in_output():
    got, _ = kernel.combine_masses(
        {0b110: 0.7, 0b111: 0.3}, {0b011: 1.0}, 1e-12, 3
    )
    assert 0 not in got
    assert math.isclose(sum(got.values()), 1.0, abs_tol=1e-12)
