import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from borda_dynamics.weak_orders import (
    WeakOrder,
    antipode,
    borda_scores,
    enumerate_weak_orders,
    format_order,
    fubini,
    kemeny_distance,
    margin_from_ties,
    parse_order,
    project,
    weak_order,
)


def o(text, m=3):
    return parse_order(text, m)


# --- counting ----------------------------------------------------------------

def test_fubini_values():
    assert [fubini(m) for m in range(1, 7)] == [1, 3, 13, 75, 541, 4683]


def test_fubini_rejects_empty_domain():
    with pytest.raises(ValueError):
        fubini(0)
    with pytest.raises(ValueError):
        enumerate_weak_orders(0)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_enumeration_length_matches_fubini(m):
    assert len(enumerate_weak_orders(m)) == fubini(m)


def _orders_by_surjection(m):
    # independent oracle: weak orders = surjections onto {0..k-1} read as levels
    found = set()
    for k in range(1, m + 1):
        for levels in product(range(k), repeat=m):
            if set(levels) == set(range(k)):
                found.add(tuple(tuple(a for a in range(m) if levels[a] == lev) for lev in range(k)))
    return found


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_enumeration_matches_surjection_oracle(m):
    assert {w.classes for w in enumerate_weak_orders(m)} == _orders_by_surjection(m)


def test_canonical_ids_are_positions():
    for m in (2, 3, 4):
        for i, w in enumerate(enumerate_weak_orders(m)):
            assert w.canonical_id == i


def test_weak_order_validation():
    with pytest.raises(ValueError):
        WeakOrder(((0,), (0, 1)))  # duplicate alternative
    with pytest.raises(ValueError):
        WeakOrder(((0,), (2,)))  # gap in indices
    with pytest.raises(ValueError):
        WeakOrder(((1, 0),))  # class not sorted
    with pytest.raises(ValueError):
        weak_order([[]])  # empty class
    assert weak_order([[1, 0], [2]]).classes == ((0, 1), (2,))


# --- Borda scores and projection ----------------------------------------------

def test_borda_score_examples():
    assert borda_scores(o("x>y>z")) == (2, 1, 0)
    assert borda_scores(o("(xyz)")) == (1, 1, 1)
    assert borda_scores(o("(xy)>z")) == (Fraction(3, 2), Fraction(3, 2), 0)


def test_borda_scores_sum_is_constant():
    for m in (3, 4):
        total = Fraction(m * (m - 1), 2)
        for w in enumerate_weak_orders(m):
            assert sum(borda_scores(w)) == total


@pytest.mark.parametrize("m", [3, 4])
def test_projection_roundtrip_exhaustive(m):
    for w in enumerate_weak_orders(m):
        assert project(borda_scores(w)) == w


@pytest.mark.parametrize("m", [3, 4])
def test_borda_injective(m):
    scores = {borda_scores(w) for w in enumerate_weak_orders(m)}
    assert len(scores) == fubini(m)


def test_project_examples():
    assert project((2, 1, 0)) == o("x>y>z")
    assert project((1, 1, 1)) == o("(xyz)")
    assert project((Fraction(3, 2), 1, Fraction(1, 2))) == o("x>y>z")


def test_project_rejects_floats():
    with pytest.raises(TypeError):
        project((1.0, 0.5, 0.0))


# --- antipode -------------------------------------------------------------------

def test_antipode_examples():
    assert antipode(o("x>y>z")) == o("z>y>x")
    assert antipode(o("(xyz)")) == o("(xyz)")
    assert antipode(o("(xy)>z")) == o("z>(xy)")


@pytest.mark.parametrize("m", [3, 4])
def test_antipode_involution_and_score_identity(m):
    ones = tuple(m - 1 for _ in range(m))
    for w in enumerate_weak_orders(m):
        assert antipode(antipode(w)) == w
        flipped = borda_scores(antipode(w))
        assert tuple(a + b for a, b in zip(flipped, borda_scores(w))) == ones


# --- margins ---------------------------------------------------------------------

def test_margin_examples():
    assert margin_from_ties((2, 1, 0)) == 1
    assert margin_from_ties((Fraction(3, 2), Fraction(3, 2), 0)) == Fraction(3, 2)
    assert margin_from_ties((1, 1, 1)) == math.inf


def test_margin_is_always_positive_on_borda_images():
    # separated alternatives have distinct scores, so the margin is never 0
    for w in enumerate_weak_orders(4):
        margin = margin_from_ties(borda_scores(w))
        assert margin == math.inf or margin > 0


# --- Kemeny distance ----------------------------------------------------------------

def test_kemeny_examples():
    assert kemeny_distance(o("(xyz)"), o("x>y>z")) == 3
    assert kemeny_distance(o("x>y>z"), o("x>y>z")) == 0
    assert kemeny_distance(o("x>y>z"), o("z>y>x")) == 6


def test_kemeny_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        kemeny_distance(o("x>y>z"), parse_order("x>y", 2))


def test_kemeny_is_a_metric_on_three_alternatives():
    space = enumerate_weak_orders(3)
    for a in space:
        for b in space:
            d = kemeny_distance(a, b)
            assert d == kemeny_distance(b, a)
            assert (d == 0) == (a == b)
    for a in space:
        for b in space:
            dab = kemeny_distance(a, b)
            for c in space:
                assert dab <= kemeny_distance(a, c) + kemeny_distance(c, b)


# --- text format -----------------------------------------------------------------------

def test_format_examples():
    assert format_order(o("x>y>z")) == "x>y>z"
    assert str(o("(xy)>z")) == "(xy)>z"
    assert format_order(parse_order("(01)>2>(34)", 5)) == "(01)>2>(34)"


def test_parse_tolerates_whitespace():
    assert parse_order(" x > (y z) ", 3) == o("x>(yz)")


@pytest.mark.parametrize("text", ["", "x>y", "x>>z", "xy>z", "x>(y)z", "w>y>z"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_order(text, 3)


@given(st.integers(min_value=2, max_value=6).flatmap(
    lambda m: st.tuples(st.just(m), st.integers(min_value=0, max_value=fubini(m) - 1))
))
def test_parse_format_roundtrip(case):
    m, idx = case
    w = enumerate_weak_orders(m)[idx]
    assert parse_order(format_order(w), m) == w


def test_custom_alternative_names_roundtrip():
    names = ("a", "b", "c")
    w = o("x>(yz)")
    assert format_order(w, names) == "a>(bc)"
    assert parse_order("a>(bc)", 3, names) == w
