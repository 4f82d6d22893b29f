from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genericlab.measure_algebra import AlgebraAutomorphism, Event, FiniteAlgebra, apply, measure, power
from genericlab.type_space import (
    PairTree,
    SIViolation,
    TypeTree,
    autodist_profile,
    coupling_lp,
    coupling_lower_bound,
    integral_lower_bound,
    pair_type_of,
    realize,
    separation_bound,
    type_of,
    type_over_algebra,
    validate_si,
    window_tree,
)


@st.composite
def realized(draw, max_atoms=9):
    n = draw(st.integers(1, max_atoms))
    alg = FiniteAlgebra.uniform(n)
    t = AlgebraAutomorphism(alg, draw(st.permutations(range(n))))
    a = Event(alg, draw(st.sets(st.integers(0, n - 1))))
    return t, a


def test_fixed_event_tree():
    alg = FiniteAlgebra.uniform(4)
    t = AlgebraAutomorphism(alg, [1, 0, 3, 2])
    a = alg.event([0, 1])
    tree = type_of(a, t, 3)
    assert tree.values == {"": 1, "0": F(1, 2), "1": F(1, 2), "00": F(1, 2), "11": F(1, 2), "000": F(1, 2), "111": F(1, 2)}
    assert validate_si(tree)


def test_si_violations_detected():
    assert not validate_si(TypeTree(1, {"": 1, "0": F(1, 3), "1": F(1, 3)}))
    # child sums hold, shift consistency fails: "01" has mass, "10" does not
    bad = TypeTree(2, {"": 1, "0": F(1, 2), "1": F(1, 2), "01": F(1, 2), "11": F(1, 2)})
    assert not validate_si(bad)
    with pytest.raises(SIViolation):
        realize(bad)


def test_json_roundtrip_and_truncate():
    alg = FiniteAlgebra.uniform(5)
    t = AlgebraAutomorphism(alg, [1, 2, 3, 4, 0])
    tree = type_of(alg.event([0, 2]), t, 4)
    assert TypeTree.from_json(tree.to_json()) == tree
    assert tree.truncate(2) == type_of(alg.event([0, 2]), t, 2)


@settings(max_examples=150, deadline=None)
@given(realized(), st.integers(1, 5))
def test_type_of_is_shift_invariant(tn, depth):
    t, a = tn
    assert validate_si(type_of(a, t, depth))


@settings(max_examples=150, deadline=None)
@given(realized(), st.integers(1, 4))
def test_tree_values_match_itinerary_events(tn, depth):
    t, a = tn
    tree = type_of(a, t, depth)
    for s, v in tree.level(depth).items():
        ev = a.algebra.full()
        for i, c in enumerate(s):
            ai = apply(power(t, i), a)
            ev = ev & (ai if c == "0" else ~ai)
        assert measure(ev) == v


@settings(max_examples=100, deadline=None)
@given(realized(), st.integers(2, 4))
def test_autodist_reads_measured_distance(tn, depth):
    t, a = tn
    tree = type_of(a, t, depth)
    for n in range(1, depth):
        assert autodist_profile(tree, n) == measure(a ^ apply(power(t, n), a))


@settings(max_examples=60, deadline=None)
@given(realized(), st.integers(1, 4))
def test_realize_reproduces_windows(tn, depth):
    t, a = tn
    tree = type_of(a, t, depth)
    alg, events, _ = realize(tree)
    for off in range(2):
        assert window_tree(events, off, depth) == tree


@settings(max_examples=60, deadline=None)
@given(realized(8), st.data())
def test_lp_bound_is_sound(tn, data):
    t, a = tn
    b = Event(a.algebra, data.draw(st.sets(st.integers(0, a.algebra.atom_count - 1))))
    depth = data.draw(st.integers(1, 3))
    p, q = type_of(a, t, depth), type_of(b, t, depth)
    res = coupling_lp(p, q, depth)
    assert res.bound <= measure(a ^ b)
    assert res.coupling.is_valid()
    assert res.coupling.marginal(0) == p and res.coupling.marginal(1) == q
    # the realized pair is a feasible coupling
    joint = pair_type_of(a, b, t, depth)
    assert joint.is_valid() and joint.disagreement() == measure(a ^ b)
    if depth >= 2:
        assert separation_bound(p, q, depth - 1) <= measure(a ^ b)


def test_lp_separates_disjoint_types():
    alg = FiniteAlgebra.uniform(4)
    ident = alg.identity()
    cyc = AlgebraAutomorphism(alg, [1, 0, 3, 2])
    # half-measure invariant event vs an event flipped by the involution
    p = type_of(alg.event([0, 1]), ident, 2)
    q = type_of(alg.event([0, 2]), cyc, 2)
    assert coupling_lower_bound(p, q, 1) == 0
    assert coupling_lower_bound(p, q, 2) == F(1, 2)
    with pytest.raises(ValueError):
        coupling_lp(p, q, 3)


def test_type_over_algebra_and_integral(rng):
    alg = FiniteAlgebra.uniform(6)
    t = AlgebraAutomorphism(alg, [1, 2, 0, 4, 5, 3])
    blocks = [alg.event([0, 1, 2]), alg.event([3, 4, 5])]
    P = type_over_algebra(alg.event([0, 3, 4]), t, blocks, 2)
    Q = type_over_algebra(alg.event([0, 1, 3]), t, blocks, 2)
    assert P.is_valid() and Q.is_valid()
    assert P.averaged() == type_of(alg.event([0, 3, 4]), t, 2)
    assert integral_lower_bound(P, Q, lambda p, q: coupling_lower_bound(p, q, 2)) <= F(2, 6)
    with pytest.raises(ValueError):
        type_over_algebra(alg.event([0]), t, [alg.event([0, 1]), alg.event([2, 3, 4, 5])], 2)


def test_pair_tree_letters():
    leaves = {"1": F(1, 2), "2": F(1, 2)}
    pt = PairTree.from_leaves(1, leaves)
    assert pt.disagreement() == 1
    assert pt.marginal(0).value("0") == F(1, 2)
