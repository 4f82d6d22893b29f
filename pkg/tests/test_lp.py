from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genericlab.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp
from genericlab.oracles import vertex_enumeration_lp

scipy_optimize = pytest.importorskip("scipy.optimize")


def test_small_program():
    # min x0 + 2 x1 s.t. x0 + x1 = 1, x >= 0
    res = solve_lp([1, 2], [[1, 1]], [1])
    assert res.status == OPTIMAL and res.value == 1 and res.x == (1, 0)


def test_infeasible_and_unbounded():
    assert solve_lp([1, 1], [[1, 1]], [-1]).status == INFEASIBLE
    assert solve_lp([-1, 0], [[1, -1]], [0]).status == UNBOUNDED


def test_redundant_rows_are_dropped():
    res = solve_lp([1, 1, 0], [[1, 1, 1], [2, 2, 2]], [1, 2])
    assert res.status == OPTIMAL and res.value == 0


def test_degenerate_cycling_example_terminates():
    # Beale's example in equality form with slacks; Bland's rule avoids cycling
    A = [
        [Fraction(1, 4), -8, -1, 9, 1, 0, 0],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6, 0, 0, 0]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == OPTIMAL and res.value == Fraction(-5, 4)
    assert res.value == vertex_enumeration_lp(c, A, [0, 0, 1])


def _program(data, n, m):
    A = [data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)) for _ in range(m)]
    x0 = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = data.draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    return c, A, b


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 8), st.integers(1, 4), st.data())
def test_matches_vertex_enumeration(n, m, data):
    c, A, b = _program(data, n, m)
    res = solve_lp(c, A, b)
    assert res.status == OPTIMAL
    assert res.value == vertex_enumeration_lp(c, A, b)
    assert all(sum(Fraction(a) * x for a, x in zip(row, res.x)) == bi for row, bi in zip(A, b))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(1, 5), st.data())
def test_matches_float_solver(n, m, data):
    c, A, b = _program(data, n, m)
    res = solve_lp(c, A, b)
    ref = scipy_optimize.linprog(c, A_eq=np.array(A, dtype=float), b_eq=np.array(b, dtype=float), bounds=(0, None), method="highs")
    assert ref.status == 0
    assert abs(float(res.value) - ref.fun) < 1e-7
