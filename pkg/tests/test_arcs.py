from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from genericlab.arcs import HALF_CIRCLE, ArcSet

grid = st.integers(0, 12).map(lambda k: F(k, 12))
arcsets = st.lists(st.tuples(grid, grid), max_size=4).map(ArcSet)


def points(s):
    # sample the midpoints of the 1/24 grid: never an endpoint
    return [x for x in (F(2 * k + 1, 48) for k in range(24)) if s.contains(x)]


def test_wrapping_arc_and_rotation():
    s = ArcSet.arc(F(3, 4), F(1, 4))
    assert s.arcs == ((0, F(1, 4)), (F(3, 4), 1))
    assert s.measure() == F(1, 2)
    assert ArcSet.arc(F(3, 4), 1).rotate(F(1, 4)) == ArcSet.arc(0, F(1, 4))


def test_intersection_and_complement():
    a = ArcSet.arc(0, F(1, 2))
    b = ArcSet.arc(F(1, 4), F(3, 4))
    assert (a & b) == ArcSet.arc(F(1, 4), F(1, 2))
    assert (a & b).measure() == F(1, 4)
    assert ~HALF_CIRCLE == ArcSet.arc(F(1, 2), 1)
    assert (a | ~a).is_full()


def test_closure_membership():
    a = ArcSet.arc(0, F(1, 2))
    assert not a.contains(F(1, 2))
    assert a.closure_contains(F(1, 2))
    assert ArcSet.arc(F(1, 2), 1).closure_contains(0)


def test_json_roundtrip():
    s = ArcSet([(F(1, 3), F(1, 2)), (F(5, 6), F(1, 6))])
    assert ArcSet.from_json(s.to_json()) == s
    assert s.to_json()[0] == ["0/1", "1/6"]


@settings(max_examples=200, deadline=None)
@given(arcsets, arcsets, grid)
def test_set_algebra_pointwise(a, b, delta):
    u, i, d = a | b, a & b, a.difference(b)
    for x in (F(2 * k + 1, 48) for k in range(24)):
        assert u.contains(x) == (a.contains(x) or b.contains(x))
        assert i.contains(x) == (a.contains(x) and b.contains(x))
        assert d.contains(x) == (a.contains(x) and not b.contains(x))
        assert a.rotate(delta).contains(x + delta) == a.contains(x)
    assert u.measure() + i.measure() == a.measure() + b.measure()
    assert (~a).measure() == 1 - a.measure()
