import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genericlab import hilbert_spectral as hs
from genericlab.oracles import brute_bottleneck

D = hs.SpectralDatum
HALF = [(0, F(1, 2))]


def test_genericity():
    assert hs.is_generic(D([(0, 1)]))
    assert not hs.is_generic(D(HALF))
    assert not hs.is_generic(D(points={F(k, 8): 1 for k in range(8)}))


def test_aue_examples():
    d = D(HALF, {F(3, 4): 1})
    assert hs.aue_decide(d, d)
    assert hs.aue_decide(D([(0, 1)], {F(1, 3): 2}), D([(0, 1)], {F(1, 5): 1}))
    assert not hs.aue_decide(d, D(HALF, {F(3, 4): 2}))
    # an infinite-multiplicity point is essential
    assert not hs.aue_decide(D(HALF, {F(3, 4): hs.INF}), d)
    # endpoint of the closed arc is already essential
    assert hs.aue_decide(D(HALF, {F(1, 2): 1}), D(HALF))


def test_bottleneck_examples():
    sq = D(points={F(k, 4): 1 for k in range(4)})
    rot = D(points={F(2 * k + 1, 8): 1 for k in range(4)})
    assert abs(hs.bottleneck_distance(sq, rot) - 2 * math.sin(math.pi / 8)) < 1e-12
    assert hs.bottleneck_distance(sq, sq) == 0
    assert hs.bottleneck_distance(D(points={0: 1}), D(points={F(1, 2): 1})) == 2
    with pytest.raises(hs.SpectralError):
        hs.bottleneck_distance(D(HALF), sq)
    with pytest.raises(hs.SpectralError):
        hs.bottleneck_distance(D(points={0: 2}), D(points={0: 1}))


def test_multiplicity_is_respected():
    a = D(points={0: 2, F(1, 2): 1})
    b = D(points={0: 1, F(1, 2): 2})
    assert hs.bottleneck_distance(a, b) == 2


grid_points = st.lists(st.integers(0, 15).map(lambda k: F(k, 16)), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6).flatmap(lambda k: st.tuples(*[st.lists(st.integers(0, 15).map(lambda v: F(v, 16)), min_size=k, max_size=k)] * 3)))
def test_bottleneck_oracle_and_metric(triple):
    xs, ys, zs = triple
    fast = hs.bottleneck_exact(xs, ys)
    assert fast == brute_bottleneck(xs, ys, hs.circular_distance)
    assert hs.bottleneck_exact(xs, zs) <= fast + hs.bottleneck_exact(ys, zs)
    assert hs.bottleneck_exact(ys, xs) == fast


def test_direct_sum_examples():
    d = D(HALF, {F(3, 4): 1})
    assert hs.direct_sum(d, D()) == d
    assert hs.direct_sum(D(HALF), D([(F(1, 2), 1)])).arcs.is_full()
    assert hs.direct_sum(D(points={F(3, 4): 1}), D(points={F(3, 4): 1})).points == {F(3, 4): 2}
    absorbed = hs.direct_sum(D(HALF), D(points={F(1, 4): 1}))
    assert absorbed.isolated() == {}


def test_lemma16_examples():
    full = D([(0, 1)])
    assert hs.lemma16_check(full, full)
    assert hs.aue_decide(hs.direct_sum(full, full), full)
    assert not hs.lemma16_check(D(HALF, {F(3, 4): 1}), full)
    assert not hs.lemma16_check(D([(0, F(1, 4))]), D([(F(1, 2), 1)]))


def test_prime_extension_examples():
    ext = hs.prime_extension(D(HALF))
    assert ext.arcs == hs.ArcSet.arc(F(1, 2), 1)
    assert ext.in_essential(F(1, 2)) and ext.in_essential(0)
    assert hs.prime_extension(D([(0, 1)])) is None
    assert hs.prime_extension(D(points={0: 1})).arcs.is_full()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_properties(seed):
    rng = np.random.default_rng(seed)
    d, e = hs.random_datum(rng), hs.random_datum(rng)
    ext = hs.prime_extension(d)
    assert hs.is_generic(d if ext is None else hs.direct_sum(d, ext))
    assert hs.aue_decide(d, e) == hs.aue_decide(e, d)
    d1 = D(e.arcs)
    if hs.lemma16_check(d1, d):
        assert hs.aue_decide(hs.direct_sum(d1, d), d)
    assert D.from_json(d.to_json()) == d


def test_json_shape():
    doc = D(HALF, {F(3, 4): hs.INF, F(1, 8): 2}).to_json()
    assert doc == {"arcs": [["0/1", "1/2"]], "points": [{"at": "1/8", "mult": 2}, {"at": "3/4", "mult": "inf"}]}


def test_unitary_and_parallelogram(rng):
    assert hs.unitary_check(np.eye(3))
    assert hs.unitary_check(np.diag(np.exp(2j * np.pi * np.array([0.1, 0.3]))))
    assert not hs.unitary_check(2 * np.eye(2))
    with pytest.raises(hs.SpectralError):
        hs.ConcreteUnitary(np.ones((2, 2)))
    x, y = rng.normal(size=8) + 1j * rng.normal(size=8), rng.normal(size=8)
    assert hs.parallelogram_check(x, y)
    with pytest.raises(hs.SpectralError):
        hs.parallelogram_check(x, y[:3])


def test_invariant_projection_examples(rng):
    e0 = np.eye(4)[0]
    P = hs.invariant_projection(np.eye(4), [e0, np.eye(4)[1]])
    assert np.allclose(P, np.diag([1, 1, 0, 0]))
    assert np.allclose(hs.invariant_projection(hs.ConcreteUnitary.shift(4), [e0]), np.eye(4))
    assert np.allclose(hs.invariant_projection(np.eye(4), []), 0)
    U, frames = hs.ConcreteUnitary.reducible([2, 3], rng)
    P = hs.invariant_projection(U, [frames[0][:, 0]])
    assert np.allclose(P, frames[0] @ frames[0].conj().T)
    assert np.allclose(P @ U.matrix, U.matrix @ P)


def test_cesaro_examples(rng):
    U = hs.ConcreteUnitary.shift(4)
    a = np.array([1, 2, 3, 4], dtype=complex)
    avg, err = hs.cesaro_canonical_base(U, a, [np.eye(4)[0]], 5)
    assert err < 1e-12 and np.allclose(avg[:4], a)
    # ||a - Pa|| = 1 and m = 4 give error 1/2
    avg, err = hs.cesaro_canonical_base(np.eye(2), np.array([0, 1]), [np.array([1, 0])], 4)
    assert abs(err - 0.5) < 1e-12
    errs = [hs.cesaro_canonical_base(np.eye(2), np.array([0, 1]), [np.array([1, 0])], m)[1] for m in (1, 4, 16, 64)]
    assert all(abs(y / x - 0.5) < 1e-9 for x, y in zip(errs, errs[1:]))
