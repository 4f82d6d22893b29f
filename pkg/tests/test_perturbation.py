from fractions import Fraction as F

import numpy as np
import pytest

from genericlab.measure_algebra import (
    AlgebraAutomorphism,
    FiniteAlgebra,
    compose,
    inverse,
    is_n_eps_partition,
    power,
    uniform_distance,
)
from genericlab.perturbation import (
    GranularityError,
    MarkerMissing,
    _theta0,
    agrees_below_top,
    compose_perturbations,
    fixes_base,
    is_r_perturbation,
    lemma211_perturb,
    partitioned_extension,
    relabel_system,
    standard_cycle_system,
)


@pytest.fixture(scope="module")
def ext():
    A = FiniteAlgebra.uniform(3)
    return partitioned_extension(A, AlgebraAutomorphism(A, [1, 2, 0]), 5)


def test_cycle_system_markers_are_exact_partitions():
    s = standard_cycle_system(5)
    assert s.L.atom_count == 120
    for n, c in s.markers.items():
        assert is_n_eps_partition(c, s.rho, n, 0)
    ell, rho_n = s.reference(4)
    assert power(rho_n, 4).is_identity()
    assert is_n_eps_partition(ell, rho_n, 4, 0)


def test_theta2_properties(ext):
    for n in range(1, 6):
        res = lemma211_perturb(ext, n)
        theta2, tau_prime = res
        assert fixes_base(ext, theta2)
        assert agrees_below_top(ext, res)
        # tau' is conjugate to tau_A (x) rho_n, so its n-th power is tau_A^n (x) id
        assert compose(theta2, tau_prime) == compose(res.sigma, theta2)
        assert is_r_perturbation(theta2, tau_prime, res.sigma, 0)


def test_distance_is_at_most_top_slice(ext):
    # tau and tau' differ only on the top slice, which has measure 1/n
    for n in range(2, 6):
        res = lemma211_perturb(ext, n)
        top = res.slices[-1]
        moved = np.flatnonzero(ext.tau_B.perm != res.tau_prime.perm)
        assert set(moved.tolist()) <= set(top.tolist())
        assert res.distance(ext) <= F(1, n)


def test_distance_equals_marker_return_map(ext):
    # on the marker, tau'^-1 tau differs from id by rho^n restricted to c
    n = 3
    res = lemma211_perturb(ext, n)
    rho_n_c = power(ext.system.rho, n)
    c = ext.system.markers[n].sorted()
    sub = np.arange(ext.system.L.atom_count)
    sub[c] = rho_n_c.perm[c]
    alg = ext.system.L
    d_L = uniform_distance(alg.identity(), AlgebraAutomorphism(alg, sub))
    assert res.distance(ext) == d_L


def test_missing_marker_and_granularity(ext):
    with pytest.raises(MarkerMissing):
        lemma211_perturb(ext, 9)
    L = FiniteAlgebra.uniform(6)
    with pytest.raises(GranularityError) as err:
        _theta0(L.event([0, 1]), L.event([0, 1, 2]))
    assert err.value.refinement == 3


def test_composition_through_relabelled_system(rng):
    A = FiniteAlgebra.uniform(2)
    tA = AlgebraAutomorphism(A, [1, 0])
    P = partitioned_extension(A, tA, 5)
    Q = partitioned_extension(A, tA, 5, system=relabel_system(P.system, rng.permutation(120)))
    for n in range(2, 6):
        out = compose_perturbations(P, Q, n)
        assert out.fixes_base
        assert out.distance <= out.parts[0] + out.parts[1]
        assert out.distance <= F(2, n)


def test_extension_rejects_foreign_automorphism():
    A, B = FiniteAlgebra.uniform(2), FiniteAlgebra.uniform(2)
    with pytest.raises(ValueError):
        partitioned_extension(A, B.identity(), 3)
