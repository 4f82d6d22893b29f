"""Partitioned extensions and the explicit small perturbation onto a
periodic model.

Given ``(B, tau_B) = (A, tau_A) (x) (L, rho)`` where L carries a marker c
whose iterates form an exact n-partition, ``lemma211_perturb`` builds an
automorphism theta2 of B fixing every event of A and conjugating a nearby
``tau_B'`` to ``tau_A (x) rho_n`` with ``rho_n**n = id``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod

import numpy as np

from .measure_algebra import (
    AlgebraAutomorphism,
    Event,
    FiniteAlgebra,
    amalgam_auto,
    compose,
    free_amalgam,
    inverse,
    uniform_distance,
)
from .rationals import as_fraction


class MarkerMissing(KeyError):
    pass


class GranularityError(ValueError):
    """The marker and reference events have different atom counts."""

    def __init__(self, msg, refinement):
        super().__init__(msg)
        self.refinement = refinement


@dataclass(frozen=True)
class CycleSystem:
    """Uniform algebra ``Z_1 x ... x Z_nmax`` with product shift and markers.

    Atom ``x = (x_1, ..., x_nmax)`` has mixed-radix index
    ``sum_k x_k * stride_k``.  ``markers[n]`` is an event whose iterates under
    rho form an exact n-partition.  ``frame`` is the permutation taking
    standard coordinates to the labelling actually used (identity unless
    the system was relabelled); the reference pair of ``reference`` always
    lives in standard coordinates.
    """

    L: FiniteAlgebra
    rho: AlgebraAutomorphism
    markers: dict
    n_max: int
    frame: np.ndarray = field(repr=False, default=None)

    @property
    def strides(self):
        out, s = [], 1
        for k in range(self.n_max, 0, -1):
            out.append(s)
            s *= k
        return out[::-1]

    def coords(self, index):
        return tuple((index // st) % k for k, st in zip(range(1, self.n_max + 1), self.strides))

    def reference(self, n):
        """``(ell_n, rho_n)``: marker ``{x_n = 0}`` and the shift of coordinate n alone."""
        if not 1 <= n <= self.n_max:
            raise MarkerMissing(n)
        idx = np.arange(self.L.atom_count)
        st = self.strides[n - 1]
        xn = (idx // st) % n
        perm = idx + (((xn + 1) % n) - xn) * st
        ell = Event(self.L, np.flatnonzero(xn == 0).tolist())
        return ell, AlgebraAutomorphism(self.L, perm)


def standard_cycle_system(n_max):
    if n_max < 1:
        raise ValueError("n_max must be positive")
    size = prod(range(1, n_max + 1))
    L = FiniteAlgebra.uniform(size)
    idx = np.arange(size)
    perm = np.zeros(size, dtype=np.int64)
    markers = {}
    stride = 1
    strides = {}
    for k in range(n_max, 0, -1):
        strides[k] = stride
        stride *= k
    for k in range(1, n_max + 1):
        xk = (idx // strides[k]) % k
        perm += ((xk + 1) % k) * strides[k]
        markers[k] = Event(L, np.flatnonzero(xk == 0).tolist())
    rho = AlgebraAutomorphism(L, perm)
    return CycleSystem(L, rho, markers, n_max, np.arange(size))


def relabel_system(system, pi):
    """Transport a cycle system along the atom permutation pi of L."""
    pi = np.asarray(pi, dtype=np.int64)
    inv = np.empty_like(pi)
    inv[pi] = np.arange(pi.shape[0])
    rho = AlgebraAutomorphism(system.L, pi[system.rho.perm[inv]])
    markers = {n: Event(system.L, pi[np.array(e.sorted(), dtype=np.int64)].tolist()) for n, e in system.markers.items()}
    return CycleSystem(system.L, rho, markers, system.n_max, pi[system.frame])


@dataclass(frozen=True)
class PartitionedExtension:
    A: FiniteAlgebra
    tau_A: AlgebraAutomorphism
    system: CycleSystem
    B: FiniteAlgebra
    tau_B: AlgebraAutomorphism
    markers: dict

    def embed_base(self, e):
        return self.B.embed_left(e)


def partitioned_extension(A, tA, n_max, *, system=None):
    """``B = A (x) L`` with ``tau_B = tA (x) rho``; markers ``1 (x) c_n``."""
    system = system or standard_cycle_system(n_max)
    B = free_amalgam(A, system.L)
    tau_B = amalgam_auto(B, tA, system.rho)
    markers = {n: B.embed_right(c) for n, c in system.markers.items()}
    return PartitionedExtension(A, tA, system, B, tau_B, markers)


@dataclass(frozen=True)
class Lemma211Result:
    n: int
    theta2: AlgebraAutomorphism
    tau_prime: AlgebraAutomorphism
    sigma: AlgebraAutomorphism       # tau_A (x) rho_n
    slices: tuple                    # c_0, ..., c_{n-1} as index arrays

    def __iter__(self):
        return iter((self.theta2, self.tau_prime))

    def distance(self, P):
        return uniform_distance(P.tau_B, self.tau_prime)


def _theta0(c, ell):
    cs, ls = c.sorted(), ell.sorted()
    if len(cs) != len(ls):
        g = lcm(len(cs), len(ls))
        raise GranularityError(
            f"marker has {len(cs)} atoms, reference has {len(ls)}: refine atoms by {g // min(len(cs), len(ls))}",
            g // min(len(cs), len(ls)),
        )
    return dict(zip(cs, ls))


def lemma211_perturb(P, n):
    """Perturb tau_B onto a copy of ``tau_A (x) rho_n`` fixing A.

    theta2 sends an atom b of ``c_k = tau_B^k(1 (x) c)`` to
    ``sigma^k theta1 tau_B^-k (b)`` where ``theta1 = id (x) theta0`` matches
    the marker c with the reference event ``ell_n`` in sorted order.
    """
    if n not in P.markers:
        raise MarkerMissing(f"no marker for n={n}")
    marker = P.markers[n]
    if not _exact_partition(marker, P.tau_B, n):
        raise ValueError(f"marker for n={n} does not generate an exact {n}-partition")
    c = P.system.markers[n]
    ell, rho_n = P.system.reference(n)
    theta0 = _theta0(c, ell)
    m = P.system.L.atom_count
    sigma = amalgam_auto(P.B, P.tau_A, rho_n)
    base = np.array(marker.sorted(), dtype=np.int64)
    i, j = np.divmod(base, m)
    t0 = np.array([theta0[int(x)] for x in j], dtype=np.int64) if len(j) < 4096 else _vector_map(theta0, j)
    z = i * m + t0
    theta2 = np.full(P.B.atom_count, -1, dtype=np.int64)
    slices = []
    cur = base
    for _ in range(n):
        theta2[cur] = z
        slices.append(cur)
        cur = P.tau_B.perm[cur]
        z = sigma.perm[z]
    if (theta2 < 0).any():
        raise RuntimeError("marker iterates do not cover B")
    th2 = AlgebraAutomorphism(P.B, theta2)
    tau_prime = compose(inverse(th2), compose(sigma, th2))
    return Lemma211Result(n, th2, tau_prime, sigma, tuple(slices))


def _exact_partition(a, t, n):
    # mask version of is_n_eps_partition(a, t, n, 0) for large algebras
    hit = np.zeros(t.perm.shape[0], dtype=np.int64)
    cur = np.array(a.sorted(), dtype=np.int64)
    for _ in range(n):
        hit[cur] += 1
        cur = t.perm[cur]
    return bool((hit == 1).all())


def _vector_map(mapping, keys):
    src = np.fromiter(mapping.keys(), dtype=np.int64)
    dst = np.fromiter(mapping.values(), dtype=np.int64)
    order = np.argsort(src)
    return dst[order][np.searchsorted(src[order], keys)]


def fixes_base(P, theta):
    """True iff theta maps every ``a (x) 1`` onto itself (checked on atoms of A)."""
    m = P.system.L.atom_count
    idx = np.arange(P.B.atom_count)
    return bool(np.array_equal(theta.perm // m, idx // m))


def agrees_below_top(P, res):
    """tau_B and tau_B' agree atomwise on every slice c_k with k <= n - 2."""
    return all(
        np.array_equal(P.tau_B.perm[s], res.tau_prime.perm[s]) for s in res.slices[: max(res.n - 1, 0)]
    )


def is_r_perturbation(f, t0, t1, r):
    """``d(f t0 f^-1, t1) <= r``."""
    f._check(t0)
    f._check(t1)
    conj = compose(f, compose(t0, inverse(f)))
    return uniform_distance(conj, t1) <= as_fraction(r)


@dataclass(frozen=True)
class ComposedPerturbation:
    n: int
    f: np.ndarray               # atom map B_P -> B_Q
    distance: Fraction          # d(f tau_P f^-1, tau_Q)
    parts: tuple                # d(tau_P, tau_P'), d(tau_Q, tau_Q')
    fixes_base: bool


def compose_perturbations(P, Q, n):
    """Chain the two perturbations onto ``tau_A (x) rho_n`` into a map P -> Q."""
    if P.A is not Q.A or P.B.atom_count != Q.B.atom_count:
        raise ValueError("extensions must share the base and the atom count")
    rp, rq = lemma211_perturb(P, n), lemma211_perturb(Q, n)
    if not np.array_equal(rp.sigma.perm, rq.sigma.perm):
        raise ValueError("extensions do not share the reference model")
    f = inverse(rq.theta2).perm[rp.theta2.perm]
    finv = np.empty_like(f)
    finv[f] = np.arange(f.shape[0])
    conj = AlgebraAutomorphism(Q.B, f[P.tau_B.perm[finv]])
    m = P.system.L.atom_count
    idx = np.arange(f.shape[0])
    return ComposedPerturbation(
        n,
        f,
        uniform_distance(conj, Q.tau_B),
        (rp.distance(P), rq.distance(Q)),
        bool(np.array_equal(f // m, idx // m)),
    )
