"""Brute-force oracles for the fast paths.

Each oracle enumerates the whole search space (all events, all subsets, all
bijections, all LP vertices) and shares no logic with the routine it checks.
"""
from __future__ import annotations

import itertools
import os
from fractions import Fraction

from . import kernels
from .measure_algebra import Event

DEFAULT_CAPS = {"atoms": 12, "points": 7, "lp_vars": 16}


def caps():
    """Brute-force caps, overridable through ``GENERICLAB_CAP``.

    The variable holds either a single integer (the atom cap) or a comma list
    such as ``atoms=14,points=8``.
    """
    out = dict(DEFAULT_CAPS)
    raw = os.environ.get("GENERICLAB_CAP", "").strip()
    if not raw:
        return out
    if raw.isdigit():
        out["atoms"] = int(raw)
        return out
    for part in raw.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in out or not val.strip().isdigit():
            raise ValueError(f"bad GENERICLAB_CAP entry {part!r}")
        out[key] = int(val)
    return out


class CapExceeded(ValueError):
    pass


def _check_atoms(alg):
    cap = caps()["atoms"]
    if alg.atom_count > cap:
        raise CapExceeded(f"{alg.atom_count} atoms exceeds the brute-force cap {cap}")


def brute_uniform_distance(t0, t1):
    """``max_x mu(t0 x xor t1 x)`` over every event x."""
    alg = t0.algebra
    _check_atoms(alg)
    weights, den = alg.integer_weights()
    # mu(t0 x xor t1 x) = mu(x xor t0^-1 t1 x)
    inv0 = [0] * alg.atom_count
    for i, j in enumerate(t0.perm.tolist()):
        inv0[j] = i
    rho = [inv0[j] for j in t1.perm.tolist()]
    return Fraction(kernels.max_sym_diff(rho, weights), den)


def brute_rokhlin(t, n):
    """Heaviest event whose first n iterates are pairwise disjoint.

    Returns the base event and the covered measure ``n * mu(base)``.
    """
    alg = t.algebra
    _check_atoms(alg)
    weights, den = alg.integer_weights()
    best, mask = kernels.max_tower(t.perm.tolist(), n, weights)
    atoms = [i for i in range(alg.atom_count) if mask >> i & 1]
    return Event(alg, atoms), Fraction(n * best, den)


def enumerate_distance(t0, t1):
    """Slow pure-Python event enumeration; used to cross-check the kernels."""
    alg = t0.algebra
    _check_atoms(alg)
    ms = alg.measures
    best = Fraction(0)
    n = alg.atom_count
    for bits in range(1 << n):
        xs = [i for i in range(n) if bits >> i & 1]
        a = {int(t0.perm[i]) for i in xs}
        b = {int(t1.perm[i]) for i in xs}
        best = max(best, sum((ms[i] for i in a ^ b), Fraction(0)))
    return best


def brute_bottleneck(xs, ys, dist):
    """Min over all bijections of the max matched distance."""
    if len(xs) != len(ys):
        raise ValueError("multisets of different size")
    if len(xs) > caps()["points"]:
        raise CapExceeded(f"{len(xs)} points exceeds the brute-force cap")
    if not xs:
        return 0
    return min(max(dist(x, y) for x, y in zip(xs, perm)) for perm in itertools.permutations(ys))


def vertex_enumeration_lp(c, A, b):
    """Minimise ``c.x`` subject to ``A x = b, x >= 0`` by visiting every vertex.

    Exact (Fractions).  Returns ``None`` when infeasible; the problem is
    assumed bounded (true for the coupling programs, whose feasible region is
    a polytope).
    """
    from .lp import _rank_rows, _solve_square

    n = len(c)
    if n > caps()["lp_vars"]:
        raise CapExceeded(f"{n} variables exceeds the vertex-enumeration cap")
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    rows = _rank_rows(A, b)
    if rows is None:
        return None
    A = [A[i] for i in rows]
    b = [b[i] for i in rows]
    m = len(A)
    best = None
    if m == 0:
        return Fraction(0) if all(Fraction(v) >= 0 for v in c) else None
    for cols in itertools.combinations(range(n), m):
        sub = [[A[i][j] for j in cols] for i in range(m)]
        xb = _solve_square(sub, b)
        if xb is None or any(v < 0 for v in xb):
            continue
        val = sum((Fraction(c[j]) * v for j, v in zip(cols, xb)), Fraction(0))
        if best is None or val < best:
            best = val
    return best
