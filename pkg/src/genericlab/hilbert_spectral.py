"""Spectral data of unitaries on the circle, plus a small matrix layer.

A point of the unit circle is written as a rational t in [0, 1), standing
for exp(2 pi i t).  A ``SpectralDatum`` records

* ``arcs``: half-open arcs whose closure is the continuous part of the
  essential spectrum,
* ``points``: eigenvalues with multiplicity (a positive int or ``INF``).

The essential spectrum is ``closure(arcs)`` together with every point of
infinite multiplicity.  The spectrum is the essential spectrum together
with all points.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .arcs import ArcSet
from .rationals import as_fraction, fmt

INF = math.inf
TOL = 1e-10


class SpectralError(ValueError):
    pass


def _mult(m):
    if m == INF or m == "inf":
        return INF
    m = int(m)
    if m < 1:
        raise SpectralError("multiplicity must be positive")
    return m


class SpectralDatum:
    __slots__ = ("arcs", "points")

    def __init__(self, arcs=None, points=None):
        self.arcs = arcs if isinstance(arcs, ArcSet) else ArcSet(arcs or ())
        pts = {}
        for at, m in dict(points or {}).items():
            at = as_fraction(at) % 1
            pts[at] = _mult(m)
        self.points = dict(sorted(pts.items()))

    def is_empty(self):
        return self.arcs.is_empty() and not self.points

    def in_essential(self, x):
        x = as_fraction(x) % 1
        return self.arcs.closure_contains(x) or self.points.get(x) == INF

    def in_spectrum(self, x):
        x = as_fraction(x) % 1
        return self.arcs.closure_contains(x) or x in self.points

    def essential_points(self):
        """Infinite-multiplicity points not already inside an arc closure."""
        return frozenset(x for x, m in self.points.items() if m == INF and not self.arcs.closure_contains(x))

    def isolated(self):
        """Multiplicities of eigenvalues lying outside the essential spectrum."""
        return {x: m for x, m in self.points.items() if not self.in_essential(x)}

    def spectrum_points(self):
        """Spectrum points not inside an arc closure (all are topologically isolated)."""
        return frozenset(x for x in self.points if not self.arcs.closure_contains(x))

    def __eq__(self, other):
        return isinstance(other, SpectralDatum) and self.arcs == other.arcs and self.points == other.points

    def __hash__(self):
        return hash((self.arcs, tuple(self.points.items())))

    def __repr__(self):
        pts = ", ".join(f"{fmt(x)}:{'inf' if m == INF else m}" for x, m in self.points.items())
        return f"SpectralDatum({self.arcs!r}, {{{pts}}})"

    def to_json(self):
        return {
            "arcs": self.arcs.to_json(),
            "points": [{"at": fmt(x), "mult": "inf" if m == INF else m} for x, m in self.points.items()],
        }

    @classmethod
    def from_json(cls, doc):
        return cls(ArcSet.from_json(doc.get("arcs", [])), {p["at"]: p["mult"] for p in doc.get("points", [])})


def is_generic(d):
    # finitely many points cannot fill a gap of positive length
    return d.arcs.is_full()


def aue_decide(d0, d1):
    """Equal essential spectra and equal isolated multiplicities off them."""
    if d0.arcs != d1.arcs or d0.essential_points() != d1.essential_points():
        return False
    return d0.isolated() == d1.isolated()


def direct_sum(d0, d1):
    pts = dict(d0.points)
    for x, m in d1.points.items():
        pts[x] = pts.get(x, 0) + m
    return SpectralDatum(d0.arcs | d1.arcs, pts)


def lemma16_check(d1p, d2p):
    """``sigma(d1p)`` has no isolated points and is contained in ``sigma(d2p)``."""
    if d1p.is_empty() or d1p.spectrum_points():
        return False
    return d1p.arcs.issubset(d2p.arcs)


def prime_extension(d0):
    """Datum whose essential spectrum is the closed complement of sigma(d0).

    Returns ``None`` when d0 is already generic.
    """
    if is_generic(d0):
        return None
    return SpectralDatum(d0.arcs.complement())


def circular_distance(x, y):
    d = (x - y) % 1
    return min(d, 1 - d)


def chord(dist):
    return 2.0 * math.sin(math.pi * float(dist))


def _expand(d):
    if not d.arcs.is_empty() or any(m == INF for m in d.points.values()):
        raise SpectralError("bottleneck distance needs finite pure-point data")
    out = []
    for x, m in d.points.items():
        out.extend([x] * m)
    return out


def _shift_bound(xs, ys):
    # both sorted; best cyclic alignment of the two circular orders
    n = len(xs)
    return min(max(circular_distance(xs[i], ys[(i + s) % n]) for i in range(n)) for s in range(n))


def _has_matching(adj, n):
    match_r = [-1] * n

    def augment(u, seen):
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_r[v] < 0 or augment(match_r[v], seen):
                    match_r[v] = u
                    return True
        return False

    return all(augment(u, [False] * n) for u in range(n))


def bottleneck_exact(xs, ys):
    """Bottleneck value as an exact circular distance (a Fraction)."""
    xs, ys = sorted(xs), sorted(ys)
    n = len(xs)
    if n != len(ys):
        raise SpectralError("multiplicity totals differ")
    if n == 0:
        return Fraction(0)
    upper = _shift_bound(xs, ys)
    dist = [[circular_distance(x, y) for y in ys] for x in xs]
    cands = sorted({v for row in dist for v in row if v <= upper})
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        adj = [[j for j in range(n) if dist[i][j] <= cands[mid]] for i in range(n)]
        if _has_matching(adj, n):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def bottleneck_distance(d0, d1):
    """Min over multiplicity-respecting bijections of the max chordal distance."""
    return chord(bottleneck_exact(_expand(d0), _expand(d1)))


def random_datum(rng, den=8, *, finite=False):
    """Seeded random datum with endpoints on the grid ``k/den``."""
    pts = {}
    for _ in range(int(rng.integers(0, 4))):
        m = int(rng.integers(1, 4))
        if not finite and rng.random() < 0.2:
            m = INF
        pts[Fraction(int(rng.integers(0, den)), den)] = m
    arcs = []
    if not finite:
        for _ in range(int(rng.integers(0, 3))):
            a, b = sorted(int(v) for v in rng.integers(0, den + 1, size=2))
            if a < b:
                arcs.append((Fraction(a, den), Fraction(b, den)))
    if not arcs and not pts:
        pts[Fraction(int(rng.integers(0, den)), den)] = 1
    return SpectralDatum(arcs, pts)


# matrix layer ------------------------------------------------------------


class ConcreteUnitary:
    __slots__ = ("matrix",)

    def __init__(self, matrix, *, check=True):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SpectralError("unitary must be a square matrix")
        self.matrix = m
        if check and not unitary_check(self):
            raise SpectralError("matrix is not unitary within tolerance")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def random(cls, dim, rng):
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        return cls(q * (np.diag(r) / np.abs(np.diag(r))))

    @classmethod
    def reducible(cls, blocks, rng):
        """Random unitary with invariant subspaces of the given dimensions.

        Returns the unitary and an orthonormal basis (columns) per block.
        """
        dim = sum(blocks)
        basis = cls.random(dim, rng).matrix
        core = np.zeros((dim, dim), dtype=complex)
        frames, at = [], 0
        for b in blocks:
            core[at:at + b, at:at + b] = cls.random(b, rng).matrix
            frames.append(basis[:, at:at + b])
            at += b
        return cls(basis @ core @ basis.conj().T), frames

    @classmethod
    def shift(cls, dim):
        return cls(np.roll(np.eye(dim), 1, axis=0))


def unitary_check(U):
    m = U.matrix if isinstance(U, ConcreteUnitary) else np.asarray(U, dtype=complex)
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) <= TOL)


def parallelogram_check(x, y):
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise SpectralError("dimension mismatch")
    n = np.linalg.norm
    lhs = n(x + y) ** 2 + n(x - y) ** 2
    rhs = 2 * n(x) ** 2 + 2 * n(y) ** 2
    return bool(abs(lhs - rhs) <= TOL * max(1.0, rhs))


def _orth(cols, dim):
    if not cols:
        return np.zeros((dim, 0), dtype=complex)
    m = np.column_stack(cols)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, s > TOL * max(1.0, s[0] if s.size else 0)]


def invariant_projection(U, B):
    """Projector onto the smallest U-invariant subspace containing span(B)."""
    if not isinstance(U, ConcreteUnitary):
        U = ConcreteUnitary(U)
    dim = U.dim
    vecs = [np.asarray(b, dtype=complex) for b in B]
    if any(v.shape != (dim,) for v in vecs):
        raise SpectralError("dimension mismatch")
    Q = _orth(vecs, dim)
    M, Mi = U.matrix, U.matrix.conj().T
    while True:
        nxt = _orth(list(Q.T) + list((M @ Q).T) + list((Mi @ Q).T), dim)
        if nxt.shape[1] == Q.shape[1]:
            break
        Q = nxt
    return Q @ Q.conj().T


def cesaro_canonical_base(U, a, B, m):
    """Average of m copies of a that agree on Pa and are orthogonal off it.

    The model lives in ``C^((m+1) d)``: block 0 carries the shared
    component Pa, block n+1 carries the private component of copy n.
    Returns the average and its distance to Pa (embedded in block 0).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not isinstance(U, ConcreteUnitary):
        U = ConcreteUnitary(U)
    a = np.asarray(a, dtype=complex)
    d = U.dim
    if a.shape != (d,):
        raise SpectralError("dimension mismatch")
    P = invariant_projection(U, B)
    pa = P @ a
    rest = a - pa
    avg = np.zeros((m + 1) * d, dtype=complex)
    for n in range(m):
        copy = np.zeros_like(avg)
        copy[:d] = pa
        copy[(n + 1) * d:(n + 2) * d] = rest
        avg += copy
    avg /= m
    target = np.zeros_like(avg)
    target[:d] = pa
    return avg, float(np.linalg.norm(avg - target))
