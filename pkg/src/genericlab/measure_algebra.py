"""Finite probability algebras, their automorphisms and Rokhlin towers.

A finite algebra is a list of atoms with exact rational masses.  Events are
sets of atoms and automorphisms are permutations of the atoms that preserve
mass.  Everything here is exact; no floating point is used.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import lcm

import numpy as np

from . import kernels
from .rationals import as_fraction, fmt


class AlgebraMismatch(ValueError):
    """Two objects from different algebras were combined."""


class FiniteAlgebra:
    """Atoms ``0..n-1`` with strictly positive rational masses summing to 1.

    Algebras compare by identity: two algebras built from the same masses are
    still different algebras, which catches events leaking across them.
    """

    __slots__ = ("_n", "_measures")

    def __init__(self, measures):
        ms = tuple(as_fraction(m) for m in measures)
        if not ms:
            raise ValueError("an algebra needs at least one atom")
        if any(m <= 0 for m in ms):
            raise ValueError("atom measures must be strictly positive")
        if sum(ms) != 1:
            raise ValueError(f"atom measures sum to {sum(ms)}, not 1")
        self._n = len(ms)
        self._measures = None if all(m == ms[0] for m in ms) else ms

    @classmethod
    def uniform(cls, n):
        if n < 1:
            raise ValueError("atom_count must be positive")
        alg = cls.__new__(cls)
        alg._n = int(n)
        alg._measures = None
        return alg

    @property
    def atom_count(self):
        return self._n

    @property
    def is_uniform(self):
        return self._measures is None

    @property
    def measures(self):
        if self._measures is None:
            return (Fraction(1, self._n),) * self._n
        return self._measures

    def atom_measure(self, i):
        if self._measures is None:
            return Fraction(1, self._n)
        return self._measures[i]

    def integer_weights(self):
        """Atom masses scaled to integers by their common denominator."""
        ms = self.measures
        den = lcm(*(m.denominator for m in ms))
        return [int(m * den) for m in ms], den

    def event(self, atoms=()):
        return Event(self, atoms)

    def empty(self):
        return Event(self, ())

    def full(self):
        return Event(self, range(self._n))

    def atom(self, i):
        return Event(self, (i,))

    def identity(self):
        return AlgebraAutomorphism(self, np.arange(self._n))

    def __repr__(self):
        if self._measures is None:
            return f"FiniteAlgebra.uniform({self._n})"
        return f"FiniteAlgebra({[fmt(m) for m in self._measures]})"

    def to_json(self):
        return {"measures": [fmt(m) for m in self.measures]}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["measures"])


class Event:
    """A set of atoms of a fixed algebra."""

    __slots__ = ("algebra", "atoms")

    def __init__(self, algebra, atoms):
        atoms = frozenset(int(a) for a in atoms)
        n = algebra.atom_count
        if atoms and (min(atoms) < 0 or max(atoms) >= n):
            raise ValueError(f"atom index out of range for {n} atoms")
        self.algebra = algebra
        self.atoms = atoms

    @classmethod
    def from_mask(cls, algebra, mask):
        return cls(algebra, np.flatnonzero(np.asarray(mask)).tolist())

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("events belong to different algebras")

    def mask(self):
        m = np.zeros(self.algebra.atom_count, dtype=bool)
        if self.atoms:
            m[list(self.atoms)] = True
        return m

    def sorted(self):
        return sorted(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, i):
        return i in self.atoms

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return self.algebra is other.algebra and self.atoms == other.atoms

    def __hash__(self):
        return hash((id(self.algebra), self.atoms))

    def __and__(self, other):
        self._check(other)
        return Event(self.algebra, self.atoms & other.atoms)

    def __or__(self, other):
        self._check(other)
        return Event(self.algebra, self.atoms | other.atoms)

    def __xor__(self, other):
        self._check(other)
        return Event(self.algebra, self.atoms ^ other.atoms)

    def __le__(self, other):
        self._check(other)
        return self.atoms <= other.atoms

    def complement(self):
        return Event(self.algebra, set(range(self.algebra.atom_count)) - self.atoms)

    def __invert__(self):
        return self.complement()

    def __repr__(self):
        return f"Event({self.sorted()})"

    def to_json(self):
        return {"atoms": self.sorted()}


def measure(e):
    """Exact measure of an event."""
    alg = e.algebra
    if alg.is_uniform:
        return Fraction(len(e.atoms), alg.atom_count)
    ms = alg.measures
    return sum((ms[i] for i in e.atoms), Fraction(0))


def sym_diff_distance(a, b):
    return measure(a ^ b)


class AlgebraAutomorphism:
    """A mass-preserving permutation of atoms; ``perm[i]`` is the image of i."""

    __slots__ = ("algebra", "perm")

    def __init__(self, algebra, perm, *, check=True):
        p = np.array(perm, dtype=np.int64)
        n = algebra.atom_count
        if check:
            if p.shape != (n,):
                raise ValueError(f"permutation must have length {n}")
            seen = np.zeros(n, dtype=bool)
            if n and (p.min() < 0 or p.max() >= n):
                raise ValueError("permutation entry out of range")
            seen[p] = True
            if not seen.all():
                raise ValueError("not a bijection")
            if not algebra.is_uniform:
                ms = algebra.measures
                bad = [i for i in range(n) if ms[int(p[i])] != ms[i]]
                if bad:
                    raise ValueError(f"not measure-compatible at atom {bad[0]}")
        p.setflags(write=False)
        self.algebra = algebra
        self.perm = p

    @classmethod
    def from_cycles(cls, algebra, cycles):
        p = np.arange(algebra.atom_count)
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                p[a] = b
        return cls(algebra, p)

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("automorphisms of different algebras")

    def __call__(self, e):
        return apply(self, e)

    def __eq__(self, other):
        if not isinstance(other, AlgebraAutomorphism):
            return NotImplemented
        return self.algebra is other.algebra and np.array_equal(self.perm, other.perm)

    def __hash__(self):
        return hash((id(self.algebra), self.perm.tobytes()))

    def __matmul__(self, other):
        return compose(self, other)

    def is_identity(self):
        return bool(np.array_equal(self.perm, np.arange(self.algebra.atom_count)))

    def cycles(self):
        """Cycles as lists, each starting at its smallest atom."""
        out = []
        seen = np.zeros(self.algebra.atom_count, dtype=bool)
        p = self.perm
        for i in range(self.algebra.atom_count):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = int(p[j])
            out.append(cyc)
        return out

    def cycle_type(self):
        return sorted((len(c) for c in self.cycles()), reverse=True)

    def __repr__(self):
        return f"AlgebraAutomorphism({self.perm.tolist()})"

    def to_json(self):
        return {"perm": self.perm.tolist()}


def apply(t, e):
    t._check(e)
    if not e.atoms:
        return Event(t.algebra, ())
    return Event(t.algebra, t.perm[np.fromiter(e.atoms, dtype=np.int64)].tolist())


def compose(s, t):
    """``s o t``: first t, then s."""
    s._check(t)
    return AlgebraAutomorphism(s.algebra, s.perm[t.perm], check=False)


def inverse(t):
    inv = np.empty_like(t.perm)
    inv[t.perm] = np.arange(t.perm.shape[0])
    return AlgebraAutomorphism(t.algebra, inv, check=False)


def power(t, n):
    n = int(n)
    base = inverse(t).perm if n < 0 else t.perm
    result = np.arange(base.shape[0])
    n = abs(n)
    while n:
        if n & 1:
            result = base[result]
        base = base[base]
        n >>= 1
    return AlgebraAutomorphism(t.algebra, result, check=False)


def _cycle_summary(perm):
    """(representative atom, length) per cycle."""
    labels = kernels.cycle_labels(perm)
    counts = np.bincount(labels, minlength=perm.shape[0])
    reps = np.flatnonzero(counts)
    return reps, counts[reps]


def uniform_distance(t0, t1):
    """``sup_x mu(t0(x) xor t1(x))`` in closed form.

    With ``r = t0^-1 t1`` the quantity is ``sup_x mu(x xor r(x))``.  Events
    can be chosen independently on each cycle of r, and on a cycle of length
    L the best choice alternates in and out, flipping at ``2*floor(L/2)``
    atoms.  Mass is constant along a cycle because r preserves it.
    """
    t0._check(t1)
    rho = inverse(t0).perm[t1.perm]
    reps, lengths = _cycle_summary(rho)
    flips = 2 * (lengths // 2)
    alg = t0.algebra
    if alg.is_uniform:
        return Fraction(int(flips.sum()), alg.atom_count)
    ms = alg.measures
    return sum((ms[int(r)] * int(f) for r, f in zip(reps, flips)), Fraction(0))


class AmalgamAlgebra(FiniteAlgebra):
    """``left (x) right``: atom ``(i, j)`` has index ``i * len(right) + j``."""

    __slots__ = ("left", "right")

    def pair(self, index):
        return divmod(index, self.right.atom_count)

    def index(self, i, j):
        return i * self.right.atom_count + j

    def embed_left(self, e):
        if e.algebra is not self.left:
            raise AlgebraMismatch("event is not from the left factor")
        m = self.right.atom_count
        return Event(self, [i * m + j for i in e.atoms for j in range(m)])

    def embed_right(self, e):
        if e.algebra is not self.right:
            raise AlgebraMismatch("event is not from the right factor")
        m = self.right.atom_count
        return Event(self, [i * m + j for i in range(self.left.atom_count) for j in e.atoms])


def free_amalgam(A, B):
    """Product algebra with product masses (the two factors independent)."""
    if A.is_uniform and B.is_uniform:
        alg = AmalgamAlgebra.uniform(A.atom_count * B.atom_count)
    else:
        alg = AmalgamAlgebra([a * b for a in A.measures for b in B.measures])
    alg.left = A
    alg.right = B
    return alg


def amalgam_auto(C, tA, tB):
    """``tA (x) tB`` on the amalgam C of their algebras."""
    if tA.algebra is not C.left or tB.algebra is not C.right:
        raise AlgebraMismatch("automorphisms do not match the amalgam factors")
    m = C.right.atom_count
    perm = (tA.perm[:, None] * m + tB.perm[None, :]).ravel()
    return AlgebraAutomorphism(C, perm, check=False)


def embed_left(C, e):
    return C.embed_left(e)


def embed_right(C, e):
    return C.embed_right(e)


def rokhlin_tower(t, n):
    """Largest base a with a, ta, ..., t^(n-1)a pairwise disjoint.

    Works cycle by cycle: on a cycle of length L the base may take
    ``floor(L/n)`` atoms spaced n apart along the cycle.  Returns the base
    event and the covered measure ``n * mu(a)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    base = []
    for cyc in t.cycles():
        base.extend(cyc[k * n] for k in range(len(cyc) // n))
    a = Event(t.algebra, base)
    return a, n * measure(a)


def is_n_eps_partition(a, t, n, eps):
    t._check(a)
    eps = as_fraction(eps)
    seen = set()
    cur = a
    for _ in range(n):
        if seen & cur.atoms:
            return False
        seen |= cur.atoms
        cur = apply(t, cur)
    return measure(Event(t.algebra, seen)) >= 1 - eps


def support_measure(t, n):
    """Measure of the atoms moved by ``t**n``."""
    p = power(t, n).perm
    moved = np.flatnonzero(p != np.arange(p.shape[0]))
    return measure(Event(t.algebra, moved.tolist()))


def random_automorphism(algebra, rng):
    """Uniformly random mass-preserving permutation (permutes equal-mass atoms)."""
    n = algebra.atom_count
    if algebra.is_uniform:
        return AlgebraAutomorphism(algebra, rng.permutation(n))
    perm = np.arange(n)
    groups = {}
    for i, m in enumerate(algebra.measures):
        groups.setdefault(m, []).append(i)
    for members in groups.values():
        perm[members] = rng.permutation(members)
    return AlgebraAutomorphism(algebra, perm)


def dump_document(algebra, automorphisms=None, events=None):
    """JSON document with an algebra and named automorphisms/events on it."""
    doc = {"algebra": algebra.to_json()}
    doc["automorphisms"] = {k: v.to_json() for k, v in (automorphisms or {}).items()}
    doc["events"] = {k: v.to_json() for k, v in (events or {}).items()}
    return json.dumps(doc, sort_keys=True)


def load_document(text):
    doc = json.loads(text)
    alg = FiniteAlgebra.from_json(doc["algebra"])
    autos = {k: AlgebraAutomorphism(alg, v["perm"]) for k, v in doc.get("automorphisms", {}).items()}
    events = {k: Event(alg, v["atoms"]) for k, v in doc.get("events", {}).items()}
    return alg, autos, events
