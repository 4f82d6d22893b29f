"""Finite unions of half-open arcs on the circle R/Z, with exact endpoints.

A point of the circle is a rational in [0, 1).  An arc ``[lo, hi)`` has
``0 <= lo < hi <= 1``; arcs that wrap past 0 are stored as two pieces.  The
canonical form is sorted, pairwise disjoint and non-adjacent.
"""
from __future__ import annotations

from fractions import Fraction

from .rationals import as_fraction, fmt

ONE = Fraction(1)
ZERO = Fraction(0)


def _canon(pieces):
    pieces = sorted((lo, hi) for lo, hi in pieces if hi > lo)
    out = []
    for lo, hi in pieces:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def _split(start, length):
    """Pieces of the arc of the given length (0 < length < 1) starting at start."""
    lo = start % 1
    end = lo + length
    if end <= 1:
        return [(lo, end)]
    return [(lo, ONE), (ZERO, end - 1)]


class ArcSet:
    __slots__ = ("arcs",)

    def __init__(self, arcs=()):
        pieces = []
        for lo, hi in arcs:
            lo, hi = as_fraction(lo), as_fraction(hi)
            if hi - lo >= 1:
                pieces.append((ZERO, ONE))
            elif lo != hi:
                # lo > hi denotes an arc wrapping through 0
                pieces.extend(_split(lo, hi - lo if hi > lo else hi - lo + 1))
        self.arcs = _canon(pieces)

    @classmethod
    def _raw(cls, arcs):
        s = cls.__new__(cls)
        s.arcs = arcs
        return s

    @classmethod
    def full(cls):
        return cls._raw(((ZERO, ONE),))

    @classmethod
    def empty(cls):
        return cls._raw(())

    @classmethod
    def arc(cls, lo, hi):
        return cls([(lo, hi)])

    def measure(self):
        return sum((hi - lo for lo, hi in self.arcs), ZERO)

    def is_empty(self):
        return not self.arcs

    def is_full(self):
        return self.arcs == ((ZERO, ONE),)

    def union(self, other):
        return ArcSet._raw(_canon(self.arcs + other.arcs))

    def complement(self):
        out = []
        cur = ZERO
        for lo, hi in self.arcs:
            if lo > cur:
                out.append((cur, lo))
            cur = hi
        if cur < 1:
            out.append((cur, ONE))
        return ArcSet._raw(tuple(out))

    def intersect(self, other):
        out = []
        i = j = 0
        a, b = self.arcs, other.arcs
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return ArcSet._raw(_canon(out))

    def difference(self, other):
        return self.intersect(other.complement())

    def rotate(self, delta):
        delta = as_fraction(delta)
        pieces = []
        for lo, hi in self.arcs:
            if hi - lo >= 1:
                pieces.append((ZERO, ONE))
            else:
                pieces.extend(_split(lo + delta, hi - lo))
        return ArcSet._raw(_canon(pieces))

    def contains(self, x):
        x = as_fraction(x) % 1
        return any(lo <= x < hi for lo, hi in self.arcs)

    def closure_contains(self, x):
        """Membership in the topological closure (adds right endpoints)."""
        x = as_fraction(x) % 1
        for lo, hi in self.arcs:
            if lo <= x <= hi or (hi == 1 and x == 0):
                return True
        return False

    def issubset(self, other):
        return self.difference(other).is_empty()

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self.arcs == other.arcs

    def __hash__(self):
        return hash(self.arcs)

    __or__ = union
    __and__ = intersect

    def __invert__(self):
        return self.complement()

    def __repr__(self):
        inner = ", ".join(f"[{fmt(lo)}, {fmt(hi)})" for lo, hi in self.arcs)
        return f"ArcSet({inner})"

    def to_json(self):
        return [[fmt(lo), fmt(hi)] for lo, hi in self.arcs]

    @classmethod
    def from_json(cls, doc):
        return cls([(lo, hi) for lo, hi in doc])


HALF_CIRCLE = ArcSet.arc(0, Fraction(1, 2))
