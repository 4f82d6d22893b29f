"""Shift-invariant type trees and certified lower bounds on type distance.

A type tree of depth D maps each binary string s with ``len(s) <= D`` to the
measure of ``t^0(a^{s_0}) & t^1(a^{s_1}) & ...`` where ``a^0 = a`` and
``a^1`` is the complement of a.  Trees are stored sparsely: strings of
measure zero are omitted.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .lp import OPTIMAL, solve_lp
from .measure_algebra import Event, FiniteAlgebra, inverse, measure
from .rationals import as_fraction, fmt

LP_DEPTH_CAP = 5


class SIViolation(ValueError):
    pass


def _levels_of(values, depth):
    levels = [dict() for _ in range(depth + 1)]
    for s, v in values.items():
        levels[len(s)][s] = v
    return levels


class TypeTree:
    """Truncated map ``{binary string: measure}`` of a fixed depth."""

    __slots__ = ("depth", "_values", "_levels", "_auto")

    def __init__(self, depth, values):
        depth = int(depth)
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        vals = {}
        for s, v in values.items():
            if len(s) > depth or s.strip("01"):
                raise ValueError(f"bad key {s!r} for depth {depth}")
            v = as_fraction(v)
            if v:
                vals[s] = v
        self.depth = depth
        self._values = vals
        self._levels = None
        self._auto = {}

    @classmethod
    def from_leaves(cls, depth, leaves):
        """Build every level by prefix sums of the length-``depth`` level."""
        vals = {}
        for s, v in leaves.items():
            if len(s) != depth:
                raise ValueError("leaves must all have length depth")
            for k in range(depth + 1):
                p = s[:k]
                vals[p] = vals.get(p, 0) + v
        return cls(depth, vals)

    @property
    def values(self):
        return MappingProxyType(self._values)

    def value(self, s):
        if len(s) > self.depth:
            raise ValueError(f"string longer than depth {self.depth}")
        return self._values.get(s, Fraction(0))

    def level(self, k):
        if self._levels is None:
            self._levels = _levels_of(self._values, self.depth)
        return self._levels[k]

    def truncate(self, depth):
        if depth > self.depth:
            raise ValueError("cannot extend a tree by truncation")
        return TypeTree(depth, {s: v for s, v in self._values.items() if len(s) <= depth})

    def __eq__(self, other):
        return isinstance(other, TypeTree) and self.depth == other.depth and self._values == other._values

    def __hash__(self):
        return hash((self.depth, frozenset(self._values.items())))

    def __repr__(self):
        return f"TypeTree(depth={self.depth}, nonzero={len(self._values)})"

    def to_json(self):
        return {"depth": self.depth, "s": {s: fmt(v) for s, v in sorted(self._values.items(), key=lambda kv: (len(kv[0]), kv[0]))}}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["depth"], doc["s"])


def validate_si(t):
    """True iff root is 1, values lie in [0, 1] and both sum rules hold.

    Strings absent from the sparse map are 0, so only strings adjacent to a
    stored key need checking.
    """
    V = t._values
    if V.get("", 0) != 1:
        return False
    if any(v < 0 or v > 1 for v in V.values()):
        return False
    cand = set()
    for s in V:
        if len(s) < t.depth:
            cand.add(s)
        if s:
            cand.add(s[:-1])
            cand.add(s[1:])
    get = V.get
    for s in cand:
        v = get(s, 0)
        if get(s + "0", 0) + get(s + "1", 0) != v:
            return False
        if get("0" + s, 0) + get("1" + s, 0) != v:
            return False
    return True


def _itinerary_codes(e, t, depth):
    """Per-atom code: bit i is 0 iff the atom lies in t^i(e)."""
    n = e.algebra.atom_count
    inv = inverse(t).perm
    member = e.mask()
    codes = np.zeros((n, depth), dtype=np.uint8)
    pos = np.arange(n)
    for i in range(depth):
        codes[:, i] = ~member[pos] & 1
        pos = inv[pos]
    return ["".join("01"[c] for c in row) for row in codes]


def _tree_from_codes(codes, weights, total, depth):
    leaves = {}
    for code, w in zip(codes, weights):
        leaves[code] = leaves.get(code, 0) + w
    return TypeTree.from_leaves(depth, {s: Fraction(v) / total for s, v in leaves.items()})


def type_of(a, t, depth):
    """Type tree of event a under automorphism t, truncated at depth."""
    t._check(a)
    alg = a.algebra
    codes = _itinerary_codes(a, t, depth)
    if alg.is_uniform:
        return _tree_from_codes(codes, [1] * alg.atom_count, alg.atom_count, depth)
    return _tree_from_codes(codes, alg.measures, 1, depth)


def realize(t):
    """Finite algebra with events a_0..a_D whose joint law is the tree.

    The length-(D+1) level is the stationary Markov extension of the tree,
    so every window ``a_k..a_{k+n-1}`` carries the tree's level-n law.
    """
    if t.depth < 1:
        raise ValueError("realize needs depth >= 1")
    if not validate_si(t):
        raise SIViolation("tree is not shift invariant")
    D = t.depth
    atoms = []
    for s, v in sorted(t.level(D).items()):
        tail = t.value(s[1:])
        for x in "01":
            w = v * t.value(s[1:] + x) / tail if tail else Fraction(0)
            if w:
                atoms.append((s + x, w))
    alg = FiniteAlgebra([w for _, w in atoms])
    events = [Event(alg, [i for i, (s, _) in enumerate(atoms) if s[k] == "0"]) for k in range(D + 1)]
    return alg, events, [s for s, _ in atoms]


def window_tree(events, offset, depth):
    """Type tree read off the window ``events[offset : offset+depth]``."""
    alg = events[0].algebra
    window = events[offset:offset + depth]
    if len(window) != depth:
        raise ValueError("window runs past the realized events")
    masks = [e.mask() for e in window]
    codes = ["".join("0" if m[i] else "1" for m in masks) for i in range(alg.atom_count)]
    return _tree_from_codes(codes, alg.measures, 1, depth)


def _auto_table(t):
    if not t._auto:
        for n in range(1, t.depth):
            t._auto[n] = sum((v for s, v in t.level(n + 1).items() if s[0] != s[n]), Fraction(0))
    return t._auto


def autodist_profile(t, n):
    """``mu(a xor t^n a)`` read off the tree; needs ``n + 1 <= depth``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n + 1 > t.depth:
        raise ValueError(f"depth {t.depth} too small for n={n}")
    return _auto_table(t)[n]


def separation_profile(p, q, n_max):
    """``(bound, n)`` maximising ``|auto(p,n) - auto(q,n)| / 2`` over n <= n_max.

    For any realisations a, b: ``2 d(a,b) = d(a,b) + d(t^n a, t^n b) >=
    |d(a, t^n a) - d(b, t^n b)|``, so each n gives a valid lower bound.
    """
    if min(p.depth, q.depth) < n_max + 1:
        raise ValueError(f"trees need depth >= {n_max + 1}")
    best, arg = Fraction(0), None
    for n in range(1, n_max + 1):
        gap = abs(autodist_profile(p, n) - autodist_profile(q, n)) / 2
        if gap > best:
            best, arg = gap, n
    return best, arg


def separation_bound(p, q, n_max):
    return separation_profile(p, q, n_max)[0]


# pair letters: 2 * (bit of the first coordinate) + (bit of the second)
_PAIR = {(x, y): str(2 * int(x) + int(y)) for x in "01" for y in "01"}


class PairTree:
    """Joint tree of a pair of events over the alphabet ``{00, 01, 10, 11}``.

    Letters are encoded as the characters ``'0'..'3'`` (``2*x + y``).
    """

    __slots__ = ("depth", "values")

    def __init__(self, depth, values):
        self.depth = depth
        self.values = {w: as_fraction(v) for w, v in values.items() if v}

    @classmethod
    def from_leaves(cls, depth, leaves):
        vals = {}
        for w, v in leaves.items():
            for k in range(depth + 1):
                vals[w[:k]] = vals.get(w[:k], 0) + v
        return cls(depth, vals)

    def marginal(self, coord):
        vals = {}
        for w, v in self.values.items():
            s = "".join(str(int(c) >> 1 if coord == 0 else int(c) & 1) for c in w)
            vals[s] = vals.get(s, 0) + v
        return TypeTree(self.depth, vals)

    def is_valid(self):
        V = self.values
        if V.get("", 0) != 1 or any(v < 0 for v in V.values()):
            return False
        cand = {w for w in V if len(w) < self.depth} | {w[:-1] for w in V if w} | {w[1:] for w in V if w}
        for u in cand:
            v = V.get(u, 0)
            if sum(V.get(u + c, 0) for c in "0123") != v:
                return False
            if sum(V.get(c + u, 0) for c in "0123") != v:
                return False
        return validate_si(self.marginal(0)) and validate_si(self.marginal(1))

    def disagreement(self):
        """Mass on root letters 01 and 10, i.e. ``mu(a xor b)``."""
        return self.values.get("1", Fraction(0)) + self.values.get("2", Fraction(0))

    def to_json(self):
        return {"depth": self.depth, "s": {w: fmt(v) for w, v in sorted(self.values.items())}}


def pair_type_of(a, b, t, depth):
    """PairTree of an explicitly realized pair (used to audit the LP)."""
    ca = _itinerary_codes(a, t, depth)
    cb = _itinerary_codes(b, t, depth)
    ms = a.algebra.measures
    leaves = {}
    for x, y, m in zip(ca, cb, ms):
        w = "".join(_PAIR[u, v] for u, v in zip(x, y))
        leaves[w] = leaves.get(w, 0) + m
    return PairTree.from_leaves(depth, leaves)


@dataclass(frozen=True)
class CouplingResult:
    bound: Fraction
    depth: int
    coupling: PairTree | None
    variables: int
    pivots: int


def coupling_lp(p, q, depth, *, cap=LP_DEPTH_CAP):
    """Minimise root disagreement over shift-invariant couplings of p and q.

    Every realized pair (a, b) with types p, q induces a feasible PairTree, so
    the optimum is a certified lower bound on the type distance.  Only pair
    leaves whose two marginal strings both have positive mass are variables.
    """
    if depth > cap:
        raise ValueError(f"LP depth {depth} above cap {cap}")
    if depth > min(p.depth, q.depth):
        raise ValueError("LP depth exceeds a tree depth")
    if depth == 0:
        return CouplingResult(Fraction(0), 0, PairTree(0, {"": 1}), 0, 0)
    P = sorted(p.level(depth))
    Q = sorted(q.level(depth))
    words = []
    for s in P:
        for r in Q:
            words.append("".join(_PAIR[x, y] for x, y in zip(s, r)))
    col = {w: j for j, w in enumerate(words)}
    rows, rhs = [], []
    for i, s in enumerate(P):
        rows.append({i * len(Q) + k: 1 for k in range(len(Q))})
        rhs.append(p.value(s))
    for k, r in enumerate(Q):
        rows.append({i * len(Q) + k: 1 for i in range(len(P))})
        rhs.append(q.value(r))
    shift = {}
    for w, j in col.items():
        shift.setdefault(w[1:], {})
        shift[w[1:]][j] = shift[w[1:]].get(j, 0) + 1
        shift.setdefault(w[:-1], {})
        shift[w[:-1]][j] = shift[w[:-1]].get(j, 0) - 1
    for u in sorted(shift):
        row = {j: v for j, v in shift[u].items() if v}
        if row:
            rows.append(row)
            rhs.append(0)
    cost = [1 if w[0] in "12" else 0 for w in words]
    res = solve_lp(cost, rows, rhs)
    if res.status != OPTIMAL:
        raise RuntimeError(f"coupling LP {res.status}: both marginals were expected to be valid")
    leaves = {w: x for w, x in zip(words, res.x) if x}
    return CouplingResult(res.value, depth, PairTree.from_leaves(depth, leaves), len(words), res.pivots)


def coupling_lower_bound(p, q, depth, *, cap=LP_DEPTH_CAP):
    return coupling_lp(p, q, depth, cap=cap).bound


class TypeOverAlgebra:
    """One type tree per atom of a base algebra of invariant events."""

    __slots__ = ("base", "per_atom", "depth")

    def __init__(self, base, per_atom):
        per_atom = dict(per_atom)
        if sorted(per_atom) != list(range(base.atom_count)):
            raise ValueError("need exactly one tree per atom of the base algebra")
        depths = {t.depth for t in per_atom.values()}
        if len(depths) != 1:
            raise ValueError("per-atom trees must share a depth")
        self.base = base
        self.per_atom = per_atom
        self.depth = depths.pop()

    def is_valid(self):
        return all(validate_si(t) for t in self.per_atom.values())

    def averaged(self):
        """Unconditional tree: per-atom trees weighted by atom measure."""
        vals = {}
        for i, t in self.per_atom.items():
            w = self.base.atom_measure(i)
            for s, v in t.values.items():
                vals[s] = vals.get(s, 0) + w * v
        return TypeTree(self.depth, vals)


def type_over_algebra(b, t, blocks, depth):
    """Conditional type trees of b given each t-invariant block."""
    alg = b.algebra
    t._check(b)
    seen = set()
    for blk in blocks:
        if blk.algebra is not alg:
            raise ValueError("block from another algebra")
        if seen & blk.atoms:
            raise ValueError("blocks overlap")
        seen |= blk.atoms
        if t(blk) != blk:
            raise ValueError(f"block {blk} is not invariant")
    if len(seen) != alg.atom_count:
        raise ValueError("blocks do not cover the algebra")
    codes = _itinerary_codes(b, t, depth)
    ms = alg.measures
    base = FiniteAlgebra([measure(blk) for blk in blocks])
    per_atom = {}
    for k, blk in enumerate(blocks):
        atoms = blk.sorted()
        per_atom[k] = _tree_from_codes([codes[i] for i in atoms], [ms[i] for i in atoms], measure(blk), depth)
    return TypeOverAlgebra(base, per_atom)


def integral_lower_bound(P, Q, per_atom_bounder):
    """``sum_atoms mu(atom) * L(P_atom, Q_atom)`` in atom order."""
    if P.base is not Q.base:
        if P.base.measures != Q.base.measures:
            raise ValueError("types over different base algebras")
    if P.depth != Q.depth:
        raise ValueError("depth mismatch")
    total = Fraction(0)
    for i in range(P.base.atom_count):
        total += P.base.atom_measure(i) * per_atom_bounder(P.per_atom[i], Q.per_atom[i])
    return total
