"""Rotation types on the circle and a non-superstability witness family.

The rotation type of parameter alpha is the type tree of the half circle
``H = [0, 1/2)`` under the rotation ``x -> x - alpha``.  Irrational
parameters are carried as rational approximants with a declared precision;
every computation is exact over the approximant and the precision enters only
as an explicit slack term.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .arcs import HALF_CIRCLE, ArcSet
from .measure_algebra import Event, FiniteAlgebra, measure
from .rationals import as_fraction, dec, fmt
from .type_space import TypeOverAlgebra, TypeTree, integral_lower_bound, separation_profile

WITNESS_DEPTH_CAP = 3


class PrecisionError(ValueError):
    """The approximant is too coarse to certify the requested computation."""


class SeparationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RotationParam:
    """Rotation parameter alpha in [0, 1); ``precision`` bounds |alpha - true|."""

    value: Fraction
    precision: Fraction = Fraction(0)
    label: str = ""

    def __post_init__(self):
        v = as_fraction(self.value)
        if not 0 <= v < 1:
            raise ValueError("alpha must lie in [0, 1)")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "precision", as_fraction(self.precision))
        if not self.label:
            object.__setattr__(self, "label", fmt(v))

    @property
    def exact(self):
        return self.precision == 0

    @classmethod
    def rational(cls, x):
        return cls(as_fraction(x) % 1)

    @classmethod
    def sqrt_frac(cls, n, digits=40):
        """Fractional part of sqrt(n), truncated to ``digits`` decimals."""
        scale = 10**digits
        root = isqrt(n * scale * scale)
        if root * root == n * scale * scale:
            return cls(Fraction(root % scale, scale), label=f"frac(sqrt({n}))")
        return cls(Fraction(root % scale, scale), Fraction(1, scale), label=f"frac(sqrt({n}))")

    @classmethod
    def parse(cls, text, digits=40):
        """``"1/4"``, ``"sqrt:2"`` (frac of sqrt 2) or ``"sqrt2-1"``."""
        text = text.strip()
        if text.startswith("sqrt:"):
            return cls.sqrt_frac(int(text[5:]), digits)
        if text.startswith("sqrt") and "-" in text:
            n, _, k = text[4:].partition("-")
            if isqrt(int(n)) != int(k):
                raise ValueError(f"{text}: only frac(sqrt(n)) = sqrt(n) - floor(sqrt(n)) is supported")
            return cls.sqrt_frac(int(n), digits)
        return cls.rational(Fraction(text))


def _dist_to_int(x):
    x = x % 1
    return min(x, 1 - x)


def _endpoints(alpha, depth):
    """Integer endpoints (units of 1/M) of the arcs H - i*alpha, i < depth."""
    A, Q = alpha.value.numerator, alpha.value.denominator
    M = 2 * Q
    pts = []
    for i in range(depth):
        pts.append((-2 * i * A) % M)
        pts.append((Q - 2 * i * A) % M)
    return pts, M, A, Q


def _certify_ordering(alpha, depth, pts, M):
    if alpha.exact or depth == 0:
        return
    srt = sorted(pts)
    gaps = [b - a for a, b in zip(srt, srt[1:])] + [srt[0] + M - srt[-1]]
    # true endpoints drift by at most depth * precision each
    if Fraction(min(gaps), M) <= 2 * depth * alpha.precision:
        raise PrecisionError(
            f"{alpha.label}: precision {float(alpha.precision):.1e} cannot order endpoints at depth {depth}"
        )


def rotation_type(alpha, depth):
    """Type tree of H under rotation by alpha, exact over alpha's value.

    The endpoints of all arcs ``H - i*alpha`` cut the circle into at most
    ``2*depth`` cells; each cell has a single itinerary, so the leaves are the
    cell lengths grouped by itinerary.
    """
    if depth == 0:
        return TypeTree(0, {"": 1})
    pts, M, A, Q = _endpoints(alpha, depth)
    _certify_ordering(alpha, depth, pts, M)
    cuts = sorted(set(pts))
    leaves = {}
    step = 2 * A
    for j, u in enumerate(cuts):
        nxt = cuts[j + 1] if j + 1 < len(cuts) else cuts[0] + M
        bits = []
        v = u
        for _ in range(depth):
            bits.append("0" if v < Q else "1")
            v = (v + step) % M
        code = "".join(bits)
        leaves[code] = leaves.get(code, 0) + (nxt - u)
    return TypeTree.from_leaves(depth, {s: Fraction(v, M) for s, v in leaves.items()})


def arc_cell(alpha, s):
    """The arc set ``intersection_i (H^{s_i} - i*alpha)`` computed with ArcSet."""
    cur = ArcSet.full()
    comp = HALF_CIRCLE.complement()
    for i, c in enumerate(s):
        piece = HALF_CIRCLE if c == "0" else comp
        cur = cur & piece.rotate(-i * alpha.value)
    return cur


def approx_search(alpha, beta, n_max, eps):
    """Smallest n <= n_max with ||n alpha|| < eps and ||n beta - 1/2|| < eps."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = alpha.value, beta.value
    half = Fraction(1, 2)
    for n in range(1, n_max + 1):
        if _dist_to_int(n * a) < eps and _dist_to_int(n * b - half) < eps:
            return n
    return None


@dataclass(frozen=True)
class Separation:
    """Certified lower bound on the distance of two rotation types."""

    bound: Fraction         # exact over the approximants
    certified: Fraction     # bound minus precision slack
    n: int | None
    depth: int


def certified_separation(alpha, beta, n_max):
    """Separation of p_alpha, p_beta using shifts 1..n_max."""
    depth = n_max + 1
    p = rotation_type(alpha, depth)
    q = rotation_type(beta, depth)
    return _separation_from_trees(p, q, alpha, beta, n_max)


def _separation_from_trees(p, q, alpha, beta, n_max):
    bound, n = separation_profile(p, q, n_max)
    slack = n * (alpha.precision + beta.precision) if n else Fraction(0)
    return Separation(bound, max(Fraction(0), bound - slack), n, p.depth)


def search_and_separate(alpha, beta, eps, n_max):
    """Find a good shift n in either orientation, then certify at depth n + 1."""
    found = [n for n in (approx_search(alpha, beta, n_max, eps), approx_search(beta, alpha, n_max, eps)) if n]
    if not found:
        return None
    return certified_separation(alpha, beta, min(found))


def _primes():
    n = 2
    while True:
        if all(n % p for p in range(2, isqrt(n) + 1)):
            yield n
        n += 1


@dataclass
class WitnessTree:
    """Binary tree of depth D whose leaves are pairwise separated rotation types."""

    depth: int
    leaf_params: dict
    certificates: dict = field(default_factory=dict)
    target: Fraction = Fraction(1, 3)

    def leaves(self):
        return sorted(self.leaf_params)

    def node_set(self, s):
        """Parameters of the leaves below node s."""
        return frozenset(self.leaf_params[t] for t in self.leaves() if t.startswith(s))

    def leaf_below(self, s):
        return s + "0" * (self.depth - len(s))

    @property
    def type_depth(self):
        ns = [c.n for c in self.certificates.values() if c.n]
        return max(ns, default=1) + 1

    def leaf_types(self, depth=None):
        depth = depth or self.type_depth
        return {s: rotation_type(a, depth) for s, a in self.leaf_params.items()}

    def sibling_pairs(self):
        """Every (leaf under s+0, leaf under s+1) pair, for every node s."""
        out = []
        for k in range(self.depth):
            for s in ("".join(bits) for bits in itertools.product("01", repeat=k)):
                left = [t for t in self.leaves() if t.startswith(s + "0")]
                right = [t for t in self.leaves() if t.startswith(s + "1")]
                out.extend(itertools.product(left, right))
        return out


def build_witness_tree(depth, *, eps=Fraction(1, 25), n_max=10_000, target=Fraction(1, 3), digits=40, cap=WITNESS_DEPTH_CAP):
    """Leaves get frac(sqrt(p)) for the first 2**depth primes p.

    Every pair of distinct leaves is certified separated by at least target.
    """
    if depth < 0 or depth > cap:
        raise ValueError(f"witness depth must be in [0, {cap}]")
    target = as_fraction(target)
    leaves = ["".join(b) for b in itertools.product("01", repeat=depth)]
    params = {s: RotationParam.sqrt_frac(p, digits) for s, p in zip(leaves, _primes())}
    tree = WitnessTree(depth, params, target=target)
    for s, t in tree.sibling_pairs():
        sep = search_and_separate(params[s], params[t], eps, n_max)
        if sep is None or sep.certified < target:
            got = "no shift found" if sep is None else f"bound {float(sep.certified):.4f}"
            raise SeparationFailure(f"leaves {s} ({params[s].label}) and {t} ({params[t].label}): {got}")
        tree.certificates[s, t] = sep
    return tree


@dataclass
class WitnessFamily:
    lam: int
    tree: WitnessTree
    thetas: list
    base: FiniteAlgebra
    base_events: list
    members: dict
    leaf_trees: dict

    def b_event(self, theta, s):
        """``AND_{i < |s|} a_{theta(i)}^{s(i)}``."""
        ev = self.base.full()
        for i, c in enumerate(s):
            a = self.base_events[theta[i]]
            ev = ev & (a if c == "0" else a.complement())
        return ev

    def leaf_at(self, theta, atom):
        bits = "".join(str(atom >> theta[i] & 1) for i in range(len(theta)))
        return self.tree.leaf_below(bits)


def build_witness_family(tree, lam, thetas):
    """Types over lam independent invariant half-measure events, one per theta.

    Atom x of the base algebra (an integer in ``[0, 2**lam)``) lies in a_i iff
    bit i of x is 0.  Member theta puts over atom x the rotation type of the
    leaf spelled by the bits ``x[theta(0)], x[theta(1)], ...``.
    """
    thetas = [tuple(int(v) for v in th) for th in thetas]
    if len(set(thetas)) != len(thetas):
        raise ValueError("duplicate branch function")
    for th in thetas:
        if len(th) > tree.depth:
            raise ValueError(f"branch function {th} longer than tree depth {tree.depth}")
        if any(not 0 <= v < lam for v in th):
            raise ValueError(f"branch function {th} leaves [0, {lam})")
    base = FiniteAlgebra.uniform(2**lam)
    events = [Event(base, [x for x in range(2**lam) if not x >> i & 1]) for i in range(lam)]
    leaf_trees = tree.leaf_types()
    fam = WitnessFamily(lam, tree, thetas, base, events, {}, leaf_trees)
    for th in thetas:
        fam.members[th] = TypeOverAlgebra(base, {x: leaf_trees[fam.leaf_at(th, x)] for x in range(2**lam)})
    return fam


@dataclass(frozen=True)
class WitnessRow:
    theta: tuple
    theta_prime: tuple
    bound: Fraction
    target: Fraction

    @property
    def passed(self):
        return self.bound >= self.target


def verify_family_separation(fam, target=Fraction(1, 6)):
    """Certified lower bound on the distance of every pair of members."""
    target = as_fraction(target)
    param_of = {id(t): fam.tree.leaf_params[s] for s, t in fam.leaf_trees.items()}
    n_max = fam.tree.type_depth - 1
    cache = {}

    def bounder(p, q):
        if p is q:
            return Fraction(0)
        key = (id(p), id(q))
        if key not in cache:
            cache[key] = _separation_from_trees(p, q, param_of[id(p)], param_of[id(q)], n_max).certified
        return cache[key]

    rows = []
    for th, th2 in itertools.combinations(fam.thetas, 2):
        b = integral_lower_bound(fam.members[th], fam.members[th2], bounder)
        rows.append(WitnessRow(th, th2, b, target))
    return rows


def witness_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "theta_prime", "bound", "bound_decimal", "target", "pass"])
    for r in rows:
        w.writerow([" ".join(map(str, r.theta)), " ".join(map(str, r.theta_prime)), fmt(r.bound), dec(r.bound), fmt(r.target), str(r.passed).lower()])
    return buf.getvalue()


