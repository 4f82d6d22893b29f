"""Batch experiment driver.

    genericlab run {rokhlin|perturb|typedist|rotation|witness|spectral}
    genericlab oracle {distance|rokhlin|bottleneck|lp}

Parameters come from a flat ``key=value`` file (``--config``) and/or
repeated ``-p key=value`` overrides.  Exit status: 0 when every row passes,
1 when some row fails, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import itertools
import math
import sys
from fractions import Fraction

import numpy as np

from . import hilbert_spectral as hs
from .measure_algebra import (
    AlgebraAutomorphism,
    Event,
    FiniteAlgebra,
    is_n_eps_partition,
    measure,
    random_automorphism,
    rokhlin_tower,
    uniform_distance,
)
from .oracles import CapExceeded, brute_bottleneck, brute_rokhlin, brute_uniform_distance, caps, vertex_enumeration_lp
from .lp import OPTIMAL, solve_lp
from .perturbation import agrees_below_top, fixes_base, lemma211_perturb, partitioned_extension, standard_cycle_system
from .report import Report, report_render
from .rotation_types import (
    RotationParam,
    build_witness_family,
    build_witness_tree,
    search_and_separate,
    verify_family_separation,
)
from .type_space import coupling_lower_bound, type_of, validate_si


class ConfigError(ValueError):
    pass


# parameter parsers -----------------------------------------------------------



def _pos_int(v):
    v = int(v)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _pos_frac(v):
    q = Fraction(v.strip())
    if q <= 0:
        raise ValueError("tolerances must be positive")
    return q


def _int_list(v):
    return [int(x) for x in v.split(",") if x.strip()]


def _param(v):
    return RotationParam.parse(v)


# name -> (parser, default text, help)
SCHEMAS = {
    "rokhlin": {
        "atoms_min": (_pos_int, "2", "smallest atom count"),
        "atoms_max": (_pos_int, "8", "largest atom count"),
        "exhaustive_max": (_pos_int, "6", "enumerate every permutation up to this size"),
        "samples": (_pos_int, "20", "random permutations per larger size"),
        "ns": (_int_list, "2,3,4", "tower heights"),
    },
    "perturb": {
        "base_atoms": (_pos_int, "2", "atoms of the base algebra A"),
        "n_min": (_pos_int, "2", "smallest period"),
        "n_max": (_pos_int, "8", "largest period (also sizes L)"),
    },
    "typedist": {
        "pairs": (_pos_int, "10", "random realized pairs"),
        "atoms": (_pos_int, "8", "atoms of the common algebra"),
        "depth": (_pos_int, "3", "largest LP depth"),
    },
    "rotation": {
        "alpha": (_param, "sqrt:2", "first parameter (num/den, sqrt:N or sqrtN-k)"),
        "beta": (_param, "sqrt:3", "second parameter"),
        "eps": (_pos_frac, "1/50", "approximation tolerance"),
        "n_max": (_pos_int, "10000", "search limit"),
        "target": (_pos_frac, "9/20", "required certified bound"),
    },
    "witness": {
        "lam": (_pos_int, "3", "number of base events"),
        "depth": (_pos_int, "2", "witness tree depth"),
        "eps": (_pos_frac, "1/25", "leaf search tolerance"),
        "n_max": (_pos_int, "10000", "leaf search limit"),
        "target": (_pos_frac, "1/6", "required pairwise bound"),
    },
    "spectral": {
        "samples": (_pos_int, "50", "random data per check"),
        "den": (_pos_int, "8", "grid denominator for random data"),
        "dim": (_pos_int, "8", "matrix dimension for the Cesaro check"),
    },
    "oracle-distance": {
        "atoms_max": (_pos_int, "8", "largest atom count"),
        "samples": (_pos_int, "30", "random pairs per size"),
    },
    "oracle-rokhlin": {
        "atoms_max": (_pos_int, "8", "largest atom count"),
        "samples": (_pos_int, "30", "random permutations per size"),
        "ns": (_int_list, "2,3,4", "tower heights"),
    },
    "oracle-bottleneck": {
        "points_max": (_pos_int, "6", "largest point count"),
        "samples": (_pos_int, "30", "random instances per size"),
        "den": (_pos_int, "16", "grid denominator"),
    },
    "oracle-lp": {
        "samples": (_pos_int, "30", "random feasible programs"),
        "vars": (_pos_int, "8", "variables per program"),
        "rows": (_pos_int, "3", "constraints per program"),
    },
}


def parse_config(text):
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        k, _, v = line.partition("=")
        raw[k.strip()] = v.strip()
    return raw


def resolve(schema, raw):
    cfg = {}
    for k in raw:
        if k != "seed" and k not in schema:
            raise ConfigError(f"unknown key {k!r}")
    for k, (parse, default, _) in schema.items():
        text = raw.get(k, default)
        try:
            cfg[k] = parse(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{k}={text}: {exc}") from None
    return cfg


# experiments -----------------------------------------------------------------


def _perms(n, exhaustive_max, samples, rng):
    if n <= exhaustive_max:
        return itertools.permutations(range(n))
    return (rng.permutation(n) for _ in range(samples))


def run_rokhlin(cfg, rng, rep):
    cap = caps()["atoms"]
    for N in range(cfg["atoms_min"], cfg["atoms_max"] + 1):
        alg = FiniteAlgebra.uniform(N)
        perms = [AlgebraAutomorphism(alg, p) for p in _perms(N, cfg["exhaustive_max"], cfg["samples"], rng)]
        for n in cfg["ns"]:
            bad_valid = bad_max = 0
            for t in perms:
                a, covered = rokhlin_tower(t, n)
                if not is_n_eps_partition(a, t, n, 1 - covered):
                    bad_valid += 1
                if N <= cap and brute_rokhlin(t, n)[1] != covered:
                    bad_max += 1
            rep.add(bad_valid == bad_max == 0, atoms=N, n=n, instances=len(perms), invalid=bad_valid, not_maximal=bad_max)


def run_perturb(cfg, rng, rep):
    A = FiniteAlgebra.uniform(cfg["base_atoms"])
    tA = random_automorphism(A, rng)
    P = partitioned_extension(A, tA, cfg["n_max"], system=standard_cycle_system(cfg["n_max"]))
    for n in range(cfg["n_min"], cfg["n_max"] + 1):
        res = lemma211_perturb(P, n)
        d = res.distance(P)
        half, full = Fraction(1, 2 * n), Fraction(1, n)
        fixed = fixes_base(P, res.theta2)
        rep.add(
            d <= half and fixed,
            n=n,
            distance=d,
            bound=half,
            within_bound=d <= half,
            bound_1_over_n=full,
            within_1_over_n=d <= full,
            fixes_base=fixed,
            agrees_below_top=agrees_below_top(P, res),
        )


def run_typedist(cfg, rng, rep):
    alg = FiniteAlgebra.uniform(cfg["atoms"])
    for k in range(cfg["pairs"]):
        t = random_automorphism(alg, rng)
        a = Event.from_mask(alg, rng.random(cfg["atoms"]) < 0.5)
        b = Event.from_mask(alg, rng.random(cfg["atoms"]) < 0.5)
        measured = measure(a ^ b)
        p, q = type_of(a, t, cfg["depth"]), type_of(b, t, cfg["depth"])
        bounds = [coupling_lower_bound(p, q, d) for d in range(cfg["depth"] + 1)]
        sound = all(x <= measured for x in bounds)
        mono = all(x <= y for x, y in zip(bounds, bounds[1:]))
        rep.add(sound and mono and validate_si(p) and validate_si(q), pair=k, measured=measured, lp_bound=bounds[-1], bounds=bounds, sound=sound, monotone=mono)


def run_rotation(cfg, rng, rep):
    alpha, beta = cfg["alpha"], cfg["beta"]
    sep = search_and_separate(alpha, beta, cfg["eps"], cfg["n_max"])
    if sep is None:
        rep.add(False, alpha=alpha.label, beta=beta.label, n=None, bound=None, certified=None, target=cfg["target"])
        return
    rep.add(sep.certified >= cfg["target"], alpha=alpha.label, beta=beta.label, n=sep.n, bound=sep.bound, certified=sep.certified, target=cfg["target"])


def run_witness(cfg, rng, rep):
    tree = build_witness_tree(cfg["depth"], eps=cfg["eps"], n_max=cfg["n_max"])
    thetas = list(itertools.product(range(cfg["lam"]), repeat=cfg["depth"]))
    fam = build_witness_family(tree, cfg["lam"], thetas)
    for row in verify_family_separation(fam, cfg["target"]):
        rep.add(row.passed, theta=list(row.theta), theta_prime=list(row.theta_prime), bound=row.bound, target=row.target)


def run_spectral(cfg, rng, rep):
    S, den = cfg["samples"], cfg["den"]
    data = [hs.random_datum(rng, den) for _ in range(S)]
    # equivalent but unequal partners: an extra eigenvalue inside an arc
    data += [hs.SpectralDatum(d.arcs, {**d.points, d.arcs.arcs[0][0]: 1}) for d in data[: S // 2] if not d.arcs.is_empty()]
    refl = all(hs.aue_decide(d, d) for d in data)
    sym = all(hs.aue_decide(x, y) == hs.aue_decide(y, x) for x, y in itertools.combinations(data, 2))
    trans = all(
        hs.aue_decide(x, z) for x, y, z in itertools.permutations(data[: min(len(data), 24)], 3) if hs.aue_decide(x, y) and hs.aue_decide(y, z)
    )
    rep.add(refl and sym and trans, check="aue_equivalence", instances=len(data), reflexive=refl, symmetric=sym, transitive=trans)
    ok = 0
    for d in data[:S]:
        e = hs.prime_extension(d)
        ok += hs.is_generic(d if e is None else hs.direct_sum(d, e))
    rep.add(ok == S, check="prime_extension_generic", instances=S, failures=S - ok)
    bad = 0
    for _ in range(S):
        k = int(rng.integers(1, 7))
        xs = [Fraction(int(v), den) for v in rng.integers(0, den, k)]
        ys = [Fraction(int(v), den) for v in rng.integers(0, den, k)]
        bad += hs.bottleneck_exact(xs, ys) != brute_bottleneck(xs, ys, hs.circular_distance)
    rep.add(bad == 0, check="bottleneck_vs_brute", instances=S, failures=bad)
    sq = hs.SpectralDatum(points={Fraction(k, 4): 1 for k in range(4)})
    rot = hs.SpectralDatum(points={Fraction(2 * k + 1, 8): 1 for k in range(4)})
    got = hs.bottleneck_distance(sq, rot)
    rep.add(abs(got - 2 * math.sin(math.pi / 8)) <= 1e-9, check="rotated_square", value=got)
    lemma_bad = 0
    for d in data[:S]:
        d1 = hs.SpectralDatum(d.arcs)
        if hs.lemma16_check(d1, d) and not hs.aue_decide(hs.direct_sum(d1, d), d):
            lemma_bad += 1
    rep.add(lemma_bad == 0, check="lemma16_conclusion", instances=S, failures=lemma_bad)
    worst = 0.0
    for _ in range(max(1, S // 10)):
        dim = cfg["dim"]
        k = int(rng.integers(1, dim))
        U, frames = hs.ConcreteUnitary.reducible([k, dim - k], rng)
        a = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        P = hs.invariant_projection(U, [frames[0][:, 0]])
        off = np.linalg.norm(a - P @ a)
        for m in (1, 4, 16):
            _, err = hs.cesaro_canonical_base(U, a, [frames[0][:, 0]], m)
            worst = max(worst, abs(err - off / math.sqrt(m)))
    rep.add(worst <= 1e-8, check="cesaro_law", max_abs_error=worst)


def oracle_distance(cfg, rng, rep):
    for N in range(1, cfg["atoms_max"] + 1):
        alg = FiniteAlgebra.uniform(N)
        bad = 0
        for _ in range(cfg["samples"]):
            t0, t1 = random_automorphism(alg, rng), random_automorphism(alg, rng)
            bad += uniform_distance(t0, t1) != brute_uniform_distance(t0, t1)
        rep.add(bad == 0, atoms=N, instances=cfg["samples"], mismatches=bad)


def oracle_rokhlin(cfg, rng, rep):
    for N in range(1, cfg["atoms_max"] + 1):
        alg = FiniteAlgebra.uniform(N)
        perms = [random_automorphism(alg, rng) for _ in range(cfg["samples"])]
        for n in cfg["ns"]:
            bad = sum(rokhlin_tower(t, n)[1] != brute_rokhlin(t, n)[1] for t in perms)
            rep.add(bad == 0, atoms=N, n=n, instances=len(perms), mismatches=bad)


def oracle_bottleneck(cfg, rng, rep):
    if cfg["points_max"] > caps()["points"]:
        raise CapExceeded(f"points_max {cfg['points_max']} exceeds the brute-force cap")
    den = cfg["den"]
    for k in range(1, cfg["points_max"] + 1):
        bad = 0
        for _ in range(cfg["samples"]):
            xs = [Fraction(int(v), den) for v in rng.integers(0, den, k)]
            ys = [Fraction(int(v), den) for v in rng.integers(0, den, k)]
            bad += hs.bottleneck_exact(xs, ys) != brute_bottleneck(xs, ys, hs.circular_distance)
        rep.add(bad == 0, points=k, instances=cfg["samples"], mismatches=bad)


def oracle_lp(cfg, rng, rep):
    n, m = cfg["vars"], cfg["rows"]
    if n > caps()["lp_vars"]:
        raise CapExceeded(f"{n} variables exceeds the vertex-enumeration cap")
    bad = 0
    for _ in range(cfg["samples"]):
        A = [[int(v) for v in rng.integers(-3, 4, n)] for _ in range(m)]
        x0 = [int(v) for v in rng.integers(0, 3, n)]
        b = [sum(a * x for a, x in zip(row, x0)) for row in A]
        c = [int(v) for v in rng.integers(0, 5, n)]
        res = solve_lp(c, A, b)
        ref = vertex_enumeration_lp(c, A, b)
        bad += res.status != OPTIMAL or res.value != ref
    rep.add(bad == 0, variables=n, constraints=m, instances=cfg["samples"], mismatches=bad)


RUNNERS = {
    "rokhlin": run_rokhlin,
    "perturb": run_perturb,
    "typedist": run_typedist,
    "rotation": run_rotation,
    "witness": run_witness,
    "spectral": run_spectral,
    "oracle-distance": oracle_distance,
    "oracle-rokhlin": oracle_rokhlin,
    "oracle-bottleneck": oracle_bottleneck,
    "oracle-lp": oracle_lp,
}


def execute(name, raw, seed=0):
    """Run one experiment from raw string parameters; returns a Report."""
    cfg = resolve(SCHEMAS[name], raw)
    if "seed" in raw:
        seed = int(raw["seed"])
    rep = Report(name, {**cfg, "seed": seed})
    for k in ("alpha", "beta"):
        if k in rep.config:
            rep.config[k] = rep.config[k].label
    RUNNERS[name](cfg, np.random.default_rng(seed), rep)
    return rep


def _epilog(names):
    lines = ["config keys (default):"]
    for name in names:
        lines.append(f"  {name}:")
        for k, (_, default, help_) in SCHEMAS[name].items():
            lines.append(f"    {k}={default}  {help_}")
    return "\n".join(lines)


def build_parser():
    ap = argparse.ArgumentParser(prog="genericlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode, names in (("run", [n for n in SCHEMAS if not n.startswith("oracle-")]), ("oracle", [n for n in SCHEMAS if n.startswith("oracle-")])):
        p = sub.add_parser(mode, epilog=_epilog(names), formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("cmd", choices=[n.removeprefix("oracle-") for n in names])
        p.add_argument("--config", help="key=value file")
        p.add_argument("-p", "--param", action="append", default=[], metavar="KEY=VALUE", help="override one key")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=["jsonl", "csv", "table"], default="jsonl")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    name = args.cmd if args.mode == "run" else "oracle-" + args.cmd
    try:
        raw = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw.update(parse_config(fh.read()))
        raw.update(parse_config("\n".join(args.param)))
        if args.seed is not None:
            raw["seed"] = str(args.seed)
        rep = execute(name, raw)
    except (ConfigError, CapExceeded, OSError) as exc:
        print(f"genericlab: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # seed or parameter values that parse but are rejected downstream
        print(f"genericlab: {exc}", file=sys.stderr)
        return 2
    text = report_render(rep, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
