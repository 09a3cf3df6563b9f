"""Command-line interface: one subcommand per operation family, one JSON
document (or CSV stream) on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import arithmetic, dynamics, ergodic, minkowski, scrambling, simplexes
from .errors import MinkmapError


@dataclass
class Config:
    """Run configuration shared across subcommands."""

    n: int = 1
    tol: float = 1e-9
    seed: int = 0
    depth: int = 6
    steps: int = 10_000
    samples: int = 100
    fmt: str = "json"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.tol <= 0:
            raise ValueError("--tol must be positive")


def parse_point(text: str, n: int):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} coordinates, got {len(parts)}")
    if any("." in p or "e" in p.lower() and "/" not in p for p in parts):
        return tuple(float(p) for p in parts)
    return tuple(Fraction(p) for p in parts)


def emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_eval(args) -> int:
    cfg = Config(n=args.n, tol=args.tol)
    p = parse_point(args.point, cfg.n)
    fn = minkowski.phi_inv if args.inverse else minkowski.phi
    emit(fn(p, tol=cfg.tol).to_json())
    return 0


def cmd_expand(args) -> int:
    cfg = Config(n=args.n, steps=args.steps)
    p = parse_point(args.point, cfg.n)
    rec = dynamics.itinerary(args.map, p, cfg.steps)
    out = {"map": args.map, "point": [str(x) for x in p]}
    out.update(rec.to_json())
    if not args.points:
        out.pop("points")
    emit(out)
    return 0


def cmd_partition(args) -> int:
    cfg = Config(n=args.n, depth=args.depth)
    if args.word is not None:
        emit(simplexes.simplex_record(cfg.n, args.word, args.side))
        return 0
    records = [
        simplexes.simplex_record(cfg.n, format(k, f"0{cfg.depth}b") if cfg.depth else "", args.side)
        for k in range(2**cfg.depth)
    ]
    emit({"n": cfg.n, "depth": cfg.depth, "side": args.side, "cylinders": records})
    return 0


def cmd_orbit(args) -> int:
    cfg = Config(n=args.n, steps=args.steps)
    p = parse_point(args.point, cfg.n)
    rec = dynamics.itinerary(args.map, p, cfg.steps)
    out = {"map": args.map, "point": [str(x) for x in p]}
    out.update(rec.to_json())
    if not isinstance(p[0], float):
        out["classification"] = arithmetic.classify_point(p).to_json()
    emit(out)
    return 0


def cmd_periodic(args) -> int:
    cfg = Config(n=args.n)
    fn = (
        arithmetic.monkemeyer_periodic_point
        if args.map == "M"
        else arithmetic.tent_periodic_point
    )
    emit(fn(args.word, cfg.n).to_json())
    return 0


def cmd_entropy(args) -> int:
    emit(ergodic.entropy(args.n).to_json())
    return 0


def cmd_singularity(args) -> int:
    cfg = Config(n=args.n, depth=args.depth, samples=args.samples, seed=args.seed,
                 fmt=args.format)
    out = ergodic.singularity_samples(cfg.n, cfg.depth, cfg.samples, cfg.seed)
    if cfg.fmt == "json":
        out.pop("rows")
        emit(out)
        return 0
    writer = csv.DictWriter(
        sys.stdout,
        fieldnames=["sample", "depth", "log_lambda_delta", "per_step_log_ratio"],
    )
    writer.writeheader()
    for row in out["rows"]:
        writer.writerow(row)
    return 0


def cmd_scramble(args) -> int:
    cfg = Config(n=args.n)
    if args.word is not None:
        verdict = scrambling.is_scrambling(
            scrambling.word_pattern_product(cfg.n, args.word)
        )
        emit({"n": cfg.n, "word": args.word, "scrambling": verdict})
        return 0
    s = scrambling.scrambling_bound(cfg.n)
    emit({
        "n": cfg.n,
        "length": s,
        "all_scrambling": scrambling.all_products_scrambling(cfg.n),
    })
    return 0


def cmd_game(args) -> int:
    cfg = Config(n=args.n)
    value = scrambling.lovers_game_value(cfg.n)
    bound = scrambling.scrambling_bound(cfg.n)
    emit({"n": cfg.n, "value": value, "bound": bound, "within_bound": value <= bound})
    return 0


def _verify_checks(suite: str):
    from fractions import Fraction as F

    def check_exact():
        from .exact import Mat, hnf, unimodular_inverse

        q0 = arithmetic.q0_matrix(2)
        assert hnf(q0).rows == ((1, 1), (0, 2))
        for n in range(2, 7):
            p = simplexes.base_matrices(n).V
            assert unimodular_inverse(p) @ p == Mat.identity(n + 1)
            q = arithmetic.q0_matrix(n)
            acc = Mat.identity(n)
            for _ in range(n):
                acc = acc @ q
            assert acc == Mat.from_rows(
                [[2 if i == j else 0 for j in range(n)] for i in range(n)]
            )

    def check_simplex():
        for n in (1, 2):
            for t in range(0, 7):
                total_f = sum(
                    simplexes.simplex_lebesgue(simplexes.farey_cylinder(n, format(k, f"0{t}b") if t else ""))
                    for k in range(2**t)
                )
                total_t = sum(
                    simplexes.simplex_lebesgue(simplexes.tent_cylinder(n, format(k, f"0{t}b") if t else ""))
                    for k in range(2**t)
                )
                assert total_f == 1 and total_t == 1

    def check_maps():
        # Markov property via matrices: the branch image of a depth-t
        # cylinder is the depth-(t-1) cylinder of the shifted word
        for n in (1, 2, 3):
            for t in range(1, 5):
                for k in range(2**t):
                    w = format(k, f"0{t}b")
                    lhs = dynamics.projective_matrix(n, "M", int(w[0])) @ simplexes.word_product(n, w, "farey")
                    rhs = simplexes.word_product(n, w[1:], "farey")
                    assert simplexes.UniSimplex(lhs).proj_columns() == simplexes.UniSimplex(rhs).proj_columns()

    def check_conjugacy():
        assert minkowski.orientation_check(2, 4)
        assert minkowski.phi((F(1, 3),)).value == (F(1, 4),)
        for p in minkowski.sample_rational_points(2, 25, seed=5):
            assert minkowski.conjugacy_residual(2, p) <= 2e-9

    def check_arithmetic():
        import itertools

        for t in range(1, 7):
            for bits in itertools.product("01", repeat=t):
                assert arithmetic.hnf_equiv("".join(bits), 3)
        assert arithmetic.classify_point((F(1, 3),)).m_steps_to_v1 == 3

    def check_ergodic():
        rep = ergodic.entropy(2)
        assert abs(rep.h_mu - 0.54807) <= 1e-4
        import numpy as np

        # sharp bound h >= 2^(1-n), attained at the corner (1,0,...,0)
        rng = np.random.default_rng(7)
        pts = ergodic.sample_points_in_simplex(3, 2000, rng)
        assert all(ergodic.density_h(p) >= 2.0 ** (1 - 3) - 1e-12 for p in pts)

    def check_combinatorics():
        for n in (2, 3):
            assert scrambling.all_products_scrambling(n)
            assert scrambling.lovers_game_value(n) <= scrambling.scrambling_bound(n)
        assert not scrambling.is_scrambling(scrambling.word_pattern_product(2, "01"))

    checks = {
        "exact": check_exact,
        "simplex": check_simplex,
        "maps": check_maps,
        "conjugacy": check_conjugacy,
        "arithmetic": check_arithmetic,
        "ergodic": check_ergodic,
        "combinatorics": check_combinatorics,
    }
    if suite != "all":
        if suite not in checks:
            raise ValueError(f"unknown suite {suite!r}")
        return {suite: checks[suite]}
    return checks


def cmd_verify(args) -> int:
    results = {}
    failed = False
    for name, fn in _verify_checks(args.suite).items():
        try:
            fn()
            results[name] = "ok"
        except Exception as exc:  # noqa: BLE001 - verdicts, not control flow
            results[name] = f"FAIL: {exc}"
            failed = True
    emit({"suite": args.suite, "results": results, "ok": not failed})
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="minkmap",
        description="Exact multidimensional continued-fraction dynamics, the "
        "conjugate tent map, and the Minkowski homeomorphism between them.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, *, tol=False, point=False, word=False, steps=False,
                   seed=False, samples=False, depth=False, fmt=False, map_=False,
                   side=False):
        p.add_argument("--n", type=int, required=True, help="dimension")
        if tol:
            p.add_argument("--tol", type=float, default=1e-9)
        if point:
            p.add_argument("--point", type=str, required=True,
                           help='comma-separated coordinates, e.g. "1/3,1/7"')
        if word:
            p.add_argument("--word", type=str, default=None, help="binary word")
        if steps:
            p.add_argument("--steps", type=int, default=100)
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if samples:
            p.add_argument("--samples", type=int, default=100)
        if depth:
            p.add_argument("--depth", type=int, default=6)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="csv")
        if map_:
            p.add_argument("--map", choices=("M", "T"), default="M")
        if side:
            p.add_argument("--side", choices=("farey", "tent"), default="farey")

    p = sub.add_parser("eval", help="evaluate the conjugating homeomorphism")
    add_common(p, tol=True, point=True)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("expand", help="itinerary digits of a point")
    add_common(p, point=True, steps=True, map_=True)
    p.add_argument("--points", action="store_true", help="include orbit points")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("partition", help="cylinder simplexes of a given depth")
    add_common(p, depth=True, word=True, side=True)
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("orbit", help="orbit record plus rational classification")
    add_common(p, point=True, steps=True, map_=True)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("periodic", help="periodic point of a period word")
    add_common(p, word=True, map_=True)
    p.set_defaults(fn=cmd_periodic)

    p = sub.add_parser("entropy", help="entropy report")
    add_common(p)
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("singularity", help="cylinder measure contrast statistics")
    add_common(p, depth=True, samples=True, seed=True, fmt=True)
    p.set_defaults(fn=cmd_singularity)

    p = sub.add_parser("scramble", help="scrambling verdicts")
    add_common(p, word=True)
    p.set_defaults(fn=cmd_scramble)

    p = sub.add_parser("game", help="pursuit game value")
    add_common(p)
    p.set_defaults(fn=cmd_game)

    p = sub.add_parser("verify", help="run module invariant suites")
    p.add_argument("--suite", type=str, default="all")
    p.set_defaults(fn=cmd_verify)

    return ap


def run(argv=None) -> int:
    threads = os.environ.get("MCF_THREADS")
    if threads:
        os.environ.setdefault("OMP_NUM_THREADS", threads)
        os.environ.setdefault("OPENBLAS_NUM_THREADS", threads)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except MinkmapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
