"""Command-line surface tying the engines together.

Exit codes: 0 success, 2 input error, 3 engine error (refinement does not
close, resource caps, ambiguous float classification, no determinant root).

Rationals on the command line are num/den strings (or plain integers); bare
decimals switch that value to float mode with a warning on stderr, so
exactness is always explicit at the boundary.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .cylinders import (compare_engines, entropy_estimate, expansion_diagnostics,
                        export_level_counts, refine)
from .errors import (AmbiguousBoundaryError, AmbiguousMultiplicityError,
                     HoledEntropyError, InvalidParameterError, ModeMismatchError,
                     NoRootError, NotFinitelyMarkovError, ResourceLimitError,
                     TruncationError)
from .kneading import entropy_left_hole
from .mapmodel import (Hole, build_d_adic, build_scaled_farey, load_map_config,
                       map_to_config)
from .markov import entropy_markov, to_dot
from .regularity import (LeftHoleFamily, SlidingHoleFamily, SweepSpec, emit_csv,
                         emit_svg_plot, holder_estimate, run_sweep,
                         verify_holder_bound)
from .scalar import DEFAULT_EPSILON, Scalar, parse_rational

_INPUT_ERRORS = (InvalidParameterError, ModeMismatchError)
_ENGINE_ERRORS = (NotFinitelyMarkovError, ResourceLimitError, NoRootError,
                  TruncationError, AmbiguousBoundaryError,
                  AmbiguousMultiplicityError)


def _parse_scalar_arg(text: str, epsilon: float) -> Scalar:
    text = text.strip()
    if "/" in text or text.lstrip("+-").isdigit():
        return Scalar.exact(parse_rational(text))
    print(f"warning: bare decimal {text!r} parsed in float mode "
          f"(epsilon {epsilon:g}); use num/den for exact arithmetic",
          file=sys.stderr)
    try:
        return Scalar.approx(float(text), epsilon)
    except ValueError as exc:
        raise InvalidParameterError(f"malformed number {text!r}") from exc


def _parse_fraction_arg(text: str) -> Fraction:
    return parse_rational(text)


def _parse_hole_arg(text: str | None, epsilon: float) -> Hole:
    if text is None or text.strip().lower() in ("", "none", "empty"):
        return Hole.empty()
    pieces = []
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise InvalidParameterError(
                f"hole piece {chunk!r} must be lo,hi (pieces separated by ';')")
        pieces.append((_parse_scalar_arg(parts[0], epsilon),
                       _parse_scalar_arg(parts[1], epsilon)))
    return Hole(pieces)


def _resolve_map(name: str, param: str | None, epsilon: float):
    if name == "doubling":
        return build_d_adic(2)
    if name.startswith("d-adic:"):
        return build_d_adic(int(name.split(":", 1)[1]))
    if name == "farey":
        if param is None:
            raise InvalidParameterError("the farey map needs --param a in (0, 1]")
        return build_scaled_farey(_parse_scalar_arg(param, epsilon))
    if os.path.exists(name):
        pmap, _ = load_map_config(name)
        return pmap
    raise InvalidParameterError(
        f"unknown map {name!r}: use doubling, d-adic:<d>, farey, or a JSON path")


def _emit_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HOLED_ENTROPY_THREADS")
    return max(1, int(env)) if env else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_entropy(args) -> int:
    eps = args.epsilon
    pmap = _resolve_map(args.map, args.param, eps)
    hole = _parse_hole_arg(args.hole, eps)
    if args.engine == "kneading":
        from .cylinders import left_hole_parameter
        a = left_hole_parameter(pmap, hole)
        if a is None:
            raise InvalidParameterError(
                "the kneading engine needs the doubling map with hole a,1 "
                "for exact a in (1/2, 1)")
        res = entropy_left_hole(Scalar.exact(a), K=args.trunc, tol=args.tol)
        print(f"entropy = {res.entropy:.15g}  (engine=kneading, p={res.p}, "
              f"error_bound={res.root.error_bound:.3g})")
        if args.json:
            _emit_json(res.to_json(), args.json)
        return 0
    if args.engine == "markov":
        res = entropy_markov(pmap, hole, orbit_cap=args.orbit_cap, tol=args.tol)
        print(f"entropy = {res.entropy:.15g}  (engine=markov, "
              f"p={res.report.pole_order_p}, rho={res.report.rho:.15g})")
        if args.json:
            _emit_json(res.to_json(), args.json)
        return 0
    if args.engine == "oracle":
        tree = refine(pmap, hole, args.depth)
        h = entropy_estimate(tree, args.depth)
        print(f"entropy = {h:.15g}  (engine=oracle, level={args.depth}, "
              f"count={tree.count(args.depth)})")
        return 0
    if args.engine == "compare":
        rep = compare_engines(pmap, hole, args.depth)
        out = {
            "level": rep.level,
            "oracle_count": rep.oracle_count,
            "oracle_entropy": rep.oracle_entropy,
            "kneading_entropy": rep.kneading_entropy,
            "markov_entropy": rep.markov_entropy,
            "differences": rep.differences,
            "applicable": rep.applicable_engines(),
        }
        _emit_json(out, args.json)
        return 0
    raise InvalidParameterError(f"unknown engine {args.engine!r}")


def _cmd_tower(args) -> int:
    a = _parse_scalar_arg(args.a, args.epsilon)
    res = entropy_left_hole(a, K=args.trunc, tol=args.tol, k_cap=args.k_cap)
    _emit_json(res.to_json(), args.json)
    return 0


def _cmd_spectrum(args) -> int:
    eps = args.epsilon
    pmap = _resolve_map(args.map, args.param, eps)
    hole = _parse_hole_arg(args.hole, eps)
    res = entropy_markov(pmap, hole, orbit_cap=args.orbit_cap, tol=args.tol)
    _emit_json(res.to_json(), args.json)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(res) + "\n")
    return 0


def _cmd_oracle(args) -> int:
    eps = args.epsilon
    pmap = _resolve_map(args.map, args.param, eps)
    hole = _parse_hole_arg(args.hole, eps)
    tree = refine(pmap, hole, args.depth, args.component_cap)
    for n in range(1, args.depth + 1):
        print(f"level {n}: count {tree.count(n)}, "
              f"entropy {entropy_estimate(tree, n):.15g}")
    if args.csv:
        export_level_counts(tree, args.csv, args.depth)
    return 0


def _make_family(args):
    if args.family == "left":
        return LeftHoleFamily()
    if args.family == "sliding":
        if args.width is None:
            raise InvalidParameterError("sliding family needs --width")
        return SlidingHoleFamily(_parse_fraction_arg(args.width))
    raise InvalidParameterError(f"unknown family {args.family!r}")


def _cmd_sweep(args) -> int:
    family = _make_family(args)
    extra = tuple(_parse_fraction_arg(x) for x in (args.extra or []))
    params = {}
    if args.oracle_depth is not None:
        params["n"] = args.oracle_depth
    spec = SweepSpec(family, _parse_fraction_arg(args.start),
                     _parse_fraction_arg(args.end), args.count,
                     engine=args.engine, engine_params=params,
                     extra_points=extra)
    result = run_sweep(spec, threads=_threads(args))
    flagged = sum(1 for r in result.rows if r.status != "ok")
    print(f"swept {len(result.rows)} points with engine {args.engine}"
          + (f" ({flagged} flagged)" if flagged else ""))
    if args.csv:
        emit_csv(result, args.csv)
    if args.svg:
        emit_svg_plot(result, args.svg)
    if args.json:
        _emit_json({"metadata": result.metadata,
                    "rows": [{"s": str(r.s), "entropy": r.entropy, "p": r.p,
                              "engine": r.engine, "error_bound": r.error_bound,
                              "status": r.status} for r in result.rows]},
                   args.json)
    return 0


def _cmd_holder(args) -> int:
    family = _make_family(args)
    t = _parse_fraction_arg(args.t)
    xi = args.xi if args.xi is not None else math.log(2)
    scales = [Fraction(1, 2 ** k) for k in range(args.scale_from, args.scale_to + 1)]
    est = holder_estimate(family, t, args.p, xi, scales, engine=args.engine)
    rep = verify_holder_bound(family, t, args.p, xi, scales, engine=args.engine,
                              exponent_offset=args.inflate)
    out = {
        "t": str(t),
        "alpha_target": est.alpha_target,
        "fitted_exponent": est.fitted_exponent,
        "fit_residual": est.fit_residual,
        "constant": est.constant,
        "mesh_sizes": list(est.mesh_sizes),
        "constant_per_mesh": list(est.constant_per_mesh),
        "locally_constant": est.locally_constant,
        "bound_check": {
            "alpha": rep.alpha,
            "passed": rep.passed,
            "stability_ratio": rep.stability_ratio,
            "detail": rep.detail,
        },
    }
    _emit_json(out, args.json)
    return 0


def _cmd_diag(args) -> int:
    eps = args.epsilon
    pmap = _resolve_map(args.map, args.param, eps)
    hole = _parse_hole_arg(args.hole, eps)
    if args.dump_config:
        _emit_json(map_to_config(pmap, None if hole.is_empty else hole), args.json)
        return 0
    diag = expansion_diagnostics(pmap, args.n, hole=hole)
    _emit_json({
        "n": diag.n,
        "theta_n": diag.theta_n,
        "lambda_n": diag.lambda_n,
        "xi_n": diag.xi_n,
        "a_n": diag.a_n,
        "A_n": diag.A_n,
    }, args.json)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="holed-entropy",
        description="Topological entropy of interval maps with holes")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="cmd", required=True)

    def common(p, need_map=True):
        if need_map:
            p.add_argument("--map", required=True,
                           help="doubling | d-adic:<d> | farey | config.json")
            p.add_argument("--param", help="map parameter (farey a)")
            p.add_argument("--hole", help="pieces lo,hi separated by ';'")
        p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                       help="float-mode classification tolerance")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default HOLED_ENTROPY_THREADS or 1)")
        p.add_argument("--json", help="write a JSON report to this path")

    p = sub.add_parser("entropy", help="entropy of one map/hole pair")
    common(p)
    p.add_argument("--engine", default="kneading",
                   choices=["kneading", "markov", "oracle", "compare"])
    p.add_argument("--depth", type=int, default=20, help="oracle/compare level")
    p.add_argument("--trunc", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--orbit-cap", type=int, default=10_000)
    p.set_defaults(fn=_cmd_entropy)

    p = sub.add_parser("tower", help="boundary-orbit determinant for hole [a,1]")
    common(p, need_map=False)
    p.add_argument("--a", required=True)
    p.add_argument("--k-cap", type=int, default=None)
    p.add_argument("--trunc", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-14)
    p.set_defaults(fn=_cmd_tower)

    p = sub.add_parser("spectrum", help="exact Markov transition spectrum")
    common(p)
    p.add_argument("--orbit-cap", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--dot", help="write the transition graph in DOT format")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("oracle", help="per-level survivor counts")
    common(p)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--component-cap", type=int, default=10_000_000)
    p.add_argument("--csv", help="write level,count,entropy_estimate rows")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("sweep", help="entropy over a hole family grid")
    common(p, need_map=False)
    p.add_argument("--family", required=True, choices=["left", "sliding"])
    p.add_argument("--width", help="sliding hole width (rational)")
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--engine", default="kneading",
                   choices=["kneading", "markov", "oracle"])
    p.add_argument("--oracle-depth", type=int, default=None)
    p.add_argument("--extra", nargs="*", help="extra exact grid points")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("holder", help="local regularity estimate at one point")
    common(p, need_map=False)
    p.add_argument("--family", required=True, choices=["left", "sliding"])
    p.add_argument("--width")
    p.add_argument("--t", required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--xi", type=float, default=None,
                   help="expansion rate (default log 2)")
    p.add_argument("--scale-from", type=int, default=6,
                   help="coarsest scale 2^-k")
    p.add_argument("--scale-to", type=int, default=16,
                   help="finest scale 2^-k")
    p.add_argument("--inflate", type=float, default=0.0,
                   help="exponent offset for the bound check")
    p.add_argument("--engine", default="kneading",
                   choices=["kneading", "markov", "oracle"])
    p.set_defaults(fn=_cmd_holder)

    p = sub.add_parser("diag", help="expansion diagnostics / config dump")
    common(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--dump-config", action="store_true")
    p.set_defaults(fn=_cmd_diag)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _ENGINE_ERRORS as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 3
    except HoledEntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
