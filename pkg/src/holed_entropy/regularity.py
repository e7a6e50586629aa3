"""Parameter sweeps over hole families and empirical regularity estimates.

A sweep evaluates one entropy engine over an exact rational grid of hole
parameters.  The regularity estimators sample entropy differences around a
base point across a geometric ladder of scales, fit a log-log exponent, and
check boundedness of the fitted constant: a genuine exponent keeps the
per-mesh constants within a fixed factor across the ladder, while an
overshot exponent makes them grow geometrically.  No limit claims are made
anywhere; everything is reported per mesh.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cylinders import entropy_estimate, refine
from .errors import HoledEntropyError, InvalidParameterError
from .kneading import entropy_left_hole
from .mapmodel import Hole, PiecewiseMap, build_doubling
from .markov import entropy_markov
from .scalar import Scalar


# ---------------------------------------------------------------------------
# hole families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeftHoleFamily:
    """s -> [s, 1] for the doubling map; admissible s in (1/2, 1)."""

    name: str = "left"

    def admissible(self, s: Fraction) -> bool:
        return Fraction(1, 2) < s < 1

    def hole(self, s: Fraction) -> Hole:
        return Hole([(Scalar.exact(s), Scalar.exact(1))])

    def map(self) -> PiecewiseMap:
        return build_doubling()


@dataclass(frozen=True)
class SlidingHoleFamily:
    """s -> [s, s + width] for the doubling map; admissible s in (0, 1 - width)."""

    width: Fraction
    name: str = "sliding"

    def __post_init__(self):
        w = Fraction(self.width)
        if not (0 < w < 1):
            raise InvalidParameterError("width must lie in (0, 1)")
        object.__setattr__(self, "width", w)

    def admissible(self, s: Fraction) -> bool:
        return 0 < s and s + self.width < 1

    def hole(self, s: Fraction) -> Hole:
        return Hole([(Scalar.exact(s), Scalar.exact(s + self.width))])

    def map(self) -> PiecewiseMap:
        return build_doubling()


@dataclass(frozen=True)
class CustomFamily:
    """Arbitrary parameterized holes over a fixed map."""

    pmap: PiecewiseMap
    hole_fn: Callable[[Fraction], Hole]
    name: str = "custom"

    def admissible(self, s: Fraction) -> bool:
        return True

    def hole(self, s: Fraction) -> Hole:
        return self.hole_fn(s)

    def map(self) -> PiecewiseMap:
        return self.pmap


# ---------------------------------------------------------------------------
# engine dispatch
# ---------------------------------------------------------------------------

def entropy_at(family, s: Fraction, engine: str, params: dict | None = None
               ) -> tuple[float, Optional[int], Optional[float]]:
    """(entropy, pole order if known, error bound if known) at one parameter."""
    params = params or {}
    s = Fraction(s)
    if not family.admissible(s):
        raise InvalidParameterError(f"parameter {s} is outside the family range")
    if engine == "kneading":
        if not isinstance(family, LeftHoleFamily):
            raise InvalidParameterError("the kneading engine only covers left holes")
        res = entropy_left_hole(Scalar.exact(s),
                                K=params.get("K", 4096),
                                tol=params.get("tol", 1e-14))
        return res.entropy, res.p, res.root.error_bound
    if engine == "markov":
        res = entropy_markov(family.map(), family.hole(s),
                             orbit_cap=params.get("orbit_cap", 10_000),
                             tol=params.get("tol", 1e-12))
        return res.entropy, res.report.pole_order_p, params.get("tol", 1e-12)
    if engine == "oracle":
        n = params.get("n", 20)
        tree = refine(family.map(), family.hole(s), n,
                      params.get("component_cap", 10_000_000))
        return entropy_estimate(tree, n), None, None
    raise InvalidParameterError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for one engine over one family.

    Grid points are exact rationals: start + k*(end - start)/(count - 1).
    ``extra_points`` are merged in (deduplicated, sorted).
    """

    family: object
    start: Fraction
    end: Fraction
    count: int
    engine: str = "kneading"
    engine_params: dict = field(default_factory=dict)
    extra_points: tuple = ()

    def grid(self) -> list[Fraction]:
        start, end = Fraction(self.start), Fraction(self.end)
        if not start < end:
            raise InvalidParameterError("grid needs start < end")
        if self.count < 2:
            raise InvalidParameterError("grid needs count >= 2")
        step = (end - start) / (self.count - 1)
        pts = [start + k * step for k in range(self.count)]
        pts.extend(Fraction(x) for x in self.extra_points)
        return sorted(set(pts))


@dataclass(frozen=True)
class SweepRow:
    s: Fraction
    entropy: Optional[float]
    p: Optional[int]
    engine: str
    error_bound: Optional[float]
    status: str = "ok"


@dataclass
class SweepResult:
    rows: list[SweepRow]
    metadata: dict

    def entropies(self) -> list[float]:
        return [r.entropy for r in self.rows if r.entropy is not None]


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate the engine on every grid point; failures flag the row and the
    sweep continues.  Rows come back in grid order regardless of threads."""
    pts = spec.grid()
    for s in pts:
        if not spec.family.admissible(s):
            raise InvalidParameterError(f"grid point {s} is outside the family range")

    def work(s: Fraction) -> SweepRow:
        try:
            h, p, err = entropy_at(spec.family, s, spec.engine, spec.engine_params)
            return SweepRow(s, h, p, spec.engine, err)
        except HoledEntropyError as exc:
            return SweepRow(s, None, None, spec.engine, None,
                            f"error:{type(exc).__name__}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, pts))
    else:
        rows = [work(s) for s in pts]
    meta = {
        "family": getattr(spec.family, "name", "custom"),
        "engine": spec.engine,
        "count": len(rows),
        "start": str(pts[0]),
        "end": str(pts[-1]),
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    return SweepResult(rows, meta)


# ---------------------------------------------------------------------------
# regularity estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolderEstimate:
    """Per-mesh regularity data around a base parameter.

    ``alpha_target`` is h(t) / (p * xi).  ``constant_per_mesh[k]`` is the
    worst ratio |h(s) - h(t)| / |s - t|**alpha_target at scale k;
    ``constant`` is the max over the ladder.  ``fitted_exponent`` is the
    log-log regression slope over the nonzero differences (None when the
    entropy is constant across every sampled scale).
    """

    t: Fraction
    alpha_target: float
    fitted_exponent: Optional[float]
    fit_residual: Optional[float]
    constant: float
    mesh_sizes: tuple[float, ...]
    constant_per_mesh: tuple[float, ...]
    locally_constant: bool
    entropy_at_t: float


def _sample_diffs(family, t: Fraction, scales, engine: str, params: dict | None):
    h_t, _, _ = entropy_at(family, t, engine, params)
    diffs = []
    for delta in scales:
        delta = Fraction(delta)
        if delta <= 0:
            raise InvalidParameterError("scales must be positive")
        best = 0.0
        for s in (t - delta, t + delta):
            if family.admissible(s):
                h_s, _, _ = entropy_at(family, s, engine, params)
                best = max(best, abs(h_s - h_t))
        diffs.append((float(delta), best))
    return h_t, diffs


def holder_estimate(family, t, p: int, xi: float, scales: Sequence,
                    engine: str = "kneading",
                    engine_params: dict | None = None) -> HolderEstimate:
    """Sample h(t +- delta) across the scale ladder and report the target
    exponent h(t)/(p*xi), the fitted log-log exponent, and per-mesh constants.

    Entropy constant across every scale is flagged, not an error: the
    exponent is undefined on a plateau.
    """
    t = Fraction(t)
    if p < 1:
        raise InvalidParameterError("pole order must be >= 1")
    if len(scales) < 2:
        raise InvalidParameterError("need at least two scales")
    sc = [Fraction(d) for d in scales]
    if any(b >= a for a, b in zip(sc, sc[1:])):
        raise InvalidParameterError("scales must be strictly decreasing")
    h_t, diffs = _sample_diffs(family, t, sc, engine, engine_params)
    alpha = h_t / (p * xi) if h_t > 0 else 0.0
    mesh = tuple(d for d, _ in diffs)
    if alpha == 0.0:
        return HolderEstimate(t, 0.0, None, None, 0.0, mesh,
                              tuple(0.0 for _ in diffs),
                              all(dh == 0 for _, dh in diffs), h_t)
    consts = tuple(dh / d ** alpha for d, dh in diffs)
    xs = [math.log(d) for d, dh in diffs if dh > 0]
    ys = [math.log(dh) for _, dh in diffs if dh > 0]
    fitted = residual = None
    if len(xs) >= 2:
        n = len(xs)
        mx, my = sum(xs) / n, sum(ys) / n
        sxx = sum((x - mx) ** 2 for x in xs)
        if sxx > 0:
            fitted = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
            residual = math.sqrt(sum((y - (my + fitted * (x - mx))) ** 2
                                     for x, y in zip(xs, ys)) / n)
    return HolderEstimate(t, alpha, fitted, residual, max(consts), mesh, consts,
                          all(dh == 0 for _, dh in diffs), h_t)


@dataclass(frozen=True)
class HolderBoundReport:
    """Outcome of the bounded-constant check at a candidate exponent."""

    passed: bool
    alpha: float
    constant: float
    mesh_sizes: tuple[float, ...]
    constant_per_mesh: tuple[float, ...]
    stability_ratio: Optional[float]
    locally_constant: bool
    detail: str


def verify_holder_bound(family, t, p: int, xi: float, scales: Sequence,
                        engine: str = "kneading",
                        engine_params: dict | None = None,
                        exponent_offset: float = 0.0,
                        stability_factor: float = 4.0) -> HolderBoundReport:
    """Check |h(s) - h(t)| <= C |s - t|**alpha with one C across all scales.

    alpha is h(t)/(p*xi) plus ``exponent_offset``.  Passes when every
    per-mesh constant is positive and the largest exceeds the smallest by at
    most ``stability_factor`` across the whole ladder; a constant entropy
    passes trivially with C = 0.  Failure is a report outcome, not an error.
    """
    t = Fraction(t)
    sc = [Fraction(d) for d in scales]
    if len(sc) < 2 or any(b >= a for a, b in zip(sc, sc[1:])):
        raise InvalidParameterError("scales must be >= 2 values, strictly decreasing")
    h_t, diffs = _sample_diffs(family, t, sc, engine, engine_params)
    if h_t <= 0:
        raise InvalidParameterError("the bound applies only where entropy is positive")
    alpha = h_t / (p * xi) + exponent_offset
    mesh = tuple(d for d, _ in diffs)
    consts = tuple(dh / d ** alpha for d, dh in diffs)
    if all(c == 0 for c in consts):
        return HolderBoundReport(True, alpha, 0.0, mesh, consts, None, True,
                                 "entropy locally constant across all scales")
    if any(c == 0 for c in consts):
        return HolderBoundReport(False, alpha, max(consts), mesh, consts, None,
                                 False, "mixed zero and nonzero constants")
    ratio = max(consts) / min(consts)
    ok = ratio <= stability_factor
    detail = (f"constant varies by factor {ratio:.3g} across the ladder; "
              f"{'within' if ok else 'exceeds'} the stability factor "
              f"{stability_factor:g}")
    return HolderBoundReport(ok, alpha, max(consts), mesh, consts, ratio,
                             False, detail)


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def emit_csv(result: SweepResult, path: str):
    """CSV with header s,s_exact,entropy,p,engine,error_bound,status.

    Floats carry 15 significant digits; the exact parameter rides along as a
    rational string.  An empty sweep is an error.
    """
    if not result.rows:
        raise InvalidParameterError("refusing to emit an empty sweep")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("s,s_exact,entropy,p,engine,error_bound,status\n")
        for r in result.rows:
            ent = "" if r.entropy is None else f"{r.entropy:.15g}"
            p = "" if r.p is None else str(r.p)
            err = "" if r.error_bound is None else f"{r.error_bound:.15g}"
            fh.write(f"{float(r.s):.15g},{r.s},{ent},{p},{r.engine},{err},{r.status}\n")


def emit_svg_plot(result: SweepResult, path: str, style: dict | None = None):
    """Minimal self-contained SVG line plot (polyline plus labeled axes)."""
    if not result.rows:
        raise InvalidParameterError("refusing to plot an empty sweep")
    style = style or {}
    width, height = 800, 600
    ml, mr, mt, mb = 70, 20, 40, 50
    rows = [r for r in result.rows if r.entropy is not None]
    if not rows:
        raise InvalidParameterError("no successful rows to plot")
    xs = [float(r.s) for r in rows]
    ys = [r.entropy for r in rows]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y1 = y0 + 1.0
    if x1 == x0:
        x1 = x0 + 1.0

    def px(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def py(y):
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    color = style.get("color", "#1f6fb2")
    title = style.get("title", f"entropy sweep ({result.metadata.get('engine', '?')})")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{ml}" y1="{height-mb}" x2="{width-mr}" y2="{height-mb}" '
        'stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height-mb}" stroke="black"/>',
        f'<text x="{ml}" y="{height-mb+20}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{x0:.6g}</text>',
        f'<text x="{width-mr}" y="{height-mb+20}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{x1:.6g}</text>',
        f'<text x="{ml-8}" y="{height-mb}" font-family="sans-serif" '
        f'font-size="12" text-anchor="end">{y0:.6g}</text>',
        f'<text x="{ml-8}" y="{mt+4}" font-family="sans-serif" '
        f'font-size="12" text-anchor="end">{y1:.6g}</text>',
        f'<text x="{width/2:.0f}" y="{height-10}" text-anchor="middle" '
        'font-family="sans-serif" font-size="13">hole parameter s</text>',
        f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
        f'points="{pts}"/>',
        "</svg>",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
