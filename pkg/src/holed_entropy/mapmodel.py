"""Piecewise monotone interval maps, holes, and the measure pseudometric.

A map is an ordered list of strictly monotone branches (affine or Moebius)
over disjoint open subintervals of a compact interval.  A hole is a
normalized finite union of closed intervals; orbits entering a hole stop
evolving.  Everything here is immutable after construction and safe to share
across threads.

Conventions pinned here and relied on by the engines:

* holes are closed, partition elements and cylinders are open;
* a survivor piece only counts if it has positive length, so exact and
  float runs classify identically away from the tolerance;
* branch-domain boundaries are excluded when removing a hole (the partition
  elements are open).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvalidParameterError, ModeMismatchError
from .scalar import DEFAULT_EPSILON, Raw, Scalar, as_scalar, parse_rational, rational_str

ScalarLike = Union[Scalar, int, Fraction, str, float]


@dataclass(frozen=True)
class IntervalOpen:
    """The open interval (lo, hi), lo < hi."""

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        self.lo._require_same_mode(self.hi)
        if not self.lo.value < self.hi.value:
            raise InvalidParameterError(
                f"open interval needs lo < hi, got ({self.lo.value}, {self.hi.value})")

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo

    def as_raw(self) -> tuple[Raw, Raw]:
        return self.lo.value, self.hi.value


@dataclass(frozen=True)
class Affine:
    """x -> slope*x + offset, slope != 0."""

    slope: Scalar
    offset: Scalar

    def __post_init__(self):
        self.slope._require_same_mode(self.offset)
        if self.slope.value == 0:
            raise InvalidParameterError("affine branch needs nonzero slope")


@dataclass(frozen=True)
class Moebius:
    """x -> (p*x + q) / (r*x + s) with p*s - q*r != 0."""

    p: Scalar
    q: Scalar
    r: Scalar
    s: Scalar

    def __post_init__(self):
        for field in (self.q, self.r, self.s):
            self.p._require_same_mode(field)
        det = self.p.value * self.s.value - self.q.value * self.r.value
        if det == 0:
            raise InvalidParameterError("moebius branch is degenerate (ps - qr = 0)")


BranchKind = Union[Affine, Moebius]


@dataclass(frozen=True)
class Branch:
    """One monotone branch of the map with its domain.

    The branch function extends continuously to the closure of the domain;
    ``apply``/``invert``/``derivative`` use that extension, exactly in exact
    mode.  For a Moebius branch the pole must lie outside the domain closure.
    """

    domain: IntervalOpen
    kind: BranchKind

    def __post_init__(self):
        self.domain.lo._require_same_mode(_mode_witness(self.kind))
        if isinstance(self.kind, Moebius):
            r, s = self.kind.r.value, self.kind.s.value
            if r != 0:
                pole = -s / r
                lo, hi = self.domain.as_raw()
                if lo <= pole <= hi:
                    raise InvalidParameterError(
                        f"moebius pole {pole} lies inside the branch domain closure")

    # raw-value kernels used by the engines --------------------------------

    def apply_raw(self, x: Raw) -> Raw:
        k = self.kind
        if isinstance(k, Affine):
            return k.slope.value * x + k.offset.value
        return (k.p.value * x + k.q.value) / (k.r.value * x + k.s.value)

    def invert_raw(self, y: Raw) -> Raw:
        k = self.kind
        if isinstance(k, Affine):
            return (y - k.offset.value) / k.slope.value
        # inverse of (px+q)/(rx+s) is (sy-q)/(-ry+p)
        return (k.s.value * y - k.q.value) / (-k.r.value * y + k.p.value)

    def derivative_raw(self, x: Raw) -> Raw:
        k = self.kind
        if isinstance(k, Affine):
            return k.slope.value
        det = k.p.value * k.s.value - k.q.value * k.r.value
        den = k.r.value * x + k.s.value
        return det / (den * den)

    # Scalar-level conveniences --------------------------------------------

    def apply(self, x: ScalarLike) -> Scalar:
        x = as_scalar(x)
        x._require_same_mode(self.domain.lo)
        return Scalar(self.apply_raw(x.value), x.epsilon)

    def invert(self, y: ScalarLike) -> Scalar:
        y = as_scalar(y)
        y._require_same_mode(self.domain.lo)
        return Scalar(self.invert_raw(y.value), y.epsilon)

    def derivative(self, x: ScalarLike) -> Scalar:
        x = as_scalar(x)
        x._require_same_mode(self.domain.lo)
        return Scalar(self.derivative_raw(x.value), x.epsilon)

    @property
    def orientation(self) -> int:
        """+1 for increasing, -1 for decreasing."""
        k = self.kind
        if isinstance(k, Affine):
            return 1 if k.slope.value > 0 else -1
        det = k.p.value * k.s.value - k.q.value * k.r.value
        return 1 if det > 0 else -1

    def image_raw(self) -> tuple[Raw, Raw]:
        """Image of the domain closure, as a sorted (lo, hi) pair."""
        lo, hi = self.domain.as_raw()
        a, b = self.apply_raw(lo), self.apply_raw(hi)
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class PiecewiseMap:
    """Ordered monotone branches over disjoint open subintervals of I."""

    codomain: IntervalOpen
    branches: tuple[Branch, ...]

    def __post_init__(self):
        if not self.branches:
            raise InvalidParameterError("map needs at least one branch")
        object.__setattr__(self, "branches", tuple(self.branches))
        mode = self.codomain.lo
        for b in self.branches:
            mode._require_same_mode(b.domain.lo)
        ilo, ihi = self.codomain.as_raw()
        prev_hi = None
        for b in self.branches:
            lo, hi = b.domain.as_raw()
            if lo < ilo or hi > ihi:
                raise InvalidParameterError("branch domain exceeds the codomain")
            if prev_hi is not None and lo < prev_hi:
                raise InvalidParameterError("branch domains overlap or are unordered")
            prev_hi = hi
            w1, w2 = b.image_raw()
            if w1 < ilo or w2 > ihi:
                raise InvalidParameterError(
                    f"branch image ({w1}, {w2}) escapes the codomain closure")

    @property
    def is_exact(self) -> bool:
        return self.codomain.lo.is_exact

    @property
    def epsilon(self) -> float:
        return 0.0 if self.is_exact else self.codomain.lo.epsilon

    def branch_domains_raw(self) -> list[tuple[Raw, Raw]]:
        return [b.domain.as_raw() for b in self.branches]


class Hole:
    """Normalized finite union of closed intervals.

    Overlapping or touching pieces are merged on construction; degenerate
    pieces [a, a] are allowed and carry zero measure.
    """

    __slots__ = ("pieces", "epsilon")

    def __init__(self, pieces: Iterable[tuple[ScalarLike, ScalarLike]],
                 epsilon: float | None = None):
        norm: list[tuple[Raw, Raw]] = []
        mode_exact = None
        for piece in pieces:
            lo, hi = piece
            lo, hi = as_scalar(lo, epsilon), as_scalar(hi, epsilon)
            lo._require_same_mode(hi)
            if mode_exact is None:
                mode_exact = lo.is_exact
                eps = lo.epsilon
            else:
                if lo.is_exact != mode_exact:
                    raise ModeMismatchError("hole pieces mix exact and float scalars")
                eps = lo.epsilon
            if lo.value > hi.value:
                raise InvalidParameterError(f"hole piece has lo > hi: {lo.value}, {hi.value}")
            norm.append((lo.value, hi.value))
        if mode_exact is None:
            mode_exact, eps = True, None
        tol = 0 if mode_exact else eps
        norm.sort()
        merged: list[list[Raw]] = []
        for lo, hi in norm:
            if merged and lo <= merged[-1][1] + tol:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        self.pieces: tuple[tuple[Raw, Raw], ...] = tuple((lo, hi) for lo, hi in merged)
        self.epsilon = None if mode_exact else eps

    @staticmethod
    def empty() -> "Hole":
        return Hole(())

    @property
    def is_exact(self) -> bool:
        return self.epsilon is None

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def measure(self) -> Raw:
        total = Fraction(0) if self.is_exact else 0.0
        for lo, hi in self.pieces:
            total += hi - lo
        return total

    def __eq__(self, other):
        return isinstance(other, Hole) and self.pieces == other.pieces \
            and self.epsilon == other.epsilon

    def __hash__(self):
        return hash((self.pieces, self.epsilon))

    def __repr__(self):
        inner = ", ".join(f"[{lo}, {hi}]" for lo, hi in self.pieces)
        return f"Hole({inner})"


def _mode_witness(kind: BranchKind) -> Scalar:
    return kind.slope if isinstance(kind, Affine) else kind.p


def _require_same_mode(pmap: PiecewiseMap, hole: Hole):
    if hole.is_empty:
        return
    if pmap.is_exact != hole.is_exact:
        raise ModeMismatchError("map and hole are in different scalar modes")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_d_adic(d: int) -> PiecewiseMap:
    """The map x -> d*x mod 1 on (0,1), as d affine increasing branches."""
    if not isinstance(d, int) or d < 2:
        raise InvalidParameterError(f"d-adic map needs an integer d >= 2, got {d!r}")
    I = IntervalOpen(Scalar.exact(0), Scalar.exact(1))
    branches = []
    for k in range(d):
        dom = IntervalOpen(Scalar.exact(Fraction(k, d)), Scalar.exact(Fraction(k + 1, d)))
        branches.append(Branch(dom, Affine(Scalar.exact(d), Scalar.exact(-k))))
    return PiecewiseMap(I, tuple(branches))


def build_doubling() -> PiecewiseMap:
    return build_d_adic(2)


def build_scaled_farey(a: ScalarLike) -> PiecewiseMap:
    """Two Moebius branches: a*x/(1-x) on (0,1/2) and a*(1-x)/x on (1/2,1)."""
    a = as_scalar(a)
    if not (a.value > 0 and a.value <= 1):
        raise InvalidParameterError(f"scaled Farey parameter must lie in (0, 1], got {a.value}")
    eps = a.epsilon

    def sc(v):
        return Scalar.exact(v) if a.is_exact else Scalar.approx(float(v), eps)

    I = IntervalOpen(sc(0), sc(1))
    half = sc(Fraction(1, 2))
    left = Branch(IntervalOpen(sc(0), half), Moebius(a, sc(0), sc(-1), sc(1)))
    right = Branch(IntervalOpen(half, sc(1)), Moebius(-a, a, sc(1), sc(0)))
    return PiecewiseMap(I, (left, right))


_BUILTIN_MAPS = {"doubling": build_doubling, "farey": build_scaled_farey}


# ---------------------------------------------------------------------------
# hole operations
# ---------------------------------------------------------------------------

def hole_dist(h1: Hole, h2: Hole) -> Scalar:
    """Lebesgue measure of the symmetric difference of two holes.

    A pseudometric: symmetric, triangle inequality, zero on equal holes, but
    it can vanish on distinct holes (degenerate pieces are invisible).
    """
    if not h1.is_empty and not h2.is_empty and h1.is_exact != h2.is_exact:
        raise ModeMismatchError("holes are in different scalar modes")
    exact = h1.is_exact and h2.is_exact
    inter = Fraction(0) if exact else 0.0
    for lo1, hi1 in h1.pieces:
        for lo2, hi2 in h2.pieces:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo:
                inter += hi - lo
    total = h1.measure() + h2.measure() - 2 * inter
    if exact:
        return Scalar.exact(total)
    eps = h1.epsilon if h1.epsilon is not None else h2.epsilon
    return Scalar.approx(float(total), eps if eps is not None else DEFAULT_EPSILON)


def subtract_pieces(lo: Raw, hi: Raw, pieces: Sequence[tuple[Raw, Raw]],
                    tol) -> list[tuple[Raw, Raw]]:
    """Open components of (lo, hi) minus closed pieces, keeping positive length.

    ``tol`` is 0 for exact values; components of length <= tol are dropped.
    """
    out = []
    cur = lo
    for plo, phi in pieces:
        if phi <= cur:
            continue
        if plo >= hi:
            break
        if plo > cur + tol:
            out.append((cur, min(plo, hi)))
        cur = max(cur, phi)
        if cur >= hi:
            break
    if cur + tol < hi:
        out.append((cur, hi))
    return [(a, b) for a, b in out if b - a > tol]


def restrict_partition(pmap: PiecewiseMap, hole: Hole) -> list[IntervalOpen]:
    """Level-1 survivor pieces: branch domains minus the hole, open components
    of positive length, listed left to right."""
    _require_same_mode(pmap, hole)
    tol = 0 if pmap.is_exact else pmap.epsilon
    eps = None if pmap.is_exact else pmap.epsilon
    out = []
    for b in pmap.branches:
        lo, hi = b.domain.as_raw()
        for a, c in subtract_pieces(lo, hi, hole.pieces, tol):
            out.append(IntervalOpen(Scalar(a, eps), Scalar(c, eps)))
    return out


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------

def _value_to_json(v: Raw):
    if isinstance(v, Fraction):
        return rational_str(v)
    return float(v)


def _value_from_json(v, float_mode: bool, eps: float):
    if isinstance(v, str):
        x = parse_rational(v)
        return Scalar.approx(float(x), eps) if float_mode else Scalar.exact(x)
    if isinstance(v, bool):
        raise InvalidParameterError("boolean in numeric position")
    if isinstance(v, int):
        return Scalar.approx(float(v), eps) if float_mode else Scalar.exact(v)
    if isinstance(v, float):
        return Scalar.approx(v, eps)
    raise InvalidParameterError(f"cannot parse scalar from {v!r}")


def map_to_config(pmap: PiecewiseMap, hole: Hole | None = None) -> dict:
    """Serializable description of a map (and optional hole).

    Exact values render as rational strings, so a round trip through JSON
    reproduces the map field by field.
    """
    cfg = {
        "codomain": [_value_to_json(v) for v in pmap.codomain.as_raw()],
        "branches": [],
    }
    for b in pmap.branches:
        k = b.kind
        if isinstance(k, Affine):
            kind, coeffs = "affine", [k.slope.value, k.offset.value]
        else:
            kind, coeffs = "moebius", [k.p.value, k.q.value, k.r.value, k.s.value]
        cfg["branches"].append({
            "domain": [_value_to_json(v) for v in b.domain.as_raw()],
            "kind": kind,
            "coeffs": [_value_to_json(c) for c in coeffs],
        })
    if hole is not None:
        cfg["hole"] = [[_value_to_json(lo), _value_to_json(hi)] for lo, hi in hole.pieces]
    if not pmap.is_exact:
        cfg["epsilon"] = pmap.epsilon
    return cfg


def map_from_config(cfg: dict) -> tuple[PiecewiseMap, Hole | None]:
    """Parse the configuration emitted by :func:`map_to_config`.

    JSON numbers that are not integers force float mode for the whole
    configuration; strings (including decimal strings) parse exactly.
    Overlapping branch domains are rejected.
    """
    if "codomain" not in cfg or "branches" not in cfg:
        raise InvalidParameterError("config needs 'codomain' and 'branches'")
    eps = float(cfg.get("epsilon", DEFAULT_EPSILON))

    def _floats_present(obj):
        if isinstance(obj, float):
            return True
        if isinstance(obj, list):
            return any(_floats_present(x) for x in obj)
        if isinstance(obj, dict):
            return any(_floats_present(x) for x in obj.values())
        return False

    float_mode = "epsilon" in cfg or _floats_present(
        [cfg["codomain"], cfg["branches"], cfg.get("hole", [])])

    def val(v):
        return _value_from_json(v, float_mode, eps)

    lo, hi = cfg["codomain"]
    codomain = IntervalOpen(val(lo), val(hi))
    branches = []
    for bc in cfg["branches"]:
        dlo, dhi = bc["domain"]
        dom = IntervalOpen(val(dlo), val(dhi))
        coeffs = [val(c) for c in bc["coeffs"]]
        if bc["kind"] == "affine":
            if len(coeffs) != 2:
                raise InvalidParameterError("affine branch needs [slope, offset]")
            kind = Affine(*coeffs)
        elif bc["kind"] == "moebius":
            if len(coeffs) != 4:
                raise InvalidParameterError("moebius branch needs [p, q, r, s]")
            kind = Moebius(*coeffs)
        else:
            raise InvalidParameterError(f"unknown branch kind {bc['kind']!r}")
        branches.append(Branch(dom, kind))
    pmap = PiecewiseMap(codomain, tuple(branches))
    hole = None
    if "hole" in cfg:
        hole = Hole([(val(lo), val(hi)) for lo, hi in cfg["hole"]],
                    epsilon=eps if float_mode else None)
        ilo, ihi = pmap.codomain.as_raw()
        for plo, phi in hole.pieces:
            if plo < ilo or phi > ihi:
                raise InvalidParameterError("hole piece escapes the codomain closure")
    return pmap, hole


def load_map_config(path: str) -> tuple[PiecewiseMap, Hole | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return map_from_config(json.load(fh))
