"""Entropy of the doubling map with a left hole [a, 1] via the boundary-orbit
tower and the leading root of its determinant.

The boundary orbit is a_0 = a, a_{k+1} = T(min{a, a_k}^-) with T the doubling
map and left limits T(x^-) = 2x on (0, 1/2), T(1/2^-) = 1, T(x^-) = 2x - 1 on
(1/2, 1].  Writing A = {k : 1/2 <= a_k < 1}, the tower determinant is

    d(z) = 1 - sum_{k in A} z^{k+1},

and entropy = -log r for the unique root r of d in (0, 1).  Finite orbits
(every rational a) admit an exact polynomial form: when the orbit first
repeats a_{N+1} = a_j with j >= 1 the determinant factors as

    d(z) = (1 - z^(N-j+1)) * (1 - sum_k M~_k z^(k+1)),

with the coefficient tail M~ eventually periodic over indices j..N.  When the
orbit passes through 1/2 exactly (so the next value is 1 and the graph closes
onto the base), the determinant is the plain finite sum over A with no cycle
factor; the value 1 never contributes a coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (AmbiguousBoundaryError, InvalidParameterError,
                     NoRootError, TruncationError)
from .polyexact import poly_eval, poly_trim
from .scalar import Scalar, as_scalar

DEFAULT_TRUNCATION = 4096
DEFAULT_TOL = 1e-14

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Termination:
    """How the boundary orbit was classified.

    kind is "preperiodic" (a_{N+1} = a_j exactly, 1 <= j <= N), "escape"
    (a_N >= a observed in float mode before any repeat), or "capped".
    """

    kind: str
    n: Optional[int] = None
    j: Optional[int] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.n is not None:
            out["N"] = self.n
        if self.j is not None:
            out["j"] = self.j
        return out


@dataclass(frozen=True)
class TowerOrbit:
    """The recorded boundary orbit with its classification.

    ``points`` holds a_0..a_K.  ``index_set_A`` lists the k with
    1/2 <= a_k < 1 (a terminal value of exactly 1 carries no index).
    ``escape_index`` is the first k >= 1 with a_k >= a, when one exists.
    ``approx_repeat`` flags a float-mode repeat; float orbits always
    terminate as capped because float equality cannot certify the true
    orbit's period.
    """

    a: Scalar
    points: tuple
    termination: Termination
    index_set_A: tuple[int, ...]
    escape_index: Optional[int] = None
    approx_repeat: Optional[tuple[int, int]] = None

    @property
    def is_exact(self) -> bool:
        return self.a.is_exact


def _t_left_exact(x: Fraction) -> Fraction:
    if x < _HALF:
        return 2 * x
    if x == _HALF:
        return Fraction(1)
    return 2 * x - 1


def build_orbit(a, k_cap: int = DEFAULT_TRUNCATION) -> TowerOrbit:
    """Iterate the boundary recurrence and classify its termination.

    Exact mode detects the first exact repeat among indices >= 1 (always
    reached for rational a given a large enough cap).  Float mode runs to the
    cap, records an approximate repeat if one shows up, and refuses values
    within epsilon of the 1/2 boundary.
    """
    a = as_scalar(a)
    if k_cap < 2:
        raise InvalidParameterError("k_cap must be >= 2")
    if a.is_exact:
        av = a.value
        if not (_HALF < av < 1):
            raise InvalidParameterError(f"parameter must lie in (1/2, 1), got {av}")
        points = [av]
        seen: dict[Fraction, int] = {}
        escape_index = None
        termination = Termination("capped", k_cap)
        for n in range(1, k_cap + 1):
            nxt = _t_left_exact(min(av, points[-1]))
            j = seen.get(nxt)
            if j is not None:
                termination = Termination("preperiodic", n - 1, j)
                break
            seen[nxt] = n
            points.append(nxt)
            if escape_index is None and nxt >= av:
                escape_index = n
        A = tuple(k for k, x in enumerate(points) if _HALF <= x < 1)
        return TowerOrbit(a, tuple(points), termination, A, escape_index)

    eps = a.epsilon
    av = float(a.value)
    if not (0.5 + eps < av < 1 - eps):
        raise InvalidParameterError(
            f"parameter must lie in (1/2, 1) by more than epsilon, got {av}")
    points = [av]
    seen: dict[float, int] = {}
    escape_index = None
    approx = None
    for n in range(1, k_cap + 1):
        x = points[-1]
        if abs(x - 0.5) < eps and x != 0.5:
            raise AmbiguousBoundaryError(
                f"orbit point {x} is within epsilon of 1/2; rerun in exact mode")
        if abs(x - av) < eps and x != av:
            raise AmbiguousBoundaryError(
                f"orbit point {x} is within epsilon of the hole boundary; "
                "rerun in exact mode")
        if n == k_cap:
            break
        y = min(av, x)
        if y < 0.5:
            nxt = 2.0 * y
        elif y == 0.5:
            nxt = 1.0
        else:
            nxt = 2.0 * y - 1.0
        if approx is None:
            j = seen.get(nxt)
            if j is not None:
                approx = (n - 1, j)
            else:
                seen[nxt] = n
        points.append(nxt)
        if escape_index is None and nxt >= av:
            escape_index = n
    A = tuple(k for k, x in enumerate(points) if 0.5 <= x < 1)
    term = Termination("capped", len(points) - 1)
    if escape_index is not None and approx is None:
        term = Termination("escape", escape_index)
    return TowerOrbit(a, tuple(points), term, A, escape_index, approx)


@dataclass(frozen=True)
class DeterminantSeries:
    """The determinant 1 - sum m_k z^(k+1), with closed form when available.

    ``coefficients`` lists m_0..m_K.  ``polynomial`` (ascending) is exact for
    finite orbits; for capped orbits it is the truncated series and
    ``tail_bound`` carries the geometric remainder envelope.
    """

    coefficients: tuple[int, ...]
    polynomial: tuple[int, ...]
    exact: bool
    closed_form: Optional[dict] = None

    def tail_bound(self, x: float) -> float:
        if self.exact:
            return 0.0
        K = len(self.coefficients) - 1
        if not (0 <= x < 1):
            raise InvalidParameterError("tail bound needs x in [0, 1)")
        return x ** (K + 2) / (1 - x)

    def evaluate(self, x):
        return poly_eval(list(self.polynomial), x)

    def derivative_at(self, x) -> float:
        p = list(self.polynomial)
        return float(poly_eval([k * p[k] for k in range(1, len(p))], x))


def _tilde_coefficient(k: int, j: int, n: int, m: tuple[int, ...]) -> int:
    if k < j:
        return m[k]
    return m[j + (k - j) % (n - j + 1)]


def determinant(orbit: TowerOrbit, K: int | None = None) -> DeterminantSeries:
    """Determinant coefficients for the orbit, truncated at K.

    Pre-periodic orbits yield an exact polynomial; their coefficient list is
    extended periodically to K.  Capped orbits yield the truncated series
    with a geometric tail bound.
    """
    points = orbit.points
    A = set(orbit.index_set_A)
    last = len(points) - 1
    if K is None:
        K = max(last, 1)
    if K < 1:
        raise InvalidParameterError("truncation must be >= 1")
    term = orbit.termination

    if term.kind == "preperiodic":
        N, j = term.n, term.j
        m = tuple(1 if k in A else 0 for k in range(N + 1))
        terminal_one = points[N] == 1
        if terminal_one:
            # the orbit passed through 1/2; the graph closes onto the base
            # flat and the determinant is the plain finite sum over A
            poly = [0] * (N + 2)
            poly[0] = 1
            for k in range(N + 1):
                if m[k]:
                    poly[k + 1] = -1
            coeffs = tuple(m[k] if k <= N else 0 for k in range(K + 1))
            closed = {"kind": "finite", "N": N, "coefficients": m}
        else:
            P = N - j + 1
            poly = [0] * (N + 2 + P)
            poly[0] = 1
            poly[P] += -1
            for k in range(N + 1):
                if m[k]:
                    poly[k + 1] -= 1
            for k in range(j):
                if m[k]:
                    poly[P + k + 1] += 1
            coeffs = tuple(_tilde_coefficient(k, j, N, m) for k in range(K + 1))
            closed = {"kind": "factored", "N": N, "j": j, "period": P,
                      "coefficients": m}
        return DeterminantSeries(coeffs, tuple(poly_trim(poly)), True, closed)

    if K > last:
        raise TruncationError(
            f"truncation {K} exceeds the capped orbit length {last}")
    coeffs = tuple(1 if k in A else 0 for k in range(K + 1))
    poly = [0] * (K + 2)
    poly[0] = 1
    for k, mk in enumerate(coeffs):
        if mk:
            poly[k + 1] = -1
    return DeterminantSeries(coeffs, tuple(poly_trim(poly)), False, None)


@dataclass(frozen=True)
class RootResult:
    """Leading determinant root r in (0, 1) and the entropy -log r."""

    r: float
    residual: float
    entropy: float
    error_bound: float
    bracket: tuple[float, float]


def leading_root(series: DeterminantSeries, tol: float = DEFAULT_TOL) -> RootResult:
    """Locate the unique sign change of the determinant in (0, 1) by bisection
    with a float Newton polish.

    The reported error bound adds the truncation tail to the bracket width;
    the truncated series has derivative <= -1 on [0, 1), so a tail of size t
    moves the root by at most t.
    """
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    poly = list(series.polynomial)
    lo, flo = 0.0, 1.0
    hi = 1.0 - min(tol, 1e-9)
    fhi = float(series.evaluate(hi))
    if fhi > 0:
        raise NoRootError(
            "determinant stays positive on (0, 1); entropy 0 at this truncation")
    width = max(tol, 1e-16)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = float(series.evaluate(mid))
        if fm > 0:
            lo, flo = mid, fm
        elif fm < 0:
            hi, fhi = mid, fm
        else:
            lo = hi = mid
            break
    r = 0.5 * (lo + hi)
    for _ in range(3):
        dpr = float(poly_eval([k * poly[k] for k in range(1, len(poly))], r))
        if dpr == 0:
            break
        step = float(series.evaluate(r)) / dpr
        cand = r - step
        if lo <= cand <= hi:
            r = cand
    # exact sign certification of the bracket for modest exact polynomials
    if series.exact and len(poly) <= 512 and lo < hi:
        flo_x = poly_eval(poly, Fraction(lo))
        fhi_x = poly_eval(poly, Fraction(hi))
        if not (flo_x > 0 and fhi_x < 0):
            raise NoRootError("bracket failed exact sign certification")
    residual = abs(float(series.evaluate(r)))
    tail = series.tail_bound(hi)
    error = (hi - lo) + tail
    entropy = -math.log(r)
    return RootResult(r, residual, entropy, error, (lo, hi))


@dataclass(frozen=True)
class LeftHoleEntropy:
    """Composed result: orbit, determinant, root, and pole order."""

    a: Scalar
    orbit: TowerOrbit
    series: DeterminantSeries
    root: RootResult
    p: int = 1  # the leading eigenvalue of this family is always simple

    @property
    def entropy(self) -> float:
        return self.root.entropy

    def to_json(self) -> dict:
        return {
            "a": str(self.a.value) if self.a.is_exact else float(self.a.value),
            "entropy": self.root.entropy,
            "r": self.root.r,
            "p": self.p,
            "termination": self.orbit.termination.to_json(),
            "K": len(self.series.coefficients) - 1,
            "error_bound": self.root.error_bound,
        }


def entropy_left_hole(a, K: int = DEFAULT_TRUNCATION,
                      tol: float = DEFAULT_TOL,
                      k_cap: int | None = None) -> LeftHoleEntropy:
    """Entropy of the doubling map with hole [a, 1], 1/2 < a < 1."""
    a = as_scalar(a)
    orbit = build_orbit(a, k_cap if k_cap is not None else max(K, 2))
    if orbit.termination.kind == "preperiodic":
        series = determinant(orbit, K)
    else:
        series = determinant(orbit, min(K, len(orbit.points) - 1))
    root = leading_root(series, tol)
    return LeftHoleEntropy(a, orbit, series, root)
