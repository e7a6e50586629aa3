"""Exact Markov refinements, transition matrices, and leading-eigenvalue
Jordan structure for holes with finite boundary orbits.

When every branch endpoint and hole endpoint has a finite forward orbit, the
orbit points cut the interval into states on which the map is Markov: each
state maps under a single branch onto an exact union of states and escape
pieces.  The transition matrix is 0/1 over the surviving states, its
characteristic polynomial is computed exactly over the integers, and the
pole order of the leading eigenvalue is read off rank stabilization of
powers of (M - rho I) over the exact number field of rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (AmbiguousMultiplicityError, InvalidParameterError,
                     NotFinitelyMarkovError)
from .mapmodel import Hole, PiecewiseMap
from .polyexact import (NumberField, berkowitz_char_poly, largest_real_root,
                        poly_degree, poly_eval, square_free_decomposition)
from .scalar import rational_str

DEFAULT_ORBIT_CAP = 10_000


@dataclass(frozen=True)
class MarkovRefinement:
    """Breakpoints (forward-closed) and the surviving states between them."""

    map: PiecewiseMap
    hole: Hole
    breakpoints: tuple[Fraction, ...]
    states: tuple[tuple[Fraction, Fraction], ...]
    state_branch: tuple[int, ...]  # the single branch whose domain holds each state


def _inside_hole(x: Fraction, hole: Hole) -> bool:
    for lo, hi in hole.pieces:
        if lo <= x <= hi:
            return True
    return False


def refine_markov(pmap: PiecewiseMap, hole: Hole,
                  orbit_cap: int = DEFAULT_ORBIT_CAP) -> MarkovRefinement:
    """Close the breakpoint set under the map and cut out the states.

    Breakpoints start from the branch-domain, codomain, and hole endpoints;
    each surviving elementary interval contributes the images of its
    endpoints (through its own branch's continuous extension) until nothing
    new appears.  Raises :class:`NotFinitelyMarkovError` if the set does not
    close within ``orbit_cap`` points.
    """
    if not pmap.is_exact or not (hole.is_exact or hole.is_empty):
        raise NotFinitelyMarkovError(
            "the Markov engine needs exact-mode inputs; "
            "irrational data cannot close a finite refinement")
    ilo, ihi = pmap.codomain.as_raw()
    for lo, hi in hole.pieces:
        if lo < ilo or hi > ihi:
            raise InvalidParameterError("hole piece escapes the codomain closure")
    points = {ilo, ihi}
    doms = pmap.branch_domains_raw()
    for lo, hi in doms:
        points.add(lo)
        points.add(hi)
    for lo, hi in hole.pieces:
        points.add(lo)
        points.add(hi)

    def branch_of(mid: Fraction) -> Optional[int]:
        for k, (lo, hi) in enumerate(doms):
            if lo < mid < hi:
                return k
        return None

    while True:
        new: set[Fraction] = set()
        cuts = sorted(points)
        for u, v in zip(cuts, cuts[1:]):
            mid = (u + v) / 2
            if _inside_hole(mid, hole):
                continue
            b = branch_of(mid)
            if b is None:
                continue
            br = pmap.branches[b]
            for w in (br.apply_raw(u), br.apply_raw(v)):
                if w not in points:
                    new.add(w)
        if not new:
            break
        points.update(new)
        if len(points) > orbit_cap:
            raise NotFinitelyMarkovError(
                f"boundary orbits did not close within {orbit_cap} points; "
                "use the cylinder or tower engines")

    cuts = sorted(points)
    states: list[tuple[Fraction, Fraction]] = []
    owners: list[int] = []
    for u, v in zip(cuts, cuts[1:]):
        mid = (u + v) / 2
        if _inside_hole(mid, hole):
            continue
        b = branch_of(mid)
        if b is None:
            continue
        states.append((u, v))
        owners.append(b)

    ref = MarkovRefinement(pmap, hole, tuple(cuts), tuple(states), tuple(owners))
    _verify_markov(ref)
    return ref


def _verify_markov(ref: MarkovRefinement):
    """Every state image must decompose exactly into elementary pieces."""
    cutset = set(ref.breakpoints)
    for (u, v), b in zip(ref.states, ref.state_branch):
        br = ref.map.branches[b]
        w1, w2 = br.apply_raw(u), br.apply_raw(v)
        if w1 > w2:
            w1, w2 = w2, w1
        if w1 not in cutset or w2 not in cutset:
            raise NotFinitelyMarkovError(
                f"state ({u}, {v}) maps onto ({w1}, {w2}) which is not "
                "breakpoint-aligned; refinement is not Markov")


@dataclass(frozen=True)
class TransitionMatrix:
    """0/1 matrix over surviving states: entry (i, j) says state j is covered
    by the image of state i.  The characteristic polynomial det(xI - M) is
    exact with integer coefficients, ascending order."""

    size: int
    entries: tuple[tuple[int, ...], ...]
    char_poly: tuple[int, ...]

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.entries]

    def column_sums(self) -> list[int]:
        return [sum(r[j] for r in self.entries) for j in range(self.size)]


def transition_matrix(ref: MarkovRefinement) -> TransitionMatrix:
    n = len(ref.states)
    rows = []
    for (u, v), b in zip(ref.states, ref.state_branch):
        br = ref.map.branches[b]
        w1, w2 = br.apply_raw(u), br.apply_raw(v)
        if w1 > w2:
            w1, w2 = w2, w1
        rows.append([1 if w1 <= s_lo and s_hi <= w2 else 0
                     for s_lo, s_hi in ref.states])
    char = berkowitz_char_poly(rows)
    return TransitionMatrix(n, tuple(tuple(r) for r in rows), tuple(char))


@dataclass(frozen=True)
class SpectralReport:
    """Perron root with its Jordan data.

    ``pole_order_p`` is the smallest q at which rank((M - rho I)^q)
    stabilizes, i.e. the size of the largest Jordan block of rho.
    ``min_poly`` (ascending, integer) is the exact minimal polynomial of rho
    when the exact path ran.
    """

    rho: float
    algebraic_multiplicity: int
    geometric_multiplicity: int
    pole_order_p: int
    second_eigenvalue_modulus: float
    min_poly: Optional[tuple[int, ...]] = None
    rho_bracket: Optional[tuple[Fraction, Fraction]] = None


def _second_modulus(char, rho: float, alg: int) -> float:
    import numpy as np
    if poly_degree(list(char)) <= alg:
        return 0.0
    roots = np.roots(list(map(float, reversed(char))))
    moduli = sorted((abs(complex(z)) for z in roots), reverse=True)
    # drop the alg copies of rho (largest in modulus by Perron domination)
    rest = moduli[alg:]
    return float(rest[0]) if rest else 0.0


def _min_poly_of_root(factor, lo: Fraction, hi: Fraction):
    """Irreducible factor (ascending ints) vanishing on the isolated root."""
    import sympy as sp
    x = sp.Symbol("x")
    expr = sum(int(c) * x ** k for k, c in enumerate(factor))
    _, factors = sp.factor_list(sp.Poly(expr, x))
    candidates = []
    for poly, _mult in factors:
        coeffs = [int(c) for c in reversed(sp.Poly(poly, x).all_coeffs())]
        if poly_degree(coeffs) < 1:
            continue
        flo, fhi = poly_eval(coeffs, lo), poly_eval(coeffs, hi)
        if flo == 0 or fhi == 0 or (flo > 0) != (fhi > 0):
            candidates.append(coeffs)
    if len(candidates) == 1:
        return candidates[0]
    # shrink the bracket until exactly one irreducible factor changes sign
    from .polyexact import refine_root_bisect
    work = list(candidates)
    while len(work) > 1:
        lo, hi = refine_root_bisect(factor, lo, hi, (hi - lo) / 16)
        work = [c for c in work
                if poly_eval(c, lo) == 0 or poly_eval(c, hi) == 0
                or (poly_eval(c, lo) > 0) != (poly_eval(c, hi) > 0)]
    return work[0]


def spectral_report(M: TransitionMatrix, tol: float = 1e-12,
                    exact: bool = True) -> SpectralReport:
    """Perron root, multiplicities, and pole order of a transition matrix.

    The exact path isolates the root with Sturm brackets, takes the algebraic
    multiplicity from the square-free decomposition of the characteristic
    polynomial, and computes ranks over Q(rho); the numeric path clusters
    float eigenvalues within ``tol`` and raises
    :class:`AmbiguousMultiplicityError` when the clustering is borderline.
    """
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    if M.size == 0:
        return SpectralReport(0.0, 0, 0, 0, 0.0)
    char = list(M.char_poly)
    if not exact:
        return _spectral_numeric(M, tol)

    decomp = square_free_decomposition(char)
    best = None  # (root float, bracket, factor, multiplicity)
    for factor, mult in decomp:
        try:
            r, lo, hi = largest_real_root(factor, tol=min(tol, 1e-13))
        except InvalidParameterError:
            continue
        if best is None or r > best[0]:
            best = (r, (lo, hi), factor, mult)
    if best is None:
        # no real roots at all cannot happen for a nonnegative matrix
        raise AmbiguousMultiplicityError("characteristic polynomial has no real roots")
    rho, bracket, factor, alg = best
    rho = max(rho, 0.0)
    second = _second_modulus(char, rho, alg)
    if alg == 1:
        # a simple eigenvalue is semisimple: one Jordan block of size one
        return SpectralReport(rho, 1, 1, 1, second, tuple(_min_poly_of_root(
            factor, bracket[0], bracket[1])), bracket)
    minpoly = _min_poly_of_root(factor, bracket[0], bracket[1])
    field = NumberField(minpoly)
    gen = field.generator()
    B = [[field.from_const(M.entries[i][j]) for j in range(M.size)]
         for i in range(M.size)]
    for i in range(M.size):
        B[i][i] = field.sub(B[i][i], gen)
    ranks = []
    power = B
    prev = M.size
    p = None
    for q in range(1, alg + 2):
        r = field.matrix_rank(power)
        ranks.append(r)
        if r == prev:
            p = q - 1
            break
        prev = r
        power = field.matmul(power, B)
    if p is None:
        p = alg
    geo = M.size - ranks[0]
    return SpectralReport(rho, alg, geo, p, second, tuple(minpoly), bracket)


def _spectral_numeric(M: TransitionMatrix, tol: float) -> SpectralReport:
    import numpy as np
    A = np.array(M.entries, dtype=float)
    eig = np.linalg.eigvals(A)
    moduli = np.abs(eig)
    rho = float(moduli.max())
    near = np.abs(eig - rho) < tol
    wide = np.abs(eig - rho) < 10 * tol
    if near.sum() != wide.sum():
        cands = []
        for mask in (near, wide):
            cands.append(SpectralReport(rho, int(mask.sum()), -1, -1, 0.0))
        raise AmbiguousMultiplicityError(
            f"eigenvalue cluster at {rho} is ambiguous at tolerance {tol}",
            cands)
    alg = int(near.sum())
    rest = moduli[~near]
    second = float(rest.max()) if rest.size else 0.0
    B = A - rho * np.eye(M.size)
    def nrank(X):
        s = np.linalg.svd(X, compute_uv=False)
        return int((s > tol * max(1.0, s[0])).sum())
    prev = M.size
    power = B
    p = alg
    ranks0 = None
    for q in range(1, alg + 2):
        r = nrank(power)
        if ranks0 is None:
            ranks0 = r
        if r == prev:
            p = q - 1
            break
        prev = r
        power = power @ B
    geo = M.size - (ranks0 if ranks0 is not None else M.size)
    return SpectralReport(rho, alg, geo, p, second)


@dataclass(frozen=True)
class MarkovEntropy:
    """Entropy with the full spectral context of the open system."""

    refinement: MarkovRefinement
    matrix: TransitionMatrix
    report: SpectralReport
    entropy: float

    def to_json(self) -> dict:
        return {
            "states": [[rational_str(lo), rational_str(hi)]
                       for lo, hi in self.refinement.states],
            "matrix": [list(r) for r in self.matrix.entries],
            "char_poly_coeffs": list(self.matrix.char_poly),
            "rho": self.report.rho,
            "alg_mult": self.report.algebraic_multiplicity,
            "geo_mult": self.report.geometric_multiplicity,
            "p": self.report.pole_order_p,
            "entropy": self.entropy,
            "min_poly": list(self.report.min_poly) if self.report.min_poly else None,
        }


def entropy_markov(pmap: PiecewiseMap, hole: Hole,
                   orbit_cap: int = DEFAULT_ORBIT_CAP,
                   tol: float = 1e-12) -> MarkovEntropy:
    """max{log rho, 0} over the exact Markov refinement; 0 on total escape."""
    ref = refine_markov(pmap, hole, orbit_cap)
    M = transition_matrix(ref)
    if M.size == 0:
        report = SpectralReport(0.0, 0, 0, 0, 0.0)
        return MarkovEntropy(ref, M, report, 0.0)
    report = spectral_report(M, tol)
    h = max(math.log(report.rho), 0.0) if report.rho > 0 else 0.0
    return MarkovEntropy(ref, M, report, h)


def to_dot(result: MarkovEntropy) -> str:
    """Transition graph in DOT format; nodes are labeled by their intervals."""
    lines = ["digraph transitions {"]
    for i, (lo, hi) in enumerate(result.refinement.states):
        lines.append(f'  s{i} [label="({rational_str(lo)}, {rational_str(hi)})"];')
    for i, row in enumerate(result.matrix.entries):
        for j, v in enumerate(row):
            if v:
                lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines)
