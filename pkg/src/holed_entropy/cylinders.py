"""Exact refinement and counting of surviving cylinder sets.

Cylinders are refined backwards: each level-(k+1) component is the pullback
of a level-k component through one branch inverse, intersected with the
branch domain, minus the hole.  Every component therefore has explicit exact
endpoints, and forward image lengths come from endpoint images of the
monotone composition.

Uniform affine maps with a common integer slope magnitude (the d-adic family
in particular) run on a scaled-integer fast path; everything else uses the
generic Fraction/float kernels.  Both paths produce identical trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (EmptyPartitionError, InvalidParameterError,
                     ResourceLimitError)
from .mapmodel import (Affine, Hole, IntervalOpen, PiecewiseMap,
                       _require_same_mode, subtract_pieces)
from .scalar import Scalar, as_scalar

DEFAULT_COMPONENT_CAP = 10_000_000


def _log_ratio(num, den=1) -> float:
    """log(num/den) for possibly huge exact values."""
    if isinstance(num, Fraction):
        num, den2 = num.numerator, num.denominator
        den = den * den2
    if isinstance(den, Fraction):
        num = num * den.denominator
        den = den.numerator
    return math.log(num) - math.log(den)


@dataclass(frozen=True)
class Cylinder:
    """All survivor components sharing one itinerary at one level."""

    itinerary: tuple[int, ...]
    components: tuple[IntervalOpen, ...]

    @property
    def level(self) -> int:
        return len(self.itinerary)

    @property
    def hull(self) -> IntervalOpen:
        return IntervalOpen(self.components[0].lo, self.components[-1].hi)


class _Level:
    """Flat per-level component storage: parallel arrays plus parent links."""

    __slots__ = ("den", "lo", "hi", "parent", "branch")

    def __init__(self, den: Optional[int]):
        self.den = den          # scaled-integer denominator, None on the generic path
        self.lo: list = []
        self.hi: list = []
        self.parent: list[int] = []
        self.branch: list[int] = []

    def __len__(self):
        return len(self.lo)

    def interval_raw(self, i: int):
        if self.den is None:
            return self.lo[i], self.hi[i]
        return Fraction(self.lo[i], self.den), Fraction(self.hi[i], self.den)


class RefinementTree:
    """Survivor components per level, with per-level cardinalities.

    ``counts`` stops at the first extinct level; deeper counts are zero by
    convention (``count`` implements that).
    """

    def __init__(self, pmap: PiecewiseMap, hole: Hole, levels: list[_Level],
                 extinct: bool):
        self.map = pmap
        self.hole = hole
        self._levels = levels
        self._extinct = extinct
        self.counts = [len(lv) for lv in levels]

    @property
    def depth(self) -> int:
        return len(self._levels)

    def count(self, n: int) -> int:
        if n < 1:
            raise InvalidParameterError("level must be >= 1")
        if n <= len(self.counts):
            return self.counts[n - 1]
        if self._extinct:
            return 0
        raise InvalidParameterError(f"tree was only refined to depth {self.depth}")

    def component_intervals(self, n: int) -> list[tuple]:
        """Raw (lo, hi) pairs of the level-n components, left to right."""
        if n > self.depth:
            if self._extinct:
                return []
            raise InvalidParameterError(f"tree was only refined to depth {self.depth}")
        lv = self._levels[n - 1]
        return [lv.interval_raw(i) for i in range(len(lv))]

    def itinerary(self, n: int, i: int) -> tuple[int, ...]:
        word = []
        level = n
        while level >= 1:
            lv = self._levels[level - 1]
            word.append(lv.branch[i])
            i = lv.parent[i]
            level -= 1
        return tuple(word)

    def itineraries(self, n: int) -> list[tuple[int, ...]]:
        if n > self.depth and self._extinct:
            return []
        return [self.itinerary(n, i) for i in range(len(self._levels[n - 1]))]

    def cylinders(self, n: int) -> list[Cylinder]:
        """Components grouped by itinerary, groups ordered by first appearance."""
        eps = None if self.map.is_exact else self.map.epsilon
        groups: dict[tuple, list[IntervalOpen]] = {}
        lv = self._levels[n - 1] if n <= self.depth else _Level(None)
        for i in range(len(lv)):
            lo, hi = lv.interval_raw(i)
            word = self.itinerary(n, i)
            groups.setdefault(word, []).append(
                IntervalOpen(Scalar(lo, eps), Scalar(hi, eps)))
        return [Cylinder(w, tuple(sorted(cs, key=lambda c: c.lo.value)))
                for w, cs in groups.items()]


# ---------------------------------------------------------------------------
# fast path detection
# ---------------------------------------------------------------------------

class _UniformAffine:
    """Scaled-integer refinement data for maps with a common |slope| = d."""

    def __init__(self, pmap: PiecewiseMap, hole: Hole):
        self.d = None
        sigs = []
        for b in pmap.branches:
            if not isinstance(b.kind, Affine):
                raise ValueError
            s = b.kind.slope.value
            if not isinstance(s, Fraction) or s.denominator != 1 or abs(s) < 2:
                raise ValueError
            sigs.append(int(s))
        mags = {abs(s) for s in sigs}
        if len(mags) != 1:
            raise ValueError
        self.d = mags.pop()
        dens = [pmap.codomain.lo.value.denominator, pmap.codomain.hi.value.denominator]
        for b in pmap.branches:
            dens += [b.domain.lo.value.denominator, b.domain.hi.value.denominator,
                     b.kind.offset.value.denominator]
        for lo, hi in hole.pieces:
            dens += [lo.denominator, hi.denominator]
        D0 = 1
        for q in dens:
            D0 = D0 * q // math.gcd(D0, q)
        self.D0 = D0
        self.signs = [1 if s > 0 else -1 for s in sigs]
        self.offsets0 = [int(b.kind.offset.value * D0) for b in pmap.branches]
        self.dom0 = [(int(lo * D0), int(hi * D0))
                     for lo, hi in pmap.branch_domains_raw()]
        self.img0 = []
        for b in pmap.branches:
            w1, w2 = b.image_raw()
            self.img0.append((int(w1 * D0), int(w2 * D0)))
        self.hole0 = [(int(lo * D0), int(hi * D0)) for lo, hi in hole.pieces]

    def den(self, level: int) -> int:
        return self.D0 * self.d ** level


def _try_uniform_affine(pmap: PiecewiseMap, hole: Hole) -> Optional[_UniformAffine]:
    if not pmap.is_exact or not hole.is_exact and not hole.is_empty:
        return None
    try:
        return _UniformAffine(pmap, hole)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------

def refine(pmap: PiecewiseMap, hole: Hole, n_max: int,
           component_cap: int = DEFAULT_COMPONENT_CAP) -> RefinementTree:
    """Survivor components for levels 1..n_max.

    Raises :class:`ResourceLimitError` if any level exceeds ``component_cap``
    components.  Stops early (with the zero-count convention) once a level
    dies out entirely.
    """
    if n_max < 1:
        raise InvalidParameterError("n_max must be >= 1")
    _require_same_mode(pmap, hole)
    fast = _try_uniform_affine(pmap, hole)
    if fast is not None:
        return _refine_scaled(pmap, hole, n_max, component_cap, fast)
    return _refine_generic(pmap, hole, n_max, component_cap)


def _refine_scaled(pmap, hole, n_max, cap, u: _UniformAffine) -> RefinementTree:
    d = u.d
    nb = len(pmap.branches)
    levels: list[_Level] = []

    den1 = u.den(1)
    lv = _Level(den1)
    hole_s = [(lo * d, hi * d) for lo, hi in u.hole0]
    for b in range(nb):
        dlo, dhi = u.dom0[b][0] * d, u.dom0[b][1] * d
        for lo, hi in subtract_pieces(dlo, dhi, hole_s, 0):
            lv.lo.append(lo)
            lv.hi.append(hi)
            lv.parent.append(-1)
            lv.branch.append(b)
    levels.append(lv)

    extinct = len(lv) == 0
    n = 1
    img_s = [(u.img0[b][0] * d, u.img0[b][1] * d) for b in range(nb)]
    off_s = [u.offsets0[b] * d for b in range(nb)]
    while n < n_max and not extinct:
        cur = levels[-1]
        nxt = _Level(cur.den * d)
        hole_s = [(lo * d, hi * d) for lo, hi in hole_s]
        for b in range(nb):
            ilo, ihi = img_s[b]
            on = off_s[b]
            sign = u.signs[b]
            order = range(len(cur)) if sign > 0 else range(len(cur) - 1, -1, -1)
            for i in order:
                ylo = cur.lo[i]
                yhi = cur.hi[i]
                if ylo < ilo:
                    ylo = ilo
                if yhi > ihi:
                    yhi = ihi
                if yhi <= ylo:
                    continue
                if sign > 0:
                    xlo, xhi = ylo - on, yhi - on
                else:
                    xlo, xhi = on - yhi, on - ylo
                for lo, hi in subtract_pieces(xlo, xhi, hole_s, 0):
                    nxt.lo.append(lo)
                    nxt.hi.append(hi)
                    nxt.parent.append(i)
                    nxt.branch.append(b)
            if len(nxt) > cap:
                raise ResourceLimitError(
                    f"component cap {cap} exceeded at level {n + 1}")
        levels.append(nxt)
        extinct = len(nxt) == 0
        img_s = [(lo * d, hi * d) for lo, hi in img_s]
        off_s = [o * d for o in off_s]
        n += 1
    return RefinementTree(pmap, hole, levels, extinct)


def _refine_generic(pmap, hole, n_max, cap) -> RefinementTree:
    tol = 0 if pmap.is_exact else pmap.epsilon
    nb = len(pmap.branches)
    doms = pmap.branch_domains_raw()
    imgs = [b.image_raw() for b in pmap.branches]
    invs = [b.invert_raw for b in pmap.branches]
    signs = [b.orientation for b in pmap.branches]
    pieces = hole.pieces

    levels: list[_Level] = []
    lv = _Level(None)
    for b in range(nb):
        dlo, dhi = doms[b]
        for lo, hi in subtract_pieces(dlo, dhi, pieces, tol):
            lv.lo.append(lo)
            lv.hi.append(hi)
            lv.parent.append(-1)
            lv.branch.append(b)
    levels.append(lv)

    extinct = len(lv) == 0
    n = 1
    while n < n_max and not extinct:
        cur = levels[-1]
        nxt = _Level(None)
        for b in range(nb):
            ilo, ihi = imgs[b]
            inv = invs[b]
            order = range(len(cur)) if signs[b] > 0 else range(len(cur) - 1, -1, -1)
            for i in order:
                ylo = max(cur.lo[i], ilo)
                yhi = min(cur.hi[i], ihi)
                if yhi - ylo <= tol:
                    continue
                a, c = inv(ylo), inv(yhi)
                if a > c:
                    a, c = c, a
                # clamp float-path drift back into the branch domain
                if not pmap.is_exact:
                    a = max(a, doms[b][0])
                    c = min(c, doms[b][1])
                    if c - a <= tol:
                        continue
                for lo, hi in subtract_pieces(a, c, pieces, tol):
                    nxt.lo.append(lo)
                    nxt.hi.append(hi)
                    nxt.parent.append(i)
                    nxt.branch.append(b)
            if len(nxt) > cap:
                raise ResourceLimitError(
                    f"component cap {cap} exceeded at level {n + 1}")
        levels.append(nxt)
        extinct = len(nxt) == 0
        n += 1
    return RefinementTree(pmap, hole, levels, extinct)


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

def entropy_estimate(tree: RefinementTree, n: int) -> float:
    """(1/n) log+ of the level-n survivor count; zero once everything escapes."""
    count = tree.count(n)
    if count == 0:
        return 0.0
    return max(0.0, math.log(count) / n)


def _check_weight_mode(pmap: PiecewiseMap, weight: "LocallyConstantWeight"):
    # rational weights ride along in either mode; float weights need a float map
    if pmap.is_exact and any(not v.is_exact for v in weight.values):
        from .errors import ModeMismatchError
        raise ModeMismatchError("float weights cannot be used with an exact map")


@dataclass(frozen=True)
class LocallyConstantWeight:
    """One nonnegative weight per branch; products accumulate along itineraries."""

    values: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_scalar(v) for v in self.values))
        for v in self.values:
            if v.value < 0:
                raise InvalidParameterError("weights must be nonnegative")

    @staticmethod
    def constant(c, nbranches: int) -> "LocallyConstantWeight":
        return LocallyConstantWeight(tuple(as_scalar(c) for _ in range(nbranches)))

    @staticmethod
    def ones(nbranches: int) -> "LocallyConstantWeight":
        return LocallyConstantWeight.constant(1, nbranches)

    def raw_values(self) -> list:
        return [v.value for v in self.values]


def pressure_estimate(pmap: PiecewiseMap, weight: LocallyConstantWeight,
                      hole: Hole, n: int,
                      component_cap: int = DEFAULT_COMPONENT_CAP) -> float:
    """(1/n) log of the weighted survivor sum at level n; -inf when it is zero.

    The weight is locally constant, so the supremum over a cylinder is the
    plain product of the branch weights along its itinerary.
    """
    if n < 1:
        raise InvalidParameterError("level must be >= 1")
    if len(weight.values) != len(pmap.branches):
        raise InvalidParameterError("weight needs one value per branch")
    _check_weight_mode(pmap, weight)
    vals = weight.raw_values()
    tree = refine(pmap, hole, n, component_cap)
    if tree.count(n) == 0:
        return float("-inf")
    total = Fraction(0) if pmap.is_exact else 0.0
    lv = tree._levels[n - 1]
    prod_cache: dict[tuple, object] = {}
    for i in range(len(lv)):
        word = tree.itinerary(n, i)
        prod = prod_cache.get(word)
        if prod is None:
            prod = Fraction(1) if pmap.is_exact else 1.0
            for w in word:
                prod *= vals[w]
            prod_cache[word] = prod
        total += prod
    if total == 0:
        return float("-inf")
    return _log_ratio(total) / n


# ---------------------------------------------------------------------------
# expansion and Lasota-Yorke diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionDiagnostics:
    """Level-n growth diagnostics of the unrestricted map.

    ``theta_n`` is the weight growth rate (zero or -inf for indicator
    weights), ``lambda_n`` the maximal-expansion rate, ``xi_n`` the expansion
    rate normalized by image measure, and ``a_n``/``A_n`` the variation and
    integral coefficients of the bounded-variation inequality at level n.
    """

    n: int
    theta_n: float
    lambda_n: float
    xi_n: float
    a_n: float
    A_n: float


def _is_full_branch_affine(pmap: PiecewiseMap) -> bool:
    ilo, ihi = pmap.codomain.as_raw()
    for b in pmap.branches:
        if not isinstance(b.kind, Affine):
            return False
        w1, w2 = b.image_raw()
        if w1 != ilo or w2 != ihi:
            return False
    return True


def _is_standard_d_adic(pmap: PiecewiseMap) -> Optional[int]:
    if pmap.codomain.as_raw() != (Fraction(0), Fraction(1)):
        return None
    d = len(pmap.branches)
    for k, b in enumerate(pmap.branches):
        if not isinstance(b.kind, Affine):
            return None
        if b.kind.slope.value != d or b.kind.offset.value != -k:
            return None
        if b.domain.as_raw() != (Fraction(k, d), Fraction(k + 1, d)):
            return None
    return d


def _cylinder_interval(pmap: PiecewiseMap, word: Sequence[int]):
    """Endpoints of the unrestricted cylinder with the given itinerary."""
    d = _is_standard_d_adic(pmap)
    n = len(word)
    if d is not None:
        v = 0
        for w in word:
            v = v * d + w
        den = d ** n
        return Fraction(v, den), Fraction(v + 1, den)
    doms = pmap.branch_domains_raw()
    imgs = [b.image_raw() for b in pmap.branches]
    lo, hi = doms[word[-1]]
    for k in range(n - 2, -1, -1):
        b = word[k]
        ylo, yhi = max(lo, imgs[b][0]), min(hi, imgs[b][1])
        a = pmap.branches[b].invert_raw(ylo)
        c = pmap.branches[b].invert_raw(yhi)
        lo, hi = (a, c) if a <= c else (c, a)
    return lo, hi


def _sup_deriv_and_image(pmap: PiecewiseMap, word, lo, hi):
    """Upper bound for sup |D(T^n)| on the cylinder (exact for affine words)
    and the exact forward image length."""
    sup = 1
    for b in word:
        br = pmap.branches[b]
        d1, d2 = abs(br.derivative_raw(lo)), abs(br.derivative_raw(hi))
        sup *= max(d1, d2)
        a, c = br.apply_raw(lo), br.apply_raw(hi)
        lo, hi = (a, c) if a <= c else (c, a)
    return sup, hi - lo


def expansion_diagnostics(pmap: PiecewiseMap, n: int, hole: Hole | None = None,
                          weight: LocallyConstantWeight | None = None,
                          component_cap: int = DEFAULT_COMPONENT_CAP
                          ) -> ExpansionDiagnostics:
    """Compute the level-n expansion and Lasota-Yorke diagnostics.

    Full-branch affine maps take a closed-form path (the unrestricted level-n
    partition is never enumerated); everything else walks the level-n
    cylinders explicitly.  With a hole, the weight is multiplied by the
    indicator of the survivor set and the variation term is counted from the
    component structure inside each cylinder.
    """
    if n < 1:
        raise InvalidParameterError("level must be >= 1")
    if hole is None:
        hole = Hole.empty()
    if weight is None:
        weight = LocallyConstantWeight.ones(len(pmap.branches))
    if len(weight.values) != len(pmap.branches):
        raise InvalidParameterError("weight needs one value per branch")
    _check_weight_mode(pmap, weight)
    wvals = weight.raw_values()
    ilo, ihi = pmap.codomain.as_raw()
    m_I = ihi - ilo

    fast = _is_full_branch_affine(pmap)
    if fast:
        max_slope = max(abs(b.kind.slope.value) for b in pmap.branches)
        lambda_n = _log_ratio(max_slope)
        xi_n = lambda_n - _log_ratio(m_I) / n
        sup_by_word = None
    else:
        tree0 = refine(pmap, Hole.empty(), n, component_cap)
        if tree0.count(n) == 0:
            raise EmptyPartitionError(f"no level-{n} cylinders")
        lam_best = None
        xi_best = None
        sup_by_word = {}
        lv = tree0._levels[n - 1]
        for i in range(len(lv)):
            lo, hi = lv.interval_raw(i)
            word = tree0.itinerary(n, i)
            sup, m_img = _sup_deriv_and_image(pmap, word, lo, hi)
            sup_by_word[word] = (sup, m_img)
            l_val = _log_ratio(sup) / n
            x_val = _log_ratio(Fraction(sup) / m_img if isinstance(sup, (int, Fraction))
                               else sup / m_img) / n
            lam_best = l_val if lam_best is None else max(lam_best, l_val)
            xi_best = x_val if xi_best is None else max(xi_best, x_val)
        lambda_n, xi_n = lam_best, xi_best

    # survivor structure for the (weight x indicator) diagnostics
    if hole.is_empty:
        if fast:
            # all itineraries exist; extremes come from repeating one branch
            max_w = max(wvals)
            theta_n = float("-inf") if max_w == 0 else _log_ratio(max_w)
            a_n = 3.0 * float(max_w) ** n
            slopes = [abs(b.kind.slope.value) for b in pmap.branches]
            best_ws = max(w * s for w, s in zip(wvals, slopes)) ** n
            A_n = float(best_ws) * float(2 / Fraction(m_I) + 1)
            return ExpansionDiagnostics(n, theta_n, lambda_n, xi_n, a_n, A_n)
        theta_best = None
        a_best = 0.0
        A_best = 0.0
        for word, (sup, m_img) in sup_by_word.items():
            prod = 1
            for w in word:
                prod = prod * wvals[w]
            if prod > 0:
                t = _log_ratio(prod) / n
                theta_best = t if theta_best is None else max(theta_best, t)
            a_best = max(a_best, 3.0 * float(prod))
            if isinstance(sup, (int, Fraction)):
                coeff = float(2 * Fraction(sup) / m_img + sup)
            else:
                coeff = 2 * sup / m_img + sup
            A_best = max(A_best, float(prod) * coeff)
        theta_n = float("-inf") if theta_best is None else theta_best
        return ExpansionDiagnostics(n, theta_n, lambda_n, xi_n, a_best, A_best)

    treeH = refine(pmap, hole, n, component_cap)
    groups: dict[tuple, list] = {}
    if treeH.count(n) > 0:
        lv = treeH._levels[n - 1]
        for i in range(len(lv)):
            groups.setdefault(treeH.itinerary(n, i), []).append(lv.interval_raw(i))

    theta_best = None
    a_best = 0.0
    A_best = 0.0
    for word, comps in groups.items():
        prod = 1
        for w in word:
            prod = prod * wvals[w]
        if prod > 0:
            t = _log_ratio(prod) / n
            theta_best = t if theta_best is None else max(theta_best, t)
        zlo, zhi = _cylinder_interval(pmap, word)
        var = 0
        for lo, hi in comps:
            var += (1 if lo > zlo else 0) + (1 if hi < zhi else 0)
        if fast:
            sup = 1
            for w in word:
                sup *= abs(pmap.branches[w].kind.slope.value)
            m_img = m_I
        else:
            sup, m_img = sup_by_word[word]
        a_best = max(a_best, float(prod) * (3.0 + var))
        A_prime = float(prod) * (2.0 + var) * float(Fraction(sup) / m_img)
        A_best = max(A_best, A_prime + float(prod) * float(sup))
    if theta_best is None:
        theta_n = float("-inf")
    else:
        # indicator weights give exactly 0.0; avoid -0.0 artifacts
        theta_n = 0.0 if theta_best == 0 else theta_best
    return ExpansionDiagnostics(n, theta_n, lambda_n, xi_n, a_best, A_best)


# ---------------------------------------------------------------------------
# cross-engine comparison
# ---------------------------------------------------------------------------

@dataclass
class EngineComparison:
    level: int
    oracle_count: int
    oracle_entropy: float
    kneading_entropy: Optional[float]
    markov_entropy: Optional[float]
    differences: dict

    def applicable_engines(self) -> list[str]:
        out = ["oracle"]
        if self.kneading_entropy is not None:
            out.append("kneading")
        if self.markov_entropy is not None:
            out.append("markov")
        return out


def left_hole_parameter(pmap: PiecewiseMap, hole: Hole) -> Optional[Fraction]:
    """The parameter a when (map, hole) is the doubling map with hole [a, 1]."""
    if not pmap.is_exact or _is_standard_d_adic(pmap) != 2:
        return None
    if not hole.is_exact or len(hole.pieces) != 1:
        return None
    lo, hi = hole.pieces[0]
    if hi != 1 or not (Fraction(1, 2) < lo < 1):
        return None
    return lo


def compare_engines(pmap: PiecewiseMap, hole: Hole, n: int,
                    component_cap: int = DEFAULT_COMPONENT_CAP) -> EngineComparison:
    """Run every applicable engine and report absolute differences.

    Inapplicable engines are reported as absent, never as errors.
    """
    tree = refine(pmap, hole, n, component_cap)
    oracle_h = entropy_estimate(tree, n)
    kn = None
    a = left_hole_parameter(pmap, hole)
    if a is not None:
        from .kneading import entropy_left_hole
        kn = entropy_left_hole(Scalar.exact(a)).root.entropy
    mk = None
    if pmap.is_exact and (hole.is_exact or hole.is_empty):
        from .errors import NotFinitelyMarkovError
        from .markov import entropy_markov
        try:
            mk = entropy_markov(pmap, hole).entropy
        except (NotFinitelyMarkovError, ResourceLimitError):
            mk = None
    diffs = {}
    if kn is not None:
        diffs["oracle_vs_kneading"] = abs(oracle_h - kn)
    if mk is not None:
        diffs["oracle_vs_markov"] = abs(oracle_h - mk)
    if kn is not None and mk is not None:
        diffs["kneading_vs_markov"] = abs(kn - mk)
    return EngineComparison(n, tree.count(n), oracle_h, kn, mk, diffs)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def export_level_counts(tree: RefinementTree, path: str, n_max: int | None = None):
    """CSV of per-level survivor counts and entropy estimates."""
    depth = n_max if n_max is not None else tree.depth
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("level,count,entropy_estimate\n")
        for n in range(1, depth + 1):
            fh.write(f"{n},{tree.count(n)},{entropy_estimate(tree, n):.15g}\n")
