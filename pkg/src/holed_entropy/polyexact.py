"""Exact univariate polynomials, real-root isolation, and number-field rank.

Polynomials are dense coefficient lists in ascending order (``p[k]`` is the
coefficient of x**k) over Python ints or Fractions.  Everything here is
exact; floats only appear as seeds for bracketing, and every bracket is
certified by exact sign evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .errors import InvalidParameterError, ResourceLimitError

Poly = list


# ---------------------------------------------------------------------------
# basic arithmetic
# ---------------------------------------------------------------------------

def poly_trim(p: Poly) -> Poly:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def poly_degree(p: Poly) -> int:
    p = poly_trim(p)
    return len(p) - 1 if p else -1


def poly_eval(p: Poly, x):
    acc = 0 * x if p else 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)])


def poly_neg(p: Poly) -> Poly:
    return [-c for c in p]


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_neg(q))


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_scale(p: Poly, c) -> Poly:
    return poly_trim([a * c for a in p])


def poly_deriv(p: Poly) -> Poly:
    return poly_trim([k * p[k] for k in range(1, len(p))])


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder over the rationals."""
    q = poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    d = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(0, len(r) - d)
    while len(poly_trim(r)) - 1 >= d and poly_trim(r):
        r = poly_trim(r)
        k = len(r) - 1 - d
        c = r[-1] / lead
        quot[k] = c
        for i in range(len(q)):
            r[k + i] -= c * Fraction(q[i])
        r = r[:-1]
    return poly_trim(quot), poly_trim(r)


def poly_content(p: Poly) -> int:
    g = 0
    for c in p:
        g = int_gcd(g, abs(int(c)))
    return g or 1


def poly_primitive(p: Poly) -> Poly:
    """Integer polynomial divided by its content, sign-normalized positive lead."""
    p = poly_trim(list(p))
    if not p:
        return []
    g = poly_content(p)
    p = [int(c) // g for c in p]
    if p[-1] < 0:
        p = [-c for c in p]
    return p


def _int_pseudo_rem(p: Poly, q: Poly) -> Poly:
    """Pseudo-remainder of integer polynomials: lc(q)^(deg p - deg q + 1) p mod q."""
    p = list(p)
    dq = len(q) - 1
    lq = q[-1]
    while len(poly_trim(p)) - 1 >= dq and poly_trim(p):
        p = poly_trim(p)
        dp = len(p) - 1
        lp = p[-1]
        p = [c * lq for c in p]
        for i in range(len(q)):
            p[dp - dq + i] -= lp * q[i]
        p = poly_trim(p)
        if len(p) - 1 == dp:
            raise AssertionError("pseudo-remainder failed to reduce degree")
    return p


def poly_gcd_int(p: Poly, q: Poly) -> Poly:
    """Primitive gcd of integer polynomials via the primitive remainder sequence."""
    a, b = poly_primitive(p), poly_primitive(q)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = poly_primitive(_int_pseudo_rem(a, b))
        a, b = b, r
    return poly_primitive(a)


def clear_denominators(p: Poly) -> Poly:
    """Scale a rational polynomial to a primitive integer polynomial."""
    from math import lcm
    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    return poly_primitive([int(Fraction(c) * den) for c in p])


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Factor an integer polynomial as prod g_i**i with g_i squarefree.

    Returns the nontrivial (g_i, i) pairs; constant content is dropped.
    """
    p = poly_primitive(p)
    if poly_degree(p) < 1:
        return []
    out = []
    g = poly_gcd_int(p, poly_deriv(p))
    c, _ = poly_divmod(p, g)
    c = clear_denominators(c)
    i = 1
    while poly_degree(g) > 0:
        d = poly_gcd_int(c, g)
        s, _ = poly_divmod(c, d)
        s = clear_denominators(s)
        if poly_degree(s) > 0:
            out.append((s, i))
        c = d
        g, _ = poly_divmod(g, d)
        g = clear_denominators(g)
        i += 1
    if poly_degree(c) > 0:
        out.append((c, i))
    return out


def square_free_part(p: Poly) -> Poly:
    g = poly_gcd_int(p, poly_deriv(p))
    q, _ = poly_divmod(p, g)
    return clear_denominators(q)


# ---------------------------------------------------------------------------
# real roots
# ---------------------------------------------------------------------------

def cauchy_root_bound(p: Poly) -> Fraction:
    """All real roots of p lie in [-B, B]."""
    p = poly_trim(list(p))
    if len(p) < 2:
        return Fraction(1)
    lead = abs(Fraction(p[-1]))
    return 1 + max(abs(Fraction(c)) for c in p[:-1]) / lead


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [ [Fraction(c) for c in poly_trim(p)] ]
    d = poly_deriv(chain[0])
    if d:
        chain.append(d)
    while poly_degree(chain[-1]) >= 0 and len(chain) >= 2:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(poly_neg(r))
    return chain


def _sign_variations(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = poly_eval(q, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_halfopen(chain: list[Poly], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi] for a squarefree polynomial."""
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def isolate_largest_real_root(p: Poly) -> tuple[Fraction, Fraction] | None:
    """Bracket (lo, hi] around the largest real root of a squarefree p.

    Exact via a Sturm chain; returns None when p has no real roots.
    """
    p = poly_trim(list(p))
    if poly_degree(p) < 1:
        return None
    chain = sturm_chain(p)
    B = cauchy_root_bound(p)
    lo, hi = -B, B
    if count_roots_halfopen(chain, lo, hi) == 0:
        return None if poly_eval(p, -B) != 0 else (-B - 1, -B)
    # keep the rightmost root: shrink from the left while it stays inside
    while count_roots_halfopen(chain, lo, hi) > 1 or hi - lo > Fraction(1, 4):
        mid = (lo + hi) / 2
        if count_roots_halfopen(chain, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
        if count_roots_halfopen(chain, lo, hi) == 1 and hi - lo <= Fraction(1, 4):
            break
    return lo, hi


def refine_root_bisect(p: Poly, lo: Fraction, hi: Fraction,
                       width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink a sign-changing bracket (lo, hi] by exact bisection.

    Requires p(lo) and p(hi) of opposite (nonzero-or-endpoint) signs; a zero
    endpoint value collapses the bracket onto the root.
    """
    flo = poly_eval(p, lo)
    fhi = poly_eval(p, hi)
    if fhi == 0:
        return hi, hi
    if flo == 0:
        # nudge off a root sitting exactly on the left end
        step = (hi - lo) / 4
        while poly_eval(p, lo + step) == 0:
            step /= 2
        lo = lo + step
        flo = poly_eval(p, lo)
    if (flo > 0) == (fhi > 0):
        raise InvalidParameterError("bracket endpoints have equal signs")
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = poly_eval(p, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def largest_real_root(p: Poly, tol: float = 1e-14) -> tuple[float, Fraction, Fraction]:
    """Largest real root of a squarefree integer polynomial.

    Returns (float approximation, exact bracket lo, exact bracket hi) with
    hi - lo <= tol.  Uses a numpy seed when it certifies, exact Sturm
    bisection otherwise.
    """
    p = poly_trim(list(p))
    if poly_degree(p) < 1:
        raise InvalidParameterError("constant polynomial has no roots")
    bracket = None
    try:
        import numpy as np
        roots = np.roots(list(map(float, reversed(p))))
        reals = sorted(float(r.real) for r in roots
                       if abs(r.imag) <= 1e-8 * (1 + abs(r)))
        if reals:
            seed = reals[-1]
            pad = max(1e-7, 1e-9 * (1 + abs(seed)))
            lo = Fraction(seed - pad).limit_denominator(10**15)
            hi = Fraction(seed + pad).limit_denominator(10**15)
            flo, fhi = poly_eval(p, lo), poly_eval(p, hi)
            if flo != 0 and fhi != 0 and (flo > 0) != (fhi > 0):
                chain = sturm_chain(p)
                # certify: exactly one root inside, none above
                if count_roots_halfopen(chain, lo, hi) == 1 and \
                        count_roots_halfopen(chain, hi, cauchy_root_bound(p)) == 0:
                    bracket = (lo, hi)
    except Exception:
        bracket = None
    if bracket is None:
        bracket = isolate_largest_real_root(p)
        if bracket is None:
            raise InvalidParameterError("polynomial has no real roots")
    lo, hi = refine_root_bisect(p, bracket[0], bracket[1],
                                Fraction(tol).limit_denominator(10**18))
    r = float((lo + hi) / 2)
    dp = poly_deriv(p)
    for _ in range(3):
        slope = float(poly_eval(dp, r))
        if slope == 0:
            break
        cand = r - float(poly_eval(p, r)) / slope
        if float(lo) - tol <= cand <= float(hi) + tol:
            r = cand
    return r, lo, hi


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------

def berkowitz_char_poly(rows: list[list[int]], size_cap: int = 400) -> Poly:
    """Characteristic polynomial det(xI - M) of an integer matrix.

    Division-free (Berkowitz), so the result is exact over the integers.
    Returned ascending; the empty matrix gives [1].
    """
    n = len(rows)
    if n > size_cap:
        raise ResourceLimitError(
            f"matrix size {n} exceeds the characteristic-polynomial cap {size_cap}")
    if n == 0:
        return [1]
    for r in rows:
        if len(r) != n:
            raise InvalidParameterError("matrix is not square")
    # p_k: char poly (descending) of the leading k x k principal submatrix
    p = [1, -rows[0][0]]
    for k in range(2, n + 1):
        sub = [row[:k - 1] for row in rows[:k - 1]]
        r = rows[k - 1][:k - 1]
        c = [rows[i][k - 1] for i in range(k - 1)]
        t = [1, -rows[k - 1][k - 1]]
        v = c
        for _ in range(k - 1):
            t.append(-sum(a * b for a, b in zip(r, v)))
            if len(t) <= k:
                v = [sum(a * b for a, b in zip(row, v)) for row in sub]
        conv = [0] * (k + 1)
        for i, a in enumerate(t[:k + 1]):
            if a == 0:
                continue
            for j, b in enumerate(p):
                if i + j <= k:
                    conv[i + j] += a * b
        p = conv
    return list(reversed(p))


def char_poly_cofactor(rows: list[list[int]]) -> Poly:
    """det(xI - M) by naive cofactor expansion; an independent cross-check
    for small matrices only."""
    n = len(rows)
    entries = [[([-rows[i][j]] if i != j else [-rows[i][j], 1]) for j in range(n)]
               for i in range(n)]

    def det(mat):
        m = len(mat)
        if m == 0:
            return [1]
        if m == 1:
            return mat[0][0]
        total = []
        for j in range(m):
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            term = poly_mul(mat[0][j], det(minor))
            total = poly_add(total, term if j % 2 == 0 else poly_neg(term))
        return total

    out = det(entries)
    return out + [0] * (n + 1 - len(out))


# ---------------------------------------------------------------------------
# number-field linear algebra
# ---------------------------------------------------------------------------

class NumberField:
    """Arithmetic in Q[x]/(m) for a monic irreducible m over the rationals.

    Elements are coefficient tuples of length deg(m).  Inverses exist for all
    nonzero elements because m is irreducible.
    """

    def __init__(self, minpoly: Poly):
        m = [Fraction(c) for c in poly_trim(minpoly)]
        if len(m) < 2:
            raise InvalidParameterError("minimal polynomial must have degree >= 1")
        lead = m[-1]
        self.minpoly = [c / lead for c in m]
        self.degree = len(self.minpoly) - 1

    def from_const(self, c) -> tuple:
        out = [Fraction(0)] * self.degree
        out[0] = Fraction(c)
        return tuple(out)

    def generator(self) -> tuple:
        out = [Fraction(0)] * self.degree
        if self.degree == 1:
            return (-self.minpoly[0],)
        out[1] = Fraction(1)
        return tuple(out)

    @property
    def zero(self) -> tuple:
        return tuple([Fraction(0)] * self.degree)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                prod[i + j] += x * y
        # reduce modulo the minimal polynomial
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = Fraction(0)
            for i in range(d):
                prod[k - d + i] -= c * self.minpoly[i]
        return tuple(prod[:d])

    def is_zero(self, a) -> bool:
        return all(c == 0 for c in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in number field")
        # extended Euclid on (a, minpoly)
        r0, r1 = list(self.minpoly), poly_trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while poly_degree(r1) > 0:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is not invertible (minpoly not irreducible?)")
        c = Fraction(r1[0])
        inv = [x / c for x in s1]
        inv = inv[:self.degree] + [Fraction(0)] * max(0, self.degree - len(inv))
        # reduce in case the Bezout coefficient overflows the degree
        if len(inv) > self.degree:
            red = self.zero
            for k in reversed(range(len(inv))):
                red = self.add(self.mul(red, self.generator()), self.from_const(inv[k]))
            return red
        return tuple(inv)

    def matmul(self, A, B):
        n, m, p = len(A), len(B), len(B[0]) if B else 0
        out = []
        for i in range(n):
            row = []
            for j in range(p):
                acc = self.zero
                for k in range(m):
                    acc = self.add(acc, self.mul(A[i][k], B[k][j]))
                row.append(acc)
            out.append(row)
        return out

    def matrix_rank(self, A) -> int:
        """Rank by fraction-level Gaussian elimination; exact zero tests."""
        rows = [list(r) for r in A]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        rank = 0
        col = 0
        while rank < n and col < m:
            pivot = None
            for i in range(rank, n):
                if not self.is_zero(rows[i][col]):
                    pivot = i
                    break
            if pivot is None:
                col += 1
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = self.inv(rows[rank][col])
            rows[rank] = [self.mul(inv, x) for x in rows[rank]]
            for i in range(n):
                if i != rank and not self.is_zero(rows[i][col]):
                    f = rows[i][col]
                    rows[i] = [self.sub(x, self.mul(f, y))
                               for x, y in zip(rows[i], rows[rank])]
            rank += 1
            col += 1
        return rank
