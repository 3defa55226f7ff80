"""Exact univariate polynomial arithmetic over Z and Q.

Polynomials are dense ascending coefficient tuples: ``coeffs[k]`` multiplies
``x**k``.  ``IntPoly`` wraps integer coefficients; the rational helpers below
work on plain tuples of ``Fraction`` so Sturm chains and gcds stay exact.

Everything here is deterministic and allocation-light; no floating point
enters any decision.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonUnitConstantTerm


def _strip(coeffs):
    coeffs = tuple(coeffs)
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial; the zero polynomial has empty ``coeffs``."""

    coeffs: tuple[int, ...]

    @staticmethod
    def of(*coeffs: int) -> "IntPoly":
        return IntPoly(_strip(coeffs))

    @staticmethod
    def from_coeffs(coeffs: Iterable[int]) -> "IntPoly":
        return IntPoly(_strip(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[0]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(_strip(out))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return IntPoly(_strip(out))

    def derivative(self) -> "IntPoly":
        return IntPoly(_strip(k * c for k, c in enumerate(self.coeffs) if k > 0)
                       ) if len(self.coeffs) > 1 else IntPoly(())

    def monic_divmod(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Exact division by a monic divisor; stays in Z."""
        if not divisor.is_monic:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return IntPoly(()), IntPoly(_strip(rem))
        quot = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            quot[i - d] = c
            for j, dc in enumerate(divisor.coeffs):
                rem[i - d + j] -= c * dc
        return IntPoly(_strip(quot)), IntPoly(_strip(rem))

    def divisible_by(self, divisor: "IntPoly") -> bool:
        return not self.monic_divmod(divisor)[1].coeffs

    def reversed(self) -> "IntPoly":
        """x^deg * P(1/x); drops nothing since trailing zeros are stripped."""
        return IntPoly(_strip(reversed(self.coeffs)))

    def to_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                term = f"{mag}x" if k == 1 else f"{mag}x^{k}"
            parts.append(("- " if c < 0 else "+ ") + term)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------------------
# rational-coefficient helpers (tuples of Fraction)


def q_strip(c):
    return _strip(c)


def q_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def q_divmod(num, den):
    den = _strip(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    d = len(den) - 1
    lc = den[-1]
    if len(rem) - 1 < d:
        return (), _strip(rem)
    quot = [Fraction(0)] * (len(rem) - d)
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        q = Fraction(c, 1) / lc
        quot[i - d] = q
        for j, dc in enumerate(den):
            rem[i - d + j] -= q * dc
    return _strip(quot), _strip(rem)


def q_monic(p):
    p = _strip(p)
    if not p:
        return p
    lc = p[-1]
    return tuple(Fraction(c) / lc for c in p)


def q_gcd(a, b):
    """Monic gcd over Q via the Euclidean algorithm."""
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, q_divmod(a, b)[1]
    return q_monic(a)


def q_derivative(p):
    return _strip(k * c for k, c in enumerate(p) if k > 0)


def squarefree_part(p):
    g = q_gcd(p, q_derivative(p))
    if len(g) <= 1:
        return q_monic(p)
    q, r = q_divmod(p, g)
    assert not r
    return q_monic(q)


def sturm_chain(p):
    """Sturm chain of the squarefree part of ``p`` (Fraction tuples)."""
    p = squarefree_part(p)
    chain = [p, q_derivative(p)]
    while chain[-1]:
        rem = q_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(tuple(-c for c in rem))
    return [c for c in chain if c]


def _variations(values):
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(chain, a, b):
    """Number of distinct real roots in the open interval (a, b).

    Requires the squarefree polynomial to be nonzero at both endpoints.
    """
    va = _variations([q_eval(c, a) for c in chain])
    vb = _variations([q_eval(c, b) for c in chain])
    return va - vb


def cauchy_bound(p):
    """All roots have absolute value strictly below this Fraction."""
    p = _strip(p)
    lc = abs(p[-1])
    return Fraction(1) + max(abs(Fraction(c)) / lc for c in p[:-1]) if len(p) > 1 else Fraction(1)


def isolate_real_roots(p) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the distinct real roots.

    ``p`` is a tuple of int/Fraction coefficients.  Each returned ``(lo, hi)``
    contains exactly one real root of ``p``; a zero-width pair marks an exact
    rational root hit during bisection.  Intervals are sorted increasing.
    """
    p = tuple(Fraction(c) for c in _strip(p))
    if len(p) <= 1:
        return []
    exact: list[Fraction] = []
    # peel off rational roots found on bisection midpoints as we go; start by
    # working with the squarefree part so every remaining root is simple
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    out: list[tuple[Fraction, Fraction]] = []

    def recurse(lo, hi, count):
        if count == 0:
            return
        if count == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if q_eval(sf, mid) == 0:
            exact.append(mid)
            eps = (hi - lo) / (4 * count)
            left = sturm_count(chain, lo, mid - eps)
            right = sturm_count(chain, mid + eps, hi)
            recurse(lo, mid - eps, left)
            recurse(mid + eps, hi, right)
            return
        left = sturm_count(chain, lo, mid)
        recurse(lo, mid, left)
        recurse(mid, hi, count - left)

    total = sturm_count(chain, -bound, bound)
    recurse(-bound, bound, total)
    out.extend((r, r) for r in exact)
    out.sort(key=lambda iv: iv[0])
    return out


def refine_root(p, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect a simple-root isolating interval down to the given width."""
    p = tuple(Fraction(c) for c in _strip(p))
    sf = squarefree_part(p)
    if lo == hi:
        return lo, hi
    flo = q_eval(sf, lo)
    if flo == 0:
        return lo, lo
    if q_eval(sf, hi) == 0:
        return hi, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = q_eval(sf, mid)
        if fm == 0:
            return mid, mid
        if (flo > 0) != (fm > 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return lo, hi


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the unit-circle test


@functools.lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPoly:
    """The m-th cyclotomic polynomial, by exact division of x^m - 1."""
    if m < 1:
        raise ValueError("m must be positive")
    num = IntPoly.of(*([-1] + [0] * (m - 1) + [1]))
    for d in range(1, m):
        if m % d == 0:
            num, rem = num.monic_divmod(cyclotomic(d))
            assert not rem.coeffs
    return num


def _euler_phi(m: int) -> int:
    result = m
    k = 2
    mm = m
    while k * k <= mm:
        if mm % k == 0:
            while mm % k == 0:
                mm //= k
            result -= result // k
        k += 1
    if mm > 1:
        result -= result // mm
    return result


@functools.lru_cache(maxsize=None)
def cyclotomic_indices(n: int) -> tuple[int, ...]:
    """All m with euler_phi(m) <= n.  phi(m) >= sqrt(m/2) bounds the scan."""
    return tuple(m for m in range(1, 4 * n * n + 2) if _euler_phi(m) <= n)


def all_roots_on_unit_circle(p: IntPoly) -> bool:
    """Exact Kronecker test: every complex root of ``p`` has modulus 1.

    Requires |constant term| = 1 (raises NonUnitConstantTerm otherwise).  A
    monic integer polynomial with unit constant term has all roots on the
    circle iff it is a product of cyclotomic polynomials, so we peel those
    off; the binomial coefficient bound is a fast necessary pre-check.
    """
    if not p.coeffs:
        raise ValueError("zero polynomial")
    if not p.is_monic:
        raise ValueError("polynomial must be monic")
    if abs(p.constant) != 1:
        raise NonUnitConstantTerm(f"constant term {p.constant} is not +-1")
    n = p.degree
    if n == 0:
        return True
    for k in range(n + 1):
        if abs(p.coeffs[n - k]) > math.comb(n, k):
            return False
    residual = p
    for m in cyclotomic_indices(n):
        phi = cyclotomic(m)
        if phi.degree > residual.degree:
            continue
        while residual.degree >= phi.degree and residual.divisible_by(phi):
            residual = residual.monic_divmod(phi)[0]
            if residual.degree == 0:
                return True
    return residual.degree == 0


# ---------------------------------------------------------------------------
# root-product (modulus) polynomial via a Sylvester resultant


def _int_det_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    m = [row[:] for row in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def root_product_poly(p: IntPoly) -> IntPoly:
    """Monic-up-to-sign polynomial whose roots are all pairwise products
    of roots of ``p`` (with repetition), degree n^2.

    Built as Res_y(p(y), y^n p(x/y)) by evaluating the Sylvester determinant
    at n^2+1 integer points and interpolating exactly.  For a real ``p`` the
    squared moduli |root|^2 occur among the real roots, and the largest real
    root equals the squared spectral radius.
    """
    n = p.degree
    if n < 1:
        raise ValueError("need degree >= 1")
    c = p.coeffs
    d = n * n
    ts = list(range(d + 1))
    vals = []
    for t in ts:
        # s(y) = y^n p(t/y): coefficient of y^j is c[n-j] * t^(n-j)
        s = [c[n - j] * t ** (n - j) for j in range(n + 1)]
        size = 2 * n
        rows = [[0] * size for _ in range(size)]
        for i in range(n):          # rows of p coefficients (descending)
            for j in range(n + 1):
                rows[i][i + j] = c[n - j]
        for i in range(n):          # rows of s coefficients (descending)
            for j in range(n + 1):
                rows[n + i][i + j] = s[n - j]
        vals.append(_int_det_bareiss(rows))
    # exact Lagrange interpolation at t = 0..d
    coeffs = [Fraction(0)] * (d + 1)
    for i, ti in enumerate(ts):
        # basis polynomial prod_{j != i} (x - tj) / (ti - tj)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, tj in enumerate(ts):
            if j == i:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for k, b in enumerate(basis):
                new[k] += b * (-tj)
                new[k + 1] += b
            basis = new
            denom *= ti - tj
        w = Fraction(vals[i]) / denom
        for k, b in enumerate(basis):
            coeffs[k] += w * b
    out = []
    for fr in coeffs:
        assert fr.denominator == 1
        out.append(fr.numerator)
    return IntPoly(_strip(out))
