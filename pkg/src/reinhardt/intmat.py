"""Exact integer-matrix spectral algebra.

Classifies GL_n(Z) spectra (n = 2, 3) in exact arithmetic: characteristic
polynomials via Faddeev-LeVerrier, rational-root peeling, Sturm-sequence
isolation for real roots, and the cyclotomic (Kronecker) unit-circle test.
Group-level verdicts combine closure enumeration with a breadth-first word
search; the search is a semi-decision and says so.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    NonUnitConstantTerm,
    NotInGL,
    UnsupportedDimension,
)
from .exactpoly import (
    IntPoly,
    all_roots_on_unit_circle,
    isolate_real_roots,
    refine_root,
    root_product_poly,
)

DEFAULT_REFINE_WIDTH = Fraction(1, 10**12)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable square integer matrix with exact arithmetic."""

    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        t = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(t)
        if n == 0 or any(len(row) != n for row in t):
            raise DimensionMismatch("matrix must be square and nonempty")
        return IntMatrix(t)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n))
                               for i in range(n)))

    @staticmethod
    def companion(poly: IntPoly) -> "IntMatrix":
        """Companion matrix of a monic polynomial (last column -coeffs)."""
        if not poly.is_monic:
            raise ValueError("companion matrix needs a monic polynomial")
        n = poly.degree
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = 1
        for i in range(n):
            rows[i][n - 1] = -poly.coeffs[i]
        return IntMatrix.from_rows(rows)

    @staticmethod
    def block_diag(*blocks: "IntMatrix") -> "IntMatrix":
        n = sum(b.n for b in blocks)
        rows = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.n
        return IntMatrix.from_rows(rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")
        ot = tuple(zip(*other.rows))
        return IntMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
            for row in self.rows))

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.n:
            raise DimensionMismatch(f"{self.n} vs {len(v)}")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def det(self) -> int:
        from .exactpoly import _int_det_bareiss
        return _int_det_bareiss([list(r) for r in self.rows])

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def require_gl(self) -> "IntMatrix":
        if not self.is_unimodular:
            raise NotInGL(f"determinant {self.det()} is not +-1")
        return self

    def inverse(self) -> "IntMatrix":
        """Exact inverse; integer result requires |det| = 1."""
        d = self.det()
        if abs(d) != 1:
            raise NotInGL(f"determinant {d} is not +-1")
        n = self.n
        # Gauss-Jordan over Q, then the unimodularity guarantees integrality
        aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = Fraction(1) / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        out = []
        for row in aug:
            ints = []
            for x in row[n:]:
                assert x.denominator == 1
                ints.append(x.numerator)
            out.append(ints)
        return IntMatrix.from_rows(out)

    def __pow__(self, k: int) -> "IntMatrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.n)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def to_float(self):
        import numpy as np
        return np.array(self.rows, dtype=float)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.rows) + "]"


def charpoly(a: IntMatrix) -> IntPoly:
    """Exact monic characteristic polynomial det(xI - A), Faddeev-LeVerrier."""
    n = a.n
    rows = [[Fraction(x) for x in row] for row in a.rows]
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if k > 1:
            # M_k = A @ M_{k-1} + c_{n-k+1} I
            prod = [[sum(rows[i][t] * mk[t][j] for t in range(n)) for j in range(n)]
                    for i in range(n)]
            for i in range(n):
                prod[i][i] += c[n - k + 1]
            mk = prod
        am = [[sum(rows[i][t] * mk[t][j] for t in range(n)) for j in range(n)]
              for i in range(n)]
        c[n - k] = -sum(am[i][i] for i in range(n)) / k
    out = []
    for fr in c:
        assert fr.denominator == 1
        out.append(fr.numerator)
    return IntPoly.from_coeffs(out)


def rational_eigenvalues(p: IntPoly) -> frozenset[int]:
    """Rational roots of a GL-derived charpoly; always a subset of {+1, -1}.

    By the rational root theorem a monic integer polynomial with |c_0| = 1
    cannot have any other rational root, so evaluating at +-1 is complete.
    """
    if abs(p.constant) != 1:
        raise NonUnitConstantTerm(f"constant term {p.constant} is not +-1")
    return frozenset(r for r in (1, -1) if p(r) == 0)


def has_multiple_roots(p: IntPoly) -> bool:
    """True iff gcd(P, P') is nonconstant, decided exactly over Q."""
    from .exactpoly import q_gcd
    g = q_gcd(p.to_fractions(), p.derivative().to_fractions())
    return len(g) > 1


def spec_on_unit_circle(p: IntPoly) -> bool:
    """True iff every complex root of ``p`` has modulus exactly 1."""
    return all_roots_on_unit_circle(p)


@dataclass(frozen=True)
class EigenApprox:
    """One eigenvalue: midpoint value, certified radius, multiplicity."""

    value: complex
    radius: float
    multiplicity: int = 1


@dataclass(frozen=True)
class Certified:
    """A real value together with a certified error bound."""

    value: float
    error: float


@dataclass(frozen=True)
class SpectrumClass:
    """Total classification of a GL_n(Z) spectrum, n in {2, 3}.

    ``tag`` is one of UnitCircle2 / Hyperbolic2 (n = 2) or Case1 / Case2C /
    Case2R / Case3 (n = 3).  ``all_real`` is set only for Case3.  ``rho`` is
    the spectral radius with its certified error.
    """

    tag: str
    n: int
    eigenvalues: tuple[EigenApprox, ...]
    rho: float
    rho_error: float
    char: IntPoly
    all_real: Optional[bool] = None

    @property
    def on_unit_circle(self) -> bool:
        return self.tag in ("UnitCircle2", "Case1", "Case2C")


def _strip_rational_roots(p: IntPoly):
    residual = p
    found: list[tuple[int, int]] = []
    for r in (1, -1):
        mult = 0
        while residual.degree >= 1 and residual(r) == 0:
            residual = residual.monic_divmod(IntPoly.of(-r, 1))[0]
            mult += 1
        if mult:
            found.append((r, mult))
    return residual, found


def _cubic_discriminant(p: IntPoly) -> int:
    # monic x^3 + a x^2 + b x + c
    a, b, c = p.coeffs[2], p.coeffs[1], p.coeffs[0]
    return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c


def _refined_real_roots(p: IntPoly, width: Fraction):
    out = []
    for lo, hi in isolate_real_roots(p.to_fractions()):
        lo, hi = refine_root(p.to_fractions(), lo, hi, width)
        out.append((lo, hi))
    return out


def classify_spectrum(a: IntMatrix,
                      refine_width: Fraction = DEFAULT_REFINE_WIDTH) -> SpectrumClass:
    """Exact spectrum classification for A in GL_n(Z), n in {2, 3}.

    The case split is decided purely in integer/rational arithmetic: peel
    rational roots (+-1 only), inspect the residual factor's degree, decide
    |root| = 1 by the cyclotomic test, and isolate real roots with Sturm
    sequences.  Reported eigenvalue approximations carry certified radii.
    """
    n = a.n
    if n not in (2, 3):
        raise UnsupportedDimension(f"full classification needs n in {{2,3}}, got {n}")
    a.require_gl()
    p = charpoly(a)
    circle = spec_on_unit_circle(p)
    residual, rational = _strip_rational_roots(p)
    d = residual.degree

    eigs: list[EigenApprox] = [EigenApprox(complex(r), 0.0, m) for r, m in rational]
    rho_lo = 1.0 if rational else 0.0
    rho_hi = 1.0 if rational else 0.0

    def add_modulus(lo: float, hi: float):
        # max of intervals combines endpoint-wise
        nonlocal rho_lo, rho_hi
        rho_lo = max(rho_lo, lo)
        rho_hi = max(rho_hi, hi)

    def add_real_interval(lo: Fraction, hi: Fraction):
        mid = (lo + hi) / 2
        eigs.append(EigenApprox(complex(float(mid)), float((hi - lo) / 2) + 1e-15))
        alo, ahi = sorted((abs(float(lo)), abs(float(hi))))
        add_modulus(alo, ahi)

    all_real: Optional[bool] = None
    if d == 2:
        t, c = -residual.coeffs[1], residual.coeffs[0]
        disc = t * t - 4 * c
        if disc < 0:
            # conjugate pair: |root|^2 = constant term (necessarily c = 1 here)
            re = float(Fraction(t, 2))
            im = math.sqrt(float(4 * c - t * t)) / 2.0
            eigs.append(EigenApprox(complex(re, im), 1e-14))
            eigs.append(EigenApprox(complex(re, -im), 1e-14))
            s = math.sqrt(float(c))
            add_modulus(s - 1e-14, s + 1e-14)
        else:
            for lo, hi in _refined_real_roots(residual, refine_width):
                add_real_interval(lo, hi)
    elif d == 3:
        disc = _cubic_discriminant(residual)
        all_real = disc > 0
        real_ivs = _refined_real_roots(residual, refine_width)
        for lo, hi in real_ivs:
            add_real_interval(lo, hi)
        if not all_real:
            (lo, hi), = real_ivs
            a2 = residual.coeffs[2]
            re_lo = float((-a2 - hi) / 2)
            re_hi = float((-a2 - lo) / 2)
            # real root times |pair|^2 equals -c0
            c0 = residual.coeffs[0]
            mod2_lo, mod2_hi = sorted((Fraction(-c0) / lo, Fraction(-c0) / hi))
            re_mid = (re_lo + re_hi) / 2
            mod2_mid = float((mod2_lo + mod2_hi) / 2)
            im = math.sqrt(max(mod2_mid - re_mid * re_mid, 0.0))
            rad = (re_hi - re_lo) + float(mod2_hi - mod2_lo) + 1e-14
            eigs.append(EigenApprox(complex(re_mid, im), rad))
            eigs.append(EigenApprox(complex(re_mid, -im), rad))
            add_modulus(math.sqrt(float(mod2_lo)) - 1e-15,
                        math.sqrt(float(mod2_hi)) + 1e-15)

    if n == 2:
        tag = "UnitCircle2" if circle else "Hyperbolic2"
    else:
        if d == 0:
            tag = "Case1"
        elif d == 2:
            tag = "Case2C" if spec_on_unit_circle(residual) else "Case2R"
        else:
            tag = "Case3"

    if circle:
        rho, rho_err = 1.0, 0.0
    else:
        rho = (rho_lo + rho_hi) / 2
        rho_err = (rho_hi - rho_lo) / 2 + 1e-15
    eigs.sort(key=lambda e: (-abs(e.value), -e.value.real, -e.value.imag))
    return SpectrumClass(tag=tag, n=n, eigenvalues=tuple(eigs), rho=rho,
                         rho_error=rho_err, char=p, all_real=all_real)


def spectral_radius(a: IntMatrix, tol: float = 1e-10) -> Certified:
    """Certified spectral radius of A in GL_n(Z), any n.

    Unit-circle spectra give exactly 1.  Otherwise the squared radius is the
    largest real root of the root-product (modulus) polynomial, isolated by
    Sturm bisection and refined until the radius is known within ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a.require_gl()
    p = charpoly(a)
    if spec_on_unit_circle(p):
        return Certified(1.0, 0.0)
    q = root_product_poly(p)
    ivs = isolate_real_roots(q.to_fractions())
    lo, hi = ivs[-1]
    while math.sqrt(float(hi)) - math.sqrt(float(lo)) > tol:
        lo, hi = refine_root(q.to_fractions(), lo, hi, (hi - lo) / 16)
        if lo == hi:
            break
    slo, shi = math.sqrt(float(lo)), math.sqrt(float(hi))
    return Certified((slo + shi) / 2, (shi - slo) / 2 + 1e-15)


# ---------------------------------------------------------------------------
# group-level verdicts


@dataclass(frozen=True)
class GroupVerdict:
    """Outcome of the group spectrum search.

    AllOnUnitCircle carries the full closure as its certificate (every listed
    element re-verifies under spec_on_unit_circle); HyperbolicWitness carries
    the first failing word in lexicographic breadth-first order, its matrix
    and certified spectral radius; Inconclusive reports the exhausted depth.
    """

    tag: str
    closure: Optional[tuple[IntMatrix, ...]] = None
    witness_word: Optional[str] = None
    witness: Optional[IntMatrix] = None
    witness_rho: Optional[Certified] = None
    searched_depth: Optional[int] = None


def _letter_name(index: int, k: int) -> str:
    if index < k:
        return f"g{index + 1}"
    return f"g{index - k + 1}^-1"


def _try_closure(gens: list[IntMatrix], cap: int):
    n = gens[0].n
    letters = gens + [g.inverse() for g in gens]
    seen: dict[tuple, IntMatrix] = {}
    ident = IntMatrix.identity(n)
    seen[ident.rows] = ident
    frontier = [ident]
    while frontier:
        new: list[IntMatrix] = []
        for m in frontier:
            for g in letters:
                prod = m @ g
                if prod.rows not in seen:
                    seen[prod.rows] = prod
                    new.append(prod)
                    if len(seen) > cap:
                        return None
        frontier = new
    return tuple(seen.values())


def group_spec_verdict(gens: Sequence[IntMatrix],
                       max_word_len: int = 8,
                       closure_cap: int = 10000) -> GroupVerdict:
    """Semi-decide whether every spectrum in the generated group is on S^1.

    First attempts to enumerate the whole group (finite groups have all
    eigenvalues roots of unity).  Failing that, walks freely-reduced words in
    breadth-first lexicographic order over the alphabet g1..gk, g1^-1..gk^-1
    and returns the first word whose matrix fails the unit-circle test.  An
    exhausted search is reported honestly as Inconclusive.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise DimensionMismatch(f"{g.n} vs {n}")
        g.require_gl()

    closure = _try_closure(gens, closure_cap)
    if closure is not None:
        return GroupVerdict(tag="AllOnUnitCircle", closure=closure)

    k = len(gens)
    letters = gens + [g.inverse() for g in gens]
    circle_cache: dict[tuple, bool] = {}

    def passes(m: IntMatrix) -> bool:
        key = m.rows
        if key not in circle_cache:
            circle_cache[key] = spec_on_unit_circle(charpoly(m))
        return circle_cache[key]

    def inverse_letter(i: int) -> int:
        return i + k if i < k else i - k

    # (word letters, matrix); extended length by length, lexicographic order
    level: list[tuple[tuple[int, ...], IntMatrix]] = [((), IntMatrix.identity(n))]
    for _ in range(max_word_len):
        nxt: list[tuple[tuple[int, ...], IntMatrix]] = []
        for word, m in level:
            for i in range(2 * k):
                if word and word[-1] == inverse_letter(i):
                    continue  # free reduction
                w2 = word + (i,)
                m2 = m @ letters[i]
                if not passes(m2):
                    word_str = "*".join(_letter_name(j, k) for j in w2)
                    return GroupVerdict(tag="HyperbolicWitness",
                                        witness_word=word_str,
                                        witness=m2,
                                        witness_rho=spectral_radius(m2))
                nxt.append((w2, m2))
        level = nxt
    return GroupVerdict(tag="Inconclusive", searched_depth=max_word_len)
