"""Unimodular vectors, SL_n(Z) basis completion, and lattice quotients.

The quotient construction lowers dimension: a matrix fixing a primitive
vector v acts on Z^n / <v>, and in the basis given by the deterministic
SL_n(Z) completion of v that action is an (n-1)x(n-1) integer matrix whose
characteristic polynomial divides the original one by exactly (x - 1).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, NotFixed, NotUnimodular, ZeroVector
from .exactpoly import IntPoly
from .intmat import IntMatrix, charpoly


def is_unimodular(v: Sequence[int]) -> bool:
    """True iff gcd of the entries is 1.  Raises ZeroVector on the zero vector."""
    v = tuple(int(x) for x in v)
    if all(x == 0 for x in v):
        raise ZeroVector("the zero vector has no gcd")
    return math.gcd(*v) == 1


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def complete_to_slnz(v: Sequence[int]) -> IntMatrix:
    """Deterministic M in SL_n(Z) whose first column is the unimodular v.

    Reduces v to e_1 by a chain of extended-gcd row operations while
    accumulating the inverse transform column-wise; the final determinant is
    fixed to +1 by negating the last column if needed.
    """
    v = [int(x) for x in v]
    n = len(v)
    if not is_unimodular(v):
        raise NotUnimodular(f"gcd of {tuple(v)} is not 1")
    if n == 1:
        if v[0] != 1:
            raise NotUnimodular("only (1,) completes in SL_1(Z)")
        return IntMatrix.identity(1)
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    w = v[:]
    sign = 1
    for i in range(1, n):
        a, b = w[0], w[i]
        if b == 0:
            continue
        if a == 0:
            w[0], w[i] = w[i], w[0]
            for row in m:
                row[0], row[i] = row[i], row[0]
            sign = -sign
            a, b = w[0], w[i]
            if b == 0:
                continue
        g, s, t = _ext_gcd(a, b)
        # row op T = [[s, t], [-b/g, a/g]] on (w0, wi); apply T^-1 to columns
        w[0], w[i] = g, 0
        ag, bg = a // g, b // g
        for row in m:
            c0, ci = row[0], row[i]
            row[0] = ag * c0 + bg * ci
            row[i] = -t * c0 + s * ci
    if w[0] == -1:
        for row in m:
            row[0] = -row[0]
        sign = -sign
        w[0] = 1
    assert w[0] == 1 and all(x == 0 for x in w[1:])
    if sign < 0:
        for row in m:
            row[-1] = -row[-1]
    result = IntMatrix.from_rows(m)
    assert result.det() == 1
    assert tuple(row[0] for row in result.rows) == tuple(v)
    return result


def common_fixed_vector(gens: Sequence[IntMatrix]) -> Optional[tuple[int, ...]]:
    """Primitive integer vector fixed by every generator, or None.

    Solves the stacked system (A_i - I) v = 0 by exact rational elimination
    and returns the canonical kernel vector of the first free column, made
    primitive and sign-normalized (first nonzero entry positive).
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one matrix")
    n = gens[0].n
    rows: list[list[Fraction]] = []
    for a in gens:
        if a.n != n:
            raise DimensionMismatch(f"{a.n} vs {n}")
        for i in range(n):
            rows.append([Fraction(a.rows[i][j] - (1 if i == j else 0))
                         for j in range(n)])
    # reduced row echelon form
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free_cols = [c for c in range(n) if c not in pivots]
    if not free_cols:
        return None
    free = free_cols[0]
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -rows[i][free]
    lcm = 1
    for x in vec:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def quotient_action(a: IntMatrix, v: Sequence[int]) -> IntMatrix:
    """Action induced by ``a`` on Z^n / <v> for a fixed unimodular v.

    Basis: columns 2..n of complete_to_slnz(v).  The postcondition
    charpoly(a) = (x - 1) * charpoly(result) is checked exactly.
    """
    v = tuple(int(x) for x in v)
    if len(v) != a.n:
        raise DimensionMismatch(f"{a.n} vs {len(v)}")
    if not is_unimodular(v):
        raise NotUnimodular(f"gcd of {v} is not 1")
    if a.matvec(v) != v:
        raise NotFixed(f"A v != v for v = {v}")
    m = complete_to_slnz(v)
    b = m.inverse() @ a @ m
    n = a.n
    assert tuple(b.rows[i][0] for i in range(n)) == tuple(1 if i == 0 else 0
                                                          for i in range(n))
    quot = IntMatrix.from_rows([row[1:] for row in b.rows[1:]])
    lhs = charpoly(a)
    rhs = IntPoly.of(-1, 1) * charpoly(quot)
    if lhs != rhs:
        raise RuntimeError("factorization postcondition failed "
                           f"({lhs} != (x-1)*charpoly(quotient))")
    return quot
