"""Convex geometry of logarithmic images of Reinhardt domains.

Regions live in the eigenbasis of a hyperbolic integer matrix with positive
real spectrum: open sign-cones (quadrants/octants), truncated convex hulls
of matrix orbits, and explicit halfspace intersections.  The matrix acts
diagonally in this frame, which keeps invariance checks and orbit geometry
exact up to floating-point scaling.

Orbit-hull membership uses a shifted-window test: the query is rescaled by
an exact integer power of the diagonal action so it sits at unit scale, and
is then tested against the hull of the nearby orbit vertices only.  The
windowed hull is contained in the full hull, so positive answers are sound;
clearances are reported in the shifted frame.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DimensionMismatch,
    EigenvaluesNotNormalized,
    OneInSpectrum,
    PointOutsideRegion,
    SpectrumNotTotallyRealPositive,
    VerificationFailed,
)
from .exactpoly import isolate_real_roots, refine_root
from .intmat import Certified, IntMatrix, charpoly

DEFAULT_ESCALATION_CAP = 64
# window vertices are safe for double-precision facets while lam1^W stays
# well below 1/eps; beyond that Qhull's merge tolerance would swallow margins
_WINDOW_COORD_LIMIT = 3e8


# ---------------------------------------------------------------------------
# affine automorphisms of the log image


@dataclass(frozen=True)
class AffineAutomorphism:
    """p |-> A p + b with A in GL_n(Z) and rational translation b."""

    matrix: IntMatrix
    translation: tuple[Fraction, ...]

    def __post_init__(self):
        self.matrix.require_gl()
        if len(self.translation) != self.matrix.n:
            raise DimensionMismatch("translation length != matrix dimension")

    def __call__(self, p: Sequence[Fraction]) -> tuple[Fraction, ...]:
        ap = self.matrix.matvec(tuple(Fraction(x) for x in p))
        return tuple(x + b for x, b in zip(ap, self.translation))


def affine_fixed_point(f: AffineAutomorphism) -> tuple[Fraction, ...]:
    """Exact rational solution of A p + b = p.

    Conjugating by the translation to this point reduces the affine map to
    its linear part.  Raises OneInSpectrum when det(A - I) = 0.
    """
    a = f.matrix
    n = a.n
    rows = [[Fraction(a.rows[i][j] - (1 if i == j else 0)) for j in range(n)]
            + [-Fraction(f.translation[i])] for i in range(n)]
    # Gaussian elimination; singular system means 1 is an eigenvalue
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise OneInSpectrum("det(A - I) = 0; no unique fixed point")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = Fraction(1) / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                fct = rows[r][col]
                rows[r] = [x - fct * y for x, y in zip(rows[r], rows[col])]
    p = tuple(rows[i][n] for i in range(n))
    assert f(p) == p
    return p


# ---------------------------------------------------------------------------
# eigenbasis of a totally-real positive hyperbolic matrix


@dataclass(frozen=True)
class EigenBasis:
    """Certified eigen-decomposition, eigenvalues sorted descending.

    ``vectors`` holds unit eigenvectors as columns (sign fixed so the first
    coordinate of significant size is positive); ``normalized`` says whether
    exactly the top eigenvalue exceeds 1, the frame every orbit construction
    below requires.
    """

    matrix: IntMatrix
    eigenvalues: tuple[Certified, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...]
    vectors: np.ndarray
    inverse: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def lams(self) -> np.ndarray:
        return np.array([e.value for e in self.eigenvalues])

    @property
    def normalized(self) -> bool:
        if self.intervals[0][0] <= 1:
            return False
        return all(hi < 1 for lo, hi in self.intervals[1:])

    def require_normalized(self) -> "EigenBasis":
        if not self.normalized:
            raise EigenvaluesNotNormalized(
                "need exactly one eigenvalue > 1 (got "
                f"{[e.value for e in self.eigenvalues]}); replace the matrix "
                "by its inverse or an appropriate square")
        return self

    def to_eigen(self, x) -> np.ndarray:
        return self.inverse @ np.asarray(x, dtype=float)

    def to_standard(self, a) -> np.ndarray:
        return self.vectors @ np.asarray(a, dtype=float)


def _linpoly_minor_det(entries, rows, cols):
    """Determinant of a 2x2 submatrix of linear polynomials (coeff tuples)."""
    (r1, r2), (c1, c2) = rows, cols

    def mul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    def sub(p, q):
        out = [0] * max(len(p), len(q))
        for i, a in enumerate(p):
            out[i] += a
        for i, b in enumerate(q):
            out[i] -= b
        return out

    return sub(mul(entries[r1][c1], entries[r2][c2]),
               mul(entries[r1][c2], entries[r2][c1]))


def _adjugate_polys(a: IntMatrix):
    """Entries of adj(A - xI) as polynomial coefficient lists (n <= 3)."""
    n = a.n
    ent = [[[a.rows[i][j]] + ([-1] if i == j else [])
            for j in range(n)] for i in range(n)]
    # pad linear entries
    ent = [[(e + [0])[:2] for e in row] for row in ent]
    adj = [[None] * n for _ in range(n)]
    if n == 2:
        adj[0][0] = ent[1][1]
        adj[0][1] = [-c for c in ent[0][1]]
        adj[1][0] = [-c for c in ent[1][0]]
        adj[1][1] = ent[0][0]
        return adj
    if n == 3:
        for i in range(3):
            for j in range(3):
                rows = tuple(r for r in range(3) if r != j)
                cols = tuple(c for c in range(3) if c != i)
                minor = _linpoly_minor_det(ent, rows, cols)
                if (i + j) % 2 == 1:
                    minor = [-c for c in minor]
                adj[i][j] = minor
        return adj
    raise DimensionMismatch("adjugate eigenvectors implemented for n <= 3")


def eigenbasis(a: IntMatrix, tol: float = 1e-12) -> EigenBasis:
    """Certified eigen-pairs for a matrix with distinct positive real spectrum.

    Real roots are isolated with Sturm sequences and refined by bisection to
    width ``tol``; eigenvectors are the dominant column of adj(A - lambda I),
    whose entries are evaluated exactly as polynomials in lambda.  Raises
    SpectrumNotTotallyRealPositive when the spectrum has complex or
    non-positive members (squaring the matrix makes signs positive).
    """
    a.require_gl()
    n = a.n
    p = charpoly(a)
    width = Fraction(1, 10 ** max(6, int(-math.log10(tol)) + 1))
    ivs = isolate_real_roots(p.to_fractions())
    if len(ivs) != n:
        raise SpectrumNotTotallyRealPositive(
            f"only {len(ivs)} distinct real eigenvalues for n = {n}; "
            "replace the matrix by its square to force positive real spectrum")
    refined = [refine_root(p.to_fractions(), lo, hi, width) for lo, hi in ivs]
    if refined[0][0] <= 0:
        raise SpectrumNotTotallyRealPositive(
            "negative eigenvalue present; replace the matrix by its square")
    refined.sort(key=lambda iv: -(iv[0] + iv[1]))
    adj = _adjugate_polys(a)
    cols = []
    certs = []
    for lo, hi in refined:
        lam = float((lo + hi) / 2)
        certs.append(Certified(lam, float((hi - lo) / 2) + 1e-15))
        col_vals = np.array([[_horner(adj[i][j], lam) for j in range(n)]
                             for i in range(n)])
        j = int(np.argmax(np.abs(col_vals).sum(axis=0)))
        vec = col_vals[:, j]
        norm = np.linalg.norm(vec)
        assert norm > 0, "adjugate column vanished at a simple eigenvalue"
        vec = vec / norm
        lead = next(x for x in vec if abs(x) > 1e-9)
        if lead < 0:
            vec = -vec
        cols.append(vec)
    x = np.column_stack(cols)
    return EigenBasis(matrix=a, eigenvalues=tuple(certs),
                      intervals=tuple(refined), vectors=x,
                      inverse=np.linalg.inv(x))


def _horner(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# regions


@dataclass
class ConeRegion:
    """Open cone of fixed eigen-coordinate signs; invariant under the matrix."""

    basis: EigenBasis
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != self.basis.n:
            raise DimensionMismatch("signs length != dimension")

    @property
    def n(self) -> int:
        return self.basis.n


@dataclass
class OrbitHullRegion:
    """Interior of the convex hull of a truncated matrix orbit.

    ``basepoint`` is in eigen coordinates; vertices are the diagonal orbit
    lam^k * basepoint for |k| <= K.  ``degenerate`` flags a basepoint on an
    eigen-hyperplane (empty interior).  ``truncated`` is always True: the
    infinite-orbit hull may differ, which callers handle by escalation.
    """

    basis: EigenBasis
    basepoint: np.ndarray
    K: int
    truncated: bool = True
    _hull_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.basepoint = np.asarray(self.basepoint, dtype=float)
        if self.basepoint.shape != (self.basis.n,):
            raise DimensionMismatch("basepoint length != dimension")

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def degenerate(self) -> bool:
        return bool(np.any(self.basepoint == 0.0))

    @property
    def window_limit(self) -> int:
        lam1 = self.basis.eigenvalues[0].value
        lamn = self.basis.eigenvalues[-1].value
        growth = max(lam1, 1.0 / lamn)
        return max(2, int(math.log(_WINDOW_COORD_LIMIT) / math.log(growth)))

    def with_truncation(self, K: int) -> "OrbitHullRegion":
        return OrbitHullRegion(basis=self.basis, basepoint=self.basepoint, K=K)

    def orbit_points(self, ks) -> np.ndarray:
        lam = self.basis.lams
        ks = np.asarray(ks, dtype=float)
        return lam[None, :] ** ks[:, None] * self.basepoint[None, :]

    def vertex_points(self) -> np.ndarray:
        return self.orbit_points(np.arange(-self.K, self.K + 1))

    def _window_facets(self, kmin: int, kmax: int, shift: int):
        key = (kmin - shift, kmax - shift)
        if key not in self._hull_cache:
            js = np.arange(key[0], key[1] + 1)
            pts = np.abs(self.orbit_points(js))
            try:
                self._hull_cache[key] = ConvexHull(pts).equations
            except QhullError:
                self._hull_cache[key] = None
        return self._hull_cache[key]

    def clearance(self, x_eigen: np.ndarray) -> float:
        """Signed clearance in the shifted frame; negative means outside."""
        if self.degenerate:
            return -math.inf
        p = self.basepoint
        x = np.asarray(x_eigen, dtype=float)
        if np.any(np.sign(x) != np.sign(p)):
            return -math.inf
        ax, ap = np.abs(x), np.abs(p)
        lam = self.basis.lams
        mu1 = math.log(lam[0])
        mun = math.log(lam[-1])
        a_hi = (math.log(ax[0]) - math.log(ap[0])) / mu1
        a_lo = (math.log(ax[-1]) - math.log(ap[-1])) / mun
        shift = int(round((a_lo + a_hi) / 2))
        shift = max(-self.K, min(self.K, shift))
        w = min(max(8, int(math.ceil(abs(a_hi - a_lo) / 2)) + 4),
                self.window_limit)
        kmin, kmax = max(-self.K, shift - w), min(self.K, shift + w)
        eqs = self._window_facets(kmin, kmax, shift)
        if eqs is None:
            return -math.inf
        xs = ax * lam ** float(-shift)
        return float(-(eqs[:, :-1] @ xs + eqs[:, -1]).max())


@dataclass
class HPolytopeRegion:
    """Open intersection of halfspaces {x : normal . x < offset}."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        self.normals = np.asarray(self.normals, dtype=float)
        self.offsets = np.asarray(self.offsets, dtype=float)
        if self.normals.ndim != 2 or len(self.offsets) != len(self.normals):
            raise DimensionMismatch("normals/offsets shape mismatch")

    @property
    def n(self) -> int:
        return self.normals.shape[1]


ConvexRegion = ConeRegion | OrbitHullRegion | HPolytopeRegion


def quadrant_domains(a: IntMatrix, tol: float = 1e-12) -> tuple[ConeRegion, ...]:
    """The four invariant open cones between the eigen-lines (n = 2)."""
    basis = eigenbasis(a, tol)
    if basis.n != 2:
        raise DimensionMismatch("quadrant domains need n = 2")
    return tuple(ConeRegion(basis, s)
                 for s in itertools.product((1, -1), repeat=2))


def octant_domains(a: IntMatrix, tol: float = 1e-12) -> tuple[ConeRegion, ...]:
    """The eight invariant open cones between the eigen-planes (n = 3)."""
    basis = eigenbasis(a, tol)
    if basis.n != 3:
        raise DimensionMismatch("octant domains need n = 3")
    return tuple(ConeRegion(basis, s)
                 for s in itertools.product((1, -1), repeat=3))


def positive_cone(basis: EigenBasis) -> ConeRegion:
    return ConeRegion(basis, (1,) * basis.n)


def orbit_hull(a: IntMatrix, basepoint: Sequence[float], K: int,
               tol: float = 1e-12, basis: Optional[EigenBasis] = None) -> OrbitHullRegion:
    """Truncated orbit-hull region for A, basepoint in eigen coordinates."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if basis is None:
        basis = eigenbasis(a, tol)
    return OrbitHullRegion(basis=basis, basepoint=np.asarray(basepoint, dtype=float),
                           K=K)


def clearance(region: ConvexRegion, x, frame: str = "standard") -> float:
    """Signed clearance of x from the region boundary (negative = outside).

    Cone clearances are eigen-coordinate values; orbit hulls report in the
    query's shifted frame; halfspace regions in Euclidean units.
    """
    if isinstance(region, ConeRegion):
        a = np.asarray(x, dtype=float) if frame == "eigen" else region.basis.to_eigen(x)
        if a.shape != (region.n,):
            raise DimensionMismatch(f"point has length {a.shape}, need {region.n}")
        return float(min(s * v for s, v in zip(region.signs, a)))
    if isinstance(region, OrbitHullRegion):
        a = np.asarray(x, dtype=float) if frame == "eigen" else region.basis.to_eigen(x)
        if a.shape != (region.n,):
            raise DimensionMismatch(f"point has length {a.shape}, need {region.n}")
        return region.clearance(a)
    if isinstance(region, HPolytopeRegion):
        if frame != "standard":
            raise ValueError("halfspace regions have no eigen frame")
        x = np.asarray(x, dtype=float)
        if x.shape != (region.n,):
            raise DimensionMismatch(f"point has length {x.shape}, need {region.n}")
        norms = np.linalg.norm(region.normals, axis=1)
        return float(((region.offsets - region.normals @ x) / norms).min())
    raise TypeError(f"not a region: {region!r}")


def contains_point(region: ConvexRegion, x, margin: float = 0.0,
                   frame: str = "standard") -> bool:
    """Open membership with clearance strictly above ``margin``.

    Negative margins model "within tolerance of the closed region".
    """
    return clearance(region, x, frame=frame) > margin


def contains_affine_line(region: ConvexRegion) -> bool:
    """True iff the region contains a full affine line.

    Cones here are pointed and orbit hulls are bounded truncations (their
    ``truncated`` flag reminds callers that the infinite hull may differ).
    For halfspace regions this is the lineality test: a nonempty region
    contains a line iff the normals do not span R^n.
    """
    if isinstance(region, (ConeRegion, OrbitHullRegion)):
        return False
    if isinstance(region, HPolytopeRegion):
        from scipy.optimize import linprog
        m, n = region.normals.shape
        if m == 0:
            return True
        res = linprog(c=np.zeros(n), A_ub=region.normals,
                      b_ub=region.offsets - 1e-9,
                      bounds=[(None, None)] * n, method="highs")
        if not res.success:
            return False
        rank = np.linalg.matrix_rank(region.normals, tol=1e-9)
        return rank < n
    raise TypeError(f"not a region: {region!r}")


# ---------------------------------------------------------------------------
# invariant-ray and R-orbit verification


@dataclass(frozen=True)
class RayClosureResult:
    ok: bool
    K_used: Optional[int]
    samples: int
    worst_clearance: float
    failing_t: Optional[float] = None

    def __bool__(self) -> bool:
        return self.ok


def _escalating_check(region, points_eigen, margin, cap):
    """Check eigen-frame points against region, doubling hull truncation."""
    current = region
    while True:
        clears = [clearance(current, pt, frame="eigen") for pt in points_eigen]
        worst = min(clears)
        if worst > margin:
            return True, current, worst, None
        if not isinstance(current, OrbitHullRegion) or current.K >= cap:
            bad = int(np.argmin(clears))
            return False, current, worst, bad
        current = current.with_truncation(min(cap, 2 * current.K))


def ray_closure_check(region: ConvexRegion, p, samples: int = 32,
                      t_max: float = 2.0, margin: float = 0.0,
                      escalate_cap: int = DEFAULT_ESCALATION_CAP,
                      frame: str = "eigen") -> RayClosureResult:
    """Verify the two coordinate rays from p stay inside the region (n = 3).

    Checks (t + p1, p2, p3) and (p1, p2, t + p3) in eigen coordinates at
    ``samples`` values of t in (0, t_max].  Orbit hulls are escalated (K
    doubling up to the cap) before a failure is reported.
    """
    if region.n != 3:
        raise DimensionMismatch("ray closure check is for n = 3")
    basis = region.basis
    a = np.asarray(p, dtype=float) if frame == "eigen" else basis.to_eigen(p)
    if np.any(a <= 0):
        raise PointOutsideRegion("point must lie in the open positive octant")
    if not contains_point(region, a, frame="eigen"):
        raise PointOutsideRegion("point not in the region")
    ts = np.linspace(t_max / samples, t_max, samples)
    pts = []
    for t in ts:
        pts.append(a + np.array([t, 0.0, 0.0]))
        pts.append(a + np.array([0.0, 0.0, t]))
    ok, used, worst, bad = _escalating_check(region, pts, margin, escalate_cap)
    k_used = used.K if isinstance(used, OrbitHullRegion) else None
    failing = float(ts[bad // 2]) if (not ok and bad is not None) else None
    return RayClosureResult(ok=ok, K_used=k_used, samples=2 * samples,
                            worst_clearance=worst, failing_t=failing)


@dataclass(frozen=True)
class ROrbitResult:
    """Constructed full-orbit point plus its sampled verification."""

    r: np.ndarray
    region: ConvexRegion
    K_used: Optional[int]
    samples: int
    worst_clearance: float
    vertices_ok: bool


def find_r_orbit_point(region: ConvexRegion, q, samples: int = 64,
                       margin: float = 0.0,
                       escalate_cap: int = DEFAULT_ESCALATION_CAP,
                       frame: str = "eigen") -> ROrbitResult:
    """Point r in the region whose full real orbit {A^t r} stays inside.

    In the all-positive cone the construction scales the first coordinate up
    by lambda_1 and the last down by lambda_n; points with other sign
    patterns are handled by the sign-flip symmetry of the eigen frame.  The
    orbit segment t in [0, 1] and the enclosing parallelepiped vertices are
    verified by sampling (orbit-hull regions escalate K up to the cap), and
    invariance extends the segment to all real t.
    """
    basis = region.basis if isinstance(region, (ConeRegion, OrbitHullRegion)) else None
    if basis is None:
        raise TypeError("need a cone or orbit-hull region")
    basis.require_normalized()
    n = basis.n
    if n not in (2, 3):
        raise DimensionMismatch("R-orbit construction is for n in {2, 3}")
    a = np.asarray(q, dtype=float) if frame == "eigen" else basis.to_eigen(q)
    if not contains_point(region, a, frame="eigen"):
        raise PointOutsideRegion("q not in the region")
    if np.any(a == 0):
        raise PointOutsideRegion("q lies on an eigen-hyperplane; no open octant contains it")
    flip = np.sign(a)
    qa = np.abs(a)
    lam = basis.lams
    if n == 3:
        r_abs = np.array([lam[0] * qa[0], qa[1], qa[2] / lam[2]])
        spans = [(lam[0] * qa[0], lam[0] ** 2 * qa[0]),
                 (lam[1] * qa[1], qa[1]),
                 (qa[2] / lam[2], qa[2])]
    else:
        r_abs = np.array([lam[0] * qa[0], qa[1] / lam[1]])
        spans = [(lam[0] * qa[0], lam[0] ** 2 * qa[0]),
                 (qa[1] / lam[1], qa[1])]
    vertices = [flip * np.array(v) for v in itertools.product(*spans)]
    ts = np.linspace(0.0, 1.0, samples)
    orbit = [flip * (lam ** t) * r_abs for t in ts]
    ok_v, region_v, worst_v, _ = _escalating_check(region, vertices, margin, escalate_cap)
    ok_o, region_o, worst_o, bad = _escalating_check(region_v, orbit, margin, escalate_cap)
    if not (ok_v and ok_o):
        t_bad = float(ts[bad]) if (not ok_o and bad is not None) else None
        dist = min(worst_v, worst_o)
        raise VerificationFailed(
            f"orbit point verification failed (worst clearance {dist:.3e}"
            + (f" at t = {t_bad}" if t_bad is not None else "") + ")",
            t=t_bad, distance=dist)
    k_used = region_o.K if isinstance(region_o, OrbitHullRegion) else None
    return ROrbitResult(r=flip * r_abs, region=region_o, K_used=k_used,
                        samples=samples, worst_clearance=min(worst_v, worst_o),
                        vertices_ok=ok_v)
