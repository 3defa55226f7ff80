"""Analytic-disk family with compact boundaries and divergent centers.

Given a hyperbolic fiber (normalized positive real spectrum) and an
invariant log-domain region containing a full real orbit point r, this
module builds, for each R > 1, the analytic disk whose boundary fiber data
runs along the orbit of r while its center height grows without bound as
R -> 1.  The three verified facts - divergent centers, R-independent reduced
boundaries, and containment of the disk in the region - are the classical
obstruction to holomorphic convexity of the associated suspension.

All quadrature is uniform-grid trapezoid on the circle (spectrally accurate
for these analytic integrands) with automatic N-doubling; Poisson weights
are normalized to a discrete probability measure so interior disk values are
exact convex combinations of boundary values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    NoConvergence,
    PoleAtBoundary,
    QuadratureUnderflow,
)
from .intmat import IntMatrix
from .logdomain import (
    ConvexRegion,
    ConeRegion,
    EigenBasis,
    OrbitHullRegion,
    clearance,
    eigenbasis,
    find_r_orbit_point,
    orbit_hull,
    positive_cone,
)

DEFAULT_HEIGHT_CAP = 2 ** 24
_CHUNK = 2 ** 20


@dataclass(frozen=True)
class SuspensionData:
    """Eigen-data and verified orbit point feeding the disk family.

    ``lambdas`` are sorted descending with exactly lambda_1 > 1; ``r`` is in
    eigen coordinates and its full real orbit has been sample-verified inside
    ``region``.
    """

    matrix: IntMatrix
    basis: EigenBasis
    lambdas: tuple[float, ...]
    mu1: float
    r: np.ndarray
    region: ConvexRegion

    @property
    def n(self) -> int:
        return len(self.lambdas)


def make_suspension(a: IntMatrix, region: Optional[ConvexRegion] = None,
                    kind: str = "cone", basepoint: Optional[Sequence[float]] = None,
                    K: int = 8, q: Optional[Sequence[float]] = None,
                    tol: float = 1e-12) -> SuspensionData:
    """Assemble SuspensionData for a normalized hyperbolic matrix.

    ``kind`` picks the default region when none is given: the all-positive
    cone, or the orbit hull of ``basepoint`` (eigen coordinates, default all
    ones).  ``q`` seeds the orbit-point construction; defaults to the all-ones
    point for cones and an interior orbit average for hulls.
    """
    basis = eigenbasis(a, tol).require_normalized()
    lam = basis.lams
    if region is None:
        if kind == "cone":
            region = positive_cone(basis)
        elif kind == "orbit_hull":
            p = np.ones(basis.n) if basepoint is None else np.asarray(basepoint, float)
            region = orbit_hull(a, p, K, basis=basis)
        else:
            raise ValueError(f"unknown region kind {kind!r}")
    if q is None:
        if isinstance(region, OrbitHullRegion):
            p = region.basepoint
            q = (p / lam + p + lam * p) / 3.0
        else:
            q = np.ones(basis.n)
    rres = find_r_orbit_point(region, q, frame="eigen")
    return SuspensionData(matrix=a, basis=basis,
                          lambdas=tuple(float(x) for x in lam),
                          mu1=math.log(float(lam[0])),
                          r=rres.r, region=rres.region)


# ---------------------------------------------------------------------------
# the disk map and its boundary data


def strip_map(z, R: float):
    """log(i (R + z) / (R - z)), principal branch.

    Maps the closed unit disk into the strip 0 < Im < pi; continuous up to
    the boundary.  Requires R > 1 (the pole at z = R must stay outside).
    """
    if R <= 1:
        raise PoleAtBoundary(f"R = {R} puts the pole on the closed disk")
    z = np.asarray(z, dtype=complex)
    return np.log(1j * (R + z) / (R - z))


def boundary_grid(N: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(N) / N


def boundary_exponents(s: SuspensionData, R: float, theta) -> np.ndarray:
    """alpha(theta) = Re f(e^{i theta}) / mu1: the orbit time of each
    boundary point."""
    re_f = strip_map(np.exp(1j * np.asarray(theta, dtype=float)), R).real
    return re_f / s.mu1


def boundary_data(s: SuspensionData, R: float, theta) -> np.ndarray:
    """Boundary values lambda_j^{alpha(theta)}, shape (n, len(theta))."""
    alpha = boundary_exponents(s, R, theta)
    loglam = np.log(np.array(s.lambdas))
    return np.exp(loglam[:, None] * alpha[None, :])


# ---------------------------------------------------------------------------
# harmonic extension


def _poisson_weights(theta: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Normalized Poisson weights, rows summing to exactly 1."""
    z = np.exp(1j * theta)[None, :]
    sm = points[:, None]
    P = (1.0 - np.abs(sm) ** 2) / np.abs(z - sm) ** 2
    return P / P.sum(axis=1, keepdims=True)


def harmonic_extend(samples, point: complex) -> tuple[float, float]:
    """Harmonic extension of uniform-grid boundary data to an interior point.

    Returns ``(value, conjugate)``: the Poisson-weighted mean of the samples
    (weights normalized to total mass 1, so constants extend exactly) and
    the harmonic conjugate normalized to vanish at the origin.  The
    holomorphic completion is conjugate + i * value.
    """
    samples = np.asarray(samples, dtype=float)
    N = len(samples)
    if N < 16:
        raise QuadratureUnderflow(f"N = {N} < 16 boundary samples")
    theta = boundary_grid(N)
    w = _poisson_weights(theta, np.array([complex(point)]))[0]
    value = float(w @ samples)
    z = np.exp(1j * theta)
    q = 2.0 * (complex(point) * np.conj(z)).imag / np.abs(z - complex(point)) ** 2
    conjugate = float(-(q @ samples) / N)
    return value, conjugate


# ---------------------------------------------------------------------------
# center height


def _height_mean(R: float, N: int) -> float:
    """Trapezoid mean of e^{Re f_R} over the circle, chunked."""
    A = R * R + 1.0
    B = 2.0 * R
    total = 0.0
    for start in range(0, N, _CHUNK):
        stop = min(start + _CHUNK, N)
        theta = 2.0 * np.pi * np.arange(start, stop) / N
        c = np.cos(theta)
        total += float(np.sqrt((A + B * c) / (A - B * c)).sum())
    return total / N


@dataclass(frozen=True)
class HeightResult:
    value: float
    N_used: int
    rel_err: float


def center_height_detailed(s: Optional[SuspensionData], R: float, N: int = 256,
                           rel_tol: float = 1e-8,
                           cap: int = DEFAULT_HEIGHT_CAP) -> HeightResult:
    """Mean of e^{Re f_R} on the circle, refined until two successive grid
    doublings agree to ``rel_tol`` (relative) or the cap is hit.

    This equals the center value Im g_1(0) of the disk's first component and
    tends to +infinity as R -> 1.  ``s`` is accepted for signature symmetry;
    the integrand does not involve the eigenvalues.
    """
    if R <= 1:
        raise PoleAtBoundary(f"R = {R} puts the pole on the closed disk")
    N = max(256, N)
    N = 1 << (N - 1).bit_length()  # round up to a power of two
    prev = _height_mean(R, N)
    while N < cap:
        N *= 2
        cur = _height_mean(R, N)
        rel = abs(cur - prev) / abs(cur)
        if rel <= rel_tol:
            return HeightResult(value=cur, N_used=N, rel_err=rel)
        prev = cur
    raise NoConvergence(
        f"height quadrature did not converge by N = {N}: last values "
        f"{prev!r}, {cur!r}" if N > 256 else "cap below starting grid")


def center_height(s: Optional[SuspensionData], R: float, N: int = 256,
                  rel_tol: float = 1e-8, cap: int = DEFAULT_HEIGHT_CAP) -> float:
    return center_height_detailed(s, R, N=N, rel_tol=rel_tol, cap=cap).value


# ---------------------------------------------------------------------------
# containment and boundary compactness


@dataclass(frozen=True)
class ContainmentReport:
    R: float
    N: int
    M: int
    violations: int
    worst_margin: float
    boundary_orbit_dev: float
    boundary_reduced_dev: float
    K_used: Optional[int]


def _region_clearances(region: ConvexRegion, pts: np.ndarray) -> np.ndarray:
    if isinstance(region, ConeRegion):
        signs = np.array(region.signs, dtype=float)
        return (pts * signs[None, :]).min(axis=1)
    return np.array([clearance(region, p, frame="eigen") for p in pts])


def verify_containment(s: SuspensionData, R: float, N: int = 2048,
                       M: int = 10000, eps: float = 1e-6,
                       seed: int = 0, escalate_cap: int = 64) -> ContainmentReport:
    """Check the disk stays in the region, boundary and interior.

    Boundary fiber points are the orbit values lambda^alpha * r; interior
    points are normalized-Poisson convex means at M seeded pseudo-random
    disk points (radius^2 and angle uniform).  Membership is tested at
    margin -eps; orbit-hull regions escalate K (doubling, up to the cap)
    until the boundary passes.  Violations are data, not errors.
    """
    if N < 16:
        raise QuadratureUnderflow(f"N = {N} < 16 boundary samples")
    theta = boundary_grid(N)
    alpha = boundary_exponents(s, R, theta)
    loglam = np.log(np.array(s.lambdas))
    b = np.exp(loglam[:, None] * alpha[None, :])          # (n, N)
    boundary_pts = (b * s.r[:, None]).T                    # (N, n)
    lam = np.array(s.lambdas)
    orbit_pts = (lam[None, :] ** alpha[:, None]) * s.r[None, :]
    boundary_orbit_dev = float(np.abs(boundary_pts - orbit_pts).max())
    reduced = np.exp(-loglam[:, None] * alpha[None, :]) * b * s.r[:, None]
    boundary_reduced_dev = float(np.abs(reduced - s.r[:, None]).max())

    region = s.region
    while True:
        bc = _region_clearances(region, boundary_pts)
        if bc.min() > -eps:
            break
        if not isinstance(region, OrbitHullRegion) or region.K >= escalate_cap:
            break
        region = region.with_truncation(min(escalate_cap, 2 * region.K))

    rng = np.random.default_rng(seed)
    u = rng.random(M)
    phi = rng.random(M) * 2.0 * np.pi
    pts_s = np.sqrt(u) * np.exp(1j * phi)
    worst = float(bc.min())
    violations = int((bc <= -eps).sum())
    values = boundary_pts  # rows indexed by theta
    for start in range(0, M, 512):
        chunk = pts_s[start:start + 512]
        w = _poisson_weights(theta, chunk)
        interior = w @ values
        cl = _region_clearances(region, interior)
        worst = min(worst, float(cl.min()))
        violations += int((cl <= -eps).sum())
    k_used = region.K if isinstance(region, OrbitHullRegion) else None
    return ContainmentReport(R=R, N=N, M=M, violations=violations,
                             worst_margin=worst,
                             boundary_orbit_dev=boundary_orbit_dev,
                             boundary_reduced_dev=boundary_reduced_dev,
                             K_used=k_used)


@dataclass(frozen=True)
class BoundaryCompactReport:
    """Reduced boundary representatives across an R-list.

    Dividing out the real flow leaves the fiber coordinates equal to r and
    the base coordinate inside (0, pi/mu1), independent of R; ``max_dev`` is
    the worst fiber deviation over all R and boundary samples.
    """

    max_dev: float
    per_R: tuple[tuple[float, float], ...]
    base_in_range: bool


def verify_boundary_compact(s: SuspensionData, R_values: Sequence[float],
                            N: int = 1024) -> BoundaryCompactReport:
    theta = boundary_grid(N)
    loglam = np.log(np.array(s.lambdas))
    per = []
    base_ok = True
    for R in R_values:
        alpha = boundary_exponents(s, R, theta)
        b = np.exp(loglam[:, None] * alpha[None, :])
        reduced = np.exp(-loglam[:, None] * alpha[None, :]) * b * s.r[:, None]
        dev = float(np.abs(reduced - s.r[:, None]).max())
        per.append((float(R), dev))
        im_f = strip_map(np.exp(1j * theta), R).imag
        base = im_f / s.mu1
        if not (base.min() > 0.0 and base.max() < np.pi / s.mu1):
            base_ok = False
    return BoundaryCompactReport(max_dev=max(d for _, d in per),
                                 per_R=tuple(per), base_in_range=base_ok)


# ---------------------------------------------------------------------------
# the divergence scan


@dataclass(frozen=True)
class DiskReport:
    R: float
    N: int
    center_height: float
    worst_margin: float
    boundary_dev: float
    violations: int
    quad_rel_err: float
    K_used: Optional[int]


@dataclass(frozen=True)
class ScanTable:
    rows: tuple[DiskReport, ...]

    def to_csv(self) -> str:
        lines = ["R,N,center_height,worst_margin,boundary_dev"]
        for row in self.rows:
            lines.append(f"{row.R:.12g},{row.N},{row.center_height:.12g},"
                         f"{row.worst_margin:.12g},{row.boundary_dev:.12g}")
        return "\n".join(lines) + "\n"


def divergence_scan(s: SuspensionData, schedule: Sequence[float],
                    N: int = 2048, M: int = 10000, eps: float = 1e-6,
                    seed: int = 0, escalate_cap: int = 64,
                    height_cap: int = DEFAULT_HEIGHT_CAP) -> ScanTable:
    """One row per R: center height, worst containment margin, boundary
    deviation.  The schedule must be strictly decreasing toward 1."""
    schedule = [float(R) for R in schedule]
    if any(R <= 1 for R in schedule):
        raise PoleAtBoundary("schedule values must exceed 1")
    if any(a <= b for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    rows = []
    for R in schedule:
        h = center_height_detailed(s, R, N=256, cap=height_cap)
        cont = verify_containment(s, R, N=N, M=M, eps=eps, seed=seed,
                                  escalate_cap=escalate_cap)
        rows.append(DiskReport(R=R, N=h.N_used, center_height=h.value,
                               worst_margin=cont.worst_margin,
                               boundary_dev=cont.boundary_reduced_dev,
                               violations=cont.violations,
                               quad_rel_err=h.rel_err, K_used=cont.K_used))
    return ScanTable(rows=tuple(rows))
