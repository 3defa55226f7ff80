"""Top-level Steinness classifiers with reason traces.

``classify_domain`` decides from a bounded Stein Reinhardt domain's
dimension, hyperplane-contact pattern, and algebraic automorphism matrices
whether every holomorphic bundle with that fiber over a Stein base is Stein
(verdict InS), whether a hyperbolic automorphism obstructs it (NotInS), or
whether the search was inconclusive (Unknown).  ``classify_bundle`` applies
the one-sided criteria for a single flat bundle: a unit-circle monodromy
spectrum forces Steinness, and a hyperbolic monodromy whose loop has
holomorphic width beyond 2 pi^2 / log rho forces non-Steinness (n = 2).

Every non-Unknown verdict carries a replayable witness in its trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InputInconsistent,
    NotInGL,
    RhoNotGreaterThanOne,
)
from .intmat import (
    Certified,
    GroupVerdict,
    IntMatrix,
    classify_spectrum,
    group_spec_verdict,
)
from .logdomain import ConvexRegion, contains_affine_line


@dataclass(frozen=True)
class SearchParams:
    max_word_len: int = 8
    closure_cap: int = 10000


@dataclass(frozen=True)
class DomainSpec:
    """Input data for a bounded Stein Reinhardt domain.

    ``hyperplane_pattern`` lists the coordinates i whose hyperplane
    {z_i = 0} meets the domain (1-based).  ``generators`` generate the
    integer-matrix group of algebraic automorphisms.  The optional region
    models the log image when the domain misses all hyperplanes.
    """

    n: int
    hyperplane_pattern: frozenset[int] = frozenset()
    generators: tuple[IntMatrix, ...] = ()
    region: Optional[ConvexRegion] = None

    def __post_init__(self):
        object.__setattr__(self, "hyperplane_pattern",
                           frozenset(self.hyperplane_pattern))
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.n != self.n:
                raise DimensionMismatch(f"generator is {g.n}x{g.n}, domain n = {self.n}")
            g.require_gl()
        if not self.hyperplane_pattern.issubset(range(1, self.n + 1)):
            raise InputInconsistent("hyperplane pattern indexes a missing coordinate")
        if self.region is not None and not self.hyperplane_pattern:
            if contains_affine_line(self.region):
                raise InputInconsistent(
                    "log region contains an affine line; the domain cannot be bounded")


@dataclass(frozen=True)
class BundleSpec:
    """A flat bundle: fiber data, monodromy matrices, optional loop widths.

    ``widths[i]`` is the holomorphic width (log of the supremal annulus
    modulus) of the free homotopy class carrying monodromy ``monodromies[i]``;
    None when unmeasured.
    """

    fiber: DomainSpec
    monodromies: tuple[IntMatrix, ...]
    widths: tuple[Optional[float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monodromies", tuple(self.monodromies))
        widths = tuple(self.widths) if self.widths else (None,) * len(self.monodromies)
        if len(widths) != len(self.monodromies):
            raise DimensionMismatch("widths must align with monodromies")
        object.__setattr__(self, "widths", widths)
        for g in self.monodromies:
            if g.n != self.fiber.n:
                raise DimensionMismatch("monodromy dimension != fiber dimension")
            g.require_gl()


@dataclass(frozen=True)
class TraceStep:
    rule: str
    detail: str
    witness: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    tag: str  # InS | NotInS | Stein | NotStein | Unknown
    trace: tuple[TraceStep, ...]

    @property
    def definitive(self) -> bool:
        return self.tag != "Unknown"


def _matrix_json(m: IntMatrix):
    return [[str(x) for x in row] for row in m.rows]


def width_threshold(rho: float) -> float:
    """2 pi^2 / log(rho); the width a hyperbolic loop must exceed."""
    if rho <= 1:
        raise RhoNotGreaterThanOne(f"rho = {rho} must exceed 1")
    return 2.0 * math.pi ** 2 / math.log(rho)


def _group_verdict_witness(gv: GroupVerdict) -> dict:
    out: dict = {}
    if gv.tag == "AllOnUnitCircle":
        out["closure_size"] = len(gv.closure)
        out["closure"] = [_matrix_json(m) for m in gv.closure]
    elif gv.tag == "HyperbolicWitness":
        out["word"] = gv.witness_word
        out["matrix"] = _matrix_json(gv.witness)
        out["rho"] = gv.witness_rho.value
        out["rho_error"] = gv.witness_rho.error
    else:
        out["searched_depth"] = gv.searched_depth
    return out


def _reduce_single_hyperplane(gens: Sequence[IntMatrix], axis: int) -> list[IntMatrix]:
    """Extract the 2x2 action on the non-vanishing coordinates.

    When only {z_axis = 0} meets the domain, every algebraic automorphism
    fixes that coordinate up to units and acts monomially on the other two,
    so its matrix has a 1 on the (axis, axis) entry and zeros below/above in
    that column.  Anything else cannot come from such a domain.
    """
    i = axis - 1
    blocks = []
    for g in gens:
        n = g.n
        if g.rows[i][i] != 1 or any(g.rows[r][i] != 0 for r in range(n) if r != i):
            raise InputInconsistent(
                f"generator {g} is incompatible with contact only at z_{axis} = 0")
        keep = [r for r in range(n) if r != i]
        blocks.append(IntMatrix.from_rows([[g.rows[r][c] for c in keep]
                                           for r in keep]))
    return blocks


def _hyperbolic_not_in_s(gv: GroupVerdict, n: int) -> Verdict:
    witness = _group_verdict_witness(gv)
    if n == 3:
        sc = classify_spectrum(gv.witness)
        if sc.tag == "Case2C" or sc.tag == "Case1":
            raise AssertionError("unit-circle class returned as hyperbolic witness")
        if sc.tag == "Case3" and not sc.all_real:
            # an invariant open convex set without affine lines forces a real
            # spectrum; a complex pair means no bounded domain has this group
            raise InputInconsistent(
                "witness has an irreducible cubic spectrum with a complex "
                "pair; no bounded Reinhardt domain admits it as an "
                f"automorphism matrix (word {gv.witness_word})")
        witness["spectrum_class"] = sc.tag
        witness["condition"] = "all-real-irreducible" if sc.tag == "Case3" \
            else "real-pair-with-fixed-direction"
    else:
        witness["spectrum_class"] = classify_spectrum(gv.witness).tag
    return Verdict(tag="NotInS", trace=(TraceStep(
        rule="hyperbolic-spectrum-witness",
        detail="an automorphism matrix has spectrum off the unit circle; "
               "its suspension is a non-Stein bundle with this fiber",
        witness=witness),))


def _unit_circle_in_s(gv: GroupVerdict) -> Verdict:
    return Verdict(tag="InS", trace=(TraceStep(
        rule="unit-circle-spectrum-finite-group",
        detail="the automorphism group closed under multiplication; every "
               "element has finite order, so all spectra are roots of unity "
               "and every bundle with this fiber is Stein",
        witness=_group_verdict_witness(gv)),))


def _inconclusive(gv: GroupVerdict) -> Verdict:
    return Verdict(tag="Unknown", trace=(TraceStep(
        rule="search-depth-exhausted",
        detail="no hyperbolic witness up to the word-length bound and the "
               "group did not close under the cap; the semi-decision is "
               "honest about not knowing",
        witness=_group_verdict_witness(gv)),))


def classify_domain(spec: DomainSpec,
                    params: SearchParams = SearchParams()) -> Verdict:
    """Serre-class membership verdict for a bounded Stein Reinhardt domain.

    Decision order: hyperplane-rich patterns force finite symmetry (InS);
    a single contact hyperplane in dimension 3 reduces to the induced 2x2
    action; otherwise the matrix group's spectrum decides, with Unknown for
    exhausted searches and for dimensions outside {2, 3}.
    """
    n = spec.n
    if n not in (2, 3):
        return Verdict(tag="Unknown", trace=(TraceStep(
            rule="dimension-outside-supported-range",
            detail=f"n = {n}: the classification is proven for n in {{2, 3}} "
                   "only; whether the unit-circle criterion decides higher "
                   "dimensions is open",
            witness={"n": n}),))
    pattern = spec.hyperplane_pattern
    if not spec.generators:
        return Verdict(tag="InS", trace=(TraceStep(
            rule="trivial-automorphism-data",
            detail="no algebraic automorphisms supplied; the trivial group "
                   "is finite, so the fiber is harmless",
            witness={}),))

    if n == 2 and pattern:
        gv = group_spec_verdict(spec.generators, params.max_word_len,
                                params.closure_cap)
        if gv.tag == "HyperbolicWitness":
            raise InputInconsistent(
                "a domain meeting a coordinate hyperplane in dimension 2 has "
                "finite algebraic symmetry; a hyperbolic generator "
                f"contradicts the pattern (word {gv.witness_word})")
        return Verdict(tag="InS", trace=(TraceStep(
            rule="axis-contact-finite-symmetry",
            detail="the domain meets a coordinate hyperplane in dimension 2, "
                   "which forces the algebraic automorphism group to be "
                   "finite; every bundle is Stein",
            witness={"pattern": sorted(pattern)}),))

    if n == 3 and len(pattern) >= 2:
        return Verdict(tag="InS", trace=(TraceStep(
            rule="multi-axis-contact-finite-symmetry",
            detail="contact with two or more coordinate hyperplanes forces "
                   "finite algebraic symmetry in dimension 3",
            witness={"pattern": sorted(pattern)}),))

    if n == 3 and len(pattern) == 1:
        axis = next(iter(pattern))
        blocks = _reduce_single_hyperplane(spec.generators, axis)
        gv = group_spec_verdict(blocks, params.max_word_len, params.closure_cap)
        if gv.tag == "HyperbolicWitness":
            v = _hyperbolic_not_in_s(gv, 2)
            step = TraceStep(
                rule="single-axis-reduction",
                detail=f"reduced to the induced action on the coordinates "
                       f"away from z_{axis}; the 2x2 block group has a "
                       "hyperbolic element, and the restriction to the "
                       "hyperplane slice is a non-Stein sub-bundle witness",
                witness={"axis": axis})
            return Verdict(tag="NotInS", trace=(step,) + v.trace)
        if gv.tag == "AllOnUnitCircle":
            step = TraceStep(
                rule="single-axis-reduction",
                detail=f"reduced to the induced 2x2 action away from z_{axis}; "
                       "its spectrum stays on the unit circle, and every "
                       "normal-form case with that block concludes Stein",
                witness={"axis": axis})
            return Verdict(tag="InS", trace=(step,) + _unit_circle_in_s(gv).trace)
        return _inconclusive(gv)

    gv = group_spec_verdict(spec.generators, params.max_word_len,
                            params.closure_cap)
    if gv.tag == "HyperbolicWitness":
        return _hyperbolic_not_in_s(gv, n)
    if gv.tag == "AllOnUnitCircle":
        return _unit_circle_in_s(gv)
    return _inconclusive(gv)


def classify_bundle(spec: BundleSpec,
                    params: SearchParams = SearchParams()) -> Verdict:
    """Steinness verdict for one flat bundle.

    Unit-circle monodromy spectrum gives Stein in any dimension.  A
    hyperbolic witness that is a supplied generator (or its inverse) with a
    known width is compared against 2 pi^2 / log rho using the certified rho
    interval; only a strict, certified exceedance in fiber dimension 2 gives
    NotStein.  Everything else is honestly Unknown.
    """
    if not spec.monodromies:
        return Verdict(tag="Stein", trace=(TraceStep(
            rule="trivial-monodromy",
            detail="no monodromies: the bundle is a product and the fiber "
                   "and base are Stein",
            witness={}),))
    gv = group_spec_verdict(spec.monodromies, params.max_word_len,
                            params.closure_cap)
    if gv.tag == "AllOnUnitCircle":
        return Verdict(tag="Stein", trace=(TraceStep(
            rule="unit-circle-monodromy-spectrum",
            detail="the whole monodromy spectrum lies on the unit circle, "
                   "hence is finite, and the bundle is Stein",
            witness=_group_verdict_witness(gv)),))
    if gv.tag == "Inconclusive":
        return _inconclusive(gv)

    witness = _group_verdict_witness(gv)
    width = None
    gen_index = None
    for i, g in enumerate(spec.monodromies):
        if gv.witness.rows == g.rows or gv.witness.rows == g.inverse().rows:
            gen_index = i
            width = spec.widths[i]
            break
    n = spec.fiber.n
    if n != 2:
        return Verdict(tag="Unknown", trace=(TraceStep(
            rule="no-width-criterion-beyond-dimension-two",
            detail="hyperbolic monodromy shows the fiber itself admits "
                   "non-Stein bundles, but the quantitative width criterion "
                   "is only available for two-dimensional fibers",
            witness=witness),))
    if width is None or gen_index is None:
        return Verdict(tag="Unknown", trace=(TraceStep(
            rule="no-width-data",
            detail="hyperbolic monodromy found but no holomorphic width was "
                   "supplied for it; the criteria are one-sided",
            witness=witness),))
    rho = gv.witness_rho
    lo = width_threshold(rho.value + rho.error)
    hi = width_threshold(max(rho.value - rho.error, 1.0 + 1e-300)) \
        if rho.value - rho.error > 1.0 else math.inf
    witness.update({"width": width, "threshold_interval": [lo, hi],
                    "generator_index": gen_index})
    if width > hi:
        return Verdict(tag="NotStein", trace=(TraceStep(
            rule="width-exceeds-threshold",
            detail="the loop's holomorphic width strictly exceeds "
                   "2 pi^2 / log rho for the certified rho interval, so the "
                   "pulled-back suspension already fails holomorphic "
                   "convexity",
            witness=witness),))
    if width > lo:
        return Verdict(tag="Unknown", trace=(TraceStep(
            rule="rho-interval-straddles-threshold",
            detail="the width falls inside the certified threshold interval; "
                   "tighten rho to decide",
            witness=witness),))
    return Verdict(tag="Unknown", trace=(TraceStep(
        rule="width-below-threshold",
        detail="the width does not exceed the threshold; the criteria are "
               "one-sided and leave this case open",
        witness=witness),))
