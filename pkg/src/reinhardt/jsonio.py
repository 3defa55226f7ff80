"""JSON wire formats.

Integer payloads travel as decimal strings so arbitrary precision survives
any JSON implementation: matrices as arrays of arrays of strings,
polynomials as ascending coefficient lists, vectors as flat lists.
Geometry payloads (basepoints, halfspaces, widths) are plain JSON numbers.
Parsers accept bare ints as a convenience; emitters always write strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .errors import DimensionMismatch, InputInconsistent
from .exactpoly import IntPoly
from .intmat import Certified, GroupVerdict, IntMatrix, SpectrumClass
from .logdomain import (
    ConeRegion,
    ConvexRegion,
    HPolytopeRegion,
    OrbitHullRegion,
    eigenbasis,
    orbit_hull,
)
from .steinness import BundleSpec, DomainSpec, TraceStep, Verdict


class ParseError(ValueError):
    """Malformed JSON payload; message names the offending field."""


def _as_int(x, what: str) -> int:
    if isinstance(x, bool):
        raise ParseError(f"{what}: expected integer, got boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            raise ParseError(f"{what}: {x!r} is not a decimal integer") from None
    raise ParseError(f"{what}: expected decimal integer string, got {type(x).__name__}")


# -- matrices, vectors, polynomials ----------------------------------------


def matrix_to_json(m: IntMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.rows]


def matrix_from_json(data: Any) -> IntMatrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix: expected a non-empty array of arrays")
    return IntMatrix.from_rows([[_as_int(x, "matrix entry") for x in row]
                                for row in data])


def vector_to_json(v) -> list[str]:
    return [str(int(x)) for x in v]


def vector_from_json(data: Any) -> tuple[int, ...]:
    if not isinstance(data, list) or not data:
        raise ParseError("vector: expected a non-empty array")
    return tuple(_as_int(x, "vector entry") for x in data)


def poly_to_json(p: IntPoly) -> list[str]:
    return [str(c) for c in p.coeffs]


def poly_from_json(data: Any) -> IntPoly:
    if not isinstance(data, list):
        raise ParseError("polynomial: expected an array of coefficients")
    return IntPoly.from_coeffs([_as_int(x, "coefficient") for x in data])


# -- regions ----------------------------------------------------------------


def region_to_json(region: ConvexRegion) -> dict:
    if isinstance(region, ConeRegion):
        kind = "quadrant" if region.n == 2 else "octant"
        return {"type": kind,
                "matrix": matrix_to_json(region.basis.matrix),
                "signs": list(region.signs)}
    if isinstance(region, OrbitHullRegion):
        return {"type": "orbit_hull",
                "matrix": matrix_to_json(region.basis.matrix),
                "basepoint": [float(x) for x in region.basepoint],
                "K": region.K}
    if isinstance(region, HPolytopeRegion):
        return {"type": "hpolytope",
                "halfspaces": [{"normal": [float(x) for x in n], "offset": float(b)}
                               for n, b in zip(region.normals, region.offsets)]}
    raise TypeError(f"not a region: {region!r}")


def region_from_json(data: Any) -> ConvexRegion:
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("region: expected an object with a 'type' field")
    kind = data["type"]
    if kind in ("quadrant", "octant"):
        m = matrix_from_json(data.get("matrix"))
        expected = 2 if kind == "quadrant" else 3
        if m.n != expected:
            raise ParseError(f"region: {kind} needs a {expected}x{expected} matrix")
        signs = data.get("signs", [1] * m.n)
        if len(signs) != m.n or any(s not in (1, -1) for s in signs):
            raise ParseError("region: signs must be a list of +-1 per axis")
        return ConeRegion(eigenbasis(m), tuple(signs))
    if kind == "orbit_hull":
        m = matrix_from_json(data.get("matrix"))
        base = data.get("basepoint")
        if not isinstance(base, list) or len(base) != m.n:
            raise ParseError("region: basepoint must be a float list of length n")
        return orbit_hull(m, [float(x) for x in base], int(data.get("K", 8)))
    if kind == "hpolytope":
        hs = data.get("halfspaces")
        if not isinstance(hs, list) or not hs:
            raise ParseError("region: halfspaces must be a non-empty list")
        normals, offsets = [], []
        for h in hs:
            if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
                raise ParseError("region: halfspace needs 'normal' and 'offset'")
            normals.append([float(x) for x in h["normal"]])
            offsets.append(float(h["offset"]))
        return HPolytopeRegion(np.array(normals), np.array(offsets))
    raise ParseError(f"region: unknown type {kind!r}")


# -- specs ------------------------------------------------------------------


def domain_spec_to_json(spec: DomainSpec) -> dict:
    out = {"n": spec.n,
           "hyperplane_pattern": sorted(spec.hyperplane_pattern),
           "generators": [matrix_to_json(g) for g in spec.generators]}
    if spec.region is not None:
        out["region"] = region_to_json(spec.region)
    return out


def domain_spec_from_json(data: Any) -> DomainSpec:
    if not isinstance(data, dict):
        raise ParseError("domain spec: expected an object")
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("domain spec: integer field 'n' required") from None
    pattern = data.get("hyperplane_pattern", [])
    if not isinstance(pattern, list):
        raise ParseError("domain spec: hyperplane_pattern must be a list")
    gens = data.get("generators", [])
    if not isinstance(gens, list):
        raise ParseError("domain spec: generators must be a list of matrices")
    region = region_from_json(data["region"]) if data.get("region") else None
    try:
        return DomainSpec(n=n,
                          hyperplane_pattern=frozenset(int(i) for i in pattern),
                          generators=tuple(matrix_from_json(g) for g in gens),
                          region=region)
    except (DimensionMismatch, InputInconsistent) as exc:
        raise ParseError(f"domain spec: {exc}") from exc


def bundle_spec_to_json(spec: BundleSpec) -> dict:
    return {"fiber": domain_spec_to_json(spec.fiber),
            "monodromies": [matrix_to_json(g) for g in spec.monodromies],
            "widths": [None if w is None else float(w) for w in spec.widths]}


def bundle_spec_from_json(data: Any) -> BundleSpec:
    if not isinstance(data, dict) or "fiber" not in data:
        raise ParseError("bundle spec: expected an object with a 'fiber'")
    fiber = domain_spec_from_json(data["fiber"])
    mono = data.get("monodromies", [])
    if not isinstance(mono, list) or not mono:
        raise ParseError("bundle spec: monodromies must be a non-empty list")
    widths = data.get("widths") or [None] * len(mono)
    if not isinstance(widths, list) or len(widths) != len(mono):
        raise ParseError("bundle spec: widths must align with monodromies")
    try:
        return BundleSpec(fiber=fiber,
                          monodromies=tuple(matrix_from_json(g) for g in mono),
                          widths=tuple(None if w is None else float(w)
                                       for w in widths))
    except DimensionMismatch as exc:
        raise ParseError(f"bundle spec: {exc}") from exc


# -- results ----------------------------------------------------------------


def spectrum_class_to_json(sc: SpectrumClass) -> dict:
    out = {"tag": sc.tag, "n": sc.n,
           "charpoly": poly_to_json(sc.char),
           "eigenvalues": [{"re": e.value.real, "im": e.value.imag,
                            "radius": e.radius, "multiplicity": e.multiplicity}
                           for e in sc.eigenvalues],
           "rho": sc.rho, "rho_error": sc.rho_error}
    if sc.all_real is not None:
        out["all_real"] = sc.all_real
    return out


def group_verdict_to_json(gv: GroupVerdict) -> dict:
    out: dict = {"tag": gv.tag}
    if gv.closure is not None:
        out["closure_size"] = len(gv.closure)
        out["closure"] = [matrix_to_json(m) for m in gv.closure]
    if gv.witness is not None:
        out["witness_word"] = gv.witness_word
        out["witness"] = matrix_to_json(gv.witness)
        out["rho"] = gv.witness_rho.value
        out["rho_error"] = gv.witness_rho.error
    if gv.searched_depth is not None:
        out["searched_depth"] = gv.searched_depth
    return out


def verdict_to_json(v: Verdict) -> dict:
    return {"verdict": v.tag,
            "trace": [{"rule": s.rule, "detail": s.detail, "witness": s.witness}
                      for s in v.trace]}


def verdict_to_text(v: Verdict) -> str:
    lines = [f"verdict: {v.tag}"]
    for s in v.trace:
        lines.append(f"  - [{s.rule}] {s.detail}")
    return "\n".join(lines) + "\n"


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, stable float repr."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
