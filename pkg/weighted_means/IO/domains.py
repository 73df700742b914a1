"""
Domain spec files (JSON or YAML):

    {"kind": "ball", "m": 2, "center": [0, 0], "r": 1.0}
    {"kind": "star2d", "anchor": [0, 0], "a0": 1.0, "cos": [0.1], "sin": []}
    {"kind": "star2d", "anchor": [0, 0], "expr": "1 + 0.1*cos(3*theta)"}
    {"kind": "star3d", "anchor": [0, 0, 0], "r0": 1.0,
     "terms": [{"amplitude": 0.1, "p": 0, "q": 2, "trig": "cos"}]}
    {"kind": "ellipsoid", "center": [0, 0], "semi_axes": [1.2, 0.8333]}
    {"kind": "implicit", "m": 2, "bbox": [[-2, 2], [-2, 2]],
     "shape": "ellipse", "params": [1.2, 0.8333]}

Balls in 2D and 3D load as star domains, in higher dimensions as implicit
catalogue balls. ``ellipsoid`` loads as a star domain (dim 2, 3).
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from weighted_means.expr.parser import ExprSyntaxError
from weighted_means.general.system import catch_input_file_error
from weighted_means.geometry.domains import (
    IMPLICIT_SHAPES,
    Domain,
    DomainConstructionError,
    ExprBoundary,
    FourierBoundary,
    ImplicitDomain,
    SeparableBoundary,
    SeparableTerm,
    StarDomain,
)
from weighted_means.IO.yaml import open_yaml, read_yaml_section, save_yaml

DOMAIN_KINDS = ("ball", "star2d", "star3d", "ellipsoid", "implicit")


class DomainSpecError(ValueError):
    """A domain spec that is malformed or describes an invalid domain."""

    pass


def _require(spec: Dict[str, Any], *keys: str):
    missing = [k for k in keys if k not in spec]
    if missing:
        raise DomainSpecError(
            f"Domain spec of kind {spec.get('kind')!r} is missing "
            + ", ".join(missing)
        )


def _star_from_spec(spec, dim):
    _require(spec, "anchor")
    anchor = spec["anchor"]
    if len(anchor) != dim:
        raise DomainSpecError(f"star{dim}d anchor needs {dim} coordinates")
    if "expr" in spec:
        return StarDomain(dim, anchor, ExprBoundary(str(spec["expr"]), dim))
    if dim == 2:
        _require(spec, "a0")
        boundary = FourierBoundary(
            spec["a0"], tuple(spec.get("cos", ())), tuple(spec.get("sin", ()))
        )
    else:
        _require(spec, "r0")
        terms = tuple(SeparableTerm(**t) for t in spec.get("terms", ()))
        boundary = SeparableBoundary(spec["r0"], terms)
    return StarDomain(dim, anchor, boundary)


def _domain_from_spec(spec: Dict[str, Any]) -> Domain:
    kind = spec.get("kind")
    if kind == "ball":
        _require(spec, "m", "center", "r")
        m = int(spec["m"])
        if len(spec["center"]) != m:
            raise DomainSpecError(f"Ball centre needs {m} coordinates")
        if m in (2, 3):
            return StarDomain.ball(spec["center"], float(spec["r"]))
        return ImplicitDomain.from_catalogue(
            "ball", m, [spec["r"]], center=spec["center"]
        )
    if kind == "star2d":
        return _star_from_spec(spec, 2)
    if kind == "star3d":
        return _star_from_spec(spec, 3)
    if kind == "ellipsoid":
        _require(spec, "center", "semi_axes")
        return StarDomain.ellipsoid(spec["center"], spec["semi_axes"])
    if kind == "implicit":
        _require(spec, "m", "shape", "params")
        return ImplicitDomain.from_catalogue(
            spec["shape"],
            int(spec["m"]),
            spec["params"],
            center=spec.get("center"),
            bbox=spec.get("bbox"),
        )
    raise DomainSpecError(
        f"Unknown domain kind {kind!r}, expected one of "
        + ", ".join(DOMAIN_KINDS)
    )


def domain_from_spec(spec: Dict[str, Any]) -> Domain:
    """
    Build a domain from its spec dictionary.

    Raises
    ------
    DomainSpecError
        If the spec is malformed or the domain invalid (the message of the
        underlying error is kept, including expression positions).
    """
    if not isinstance(spec, dict):
        raise DomainSpecError("A domain spec must be a mapping")
    try:
        return _domain_from_spec(spec)
    except DomainSpecError:
        raise
    except ExprSyntaxError as error:
        raise DomainSpecError(f"Boundary expression: {error}") from error
    except (DomainConstructionError, TypeError, ValueError) as error:
        raise DomainSpecError(f"Invalid domain spec: {error}") from error


def domain_to_spec(domain: Domain) -> Dict[str, Any]:
    """
    Spec dictionary of a domain, such that ``domain_from_spec`` rebuilds
    it.

    Raises
    ------
    DomainSpecError
        For domains without a spec form (ray-traced boundaries, implicit
        domains built from arbitrary indicators).
    """
    if isinstance(domain, ImplicitDomain):
        if domain.name not in IMPLICIT_SHAPES:
            raise DomainSpecError(f"No spec form for {domain.describe()}")
        # catalogue centres are the origin, or c1 for unions
        offset = domain.center.as_array()
        if domain.name == "union":
            offset = offset - np.array(domain.params[: domain.dim])
        return {
            "kind": "implicit",
            "m": domain.dim,
            "shape": domain.name,
            "params": list(domain.params),
            "center": offset.tolist(),
            "bbox": domain.bbox.tolist(),
        }
    anchor = list(domain.anchor.coords)
    boundary = domain.boundary
    if isinstance(boundary, ExprBoundary):
        return {
            "kind": f"star{domain.dim}d",
            "anchor": anchor,
            "expr": boundary.source,
        }
    if isinstance(boundary, FourierBoundary):
        return {
            "kind": "star2d",
            "anchor": anchor,
            "a0": boundary.a0,
            "cos": list(boundary.cos),
            "sin": list(boundary.sin),
        }
    if isinstance(boundary, SeparableBoundary):
        return {
            "kind": "star3d",
            "anchor": anchor,
            "r0": boundary.r0,
            "terms": [
                {"amplitude": t.amplitude, "p": t.p, "q": t.q, "trig": t.trig}
                for t in boundary.terms
            ],
        }
    raise DomainSpecError(f"No spec form for {domain.describe()}")


def load_domain(
    path: Union[str, Path], section: Optional[str] = None
) -> Domain:
    """
    Read a domain spec file (JSON or YAML).

    Parameters
    ----------
    path : str or pathlib.Path
        The file.
    section : str, optional
        Read the spec from this top-level key instead of the whole file.

    Raises
    ------
    CommandLineInputError
        If the file does not exist.
    DomainSpecError
        If the spec is invalid.
    """
    catch_input_file_error(path)
    try:
        if section is None:
            spec = open_yaml(path)
        else:
            spec = read_yaml_section(path, section)
    except KeyError as error:
        raise DomainSpecError(str(error)) from error
    return domain_from_spec(spec)


def save_domain(domain: Domain, path: Union[str, Path]):
    """Write the spec of a domain as YAML."""
    save_yaml(domain_to_spec(domain), path)
