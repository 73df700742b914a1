"""
Catalogue of harmonic polynomials in x, y, z (degree <= 4), the random test
function generator and the function spec strings used on the command line.
"""

import re
from argparse import ArgumentTypeError
from typing import Dict, List, Tuple

import numpy as np

from weighted_means.general.numerical import parse_float_list
from weighted_means.harmonic.functions import (
    ComplexPowerFn,
    ConstantFn,
    CoordinateFn,
    FundamentalFn,
    HarmonicFn,
    LinearCombination,
    PolynomialFn,
)

MAX_RANDOM_DEGREE = 4

# name -> (number of variables needed, monomials over (x, y, z))
POLYNOMIALS: Dict[str, Tuple[int, Tuple]] = {
    "xy": (2, ((1, (1, 1, 0)),)),
    "xz": (3, ((1, (1, 0, 1)),)),
    "yz": (3, ((1, (0, 1, 1)),)),
    "x2-y2": (2, ((1, (2, 0, 0)), (-1, (0, 2, 0)))),
    "y2-z2": (3, ((1, (0, 2, 0)), (-1, (0, 0, 2)))),
    "2z2-x2-y2": (3, ((2, (0, 0, 2)), (-1, (2, 0, 0)), (-1, (0, 2, 0)))),
    "x3-3xy2": (2, ((1, (3, 0, 0)), (-3, (1, 2, 0)))),
    "3x2y-y3": (2, ((3, (2, 1, 0)), (-1, (0, 3, 0)))),
    "xyz": (3, ((1, (1, 1, 1)),)),
    "z(x2-y2)": (3, ((1, (2, 0, 1)), (-1, (0, 2, 1)))),
    "2z3-3zx2-3zy2": (
        3,
        ((2, (0, 0, 3)), (-3, (2, 0, 1)), (-3, (0, 2, 1))),
    ),
    "x4-6x2y2+y4": (2, ((1, (4, 0, 0)), (-6, (2, 2, 0)), (1, (0, 4, 0)))),
    "x3y-xy3": (2, ((1, (3, 1, 0)), (-1, (1, 3, 0)))),
    "z(x3-3xy2)": (3, ((1, (3, 0, 1)), (-3, (1, 2, 1)))),
}

# not harmonic: negative controls for the verifiers
CONTROLS = ("norm2",)


class FunctionSpecError(ValueError):
    """Malformed function spec string."""

    pass


def polynomial(name: str, m: int) -> PolynomialFn:
    """
    A catalogue polynomial in R^m, or the ``norm2`` control |y|^2.

    Raises
    ------
    FunctionSpecError
        If the name is unknown or needs more than m variables.
    """
    if name == "norm2":
        terms = tuple(
            (1, tuple(2 * (j == i) for j in range(m))) for i in range(m)
        )
        return PolynomialFn(m, name=name, terms=terms)
    if name not in POLYNOMIALS:
        raise FunctionSpecError(
            f"Unknown polynomial {name!r}, expected one of "
            + ", ".join(list(POLYNOMIALS) + list(CONTROLS))
        )
    n_vars, terms = POLYNOMIALS[name]
    if n_vars > m:
        raise FunctionSpecError(
            f"Polynomial {name!r} needs {n_vars} variables, m = {m}"
        )
    return PolynomialFn(m, name=name, terms=terms)


def catalogue(m: int, max_degree: int = MAX_RANDOM_DEGREE) -> List[HarmonicFn]:
    """
    Every catalogue member usable in R^m up to ``max_degree``: the constant,
    the coordinates, Re/Im z^n and the harmonic polynomials.
    """
    members: List[HarmonicFn] = [ConstantFn(m, 1.0)]
    if max_degree >= 1:
        members += [CoordinateFn(m, i) for i in range(1, m + 1)]
    for n in range(2, max_degree + 1):
        members += [ComplexPowerFn(m, n, "re"), ComplexPowerFn(m, n, "im")]
    for name, (n_vars, _) in POLYNOMIALS.items():
        if n_vars <= m:
            member = polynomial(name, m)
            if member.degree <= max_degree:
                members.append(member)
    return members


def random_harmonic(seed: int, m: int, max_degree: int) -> HarmonicFn:
    """
    Reproducible random linear combination of catalogue members, with
    coefficients uniform in [-1, 1].

    Parameters
    ----------
    seed : int
        Seed for ``numpy.random.default_rng``.
    m : int
        Dimension, 2 or 3.
    max_degree : int
        Highest polynomial degree, 0 to 4. Degree 0 gives a constant.
    """
    if m not in (2, 3):
        raise ValueError(f"Random harmonic functions need m in {{2, 3}}: {m}")
    if not 0 <= max_degree <= MAX_RANDOM_DEGREE:
        raise ValueError(
            f"max_degree must lie in 0..{MAX_RANDOM_DEGREE}: {max_degree}"
        )
    rng = np.random.default_rng(seed)
    members = catalogue(m, max_degree)
    coefficients = rng.uniform(-1.0, 1.0, size=len(members))
    label = f"random:seed={seed},deg={max_degree}"
    if len(members) == 1:
        return ConstantFn(m, float(coefficients[0]))
    return LinearCombination(m, tuple(coefficients), tuple(members), label)


_RANDOM_PATTERN = re.compile(r"^seed=(-?\d+),deg=(\d+)$")


def parse_function_spec(spec: str, m: int) -> HarmonicFn:
    """
    Build a test function from a spec string: ``const:<c>``,
    ``coord:<i>``, ``re_z:<n>``, ``im_z:<n>``, ``poly:<name>``,
    ``fund:<pole coordinates>`` or ``random:seed=<s>,deg=<d>``.

    Raises
    ------
    FunctionSpecError
        If the spec is malformed.
    """
    kind, _, argument = spec.strip().partition(":")
    argument = argument.replace(" ", "")
    try:
        if kind == "const":
            return ConstantFn(m, float(argument))
        if kind == "coord":
            return CoordinateFn(m, int(argument))
        if kind in ("re_z", "im_z"):
            return ComplexPowerFn(m, int(argument), kind[:2])
        if kind == "poly":
            return polynomial(argument, m)
        if kind == "fund":
            return FundamentalFn(m, pole=parse_float_list(argument))
        if kind == "random":
            match = _RANDOM_PATTERN.match(argument)
            if match is None:
                raise FunctionSpecError(
                    f"Expected 'random:seed=<int>,deg=<int>', got {spec!r}"
                )
            return random_harmonic(int(match[1]), m, int(match[2]))
    except FunctionSpecError:
        raise
    except (ValueError, ArgumentTypeError) as error:
        raise FunctionSpecError(f"Invalid function spec {spec!r}: {error}")
    raise FunctionSpecError(
        f"Unknown function kind {kind!r}, expected one of const, coord, "
        "re_z, im_z, poly, fund, random"
    )
