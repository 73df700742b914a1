import argparse
from typing import List


def is_even(num):
    """
    Returns True if the non-zero input number is even.

    Parameters
    ----------
    num : int
        Input number.

    Returns
    -------
    bool
        True if number is even, otherwise False.

    Raises
    ------
    NotImplementedError
        If the input number is zero.
    """
    if num == 0:
        raise NotImplementedError(
            "Input number is 0. Evenness of 0 is not defined by this "
            "function."
        )
    return num % 2 == 0


def check_positive_float(value, none_allowed=True):
    """
    Used in argparse to enforce strictly positive floats (radii,
    tolerances, grading ratios).

    Parameters
    ----------
    value : float or str
        Input value.

    none_allowed : bool, optional
        If False, throw an error for None values.

    Returns
    -------
    float
        Input value, if it's positive.

    Raises
    ------
    argparse.ArgumentTypeError
        If input value is invalid.
    """
    if value is None:
        if not none_allowed:
            raise argparse.ArgumentTypeError("%s is an invalid value." % value)
        return None
    try:
        fvalue = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("%s is not a number" % value)
    if not fvalue > 0:
        raise argparse.ArgumentTypeError(
            "%s is an invalid positive value" % value
        )
    return fvalue


def check_positive_int(value, none_allowed=True):
    """
    Used in argparse to enforce positive ints (node counts, sample counts).

    Parameters
    ----------
    value : int or str
        Input value.

    none_allowed : bool, optional
        If False, throw an error for None values.

    Returns
    -------
    int
        Input value, if it's positive.

    Raises
    ------
    argparse.ArgumentTypeError
        If input value is invalid.
    """
    if value is None:
        if not none_allowed:
            raise argparse.ArgumentTypeError("%s is an invalid value." % value)
        return None
    try:
        ivalue = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("%s is not an integer" % value)
    if ivalue < 1:
        raise argparse.ArgumentTypeError(
            "%s is an invalid positive value" % value
        )
    return ivalue


def parse_float_list(value: str) -> List[float]:
    """
    Parse a comma separated list of reals, e.g. ``"0.1,-0.2"``.

    Raises
    ------
    argparse.ArgumentTypeError
        If any entry is not a finite number.
    """
    try:
        values = [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "%s is not a comma separated list of numbers" % value
        )
    if not values:
        raise argparse.ArgumentTypeError("%s is empty" % value)
    if any(v != v or v in (float("inf"), float("-inf")) for v in values):
        raise argparse.ArgumentTypeError(
            "%s contains non-finite values" % value
        )
    return values
