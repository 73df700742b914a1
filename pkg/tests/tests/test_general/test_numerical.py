import random
from argparse import ArgumentTypeError
from random import randint

import pytest

from weighted_means.general import numerical


def test_is_even():
    even_number = random.randrange(2, 1000, 2)
    odd_number = random.randrange(1, 1001, 2)
    with pytest.raises(NotImplementedError):
        assert numerical.is_even(0)
    assert numerical.is_even(even_number)
    assert not numerical.is_even(odd_number)


def test_check_positive_float():
    pos_val = randint(1, 1000) / 100
    neg_val = -randint(1, 1000) / 100

    assert pos_val == numerical.check_positive_float(pos_val)
    assert numerical.check_positive_float("0.25") == 0.25

    with pytest.raises(ArgumentTypeError):
        assert numerical.check_positive_float(neg_val)

    assert numerical.check_positive_float(None) is None

    with pytest.raises(ArgumentTypeError):
        assert numerical.check_positive_float(None, none_allowed=False)

    # radii and tolerances must be strictly positive
    with pytest.raises(ArgumentTypeError):
        numerical.check_positive_float(0)

    with pytest.raises(ArgumentTypeError):
        numerical.check_positive_float("nan")

    with pytest.raises(ArgumentTypeError):
        numerical.check_positive_float("one")


def test_check_positive_int():
    pos_val = randint(1, 1000)
    neg_val = -randint(1, 1000)

    assert pos_val == numerical.check_positive_int(pos_val)

    with pytest.raises(ArgumentTypeError):
        assert numerical.check_positive_int(neg_val)

    assert numerical.check_positive_int(None) is None

    with pytest.raises(ArgumentTypeError):
        assert numerical.check_positive_int(None, none_allowed=False)

    with pytest.raises(ArgumentTypeError):
        numerical.check_positive_int(0)

    with pytest.raises(ArgumentTypeError):
        numerical.check_positive_int("1.5")


@pytest.mark.parametrize(
    "value, expected",
    [
        pytest.param("0.1,-0.2", [0.1, -0.2], id="pair"),
        pytest.param("1", [1.0], id="single"),
        pytest.param(" 1, 2 ,3 ", [1.0, 2.0, 3.0], id="spaces"),
        pytest.param("0,0,", [0.0, 0.0], id="trailing comma"),
    ],
)
def test_parse_float_list(value, expected):
    assert numerical.parse_float_list(value) == expected


@pytest.mark.parametrize("value", ["", "1,a", "inf,0", "0,nan"])
def test_parse_float_list_errors(value):
    with pytest.raises(ArgumentTypeError):
        numerical.parse_float_list(value)
