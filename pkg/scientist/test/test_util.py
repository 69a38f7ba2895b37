"""Tests for the shared helpers."""
import pytest

from scientist.exceptions import UsageError
from scientist.util import format_number, parse_seeds


def test_single_seed():
    assert parse_seeds("7") == [7]


def test_seed_range_is_inclusive():
    assert parse_seeds("1..10") == list(range(1, 11))


@pytest.mark.parametrize("text", ["", "a", "3..1", "1...3", "-2", str(2 ** 64)])
def test_bad_seeds(text):
    with pytest.raises(UsageError):
        parse_seeds(text)


def test_format_number():
    assert format_number(1280.0) == "1280"
    assert format_number(-3) == "-3"
    assert format_number(0.5) == "0.5"
    assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2
