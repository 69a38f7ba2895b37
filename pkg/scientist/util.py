"""Small helpers shared across the machine scientist."""
import re

from .exceptions import UsageError

_SEED_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$")


def parse_seeds(text):
    """Turn `text` ("7" or "1..10", inclusive) into a list of integer seeds."""
    match = _SEED_RANGE.match(text)
    if not match:
        raise UsageError("bad seed {!r}: expected N or A..B".format(text))
    first = int(match.group(1))
    last = int(match.group(2)) if match.group(2) is not None else first
    if last < first:
        raise UsageError("bad seed range {!r}: empty".format(text))
    if last >= 2 ** 64:
        raise UsageError("seed {} does not fit in 64 bits".format(last))
    return list(range(first, last + 1))


def format_number(value):
    """Format a real for text files so that float(format_number(x)) == x.

    Integral values are written without a fractional part.
    """
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)
