import numbers
import re
from fractions import Fraction

from valcore.exceptions import UsageError, ValueOverflowError

# Values are ints or Fractions in lowest terms; integral Fractions collapse to int.
Value = int | Fraction

MAX_MAGNITUDE = 2**63 - 1

_CANONICAL = re.compile(r"^(-?(?:0|[1-9][0-9]*))(?:/([1-9][0-9]*))?$")


def as_value(x) -> Value:
    if isinstance(x, (bool, float)):
        raise UsageError(f"{x!r} is not an exact value")
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, numbers.Rational):
        return as_value(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return parse_value(x)
    raise UsageError(f"{x!r} is not an exact value")


def format_value(x: Value) -> str:
    x = as_value(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


def parse_value(text: str) -> Value:
    """Parse ``n`` or ``p/q`` written in lowest terms with q > 1."""
    m = _CANONICAL.match(text.strip())
    if m is None:
        raise UsageError(f"'{text}' is not an integer or p/q rational")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if abs(num) > MAX_MAGNITUDE or den > MAX_MAGNITUDE:
        raise ValueOverflowError(f"'{text}' does not fit in 64 bits")
    if m.group(1) == "-0":
        raise UsageError(f"'{text}' is not canonical")
    if m.group(2) is None:
        return num
    value = Fraction(num, den)
    if den == 1 or value.denominator != den:
        raise UsageError(f"'{text}' is not in lowest terms")
    return value

