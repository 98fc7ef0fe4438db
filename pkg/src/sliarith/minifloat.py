"""Parametric binary minifloat baseline: IEEE-style round-to-nearest-even.

A format is (precision, e_max, signed): precision counts significand
bits including the implicit leading one, exponents of normal numbers
run from e_min = 1 - e_max to e_max, and values below 2**e_min fall
into the subnormal range with a fixed quantum.  Unlike the level-index
system these formats do overflow, to a genuine infinity, and carry
NaNs; that contrast is the point of the baseline.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .core import BitWord

__all__ = [
    "FloatFormat",
    "fl",
    "fl_op",
    "enumerate_floats",
    "TOY5",
    "BINARY16",
    "BFLOAT16",
]

_NAME_RE = re.compile(r"^b([1-9][0-9]*)e([1-9][0-9]*)(u?)$")


@dataclass(frozen=True, slots=True)
class FloatFormat:
    """Binary floating-point format with p significand bits and |e| <= e_max."""

    precision: int
    e_max: int
    signed: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.precision <= 53:
            raise ValueError(f"precision must be in 1..53, got {self.precision}")
        if not 1 <= self.e_max <= 4096:
            raise ValueError(f"e_max must be in 1..4096, got {self.e_max}")

    @classmethod
    def from_name(cls, name: str) -> "FloatFormat":
        key = name.strip()
        if key == "binary16":
            return cls(11, 15)
        if key == "bfloat16":
            return cls(8, 127)
        if key == "toy5":
            return cls(3, 3, signed=False)
        m = _NAME_RE.match(key)
        if m is None:
            raise ValueError(f"not a float format name: {name!r}")
        return cls(int(m.group(1)), int(m.group(2)), signed=m.group(3) != "u")

    @property
    def name(self) -> str:
        if self == FloatFormat(11, 15):
            return "binary16"
        if self == FloatFormat(8, 127):
            return "bfloat16"
        if self == FloatFormat(3, 3, signed=False):
            return "toy5"
        suffix = "" if self.signed else "u"
        return f"b{self.precision}e{self.e_max}{suffix}"

    @property
    def e_min(self) -> int:
        return 1 - self.e_max

    @property
    def max_finite(self) -> float:
        return (2.0 - 2.0 ** (1 - self.precision)) * 2.0 ** self.e_max

    @property
    def min_normal(self) -> float:
        return 2.0 ** self.e_min

    @property
    def exponent_bits(self) -> int:
        """Width of the IEEE exponent field; needs e_max = 2**(w-1) - 1."""
        w = (self.e_max + 1).bit_length()
        if (1 << (w - 1)) != self.e_max + 1:
            raise ValueError(
                f"{self.name} has no IEEE-shaped exponent field (e_max={self.e_max})"
            )
        return w

    @property
    def width(self) -> int:
        """Total encoded bits: sign + exponent field + trailing significand."""
        return (1 if self.signed else 0) + self.exponent_bits + (self.precision - 1)

    def __str__(self) -> str:
        return self.name


def fl(value: float, fmt: FloatFormat) -> float:
    """Round a binary64 value to the format, nearest with ties to even.

    Overflows to a signed infinity at the usual IEEE boundary
    (2 - 2**-p) * 2**e_max; underflows through the subnormal range to
    zero.  NaN and infinity pass through.  Negative values need a
    signed format.
    """
    if math.isnan(value):
        return value
    if value < 0.0 and not fmt.signed:
        raise ValueError(f"cannot round negative value into unsigned {fmt.name}")
    if math.isinf(value) or value == 0.0:
        return value
    a = abs(value)
    if a >= (2.0 - 2.0 ** -fmt.precision) * 2.0 ** fmt.e_max:
        return math.copysign(math.inf, value)
    # a = m * 2**e with m in [1, 2); quantize at 2**(e - p + 1), or at the
    # fixed subnormal quantum once e drops below e_min.  The scaled value
    # is below 2**p <= 2**53, so ldexp and round() are exact and the tie
    # rule is genuinely even.
    e = math.frexp(a)[1] - 1
    shift = max(e, fmt.e_min) - (fmt.precision - 1)
    k = round(math.ldexp(a, -shift))
    return math.copysign(math.ldexp(float(k), shift), value)


_OP_ALIASES = {
    "+": "+", "add": "+",
    "-": "-", "sub": "-",
    "*": "*", "x": "*", "mul": "*",
    "/": "/", "div": "/",
}


def fl_op(a: float, b: float, op: str, fmt: FloatFormat) -> float:
    """One correctly rounded operation: fl(a op b).

    Operands are taken as given (round them first if they came from
    outside the format).  The binary64 intermediate is exact or
    irrelevant at these precisions, so the single final rounding makes
    the result correctly rounded.  Division follows IEEE: x/0 is a
    signed infinity and 0/0 is NaN.
    """
    symbol = _OP_ALIASES.get(op)
    if symbol is None:
        raise ValueError(f"unknown operation {op!r}")
    if symbol == "+":
        r = a + b
    elif symbol == "-":
        r = a - b
    elif symbol == "*":
        r = a * b
    else:
        try:
            r = a / b
        except ZeroDivisionError:
            if a == 0.0 or math.isnan(a):
                r = math.nan
            else:
                r = math.copysign(math.inf, a) * math.copysign(1.0, b)
    return fl(r, fmt)


def enumerate_floats(fmt: FloatFormat) -> list[tuple[BitWord, float]]:
    """All words of the IEEE-style encoding, in raw word order.

    Layout MSB first: sign (if signed) | exponent field | trailing
    significand.  All-ones exponent encodes infinity (zero trailing
    bits) or NaN.  Requires an IEEE-shaped e_max and at most 24 bits.
    """
    w = fmt.exponent_bits
    width = fmt.width
    if width > 24:
        raise ValueError(f"refusing to enumerate {width}-bit format {fmt.name}")
    p = fmt.precision
    bias = fmt.e_max
    t_bits = p - 1
    out: list[tuple[BitWord, float]] = []
    for bits in range(1 << width):
        payload = bits
        sign = 1.0
        if fmt.signed and payload >> (width - 1) & 1:
            sign = -1.0
            payload &= (1 << (width - 1)) - 1
        e_field = payload >> t_bits & ((1 << w) - 1)
        t = payload & ((1 << t_bits) - 1)
        if e_field == (1 << w) - 1:
            v = math.inf if t == 0 else math.nan
        elif e_field == 0:
            v = math.ldexp(t, fmt.e_min - t_bits)
        else:
            v = math.ldexp((1 << t_bits) + t, e_field - bias - t_bits)
        out.append((BitWord(bits, width), sign * v))
    return out


TOY5 = FloatFormat(3, 3, signed=False)
BINARY16 = FloatFormat(11, 15)
BFLOAT16 = FloatFormat(8, 127)
