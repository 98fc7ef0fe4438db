"""Symmetric level-index formats, the scalar codec, and rounding.

A symmetric level-index (SLI) number represents x as

    x = s(x) * phi(zeta) ** r(x),      zeta = l + f,

where l >= 1 is the integer level, f in [0, 1) is the index, s(x) is the
sign, and the reciprocal bit r(x) is +1 when |x| >= 1 and -1 when
0 < |x| < 1.  The generalized exponential phi and its inverse psi are

    phi(z) = z               for 0 <= z < 1,
    phi(z) = exp(phi(z - 1)) otherwise,

    psi(v) = v               for 0 <= v < 1,
    psi(v) = 1 + psi(ln v)   otherwise.

Because magnitudes below one are stored through their reciprocal, a
single table of zeta values covers both halves of the axis and the
system is closed under inversion.  There are no infinities and no NaNs:
results beyond the largest representable zeta saturate.

A format "sli<p_l>.<p_i>" packs, from the most significant bit down:
an optional sign bit (0 = +), the reciprocal bit (1 means r = +1),
the level minus one in p_l bits, and the index scaled by 2**p_i in
p_i bits.  The all-zeros word is zero by convention.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "SliFormat",
    "SliNumber",
    "BitWord",
    "phi",
    "psi",
    "log_phi10",
    "round_index",
    "encode",
    "decode",
    "decode_fields",
    "pack",
    "unpack",
    "enumerate_values",
    "magnitude_rank",
    "next_up",
    "spacing",
]

# math.exp overflows binary64 just above this argument.
_EXP_MAX_ARG = 709.782712893384

# psi(x) of the largest finite binary64 is about 4.97; anything at level 6
# or deeper is far beyond binary64 either way.
_PSI_MAX_LEVELS = 64


def phi(zeta: float) -> float:
    """Generalized exponential: phi(z) = z on [0, 1), else exp(phi(z - 1)).

    Defined for z >= 0.  Returns math.inf once the tower overflows
    binary64; phi itself is finite for every finite argument.
    """
    if math.isnan(zeta) or zeta < 0.0:
        raise ValueError(f"phi is defined for zeta >= 0, got {zeta}")
    levels = 0
    while zeta >= 1.0:
        zeta -= 1.0
        levels += 1
    v = zeta
    for _ in range(levels):
        if v > _EXP_MAX_ARG:
            return math.inf
        v = math.exp(v)
    return v


def psi(value: float) -> float:
    """Inverse of phi: psi(v) = v on [0, 1), else 1 + psi(ln v).

    Defined for v >= 0 and finite.  psi(1) = 1 (level 1, index 0).
    """
    if math.isnan(value) or value < 0.0 or math.isinf(value):
        raise ValueError(f"psi needs a finite value >= 0, got {value}")
    level = 0.0
    while value >= 1.0:
        value = math.log(value)
        level += 1.0
        if level > _PSI_MAX_LEVELS:  # impossible for binary64 input
            raise ValueError("psi failed to converge")
    return level + value


def log_phi10(zeta: float) -> float:
    """Base-10 logarithm of phi(zeta), usable far beyond binary64 range.

    Peels exponentiations while the running value stays a safe exp
    argument, then converts to a decimal exponent and applies any
    remaining levels as powers of ten.  Returns -inf for zeta = 0 and
    math.inf once even the decimal exponent leaves binary64.
    """
    if math.isnan(zeta) or zeta < 0.0:
        raise ValueError(f"log_phi10 is defined for zeta >= 0, got {zeta}")
    levels = 0
    while zeta >= 1.0:
        zeta -= 1.0
        levels += 1
    v = zeta
    while levels > 0 and v <= _EXP_MAX_ARG:
        v = math.exp(v)
        levels -= 1
    if levels == 0:
        if v == 0.0:
            return -math.inf
        return math.log10(v)
    # v is a natural-log exponent too large to exponentiate directly.
    lg = v / math.log(10.0)
    for _ in range(levels - 1):
        if lg > 308.0:
            return math.inf
        lg = 10.0 ** lg
    return lg


_NAME_RE = re.compile(r"^sli([1-9][0-9]*)\.([1-9][0-9]*)(u?)$")


@dataclass(frozen=True, slots=True)
class SliFormat:
    """An SLI bit format: level bits, index bits, and a sign flag.

    The canonical name is "sli<level_bits>.<index_bits>" with a "u"
    suffix for unsigned formats, e.g. "sli2.12" or "sli1.3u".
    """

    level_bits: int = 2
    index_bits: int = 12
    signed: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.level_bits <= 6:
            raise ValueError(f"level_bits must be in 1..6, got {self.level_bits}")
        if not 1 <= self.index_bits <= 52:
            raise ValueError(f"index_bits must be in 1..52, got {self.index_bits}")

    @classmethod
    def from_name(cls, name: str) -> "SliFormat":
        m = _NAME_RE.match(name.strip())
        if m is None:
            raise ValueError(f"not an SLI format name: {name!r}")
        return cls(int(m.group(1)), int(m.group(2)), signed=m.group(3) != "u")

    @property
    def name(self) -> str:
        suffix = "" if self.signed else "u"
        return f"sli{self.level_bits}.{self.index_bits}{suffix}"

    @property
    def width(self) -> int:
        """Total bits in a packed word."""
        return (1 if self.signed else 0) + 1 + self.level_bits + self.index_bits

    @property
    def max_level(self) -> int:
        return 1 << self.level_bits

    @property
    def index_scale(self) -> int:
        """Denominator of representable indices, 2**index_bits."""
        return 1 << self.index_bits

    @property
    def max_zeta(self) -> float:
        """Largest representable zeta: max_level + (scale - 1)/scale."""
        return self.max_level + (self.index_scale - 1) / self.index_scale

    @property
    def max_value(self) -> float:
        """Largest representable magnitude as a binary64 (may be inf)."""
        return phi(self.max_zeta)

    @property
    def min_value(self) -> float:
        """Smallest positive representable magnitude (may underflow to 0)."""
        mv = self.max_value
        return 0.0 if math.isinf(mv) else 1.0 / mv

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class SliNumber:
    """One representable SLI value: sign, reciprocal flag, level, index.

    index_k is the integer numerator of the index, so the index proper is
    index_k / fmt.index_scale and zeta = level + index.  Zero is carried
    as an explicit flag with neutral fields (+1, +1, level 1, k 0).
    Construction validates ranges; the non-canonical spelling of one
    (r = -1, level 1, index 0) is rejected, use SliNumber.of() to build
    values from raw fields with canonicalization applied.
    """

    fmt: SliFormat
    is_zero: bool
    sign: int
    reciprocal: int
    level: int
    index_k: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1) or self.reciprocal not in (1, -1):
            raise ValueError("sign and reciprocal must be +1 or -1")
        if not self.fmt.signed and self.sign < 0:
            raise ValueError(f"{self.fmt.name} is unsigned, sign must be +1")
        if self.is_zero:
            if (self.sign, self.reciprocal, self.level, self.index_k) != (1, 1, 1, 0):
                raise ValueError("zero must carry neutral fields")
            return
        if not 1 <= self.level <= self.fmt.max_level:
            raise ValueError(
                f"level {self.level} outside 1..{self.fmt.max_level} for {self.fmt.name}"
            )
        if not 0 <= self.index_k < self.fmt.index_scale:
            raise ValueError(
                f"index numerator {self.index_k} outside 0..{self.fmt.index_scale - 1}"
            )
        if self.reciprocal < 0 and self.level == 1 and self.index_k == 0:
            raise ValueError(
                "non-canonical spelling of one (r=-1, zeta=1); use SliNumber.of"
            )

    @classmethod
    def zero(cls, fmt: SliFormat) -> "SliNumber":
        return cls(fmt, True, 1, 1, 1, 0)

    @classmethod
    def one(cls, fmt: SliFormat, sign: int = 1) -> "SliNumber":
        return cls(fmt, False, sign, 1, 1, 0)

    @classmethod
    def of(
        cls, fmt: SliFormat, sign: int, reciprocal: int, level: int, index_k: int
    ) -> "SliNumber":
        """Build a nonzero value, folding 1/1 onto the canonical one."""
        if reciprocal < 0 and level == 1 and index_k == 0:
            reciprocal = 1
        return cls(fmt, False, sign, reciprocal, level, index_k)

    @property
    def index(self) -> float:
        """Fractional index f = index_k / 2**index_bits, exact in binary64."""
        return self.index_k / self.fmt.index_scale

    @property
    def zeta(self) -> float:
        """Level-index sum l + f.  Exact while index_bits <= 52."""
        return self.level + self.index

    def __float__(self) -> float:
        return decode(self)

    def __neg__(self) -> "SliNumber":
        from . import arith

        return arith.neg(self)

    def __abs__(self) -> "SliNumber":
        from . import arith

        return arith.absolute(self)

    def __add__(self, other: "SliNumber") -> "SliNumber":
        from . import arith

        return arith.add(self, other)

    def __sub__(self, other: "SliNumber") -> "SliNumber":
        from . import arith

        return arith.sub(self, other)

    def __mul__(self, other: "SliNumber") -> "SliNumber":
        from . import arith

        return arith.mul(self, other)

    def __truediv__(self, other: "SliNumber") -> "SliNumber":
        from . import arith

        return arith.div(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return f"0 [{self.fmt.name}]"
        s = "-" if self.sign < 0 else ""
        r = "+1" if self.reciprocal > 0 else "-1"
        return (
            f"{s}phi({self.level}+{self.index_k}/{self.fmt.index_scale})^{r}"
            f" [{self.fmt.name}]"
        )


@dataclass(frozen=True, slots=True)
class BitWord:
    """A fixed-width little bundle of bits, MSB first in the string form."""

    bits: int
    width: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= 64:
            raise ValueError(f"width must be in 1..64, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits 0x{self.bits:x} do not fit in {self.width} bits")

    @classmethod
    def from_string(cls, text: str) -> "BitWord":
        text = text.strip()
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2), len(text))

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")


def round_index(zeta: float, fmt: SliFormat) -> tuple[int, int]:
    """Round a nonnegative zeta to (level, index numerator), ties away.

    zeta below 1 is treated as level 1 with the raw value as index
    (callers pass zeta >= 1 in normal use; encode maps magnitudes below
    one through the reciprocal first).  A rounded index of 1.0 carries
    into the next level.  Rounding past the top of the format saturates
    at the largest representable (level, index) pair instead of
    overflowing; there is no infinity to overflow to.
    """
    if math.isnan(zeta) or zeta < 0.0:
        raise ValueError(f"round_index needs zeta >= 0, got {zeta}")
    scale = fmt.index_scale
    if math.isinf(zeta) or zeta >= fmt.max_level + 1:
        return fmt.max_level, scale - 1
    level = int(zeta)
    frac = zeta - level
    if level < 1:
        level, frac = 1, zeta
    # Scaled index, rounded half away from zero.  The tie test compares
    # the exact fractional part, not floor(t + 0.5), which misrounds
    # values like 0.49999999999999994 in binary64.
    t = frac * scale
    k = int(t)
    if t - k >= 0.5:
        k += 1
    if k == scale:
        k = 0
        level += 1
    if level > fmt.max_level:
        return fmt.max_level, scale - 1
    return level, k


def encode(value: float, fmt: SliFormat | None = None) -> SliNumber:
    """Round a binary64 value to the nearest representable SLI number.

    Magnitudes below one are encoded through psi of the reciprocal with
    r = -1.  Signed zero collapses to the single zero; negative values
    need a signed format.  Infinities and NaNs are rejected: the target
    system has neither.
    """
    if fmt is None:
        fmt = SliFormat()
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"cannot encode non-finite value {value}")
    if value == 0.0:
        return SliNumber.zero(fmt)
    sign = 1 if value > 0.0 else -1
    if sign < 0 and not fmt.signed:
        raise ValueError(f"cannot encode negative value in unsigned {fmt.name}")
    a = abs(value)
    if a >= 1.0:
        reciprocal = 1
        zeta = psi(a)
    else:
        reciprocal = -1
        # psi(1/a) without forming 1/a, which overflows for subnormal a.
        zeta = 1.0 + psi(-math.log(a))
    level, k = round_index(zeta, fmt)
    if reciprocal < 0 and level == 1 and k == 0:
        # Rounded up to exactly one: canonical spelling has r = +1.
        reciprocal = 1
    return SliNumber.of(fmt, sign, reciprocal, level, k)


def decode(num: SliNumber) -> float:
    """Nearest binary64 to the represented value.

    Exact only while phi(zeta) fits binary64; huge magnitudes decode to
    inf and their reciprocals to 0.0, which is a limitation of the
    output type, not of the representation.
    """
    if num.is_zero:
        return 0.0
    mag = phi(num.zeta)
    if num.reciprocal < 0:
        mag = 0.0 if math.isinf(mag) else 1.0 / mag
    return num.sign * mag


def decode_fields(fmt: SliFormat, sign: int, reciprocal: int, level: int, index_k: int) -> float:
    """Decode raw fields without canonicalization or zero convention.

    Used for raw codec views where the all-zeros word means
    phi(1)^{+1} = 1 rather than zero.
    """
    zeta = level + index_k / fmt.index_scale
    mag = phi(zeta)
    if reciprocal < 0:
        mag = 0.0 if math.isinf(mag) else 1.0 / mag
    return sign * mag


def pack(num: SliNumber) -> BitWord:
    """Pack into sign | reciprocal | level-1 | index bits (MSB first)."""
    fmt = num.fmt
    if num.is_zero:
        return BitWord(0, fmt.width)
    bits = (num.level - 1) << fmt.index_bits | num.index_k
    if num.reciprocal > 0:
        bits |= 1 << (fmt.level_bits + fmt.index_bits)
    if fmt.signed and num.sign < 0:
        bits |= 1 << (fmt.width - 1)
    return BitWord(bits, fmt.width)


def unpack(word: BitWord, fmt: SliFormat) -> SliNumber:
    """Inverse of pack.

    The all-zeros payload is zero regardless of the sign bit, so the
    negative-zero word of a signed format folds onto plain zero.
    """
    if word.width != fmt.width:
        raise ValueError(f"word width {word.width} does not match {fmt.name} ({fmt.width})")
    bits = word.bits
    sign = 1
    if fmt.signed:
        if bits >> (fmt.width - 1) & 1:
            sign = -1
        bits &= (1 << (fmt.width - 1)) - 1
    if bits == 0:
        return SliNumber.zero(fmt)
    reciprocal = 1 if bits >> (fmt.level_bits + fmt.index_bits) & 1 else -1
    level = (bits >> fmt.index_bits & (fmt.max_level - 1)) + 1
    index_k = bits & (fmt.index_scale - 1)
    return SliNumber.of(fmt, sign, reciprocal, level, index_k)


def enumerate_values(fmt: SliFormat, raw: bool = False) -> list[tuple[BitWord, float]]:
    """All 2**width words with decoded values, in raw word order.

    With raw=True the zero convention and canonicalization are ignored
    and every word decodes through its literal fields (the all-zeros
    word then reads as one).  Capped at 24-bit formats; wider tables
    have no business being materialized.
    """
    if fmt.width > 24:
        raise ValueError(f"refusing to enumerate {fmt.width}-bit format {fmt.name}")
    out: list[tuple[BitWord, float]] = []
    for bits in range(1 << fmt.width):
        word = BitWord(bits, fmt.width)
        if raw:
            payload = bits
            sign = 1
            if fmt.signed:
                if payload >> (fmt.width - 1) & 1:
                    sign = -1
                payload &= (1 << (fmt.width - 1)) - 1
            reciprocal = 1 if payload >> (fmt.level_bits + fmt.index_bits) & 1 else -1
            level = (payload >> fmt.index_bits & (fmt.max_level - 1)) + 1
            index_k = payload & (fmt.index_scale - 1)
            out.append((word, decode_fields(fmt, sign, reciprocal, level, index_k)))
        else:
            out.append((word, decode(unpack(word, fmt))))
    return out


def magnitude_rank(num: SliNumber) -> int:
    """Position of |num| in the ascending ladder of positive magnitudes.

    Rank 0 is the smallest positive magnitude (r = -1 at the top zeta)
    and the canonical one sits exactly in the middle.  Adjacent
    representable magnitudes differ by one rank, so rank differences
    measure distance in index ULPs across level and reciprocal
    boundaries.  Zero has no rank.
    """
    if num.is_zero:
        raise ValueError("zero has no magnitude rank")
    fmt = num.fmt
    m = (num.level - 1) << fmt.index_bits | num.index_k
    half = 1 << (fmt.level_bits + fmt.index_bits)
    if num.reciprocal > 0:
        return half - 1 + m
    return half - 1 - m


def _from_rank(fmt: SliFormat, sign: int, rank: int) -> SliNumber:
    half = 1 << (fmt.level_bits + fmt.index_bits)
    if not 0 <= rank <= 2 * (half - 1):
        raise ValueError(f"rank {rank} outside the {fmt.name} ladder")
    if rank >= half - 1:
        reciprocal, m = 1, rank - (half - 1)
    else:
        reciprocal, m = -1, half - 1 - rank
    level = (m >> fmt.index_bits) + 1
    index_k = m & (fmt.index_scale - 1)
    return SliNumber.of(fmt, sign, reciprocal, level, index_k)


def next_up(num: SliNumber) -> SliNumber:
    """Smallest representable value strictly greater than num.

    Raises ValueError at the positive top of the range; there is no
    infinity to step onto.
    """
    fmt = num.fmt
    top = 2 * ((1 << (fmt.level_bits + fmt.index_bits)) - 1)
    if num.is_zero:
        return _from_rank(fmt, 1, 0)
    if num.sign > 0:
        rank = magnitude_rank(num)
        if rank == top:
            raise ValueError(f"next_up past the top of {fmt.name}")
        return _from_rank(fmt, 1, rank + 1)
    rank = magnitude_rank(num)
    if rank == 0:
        return SliNumber.zero(fmt)
    return _from_rank(fmt, -1, rank - 1)


def spacing(num: SliNumber) -> float:
    """Gap to the next value up, as a binary64 (inf if decode overflows)."""
    return decode(next_up(num)) - decode(num)
