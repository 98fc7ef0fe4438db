"""Arithmetic on SLI numbers through short exp/log sequence kernels.

The kernels never form the represented magnitudes directly (they
usually do not fit binary64).  Instead they work on ratios against the
larger operand, which live in [0, 1] by construction:

    a_j = 1 / phi(zeta_x - j)           reciprocal ladder of X,
    b_j = phi(zeta_y - j) / phi(zeta_x - j)   Y measured against X,
    c_j = phi(zeta_z - j) / phi(zeta_x - j)   the result against X,

with a seeded at the top level by a_{l-1} = exp(-f) and walked down by
a_{j-1} = exp(-1/a_j), b seeded analogously, and

    c_0 = 1 +/- b_0,    c_j = 1 + a_j * ln(c_{j-1}).

If some c_j drops below a_j then phi(zeta_z - j) = c_j / a_j < 1 and
the result level is j; otherwise after level steps the remainder
h = f + ln(c_{l-1}) equals phi(zeta_z - l) and zeta_z = l + psi(h)
(psi absorbs the carry when h lands at or above one).

Operands and results of the kernels are *generalized descriptors*:
floats w >= 0 where the described magnitude is phi(w), so w >= 1 reads
as a level-index pair and w < 1 is the magnitude itself.  That makes
small residuals, operands below one, and the multiply reduction
(shift both levels down by one, add, shift back) uniform.

Reciprocal operands reduce compositionally, e.g. for x, y both below
one, x + y = (P_x + P_y) / (P_x P_y) with P = 1/|operand|, evaluated as
unrounded descriptors and rounded once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    SliFormat,
    SliNumber,
    magnitude_rank,
    psi,
    round_index,
)

__all__ = [
    "SequenceState",
    "li_add_sub",
    "li_mul_div",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "absolute",
    "compare",
]


@dataclass
class SequenceState:
    """Trace of one kernel run, for inspection and property checks.

    a, b, c hold the sequences indexed by subscript (a[0] = 1/phi(X)).
    terminated_at is the step j where c_j < a_j ended the recursion
    early, or None when the kernel ran through all levels of X.
    """

    a: list[float] = field(default_factory=list)
    b: list[float] = field(default_factory=list)
    c: list[float] = field(default_factory=list)
    terminated_at: int | None = None


def _check_descriptor(name: str, w: float, minimum: float) -> None:
    if math.isnan(w) or math.isinf(w) or w < minimum:
        raise ValueError(f"{name} must be a finite descriptor >= {minimum}, got {w}")


def li_add_sub(
    zeta_x: float,
    zeta_y: float,
    subtract: bool = False,
    trace: SequenceState | None = None,
) -> float:
    """Magnitude add/subtract on generalized descriptors.

    Needs zeta_x >= zeta_y >= 0, i.e. the caller puts the larger
    magnitude first (phi is monotone, so descriptor order is magnitude
    order).  Returns the descriptor of phi(zeta_x) +/- phi(zeta_y);
    exact cancellation returns 0.0.
    """
    _check_descriptor("zeta_x", zeta_x, 0.0)
    _check_descriptor("zeta_y", zeta_y, 0.0)
    if zeta_x < zeta_y:
        raise ValueError(
            f"operands out of order: zeta_x={zeta_x} < zeta_y={zeta_y}"
        )
    if subtract and zeta_x == zeta_y:
        # The ladder computes b_0 = 1 only up to roundoff; equal
        # descriptors must cancel exactly, so short-circuit.
        return 0.0
    lev = int(zeta_x)
    f = zeta_x - lev

    if lev == 0:
        # Both magnitudes are raw values below one.
        v = zeta_x - zeta_y if subtract else zeta_x + zeta_y
        return psi(v) if v >= 1.0 else max(v, 0.0)

    # Reciprocal ladder of X, top level down to a_0 = 1/phi(zeta_x).
    a = [0.0] * lev
    a[lev - 1] = math.exp(-f)
    for j in range(lev - 1, 0, -1):
        a[j - 1] = math.exp(-1.0 / a[j]) if a[j] > 0.0 else 0.0

    # Ratio ladder of Y against X, down to b_0 = |Y|/|X|.
    m = int(zeta_y)
    g = zeta_y - m
    if m == 0:
        b = a[0] * g
        b_hist = [b]
    else:
        b = a[m - 1] * math.exp(g)
        b_hist = [b]
        for j in range(m - 1, 0, -1):
            d = 1.0 - b
            if d <= 0.0:
                b = 1.0
            elif a[j] <= 0.0:
                b = 0.0
            else:
                b = math.exp(-d / a[j])
            b_hist.append(b)
        b_hist.reverse()

    if trace is not None:
        trace.a = list(a)
        trace.b = b_hist
        trace.c = []
        trace.terminated_at = None

    c = 1.0 - b if subtract else 1.0 + b
    j = 0
    while True:
        if trace is not None:
            trace.c.append(c)
        if c <= 0.0:
            # The result magnitude is phi(j) on the nose (or full
            # cancellation at j = 0); roundoff cannot sit below this.
            if trace is not None:
                trace.terminated_at = j
            return float(j)
        if c < a[j]:
            # phi(zeta_z - j) = c/a_j < 1: result level is j.
            if trace is not None:
                trace.terminated_at = j
            return j + c / a[j]
        if j == lev - 1:
            break
        j += 1
        c = 1.0 + a[j] * math.log(c)

    h = f + math.log(c)
    if h < 0.0:  # roundoff below the a_{l-1} <= c guarantee
        h = 0.0
    return lev + psi(h)


def li_mul_div(
    zeta_x: float, zeta_y: float, divide: bool = False
) -> tuple[float, bool]:
    """Magnitude multiply/divide on descriptors with zeta >= 1.

    ln phi(zeta) = phi(zeta - 1), so shifting both levels down by one
    turns the product into a sum of descriptors and the quotient into a
    difference.  Returns (descriptor, flipped): the descriptor is that
    of the product, or of the quotient-or-its-reciprocal whichever is
    >= 1; flipped is True when the division came out below one, i.e.
    the caller must flip the reciprocal sign.  Equal operands divide to
    exactly (1.0, False).
    """
    _check_descriptor("zeta_x", zeta_x, 1.0)
    _check_descriptor("zeta_y", zeta_y, 1.0)
    flipped = False
    if divide:
        if zeta_x == zeta_y:
            return 1.0, False
        if zeta_x < zeta_y:
            zeta_x, zeta_y = zeta_y, zeta_x
            flipped = True
    elif zeta_x < zeta_y:
        zeta_x, zeta_y = zeta_y, zeta_x
    w = li_add_sub(zeta_x - 1.0, zeta_y - 1.0, subtract=divide)
    return w + 1.0, flipped


def _recip_chain(zeta: float) -> float:
    """1/phi(zeta) for zeta >= 1, walked down the ladder to avoid overflow."""
    lev = int(zeta)
    a = math.exp(-(zeta - lev))
    for _ in range(lev - 1):
        a = math.exp(-1.0 / a) if a > 0.0 else 0.0
    return a


def _zeta_of_recip(w: float) -> float:
    """Descriptor of 1/w for a raw magnitude 0 < w < 1.

    Stable form of psi(1/w); kernels never emit a positive raw result
    below about 2**-53, so the logarithm is safe.
    """
    return 1.0 + psi(-math.log(w))


def _kadd(z1: float, z2: float, subtract: bool = False) -> float:
    """li_add_sub with operands ordered by descriptor value."""
    if z1 >= z2:
        return li_add_sub(z1, z2, subtract=subtract)
    return li_add_sub(z2, z1, subtract=subtract)


def _materialize(fmt: SliFormat, sign: int, reciprocal: int, zeta: float) -> SliNumber:
    """Round an unrounded (sign, r, zeta) magnitude into the format."""
    if zeta <= 0.0:
        return SliNumber.zero(fmt)
    level, k = round_index(zeta, fmt)
    if reciprocal < 0 and level == 1 and k == 0:
        reciprocal = 1
    return SliNumber.of(fmt, sign, reciprocal, level, k)


def _wrap_mag(fmt: SliFormat, sign: int, w: float) -> SliNumber:
    """Materialize a generalized descriptor (magnitude phi(w), any w >= 0)."""
    if w <= 0.0:
        return SliNumber.zero(fmt)
    if w >= 1.0:
        return _materialize(fmt, sign, 1, w)
    return _materialize(fmt, sign, -1, _zeta_of_recip(w))


def _ratio(fmt: SliFormat, sign: int, num_zeta: float, den_zeta: float) -> SliNumber:
    """phi(num)/phi(den) as a rounded number, both descriptors >= 1."""
    w, flipped = li_mul_div(num_zeta, den_zeta, divide=True)
    return _materialize(fmt, sign, -1 if flipped else 1, w)


def _require_same_format(x: SliNumber, y: SliNumber) -> SliFormat:
    if x.fmt != y.fmt:
        raise ValueError(f"mixed formats: {x.fmt.name} vs {y.fmt.name}")
    return x.fmt


def _mag_add(fmt: SliFormat, sign: int, big: SliNumber, small: SliNumber) -> SliNumber:
    """|big| + |small| with |big| >= |small|, both nonzero."""
    if big.reciprocal > 0 and small.reciprocal > 0:
        return _wrap_mag(fmt, sign, li_add_sub(big.zeta, small.zeta))
    if big.reciprocal > 0:
        # small is below one: feed it as a raw level-0 descriptor.
        g = _recip_chain(small.zeta)
        return _wrap_mag(fmt, sign, li_add_sub(big.zeta, g))
    # Both below one: |x|+|y| = (P_b + P_s)/(P_b P_s) with P = 1/|.|.
    zs = _kadd(big.zeta, small.zeta)
    zm = li_mul_div(big.zeta, small.zeta)[0]
    return _ratio(fmt, sign, zs, zm)


def _mag_sub(fmt: SliFormat, sign: int, big: SliNumber, small: SliNumber) -> SliNumber:
    """|big| - |small| with |big| > |small|, both nonzero."""
    if big.reciprocal > 0 and small.reciprocal > 0:
        return _wrap_mag(fmt, sign, li_add_sub(big.zeta, small.zeta, subtract=True))
    if big.reciprocal > 0:
        g = _recip_chain(small.zeta)
        return _wrap_mag(fmt, sign, li_add_sub(big.zeta, g, subtract=True))
    # Both below one: |x|-|y| = (P_s - P_b)/(P_b P_s), always below one.
    # Note P_b < P_s because big is the larger magnitude.
    wd = _kadd(small.zeta, big.zeta, subtract=True)
    zm = li_mul_div(big.zeta, small.zeta)[0]
    if wd <= 0.0:
        return SliNumber.zero(fmt)
    if wd >= 1.0:
        return _ratio(fmt, sign, wd, zm)
    # Difference of the P's came out raw: divide through its reciprocal.
    u = _zeta_of_recip(wd)
    w = li_mul_div(zm, u)[0]
    return _materialize(fmt, sign, -1, w)


def add(x: SliNumber, y: SliNumber) -> SliNumber:
    """Rounded sum.  Exact cancellation of equal opposites gives zero."""
    fmt = _require_same_format(x, y)
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    if x.sign == y.sign:
        big, small = (x, y) if magnitude_rank(x) >= magnitude_rank(y) else (y, x)
        return _mag_add(fmt, big.sign, big, small)
    rx, ry = magnitude_rank(x), magnitude_rank(y)
    if rx == ry:
        return SliNumber.zero(fmt)
    big, small = (x, y) if rx > ry else (y, x)
    return _mag_sub(fmt, big.sign, big, small)


def sub(x: SliNumber, y: SliNumber) -> SliNumber:
    """Rounded difference, evaluated as x + (-y)."""
    return add(x, neg(y))


def mul(x: SliNumber, y: SliNumber) -> SliNumber:
    """Rounded product.  Saturates at the format boundary, never overflows."""
    fmt = _require_same_format(x, y)
    if x.is_zero or y.is_zero:
        return SliNumber.zero(fmt)
    sign = x.sign * y.sign
    if x.reciprocal == y.reciprocal:
        w = li_mul_div(x.zeta, y.zeta)[0]
        return _materialize(fmt, sign, x.reciprocal, w)
    big, small = (x, y) if x.reciprocal > 0 else (y, x)
    return _ratio(fmt, sign, big.zeta, small.zeta)


def div(x: SliNumber, y: SliNumber) -> SliNumber:
    """Rounded quotient.  Any zero divisor raises ZeroDivisionError."""
    fmt = _require_same_format(x, y)
    if y.is_zero:
        raise ZeroDivisionError("SLI division by zero")
    if x.is_zero:
        return SliNumber.zero(fmt)
    sign = x.sign * y.sign
    if x.reciprocal > 0 and y.reciprocal > 0:
        return _ratio(fmt, sign, x.zeta, y.zeta)
    if x.reciprocal < 0 and y.reciprocal < 0:
        return _ratio(fmt, sign, y.zeta, x.zeta)
    w = li_mul_div(x.zeta, y.zeta)[0]
    return _materialize(fmt, sign, 1 if x.reciprocal > 0 else -1, w)


def neg(x: SliNumber) -> SliNumber:
    """Sign flip.  Zero stays zero; unsigned formats reject nonzero input."""
    if x.is_zero:
        return x
    if not x.fmt.signed:
        raise ValueError(f"cannot negate in unsigned {x.fmt.name}")
    return SliNumber(x.fmt, False, -x.sign, x.reciprocal, x.level, x.index_k)


def absolute(x: SliNumber) -> SliNumber:
    """Magnitude of x, same representation with the sign cleared."""
    if x.is_zero or x.sign > 0:
        return x
    return SliNumber(x.fmt, False, 1, x.reciprocal, x.level, x.index_k)


def compare(x: SliNumber, y: SliNumber) -> int:
    """Total order on represented values: -1, 0, or +1.

    Exact: works on the discrete magnitude ladder, so values whose
    binary64 decodings both overflow or both underflow still compare
    correctly.
    """
    _require_same_format(x, y)

    def key(n: SliNumber) -> int:
        if n.is_zero:
            return 0
        return n.sign * (magnitude_rank(n) + 1)

    kx, ky = key(x), key(y)
    return (kx > ky) - (kx < ky)
