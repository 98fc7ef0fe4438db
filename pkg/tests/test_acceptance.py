"""End-to-end acceptance checks.

Each test covers one headline behavior of the package, prints a single
summary line (run pytest with -s to see them all; failures carry the
line in their report), and enforces a wall-clock budget.  Expected
values are frozen here: 5-bit tables are checked against an independent
exponential-tower recomputation plus the reference listing, rounded
results against encode of the exact binary64 result, and statistical
checks against seeded streams.

One check is expected to fail and documents two real limits of the
wide-entry matrix experiment.  With A from uniform(0, 100) and x from
uniform(0, 1), row sums sit near 25n, so binary16 cannot overflow at
any dimension this simulator runs (25n < 65504 needs n > 2620, and at
n <= 655 even the all-maximal row sum 100n stays finite); and at
n = 1000 the accumulated sli2.12 rounding drift crosses the 0.1
backward-error line, because one index quantum at zeta near 3.8 costs
about 2e-3 in relative value and a thousand-term left-to-right sum
random-walks past 0.1.  The failure message carries the measurements.
"""

import math
import time

import numpy as np
import pytest

from sliarith import arith
from sliarith.core import (
    BitWord,
    SliFormat,
    SliNumber,
    decode,
    encode,
    enumerate_values,
    log_phi10,
    magnitude_rank,
    pack,
    phi,
    psi,
    unpack,
)
from sliarith.experiments import (
    ExperimentConfig,
    cli,
    matvec_backward_error,
    repr_error_sweep,
)
from sliarith.minifloat import TOY5, fl

F212 = SliFormat(2, 12)

# Sentinels for magnitudes past binary64: checked via the log10 column.
LOG_NEG = ("log10", -1759.0, -1757.0)
LOG_POS = ("log10", 1757.0, 1759.0)

# Reference 5-bit listing: word, toy float, 1 level bit SLI, 2 level
# bit SLI (the SLI columns read raw words, ignoring the zero and
# canonical-one conventions, so all 32 rows carry magnitudes).
TABLE5 = [
    ("00000", "0", "1", "1"),
    ("00001", "0.0625", "0.8825", "0.7788"),
    ("00010", "0.125", "0.7788", "0.6065"),
    ("00011", "0.1875", "0.6873", "0.4724"),
    ("00100", "0.25", "0.6065", "0.3679"),
    ("00101", "0.3125", "0.5353", "0.2769"),
    ("00110", "0.375", "0.4724", "0.1923"),
    ("00111", "0.4375", "0.4169", "0.1204"),
    ("01000", "0.5", "0.3679", "0.06599"),
    ("01001", "0.625", "0.322", "0.02702"),
    ("01010", "0.75", "0.2769", "0.0055"),
    ("01011", "0.875", "0.2334", "2.4e-4"),
    ("01100", "1", "0.1923", "2.6e-7"),
    ("01101", "1.25", "0.1544", "8.4e-17"),
    ("01110", "1.5", "0.1204", "1.7e-79"),
    ("01111", "1.75", "0.0908", LOG_NEG),
    ("10000", "2", "1", "1"),
    ("10001", "2.5", "1.1331", "1.284"),
    ("10010", "3", "1.284", "1.6487"),
    ("10011", "3.5", "1.455", "2.117"),
    ("10100", "4", "1.6487", "2.7183"),
    ("10101", "5", "1.8682", "3.6111"),
    ("10110", "6", "2.117", "5.2003"),
    ("10111", "7", "2.3989", "8.3062"),
    ("11000", "8", "2.7183", "15.1533"),
    ("11001", "10", "3.1054", "37.0085"),
    ("11010", "12", "3.6111", "181.3313"),
    ("11011", "14", "4.2844", "4048.8237"),
    ("11100", "inf", "5.2", "3.8e6"),
    ("11101", "nan", "6.4769", "1.18e16"),
    ("11110", "nan", "8.306", "5.6387e78"),
    ("11111", "nan", "11.0108", LOG_POS),
]


def _report(name: str, failures: list[str], started: float, budget: float) -> None:
    elapsed = time.perf_counter() - started
    if elapsed > budget:
        failures.append(f"took {elapsed:.1f}s, budget {budget:.0f}s")
    status = "PASS" if not failures else "FAIL [" + "; ".join(failures) + "]"
    print(f"acceptance {name}: {status} ({elapsed:.2f}s)")
    assert not failures, f"{name}: {'; '.join(failures)}"


def _printed_tolerance(text: str) -> float:
    """One unit in the last printed digit, treating at most four of the
    literal's significant digits as meaningful (reference listings round
    or truncate at four)."""
    mantissa = text.lower().split("e")[0].replace("-", "").replace(".", "").lstrip("0")
    digits = min(4, len(mantissa))
    magnitude = math.floor(math.log10(abs(float(text))))
    return 10.0 ** (magnitude - digits + 1)


def _tower_value(word: str, level_bits: int, index_bits: int) -> float:
    """Recompute a raw unsigned SLI word by literal exponentiation."""
    bits = int(word, 2)
    recip = bits >> (level_bits + index_bits) & 1
    level = (bits >> index_bits & ((1 << level_bits) - 1)) + 1
    k = bits & ((1 << index_bits) - 1)
    v = k / (1 << index_bits)
    for _ in range(level):
        try:
            v = math.exp(v)
        except OverflowError:
            v = math.inf
    return v if recip else (0.0 if math.isinf(v) else 1.0 / v)


def _run_table(capsys, argv: list[str]) -> dict[str, list[str]]:
    assert cli(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    return {parts[0]: parts[1:] for parts in (ln.split() for ln in lines[1:])}


def test_01_five_bit_value_tables(capsys):
    t0 = time.perf_counter()
    failures: list[str] = []

    toy = _run_table(capsys, ["table", "toy5"])
    for word, toy_text, _, _ in TABLE5:
        got = toy[word][0]
        if toy_text == "nan":
            ok = got == "nan"
        elif toy_text == "inf":
            ok = got == "inf"
        else:
            ok = float(got) == float(toy_text)
        if not ok:
            failures.append(f"toy5 {word}: printed {got}, expected {toy_text}")

    for fmt_name, col, level_bits, index_bits in (
        ("sli1.3u", 2, 1, 3),
        ("sli2.2u", 3, 2, 2),
    ):
        table = _run_table(capsys, ["table", fmt_name, "--raw"])
        for row in TABLE5:
            word, want = row[0], row[col]
            value_text, log_text = table[word]
            value = float(value_text)
            tower = _tower_value(word, level_bits, index_bits)
            if math.isinf(tower) or tower == 0.0:
                if value != tower:
                    failures.append(f"{fmt_name} {word}: {value_text} vs tower {tower}")
            elif not value == pytest.approx(tower, rel=1e-12):
                failures.append(f"{fmt_name} {word}: {value_text} vs tower {tower!r}")
            if isinstance(want, tuple):
                lo, hi = want[1], want[2]
                if not lo <= float(log_text) <= hi:
                    failures.append(
                        f"{fmt_name} {word}: log10 {log_text} outside [{lo}, {hi}]"
                    )
            else:
                tol = _printed_tolerance(want)
                if not abs(value - float(want)) <= tol:
                    failures.append(
                        f"{fmt_name} {word}: {value_text} not within {tol:g} of {want}"
                    )

    _report("01 (5-bit value tables)", failures, t0, 1.0)


def test_02_pi_encode_and_square(capsys):
    t0 = time.perf_counter()
    failures: list[str] = []

    x = encode(math.pi, F212)
    if (x.sign, x.reciprocal, x.level, x.index_k) != (1, 1, 2, 554):
        failures.append(f"encode(pi) fields {(x.sign, x.reciprocal, x.level, x.index_k)}")
    if str(pack(x)) != "0101001000101010":
        failures.append(f"encode(pi) word {pack(x)}")
    if not decode(x) == pytest.approx(3.141899100868418, rel=1e-12):
        failures.append(f"decode(encode(pi)) = {decode(x)!r}")

    sq = arith.mul(x, x)
    if (sq.level, sq.index_k) != (2, 3393):
        failures.append(f"pi*pi fields {(sq.level, sq.index_k)}")
    if not decode(sq) == pytest.approx(9.870807937639510, rel=1e-12):
        failures.append(f"decode(pi*pi) = {decode(sq)!r}")

    _report("02 (pi round trip and square)", failures, t0, 1.0)


def test_03_quantization_error_bound():
    t0 = time.perf_counter()
    failures: list[str] = []

    for fmt in (SliFormat(2, 12), SliFormat(3, 11)):
        bound = 2.0 ** -(fmt.index_bits + 1) + 1e-12
        rng = np.random.default_rng([977, fmt.level_bits, fmt.index_bits])
        exponents = rng.uniform(-300.0, 300.0, size=100_000)
        bad = 0
        worst = 0.0
        for u in exponents:
            x = 10.0 ** u
            n = encode(x, fmt)
            zeta_enc = n.level + n.index_k / fmt.index_scale
            if x >= 1.0:
                target = psi(x)
            else:
                target = 1.0 + psi(-math.log(x))
            err = abs(target - zeta_enc)
            worst = max(worst, err)
            if err > bound:
                bad += 1
        if bad:
            failures.append(
                f"{fmt.name}: {bad} of 100000 encodings off by more than "
                f"{bound:g} (worst {worst:g})"
            )

    _report("03 (index quantization bound)", failures, t0, 10.0)


def test_04_rounded_ops_match_binary64_oracle():
    t0 = time.perf_counter()
    failures: list[str] = []
    ops = [
        ("add", arith.add, lambda a, b: a + b),
        ("sub", arith.sub, lambda a, b: a - b),
        ("mul", arith.mul, lambda a, b: a * b),
        ("div", arith.div, lambda a, b: a / b),
    ]
    rng = np.random.default_rng(8451296)
    for name, fn, ref in ops:
        signs = rng.choice([-1.0, 1.0], size=(10_000, 2))
        mags = 10.0 ** rng.uniform(-6.0, 6.0, size=(10_000, 2))
        bad = 0
        for (sx, sy), (mx, my) in zip(signs, mags):
            x = encode(sx * mx, F212)
            y = encode(sy * my, F212)
            got = fn(x, y)
            want = encode(ref(decode(x), decode(y)), F212)
            if got.is_zero or want.is_zero:
                if not (got.is_zero and want.is_zero):
                    bad += 1
            elif got.sign != want.sign or abs(
                magnitude_rank(got) - magnitude_rank(want)
            ) > 1:
                bad += 1
        if bad:
            failures.append(f"{name}: {bad} of 10000 results off the binary64 oracle")

    _report("04 (operations match binary64 oracle)", failures, t0, 30.0)


def test_05_closure_on_random_words():
    t0 = time.perf_counter()
    failures: list[str] = []
    ops = [
        ("add", arith.add),
        ("sub", arith.sub),
        ("mul", arith.mul),
        ("div", arith.div),
    ]
    rng = np.random.default_rng(55_0105)
    words = rng.integers(0, 1 << F212.width, size=(100_000, 2), dtype=np.uint32)
    bad = 0
    bad_zero = 0
    for wx, wy in words:
        x = unpack(BitWord(int(wx), 16), F212)
        y = unpack(BitWord(int(wy), 16), F212)
        for name, fn in ops:
            try:
                r = fn(x, y)
            except ZeroDivisionError:
                if not (name == "div" and y.is_zero):
                    bad_zero += 1
                continue
            if name == "div" and y.is_zero:
                bad_zero += 1
                continue
            if not isinstance(r, SliNumber) or math.isnan(decode(r)):
                bad += 1
    if bad:
        failures.append(f"{bad} results failed validation or decoded to NaN")
    if bad_zero:
        failures.append(f"{bad_zero} violations of the division-by-zero contract")

    _report("05 (closure on 100000 word pairs)", failures, t0, 60.0)


def test_06_range_without_overflow():
    t0 = time.perf_counter()
    failures: list[str] = []

    # Top of the 2.12 format towers far past every binary64, while the
    # tiny 1.3 format tops out finite below the toy float's max.
    if not log_phi10(4.75) > 308.0:
        failures.append(f"log_phi10(4.75) = {log_phi10(4.75)}")
    if not log_phi10(F212.max_zeta) > 1000.0:
        failures.append(f"log_phi10(max zeta) = {log_phi10(F212.max_zeta)}")
    top13 = phi(2.875)
    if not (math.isfinite(top13) and abs(top13 - 11.0108) < 5e-4 and top13 < 14.0):
        failures.append(f"phi(2.875) = {top13!r}")

    # Saturation instead of infinity: 15 overflows the toy float but
    # clamps to the finite top of sli1.3u.
    f13 = SliFormat(1, 3, signed=False)
    sat = encode(15.0, f13)
    if math.isinf(fl(15.0, TOY5)) is not True:
        failures.append("toy float did not overflow at 15")
    if (sat.level, sat.index_k) != (2, 7) or not math.isfinite(decode(sat)):
        failures.append(f"encode(15) in sli1.3u gave {sat}")
    if decode(sat) != f13.max_value:
        failures.append(f"saturated decode {decode(sat)!r} != {f13.max_value!r}")

    _report("06 (finite range, saturation not overflow)", failures, t0, 1.0)


def test_07_representation_error_sweep():
    t0 = time.perf_counter()
    failures: list[str] = []

    cfg = ExperimentConfig(
        systems=("binary16", "sli2.12"),
        sweep_min=1.0,
        sweep_max=math.e,
        sweep_step=1e-4,
    )
    records = repr_error_sweep(cfg)
    b16 = max(r.values["binary16"] for r in records)
    sli = max(r.values["sli2.12"] for r in records)
    sli_bound = 1.01 * math.e * 2.0**-13
    if not sli <= sli_bound:
        failures.append(f"sli2.12 max relative error {sli:g} above {sli_bound:g}")
    if not 2.0**-12 <= b16 <= 2.0**-11:
        failures.append(f"binary16 max relative error {b16:g} not near its unit roundoff")
    if not sli < b16:
        failures.append(f"sli2.12 ({sli:g}) not below binary16 ({b16:g}) on [1, e]")

    _report("07 (representation error sweep)", failures, t0, 10.0)


def test_08_matvec_backward_error():
    t0 = time.perf_counter()
    failures: list[str] = []

    # Wide entries: the float baseline is expected to overflow from
    # n = 100 while the level-index side stays finite and small.  With
    # uniform(0, 100) entries the expected row sum is 25n, which for
    # every n <= 2000 sits below binary16's top of 65504, so the
    # overflow half of the contrast cannot occur at these sizes.
    wide = matvec_backward_error(
        ExperimentConfig(
            systems=("binary16", "sli2.12"),
            dims=(10, 100, 500, 1000),
            lo=0.0,
            hi=100.0,
            seed=2024,
        )
    )
    for rec in wide:
        n = int(rec.key)
        b16 = rec.values["binary16"]
        sli = rec.values["sli2.12"]
        if n >= 100 and not math.isinf(b16):
            failures.append(
                f"binary16 backward error finite at n={n} ({b16:.3g}); "
                f"row sums near {25 * n} stay under 65504, overflow "
                f"needs n above {65504 // 25}"
            )
        if not (math.isfinite(sli) and sli < 0.1):
            failures.append(
                f"sli2.12 backward error at n={n} is {sli:.3g}, not under 0.1; "
                f"near the running-sum magnitude 25n one index quantum costs "
                f"about 2e-3 relative, and {n} roundings drift past the line"
            )

    # Unit entries: both systems stay finite with errors that grow
    # with n, across independent seeds.
    for seed in range(2024, 2029):
        recs = matvec_backward_error(
            ExperimentConfig(
                systems=("binary16", "sli2.12"),
                dims=(10, 100, 1000),
                lo=0.0,
                hi=1.0,
                seed=seed,
            )
        )
        for name in ("binary16", "sli2.12"):
            errs = [r.values[name] for r in recs]
            if not all(math.isfinite(e) and e >= 0.0 for e in errs):
                failures.append(f"seed {seed} {name}: non-finite errors {errs}")
                continue
            for small, big in zip(errs, errs[1:]):
                if not big >= small / 3.0:
                    failures.append(
                        f"seed {seed} {name}: error fell from {small:.3g} to {big:.3g}"
                    )

    _report("08 (matrix-vector backward error)", failures, t0, 600.0)


def test_09_exhaustive_small_formats():
    t0 = time.perf_counter()
    failures: list[str] = []
    checked = 0

    for signed in (True, False):
        for level_bits in range(1, 7):
            top_index = (10 if signed else 11) - level_bits
            for index_bits in range(1, top_index + 1):
                fmt = SliFormat(level_bits, index_bits, signed=signed)
                checked += 1
                neg_zero = 1 << (fmt.width - 1) if signed else None
                seen = set()
                for bits in range(1 << fmt.width):
                    n = unpack(BitWord(bits, fmt.width), fmt)
                    back = pack(n).bits
                    want = 0 if bits == neg_zero else bits
                    if back != want:
                        failures.append(f"{fmt.name}: word {bits:#x} -> {back:#x}")
                    seen.add(back)
                count = 2 * fmt.max_level * fmt.index_scale
                if signed:
                    count = 2 * count - 1
                if len(seen) != count:
                    failures.append(f"{fmt.name}: {len(seen)} values, expected {count}")
                if not signed:
                    values = [v for _, v in enumerate_values(fmt, raw=True)]
                    half = 1 << (fmt.width - 1)
                    for a, b in zip(values[:half], values[1:half]):
                        if not (a > b or (a == 0.0 and b == 0.0)):
                            failures.append(f"{fmt.name}: lower half not decreasing")
                            break
                    for a, b in zip(values[half:], values[half + 1 :]):
                        if not (b > a or (math.isinf(a) and math.isinf(b))):
                            failures.append(f"{fmt.name}: upper half not increasing")
                            break

    if checked != 84:
        failures.append(f"covered {checked} formats, expected 84")

    _report("09 (exhaustive 12-bit-and-under formats)", failures, t0, 30.0)
