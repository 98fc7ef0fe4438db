"""Experiment harness and CLI: representation-error sweeps, matrix-vector
backward error in simulated arithmetic, value tables, and plot-ready
whitespace-delimited .dat output.

System names accepted everywhere: SLI formats ("sli2.12", "sli1.3u", ...)
and minifloats ("binary16", "bfloat16", "toy5", "b<p>e<emax>[u]").
Every experiment is deterministic given its config, including the seed;
matrix runs derive one substream per dimension so the dimension list can
be reordered or split without changing any numbers.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import arith
from .core import (
    BitWord,
    SliFormat,
    SliNumber,
    decode,
    decode_fields,
    encode,
    log_phi10,
    pack,
)
from .minifloat import FloatFormat, enumerate_floats, fl, fl_op

__all__ = [
    "ErrorRecord",
    "ExperimentConfig",
    "SLI_COLUMN",
    "repr_error_sweep",
    "matvec_backward_error",
    "emit_dat",
    "read_dat",
    "cli",
    "main",
]

# Column label used for the level-index system in emitted data files.
SLI_COLUMN = "level-index"

# Largest matrix dimension the simulated-arithmetic loops will accept.
# Beyond this the pure-Python inner loops leave desk scale.
MAX_DIM = 2000


def resolve_system(name: str) -> SliFormat | FloatFormat:
    """Parse a system name into an SLI or float format."""
    try:
        return SliFormat.from_name(name)
    except ValueError:
        pass
    try:
        return FloatFormat.from_name(name)
    except ValueError:
        raise ValueError(f"unknown system {name!r} (not an SLI or float format)") from None


@dataclass(frozen=True)
class ErrorRecord:
    """One x-axis sample: the key (input value or dimension) and one
    nonnegative error per system, math.inf flagging overflow."""

    key: float
    values: dict[str, float]

    def __post_init__(self) -> None:
        for name, v in self.values.items():
            if math.isnan(v) or (not math.isinf(v) and v < 0.0):
                raise ValueError(f"error for {name} must be >= 0 or inf, got {v}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs for the sweep and matvec experiments.

    systems are format names, resolved lazily.  The sweep walks
    sweep_min + i*sweep_step up to sweep_max inclusive.  The matvec
    experiment draws A from uniform(lo, hi) and x from uniform(0, 1),
    one independent substream per (seed, n).
    """

    systems: tuple[str, ...] = ("binary16", "sli2.12")
    sweep_min: float = 1e-2
    sweep_max: float = 8.0
    sweep_step: float = 1e-5
    dims: tuple[int, ...] = (10, 100, 1000)
    lo: float = 0.0
    hi: float = 1.0
    seed: int = 2024

    def __post_init__(self) -> None:
        if not self.systems:
            raise ValueError("need at least one system")
        if not self.sweep_step > 0.0:
            raise ValueError(f"sweep_step must be > 0, got {self.sweep_step}")
        if not self.sweep_min <= self.sweep_max:
            raise ValueError("sweep_min must not exceed sweep_max")
        if list(self.dims) != sorted(self.dims):
            raise ValueError("dims must be sorted ascending")
        for n in self.dims:
            if not 1 <= n <= MAX_DIM:
                raise ValueError(f"dimension {n} outside 1..{MAX_DIM}")
        if not self.lo <= self.hi:
            raise ValueError("lo must not exceed hi")


def _round_to_system(x: float, fmt: SliFormat | FloatFormat) -> float:
    if isinstance(fmt, SliFormat):
        return decode(encode(x, fmt))
    return fl(x, fmt)


def repr_error_sweep(cfg: ExperimentConfig) -> list[ErrorRecord]:
    """Relative representation error |round(x) - x| / |x| over a grid.

    The grid is sweep_min + i*sweep_step and must exclude zero.  SLI
    systems round through encode/decode, floats through fl; a
    non-finite rounding (float overflow) records math.inf.
    """
    systems = [(name, resolve_system(name)) for name in cfg.systems]
    if cfg.sweep_min <= 0.0 <= cfg.sweep_max:
        raise ValueError("sweep range must exclude zero (relative error)")
    steps = int(math.floor((cfg.sweep_max - cfg.sweep_min) / cfg.sweep_step + 1e-9))
    records = []
    for i in range(steps + 1):
        x = cfg.sweep_min + i * cfg.sweep_step
        values: dict[str, float] = {}
        for name, fmt in systems:
            y = _round_to_system(x, fmt)
            if math.isinf(y) or math.isnan(y):
                values[name] = math.inf
            else:
                values[name] = abs(y - x) / abs(x)
        records.append(ErrorRecord(x, values))
    return records


def _simulate_matvec(
    fmt: SliFormat | FloatFormat, a: np.ndarray, x: np.ndarray
) -> list[float]:
    """y = A x with inputs pre-rounded and every product and running-sum
    addition performed in the target arithmetic, left to right."""
    n = len(x)
    out: list[float] = []
    if isinstance(fmt, SliFormat):
        xr = [encode(float(v), fmt) for v in x]
        zero = SliNumber.zero(fmt)
        for i in range(n):
            row = a[i]
            acc = zero
            for j in range(n):
                acc = arith.add(acc, arith.mul(encode(float(row[j]), fmt), xr[j]))
            out.append(decode(acc))
    else:
        xf = [fl(float(v), fmt) for v in x]
        for i in range(n):
            row = a[i]
            acc = 0.0
            for j in range(n):
                acc = fl_op(acc, fl_op(fl(float(row[j]), fmt), xf[j], "*", fmt), "+", fmt)
            out.append(acc)
    return out


def matvec_backward_error(cfg: ExperimentConfig) -> list[ErrorRecord]:
    """Normwise relative backward error of simulated y = A x per dimension.

    For each n in cfg.dims: draw A ~ uniform(lo, hi)^(n x n) and
    x ~ uniform(0, 1)^n in binary64 from the (seed, n) substream,
    simulate the product in each system, and record
    max_i |yhat_i - y_i| / (norm_inf(A) * max_j |x_j|) against the
    binary64 reference.  Any non-finite component flags inf.
    """
    systems = [(name, resolve_system(name)) for name in cfg.systems]
    records = []
    for n in cfg.dims:
        rng = np.random.default_rng([cfg.seed, n])
        a = rng.uniform(cfg.lo, cfg.hi, size=(n, n))
        x = rng.uniform(0.0, 1.0, size=n)
        y_ref = a @ x
        denom = float(np.abs(a).sum(axis=1).max() * np.abs(x).max())
        values: dict[str, float] = {}
        for name, fmt in systems:
            y_hat = _simulate_matvec(fmt, a, x)
            if all(math.isfinite(v) for v in y_hat):
                diff = max(abs(h - float(r)) for h, r in zip(y_hat, y_ref))
                values[name] = diff / denom if denom > 0.0 else (math.inf if diff else 0.0)
            else:
                values[name] = math.inf
        records.append(ErrorRecord(float(n), values))
    return records


def _field_text(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0.0:
        return "0"
    return format(v, ".17g")


def emit_dat(records: Sequence[ErrorRecord], columns: Sequence[str], path: str | Path) -> None:
    """Write records as a space-separated table: one header line of column
    names, then key and per-system errors with 17 significant digits,
    non-finite entries as the "inf" sentinel.  Parsing the file back
    reproduces every value bit-exactly."""
    names: list[str] | None = None
    lines = [" ".join(columns)]
    for rec in records:
        keys = list(rec.values.keys())
        if names is None:
            names = keys
            if len(columns) != 1 + len(names):
                raise ValueError(
                    f"{len(columns)} column names for {1 + len(names)} columns"
                )
        elif keys != names:
            raise ValueError("inconsistent record columns")
        lines.append(" ".join([_field_text(rec.key)] + [_field_text(v) for v in rec.values.values()]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_dat(path: str | Path) -> tuple[list[str], list[list[float]]]:
    """Inverse of emit_dat: header names and rows of parsed binary64."""
    text = Path(path).read_text(encoding="ascii").splitlines()
    if not text:
        raise ValueError(f"empty data file {path}")
    header = text[0].split()
    rows = [[float(tok) for tok in line.split()] for line in text[1:] if line.strip()]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} does not match header {len(header)}")
    return header, rows


# ---------------------------------------------------------------------------
# CLI


def _sli_table_rows(fmt: SliFormat, raw: bool) -> list[tuple[BitWord, float, float]]:
    """(word, value, signed log10 of |value|) for every word of the format."""
    rows = []
    for bits in range(1 << fmt.width):
        payload = bits
        sign = 1
        if fmt.signed and payload >> (fmt.width - 1) & 1:
            sign = -1
            payload &= (1 << (fmt.width - 1)) - 1
        if payload == 0 and not raw:
            rows.append((BitWord(bits, fmt.width), 0.0, -math.inf))
            continue
        reciprocal = 1 if payload >> (fmt.level_bits + fmt.index_bits) & 1 else -1
        level = (payload >> fmt.index_bits & (fmt.max_level - 1)) + 1
        index_k = payload & (fmt.index_scale - 1)
        if not raw and reciprocal < 0 and level == 1 and index_k == 0:
            reciprocal = 1
        value = decode_fields(fmt, sign, reciprocal, level, index_k)
        lg = log_phi10(level + index_k / fmt.index_scale)
        rows.append((BitWord(bits, fmt.width), value, lg if reciprocal > 0 else -lg))
    return rows


def _cmd_table(args: argparse.Namespace) -> int:
    fmt = resolve_system(args.format)
    if isinstance(fmt, SliFormat):
        print("bits value log10")
        for word, value, lg in _sli_table_rows(fmt, args.raw):
            print(f"{word} {_field_text(value)} {_field_text(lg)}")
    else:
        print("bits value")
        for word, value in enumerate_floats(fmt):
            print(f"{word} {_field_text(value)}")
    return 0


def _print_sli_number(n: SliNumber) -> None:
    print(f"format: {n.fmt.name}")
    print(f"bits: {pack(n)}")
    print(f"sign: {'+1' if n.sign > 0 else '-1'}")
    print(f"reciprocal: {'+1' if n.reciprocal > 0 else '-1'}")
    print(f"level: {n.level}")
    print(f"index: {n.index:.15f}")
    print(f"value: {decode(n)!r}")


def _cmd_encode(args: argparse.Namespace) -> int:
    fmt = resolve_system(args.format)
    if isinstance(fmt, SliFormat):
        _print_sli_number(encode(args.value, fmt))
    else:
        print(f"format: {fmt.name}")
        print(f"value: {fl(args.value, fmt)!r}")
    return 0


def _cmd_op(args: argparse.Namespace) -> int:
    fmt = resolve_system(args.format)
    if isinstance(fmt, SliFormat):
        x = encode(args.x, fmt)
        y = encode(args.y, fmt)
        result = {
            "add": arith.add,
            "sub": arith.sub,
            "mul": arith.mul,
            "div": arith.div,
        }[args.operation](x, y)
        _print_sli_number(result)
    else:
        a = fl(args.x, fmt)
        b = fl(args.y, fmt)
        print(f"format: {fmt.name}")
        print(f"value: {fl_op(a, b, args.operation, fmt)!r}")
    return 0


def _cmd_sweep_repr(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        systems=(args.float, args.sli),
        sweep_min=args.min,
        sweep_max=args.max,
        sweep_step=args.step,
    )
    records = repr_error_sweep(cfg)
    emit_dat(records, ["x", args.float, SLI_COLUMN], args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_matvec(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        systems=(args.float, args.sli),
        dims=args.dims,
        lo=args.lo,
        hi=args.hi,
        seed=args.seed,
    )
    records = matvec_backward_error(cfg)
    emit_dat(records, ["n", args.float, SLI_COLUMN], args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _sli_name(text: str) -> str:
    try:
        return SliFormat.from_name(text).name
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _float_name(text: str) -> str:
    try:
        return FloatFormat.from_name(text).name
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _any_system(text: str) -> str:
    try:
        resolve_system(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"bad boolean {text!r}")


# Converters for config-file overrides, per subcommand and flag name.
_CONFIG_KEYS: dict[str, dict[str, Callable[[str], object]]] = {
    "sweep-repr": {
        "sli": _sli_name,
        "float": _float_name,
        "min": float,
        "max": float,
        "step": float,
        "out": str,
    },
    "matvec": {
        "sli": _sli_name,
        "float": _float_name,
        "dims": _dims,
        "lo": float,
        "hi": float,
        "seed": int,
        "out": str,
    },
}


def _apply_config(args: argparse.Namespace) -> None:
    """Overlay key=value lines from --config FILE onto parsed flags."""
    path = getattr(args, "config", None)
    if path is None:
        return
    converters = _CONFIG_KEYS[args.command]
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key = key.strip()
        conv = converters.get(key)
        if conv is None:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r} for {args.command}")
        try:
            setattr(args, key, conv(value.strip()))
        except (argparse.ArgumentTypeError, ValueError) as e:
            raise ValueError(f"{path}:{lineno}: bad value for {key}: {e}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sliarith",
        description="Level-index arithmetic tables and error experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="dump every word of a format with its value")
    p.add_argument("format", type=_any_system, help="SLI or float format name")
    p.add_argument("--raw", action="store_true",
                   help="decode raw fields, ignoring the zero convention")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("encode", help="round one value into a format")
    p.add_argument("format", type=_any_system)
    p.add_argument("value", type=float)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("op", help="one rounded arithmetic operation")
    p.add_argument("operation", choices=("add", "sub", "mul", "div"))
    p.add_argument("format", type=_any_system)
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.set_defaults(func=_cmd_op)

    p = sub.add_parser("sweep-repr", help="representation-error sweep to a .dat file")
    p.add_argument("--sli", type=_sli_name, default="sli2.12")
    p.add_argument("--float", type=_float_name, default="binary16")
    p.add_argument("--min", type=float, default=1e-2)
    p.add_argument("--max", type=float, default=8.0)
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--out", type=str, default="sweep-repr.dat")
    p.add_argument("--config", type=str, default=None,
                   help="key=value file overriding the flags above")
    p.set_defaults(func=_cmd_sweep_repr)

    p = sub.add_parser("matvec", help="matrix-vector backward error to a .dat file")
    p.add_argument("--sli", type=_sli_name, default="sli2.12")
    p.add_argument("--float", type=_float_name, default="binary16")
    p.add_argument("--dims", type=_dims, default=(10, 100, 1000))
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--out", type=str, default="matvec.dat")
    p.add_argument("--config", type=str, default=None,
                   help="key=value file overriding the flags above")
    p.set_defaults(func=_cmd_matvec)

    return parser


def cli(argv: Sequence[str] | None = None) -> int:
    """Run the command line; returns the exit code (0 ok, 2 usage, 1 domain)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        _apply_config(args)
    except (OSError, ValueError) as e:
        print(f"sliarith: config error: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as e:
        print(f"sliarith: error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(cli(sys.argv[1:]))
