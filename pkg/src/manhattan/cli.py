"""Command-line front end for the Manhattan sampling pipeline.

Exit codes: 0 ok, 2 usage error, 3 format error, 4 numerical failure.
Set MANHATTAN_LOG=quiet|info|debug to control verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import oracle  # noqa: F401  (kept importable for scripted use)
from .core import Collection, ManhattanParams, density, fundamental_cell_count
from .errors import (
    DomainError,
    DimensionError,
    FormatError,
    ManhattanError,
    NumericalFailureError,
)
from .freq import AtomSpec, atom_volume, manhattan_region_volume
from .grid import Grid, read_mht1, read_pgm, write_mht1, write_pgm
from .reconstruct import bandlimit, reconstruct, spectrum_report
from .sampler import extract_samples, read_mhs1, write_mhs1

log = logging.getLogger("manhattan")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_NUMERICAL = 4


def _setup_logging() -> None:
    level_name = os.environ.get("MANHATTAN_LOG", "info").lower()
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        level_name, logging.INFO
    )
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from exc


def _parse_lambdas(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(tok) for tok in text.split(","))
    except ValueError as exc:
        raise DomainError(f"expected comma-separated rationals, got {text!r}") from exc


def _params_from_args(args, T: tuple[int, ...] | None) -> ManhattanParams:
    k = _parse_ints(args.k)
    lam = _parse_lambdas(args.lam)
    d = args.dims if args.dims is not None else len(k)
    return ManhattanParams(d=d, lam=lam, k=k, T=T)


def _collection_from_args(args, params: ManhattanParams) -> Collection:
    return Collection.from_string(params, args.collection)


def _file_format(path: str, override: str | None) -> str:
    if override:
        return override
    return "pgm" if Path(path).suffix.lower() == ".pgm" else "mht1"


def _read_grid(path: str, fmt: str | None) -> Grid:
    kind = _file_format(path, fmt)
    with open(path, "rb") as fh:
        return read_pgm(fh) if kind == "pgm" else read_mht1(fh)


def _write_grid(path: str, g: Grid, fmt: str | None) -> None:
    kind = _file_format(path, fmt)
    with open(path, "wb") as fh:
        if kind == "pgm":
            write_pgm(fh, g)
        else:
            write_mht1(fh, g)


def cmd_info(args) -> int:
    params = _params_from_args(args, None)
    collection = _collection_from_args(args, params)
    closure = collection.closure()
    minimal = collection.minimal()
    rho = density(collection)
    volume = manhattan_region_volume(collection)
    print(f"collection: {collection}")
    print(f"closure ({len(closure.members)}): {closure}")
    print(f"minimal: {minimal}")
    print(f"density: {rho} = {float(rho):.6f} samples per unit volume")
    print(f"samples per fundamental cell: {fundamental_cell_count(collection)}")
    for b in closure.sorted_members():
        print(f"  atom {b}: volume {atom_volume(AtomSpec(b, params))}")
    status = "holds" if volume == rho else "VIOLATED"
    print(f"landau identity (region volume == density): {status} ({volume})")
    return EXIT_OK if volume == rho else EXIT_NUMERICAL


def cmd_bandlimit(args) -> int:
    image = _read_grid(args.input, args.format)
    params = _params_from_args(args, tuple(image.extents))
    collection = _collection_from_args(args, params)
    _write_grid(args.output, bandlimit(image, collection), args.format)
    log.info("bandlimited %s -> %s", args.input, args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    image = _read_grid(args.input, args.format)
    params = _params_from_args(args, tuple(image.extents))
    collection = _collection_from_args(args, params)
    ss = extract_samples(image, collection)
    with open(args.samples, "w") as fh:
        write_mhs1(fh, ss)
    log.info("wrote %d samples to %s", len(ss), args.samples)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    with open(args.samples) as fh:
        ss = read_mhs1(fh)
    result = reconstruct(ss)
    _write_grid(args.output, result, args.format)
    log.info("reconstructed %s -> %s", args.samples, args.output)
    if args.reference:
        ref = _read_grid(args.reference, args.format)
        scale = max(np.abs(ref.data.real).max(), 1e-30)
        err = np.abs(result.data.real - ref.data.real).max() / scale
        ok = err <= 1e-9
        print(f"{'PASS' if ok else 'FAIL'} relative max error {err:.3e}")
        return EXIT_OK if ok else EXIT_NUMERICAL
    return EXIT_OK


def cmd_spectrum(args) -> int:
    image = _read_grid(args.input, args.format)
    report = spectrum_report(image)
    out = report.data.real
    if _file_format(args.output, args.format) == "pgm":
        lo, hi = out.min(), out.max()
        scaled = (out - lo) / (hi - lo) * 255.0 if hi > lo else out * 0.0
        out_grid = Grid(report.extents, scaled.astype(np.complex128))
    else:
        out_grid = Grid(report.extents, out.astype(np.complex128))
    _write_grid(args.output, out_grid, args.format)
    log.info("spectrum of %s -> %s", args.input, args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    size = _parse_ints(args.size)
    if any(s <= 0 for s in size):
        raise DomainError(f"invalid size {args.size!r}")
    if args.kind == "random":
        rng = np.random.default_rng(args.seed)
        arr = rng.uniform(0.0, 255.0, size=size)
    elif args.kind == "constant":
        arr = np.full(size, args.value, dtype=np.float64)
    elif args.kind == "impulse":
        arr = np.zeros(size)
        arr[(0,) * len(size)] = 1.0
    else:
        raise DomainError(f"unknown kind {args.kind!r}")
    _write_grid(args.output, Grid(size, arr.astype(np.complex128)), args.format)
    log.info("generated %s image %s -> %s", args.kind, args.size, args.output)
    return EXIT_OK


def _add_params_flags(p: argparse.ArgumentParser, with_collection: bool = True) -> None:
    p.add_argument("--dims", type=int, default=None, help="dimension d")
    p.add_argument("--k", required=True, help="sampling factors, e.g. 4,4")
    p.add_argument(
        "--lambda", dest="lam", default=None, help="dense spacings, e.g. 1,1"
    )
    if with_collection:
        p.add_argument(
            "--collection", required=True, help="bit strings, e.g. 100,010,001"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manhattan",
        description="Manhattan sampling sets: density accounting, sampling, "
        "and perfect reconstruction of Manhattan-bandlimited images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="report closure, density, atom volumes")
    _add_params_flags(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("bandlimit", help="zero spectrum outside the Manhattan region")
    _add_params_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["pgm", "mht1"], default=None)
    p.set_defaults(func=cmd_bandlimit)

    p = sub.add_parser("sample", help="extract Manhattan samples to an MHS1 file")
    _add_params_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--samples", required=True, help="output MHS1 path")
    p.add_argument("--format", choices=["pgm", "mht1"], default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reconstruct", help="reconstruct an image from MHS1 samples")
    p.add_argument("--samples", required=True, help="input MHS1 path")
    p.add_argument("--output", required=True)
    p.add_argument("--reference", default=None, help="compare against this image")
    p.add_argument("--format", choices=["pgm", "mht1"], default=None)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("spectrum", help="write centered log-magnitude spectrum")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["pgm", "mht1"], default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("generate", help="write a synthetic test image")
    p.add_argument("--size", required=True, help="extents, e.g. 64,64")
    p.add_argument(
        "--kind", choices=["random", "constant", "impulse"], default="random"
    )
    p.add_argument("--value", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["pgm", "mht1"], default=None)
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "k") and getattr(args, "lam", None) is None:
        args.lam = ",".join("1" for _ in args.k.split(","))
    try:
        return args.func(args)
    except FormatError as exc:
        log.error("format error: %s", exc)
        return EXIT_FORMAT
    except NumericalFailureError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (DomainError, DimensionError, ManhattanError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
