"""Extracting Manhattan samples and building scaled comb grids.

A comb grid for bi-step lattice b is zero off the lattice and carries the
image values scaled by the product of the lattice step sizes, so that the
spectral replicas it induces have unit amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import TextIO

import numpy as np

from .core import BiStep, Collection, ManhattanParams, fundamental_cell_count
from .errors import (
    DimensionError,
    DomainError,
    FormatError,
    MissingSamplesError,
)
from .grid import SPATIAL, Grid

_MHS1_MAGIC = "MHS1"


def lattice_indicator(params: ManhattanParams, b: BiStep) -> np.ndarray:
    """Boolean grid over [0, T) marking the points of bi-step lattice b."""
    if params.T is None:
        raise DomainError("lattice indicator requires support extents T")
    step = params.step_int(b)
    out = np.ones(params.T, dtype=bool)
    for i, (t, s) in enumerate(zip(params.T, step)):
        shape = [1] * params.d
        shape[i] = t
        out &= (np.arange(t) % s == 0).reshape(shape)
    return out


def manhattan_indicator(c: Collection) -> np.ndarray:
    """Boolean grid marking the Manhattan set M(B) within [0, T)."""
    out = np.zeros(c.params.T, dtype=bool)
    for b in c.members:
        out |= lattice_indicator(c.params, b)
    return out


@dataclass(frozen=True)
class SampleSet:
    """Manhattan samples of one image: raw values at lexicographic coordinates."""

    params: ManhattanParams
    collection: Collection
    coords: np.ndarray  # int, shape (n, d)
    values: np.ndarray  # float64, shape (n,)

    def __post_init__(self) -> None:
        coords = np.ascontiguousarray(self.coords, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != self.params.d:
            raise DimensionError("coords must have shape (n, d)")
        if values.shape != (coords.shape[0],):
            raise DimensionError("values length must match coords")
        if self.params.T is None:
            raise DomainError("sample sets require support extents T")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "values", values)
        coords.setflags(write=False)
        values.setflags(write=False)

    @property
    def expected_count(self) -> int:
        lam = self.params.lam_int
        cells = prod(
            t // (k * li) for t, k, li in zip(self.params.T, self.params.k, lam)
        )
        return fundamental_cell_count(self.collection) * cells

    def __len__(self) -> int:
        return len(self.values)


def extract_samples(image: Grid, c: Collection) -> SampleSet:
    """All and only the Manhattan-grid values of the image, lexicographic order."""
    params = c.params
    if params.T is None or tuple(image.extents) != tuple(params.T):
        raise DomainError(
            f"image extents {image.extents} do not match params T {params.T}"
        )
    mask = manhattan_indicator(c)
    coords = np.argwhere(mask)  # argwhere is lexicographic in C order
    values = image.data.real[mask]
    ss = SampleSet(params, c, coords, values)
    assert len(ss) == ss.expected_count
    return ss


def grid_from_samples(ss: SampleSet) -> Grid:
    """Spatial grid holding the raw sample values, zero elsewhere."""
    arr = np.zeros(ss.params.T, dtype=np.complex128)
    arr[tuple(ss.coords.T)] = ss.values
    return Grid(tuple(ss.params.T), arr, SPATIAL)


@dataclass(frozen=True)
class CombGrid:
    """Scaled comb-sampled image on one bi-step lattice."""

    grid: Grid
    b: BiStep
    scale: int


def comb_from_grid(image: Grid, b: BiStep, params: ManhattanParams) -> CombGrid:
    """Comb of a full grid: step-size-scaled values on lattice b, zero off it."""
    if params.T is None or tuple(image.extents) != tuple(params.T):
        raise DimensionError("image extents do not match params T")
    scale = params.comb_scale(b)
    arr = image.data * lattice_indicator(params, b) * scale
    return CombGrid(Grid(tuple(params.T), arr, SPATIAL), b, scale)


def comb_from_samples(ss: SampleSet, b: BiStep) -> CombGrid:
    """Comb built from a sample set; b must lie in the collection's closure so
    that every lattice point of b is covered by the samples."""
    if b not in ss.collection.closure().members:
        raise MissingSamplesError(
            f"lattice {b} is not covered by collection {ss.collection}"
        )
    return comb_from_grid(grid_from_samples(ss), b, ss.params)


# ---------------------------------------------------------------------------
# MHS1 text format: magic line, header lines dims/T/k/lambda/collection, then
# one "t_1 ... t_d value" row per sample (17 significant digits).
# ---------------------------------------------------------------------------


def write_mhs1(fh: TextIO, ss: SampleSet) -> None:
    p = ss.params
    fh.write(f"{_MHS1_MAGIC}\n")
    fh.write(f"dims {p.d}\n")
    fh.write("T " + " ".join(map(str, p.T)) + "\n")
    fh.write("k " + " ".join(map(str, p.k)) + "\n")
    fh.write("lambda " + " ".join(map(str, p.lam_int)) + "\n")
    fh.write(f"collection {ss.collection}\n")
    for coord, value in zip(ss.coords, ss.values):
        fh.write(" ".join(map(str, coord)) + f" {value:.17g}\n")


def _header_line(fh: TextIO, key: str) -> list[str]:
    line = fh.readline().strip()
    parts = line.split()
    if not parts or parts[0] != key:
        raise FormatError(f"expected header line {key!r}, got {line!r}")
    return parts[1:]


def read_mhs1(fh: TextIO) -> SampleSet:
    magic = fh.readline().strip()
    if magic != _MHS1_MAGIC:
        raise FormatError(f"unknown magic {magic!r}, expected {_MHS1_MAGIC!r}")
    try:
        (d,) = map(int, _header_line(fh, "dims"))
        T = tuple(map(int, _header_line(fh, "T")))
        k = tuple(map(int, _header_line(fh, "k")))
        lam = tuple(map(int, _header_line(fh, "lambda")))
        (coll_text,) = _header_line(fh, "collection")
    except ValueError as exc:
        raise FormatError(f"malformed MHS1 header: {exc}") from exc
    params = ManhattanParams(d=d, lam=lam, k=k, T=T)
    collection = Collection.from_string(params, coll_text)
    coords, values = [], []
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        if len(parts) != d + 1:
            raise FormatError(f"malformed sample row: {line!r}")
        coords.append([int(x) for x in parts[:d]])
        values.append(float(parts[d]))
    coords_arr = np.asarray(coords, dtype=np.int64).reshape(len(values), d)
    return SampleSet(params, collection, coords_arr, np.asarray(values))
