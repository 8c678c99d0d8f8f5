"""Discrete domains: uniform grids on the unit cube, dyadic cube families,
and the measure/integration primitives everything else is built on.

Conventions
-----------
* The domain is [0,1)^d, d in {1,2}, split into 2^L cells per axis.
  Functions are extended by zero outside the domain.
* Cell values are samples on the atoms of the discrete measure: a cell of
  volume 2^(-dL) with value v carries mass v * 2^(-dL).
* 2D data is stored flat in row-major order, flat = ix * n + iy.
* "All cubes" is approximated by dyadic cubes of levels 0..L plus,
  optionally, the two one-third-shifted lattices per axis.  Shifts are
  rounded to whole cells (round(s * B / 3) cells for side B = 2^(L-level))
  and cubes sticking out of the domain are clipped, so every cube is an
  exact union of cells and all integrals below are exact finite sums.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels

MIN_LEVEL = 2
MAX_LEVEL = 14


class ConfigurationError(ValueError):
    """Raised for out-of-range grid/exponent parameters."""


class GridMismatchError(ValueError):
    """Raised when a cube or function does not belong to the given grid."""


@dataclass(frozen=True)
class Grid:
    """Uniform discretization of [0,1)^d with 2^L cells per axis."""

    d: int
    L: int

    @property
    def n(self) -> int:
        """Cells per axis."""
        return 1 << self.L

    @property
    def ncells(self) -> int:
        return 1 << (self.d * self.L)

    @property
    def cell_volume(self) -> float:
        return 2.0 ** (-self.d * self.L)

    def cell_edges(self, axis_index: np.ndarray) -> np.ndarray:
        return axis_index / self.n

    def __str__(self) -> str:
        return f"grid(d={self.d},L={self.L})"


def make_grid(d: int, L: int) -> Grid:
    """Build a grid; d in {1,2} and MIN_LEVEL <= L <= MAX_LEVEL."""
    if d not in (1, 2):
        raise ConfigurationError(f"dimension must be 1 or 2, got {d}")
    if not (MIN_LEVEL <= L <= MAX_LEVEL):
        raise ConfigurationError(
            f"level must satisfy {MIN_LEVEL} <= L <= {MAX_LEVEL}, got {L}")
    return Grid(d, L)


class GridFunction:
    """Nonnegative cell-sampled function on a grid.

    ``meta`` carries provenance (generator kind, construction parameters)
    and is ignored by all numerics.
    """

    def __init__(self, grid: Grid, values, meta: dict | None = None):
        arr = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
        if arr.shape[0] != grid.ncells:
            raise GridMismatchError(
                f"expected {grid.ncells} cell values, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cell values must be finite")
        if np.any(arr < 0):
            raise ValueError("cell values must be nonnegative")
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr
        self.meta = dict(meta) if meta else {}

    def with_values(self, values, meta: dict | None = None) -> "GridFunction":
        return GridFunction(self.grid, values, meta if meta is not None else self.meta)

    def total_mass(self, weight: "Weight | None" = None) -> float:
        v = self.values if weight is None else self.values * weight.values
        return float(np.sum(v)) * self.grid.cell_volume

    def max(self) -> float:
        return float(self.values.max())

    def __repr__(self) -> str:
        return f"GridFunction({self.grid}, max={self.values.max():.6g})"


class Weight(GridFunction):
    """Strictly positive GridFunction; doubles as a measure via cell sums."""

    def __init__(self, grid: Grid, values, meta: dict | None = None):
        super().__init__(grid, values, meta)
        mn = float(self.values.min())
        if mn <= 0.0:
            raise ValueError("weight values must be strictly positive")
        self.dynamic_range = float(self.values.max()) / mn

    def with_values(self, values, meta: dict | None = None) -> "Weight":
        return Weight(self.grid, values, meta if meta is not None else self.meta)

    def __repr__(self) -> str:
        return f"Weight({self.grid}, range={self.dynamic_range:.3g})"


def ones(grid: Grid) -> Weight:
    return Weight(grid, np.ones(grid.ncells))


@dataclass(frozen=True)
class DyadicCube:
    """One (possibly shifted, possibly clipped) dyadic cube.

    ``offset`` indexes the cube within its level-``level`` lattice;
    ``bounds`` are the clipped per-axis half-open cell ranges on the
    level-``L`` grid, which are what all computations use.
    """

    d: int
    L: int
    level: int
    offset: tuple
    shift: tuple
    bounds: tuple

    @property
    def side(self) -> float:
        """Nominal side length 2^(-level) (clipping may shorten an axis)."""
        return 2.0 ** (-self.level)

    @property
    def ncells(self) -> int:
        out = 1
        for a, b in self.bounds:
            out *= b - a
        return out

    def volume(self) -> float:
        return self.ncells * 2.0 ** (-self.d * self.L)

    def segments(self, grid: Grid) -> list[tuple[int, int]]:
        """Flat half-open cell index ranges covering the cube."""
        if (grid.d, grid.L) != (self.d, self.L):
            raise GridMismatchError(f"cube {self} does not live on {grid}")
        if self.d == 1:
            (a, b), = self.bounds
            return [(a, b)]
        n = grid.n
        (a1, b1), (a2, b2) = self.bounds
        return [(ix * n + a2, ix * n + b2) for ix in range(a1, b1)]

    def cell_indices(self, grid: Grid) -> np.ndarray:
        segs = self.segments(grid)
        return np.concatenate([np.arange(s, e) for s, e in segs])

    def contains_cell(self, grid: Grid, flat_index: int) -> bool:
        if self.d == 1:
            (a, b), = self.bounds
            return a <= flat_index < b
        ix, iy = divmod(int(flat_index), grid.n)
        (a1, b1), (a2, b2) = self.bounds
        return a1 <= ix < b1 and a2 <= iy < b2

    def __str__(self) -> str:
        axes = "x".join(f"[{a}:{b})" for a, b in self.bounds)
        s = "" if all(v == 0 for v in self.shift) else f"s{''.join(map(str, self.shift))}"
        return f"Q(l={self.level}{s},cells={axes})"


def _shift_cells(side_cells: int, s: int) -> int:
    # one-third shift rounded to whole cells; never a .5 tie (3 | 2^k s fails)
    return round(s * side_cells / 3)


class CubeFamily:
    """An ordered, de-duplicated collection of dyadic cubes with cached
    flat-segment geometry for the kernel backend."""

    def __init__(self, grid: Grid, cubes: list[DyadicCube], descriptor: str):
        self.grid = grid
        self.cubes = cubes
        self.descriptor = descriptor
        seg_starts: list[int] = []
        seg_ends: list[int] = []
        offsets = [0]
        ncells = []
        for q in cubes:
            for s, e in q.segments(grid):
                seg_starts.append(s)
                seg_ends.append(e)
            offsets.append(len(seg_starts))
            ncells.append(q.ncells)
        self.seg_starts = np.asarray(seg_starts, dtype=np.intp)
        self.seg_ends = np.asarray(seg_ends, dtype=np.intp)
        self.cube_offsets = np.asarray(offsets, dtype=np.intp)
        self.cube_ncells = np.asarray(ncells, dtype=np.int64)
        self.cube_volumes = self.cube_ncells * grid.cell_volume

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __getitem__(self, k: int) -> DyadicCube:
        return self.cubes[k]

    def sums(self, values: np.ndarray) -> np.ndarray:
        """Per-cube plain sums of cell values (no cell-volume factor)."""
        return kernels.cube_sums(np.ascontiguousarray(values, dtype=np.float64),
                                 self.seg_starts, self.seg_ends, self.cube_offsets)

    def integrals(self, values: np.ndarray) -> np.ndarray:
        return self.sums(values) * self.grid.cell_volume

    def mins(self, values: np.ndarray) -> np.ndarray:
        return kernels.cube_mins(np.ascontiguousarray(values, dtype=np.float64),
                                 self.seg_starts, self.seg_ends, self.cube_offsets)

    def maxs(self, values: np.ndarray) -> np.ndarray:
        return kernels.cube_maxs(np.ascontiguousarray(values, dtype=np.float64),
                                 self.seg_starts, self.seg_ends, self.cube_offsets)

    def weak_norms(self, fvals: np.ndarray, masses: np.ndarray, invp: float) -> np.ndarray:
        """Per-cube sup_t t * mass({f >= t} cap Q)^invp (raw masses)."""
        return kernels.cube_weak_norms(
            np.ascontiguousarray(fvals, dtype=np.float64),
            np.ascontiguousarray(masses, dtype=np.float64),
            self.seg_starts, self.seg_ends, self.cube_offsets, float(invp))

    def paint_max(self, cube_values: np.ndarray, floor: float = 0.0) -> np.ndarray:
        """Cell-wise max of cube values over all cubes covering the cell."""
        out = np.full(self.grid.ncells, floor, dtype=np.float64)
        kernels.paint_max(out, self.seg_starts, self.seg_ends, self.cube_offsets,
                          np.ascontiguousarray(cube_values, dtype=np.float64))
        return out

    def restrict_levels(self, levels) -> "CubeFamily":
        levels = set(levels)
        subset = [q for q in self.cubes if q.level in levels]
        if not subset:
            raise ConfigurationError("restricted cube family is empty")
        return CubeFamily(self.grid, subset,
                          f"{self.descriptor}|levels={sorted(levels)}")


def cube_family(grid: Grid, shifted: bool = False) -> CubeFamily:
    """All dyadic subcubes of levels 0..L, plus the two one-third-shifted
    lattices per axis when ``shifted``.

    Every value computed over a cube depends only on its cell set, so
    cubes that clip or round-shift onto an already-seen cell range are
    dropped (globally, keeping the first representative in level order);
    suprema over the family are unchanged by this.
    """
    shifts = (0, 1, 2) if shifted else (0,)
    cubes: list[DyadicCube] = []
    seen: set[tuple] = set()
    n = grid.n
    for level in range(grid.L + 1):
        side = 1 << (grid.L - level)
        for shift in _axis_combos(shifts, grid.d):
            offs = [_shift_cells(side, s) for s in shift]
            ranges = []
            for off in offs:
                kmin = 0 if off == 0 else -1
                ranges.append(range(kmin, 1 << level))
            for ks in _axis_combos_from(ranges):
                bounds = []
                ok = True
                for ax in range(grid.d):
                    a = ks[ax] * side + offs[ax]
                    b = a + side
                    a, b = max(a, 0), min(b, n)
                    if a >= b:
                        ok = False
                        break
                    bounds.append((a, b))
                if not ok:
                    continue
                key = tuple(bounds)
                if key in seen:
                    continue
                seen.add(key)
                cubes.append(DyadicCube(grid.d, grid.L, level, tuple(ks),
                                        tuple(shift), tuple(bounds)))
    name = "shifted-dyadic" if shifted else "dyadic"
    return CubeFamily(grid, cubes, f"{name}[0..{grid.L}]")


def _axis_combos(shifts, d):
    if d == 1:
        return [(s,) for s in shifts]
    return [(s1, s2) for s1 in shifts for s2 in shifts]


def _axis_combos_from(ranges):
    if len(ranges) == 1:
        return ((k,) for k in ranges[0])
    return ((k1, k2) for k1 in ranges[0] for k2 in ranges[1])


def whole_domain_cube(grid: Grid) -> DyadicCube:
    bounds = tuple((0, grid.n) for _ in range(grid.d))
    return DyadicCube(grid.d, grid.L, 0, tuple(0 for _ in range(grid.d)),
                      tuple(0 for _ in range(grid.d)), bounds)


def integrate(f: GridFunction, Q: DyadicCube, mu: Weight | None = None) -> float:
    """Exact finite sum of f (d mu) over the cube, mu = Lebesgue when absent."""
    cells = Q.cell_indices(f.grid)
    v = f.values[cells]
    if mu is not None:
        if mu.grid != f.grid:
            raise GridMismatchError("weight lives on a different grid")
        v = v * mu.values[cells]
    return float(np.sum(v)) * f.grid.cell_volume


def ess_bounds(f: GridFunction, Q: DyadicCube) -> tuple[float, float]:
    """Discrete essential inf/sup over the cube: cell-wise min and max."""
    cells = Q.cell_indices(f.grid)
    if cells.size == 0:
        raise ValueError("cube does not intersect the domain")
    v = f.values[cells]
    return float(v.min()), float(v.max())


def level_measure(f: GridFunction, t: float, w: Weight | None = None) -> float:
    """w({f > t}); right-continuous and nonincreasing in t."""
    mask = f.values > t
    if w is None:
        return float(np.count_nonzero(mask)) * f.grid.cell_volume
    return float(np.sum(w.values[mask])) * f.grid.cell_volume


@dataclass
class ConstantEstimate:
    """A supremum over a cube family plus the cube attaining it."""

    value: float
    witness: DyadicCube | None
    family: str
    resolution: int
    details: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return (f"ConstantEstimate({self.value:.6g}, witness={self.witness}, "
                f"family={self.family}, L={self.resolution})")


def argmax_estimate(values: np.ndarray, family: CubeFamily, **details) -> ConstantEstimate:
    k = int(np.argmax(values))
    return ConstantEstimate(float(values[k]), family[k], family.descriptor,
                            family.grid.L, details)


# -- serialization: flat CSV of (index,value) plus a JSON header ------------

def save_grid_function(f: GridFunction, base: str | Path) -> None:
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    with open(base.with_suffix(".csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        for i, v in enumerate(f.values):
            writer.writerow([i, repr(float(v))])
    header = {"schema_version": 1, "d": f.grid.d, "L": f.grid.L,
              "kind": "weight" if isinstance(f, Weight) else "grid_function",
              "meta": _json_safe(f.meta)}
    with open(base.with_suffix(".json"), "w") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_grid_function(base: str | Path) -> GridFunction:
    base = Path(base)
    with open(base.with_suffix(".json")) as fh:
        header = json.load(fh)
    grid = make_grid(header["d"], header["L"])
    values = np.empty(grid.ncells)
    with open(base.with_suffix(".csv"), newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            values[int(row[0])] = float(row[1])
    cls = Weight if header.get("kind") == "weight" else GridFunction
    return cls(grid, values, header.get("meta") or {})


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (GridFunction, DyadicCube, Grid)):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj
