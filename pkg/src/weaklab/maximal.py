"""Maximal operators over cube families.

All operators take a sup of cube averages over the cubes of a family
containing the point.  The evaluation cell itself always acts as a member
of the family (its average is the cell value), so M_mu g >= g holds
exactly even for restricted families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (ConfigurationError, CubeFamily, DyadicCube, GridFunction,
                   GridMismatchError, Weight, cube_family)


@dataclass
class MaximalConfig:
    """Cube family plus optional reference measure mu (None = Lebesgue)."""

    family: CubeFamily
    mu: Weight | None = None

    def __post_init__(self):
        if len(self.family) == 0:
            raise ConfigurationError("cube family is empty")
        if self.mu is not None and self.mu.grid != self.family.grid:
            raise GridMismatchError("mu lives on a different grid")


def default_config(grid, mu: Weight | None = None, shifted: bool = False) -> MaximalConfig:
    return MaximalConfig(cube_family(grid, shifted=shifted), mu)


def maximal(g: GridFunction, cfg: MaximalConfig) -> GridFunction:
    """M_mu g(x) = sup over family cubes Q containing x of avg_Q(g dmu)."""
    fam = cfg.family
    if g.grid != fam.grid:
        raise GridMismatchError("function lives on a different grid")
    if cfg.mu is None:
        avgs = fam.sums(g.values) / fam.cube_ncells
    else:
        avgs = fam.sums(g.values * cfg.mu.values) / fam.sums(cfg.mu.values)
    out = fam.paint_max(avgs)
    np.maximum(out, g.values, out=out)
    return GridFunction(g.grid, out)


def multilinear_maximal(fs, cfg: MaximalConfig) -> GridFunction:
    """M(f_1..f_m)(x) = sup over cubes of the product of plain averages."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    fam = cfg.family
    for f in fs:
        if f.grid != fam.grid:
            raise GridMismatchError("functions live on different grids")
    prod_avgs = np.ones(len(fam))
    for f in fs:
        prod_avgs *= fam.sums(f.values) / fam.cube_ncells
    out = fam.paint_max(prod_avgs)
    cellwise = np.prod([f.values for f in fs], axis=0)
    np.maximum(out, cellwise, out=out)
    return GridFunction(fam.grid, out)


def triple_cube_mask(Q: DyadicCube, grid) -> np.ndarray:
    """Indicator of 3Q (concentric tripling, clipped to the domain)."""
    mask = np.zeros(grid.ncells, dtype=bool)
    spans = []
    for a, b in Q.bounds:
        w = b - a
        spans.append((max(a - w, 0), min(b + w, grid.n)))
    if grid.d == 1:
        (a, b), = spans
        mask[a:b] = True
    else:
        (a1, b1), (a2, b2) = spans
        for ix in range(a1, b1):
            mask[ix * grid.n + a2: ix * grid.n + b2] = True
    return mask


@dataclass
class SplitReport:
    """Two-sided comparison of M_mu g with essinf_Q M_mu g + M_mu(g chi_3Q)."""

    min_ratio: float
    max_ratio: float
    essinf_term: float


def local_global_split_check(g: GridFunction, mu: Weight, Q: DyadicCube,
                             shifted: bool = False) -> SplitReport:
    """On the cells of Q, compare M_mu g against the local/global surrogate."""
    cfg = default_config(g.grid, mu, shifted)
    mg = maximal(g, cfg).values
    local = maximal(GridFunction(g.grid, g.values * triple_cube_mask(Q, g.grid)),
                    cfg).values
    cells = Q.cell_indices(g.grid)
    essinf = float(mg[cells].min())
    rhs = essinf + local[cells]
    lhs = mg[cells]
    if essinf == 0.0:  # g == 0: both sides vanish
        return SplitReport(1.0, 1.0, 0.0)
    ratios = lhs / rhs
    return SplitReport(float(ratios.min()), float(ratios.max()), essinf)


def _probe_functions(grid) -> list[np.ndarray]:
    n = grid.ncells
    probes = [np.ones(n)]
    half = np.zeros(n)
    half[: n // 2] = 1.0
    probes.append(half)
    spike = np.zeros(n)
    spike[0] = 1.0
    probes.append(spike)
    alt = np.zeros(n)
    alt[::4] = 1.0
    probes.append(alt)
    return probes


def measure_operator_bound(cfg: MaximalConfig, extra: GridFunction | None = None) -> float:
    """Empirical L^2(mu) bound for M_mu on a fixed probe set, doubled."""
    grid = cfg.family.grid
    mu = cfg.mu.values if cfg.mu is not None else np.ones(grid.ncells)
    worst = 1.0
    probes = _probe_functions(grid)
    if extra is not None and extra.values.max() > 0:
        probes.append(extra.values / extra.values.max())
    for p in probes:
        nrm = np.sqrt(np.sum(p * p * mu))
        if nrm == 0.0:
            continue
        mp = maximal(GridFunction(grid, p), cfg).values
        worst = max(worst, float(np.sqrt(np.sum(mp * mp * mu)) / nrm))
    return 2.0 * worst


RDF_FLOOR = 2.0 ** -40


def rdf_iterate(g: GridFunction, k: int, cfg: MaximalConfig) -> Weight:
    """Rubio de Francia sum R g = sum_{j<=k} M^(j) g / (2K)^j.

    K is a measured operator-norm bound, so M(Rg) <= 2K Rg up to the
    truncation tail.  The output is floored at RDF_FLOOR * max to keep it a
    valid (strictly positive) Weight.
    """
    if not (0 <= k <= 12):
        raise ConfigurationError(f"iteration count must be in 0..12, got {k}")
    if g.values.max() == 0.0:
        raise ValueError("rdf_iterate needs a nonzero input")
    K = measure_operator_bound(cfg, g)
    acc = g.values.copy()
    term = g
    scale = 1.0
    for _ in range(k):
        term = maximal(term, cfg)
        scale /= 2.0 * K
        acc += term.values * scale
    floor = acc.max() * RDF_FLOOR
    return Weight(g.grid, np.maximum(acc, floor),
                  meta={"kind": "rdf", "k": k, "K": K})
