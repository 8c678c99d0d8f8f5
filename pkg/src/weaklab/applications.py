"""Bi-sublinear maximal operators on the line and their endpoint checks.

The level-set operator N scans, for each x, the sorted values of
h(y) = f(x+y) g(x+y) / y^2 over the cell lattice of [-1,1] and maximizes
lambda * |{h > lambda}|^2 over the exact candidate set.  The y-cell at 0
is excluded; the two cells adjacent to it carry exact cell averages of the
kernel so the singular cells do not dominate the discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import ConfigurationError, CubeFamily, Grid, GridFunction, Weight
from .lorentz import lorentz_values, weak_values
from .maximal import MaximalConfig, multilinear_maximal

_CHUNK_ROWS = 512


def _lattice_kernel(n: int, power: int) -> np.ndarray:
    """Kernel values on the centered y-lattice j = -n..n (cell at 0 zeroed).

    Midpoint values 1/|j delta|^power except |j| = 1, which carries the
    exact average of the kernel over [delta/2, 3*delta/2].
    """
    delta = 1.0 / n
    j = np.arange(-n, n + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        k = 1.0 / np.abs(j * delta) ** power
    k[n] = 0.0
    if power == 2:
        adjacent = 4.0 / (3.0 * delta * delta)
    else:
        adjacent = math.log(3.0) / delta
    k[n - 1] = k[n + 1] = adjacent
    return k


def _scan_operator(prod: np.ndarray, n: int, kern: np.ndarray,
                   measure_power: float) -> np.ndarray:
    delta = 1.0 / n
    pad = np.zeros(3 * n, dtype=np.float64)
    pad[n:2 * n] = prod
    windows = np.lib.stride_tricks.sliding_window_view(pad, 2 * n + 1)
    out = np.empty(n)
    for a in range(0, n, _CHUNK_ROWS):
        b = min(a + _CHUNK_ROWS, n)
        rows = windows[a:b] * kern
        out[a:b] = kernels.sup_scan_rows(rows, delta, measure_power)
    return out


def operator_N(f: GridFunction, g: GridFunction) -> GridFunction:
    """N(f,g)(x) = sup_l l * |{y != 0 : f(x+y) g(x+y)/y^2 > l}|^2, d = 1."""
    if f.grid.d != 1:
        raise ConfigurationError("operator N is implemented for d = 1 only")
    if g.grid != f.grid:
        raise ConfigurationError("f and g live on different grids")
    n = f.grid.n
    vals = _scan_operator(f.values * g.values, n, _lattice_kernel(n, 2), 2.0)
    return GridFunction(f.grid, vals)


def operator_T(f: GridFunction, g: GridFunction) -> GridFunction:
    """T = N^(1/2): the bi-sublinear square root of N."""
    return GridFunction(f.grid, np.sqrt(operator_N(f, g).values))


def operator_Nstar(f: GridFunction) -> GridFunction:
    """N*(f)(x) = sup_l l * |{y != 0 : |f(x+y)|/|y| > l}|, d = 1."""
    if f.grid.d != 1:
        raise ConfigurationError("operator N* is implemented for d = 1 only")
    n = f.grid.n
    vals = _scan_operator(f.values.copy(), n, _lattice_kernel(n, 1), 1.0)
    return GridFunction(f.grid, vals)


@dataclass
class HypothesisCheckReport:
    constant: float
    argmax_cell: int
    zero_consistent: bool


def hypothesis_check(maskE: np.ndarray, maskF: np.ndarray, lam1: float,
                     lam2: float, grid: Grid, cubes: CubeFamily,
                     alpha: float = 0.5) -> HypothesisCheckReport:
    """sup_x |T(l1 chi_E, l2 chi_F)(x)| / ((l1 l2)^alpha M(chi_E,chi_F)(x)^alpha).

    Both sides are homogeneous of the same degree, so the ratio is
    lambda-free; the shifted family should back the multilinear maximal.
    """
    chiE = GridFunction(grid, maskE.astype(np.float64))
    chiF = GridFunction(grid, maskF.astype(np.float64))
    t = operator_T(GridFunction(grid, lam1 * chiE.values),
                   GridFunction(grid, lam2 * chiF.values)).values
    mm = multilinear_maximal([chiE, chiF], MaximalConfig(cubes, None)).values
    rhs = (lam1 * lam2) ** alpha * mm ** alpha
    live = rhs > 0
    zero_ok = bool(np.all(t[~live] == 0.0))
    if not live.any():
        return HypothesisCheckReport(0.0, -1, zero_ok)
    ratios = t[live] / rhs[live]
    k = int(np.argmax(ratios))
    return HypothesisCheckReport(float(ratios[k]),
                                 int(np.nonzero(live)[0][k]), zero_ok)


@dataclass
class LayerDecomposition:
    """Dyadic value layers E_j = {2^j <= f < 2^(j+1)} of a function."""

    levels: np.ndarray
    masks: list
    support: np.ndarray

    def reconstruction(self, shape_like: np.ndarray) -> np.ndarray:
        out = np.zeros_like(shape_like, dtype=np.float64)
        for j, mask in zip(self.levels, self.masks):
            out[mask] = 2.0 ** j
        return out


def layer_decompose(f: GridFunction) -> LayerDecomposition:
    support = f.values > 0
    if not support.any():
        return LayerDecomposition(np.array([], dtype=np.int64), [], support)
    j = np.full(f.values.shape, np.iinfo(np.int64).min, dtype=np.int64)
    j[support] = np.floor(np.log2(f.values[support])).astype(np.int64)
    levels = np.unique(j[support])
    masks = [j == lev for lev in levels]
    return LayerDecomposition(levels, masks, support)


def layer_sum(f: GridFunction, w: Weight, alpha: float, p_exp: float) -> float:
    """sum_j 2^(alpha j) w(E_j)^(alpha/p) over the occupied layers of f."""
    dec = layer_decompose(f)
    vol = f.grid.cell_volume
    total = 0.0
    for j, mask in zip(dec.levels, dec.masks):
        total += 2.0 ** (alpha * float(j)) * (np.sum(w.values[mask]) * vol) ** (alpha / p_exp)
    return float(total)


@dataclass
class BoundCheckReport:
    lhs_alpha: float
    layer_sum: float
    prod_norms_alpha: float
    c_layer: float
    c_norms: float
    class_constant: float


def theorem41_bound_check(f1: GridFunction, f2: GridFunction, vec, q: float,
                          cubes: CubeFamily) -> BoundCheckReport:
    """Layer-sum route to the weak bound for S = N at exponents p = q/2,
    p1 = p2 = q, alpha = 1/2: the weak norm of S against the composite
    weight is compared with the double layer sum, and the layer sum with
    the product of restricted Lorentz norms."""
    from .weights import apr_r1_constant  # local import, avoids cycle

    alpha = 0.5
    if not q > 2 * alpha:
        raise ConfigurationError(f"need q > {2 * alpha}, got {q}")
    p = q / 2.0
    w1, w2 = vec.weights
    cls = apr_r1_constant(vec, cubes)
    comp = Weight(f1.grid, np.sqrt(w1.values * w2.values))
    s_vals = operator_N(f1, f2)
    lhs_alpha = weak_values(
        s_vals.values, comp.values * f1.grid.cell_volume, p) ** alpha
    ls = layer_sum(f1, w1, alpha, q) * layer_sum(f2, w2, alpha, q)
    vol = f1.grid.cell_volume
    prod = 1.0
    for fi, wi in zip((f1, f2), (w1, w2)):
        prod *= lorentz_values(fi.values, wi.values * vol, q, alpha) ** alpha
    c_layer = lhs_alpha / ls if ls > 0 else (0.0 if lhs_alpha == 0 else math.inf)
    c_norms = ls / prod if prod > 0 else (0.0 if ls == 0 else math.inf)
    return BoundCheckReport(lhs_alpha, ls, prod, c_layer, c_norms, cls.value)


@dataclass
class EndpointCheckReport:
    constant: float
    lhs: float
    rhs: float
    class_constant: float


def corollary_endpoint_check(f1: GridFunction, f2: GridFunction, vec,
                             q: float, cubes: CubeFamily) -> EndpointCheckReport:
    """||N(f1,f2)||_{L^{1/2,inf}((v1 v2)^{1/2})} against the product of
    L^{1,1/(2q)} norms, for an audited A_(1,1) vector."""
    from .weights import apvec_constant

    if not q > 1:
        raise ConfigurationError(f"need q > 1, got {q}")
    v1, v2 = vec.weights
    cls = apvec_constant(vec, cubes)
    nv = operator_N(f1, f2)
    vol = f1.grid.cell_volume
    comp = np.sqrt(v1.values * v2.values)
    lhs = weak_values(nv.values, comp * vol, 0.5)
    rhs = (lorentz_values(f1.values, v1.values * vol, 1.0, 1.0 / (2 * q))
           * lorentz_values(f2.values, v2.values * vol, 1.0, 1.0 / (2 * q)))
    constant = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return EndpointCheckReport(constant, lhs, rhs, cls.value)


@dataclass
class SeriesReport:
    aggregate: float
    component_sum: float
    triangle_ratio: float
    component_constants: list


def series_sum_check(fs, vec, p_exp: float, components, cubes: CubeFamily) -> SeriesReport:
    """Minkowski aggregation: components are scaled, level-truncated dilates
    of the multilinear maximal; for p > 1 the aggregate weak norm is
    compared against the sum of component weak norms."""
    if not p_exp > 1:
        raise ConfigurationError(f"need p > 1, got {p_exp}")
    fs = list(fs)
    grid = fs[0].grid
    vol = grid.cell_volume
    comp_w = vec.composite().values
    total = np.zeros(grid.ncells)
    comp_norms = []
    comp_consts = []
    prod_norms = 1.0
    for fi, wi, pi in zip(fs, vec.weights, vec.system.p):
        prod_norms *= lorentz_values(fi.values, wi.values * vol, pi, 1.0)
    for scale, min_level in components:
        fam = cubes.restrict_levels(range(min_level, grid.L + 1))
        h = scale * multilinear_maximal(fs, MaximalConfig(fam, None)).values
        total += h
        nrm = weak_values(h, comp_w * vol, p_exp)
        comp_norms.append(nrm)
        comp_consts.append(nrm / prod_norms if prod_norms > 0 else math.inf)
    aggregate = weak_values(total, comp_w * vol, p_exp)
    csum = float(np.sum(comp_norms))
    ratio = aggregate / csum if csum > 0 else (0.0 if aggregate == 0 else math.inf)
    return SeriesReport(aggregate, csum, ratio, comp_consts)


def spike_family(grid: Grid, count: int) -> GridFunction:
    """count one-cell spikes evenly spread over (0,1), total mass one."""
    if grid.d != 1:
        raise ConfigurationError("spike families are 1-d")
    n = grid.n
    vals = np.zeros(n)
    height = n / count  # mass 1/count per spike of width 1/n
    for k in range(1, count + 1):
        cell = min(int((k - 0.5) * n / count), n - 1)
        vals[cell] = height
    return GridFunction(grid, vals)


def nstar_growth(grid: Grid, counts=(4, 8, 16, 32, 64, 128, 256)):
    """Weak (1,1) ratio of N* over spike families; exploratory table."""
    rows = []
    for count in counts:
        f = spike_family(grid, count)
        nf = operator_Nstar(f)
        ratio = weak_values(nf.values, np.full(grid.ncells, grid.cell_volume), 1.0)
        rows.append((count, float(ratio / f.total_mass())))
    return rows
