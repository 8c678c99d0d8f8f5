"""Weight-class characteristics and test-weight generators.

The multi-weight classes couple m weights through a composite weight and
per-component dual factors; the restricted variants replace strong dual
averages with weak Lorentz norms on cubes.  Every characteristic here is a
supremum over a cube family and is returned as a ConstantEstimate carrying
the witnessing cube.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import (ConfigurationError, ConstantEstimate, CubeFamily, Grid,
                   GridFunction, Weight, argmax_estimate, cube_family, ones,
                   save_grid_function, load_grid_function)
from .lorentz import weak_values
from .maximal import MaximalConfig, maximal, rdf_iterate

EXPONENT_TOL = 1e-12


@dataclass(frozen=True)
class ExponentSystem:
    """Exponent bookkeeping for a vector of m weights.

    p = (p_1..p_m), r = (r_1..r_{m+1}), alpha = (alpha_1..alpha_m); all the
    derived quantities below are reciprocal sums/differences of these.
    delta_i = inf is a legitimate value (r_i = p_i) and selects the
    ess-sup branch in the characteristics.
    """

    p: tuple
    r: tuple
    alpha: tuple

    def __post_init__(self):
        m = len(self.p)
        if m < 1:
            raise ConfigurationError("need at least one component")
        if len(self.r) != m + 1:
            raise ConfigurationError(
                f"r must have {m + 1} entries (got {len(self.r)})")
        if len(self.alpha) != m:
            raise ConfigurationError(
                f"alpha must have {m} entries (got {len(self.alpha)})")
        for i, (pi, ri) in enumerate(zip(self.p, self.r), start=1):
            if not pi >= 1:
                raise ConfigurationError(f"p[{i}] must be >= 1, got {pi}")
            if not 1 <= ri:
                raise ConfigurationError(f"r[{i}] must be >= 1, got {ri}")
            if ri > pi:
                raise ConfigurationError(
                    f"r[{i}] <= p[{i}] violated: {ri} > {pi}")
        if not self.r[m] >= 1:
            raise ConfigurationError(f"r[{m + 1}] must be >= 1, got {self.r[m]}")
        for i, (ai, pi) in enumerate(zip(self.alpha, self.p), start=1):
            if not (0 < ai <= pi):
                raise ConfigurationError(
                    f"alpha[{i}] must lie in (0, p[{i}]], got {ai}")
        if self.inv_delta(self.m + 1) <= 0:
            raise ConfigurationError(
                "p < r_{m+1}' violated: 1/p must exceed 1 - 1/r_{m+1}")

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def p_total(self) -> float:
        """p with 1/p = sum 1/p_i."""
        return 1.0 / sum(1.0 / pi for pi in self.p)

    @property
    def p_m1(self) -> float:
        """p_{m+1} with 1/p_{m+1} = 1 - 1/p (sign carried through)."""
        inv = 1.0 - 1.0 / self.p_total
        return math.inf if inv == 0 else 1.0 / inv

    def inv_delta(self, i: int) -> float:
        """1/delta_i = 1/r_i - 1/p_i, with p_{m+1} as above."""
        if i == self.m + 1:
            return 1.0 / self.r[self.m] - (1.0 - 1.0 / self.p_total)
        return 1.0 / self.r[i - 1] - 1.0 / self.p[i - 1]

    def delta(self, i: int) -> float:
        if i <= self.m and self.r[i - 1] == self.p[i - 1]:
            return math.inf
        return 1.0 / self.inv_delta(i)

    @property
    def r_total(self) -> float:
        """r with 1/r = sum_{i=1}^{m+1} 1/r_i."""
        return 1.0 / sum(1.0 / ri for ri in self.r)

    @property
    def r_tilde(self) -> float:
        """r~ with 1/r~ = sum_{i=1}^{m} 1/r_i."""
        return 1.0 / sum(1.0 / ri for ri in self.r[: self.m])

    @property
    def rho(self) -> float:
        """1/rho = 1/r_m - 1/r_{m+1}' + sum_{i<m} 1/p_i."""
        inv = (1.0 / self.r[self.m - 1] - (1.0 - 1.0 / self.r[self.m])
               + sum(1.0 / pi for pi in self.p[: self.m - 1]))
        return 1.0 / inv

    def with_pm(self, new_pm: float) -> "ExponentSystem":
        """Same system with the m-th strong exponent replaced (alpha clipped)."""
        p = self.p[:-1] + (new_pm,)
        alpha = self.alpha[:-1] + (min(self.alpha[-1], new_pm),)
        return ExponentSystem(p, self.r, alpha)

    def identity_residuals(self) -> dict:
        """Residuals of the derived-exponent identities (all should be ~0)."""
        res = {}
        res["p_total"] = abs(sum(1.0 / pi for pi in self.p) - 1.0 / self.p_total)
        res["r_total"] = abs(sum(1.0 / ri for ri in self.r) - 1.0 / self.r_total)
        res["r_tilde"] = abs(sum(1.0 / ri for ri in self.r[: self.m]) - 1.0 / self.r_tilde)
        res["rho"] = abs(1.0 / self.rho
                         - (1.0 / self.r[self.m - 1] - 1.0 + 1.0 / self.r[self.m]
                            + sum(1.0 / pi for pi in self.p[: self.m - 1])))
        for i in range(1, self.m + 2):
            d = self.delta(i)
            if math.isinf(d):
                continue
            ri = self.r[self.m] if i == self.m + 1 else self.r[i - 1]
            inv_pi = (1.0 - 1.0 / self.p_total) if i == self.m + 1 else 1.0 / self.p[i - 1]
            res[f"delta_{i}"] = abs(1.0 / d - (1.0 / ri - inv_pi))
        return res


@dataclass
class WeightVector:
    """m weights tied to an exponent system, with the derived composite
    weight w = prod w_i^(p/p_i) and mu = (prod_{i<m} w_i^(1/p_i))^rho."""

    weights: tuple
    system: ExponentSystem

    def __post_init__(self):
        self.weights = tuple(self.weights)
        if len(self.weights) != self.system.m:
            raise ConfigurationError(
                f"vector has {len(self.weights)} weights for m={self.system.m}")
        g = self.weights[0].grid
        for w in self.weights:
            if w.grid != g:
                raise ConfigurationError("weights live on different grids")

    @property
    def grid(self) -> Grid:
        return self.weights[0].grid

    def composite(self) -> Weight:
        p = self.system.p_total
        vals = np.ones(self.grid.ncells)
        for wi, pi in zip(self.weights, self.system.p):
            vals *= wi.values ** (p / pi)
        return Weight(self.grid, vals)

    def mu(self) -> Weight:
        vals = np.ones(self.grid.ncells)
        for wi, pi in zip(self.weights[:-1], self.system.p[:-1]):
            vals *= wi.values ** (1.0 / pi)
        return Weight(self.grid, vals ** self.system.rho)

    def replace_last(self, w: Weight, system: ExponentSystem | None = None) -> "WeightVector":
        return WeightVector(self.weights[:-1] + (w,), system or self.system)


# -- characteristics ---------------------------------------------------------

def a1_constant(w: Weight, mu: Weight | None, cubes: CubeFamily) -> ConstantEstimate:
    """[w]_{A_1(mu)} = sup_Q avg_Q(w dmu) / essinf_Q w."""
    if mu is None:
        num = cubes.sums(w.values) / cubes.cube_ncells
    else:
        num = cubes.sums(w.values * mu.values) / cubes.sums(mu.values)
    terms = num / cubes.mins(w.values)
    return argmax_estimate(terms, cubes, kind="A1")


def a1_term(w: Weight, mu: Weight | None, Q, grid) -> float:
    """Single-cube A_1 quotient, for witness re-evaluation."""
    cells = Q.cell_indices(grid)
    wv = w.values[cells]
    mv = np.ones_like(wv) if mu is None else mu.values[cells]
    return float(np.sum(wv * mv) / np.sum(mv) / wv.min())


def ainf_constant(w: Weight, cubes: CubeFamily,
                  mu: Weight | None = None) -> ConstantEstimate:
    """Fujii-Wilson diagnostic sup_Q int_Q M_mu(w chi_Q) dmu / (w dmu)(Q).

    Uses the unshifted dyadic tree (both for the sup and for the localized
    maximal operator), where the tree recursion makes the evaluation exact
    in O(N log N).
    """
    grid = cubes.grid
    n = grid.n
    wv = w.values
    muv = np.ones(grid.ncells) if mu is None else mu.values
    wm = wv * muv
    local_max = wv.copy()  # level-L local maximal: the cell average itself
    best = 1.0
    best_cube = (grid.L, 0)
    for level in range(grid.L - 1, -1, -1):
        k = 1 << level
        if grid.d == 1:
            blk = n // k
            wm_c = wm.reshape(k, blk).sum(axis=1)
            mu_c = muv.reshape(k, blk).sum(axis=1)
            avg = wm_c / mu_c
            local_max = np.maximum(local_max.reshape(k, blk), avg[:, None]).reshape(-1)
            fw = (local_max * muv).reshape(k, blk).sum(axis=1) / wm_c
        else:
            blk = n // k
            shape = (k, blk, k, blk)
            wm_c = wm.reshape(shape).sum(axis=(1, 3))
            mu_c = muv.reshape(shape).sum(axis=(1, 3))
            avg = (wm_c / mu_c)[:, None, :, None]
            local_max = np.maximum(local_max.reshape(shape), avg).reshape(-1)
            fw = ((local_max * muv).reshape(shape).sum(axis=(1, 3)) / wm_c).reshape(-1)
        j = int(np.argmax(fw))
        if fw.flat[j] > best:
            best = float(fw.flat[j])
            best_cube = (level, j)
    level, j = best_cube
    witness = _tree_cube(grid, level, j)
    return ConstantEstimate(best, witness, f"dyadic-tree[0..{grid.L}]", grid.L,
                            {"kind": "FujiiWilson"})


def _tree_cube(grid: Grid, level: int, flat: int):
    from .grid import DyadicCube
    side = 1 << (grid.L - level)
    if grid.d == 1:
        k = flat
        return DyadicCube(1, grid.L, level, (k,), (0,),
                          ((k * side, (k + 1) * side),))
    k1, k2 = divmod(flat, 1 << level)
    return DyadicCube(2, grid.L, level, (k1, k2), (0, 0),
                      ((k1 * side, (k1 + 1) * side), (k2 * side, (k2 + 1) * side)))


P_PRIME_CUTOFF = 1e-12


def _is_one(p: float) -> bool:
    return p <= 1.0 + P_PRIME_CUTOFF


def apvec_constant(vec: WeightVector, cubes: CubeFamily) -> ConstantEstimate:
    """Strong multilinear characteristic: composite average to the 1/p times
    the dual-exponent averages; p_i = 1 uses the ess-inf factor."""
    sysm = vec.system
    p = sysm.p_total
    terms = (cubes.sums(vec.composite().values) / cubes.cube_ncells) ** (1.0 / p)
    for wi, pi in zip(vec.weights, sysm.p):
        if _is_one(pi):
            terms /= cubes.mins(wi.values)
        else:
            pip = pi / (pi - 1.0)
            terms *= (cubes.sums(wi.values ** (1.0 - pip)) /
                      cubes.cube_ncells) ** (1.0 / pip)
    return argmax_estimate(terms, cubes, kind="Apvec")


def apr_constant(vec: WeightVector, cubes: CubeFamily) -> ConstantEstimate:
    """Restricted characteristic in the (dx/|Q|) formulation: composite
    delta_{m+1}-average times weak-norm factors of w_i^(-1/p_i)."""
    sysm = vec.system
    d_m1 = sysm.delta(sysm.m + 1)
    p = sysm.p_total
    comp = vec.composite().values
    terms = (cubes.sums(comp ** (d_m1 / p)) / cubes.cube_ncells) ** (1.0 / d_m1)
    unit = np.ones(vec.grid.ncells)
    for i, (wi, pi) in enumerate(zip(vec.weights, sysm.p), start=1):
        di = sysm.delta(i)
        fvals = wi.values ** (-1.0 / pi)
        if math.isinf(di):
            terms *= cubes.maxs(fvals)
        else:
            # masses dx/|Q|: raw cell counts, normalized per cube afterwards
            raw = cubes.weak_norms(fvals, unit, 1.0 / di)
            terms *= raw / cubes.cube_ncells ** (1.0 / di)
    return argmax_estimate(terms, cubes, kind="AprR")


def apr_r1_constant(vec: WeightVector, cubes: CubeFamily) -> ConstantEstimate:
    """Restricted characteristic in the (w_i/|Q|) formulation (the r = 1
    presentation): weak-norm factors of chi_Q w_i^{-1} against w_i/|Q|."""
    sysm = vec.system
    p = sysm.p_total
    comp = vec.composite().values
    terms = (cubes.sums(comp) / cubes.cube_ncells) ** (1.0 / p)
    for wi, pi in zip(vec.weights, sysm.p):
        if _is_one(pi):
            terms *= cubes.maxs(1.0 / wi.values)
        else:
            pip = pi / (pi - 1.0)
            raw = cubes.weak_norms(1.0 / wi.values, wi.values, 1.0 / pip)
            terms *= raw / cubes.cube_ncells ** (1.0 / pip)
    return argmax_estimate(terms, cubes, kind="AprR1")


def one_weight_restricted_constant(w: Weight, s: float, cubes: CubeFamily) -> ConstantEstimate:
    """sup_Q (avg_Q w)^(1/s) ||chi_Q w^(-1/s)||_{L^{s',inf}(dx/|Q|)}."""
    single = WeightVector((w,), ExponentSystem((s,), (1.0, 1.0), (s,)))
    est = apr_constant(single, cubes)
    est.details["kind"] = "one-weight-restricted"
    return est


def lemma_doubling_check(vec: WeightVector, cubes: CubeFamily) -> dict:
    """Composite-regularity check: the one-weight restricted characteristic
    of w^(delta_{m+1}/p) at exponent (1/r - 1) delta_{m+1} against the
    vector characteristic to the power r/(1-r)."""
    sysm = vec.system
    d_m1 = sysm.delta(sysm.m + 1)
    r = sysm.r_total
    s = (1.0 / r - 1.0) * d_m1
    comp = vec.composite()
    W = Weight(vec.grid, comp.values ** (d_m1 / sysm.p_total))
    measured = one_weight_restricted_constant(W, s, cubes)
    apr = apr_constant(vec, cubes)
    bound = apr.value ** (r / (1.0 - r))
    return {"measured": measured.value, "apr": apr.value, "bound": bound,
            "ratio": measured.value / bound, "s": s}


# -- hat-class constructions -------------------------------------------------

def hat_ar_construct(u1: Weight, g: GridFunction, r: float, mu: Weight | None,
                     cubes: CubeFamily | None = None) -> Weight:
    """v = u1 * (M_mu g)^(1-r); r = 1 returns u1 itself."""
    if not r >= 1:
        raise ConfigurationError(f"need r >= 1, got {r}")
    if g.values.max() == 0.0:
        raise ValueError("need a nonzero g")
    if cubes is None:
        cubes = cube_family(u1.grid)
    if r == 1.0:
        return Weight(u1.grid, u1.values, meta={"kind": "hat_ar", "r": 1.0})
    mg = maximal(g, MaximalConfig(cubes, mu)).values
    return Weight(u1.grid, u1.values * mg ** (1.0 - r),
                  meta={"kind": "hat_ar", "r": r})


def hat_arq_construct(u1: Weight, g: GridFunction, r: float, q: float,
                      mu: Weight | None, cubes: CubeFamily | None = None) -> Weight:
    """v with v^q = u1 * (M_mu g)^(-q/r'), i.e. v^q in the hat class of
    exponent 1 + q/r'; r = 1 returns u1^(1/q)."""
    if not r >= 1:
        raise ConfigurationError(f"need r >= 1, got {r}")
    if not q > 0:
        raise ConfigurationError(f"need q > 0, got {q}")
    if g.values.max() == 0.0:
        raise ValueError("need a nonzero g")
    if cubes is None:
        cubes = cube_family(u1.grid)
    if r == 1.0:
        vals = u1.values ** (1.0 / q)
    else:
        rp = r / (r - 1.0)
        mg = maximal(g, MaximalConfig(cubes, mu)).values
        vals = (u1.values * mg ** (-q / rp)) ** (1.0 / q)
    return Weight(u1.grid, vals, meta={"kind": "hat_arq", "r": r, "q": q})


# -- generators --------------------------------------------------------------

def _power_cell_averages(grid: Grid, a: float) -> np.ndarray:
    """Exact cell averages of x^a along one axis (antiderivative form)."""
    n = grid.n
    edges = np.arange(n + 1) / n
    if a == 0.0:
        return np.ones(n)
    prim = edges ** (a + 1.0) / (a + 1.0)
    return (prim[1:] - prim[:-1]) * n


def power_weight(grid: Grid, a: float) -> Weight:
    """Separable power weight prod_axes x_j^a with exact cell averages."""
    if not a > -1.0 / grid.d:
        raise ConfigurationError(
            f"power exponent must exceed -1/d = {-1.0 / grid.d}, got {a}")
    axis = _power_cell_averages(grid, a)
    if grid.d == 1:
        vals = axis
    else:
        vals = np.multiply.outer(axis, axis).reshape(-1)
    return Weight(grid, vals, meta={"kind": "power", "a": a})


def weight_generators(kind: str, params: dict, seed: int, grid: Grid) -> Weight:
    """Deterministic weight for (kind, params, seed).

    Kinds: constant, power (x^a, exact cell averages), product_power
    (per-axis exponents), rdf (Rubio de Francia sum over a random sparse
    indicator), indicator_smoothed (floored, neighbor-averaged indicator).
    """
    rng = np.random.default_rng(seed)
    if kind == "constant":
        return Weight(grid, np.full(grid.ncells, float(params.get("c", 1.0))),
                      meta={"kind": kind, **params, "seed": seed})
    if kind == "power":
        w = power_weight(grid, float(params["a"]))
        w.meta["seed"] = seed
        return w
    if kind == "product_power":
        exps = [float(a) for a in params["a"]]
        if len(exps) != grid.d:
            raise ConfigurationError("product_power needs one exponent per axis")
        axes = []
        for a in exps:
            if not a > -1.0:
                raise ConfigurationError(f"axis exponent must exceed -1, got {a}")
            axes.append(_power_cell_averages(grid, a))
        vals = axes[0] if grid.d == 1 else np.multiply.outer(axes[0], axes[1]).reshape(-1)
        return Weight(grid, vals, meta={"kind": kind, "a": exps, "seed": seed})
    if kind == "rdf":
        density = float(params.get("density", 0.05))
        k = int(params.get("k", 8))
        vals = (rng.random(grid.ncells) < density).astype(np.float64)
        if vals.max() == 0.0:
            vals[int(rng.integers(grid.ncells))] = 1.0
        cubes = cube_family(grid, shifted=bool(params.get("shifted", False)))
        w = rdf_iterate(GridFunction(grid, vals), k, MaximalConfig(cubes, None))
        w.meta.update({"kind": "rdf", "seed": seed, "density": density})
        return w
    if kind == "indicator_smoothed":
        density = float(params.get("density", 0.25))
        floor = float(params.get("floor", 2.0 ** -10))
        passes = int(params.get("passes", 2))
        vals = (rng.random(grid.ncells) < density).astype(np.float64)
        for _ in range(passes):
            vals = 0.5 * vals + 0.25 * (np.roll(vals, 1) + np.roll(vals, -1))
        return Weight(grid, np.maximum(vals, floor),
                      meta={"kind": kind, "seed": seed, "density": density,
                            "floor": floor, "passes": passes})
    raise ConfigurationError(f"unknown weight kind {kind!r}")


def random_indicator(grid: Grid, rng, density: float = 0.25) -> GridFunction:
    """Random union of cells as a 0/1 grid function (never empty)."""
    vals = (rng.random(grid.ncells) < density).astype(np.float64)
    if vals.max() == 0.0:
        vals[int(rng.integers(grid.ncells))] = 1.0
    return GridFunction(grid, vals)


def make_weight_vector(system: ExponentSystem, specs, seed: int,
                       grid: Grid) -> WeightVector:
    """Weight vector from per-component generator descriptors."""
    weights = []
    for j, spec in enumerate(specs):
        kind, params = spec["kind"], {k: v for k, v in spec.items() if k != "kind"}
        weights.append(weight_generators(kind, params, seed + 1000 * j, grid))
    return WeightVector(tuple(weights), system)


# -- serialization -----------------------------------------------------------

def save_weight_vector(vec: WeightVector, base: str | Path,
                       characteristics: dict | None = None) -> None:
    """CSV bundle w1..wm plus a JSON manifest with provenance and audits."""
    base = Path(base)
    base.mkdir(parents=True, exist_ok=True)
    for i, w in enumerate(vec.weights, start=1):
        save_grid_function(w, base / f"w{i}")
    manifest = {
        "schema_version": 1,
        "m": vec.system.m,
        "p": list(vec.system.p),
        "r": list(vec.system.r),
        "alpha": list(vec.system.alpha),
        "components": [w.meta for w in vec.weights],
        "characteristics": characteristics or {},
    }
    with open(base / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def load_weight_vector(base: str | Path) -> WeightVector:
    base = Path(base)
    with open(base / "manifest.json") as fh:
        manifest = json.load(fh)
    system = ExponentSystem(tuple(manifest["p"]), tuple(manifest["r"]),
                            tuple(manifest["alpha"]))
    weights = tuple(load_weight_vector_component(base / f"w{i}")
                    for i in range(1, manifest["m"] + 1))
    return WeightVector(weights, system)


def load_weight_vector_component(base: str | Path) -> Weight:
    f = load_grid_function(base)
    return f if isinstance(f, Weight) else Weight(f.grid, f.values, f.meta)
