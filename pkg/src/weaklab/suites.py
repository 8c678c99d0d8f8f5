"""Verification suites: named batch experiments over random corpora.

Each suite consumes a config dict (see ``weaklab/configs``) and returns
rows plus a dict of measured batch statistics.  Golden comparisons against
the config's ``golden`` section are appended by the runner, never here, so
the frozen values live only in the config corpus.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import applications as apps
from . import extrapolation as xp
from .grid import (ConfigurationError, DyadicCube, Grid, GridFunction, Weight,
                   cube_family, make_grid, ones)
from .lorentz import (level_sup_and_weak, lorentz_values,
                      norm_equivalence_check, weak_values)
from .maximal import MaximalConfig, maximal, multilinear_maximal
from .weights import (ExponentSystem, WeightVector, a1_constant, ainf_constant,
                      apr_constant, apr_r1_constant, apvec_constant,
                      random_indicator, weight_generators)

RATIO_BAND = (2.0 ** -4, 2.0 ** 4)  # frozen two-sided norm-equivalence band


@dataclass
class ReportRecord:
    suite: str
    case_id: str
    resolution: int
    lhs: float
    rhs: float
    constant: float
    witness: str
    passed: bool


@dataclass
class SuiteResult:
    rows: list = field(default_factory=list)
    measured: dict = field(default_factory=dict)

    def add(self, suite, case_id, resolution, lhs, rhs, constant, witness, passed):
        self.rows.append(ReportRecord(suite, case_id, resolution, float(lhs),
                                      float(rhs), float(constant), witness,
                                      bool(passed)))


def _rng(seed: int, *ids) -> np.random.Generator:
    return np.random.default_rng([int(seed)] + [int(i) for i in ids])


def _prolong(values: np.ndarray, base: Grid, grid: Grid) -> np.ndarray:
    """Block-refine cell values from a coarse grid to a finer one."""
    if grid.L < base.L:
        raise ConfigurationError("cannot prolong to a coarser grid")
    k = 1 << (grid.L - base.L)
    if base.d == 1:
        return np.repeat(values, k)
    nb = base.n
    v = values.reshape(nb, nb)
    return np.repeat(np.repeat(v, k, axis=0), k, axis=1).reshape(-1)


def suite_weight(kind: str, params: dict, seed: int, grid: Grid,
                 base_level: int = 6) -> Weight:
    """Weight generator that is consistent across refinement levels.

    Analytic kinds regenerate exactly; seeded kinds are built once at
    ``base_level`` and block-refined so the same function exists at every
    resolution of a sweep.
    """
    if kind in ("power", "product_power", "constant") or grid.L <= base_level:
        return weight_generators(kind, params, seed, grid)
    base = make_grid(grid.d, base_level)
    w = weight_generators(kind, params, seed, base)
    return Weight(grid, _prolong(w.values, base, grid), meta=w.meta)


def suite_indicator(seed: int, grid: Grid, density: float = 0.25,
                    base_level: int = 6, case: int = 0) -> GridFunction:
    base = make_grid(grid.d, min(base_level, grid.L))
    f = random_indicator(base, _rng(seed, case, 77), density)
    return GridFunction(grid, _prolong(f.values, base, grid))


def suite_staircase(seed: int, grid: Grid, case: int = 0, pieces: int = 6,
                    base_level: int = 6) -> GridFunction:
    """Random dyadic-height staircase with a genuinely occupied zero set."""
    base = make_grid(grid.d, min(base_level, grid.L))
    rng = _rng(seed, case, 91)
    vals = np.zeros(base.ncells)
    for _ in range(pieces):
        a, b = sorted(rng.integers(0, base.ncells, size=2))
        vals[a:b + 1] += 2.0 ** rng.integers(-3, 4)
    if vals.max() == 0.0:
        vals[0] = 1.0
    return GridFunction(grid, _prolong(vals, base, grid))


def _geometric_cube(grid: Grid, level: int, ks) -> DyadicCube:
    side = 1 << (grid.L - level)
    bounds = tuple((k * side, (k + 1) * side) for k in ks)
    return DyadicCube(grid.d, grid.L, level, tuple(ks),
                      tuple(0 for _ in ks), bounds)


def _band_ok(x: float, band=RATIO_BAND) -> bool:
    return band[0] <= x <= band[1]


# ---------------------------------------------------------------------------
# identity suite

def run_identity(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    grid = make_grid(gcfg["d"], gcfg["L"])
    shifted = bool(cfg.get("cube_family", {}).get("shifted", False))
    fam = cube_family(grid, shifted)
    one = ones(grid)
    tol = 1e-9

    systems = {
        "p22_r111": ExponentSystem((2.0, 2.0), (1.0, 1.0, 1.0), (1.0, 1.0)),
        "p22_r221": ExponentSystem((2.0, 2.0), (2.0, 2.0, 1.0), (1.0, 1.0)),
        "p32_r121": ExponentSystem((3.0, 2.0), (1.0, 2.0, 1.0), (1.0, 1.0)),
        "p11_r111": ExponentSystem((1.0, 1.0), (1.0, 1.0, 1.0), (1.0, 1.0)),
    }
    for name, sysm in systems.items():
        vec = WeightVector((one, one), sysm)
        for label, est in (("apr", apr_constant(vec, fam)),
                           ("apr_r1", apr_r1_constant(vec, fam)),
                           ("apvec", apvec_constant(vec, fam))):
            res.add("identity", f"{label}:{name}", grid.L, est.value, 1.0,
                    est.value, str(est.witness), abs(est.value - 1.0) <= tol)
    a1 = a1_constant(one, one, fam)
    res.add("identity", "a1:ones", grid.L, a1.value, 1.0, a1.value,
            str(a1.witness), abs(a1.value - 1.0) <= tol)
    ainf = ainf_constant(one, fam)
    res.add("identity", "ainf:ones", grid.L, ainf.value, 1.0, ainf.value,
            str(ainf.witness), abs(ainf.value - 1.0) <= tol)

    # indicator Lorentz norms against w(E)^(1/p), exact to 1e-12
    seed = cfg["seed"]
    for case in range(int(cfg.get("cases", 8))):
        rng = _rng(seed, case)
        w = suite_weight("indicator_smoothed", {"density": 0.5}, seed + case, grid)
        e = random_indicator(grid, rng)
        we = float(np.sum(w.values[e.values > 0])) * grid.cell_volume
        p = 0.5 + 3.5 * rng.random()
        q = rng.choice([0.5, 1.0, p, 2.0, math.inf])
        nrm = lorentz_values(e.values, w.values * grid.cell_volume, p, float(q))
        ref = we ** (1.0 / p)
        ok = abs(nrm - ref) <= 1e-12 * max(ref, 1e-300)
        res.add("identity", f"indicator:{case}", grid.L, nrm, ref,
                nrm / ref if ref else 1.0, f"p={p:.3f},q={q}", ok)

    # maximal operators applied to constants (dyadic-rational constants
    # make every cube average exact in binary floating point)
    for c in (1.0, 0.75, 3.0):
        mc = maximal(GridFunction(grid, np.full(grid.ncells, c)),
                     MaximalConfig(fam, None)).values
        ok = bool(np.all(mc == c))
        res.add("identity", f"maximal:const{c}", grid.L, float(mc.max()), c,
                float(mc.max()) / c, "-", ok)
    mm = multilinear_maximal(
        [GridFunction(grid, np.full(grid.ncells, 0.5)),
         GridFunction(grid, np.full(grid.ncells, 3.0))],
        MaximalConfig(fam, None)).values
    res.add("identity", "mmax:const", grid.L, float(mm.max()), 1.5,
            float(mm.max()) / 1.5, "-", bool(np.all(mm == 1.5)))
    return res


# ---------------------------------------------------------------------------
# exponent algebra suite

def _draw_system(rng) -> ExponentSystem:
    m = int(rng.integers(1, 5))
    p = tuple(1.0 + 7.0 * rng.random() for _ in range(m))
    r = tuple(1.0 + (pi - 1.0) * rng.random() for pi in p)
    p_total = 1.0 / sum(1.0 / pi for pi in p)
    if p_total <= 1.0:
        r_last = 1.0 + 7.0 * rng.random()
    else:
        cap = min(8.0, 0.999 * p_total / (p_total - 1.0))
        r_last = 1.0 + (cap - 1.0) * rng.random()
    alpha = tuple(pi * (0.05 + 0.95 * rng.random()) for pi in p)
    return ExponentSystem(p, r + (r_last,), alpha)


def _draw_offdiag(rng) -> xp.OffDiagExponents:
    p0 = 1.0 + 7.0 * rng.random()
    r0 = 1.0 + (p0 - 1.0) * rng.random()
    s0 = 0.3 + 15.7 * rng.random()
    q0 = s0 * (0.05 + 0.9 * rng.random())
    alpha = p0 * (0.05 + 0.95 * rng.random())
    return xp.OffDiagExponents(r0, p0, q0, s0, alpha)


def run_exponents(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    seed = cfg["seed"]
    draws = int(cfg.get("cases", 1000))
    tol = 1e-12
    block = 100
    worst_sys = worst_off = 0.0
    for start in range(0, draws, block):
        wa = wb = 0.0
        for i in range(start, min(start + block, draws)):
            rng = _rng(seed, i)
            wa = max(wa, max(_draw_system(rng).identity_residuals().values()))
            wb = max(wb, max(_draw_offdiag(rng).identity_residuals().values()))
        worst_sys = max(worst_sys, wa)
        worst_off = max(worst_off, wb)
        res.add("exponents", f"system:[{start}:{start + block})", 0, wa, tol,
                wa / tol, "-", wa <= tol)
        res.add("exponents", f"offdiag:[{start}:{start + block})", 0, wb, tol,
                wb / tol, "-", wb <= tol)
    res.measured["max_system_residual"] = worst_sys
    res.measured["max_offdiag_residual"] = worst_off
    return res


# ---------------------------------------------------------------------------
# Lemma 3.3 equivalence suite

_WEIGHT_ROTATION = (
    ("power", {"a": 0.5}), ("power", {"a": -0.4}),
    ("rdf", {"k": 6, "density": 0.05}),
    ("indicator_smoothed", {"density": 0.3}),
    ("power", {"a": 2.0}), ("constant", {"c": 3.0}),
)


def run_lemma33(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    levels = gcfg.get("levels") or [gcfg["L"]]
    seed = cfg["seed"]
    cases = int(cfg.get("cases", 200))
    max_ratio = 0.0
    for case in range(cases):
        rng = _rng(seed, case)
        kind, params = _WEIGHT_ROTATION[case % len(_WEIGHT_ROTATION)]
        q = 1.0 + 3.0 * rng.random()
        a = 0.05 + 0.9 * rng.random()
        b = 0.95 * rng.random()
        lvl = int(rng.integers(0, 6))
        ks = tuple(int(rng.integers(0, 1 << lvl)) for _ in range(gcfg["d"]))
        ratios = {}
        for L in levels:
            grid = make_grid(gcfg["d"], L)
            v = suite_weight(kind, params, seed + case, grid)
            Q = _geometric_cube(grid, lvl, ks)
            rep = norm_equivalence_check(v, Q, q, a, b)
            ratios[L] = rep.ratio
            if L == levels[0]:
                res.add("lemma33", f"equiv:{case}", L, rep.lhs, rep.rhs,
                        rep.ratio, str(Q), _band_ok(rep.ratio))
                max_ratio = max(max_ratio, rep.ratio, 1.0 / rep.ratio)
                s, weak = level_sup_and_weak(v, Q, q)
                ok = (s <= weak * (1 + 1e-9)) and (weak <= 2.0 * s * (1 + 1e-9))
                res.add("lemma33", f"ladder:{case}", L, s, weak,
                        weak / s if s > 0 else math.inf, str(Q), ok)
        for la, lb in zip(levels, levels[1:]):
            drift = ratios[la] / ratios[lb]
            res.add("lemma33", f"drift:{case}:{la}->{lb}", lb, ratios[la],
                    ratios[lb], drift, "-", 0.5 <= drift <= 2.0)
    res.measured["max_two_sided_ratio"] = max_ratio
    return res


# ---------------------------------------------------------------------------
# Remark 3.4: the two characteristic formulations agree

def run_remark34(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    grid = make_grid(gcfg["d"], gcfg["L"])
    fam = cube_family(grid, bool(cfg.get("cube_family", {}).get("shifted", False)))
    seed = cfg["seed"]
    cases = int(cfg.get("cases", 100))
    worst = 1.0
    for case in range(cases):
        rng = _rng(seed, case)
        p = tuple(1.0 + 3.0 * rng.random() if rng.random() > 0.2 else 1.0
                  for _ in range(2))
        sysm = ExponentSystem(p, (1.0, 1.0, 1.0), p)
        kinds = (_WEIGHT_ROTATION[case % len(_WEIGHT_ROTATION)],
                 _WEIGHT_ROTATION[(case + 3) % len(_WEIGHT_ROTATION)])
        vec = WeightVector(
            tuple(suite_weight(k, prm, seed + 17 * case + j, grid)
                  for j, (k, prm) in enumerate(kinds)), sysm)
        x = apr_constant(vec, fam)
        y = apr_r1_constant(vec, fam)
        ratio = x.value / y.value
        worst = max(worst, ratio, 1.0 / ratio)
        res.add("remark34", f"case:{case}", grid.L, x.value, y.value, ratio,
                str(x.witness), _band_ok(ratio))
    res.measured["max_formulation_ratio"] = worst
    return res


# ---------------------------------------------------------------------------
# restricted weak type of the multilinear maximal

def run_maximal_rwt(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    levels = gcfg.get("levels") or [gcfg["L"]]
    seed = cfg["seed"]
    cases = int(cfg.get("cases", 100))
    growth_cap = float(cfg.get("thresholds", {}).get("growth_per_level", 1.5))
    batch_max = {}
    for L in levels:
        grid = make_grid(gcfg["d"], L)
        fam = cube_family(grid, False)
        cfg_m = MaximalConfig(fam, None)
        worst = 0.0
        for case in range(cases):
            rng = _rng(seed, case)
            a1, a2 = (float(rng.uniform(-0.45, 0.45)) for _ in range(2))
            w1 = weight_generators("power", {"a": a1}, seed, grid)
            w2 = weight_generators("power", {"a": a2}, seed, grid)
            sysm = ExponentSystem((2.0, 2.0), (1.0, 1.0, 1.0), (1.0, 1.0))
            vec = WeightVector((w1, w2), sysm)
            e = suite_indicator(seed, grid, 0.3, case=2 * case)
            fch = suite_indicator(seed, grid, 0.3, case=2 * case + 1)
            mm = multilinear_maximal([e, fch], cfg_m)
            comp = vec.composite()
            lhs = weak_values(mm.values, comp.values * grid.cell_volume, 1.0)
            vol = grid.cell_volume
            rhs = math.sqrt(float(np.sum(w1.values[e.values > 0])) * vol) \
                * math.sqrt(float(np.sum(w2.values[fch.values > 0])) * vol)
            const = lhs / rhs
            worst = max(worst, const)
            if L == levels[-1]:
                res.add("maximal_rwt", f"case:{case}", L, lhs, rhs, const,
                        "-", math.isfinite(const))
        batch_max[L] = worst
        res.add("maximal_rwt", f"batch_max:L{L}", L, worst, 0.0, worst, "-",
                math.isfinite(worst))
    for la, lb in zip(levels, levels[1:]):
        g = batch_max[lb] / batch_max[la]
        res.add("maximal_rwt", f"growth:{la}->{lb}", lb, batch_max[lb],
                batch_max[la], g, "-", g <= growth_cap)
    res.measured["batch_max"] = batch_max[levels[-1]]
    res.measured["stability_factor"] = max(
        max(batch_max[lb] / batch_max[la], batch_max[la] / batch_max[lb])
        for la, lb in zip(levels, levels[1:])) if len(levels) > 1 else 1.0
    return res


# ---------------------------------------------------------------------------
# Sawyer-type inequality suite

def run_sawyer(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    grid = make_grid(gcfg["d"], gcfg["L"])
    fam = cube_family(grid, bool(cfg.get("cube_family", {}).get("shifted", False)))
    seed = cfg["seed"]
    cases = int(cfg.get("cases", 100))
    mu = weight_generators("power", {"a": -0.3}, seed, grid)
    u = suite_weight("rdf", {"k": 6, "density": 0.05}, seed + 1, grid)
    v = weight_generators("power", {"a": 0.25}, seed + 2, grid)
    worst = 0.0
    for case in range(cases):
        f = suite_staircase(seed, grid, case=case, base_level=grid.L)
        rep = xp.sawyer_ratio(f, u, v, mu, fam)
        worst = max(worst, rep.ratio)
        res.add("sawyer", f"case:{case}", grid.L, rep.numerator,
                rep.denominator, rep.ratio, f"a1={rep.a1_u:.3g}",
                math.isfinite(rep.ratio))
    res.measured["max_ratio"] = worst

    # dyadic indicator endpoint: unit weights, unshifted family, ratio <= 1
    one = ones(grid)
    plain = cube_family(grid, False)
    for case in range(8):
        e = random_indicator(grid, _rng(seed, 900 + case))
        rep = xp.sawyer_ratio(e, one, one, one, plain)
        res.add("sawyer", f"indicator:{case}", grid.L, rep.numerator,
                rep.denominator, rep.ratio, "-", rep.ratio <= 1.0 + 1e-12)
    return res


# ---------------------------------------------------------------------------
# off-diagonal pipeline suite

def run_offdiag(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    grid = make_grid(gcfg["d"], gcfg["L"])
    fam = cube_family(grid, bool(cfg.get("cube_family", {}).get("shifted", False)))
    seed = cfg["seed"]
    blocks = cfg.get("params", {}).get("exponent_blocks",
                                       [{"r0": 1.0, "p0": 2.0, "q0": 1.25,
                                         "s0": 4.0, "alpha": 1.0}])
    reps = int(cfg.get("cases", 3))
    for bi, blk in enumerate(blocks):
        X = xp.OffDiagExponents(blk["r0"], blk["p0"], blk["q0"], blk["s0"],
                                blk["alpha"])
        for case in range(reps):
            rng = _rng(seed, 5000 + 31 * case + bi)
            # case 0 is the canonical unweighted pair; the rest draw from a
            # moderate-range A_1 corpus (spiky weights genuinely destroy the
            # flatness of the conclusion profile, which is a finding, not a
            # target of this suite)
            if case == 0:
                mu = ones(grid)
                u1 = ones(grid)
            elif case % 2:
                mu = weight_generators("power", {"a": -0.2}, seed, grid)
                u1 = weight_generators(
                    "power", {"a": -0.15 * float(rng.random())}, seed, grid)
            else:
                mu = ones(grid)
                u1 = suite_weight("rdf", {"k": 4, "density": 0.5},
                                  seed + 31 * case + bi, grid,
                                  base_level=grid.L)
            w = Weight(grid, u1.values ** (X.r0 / X.delta1))
            # a narrow spike: its maximal majorant decays across all
            # octaves, which is what the conclusion-profile check probes
            fvals = np.zeros(grid.ncells)
            width = int(rng.integers(4, 12))
            pos = int(rng.integers(0, grid.ncells - width))
            fvals[pos:pos + width] = 2.0 ** rng.integers(0, 4)
            f = GridFunction(grid, fvals)
            g = maximal(f, MaximalConfig(fam, mu))
            rep = xp.offdiag_verify(f, g, w, mu, X, fam)
            cid = f"block{bi}:case{case}"
            for c in rep.cases:
                step_ok = ((c.estimate_e is None or c.estimate_e.chain_ok())
                           and (c.estimate_f is None or c.estimate_f.chain_ok()))
                res.add("offdiag", f"{cid}:y={c.y:.6g}", grid.L, c.lhs,
                        rep.details["norm_w"], c.constant,
                        f"gamma={c.gamma:.4g}",
                        c.masks_ok and c.gamma_ok and step_ok)
            res.add("offdiag", f"{cid}:spread", grid.L, rep.spread, 4.0,
                    rep.spread, f"a1={rep.a1_audit:.3g}", rep.passed)
            res.measured[f"spread:{cid}"] = rep.spread
    return res


# ---------------------------------------------------------------------------
# Proposition 3.1 suite

def run_prop31(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    levels = gcfg.get("levels") or [gcfg["L"]]
    seed = cfg["seed"]
    cases_a = int(cfg.get("params", {}).get("cases_a", 20))
    cases_b = int(cfg.get("params", {}).get("cases_b", 10))
    top = levels[-1]

    grid = make_grid(gcfg["d"], top)
    fam = cube_family(grid, False)
    sys_a = ExponentSystem((2.0, 1.5), (1.0, 1.5, 1.0), (1.0, 1.0))
    for case in range(cases_a):
        k1, prm1 = _WEIGHT_ROTATION[case % len(_WEIGHT_ROTATION)]
        k2, prm2 = _WEIGHT_ROTATION[(case + 2) % len(_WEIGHT_ROTATION)]
        vec = WeightVector((suite_weight(k1, prm1, seed + case, grid),
                            suite_weight(k2, prm2, seed + case + 501, grid)),
                           sys_a)
        rep = xp.impli_a_check(vec, fam)
        res.add("prop31", f"a:forward:{case}", top, rep.full,
                rep.reduced * rep.a1_last ** (1.0 / sys_a.rho),
                rep.forward_excess, f"rev=({rep.reverse_reduced:.3g},"
                f"{rep.reverse_a1:.3g})", rep.forward_ok)
    # adversarial non-A1 last slot: the inequality is between computed
    # numbers homogeneous in the inputs, so it still holds
    spike = np.ones(grid.ncells)
    spike[grid.ncells // 3] = 2.0 ** 20
    vec = WeightVector((weight_generators("power", {"a": 0.3}, seed, grid),
                        Weight(grid, 1.0 / spike)), sys_a)
    rep = xp.impli_a_check(vec, fam)
    res.add("prop31", "a:spike", top, rep.full,
            rep.reduced * rep.a1_last ** (1.0 / sys_a.rho),
            rep.forward_excess, f"a1={rep.a1_last:.3g}", rep.forward_ok)

    sys_b = ExponentSystem((2.0, 2.0), (1.0, 1.0, 1.0), (1.0, 1.0))
    main1_worst = {}
    assembled_worst = {}
    for L in levels:
        gridl = make_grid(gcfg["d"], L)
        faml = cube_family(gridl, False)
        w_m1 = assembled = 0.0
        for case in range(cases_b):
            rng = _rng(seed, 7000 + case)
            head = suite_weight("power", {"a": float(rng.uniform(-0.4, 0.4))},
                                seed, gridl)
            u_m = suite_weight("rdf", {"k": 6, "density": 0.08},
                               seed + 13 * case, gridl)
            g = suite_indicator(seed, gridl, 0.2, case=case)
            vec, rep = xp.impli_b_construct([head], u_m, g, sys_b, faml)
            w_m1 = max(w_m1, rep.main1_max_ratio)
            assembled = max(assembled, rep.assembled_constant)
            if L == top:
                res.add("prop31", f"b:case:{case}", L, rep.main1_max_ratio,
                        rep.assembled_constant, rep.main1_max_ratio,
                        rep.main1_witness, math.isfinite(rep.assembled_constant))
        main1_worst[L] = w_m1
        assembled_worst[L] = assembled
    for la, lb in zip(levels, levels[1:]):
        drift = assembled_worst[lb] / assembled_worst[la]
        res.add("prop31", f"b:stability:{la}->{lb}", lb, assembled_worst[lb],
                assembled_worst[la], drift, "-", 0.5 <= drift <= 2.0)
    res.measured["main1_max_ratio"] = main1_worst[top]
    res.measured["assembled_max"] = assembled_worst[top]
    res.measured["stability_factor"] = max(
        max(assembled_worst[lb] / assembled_worst[la],
            assembled_worst[la] / assembled_worst[lb])
        for la, lb in zip(levels, levels[1:])) if len(levels) > 1 else 1.0
    return res


# ---------------------------------------------------------------------------
# endpoint (Theorem 1.1 / 1.2) suite

def run_endpoint(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    levels = gcfg.get("levels") or [gcfg["L"]]
    seed = cfg["seed"]
    cases = int(cfg.get("cases", 50))
    top = levels[-1]
    batch_max = {}
    for L in levels:
        grid = make_grid(gcfg["d"], L)
        fam = cube_family(grid, False)
        worst = 0.0
        for case in range(cases):
            rng = _rng(seed, case)
            p = tuple(1.0 + 3.0 * rng.random() for _ in range(2))
            alpha = tuple(pi * (0.2 + 0.8 * rng.random()) for pi in p)
            sysm = ExponentSystem(p, (1.0, 1.0, 1.0), alpha)
            a_exps = (float(rng.uniform(-0.45, 0.0)),
                      float(rng.uniform(-0.45, 0.0)))
            vec = WeightVector(
                (weight_generators("power", {"a": a_exps[0]}, seed, grid),
                 weight_generators("power", {"a": a_exps[1]}, seed, grid)),
                sysm)
            fs = [suite_indicator(seed, grid, 0.3, case=2 * case),
                  suite_indicator(seed, grid, 0.3, case=2 * case + 1)]
            rep = xp.endpoint_verify(fs, vec, sysm, fam)
            worst = max(worst, rep.constant)
            if L == top:
                res.add("endpoint", f"case:{case}", L, rep.lhs, rep.rhs,
                        rep.constant, f"class={rep.class_constant:.3g}",
                        math.isfinite(rep.constant))
        batch_max[L] = worst
        res.add("endpoint", f"batch_max:L{L}", L, worst, 0.0, worst, "-",
                math.isfinite(worst))
    for la, lb in zip(levels, levels[1:]):
        g = batch_max[lb] / batch_max[la]
        res.add("endpoint", f"growth:{la}->{lb}", lb, batch_max[lb],
                batch_max[la], g, "-", max(g, 1.0 / g) <= 1.5)

    # alpha_i = p_i: the conclusion Lorentz index collapses to L^{r_i}
    grid = make_grid(gcfg["d"], top)
    for case in range(5):
        rng = _rng(seed, 8800 + case)
        f = suite_staircase(seed, grid, case=300 + case, base_level=grid.L)
        v = suite_weight("power", {"a": float(rng.uniform(-0.4, 0.5))},
                         seed, grid)
        nrm = lorentz_values(f.values, v.values * grid.cell_volume, 1.0, 1.0)
        direct = float(np.sum(f.values * v.values)) * grid.cell_volume
        ok = abs(nrm - direct) <= 1e-12 * max(direct, 1e-300)
        res.add("endpoint", f"index_identity:{case}", top, nrm, direct,
                nrm / direct if direct else 1.0, "-", ok)
    res.measured["batch_max"] = batch_max[top]
    res.measured["stability_factor"] = max(
        max(batch_max[lb] / batch_max[la], batch_max[la] / batch_max[lb])
        for la, lb in zip(levels, levels[1:])) if len(levels) > 1 else 1.0
    return res


# ---------------------------------------------------------------------------
# section-4 applications suite

def run_apps(cfg: dict) -> SuiteResult:
    res = SuiteResult()
    gcfg = cfg["grid"]
    levels = gcfg.get("levels") or [gcfg["L"]]
    top = levels[-1]
    seed = cfg["seed"]
    grid = make_grid(1, top)
    fam_sh = cube_family(grid, True)

    # N homogeneity (exact for power-of-two scalings) and the quarter check
    f = GridFunction(grid, (np.arange(grid.n) < grid.n // 4).astype(float))
    n1 = apps.operator_N(f, f).values
    n2 = apps.operator_N(GridFunction(grid, 4.0 * f.values),
                         GridFunction(grid, 0.5 * f.values)).values
    res.add("apps", "N:homogeneity", top, float(np.max(np.abs(n2 - 2.0 * n1))),
            0.0, 1.0, "-", bool(np.all(n2 == 2.0 * n1)))
    grid12 = make_grid(1, int(cfg.get("params", {}).get("quarter_level", 12)))
    f12 = GridFunction(grid12, (np.arange(grid12.n) < grid12.n // 4).astype(float))
    val = float(apps.operator_N(f12, f12).values[grid12.n // 2])
    res.add("apps", "N:quarter_point", grid12.L, val, 0.25, val / 0.25, "x=1/2",
            abs(val - 0.25) <= 0.02 * 0.25)

    # hypothesis constant and its lambda-invariance
    hyp_worst = 0.0
    for case in range(int(cfg.get("params", {}).get("hypothesis_cases", 10))):
        rng = _rng(seed, case)
        a, b = sorted(rng.integers(0, grid.n, size=2))
        c, d = sorted(rng.integers(0, grid.n, size=2))
        me = np.zeros(grid.ncells, dtype=bool)
        mf = np.zeros(grid.ncells, dtype=bool)
        me[a:b + 1] = True
        mf[c:d + 1] = True
        r1 = apps.hypothesis_check(me, mf, 1.0, 1.0, grid, fam_sh)
        r2 = apps.hypothesis_check(me, mf, 2.0, 3.0, grid, fam_sh)
        inv = abs(r1.constant - r2.constant) <= 1e-12 * max(r1.constant, 1e-300)
        hyp_worst = max(hyp_worst, r1.constant)
        res.add("apps", f"hypothesis:{case}", top, r1.constant, r2.constant,
                r1.constant / max(r2.constant, 1e-300),
                f"cell={r1.argmax_cell}", inv and r1.zero_consistent)
    res.measured["hypothesis_max"] = hyp_worst

    # Theorem 4.1 layer bound at q = 4
    sys41 = ExponentSystem((4.0, 4.0), (1.0, 1.0, 1.0), (0.5, 0.5))
    c_layer = c_norms = 0.0
    for case in range(int(cfg.get("params", {}).get("thm41_cases", 6))):
        rng = _rng(seed, 600 + case)
        vec = WeightVector(
            (weight_generators("power", {"a": float(rng.uniform(-0.2, 0.4))},
                               seed, grid),
             weight_generators("power", {"a": float(rng.uniform(-0.2, 0.4))},
                               seed, grid)), sys41)
        f1 = suite_staircase(seed, grid, case=400 + case, base_level=grid.L)
        f2 = suite_staircase(seed, grid, case=500 + case, base_level=grid.L)
        rep = apps.theorem41_bound_check(f1, f2, vec, 4.0, fam_sh)
        c_layer = max(c_layer, rep.c_layer)
        c_norms = max(c_norms, rep.c_norms)
        res.add("apps", f"thm41:{case}", top, rep.lhs_alpha, rep.layer_sum,
                rep.c_layer, f"class={rep.class_constant:.3g}",
                math.isfinite(rep.c_layer) and math.isfinite(rep.c_norms))
    res.measured["thm41_c_layer"] = c_layer
    res.measured["thm41_c_norms"] = c_norms

    # Corollary 4.2 endpoint across refinement levels
    batch_max = {}
    corr_cases = int(cfg.get("cases", 50))
    for L in levels:
        gridl = make_grid(1, L)
        faml = cube_family(gridl, False)
        worst = 0.0
        for case in range(corr_cases):
            rng = _rng(seed, 100 + case)
            vec = WeightVector(
                (weight_generators("power", {"a": float(rng.uniform(-0.45, 0.0))},
                                   seed, gridl),
                 weight_generators("power", {"a": float(rng.uniform(-0.45, 0.0))},
                                   seed, gridl)),
                ExponentSystem((1.0, 1.0), (1.0, 1.0, 1.0), (1.0, 1.0)))
            f1 = suite_indicator(seed, gridl, 0.25, case=700 + case)
            f2 = suite_indicator(seed, gridl, 0.25, case=800 + case)
            rep = apps.corollary_endpoint_check(f1, f2, vec, 2.0, faml)
            worst = max(worst, rep.constant)
            if L == top:
                res.add("apps", f"corollary:{case}", L, rep.lhs, rep.rhs,
                        rep.constant, f"class={rep.class_constant:.3g}",
                        math.isfinite(rep.constant))
        batch_max[L] = worst
    for la, lb in zip(levels, levels[1:]):
        g = batch_max[lb] / batch_max[la]
        res.add("apps", f"corollary:growth:{la}->{lb}", lb, batch_max[lb],
                batch_max[la], g, "-", max(g, 1.0 / g) <= 1.5)
    res.measured["corollary_max"] = batch_max[top]
    res.measured["stability_factor"] = max(
        max(batch_max[lb] / batch_max[la], batch_max[la] / batch_max[lb])
        for la, lb in zip(levels, levels[1:])) if len(levels) > 1 else 1.0

    # series aggregation (Minkowski for p > 1)
    sys_s = ExponentSystem((4.0, 4.0), (1.0, 1.0, 1.0), (1.0, 1.0))
    vec_s = WeightVector((ones(grid), ones(grid)), sys_s)
    fs = [suite_indicator(seed, grid, 0.3, case=901),
          suite_indicator(seed, grid, 0.3, case=902)]
    fam_u = cube_family(grid, False)
    rep1 = apps.series_sum_check(fs, vec_s, 2.0, [(1.0, 0)], fam_u)
    res.add("apps", "series:single", top, rep1.aggregate, rep1.component_sum,
            rep1.triangle_ratio, "-", abs(rep1.triangle_ratio - 1.0) <= 1e-9)
    rep2 = apps.series_sum_check(fs, vec_s, 2.0, [(0.5, 0), (0.5, 0)], fam_u)
    res.add("apps", "series:two_equal", top, rep2.aggregate,
            rep2.component_sum, rep2.triangle_ratio, "-",
            rep2.triangle_ratio <= 1.0 + 1e-9)
    rep3 = apps.series_sum_check(fs, vec_s, 2.0,
                                 [(1.0, 0), (0.5, 2), (0.25, 4)], fam_u)
    res.add("apps", "series:dilates", top, rep3.aggregate, rep3.component_sum,
            rep3.triangle_ratio, "-", rep3.triangle_ratio <= 1.0 + 1e-9)

    # N* growth table (exploratory: no pass threshold)
    counts = cfg.get("params", {}).get("nstar_counts",
                                       [4, 8, 16, 32, 64, 128, 256])
    for count, ratio in apps.nstar_growth(grid, counts):
        res.add("apps", f"nstar:{count}", top, ratio, 0.0, ratio, "-", True)
    return res


SUITES = {
    "identity": run_identity,
    "exponents": run_exponents,
    "lemma33": run_lemma33,
    "remark34": run_remark34,
    "maximal_rwt": run_maximal_rwt,
    "sawyer": run_sawyer,
    "offdiag": run_offdiag,
    "prop31": run_prop31,
    "endpoint": run_endpoint,
    "apps": run_apps,
}


def run_suite(cfg: dict) -> SuiteResult:
    name = cfg["suite"]
    if name not in SUITES:
        raise ConfigurationError(
            f"unknown suite {name!r}; known: {sorted(SUITES)}")
    t0 = time.perf_counter()
    result = SUITES[name](cfg)
    result.measured["runtime_s"] = time.perf_counter() - t0

    golden = cfg.get("golden") or {}
    rel = float(cfg.get("thresholds", {}).get("golden_rel_tol", 0.01))
    gcfg = cfg.get("grid", {})
    resolution = (gcfg.get("levels") or [gcfg.get("L", 0)])[-1]
    for key, ref in sorted(golden.items()):
        if key not in result.measured:
            result.add(name, f"golden:{key}", resolution, math.nan,
                       ref if ref is not None else math.nan, math.nan,
                       "missing-measurement", False)
            continue
        val = result.measured[key]
        if ref is None:
            result.add(name, f"golden:{key}", resolution, val, math.nan,
                       math.nan, "unfrozen", True)
        else:
            ok = abs(val - ref) <= rel * abs(ref)
            result.add(name, f"golden:{key}", resolution, val, ref,
                       val / ref if ref else math.inf, "-", ok)
    return result
