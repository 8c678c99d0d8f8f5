"""Lorentz quasi-norms and weak-type functionals on grid functions.

Normalization: ||f||_(p,q) = (q * int_0^inf t^(q-1) w({f>t})^(q/p) dt)^(1/q),
so that L^(p,p) = L^p and indicator norms equal w(E)^(1/p) exactly.  The
weak norm (q = inf) is sup_t t * w({f>t})^(1/p).  Both are evaluated
exactly on step data: the distribution function is a finite staircase, so
the t-integral is a finite sum and the sup is attained just below an
attained cell value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import DyadicCube, GridFunction, Weight


@dataclass(frozen=True)
class LorentzIndex:
    """Primary index p in (0,inf); secondary q in (0,inf], inf = weak."""

    p: float
    q: float = math.inf

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError(f"need p > 0, got {self.p}")
        if not (self.q > 0):
            raise ValueError(f"need q > 0, got {self.q}")

    @property
    def is_weak(self) -> bool:
        return math.isinf(self.q)


def _descending(values: np.ndarray, masses: np.ndarray):
    order = np.argsort(-values, kind="stable")
    return values[order], masses[order]


def weak_values(values: np.ndarray, masses: np.ndarray, p: float) -> float:
    """sup_t t * mass({values > t})^(1/p) for raw cell data."""
    vs, ms = _descending(values, masses)
    cm = np.cumsum(ms)
    pos = vs > 0.0
    if not pos.any():
        return 0.0
    return float(np.max(vs[pos] * cm[pos] ** (1.0 / p)))


def lorentz_values(values: np.ndarray, masses: np.ndarray, p: float, q: float) -> float:
    """Finite-sum evaluation of the (p,q) quasi-norm for raw cell data."""
    if math.isinf(q):
        return weak_values(values, masses, p)
    vs, ms = _descending(values, masses)
    cm = np.cumsum(ms)
    pos = vs > 0.0
    if not pos.any():
        return 0.0
    vs, cm = vs[pos], cm[pos]
    change = np.nonzero(np.diff(vs))[0]
    run_ends = np.append(change, len(vs) - 1)
    vk = vs[run_ends]
    wk = cm[run_ends]
    v_next = np.append(vk[1:], 0.0)
    total = np.sum(wk ** (q / p) * (vk ** q - v_next ** q))
    return float(total ** (1.0 / q))


def weak_norm(f: GridFunction, w: Weight, p: float) -> float:
    """||f||_{L^{p,inf}(w)}; exact on discrete data, 0 for f == 0."""
    return weak_values(f.values, w.values * f.grid.cell_volume, p)


def lorentz_norm(f: GridFunction, w: Weight, idx: LorentzIndex | tuple) -> float:
    """||f||_{L^{p,q}(w)}; delegates to weak_norm when q = inf."""
    if isinstance(idx, tuple):
        idx = LorentzIndex(*idx)
    return lorentz_values(f.values, w.values * f.grid.cell_volume, idx.p, idx.q)


def restricted_cube_norm(v: Weight, Q: DyadicCube, q: float) -> float:
    """||chi_Q v^{-1}||_{L^{q,inf}(v/|Q|)}; q = inf gives ess sup_Q v^{-1}."""
    if not (q >= 1):
        raise ValueError(f"need q >= 1 or q = inf, got {q}")
    cells = Q.cell_indices(v.grid)
    inv = 1.0 / v.values[cells]
    if math.isinf(q):
        return float(inv.max())
    masses = v.values[cells] * (v.grid.cell_volume / Q.volume())
    return weak_values(inv, masses, q)


def dyadic_level_sup(v: Weight, Q: DyadicCube, q: float,
                     ladder_per_octave: int = 0) -> float:
    """S = sup_t t * v({x in Q : t < v^{-1} <= 2t})^{1/q}.

    Candidates anchor at the attained values of v^{-1} (where the sup over
    each constancy interval of the band mass is reached); an optional
    geometric ladder across [min/2, max] can be added per the ratio-2 band
    decomposition, but anchor candidates always dominate ladder points.
    """
    if not (q >= 1):
        raise ValueError(f"need q >= 1, got {q}")
    cells = Q.cell_indices(v.grid)
    inv = 1.0 / v.values[cells]
    masses = v.values[cells] * v.grid.cell_volume
    order = np.argsort(inv)
    inv_sorted = inv[order]
    cum = np.concatenate([[0.0], np.cumsum(masses[order])])
    cand = np.unique(inv_sorted)
    if ladder_per_octave > 0:
        lo, hi = cand[0] / 2.0, cand[-1]
        count = max(2, int(np.ceil(np.log2(hi / lo) * ladder_per_octave)) + 1)
        cand = np.union1d(cand, np.geomspace(lo, hi, count))
    # band mass for t -> candidate-: cells with t <= v^{-1} < 2t
    lo_idx = np.searchsorted(inv_sorted, cand, side="left")
    hi_idx = np.searchsorted(inv_sorted, 2.0 * cand, side="left")
    band = cum[hi_idx] - cum[lo_idx]
    return float(np.max(cand * band ** (1.0 / q)))


def level_sup_and_weak(v: Weight, Q: DyadicCube, q: float) -> tuple[float, float]:
    """(S, ||chi_Q v^{-1}||_{L^{q,inf}(v)}) from one cumulative-mass pass.

    Sharing the partial sums makes the containment band <= tail exact in
    floating point, so S <= weak holds structurally and weak <= 2S is the
    geometric-series bound up to rounding only in the q-th roots.
    """
    cells = Q.cell_indices(v.grid)
    inv = 1.0 / v.values[cells]
    masses = v.values[cells] * v.grid.cell_volume
    order = np.argsort(inv)
    inv_sorted = inv[order]
    cum = np.concatenate([[0.0], np.cumsum(masses[order])])
    total = cum[-1]
    cand = np.unique(inv_sorted)
    lo_idx = np.searchsorted(inv_sorted, cand, side="left")
    hi_idx = np.searchsorted(inv_sorted, 2.0 * cand, side="left")
    s_val = float(np.max(cand * (cum[hi_idx] - cum[lo_idx]) ** (1.0 / q)))
    weak = float(np.max(cand * (total - cum[lo_idx]) ** (1.0 / q)))
    return s_val, weak


@dataclass
class EquivalenceReport:
    """Two sides of the restricted weak-norm re-exponentiation identity."""

    lhs: float
    rhs: float
    k: float
    ratio: float


def norm_equivalence_check(v: Weight, Q: DyadicCube, q: float,
                           a: float, b: float) -> EquivalenceReport:
    """Compare ||chi_Q v^{-1}||_{L^{q,inf}(v)} with
    ||chi_Q v^{-a}||^k_{L^{kq,inf}(v^b)}, k = 1/(a q') + b/(a q)."""
    if not (q >= 1):
        raise ValueError(f"need q >= 1, got {q}")
    if not (0 < a < 1):
        raise ValueError(f"need 0 < a < 1, got {a}")
    if not (0 <= b < 1):
        raise ValueError(f"need 0 <= b < 1, got {b}")
    inv_qprime = 1.0 - 1.0 / q
    k = inv_qprime / a + b / (a * q)
    cells = Q.cell_indices(v.grid)
    vc = v.values[cells]
    vol = v.grid.cell_volume
    lhs = weak_values(1.0 / vc, vc * vol, q)
    rhs = weak_values(vc ** (-a), vc ** b * vol, k * q) ** k
    return EquivalenceReport(lhs, rhs, k, lhs / rhs if rhs > 0 else math.inf)
