"""Sequence norms and weight constants.

Morrey-type sups run over windows ``S_{m,n} = [m-n, m+n]``. Window sums are
grown one radius at a time (``S + x_{m-n} + x_{m+n}``), never formed as prefix
differences: every step is then monotone in the summands, so pointwise
``|x| <= |y|`` carries over to the computed norms bit for bit.

The infinite search over centers and radii is cut down as follows.

* Radii beyond the first window that covers the support only add weight to
  the denominator with the numerator frozen, so they never win.
* Unweighted (or constant weight): a center right of the support can slide
  one step left, trading a zero for a support point at equal cardinality, so
  centers inside the support suffice.
* Weights nondecreasing in ``|k|`` (power, alpha >= 0): sliding a center
  ``m >= 1`` left also drops a weight at least as large as the one it gains,
  so centers in ``[min(lo, 0), max(hi, 0)]`` suffice.

Anything else is searched over the plan's margin and tagged ``lower-bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .seq import Seq, Weight, window_sum
from .transforms import EvalPlan

__all__ = [
    "MorreyParams",
    "NormValue",
    "ApConstant",
    "DoublingResult",
    "WeightConstants",
    "ShellRow",
    "lp_norm",
    "weighted_lp_norm",
    "discrete_morrey_norm",
    "weighted_morrey_norm",
    "morrey_ratio",
    "ap_constant",
    "doubling_constant",
    "doubling_ratio",
    "reverse_doubling_constant",
    "weight_constants",
    "shell_growth_check",
]


@dataclass(frozen=True)
class MorreyParams:
    p: float
    lam: float

    def __post_init__(self):
        if not (1 <= self.p < math.inf):
            raise ValueError(f"p must satisfy 1 <= p < inf, got {self.p}")
        if not (0 <= self.lam <= 1 / self.p):
            raise ValueError(f"lambda must lie in [0, 1/p], got {self.lam}")

    @property
    def strict_interior(self) -> bool:
        return 0 < self.lam < 1 / self.p

    @property
    def gap(self) -> float:
        """The exponent ``1/p - lambda``."""
        return 1 / self.p - self.lam


@dataclass(frozen=True)
class NormValue:
    value: float
    exactness: str
    witness: tuple

    def as_dict(self) -> dict:
        return {"value": self.value, "exactness": self.exactness,
                "witness": list(self.witness)}


@dataclass(frozen=True)
class ApConstant:
    value: float
    witness: tuple
    window: tuple
    exactness: str = "window-exact"


@dataclass(frozen=True)
class DoublingResult:
    value: float
    witness: tuple


@dataclass(frozen=True)
class WeightConstants:
    ap_constant: float
    ap_exactness: str
    doubling_D: float
    reverse_doubling_D1: float
    delta_exponent: float = field(init=False)

    def __post_init__(self):
        d1 = self.reverse_doubling_D1
        object.__setattr__(self, "delta_exponent", math.log2(d1) if d1 > 0 else -math.inf)


@dataclass(frozen=True)
class ShellRow:
    i: int
    lhs: float
    rhs: float
    holds: bool


def lp_norm(b: Seq, p: float) -> float:
    if not p >= 1:
        raise ValueError("lp_norm needs p >= 1")
    return math.fsum(np.abs(b.values) ** p) ** (1.0 / p)


def weighted_lp_norm(b: Seq, w: Weight, p: float) -> float:
    w.require(b.lo, b.hi, "support")
    return math.fsum(np.abs(b.values) ** p * w.on_window(b.lo, b.hi)) ** (1.0 / p)


def morrey_ratio(b: Seq, w: Optional[Weight], params: MorreyParams, m: int, n: int) -> float:
    """Ratio for the single window ``S_{m,n}``, same arithmetic as the search."""
    k_lo, k_hi = m - n, m + n
    num = np.abs(b.on_window(k_lo, k_hi)) ** params.p
    den = np.ones(2 * n + 1) if w is None else w.on_window(k_lo, k_hi).copy()
    if w is not None:
        num = num * den
    s_num, s_den = num[n], den[n]
    for r in range(1, n + 1):
        s_num = s_num + num[n - r] + num[n + r]
        s_den = s_den + den[n - r] + den[n + r]
    return float(s_num ** (1.0 / params.p) / s_den ** params.lam)


def _window_sup(num, den, base, centers, nmax, p, lam):
    """Max of ``sum(num)^(1/p) / sum(den)^lam`` over ``S_{m,r}``, ``r <= nmax[m]``.

    ``num``/``den`` are dense over indices ``base..``. Ties go to the smallest
    radius, then the smallest center.
    """
    # zero padding keeps the masked (r > nmax) sums in range; they never win
    pad = int(nmax.max())
    num = np.concatenate((np.zeros(pad), num, np.zeros(pad)))
    den = np.concatenate((np.zeros(pad), den, np.zeros(pad)))
    idx = centers - base + pad
    s_num = num[idx].copy()
    s_den = den[idx].copy()
    best, arg = -1.0, (int(centers[0]), 0)
    for r in range(int(nmax.max()) + 1):
        if r:
            s_num = s_num + num[idx - r] + num[idx + r]
            s_den = s_den + den[idx - r] + den[idx + r]
        ratio = s_num ** (1.0 / p) / s_den ** lam
        ratio = np.where(nmax >= r, ratio, -np.inf)
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best, arg = float(ratio[j]), (int(centers[j]), r)
    return best, arg


def _center_range(b: Seq, margin: int):
    centers = np.arange(b.lo - margin, b.hi + margin + 1)
    nmax = np.maximum(centers - b.lo, b.hi - centers)
    return centers, nmax


def discrete_morrey_norm(b: Seq, params: MorreyParams, margin: int = 0) -> NormValue:
    """Unweighted discrete Morrey norm; always exact (see module notes)."""
    if margin < 0:
        raise ValueError("margin must be >= 0")
    centers, nmax = _center_range(b, margin)
    base = int((centers - nmax).min())
    top = int((centers + nmax).max())
    num = np.abs(b.on_window(base, top)) ** params.p
    den = np.ones(top - base + 1)
    value, wit = _window_sup(num, den, base, centers, nmax, params.p, params.lam)
    return NormValue(value, "exact", wit)


def weighted_morrey_norm(b: Seq, w: Weight, params: MorreyParams,
                         plan: Optional[EvalPlan] = None) -> NormValue:
    """Discrete weighted Morrey norm of ``b`` with window search per ``plan``.

    The weight must be defined on every window searched; it is never
    extended. Exact for constant and power (alpha >= 0) weights, otherwise a
    lower bound over centers within ``plan.search_margin`` of the support.
    """
    margin = plan.search_margin if plan is not None else 0
    lo, hi = b.lo - margin, b.hi + margin
    exact = w.is_monotone_radial
    if exact and w.family_tuple[0] == "power":
        lo, hi = min(lo, 0), max(hi, 0)
    centers = np.arange(lo, hi + 1)
    nmax = np.maximum(centers - b.lo, b.hi - centers)
    base = int((centers - nmax).min())
    top = int((centers + nmax).max())
    w.require(base, top, "Morrey search domain")
    den = w.on_window(base, top)
    num = np.abs(b.on_window(base, top)) ** params.p * den
    value, wit = _window_sup(num, den, base, centers, nmax, params.p, params.lam)
    return NormValue(value, "exact" if exact else "lower-bound", wit)


def ap_constant(w: Weight, p: float, lo: Optional[int] = None,
                hi: Optional[int] = None) -> ApConstant:
    """Discrete Muckenhoupt constant over all pairs ``lo <= m <= n <= hi``.

    Uses normalized averages ``(mean w) * (mean w^{-1/(p-1)})^{p-1}``; exact on
    the searched window.
    """
    if not p > 1:
        raise ValueError("the discrete A_p constant needs p > 1")
    lo = w.lo if lo is None else lo
    hi = w.hi if hi is None else hi
    w.require(lo, hi, "A_p search window")
    vals = w.on_window(lo, hi)
    pw = np.concatenate(([0.0], np.cumsum(vals)))
    pv = np.concatenate(([0.0], np.cumsum(vals ** (-1.0 / (p - 1)))))
    size = vals.size
    best, arg = -1.0, (lo, lo)
    for i in range(size):
        j = np.arange(i, size)
        length = (j - i + 1).astype(np.float64)
        r = ((pw[j + 1] - pw[i]) / length) * ((pv[j + 1] - pv[i]) / length) ** (p - 1)
        k = int(np.argmax(r))
        v = float(r[k])
        cand = (lo + i, lo + int(j[k]))
        # ties: smallest right end, then smallest left end
        if v > best or (v == best and (cand[1], cand[0]) < (arg[1], arg[0])):
            best, arg = v, cand
    return ApConstant(best, arg, (lo, hi))


def doubling_ratio(w: Weight, m: int, delta: float) -> float:
    """``w[m-2d, m+2d] / w[m-d, m+d]`` with integer windows ``|k-m| <= r``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    big, small = int(math.floor(2 * delta)), int(math.floor(delta))
    return window_sum(w, m - big, m + big) / window_sum(w, m - small, m + small)


def doubling_constant(w: Weight, centers=None, delta_max: Optional[float] = None) -> DoublingResult:
    """Smallest ``D`` with ``w[m-2d, m+2d] <= D w[m-d, m+d]`` over a finite grid.

    The integer windows only change when ``d`` crosses a half-integer, so the
    grid ``d in {0.5, 1.0, ...}`` attains the sup for each center. Values
    ``d < 1/2`` give ratio 1.
    """
    if delta_max is None:
        delta_max = max(0.5, math.floor((w.hi - w.lo) / 4 * 2) / 2)
    deltas = np.arange(1, int(round(2 * delta_max)) + 1) / 2.0
    outer_max = int(math.floor(2 * deltas[-1]))
    if centers is None:
        centers = np.arange(w.lo + outer_max, w.hi - outer_max + 1)
        if centers.size == 0:
            raise ValueError("weight window too small for the doubling grid")
    centers = np.asarray(centers, dtype=np.int64)
    w.require(int(centers.min()) - outer_max, int(centers.max()) + outer_max, "doubling grid")
    best, arg = 1.0, (int(centers[0]), 0.25)
    pre = w.prefix
    for d in deltas:
        big, small = int(math.floor(2 * d)), int(math.floor(d))
        outer = pre[centers + big - w.lo + 1] - pre[centers - big - w.lo]
        inner = pre[centers + small - w.lo + 1] - pre[centers - small - w.lo]
        ratio = outer / inner
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best, arg = float(ratio[j]), (int(centers[j]), float(d))
    return DoublingResult(best, arg)


def reverse_doubling_constant(w: Weight, max_n: int, centers=None) -> DoublingResult:
    """``D_1 = min w[m-(2n+1), m+2n+1] / w[m-n, m+n]`` over ``n <= max_n`` and centers.

    Default centers are every ``m`` whose largest window fits in the weight.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    reach = 2 * max_n + 1
    if centers is None:
        centers = np.arange(w.lo + reach, w.hi - reach + 1)
        if centers.size == 0:
            raise ValueError("weight window too small for reverse doubling")
    centers = np.asarray(centers, dtype=np.int64)
    w.require(int(centers.min()) - reach, int(centers.max()) + reach, "reverse doubling")
    pre = w.prefix
    best, arg = math.inf, (int(centers[0]), 0)
    for n in range(max_n + 1):
        big = 2 * n + 1
        outer = pre[centers + big - w.lo + 1] - pre[centers - big - w.lo]
        inner = pre[centers + n - w.lo + 1] - pre[centers - n - w.lo]
        ratio = outer / inner
        j = int(np.argmin(ratio))
        if ratio[j] < best:
            best, arg = float(ratio[j]), (int(centers[j]), n)
    return DoublingResult(best, arg)


def weight_constants(w: Weight, p: float, max_n: int, ap_window=None,
                     delta_max: Optional[float] = None) -> WeightConstants:
    lo, hi = ap_window if ap_window is not None else (w.lo, w.hi)
    ap = ap_constant(w, p, lo, hi)
    dbl = doubling_constant(w, delta_max=delta_max)
    rev = reverse_doubling_constant(w, max_n)
    return WeightConstants(ap.value, ap.exactness, dbl.value, rev.value)


def shell_growth_check(w: Weight, m: int, i_max: int, d1: float) -> list:
    """Check ``w[m-2^i, m+2^i] >= D1^(i-1) (w_{m-1} + w_m + w_{m+1})`` for ``i <= i_max``.

    The three-point sum is centered at ``m``.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    w.require(m - 2 ** i_max, m + 2 ** i_max, "shell windows")
    base = window_sum(w, m - 1, m + 1)
    rows = []
    for i in range(1, i_max + 1):
        lhs = window_sum(w, m - 2 ** i, m + 2 ** i)
        rhs = d1 ** (i - 1) * base
        rows.append(ShellRow(i, lhs, rhs, bool(rhs <= lhs * (1 + 1e-9))))
    return rows
