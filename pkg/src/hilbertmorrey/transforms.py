"""Discrete Hilbert transform of finitely supported sequences.

Two evaluation paths share the definition ``(Hb)_n = sum_{m != n} b_m / (n - m)``:

* ``hilbert_naive`` sums the terms directly, grouped by distance
  ``d = |n - m|`` as ``(b_{n-d} - b_{n+d}) / d`` and accumulated from the
  farthest distance inward. The order is fixed per index, so results do not
  depend on chunking, and an even ``b`` gives an exactly odd transform.
* ``hilbert_fast`` is a linear (zero padded) FFT convolution with the kernel
  slice ``k -> 1/k``, ``k != 0``.

The same distance-ordered partial sums give the truncated maximal transform
``T`` for free: its ``k = 1`` term is bit-identical to the naive ``Hb``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.signal import fftconvolve
from scipy.special import digamma, zeta

from .seq import Seq

__all__ = [
    "EvalPlan",
    "TransformResult",
    "DistributionCount",
    "plan_around",
    "hilbert_naive",
    "hilbert_fast",
    "truncated_maximal",
    "distribution_function",
    "tail_l1_mean_zero",
    "tail_lp_bound",
]

TAIL_POLICIES = ("report-lower-bound", "analytic-tail")


@dataclass(frozen=True)
class EvalPlan:
    eval_lo: int
    eval_hi: int
    search_margin: int = 0
    tail_policy: str = "report-lower-bound"

    def __post_init__(self):
        if self.eval_hi < self.eval_lo:
            raise ValueError("evaluation window is empty")
        if self.search_margin < 0:
            raise ValueError("search_margin must be >= 0")
        if self.tail_policy not in TAIL_POLICIES:
            raise ValueError(f"tail_policy must be one of {TAIL_POLICIES}")

    @property
    def size(self) -> int:
        return self.eval_hi - self.eval_lo + 1

    def covers(self, b: Seq) -> bool:
        return self.eval_lo <= b.lo and b.hi <= self.eval_hi

    def doubled(self) -> "EvalPlan":
        """Window about the same center with twice the half-width."""
        c = (self.eval_lo + self.eval_hi) // 2
        half = max(c - self.eval_lo, self.eval_hi - c)
        return EvalPlan(c - 2 * half, c + 2 * half, self.search_margin, self.tail_policy)


def plan_around(b: Seq, half_width: int, **kw) -> EvalPlan:
    """Window ``[-half_width, half_width]`` widened if needed to cover ``b``."""
    return EvalPlan(min(-half_width, b.lo), max(half_width, b.hi), **kw)


@dataclass(frozen=True, eq=False)
class TransformResult:
    """Transform values on the evaluation window plus a uniform outside bound.

    ``tail_bound`` bounds ``|(Hb)_n|`` for every ``n`` outside the window by
    ``||b||_1 / dist(outside, support)``.
    """

    values: Seq
    tail_bound: float
    source: Seq

    @property
    def n(self) -> np.ndarray:
        return self.values.indices

    @property
    def hb(self) -> np.ndarray:
        return self.values.values


@dataclass(frozen=True)
class DistributionCount:
    count: int
    lower_bound: bool


def _check_plan(b: Seq, plan: EvalPlan):
    if not plan.covers(b):
        raise ValueError(
            f"evaluation window [{plan.eval_lo}, {plan.eval_hi}] does not cover "
            f"the support [{b.lo}, {b.hi}]")


def _outside_distance(b: Seq, plan: EvalPlan) -> int:
    return min(b.lo - (plan.eval_lo - 1), (plan.eval_hi + 1) - b.hi)


def _tail_bound(b: Seq, plan: EvalPlan) -> float:
    return b.l1() / _outside_distance(b, plan)


@numba.njit(cache=True)
def _distance_sums(padded, pad_lo, lo, hi, dmax, want_max):
    # For each n: s = sum_{d=dmax..1} (b[n-d] - b[n+d]) / d, accumulated in
    # that fixed order. want_max returns max_k |partial sum| instead of s.
    out = np.empty(hi - lo + 1)
    for i in range(hi - lo + 1):
        n = lo + i
        s = 0.0
        best = 0.0
        for d in range(dmax, 0, -1):
            s += (padded[n - d - pad_lo] - padded[n + d - pad_lo]) / d
            if want_max and abs(s) > best:
                best = abs(s)
        out[i] = best if want_max else s
    return out


def _distance_eval(b: Seq, lo: int, hi: int, want_max: bool) -> np.ndarray:
    dmax = max(hi - b.lo, b.hi - lo, 1)
    pad_lo = lo - dmax
    padded = np.ascontiguousarray(b.on_window(pad_lo, hi + dmax))
    return _distance_sums(padded, pad_lo, lo, hi, dmax, want_max)


def hilbert_naive(b: Seq, plan: EvalPlan) -> TransformResult:
    """Direct evaluation of the transform on ``plan``'s window."""
    _check_plan(b, plan)
    out = _distance_eval(b, plan.eval_lo, plan.eval_hi, False)
    return TransformResult(Seq(plan.eval_lo, out), _tail_bound(b, plan), b)


def hilbert_fast(b: Seq, plan: EvalPlan) -> TransformResult:
    """FFT linear convolution path; agrees with :func:`hilbert_naive` to ~1e-12."""
    _check_plan(b, plan)
    kmin = plan.eval_lo - b.hi
    kmax = plan.eval_hi - b.lo
    k = np.arange(kmin, kmax + 1, dtype=np.float64)
    kernel = np.zeros_like(k)
    nz = k != 0
    kernel[nz] = 1.0 / k[nz]
    full = fftconvolve(b.values, kernel, mode="full")
    # full[i] sits at index b.lo + kmin + i
    start = plan.eval_lo - (b.lo + kmin)
    vals = full[start: start + plan.size]
    return TransformResult(Seq(plan.eval_lo, vals), _tail_bound(b, plan), b)


def truncated_maximal(b: Seq, plan: EvalPlan) -> Seq:
    """``(Tb)_n = sup_{k>0} |sum_{|n-m|>=k} b_m/(n-m)|`` on the window.

    Tails with ``k`` beyond the farthest support point are empty, so the sup is
    a max over finitely many partial sums (the empty tail contributes 0).
    """
    _check_plan(b, plan)
    out = _distance_eval(b, plan.eval_lo, plan.eval_hi, True)
    return Seq(plan.eval_lo, out)


def distribution_function(s, level: float) -> DistributionCount:
    """Number of indices with ``|s_n| > level``.

    ``s`` is a :class:`TransformResult` or a plain :class:`Seq`. For a transform
    whose ``tail_bound`` exceeds ``level`` the count only covers the window and
    is flagged as a lower bound.
    """
    if not level > 0:
        raise ValueError("level must be positive")
    if isinstance(s, TransformResult):
        vals, lower = s.hb, s.tail_bound > level
    else:
        vals, lower = s.values, False
    return DistributionCount(int(np.count_nonzero(np.abs(vals) > level)), bool(lower))


def _center_for_tail(b: Seq) -> int:
    # weighted median of |b|; the pivot only affects tightness
    mass = np.cumsum(np.abs(b.values))
    return b.lo + int(np.searchsorted(mass, 0.5 * mass[-1]))


def tail_l1_mean_zero(b: Seq, plan: EvalPlan) -> float:
    """Upper bound for ``sum_{n outside window} |(Hb)_n|`` when ``sum b = 0``.

    With ``sum b_m = 0`` each outside term equals
    ``sum_m b_m (1/(n-m) - 1/(n-c))``; for ``n`` beyond the support every
    bracket keeps one sign, so the sums over ``n`` telescope into digamma
    differences. The bound is exact for two-point sequences.
    """
    _check_plan(b, plan)
    if b.is_zero:
        return 0.0
    tot = b.total()
    if abs(tot) > 1e-12 * max(b.l1(), 1.0):
        raise ValueError("analytic tail needs a mean-zero sequence")
    best = math.inf
    m = b.indices.astype(np.float64)
    a = np.abs(b.values)
    for c in sorted({b.lo, b.hi, _center_for_tail(b)}):
        # right tail n > eval_hi: sum_{n>N} (1/(n-m) - 1/(n-c)) = psi(N+1-c) - psi(N+1-m)
        big_n = plan.eval_hi
        right = np.abs(digamma(big_n + 1 - c) - digamma(big_n + 1 - m))
        # left tail n < eval_lo, j = -n > -L: psi(1-L+m) - psi(1-L+c)
        small = plan.eval_lo
        left = np.abs(digamma(1 - small + m) - digamma(1 - small + c))
        best = min(best, math.fsum(a * right) + math.fsum(a * left))
    return best


def tail_lp_bound(b: Seq, plan: EvalPlan, p: float) -> float:
    """Upper bound for ``(sum_{n outside} |(Hb)_n|^p)^{1/p}``, ``p > 1``.

    Uses ``|(Hb)_n| <= ||b||_1 / dist(n, support)`` and Hurwitz zeta sums.
    """
    if not p > 1:
        raise ValueError("tail_lp_bound needs p > 1")
    _check_plan(b, plan)
    d_right = plan.eval_hi + 1 - b.hi
    d_left = b.lo - (plan.eval_lo - 1)
    s = zeta(p, d_right) + zeta(p, d_left)
    return b.l1() * float(s) ** (1.0 / p)
