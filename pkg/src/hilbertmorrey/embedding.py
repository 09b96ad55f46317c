"""Transfer of sequences and weights to functions on the real line.

``f`` is ``b_k`` on ``[k - 1/4, k + 1/4]`` and zero elsewhere. The weight is
either ``w_k`` on the same quarter pieces and linear across the gaps
(``quarter-linear``) or the step ``w_k`` on ``[k - 1/2, k + 1/2)``
(``half-step``). All integrals below are closed form.

Sups over continua are reduced to finite candidate sets:

* maximal function: the one-sided average ``(F(y) - F(x)) / (y - x)`` is a
  Moebius function of ``y`` on each piece, hence monotone there; extremes sit
  at breakpoints or in the limits ``y -> x+-``.
* truncated singular integral: ``dI/de = (f(x+e) - f(x-e)) / e`` keeps one sign
  between consecutive distances ``|x - t|`` to breakpoints, so the sup over
  ``e`` is attained at those distances or as ``e -> 0+``.
* weighted Morrey norm: no attainment argument; endpoints come from
  breakpoints plus a uniform grid and the result is a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import MorreyParams, NormValue, doubling_constant, weighted_morrey_norm
from .seq import Seq, Weight
from .transforms import EvalPlan, truncated_maximal

__all__ = [
    "PiecewiseConstFn",
    "PiecewiseLinearFn",
    "embed_sequence",
    "embed_weight",
    "continuous_maximal",
    "continuous_singular",
    "continuous_weighted_morrey_norm",
    "continuous_ap_ratio",
    "embedding_norm_check",
    "pointwise_domination_check",
    "sample_embedding",
]

QUARTER = 0.25


@dataclass(frozen=True, eq=False)
class PiecewiseConstFn:
    """``values[i]`` on ``[edges[i], edges[i+1]]``, zero outside ``[edges[0], edges[-1]]``."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if e.ndim != 1 or v.size + 1 != e.size or np.any(np.diff(e) <= 0):
            raise ValueError("edges must be strictly increasing with one more entry than values")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        i = np.searchsorted(self.edges, x, side="right") - 1
        inside = (i >= 0) & (i < self.values.size)
        out = np.where(inside, self.values[np.clip(i, 0, self.values.size - 1)], 0.0)
        return out if out.ndim else float(out)

    def side_value(self, x: float, side: int) -> float:
        """One-sided limit ``f(x+)`` (side=+1) or ``f(x-)`` (side=-1)."""
        i = int(np.searchsorted(self.edges, x, side="right" if side > 0 else "left")) - 1
        return float(self.values[i]) if 0 <= i < self.values.size else 0.0

    def integral_abs_pow(self, p: float = 1.0) -> float:
        return math.fsum(np.abs(self.values) ** p * np.diff(self.edges))

    def cumulative_abs(self, x):
        """``F(x) = int_{-inf}^{x} |f|``."""
        x = np.asarray(x, dtype=np.float64)
        lengths = np.diff(self.edges)
        c = np.concatenate(([0.0], np.cumsum(np.abs(self.values) * lengths)))
        i = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.values.size - 1)
        t = np.clip(x - self.edges[i], 0.0, lengths[i])
        return c[i] + np.abs(self.values[i]) * t


@dataclass(frozen=True, eq=False)
class PiecewiseLinearFn:
    """Positive function, linear on each ``[seg_lo[i], seg_hi[i]]``.

    Segments are contiguous (``seg_hi[i] == seg_lo[i+1]``); jumps are allowed at
    shared endpoints. Constant extension beyond the first and last segment.
    """

    seg_lo: np.ndarray
    seg_hi: np.ndarray
    val_lo: np.ndarray
    val_hi: np.ndarray

    def __post_init__(self):
        arrs = [np.asarray(a, dtype=np.float64) for a in
                (self.seg_lo, self.seg_hi, self.val_lo, self.val_hi)]
        for name, a in zip(("seg_lo", "seg_hi", "val_lo", "val_hi"), arrs):
            object.__setattr__(self, name, a)
        if np.any(self.seg_hi <= self.seg_lo) or np.any(self.seg_lo[1:] != self.seg_hi[:-1]):
            raise ValueError("segments must be nonempty and contiguous")
        if min(self.val_lo.min(), self.val_hi.min()) <= 0:
            raise ValueError("weight function must be positive")

    @property
    def knots(self) -> np.ndarray:
        return np.concatenate((self.seg_lo, self.seg_hi[-1:]))

    def _segment(self, x):
        return np.clip(np.searchsorted(self.seg_lo, x, side="right") - 1, 0, self.seg_lo.size - 1)

    def _linear(self, i, x):
        x = np.clip(x, self.seg_lo[i], self.seg_hi[i])
        t = (x - self.seg_lo[i]) / (self.seg_hi[i] - self.seg_lo[i])
        return self.val_lo[i] + t * (self.val_hi[i] - self.val_lo[i])

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self._linear(self._segment(x), x)
        return out if np.ndim(out) else float(out)

    def integral(self, a, b):
        """``int_a^b w`` for ``a <= b`` (vectorized)."""
        return self._cumulative(b) - self._cumulative(a)

    def _cumulative(self, x):
        x = np.asarray(x, dtype=np.float64)
        lengths = self.seg_hi - self.seg_lo
        c = np.concatenate(([0.0], np.cumsum(0.5 * (self.val_lo + self.val_hi) * lengths)))
        i = self._segment(x)
        xc = np.clip(x, self.seg_lo[i], self.seg_hi[i])
        part = 0.5 * (self.val_lo[i] + self._linear(i, xc)) * (xc - self.seg_lo[i])
        left = np.minimum(x - self.seg_lo[0], 0.0) * self.val_lo[0]
        right = np.maximum(x - self.seg_hi[-1], 0.0) * self.val_hi[-1]
        return c[i] + part + left + right


def embed_sequence(b: Seq) -> PiecewiseConstFn:
    k = b.indices.astype(np.float64)
    edges = np.empty(2 * k.size)
    edges[0::2] = k - QUARTER
    edges[1::2] = k + QUARTER
    values = np.zeros(2 * k.size - 1)
    values[0::2] = b.values
    return PiecewiseConstFn(edges, values)


def embed_weight(w: Weight, style: str = "quarter-linear") -> PiecewiseLinearFn:
    k = np.arange(w.lo, w.hi + 1, dtype=np.float64)
    v = w.values
    if style == "half-step":
        return PiecewiseLinearFn(k - 0.5, k + 0.5, v, v)
    if style != "quarter-linear":
        raise ValueError("style must be 'quarter-linear' or 'half-step'")
    n = k.size
    seg_lo = np.empty(2 * n - 1)
    seg_hi = np.empty(2 * n - 1)
    val_lo = np.empty(2 * n - 1)
    val_hi = np.empty(2 * n - 1)
    seg_lo[0::2], seg_hi[0::2] = k - QUARTER, k + QUARTER
    val_lo[0::2] = val_hi[0::2] = v
    seg_lo[1::2], seg_hi[1::2] = k[:-1] + QUARTER, k[1:] - QUARTER
    val_lo[1::2], val_hi[1::2] = v[:-1], v[1:]
    return PiecewiseLinearFn(seg_lo, seg_hi, val_lo, val_hi)


def continuous_maximal(f: PiecewiseConstFn, x: float) -> float:
    """``sup_{y != x} (1/(y-x)) int_x^y |f|``."""
    x = float(x)
    t = f.edges[f.edges != x]
    fx = float(f.cumulative_abs(x))
    cand = [abs(f.side_value(x, +1)), abs(f.side_value(x, -1)), 0.0]
    if t.size:
        avg = (f.cumulative_abs(t) - fx) / (t - x)
        cand.append(float(avg.max()))
    return max(cand)


def _truncated_integral(f: PiecewiseConstFn, x: float, eps: float) -> float:
    """``int_{|x-y|>eps} f(y)/(x-y) dy`` for ``eps >= 0``; ``eps = 0`` is the limit."""
    nz = f.values != 0
    a, b, v = f.edges[:-1][nz], f.edges[1:][nz], f.values[nz]
    total = 0.0
    if eps == 0:
        if np.any(v[(a == x) | (b == x)]):
            return math.inf
        inner = (a < x) & (x < b)
        total += math.fsum(v[inner] * np.log((x - a[inner]) / (b[inner] - x)))
        a, b, v = a[~inner], b[~inner], v[~inner]
    with np.errstate(divide="ignore", invalid="ignore"):
        lo_r = np.maximum(a, x + eps)
        right = (b > lo_r) & (b > x)
        r_terms = np.where(right, np.log((lo_r - x) / (b - x)), 0.0)
        hi_l = np.minimum(b, x - eps)
        left = (hi_l > a) & (a < x)
        l_terms = np.where(left, np.log((x - a) / (x - hi_l)), 0.0)
    return total + math.fsum(v * r_terms) + math.fsum(v * l_terms)


def continuous_singular(f: PiecewiseConstFn, x: float) -> float:
    """``sup_{e>0} |int_{|x-y|>e} f(y)/(x-y) dy|``; infinite at a jump of ``f``."""
    x = float(x)
    if f.side_value(x, +1) != f.side_value(x, -1):
        return math.inf
    eps = np.unique(np.abs(f.edges - x))
    eps = eps[eps > 0]
    vals = [abs(_truncated_integral(f, x, 0.0))]
    vals.extend(abs(_truncated_integral(f, x, float(e))) for e in eps)
    return max(vals)


def _candidate_points(f: PiecewiseConstFn, wfn: PiecewiseLinearFn, density: int) -> np.ndarray:
    lo, hi = f.edges[0], f.edges[-1]
    knots = wfn.knots
    grid = np.arange(math.ceil(lo * density), math.floor(hi * density) + 1) / density
    pts = np.concatenate((f.edges, knots[(knots >= lo) & (knots <= hi)], grid))
    return np.unique(pts)


def _weighted_pow_cumulative(f: PiecewiseConstFn, wfn: PiecewiseLinearFn, p: float, x):
    """``int_{-inf}^{x} |f|^p w`` on the merged breakpoint grid, closed form."""
    knots = wfn.knots
    lo, hi = f.edges[0], f.edges[-1]
    grid = np.unique(np.concatenate((f.edges, knots[(knots > lo) & (knots < hi)])))
    mids = 0.5 * (grid[:-1] + grid[1:])
    seg = wfn._segment(mids)
    fp = np.abs(f(mids)) ** p
    gl = fp * wfn._linear(seg, grid[:-1])
    gr = fp * wfn._linear(seg, grid[1:])
    lengths = np.diff(grid)
    c = np.concatenate(([0.0], np.cumsum(0.5 * (gl + gr) * lengths)))
    x = np.asarray(x, dtype=np.float64)
    i = np.clip(np.searchsorted(grid, x, side="right") - 1, 0, lengths.size - 1)
    t = np.clip(x - grid[i], 0.0, lengths[i])
    gx = gl[i] + (gr[i] - gl[i]) * (t / lengths[i])
    return c[i] + 0.5 * (gl[i] + gx) * t


def continuous_weighted_morrey_norm(f: PiecewiseConstFn, wfn: PiecewiseLinearFn,
                                    params: MorreyParams, density: int = 8) -> NormValue:
    """Lower bound for ``sup_B (int_B |f|^p w)^(1/p) / (int_B w)^lambda``.

    Intervals ``B = (a, b)`` take both endpoints from the candidate set: the
    breakpoints of ``f`` and ``w`` inside the support hull of ``f`` plus the
    grid ``Z / density``. Witness is ``(center, radius)``.
    """
    if density < 1:
        raise ValueError("density must be >= 1")
    pts = _candidate_points(f, wfn, density)
    if pts.size < 2:
        raise ValueError("empty candidate set")
    cf = _weighted_pow_cumulative(f, wfn, params.p, pts)
    cw = wfn._cumulative(pts)
    best, arg = 0.0, (float(pts[0]), 0.0)
    for i in range(pts.size - 1):
        num = cf[i + 1:] - cf[i]
        den = cw[i + 1:] - cw[i]
        ratio = np.maximum(num, 0.0) ** (1.0 / params.p) / den ** params.lam
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            a, b = pts[i], pts[i + 1 + j]
            best, arg = float(ratio[j]), (float(0.5 * (a + b)), float(0.5 * (b - a)))
    return NormValue(best, "lower-bound", arg)


def _power_integral(w0, w1, length, q):
    # int of (linear from w0 to w1)^(-q) over a segment of given length
    if abs(w1 - w0) <= 1e-14 * w0:
        return length * w0 ** (-q)
    slope = (w1 - w0) / length
    if q == 1:
        return (math.log(w1) - math.log(w0)) / slope
    return (w1 ** (1 - q) - w0 ** (1 - q)) / ((1 - q) * slope)


def continuous_ap_ratio(wfn: PiecewiseLinearFn, p: float, a: float, b: float) -> float:
    """``(avg_B w) (avg_B w^{-1/(p-1)})^{p-1}`` for ``B = [a, b]`` inside the segments."""
    if not p > 1 or not b > a:
        raise ValueError("need p > 1 and a < b")
    q = 1.0 / (p - 1)
    pts = np.unique(np.concatenate(([a, b], wfn.knots[(wfn.knots > a) & (wfn.knots < b)])))
    inv = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        seg = int(wfn._segment(0.5 * (lo + hi)))
        inv += _power_integral(float(wfn._linear(seg, lo)), float(wfn._linear(seg, hi)), hi - lo, q)
    length = b - a
    return float(wfn.integral(a, b)) / length * (inv / length) ** (p - 1)


def embedding_norm_check(b: Seq, w: Weight, params: MorreyParams, density: int = 8,
                         overlap: float = 0.5) -> dict:
    """Compare the continuous norm of ``f`` with ``overlap^(1/p-lam) D^lam ||b||``.

    ``overlap`` is the largest length a ball can share with one piece (1/2 for
    the quarter embedding); ``D`` is the measured doubling constant of ``w``.
    """
    f = embed_sequence(b)
    wfn = embed_weight(w, "quarter-linear")
    lhs = continuous_weighted_morrey_norm(f, wfn, params, density)
    disc = weighted_morrey_norm(b, w, params)
    dbl = doubling_constant(w)
    rhs = overlap ** params.gap * dbl.value ** params.lam * disc.value
    return {"lhs": lhs.value, "rhs": rhs, "D": dbl.value, "discrete_norm": disc.value,
            "witness": list(lhs.witness), "exactness": lhs.exactness,
            "pass": bool(lhs.value <= rhs * (1 + 1e-9))}


def pointwise_domination_check(b: Seq, j_range: tuple, offsets=(-0.2, -0.1, 0.0, 0.1, 0.2)) -> list:
    """Rows ``(j, x, Tb_j, S f(x), M f(x))`` for ``x = j + offset``.

    Offsets must lie in ``[-1/4, 1/4]``.
    """
    offsets = [float(o) for o in offsets]
    if any(abs(o) > QUARTER for o in offsets):
        raise ValueError("sample offsets must lie in [-1/4, 1/4]")
    lo, hi = j_range
    plan = EvalPlan(min(lo, b.lo), max(hi, b.hi))
    tb = truncated_maximal(b, plan)
    f = embed_sequence(b)
    rows = []
    for j in range(lo, hi + 1):
        t = float(tb.at(j))
        for o in offsets:
            x = j + o
            s = continuous_singular(f, x)
            m = continuous_maximal(f, x)
            rhs = 2 * s + 4 * m
            rows.append({"j": j, "x": x, "Tb": t, "Sf": s, "Mf": m, "rhs": rhs,
                         "pass": bool(t <= rhs * (1 + 1e-9))})
    return rows


def sample_embedding(b: Seq, w: Weight, samples: int, style: str = "quarter-linear") -> dict:
    """Columns ``x, f, w, Sf, Mf`` on cell midpoints spanning the support +- 1."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    f = embed_sequence(b)
    wfn = embed_weight(w, style)
    a, c = b.lo - 1.0, b.hi + 1.0
    x = a + (np.arange(samples) + 0.5) * (c - a) / samples
    return {
        "x": x,
        "f": f(x),
        "w": wfn(x),
        "Sf": np.array([continuous_singular(f, xi) for xi in x]),
        "Mf": np.array([continuous_maximal(f, xi) for xi in x]),
    }
