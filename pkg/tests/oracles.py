"""Independent reference implementations used only by the tests."""

import math

import numpy as np


def hilbert_double_loop(b, lo, hi):
    out = []
    for n in range(lo, hi + 1):
        s = 0.0
        for m in range(b.lo, b.hi + 1):
            if m != n:
                s += b.at(m) / (n - m)
        out.append(s)
    return np.array(out)


def truncated_exhaustive(b, lo, hi):
    """sup over k of |sum_{|n-m|>=k} b_m/(n-m)|, each tail summed on its own."""
    out = []
    kmax = max(hi - b.lo, b.hi - lo) + 1
    for n in range(lo, hi + 1):
        best = 0.0
        for k in range(1, kmax + 1):
            tail = [b.at(m) / (n - m) for m in range(b.lo, b.hi + 1) if abs(n - m) >= k]
            best = max(best, abs(math.fsum(tail)))
        out.append(best)
    return np.array(out)


def morrey_exhaustive(b, w, p, lam, centers, radius):
    """Max over every window S_{m,r}; sums grow as ``(s + left) + right``.

    Window enumeration and summation are plain Python; powers go through numpy
    arrays, as in the engine, so the two agree bit for bit.
    """
    lo, hi = min(centers) - radius, max(centers) + radius
    idx = np.arange(lo, hi + 1)
    den = np.ones(idx.size) if w is None else np.asarray(w.at(idx), dtype=np.float64)
    num = (np.abs(b.at(idx)) ** p * den).tolist()
    den = den.tolist()
    sums_num, sums_den = [], []
    for m in centers:
        c = m - lo
        s_num, s_den = num[c], den[c]
        for r in range(radius + 1):
            if r:
                s_num = s_num + num[c - r] + num[c + r]
                s_den = s_den + den[c - r] + den[c + r]
            sums_num.append(s_num)
            sums_den.append(s_den)
    ratios = np.array(sums_num) ** (1.0 / p) / np.array(sums_den) ** lam
    return float(ratios.max())


def ap_exhaustive(w, p, lo, hi):
    best = 0.0
    for m in range(lo, hi + 1):
        for n in range(m, hi + 1):
            vals = [w.at(k) for k in range(m, n + 1)]
            a = sum(vals) / len(vals)
            c = sum(v ** (-1 / (p - 1)) for v in vals) / len(vals)
            best = max(best, a * c ** (p - 1))
    return best


def quad_singular(f, x, h=1e-4, span=None):
    """Midpoint-rule S f(x) on an h-grid aligned with x; sup over eps via suffix sums.

    Grid cells are [x + i h, x + (i+1) h] on both sides, so each eps = i h is a
    cell boundary and the truncated integral is a suffix sum of cell integrals.
    """
    lo, hi = f.edges[0], f.edges[-1]
    reach = max(abs(x - lo), abs(hi - x)) + h
    n = int(math.ceil(reach / h))
    i = np.arange(n)
    mid = (i + 0.5) * h
    right = f(x + mid) / (-mid)
    left = f(x - mid) / mid
    cells = (right + left) * h
    suffix = np.cumsum(cells[::-1])[::-1]
    return float(np.abs(suffix).max())


def quad_maximal(f, x, h=1e-3):
    """Grid search of averages over [y, z] containing x with y, z on the h-grid.

    With piece edges and ``x`` on the grid the cell integrals are exact, so the
    grid sup equals the continuous one.
    """
    lo, hi = min(f.edges[0], x) - h, max(f.edges[-1], x) + h
    left = x - h * np.arange(int(round((x - lo) / h)) + 1)
    right = x + h * np.arange(int(round((hi - x) / h)) + 1)
    # cumulative |f| integrals from x by the midpoint rule
    cl = np.concatenate(([0.0], np.cumsum(np.abs(f(left[:-1] - h / 2)) * h)))
    cr = np.concatenate(([0.0], np.cumsum(np.abs(f(right[:-1] + h / 2)) * h)))
    best = 0.0
    for a in range(len(left)):
        tot = cl[a] + cr
        length = a * h + np.arange(len(right)) * h
        ok = length > 0
        if np.any(ok):
            best = max(best, float((tot[ok] / length[ok]).max()))
    return best
