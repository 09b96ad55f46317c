"""Finitely supported sequences, positive weights and window sums over Z."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "Seq",
    "Weight",
    "make_sequence",
    "make_weight",
    "parse_family",
    "window_sum",
    "seq_from_json",
    "seq_to_json",
    "weight_from_json",
    "weight_to_json",
]

_FAMILIES = ("const", "power", "random", "step")


@dataclass(frozen=True, eq=False)
class Seq:
    """Real sequence on Z, stored on the window ``[lo, lo + len(values) - 1]``.

    Entries outside the stored window are exact zeros.
    """

    lo: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("sequence values must be a nonempty 1-d array")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lo", int(self.lo))

    @property
    def hi(self) -> int:
        return self.lo + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __len__(self):
        return self.values.size

    def at(self, k):
        """Value at index ``k`` (scalar or array), zero off the stored window."""
        k = np.asarray(k)
        out = np.zeros(k.shape)
        inside = (k >= self.lo) & (k <= self.hi)
        out[inside] = self.values[k[inside] - self.lo]
        return out if out.ndim else float(out)

    def on_window(self, lo: int, hi: int) -> np.ndarray:
        """Values on ``[lo, hi]`` as a dense array (zero padded)."""
        return self.at(np.arange(lo, hi + 1))

    def scaled(self, c: float) -> "Seq":
        return Seq(self.lo, c * self.values)

    def shifted(self, s: int) -> "Seq":
        return Seq(self.lo + s, self.values)

    def l1(self) -> float:
        return math.fsum(np.abs(self.values))

    def total(self) -> float:
        return math.fsum(self.values)

    def __repr__(self):
        return f"Seq(lo={self.lo}, hi={self.hi}, values={self.values.tolist()!r})"


def make_sequence(values: Sequence[float], offset: int = 0, trim: bool = True) -> Seq:
    """Build a :class:`Seq` with ``values[0]`` sitting at index ``offset``.

    Leading and trailing zeros are trimmed so the stored window is the true
    support; an all-zero input becomes the zero sequence ``[0.0]`` at ``offset``.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("make_sequence needs a nonempty list of values")
    if not np.all(np.isfinite(vals)):
        raise ValueError("sequence values must be finite")
    if not trim:
        return Seq(offset, vals)
    nz = np.flatnonzero(vals)
    if nz.size == 0:
        return Seq(offset, np.zeros(1))
    return Seq(offset + int(nz[0]), vals[nz[0]: nz[-1] + 1])


def _splitmix_uniform(seed: int, k: np.ndarray) -> np.ndarray:
    # Counter-based hash so the value at k does not depend on the window.
    with np.errstate(over="ignore"):
        x = k.astype(np.int64).astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
        x = x + np.uint64(seed % (1 << 64)) * np.uint64(0xBF58476D1CE4E5B9)
        x = x + np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return (x >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def parse_family(spec) -> tuple:
    """Normalize a weight family descriptor.

    Accepts strings ``const:c``, ``power:alpha[:scale]``, ``random:seed:ratio`` and
    ``step:low:high[:jump]`` or an equivalent tuple.
    """
    if isinstance(spec, str):
        parts = spec.strip().split(":")
    else:
        parts = list(spec)
    if not parts or parts[0] not in _FAMILIES:
        raise ValueError(f"unknown weight family {spec!r}")
    name, args = parts[0], parts[1:]
    try:
        if name == "const":
            c = float(args[0]) if args else 1.0
            if not c > 0:
                raise ValueError("constant weight must be positive")
            return ("const", c)
        if name == "power":
            alpha = float(args[0])
            scale = float(args[1]) if len(args) > 1 else 1.0
            if not math.isfinite(alpha) or not scale > 0:
                raise ValueError("power weight needs a finite exponent and positive scale")
            return ("power", alpha) if scale == 1.0 else ("power", alpha, scale)
        if name == "random":
            seed, ratio = int(args[0]), float(args[1])
            if ratio < 1:
                raise ValueError("bounded-random ratio must be >= 1")
            return ("random", seed, ratio)
        low, high = float(args[0]), float(args[1])
        jump = int(args[2]) if len(args) > 2 else 0
        if not (low > 0 and high > 0):
            raise ValueError("step weight levels must be positive")
        return ("step", low, high, jump)
    except (IndexError, TypeError) as exc:
        raise ValueError(f"malformed weight family {spec!r}") from exc


def _family_tag(fam: tuple) -> str:
    def fmt(v):
        return repr(v) if isinstance(v, float) else str(v)
    return ":".join([fam[0]] + [fmt(v) for v in fam[1:]])


def _family_values(fam: tuple, k: np.ndarray) -> np.ndarray:
    name = fam[0]
    if name == "const":
        return np.full(k.shape, fam[1])
    if name == "power":
        vals = (1.0 + np.abs(k)) ** fam[1]
        return vals * fam[2] if len(fam) > 2 else vals
    if name == "random":
        # log-uniform on [1, ratio]
        return fam[2] ** _splitmix_uniform(fam[1], k)
    return np.where(k < fam[3], fam[1], fam[2])


@dataclass(frozen=True, eq=False)
class Weight:
    """Strictly positive weight sequence on ``[lo, hi]``.

    Every query outside the window is refused; a weight is never silently
    extended.
    """

    lo: int
    values: np.ndarray
    family: Optional[str] = None
    prefix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("weight values must be a nonempty 1-d array")
        if not np.all(np.isfinite(vals)) or vals.min() <= 0:
            raise ValueError("weight values must be finite and strictly positive")
        vals.setflags(write=False)
        prefix = np.concatenate(([0.0], np.cumsum(vals)))
        prefix.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "prefix", prefix)

    @property
    def hi(self) -> int:
        return self.lo + self.values.size - 1

    @property
    def family_tuple(self) -> Optional[tuple]:
        return parse_family(self.family) if self.family else None

    def contains(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def require(self, lo: int, hi: int, what: str = "window"):
        if not self.contains(lo, hi):
            raise ValueError(
                f"{what} [{lo}, {hi}] leaves the weight window [{self.lo}, {self.hi}]")

    def on_window(self, lo: int, hi: int) -> np.ndarray:
        self.require(lo, hi)
        return self.values[lo - self.lo: hi - self.lo + 1]

    def at(self, k):
        k = np.asarray(k)
        if k.size and (k.min() < self.lo or k.max() > self.hi):
            raise ValueError("index outside the weight window")
        out = self.values[k - self.lo]
        return out if np.ndim(out) else float(out)

    def scaled(self, c: float) -> "Weight":
        fam = self.family_tuple
        tag = None
        if fam is not None and fam[0] == "const":
            tag = _family_tag(("const", fam[1] * c))
        elif fam is not None and fam[0] == "power":
            scale = (fam[2] if len(fam) > 2 else 1.0) * c
            tag = _family_tag(("power", fam[1], scale) if scale != 1.0 else ("power", fam[1]))
        return Weight(self.lo, c * self.values, tag)

    @property
    def is_monotone_radial(self) -> bool:
        """True when w_k is nondecreasing in |k| (constant or power with alpha >= 0)."""
        fam = self.family_tuple
        if fam is None:
            return False
        return fam[0] == "const" or (fam[0] == "power" and fam[1] >= 0)


def make_weight(spec, window: tuple) -> Weight:
    """Weight from a family descriptor sampled on the integer window ``(lo, hi)``."""
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError("weight window is empty")
    fam = parse_family(spec)
    k = np.arange(lo, hi + 1)
    vals = _family_values(fam, k)
    return Weight(lo, vals, _family_tag(fam))


def window_sum(w: Weight, m: int, n: int) -> float:
    """``sum_{k=m}^{n} w_k`` from the prefix array."""
    if m > n:
        raise ValueError("window_sum needs m <= n")
    w.require(m, n)
    return float(w.prefix[n - w.lo + 1] - w.prefix[m - w.lo])


def seq_to_json(b: Seq) -> dict:
    return {"lo": b.lo, "values": b.values.tolist(), "family": None}


def weight_to_json(w: Weight) -> dict:
    return {"lo": w.lo, "values": w.values.tolist(), "family": w.family}


def _load(obj):
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or set(obj) - {"lo", "values", "family"}:
        raise ValueError("fixture must be an object with keys lo, values, family")
    if "lo" not in obj or "values" not in obj:
        raise ValueError("fixture needs 'lo' and 'values'")
    if not isinstance(obj["lo"], int) or not isinstance(obj["values"], list):
        raise ValueError("fixture 'lo' must be an int and 'values' a list")
    return obj


def seq_from_json(obj) -> Seq:
    obj = _load(obj)
    return make_sequence(obj["values"], obj["lo"])


def weight_from_json(obj) -> Weight:
    obj = _load(obj)
    return Weight(obj["lo"], obj["values"], obj.get("family"))
