"""Outward-rounded interval arithmetic and axis-aligned boxes.

Endpoints may be Python floats or numpy arrays of equal shape; in the
array case every operation acts elementwise, which is how batches of
boxes are evaluated in one pass. Rounding is made outward by stepping
each computed endpoint one ulp away with ``nextafter`` instead of
switching the FPU rounding mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

Real = Union[float, np.ndarray]

_INF = math.inf


class EmptyIntervalError(ValueError):
    """Raised when a measurement is requested on an empty interval."""


def _down(v):
    return np.nextafter(v, -_INF)


def _up(v):
    return np.nextafter(v, _INF)


def _scalar(v):
    # keep scalars as plain floats so reprs and comparisons stay readable
    if isinstance(v, np.ndarray) and v.ndim == 0:
        return float(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


class Interval:
    """Closed interval ``[lo, hi]``.

    ``empty`` marks the empty set explicitly; the endpoints of an empty
    entry are ``(+inf, -inf)`` and carry no meaning. ``clipped`` is raised by
    :func:`sqrt` when negative input had to be discarded.
    """

    __slots__ = ("lo", "hi", "empty", "clipped")

    def __init__(self, lo, hi=None, *, empty=False, clipped=False):
        if hi is None:
            hi = lo
        if isinstance(lo, (np.ndarray, list, tuple)) or isinstance(hi, (np.ndarray, list, tuple)):
            lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
            lo, hi = lo.copy(), hi.copy()
            empty = np.broadcast_to(np.asarray(empty, dtype=bool), lo.shape).copy()
            clipped = np.broadcast_to(np.asarray(clipped, dtype=bool), lo.shape).copy()
            if np.any(np.isnan(lo) | np.isnan(hi)):
                raise ValueError("interval endpoints must not be NaN")
            if np.any((lo > hi) & ~empty):
                raise ValueError("interval requires lo <= hi")
            lo[empty] = _INF
            hi[empty] = -_INF
        else:
            lo, hi = float(lo), float(hi)
            empty, clipped = bool(empty), bool(clipped)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints must not be NaN")
            if empty:
                lo, hi = _INF, -_INF
            elif lo > hi:
                raise ValueError(f"interval requires lo <= hi, got [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.empty = empty
        self.clipped = clipped

    @classmethod
    def _raw(cls, lo, hi, empty=False, clipped=False) -> "Interval":
        # trusted constructor for internal results; skips validation
        obj = object.__new__(cls)
        if isinstance(empty, np.ndarray) and np.any(empty):
            lo = np.where(empty, _INF, lo)
            hi = np.where(empty, -_INF, hi)
        elif empty is True:
            lo, hi = _INF, -_INF
        obj.lo = _scalar(lo)
        obj.hi = _scalar(hi)
        obj.empty = empty
        obj.clipped = clipped
        return obj

    @classmethod
    def empty_set(cls) -> "Interval":
        return cls(0.0, empty=True)

    @property
    def is_empty(self):
        return self.empty

    @property
    def shape(self) -> tuple:
        return np.shape(self.lo)

    def __getitem__(self, idx) -> "Interval":
        return Interval._raw(
            np.asarray(self.lo)[idx],
            np.asarray(self.hi)[idx],
            np.asarray(self.empty)[idx],
            np.asarray(self.clipped)[idx],
        )

    def __len__(self) -> int:
        return len(np.asarray(self.lo))

    def __repr__(self) -> str:
        if np.ndim(self.lo) == 0:
            if self.empty:
                return "Interval(empty)"
            return f"Interval({self.lo!r}, {self.hi!r})"
        return f"Interval(lo={self.lo!r}, hi={self.hi!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        if np.ndim(self.lo) or np.ndim(other.lo):
            return bool(
                np.array_equal(self.lo, other.lo)
                and np.array_equal(self.hi, other.hi)
                and np.array_equal(self.empty, other.empty)
            )
        if self.empty or other.empty:
            return bool(self.empty and other.empty)
        return self.lo == other.lo and self.hi == other.hi

    __hash__ = None

    def contains(self, value):
        """Elementwise membership test for a real value (or array)."""
        return (self.lo <= value) & (value <= self.hi) & ~np.asarray(self.empty)

    def subset_of(self, other: "Interval"):
        e = np.asarray(self.empty)
        return e | ((other.lo <= self.lo) & (self.hi <= other.hi) & ~np.asarray(other.empty))

    def __add__(self, other):
        return add(self, _as_interval(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _as_interval(other))

    def __rsub__(self, other):
        return sub(_as_interval(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, float(other))
        return mul(self, _as_interval(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return neg(self)


def _as_interval(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval._raw(v, v)


def _either(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.logical_or(a, b)
    return a or b


def add(a: Interval, b: Interval) -> Interval:
    return Interval._raw(_down(a.lo + b.lo), _up(a.hi + b.hi), _either(a.empty, b.empty))


def sub(a: Interval, b: Interval) -> Interval:
    return Interval._raw(_down(a.lo - b.hi), _up(a.hi - b.lo), _either(a.empty, b.empty))


def neg(a: Interval) -> Interval:
    # negation is exact in binary floating point
    return Interval._raw(-a.hi, -a.lo, a.empty)


def mul(a: Interval, b: Interval) -> Interval:
    p1 = a.lo * b.lo
    p2 = a.lo * b.hi
    p3 = a.hi * b.lo
    p4 = a.hi * b.hi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    empty = _either(a.empty, b.empty)
    if np.any(empty):
        # 0 * inf from the empty sentinel endpoints
        lo = np.where(empty, 0.0, lo)
        hi = np.where(empty, 0.0, hi)
    return Interval._raw(_down(lo), _up(hi), empty)


def scale(a: Interval, k: float) -> Interval:
    """Multiply by an exact real constant."""
    if k >= 0:
        lo, hi = a.lo * k, a.hi * k
    else:
        lo, hi = a.hi * k, a.lo * k
    return Interval._raw(_down(lo), _up(hi), a.empty)


def square(a: Interval) -> Interval:
    """Tight enclosure of ``{t**2 : t in a}``; never negative."""
    lo2 = a.lo * a.lo
    hi2 = a.hi * a.hi
    straddle = (a.lo <= 0) & (a.hi >= 0)
    lo = np.where(straddle, 0.0, np.minimum(lo2, hi2))
    hi = np.maximum(lo2, hi2)
    lo = np.maximum(_down(lo), 0.0)
    if np.any(a.empty):
        lo = np.where(a.empty, 0.0, lo)
        hi = np.where(a.empty, 0.0, hi)
    return Interval._raw(lo, _up(hi), a.empty)


def sqrt(a: Interval) -> Interval:
    """Square root with the negative part of the operand discarded.

    Entries with ``hi < 0`` come back empty; entries with ``lo < 0 <= hi``
    come back with the ``clipped`` flag set.
    """
    neg_all = np.asarray(a.hi < 0)
    empty = np.logical_or(neg_all, a.empty)
    clipped = np.logical_and(np.asarray(a.lo < 0), ~empty)
    with np.errstate(invalid="ignore"):
        lo = np.sqrt(np.maximum(a.lo, 0.0))
        hi = np.sqrt(np.maximum(a.hi, 0.0))
    lo = np.maximum(_down(lo), 0.0)
    hi = _up(hi)
    if np.ndim(empty) == 0:
        empty, clipped = bool(empty), bool(clipped)
    return Interval._raw(lo, hi, empty, clipped)


def hull(a: Interval, b: Interval) -> Interval:
    lo = np.minimum(a.lo, b.lo)
    hi = np.maximum(a.hi, b.hi)
    empty = np.logical_and(a.empty, b.empty)
    if np.ndim(empty) == 0:
        empty = bool(empty)
    return Interval._raw(lo, hi, empty)


def _require_nonempty(a: Interval) -> None:
    if np.any(a.empty):
        raise EmptyIntervalError("operation undefined on an empty interval")


def contains_zero(a: Interval):
    _require_nonempty(a)
    r = (a.lo <= 0) & (a.hi >= 0)
    return bool(r) if np.ndim(r) == 0 else r


def width(a: Interval):
    _require_nonempty(a)
    return _scalar(np.asarray(a.hi) - np.asarray(a.lo)) if np.ndim(a.lo) == 0 else a.hi - a.lo


def midpoint(a: Interval):
    """Midpoint, guaranteed to lie in ``[lo, hi]``."""
    _require_nonempty(a)
    m = 0.5 * a.lo + 0.5 * a.hi
    return _scalar(np.clip(m, a.lo, a.hi))


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box ``x × y × z``.

    When the component intervals hold arrays, the box stands for a batch
    of boxes sharing one index.
    """

    x: Interval
    y: Interval
    z: Interval

    @classmethod
    def from_bounds(cls, lo: Sequence[float] | np.ndarray, hi: Sequence[float] | np.ndarray) -> "Box":
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.ndim == 1:
            return cls(Interval(lo[0], hi[0]), Interval(lo[1], hi[1]), Interval(lo[2], hi[2]))
        return cls(Interval(lo[:, 0], hi[:, 0]), Interval(lo[:, 1], hi[:, 1]), Interval(lo[:, 2], hi[:, 2]))

    @classmethod
    def cube(cls, center: Sequence[float], half_edge: float) -> "Box":
        c = np.asarray(center, dtype=float)
        return cls.from_bounds(c - half_edge, c + half_edge)

    @classmethod
    def point(cls, p: Sequence[float]) -> "Box":
        return cls.from_bounds(p, p)

    @classmethod
    def stack(cls, boxes: Sequence["Box"]) -> "Box":
        return cls.from_bounds(np.array([b.lo for b in boxes]), np.array([b.hi for b in boxes]))

    def __iter__(self) -> Iterator[Interval]:
        return iter((self.x, self.y, self.z))

    def __getitem__(self, idx) -> "Box":
        return Box(self.x[idx], self.y[idx], self.z[idx])

    def __len__(self) -> int:
        return len(self.x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return self.x == other.x and self.y == other.y and self.z == other.z

    __hash__ = None

    @property
    def lo(self) -> np.ndarray:
        return np.stack([np.asarray(self.x.lo), np.asarray(self.y.lo), np.asarray(self.z.lo)], axis=-1)

    @property
    def hi(self) -> np.ndarray:
        return np.stack([np.asarray(self.x.hi), np.asarray(self.y.hi), np.asarray(self.z.hi)], axis=-1)

    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def widest(self):
        return np.max(self.widths(), axis=-1)

    def center(self) -> np.ndarray:
        lo, hi = self.lo, self.hi
        return np.clip(0.5 * lo + 0.5 * hi, lo, hi)

    def volume(self):
        v = np.prod(self.widths(), axis=-1)
        return float(v) if np.ndim(v) == 0 else v

    def corners(self) -> np.ndarray:
        """The 8 vertices, shape ``(8, 3)`` (or ``(n, 8, 3)`` for a batch)."""
        lo, hi = self.lo, self.hi
        sel = np.array([[i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(8)], dtype=bool)
        return np.where(sel, hi[..., None, :], lo[..., None, :])

    def contains_point(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all((self.lo <= p) & (p <= self.hi)))

    def contains_box(self, other: "Box") -> bool:
        return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))

    def to_dict(self) -> dict:
        return {"x": [self.x.lo, self.x.hi], "y": [self.y.lo, self.y.hi], "z": [self.z.lo, self.z.hi]}


def bisect_widest(b: Box) -> tuple[Box, Box]:
    """Split ``b`` at the midpoint of its widest side (ties go x, y, z).

    Works on single boxes and on batches.
    """
    lo, hi = b.lo, b.hi
    w = hi - lo
    axis = np.argmax(w, axis=-1)
    if np.any(np.take_along_axis(w, np.expand_dims(axis, -1), -1) <= 0):
        raise ValueError("cannot bisect a degenerate box")
    a = np.expand_dims(axis, -1)
    m = np.clip(
        0.5 * np.take_along_axis(lo, a, -1) + 0.5 * np.take_along_axis(hi, a, -1),
        np.take_along_axis(lo, a, -1),
        np.take_along_axis(hi, a, -1),
    )
    onehot = np.arange(3) == a
    left_hi = np.where(onehot, m, hi)
    right_lo = np.where(onehot, m, lo)
    return Box.from_bounds(lo, left_hi), Box.from_bounds(right_lo, hi)
