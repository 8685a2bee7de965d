"""Box classifier for the dextrous workspace.

A box is INSIDE when every point in it has all transmission eigenvalues
in ``[sigma_min, sigma_max]``, OUTSIDE when every (reachable) point
violates a bound, UNDECIDED otherwise. Both certified answers rest on
the same argument: the verdict at the box center carries over to the
whole box unless some eigenvalue equals the crossed bound somewhere in
it, i.e. unless ``f_sigma = det(B^2 - sigma A A^T)`` has a zero there.
Zeros are excluded by recursive interval bisection. Eigenvalues may also
jump through infinity at parallel singularities, so ``det(A) != 0`` over
the box is required as well.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .interval import Box, Interval, bisect_widest
from .kinematics import TransmissionSpec, char_enclosure, det_A_enclosure, domain_status, in_domain, spectra


class Verdict(enum.IntEnum):
    OUTSIDE = -1
    UNDECIDED = 0
    INSIDE = 1


class DomainTag(enum.Enum):
    FULL = "full"
    PARTIAL = "partial"
    DISJOINT = "disjoint"


class ZeroTest(enum.Enum):
    NO_ZERO = "no_zero"
    MAYBE_ZERO = "maybe_zero"


@dataclass(frozen=True)
class BoxClass:
    verdict: Verdict
    domain: DomainTag

    @property
    def code(self) -> int:
        return int(self.verdict)


@dataclass(frozen=True)
class ExclusionBudget:
    """Limits on the bisection performed by one zero-exclusion query."""

    min_subbox_width: float = 0.05 / 8
    max_depth: int = 12
    max_boxes: int = 4096

    def __post_init__(self):
        if self.min_subbox_width <= 0 or self.max_depth <= 0 or self.max_boxes <= 0:
            raise ValueError("exclusion budget must be positive in every field")

    @classmethod
    def for_epsilon(cls, epsilon: float) -> "ExclusionBudget":
        return cls(min_subbox_width=epsilon / 8)

    def to_dict(self) -> dict:
        return {"min_subbox_width": self.min_subbox_width, "max_depth": self.max_depth, "max_boxes": self.max_boxes}


BoxFunction = Callable[..., Interval]


def _any_by_owner(owner: np.ndarray, mask: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(owner[mask], minlength=n) > 0


def excludes_zero_batch(
    f: BoxFunction,
    boxes: Box,
    budget: ExclusionBudget,
    args: Sequence[np.ndarray] = (),
    sign: np.ndarray | None = None,
) -> np.ndarray:
    """Vectorised zero exclusion; returns ``True`` (no zero) per input box.

    ``f(sub_boxes, *sub_args)`` must return an interval enclosure for a
    batch of boxes. Each entry of ``args`` is an array with one value per
    input box, forwarded alongside its sub-boxes. Empty enclosures mean
    the sub-box holds no admissible point and count as excluded. ``sign``
    optionally demands ``f > 0`` (+1) or ``f < 0`` (-1) per input box.

    A query gives up (``False``) on the first ambiguous sub-box that is too
    narrow or too deep to split, when its box count would exceed the
    budget, or as soon as its sub-boxes show both signs.
    """
    lo = np.atleast_2d(boxes.lo).astype(float)
    hi = np.atleast_2d(boxes.hi).astype(float)
    n = lo.shape[0]
    args = [np.broadcast_to(np.asarray(a), (n,)) for a in args]
    if sign is not None:
        sign = np.broadcast_to(np.asarray(sign), (n,))
    owner = np.arange(n)
    depth = np.zeros(n, dtype=int)
    alive = np.ones(n, dtype=bool)
    count = np.zeros(n, dtype=int)
    seen_pos = np.zeros(n, dtype=bool)
    seen_neg = np.zeros(n, dtype=bool)

    while owner.size:
        iv = f(Box.from_bounds(lo, hi), *[a[owner] for a in args])
        count += np.bincount(owner, minlength=n)
        empty = np.broadcast_to(np.asarray(iv.empty), owner.shape)
        pos = ~empty & (np.asarray(iv.lo) > 0)
        neg = ~empty & (np.asarray(iv.hi) < 0)
        amb = ~empty & ~pos & ~neg

        seen_pos |= _any_by_owner(owner, pos, n)
        seen_neg |= _any_by_owner(owner, neg, n)
        alive &= ~(seen_pos & seen_neg)
        if sign is not None:
            alive &= ~((sign > 0) & seen_neg) & ~((sign < 0) & seen_pos)

        w = hi - lo
        stuck = amb & ((w.max(axis=1) < budget.min_subbox_width) | (depth >= budget.max_depth))
        alive &= ~_any_by_owner(owner, stuck, n)
        alive &= count + 2 * np.bincount(owner[amb], minlength=n) <= budget.max_boxes

        keep = amb & alive[owner]
        if not keep.any():
            break
        sub = Box.from_bounds(lo[keep], hi[keep])
        left, right = bisect_widest(sub)
        # children of a box stay adjacent so processing order is reproducible
        lo = np.stack([left.lo, right.lo], axis=1).reshape(-1, 3)
        hi = np.stack([left.hi, right.hi], axis=1).reshape(-1, 3)
        owner = np.repeat(owner[keep], 2)
        depth = np.repeat(depth[keep] + 1, 2)
    return alive


def excludes_zero(f: BoxFunction, b: Box, budget: ExclusionBudget) -> ZeroTest:
    """Certify that ``f`` has no zero on ``b`` by recursive bisection.

    ``NO_ZERO`` is a proof; ``MAYBE_ZERO`` only means no proof was found.
    """
    ok = excludes_zero_batch(lambda sub: f(sub), b, budget)
    return ZeroTest.NO_ZERO if bool(ok[0]) else ZeroTest.MAYBE_ZERO


def _char_exclusion(boxes: Box, sigma, sign, budget: ExclusionBudget) -> np.ndarray:
    return excludes_zero_batch(char_enclosure, boxes, budget, args=(sigma,), sign=sign)


def classify_batch(boxes: Box, spec: TransmissionSpec, budget: ExclusionBudget) -> tuple[np.ndarray, np.ndarray]:
    """Classify a batch of boxes; returns ``(verdict codes, domain codes)``.

    Domain codes are those of :func:`orthoglide.kinematics.domain_status`.
    """
    lo = np.atleast_2d(boxes.lo)
    hi = np.atleast_2d(boxes.hi)
    boxes = Box.from_bounds(lo, hi)
    n = lo.shape[0]
    verdict = np.zeros(n, dtype=int)
    dom = np.atleast_1d(domain_status(boxes))
    verdict[dom == -1] = Verdict.OUTSIDE

    live = dom != -1
    if not live.any():
        return verdict, dom
    # reference point: the exact center, except for partial boxes whose center
    # is unreachable; those use the box point nearest the origin, which is
    # reachable whenever any point of the box is (the cylinders are convex
    # and symmetric). Partial boxes can then still be proven OUTSIDE.
    ref = boxes.center()
    partial = (dom == 0) & ~np.atleast_1d(in_domain(ref))
    ref[partial] = np.clip(0.0, lo[partial], hi[partial])
    live &= np.atleast_1d(in_domain(ref))
    idx = np.flatnonzero(live)
    if idx.size == 0:
        return verdict, dom
    # eigenvalues are continuous only away from parallel singularities
    idx = idx[excludes_zero_batch(det_A_enclosure, boxes[idx], budget)]
    if idx.size == 0:
        return verdict, dom
    center = ref

    ev = spectra(center[idx])
    low = ev[:, 0] < spec.sigma_min
    high = ev[:, 2] > spec.sigma_max
    ok = ~low & ~high

    # INSIDE: everything in range at the center, neither bound crossed
    cand = idx[ok & (dom[idx] == 1)]
    if cand.size:
        # the whole-box enclosure itself must exclude zero, not just its bisection
        d = det_A_enclosure(boxes[cand])
        cand = cand[(np.asarray(d.lo) > 0) | (np.asarray(d.hi) < 0)]
    if cand.size:
        k = cand.size
        qb = boxes[np.concatenate([cand, cand])]
        sig = np.concatenate([np.full(k, spec.sigma_min), np.full(k, spec.sigma_max)])
        sgn = np.concatenate([np.ones(k), -np.ones(k)])
        res = _char_exclusion(qb, sig, sgn, budget)
        verdict[cand[res[:k] & res[k:]]] = Verdict.INSIDE

    # OUTSIDE: a bound is violated at the center and never crossed
    first = idx[low | high]
    if first.size:
        sig = np.where(low[low | high], spec.sigma_min, spec.sigma_max)
        res = _char_exclusion(boxes[first], sig, np.zeros(first.size), budget)
        verdict[first[res]] = Verdict.OUTSIDE
        both = (low & high)[low | high] & ~res
        second = first[both]
        if second.size:
            res2 = _char_exclusion(boxes[second], np.full(second.size, spec.sigma_max), np.zeros(second.size), budget)
            verdict[second[res2]] = Verdict.OUTSIDE
    return verdict, dom


_TAGS = {1: DomainTag.FULL, 0: DomainTag.PARTIAL, -1: DomainTag.DISJOINT}


def classify(b: Box, spec: TransmissionSpec, budget: ExclusionBudget | None = None) -> BoxClass:
    """Classify one box: INSIDE (1), OUTSIDE (-1) or UNDECIDED (0)."""
    budget = budget or ExclusionBudget()
    v, d = classify_batch(b, spec, budget)
    return BoxClass(Verdict(int(v[0])), _TAGS[int(d[0])])
