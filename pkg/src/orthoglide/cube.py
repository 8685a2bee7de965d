"""Largest axis-aligned cube enclosed in the dextrous workspace."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .certify import ExclusionBudget, Verdict, classify, classify_batch
from .interval import Box, bisect_widest
from .kinematics import Point, TransmissionSpec, in_domain, spectra
from .workspace import _unit_seed

log = logging.getLogger(__name__)

#: returned by :func:`grow_cube_at` when no cube larger than the floor was certified
NO_CUBE = -1.0

_SIGNS = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float)


def _cube_budget(alpha: float) -> ExclusionBudget:
    # the optimum touches the boundary where sigma_max is a double eigenvalue;
    # certifying within alpha of it needs sub-boxes far below alpha
    return ExclusionBudget(min_subbox_width=alpha / 32, max_depth=64, max_boxes=16384)


@dataclass(frozen=True)
class CubeParams:
    spec: TransmissionSpec = field(default_factory=TransmissionSpec)
    alpha: float = 0.001
    budget: ExclusionBudget | None = None
    seed_box: Box = field(default_factory=_unit_seed)

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.budget is None:
            object.__setattr__(self, "budget", _cube_budget(self.alpha))

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.spec.sigma_min,
            "sigma_max": self.spec.sigma_max,
            "alpha": self.alpha,
            "seed_box": self.seed_box.to_dict(),
            "budget": self.budget.to_dict(),
        }


@dataclass(frozen=True)
class CubeResult:
    center: Point
    half_edge: float
    certified: bool
    alpha: float
    boxes_processed: int = 0

    @property
    def edge(self) -> float:
        return 2.0 * self.half_edge

    @property
    def guarantee(self) -> float:
        """No enclosed cube has an edge this long or longer."""
        return self.edge + 2.0 * self.alpha

    def box(self) -> Box:
        return Box.cube(self.center, self.half_edge)

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "half_edge": self.half_edge,
            "edge": self.edge,
            "guarantee": self.guarantee,
            "certified": self.certified,
        }


def corners_admissible(centers, half_edges, spec: TransmissionSpec) -> np.ndarray:
    """Pointwise check of the 8 corners of each cube ``center ± half_edge``."""
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    h = np.broadcast_to(np.asarray(half_edges, dtype=float), (len(c),))
    pts = (c[:, None, :] + h[:, None, None] * _SIGNS).reshape(-1, 3)
    ok = in_domain(pts)
    ev = spectra(pts)
    ok &= (ev[:, 0] >= spec.sigma_min) & (ev[:, 2] <= spec.sigma_max)
    return ok.reshape(-1, 8).all(axis=1)


def grow_cubes(centers, params: CubeParams, floors) -> np.ndarray:
    """Lockstep version of :func:`grow_cube_at` for an ``(n, 3)`` batch of centers."""
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    n = len(c)
    alpha = params.alpha
    floor = np.broadcast_to(np.asarray(floors, dtype=float), (n,))
    steps = np.zeros(n, dtype=np.int64)  # certified half-edge is floor + steps * alpha
    k = np.ones(n, dtype=np.int64)
    active = np.atleast_1d(in_domain(c)).copy()
    while active.any():
        idx = np.flatnonzero(active)
        h = floor[idx] + (steps[idx] + k[idx]) * alpha
        # a cube with an inadmissible corner cannot be certified, so skip the interval work
        ok = corners_admissible(c[idx], h, params.spec)
        j = np.flatnonzero(ok)
        if len(j):
            box = Box.from_bounds(c[idx[j]] - h[j, None], c[idx[j]] + h[j, None])
            v, _ = classify_batch(box, params.spec, params.budget)
            ok[j] = v == Verdict.INSIDE
        steps[idx[ok]] += k[idx[ok]]
        k[idx[ok]] *= 2
        failed = idx[~ok]
        restart = failed[k[failed] > 1]
        k[restart] = 1
        active[failed[k[failed] == 1]] = False
        active[restart] = True
    return np.where(steps > 0, floor + steps * alpha, NO_CUBE)


def grow_cube_at(c, params: CubeParams, floor: float = 0.0) -> float:
    """Largest certified half-edge of a cube centered at ``c``, grown from ``floor``.

    The half-edge grows by ``k * alpha`` with ``k`` doubling after every
    certified step and falling back to 1 after a failure; the search stops
    when a single ``alpha`` step fails. Returns :data:`NO_CUBE` if not even
    ``floor + alpha`` could be certified.
    """
    if floor < 0:
        raise ValueError("floor must be non-negative")
    return float(grow_cubes(np.asarray(c, dtype=float)[None, :], params, floor)[0])


def largest_cube(params: CubeParams | None = None, on_prune=None) -> CubeResult:
    """Branch and bound over candidate centers for the largest enclosed cube.

    Center boxes are discarded when some corner of the cube of half-edge
    ``R - u`` about their center (``u`` the box half-width, ``R`` the
    incumbent) is inadmissible: every cube of half-edge ``R`` centered in
    the box contains that smaller cube. Surviving boxes whose ``R + alpha``
    corners all pass get a cube grown at their center; boxes are split
    while wider than ``2 * alpha``.

    ``on_prune(centers, R)``, if given, is called with the centers of the
    boxes discarded in each generation and the incumbent used to discard them.
    """
    params = params or CubeParams()
    spec, alpha = params.spec, params.alpha
    seed_center = params.seed_box.center()
    origin = np.zeros(3) if params.seed_box.contains_point(np.zeros(3)) else seed_center
    R = max(grow_cube_at(origin, params, 0.0), 0.0)
    best = origin
    lo = np.atleast_2d(params.seed_box.lo).astype(float)
    hi = np.atleast_2d(params.seed_box.hi).astype(float)
    processed = 0
    while len(lo):
        processed += len(lo)
        c = np.clip(0.5 * lo + 0.5 * hi, lo, hi)
        u = 0.5 * (hi - lo).max(axis=1)
        outer = corners_admissible(c, R + alpha, spec)
        u1 = R - u
        prune = ~outer & (u1 > 0)
        if prune.any():
            j = np.flatnonzero(prune)
            prune[j] = ~corners_admissible(c[j], u1[j], spec)
            if on_prune is not None and prune.any():
                on_prune(c[prune].copy(), R)
        grow = np.flatnonzero(outer)
        if grow.size:
            A = grow_cubes(c[grow], params, R)
            i = int(np.argmax(A))  # first maximum keeps FIFO order on ties
            if A[i] > R:
                R, best = float(A[i]), c[grow[i]]
                log.debug("incumbent half-edge %.6f at %s", R, best)
        split = ~prune & ((hi - lo).max(axis=1) > 2 * alpha)
        log.debug("%d center boxes: %d pruned, %d grown, %d split", len(lo), prune.sum(), grow.size, split.sum())
        if not split.any():
            break
        left, right = bisect_widest(Box.from_bounds(lo[split], hi[split]))
        lo = np.stack([left.lo, right.lo], axis=1).reshape(-1, 3)
        hi = np.stack([left.hi, right.hi], axis=1).reshape(-1, 3)

    certified = R > 0 and classify(Box.cube(best, R), spec, params.budget).verdict == Verdict.INSIDE
    return CubeResult(Point(*(float(v) for v in best)), float(R), bool(certified), alpha, processed)
