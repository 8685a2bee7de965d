"""Inner approximation of the dextrous workspace by certified boxes."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .certify import ExclusionBudget, Verdict, classify_batch
from .interval import Box, bisect_widest
from .kinematics import TransmissionSpec

log = logging.getLogger(__name__)

CHUNK = 2048


def _unit_seed() -> Box:
    return Box.from_bounds([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0])


@dataclass(frozen=True)
class WorkspaceParams:
    spec: TransmissionSpec = field(default_factory=TransmissionSpec)
    epsilon: float = 0.05
    seed_box: Box = field(default_factory=_unit_seed)
    budget: ExclusionBudget | None = None
    workers: int = 1

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.budget is None:
            object.__setattr__(self, "budget", ExclusionBudget.for_epsilon(self.epsilon))
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.spec.sigma_min,
            "sigma_max": self.spec.sigma_max,
            "epsilon": self.epsilon,
            "seed_box": self.seed_box.to_dict(),
            "budget": self.budget.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class WorkspaceResult:
    """Certified boxes plus the volume that could not be decided.

    ``inside_lo``/``inside_hi`` (and the ``undecided_*`` pair for the
    boxes counted in the error index) hold one row per box in creation
    order.
    """

    inside_lo: np.ndarray
    inside_hi: np.ndarray
    undecided_lo: np.ndarray
    undecided_hi: np.ndarray
    inside_volume: float
    error_index: float
    boxes_processed: int
    params: WorkspaceParams

    @cached_property
    def inside(self) -> list[Box]:
        return [Box.from_bounds(lo, hi) for lo, hi in zip(self.inside_lo, self.inside_hi)]

    def __len__(self) -> int:
        return len(self.inside_lo)


def _classify_all(lo: np.ndarray, hi: np.ndarray, params: WorkspaceParams, pool) -> np.ndarray:
    chunks = [(lo[i : i + CHUNK], hi[i : i + CHUNK]) for i in range(0, len(lo), CHUNK)]

    def run(c):
        return classify_batch(Box.from_bounds(*c), params.spec, params.budget)[0]

    parts = list(pool.map(run, chunks)) if pool is not None else [run(c) for c in chunks]
    return np.concatenate(parts)


def compute_workspace(params: WorkspaceParams | None = None) -> WorkspaceResult:
    """Branch and bound over a FIFO list of boxes seeded with ``params.seed_box``.

    INSIDE boxes are kept, OUTSIDE ones dropped, undecided ones split on
    their widest side while that side is at least ``epsilon`` wide and
    otherwise charged to the error index.
    """
    params = params or WorkspaceParams()
    eps = params.epsilon
    lo = np.atleast_2d(params.seed_box.lo).astype(float)
    hi = np.atleast_2d(params.seed_box.hi).astype(float)
    ins_lo, ins_hi, und_lo, und_hi = [], [], [], []
    processed = 0
    pool = ThreadPoolExecutor(params.workers) if params.workers > 1 else None
    try:
        while len(lo):
            v = _classify_all(lo, hi, params, pool)
            processed += len(lo)
            inside = v == Verdict.INSIDE
            ins_lo.append(lo[inside])
            ins_hi.append(hi[inside])
            und = v == Verdict.UNDECIDED
            split = und & ((hi - lo).max(axis=1) >= eps)
            small = und & ~split
            und_lo.append(lo[small])
            und_hi.append(hi[small])
            log.debug("generation of %d boxes: %d inside, %d split", len(lo), inside.sum(), split.sum())
            if not split.any():
                break
            left, right = bisect_widest(Box.from_bounds(lo[split], hi[split]))
            # FIFO: children enter the list in the order their parents were processed
            lo = np.stack([left.lo, right.lo], axis=1).reshape(-1, 3)
            hi = np.stack([left.hi, right.hi], axis=1).reshape(-1, 3)
    finally:
        if pool is not None:
            pool.shutdown()

    def cat(parts):
        return np.concatenate(parts) if parts else np.empty((0, 3))

    ins_lo, ins_hi, und_lo, und_hi = cat(ins_lo), cat(ins_hi), cat(und_lo), cat(und_hi)
    inside_volume = math.fsum(np.prod(ins_hi - ins_lo, axis=1))
    error_index = math.fsum(np.prod(und_hi - und_lo, axis=1))
    return WorkspaceResult(ins_lo, ins_hi, und_lo, und_hi, inside_volume, error_index, processed, params)


def workspace_volume_bracket(r: WorkspaceResult) -> tuple[float, float]:
    """Lower and upper bound on the true workspace volume."""
    return r.inside_volume, r.inside_volume + r.error_index
