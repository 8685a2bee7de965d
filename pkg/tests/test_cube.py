import numpy as np
import pytest

import _oracles as oracle
from orthoglide.certify import Verdict, classify
from orthoglide.cube import NO_CUBE, CubeParams, corners_admissible, grow_cube_at, largest_cube
from orthoglide.kinematics import TransmissionSpec


def test_center_outside_cylinders_is_sentinel():
    assert grow_cube_at((0.9, 0.9, 0.0), CubeParams(alpha=0.01)) == NO_CUBE
    assert NO_CUBE < 0


def test_negative_floor_rejected():
    with pytest.raises(ValueError):
        grow_cube_at((0, 0, 0), CubeParams(alpha=0.01), floor=-0.1)
    with pytest.raises(ValueError):
        CubeParams(alpha=0)


def test_origin_cube_matches_oracle():
    alpha = 0.001
    h = grow_cube_at((0, 0, 0), CubeParams(alpha=alpha))
    want = oracle.max_half_edge((0, 0, 0))
    assert abs(h - want) <= 2 * alpha
    # certified, so never above the true size
    assert h <= want + 1e-12


def test_grow_from_floor_continues_the_same_schedule():
    p = CubeParams(alpha=0.01)
    h = grow_cube_at((0, 0, 0), p)
    assert grow_cube_at((0, 0, 0), p, floor=h - 0.05) == pytest.approx(h, abs=1e-12)
    assert grow_cube_at((0, 0, 0), p, floor=h) == NO_CUBE


def test_corner_check():
    spec = TransmissionSpec()
    assert corners_admissible([[0, 0, 0]], 0.2, spec)[0]
    assert not corners_admissible([[0, 0, 0]], 0.3, spec)[0]


def test_reproducible():
    p = CubeParams(alpha=0.01)
    assert largest_cube(p) == largest_cube(p)


def test_refining_alpha_does_not_lose_size():
    coarse = largest_cube(CubeParams(alpha=0.01))
    fine = largest_cube(CubeParams(alpha=0.005))
    assert fine.edge >= coarse.edge - 2 * 0.01
    assert coarse.certified and fine.certified


def test_result_is_certified(cube_run):
    r, _ = cube_run
    assert r.certified
    assert classify(r.box(), TransmissionSpec(), CubeParams(alpha=r.alpha).budget).verdict is Verdict.INSIDE
    assert r.guarantee == pytest.approx(r.edge + 2 * r.alpha)
    d = r.to_dict()
    assert d["edge"] == r.edge and d["certified"] is True


def test_pruned_centers_cannot_beat_result(cube_run):
    r, pruned = cube_run
    centers = np.concatenate([c for c, _ in pruned])
    assert len(centers) > 0
    rng = np.random.default_rng(31)
    pick = centers[rng.choice(len(centers), size=min(60, len(centers)), replace=False)]
    for c in pick:
        assert oracle.max_half_edge(c) < r.half_edge + r.alpha
