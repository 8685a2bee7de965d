import numpy as np
import pytest

import _oracles as oracle
from orthoglide.certify import (
    DomainTag,
    ExclusionBudget,
    Verdict,
    ZeroTest,
    classify,
    classify_batch,
    excludes_zero,
)
from orthoglide.interval import Box, Interval, square
from orthoglide.kinematics import TransmissionSpec, char_enclosure, det_A_enclosure

SPEC = TransmissionSpec()
BUDGET = ExclusionBudget()
UNIT = Box.from_bounds([-1, -1, -1], [1, 1, 1])


def grid(box, n=11):
    axes = [np.linspace(lo, hi, n) for lo, hi in zip(box.lo, box.hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 3)


def test_positive_function_has_no_zero():
    def f(b):
        return square(b.x) + square(b.y) + square(b.z) + Interval(1.0)

    assert excludes_zero(f, UNIT, BUDGET) is ZeroTest.NO_ZERO


def test_linear_function_may_vanish():
    assert excludes_zero(lambda b: b.x, UNIT, BUDGET) is ZeroTest.MAYBE_ZERO


def test_char_at_sigma_max_near_origin():
    box = Box.cube((0, 0, 0), 0.05)
    assert excludes_zero(lambda b: char_enclosure(b, 4.0), box, BUDGET) is ZeroTest.NO_ZERO
    # grid oracle: no sign change, bounded away from zero
    from orthoglide.kinematics import char_values

    v = char_values(grid(box, 21), 4.0)
    assert np.all(v < 0) and np.abs(v).min() > 1.0


@pytest.mark.parametrize("kw", [{"min_subbox_width": 0.0}, {"max_depth": 0}, {"max_boxes": 0}])
def test_zero_capacity_budget_rejected(kw):
    with pytest.raises(ValueError):
        ExclusionBudget(**kw)


def test_small_box_at_origin_is_inside():
    box = Box.cube((0, 0, 0), 0.05)
    assert oracle.admissible(grid(box, 21)).all()
    bc = classify(box, SPEC, BUDGET)
    assert bc.verdict is Verdict.INSIDE and bc.domain is DomainTag.FULL
    assert bc.code == 1


def test_box_beyond_cylinders_is_outside():
    bc = classify(Box.cube((0.9, 0.9, 0.0), 0.05), SPEC, BUDGET)
    assert bc.verdict is Verdict.OUTSIDE and bc.domain is DomainTag.DISJOINT


def test_box_on_the_boundary_is_undecided():
    # along the diagonal sigma_max reaches 4 near t = -0.2357
    box = Box.cube((-0.2357, -0.2357, -0.2357), 0.01)
    ok = oracle.admissible(grid(box, 11))
    assert ok.any() and not ok.all()
    assert classify(box, SPEC, BUDGET).verdict is Verdict.UNDECIDED


def test_partially_covered_box_never_inside():
    box = Box.from_bounds([0.6, 0.0, 0.0], [1.0, 0.5, 0.05])
    bc = classify(box, SPEC, BUDGET)
    assert bc.domain is DomainTag.PARTIAL
    assert bc.verdict is not Verdict.INSIDE


def random_boxes(rng, n, half=(0.005, 0.1)):
    c = rng.uniform(-0.9, 0.9, (n, 3))
    h = rng.uniform(*half, (n, 1))
    return c - h, c + h


def test_classification_soundness_by_sampling():
    rng = np.random.default_rng(11)
    lo, hi = random_boxes(rng, 3000)
    v, dom = classify_batch(Box.from_bounds(lo, hi), SPEC, BUDGET)
    assert (v == Verdict.INSIDE).sum() > 50 and (v == Verdict.OUTSIDE).sum() > 50
    for i in np.flatnonzero(v == Verdict.INSIDE):
        P = lo[i] + (hi[i] - lo[i]) * rng.uniform(size=(1000, 3))
        ev = oracle.batch_spectra(P)
        assert np.all((ev[:, 0] >= SPEC.sigma_min - 1e-9) & (ev[:, 2] <= SPEC.sigma_max + 1e-9))
    for i in np.flatnonzero(v == Verdict.OUTSIDE):
        P = lo[i] + (hi[i] - lo[i]) * rng.uniform(size=(200, 3))
        assert not oracle.admissible(P).any()


def test_sub_boxes_of_inside_boxes_stay_inside():
    rng = np.random.default_rng(12)
    lo, hi = random_boxes(rng, 2000)
    v, _ = classify_batch(Box.from_bounds(lo, hi), SPEC, BUDGET)
    ins = np.flatnonzero(v == Verdict.INSIDE)[:100]
    for i in ins:
        a = lo[i] + (hi[i] - lo[i]) * rng.uniform(0, 0.5, (4, 3))
        b = a + (hi[i] - a) * rng.uniform(0.2, 1, (4, 3))
        sv, _ = classify_batch(Box.from_bounds(a, b), SPEC, BUDGET)
        assert np.all(sv != Verdict.OUTSIDE)
        mid = 0.5 * (lo[i] + hi[i])
        halves, _ = classify_batch(Box.from_bounds([lo[i], mid], [mid, hi[i]]), SPEC, BUDGET)
        assert np.all(halves == Verdict.INSIDE)


def test_never_inside_when_det_may_vanish():
    rng = np.random.default_rng(13)
    lo, hi = random_boxes(rng, 3000, half=(0.02, 0.3))
    boxes = Box.from_bounds(lo, hi)
    v, _ = classify_batch(boxes, SPEC, BUDGET)
    d = det_A_enclosure(boxes)
    straddles = ~np.asarray(d.empty) & (d.lo <= 0) & (d.hi >= 0)
    assert straddles.sum() > 0
    assert not np.any(straddles & (v == Verdict.INSIDE))


def test_inside_requires_range_not_just_center():
    # a box whose center is admissible but which reaches past the boundary
    box = Box.cube((0.0, 0.0, 0.0), 0.3)
    assert oracle.admissible(np.zeros((1, 3)))[0]
    assert not oracle.admissible(grid(box, 11)).all()
    assert classify(box, SPEC, BUDGET).verdict is Verdict.UNDECIDED
