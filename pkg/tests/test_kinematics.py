import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from orthoglide.interval import Box
from orthoglide.kinematics import (
    DomainError,
    SingularityError,
    TransmissionSpec,
    char_enclosure,
    char_value,
    char_values,
    det_A,
    det_A_enclosure,
    in_domain,
    inverse_kinematics,
    parallel_singularity_at,
    serial_singularity_at,
    spectra,
    spectrum_at,
)


def domain_points(n, seed):
    rng = np.random.default_rng(seed)
    P = rng.uniform(-1, 1, (3 * n, 3))
    return P[oracle.domain_mask(P)][:n]


def test_in_domain_examples():
    assert in_domain((0, 0, 0))
    assert not in_domain((0.8, 0.8, 0))
    assert in_domain((1, 0, 0))
    assert in_domain((0, 0.6, 0.8))
    assert list(in_domain(np.array([[0, 0, 0], [2, 0, 0]]))) == [True, False]


def test_isotropic_state():
    st_ = inverse_kinematics((0, 0, 0))
    assert np.array_equal(st_.rho, [-1, -1, -1])
    assert np.array_equal(st_.d[0], [1, 0, 0])
    assert np.array_equal(st_.eta, [1, 1, 1])
    assert np.array_equal(st_.A, np.eye(3))
    assert np.array_equal(st_.B, np.eye(3))
    J = np.linalg.solve(st_.A, st_.B)
    assert np.allclose(J @ J.T, np.eye(3), atol=1e-12)


def test_isotropic_spectrum():
    s = spectrum_at((0, 0, 0))
    assert np.allclose(s.sigma, 1.0, atol=1e-12)
    assert np.allclose(s.psi, 1.0, atol=1e-12)


def test_inverse_kinematics_defining_equations():
    p = np.array([0.2, 0.3, -0.1])
    st_ = inverse_kinematics(p)
    rho, d = oracle.legs(p)
    assert np.allclose(st_.rho, rho, atol=1e-15)
    assert np.allclose(st_.d, d, atol=1e-15)
    for i in range(3):
        # joint i sits on axis i, leg i has unit length
        joint = np.zeros(3)
        joint[i] = st_.rho[i]
        assert np.linalg.norm(p - joint) == pytest.approx(1.0, abs=1e-12)


def test_unit_legs_many_points():
    for p in domain_points(10_000, 0):
        d = inverse_kinematics(p).d
        assert np.all(np.abs(np.linalg.norm(d, axis=1) - 1.0) <= 1e-12)


def test_inverse_kinematics_rejects_outside():
    with pytest.raises(DomainError):
        inverse_kinematics((0.8, 0.8, 0))


@pytest.mark.parametrize("p", [(0.3, 0.1, -0.2), (0.2, 0.3, -0.1), (-0.4, 0.5, 0.1), (0.6, -0.2, 0.3)])
def test_spectrum_matches_jacobi_oracle(p):
    got = np.array(spectrum_at(p).sigma)
    want = oracle.spectrum_oracle(p)
    assert np.allclose(got, want, rtol=1e-10, atol=1e-12)


def test_spectra_match_batch_oracle():
    P = domain_points(5000, 1)
    got = spectra(P)
    want = oracle.batch_spectra(P)
    ok = np.abs(det_A(P)) > 1e-3
    rel = np.abs(got[ok] - want[ok]) / np.abs(want[ok])
    assert rel.max() < 1e-8


def test_permutation_symmetry():
    P = domain_points(1000, 2)
    base = spectra(P)
    for perm in itertools.permutations(range(3)):
        other = spectra(P[:, perm])
        finite = np.isfinite(base)
        assert np.allclose(other[finite], base[finite], rtol=1e-9, atol=1e-9)


def test_small_roots_near_parallel_singularity_do_not_depend_on_axis_order():
    # sigma_max ~ 8e7 here; the small roots must still come out to full precision
    p = np.array([-0.27593540308703823, 0.6755628054674194, 0.6836471348274094])
    # computed once with 60-digit arithmetic; the double-precision oracle is off by ~1e-9 here
    want = [0.06069600686561646, 1.0304288207060135, 83428769.79667544]
    for perm in itertools.permutations(range(3)):
        got = spectra(p[None, list(perm)])[0]
        assert got[:2] == pytest.approx(want[:2], rel=1e-12)
        assert got[2] == pytest.approx(want[2], rel=1e-7)


def test_branch_reflection():
    # the other working mode is the point reflection of this one
    P = domain_points(200, 3)
    assert np.allclose(spectra(P, branch=1), spectra(-P, branch=-1), rtol=1e-9)


def test_char_value_isotropic():
    assert char_value((0, 0, 0), 0.25) == pytest.approx(0.421875, abs=1e-15)
    assert char_value((0, 0, 0), 1.0) == pytest.approx(0.0, abs=1e-15)


def test_char_value_matches_determinant_oracle():
    for p in domain_points(200, 4):
        for s in (0.25, 1.0, 4.0):
            assert char_value(p, s) == pytest.approx(oracle.char_oracle(p, s), rel=1e-9, abs=1e-12)


def test_char_vanishes_at_eigenvalues_and_alternates_sign():
    P = domain_points(500, 5)
    P = P[np.abs(det_A(P)) > 1e-2]
    ev = spectra(P)
    for p, sig in zip(P, ev):
        _, d = oracle.legs(p)
        B2 = np.diag(np.diag(d) ** 2)
        G = d @ d.T
        for s in sig:
            scale = np.prod(np.linalg.norm(B2 - s * G, axis=1)) + 1e-300
            assert abs(char_values(p, s)) <= 1e-8 * max(scale, 1.0)
        gaps = np.diff(sig) > 1e-6 * sig[2]
        probes = [0.5 * sig[0], *(0.5 * (sig[:-1] + sig[1:]))[gaps], 2.0 * sig[2]]
        expected = [1, *([-1, 1][i] for i in np.flatnonzero(gaps)), -1]
        assert [int(np.sign(char_values(p, s))) for s in probes] == expected


def test_char_value_box_errors():
    with pytest.raises(DomainError):
        char_value(Box.cube((0.9, 0.9, 0.0), 0.05), 1.0)
    with pytest.raises(DomainError):
        char_value((2, 0, 0), 1.0)


def test_det_A_examples():
    assert det_A((0, 0, 0)) == 1.0
    e = det_A_enclosure(Box.point((0, 0, 0)))
    assert e.lo <= 1.0 <= e.hi and e.hi - e.lo < 1e-12
    for p in domain_points(200, 6):
        assert det_A(p) == pytest.approx(oracle.det_A_oracle(p), abs=1e-12)


def test_singularity_flags():
    assert serial_singularity_at((0, 0.6, 0.8))
    assert not serial_singularity_at((0, 0, 0))
    assert not parallel_singularity_at((0, 0, 0))
    with pytest.raises(DomainError):
        serial_singularity_at((2, 0, 0))
    for p in domain_points(1000, 7):
        assert parallel_singularity_at(p) == (abs(oracle.det_A_oracle(p)) <= 1e-9)


def test_spectrum_at_parallel_singularity_raises():
    with pytest.raises(SingularityError):
        spectrum_at((1, 0, 0))


def _grid(box, n):
    axes = [np.linspace(lo, hi, n) for lo, hi in zip(box.lo, box.hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 3)


def test_enclosures_contain_dense_grid():
    box = Box.cube((0.0, 0.0, 0.0), 0.05)
    G = _grid(box, 21)
    for s in (0.25, 4.0):
        e = char_value(box, s)
        v = char_values(G, s)
        assert np.all((e.lo <= v) & (v <= e.hi))
    e = det_A_enclosure(box)
    v = det_A(G)
    assert np.all((e.lo <= v) & (v <= e.hi))


def test_enclosures_contain_samples_random_boxes():
    # 10^4 (box, point) pairs, boxes allowed to stick out of the cylinders
    rng = np.random.default_rng(8)
    n = 1000
    c = rng.uniform(-0.9, 0.9, (n, 3))
    h = rng.uniform(1e-4, 0.2, (n, 1))
    boxes = Box.from_bounds(c - h, c + h)
    for s in (0.25, 1.0, 4.0):
        enc = char_enclosure(boxes, s)
        dete = det_A_enclosure(boxes)
        for _ in range(10):
            P = c + h * rng.uniform(-1, 1, (n, 3))
            ok = in_domain(P)
            v = char_values(P, s)
            assert np.all(((enc.lo <= v) & (v <= enc.hi))[ok])
            dv = det_A(P)
            assert np.all(((dete.lo <= dv) & (dv <= dete.hi))[ok])


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-0.7, 0.7),
    st.floats(-0.7, 0.7),
    st.floats(-0.7, 0.7),
    st.floats(1e-6, 0.1),
    st.floats(0, 1),
    st.floats(0, 1),
    st.floats(0, 1),
)
def test_point_inside_enclosure(x, y, z, h, u, v, w):
    box = Box.cube((x, y, z), h)
    p = np.clip(box.lo + np.array([u, v, w]) * (box.hi - box.lo), box.lo, box.hi)
    if not in_domain(p):
        return
    e = char_value(box, 4.0)
    assert e.lo <= char_values(p, 4.0) <= e.hi
    d = det_A_enclosure(box)
    assert d.lo <= det_A(p) <= d.hi


def test_transmission_spec():
    s = TransmissionSpec.from_psi_max(2.0)
    assert (s.sigma_min, s.sigma_max) == (0.25, 4.0)
    assert s.psi_min == 0.5 and s.psi_max == 2.0
    assert s.admits([0.25, 1.0, 4.0]) and not s.admits([0.2, 1.0, 1.0])
    with pytest.raises(ValueError):
        TransmissionSpec(2.0, 1.0)
