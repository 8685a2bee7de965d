"""Orthoglide kinematics with leg length normalised to 1.

Leg ``i`` slides along the i-th coordinate axis. With ``s_i`` the square
root of ``1 - (sum of the two other coordinates squared)``, the leg vector
``d_i = c_i - b_i`` has ``eta_i = d_i . n_i`` in slot ``i`` and the other
two coordinates of the tool point elsewhere. Row ``i`` of the parallel
Jacobian ``A`` is ``d_i``; the serial Jacobian is ``B = diag(eta)``.

Velocity transmission eigenvalues are the roots in ``sigma`` of
``det(B**2 - sigma * A A^T)``, i.e. the eigenvalues of ``J J^T`` with
``J = A^{-1} B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .interval import Box, Interval, scale, sqrt as isqrt, square as isquare

LEG_LENGTH = 1.0

#: Working mode: ``rho_i = p_i + BRANCH * s_i``. ``-1`` puts every leg on the
#: positive side of its slider (``eta_i >= 0``, ``A = B = I`` at the origin).
BRANCH = -1

SINGULAR_TOL = 1e-9


class DomainError(ValueError):
    """Point or box lies outside the intersection of the three cylinders."""


class SingularityError(ArithmeticError):
    """Parallel singularity: ``det(A)`` vanishes."""


class Point(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class TransmissionSpec:
    """Admissible range ``[sigma_min, sigma_max]`` for the eigenvalues of ``J J^T``."""

    sigma_min: float = 0.25
    sigma_max: float = 4.0

    def __post_init__(self):
        if not (0 < self.sigma_min <= self.sigma_max):
            raise ValueError("need 0 < sigma_min <= sigma_max")

    @classmethod
    def from_psi_max(cls, psi_max: float) -> "TransmissionSpec":
        """Symmetric factor bounds ``1/psi_max <= psi <= psi_max``."""
        return cls(1.0 / psi_max**2, psi_max**2)

    @property
    def psi_min(self) -> float:
        return math.sqrt(self.sigma_min)

    @property
    def psi_max(self) -> float:
        return math.sqrt(self.sigma_max)

    def admits(self, sigma) -> bool:
        sigma = np.asarray(sigma)
        return bool(np.all((sigma >= self.sigma_min) & (sigma <= self.sigma_max)))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of ``J J^T`` in ascending order."""

    sigma: tuple[float, float, float]

    @property
    def psi(self) -> tuple[float, float, float]:
        return tuple(math.sqrt(max(s, 0.0)) for s in self.sigma)

    def __iter__(self):
        return iter(self.sigma)

    def __getitem__(self, i):
        return self.sigma[i]


@dataclass(frozen=True, eq=False)
class KinematicState:
    p: Point
    rho: np.ndarray
    d: np.ndarray  # row i is leg vector d_i
    eta: np.ndarray
    A: np.ndarray
    B: np.ndarray


# --- point evaluation ------------------------------------------------------


def _as_points(p) -> np.ndarray:
    P = np.asarray(p, dtype=float)
    if P.shape[-1] != 3:
        raise ValueError("points must have 3 coordinates")
    return P


def _radicands(P: np.ndarray) -> np.ndarray:
    x, y, z = P[..., 0], P[..., 1], P[..., 2]
    L2 = LEG_LENGTH * LEG_LENGTH
    return np.stack([L2 - (y * y + z * z), L2 - (x * x + z * z), L2 - (x * x + y * y)], axis=-1)


def in_domain(p) -> bool | np.ndarray:
    """Membership in the intersection of the three cylinders (boundary included).

    Accepts one point or an ``(n, 3)`` array.
    """
    r = np.all(_radicands(_as_points(p)) >= 0, axis=-1)
    return bool(r) if np.ndim(r) == 0 else r


def _etas(P: np.ndarray, branch: int = BRANCH) -> np.ndarray:
    s = np.sqrt(np.maximum(_radicands(P), 0.0))
    return -branch * s


def _gram_offdiag(P: np.ndarray, eta: np.ndarray):
    x, y, z = P[..., 0], P[..., 1], P[..., 2]
    e1, e2, e3 = eta[..., 0], eta[..., 1], eta[..., 2]
    g12 = e1 * x + y * e2 + z * z
    g13 = e1 * x + y * y + z * e3
    g23 = x * x + y * e2 + z * e3
    return g12, g13, g23


def inverse_kinematics(p, branch: int = BRANCH) -> KinematicState:
    P = _as_points(p)
    if P.ndim != 1:
        raise ValueError("inverse_kinematics takes a single point")
    if not in_domain(P):
        raise DomainError(f"point {tuple(P.tolist())} outside the reachable cylinders")
    s = np.sqrt(np.maximum(_radicands(P), 0.0))
    rho = P + branch * s
    d = np.tile(P, (3, 1))
    d[np.diag_indices(3)] = P - rho
    eta = np.diag(d).copy()
    return KinematicState(Point(*P), rho, d, eta, d.copy(), np.diag(eta))


def det_A(p, branch: int = BRANCH):
    """``det(A)`` at one point or an ``(n, 3)`` batch (no domain check)."""
    P = _as_points(p)
    x, y, z = P[..., 0], P[..., 1], P[..., 2]
    e = _etas(P, branch)
    e1, e2, e3 = e[..., 0], e[..., 1], e[..., 2]
    r = e1 * e2 * e3 - e1 * y * z - e2 * x * z - e3 * x * y + 2 * x * y * z
    return float(r) if np.ndim(r) == 0 else r


def _sym_eig3(S00, S11, S22, S01, S02, S12):
    """Closed-form (trigonometric) eigenvalues of symmetric 3x3 batches, ascending."""
    q = (S00 + S11 + S22) / 3.0
    p1 = S01 * S01 + S02 * S02 + S12 * S12
    p2 = (S00 - q) ** 2 + (S11 - q) ** 2 + (S22 - q) ** 2 + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    safe = p > 0
    inv = np.where(safe, 1.0 / np.where(safe, p, 1.0), 0.0)
    b00, b11, b22 = (S00 - q) * inv, (S11 - q) * inv, (S22 - q) * inv
    b01, b02, b12 = S01 * inv, S02 * inv, S12 * inv
    r = 0.5 * (b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02))
    phi = np.arccos(np.clip(r, -1.0, 1.0)) / 3.0
    hi = q + 2.0 * p * np.cos(phi)
    lo = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    mid = 3.0 * q - hi - lo
    return np.sort(np.stack([lo, mid, hi], axis=-1), axis=-1)


def spectra(points, branch: int = BRANCH) -> np.ndarray:
    """Sorted eigenvalues of ``J J^T`` for an ``(n, 3)`` batch of points.

    The pencil ``(B^2, A A^T)`` is reduced to the symmetric matrix
    ``B (A A^T)^{-1} B`` using the adjugate of the Gram matrix; ``A`` itself
    is never inverted. Rows at parallel singularities come back as ``inf``.
    """
    P = _as_points(points)
    eta = _etas(P, branch)
    g12, g13, g23 = _gram_offdiag(P, eta)
    # adjugate of G = [[1,g12,g13],[g12,1,g23],[g13,g23,1]]
    c00 = 1.0 - g23 * g23
    c11 = 1.0 - g13 * g13
    c22 = 1.0 - g12 * g12
    c01 = g13 * g23 - g12
    c02 = g12 * g23 - g13
    c12 = g12 * g13 - g23
    x, y, z = P[..., 0], P[..., 1], P[..., 2]
    e1, e2, e3 = eta[..., 0], eta[..., 1], eta[..., 2]
    # det(G) = det(A)^2; expanding det(A) keeps relative accuracy near singularities
    dA = e1 * e2 * e3 - e1 * y * z - e2 * x * z - e3 * x * y + 2 * x * y * z
    det_g = dA * dA
    bad = np.abs(det_g) <= SINGULAR_TOL**2
    inv = 1.0 / np.where(bad, 1.0, det_g)
    ev = _sym_eig3(
        e1 * e1 * c00 * inv,
        e2 * e2 * c11 * inv,
        e3 * e3 * c22 * inv,
        e1 * e2 * c01 * inv,
        e1 * e3 * c02 * inv,
        e2 * e3 * c12 * inv,
    )
    # the reduction above resolves each root to about eps * sigma_max; the
    # reciprocal pencil B^-1 G B^-1 resolves 1/sigma to eps / sigma_min, so the
    # small roots are taken from it (per root, whichever bound is smaller)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ie1, ie2, ie3 = 1.0 / e1, 1.0 / e2, 1.0 / e3
        rec = _sym_eig3(ie1 * ie1, ie2 * ie2, ie3 * ie3, g12 * ie1 * ie2, g13 * ie1 * ie3, g23 * ie2 * ie3)
        small = 1.0 / rec[..., ::-1]
        use_small = np.isfinite(small) & (small * small < small[..., :1] * ev[..., 2:])
        ev = np.where(use_small, small, ev)
    # acos loses ~sqrt(eps) near clustered roots; polish with Newton steps on
    # det(B^2 - s G) = k0 + k1 s + k2 s^2 + k3 s^3 in s for roots taken from the
    # first reduction and on the reversed cubic in 1/s for the others
    p1, p2, p3 = e1 * e1, e2 * e2, e3 * e3
    k0 = (p1 * p2 * p3)[..., None]
    k1 = -(p1 * p2 + p1 * p3 + p2 * p3)[..., None]
    k2 = (p1 + p2 + p3 - p1 * g23 * g23 - p2 * g13 * g13 - p3 * g12 * g12)[..., None]
    k3 = -det_g[..., None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        v = np.where(use_small, 1.0 / ev, ev)
        c0, c1 = np.where(use_small, k3, k0), np.where(use_small, k2, k1)
        c2, c3 = np.where(use_small, k1, k2), np.where(use_small, k0, k3)
        for _ in range(3):
            val = ((c3 * v + c2) * v + c1) * v + c0
            der = (3.0 * c3 * v + 2.0 * c2) * v + c1
            cand = v - val / der
            cval = ((c3 * cand + c2) * cand + c1) * cand + c0
            better = np.isfinite(cand) & (np.abs(cval) < np.abs(val))
            v = np.where(better, cand, v)
        ev = np.where(use_small, 1.0 / v, v)
    ev = np.sort(ev, axis=-1)
    return np.where(bad[..., None], np.inf, ev)


def spectrum_at(p, branch: int = BRANCH) -> Spectrum:
    P = _as_points(p)
    if not in_domain(P):
        raise DomainError(f"point {tuple(P.tolist())} outside the reachable cylinders")
    if abs(det_A(P, branch)) <= SINGULAR_TOL:
        raise SingularityError(f"parallel singularity at {tuple(P.tolist())}")
    ev = spectra(P, branch)
    return Spectrum(tuple(float(v) for v in ev))


def serial_singularity_at(p, tol: float = SINGULAR_TOL) -> bool:
    P = _as_points(p)
    if not in_domain(P):
        raise DomainError(f"point {tuple(P.tolist())} outside the reachable cylinders")
    return bool(np.min(np.abs(_etas(P))) <= tol)


def parallel_singularity_at(p, tol: float = SINGULAR_TOL) -> bool:
    P = _as_points(p)
    if not in_domain(P):
        raise DomainError(f"point {tuple(P.tolist())} outside the reachable cylinders")
    return abs(det_A(P)) <= tol


def char_values(points, sigma, branch: int = BRANCH) -> np.ndarray:
    """``det(B^2 - sigma A A^T)`` on an ``(n, 3)`` batch of points (no domain check)."""
    P = _as_points(points)
    eta = _etas(P, branch)
    g12, g13, g23 = _gram_offdiag(P, eta)
    sig = np.asarray(sigma, dtype=float)
    pp = eta * eta
    a, b, c = pp[..., 0] - sig, pp[..., 1] - sig, pp[..., 2] - sig
    s2 = sig * sig
    return a * b * c - s2 * (a * g23 * g23 + b * g13 * g13 + c * g12 * g12) - 2.0 * s2 * sig * g12 * g13 * g23


# --- interval enclosures over boxes ----------------------------------------


@dataclass(frozen=True, eq=False)
class _BoxLegs:
    x: Interval
    y: Interval
    z: Interval
    x2: Interval
    y2: Interval
    z2: Interval
    p: tuple  # radicands 1 - (...)
    eta: tuple
    empty: object  # some cylinder excluded over the whole box


def _box_legs(box: Box, branch: int = BRANCH) -> _BoxLegs:
    x, y, z = box.x, box.y, box.z
    x2, y2, z2 = isquare(x), isquare(y), isquare(z)
    L2 = LEG_LENGTH * LEG_LENGTH
    p1 = L2 - (y2 + z2)
    p2 = L2 - (x2 + z2)
    p3 = L2 - (x2 + y2)
    s = [isqrt(r) for r in (p1, p2, p3)]
    eta = tuple(scale(si, -branch) for si in s)
    empty = np.logical_or(np.logical_or(s[0].empty, s[1].empty), s[2].empty)
    return _BoxLegs(x, y, z, x2, y2, z2, (p1, p2, p3), eta, empty)


def _mark_empty(iv: Interval, empty) -> Interval:
    if np.ndim(empty) == 0:
        empty = bool(empty)
        if empty:
            return Interval._raw(iv.lo, iv.hi, True)
        return iv
    return Interval._raw(iv.lo, iv.hi, np.asarray(empty))


def _intersect(a: Interval, b: Interval) -> Interval:
    lo = np.maximum(a.lo, b.lo)
    hi = np.minimum(a.hi, b.hi)
    return Interval._raw(lo, np.maximum(hi, lo), a.empty)


def _mid(iv: Interval) -> Interval:
    with np.errstate(invalid="ignore"):
        m = np.asarray(0.5 * iv.lo + 0.5 * iv.hi)
    m = np.where(np.asarray(iv.empty), 0.0, m)
    return Interval._raw(m, m)


def _char_terms(x, y, z, x2, y2, z2, p, eta, sig):
    """Intermediate quantities of f_sigma, shared by point and gradient forms."""
    e1, e2, e3 = eta
    y_e2 = y * e2
    z_e3 = z * e3
    e1_x = e1 * x
    g12 = e1_x + y_e2 + z2
    g13 = e1_x + y2 + z_e3
    g23 = x2 + y_e2 + z_e3
    a, b, c = p[0] - sig, p[1] - sig, p[2] - sig
    return g12, g13, g23, a, b, c


def char_enclosure(box: Box, sigma, branch: int = BRANCH) -> Interval:
    """Interval enclosure of ``det(B^2 - sigma A A^T)`` over ``box``.

    Valid for the part of the box inside the cylinders; entries whose box
    misses the cylinders entirely are returned empty. ``sigma`` may be a
    scalar or one value per box of a batch.

    The natural interval extension is intersected with a mean-value form in
    the six variables ``(x, y, z, eta_1, eta_2, eta_3)``; treating the
    ``eta_i`` as free variables keeps the gradient polynomial.
    """
    lg = _box_legs(box, branch)
    x, y, z = lg.x, lg.y, lg.z
    sig = Interval._raw(sigma, sigma)
    sig2 = isquare(sig)
    sig3 = sig2 * sig
    # eta_i^2 equals the radicand p_i exactly, so a = p_1 - sigma needs no sqrt
    g12, g13, g23, a, b, c = _char_terms(x, y, z, lg.x2, lg.y2, lg.z2, lg.p, lg.eta, sig)
    natural = a * b * c - sig2 * (a * isquare(g23) + b * isquare(g13) + c * isquare(g12)) - scale(sig3 * g12 * g13 * g23, 2.0)

    # partial derivatives with respect to the intermediates
    fa = b * c - sig2 * isquare(g23)
    fb = a * c - sig2 * isquare(g13)
    fc = a * b - sig2 * isquare(g12)
    f12 = scale(sig2 * c * g12 + sig3 * g13 * g23, -2.0)
    f13 = scale(sig2 * b * g13 + sig3 * g12 * g23, -2.0)
    f23 = scale(sig2 * a * g23 + sig3 * g12 * g13, -2.0)
    e1, e2, e3 = lg.eta
    x2s, y2s, z2s = scale(x, 2.0), scale(y, 2.0), scale(z, 2.0)
    fx = (f12 + f13) * e1 + f23 * x2s - (fb + fc) * x2s
    fy = (f12 + f23) * e2 + f13 * y2s - (fa + fc) * y2s
    fz = (f13 + f23) * e3 + f12 * z2s - (fa + fb) * z2s
    fe1 = (f12 + f13) * x
    fe2 = (f12 + f23) * y
    fe3 = (f13 + f23) * z

    cx, cy, cz = _mid(x), _mid(y), _mid(z)
    ce = tuple(_mid(e) for e in lg.eta)
    cx2, cy2, cz2 = isquare(cx), isquare(cy), isquare(cz)
    # radicands stay tied to (x, y, z): a, b, c are not eta-dependent
    L2 = LEG_LENGTH * LEG_LENGTH
    cp = (L2 - (cy2 + cz2), L2 - (cx2 + cz2), L2 - (cx2 + cy2))
    h12, h13, h23, ha, hb, hc = _char_terms(cx, cy, cz, cx2, cy2, cz2, cp, ce, sig)
    f0 = ha * hb * hc - sig2 * (ha * isquare(h23) + hb * isquare(h13) + hc * isquare(h12)) - scale(sig3 * h12 * h13 * h23, 2.0)
    mv = (
        f0
        + fx * (x - cx)
        + fy * (y - cy)
        + fz * (z - cz)
        + fe1 * (e1 - ce[0])
        + fe2 * (e2 - ce[1])
        + fe3 * (e3 - ce[2])
    )
    return _mark_empty(_intersect(natural, mv), lg.empty)


def _det_A_form(box: Box, branch: int = BRANCH) -> Interval:
    lg = _box_legs(box, branch)
    x, y, z = lg.x, lg.y, lg.z
    e1, e2, e3 = lg.eta

    def det(x, y, z, e1, e2, e3):
        xy = x * y
        return e1 * e2 * e3 - e1 * (y * z) - e2 * (x * z) - e3 * xy + scale(xy * z, 2.0)

    natural = det(x, y, z, e1, e2, e3)
    dx = scale(y * z, 2.0) - e2 * z - e3 * y
    dy = scale(x * z, 2.0) - e1 * z - e3 * x
    dz = scale(x * y, 2.0) - e1 * y - e2 * x
    de1 = e2 * e3 - y * z
    de2 = e1 * e3 - x * z
    de3 = e1 * e2 - x * y
    c = [_mid(v) for v in (x, y, z, e1, e2, e3)]
    mv = det(*c)
    for g, v, cv in zip((dx, dy, dz, de1, de2, de3), (x, y, z, e1, e2, e3), c):
        mv = mv + g * (v - cv)
    return _mark_empty(_intersect(natural, mv), lg.empty)


_OCTANTS = np.array([[i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(8)], dtype=bool)


def det_A_enclosure(box: Box, branch: int = BRANCH) -> Interval:
    """Interval enclosure of ``det(A)`` over ``box`` (the in-cylinder part).

    Natural extension intersected with a mean-value form, as for
    :func:`char_enclosure`, and further with the hull of the same forms
    over the 8 octants of the box. Large boxes (a whole certified cube)
    need the octant pass to keep the enclosure away from zero.
    """
    whole = _det_A_form(box, branch)
    lo, hi = np.atleast_2d(box.lo), np.atleast_2d(box.hi)
    n = lo.shape[0]
    mid = np.clip(0.5 * lo + 0.5 * hi, lo, hi)[:, None, :]
    sub_lo = np.where(_OCTANTS, mid, lo[:, None, :]).reshape(-1, 3)
    sub_hi = np.where(_OCTANTS, hi[:, None, :], mid).reshape(-1, 3)
    part = _det_A_form(Box.from_bounds(sub_lo, sub_hi), branch)
    pe = np.broadcast_to(np.asarray(part.empty), (8 * n,))
    plo = np.where(pe, np.inf, part.lo).reshape(n, 8).min(axis=1)
    phi = np.where(pe, -np.inf, part.hi).reshape(n, 8).max(axis=1)
    empty = np.asarray(whole.empty) | pe.reshape(n, 8).all(axis=1)
    rlo = np.maximum(whole.lo, plo)
    rhi = np.maximum(np.minimum(whole.hi, phi), rlo)
    if np.ndim(box.lo) == 1:
        return Interval._raw(float(rlo[0]), float(rhi[0]), bool(empty[0]))
    return Interval._raw(rlo, rhi, empty)


def domain_status(box: Box):
    """Per box: 1 if fully inside the cylinders, -1 if provably disjoint, 0 otherwise."""
    x2, y2, z2 = isquare(box.x), isquare(box.y), isquare(box.z)
    L2 = LEG_LENGTH * LEG_LENGTH
    sums = [y2 + z2, x2 + z2, x2 + y2]
    inside = np.logical_and.reduce([np.asarray(s.hi) <= L2 for s in sums])
    outside = np.logical_or.reduce([np.asarray(s.lo) > L2 for s in sums])
    r = np.where(outside, -1, np.where(inside, 1, 0))
    return int(r) if np.ndim(r) == 0 else r


PointOrBox = Union[Sequence[float], np.ndarray, Box]


def char_value(p: PointOrBox, sigma: float):
    """``f_sigma = det(B^2 - sigma A A^T)`` at a point, or its enclosure over a box.

    Zeros of ``f_sigma`` in space are the points where ``sigma`` is an
    eigenvalue of ``J J^T`` (away from parallel singularities).
    """
    if isinstance(p, Box):
        if np.any(domain_status(p) == -1):
            raise DomainError("box lies outside the reachable cylinders")
        return char_enclosure(p, sigma)
    P = _as_points(p)
    if not np.all(in_domain(P)):
        raise DomainError("point outside the reachable cylinders")
    v = char_values(P, sigma)
    return float(v) if np.ndim(v) == 0 else v
