"""Solution formulas for the Cauchy, monochromatic and stationary problems.

Cauchy problem (``t > 0``, initial field ``A0`` with charge ``rho0``):

    A = c^-1 d/dt(psi*j) + c grad(psi*rho) - i rot(psi*j)
        - c^-2 d/dt(psi *_x A0) + i c^-1 rot(psi *_x A0) + c grad(chi *_x rho0)

where ``*_x`` is a convolution in space only. ``psi *_x g`` is a Kirchhoff
mean over the sphere ``|y - x| = ct`` and ``chi *_x rho0`` a Newtonian
potential truncated at radius ``ct``. The source charge ``rho`` here is the
charge carried in by ``j`` after ``t = 0``; the initial charge enters
through ``rho0``.

Monochromatic fields (time factor ``exp(-i omega t)``, ``k = omega / c``):

    4 pi A = ik G*J + i rot(G*J) - c grad(G*rho),    G = exp(ikR) / R.

Stationary fields: ``A = -c grad N[rho] + i rot N[J]`` with ``N`` the
Newtonian potential, or ``A / c = grad Phi + i rot Psi`` with
``Phi = -N[rho]`` and ``Psi = N[J] / c``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from . import diff
from .errors import InvalidStepError
from .field import VACUUM, Density, Medium, SourceModel, charge_conservation_residual
from .kernels import (FOUR_PI, green_tensor_apply, helmholtz_potential, newtonian_potential)
from .quadrature import BallBudget, SphericalQuadrature, sphere_surface_integral
from .sources import InitialData

log = logging.getLogger(__name__)

_E = np.eye(3)


def _zero3():
    return np.zeros(3, dtype=complex)


# --------------------------------------------------------------------------
# Cauchy problem


def _mean_integral(g, x, t, init: InitialData, c, budget, q):
    """``(ct)^-1 int_{|y-x|=ct} g dS``; zero when the sphere misses the support."""
    rad = c * t
    val = sphere_surface_integral(g, x, rad, init.center, init.support_radius, budget, q)
    if val is None:
        probe = np.asarray(g(np.asarray(x, dtype=float)[None, :]))
        return np.zeros(probe.shape[1:], dtype=complex)
    return np.asarray(val, dtype=complex) / rad


def _curl_sampler(a0, h):
    """Pointwise central-difference curl of a vector sampler."""

    def rot(pts):
        pts = np.asarray(pts, dtype=float)
        d = [(a0(pts + h * e) - a0(pts - h * e)) / (2.0 * h) for e in _E]
        return np.stack([d[1][:, 2] - d[2][:, 1], d[2][:, 0] - d[0][:, 2], d[0][:, 1] - d[1][:, 0]], axis=-1)

    return rot


def _div_sampler(a0, h):
    def div(pts):
        pts = np.asarray(pts, dtype=float)
        return sum((a0(pts + h * e)[:, i] - a0(pts - h * e)[:, i]) / (2.0 * h) for i, e in enumerate(_E))

    return div


def kirchhoff_sphere_integral(a0, x, t, q: SphericalQuadrature | None = None, c=1.0, h=None,
                              init: InitialData | None = None, budget: BallBudget = BallBudget()):
    """Sphere integrals ``((ct)^-1 int A0 dS, (ct)^-1 int rot A0 dS)`` over ``|y - x| = ct``.

    ``rot A0`` is taken by central differences of the sampler. With ``init``
    (or ``q=None`` and a bounded ``init``) the sphere is clipped to the part
    inside the support; with ``q`` every node of ``q`` is used.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    if init is None:
        init = InitialData(a0, np.inf)
        if q is None:
            q = SphericalQuadrature.default()
    h = diff.default_step(init.scale) if h is None else h
    h = diff.check_step(h, x)
    k1 = _mean_integral(a0, x, t, init, c, budget, q)
    k2 = _mean_integral(_curl_sampler(a0, h), x, t, init, c, budget, q)
    return k1, k2


def example2_reduced(init: InitialData, x, t, m: Medium = VACUUM, h=None,
                     q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """Field of charge-free initial data without sources, from sphere means.

    ``4 pi c A = d/dt K1 - i c K2`` with ``K1, K2`` from
    :func:`kirchhoff_sphere_integral`.
    """
    c = m.c
    x = np.asarray(x, dtype=float)
    if _outside_cone(init, x, t, c):
        return _zero3()
    h = diff.default_step(init.scale) if h is None else h
    ht = _time_step(h, c, t)
    kw = dict(q=q, c=c, h=h, init=init, budget=budget)
    k1p, _ = kirchhoff_sphere_integral(init.a0, x, t + ht, **kw)
    k1m, _ = kirchhoff_sphere_integral(init.a0, x, t - ht, **kw)
    _, k2 = kirchhoff_sphere_integral(init.a0, x, t, **kw)
    return ((k1p - k1m) / (2.0 * ht) - 1j * c * k2) / (FOUR_PI * c)


def _time_step(h, c, t):
    ht = h / c
    if ht >= t:
        raise InvalidStepError(f"time step {ht:.3e} does not fit inside (0, t = {t})")
    return diff.check_step(ht, t)


def _outside_cone(init: InitialData, x, t, c):
    if not np.isfinite(init.support_radius):
        return False
    return np.linalg.norm(x - np.asarray(init.center)) > init.support_radius + c * t


def _psi_x(g, x, t, init, c, budget, q):
    """Spatial convolution ``psi *_x g = -(1/(4 pi t)) int_{|y-x|=ct} g dS``."""
    return -c / FOUR_PI * _mean_integral(g, x, t, init, c, budget, q)


def _chi_x(rho0, x, t, init, c, budget, q):
    """``chi *_x rho0 = -(1/4pi) int_{|y-x|<ct} rho0 / |x-y| dV``."""
    dens = Density.spatial(rho0, init.support_radius, init.center)
    return -newtonian_potential(dens, x, q=q, budget=budget, r_max=c * t)


def _initial_part(init: InitialData, x, t, c, h, budget, q):
    ht = _time_step(h, c, t)
    a0 = init.a0
    dpsi_dt = (_psi_x(a0, x, t + ht, init, c, budget, q) - _psi_x(a0, x, t - ht, init, c, budget, q)) / (2.0 * ht)
    # Jac[k, i] = d (psi *_x A0)_k / d x_i
    Jac = np.stack(
        [(_psi_x(a0, x + h * e, t, init, c, budget, q) - _psi_x(a0, x - h * e, t, init, c, budget, q)) / (2.0 * h)
         for e in _E], axis=-1)
    rot = diff.curl_from_jacobian(Jac)
    rho0 = init.rho0
    if rho0 is None:
        div = _div_sampler(a0, h)
        rho0 = lambda pts: div(pts) / c
    grad_chi = np.array(
        [(_chi_x(rho0, x + h * e, t, init, c, budget, q) - _chi_x(rho0, x - h * e, t, init, c, budget, q)) / (2.0 * h)
         for e in _E])
    return -dpsi_dt / c**2 + 1j * rot / c + c * grad_chi


def _check_source_charge(s: SourceModel, n_probe=4):
    """Warn when the supplied charge is not the one carried in by ``j``."""
    if s.is_zero or not np.isfinite(s.support_radius):
        return
    rng = np.random.default_rng(0)
    t0 = max(s.t_start, 0.0)
    for _ in range(n_probe):
        y = np.asarray(s.center) + 0.5 * s.support_radius * rng.uniform(-1.0, 1.0, 3)
        tt = t0 + 0.5 * s.scale
        res = abs(charge_conservation_residual(s, y, tt, diff.default_step(s.scale)))
        ref = abs(complex(s.rho(y[None, :], np.array([tt]))[0])) / s.scale + 1e-300
        if res > 1e-4 * max(ref, 1.0):
            log.warning("source charge does not match the charge carried by j (residual %.3e)", res)
            return


def cauchy_solve(init: InitialData | None, s: SourceModel | None, m: Medium, x, t, h=None,
                 q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """Field at ``(x, t)``, ``t > 0``, of the Cauchy problem with initial data and sources.

    Sources act only from ``t = 0`` on. Points beyond the reach of both the
    initial support and the sources give exactly zero.
    """
    if not t > 0:
        raise ValueError("cauchy_solve needs t > 0")
    x = np.asarray(x, dtype=float)
    c = m.c
    out = _zero3()
    if init is not None and not _outside_cone(init, x, t, c):
        hh = diff.default_step(init.scale) if h is None else h
        hh = diff.check_step(hh, x)
        out = out + _initial_part(init, x, t, c, hh, budget, q)
    if s is not None and not s.is_zero:
        if s.t_start < 0.0:
            s = replace(s, t_start=0.0)
        _check_source_charge(s)
        out = out + green_tensor_apply(s, x, t, m, h=h, q=q, budget=budget)
    return out


# --------------------------------------------------------------------------
# monochromatic fields


@dataclass(frozen=True)
class MonochromaticSource:
    """Current amplitude ``J(x)`` of a field ``A(x) exp(-i omega t)``.

    ``rho`` defaults to ``-i omega^-1 div J`` by central differences.
    """

    J: object
    omega: float
    k: float
    support_radius: float
    rho: object = None
    center: tuple = (0.0, 0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        if not (self.omega > 0 and self.k > 0):
            raise ValueError("omega and k must be positive")
        if not np.isfinite(self.support_radius):
            raise ValueError("monochromatic sources need bounded support")

    @classmethod
    def from_medium(cls, J, omega, support_radius, m: Medium = VACUUM, **kw):
        return cls(J, omega, omega / m.c, support_radius, **kw)

    def check_medium(self, m: Medium):
        if abs(self.k * m.c - self.omega) > 1e-12 * self.omega:
            raise ValueError(f"k c = {self.k * m.c!r} differs from omega = {self.omega!r}")

    def charge(self, h=None):
        if self.rho is not None:
            return self.rho
        h = diff.default_step(self.scale) if h is None else h
        div = _div_sampler(self.J, h)
        return lambda pts: -1j * div(pts) / self.omega


def mono_solve(src: MonochromaticSource, x, m: Medium = VACUUM, h=None,
               q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """Complex amplitude ``A(x)``; the field is ``A(x) exp(-i omega t)``."""
    src.check_medium(m)
    x = np.asarray(x, dtype=float)
    c, k = m.c, src.k
    h = diff.default_step(src.scale) if h is None else h
    h = diff.check_step(h, x)
    rho = src.charge()
    kw = dict(support_radius=src.support_radius, center=src.center, q=q, budget=budget)

    def HJ(p):
        return helmholtz_potential(src.J, k, p, **kw)

    def Hrho(p):
        return helmholtz_potential(rho, k, p, **kw)

    Jac = np.stack([(HJ(x + h * e) - HJ(x - h * e)) / (2.0 * h) for e in _E], axis=-1)
    grad_rho = np.array([(Hrho(x + h * e) - Hrho(x - h * e)) / (2.0 * h) for e in _E])
    return 1j * k * HJ(x) + 1j * diff.curl_from_jacobian(Jac) - c * grad_rho


def helmholtz_residual(A, src: MonochromaticSource, m: Medium, x, h):
    """``Laplace A + k^2 A + ikJ + i rot J - c grad rho`` at ``x`` for a sampler ``A(pts)``."""
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x)
    k = src.k
    rho = src.charge()
    one = x[None, :]
    lap = diff.laplacian(A, x, h)
    J = src.J(one)[0]
    return lap + k * k * A(one)[0] + 1j * k * J + 1j * diff.curl(src.J, x, h) - m.c * diff.gradient(rho, x, h)


def sommerfeld_residual(A, x, k, h):
    """``|dA/dR - ik A|`` along the ray through ``x`` (``A`` a point sampler)."""
    x = np.asarray(x, dtype=float)
    e = x / np.linalg.norm(x)
    dA = (A(x + h * e) - A(x - h * e)) / (2.0 * h)
    return float(np.linalg.norm(dA - 1j * k * A(x)))


# --------------------------------------------------------------------------
# stationary fields


@dataclass(frozen=True)
class StationarySource:
    """Time-independent current ``J(x)`` and charge ``rho(x)`` with bounded support."""

    J: object
    rho: object
    support_radius: float
    center: tuple = (0.0, 0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.support_radius):
            raise ValueError("stationary sources need bounded support")


def _zero_scalar(pts):
    return np.zeros(len(pts), dtype=complex)


def _zero_vector(pts):
    return np.zeros((len(pts), 3), dtype=complex)


def stationary_potentials(src: StationarySource, x, m: Medium = VACUUM,
                          q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """``(Phi, Psi) = (-N[rho], N[J] / c)`` at ``x``."""
    kw = dict(support_radius=src.support_radius, center=src.center, q=q, budget=budget)
    rho = src.rho if src.rho is not None else _zero_scalar
    J = src.J if src.J is not None else _zero_vector
    return -newtonian_potential(rho, x, **kw), newtonian_potential(J, x, **kw) / m.c


def stationary_solve(src: StationarySource, x, m: Medium = VACUUM, h=None,
                     q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """``A = c (grad Phi + i rot Psi)`` at ``x``."""
    x = np.asarray(x, dtype=float)
    h = diff.default_step(src.scale) if h is None else h
    h = diff.check_step(h, x)
    c = m.c

    def pots(p):
        return stationary_potentials(src, p, m, q=q, budget=budget)

    plus = [pots(x + h * e) for e in _E]
    minus = [pots(x - h * e) for e in _E]
    grad_phi = np.array([(a[0] - b[0]) / (2.0 * h) for a, b in zip(plus, minus)])
    Jac = np.stack([(a[1] - b[1]) / (2.0 * h) for a, b in zip(plus, minus)], axis=-1)
    return c * (grad_phi + 1j * diff.curl_from_jacobian(Jac))


# --------------------------------------------------------------------------
# residuals


def wave_equation_residual(A, s: SourceModel, m: Medium, x, t, h):
    """``Laplace A - c^-2 A_tt + i rot j - c grad rho - c^-1 j_t`` at ``(x, t)``.

    ``A(pts, t)`` is a field sampler; zero on exact solutions up to ``O(h^2)``.
    """
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x, t)
    c = m.c
    ht = h / c
    one = x[None, :]
    at = lambda tt: (lambda p: _at_time(A, p, tt))
    lap = diff.laplacian(at(t), x, h)
    att = diff.d2_dt2(lambda tt: _at_time(A, one, tt)[0], t, ht)
    rot_j = diff.curl(lambda p: _at_time(s.j, p, t), x, h)
    grad_rho = diff.gradient(lambda p: _at_time(s.rho, p, t), x, h)
    jt = diff.d_dt(lambda tt: _at_time(s.j, one, tt)[0], t, ht)
    return lap - att / c**2 + 1j * rot_j - c * grad_rho - jt / c


def _at_time(fn, pts, t):
    """Evaluate a space-time sampler at points ``pts`` and a common time ``t``."""
    return np.asarray(fn(pts, np.full(len(pts), t)))
