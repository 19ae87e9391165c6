"""Retarded, Helmholtz and Newtonian potentials and the Green-tensor solution.

Conventions (``R = |x - y|``):

* wave function ``psi = -delta(t - R/c) / (4 pi R)``, the causal Green
  function of ``Laplace - c^-2 d^2/dt^2``;
* ``chi = -theta(ct - R) / (4 pi R)``, its time primitive;
* ``newtonian_potential(f) = (1/4pi) int f(y) / R dV``;
* ``helmholtz_potential(f, k) = (1/4pi) int exp(ikR) f(y) / R dV``
  (time factor ``exp(-i omega t)``).

All potentials are evaluated by :func:`afield.quadrature.ball_integral`: a
radial Gauss-Legendre rule on each ray from ``x``, clipped to the support
ball and to the light-cone window, times an angular rule. Derivatives of
potentials are taken by central differences of the potential values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import diff
from .field import VACUUM, Density, Medium, SourceModel
from .quadrature import BallBudget, SphericalQuadrature, ball_integral, gauss_legendre

FOUR_PI = 4.0 * np.pi

WAVE_PSI, WAVE_CHI, HELMHOLTZ, NEWTONIAN = "wave-psi", "wave-chi", "helmholtz", "newtonian"


@dataclass(frozen=True)
class RetardedKernel:
    """A scalar convolution kernel; ``apply`` dispatches to the potential functions."""

    kind: str
    c: float = 1.0
    k: float = 0.0

    def apply(self, f, x, t=None, **kw):
        if self.kind == WAVE_PSI:
            return retarded_potential(f, x, t, c=self.c, **kw)
        if self.kind == WAVE_CHI:
            return chi_potential(f, x, t, c=self.c, **kw)
        if self.kind == HELMHOLTZ:
            return helmholtz_potential(f, self.k, x, **kw)
        if self.kind == NEWTONIAN:
            return newtonian_potential(f, x, **kw)
        raise ValueError(f"unknown kernel kind {self.kind!r}")


def _as_density(f):
    return f if isinstance(f, Density) else Density(f)


def _zero_like(f, x, t):
    probe = np.asarray(f(np.asarray(x, dtype=float)[None, :], np.array([0.0 if t is None else t])))
    return np.zeros(probe.shape[1:], dtype=complex)


def _finish(val, f, x, t, scale):
    if val is None:
        return _zero_like(f, x, t)
    val = scale * val
    return complex(val) if np.ndim(val) == 0 else np.asarray(val, dtype=complex)


def retarded_potential(f, x, t, c=1.0, q: SphericalQuadrature | None = None,
                       radial_steps: int | None = None, budget: BallBudget = BallBudget()):
    """``(psi * f)(x, t) = -(1/4pi) int f(y, t - R/c) / R dV(y)``.

    ``f`` is a :class:`~afield.field.Density` (or a bare callable ``f(y, s)``
    with unbounded support, which then needs a finite ``t_start``). Returns
    an exact zero when the support is out of causal reach.
    """
    f = _as_density(f)
    if radial_steps is not None:
        budget = BallBudget(budget.n_theta, budget.n_phi, radial_steps, budget.max_nodes)
    r_hi = c * (t - f.t_start)
    r_lo = c * (t - f.t_end)

    def integrand(pts, r):
        return f(pts, t - r / c)

    val = ball_integral(integrand, x, f.center, f.support_radius, r_lo, r_hi, budget, q)
    return _finish(val, f, x, t, -1.0 / FOUR_PI)


def time_primitive(f: Density, n_t: int = 24):
    """``F(y, s) = int_{t_start}^{s} f(y, s') ds'`` (uses ``f.primitive`` when given)."""
    if f.primitive is not None:
        return f.primitive
    if not np.isfinite(f.t_start):
        raise ValueError("a time primitive needs a finite t_start")
    u, wu = gauss_legendre(n_t)

    def F(y, s):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(y),))
        upper = np.minimum(s, f.t_end)
        span = np.maximum(upper - f.t_start, 0.0)
        total = None
        for ui, wi in zip(u, wu):
            v = np.asarray(f(y, f.t_start + span * ui))
            term = (wi * span).reshape((-1,) + (1,) * (v.ndim - 1)) * v
            total = term if total is None else total + term
        return total

    return F


def chi_potential(f, x, t, c=1.0, q: SphericalQuadrature | None = None,
                  radial_steps: int | None = None, budget: BallBudget = BallBudget(), n_t: int = 24):
    """``(chi * f)(x, t) = -(1/4pi) int F(y, t - R/c) / R dV(y)``, ``F`` the time primitive of ``f``.

    ``d/dt (chi * f) = psi * f``; the primitive keeps its final value after
    ``t_end`` so only the lower light-cone bound clips the radius.
    """
    f = _as_density(f)
    F = time_primitive(f, n_t)
    g = Density(F, f.support_radius, f.center, f.t_start)
    return retarded_potential(g, x, t, c=c, q=q, radial_steps=radial_steps, budget=budget)


def _spatial(f, support_radius, center):
    if isinstance(f, Density):
        return f
    return Density.spatial(f, support_radius, center)


def newtonian_potential(f, x, support_radius=np.inf, center=(0.0, 0.0, 0.0),
                        q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget(),
                        r_max=np.inf):
    """``(1/4pi) int f(y) / |x - y| dV(y)`` for a density ``f(y)`` with bounded support."""
    f = _spatial(f, support_radius, center)
    val = ball_integral(lambda pts, r: f(pts, 0.0), x, f.center, f.support_radius, 0.0, r_max, budget, q)
    return _finish(val, f, x, 0.0, 1.0 / FOUR_PI)


def helmholtz_potential(f, k, x, support_radius=np.inf, center=(0.0, 0.0, 0.0),
                        q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """``(1/4pi) int exp(ik|x-y|) f(y) / |x - y| dV(y)``; ``k = 0`` is the Newtonian potential."""
    f = _spatial(f, support_radius, center)
    kernel = None if k == 0 else (lambda r: np.exp(1j * k * r))
    val = ball_integral(lambda pts, r: f(pts, 0.0), x, f.center, f.support_radius, 0.0, np.inf,
                        budget, q, kernel=kernel)
    return _finish(val, f, x, 0.0, 1.0 / FOUR_PI)


def green_tensor_apply(s: SourceModel, x, t, m: Medium = VACUUM, h=None,
                       q: SphericalQuadrature | None = None, budget: BallBudget = BallBudget()):
    """Causal solution ``A = c^-1 d/dt(psi*j) + c grad(psi*rho) - i rot(psi*j)``.

    Derivatives act on the convolution values with central differences of
    step ``h`` (default ``eps^(1/3) * s.scale``) in space and ``h / c`` in time.
    """
    x = np.asarray(x, dtype=float)
    c = m.c
    h = diff.default_step(s.scale) if h is None else h
    h = diff.check_step(h, x)
    ht = h / c
    jd, rd = s.j_density(), s.rho_density()
    kw = dict(c=c, q=q, budget=budget)

    def pj(p, tt):
        return retarded_potential(jd, p, tt, **kw)

    def prho(p, tt):
        return retarded_potential(rd, p, tt, **kw)

    dpj_dt = (pj(x, t + ht) - pj(x, t - ht)) / (2.0 * ht)
    E = np.eye(3)
    jplus = [pj(x + h * e, t) for e in E]
    jminus = [pj(x - h * e, t) for e in E]
    # J[k, i] = d (psi*j)_k / d x_i
    J = np.stack([(a - b) / (2.0 * h) for a, b in zip(jplus, jminus)], axis=-1)
    rot = diff.curl_from_jacobian(J)
    grad_rho = np.array([(prho(x + h * e, t) - prho(x - h * e, t)) / (2.0 * h) for e in E])
    return dpj_dt / c + c * grad_rho - 1j * rot


def vector_identity_residual(A, x, h):
    """Residual of ``rot rot A - grad div A + Laplace A`` by nested central differences.

    The nested first-derivative operators use step ``h`` twice, the
    Laplacian is the compact 7-point stencil, so the residual is ``O(h^2)``.
    """
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x)

    def curl_many(pts):
        d = [(A(pts + h * e) - A(pts - h * e)) / (2.0 * h) for e in np.eye(3)]
        return np.stack([d[1][:, 2] - d[2][:, 1], d[2][:, 0] - d[0][:, 2], d[0][:, 1] - d[1][:, 0]], axis=-1)

    def div_many(pts):
        return sum((A(pts + h * e)[:, i] - A(pts - h * e)[:, i]) / (2.0 * h) for i, e in enumerate(np.eye(3)))

    rotrot = diff.curl(curl_many, x, h)
    graddiv = diff.gradient(div_many, x, h)
    lap = diff.laplacian(A, x, h)
    return rotrot - graddiv + lap


def wave_residual(u, f, x, t, h, c=1.0):
    """``Laplace u - c^-2 u_tt - f`` at ``(x, t)`` for samplers ``u(pts, t)``, ``f(pts, t)``."""
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x, t)
    ht = h / c
    lap = diff.laplacian(lambda p: u(p, t), x, h)
    utt = diff.d2_dt2(lambda tt: u(x[None, :], tt)[0], t, ht)
    return lap - utt / c**2 - np.asarray(f(x[None, :], t))[0]
