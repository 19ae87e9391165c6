"""Built-in sources, mollifiers and initial data."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.special import erf as verf
from scipy.special import ndtr

from .field import VACUUM, Medium, SourceModel

TRUNCATE = 8.0


def gaussian(y, center, sigma, truncate=TRUNCATE):
    """Unit-mass isotropic Gaussian, cut off at ``truncate * sigma``."""
    d2 = np.sum((np.asarray(y) - center) ** 2, axis=-1)
    g = np.exp(-0.5 * d2 / sigma**2) / ((2.0 * np.pi) ** 1.5 * sigma**3)
    return np.where(d2 <= (truncate * sigma) ** 2, g, 0.0)


def gaussian_potential_gradient(y, center, sigma):
    """Gradient of the Newtonian potential ``erf(r / (sqrt2 sigma)) / (4 pi r)`` of a unit Gaussian."""
    d = np.asarray(y, dtype=float) - center
    r = np.linalg.norm(d, axis=-1)
    z = r / (sqrt(2.0) * sigma)
    small = z < 1e-3
    rs = np.where(small, 1.0, r)
    dNdr = (np.sqrt(2.0 / np.pi) / sigma * np.exp(-z * z) / rs - verf(z) / rs**2) / (4.0 * np.pi)
    # series of dN/dr / r near the centre
    coef_small = -1.0 / (3.0 * (2.0 * np.pi) ** 1.5 * sigma**3) * (1.0 - 0.3 * z * z)
    radial = np.where(small, coef_small, dNdr / rs)
    return radial[..., None] * d


def smooth_step(s, tau, truncate=TRUNCATE):
    """Primitive of :func:`smooth_pulse`; exactly 0 before ``-truncate*tau`` and 1 after ``truncate*tau``."""
    s = np.asarray(s, dtype=float)
    lo, hi = ndtr(-truncate), ndtr(truncate)
    return np.clip((ndtr(s / tau) - lo) / (hi - lo), 0.0, 1.0)


def smooth_pulse(s, tau, truncate=TRUNCATE):
    """Truncated Gaussian of unit mass and width ``tau`` (a mollified delta in time)."""
    s = np.asarray(s, dtype=float)
    norm = (ndtr(truncate) - ndtr(-truncate)) * sqrt(2.0 * np.pi) * tau
    return np.where(np.abs(s) <= truncate * tau, np.exp(-0.5 * (s / tau) ** 2) / norm, 0.0)


def born_charge(q=1.0, sigma=0.1, medium: Medium = VACUUM, mollifier="isotropic", truncate=TRUNCATE):
    """A charge ``q`` appearing at the origin at ``t = 0``, smoothed over width ``sigma``.

    The charge is ``q m(y) Theta(s)`` and the compensating current
    ``q delta(s) grad N[m](y)`` (``N`` the Newtonian potential), so charge is
    conserved exactly; the current is not compactly supported. The time
    width is ``sigma / c``. ``mollifier="isotropic"`` uses one Gaussian;
    ``"split"`` uses two half-mass Gaussians at ``+-sigma`` on the z-axis,
    whose far field differs from Coulomb by an ``O(sigma^2)`` quadrupole.
    """
    c = medium.c
    tau = sigma / c
    if mollifier == "isotropic":
        centers, masses = [np.zeros(3)], [1.0]
    elif mollifier == "split":
        centers, masses = [np.array([0.0, 0.0, sigma]), np.array([0.0, 0.0, -sigma])], [0.5, 0.5]
    else:
        raise ValueError(f"unknown mollifier {mollifier!r}")

    def shape(y):
        return sum(w * gaussian(y, c0, sigma, truncate) for w, c0 in zip(masses, centers))

    def grad_potential(y):
        return sum(w * gaussian_potential_gradient(y, c0, sigma) for w, c0 in zip(masses, centers))

    def rho(y, s):
        return q * shape(y) * smooth_step(s, tau, truncate)

    def j(y, s):
        return q * smooth_pulse(s, tau, truncate)[..., None] * grad_potential(y)

    support = max(np.linalg.norm(c0) for c0 in centers) + truncate * sigma
    src = SourceModel(
        rho=lambda y, s: rho(y, s).astype(complex),
        j=lambda y, s: j(y, s).astype(complex),
        support_radius=support,
        t_start=-truncate * tau,
        j_t_end=truncate * tau,
        scale=sigma,
        j_support_radius=np.inf,
        name=f"born-charge({mollifier})",
    )
    src_field = lambda x, t: -q * c * smooth_step(t, tau, truncate)[..., None] * grad_potential(x)
    return src, src_field


def bump(r2, a, p):
    """``(1 - r^2/a^2)^p`` inside radius ``a``, zero outside."""
    u = 1.0 - r2 / a**2
    return np.where(u > 0.0, np.maximum(u, 0.0) ** p, 0.0)


def time_bump(s, t0, width, p=4):
    u = 1.0 - ((np.asarray(s, dtype=float) - t0) / width) ** 2
    return np.where(u > 0.0, np.maximum(u, 0.0) ** p, 0.0)


def time_bump_rate(s, t0, width, p=4):
    s = np.asarray(s, dtype=float)
    u = 1.0 - ((s - t0) / width) ** 2
    du = -2.0 * (s - t0) / width**2
    return np.where(u > 0.0, p * np.maximum(u, 0.0) ** (p - 1) * du, 0.0)


def dipole_pulse(p=(0.0, 0.0, 1.0), radius=1.0, t0=1.0, width=1.0, power=4, omega=0.0):
    """Charge-conserving dipole source with compact support in space and time.

    ``j = p g(y) f'(s)`` and ``rho = -(p . grad g) f(s)`` with polynomial
    bumps ``g`` (radius ``radius``) and ``f`` (centred at ``t0``); with
    ``omega`` the time profile is modulated by ``exp(-i omega s)``.
    """
    pv = np.asarray(p, dtype=complex)
    a = float(radius)

    def g(y):
        return bump(np.sum(y**2, axis=-1), a, power)

    def grad_g(y):
        u = 1.0 - np.sum(y**2, axis=-1) / a**2
        coef = np.where(u > 0.0, -2.0 * power / a**2 * np.maximum(u, 0.0) ** (power - 1), 0.0)
        return coef[..., None] * y

    def f(s):
        return time_bump(s, t0, width) * np.exp(-1j * omega * np.asarray(s))

    def fdot(s):
        s = np.asarray(s, dtype=float)
        return (time_bump_rate(s, t0, width) - 1j * omega * time_bump(s, t0, width)) * np.exp(-1j * omega * s)

    def rho(y, s):
        return -(grad_g(y) @ pv) * f(s)

    def j(y, s):
        return (g(y) * fdot(s))[..., None] * pv

    return SourceModel(rho=rho, j=j, support_radius=a, t_start=t0 - width,
                       rho_t_end=t0 + width, j_t_end=t0 + width, scale=a, name="dipole-pulse")


@dataclass(frozen=True)
class InitialData:
    """Initial field ``a0(x)`` vanishing outside ``support_radius``.

    ``rho0`` is the initial complex charge ``c^-1 div a0``; ``None`` means it
    is derived by differencing ``a0``.
    """

    a0: object
    support_radius: float
    center: tuple = (0.0, 0.0, 0.0)
    rho0: object = None
    scale: float = 1.0
    name: str = "initial-data"


def swirl_initial_data(radius=1.0, power=5, v=(1.0, 0.5j, 0.0)):
    """Smooth, compactly supported, divergence-free ``a0 = grad(phi) x v``.

    ``phi = (1 - r^2/a^2)^power``; ``a0`` is tangent to spheres about the
    origin and carries no charge.
    """
    a = float(radius)
    vv = np.asarray(v, dtype=complex)

    def a0(x):
        x = np.asarray(x, dtype=float)
        u = 1.0 - np.sum(x**2, axis=-1) / a**2
        coef = np.where(u > 0.0, -2.0 * power / a**2 * np.maximum(u, 0.0) ** (power - 1), 0.0)
        return coef[..., None] * np.cross(x, vv)

    zero = lambda x: np.zeros(np.shape(x)[:-1], dtype=complex)
    return InitialData(a0, a, (0.0, 0.0, 0.0), rho0=zero, scale=a, name="swirl")


def uniform_ball_density(rho0, a):
    return lambda y: np.where(np.sum(np.asarray(y) ** 2, axis=-1) <= a * a, rho0, 0.0).astype(complex)


def rotating_ball_current(rho0, a, omega):
    """``J = rho0 (w x y)`` inside the ball, ``w = (0, 0, omega)``."""

    def J(y):
        y = np.asarray(y, dtype=float)
        inside = np.sum(y**2, axis=-1) <= a * a
        out = np.zeros(y.shape, dtype=complex)
        out[..., 0] = -omega * y[..., 1]
        out[..., 1] = omega * y[..., 0]
        return np.where(inside[..., None], rho0 * out, 0.0)

    return J


def gaussian_dipole_amplitude(p=(0.0, 0.0, 1.0), sigma=0.125, omega=1.0, medium: Medium = VACUUM,
                              truncate=TRUNCATE):
    """Monochromatic mollified point dipole ``J = p g_sigma(x)``, charge ``-i omega^-1 div J`` in closed form."""
    from .solvers import MonochromaticSource

    pv = np.asarray(p, dtype=complex)
    origin = np.zeros(3)

    def J(y):
        return gaussian(y, origin, sigma, truncate)[..., None] * pv

    def rho(y):
        y = np.asarray(y, dtype=float)
        grad = -gaussian(y, origin, sigma, truncate)[..., None] * y / sigma**2
        return -1j * (grad @ pv) / omega

    return MonochromaticSource.from_medium(J, omega, truncate * sigma, medium, rho=rho, scale=sigma)


def swirl_current(radius=1.0, power=5, v=(0.0, 0.0, 1.0)):
    """Smooth divergence-free current ``grad(phi) x v`` supported in a ball."""
    return swirl_initial_data(radius, power, v).a0


def load_grid_initial_data(path):
    """Initial data from an ``.npz`` file with axes ``x``, ``y``, ``z`` and values ``a`` of shape ``(nx, ny, nz, 3)``.

    The field is interpolated linearly and taken as zero outside the grid box.
    """
    from scipy.interpolate import RegularGridInterpolator

    with np.load(path) as data:
        axes = tuple(np.asarray(data[k], dtype=float) for k in ("x", "y", "z"))
        a = np.asarray(data["a"], dtype=complex)
    if a.shape != tuple(len(ax) for ax in axes) + (3,):
        raise ValueError("grid values must have shape (nx, ny, nz, 3)")
    interp = RegularGridInterpolator(axes, a, bounds_error=False, fill_value=0.0)
    corners = np.array([[ax[0], ax[-1]] for ax in axes])
    reach = float(np.sqrt(np.sum(np.max(np.abs(corners), axis=1) ** 2)))
    spacing = min(float(np.min(np.diff(ax))) for ax in axes if len(ax) > 1)
    return InitialData(lambda x: interp(np.asarray(x, dtype=float)), reach, scale=spacing,
                       name=f"grid:{path}")
