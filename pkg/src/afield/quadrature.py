"""Quadrature rules on the unit sphere and on balls seen from a point."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import lebedev_rule

from .errors import QuadratureBudgetExceeded

#: orders tabulated by scipy's Lebedev rule
LEBEDEV_ORDERS = (3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 35, 41, 47, 53,
                  59, 65, 71, 77, 83, 89, 95, 101, 107, 113, 119, 125, 131)

DEFAULT_DEGREE = 17
DEFAULT_MAX_NODES = 4_000_000


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Gauss-Legendre nodes and weights on ``[0, 1]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class SphericalQuadrature:
    """Nodes on the unit sphere with positive weights summing to ``4 pi``."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int
    kind: str = "lebedev"

    def __len__(self):
        return len(self.weights)

    def integrate(self, values):
        """``sum_i w_i f(node_i)`` for values of shape ``(N,)`` or ``(N, ...)``."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    @classmethod
    @lru_cache(maxsize=None)
    def lebedev(cls, degree: int = DEFAULT_DEGREE):
        """Lebedev rule exact for spherical harmonics up to at least ``degree``."""
        order = next((o for o in LEBEDEV_ORDERS if o >= degree), None)
        if order is None:
            raise QuadratureBudgetExceeded(f"no Lebedev rule of degree {degree} (max 131)")
        x, w = lebedev_rule(order)
        return cls(np.ascontiguousarray(x.T), w, order, "lebedev")

    @classmethod
    @lru_cache(maxsize=None)
    def product(cls, degree: int):
        """Gauss-Legendre in ``cos(theta)`` times trapezoid in ``phi``; exact to ``degree``."""
        n_theta = degree // 2 + 1
        n_phi = degree + 1
        u, wu = np.polynomial.legendre.leggauss(n_theta)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        st = np.sqrt(1.0 - u**2)
        nodes = np.stack(
            [np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)), np.outer(u, np.ones(n_phi))],
            axis=-1,
        ).reshape(-1, 3)
        weights = np.outer(wu, np.full(n_phi, 2.0 * np.pi / n_phi)).ravel()
        return cls(nodes, weights, degree, "product")

    @classmethod
    def default(cls):
        return cls.lebedev(DEFAULT_DEGREE)


def orthonormal_frame(axis):
    """Two unit vectors completing ``axis`` to a right-handed frame."""
    axis = np.asarray(axis, dtype=float)
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(axis, e1)


def _directions(axis, theta, phi):
    e1, e2 = orthonormal_frame(axis)
    st, ct = np.sin(theta)[:, None, None], np.cos(theta)[:, None, None]
    cp, sp = np.cos(phi)[None, :, None], np.sin(phi)[None, :, None]
    return (ct * axis + st * (cp * e1 + sp * e2)).reshape(-1, 3)


def cap_rule(axis, theta_max, n_theta, n_phi, edge="sqrt"):
    """Directions within ``theta_max`` of ``axis`` and their solid-angle weights.

    With ``edge="sqrt"`` the polar angle is mapped as ``theta = theta_max (1 - s^2)``
    so integrands with a square-root edge at ``theta_max`` become smooth.
    """
    s, ws = gauss_legendre(n_theta)
    if edge == "sqrt":
        theta = theta_max * (1.0 - s**2)
        wt = 2.0 * theta_max * s * ws
    else:
        theta = theta_max * s
        wt = theta_max * ws
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    nodes = _directions(np.asarray(axis, dtype=float), theta, phi)
    weights = np.outer(wt * np.sin(theta), np.full(n_phi, 2.0 * np.pi / n_phi)).ravel()
    return nodes, weights, np.repeat(theta, n_phi)


def split_sphere_rule(axis, n_theta, n_phi):
    """Full sphere as two polar panels meeting at the equator of ``axis``."""
    s, ws = gauss_legendre(n_theta)
    half = 0.5 * np.pi
    theta = np.concatenate([half * s, half + half * s])
    wt = np.concatenate([half * ws, half * ws])
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    nodes = _directions(np.asarray(axis, dtype=float), theta, phi)
    weights = np.outer(wt * np.sin(theta), np.full(n_phi, 2.0 * np.pi / n_phi)).ravel()
    return nodes, weights


@dataclass(frozen=True)
class BallBudget:
    """Node counts for integrals over a ball seen from an evaluation point."""

    n_theta: int = 32
    n_phi: int = 48
    n_r: int = 32
    max_nodes: int = DEFAULT_MAX_NODES

    def scaled(self, factor):
        return BallBudget(
            max(2, int(round(self.n_theta * factor))),
            max(4, int(round(self.n_phi * factor))),
            max(2, int(round(self.n_r * factor))),
            self.max_nodes,
        )


def ball_integral(f_eval, x, center, radius, r_lo, r_hi, budget: BallBudget = BallBudget(),
                  q: SphericalQuadrature | None = None, kernel=None):
    """Integrate ``f`` against ``r k(r) dr dOmega`` around ``x``.

    The region is ``{x + r w : r_lo <= r <= r_hi}`` intersected with the ball
    ``|y - center| <= radius``; with the volume element ``r^2 dr dOmega`` this
    is the integral of ``k(r) f(y) / r dV(y)``. ``f_eval(pts, r)`` returns
    values of shape ``(K,)`` or ``(K, 3)``; ``kernel(r)`` defaults to one.
    Each ray is clipped analytically to the ball so Gauss-Legendre panels
    never straddle the support boundary. Returns ``None`` if the region is
    empty (the integral is then exactly zero).
    """
    x = np.asarray(x, dtype=float)
    center = np.asarray(center, dtype=float)
    r_lo = max(0.0, float(r_lo))
    r_hi = float(r_hi)
    if not r_hi > r_lo:
        return None
    offset = center - x
    d = float(np.linalg.norm(offset))
    finite = np.isfinite(radius)
    if finite and d - radius >= r_hi:
        return None
    if not np.isfinite(r_hi) and not finite:
        raise QuadratureBudgetExceeded("unbounded integration region")

    if q is not None:
        dirs, wdir = q.nodes, q.weights
    elif not finite:
        pq = SphericalQuadrature.product(2 * budget.n_theta - 1)
        dirs, wdir = pq.nodes, pq.weights
    else:
        axis = offset / d if d > 0.0 else np.array([0.0, 0.0, 1.0])
        if d > radius:
            dirs, wdir, _ = cap_rule(axis, np.arcsin(radius / d), budget.n_theta, budget.n_phi)
        else:
            dirs, wdir = split_sphere_rule(axis, budget.n_theta, budget.n_phi)

    n_dir = len(wdir)
    if n_dir * budget.n_r > budget.max_nodes:
        raise QuadratureBudgetExceeded(
            f"{n_dir * budget.n_r} nodes exceed the budget of {budget.max_nodes}"
        )

    if finite:
        proj = dirs @ offset
        disc = proj**2 - d * d + radius * radius
        root = np.sqrt(np.maximum(disc, 0.0))
        lo = np.maximum(proj - root, r_lo)
        hi = np.minimum(proj + root, r_hi)
        hi = np.where(disc > 0.0, hi, lo)
    else:
        lo = np.full(n_dir, r_lo)
        hi = np.full(n_dir, r_hi)
    length = np.maximum(hi - lo, 0.0)
    keep = length > 0.0
    if not np.any(keep):
        return None
    dirs, wdir, lo, length = dirs[keep], wdir[keep], lo[keep], length[keep]

    s, ws = gauss_legendre(budget.n_r)
    r = lo[:, None] + length[:, None] * s[None, :]
    wr = length[:, None] * ws[None, :] * r
    if kernel is not None:
        wr = wr * kernel(r)
    pts = x + r[..., None] * dirs[:, None, :]
    vals = np.asarray(f_eval(pts.reshape(-1, 3), r.ravel()))
    w = (wdir[:, None] * wr).ravel()
    return np.tensordot(w, vals, axes=(0, 0))


def sphere_surface_integral(g, x, radius, center=None, support=np.inf,
                            budget: BallBudget = BallBudget(),
                            q: SphericalQuadrature | None = None):
    """``int_{|y - x| = radius} g(y) dS(y)`` with ``g`` vanishing outside the support ball.

    Without ``q`` the sphere is clipped to the spherical cap lying inside
    the ball ``|y - center| <= support``, so integrands that are smooth on
    the support converge spectrally. With ``q`` every node of ``q`` is used.
    Returns ``None`` when the sphere misses the support.
    """
    x = np.asarray(x, dtype=float)
    radius = float(radius)
    area = radius * radius
    if q is not None:
        vals = np.asarray(g(x + radius * q.nodes))
        return area * q.integrate(vals)
    center = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    offset = center - x
    d = float(np.linalg.norm(offset))
    if not np.isfinite(support):
        pq = SphericalQuadrature.product(2 * budget.n_theta - 1)
        return area * pq.integrate(np.asarray(g(x + radius * pq.nodes)))
    if d + radius <= support:
        axis = offset / d if d > 0.0 else np.array([0.0, 0.0, 1.0])
        nodes, w = split_sphere_rule(axis, budget.n_theta, budget.n_phi)
    else:
        if d == 0.0 or abs(d - radius) >= support:
            return None
        kappa = (d * d + radius * radius - support * support) / (2.0 * radius * d)
        if kappa >= 1.0:
            return None
        theta_c = np.arccos(max(kappa, -1.0))
        nodes, w, _ = cap_rule(offset / d, theta_c, budget.n_theta, budget.n_phi, edge="linear")
    vals = np.asarray(g(x + radius * nodes))
    return area * np.tensordot(w, vals, axes=(0, 0))
