"""Jump conditions on electromagnetic shock fronts.

A front moving with speed ``c`` along the unit normal ``m`` carries a jump
``[A] = A+ - A-`` (``A+`` ahead of the front). A discontinuous field is a
generalised solution only if ``[A] = -i [A] x m``; that forces transverse,
charge-free jumps and an energy jump ``[W] = c^-1 (m, [P])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import diff
from .errors import UnsupportedGeometryError
from .field import VACUUM, Medium, energy_density, eh_from_a, poynting

#: relative tolerance for algebraic residuals
JUMP_TOL = 1e-10


@dataclass(frozen=True)
class PlaneSurface:
    point: tuple
    normal: tuple

    def normal_at(self, p=None):
        n = np.asarray(self.normal, dtype=float)
        return n / np.linalg.norm(n)


@dataclass(frozen=True)
class SphereSurface:
    center: tuple
    radius: float
    outward: bool = True

    def normal_at(self, p):
        d = np.asarray(p, dtype=float) - np.asarray(self.center, dtype=float)
        r = np.linalg.norm(d)
        if r == 0.0:
            raise UnsupportedGeometryError("sphere normal undefined at the centre")
        n = d / r
        return n if self.outward else -n


Surface = Union[PlaneSurface, SphereSurface]


@dataclass(frozen=True)
class FrontSpec:
    surface: Surface
    m: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (3,) or abs(np.linalg.norm(m) - 1.0) > 1e-12:
            raise ValueError("front normal m must be a unit 3-vector")
        for name in ("a_plus", "a_minus"):
            v = np.asarray(getattr(self, name), dtype=complex)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be a finite complex 3-vector")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "m", m)

    @property
    def jump(self):
        return self.a_plus - self.a_minus

    @classmethod
    def plane(cls, m, a_plus, a_minus, point=(0.0, 0.0, 0.0)):
        """Plane front through ``point`` moving along ``m``."""
        m = np.asarray(m, dtype=float)
        return cls(PlaneSurface(tuple(point), tuple(m)), m, a_plus, a_minus)


@dataclass
class SurfaceDensity:
    kind: str
    value: object


def characteristic_det(nu):
    """``nu4 (nu4^2 - nu1^2 - nu2^2 - nu3^2)`` for ``nu = (nu1, nu2, nu3, nu4)``."""
    nu = np.asarray(nu, dtype=float)
    n4 = nu[..., 3]
    return n4 * (n4**2 - np.sum(nu[..., :3] ** 2, axis=-1))


def jump_matrix(m):
    """Matrix of the linear map ``A -> A + i A x m``."""
    m = np.asarray(m, dtype=float)
    cross_m = np.array([[0.0, -m[2], m[1]], [m[2], 0.0, -m[0]], [-m[1], m[0], 0.0]])
    # A x m = -(m x A)
    return np.eye(3) - 1j * cross_m


def jump_space_projector(m):
    """Orthogonal projector onto the jumps admissible for a front moving along ``m``."""
    m = np.asarray(m, dtype=float)
    cross_m = np.array([[0.0, -m[2], m[1]], [m[2], 0.0, -m[0]], [-m[1], m[0], 0.0]])
    return 0.5 * (np.eye(3) - np.outer(m, m) + 1j * cross_m)


def jump_residual(f: FrontSpec):
    J = f.jump
    return J + 1j * np.cross(J, f.m)


def eh_jump_residuals(f: FrontSpec, medium: Medium = VACUUM):
    """Residuals ``sqrt(eps)[E] - sqrt(mu)[H] x m`` and ``sqrt(mu)[H] - sqrt(eps) m x [E]``."""
    eh = eh_from_a(f.jump, medium)
    se, sm = np.sqrt(medium.epsilon), np.sqrt(medium.mu)
    r1 = se * eh.E - sm * np.cross(eh.H, f.m)
    r2 = sm * eh.H - se * np.cross(f.m, eh.E)
    return r1, r2


def transversality_check(f: FrontSpec, medium: Medium = VACUUM, n=None):
    """Normal components ``([E], n)`` and ``([H], n)``; ``n`` defaults to ``m``."""
    n = f.m if n is None else np.asarray(n, dtype=float)
    eh = eh_from_a(f.jump, medium)
    return float(eh.E @ n), float(eh.H @ n)


def energy_jump_residual(f: FrontSpec, medium: Medium = VACUUM):
    """``[W] - c^-1 (m, [P])``."""
    dW = energy_density(f.a_plus) - energy_density(f.a_minus)
    dP = poynting(f.a_plus, medium) - poynting(f.a_minus, medium)
    return float(dW - (f.m @ dP) / medium.c)


def surface_densities(f: FrontSpec, medium: Medium = VACUUM, point=None):
    """Simple-layer densities of the jump at ``point`` on the front surface."""
    if point is None:
        point = getattr(f.surface, "point", None)
        if point is None:
            raise UnsupportedGeometryError("a query point is required on a spherical front")
    n = f.surface.normal_at(point)
    J = f.jump
    div_s = complex(n @ J)
    rot_s = np.cross(J, n)
    return {
        "surface-charge": SurfaceDensity("surface-charge", div_s / medium.c),
        "surface-divergence": SurfaceDensity("surface-divergence", div_s),
        "surface-rotor": SurfaceDensity("surface-rotor", rot_s),
        "surface-current": SurfaceDensity("surface-current", 1j * rot_s),
    }


def check_front(f: FrontSpec, medium: Medium = VACUUM, tol: float = JUMP_TOL):
    """Evaluate every jump condition; returns a flat report dictionary."""
    J = f.jump
    scale = float(np.linalg.norm(J))
    report = {"jump_norm": scale, "continuous": scale == 0.0}
    res = float(np.linalg.norm(jump_residual(f)))
    r1, r2 = eh_jump_residuals(f, medium)
    tE, tH = transversality_check(f, medium)
    ej = energy_jump_residual(f, medium)
    report.update(
        jump_residual=res,
        eh_residual_E=float(np.linalg.norm(r1)),
        eh_residual_H=float(np.linalg.norm(r2)),
        normal_E=tE,
        normal_H=tH,
        energy_jump_residual=ej,
    )
    if report["continuous"]:
        report["admissible"] = True
        return report
    bound = tol * scale
    # the energy residual is quadratic in the field amplitudes
    amp = max(np.linalg.norm(f.a_plus), np.linalg.norm(f.a_minus), scale)
    report["admissible"] = bool(
        res <= bound
        and abs(tE) <= bound
        and abs(tH) <= bound
        and abs(ej) <= tol * amp * amp
    )
    return report


# --------------------------------------------------------------------------
# weak form of the surface-charge law on a fixed surface


def _surface_nodes(surface, extent, n_quad):
    """Quadrature nodes, weights and normals on a plane patch or a sphere."""
    if isinstance(surface, PlaneSurface):
        n = surface.normal_at()
        helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = np.cross(n, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        u, w = np.polynomial.legendre.leggauss(n_quad)
        u, w = u * extent, w * extent
        U, V = np.meshgrid(u, u, indexing="ij")
        W = np.outer(w, w).ravel()
        pts = np.asarray(surface.point, dtype=float) + U.ravel()[:, None] * e1 + V.ravel()[:, None] * e2
        normals = np.broadcast_to(n, pts.shape)
        return pts, W, normals
    if isinstance(surface, SphereSurface):
        from .quadrature import SphericalQuadrature

        q = SphericalQuadrature.product(2 * n_quad - 1)
        R = float(surface.radius)
        pts = np.asarray(surface.center, dtype=float) + R * q.nodes
        normals = q.nodes if surface.outward else -q.nodes
        return pts, q.weights * R * R, normals
    raise UnsupportedGeometryError(f"unsupported surface {type(surface).__name__}")


def _fixed_surface(history):
    if isinstance(history, (PlaneSurface, SphereSurface)):
        return history
    surfaces = [s if isinstance(s, (PlaneSurface, SphereSurface)) else s.surface for s in history]
    if not surfaces:
        raise UnsupportedGeometryError("empty front history")
    first = surfaces[0]
    for s in surfaces[1:]:
        if s != first:
            raise UnsupportedGeometryError("front history moves; only fixed surfaces are supported")
    return first


def surface_charge_conservation_residual(
    history,
    a_plus,
    a_minus,
    phi,
    t,
    h,
    medium: Medium = VACUUM,
    j_plus=None,
    j_minus=None,
    extent: float = 1.0,
    n_quad: int = 32,
):
    """Weak residual of the surface-charge law on a fixed surface ``S``.

    Paired with a smooth test function ``phi`` the law reads

        int_S [c^-1 d/dt (n, [A]) + (n, [j])] phi dS - i int_S ([A] x n) . grad(phi) dS = 0,

    the divergence of the surface rotor having been moved onto ``phi``.
    ``a_plus``/``a_minus`` are the one-sided field samplers ``(pts, t) -> (K, 3)``;
    missing currents are recovered from the field equation by differencing.
    ``extent`` is the half-width of the plane patch that must contain the
    support of ``phi``.
    """
    surface = _fixed_surface(history)
    h = diff.check_step(h, t)
    pts, w, normals = _surface_nodes(surface, extent, n_quad)
    c = medium.c
    K = len(pts)

    def jump_at(tt):
        ts = np.full(K, tt)
        return a_plus(pts, ts) - a_minus(pts, ts)

    dJdt = (jump_at(t + h) - jump_at(t - h)) / (2.0 * h)
    J = jump_at(t)

    def current(sampler, given):
        if given is not None:
            return given(pts, np.full(K, t))
        dA = (sampler(pts, np.full(K, t + h)) - sampler(pts, np.full(K, t - h))) / (2.0 * h)
        return -dA / c - 1j * _pointwise_curl(sampler, pts, t, h)

    dj = current(a_plus, j_plus) - current(a_minus, j_minus)
    phi_v = phi(pts)
    grad_phi = np.stack(
        [(phi(pts + h * e) - phi(pts - h * e)) / (2.0 * h) for e in np.eye(3)], axis=-1
    )
    n_dot = lambda v: np.sum(normals * v, axis=-1)
    volume_part = (n_dot(dJdt) / c + n_dot(dj)) * phi_v
    layer_part = -1j * np.sum(np.cross(J, normals) * grad_phi, axis=-1)
    return complex(np.sum(w * (volume_part + layer_part)))


def _pointwise_curl(sampler, pts, t, h):
    K = len(pts)
    ts = np.full(K, t)
    d = [(sampler(pts + h * e, ts) - sampler(pts - h * e, ts)) / (2.0 * h) for e in np.eye(3)]
    # d[i][:, k] = dA_k / dx_i
    return np.stack(
        [d[1][:, 2] - d[2][:, 1], d[2][:, 0] - d[0][:, 2], d[0][:, 1] - d[1][:, 0]], axis=-1
    )
