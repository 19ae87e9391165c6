"""Pseudo-spectral oracle on a periodic box.

Per Fourier mode the field equation reads ``dA/dt = c k x A - c j`` (the
curl is ``i k x`` in Fourier space). The homogeneous part is a rotation
about ``k`` by the angle ``c |k| t`` and is applied exactly; the source is
added with the midpoint rule, so a step costs one source sample and the
only time error comes from the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import CausalityBudgetExceeded, UnsupportedGeometryError
from .field import VACUUM, Medium, SourceModel, energy_density, poynting
from .quadrature import SphericalQuadrature, gauss_legendre


@dataclass
class PeriodicGrid:
    """Complex field on ``n^3`` nodes ``x_j = -L/2 + j L / n`` of a periodic box.

    ``reach`` is the radius (about the origin) containing the initial data;
    together with the sources it bounds how far a signal can have travelled
    since ``t0``.
    """

    n: int
    box_length: float
    values: np.ndarray
    t: float = 0.0
    reach: float = 0.0
    t0: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = int(self.n)
        if n < 8 or n & (n - 1):
            raise ValueError("n must be a power of two and at least 8")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (n, n, n, 3):
            raise ValueError(f"values must have shape {(n, n, n, 3)}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    @property
    def dx(self):
        return self.box_length / self.n

    @property
    def cell_volume(self):
        return self.dx**3

    def axis(self):
        return -0.5 * self.box_length + self.dx * np.arange(self.n)

    def points(self):
        a = self.axis()
        X = np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)
        return X

    def wavenumbers(self):
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @classmethod
    def zeros(cls, n, box_length, t=0.0):
        return cls(n, box_length, np.zeros((n, n, n, 3), dtype=complex), t, 0.0, t)

    @classmethod
    def from_sampler(cls, a0, n, box_length, t=0.0, reach=0.0):
        g = cls.zeros(n, box_length, t)
        pts = g.points().reshape(-1, 3)
        g.values = np.asarray(a0(pts), dtype=complex).reshape(n, n, n, 3)
        g.reach = float(reach)
        return g

    def copy(self):
        return replace(self, values=self.values.copy(), meta=dict(self.meta))


def _kgrid(g: PeriodicGrid):
    k = g.wavenumbers()
    K = np.stack(np.meshgrid(k, k, k, indexing="ij"), axis=-1)
    return K


def _rotation_matrices(K, angle_per_k):
    """Per-mode matrices of the rotation about ``k`` by ``|k| * angle_per_k`` (Rodrigues)."""
    kn = np.linalg.norm(K, axis=-1)
    safe = np.where(kn > 0.0, kn, 1.0)
    khat = K / safe[..., None]
    th = kn * angle_per_k
    cos, sin = np.cos(th), np.sin(th)
    kx, ky, kz = khat[..., 0], khat[..., 1], khat[..., 2]
    zero = np.zeros_like(kx)
    cross = np.stack([np.stack([zero, -kz, ky], -1), np.stack([kz, zero, -kx], -1),
                      np.stack([-ky, kx, zero], -1)], -2)
    outer = khat[..., :, None] * khat[..., None, :]
    eye = np.eye(3)
    return cos[..., None, None] * eye + sin[..., None, None] * cross + (1.0 - cos)[..., None, None] * outer


def _apply(R, Ah):
    return R[..., 0] * Ah[..., 0, None] + R[..., 1] * Ah[..., 1, None] + R[..., 2] * Ah[..., 2, None]


def _source_hat(s: SourceModel, pts, shape, t):
    j = np.asarray(s.j(pts, np.full(len(pts), t)), dtype=complex).reshape(shape)
    return np.fft.fftn(j, axes=(0, 1, 2))


def _check_causality(g: PeriodicGrid, s: SourceModel | None, c, t_new):
    reach = g.reach + c * (t_new - g.t0)
    if s is not None and not s.is_zero:
        jr = s.support_radius if s.j_support_radius is None else s.j_support_radius
        src_r = max(s.support_radius, jr) + np.linalg.norm(s.center)
        reach = max(reach, src_r + c * max(t_new - max(s.t_start, g.t0), 0.0))
    if not 2.0 * reach < g.box_length:
        raise CausalityBudgetExceeded(
            f"signal reach {reach:.4g} at t = {t_new:.4g} wraps around a box of length {g.box_length:.4g}"
        )


def spectral_step(g: PeriodicGrid, s: SourceModel | None, m: Medium, dt, check_causality=True):
    """Advance the grid by ``dt``; returns a new grid."""
    return spectral_run(g, s, m, dt, 1, check_causality=check_causality)[-1]


def _advance(Ah, rot, s, pts, c, t, dt):
    full, half = rot
    Ah = _apply(full, Ah)
    if s is not None and not s.is_zero:
        jh = _source_hat(s, pts, Ah.shape, t + 0.5 * dt)
        Ah = Ah - c * dt * _apply(half, jh)
    return Ah


def iter_run(g: PeriodicGrid, s: SourceModel | None, m: Medium, dt, n_steps,
             record_every=1, check_causality=True):
    """Yield the initial grid and then a snapshot every ``record_every`` steps (and the last one).

    The state stays in Fourier space between snapshots, so long runs can be
    audited without keeping their history.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    c = m.c
    if check_causality:
        _check_causality(g, s, c, g.t + n_steps * dt)
    K = _kgrid(g)
    full = _rotation_matrices(K, c * dt)
    half = _rotation_matrices(K, 0.5 * c * dt) if s is not None and not s.is_zero else None
    pts = g.points().reshape(-1, 3)
    Ah = np.fft.fftn(g.values, axes=(0, 1, 2))
    yield g.copy()
    for i in range(1, n_steps + 1):
        Ah = _advance(Ah, (full, half), s, pts, c, g.t + (i - 1) * dt, dt)
        if i % record_every == 0 or i == n_steps:
            snap = g.copy()
            snap.values = np.fft.ifftn(Ah, axes=(0, 1, 2))
            snap.t = g.t + i * dt
            yield snap


def spectral_run(g: PeriodicGrid, s: SourceModel | None, m: Medium, dt, n_steps,
                 record_every=1, check_causality=True):
    """List of snapshots from :func:`iter_run`."""
    return list(iter_run(g, s, m, dt, n_steps, record_every, check_causality))


def dispersion_check(k, m: Medium = VACUUM):
    """Frequencies ``Omega`` of modes ``exp(i(k.x - Omega t))``, ascending.

    They are the eigenvalues of the Hermitian matrix ``i c [k]x``, namely
    ``{-c|k|, 0, c|k|}``.
    """
    k = np.asarray(k, dtype=float)
    cross = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.linalg.eigvalsh(1j * m.c * cross)


# --------------------------------------------------------------------------
# interpolation


def trig_interpolate(g: PeriodicGrid, points):
    """Trigonometric interpolant of the grid field at arbitrary points.

    The Nyquist mode is split evenly between ``+-k_N`` so the interpolant
    of a real field stays real.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = g.n
    Ah = np.fft.fftn(g.values, axes=(0, 1, 2)) / n**3
    k = g.wavenumbers()
    x0 = g.axis()[0]
    out = np.empty((len(pts), 3), dtype=complex)
    for p, x in enumerate(pts):
        fac = []
        for d in range(3):
            e = np.exp(1j * k * (x[d] - x0))
            e[n // 2] = np.cos(k[n // 2] * (x[d] - x0))
            fac.append(e)
        v = np.tensordot(Ah, fac[2], axes=(2, 0))
        v = np.tensordot(v, fac[1], axes=(1, 0))
        out[p] = np.tensordot(fac[0], v, axes=(0, 0))
    return out


def spline_interpolate(g: PeriodicGrid, points, order=3):
    """Periodic cubic-spline interpolation of the grid field."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    idx = ((pts - g.axis()[0]) / g.dx).T
    out = np.empty((len(pts), 3), dtype=complex)
    for d in range(3):
        re = map_coordinates(g.values[..., d].real, idx, order=order, mode="grid-wrap")
        im = map_coordinates(g.values[..., d].imag, idx, order=order, mode="grid-wrap")
        out[:, d] = re + 1j * im
    return out


# --------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float


@dataclass(frozen=True)
class AuditRecord:
    """Energy bookkeeping at time ``t`` over the audit region.

    ``boundary_flux`` is the outward flux of ``P`` through the region
    boundary and ``source_work`` the power ``-c Re int (j, A*) dV``, both
    instantaneous; ``total_charge`` is ``c^-1 int div A dV``.
    """

    t: float
    total_energy: float
    total_charge: complex
    boundary_flux: float
    source_work: float


def _region_rule(g: PeriodicGrid, region, n_r=24, degree=35):
    if region == "box" or region is None:
        return None
    if not isinstance(region, Ball):
        raise UnsupportedGeometryError(f"unsupported audit region {region!r}")
    c0 = np.asarray(region.center, dtype=float)
    if np.any(np.abs(c0) + region.radius >= 0.5 * g.box_length - g.dx):
        raise UnsupportedGeometryError("audit ball does not fit inside the grid")
    q = SphericalQuadrature.lebedev(degree)
    u, wu = gauss_legendre(n_r)
    r = region.radius * u
    pts = c0 + (r[:, None, None] * q.nodes[None, :, :]).reshape(-1, 3)
    w = (wu * region.radius * r * r)[:, None] * q.weights[None, :]
    surf = c0 + region.radius * q.nodes
    return pts, w.ravel(), surf, q.weights * region.radius**2, q.nodes


def energy_audit(history, s: SourceModel | None, m: Medium = VACUUM, region="box"):
    """Audit records for each grid of ``history`` (any iterable, uniform time step)."""
    c = m.c
    rule = grid_pts = None
    out = []
    for g in history:
        if not out:
            rule = _region_rule(g, region)
            grid_pts = g.points().reshape(-1, 3)
        elif len(out) >= 2:
            step, prev = g.t - out[-1].t, out[-1].t - out[-2].t
            if abs(step - prev) > 1e-9 * abs(prev):
                raise ValueError("history must be at uniform dt")
        if rule is None:
            A = g.values.reshape(-1, 3)
            dV = g.cell_volume
            energy = float(np.sum(energy_density(A)) * dV)
            work = 0.0
            if s is not None and not s.is_zero:
                j = s.j(grid_pts, np.full(len(grid_pts), g.t))
                work = float(-c * np.real(np.sum(j * np.conj(A))) * dV)
            out.append(AuditRecord(g.t, energy, 0j, 0.0, work))
            continue
        pts, w, surf, ws, normals = rule
        A = spline_interpolate(g, pts)
        energy = float(np.sum(w * energy_density(A)))
        As = spline_interpolate(g, surf)
        flux = float(np.sum(ws * np.sum(normals * poynting(As, m), axis=-1)))
        charge = complex(np.sum(ws * np.sum(normals * As, axis=-1)) / c)
        work = 0.0
        if s is not None and not s.is_zero:
            j = s.j(pts, np.full(len(pts), g.t))
            work = float(-c * np.sum(w * np.real(np.sum(j * np.conj(A), axis=-1))))
        out.append(AuditRecord(g.t, energy, charge, flux, work))
    return out


def audit_balance(records):
    """Time-integrated energy balance ``W(T) - W(0) + int flux dt = int work dt`` (trapezoid).

    Returns ``(energy_change, flux_integral, work_integral, residual)`` with
    ``residual = energy_change + flux_integral - work_integral``.
    """
    t = np.array([r.t for r in records])
    dW = records[-1].total_energy - records[0].total_energy
    flux = float(np.trapezoid([r.boundary_flux for r in records], t))
    work = float(np.trapezoid([r.source_work for r in records], t))
    return dW, flux, work, dW + flux - work


def oracle_compare(sampler, g: PeriodicGrid, points, t, interpolation="trig", rtol_t=1e-9):
    """Relative L2 and max errors of ``sampler(points)`` against the grid run at time ``t``."""
    if abs(g.t - t) > rtol_t * max(1.0, abs(t)):
        raise ValueError(f"grid time {g.t!r} does not match comparison time {t!r}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ref = trig_interpolate(g, pts) if interpolation == "trig" else spline_interpolate(g, pts)
    val = np.asarray(sampler(pts), dtype=complex)
    diff = np.linalg.norm(val - ref, axis=-1)
    norm = np.linalg.norm(ref, axis=-1)
    scale = np.sqrt(np.sum(norm**2))
    if scale == 0.0:
        l2 = float(np.sqrt(np.sum(diff**2)))
        mx = float(diff.max())
    else:
        l2 = float(np.sqrt(np.sum(diff**2)) / scale)
        mx = float(diff.max() / norm.max())
    return {"l2_rel": l2, "max_rel": mx, "n_points": len(pts)}
