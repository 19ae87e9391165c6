"""Complex A-field values, media, sources and pointwise conservation residuals.

A complex field value is a numpy array of shape ``(..., 3)`` and complex dtype
(``ComplexVec3``). The A-field packs the electric and magnetic intensities
into one vector, ``A = sqrt(eps) E + i sqrt(mu) H``; it obeys

    -c^-1 dA/dt - i rot A = j,        c = 1 / sqrt(eps mu),

with complex charge ``rho = c^-1 div A`` and energy density ``W = |A|^2 / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf, sqrt
from typing import Callable, Optional

import numpy as np

from . import diff

ComplexVec3 = np.ndarray


def cvec(x=0.0, y=0.0, z=0.0) -> ComplexVec3:
    return np.array([x, y, z], dtype=complex)


@dataclass(frozen=True)
class Medium:
    """Homogeneous isotropic medium."""

    epsilon: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        for name in ("epsilon", "mu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"medium.{name} must be > 0")

    @property
    def c(self) -> float:
        return 1.0 / sqrt(self.epsilon * self.mu)

    @classmethod
    def from_speed(cls, c: float) -> "Medium":
        """Medium with ``epsilon = mu = 1/c``."""
        return cls(1.0 / c, 1.0 / c)


VACUUM = Medium()


@dataclass(frozen=True)
class EHField:
    """Real electric and magnetic intensities, arrays of shape ``(..., 3)``."""

    E: np.ndarray
    H: np.ndarray


def a_from_eh(f: EHField, m: Medium = VACUUM) -> ComplexVec3:
    E = np.asarray(f.E, dtype=float)
    H = np.asarray(f.H, dtype=float)
    return sqrt(m.epsilon) * E + 1j * sqrt(m.mu) * H


def eh_from_a(a, m: Medium = VACUUM) -> EHField:
    a = np.asarray(a, dtype=complex)
    return EHField(a.real / sqrt(m.epsilon), a.imag / sqrt(m.mu))


def complex_charge(div_a, m: Medium = VACUUM):
    """Complex charge ``c^-1 div A`` from a (numerical) divergence."""
    return np.asarray(div_a) / m.c


def energy_density(a):
    """``W = |A|^2 / 2``; equals ``(eps |E|^2 + mu |H|^2) / 2``."""
    a = np.asarray(a)
    return 0.5 * np.sum(a.real**2 + a.imag**2, axis=-1)


def poynting(a, m: Medium = VACUUM):
    """Real Poynting vector ``E x H`` computed from A alone.

    ``A x A* = -2i sqrt(eps mu) E x H``, hence ``E x H = Re((i c / 2) A x A*)``.
    """
    a = np.asarray(a, dtype=complex)
    return np.real(0.5j * m.c * np.cross(a, np.conj(a)))


# --------------------------------------------------------------------------
# sources


@dataclass(frozen=True)
class Density:
    """One space-time density with bounded support.

    ``func(y, s)`` takes points ``(K, 3)`` and times ``(K,)`` (or a scalar) and
    returns ``(K,)`` or ``(K, 3)`` values. The density is taken to vanish
    outside the ball ``|y - center| <= support_radius`` and outside the time
    window ``[t_start, t_end]``; quadratures clip to that region.
    ``primitive``, when given, is ``int_{t_start}^{s} func ds'``.
    """

    func: Callable
    support_radius: float = inf
    center: tuple = (0.0, 0.0, 0.0)
    t_start: float = -inf
    t_end: float = inf
    primitive: Optional[Callable] = None

    def __call__(self, y, s):
        return self.func(y, s)

    @classmethod
    def spatial(cls, g, support_radius=inf, center=(0.0, 0.0, 0.0), **kw):
        """Time-independent density built from ``g(y)``."""
        return cls(lambda y, s: g(y), support_radius, tuple(center), **kw)


@dataclass(frozen=True)
class SourceModel:
    """Complex charge ``rho(y, s)`` and complex current ``j(y, s)``.

    Both vanish before ``t_start``. The charge lives inside ``support_radius``;
    the current inside ``j_support_radius`` (defaults to the same ball), which
    may be infinite for non-local compensating currents. ``scale`` is the
    length over which the sources vary and sets finite-difference steps.
    """

    rho: Callable
    j: Callable
    support_radius: float
    t_start: float = 0.0
    rho_t_end: float = inf
    j_t_end: float = inf
    center: tuple = (0.0, 0.0, 0.0)
    scale: float = 1.0
    j_support_radius: Optional[float] = None
    conserving: bool = True
    name: str = "source"

    def rho_density(self) -> Density:
        return Density(self.rho, self.support_radius, tuple(self.center), self.t_start, self.rho_t_end)

    def j_density(self) -> Density:
        r = self.support_radius if self.j_support_radius is None else self.j_support_radius
        return Density(self.j, r, tuple(self.center), self.t_start, self.j_t_end)

    @classmethod
    def zero(cls) -> "SourceModel":
        return cls(
            rho=lambda y, s: np.zeros(np.shape(y)[:-1], dtype=complex),
            j=lambda y, s: np.zeros(np.shape(y), dtype=complex),
            support_radius=0.0,
            t_start=inf,
            name="zero",
        )

    @property
    def is_zero(self) -> bool:
        return self.t_start == inf


@dataclass
class FieldSnapshot:
    """Complex field sampled on a rectilinear grid at one instant."""

    axes: tuple
    values: np.ndarray
    t: float
    meta: dict = field(default_factory=dict)

    def points(self):
        X = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([g.ravel() for g in X], axis=-1)


# --------------------------------------------------------------------------
# residuals


def _at(fn, t):
    return lambda pts: fn(pts, np.full(len(pts), t))


def charge_conservation_residual(s: SourceModel, x, t, h):
    """Central-difference estimate of ``d rho/dt + div j`` at ``(x, t)``."""
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x, t)
    one = x[None, :]
    drho = diff.d_dt(lambda tt: s.rho(one, np.array([tt]))[0], t, h)
    divj = diff.divergence(_at(s.j, t), x, h)
    return complex(drho + divj)


def energy_law_residual(A, s: SourceModel, m: Medium, x, t, h):
    """Estimate of ``dW/dt + div P + c Re(j, A*)`` for a field sampler ``A(x, t)``."""
    x = np.asarray(x, dtype=float)
    h = diff.check_step(h, x, t)
    one = x[None, :]
    dW = diff.d_dt(lambda tt: energy_density(A(one, np.array([tt])))[0], t, h)
    divP = diff.divergence(lambda pts: poynting(A(pts, np.full(len(pts), t)), m), x, h)
    a = A(one, np.array([t]))[0]
    jj = s.j(one, np.array([t]))[0]
    work = m.c * np.real(np.sum(jj * np.conj(a)))
    return float(dW + divP + work)
