"""Second-order central differences of vectorised samplers.

Every sampler ``g`` takes an ``(K, 3)`` array of points and returns an array
of shape ``(K,)`` (scalar field) or ``(K, 3)`` (vector field).
"""

import numpy as np

from .errors import InvalidStepError

EPS = np.finfo(float).eps
#: optimal relative step for a second-order central difference
STEP_FACTOR = EPS ** (1.0 / 3.0)

_UNIT = np.eye(3)


def default_step(scale=1.0):
    """Central-difference step ``eps**(1/3) * scale``."""
    return STEP_FACTOR * float(scale)


def check_step(h, *coords):
    """Reject steps that are non-finite, non-positive or lost in rounding."""
    h = float(h)
    if not np.isfinite(h) or h <= 0.0:
        raise InvalidStepError(f"step must be positive and finite, got {h!r}")
    mag = 1.0
    for c in coords:
        if c is None:
            continue
        mag = max(mag, float(np.max(np.abs(np.asarray(c, dtype=float)))))
    floor = 16.0 * EPS * mag
    if h <= floor:
        raise InvalidStepError(f"step {h:.3e} is below the precision floor {floor:.3e}")
    return h


def jacobian(g, x, h):
    """``J[..., i] = d g / d x_i`` at the single point ``x``."""
    x = np.asarray(x, dtype=float)
    pts = np.concatenate([x + h * _UNIT, x - h * _UNIT])
    vals = np.asarray(g(pts))
    fwd, bwd = vals[:3], vals[3:]
    d = (fwd - bwd) / (2.0 * h)
    # d has shape (3, ...) with the derivative axis first
    return np.moveaxis(d, 0, -1)


def gradient(g, x, h):
    return jacobian(g, x, h)


def divergence(g, x, h):
    J = jacobian(g, x, h)
    return J[0, 0] + J[1, 1] + J[2, 2]


def curl_from_jacobian(J):
    """Curl of a vector field from ``J[k, i] = d F_k / d x_i``."""
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])


def curl(g, x, h):
    return curl_from_jacobian(jacobian(g, x, h))


def laplacian(g, x, h):
    """Compact 7-point Laplacian."""
    x = np.asarray(x, dtype=float)
    pts = np.concatenate([x[None, :], x + h * _UNIT, x - h * _UNIT])
    vals = np.asarray(g(pts))
    return (vals[1:4].sum(axis=0) + vals[4:7].sum(axis=0) - 6.0 * vals[0]) / (h * h)


def d_dt(f, t, h):
    """Central difference in time of ``f(t)``."""
    return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2.0 * h)


def d2_dt2(f, t, h):
    return (np.asarray(f(t + h)) - 2.0 * np.asarray(f(t)) + np.asarray(f(t - h))) / (h * h)
