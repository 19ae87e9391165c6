"""Closed-form fields used as oracles.

* the field of a charge ``q`` created at the origin at ``t = 0``;
* the potentials of a uniformly charged ball and of the same ball rotating
  about the ``x3`` axis (stationary regime).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularPointError
from .field import Medium


def analytic_example1(q, m: Medium, x, t):
    """``(q c / 4 pi) theta(t) x / R^3``: the Coulomb field, present from the moment the charge appears."""
    x = np.asarray(x, dtype=float)
    R = np.linalg.norm(x, axis=-1)
    if np.any(R == 0.0):
        raise SingularPointError("the born-charge field is singular at R = 0")
    on = (np.asarray(t) > 0.0).astype(float)
    coef = q * m.c / (4.0 * np.pi) * on / R**3
    return (coef[..., None] * x).astype(complex)


@dataclass(frozen=True)
class Example3Record:
    """Potentials and fields of the uniform (rotating) ball at one point.

    ``phi = -N[rho]`` and ``psi = N[J] / c``; the stationary field is
    ``A = c (grad_phi + curl_part)`` with ``curl_part = i rot psi``.
    """

    phi: float
    grad_phi: np.ndarray
    psi: np.ndarray
    rot_psi: np.ndarray
    curl_part: np.ndarray

    @property
    def field(self):
        return self.grad_phi + self.curl_part


def analytic_example3(rho0, a, omega, x, c=1.0):
    """Closed forms for a ball of radius ``a`` with charge ``rho0`` rotating at ``omega``.

    Interior formulas apply for ``R < a`` and exterior ones for ``R >= a``;
    both agree at ``R = a``. ``R = 0`` uses the (finite) interior values.
    """
    x = np.asarray(x, dtype=float)
    R = float(np.linalg.norm(x))
    x1, x2, x3 = x
    k = rho0 * omega / c
    swirl = np.array([-x2, x1, 0.0])
    if R >= a:
        phi = -rho0 * a**3 / (3.0 * R)
        grad_phi = rho0 * a**3 / (3.0 * R**3) * x
        g = a**5 / (15.0 * R**3)
        rot = a**5 / (5.0 * R**3) * np.array([x1 * x3 / R**2, x2 * x3 / R**2, x3**2 / R**2 - 1.0 / 3.0])
    else:
        phi = -0.5 * rho0 * (a * a - R * R / 3.0)
        grad_phi = rho0 * x / 3.0
        g = a * a / 6.0 - R * R / 10.0
        rot = np.array([x1 * x3 / 5.0, x2 * x3 / 5.0, a * a / 3.0 - 0.4 * R * R + x3 * x3 / 5.0])
    psi = (k * g * swirl).astype(complex)
    rot_psi = (k * rot).astype(complex)
    return Example3Record(phi, grad_phi, psi, rot_psi, 1j * rot_psi)


def printed_example3_curl(rho0, a, omega, x):
    """Reference expression for the vortex part ``i rot Psi`` of the rotating ball.

    It carries a different normalisation from :func:`analytic_example3`, but
    its exterior branch points the same way, so it serves as a direction
    spot check.
    """
    x = np.asarray(x, dtype=float)
    R = float(np.linalg.norm(x))
    x1, x2, x3 = x
    r2 = x1 * x1 + x2 * x2
    pre = -1j * rho0 * omega / (3.0 * np.pi)
    if R >= a:
        v = a**4 / R**3 * np.array([0.75 * x1 * x3 / R**2, 0.75 * x2 * x3 / R**2, 0.5 - 0.75 * r2 / R**2])
    else:
        v = np.array([0.75 * x1 * x3 / R, 0.75 * x2 * x3 / R, 2.0 * a - 1.5 * R * (1.0 + 0.5 * r2 / R**2)])
    return pre * v

