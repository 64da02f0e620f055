"""SOE approximations from quadrature of an inverse-Laplace contour integral.

The Gaussian has the representation

    exp(-x**2/(4 delta)) = 1/(2 pi i) * int_Gamma e^z sqrt(pi/z) exp(-sqrt(z)|x|/sqrt(delta)) dz

for any contour Gamma winding around the negative real axis. Parametrizing
``z = z(theta)`` and applying the midpoint rule with ``n`` nodes turns the
integral into an SOE with

    t_k = sqrt(z_k),   w_k = h/(2 sqrt(pi) i) * z'(theta_k)/sqrt(z_k) * exp(z_k).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NumericalFailure
from .soe import Form, SOEApprox

__all__ = ["ContourKind", "ContourSpec", "contour_point", "soe_from_contour",
           "principal_sqrt", "default_theta"]

# Optimal contours of Trefethen, Weideman & Schmelzer (BIT 46, 2006), for
# n nodes on theta in [-pi, pi]. Nominal convergence rates: parabola 2.85^-n,
# hyperbola 3.20^-n, cotangent 3.89^-n.
PARABOLA = (0.1309, 0.1194, 0.2500)
HYPERBOLA = (2.246, 1.1721, 0.3443)
TALBOT = (0.5017, 0.6407, 0.6122, 0.2645)

# Hyperbola of Lopez-Fernandez & Palencia with roundoff balancing parameter.
# Their rule is stated for 2N+1 nodes; with n total nodes the scale uses
# N = n/2, i.e. lambda = 0.6*pi*(1-theta)*(n/2)/a.
STAB_ALPHA = 0.8
STAB_D = 0.6
STAB_WIDTH = 2.0


class ContourKind(str, enum.Enum):
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    TALBOT = "talbot"
    STABILIZED_HYPERBOLIC = "stabilized-hyperbolic"


def default_theta(n):
    """Balancing parameter for the stabilized hyperbola: 1/4 up to n=16, else 12/n."""
    return 0.25 if n <= 16 else 12.0 / n


@dataclass(frozen=True)
class ContourSpec:
    kind: ContourKind
    n: int
    theta_param: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ContourKind(self.kind))
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.kind is ContourKind.STABILIZED_HYPERBOLIC:
            if self.theta_param is not None and not 0 < self.theta_param < 1:
                raise DomainError("theta_param must lie in (0, 1)")
        elif self.theta_param is not None:
            raise DomainError("theta_param applies to the stabilized hyperbola only")

    @property
    def theta(self) -> float:
        """Effective balancing parameter (stabilized hyperbola only)."""
        if self.theta_param is not None:
            return float(self.theta_param)
        return default_theta(self.n)

    @property
    def half_width(self) -> float:
        """Half-length ``L`` of the parameter interval ``[-L, L]``."""
        if self.kind is ContourKind.STABILIZED_HYPERBOLIC:
            return _stab_params(self.n, self.theta)[0]
        return np.pi

    @property
    def step(self) -> float:
        """Midpoint-rule spacing ``h = 2L/n``."""
        return 2.0 * self.half_width / self.n

    def nodes(self) -> np.ndarray:
        """Midpoint-rule abscissae in increasing order, exactly symmetric about 0."""
        return (np.arange(self.n) - 0.5 * (self.n - 1)) * self.step


def _stab_params(n, theta):
    a = np.arccosh(STAB_WIDTH / ((1.0 - theta) * np.sin(STAB_ALPHA)))
    lam = STAB_D * np.pi * (1.0 - theta) * (0.5 * n) / a
    return a, lam


def _xcot(c, th):
    """``th*cot(c*th)`` and its derivative, with a series near 0."""
    u = c * th
    small = np.abs(u) < 1e-4
    us = np.where(small, 1.0, u)
    f = np.where(small, (1.0 - u * u / 3.0) / c, th / np.tan(us))
    df = np.where(small, -2.0 * c * th / 3.0,
                  1.0 / np.tan(us) - u / np.sin(us) ** 2)
    return f, df


def contour_point(spec: ContourSpec, theta):
    """Contour point ``z(theta)`` and derivative ``dz/dtheta``.

    All parametrizations are oriented from the third quadrant to the second
    and satisfy ``z(-theta) = conj(z(theta))``.

    Raises
    ------
    DomainError
        If ``theta`` lies outside ``[-L, L]``.
    """
    th = np.asarray(theta, dtype=float)
    L = spec.half_width
    if np.any(np.abs(th) > L * (1 + 1e-15)) or not np.all(np.isfinite(th)):
        raise DomainError(f"theta outside the parameter interval [-{L}, {L}]")
    n = spec.n
    kind = spec.kind
    if kind is ContourKind.PARABOLIC:
        a0, a2, a1 = PARABOLA
        z = n * (a0 - a2 * th * th + 1j * a1 * th)
        dz = n * (-2.0 * a2 * th + 1j * a1)
    elif kind is ContourKind.HYPERBOLIC:
        mu, alpha, b = HYPERBOLA
        arg = alpha - 1j * b * th
        z = mu * n * (1.0 - np.sin(arg))
        dz = mu * n * 1j * b * np.cos(arg)
    elif kind is ContourKind.TALBOT:
        s, c, sh, ib = TALBOT
        f, df = _xcot(c, th)
        z = n * (s * f - sh + 1j * ib * th)
        dz = n * (s * df + 1j * ib)
    else:
        a, lam = _stab_params(n, spec.theta)
        arg = STAB_ALPHA - 1j * th
        z = lam * (1.0 - np.sin(arg))
        dz = lam * 1j * np.cos(arg)
    if th.ndim == 0:
        return complex(z), complex(dz)
    return z, dz


def principal_sqrt(z):
    """Square root with branch cut on the negative real axis, ``Re >= 0``."""
    return np.exp(0.5 * np.log(np.asarray(z, dtype=np.complex128)))


def soe_from_contour(spec: ContourSpec) -> SOEApprox:
    """Midpoint-rule SOE for the given contour, nodes ordered by ``theta``.

    Raises
    ------
    NumericalFailure
        If a quadrature node falls on the closed negative real axis.
    """
    th = spec.nodes()
    z, dz = contour_point(spec, th)
    on_cut = (z.imag == 0) & (z.real <= 0)
    if np.any(on_cut):
        k = int(np.flatnonzero(on_cut)[0])
        raise NumericalFailure(f"quadrature node z[{k}] = {z[k]!r} lies on the branch cut")
    t = principal_sqrt(z)
    w = spec.step / (2.0 * np.sqrt(np.pi) * 1j) * dz / t * np.exp(z)
    meta = {"kind": spec.kind.value}
    if spec.kind is ContourKind.STABILIZED_HYPERBOLIC:
        meta["theta"] = repr(spec.theta)
    return SOEApprox(t, w, Form.FULL, source="contour", meta=meta)
