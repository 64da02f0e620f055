"""Near-best rational approximation of exp(x) on the negative real axis.

The Caratheodory-Fejer (CF) construction transplants ``(-inf, 0]`` to
``[-1, 1]`` by ``x = s(t - 1)/(t + 1)``, expands the transplanted exponential
in Chebyshev polynomials, and reads a type ``(n, n)`` approximant off the
``(n+1)``-th singular pair of the Hankel matrix of those coefficients.
Dropping the constant term leaves the type ``(n-1, n)`` sum of poles

    r(x) = sum_k c_k / (x - z_k),

whose poles and residues give an SOE for the Gaussian through
``t_k = sqrt(z_k)`` and ``w_k = -c_k sqrt(pi / z_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import principal_sqrt
from .exceptions import DomainError, NumericalFailure
from .soe import Form, SOEApprox

__all__ = ["RationalApprox", "cf_approx", "soe_from_rational", "cf_soe", "N_MAX"]

# Constants of the reference cf.m (Trefethen, Weideman & Schmelzer 2006).
SCALE = 9.0
N_FFT = 1024
N_CHEB = 75
N_MAX = 14

_P = np.polynomial.polynomial


@dataclass(frozen=True)
class RationalApprox:
    """Sum of poles ``r(x) = sum_k residues[k] / (x - poles[k])``.

    ``singular_value`` is the ``(n+1)``-th singular value of the Hankel matrix
    of the (halved) Chebyshev coefficients; the sup-norm error of ``r`` on
    ``(-inf, 0]`` is close to ``4 * singular_value``.
    """

    poles: np.ndarray
    residues: np.ndarray
    singular_value: float = float("nan")

    def __post_init__(self):
        z = np.array(self.poles, dtype=np.complex128).ravel()
        c = np.array(self.residues, dtype=np.complex128).ravel()
        if z.shape != c.shape:
            raise DomainError("poles and residues differ in length")
        for arr in (z, c):
            arr.setflags(write=False)
        object.__setattr__(self, "poles", z)
        object.__setattr__(self, "residues", c)

    @property
    def order(self):
        n = self.poles.size
        return (n - 1, n)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        val = (self.residues / (x[..., None] - self.poles)).sum(axis=-1)
        return val.real


def _chebyshev_data(nf=N_FFT, scale=SCALE):
    w = np.exp(2j * np.pi * np.arange(nf) / nf)
    t = w.real
    inside = t > -1.0
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        F = np.where(inside, np.exp(scale * (t - 1.0) / np.where(inside, t + 1.0, 1.0)), 0.0)
    c = np.fft.fft(F).real / nf
    return w, c


def cf_approx(n: int) -> RationalApprox:
    """CF approximation of type ``(n-1, n)`` to ``exp(x)`` on ``x <= 0``.

    Parameters
    ----------
    n : int
        Number of poles, ``2 <= n <= 14``. Larger ``n`` needs more than
        double precision and is refused.

    Raises
    ------
    DomainError
        If ``n`` is out of range.
    NumericalFailure
        If the singular vector polynomial does not have exactly ``n``
        roots inside the unit disk.
    """
    if int(n) != n or not 2 <= n <= N_MAX:
        raise DomainError(f"n must be an integer in [2, {N_MAX}], got {n!r}")
    n = int(n)
    K = N_CHEB
    w, c = _chebyshev_data()

    # Hankel matrix H[i, j] = c[i + j + 1]; coefficients beyond K are dropped.
    idx = np.add.outer(np.arange(K), np.arange(K)) + 1
    H = np.where(idx <= K, c[np.minimum(idx, K)], 0.0)
    U, S, Vh = np.linalg.svd(H)
    sigma = S[n]
    u, v = U[:, n], Vh[n]

    # On |w| = 1 the CF extension is f(w) - sigma * w u(w) / v(1/w).
    f = _P.polyval(w, c[:K + 1])
    rt = f - sigma * w * _P.polyval(w, u) / _P.polyval(1.0 / w, v)
    rtc = np.fft.fft(rt).real / w.size

    # Poles outside the disk are reciprocals of the roots of v inside it.
    roots = np.roots(v[::-1])
    inner = roots[np.abs(roots) < 1.0]
    if inner.size != n:
        raise NumericalFailure(
            f"expected {n} roots inside the unit disk, found {inner.size}"
        )
    q = 1.0 / inner
    Q = np.poly(q)[::-1].real
    numer = np.convolve(Q, rtc[:n + 1])[:n + 1]
    res_w = _P.polyval(q, numer) / _P.polyval(q, _P.polyder(Q))

    # w -> t = (w + 1/w)/2 -> x = s(t-1)/(t+1)
    pt = 0.5 * (q + 1.0 / q)
    res_t = res_w * 0.5 * (1.0 - q ** -2)
    poles = SCALE * (pt - 1.0) / (pt + 1.0)
    residues = res_t * 2.0 * SCALE / (pt + 1.0) ** 2
    poles, residues = _symmetrize(poles, residues)
    order = np.lexsort((poles.imag, poles.real))
    return RationalApprox(poles[order], residues[order], float(sigma))


def _symmetrize(z, c):
    """Make pole/residue pairs exactly conjugate and real poles exactly real."""
    z, c = z.copy(), c.copy()
    real = np.abs(z.imag) <= 1e-10 * np.abs(z)
    z[real] = z[real].real
    c[real] = c[real].real
    upper = np.flatnonzero(~real & (z.imag > 0))
    lower = np.flatnonzero(~real & (z.imag < 0))
    if upper.size != lower.size:
        raise NumericalFailure("CF poles are not closed under conjugation")
    lower = lower[np.argsort(z[lower].real)]
    upper = upper[np.argsort(z[upper].real)]
    zp = 0.5 * (z[upper] + np.conj(z[lower]))
    cp = 0.5 * (c[upper] + np.conj(c[lower]))
    z[upper], z[lower] = zp, np.conj(zp)
    c[upper], c[lower] = cp, np.conj(cp)
    return z, c


def soe_from_rational(ra: RationalApprox) -> SOEApprox:
    """Gaussian SOE with ``t_k = sqrt(z_k)`` and ``w_k = -c_k sqrt(pi/z_k)``."""
    z = ra.poles
    on_cut = (z.imag == 0) & (z.real <= 0)
    if np.any(on_cut):
        raise NumericalFailure(f"pole {z[on_cut][0]!r} lies on the negative real axis")
    t = principal_sqrt(z)
    w = -ra.residues * np.sqrt(np.pi) / t
    return SOEApprox(t, w, Form.FULL, source="cf")


def cf_soe(n: int) -> SOEApprox:
    """Shorthand for ``soe_from_rational(cf_approx(n))``."""
    return soe_from_rational(cf_approx(n))
