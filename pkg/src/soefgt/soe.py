"""Sum-of-exponentials (SOE) representation of the Gaussian kernel.

An SOE approximates ``exp(-x**2 / (4*delta))`` by

    S(x; delta) = sum_k w_k * exp(-t_k * |x| / sqrt(delta))

with complex nodes ``t_k`` (all in the open right half-plane) and complex
weights ``w_k``. Because the representation depends on ``|x| / sqrt(delta)``
only, all accuracy statements are made at ``delta = 1``.
"""
from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, StructuralError

__all__ = [
    "Form",
    "SOEApprox",
    "ErrorReport",
    "evaluate",
    "evaluate_complex",
    "fold",
    "unfold",
    "max_error",
    "error_grid",
    "write_table",
    "read_table",
]

#: relative distance under which two nodes are considered a conjugate pair
PAIR_RTOL = 1e-12

_GRID_SIZE = 100_000
_GRID_LO, _GRID_HI = -5.0, 2.0
_CHUNK = 8192


class Form(str, enum.Enum):
    FULL = "full"
    FOLDED = "folded"


@dataclass(frozen=True)
class SOEApprox:
    """Immutable set of complex SOE nodes and weights.

    Parameters
    ----------
    nodes, weights : array_like of complex
        Exponents ``t_k`` and coefficients ``w_k`` of equal length. Every
        construction routine returns ``n >= 1``; only a reduction that
        discards every term returns an empty SOE.
    form : Form
        ``FULL`` stores every term. ``FOLDED`` stores one member of each
        conjugate pair (with ``Im t >= 0``); such entries are doubled on
        evaluation unless flagged as self-conjugate.
    self_conjugate : array_like of bool, optional
        Folded form only. Marks real-axis entries that are not doubled.
        Inferred from ``Im t == 0`` when omitted.
    source : str
        Provenance label written to coefficient tables
        (``contour``, ``cf`` or ``reduced``).
    meta : dict
        Extra ``key=value`` pairs for the table header.
    """

    nodes: np.ndarray
    weights: np.ndarray
    form: Form = Form.FULL
    self_conjugate: np.ndarray | None = None
    source: str = "unknown"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=np.complex128).ravel()
        weights = np.array(self.weights, dtype=np.complex128).ravel()
        form = Form(self.form)
        if nodes.shape != weights.shape:
            raise StructuralError(
                f"nodes ({nodes.size}) and weights ({weights.size}) differ in length"
            )
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise StructuralError("nodes and weights must be finite")
        bad = np.flatnonzero(~(nodes.real > 0))
        if bad.size:
            raise StructuralError(
                f"node t[{bad[0]}] = {nodes[bad[0]]!r} does not have positive real part"
            )
        if form is Form.FOLDED:
            if self.self_conjugate is None:
                selfc = nodes.imag == 0
            else:
                selfc = np.array(self.self_conjugate, dtype=bool).ravel()
                if selfc.shape != nodes.shape:
                    raise StructuralError("self_conjugate flag length mismatch")
            if np.any(nodes.imag < 0):
                raise StructuralError("folded nodes must satisfy Im(t) >= 0")
        else:
            selfc = None
        for arr in (nodes, weights, selfc):
            if arr is not None:
                arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "self_conjugate", selfc)
        object.__setattr__(self, "meta", dict(self.meta))

    def __len__(self):
        return self.nodes.size

    @property
    def n(self) -> int:
        """Number of terms of the underlying full SOE."""
        if self.form is Form.FULL:
            return self.nodes.size
        return int(np.sum(np.where(self.self_conjugate, 1, 2)))

    @property
    def multipliers(self) -> np.ndarray:
        """Per-entry multiplicity used on evaluation (1 or 2)."""
        if self.form is Form.FULL:
            return np.ones(self.nodes.size)
        return np.where(self.self_conjugate, 1.0, 2.0)

    @property
    def effective_weights(self) -> np.ndarray:
        """Weights times multipliers; ``S = Re(sum(effective_weights * exp(...)))``."""
        return self.weights * self.multipliers

    def __repr__(self):
        return (
            f"SOEApprox(n={self.n}, stored={len(self)}, form={self.form.value}, "
            f"source={self.source!r})"
        )


@dataclass(frozen=True)
class ErrorReport:
    n: int
    max_abs_error: float
    argmax_x: float


def _check_delta(delta):
    delta = float(delta)
    if not (np.isfinite(delta) and delta > 0):
        raise DomainError(f"delta must be positive and finite, got {delta!r}")
    return delta


def _mode_sum(t, w, s, real=True):
    """``sum_k w_k exp(-t_k s)`` for an array ``s``, chunked over ``s``.

    With ``real=True`` the real parts of the terms are summed, which keeps the
    full and folded forms within a few ulps of each other.
    """
    out = np.empty(s.shape, dtype=float if real else np.complex128)
    flat_s, flat_o = s.ravel(), out.reshape(-1)
    for lo in range(0, flat_s.size, _CHUNK):
        terms = np.exp(-np.outer(flat_s[lo:lo + _CHUNK], t)) * w
        flat_o[lo:lo + _CHUNK] = (terms.real if real else terms).sum(axis=1)
    return out


def evaluate(soe: SOEApprox, x, delta=1.0):
    """Evaluate the SOE approximation of ``exp(-x**2/(4*delta))``.

    Each exponential is computed directly (no recurrences), so this is the
    reference evaluator for the fast algorithms.

    Parameters
    ----------
    soe : SOEApprox
    x : float or array_like
    delta : float
        Positive bandwidth.

    Returns
    -------
    float or ndarray
        Real part of the mode sum; scalar input gives a Python float.
    """
    delta = _check_delta(delta)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise DomainError("x must be finite")
    s = np.abs(xa) / np.sqrt(delta)
    val = _mode_sum(soe.nodes, soe.effective_weights, np.atleast_1d(s))
    if xa.ndim == 0:
        return float(val[0])
    return val.reshape(xa.shape)


def evaluate_complex(soe: SOEApprox, x, delta=1.0):
    """Complex mode sum before the real part is taken.

    For a conjugate-closed full-form SOE the imaginary part is roundoff.
    """
    delta = _check_delta(delta)
    s = np.abs(np.atleast_1d(np.asarray(x, dtype=float))) / np.sqrt(delta)
    return _mode_sum(soe.nodes, soe.effective_weights, s, real=False)


def _pair_conjugates(nodes, rtol):
    """Match each node with its conjugate.

    Returns ``(reps, selfc)`` where ``reps`` indexes one representative per
    pair (the member with positive imaginary part) plus every real node.
    """
    n = nodes.size
    scale = np.maximum(np.abs(nodes), np.finfo(float).tiny)
    is_real = np.abs(nodes.imag) <= rtol * scale
    used = np.zeros(n, dtype=bool)
    reps, selfc = [], []
    for i in range(n):
        if used[i]:
            continue
        if is_real[i]:
            used[i] = True
            reps.append(i)
            selfc.append(True)
            continue
        target = np.conj(nodes[i])
        dist = np.abs(nodes - target) / scale[i]
        dist[used] = np.inf
        dist[i] = np.inf
        j = int(np.argmin(dist))
        if not dist[j] <= rtol:
            raise StructuralError(
                f"node t[{i}] = {nodes[i]!r} has no conjugate partner "
                f"(closest relative distance {dist[j]:.3e})"
            )
        used[i] = used[j] = True
        reps.append(i if nodes[i].imag > 0 else j)
        selfc.append(False)
    return np.array(reps, dtype=int), np.array(selfc, dtype=bool)


def fold(soe: SOEApprox, rtol=PAIR_RTOL) -> SOEApprox:
    """Keep one member of each conjugate pair.

    Real-axis nodes are kept with multiplier 1 (their imaginary parts are
    zeroed); every other representative has ``Im t > 0`` and multiplier 2.

    Raises
    ------
    StructuralError
        If a non-real node has no conjugate partner within ``rtol``.
    """
    if soe.form is Form.FOLDED:
        return soe
    reps, selfc = _pair_conjugates(soe.nodes, rtol)
    t = soe.nodes[reps].copy()
    w = soe.weights[reps].copy()
    t[selfc] = t[selfc].real
    w[selfc] = w[selfc].real
    order = np.lexsort((t.real, t.imag))
    return SOEApprox(t[order], w[order], Form.FOLDED, selfc[order],
                     source=soe.source, meta=soe.meta)


def unfold(soe: SOEApprox) -> SOEApprox:
    """Inverse of :func:`fold`."""
    if soe.form is Form.FULL:
        return soe
    pair = ~soe.self_conjugate
    t = np.concatenate([soe.nodes, np.conj(soe.nodes[pair])])
    w = np.concatenate([soe.weights, np.conj(soe.weights[pair])])
    return SOEApprox(t, w, Form.FULL, source=soe.source, meta=soe.meta)


def error_grid() -> np.ndarray:
    """``0`` followed by 100,000 log-spaced points on ``[1e-5, 1e2]`` (inclusive)."""
    return np.concatenate(([0.0], np.logspace(_GRID_LO, _GRID_HI, _GRID_SIZE)))


def max_error(soe: SOEApprox) -> ErrorReport:
    """Estimate the uniform error ``E_n`` of an SOE against the Gaussian.

    Sets ``delta = 1`` and samples the standard grid from :func:`error_grid`.
    Ties resolve to the smaller ``x``.
    """
    x = error_grid()
    err = np.abs(np.exp(-0.25 * x * x) - evaluate(soe, x, 1.0))
    i = int(np.argmax(err))
    return ErrorReport(n=soe.n, max_abs_error=float(err[i]), argmax_x=float(x[i]))


def _header(soe: SOEApprox) -> str:
    parts = [f"soe n={soe.n}", f"form={soe.form.value}", f"source={soe.source}"]
    parts += [f"{k}={v}" for k, v in soe.meta.items()]
    return " ".join(parts)


def write_table(soe: SOEApprox, path_or_buf=None) -> str:
    """Write the coefficient table; returns the text.

    One header line, then one ``Re(t) Im(t) Re(w) Im(w)`` record per stored
    entry with 17 significant digits.
    """
    lines = [_header(soe)]
    for t, w in zip(soe.nodes, soe.weights):
        lines.append(f"{t.real:.16e} {t.imag:.16e} {w.real:.16e} {w.imag:.16e}")
    text = "\n".join(lines) + "\n"
    if path_or_buf is None:
        return text
    if isinstance(path_or_buf, (str, os.PathLike)):
        with open(path_or_buf, "w") as fh:
            fh.write(text)
    else:
        path_or_buf.write(text)
    return text


def read_table(path_or_buf) -> SOEApprox:
    """Parse a table produced by :func:`write_table`."""
    if isinstance(path_or_buf, (str, os.PathLike)):
        with open(path_or_buf) as fh:
            text = fh.read()
    elif isinstance(path_or_buf, io.IOBase) or hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        raise TypeError("expected a path or a readable buffer")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("soe "):
        raise StructuralError("missing 'soe' header line")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    try:
        n = int(fields.pop("n"))
        form = Form(fields.pop("form"))
        source = fields.pop("source")
    except (KeyError, ValueError) as exc:
        raise StructuralError(f"malformed header: {lines[0]!r}") from exc
    data = np.loadtxt(lines[1:], ndmin=2) if len(lines) > 1 else np.empty((0, 4))
    if data.shape[1] != 4:
        raise StructuralError("each record must have 4 columns")
    soe = SOEApprox(data[:, 0] + 1j * data[:, 1], data[:, 2] + 1j * data[:, 3],
                    form, source=source, meta=fields)
    if soe.n != n:
        raise StructuralError(f"header says n={n} but records give n={soe.n}")
    return soe
