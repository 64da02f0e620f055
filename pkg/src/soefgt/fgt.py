"""Fast Gauss transform in one dimension.

Computes

    u_i = sum_j alpha_j exp(-(x_i - y_j)**2 / (4 delta)),   i = 1..M,

in ``O(n_e (M + N))`` after sorting. The kernel is replaced by an SOE, so
each mode ``k`` contributes ``w_k h_{k,i}`` with

    h_{k,i} = sum_j alpha_j exp(-t_k |x_i - y_j| / sqrt(delta)).

Splitting ``h`` into sources at or left of ``x_i`` and sources strictly to
the right gives two first-order recurrences over the sorted points, one
scanned forward and one backward. Only one member of each conjugate pair of
modes is scanned (the folded SOE); the partner contributes the conjugate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels as K
from ._validation import as_points, as_strengths, check_delta, check_positive_int
from .cf import cf_soe
from .exceptions import DomainError
from .soe import SOEApprox, fold

__all__ = [
    "TransformRequest",
    "TransformPlan",
    "TransformResult",
    "PRECISION_PRESETS",
    "soe_for_modes",
    "plan",
    "apply",
    "apply_same",
    "apply_general",
    "direct",
    "mode_sums",
    "gauss_transform",
]

#: digits of accuracy -> number of folded modes n_e (CF SOE with 2 n_e poles)
PRECISION_PRESETS = {4: 3, 7: 4, 9: 5, 11: 6}

_DIRECT_CHUNK = 2048


@lru_cache(maxsize=None)
def soe_for_modes(n_e: int) -> SOEApprox:
    """Folded CF SOE with ``n_e`` complex modes (``2 n_e`` poles)."""
    n_e = check_positive_int(n_e, "n_e")
    if not 1 <= n_e <= 7:
        raise DomainError(f"n_e must lie in [1, 7], got {n_e}")
    return fold(cf_soe(2 * n_e))


@dataclass(frozen=True)
class TransformRequest:
    """Points, strengths and bandwidth of one transform.

    ``targets=None`` means targets and sources are the same point set.
    """

    sources: np.ndarray
    strengths: np.ndarray
    delta: float = 1.0
    targets: np.ndarray | None = None

    def __post_init__(self):
        y = as_points(self.sources, "sources")
        a = as_strengths(self.strengths, y.size)
        object.__setattr__(self, "sources", y)
        object.__setattr__(self, "strengths", a)
        object.__setattr__(self, "delta", check_delta(self.delta))
        if self.targets is not None:
            object.__setattr__(self, "targets", as_points(self.targets, "targets"))

    @property
    def same_points(self) -> bool:
        return self.targets is None

    @property
    def target_points(self) -> np.ndarray:
        return self.sources if self.targets is None else self.targets

    @property
    def M(self) -> int:
        return self.target_points.size

    @property
    def N(self) -> int:
        return self.sources.size


@dataclass(frozen=True)
class TransformPlan:
    """Sorted geometry and scaled modes, reusable across strength vectors.

    ``sorted = original[perm]`` for both point sets. ``gap_exponentials`` has
    one row per folded mode and one column per gap between consecutive
    sorted targets; it is ``None`` unless the plan was built with
    ``precompute=True``.
    """

    sorted_targets: np.ndarray
    target_perm: np.ndarray
    sorted_sources: np.ndarray
    source_perm: np.ndarray
    soe: SOEApprox
    delta: float
    same_points: bool
    gap_exponentials: np.ndarray | None = None

    @property
    def scaled_nodes(self) -> np.ndarray:
        return self.soe.nodes / np.sqrt(self.delta)

    @property
    def M(self) -> int:
        return self.sorted_targets.size

    @property
    def N(self) -> int:
        return self.sorted_sources.size


@dataclass(frozen=True)
class TransformResult:
    potentials: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.potentials.size


def _sort(x):
    perm = np.argsort(x, kind="stable")
    return x[perm], perm


def plan(req: TransformRequest, soe: SOEApprox | None = None, precompute=False,
         n_e: int = 6) -> TransformPlan:
    """Sort the points and optionally tabulate the target gap exponentials.

    Parameters
    ----------
    req : TransformRequest
    soe : SOEApprox, optional
        Any conjugate-closed SOE; folded here. Defaults to the CF SOE with
        ``n_e`` modes.
    precompute : bool
        Store ``exp(-t_k (x_{i+1} - x_i)/sqrt(delta))`` for every mode and gap.
    """
    soe = soe_for_modes(n_e) if soe is None else fold(soe)
    ys, sp = _sort(req.sources)
    if req.same_points:
        xs, tp = ys, sp
    else:
        xs, tp = _sort(req.targets)
    gaps = None
    if precompute:
        gaps = K.gap_table(soe.nodes / np.sqrt(req.delta), xs)
        if gaps.size and np.abs(gaps).max() > 1.0:
            raise AssertionError("gap exponential with modulus > 1")
    return TransformPlan(xs, tp, ys, sp, soe, req.delta, req.same_points, gaps)


def _mode_gaps(p: TransformPlan, k, t):
    if p.gap_exponentials is not None:
        return p.gap_exponentials[k]
    e = np.empty(max(p.M - 1, 0), dtype=np.complex128)
    K.gaps_for_mode(t, p.sorted_targets, e)
    return e


def _unpermute(p: TransformPlan, u_sorted):
    u = np.empty_like(u_sorted)
    u[p.target_perm] = u_sorted
    return u


_NO_STORE = np.empty(0, dtype=np.complex128)


def _scan(p: TransformPlan, alpha, store=None):
    """Accumulate every mode into sorted-order potentials.

    ``store``, when given, is a pair of ``(n_e, M)`` complex arrays that
    receive the forward and backward accumulators in sorted order.
    """
    beta = alpha[p.source_perm]
    u = np.zeros(p.M)
    ts = p.scaled_nodes
    ws = p.soe.effective_weights
    for k in range(ts.size):
        t, w = ts[k], ws[k]
        e = _mode_gaps(p, k, t)
        hp = _NO_STORE if store is None else store[0][k]
        hm = _NO_STORE if store is None else store[1][k][::-1]
        if p.same_points:
            K.forward_same(e, beta, w, u, hp)
            K.backward_same(e[::-1], beta[::-1], w, u[::-1], hm)
        else:
            xs, ys = p.sorted_targets, p.sorted_sources
            K.merge_scan(xs, ys, beta, e, t, w, True, u, hp)
            K.merge_scan(-xs[::-1], -ys[::-1], beta[::-1], e[::-1], t, w,
                         False, u[::-1], hm)
    return u


def apply_same(p: TransformPlan, strengths) -> TransformResult:
    """Transform with targets identical to sources.

    A point's own strength enters the forward accumulator with factor 1 and
    never the backward one, so coincident points are counted once.
    """
    if not p.same_points:
        raise DomainError("plan was built for distinct targets; use apply_general")
    alpha = as_strengths(strengths, p.N)
    return TransformResult(_unpermute(p, _scan(p, alpha)))


def apply_general(p: TransformPlan, strengths) -> TransformResult:
    """Transform with separate targets via a merge scan of both sorted sets."""
    alpha = as_strengths(strengths, p.N)
    if p.same_points:
        q = TransformPlan(p.sorted_targets, p.target_perm, p.sorted_sources,
                          p.source_perm, p.soe, p.delta, False, p.gap_exponentials)
        return TransformResult(_unpermute(q, _scan(q, alpha)))
    return TransformResult(_unpermute(p, _scan(p, alpha)))


def apply(p: TransformPlan, strengths) -> TransformResult:
    """Dispatch to :func:`apply_same` or :func:`apply_general`."""
    return apply_same(p, strengths) if p.same_points else apply_general(p, strengths)


def mode_sums(p: TransformPlan, strengths):
    """Forward and backward accumulators ``h+`` and ``h-``.

    Returns two complex arrays of shape ``(n_e, M)`` in the original target
    order. ``h+`` collects sources at or left of each target, ``h-`` the
    sources strictly to the right.
    """
    alpha = as_strengths(strengths, p.N)
    n_e = len(p.soe)
    store = (np.zeros((n_e, p.M), np.complex128), np.zeros((n_e, p.M), np.complex128))
    _scan(p, alpha, store)
    out = []
    for h in store:
        g = np.empty_like(h)
        g[:, p.target_perm] = h
        out.append(g)
    return tuple(out)


def direct(req: TransformRequest, target_subset=None) -> TransformResult:
    """Brute-force evaluation with the exact Gaussian.

    Parameters
    ----------
    req : TransformRequest
    target_subset : array_like of int, optional
        Indices into the targets; all targets when omitted.
    """
    x = req.target_points
    if target_subset is not None:
        x = x[np.asarray(target_subset, dtype=np.intp)]
    y, a = req.sources, req.strengths
    scale = 1.0 / (4.0 * req.delta)
    u = np.empty(x.size)
    for lo in range(0, x.size, _DIRECT_CHUNK):
        d = x[lo:lo + _DIRECT_CHUNK, None] - y
        u[lo:lo + _DIRECT_CHUNK] = np.exp(-scale * d * d) @ a
    return TransformResult(u)


def gauss_transform(sources, strengths, targets=None, delta=1.0, n_e=6, soe=None):
    """One-shot fast transform returning the potentials as an array."""
    req = TransformRequest(sources, strengths, delta, targets)
    return apply(plan(req, soe, n_e=n_e), req.strengths).potentials
