"""Compiled one-mode scans for the fast Gauss transform.

Every kernel handles a single complex exponent ``t`` (already divided by
``sqrt(delta)``) and adds ``Re(w * h_i)`` into ``out[i]``. When ``store`` has
nonzero length the raw accumulator ``h_i`` is also written there, which the
tests use to compare against direct sums.

Backward passes are the forward loops run on reversed views, so the same
code streams memory in increasing address order for both directions.
"""
import numba
import numpy as np

# exp(-745) is below the smallest subnormal double
UNDERFLOW = 745.0


@numba.njit(cache=True, nogil=True)
def _decay(t, d):
    if t.real * d > UNDERFLOW:
        return 0j
    return np.exp(-t * d)


@numba.njit(cache=True, nogil=True)
def gap_table(t, x):
    """``exp(-t_k (x[i+1] - x[i]))`` for every mode (rows) and gap (columns)."""
    n = x.size
    out = np.empty((t.size, max(n - 1, 0)), dtype=np.complex128)
    for k in range(t.size):
        for i in range(n - 1):
            out[k, i] = _decay(t[k], x[i + 1] - x[i])
    return out


@numba.njit(cache=True, nogil=True)
def gaps_for_mode(t, x, out):
    for i in range(x.size - 1):
        out[i] = _decay(t, x[i + 1] - x[i])


@numba.njit(cache=True, nogil=True)
def forward_same(e, beta, w, out, store):
    """``h_i = beta_i + e_{i-1} h_{i-1}``: every point at or left of ``x_i``."""
    n = beta.size
    if n == 0:
        return
    keep = store.size > 0
    h = beta[0] + 0j
    out[0] += (w * h).real
    if keep:
        store[0] = h
    for i in range(1, n):
        h = beta[i] + e[i - 1] * h
        out[i] += (w * h).real
        if keep:
            store[i] = h


@numba.njit(cache=True, nogil=True)
def backward_same(e, beta, w, out, store):
    """``h_i = e_{i-1} (beta_{i-1} + h_{i-1})`` on reversed data: strictly-beyond points."""
    n = beta.size
    if n == 0:
        return
    keep = store.size > 0
    h = 0j
    if keep:
        store[0] = h
    for i in range(1, n):
        h = e[i - 1] * (beta[i - 1] + h)
        out[i] += (w * h).real
        if keep:
            store[i] = h


@numba.njit(cache=True, nogil=True)
def merge_scan(xs, ys, beta, e, t, w, inclusive, out, store):
    """Merge sorted sources into the forward accumulator of sorted targets.

    Sources with ``y < x_i`` enter with weight ``exp(-t (x_i - y))``; a source
    with ``y == x_i`` enters with weight 1 when ``inclusive`` is set and is
    otherwise left for the opposite pass. Between targets the accumulator is
    carried by the gap exponential ``e``.
    """
    m, n = xs.size, ys.size
    keep = store.size > 0
    h = 0j
    i = 0
    j = 0
    while i < m:
        if j < n and (ys[j] < xs[i] or (inclusive and ys[j] == xs[i])):
            if ys[j] == xs[i]:
                h += beta[j]
            else:
                h += beta[j] * _decay(t, xs[i] - ys[j])
            j += 1
        else:
            out[i] += (w * h).real
            if keep:
                store[i] = h
            if i < m - 1:
                h = e[i] * h
            i += 1
