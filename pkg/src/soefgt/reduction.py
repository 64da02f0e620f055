"""Balanced-truncation compression of an SOE.

The SOE ``sum_k w_k exp(-t_k s)`` is the impulse response of the diagonal
system ``A = diag(-t)``, ``B = 1``, ``C = w``, whose transfer function is the
sum of poles ``sum_k w_k / (p + t_k)``. Both Gramians of a diagonal system
are Cauchy matrices with closed forms, so no Lyapunov solver is needed.
States are discarded by square-root balancing and the reduced system is
diagonalized again to give the new nodes and weights.

Conjugate pairs are rotated into real 2x2 blocks before balancing, so all
dense linear algebra is real and the reduced nodes come out in exact
conjugate pairs.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DomainError, NumericalFailure, StructuralError
from .soe import Form, SOEApprox, _pair_conjugates, fold

__all__ = ["ReductionReport", "reduce", "hankel_singular_values",
           "truncation_order", "numerical_rank"]

#: relative tolerance for pairing reduced nodes into conjugate pairs
OUTPUT_PAIR_RTOL = 1e-8
#: singular values below RANK_RTOL * sigma_1 are at the roundoff floor
RANK_RTOL = 10 * np.finfo(float).eps


@dataclass(frozen=True)
class ReductionReport:
    original_n: int
    reduced_n: int
    hankel_singular_values: tuple
    tolerance: float

    @property
    def tail_bound(self) -> float:
        """``2 * sum`` of the discarded Hankel singular values."""
        return 2.0 * float(np.sum(self.hankel_singular_values[self.reduced_n:]))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hankel_singular_values"] = list(self.hankel_singular_values)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _cauchy_cholesky(t, a):
    """Pivoted Cholesky factor of ``G[i, j] = a_i conj(a_j) / (t_i + conj(t_j))``.

    Returns ``L`` with ``G = L L^H``. Each Schur complement of a Cauchy-like
    matrix is Cauchy-like with generators ``a_i (t_i - t_p) / (t_i + conj(t_p))``,
    so entries are formed without cancellation and small pivots keep their
    relative accuracy.
    """
    n = t.size
    x = np.array(a, dtype=np.complex128)
    L = np.zeros((n, n), dtype=np.complex128)
    rem = np.ones(n, dtype=bool)
    for k in range(n):
        d = np.where(rem, np.abs(x) ** 2 / (2.0 * t.real), -1.0)
        p = int(np.argmax(d))
        if d[p] <= 0:
            break
        col = x * np.conj(x[p]) / (t + np.conj(t[p]))
        col[~rem] = 0.0
        L[:, k] = col / np.sqrt(d[p])
        rem[p] = False
        x = x * (t - t[p]) / (t + np.conj(t[p]))
    return L


def _realify(soe: SOEApprox):
    """Real state-space data for a conjugate-closed SOE.

    Returns ``A, B, C`` and real factors ``Lc, Lo`` with ``P = Lc Lc^T`` and
    ``Q = Lo Lo^T``. A unitary ``T`` maps each conjugate pair of diagonal
    states onto a real pair; the Gramian factors are built in the complex
    diagonal basis and rotated by ``T``.
    """
    folded = fold(soe)
    tc, wc, kinds = [], [], []
    for tk, wk, sc in zip(folded.nodes, folded.weights, folded.self_conjugate):
        if sc:
            tc.append(tk.real)
            wc.append(wk.real)
            kinds.append(1)
        else:
            tc += [tk, np.conj(tk)]
            wc += [wk, np.conj(wk)]
            kinds.append(2)
    tc = np.array(tc, dtype=np.complex128)
    wc = np.array(wc, dtype=np.complex128)
    n = tc.size

    T = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for k in kinds:
        if k == 1:
            T[i, i] = 1.0
        else:
            T[i:i + 2, i:i + 2] = np.array([[1.0, 1.0], [-1j, 1j]]) / np.sqrt(2.0)
        i += k
    Th = T.conj().T
    A = ((T * -tc) @ Th).real
    B = (T @ np.ones(n)).real
    C = (wc @ Th).real

    # P_ij = 1/(t_i + conj t_j);  Q_ij = conj(w_i) w_j / (conj t_i + t_j)
    Lc = T @ _cauchy_cholesky(tc, np.ones(n))
    Lo = T @ _cauchy_cholesky(np.conj(tc), np.conj(wc))
    # M M^H real  =>  M M^H = [Re M, Im M] [Re M, Im M]^T
    Lc = np.hstack([Lc.real, Lc.imag])
    Lo = np.hstack([Lo.real, Lo.imag])
    return A, B, C, Lc, Lo


def _balance(soe):
    A, B, C, Lc, Lo = _realify(soe)
    U, sigma, Vh = np.linalg.svd(Lo.T @ Lc)
    n = A.shape[0]
    return A, B, C, Lc, Lo, U, sigma[:n], Vh


def hankel_singular_values(soe: SOEApprox) -> np.ndarray:
    """Hankel singular values of the SOE in descending order."""
    return _balance(soe)[6]


def numerical_rank(sigma) -> int:
    """Number of singular values above the double-precision floor."""
    sigma = np.asarray(sigma)
    if sigma.size == 0:
        return 0
    return int(np.count_nonzero(sigma > RANK_RTOL * sigma[0]))


def truncation_order(sigma, tol) -> int:
    """Smallest ``r`` with ``2 * sum(sigma[r:]) <= tol``, capped at the numerical rank.

    States whose singular values sit at the roundoff floor carry no
    information; keeping them only adds spurious (possibly unstable) poles.
    """
    tails = 2.0 * np.cumsum(np.asarray(sigma)[::-1])[::-1]
    ok = np.flatnonzero(tails <= tol)
    r = int(ok[0]) if ok.size else len(sigma)
    return min(r, numerical_rank(sigma))


def reduce(soe: SOEApprox, tol: float):
    """Compress ``soe`` to fewer terms with uniform error about ``tol``.

    Parameters
    ----------
    soe : SOEApprox
        Conjugate-closed SOE (full or folded form) with ``Re t > 0``.
    tol : float
        Error budget; the kept order is the smallest ``r`` whose discarded
        Hankel singular values satisfy ``2 * sum(sigma[r:]) <= tol``, but
        never more than the numerical rank of the balanced system.

    Returns
    -------
    reduced : SOEApprox
        Full-form SOE with ``source="reduced"``; empty when ``r == 0``.
    report : ReductionReport

    Raises
    ------
    DomainError
        If ``tol`` is not a positive finite number.
    StructuralError
        If a node has ``Re t <= 0`` or the SOE is not conjugate-closed.
    NumericalFailure
        If a reduced node leaves the open right half-plane.
    """
    tol = float(tol)
    if not (np.isfinite(tol) and tol > 0):
        raise DomainError(f"tol must be positive, got {tol!r}")
    if np.any(soe.nodes.real <= 0):
        raise StructuralError("balanced truncation needs Re(t) > 0 for every node")

    A, B, C, Lc, Lo, U, sigma, Vh = _balance(soe)
    r = truncation_order(sigma, tol)
    report = ReductionReport(soe.n, r, tuple(float(s) for s in sigma), tol)
    meta = {"original_n": soe.n, "tol": repr(tol)}
    if r == 0:
        return SOEApprox([], [], Form.FULL, source="reduced", meta=meta), report

    s = 1.0 / np.sqrt(sigma[:r])
    Tr = (Lc @ Vh[:r].T) * s
    Wr = (Lo @ U[:, :r]) * s
    Ar = Wr.T @ A @ Tr
    Br = Wr.T @ B
    Cr = C @ Tr

    lam, X = np.linalg.eig(Ar)
    t_new = -lam
    if np.any(t_new.real <= 0):
        raise NumericalFailure("reduced system has a pole in the closed right half-plane")
    w_new = (Cr @ X) * np.linalg.solve(X, Br)
    t_new, w_new = _restore_symmetry(t_new, w_new)
    order = np.lexsort((t_new.imag, t_new.real))
    reduced = SOEApprox(t_new[order], w_new[order], Form.FULL, source="reduced", meta=meta)
    return reduced, report


def _restore_symmetry(t, w):
    """Average conjugate partners and make real nodes exactly real."""
    t, w = t.copy(), w.copy()
    try:
        reps, selfc = _pair_conjugates(t, OUTPUT_PAIR_RTOL)
    except StructuralError as exc:
        raise NumericalFailure(f"reduced nodes are not conjugate-closed: {exc}") from exc
    out_t, out_w = [], []
    for i, sc in zip(reps, selfc):
        if sc:
            out_t.append(complex(t[i].real))
            out_w.append(complex(w[i].real))
            continue
        j = int(np.argmin(np.abs(t - np.conj(t[i]))))
        tk = 0.5 * (t[i] + np.conj(t[j]))
        wk = 0.5 * (w[i] + np.conj(w[j]))
        out_t += [tk, np.conj(tk)]
        out_w += [wk, np.conj(wk)]
    return np.array(out_t), np.array(out_w)
