"""Experiment drivers behind the command line: SOE convergence, reduction,
timed transforms and the bandwidth sweep.

Random points come from numpy's Philox counter-based generator seeded with
the user's integer seed, so a seed fixes the points, strengths and error
targets independently of platform.
"""
from __future__ import annotations

import enum
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels as K
from . import fgt
from ._validation import check_delta, check_positive_int
from .cf import cf_soe
from .contour import ContourKind, ContourSpec, soe_from_contour
from .exceptions import DomainError
from .reduction import reduce
from .soe import SOEApprox, max_error

__all__ = [
    "Scenario", "BenchRecord", "METHODS", "make_soe", "sample_points",
    "error_indices", "max_relative_error", "geometric_rate", "convergence",
    "run_bench", "delta_sweep",
]

METHODS = ("parabolic", "hyperbolic", "talbot", "stabilized-hyperbolic", "cf")
N_ERROR_TARGETS = 100
#: targets whose exact potential is below this fraction of the largest are skipped
SMALL_POTENTIAL = 1e-3


class Scenario(str, enum.Enum):
    SAME = "SamePoints"
    DISTINCT = "DistinctPoints"


@dataclass
class BenchRecord:
    scenario: str
    N: int
    M: int
    n_e: int
    delta: float
    t_sort: float
    t_pre: float
    t_rem: float
    t_total: float
    max_rel_error: float
    seed: int
    dist: str = "uniform"
    presort: bool = False
    threads: int = 1

    @property
    def throughput(self) -> float:
        """Points per second, ``(N + M) / t_total``."""
        pts = self.N if self.scenario == Scenario.SAME.value else self.N + self.M
        return pts / self.t_total if self.t_total > 0 else float("inf")

    def to_dict(self):
        d = asdict(self)
        d["throughput"] = self.throughput
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


def make_soe(method: str, n: int, theta=None) -> SOEApprox:
    """SOE with ``n`` terms from a contour family or the CF method."""
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if method == "cf":
        if theta is not None:
            raise DomainError("theta applies to the stabilized hyperbola only")
        return cf_soe(n)
    return soe_from_contour(ContourSpec(ContourKind(method), n, theta))


def _rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_points(n, seed, dist="uniform", rng=None):
    """``n`` points on [0, 1]: Philox uniforms or Chebyshev points."""
    if dist == "uniform":
        return (rng or _rng(seed)).random(n)
    if dist == "chebyshev":
        i = np.arange(1, n + 1)
        return 0.5 * (np.cos(np.pi * (2 * i - 1) / (2 * n)) + 1.0)
    raise DomainError(f"dist must be 'uniform' or 'chebyshev', got {dist!r}")


def error_indices(M, seed):
    """Up to 100 distinct target indices drawn from a generator keyed on ``seed``."""
    rng = np.random.Generator(np.random.Philox(key=int(seed) + 1))
    return np.sort(rng.choice(M, size=min(M, N_ERROR_TARGETS), replace=False))


def max_relative_error(u, req: fgt.TransformRequest, idx):
    """Max relative error of ``u[idx]`` against the direct sum.

    Targets whose exact value is below ``1e-3`` of the largest sampled one
    are skipped.
    """
    if len(idx) == 0:
        return 0.0
    ref = fgt.direct(req, idx).potentials
    big = np.abs(ref) >= SMALL_POTENTIAL * np.abs(ref).max()
    if not np.any(big) or np.abs(ref).max() == 0:
        return float(np.max(np.abs(u[idx] - ref)))
    return float(np.max(np.abs(u[idx][big] - ref[big]) / np.abs(ref[big])))


def geometric_rate(n, err):
    """``rho`` in the least-squares fit ``err ~ C * rho**(-n)``."""
    n = np.asarray(n, dtype=float)
    err = np.asarray(err, dtype=float)
    if n.size < 2:
        return float("nan")
    slope = np.polyfit(n, np.log(err), 1)[0]
    return float(np.exp(-slope))


#: points within this factor of the smallest error count as saturated
SATURATION_FACTOR = 100.0


def pre_saturation(err):
    """Indices of the geometric part of an error curve.

    When the smallest error is the last one the curve has not levelled off
    and every point is used; otherwise only points before the minimum that
    lie clear of the floor are kept.
    """
    err = np.asarray(err)
    stop = int(np.argmin(err))
    if stop == err.size - 1:
        return np.arange(err.size)
    return np.flatnonzero(err[:stop + 1] >= SATURATION_FACTOR * err[stop])


def convergence(method, n_list, do_reduce=False, theta=None):
    """Rows ``(n, E, n_r, E_r)`` and fitted rates for an SOE family.

    With ``do_reduce`` each SOE is compressed at ``tol = E/3``; otherwise
    ``n_r = n`` and ``E_r = E``.
    """
    rows = []
    for n in n_list:
        s = make_soe(method, n, theta)
        E = max_error(s).max_abs_error
        if do_reduce:
            r, rep = reduce(s, E / 3.0)
            rows.append((n, E, rep.reduced_n, max_error(r).max_abs_error))
        else:
            rows.append((n, E, n, E))
    arr = np.array(rows, dtype=float).reshape(-1, 4)
    rates = {}
    if len(rows) >= 2:
        sl = pre_saturation(arr[:, 1])
        rates["rate"] = geometric_rate(arr[sl, 0], arr[sl, 1])
        if do_reduce:
            sl = pre_saturation(arr[:, 3])
            rates["reduced_rate"] = geometric_rate(arr[sl, 2], arr[sl, 3])
    return rows, rates


def _warmup():
    """Trigger kernel compilation (or cache loading) outside the timed region."""
    x = np.linspace(0.0, 1.0, 4)
    for targets in (None, x[::-1].copy()):
        req = fgt.TransformRequest(x, x, 1.0, targets)
        fgt.apply(fgt.plan(req, n_e=3, precompute=True), x)
        fgt.apply(fgt.plan(req, n_e=3), x)


def _one_run(scenario, x, y, alpha, n_e, delta, presort):
    soe = fgt.soe_for_modes(n_e)
    t = soe.nodes / np.sqrt(delta)
    same = scenario is Scenario.SAME
    clock = time.perf_counter
    t0 = clock()
    ys, sp = fgt._sort(y)
    xs, tp = (ys, sp) if same else fgt._sort(x)
    t1 = clock()
    gaps = K.gap_table(t, xs)
    t2 = clock()
    p = fgt.TransformPlan(xs, tp, ys, sp, soe, delta, same, gaps)
    u = fgt.apply(p, alpha).potentials
    t3 = clock()
    if presort:
        # sorted input with a stored table: only the scans are charged
        return u, 0.0, 0.0, t3 - t2, t3 - t2
    return u, t1 - t0, t2 - t1, t3 - t2, t3 - t0


def run_bench(scenario="SamePoints", N=100_000, M=None, n_e=6, delta=1.0, seed=0,
              dist="uniform", presort=False, repeat=1):
    """Time one transform and measure its error at 100 seeded targets.

    Returns a :class:`BenchRecord`; with ``repeat > 1`` the timings are the
    mean over runs (the error is identical across runs). With ``presort``
    the points are sorted before the clock starts and the sort and
    exponential tables are not charged.
    """
    scenario = Scenario(scenario)
    same = scenario is Scenario.SAME
    N = check_positive_int(N, "N")
    M = N if (M is None or same) else check_positive_int(M, "M")
    delta = check_delta(delta)
    repeat = check_positive_int(repeat, "repeat")
    rng = _rng(seed)
    y = sample_points(N, seed, dist, rng)
    alpha = rng.random(N)
    x = y if same else sample_points(M, seed, dist, rng)
    if presort:
        order = np.argsort(y, kind="stable")
        y, alpha = y[order], alpha[order]
        x = y if same else np.sort(x)
    _warmup()
    times = []
    for _ in range(repeat):
        u, *tt = _one_run(scenario, x, y, alpha, n_e, delta, presort)
        times.append(tt)
    req = fgt.TransformRequest(y, alpha, delta, None if same else x)
    err = max_relative_error(u, req, error_indices(M, seed))
    t_sort, t_pre, t_rem, t_total = np.mean(np.array(times), axis=0)
    return BenchRecord(scenario.value, N, M, n_e, delta, float(t_sort), float(t_pre),
                       float(t_rem), float(t_total), err, int(seed), dist, bool(presort))


def delta_sweep(N=10_000, n_e=6, deltas=(), seed=0, dist="uniform"):
    """Rows ``(delta, max relative error)`` on one seeded same-point instance."""
    rng = _rng(seed)
    x = sample_points(N, seed, dist, rng)
    alpha = rng.random(N)
    idx = error_indices(N, seed)
    rows = []
    for d in deltas:
        req = fgt.TransformRequest(x, alpha, check_delta(d))
        u = fgt.apply(fgt.plan(req, n_e=n_e), alpha).potentials
        rows.append((float(d), max_relative_error(u, req, idx)))
    return rows
