"""Joint spectral radius estimators and the power/iterate norm ladder.

Four routes to ``r(T) = max{||lam||_2 : lam in sigma_T(T)}``:

``radius_joint_eig``
    directly from the joint eigenvalues; the ground truth for everything else.
``radius_power``
    from the norms ``||T^k||_2`` (Gelfand-type formula).
``radius_aluthge``
    from the limit of ``||Delta_t^(n)(T)||_2`` (valid for ``0 < t < 1``).
``radius_elementary``
    square root of the spectral radius of ``X -> sum_i T_i* X T_i``.
"""

from dataclasses import dataclass, field
from itertools import combinations
import math
from typing import NamedTuple

import numpy as np

from .errors import SizeGuard
from .koszul import joint_eigenvalues
from .polar import AluthgeOrbit, aluthge, iterate
from .tuples import log_power_norms, tuple_two_norm

ELEMENTARY_LIMIT = 64


def radius_joint_eig(T, **kwargs):
    pts = joint_eigenvalues(T, **kwargs)
    return max((p.norm2 for p in pts), default=0.0)


class PowerRadius(NamedTuple):
    value: float
    k_reached: int
    root: float
    converged: bool


def _slope_limit(diffs, order, window):
    """Limit of ``diffs`` under the model ``L + sum_j a_j z_j^k`` (``order``
    exponential terms), fitted by linear prediction on the last ``window``
    entries.  Returns ``None`` when the fit is degenerate."""
    d = np.asarray(diffs[-window:], dtype=float)
    e = np.diff(d)
    rows = len(e) - order
    if order < 1 or rows < 2 * order:
        return None
    A = np.array([e[k : k + order][::-1] for k in range(rows)])
    p = np.linalg.lstsq(A, -e[order:], rcond=1e-12)[0]
    den = 1.0 + p.sum()
    if abs(den) < 1e-8:
        return None
    vals = [(d[k + order] + p @ d[k : k + order][::-1]) / den for k in range(len(d) - order)]
    out = float(np.mean(vals[-(rows // 2) :]))
    return out if np.isfinite(out) else None


def _power_estimate(logs, order=4, window=20):
    """Radius estimate from ``log ||T^k||_2``, ``k = 1..K``.

    The plain roots ``||T^k||^(1/k)`` are upper bounds for ``r`` that approach
    it only like ``O(1/k)``.  The increments ``log ||T^(k+1)|| - log ||T^k||``
    converge to ``log r`` geometrically, with oscillating corrections from the
    subdominant joint eigenvalues; their limit is extrapolated by linear
    prediction.  Short sequences fall back to the log-slope over the last
    ``2*floor(K/4)`` powers (an even window cancels period-2 oscillation) and
    then to the best root.  The result is capped by the best root bound.
    """
    K = len(logs)
    roots = logs / np.arange(1, K + 1)
    best_root = float(np.exp(roots.min()))
    m = K // 4
    if m == 0:
        return best_root, best_root
    estimate = (logs[-1] - logs[-1 - 2 * m]) / (2 * m)
    w = min(window, K - 1)
    q = min(order, (w - 1) // 3)
    fitted = _slope_limit(np.diff(logs), q, w) if q >= 1 else None
    if fitted is not None:
        estimate = fitted
    return min(best_root, float(np.exp(estimate))), best_root


def radius_power(T, k_max=40, rel_tol=1e-12):
    """Estimate ``r(T)`` from the power norms ``||T^k||_2``, ``k <= k_max``.

    Stops early once three consecutive estimates (from ``K >= 8`` powers on)
    agree within ``rel_tol`` (relative).  ``root`` is the smallest plain root ``||T^k||^(1/k)``
    seen, a guaranteed upper bound.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    logs = log_power_norms(T, k_max)
    if np.isneginf(logs).any():
        k0 = int(np.argmax(np.isneginf(logs))) + 1
        return PowerRadius(0.0, k0, 0.0, True)
    history = []
    for K in range(1, k_max + 1):
        value, root = _power_estimate(logs[:K])
        history.append(value)
        if K >= 8 and all(
            abs(value - h) <= rel_tol * max(value, 1e-300) for h in history[-3:-1]
        ):
            return PowerRadius(value, K, root, True)
    return PowerRadius(value, k_max, root, False)


class AluthgeRadius(NamedTuple):
    value: float
    trace: object
    warnings: tuple
    upper: float
    extrapolated: bool


def radius_aluthge(T, t=0.5, max_iter=500, stop_tol=1e-9):
    """Estimate ``r(T)`` as the limit of ``||Delta_t^(n)(T)||_2``.

    ``t = 1`` is accepted but flagged: the Duggal iterates need not converge
    to the spectral radius (they can be stuck on a period-2 orbit).

    When the norms have not stalled after ``max_iter`` steps, ``value`` is the
    Aitken extrapolation of the last three norms (slow orbits contract by a
    factor close to 1 per step); ``upper`` is always the last norm, which is
    never below ``r(T)``.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    trace = iterate(T, t, max_iter=max_iter, stop_tol=stop_tol)
    warnings = []
    if t == 1.0:
        warnings.append("t=1: the limit of the Duggal iterates may exceed r(T)")
        if _period_two(trace.final, t):
            warnings.append("period-2 orbit: Delta_1(Delta_1(T)) = T")
    if trace.oscillating:
        warnings.append("iterates oscillate with period 2")
    upper = trace.limit_estimate
    value, extrapolated = upper, False
    if not trace.converged and not trace.oscillating and len(trace) >= 3:
        warnings.append(f"no norm stall within {max_iter} iterations; limit extrapolated")
        value, extrapolated = _tail_limit(trace.norms), True
    return AluthgeRadius(value, trace, tuple(warnings), upper, extrapolated)


def _period_two(T, t, tol=1e-10):
    once = aluthge(T, t)
    twice = aluthge(once, t)
    scale = tol * (1.0 + tuple_two_norm(T))
    moved = max(np.linalg.norm(a - b) for a, b in zip(once, T))
    back = max(np.linalg.norm(a - b) for a, b in zip(twice, T))
    return bool(back <= scale and moved > scale)


def elementary_matrix(T):
    """Matrix of ``X -> sum_i T_i* X T_i`` acting on column-stacked ``vec(X)``."""
    n = T.n
    M = np.zeros((n * n, n * n), dtype=np.complex128)
    for m in T:
        M += np.kron(m.T, m.conj().T)
    return M


def radius_elementary(T):
    """``sqrt(rho(M_T))`` with ``M_T(X) = sum_i T_i* X T_i``; guarded to ``n <= 64``."""
    if T.n > ELEMENTARY_LIMIT:
        raise SizeGuard(f"n = {T.n} exceeds {ELEMENTARY_LIMIT} for the n^2 x n^2 operator")
    ev = np.linalg.eigvals(elementary_matrix(T))
    return float(math.sqrt(np.max(np.abs(ev)))) if ev.size else 0.0


@dataclass
class RadiusReport:
    r_joint_eig: float
    r_power: float
    r_aluthge: float
    r_elementary: float
    two_norm: float
    metadata: dict = field(default_factory=dict)

    @property
    def estimates(self):
        return {
            "joint_eig": self.r_joint_eig,
            "power": self.r_power,
            "aluthge": self.r_aluthge,
            "elementary": self.r_elementary,
        }

    @property
    def spread(self):
        vals = list(self.estimates.values())
        return max(abs(a - b) for a, b in combinations(vals, 2))


def radius_report(T, t=0.5, k_max=40, max_iter=500, stop_tol=1e-9):
    """Run all four estimators and collect their budgets and warnings."""
    rj = radius_joint_eig(T)
    rp = radius_power(T, k_max=k_max)
    ra = radius_aluthge(T, t=t, max_iter=max_iter, stop_tol=stop_tol)
    re_ = radius_elementary(T)
    meta = {
        "power": {
            "k_max": k_max,
            "k_reached": rp.k_reached,
            "converged": rp.converged,
            "root_bound": rp.root,
        },
        "aluthge": {
            "t": t,
            "max_iter": max_iter,
            "stop_tol": stop_tol,
            "n_reached": len(ra.trace),
            "converged": ra.trace.converged,
            "oscillating": ra.trace.oscillating,
            "extrapolated": ra.extrapolated,
            "last_norm": ra.upper,
            "warnings": list(ra.warnings),
        },
        "elementary": {"operator_size": T.n * T.n},
    }
    return RadiusReport(rj, rp.value, ra.value, re_, tuple_two_norm(T), meta)


@dataclass
class LadderTable:
    """``norms[n, k-1] = ||(Delta_t^(n)(T))^k||_2`` for ``n = 0..N``, ``k = 1..K``.

    ``limits[k-1]`` estimates ``L_{t,k} = lim_n norms[n, k-1]``.
    """

    t: float
    norms: np.ndarray
    limits: np.ndarray

    @property
    def N(self):
        return self.norms.shape[0] - 1

    @property
    def K(self):
        return self.norms.shape[1]


def _tail_limit(col):
    """Limit of a non-increasing sequence: Aitken extrapolation of the last
    three terms when they decay geometrically, else the last term."""
    if len(col) < 3:
        return float(col[-1])
    a, b, c = col[-3:]
    d1, d2 = a - b, b - c
    if d1 > 0 and 0 <= d2 < d1:
        q = d2 / d1
        return float(max(c - d2 * q / (1 - q), 0.0))
    return float(c)


LADDER_MAX_ROWS = 500
LADDER_MAX_POWER = 6


def ladder_diagnostics(T, t, N=30, K=4, stall_tol=None):
    """Tabulate ``||(Delta_t^(n)(T))^k||_2`` for ``n = 0..N``, ``k = 1..K``.

    With ``stall_tol`` the table ends early at the first row whose entries
    all differ from the previous row by at most ``stall_tol``.  Limits are
    read off the tail of each column (see :func:`_tail_limit`), so slowly
    converging orbits need ``N`` in the hundreds for a sharp estimate.
    """
    if not (1 <= N <= LADDER_MAX_ROWS and 1 <= K <= LADDER_MAX_POWER):
        raise SizeGuard(
            f"ladder limited to N <= {LADDER_MAX_ROWS} and K <= {LADDER_MAX_POWER}"
        )
    rows = [np.exp(log_power_norms(T, K))]
    orbit = AluthgeOrbit(T, t)
    for _ in range(N):
        rows.append(np.exp(log_power_norms(orbit.step(), K)))
        if stall_tol is not None and np.max(np.abs(rows[-1] - rows[-2])) <= stall_tol:
            break
    norms = np.array(rows)
    limits = np.array([_tail_limit(norms[:, k]) for k in range(K)])
    return LadderTable(t, norms, limits)
