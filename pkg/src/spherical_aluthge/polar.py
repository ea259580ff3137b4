"""Spherical polar decomposition and the generalized spherical Aluthge transform.

For a commuting tuple ``T`` the column operator factors as
``(T_1; ...; T_d) = (V_1; ...; V_d) P`` with ``P = (sum_i T_i* T_i)^(1/2)``
and ``(V_1; ...; V_d)`` a partial isometry whose kernel is ``ker P``.  The
transform is

    Delta_t(T) = (P^t V_1 P^(1-t), ..., P^t V_d P^(1-t)),   0 <= t <= 1.
"""

from dataclasses import dataclass, field
import logging

import numpy as np

from .errors import GenericityFailure, NotCommuting, NumericalFailure
from .koszul import invariant_blocks
from .linalg import RANK_TOL, rank_cutoff, svd
from .tuples import _certify, tuple_two_norm

log = logging.getLogger(__name__)

OUTPUT_COMMUTE_TOL = 1e-8
INVARIANT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SphericalPolar:
    """Spherical polar factors of a tuple.

    ``basis`` holds an orthonormal basis of ``ran P`` and ``spectrum`` the
    matching non-zero eigenvalues of ``P``; powers ``P^t`` are evaluated from
    this spectral data, so kernel directions stay exactly zero.
    """

    P: np.ndarray
    V: tuple
    rank: int
    tol: float
    basis: np.ndarray = field(repr=False)
    spectrum: np.ndarray = field(repr=False)
    residuals: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return self.P.shape[0]

    def power(self, t):
        """``P^t`` for ``t >= 0`` with the convention ``P^0 = I``."""
        if t == 0:
            return np.eye(self.n, dtype=np.complex128)
        w = self.basis
        return (w * self.spectrum**t) @ w.conj().T

    def pinv(self):
        w = self.basis
        return (w / self.spectrum) @ w.conj().T

    def range_projection(self):
        return self.basis @ self.basis.conj().T


def spherical_polar(T, rel_tol=RANK_TOL):
    """Spherical polar decomposition ``T_i = V_i P``.

    ``P`` comes from the SVD of the column operator (its singular values are
    the eigenvalues of ``P``); ``V_i = T_i P^+`` vanishes on ``ker P`` by
    construction.  The defining invariants are checked and a
    :class:`NumericalFailure` is raised if any exceeds ``100 * 1e-9`` (scaled).
    """
    n = T.n
    _, s, w = svd(T.column())
    r = int(np.count_nonzero(s > rank_cutoff(s[0], rel_tol))) if s.size else 0
    basis, spec = w[:, :r], s[:r]
    P = (basis * spec) @ basis.conj().T
    P = (P + P.conj().T) / 2
    pinv_p = (basis / spec) @ basis.conj().T
    V = []
    for m in T:
        v = m @ pinv_p
        v.setflags(write=False)
        V.append(v)
    P.setflags(write=False)
    polar = SphericalPolar(P, tuple(V), r, rel_tol, basis, spec)

    scale = 1.0 + tuple_two_norm(T)
    proj = basis @ basis.conj().T
    gram = sum(v.conj().T @ v for v in V) if V else np.zeros((n, n))
    kernel = w[:, r:]
    residuals = {
        "factorization": max(np.linalg.norm(v @ P - m) for v, m in zip(V, T)) / scale,
        "partial_isometry": float(np.linalg.norm(gram - proj)),
        "kernel": max((np.linalg.norm(v @ kernel) for v in V), default=0.0)
        if kernel.size
        else 0.0,
        "intertwining": _vpv_residual(V, P) / (scale * scale),
    }
    residuals = {k: float(v) for k, v in residuals.items()}
    polar.residuals.update(residuals)
    worst = max(residuals.values())
    if worst > 100 * INVARIANT_TOL:
        raise NumericalFailure(f"polar decomposition invariants violated: {residuals}")
    return polar


def _vpv_residual(V, P):
    worst = 0.0
    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            worst = max(worst, np.linalg.norm(V[i] @ P @ V[j] - V[j] @ P @ V[i]))
    return float(worst)


def aluthge(T, t, rel_tol=RANK_TOL, commute_tol=OUTPUT_COMMUTE_TOL, polar=None):
    """Generalized spherical Aluthge transform ``Delta_t(T)``.

    ``t = 1/2`` is the spherical Aluthge transform and ``t = 1`` the spherical
    Duggal transform ``(P V_1, ..., P V_d)``.  The output is re-certified as a
    commuting tuple with the looser tolerance ``commute_tol``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if polar is None:
        polar = spherical_polar(T, rel_tol)
    left = polar.power(t)
    right = polar.power(1.0 - t)
    mats = [left @ v @ right for v in polar.V]
    try:
        return _certify(mats, commute_tol)
    except NotCommuting as exc:
        raise NumericalFailure(f"Delta_{t}(T) lost commutativity: {exc}") from exc


def is_spherically_quasinormal(T, tol=INVARIANT_TOL, polar=None):
    """Return ``(flag, residual)`` where the residual is
    ``max_i ||P T_i - T_i P||_F / (1 + ||P|| ||T_i||)``."""
    if polar is None:
        polar = spherical_polar(T)
    P = polar.P
    pn = float(polar.spectrum[0]) if polar.rank else 0.0
    worst = 0.0
    for m in T:
        worst = max(
            worst, np.linalg.norm(P @ m - m @ P) / (1.0 + pn * np.linalg.norm(m, 2))
        )
    return bool(worst <= tol), float(worst)


@dataclass(frozen=True)
class TraceEntry:
    n: int
    norm2: float
    commutator_residual: float
    delta: float


@dataclass
class IterateTrace:
    """Norms of the iterates ``Delta_t^(n)(T)``, ``n = 1..N``.

    ``limit_estimate`` is the last norm.  ``oscillating`` is set when the
    iterates return to the tuple of two steps earlier without being fixed,
    the signature of a period-2 orbit.
    """

    t: float
    initial_norm: float
    entries: list = field(default_factory=list)
    converged: bool = False
    stop_reason: str = "max_iter"
    oscillating: bool = False
    final: object = field(default=None, repr=False)

    @property
    def norms(self):
        return np.array([e.norm2 for e in self.entries])

    @property
    def limit_estimate(self):
        return self.entries[-1].norm2 if self.entries else self.initial_norm

    def __len__(self):
        return len(self.entries)


def _tuple_distance(A, B):
    return max(float(np.linalg.norm(a - b)) for a, b in zip(A, B))


class AluthgeOrbit:
    """The iterates ``Delta_t^(n)(T)``, ``n = 1, 2, ...``, computed stably.

    Applying :func:`aluthge` repeatedly is unstable for ``d >= 2``: roundoff
    leaves the set of commuting tuples, and the transform amplifies the
    non-commuting part geometrically until the iterates stop commuting after
    a few dozen steps.  This class never feeds an iterate back into the
    transform directly.  It uses two exact identities instead:

    * when ``P`` is invertible, ``Delta_t(X) = P^t X P^-t`` is a similarity,
      so every iterate is ``G B G^-1`` for a fixed tuple ``B`` and an
      accumulated similarity ``G``;
    * when ``P`` has a kernel ``K``, ``Delta_t(X)`` vanishes on ``K`` and maps
      into ``K^perp``, so the orbit continues on ``K^perp`` alone.

    ``B`` is ``T`` written in a basis of joint generalized eigenvectors with
    the off-diagonal blocks dropped, which makes its components commute to
    working precision.  Each block of ``G`` may be rescaled freely (such a
    rescaling commutes with ``B``); balancing them keeps ``G`` well
    conditioned even though ``P^t`` stretches eigenspaces of different
    moduli at different exponential rates.
    """

    def __init__(self, T, t, rel_tol=RANK_TOL, commute_tol=OUTPUT_COMMUTE_TOL):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {t}")
        self.t = t
        self.rel_tol = rel_tol
        self.commute_tol = commute_tol
        self.n = T.n
        self.d = T.d
        self.live = np.eye(T.n, dtype=np.complex128)
        self.block_residual = 0.0
        self.deflations = 0
        self._rebase([np.array(m) for m in T])

    def _rebase(self, mats):
        m = mats[0].shape[0]
        self.current = mats
        if m == 0:
            return
        scale = 1.0 + max(np.linalg.norm(x, 2) for x in mats)
        try:
            W, sizes = invariant_blocks(_certify(mats, np.inf))
        except GenericityFailure:
            W, sizes = np.eye(m, dtype=np.complex128), [m]
        W_inv = np.linalg.inv(W)
        self.offsets = np.cumsum([0] + sizes)
        mask = np.zeros((m, m), dtype=bool)
        for a, b in zip(self.offsets[:-1], self.offsets[1:]):
            mask[a:b, a:b] = True
        self.B = []
        for x in mats:
            y = W_inv @ x @ W
            self.block_residual = max(
                self.block_residual, float(np.linalg.norm(y[~mask])) / scale
            )
            self.B.append(np.where(mask, y, 0))
        self.G = W
        self.current = [W @ b @ W_inv for b in self.B]

    def _balance(self):
        for a, b in zip(self.offsets[:-1], self.offsets[1:]):
            gn = np.linalg.norm(self.G[:, a:b], 2)
            if gn > 0:
                self.G[:, a:b] /= gn

    def step(self):
        """Advance one iterate and return it as a certified tuple on ``C^n``."""
        t = self.t
        m = self.current[0].shape[0]
        if m and t > 0:
            X = _certify(self.current, np.inf)
            polar = spherical_polar(X, self.rel_tol)
            if polar.rank == m:
                self.G = polar.power(t) @ self.G
                self._balance()
                G_inv = np.linalg.inv(self.G)
                self.current = [self.G @ b @ G_inv for b in self.B]
            else:
                # continue on ran P: Delta_t(X) = 0 (+) s^t X_22 s^-t
                w, s = polar.basis, polar.spectrum
                compressed = [
                    (s[:, None] ** t) * (w.conj().T @ x @ w) / (s[None, :] ** t)
                    for x in self.current
                ]
                self.live = self.live @ w
                self.deflations += 1
                if polar.rank:
                    self._rebase(compressed)
                else:
                    self.current = compressed
        L = self.live
        full = [L @ x @ L.conj().T for x in self.current]
        try:
            return _certify(full, self.commute_tol)
        except NotCommuting as exc:
            raise NumericalFailure(f"Delta_{t} iterate lost commutativity: {exc}") from exc


def iterate(
    T,
    t,
    max_iter=500,
    stop_tol=1e-9,
    rel_tol=RANK_TOL,
    period_tol=1e-12,
    method="stable",
):
    """Iterate ``Delta_t`` until the norm stalls or ``max_iter`` is reached.

    The stopping rule looks at norms, not tuples: iteration stops at the first
    ``n`` with ``| ||Delta^(n)|| - ||Delta^(n-1)|| | <= stop_tol`` (with
    ``Delta^(0) = T``).  ``method="stable"`` uses :class:`AluthgeOrbit`;
    ``method="direct"`` re-applies :func:`aluthge` to each iterate and is
    kept for comparison.  A numerical failure mid-way is re-raised with the
    partial trace attached as ``exc.trace``.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if stop_tol <= 0:
        raise ValueError("stop_tol must be positive")
    if method not in ("stable", "direct"):
        raise ValueError(f"unknown method {method!r}")
    prev_norm = tuple_two_norm(T)
    trace = IterateTrace(t=t, initial_norm=prev_norm, final=T)
    history = [T]
    current = T
    orbit = AluthgeOrbit(T, t, rel_tol) if method == "stable" else None
    for n in range(1, max_iter + 1):
        try:
            current = orbit.step() if orbit else aluthge(current, t, rel_tol=rel_tol)
        except NumericalFailure as exc:
            trace.stop_reason = "numerical_failure"
            raise NumericalFailure(f"iteration {n}: {exc}", trace=trace) from exc
        norm = tuple_two_norm(current)
        delta = abs(norm - prev_norm)
        trace.entries.append(TraceEntry(n, norm, current.commutator_residual, delta))
        trace.final = current
        history = (history + [current])[-3:]
        if len(history) == 3:
            scale = period_tol * (1.0 + norm)
            if (
                _tuple_distance(history[2], history[0]) <= scale
                and _tuple_distance(history[2], history[1]) > scale
            ):
                trace.oscillating = True
        if delta <= stop_tol:
            trace.converged = True
            trace.stop_reason = "norm_stall"
            break
        prev_norm = norm
    if trace.oscillating:
        log.warning("Delta_%s iterates follow a period-2 orbit", t)
    return trace
