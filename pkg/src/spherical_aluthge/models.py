"""Builders for finite truncations of weighted-shift tuples, the worked
examples, and a seeded corpus of commuting tuples with known joint spectra.

Truncations compress an operator on ``l^2(Z_+)`` to ``span(e_0..e_{N-1})``.
Identities that hold for the infinite operators survive only away from the
truncation edge; builders that promise such identities also return a mask
of the basis indices on which they hold.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import NotCommuting
from .tuples import PointCd, validate_commuting

# ---------------------------------------------------------------------------
# weighted shifts


@dataclass(frozen=True)
class ShiftSpec:
    """Weights ``omega_0..omega_{N-2}`` of a shift truncated to ``C^N``."""

    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise ValueError("need at least one weight (N >= 2)")
        if min(w) <= 0:
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weights", w)

    @property
    def N(self):
        return len(self.weights) + 1

    @classmethod
    def unilateral(cls, N):
        return cls((1.0,) * (N - 1))

    @classmethod
    def s_a(cls, a, N):
        """``S_a = shift(a, 1, 1, ...)``."""
        return cls((a,) + (1.0,) * (N - 2))


def weighted_shift(spec):
    """``W e_n = omega_n e_(n+1)``: ``N x N`` with ``omega`` on the subdiagonal."""
    N = spec.N
    W = np.zeros((N, N))
    W[np.arange(1, N), np.arange(N - 1)] = spec.weights
    return W


@dataclass(frozen=True)
class TwoVarShiftSpec:
    """Weights of a 2-variable shift on ``{0..N1-1} x {0..N2-1}``.

    ``alpha[k1, k2]`` moves ``e_(k1,k2)`` to ``e_(k1+1,k2)``; ``beta`` moves it
    to ``e_(k1,k2+1)``.  Entries that would leave the box are ignored.
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float)
        b = np.asarray(self.beta, dtype=float)
        if a.ndim != 2 or a.shape != b.shape:
            raise ValueError("alpha and beta must be 2-D arrays of the same shape")
        if a.min() <= 0 or b.min() <= 0:
            raise ValueError("weights must be positive")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def shape(self):
        return self.alpha.shape

    @classmethod
    def product(cls, omega, tau):
        """``alpha_(k1,k2) = omega_k1``, ``beta_(k1,k2) = tau_k2``."""
        N1, N2 = len(omega) + 1, len(tau) + 1
        alpha = np.ones((N1, N2))
        beta = np.ones((N1, N2))
        alpha[:-1, :] = np.asarray(omega, dtype=float)[:, None]
        beta[:, :-1] = np.asarray(tau, dtype=float)[None, :]
        return cls(alpha, beta)

    def commutativity_defect(self):
        """``max |beta_(k1+1,k2) alpha_k - alpha_(k1,k2+1) beta_k|`` over the
        indices where both paths stay in the box."""
        a, b = self.alpha, self.beta
        if min(a.shape) < 2:
            return 0.0
        lhs = b[1:, :-1] * a[:-1, :-1]
        rhs = a[:-1, 1:] * b[:-1, :-1]
        return float(np.max(np.abs(lhs - rhs)))


def two_variable_shift(spec, tol=1e-12):
    """The commuting pair ``(T_1, T_2)`` on the tensor basis
    ``e_k1 (x) e_k2`` (flat index ``k1 * N2 + k2``)."""
    defect = spec.commutativity_defect()
    if defect > tol:
        raise NotCommuting(defect, (0, 1), tol)
    N1, N2 = spec.shape
    n = N1 * N2
    T1 = np.zeros((n, n))
    T2 = np.zeros((n, n))
    for k1 in range(N1):
        for k2 in range(N2):
            src = k1 * N2 + k2
            if k1 + 1 < N1:
                T1[(k1 + 1) * N2 + k2, src] = spec.alpha[k1, k2]
            if k2 + 1 < N2:
                T2[k1 * N2 + k2 + 1, src] = spec.beta[k1, k2]
    return validate_commuting([T1, T2])


# ---------------------------------------------------------------------------
# worked examples


@dataclass(frozen=True, eq=False)
class Example:
    tuple: object
    expected: dict = field(default_factory=dict)
    mask: np.ndarray = None


def ex14_pair(N, t=None):
    """``(U_+*, 0)`` on ``C^N``; its transform is ``((I - E_0) U_+*, 0)`` for
    every ``0 < t <= 1``."""
    if N < 3:
        raise ValueError("N must be >= 3")
    U = weighted_shift(ShiftSpec.unilateral(N))
    Ustar = U.T
    E0 = np.zeros((N, N))
    E0[0, 0] = 1.0
    T = validate_commuting([Ustar, np.zeros((N, N))])
    expected = {"aluthge": ((np.eye(N) - E0) @ Ustar, np.zeros((N, N))), "P": np.eye(N) - E0}
    return Example(T, expected, np.ones(N, dtype=bool))


class _Ex24Expected(dict):
    def aluthge(self, t):
        return self["aluthge_factory"](t)


def ex24_pair(N):
    """``(I (x) U_N*, U_N (x) I)`` with the closed forms of its polar factors.

    ``mask`` selects basis indices ``(k1, k2)`` with ``k1, k2 < N-1``; the
    closed forms hold on the masked block (the truncated ``P`` differs at
    ``k1 = N-1``).
    """
    if N < 4:
        raise ValueError("N must be >= 4")
    U = weighted_shift(ShiftSpec.unilateral(N))
    I = np.eye(N)
    E0 = np.zeros((N, N))
    E0[0, 0] = 1.0
    E0p = I - E0
    s2 = math.sqrt(2.0)
    T = validate_commuting([np.kron(I, U.T), np.kron(U, I)])

    def delta(t):
        return (
            np.kron(I, 2 ** (-t / 2) * E0 @ U.T + E0p @ U.T),
            np.kron(U, I),
        )

    expected = _Ex24Expected(
        P=np.kron(I, E0 + s2 * E0p),
        P_squared=np.kron(I, E0 + 2 * E0p),
        V1=np.kron(I, U.T / s2),
        V2=np.kron(U, E0 + E0p / s2),
        aluthge_factory=delta,
    )
    k = np.arange(N)
    edge = k < N - 1
    mask = np.kron(edge, edge).astype(bool)
    return Example(T, expected, mask)


def ex41_matrix(k):
    """``T_k = [[1, k], [-k, -1]] = V P`` with ``V = [[0, 1], [-1, 0]]``,
    ``P = [[k, 1], [1, k]]``; ``Delta_1(T_k) = -T_k*`` and
    ``r(T_k) = sqrt(k^2 - 1) < ||T_k|| = k + 1``."""
    if k <= 1:
        raise ValueError("k must exceed 1")
    T = np.array([[1.0, k], [-k, -1.0]])
    return Example(
        validate_commuting([T]),
        {
            "P": np.array([[k, 1.0], [1.0, k]]),
            "V": np.array([[0.0, 1.0], [-1.0, 0.0]]),
            "duggal": -T.T,
            "radius": math.sqrt(k * k - 1),
            "norm": k + 1.0,
        },
    )


# ---------------------------------------------------------------------------
# polynomial tuples and the random corpus


@dataclass(frozen=True, eq=False)
class Sample:
    """A commuting tuple together with its exact joint spectrum, when known."""

    tuple: object
    spectrum: list
    meta: dict = field(default_factory=dict)

    @property
    def radius(self):
        return max((p.norm2 for p in self.spectrum), default=0.0)


def _polyval(coeffs, A):
    """``sum_j coeffs[j] A^j`` by Horner's rule."""
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for c in reversed(coeffs):
        out = out @ A + c * np.eye(n)
    return out


def _map_points(coeff_lists, eigenvalues):
    seen = []
    for mu in eigenvalues:
        p = tuple(complex(np.polyval(list(reversed(c)), mu)) for c in coeff_lists)
        if p not in seen:
            seen.append(p)
    return [PointCd(p) for p in seen]


def polynomial_tuple(A, coeff_lists, eigenvalues=None, commute_tol=1e-10):
    """``T_i = p_i(A)`` for polynomials given by ascending coefficient lists.

    The joint spectrum is ``{(p_1(mu), ..., p_d(mu)) : mu in eig(A)}``; pass
    the exact ``eigenvalues`` of ``A`` when they are known by construction,
    otherwise they are computed.
    """
    A = np.asarray(A, dtype=np.complex128)
    if any(len(c) > 7 for c in coeff_lists):
        raise ValueError("polynomial degree is limited to 6")
    T = validate_commuting([_polyval(c, A) for c in coeff_lists], commute_tol)
    if eigenvalues is None:
        eigenvalues = np.linalg.eigvals(A)
    return Sample(T, _map_points(coeff_lists, eigenvalues), {"coefficients": coeff_lists})


STYLES = ("diagonalizable", "jordan-mixed", "shift-based")


def _crandn(rng, *shape):
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / math.sqrt(2)


def _random_unitary(rng, n):
    q, r = np.linalg.qr(_crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _well_separated(points, gap, min_sep):
    norms = sorted({round(p.norm2, 12) for p in points}, reverse=True)
    if not norms or norms[0] < 0.2:
        return False
    if len(norms) > 1 and norms[1] > gap * norms[0]:
        return False
    arr = [p.as_array() for p in points]
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if np.linalg.norm(arr[i] - arr[j]) < min_sep:
                return False
    return True


def random_commuting(seed, n, d, style="diagonalizable", gap=0.8, min_sep=0.1, max_cond=30.0):
    """A seeded commuting tuple ``p_i(A)`` with exactly known joint spectrum.

    ``style`` controls the eigenstructure of ``A``:

    * ``diagonalizable``: ``A = S D S^-1`` with ``cond(S) <= max_cond``;
    * ``jordan-mixed``: as above with one or two 2x2 Jordan blocks;
    * ``shift-based``: a unitarily rotated lower-triangular matrix, a
      weighted shift plus a diagonal that may contain a nilpotent block.

    Draws are rejected until the largest joint eigenvalue norm exceeds the
    next one by the factor ``1/gap``, distinct joint eigenvalues are at least
    ``min_sep`` apart, and Jordan blocks sit below the dominant level.  These
    conditions keep finite iteration budgets meaningful; they are not needed
    for correctness of any routine.
    """
    if not (1 <= n <= 16 and 1 <= d <= 4):
        raise ValueError("random_commuting supports n <= 16 and d <= 4")
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}")
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        sample = _draw(rng, n, d, style, max_cond)
        if sample is not None and _well_separated(sample.spectrum, gap, min_sep):
            sample.meta.update(seed=seed, n=n, d=d, style=style)
            return sample
    raise RuntimeError("could not draw a well-separated tuple")  # pragma: no cover


def _draw(rng, n, d, style, max_cond):
    radius = rng.uniform(0.3, 1.0, size=n) * np.exp(2j * np.pi * rng.uniform(size=n))
    mu = radius.copy()
    J = np.diag(mu)
    if style == "jordan-mixed" and n >= 3:
        nblocks = 1 if n < 5 else 2
        # blocks at the smallest-modulus eigenvalues, never at the dominant one
        order = np.argsort(np.abs(mu))
        for b in range(nblocks):
            i, j = sorted(order[2 * b : 2 * b + 2])
            mu[j] = mu[i]
        mu = mu[np.argsort(np.abs(mu))]
        J = np.diag(mu)
        for i in range(n - 1):
            if mu[i] == mu[i + 1]:
                J[i, i + 1] = 1.0
    if style == "shift-based":
        if n >= 3 and rng.uniform() < 0.5:
            mu[-2:] = 0.0
        weights = rng.uniform(0.3, 1.2, size=n - 1)
        A0 = np.diag(mu) + np.diag(weights, -1)
        Q = _random_unitary(rng, n)
        A = Q @ A0 @ Q.conj().T
    else:
        for _ in range(100):
            S = _crandn(rng, n, n)
            if np.linalg.cond(S) <= max_cond:
                break
        else:
            return None
        A = S @ J @ np.linalg.inv(S)
    coeffs = []
    for i in range(d):
        deg = 1 if i == 0 else int(rng.integers(1, 4))
        c = list(_crandn(rng, deg + 1) * 0.7)
        if i == 0:
            c[1] = c[1] / abs(c[1]) * rng.uniform(0.6, 1.2)
        if rng.uniform() < 0.5:
            c[0] = 0.0
        coeffs.append(c)
    # the dominant joint eigenvalue must come from a single simple eigenvalue of A
    images = np.array(
        [[np.polyval(list(reversed(c)), m) for c in coeffs] for m in mu]
    )
    norms = np.linalg.norm(images, axis=1)
    top = np.flatnonzero(norms >= norms.max() - 1e-9)
    if len(top) != 1:
        return None
    try:
        return polynomial_tuple(A, coeffs, eigenvalues=mu)
    except NotCommuting:
        return None


def corpus(seed=0, size=50, n_max=8, d_max=3):
    """The reproduction corpus: ``size`` seeded tuples cycling through the
    three styles with ``2 <= n <= n_max`` and ``1 <= d <= d_max``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(size):
        style = STYLES[i % len(STYLES)]
        n = int(rng.integers(3 if style == "jordan-mixed" else 2, n_max + 1))
        d = int(rng.integers(1, d_max + 1))
        sub_seed = int(rng.integers(2**31))
        sample = random_commuting(sub_seed, n, d, style)
        sample.meta["index"] = i
        out.append(sample)
    return out
