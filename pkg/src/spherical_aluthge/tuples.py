"""Commuting d-tuples of square matrices, their 2-norm, powers and the
elementary operator ``X -> sum_i T_i* X T_i``."""

from dataclasses import dataclass
from itertools import combinations, product
import math

import numpy as np

from .errors import NotCommuting, ShapeMismatch, SizeGuard
from .linalg import as_matrix, op_norm

COMMUTE_TOL = 1e-10
EXPLICIT_POWER_LIMIT = 4096


@dataclass(frozen=True)
class PointCd:
    """A point of ``C^d``."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))

    @property
    def d(self):
        return len(self.coords)

    @property
    def norm2(self):
        return math.sqrt(sum(abs(c) ** 2 for c in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __neg__(self):
        return PointCd(tuple(-c for c in self.coords))

    def as_array(self):
        return np.array(self.coords, dtype=np.complex128)


def as_point(lam, d):
    """Coerce a scalar, sequence or :class:`PointCd` into a point of ``C^d``."""
    if isinstance(lam, PointCd):
        coords = lam.coords
    elif np.isscalar(lam):
        coords = (lam,) * d
    else:
        coords = tuple(np.asarray(lam, dtype=np.complex128).ravel())
    if len(coords) != d:
        raise ShapeMismatch(f"point has {len(coords)} coordinates, tuple has d={d}")
    return PointCd(coords)


@dataclass(frozen=True, eq=False)
class CommutingTuple:
    """An ordered d-tuple of n x n complex matrices that commute pairwise.

    Instances are produced by :func:`validate_commuting`, which records the
    relative commutator residual as a construction-time certificate.  The
    matrices are read-only views.
    """

    matrices: tuple
    commutator_residual: float

    @property
    def d(self):
        return len(self.matrices)

    @property
    def n(self):
        return self.matrices[0].shape[0]

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def column(self):
        """The column operator ``(T_1; ...; T_d)`` as a ``dn x n`` matrix."""
        return np.vstack(self.matrices)

    def adjoint(self):
        return _certify([m.conj().T for m in self.matrices], np.inf)

    def __repr__(self):
        return (
            f"CommutingTuple(d={self.d}, n={self.n}, "
            f"commutator_residual={self.commutator_residual:.2e})"
        )


def commutator_residual(matrices):
    """Return ``(residual, worst_pair)`` with the relative commutator residual

    ``max_{i<j} ||T_i T_j - T_j T_i||_F / (1 + ||T_i|| ||T_j||)``.
    """
    norms = [op_norm(m) for m in matrices]
    worst, pair = 0.0, (0, 0)
    for i, j in combinations(range(len(matrices)), 2):
        a, b = matrices[i], matrices[j]
        res = np.linalg.norm(a @ b - b @ a) / (1.0 + norms[i] * norms[j])
        if res > worst:
            worst, pair = float(res), (i, j)
    return worst, pair


def _certify(matrices, tol):
    mats = []
    for m in matrices:
        m = np.array(as_matrix(m), copy=True)
        m.setflags(write=False)
        mats.append(m)
    if not mats:
        raise ShapeMismatch("a tuple needs at least one matrix")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ShapeMismatch(f"all matrices must be {n}x{n}, got {m.shape}")
    residual, pair = commutator_residual(mats)
    if residual > tol:
        raise NotCommuting(residual, pair, tol)
    return CommutingTuple(tuple(mats), residual)


def validate_commuting(matrices, commute_tol=COMMUTE_TOL):
    """Build a :class:`CommutingTuple`, raising :class:`NotCommuting` when the
    relative commutator residual exceeds ``commute_tol``."""
    if isinstance(matrices, CommutingTuple):
        matrices = matrices.matrices
    elif isinstance(matrices, np.ndarray) and matrices.ndim == 2:
        matrices = [matrices]
    return _certify(list(matrices), commute_tol)


def zero_tuple(n, d):
    return _certify([np.zeros((n, n))] * d, 0.0)


def tuple_two_norm(T):
    """``||T||_2 = ||P|| = ||sum_i T_i* T_i||^(1/2)``, the norm of the column operator."""
    return op_norm(T.column())


def shift(T, lam):
    """``T - lam = (T_1 - lam_1 I, ..., T_d - lam_d I)``."""
    lam = as_point(lam, T.d)
    eye = np.eye(T.n)
    return _certify([m - c * eye for m, c in zip(T, lam)], np.inf)


def elementary_apply(T, X):
    """Apply the elementary operator ``M_T(X) = sum_i T_i* X T_i``."""
    X = as_matrix(X)
    if X.shape != (T.n, T.n):
        raise ShapeMismatch(f"X must be {T.n}x{T.n}, got {X.shape}")
    out = np.zeros_like(X)
    for m in T:
        out += m.conj().T @ X @ m
    return out


def log_power_norms(T, k_max):
    """``log ||T^k||_2`` for ``k = 1..k_max`` (``-inf`` once the powers vanish).

    Uses ``||T^k||_2^2 = ||M_T^k(I)||`` with the iterate renormalized at every
    step, so no ``d^k`` products are formed and large powers do not overflow.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    X = np.eye(T.n, dtype=np.complex128)
    log_scale = 0.0
    out = np.full(k_max, -np.inf)
    for k in range(k_max):
        X = elementary_apply(T, X)
        X = (X + X.conj().T) / 2
        nrm = op_norm(X)
        if nrm == 0.0:
            break
        log_scale += math.log(nrm)
        X = X / nrm
        out[k] = 0.5 * log_scale
    return out


def power_norm(T, k):
    """``||T^k||_2`` computed through ``k`` applications of ``M_T``."""
    return float(np.exp(log_power_norms(T, k)[-1]))


def explicit_power_tuple(T, k):
    """The ``d^k``-tuple ``T^k`` in lexicographic multi-index order.

    ``T^2 = (T_1 T_1, T_1 T_2, ..., T_d T_d)`` and ``T^(k+1) = T T^k``.  This
    is an exponential-size oracle; :func:`power_norm` is the production path.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if T.d ** k > EXPLICIT_POWER_LIMIT:
        raise SizeGuard(f"d^k = {T.d ** k} exceeds {EXPLICIT_POWER_LIMIT}")
    prods = []
    for idx in product(range(T.d), repeat=k):
        m = T[idx[0]]
        for i in idx[1:]:
            m = m @ T[i]
        prods.append(m)
    # pairwise certification is quadratic in d^k; certify a prefix only
    head = _certify(prods[:64], np.inf)
    mats = list(head.matrices) + [np.array(m) for m in prods[64:]]
    for m in mats[64:]:
        m.setflags(write=False)
    return CommutingTuple(tuple(mats), head.commutator_residual)


def criss_cross_residual(A, B):
    """Largest normalized defect of ``A_i B_j A_k = A_k B_j A_i`` and
    ``B_i A_j B_k = B_k A_j B_i`` over all ``i, j, k``.

    ``A`` and ``B`` are plain sequences of matrices; neither needs to commute.
    """
    A = [as_matrix(a, square=True) for a in A]
    B = [as_matrix(b, square=True) for b in B]
    if len(A) != len(B) or not A:
        raise ShapeMismatch("A and B must be non-empty tuples of equal length")
    n = A[0].shape[0]
    if any(m.shape != (n, n) for m in A + B):
        raise ShapeMismatch("all matrices must have the same size")

    def defect(X, Y):
        nx = [op_norm(m) for m in X]
        ny = [op_norm(m) for m in Y]
        worst = 0.0
        for i, j, k in product(range(len(X)), repeat=3):
            if k <= i:
                continue
            diff = X[i] @ Y[j] @ X[k] - X[k] @ Y[j] @ X[i]
            worst = max(worst, np.linalg.norm(diff) / (1.0 + nx[i] * ny[j] * nx[k]))
        return worst

    return float(max(defect(A, B), defect(B, A)))
