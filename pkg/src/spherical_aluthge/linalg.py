"""Dense complex linear-algebra primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_matrix`
is the single entry point that normalizes and validates user input.  All
functions are pure and never mutate their arguments.

Ordering conventions are fixed so that results are reproducible: Hermitian
eigenvalues ascend, singular values descend.
"""

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    NegativeEigenvalue,
    NonFinite,
    NonHermitian,
    NonSquare,
)

RANK_TOL = 1e-10
HERMITIAN_TOL = 1e-12
CLAMP_TOL = 1e-10


def as_matrix(a, square=False):
    """Return ``a`` as a 2-D ``complex128`` array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise NonSquare(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_residual(h):
    """``||H - H*||_F``."""
    return float(np.linalg.norm(h - h.conj().T))


def _check_hermitian(h, tol):
    h = as_matrix(h, square=True)
    res = hermitian_residual(h)
    bound = tol * (1.0 + np.linalg.norm(h))
    if res > bound:
        raise NonHermitian(res, bound)
    return (h + h.conj().T) / 2


def herm_eig(h, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, U)`` with real eigenvalues in ascending order and
    ``H = U diag(eigenvalues) U*``.  Raises :class:`NonHermitian` when
    ``||H - H*||_F > tol (1 + ||H||_F)``.
    """
    h = _check_hermitian(h, tol)
    w, u = np.linalg.eigh(h)
    return w, u


def svd(a):
    """Thin SVD ``A = U diag(s) V*`` with ``s`` descending.

    Note that the third factor is ``V`` itself, not ``V*``.
    """
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    return u, s, vh.conj().T


def singular_values(a):
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def op_norm(a):
    """Operator (spectral) norm, i.e. the largest singular value."""
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def rank_cutoff(sigma_max, rel_tol=RANK_TOL):
    return rel_tol * max(1.0, float(sigma_max))


def numerical_rank(a, rel_tol=RANK_TOL):
    """Number of singular values above ``rel_tol * max(1, sigma_max)``."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    s = singular_values(a)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > rank_cutoff(s[0], rel_tol)))


def pinv(a, rel_tol=RANK_TOL):
    """Moore-Penrose pseudoinverse with the same cutoff as :func:`numerical_rank`."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    u, s, v = svd(a)
    if s.size == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    keep = s > rank_cutoff(s[0], rel_tol)
    return (v[:, keep] / s[keep]) @ u[:, keep].conj().T


def psd_power(h, t, clamp_tol=CLAMP_TOL, tol=HERMITIAN_TOL):
    """Fractional power ``H**t`` of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-clamp_tol*||H||, clamp_tol*||H||]`` are treated as exact
    zeros, so that roundoff in the kernel is not amplified by small exponents.
    Anything more negative raises :class:`NegativeEigenvalue`.  ``t = 0``
    returns the identity (``0**0 = 1``).
    """
    if t < 0:
        raise ValueError("exponent must be non-negative")
    w, u = herm_eig(h, tol)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    threshold = clamp_tol * norm
    if w.size and w[0] < -threshold:
        raise NegativeEigenvalue(float(w[0]), threshold)
    w = np.where(w <= threshold, 0.0, w)
    wt = np.power(w, t)  # 0**0 == 1
    return (u * wt) @ u.conj().T


def schur_triangularize(a):
    """Complex Schur form ``A = Q R Q*`` with ``Q`` unitary, ``R`` upper triangular."""
    a = as_matrix(a, square=True)
    try:
        r, q = scipy.linalg.schur(a, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return q, r


def reorder_schur(q, r, select):
    """Move the diagonal positions flagged in ``select`` to the leading block.

    Returns ``(q, r)`` of the reordered Schur form; the first
    ``sum(select)`` columns of ``q`` then span the corresponding invariant
    subspace.
    """
    from scipy.linalg.lapack import ztrsen

    sel = np.asarray(select, dtype=np.int32)
    rs, qs, _, m, _, _, info = ztrsen(sel, r, q, job="N")
    if info != 0:
        raise ConvergenceFailure(f"ztrsen failed with info={info}")
    return qs, rs
