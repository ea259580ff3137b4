"""Koszul complexes and the joint spectral picture of commuting matrix tuples.

Stage ``p`` of the Koszul complex of a d-tuple on ``C^n`` is
``Lambda^p(C^d) (x) C^n``, with basis blocks indexed by the ``p``-subsets of
``{0, ..., d-1}`` in lexicographic order.  The boundary ``D^p`` sends the
block ``S`` to ``S + {i}`` (``i`` not in ``S``) through
``(-1)^{#{j in S: j < i}} T_i``; for ``d = 2`` this gives the familiar
complex ``0 -> H -(T_1; T_2)-> H + H -(-T_2  T_1)-> H -> 0``.

In finite dimension every range is closed, the essential spectrum is empty
and every Fredholm index is zero, so each spectral system reduces to rank
conditions on the boundary maps:

* ``sigma_T``: some homology group is non-zero;
* ``sigma_pi,k``: non-zero homology at one of the stages ``0..k``
  (``sigma_pi,0`` is the left spectrum);
* ``sigma_delta,k``: non-zero homology at one of the stages ``d-k..d``
  (``sigma_delta,0`` is the right spectrum);
* ``sigma_H = sigma_l U sigma_r``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .errors import GenericityFailure, NegativeHomology, NumericalFailure, SizeGuard
from .linalg import rank_cutoff, reorder_schur, schur_triangularize, singular_values
from .tuples import PointCd, as_point, log_power_norms, shift, tuple_two_norm

MEMBERSHIP_TOL = 1e-8
CLUSTER_TOL = 1e-4
GRID_LIMIT = 10**6


def _subsets(d, p):
    return list(combinations(range(d), p))


def boundary_matrices(T):
    """The boundary maps ``D^0, ..., D^(d-1)`` as dense matrices.

    ``D^p`` has shape ``(C(d, p+1) n, C(d, p) n)``.
    """
    d, n = T.d, T.n
    maps = []
    for p in range(d):
        src = _subsets(d, p)
        dst = {s: k for k, s in enumerate(_subsets(d, p + 1))}
        D = np.zeros((len(dst) * n, len(src) * n), dtype=np.complex128)
        for col, S in enumerate(src):
            for i in range(d):
                if i in S:
                    continue
                sign = -1.0 if sum(1 for j in S if j < i) % 2 else 1.0
                row = dst[tuple(sorted(S + (i,)))]
                D[row * n : (row + 1) * n, col * n : (col + 1) * n] = sign * T[i]
        maps.append(D)
    return maps


@dataclass(frozen=True, eq=False)
class KoszulComplexRec:
    d: int
    n: int
    maps: tuple = field(repr=False)
    ranks: tuple
    homology: tuple
    rel_tol: float

    @property
    def stage_dims(self):
        return tuple(comb(self.d, p) * self.n for p in range(self.d + 1))

    @property
    def euler_characteristic(self):
        return sum((-1) ** p * h for p, h in enumerate(self.homology))

    @property
    def index(self):
        """Fredholm index; the Euler characteristic of the homology."""
        return self.euler_characteristic

    def square_residual(self):
        """``max_p ||D^(p+1) D^p||_F``."""
        return max(
            (float(np.linalg.norm(b @ a)) for a, b in zip(self.maps, self.maps[1:])),
            default=0.0,
        )


def _rank(D, rel_tol):
    s = singular_values(D)
    if s.size == 0:
        return 0, 0.0
    return int(np.count_nonzero(s > rank_cutoff(s[0], rel_tol))), float(s[-1])


def boundary_maps(T, rel_tol=MEMBERSHIP_TOL):
    """Build the Koszul complex of ``T`` with ranks and homology dimensions."""
    maps = boundary_matrices(T)
    ranks = tuple(_rank(D, rel_tol)[0] for D in maps)
    dims = [comb(T.d, p) * T.n for p in range(T.d + 1)]
    full = (0,) + ranks + (0,)
    homology = []
    for p in range(T.d + 1):
        # full[p] = rank D^(p-1), full[p+1] = rank D^p
        h = dims[p] - full[p + 1] - full[p]
        if h < 0:
            raise NegativeHomology(
                f"stage {p}: rank(D^{p-1}) + rank(D^{p}) exceeds dim {dims[p]}"
            )
        homology.append(h)
    for D in maps:
        D.setflags(write=False)
    return KoszulComplexRec(T.d, T.n, tuple(maps), ranks, tuple(homology), rel_tol)


def homology_dims(T, rel_tol=MEMBERSHIP_TOL):
    """``[h_0, ..., h_d]`` for the Koszul complex of ``T``."""
    return list(boundary_maps(T, rel_tol).homology)


@dataclass(frozen=True)
class SpectrumReport:
    """Membership of a point in each spectral system of a tuple.

    ``essential`` is always ``False`` and ``index`` always ``0``: matrices are
    Fredholm at every point.
    """

    point: PointCd
    point_spectrum: bool
    left: bool
    right: bool
    harte: bool
    taylor: bool
    pi: tuple
    delta: tuple
    homology: tuple
    sigma_min_left: float
    sigma_min_right: float
    essential: bool = False
    index: int = 0

    def flags(self):
        """Ordered ``{name: bool}`` mapping used for CSV/JSON output."""
        out = {
            "p": self.point_spectrum,
            "l": self.left,
            "r": self.right,
            "H": self.harte,
            "T": self.taylor,
        }
        out.update({f"pi{k}": v for k, v in enumerate(self.pi)})
        out.update({f"delta{k}": v for k, v in enumerate(self.delta)})
        return out


def _smallest_singular(stacked, n, rel_tol):
    s = singular_values(stacked)
    deficient = np.count_nonzero(s > rank_cutoff(s[0], rel_tol)) < n
    return bool(deficient), float(s[-1])


def membership_report(T, lam, rel_tol=MEMBERSHIP_TOL):
    """Spectral membership flags of ``lam`` for every spectral system."""
    lam = as_point(lam, T.d)
    S = shift(T, lam)
    cx = boundary_maps(S, rel_tol)
    h = cx.homology
    d = T.d
    left, smin_l = _smallest_singular(S.column(), T.n, rel_tol)
    right, smin_r = _smallest_singular(
        np.vstack([m.conj().T for m in S]), T.n, rel_tol
    )
    point = h[0] > 0
    pi = tuple(any(h[p] > 0 for p in range(k + 1)) for k in range(d + 1))
    delta = tuple(any(h[p] > 0 for p in range(d - k, d + 1)) for k in range(d + 1))
    return SpectrumReport(
        point=lam,
        point_spectrum=bool(point),
        left=left,
        right=right,
        harte=left or right,
        taylor=any(x > 0 for x in h),
        pi=pi,
        delta=delta,
        homology=tuple(h),
        sigma_min_left=smin_l,
        sigma_min_right=smin_r,
    )


def _single_linkage(values, tol):
    """Cluster complex numbers: two values share a cluster when a chain of
    steps of length ``<= tol`` connects them.  Returns a label per value."""
    n = len(values)
    labels = list(range(n))

    def find(i):
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                labels[find(i)] = find(j)
    roots = [find(i) for i in range(n)]
    remap = {}
    return [remap.setdefault(r, len(remap)) for r in roots]


def _is_jointly_nilpotent(T):
    # exact zeros only: products of d(n-1)+1 commuting nilpotents vanish
    if T.n > 256:
        return False
    k = T.d * (T.n - 1) + 1
    return bool(np.isneginf(log_power_norms(T, k)[-1]))


def _cluster_bases(T, rng, cluster_abs):
    """Orthonormal bases of the joint generalized eigenspaces of ``T``.

    A random combination ``sum_i c_i T_i`` is brought to Schur form and its
    diagonal clustered; reordering the Schur form moves each cluster to the
    leading block, whose columns span an invariant subspace of every ``T_i``.
    """
    d = T.d
    c = rng.normal(size=d) + 1j * rng.normal(size=d)
    c /= np.linalg.norm(c)
    C = sum(ci * m for ci, m in zip(c, T))
    q, r = schur_triangularize(C)
    labels = _single_linkage(np.diag(r), cluster_abs)
    bases = []
    for lab in range(max(labels) + 1):
        select = [1 if l == lab else 0 for l in labels]
        qs, _ = reorder_schur(q, r, select)
        bases.append(qs[:, : sum(select)])
    return bases


def _joint_eigenvalues_once(T, rng, cluster_abs):
    points = []
    for basis in _cluster_bases(T, rng, cluster_abs):
        m = basis.shape[1]
        coords = []
        for mat in T:
            restricted = basis.conj().T @ mat @ basis
            mean = np.trace(restricted) / m
            if m > 1:
                spread = np.max(np.abs(np.linalg.eigvals(restricted) - mean))
                if spread > 10 * cluster_abs:
                    raise GenericityFailure(
                        f"cluster of size {m} mixes distinct joint eigenvalues "
                        f"(spread {spread:.2e})"
                    )
            coords.append(mean)
        points.append(PointCd(coords))
    return points


def invariant_blocks(T, cluster_tol=CLUSTER_TOL, seed=0, max_cond=1e8):
    """Block-diagonalize a commuting tuple along its joint eigenvalues.

    Returns ``(W, sizes)`` where the columns of ``W`` are grouped into blocks
    of the given sizes, each spanning the generalized eigenspace of one joint
    eigenvalue, so that every ``W^-1 T_i W`` is block diagonal.  Raises
    :class:`GenericityFailure` when the eigenspaces are too close to
    independent (``cond(W) > max_cond``) to be separated reliably.
    """
    rng = np.random.default_rng(seed)
    bases = _cluster_bases(T, rng, cluster_tol * max(1.0, tuple_two_norm(T)))
    W = np.hstack(bases)
    cond = np.linalg.cond(W)
    if not np.isfinite(cond) or cond > max_cond:
        raise GenericityFailure(f"eigenspace basis has condition number {cond:.2e}")
    return W, [b.shape[1] for b in bases]


def joint_eigenvalues(T, cluster_tol=CLUSTER_TOL, seed=0, retries=5, verify=True):
    """Joint eigenvalues (the Taylor spectrum) of a commuting tuple.

    A random combination ``sum_i c_i T_i`` is brought to Schur form; its
    diagonal is clustered (single linkage at ``cluster_tol * max(1, ||T||_2)``)
    and each cluster's invariant subspace, obtained by reordering the Schur
    form, is used to read off every ``T_i`` as the trace of its restriction.
    Averaging over a cluster removes the ``eps^(1/m)`` scatter that roundoff
    causes around an eigenvalue with an ``m``-dimensional Jordan block.

    If a cluster turns out to mix distinct joint eigenvalues the combination
    is redrawn, up to ``retries`` times, before :class:`GenericityFailure`.
    With ``verify`` every returned point is checked to lie in the Taylor
    spectrum.
    """
    scale = max(1.0, tuple_two_norm(T))
    if _is_jointly_nilpotent(T):
        return [PointCd((0,) * T.d)]
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(retries):
        try:
            points = _joint_eigenvalues_once(T, rng, cluster_tol * scale)
            break
        except GenericityFailure as exc:
            last = exc
    else:
        raise GenericityFailure(f"no separating combination in {retries} tries: {last}")
    points.sort(key=lambda p: tuple((round(c.real, 9), round(c.imag, 9)) for c in p))
    if verify:
        for p in points:
            if not membership_report(T, p).taylor:
                raise NumericalFailure(f"computed joint eigenvalue {p.coords} fails membership")
    return points


def hausdorff_distance(A, B):
    """Hausdorff distance between two finite point sets of ``C^d``."""
    if not A and not B:
        return 0.0
    if not A or not B:
        return float("inf")
    a = np.array([p.as_array() if isinstance(p, PointCd) else p for p in A])
    b = np.array([p.as_array() if isinstance(p, PointCd) else p for p in B])
    dist = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


@dataclass(frozen=True)
class GridSlice:
    """A 2-D slice of ``C^d``: coordinate ``index`` sweeps a rectangle of the
    complex plane, the remaining coordinates stay at ``fixed``."""

    index: int
    re_range: tuple
    im_range: tuple
    resolution: tuple
    fixed: tuple = ()

    def points(self, d):
        nx, ny = self.resolution
        fixed = list(self.fixed) if self.fixed else [0j] * d
        if len(fixed) != d:
            raise ValueError(f"fixed coordinates must have length {d}")
        res = np.linspace(self.re_range[0], self.re_range[1], nx)
        ims = np.linspace(self.im_range[0], self.im_range[1], ny)
        out = []
        for y in ims:
            for x in res:
                coords = list(fixed)
                coords[self.index] = complex(x, y)
                out.append(PointCd(coords))
        return out


def grid_scan(T, grid, rel_tol=MEMBERSHIP_TOL, workers=1):
    """Membership reports at every node of ``grid`` (row-major: imaginary part
    outer, real part inner).  Output order is independent of ``workers``."""
    nx, ny = grid.resolution
    if nx * ny > GRID_LIMIT:
        raise SizeGuard(f"{nx * ny} grid points exceed {GRID_LIMIT}")
    if not 0 <= grid.index < T.d:
        raise ValueError("varying coordinate index out of range")
    pts = grid.points(T.d)

    def one(p):
        return membership_report(T, p, rel_tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, pts))
    else:
        reports = [one(p) for p in pts]
    return list(zip(pts, reports))
