"""Reproduction suite: named cases made of pass/fail checks with residuals.

Every check reports the worst residual found, the tolerance it is held to
and a short ``anchor`` naming the mathematical statement it exercises.
Corpus cases fan out over a thread pool; results are merged by corpus
index, so reports do not depend on the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .koszul import boundary_maps, hausdorff_distance, joint_eigenvalues, membership_report
from .models import corpus, ex14_pair, ex24_pair, ex41_matrix
from .polar import aluthge, iterate, spherical_polar
from .radius import (
    ladder_diagnostics,
    radius_aluthge,
    radius_elementary,
    radius_joint_eig,
    radius_power,
)
from .tuples import PointCd, shift, tuple_two_norm

CASES = ("ex14", "ex24", "ex41", "thm17", "thm18", "spectral-invariance", "ladder")

LIMITATIONS = (
    "Only finite-dimensional statements are checked. Set-level spectra of "
    "infinite-dimensional shifts (such as a right spectrum equal to a circle "
    "times zero), the essential Taylor spectrum and non-zero Fredholm indices "
    "have no finite truncation: matrices are Fredholm everywhere with index 0. "
    "Homology-dimension equality is checked as their finite-dimensional shadow."
)


@dataclass
class Check:
    name: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool = None

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        if self.passed is None:
            self.passed = bool(self.residual <= self.tolerance)


@dataclass
class ReproConfig:
    seed: int = 7
    corpus_size: int = 50
    t_values: tuple = (0.25, 0.5, 0.75)
    max_iter: int = 500
    stop_tol: float = 1e-9
    k_max: int = 40
    workers: int = 1
    off_spectrum_points: int = 20


@dataclass
class Report:
    case: str
    config: dict
    checks: list = field(default_factory=list)
    limitations: str = LIMITATIONS

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "case": self.case,
            "passed": self.passed,
            "config": self.config,
            "checks": [asdict(c) for c in self.checks],
            "limitations": self.limitations,
        }


def _max_entry(a, b, mask=None):
    diff = np.abs(np.asarray(a) - np.asarray(b))
    if mask is not None:
        diff = diff[np.ix_(mask, mask)]
    return float(diff.max()) if diff.size else 0.0


# ---------------------------------------------------------------------------
# worked examples


def case_ex41(config, k=2.0):
    ex = ex41_matrix(k)
    T = ex.tuple
    norm, r = ex.expected["norm"], ex.expected["radius"]
    orbit, current = [], T
    for _ in range(20):
        current = aluthge(current, 1.0)
        orbit.append(current)
    polar = spherical_polar(T)
    return [
        Check("polar factor P", "T_k = V P with P = [[k,1],[1,k]]", _max_entry(polar.P, ex.expected["P"]), 1e-12),
        Check("polar factor V", "V = [[0,1],[-1,0]] with V^2 = -I", _max_entry(polar.V[0], ex.expected["V"]), 1e-12),
        Check("Duggal transform", "Delta_1(T_k) = P V = -T_k*", _max_entry(orbit[0][0], ex.expected["duggal"]), 1e-12),
        Check("period two", "Delta_1(Delta_1(T_k)) = T_k", _max_entry(orbit[1][0], T[0]), 1e-12),
        Check(
            "Duggal norms constant",
            "||Delta_1^(n)(T_k)||_2 = k + 1 for n = 1..20",
            max(abs(tuple_two_norm(x) - norm) for x in orbit),
            1e-10,
        ),
        Check("joint spectral radius", "r(T_k) = sqrt(k^2 - 1)", abs(radius_joint_eig(T) - r), 1e-10),
        Check(
            "Duggal limit differs from r",
            "lim ||Delta_1^(n)(T_k)||_2 = k + 1 > r(T_k)",
            0.0 if norm - r > 1e-3 else 1.0,
            0.0,
        ),
        Check("power formula at k=2", "T_k^2 = (1 - k^2) I", abs(radius_power(T, k_max=2).value - r), 1e-12),
        Check(
            "Aluthge limit at t=1/2",
            "lim ||Delta_t^(n)(T)||_2 = r(T) for 0 < t < 1",
            abs(radius_aluthge(T, 0.5, config.max_iter, config.stop_tol).value - r),
            1e-6,
        ),
        Check("elementary operator", "r(T)^2 = spectral radius of X -> T* X T", abs(radius_elementary(T) - r), 1e-10),
    ]


def case_ex14(config, N=8):
    ts = [round(0.1 * j, 1) for j in range(1, 11)]
    ex = ex14_pair(N)
    worst0 = worst1 = 0.0
    for t in ts:
        D = aluthge(ex.tuple, t)
        worst0 = max(worst0, _max_entry(D[0], ex.expected["aluthge"][0]))
        worst1 = max(worst1, _max_entry(D[1], ex.expected["aluthge"][1]))
    small = ex14_pair(3)
    D3 = aluthge(small.tuple, 0.5)[0]
    support = np.argwhere(np.abs(D3) > 1e-12).tolist()
    return [
        Check(
            "transform of (U+*, 0)",
            "Delta_t(U+*, 0) = ((I - E_0) U+*, 0) for all t in (0, 1]",
            worst0,
            1e-12,
        ),
        Check("second coordinate", "the zero coordinate stays zero", worst1, 1e-12),
        Check(
            "single entry for N=3",
            "(I - E_0) U+* has one non-zero entry, 1 at position (1, 2)",
            0.0 if support == [[1, 2]] and abs(D3[1, 2] - 1) <= 1e-12 else 1.0,
            0.0,
        ),
    ]


def case_ex24(config, N=16):
    ex = ex24_pair(N)
    mask = ex.mask
    exp = ex.expected
    polar = spherical_polar(ex.tuple)
    checks = [
        Check("P on interior", "P = I (x) (E_0 + sqrt(2) E_0^perp)", _max_entry(polar.P, exp["P"], mask), 1e-12),
        Check("P^2 on interior", "P^2 = I (x) (E_0 + 2 E_0^perp)", _max_entry(polar.P @ polar.P, exp["P_squared"], mask), 1e-12),
        Check("V_1 on interior", "V_1 = I (x) U*/sqrt(2)", _max_entry(polar.V[0], exp["V1"], mask), 1e-12),
        Check("V_2 on interior", "V_2 = U (x) (E_0 + E_0^perp/sqrt(2))", _max_entry(polar.V[1], exp["V2"], mask), 1e-12),
    ]
    for t in (0.25, 0.5, 1.0):
        D = aluthge(ex.tuple, t, polar=polar)
        want = exp.aluthge(t)
        checks.append(
            Check(
                f"Delta_{t} first coordinate",
                "P^t V_1 P^(1-t) = I (x) (2^(-t/2) E_0 U* + E_0^perp U*)",
                _max_entry(D[0], want[0], mask),
                1e-12,
            )
        )
        checks.append(
            Check(
                f"Delta_{t} second coordinate",
                "P^t V_2 P^(1-t) = U (x) I",
                _max_entry(D[1], want[1], mask),
                1e-12,
            )
        )
    return checks


# ---------------------------------------------------------------------------
# corpus cases


def _fan_out(fn, samples, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, samples))
    return [fn(s) for s in samples]


def _merge(per_sample, specs):
    """Worst residual per check name across samples, in ``specs`` order."""
    checks = []
    for name, anchor, tol in specs:
        worst = max((res.get(name, 0.0) for res in per_sample), default=0.0)
        checks.append(Check(name, anchor, worst, tol))
    return checks


THM17_SPECS = [
    ("iterate norms non-increasing", "||Delta_t^(n+1)(T)||_2 <= ||Delta_t^(n)(T)||_2", 1e-8),
    ("iterate norms bounded by r", "r(T) <= ||Delta_t^(n)(T)||_2", 1e-8),
    ("iterate norms bounded by ||T||", "||Delta_t^(n)(T)||_2 <= ||T||_2", 1e-8),
]


def _thm17_sample(config):
    def run(sample):
        T = sample.tuple
        r = radius_joint_eig(T)
        out = {s[0]: 0.0 for s in THM17_SPECS}
        for t in config.t_values:
            tr = iterate(T, t, config.max_iter, config.stop_tol)
            norms = np.concatenate([[tr.initial_norm], tr.norms])
            out[THM17_SPECS[0][0]] = max(out[THM17_SPECS[0][0]], float(np.max(np.diff(norms), initial=0.0)))
            out[THM17_SPECS[1][0]] = max(out[THM17_SPECS[1][0]], float(r - norms.min()))
            out[THM17_SPECS[2][0]] = max(out[THM17_SPECS[2][0]], float(norms.max() - norms[0]))
        return out

    return run


THM18_SPECS = [
    ("Aluthge limit equals r", "lim_n ||Delta_t^(n)(T)||_2 = r(T), 0 < t < 1, within max_iter", 1e-3),
    ("power formula equals r", "r(T) = lim_k ||T^k||_2^(1/k), k <= k_max", 1e-3),
    ("elementary operator equals r", "r(T)^2 = spectral radius of X -> sum T_i* X T_i", 1e-6),
    ("joint eigenvalues match construction", "sigma_T(p(A)) = p(sigma(A))", 1e-6),
]


def _thm18_sample(config):
    def run(sample):
        T = sample.tuple
        r = radius_joint_eig(T)
        aluthge_err = max(
            abs(radius_aluthge(T, t, config.max_iter, config.stop_tol).value - r)
            for t in config.t_values
        )
        return {
            THM18_SPECS[0][0]: aluthge_err,
            THM18_SPECS[1][0]: abs(radius_power(T, config.k_max).value - r),
            THM18_SPECS[2][0]: abs(radius_elementary(T) - r),
            THM18_SPECS[3][0]: hausdorff_distance(joint_eigenvalues(T), sample.spectrum),
        }

    return run


SPECTRAL_SPECS = [
    ("Taylor spectrum preserved", "sigma_T(Delta_t(T)) = sigma_T(T), Hausdorff distance", 1e-6),
    ("point spectrum flags", "sigma_p(Delta_t(T)) = sigma_p(T)", 0.0),
    ("left spectrum flags", "sigma_l(Delta_t(T)) = sigma_l(T)", 0.0),
    ("Harte spectrum flags", "sigma_H(Delta_t(T)) = sigma_H(T)", 0.0),
    ("Taylor spectrum flags", "sigma_T(Delta_t(T)) = sigma_T(T)", 0.0),
    ("pi_k spectrum flags", "sigma_pi,k(Delta_t(T)) = sigma_pi,k(T)", 0.0),
    ("right spectrum sandwich", "sigma_r(T) in sigma_r(Delta_t(T)) in sigma_r(T) + {0}", 0.0),
    ("delta_k spectrum sandwich", "sigma_delta,k(T) in sigma_delta,k(Delta_t(T)) in sigma_delta,k(T) + {0}", 0.0),
    ("homology dimensions", "h_p(T - lam) = h_p(Delta_t(T) - lam) for lam != 0, and at 0 when P is invertible", 0.0),
    ("left invertibility at 0", "for 0 < t < 1: T and Delta_t(T) left invertible at 0 together, iff P invertible", 0.0),
    ("right spectrum corollary", "0 in sigma_r(Delta_t(T)) minus sigma_r(T) implies 0 in sigma_l(T) and sigma_l(Delta_t(T))", 0.0),
    ("boundary squares to zero", "D^(p+1) D^p = 0, relative to max(1, ||T||_2^2)", 1e-12),
    ("Euler characteristic", "sum_p (-1)^p h_p = 0", 0.0),
]
T_VALUES_SPECTRAL = (0.25, 0.5, 0.75, 1.0)
# computed joint eigenvalues this close to the origin are treated as 0
ZERO_TOL = 1e-10


def sample_points(T, eigenvalues, count, seed):
    """The joint eigenvalues plus ``count`` seeded points at distance at least
    ``0.05 * max(1, ||T||_2)`` from them, inside the ball of radius ``1.2 ||T||_2``."""
    rng = np.random.default_rng(seed)
    radius = 1.2 * max(1.0, tuple_two_norm(T))
    eig = np.array([p.as_array() for p in eigenvalues])
    margin = 0.05 * max(1.0, tuple_two_norm(T))
    extra = []
    while len(extra) < count:
        z = rng.uniform(-radius, radius, size=T.d) + 1j * rng.uniform(-radius, radius, size=T.d)
        if eig.size and np.min(np.linalg.norm(eig - z, axis=1)) < margin:
            continue
        extra.append(PointCd(z))
    return list(eigenvalues) + extra


def _koszul_defects(T, lam):
    cx = boundary_maps(shift(T, lam))
    scale = max(1.0, tuple_two_norm(T) ** 2)
    return cx.square_residual() / scale, abs(cx.euler_characteristic)


def _spectral_sample(config):
    names = [s[0] for s in SPECTRAL_SPECS]

    def run(sample):
        T = sample.tuple
        idx = sample.meta.get("index", 0)
        out = dict.fromkeys(names, 0.0)
        eig = joint_eigenvalues(T)
        points = sample_points(T, eig, config.off_spectrum_points, config.seed * 100003 + idx)
        zero = PointCd((0,) * T.d)
        base = {p: membership_report(T, p) for p in points + [zero]}
        full_rank = spherical_polar(T).rank == T.n
        for t in T_VALUES_SPECTRAL:
            D = aluthge(T, t)
            out[names[0]] = max(out[names[0]], hausdorff_distance(eig, joint_eigenvalues(D)))
            for p in points + [zero]:
                a, b = base[p], membership_report(D, p)
                is_zero = p.norm2 <= ZERO_TOL * max(1.0, tuple_two_norm(T))
                out[names[1]] += a.point_spectrum != b.point_spectrum
                out[names[2]] += a.left != b.left
                out[names[3]] += a.harte != b.harte
                out[names[4]] += a.taylor != b.taylor
                out[names[5]] += sum(x != y for x, y in zip(a.pi, b.pi))
                bad_r = (a.right and not b.right) or (b.right and not a.right and not is_zero)
                out[names[6]] += bad_r
                out[names[7]] += sum(
                    (x and not y) or (y and not x and not is_zero) for x, y in zip(a.delta, b.delta)
                )
                if not is_zero or full_rank:
                    out[names[8]] += a.homology != b.homology
                if p == zero and 0 < t < 1:
                    both = not a.left and not b.left
                    neither = a.left and b.left
                    out[names[9]] += not ((both or neither) and (both == full_rank))
                    if b.right and not a.right:
                        out[names[10]] += not (a.left and b.left)
                for tup, lam in ((T, p), (D, p)):
                    sq, euler = _koszul_defects(tup, lam)
                    out[names[11]] = max(out[names[11]], sq)
                    out[names[12]] = max(out[names[12]], euler)
        return out

    return run


LADDER_SPECS = [
    ("submultiplicativity", "||T^(k+1)||_2 <= ||T||_2 ||T^k||_2", 1e-10),
    ("powers decrease under Delta_t", "||(Delta_t T)^k||_2 <= ||T^k||_2", 1e-10),
    ("interpolation bound t <= 1/2", "||(Delta_t T)^k|| <= ||T^(k+1)||^t ||T^(k-1)||^(1-t) ||T||^(1-2t)", 1e-10),
    ("interpolation bound t >= 1/2", "||(Delta_t T)^k|| <= ||T^(k+1)||^(1-t) ||T^(k-1)||^t ||T||^(2t-1)", 1e-10),
    ("ladder cells bound r", "r(T) <= ||(Delta_t^(n)(T))^k||_2^(1/k)", 1e-8),
    ("limits are powers", "L_(t,k) = L_(t,1)^k, relative", 1e-3),
]
LADDER_K = 4


def _ladder_sample(config):
    names = [s[0] for s in LADDER_SPECS]

    def run(sample):
        T = sample.tuple
        r = radius_joint_eig(T)
        out = dict.fromkeys(names, 0.0)

        def viol(lhs, rhs):
            return max(float(lhs - rhs) / max(1.0, float(rhs)), 0.0)

        for t in config.t_values:
            table = ladder_diagnostics(T, t, N=config.max_iter, K=LADDER_K + 1, stall_tol=1e-11)
            A = table.norms
            ones = np.ones((A.shape[0], 1))
            full = np.hstack([ones, A])  # full[:, k] = ||X^k||, k = 0..K+1
            for row in range(A.shape[0]):
                x = full[row]
                for k in range(1, LADDER_K + 1):
                    out[names[0]] = max(out[names[0]], viol(x[k + 1], x[1] * x[k]))
                    if row + 1 < A.shape[0]:
                        y = full[row + 1][k]
                        out[names[1]] = max(out[names[1]], viol(y, x[k]))
                        if t <= 0.5:
                            bound = x[k + 1] ** t * x[k - 1] ** (1 - t) * x[1] ** (1 - 2 * t)
                            out[names[2]] = max(out[names[2]], viol(y, bound))
                        if t >= 0.5:
                            bound = x[k + 1] ** (1 - t) * x[k - 1] ** t * x[1] ** (2 * t - 1)
                            out[names[3]] = max(out[names[3]], viol(y, bound))
                    out[names[4]] = max(out[names[4]], r - x[k] ** (1.0 / k))
            L = table.limits
            for k in range(1, LADDER_K + 1):
                target = L[0] ** k
                if target > 0:
                    out[names[5]] = max(out[names[5]], abs(L[k - 1] - target) / target)
        return out

    return run


CORPUS_CASES = {
    "thm17": (_thm17_sample, THM17_SPECS),
    "thm18": (_thm18_sample, THM18_SPECS),
    "spectral-invariance": (_spectral_sample, SPECTRAL_SPECS),
    "ladder": (_ladder_sample, LADDER_SPECS),
}


def run_case(case, config=None):
    """Run one reproduction case and return its :class:`Report`."""
    config = config or ReproConfig()
    if case not in CASES:
        raise KeyError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    cfg = asdict(config)
    cfg.pop("workers")
    if case == "ex41":
        checks = case_ex41(config)
    elif case == "ex14":
        checks = case_ex14(config)
    elif case == "ex24":
        checks = case_ex24(config)
    else:
        builder, specs = CORPUS_CASES[case]
        samples = corpus(config.seed, config.corpus_size)
        per_sample = _fan_out(builder(config), samples, config.workers)
        checks = _merge(per_sample, specs)
    return Report(case, cfg, checks)


def run_all(config=None):
    return [run_case(c, config) for c in CASES]

