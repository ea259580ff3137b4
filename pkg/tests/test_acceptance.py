"""Acceptance gate: one test per criterion, summarized as PASS/FAIL lines at
the end of the pytest run (see ``conftest.py``)."""

import json
import math
import time

import numpy as np
import pytest

from spherical_aluthge.cli import main
from spherical_aluthge.koszul import boundary_matrices
from spherical_aluthge.models import corpus, ex41_matrix
from spherical_aluthge.polar import aluthge
from spherical_aluthge.radius import radius_aluthge, radius_elementary, radius_joint_eig, radius_power
from spherical_aluthge.reproduce import ReproConfig, run_case
from spherical_aluthge.tuples import tuple_two_norm, validate_commuting

SEED = 7
SIZE = 50
T_VALUES = (0.25, 0.5, 0.75)


@pytest.fixture(scope="module")
def samples():
    return corpus(SEED, SIZE)


@pytest.fixture(scope="module")
def spectral_report():
    start = time.perf_counter()
    rep = run_case("spectral-invariance", ReproConfig(seed=SEED, corpus_size=SIZE))
    return rep, time.perf_counter() - start


def _failed(rep, names=None):
    return [c for c in rep.checks if not c.passed and (names is None or c.name in names)]


@pytest.mark.criterion(1, "worked 2x2 example: Duggal norms stay 3, period two, r = sqrt(3)")
def test_criterion_1_duggal_counterexample():
    start = time.perf_counter()
    T = ex41_matrix(2).tuple
    current, norms = T, []
    for _ in range(20):
        current = aluthge(current, 1.0)
        norms.append(tuple_two_norm(current))
        if len(norms) == 2:
            assert np.abs(current[0] - T[0]).max() <= 1e-12
    assert max(abs(x - 3.0) for x in norms) <= 1e-10
    r = radius_joint_eig(T)
    assert abs(r - math.sqrt(3)) <= 1e-10
    assert norms[-1] - r > 1.0
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "Aluthge limit within 1e-3 of r on the corpus, sandwich at slack 1e-8")
def test_criterion_2_aluthge_limit_and_sandwich(samples):
    start = time.perf_counter()
    worst_limit = worst_sandwich = 0.0
    for s in samples:
        r = radius_joint_eig(s.tuple)
        for t in T_VALUES:
            est = radius_aluthge(s.tuple, t, max_iter=500, stop_tol=1e-9)
            tr = est.trace
            norms = np.concatenate([[tr.initial_norm], tr.norms])
            worst_sandwich = max(
                worst_sandwich,
                float(np.max(np.diff(norms), initial=0.0)),
                float(r - norms.min()),
            )
            worst_limit = max(worst_limit, abs(est.value - r))
    elapsed = time.perf_counter() - start
    print(f"aluthge error {worst_limit:.2e}, sandwich violation {worst_sandwich:.2e}, {elapsed:.1f}s")
    assert worst_limit <= 1e-3
    assert worst_sandwich <= 1e-8
    assert elapsed < 60


@pytest.mark.criterion(3, "spectral invariance: Hausdorff 1e-6, identical flags, right/delta sandwiches")
def test_criterion_3_spectral_invariance(spectral_report):
    rep, elapsed = spectral_report
    names = {
        "Taylor spectrum preserved",
        "point spectrum flags",
        "left spectrum flags",
        "Harte spectrum flags",
        "Taylor spectrum flags",
        "pi_k spectrum flags",
        "right spectrum sandwich",
        "delta_k spectrum sandwich",
    }
    assert {c.name for c in rep.checks} >= names
    assert not _failed(rep, names)
    assert elapsed < 60


@pytest.mark.criterion(4, "Koszul soundness: D.D = 0, Euler 0, d=2 complex, homology equality")
def test_criterion_4_koszul_soundness(spectral_report):
    rep, _ = spectral_report
    assert not _failed(rep, {"boundary squares to zero", "Euler characteristic", "homology dimensions"})
    rng = np.random.default_rng(SEED)
    A = rng.normal(size=(4, 4))
    T = validate_commuting([A, A @ A - 2 * A])
    D0, D1 = boundary_matrices(T)
    assert np.array_equal(D0, np.vstack([T[0], T[1]]))
    assert np.array_equal(D1, np.hstack([-T[1], T[0]]))


@pytest.mark.criterion(5, "power formula within 1e-3, elementary operator within 1e-6, sqrt(3) at k=2")
def test_criterion_5_estimator_cross_validation(samples):
    worst_power = worst_elem = 0.0
    for s in samples:
        r = radius_joint_eig(s.tuple)
        worst_power = max(worst_power, abs(radius_power(s.tuple, k_max=40).value - r))
        worst_elem = max(worst_elem, abs(radius_elementary(s.tuple) - r))
    print(f"power error {worst_power:.2e}, elementary error {worst_elem:.2e}")
    assert worst_power <= 1e-3
    assert worst_elem <= 1e-6
    assert abs(radius_power(ex41_matrix(2).tuple, k_max=2).value - math.sqrt(3)) <= 1e-12


@pytest.mark.criterion(6, "shift examples match closed forms within 1e-12")
def test_criterion_6_structural_examples():
    for case in ("ex14", "ex24"):
        rep = run_case(case)
        assert not _failed(rep), case


@pytest.mark.criterion(7, "inequality ladder on the corpus, limits are powers within 1e-3")
def test_criterion_7_inequality_ladder():
    rep = run_case("ladder", ReproConfig(seed=SEED, corpus_size=SIZE))
    for c in rep.checks:
        print(f"{c.name}: {c.residual:.2e} <= {c.tolerance:.0e}")
    assert not _failed(rep)


@pytest.mark.criterion(8, "reproduce output byte-identical across runs and worker counts")
def test_criterion_8_determinism(tmp_path):
    outputs = []
    for i, workers in enumerate((1, 4, 1)):
        path = tmp_path / f"run{i}.json"
        code = main(
            ["reproduce", "all", "--seed", str(SEED), "--corpus-size", "3", "--workers", str(workers), "--out", str(path)]
        )
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    assert len(json.loads(outputs[0])["reports"]) == 7
