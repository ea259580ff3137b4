import pytest

from spherical_aluthge.reproduce import CASES, Check, ReproConfig, run_case, sample_points
from spherical_aluthge.koszul import joint_eigenvalues
from spherical_aluthge.models import random_commuting

SMALL = ReproConfig(corpus_size=4, t_values=(0.5,))


@pytest.mark.parametrize("case", ["ex14", "ex24", "ex41"])
def test_example_cases_pass(case):
    rep = run_case(case)
    assert rep.passed, [c for c in rep.checks if not c.passed]


@pytest.mark.parametrize("case", ["thm17", "thm18", "spectral-invariance", "ladder"])
def test_corpus_cases_pass_on_small_corpus(case):
    rep = run_case(case, SMALL)
    assert rep.checks and rep.passed, [c for c in rep.checks if not c.passed]


def test_report_ignores_worker_count():
    a = run_case("thm18", SMALL).as_dict()
    b = run_case("thm18", ReproConfig(**{**SMALL.__dict__, "workers": 3})).as_dict()
    assert a == b


def test_unknown_case():
    assert "ladder" in CASES
    with pytest.raises(KeyError):
        run_case("nope")


def test_check_pass_rule():
    assert Check("x", "y", 1e-13, 1e-12).passed
    assert not Check("x", "y", 2.0, 1.0).passed


def test_sample_points_keep_away_from_spectrum():
    T = random_commuting(1, 4, 2).tuple
    eig = joint_eigenvalues(T)
    pts = sample_points(T, eig, 10, seed=3)
    assert pts[: len(eig)] == eig and len(pts) == len(eig) + 10
    assert pts == sample_points(T, eig, 10, seed=3)
