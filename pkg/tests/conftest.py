import numpy as np
import pytest

from mogfit import distribution as dist

CRITERIA = {
    "test_c01_closed_form_kl_oracle":
        "closed-form Gaussian KL oracle (50 pairs, 1e-6, <1s)",
    "test_c02_moment_matching_optimality":
        "moment-matching Gaussian optimal over 21x21 grid",
    "test_c03_fast_gap_matches_pushforward":
        "fast transform gap vs pushforward oracle (20 pairs, 1e-5)",
    "test_c04_power_transform_reference_cases":
        "reference power transforms: lognormal/uniform/exponential (<10s)",
    "test_c05_em_monotone_and_fixed_point":
        "EM traces nonincreasing + fixed-point residual <= 1e-6",
    "test_c06_parameter_recovery":
        "2-component parameter recovery (EM and fast fit, <5s)",
    "test_c07_empirical_matches_sample_em":
        "empirical spec EM == sample EM trajectory (1e-12 x 20 iters)",
    "test_c08_reference_fit_shapes":
        "D decreasing in size; uniform m=5 density error < 0.1",
    "test_c09_size_selection_claims":
        "size one for transformed references, k/n in [0.01, 0.5]",
    "test_c10_stop_rule_arithmetic":
        "stop-rule truth table + k=0 never stops",
    "test_c11_cli_service_determinism":
        "CLI/service byte-identical JSON for identical request+seed",
}

_acceptance_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name in CRITERIA:
        _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, desc in CRITERIA.items():
        if name in _acceptance_results:
            outcome = "PASS" if _acceptance_results[name] == "passed" else "FAIL"
            terminalreporter.write_line(f"[{outcome}] {desc}")


@pytest.fixture
def corpus():
    """The standard continuous test distributions."""
    return {
        "uniform": dist.uniform(0.0, 1.0),
        "exponential": dist.exponential(1.0),
        "lognormal": dist.lognormal(0.0, 1.0),
        "triangular": dist.triangular(0.0, 0.3, 1.0),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
