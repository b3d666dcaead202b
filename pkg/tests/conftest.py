import numpy as np
import pytest

from firmcycles import ModelParams, ParetoEntrantDist


@pytest.fixture
def pareto13():
    return ParetoEntrantDist(1.0, 3.0)


@pytest.fixture
def s1():
    """PE scenario: sigma=2, f_c=1, f_e=1/16, I=1."""
    return ModelParams(sigma=2.0, q=1.0, f_c=1.0, f_e=1 / 16)


@pytest.fixture
def s2(s1):
    """GE counterpart of s1 with L=1."""
    return s1


@pytest.fixture
def q1():
    return ModelParams(sigma=2.0, q=1.0, f_c=1.0, f_e=1 / 16, delta=0.1, beta_firm=0.9, beta_planner=0.9)


def random_case(rng):
    """(params, dist, f_high) with an interior entrant cutoff."""
    sigma = rng.uniform(1.5, 6.0)
    k = (sigma - 1.0) * rng.uniform(1.2, 4.0)
    ratio = rng.uniform(0.01, 0.5) * (sigma - 1.0) / (k - sigma + 1.0)
    f_c = rng.uniform(0.5, 2.0)
    params = ModelParams(sigma=sigma, q=rng.uniform(0.0, 2.0), f_c=f_c, f_e=ratio * f_c,
                         market_size_I=rng.uniform(0.5, 2.0), labor_endowment_L=rng.uniform(0.5, 2.0))
    return params, ParetoEntrantDist(rng.uniform(0.5, 2.0), k), f_c * rng.uniform(1.1, 20.0)


def battery(n=30, seed=20240611):
    rng = np.random.default_rng(seed)
    return [random_case(rng) for _ in range(n)]


# acceptance log: criterion number -> list of (ok, label, detail)
ACCEPTANCE: dict[int, list[tuple[bool, str, str]]] = {}
ACCEPTANCE_TITLES: dict[int, str] = {}


def record(criterion: int, label: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), label, detail))
    print(f"{'PASS' if ok else 'FAIL'} [{criterion}] {label} {detail}".rstrip())
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        passed = sum(ok for ok, _, _ in checks)
        verdict = "PASS" if passed == len(checks) else "FAIL"
        tr.write_line(f"{verdict} criterion {crit}: {ACCEPTANCE_TITLES.get(crit, '')} "
                      f"({passed}/{len(checks)} checks)")
        for ok, label, detail in checks:
            tr.write_line(f"    {'ok  ' if ok else 'FAIL'} {label}" + (f"  {detail}" if detail else ""))
