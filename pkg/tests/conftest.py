import numpy as np
import pytest

from entropic.linalg import ginibre_density


def bell_matrix():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[0, 3] = rho[3, 0] = rho[3, 3] = 0.5
    return rho


def padded_mixed_qutrit():
    return np.diag([1 / 3, 1 / 3, 1 / 3, 0]).astype(complex)


def random_states(dim, count, seed, rank=None):
    rank = dim if rank is None else rank
    return [ginibre_density(dim, rank, seed * 100003 + i) for i in range(count)]


@pytest.fixture
def bell():
    return bell_matrix()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        prev = _ACCEPTANCE.get(number)
        if prev is None or prev[1] == "PASS":
            _ACCEPTANCE[number] = (title, status, round(rep.duration, 2))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, dur = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({dur}s)")
