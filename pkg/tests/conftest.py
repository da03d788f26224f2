import pytest
from hypothesis import settings

from fsapprox import data_path, fsa, load_grammar

# reproducible property runs: the same examples on every invocation
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

# criterion number -> list of (test id, outcome); filled by the acceptance tests
ACCEPTANCE = {}


def load(name):
    return load_grammar(data_path(name))


def names(aut):
    """Relabel an automaton over Symbols to one over plain token names."""
    return fsa.relabel(aut, lambda sym: sym.name)


@pytest.fixture
def g1():
    return load("g1.cfg")


@pytest.fixture
def g2():
    return load("g2.cfg")


@pytest.fixture
def anbn():
    return load("anbn.cfg")


@pytest.fixture
def acb():
    return load("acb.cfg")


@pytest.fixture
def np_grammar():
    return load("np.cfg")


@pytest.fixture(scope="session")
def appendix():
    return load("appendix.apsg")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ACCEPTANCE.setdefault(marker, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().acceptance = mark.args[0]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by a test")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        results = ACCEPTANCE[n]
        ok = all(outcome == "passed" for _, outcome in results)
        tests = ", ".join(nodeid.split("::")[-1] for nodeid, _ in results)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({tests})")
