import pytest

from gpdef import corpus

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n = mark.args[0]
    if rep.when == "setup" and rep.passed:
        return
    detail = ""
    if rep.failed:
        crash = getattr(rep.longrepr, "reprcrash", None)
        detail = crash.message.splitlines()[0] if crash is not None else str(rep.longrepr).splitlines()[-1]
    _CRITERIA[n] = ("PASS" if rep.passed else "FAIL", item.name, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, name, detail = _CRITERIA[n]
        line = f"criterion {n:2d}: {status}  {name}"
        if detail:
            line += f"  ({detail[:160]})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def six_vertex():
    return corpus.algebra("six-vertex")


@pytest.fixture(scope="session")
def nakayama():
    return corpus.algebra("nakayama")


@pytest.fixture(scope="session")
def dual_numbers():
    return corpus.algebra("dual-numbers")


@pytest.fixture(scope="session")
def gp_modules():
    return corpus.gp_modules()
