import random

import pytest

import synth
from shiftscan.text import StopwordList


@pytest.fixture(scope="session")
def stop():
    return StopwordList.default()


@pytest.fixture(scope="session")
def replication():
    return synth.replication()


@pytest.fixture(scope="session")
def replication_files(tmp_path_factory, replication):
    d = tmp_path_factory.mktemp("replication")
    wos = d / "savedrecs.txt"
    med = d / "pubmed.nbib"
    wos.write_text(replication.wos_text, encoding="utf-8")
    med.write_text(replication.medline_text, encoding="utf-8")
    return wos, med


@pytest.fixture
def rng():
    return random.Random(20141118)


# -- acceptance summary -------------------------------------------------------

_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, name): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    number, name = marker.args
    if rep.when == "call" or number not in _criteria:
        detail = dict(item.user_properties).get("detail", "")
        _criteria[number] = (name, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        name, status, detail = _criteria[number]
        line = f"criterion {number} {status}: {name}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)
