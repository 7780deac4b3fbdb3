import re

import pytest

from jaclab.corpus import corpus_entry

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def pinchuk():
    return corpus_entry("pinchuk").load()


@pytest.fixture(scope="session")
def pinchuk_evidence(pinchuk):
    # the expensive part of the verdict (scan, degree, pair search), shared across tests
    from jaclab.verdict import gather_evidence

    return gather_evidence(pinchuk, seed=42, samples=500)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        status = "PASS" if report.outcome == "passed" else "FAIL"
        prev = _CRITERIA.get(k)
        if prev is None or prev[1] == "PASS":
            _CRITERIA[k] = (m.group(2).replace("_", " "), status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        name, status = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d} {status}: {name}")
