"""Collects the acceptance outcomes and prints one line per criterion at the end of the run."""

import pytest

_results = {}


@pytest.fixture
def note(request):
    """Attach a short measurement string to the current test's acceptance line."""

    def add(text):
        request.node.user_properties.append(("detail", text))

    return add


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        detail = "; ".join(v for k, v in report.user_properties if k == "detail")
        prev = _results.get(name)
        if prev is None or prev[0] == "PASS":
            _results[name] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=lambda n: int(n.split("_")[2])):
        status, detail = _results[name]
        label = name.replace("test_criterion_", "").replace("_", " ", 1).replace("_", " ")
        terminalreporter.write_line(f"[{status}] {label}" + (f"  ({detail})" if detail else ""))
