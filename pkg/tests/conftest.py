import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

ACCEPTANCE = range(1, 10)
_criterion_of: dict[str, int] = {}
_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _criterion_of[item.nodeid] = m.args[0]


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(n, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_of:
        return
    terminalreporter.section("acceptance criteria")
    for n in ACCEPTANCE:
        outs = _outcomes.get(n)
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"acceptance criterion {n}: {status}")
