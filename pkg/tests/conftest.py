import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_ac" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.rsplit("::", 1)[1].split("[", 1)[0]
        _ACCEPTANCE.setdefault(name, []).append("FAIL" if report.failed else ("SKIP" if report.skipped else "PASS"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcomes = _ACCEPTANCE[name]
        status = "FAIL" if "FAIL" in outcomes else ("PASS" if "PASS" in outcomes else "SKIP")
        number, _, title = name[len("test_ac") :].partition("_")
        terminalreporter.write_line(f"AC{int(number):<3d}{status:<5s}{title.replace('_', ' ')}  (exact)")
