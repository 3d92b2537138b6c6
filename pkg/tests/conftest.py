import re
import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 50000))

_outcomes = {}
_NAME = re.compile(r"test_acceptance\.py::test_c(\d+)_")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    prev = _outcomes.get(num, (True, 0.0))
    ok = prev[0] and not report.failed
    _outcomes[num] = (ok, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    from test_acceptance import CRITERIA
    labels = {num: label for num, label, _ in CRITERIA}
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        ok, secs = _outcomes[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {labels.get(num, '?')} [{secs:.2f}s]")
