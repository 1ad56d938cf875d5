from collections import defaultdict

import pytest

CRITERIA = {
    1: "spectrum equivalence",
    2: "mixing-angle anchors",
    3: "crossing line",
    4: "Berry phase",
    5: "mixed-state phase",
    6: "fidelity susceptibility",
    7: "partial-state susceptibilities",
    8: "crossing-profile shape",
    9: "end-to-end",
}

_owner: dict[str, int] = {}
_results: dict[int, dict[str, bool]] = defaultdict(dict)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _owner[item.nodeid] = mark.args[0]


@pytest.hookimpl
def pytest_runtest_logreport(report):
    n = _owner.get(report.nodeid)
    if n is None:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed" and _results[n].get(name, True)
        _results[n][name] = ok


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        clauses = _results.get(n)
        if not clauses:
            continue
        failed = [c for c, ok in clauses.items() if not ok]
        verdict = "FAIL" if failed else "PASS"
        extra = f"  ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n} {verdict}: {title}{extra}")
