"""Per-criterion reporting for the acceptance suite.

Tests marked ``acceptance(criterion, limit)`` are grouped by criterion. The
terminal summary prints one PASS/FAIL/SKIP line per criterion, and a
criterion whose tests together exceed ``limit`` seconds fails the session.
"""

from collections import OrderedDict

import pytest

_results: "OrderedDict[str, dict]" = OrderedDict()


def _entry(item):
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return None
    cid = str(mark.args[0])
    limit = mark.kwargs.get("limit")
    return _results.setdefault(cid, {"outcomes": [], "seconds": 0.0, "limit": limit,
                                     "failed": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    entry = _entry(item)
    if entry is None:
        return
    entry["seconds"] += report.duration
    if report.when == "call" or report.outcome != "passed":
        entry["outcomes"].append(report.outcome)
        if report.outcome == "failed":
            entry["failed"].append(item.name)


def _verdict(entry):
    if "failed" in entry["outcomes"]:
        return "FAIL", "failed: " + ", ".join(entry["failed"])
    if entry["limit"] is not None and entry["seconds"] > entry["limit"]:
        return "FAIL", f"over runtime budget of {entry['limit']} s"
    if entry["outcomes"] and all(o == "skipped" for o in entry["outcomes"]):
        return "SKIP", ""
    return "PASS", ""


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid, entry in sorted(_results.items(), key=lambda kv: int(kv[0])):
        verdict, note = _verdict(entry)
        budget = f" / {entry['limit']} s" if entry["limit"] else ""
        line = f"criterion {cid:>2}: {verdict}  ({entry['seconds']:.1f} s{budget})"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))


def pytest_sessionfinish(session, exitstatus):
    over = [cid for cid, e in _results.items()
            if e["limit"] is not None and e["seconds"] > e["limit"]
            and "failed" not in e["outcomes"]]
    if over and session.exitstatus == 0:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED
