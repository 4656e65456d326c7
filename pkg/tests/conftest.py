"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_results: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): test belongs to a named acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _results.setdefault(mark.args[0], [])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (rep.when == "call" or rep.failed or rep.skipped):
        _results[mark.args[0]].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not any(_results.values()):
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in _results.items():
        if not outcomes:
            continue
        if "failed" in outcomes:
            status = "FAIL"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "SKIP"
        terminalreporter.write_line(f"{status}  {name}  ({outcomes.count('passed')}/{len(outcomes)} checks)")
