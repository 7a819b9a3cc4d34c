import hypothesis
import numpy as np
import pytest

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _acceptance.append((marker[0], marker[1], report.outcome))


@pytest.fixture(autouse=True)
def _tag_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        request.node.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    grouped = {}
    for number, text, outcome in _acceptance:
        grouped.setdefault((number, text), []).append(outcome)
    for (number, text), outcomes in sorted(grouped.items()):
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        cases = f" ({len(outcomes)} cases)" if len(outcomes) > 1 else ""
        terminalreporter.write_line(f"[{status}] AC{number}: {text}{cases}")
