import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""

    class Recorder:
        def __init__(self):
            self.label = None

        def __call__(self, label):
            self.label = label
            return self

    rec = Recorder()
    yield rec
    rep = getattr(request.node, "rep_call", None)
    if rec.label is not None and rep is not None:
        ACCEPTANCE_RESULTS.append((rec.label, rep.passed))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line("%s  %s" % ("PASS" if ok else "FAIL", label))
