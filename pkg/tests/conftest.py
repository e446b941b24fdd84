import pytest

RESULTS: dict[int, tuple[str, bool, float, float]] = {}


def record(number: int, title: str, ok: bool, seconds: float, budget: float) -> None:
    RESULTS[number] = (title, ok, seconds, budget)
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title} ({seconds:.2f}s, budget {budget:g}s)"
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, seconds, budget = RESULTS[number]
        terminalreporter.write_line(
            f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title} ({seconds:.2f}s, budget {budget:g}s)"
        )


@pytest.fixture
def criterion(request):
    """Yields a function ``done(number, title, budget)`` that the test calls
    after its checks; failures inside the test are recorded as FAIL."""
    import time

    state = {"start": time.perf_counter(), "meta": None}

    def begin(number, title, budget):
        state["meta"] = (number, title, budget)
        state["start"] = time.perf_counter()

    yield begin
    if state["meta"] is not None:
        number, title, budget = state["meta"]
        elapsed = time.perf_counter() - state["start"]
        failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
        record(number, title, not failed and elapsed <= budget, elapsed, budget)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)
