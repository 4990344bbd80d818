import pytest

import qcost.optimizer as opt


@pytest.fixture
def broken_merge(monkeypatch):
    """Make the merge pass silently drop the last gate; memoised costs are
    flushed on both sides so the fault cannot leak into other tests."""
    opt._merged_cost.cache_clear()
    opt._merged.cache_clear()
    monkeypatch.setattr(opt, "_merge", lambda gates, window: (gates[:-1], 1))
    yield
    monkeypatch.undo()
    opt._merged_cost.cache_clear()
    opt._merged.cache_clear()


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "VERDICTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
