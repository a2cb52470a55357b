import pytest

_ACCEPTANCE: list = []


@pytest.fixture
def verdict():
    """Record an acceptance-criterion outcome and assert it."""

    def record(name: str, ok: bool) -> None:
        _ACCEPTANCE.append((name, bool(ok)))
        assert ok, f"acceptance criterion failed: {name}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}: {name}")
