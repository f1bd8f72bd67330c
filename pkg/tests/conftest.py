import pytest

# criterion number -> (passed, seconds, budget, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, secs, budget, detail = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"ACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'}  {secs:7.1f}s / {budget:g}s  {detail}")


@pytest.fixture
def record():
    def _record(k, ok, secs, budget, detail):
        ACCEPTANCE[k] = (ok, secs, budget, detail)
        print(f"ACCEPTANCE {k} {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}")
    return _record
