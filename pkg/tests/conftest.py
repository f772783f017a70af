import pytest

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def brute_count(a: int, b: int, n: int) -> int:
    """Double enumeration of lattice points (l, m) >= 0 with al + bm <= n."""
    if n < 0:
        return 0
    return sum(1 for l in range(n // a + 1) for m in range(n // b + 1) if a * l + b * m <= n)


@pytest.fixture
def oracle():
    return brute_count


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
