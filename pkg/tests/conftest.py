import math

import pytest

from rsaint.sieve import build_tables


def trial_division_primes(n):
    return [k for k in range(2, n + 1) if all(k % p for p in range(2, math.isqrt(k) + 1))]


@pytest.fixture(scope="session")
def small_tables():
    return build_tables(10**5, {4, 10})


@pytest.fixture(scope="session")
def big_tables():
    # covers x/3 for x = 10^7 (odd semiprimes) and sqrt(r x) for every r used
    return build_tables(10**7 // 3 + 1, {4, 10})


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    def report(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
