import pytest

from persson_moduli import polytope

ACCEPTANCE = []


def record(number, title, ok):
    ACCEPTANCE.append((number, title, ok))
    return ok


@pytest.fixture(scope="session")
def tilings_3_8():
    return polytope.enumerate_tilings(3, 8, "1/2")


@pytest.fixture(scope="session")
def tilings_3_7():
    return polytope.enumerate_tilings(3, 7, "1/2")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}")
