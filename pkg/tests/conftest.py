import pytest

from dca.wbc import bundled_dataset_path, derive_events, parse_dataset


@pytest.fixture(scope="session")
def wbc_path():
    return bundled_dataset_path()


@pytest.fixture(scope="session")
def wbc_records(wbc_path):
    return parse_dataset(wbc_path)


@pytest.fixture(scope="session")
def wbc_events(wbc_records):
    return derive_events(wbc_records)


CRITERIA: dict[int, tuple[bool, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, title, detail = CRITERIA[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
