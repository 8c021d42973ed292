import os
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# (criterion id, verdict, detail) lines collected by the acceptance suite
VERDICTS: list[tuple[str, str, str]] = []


def record(cid: str, ok: bool, detail: str = "") -> None:
    VERDICTS.append((cid, "PASS" if ok else "FAIL", detail))
    print(f"[{'PASS' if ok else 'FAIL'}] {cid} {detail}")


def record_skip(cid: str, reason: str) -> None:
    VERDICTS.append((cid, "SKIP", reason))


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, verdict, detail in sorted(VERDICTS, key=lambda v: int(v[0].lstrip("C"))):
        terminalreporter.write_line(f"{verdict:4}  {cid:4} {detail}")


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def datasets_config():
    path = os.environ.get("CRC_DATASETS")
    if not path:
        return None
    return Path(path)
