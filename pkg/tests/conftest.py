import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbitfocal.chevalley import build_chevalley  # noqa: E402
from orbitfocal.hwmodule import make_context  # noqa: E402
from orbitfocal.rootsys import build_root_system, weight_from_fundamental  # noqa: E402

ALL_TYPES = ["A1", "A2", "A3", "A4", "A7", "B2", "B3", "B4", "B8", "C3", "C4", "C8",
             "D4", "D5", "D8", "G2", "F4", "E6", "E7", "E8"]
SMALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "G2"]


@lru_cache(maxsize=None)
def rs_of(name):
    return build_root_system(name)


@lru_cache(maxsize=None)
def tbl_of(name):
    return build_chevalley(rs_of(name))


def ctx_of(name, coeffs):
    rs = rs_of(name)
    return make_context(rs, weight_from_fundamental(rs, coeffs), tbl_of(name))


@pytest.fixture
def rs():
    return rs_of


# acceptance results, filled by test_acceptance and printed after the run
ACCEPTANCE = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
