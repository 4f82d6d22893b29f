import numpy as np
import pytest

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        tr.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
