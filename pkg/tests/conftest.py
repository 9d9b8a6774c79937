import numpy as np
import pytest
from hypothesis import settings

# the first Jacobi call pays for numba compilation; keep hypothesis deadlines out of it
settings.register_profile("opspectra", deadline=None, max_examples=40)
settings.load_profile("opspectra")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: call with (number, title, passed, runtime, limit, detail)."""
    def record(number, title, passed, runtime, limit, detail=""):
        ok = bool(passed) and runtime < limit
        ACCEPTANCE[number] = (title, ok, runtime, limit, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, runtime, limit, detail = ACCEPTANCE[number]
        tr.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {runtime:6.2f}s / {limit:g}s  {title}"
                      + (f"  [{detail}]" if detail else ""))
