import time
from contextlib import contextmanager

import numpy as np
import pytest

from compnet import kernels

ACCEPTANCE = []


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once so timed checks measure run time only."""
    codes = np.array([0, 1, 1, 0], dtype=np.int64)
    kernels.entropy_from_counts(np.array([1.0, 2.0]))
    kernels.symbol_counts(codes, 2)
    kernels.sliding_entropy_codes(codes, 2, 2)
    kernels.joint_counts(codes, codes, 2, 2)


@contextmanager
def criterion(name: str, limit_s: float):
    """Time a block, record PASS/FAIL for the terminal summary, re-raise failures."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE.append((name, False, time.perf_counter() - start, limit_s, f"{type(exc).__name__}: {exc}"))
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit_s
    ACCEPTANCE.append((name, ok, elapsed, limit_s, "" if ok else "runtime limit exceeded"))
    assert ok, f"{name}: {elapsed:.2f} s exceeds {limit_s} s"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, elapsed, limit, note in ACCEPTANCE:
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {name}  ({elapsed:.2f} s, limit {limit} s)"
        if note:
            line += f"  {note}"
        terminalreporter.write_line(line)
