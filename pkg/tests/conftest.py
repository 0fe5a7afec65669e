import numpy as np
import pytest
from hypothesis import settings, strategies as st

from rangekit.core import canonicalize

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

F2 = [0.0, 5.0]
F3 = [0.0, 1.0, 3.0]
F4 = [0.0, 1.0, 2.0, 3.0]
SQ = [[0, 0], [1, 0], [1, 1], [0, 1]]
HILL = [[0, 0], [1, 0], [1, 3], [2, 3], [2, 0], [3, 0]]


def line(xs, alpha=1.0):
    return canonicalize(np.asarray(xs, float), 1, alpha)


def plane(pts, alpha=1.0):
    return canonicalize(np.asarray(pts, float), 2, alpha)


@pytest.fixture
def f3():
    return line(F3)


@pytest.fixture
def sq():
    return plane(SQ)


# distinct coordinates on a coarse grid keep hypothesis away from ties the
# float tolerance would have to arbitrate
def xs_strategy(min_size=2, max_size=7):
    return st.lists(st.integers(0, 200), min_size=min_size, max_size=max_size, unique=True).map(
        lambda v: sorted(float(x) / 10 for x in v))


def pts_strategy(min_size=2, max_size=6):
    return st.lists(st.tuples(st.integers(0, 100), st.integers(0, 100)),
                    min_size=min_size, max_size=max_size, unique=True).map(
        lambda v: np.array(v, float) / 10)


# acceptance results, printed once at the end of the run
REPORT = {}


def record(criterion, ok, detail):
    REPORT[criterion] = (bool(ok), detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(REPORT):
        ok, detail = REPORT[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
