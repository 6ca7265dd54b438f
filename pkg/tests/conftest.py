import random
import time

import pytest
from hypothesis import HealthCheck, settings

from spinlf.quaternion import QuatAlgebra

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def hamilton():
    return QuatAlgebra.hamilton()


@pytest.fixture
def disc7():
    return QuatAlgebra.disc7()


@pytest.fixture
def rng():
    return random.Random(20240611)


# --- acceptance reporting ------------------------------------------------------------------------

_LINES = pytest.StashKey[list]()


class CriterionUnmet(AssertionError):
    """Raised when an acceptance criterion does not hold as stated."""


class _Criterion:
    def __init__(self, config, n, limit):
        self.config, self.n, self.limit = config, n, limit
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        ok = exc_type is None and (self.limit is None or elapsed <= self.limit)
        limit = "" if self.limit is None else f" limit {self.limit:g}s"
        detail = "; ".join(self.notes)
        if exc_type is not None:
            msg = (str(exc).splitlines() or [exc_type.__name__])[0][:200]
            detail = f"{detail}; {msg}" if detail else msg
        elif not ok:
            detail = f"took {elapsed:.2f}s"
        line = f"CRITERION {self.n:>2}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s{limit}){' - ' + detail if detail else ''}"
        print(line)
        self.config.stash.setdefault(_LINES, []).append(line)
        if exc_type is None and not ok:
            raise CriterionUnmet(line)
        return False


@pytest.fixture
def criterion(request):
    def make(n, limit=None):
        return _Criterion(request.config, n, limit)

    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
