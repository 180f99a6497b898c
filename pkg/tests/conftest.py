import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record_criterion():
    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def separated_points(rng, n, sep, rmin, rmax, real=False, max_tries=10_000):
    """n complex (or real) points with moduli in [rmin, rmax] and pairwise distance >= sep."""
    pts = []
    for _ in range(max_tries):
        if len(pts) == n:
            break
        r = rng.uniform(rmin, rmax)
        z = complex(r * rng.choice([-1, 1])) if real else r * np.exp(2j * np.pi * rng.random())
        if all(abs(z - w) >= sep for w in pts):
            pts.append(complex(z))
    if len(pts) < n:
        raise RuntimeError("could not place separated points")
    return pts
