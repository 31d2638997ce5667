import math

import numpy as np
import pytest

from pwlattice.lattice import BandParameters
from pwlattice.spectral import random_smooth_spectrum, synthesize

L = 4096
WINDOW = (-256, 256, -8, 8)


def smooth_ensemble(alpha, count, seed, window=WINDOW):
    """``count`` (f, F) pairs built from random smooth bumps inside D_alpha."""
    rng = np.random.default_rng(seed)
    band = BandParameters(alpha)
    out = []
    for _ in range(count):
        f = random_smooth_spectrum(rng, L, band)
        out.append((f, synthesize(f, window)))
    return out


@pytest.fixture(scope="session")
def ensemble_pi8():
    return smooth_ensemble(math.pi / 8, 20, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# acceptance criteria register here as (number, title, ok, detail)
ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    ACCEPTANCE[number] = (title, bool(ok), detail)
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
