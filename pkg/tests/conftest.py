"""Independent oracles shared by the test modules.

Nothing here calls into the package's numeric routines: these are the
closed forms and brute-force evaluations the library is checked against.
"""
import math

import pytest
from hypothesis import strategies as st
from scipy.optimize import brentq


def h_oracle(p):
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def h_inv_oracle(x):
    if x == 0:
        return 0.0
    if x == 1:
        return 0.5
    return brentq(lambda p: h_oracle(p) - x, 1e-300, 0.5, xtol=1e-300, rtol=8.9e-16)


def f_from_matrix(rows, rho):
    """Double sum over outputs and inputs, plain Python."""
    s = 1.0 / (1.0 + rho)
    total = 0.0
    for y in range(len(rows[0])):
        inner = sum(0.5 * rows[x][y] ** s for x in range(2) if rows[x][y] > 0)
        total += inner ** (1.0 + rho)
    return total


def bsc_f1(eps):
    return (1.0 + 2.0 * math.sqrt(eps * (1.0 - eps))) / 2.0


def bsc_dispersion(eps):
    return eps * (1 - eps) * math.log2((1 - eps) / eps) ** 2


EPS_BSC_HALF_CAP = h_inv_oracle(0.5)  # 0.110028, crossover of the capacity-1/2 BSC


@pytest.fixture(scope="session")
def eps_half():
    return EPS_BSC_HALF_CAP


mixture_components = st.lists(
    st.tuples(st.floats(0.01, 1.0), st.floats(0.0, 0.5)), min_size=1, max_size=6
).map(lambda cs: [(w / sum(w for w, _ in cs), e) for w, e in cs])


def e0_grid(rows, rhos):
    """E0 on a whole rho grid at once; brute-force oracle for the optimizers."""
    import numpy as np
    from scipy.special import logsumexp

    rows = np.asarray(rows, dtype=float)
    rhos = np.asarray(rhos, dtype=float)
    s = 1.0 / (1.0 + rhos)
    with np.errstate(divide="ignore"):
        logp = np.log(rows)[:, :, None]  # (x, y, rho)
    inner = logsumexp(logp * s, axis=0, b=0.5)  # log(1/2 sum_x P**s), per (y, rho)
    logF = logsumexp(inner * (1.0 + rhos), axis=0)
    return -logF / np.log(2.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
