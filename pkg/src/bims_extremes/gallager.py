"""Gallager's F(rho) family and the quantities derived from it.

All logarithms are base 2. Inputs are equiprobable throughout, which is the
E0-maximizing distribution for binary-input symmetric channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import capacity, decompose, info_density_distribution
from .extremes import LN2, check_rho, f_bsc_eps

FD_STEP_2 = 1e-3
FD_STEP_3 = 1e-2


def f_rho(ch, rho):
    """``sum_y (sum_x P(y|x)**(1/(1+rho)) / 2)**(1+rho)``, summed in the log domain."""
    check_rho(rho)
    s = 1.0 / (1.0 + rho)
    with np.errstate(divide="ignore"):
        logp = np.log(ch.rows)
    inner = np.logaddexp(s * logp[0], s * logp[1]) - LN2
    return float(np.exp((1.0 + rho) * inner).sum())


def f_rho_decomposed(ch, rho):
    """F(rho) as the subchannel-weighted average of BSC values."""
    check_rho(rho)
    d = decompose(ch)
    return float(np.dot(d.weights, f_bsc_eps(rho, d.crossovers)))


def e0(ch, rho):
    return -math.log2(f_rho(ch, rho))


def f_rho_s(ch, rho, s):
    """``E[(E[P(Y|X')**s | Y] / P(Y|X)**s)**rho]`` with X' independent of (X, Y).

    Terms with ``P(y|x) = 0`` carry zero mass and are skipped.
    """
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    rows = ch.rows
    live = rows > 0
    with np.errstate(divide="ignore"):
        logp = np.log(rows)
    # 0**s counts as 0, including s = 0
    slogp = np.where(live, s * np.where(live, logp, 0.0), -np.inf)
    log_mix = np.logaddexp(slogp[0], slogp[1]) - LN2
    ys = np.nonzero(live)
    lp = logp[ys]
    log_terms = lp - LN2 + rho * (log_mix[ys[1]] - s * lp)
    return float(np.exp(log_terms).sum())


def e0_s(ch, rho, s):
    return -math.log2(f_rho_s(ch, rho, s))


def bhattacharyya(ch):
    """``sum_y sqrt(P(y|x0) P(y|x1))``; equals ``2 F(1) - 1``."""
    return float(np.sqrt(ch.rows[0] * ch.rows[1]).sum())


def cutoff_rate(ch):
    return e0(ch, 1.0)


def e0_derivative(ch, rho, levels=4):
    """dE0/drho by Richardson-extrapolated central differences."""
    check_rho(rho)
    step = min(1e-2, (1.0 + rho) / 4)
    table = []
    for k in range(levels):
        hk = step / 2**k
        row = [(e0(ch, rho + hk) - e0(ch, rho - hk)) / (2 * hk)]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (4**j - 1))
        table.append(row)
    return table[-1][-1]


def _second_diff(fn, step):
    return (fn(step) - 2 * fn(0.0) + fn(-step)) / step**2


def _third_diff(fn, step):
    return (fn(2 * step) - 2 * fn(step) + 2 * fn(-step) - fn(-2 * step)) / (2 * step**3)


def e0_second_derivative_at_zero(ch, s=None, step=FD_STEP_2):
    """Second central difference of E0 at rho = 0, in bits.

    ``s=None`` uses E0(rho) itself (s = 1/(1+rho)); a number fixes s.
    """
    fn = (lambda r: e0(ch, r)) if s is None else (lambda r: e0_s(ch, r, s))
    return _second_diff(fn, step)


def e0_third_derivative_at_zero(ch, step=FD_STEP_3):
    """Third central difference of E0(rho, s=1) at rho = 0, in bits."""
    return _third_diff(lambda r: e0_s(ch, r, 1.0), step)


def _moments(ch):
    dist = info_density_distribution(ch)
    v = np.array([d.value for d in dist])
    w = np.array([d.probability for d in dist])
    return v, w, float(np.dot(w, v))


def dispersion(ch):
    """Variance of the information density, in bits squared."""
    v, w, mean = _moments(ch)
    return float(np.dot(w, (v - mean) ** 2))


def dispersion_fd(ch, step=FD_STEP_2):
    """Dispersion from the curvature of E0(rho, 1) at 0.

    E0 in bits has second derivative ``-ln 2 * Var[i]`` with ``i`` in bits.
    """
    return -e0_second_derivative_at_zero(ch, s=1.0, step=step) / LN2


def central_abs_moment(ch, k):
    """``E|i(X;Y) - I(X;Y)|**k`` in bits**k."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    v, w, mean = _moments(ch)
    return float(np.dot(w, np.abs(v - mean) ** k))


def moment_bound(k, n_inputs=2):
    """Upper bound on the k-th absolute central moment of the information density."""
    return (2 * math.log2(n_inputs) + (k / LN2) * (1 + n_inputs ** (1 / k))) ** k


THIRD_DERIVATIVE_BOUND = LN2**2 * moment_bound(3)


@dataclass(frozen=True)
class GallagerReport:
    capacity: float
    f1: float
    e0_at: list = field(default_factory=list)
    z: float = 0.0
    r0: float = 0.0
    dispersion: float = 0.0

    def to_dict(self):
        return {
            "capacity": self.capacity,
            "f1": self.f1,
            "e0": [{"rho": r, "e0": v} for r, v in self.e0_at],
            "z": self.z,
            "r0": self.r0,
            "dispersion": self.dispersion,
        }


def report(ch, rhos=(0.5, 1.0, 2.0)):
    f1 = f_rho(ch, 1.0)
    return GallagerReport(
        capacity=capacity(ch),
        f1=f1,
        e0_at=[(float(r), e0(ch, r)) for r in rhos],
        z=2 * f1 - 1,
        r0=-math.log2(f1),
        dispersion=dispersion(ch),
    )
