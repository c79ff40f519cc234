"""BEC/BSC extremal curves at fixed capacity, their inverses, and BSEC synthesis.

For a fixed capacity ``C`` every binary-input symmetric channel has ``F(rho)``
between the BEC line ``1 + (2**-rho - 1) C`` and the concave BSC curve. The
functions here evaluate those two boundaries, invert them in ``C``, map them
through monotone functions, and construct a BSEC realizing any point of the
band.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import entr

from ._search import bisect, bisect_increasing
from .errors import DomainError, FOutOfRange, Infeasible, RhoOutOfRange, RhoZero

LN2 = math.log(2.0)
RHO_MIN = -1.0 + 1e-6
FEAS_TOL = 1e-12

BEC = "BEC"
BSC = "BSC"


def check_rho(rho):
    if np.any(np.asarray(rho) <= RHO_MIN) or np.any(np.isnan(rho)):
        raise RhoOutOfRange(f"rho must exceed {RHO_MIN}, got {rho}")


def h(p):
    """Binary entropy in bits. Accepts scalars or arrays."""
    p = np.asarray(p, dtype=float)
    out = (entr(p) + entr(1.0 - p)) / LN2
    return float(out) if out.ndim == 0 else out


def h_inv(x):
    """Inverse of the binary entropy restricted to ``[0, 1/2]``, by bisection."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise DomainError(f"h_inv is defined on [0, 1], got {x}")
    p = bisect_increasing(h, x, 0.0, 0.5, iters=100)
    p = np.where(x == 0, 0.0, np.where(x == 1, 0.5, p))
    return float(p) if p.ndim == 0 else p


def _check_capacity(C):
    C = np.asarray(C, dtype=float)
    if np.any((C < 0) | (C > 1)) or np.any(np.isnan(C)):
        raise DomainError(f"capacity must lie in [0, 1], got {C}")
    return C


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def f_bec_eps(rho, eps):
    return 2.0 ** (-np.asarray(rho, dtype=float)) * (1.0 - eps) + eps


def f_bsc_eps(rho, eps):
    """F(rho) of a BSC with crossover ``eps``, evaluated in the log domain."""
    rho = np.asarray(rho, dtype=float)
    eps = np.asarray(eps, dtype=float)
    s = 1.0 / (1.0 + rho)
    with np.errstate(divide="ignore"):
        la, lb = np.log(eps), np.log1p(-eps)
    lse = np.logaddexp(s * la, s * lb)
    return _scalar(np.exp(-rho * LN2 + (1.0 + rho) * lse))


def f_bec_of_c(rho, C):
    check_rho(rho)
    C = _check_capacity(C)
    return _scalar(1.0 + np.expm1(-np.asarray(rho, dtype=float) * LN2) * C)


def f_bsc_of_c(rho, C):
    check_rho(rho)
    C = _check_capacity(C)
    return f_bsc_eps(rho, h_inv(np.clip(1.0 - C, 0.0, 1.0)))


def _range_check(F, rho, ends):
    F, lo = np.broadcast_arrays(np.asarray(F, dtype=float), np.minimum(1.0, ends))
    hi = np.maximum(1.0, ends)
    if np.any(F < lo - FEAS_TOL) or np.any(F > hi + FEAS_TOL) or np.any(np.isnan(F)):
        raise FOutOfRange(f"F={F} outside the range between 1 and 2**-rho for rho={rho}")
    return np.clip(F, lo, hi)


def _inverse_args(F, rho):
    check_rho(rho)
    rho = np.asarray(rho, dtype=float)
    if np.any(rho == 0):
        raise RhoZero("F(0) = 1 for every channel")
    F = _range_check(F, rho, 2.0**-rho)
    return F, np.broadcast_to(rho, F.shape)


def c_of_f_bec(F, rho):
    """Capacity of the BEC whose F(rho) equals ``F``."""
    F, rho = _inverse_args(F, rho)
    return _scalar(np.clip((F - 1.0) / np.expm1(-rho * LN2), 0.0, 1.0))


def c_of_f_bsc(F, rho):
    """Capacity of the BSC whose F(rho) equals ``F``.

    Bisects over the crossover probability in ``[0, 1/2]``; capacity is
    monotone in it, so this is the same search as over ``C``. Vectorized
    over ``F`` and ``rho``.
    """
    F, rho = _inverse_args(F, rho)
    # F_bsc increases with eps for rho > 0 and decreases for rho < 0
    sign = np.where(rho > 0, 1.0, -1.0)
    eps = bisect_increasing(lambda e: sign * f_bsc_eps(rho, e), sign * F, 0.0, 0.5, iters=100)
    return _scalar(1.0 - h(eps))


def is_feasible(C, F, rho, tol=FEAS_TOL):
    """True iff some BIMS channel has capacity ``C`` and ``F(rho) = F``."""
    return bool(f_bec_of_c(rho, C) - tol <= F <= f_bsc_of_c(rho, C) + tol)


@dataclass(frozen=True)
class EnvelopePair:
    lower: float
    upper: float
    lower_attained_by: str = BEC
    upper_attained_by: str = BSC

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    def contains(self, value, tol=0.0):
        return self.lower - tol <= value <= self.upper + tol

    def swapped(self):
        return EnvelopePair(self.upper, self.lower, self.upper_attained_by, self.lower_attained_by)


def envelope_f(rho, C):
    return EnvelopePair(float(f_bec_of_c(rho, C)), float(f_bsc_of_c(rho, C)), BEC, BSC)


@dataclass(frozen=True)
class MonotoneMap:
    """A continuous strictly monotone ``g`` applied to ``F(rho)``."""

    fn: Callable[[np.ndarray], np.ndarray]
    direction: str
    name: str = "g"

    def __post_init__(self):
        if self.direction not in ("increasing", "decreasing"):
            raise ValueError(f"direction must be increasing or decreasing, got {self.direction!r}")
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.diff(self.fn(np.linspace(0.0, 2.0, 1000)))
        d = d[~np.isnan(d)]
        ok = np.all(d >= 0) if self.direction == "increasing" else np.all(d <= 0)
        if not ok:
            raise ValueError(f"map {self.name} is not {self.direction} on [0, 2]")

    def __call__(self, x):
        with np.errstate(divide="ignore"):
            return self.fn(x)


IDENTITY = MonotoneMap(lambda x: np.asarray(x, dtype=float), "increasing", "identity")
NEG_LOG2 = MonotoneMap(lambda x: -np.log2(x), "decreasing", "e0")
BHATTACHARYYA = MonotoneMap(lambda x: 2.0 * np.asarray(x, dtype=float) - 1.0, "increasing", "z")


def envelope_mapped(gmap, rho, C):
    env = envelope_f(rho, C)
    mapped = EnvelopePair(
        float(gmap(env.lower)), float(gmap(env.upper)), env.lower_attained_by, env.upper_attained_by
    ) if gmap.direction == "increasing" else EnvelopePair(
        float(gmap(env.upper)), float(gmap(env.lower)), env.upper_attained_by, env.lower_attained_by
    )
    return mapped


def c_envelope_at_z(Z):
    """Capacity range of BIMS channels whose Bhattacharyya parameter is ``Z``."""
    if not 0.0 <= Z <= 1.0:
        raise DomainError(f"Z must lie in [0, 1], got {Z}")
    eps = 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - Z * Z)))
    upper = 1.0 - h(eps)
    return EnvelopePair(1.0 - Z, upper, BEC, BSC)


@dataclass(frozen=True)
class BsecParams:
    eps_s: float
    eps_e: float

    def __post_init__(self):
        if self.eps_s < 0 or not 0 <= self.eps_e <= 1 or self.eps_s > (1 - self.eps_e) / 2 + 1e-15:
            raise ValueError(f"invalid BSEC parameters ({self.eps_s}, {self.eps_e})")


def bsec_capacity(eps_s, eps_e):
    """Capacity of a BSEC: the non-erased fraction times a BSC capacity.

    The conditional crossover of the non-erased outputs is
    ``eps_s / (1 - eps_e)``.
    """
    if eps_e >= 1.0:
        return 0.0
    return (1.0 - eps_e) * (1.0 - h(eps_s / (1.0 - eps_e)))


def f_bsec(rho, eps_s, eps_e):
    rho = np.asarray(rho, dtype=float)
    s = 1.0 / (1.0 + rho)
    with np.errstate(divide="ignore"):
        lse = np.logaddexp(s * np.log(eps_s), s * np.log(np.maximum(1.0 - eps_s - eps_e, 0.0)))
    return _scalar(np.exp(-rho * LN2 + (1.0 + rho) * lse) + eps_e)


def _bsec_eps_s(C, eps_e):
    """Crossover giving a BSEC of erasure ``eps_e`` the capacity ``C``."""
    eps_e = np.asarray(eps_e, dtype=float)
    keep = 1.0 - eps_e
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(keep > 0, 1.0 - C / keep, 1.0)
    return keep * h_inv(np.clip(x, 0.0, 1.0))


def synthesize_bsec(C, F_target, rho, n_scan=1000, ftol=1e-12):
    """Find a BSEC with capacity ``C`` and ``F(rho) = F_target``.

    Walks the one-parameter family of capacity-``C`` BSECs indexed by the
    erasure probability (0 gives the BSC, ``1 - C`` the BEC) and returns the
    smallest erasure probability that matches the target.
    """
    check_rho(rho)
    C = float(_check_capacity(C))
    if not is_feasible(C, F_target, rho):
        raise Infeasible(f"(C={C}, F={F_target}) is outside the feasible band at rho={rho}")

    grid = np.linspace(0.0, 1.0 - C, n_scan + 1)
    eps_s = _bsec_eps_s(C, grid)
    gap = np.array([f_bsec(rho, a, b) for a, b in zip(eps_s, grid)]) - F_target

    def residual(e):
        return f_bsec(rho, float(_bsec_eps_s(C, e)), e) - F_target

    for i in range(len(grid)):
        if abs(gap[i]) <= ftol:
            return BsecParams(float(eps_s[i]), float(grid[i]))
        if i + 1 < len(grid) and abs(gap[i + 1]) > ftol and np.sign(gap[i]) != np.sign(gap[i + 1]):
            e = bisect(residual, grid[i], grid[i + 1], ftol=ftol)
            return BsecParams(float(_bsec_eps_s(C, e)), float(e))
    # Unreachable for feasible targets; the band endpoints are the scan endpoints.
    raise Infeasible(f"no BSEC found for (C={C}, F={F_target}, rho={rho})")
