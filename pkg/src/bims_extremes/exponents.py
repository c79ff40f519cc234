"""Error exponents as 1-D maximizations of E0-type objectives over rho."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import maximize_scalar
from .channel import BimsChannel, capacity
from .extremes import BEC, BSC, RHO_MIN, EnvelopePair, h_inv
from .gallager import bhattacharyya, e0, e0_s

RHO_CAP = 64.0
BOUNDARY_TOL = 1e-8

INTERIOR = "interior"
LOWER = "lower-boundary"
UPPER = "upper-boundary"
CAPPED = "capped"


@dataclass(frozen=True)
class ExponentResult:
    value: float
    rho_star: float
    at_boundary: str = INTERIOR
    rho_cap_used: float | None = None

    def to_dict(self):
        return {
            "value": self.value,
            "rho_star": self.rho_star,
            "at_boundary": self.at_boundary,
            "rho_cap_used": self.rho_cap_used,
        }


def _optimize(obj, lo, hi, capped=False):
    rho, val = maximize_scalar(obj, lo, hi)
    if rho - lo <= BOUNDARY_TOL * max(1.0, abs(lo)):
        flag = LOWER
    elif hi - rho <= BOUNDARY_TOL * max(1.0, abs(hi)):
        flag = CAPPED if capped else UPPER
    else:
        flag = INTERIOR
    return ExponentResult(float(val), float(rho), flag, hi if capped else None)


def _zero(rho_star=0.0, flag=LOWER, cap=None):
    return ExponentResult(0.0, rho_star, flag, cap)


def _check_rate(R):
    if R < 0 or math.isnan(R):
        raise ValueError(f"rate must be non-negative, got {R}")


def random_coding(ch, R):
    """Gallager's random coding exponent, max over 0 <= rho <= 1."""
    _check_rate(R)
    if R >= capacity(ch):
        return _zero()
    return _optimize(lambda r: e0(ch, r) - r * R, 0.0, 1.0)


def sphere_packing(ch, R, rho_cap=RHO_CAP):
    """Sphere-packing exponent, sup over 0 < rho <= rho_cap.

    A maximizer at ``rho_cap`` is flagged ``capped``: the true supremum may be
    larger or infinite.
    """
    _check_rate(R)
    if R >= capacity(ch):
        return _zero(cap=rho_cap)
    return _optimize(lambda r: e0(ch, r) - r * R, 0.0, rho_cap, capped=True)


def expurgated_ex(z, rho):
    """``-rho log2((1 + z**(1/rho)) / 2)`` evaluated without loss for large rho."""
    if z <= 0.0:
        return rho
    # (1 + z**(1/rho)) / 2 = 1 + expm1(ln z / rho) / 2
    return -rho * math.log1p(0.5 * math.expm1(math.log(z) / rho)) / math.log(2.0)


def expurgated(ch, R, rho_cap=RHO_CAP):
    """Expurgated exponent, max over 1 <= rho <= rho_cap, through the Bhattacharyya parameter."""
    _check_rate(R)
    if R >= capacity(ch):
        return _zero(1.0, LOWER, rho_cap)
    z = bhattacharyya(ch)
    return _optimize(lambda r: expurgated_ex(z, r) - r * R, 1.0, rho_cap, capped=True)


def strong_converse_limit(ch):
    """``lim_{rho -> -1} F(rho) = sum_y max_x P(y|x)``."""
    return float(ch.rows.max(axis=0).sum())


def strong_converse(ch, R):
    """Arimoto's exponent, sup over -1 < rho <= 0.

    The open end is covered by the analytic limit of E0 at rho = -1; when it
    wins the result is flagged ``lower-boundary`` with ``rho_star = -1``.
    """
    _check_rate(R)
    if R <= capacity(ch):
        return _zero(0.0, UPPER)
    res = _optimize(lambda r: e0(ch, r) - r * R, RHO_MIN + 1e-6, 0.0)
    limit = -math.log2(strong_converse_limit(ch)) + R
    if limit >= res.value:
        return ExponentResult(limit, -1.0, LOWER)
    if res.at_boundary == LOWER:
        # the sup sits in the open end but short of the limit; report it as such
        return ExponentResult(res.value, res.rho_star, LOWER)
    return res


def gfb_exponent(ch, R, rho_cap=RHO_CAP):
    """Generalized Feinstein exponent, sup over rho >= 0 of (E0 - rho R) / (1 + rho)."""
    _check_rate(R)
    if R >= capacity(ch):
        return _zero(cap=rho_cap)
    return _optimize(lambda r: (e0(ch, r) - r * R) / (1.0 + r), 0.0, rho_cap, capped=True)


def dtb_exponent(ch, R):
    """Dependence-testing exponent, max over 0 <= rho <= 1 of E0(rho, s=1) - rho R."""
    _check_rate(R)
    if R >= capacity(ch):
        return _zero()
    return _optimize(lambda r: e0_s(ch, r, 1.0) - r * R, 0.0, 1.0)


EXPONENTS = {
    "random_coding": random_coding,
    "sphere_packing": sphere_packing,
    "expurgated": expurgated,
    "strong_converse": strong_converse,
    "gfb": gfb_exponent,
    "dtb": dtb_exponent,
}


def extremal_channels(C):
    """The BSC and BEC of capacity ``C``."""
    return BimsChannel.bsc(float(h_inv(1.0 - C))), BimsChannel.bec(1.0 - C)


def exponent_envelope(kind, C, R):
    """Range of the ``kind`` exponent at rate ``R`` over channels of capacity ``C``."""
    fn = EXPONENTS[kind]
    bsc, bec = extremal_channels(C)
    v_bsc, v_bec = fn(bsc, R).value, fn(bec, R).value
    if kind == "strong_converse":
        lo, hi = sorted([(v_bsc, BSC), (v_bec, BEC)])
        return EnvelopePair(lo[0], hi[0], lo[1], hi[1])
    return EnvelopePair(v_bsc, v_bec, BSC, BEC)


@dataclass(frozen=True)
class ShulmanFederInput:
    n: int
    R: float
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"block length must be positive, got {self.n}")
        if self.alpha < 1:
            raise ValueError(f"spectrum ratio must be >= 1, got {self.alpha}")


def shulman_feder(ch, inp):
    """Exponent lower bound for a specific code: Er evaluated at the penalized rate."""
    return random_coding(ch, inp.R + math.log2(inp.alpha) / inp.n).value


def grid_oracle(obj, lo, hi, step):
    """Brute-force maximum of ``obj`` on a uniform grid; for testing the optimizer."""
    grid = np.arange(lo, hi + step / 2, step)
    vals = np.array([obj(r) for r in grid])
    i = int(np.argmax(vals))
    return float(grid[i]), float(vals[i])
