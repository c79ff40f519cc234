"""Bracketing root finding and 1-D maximization used across the package."""
import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def bisect(fn, lo, hi, xtol=0.0, ftol=0.0, maxiter=200):
    """Root of ``fn`` on ``[lo, hi]`` given ``fn(lo)`` and ``fn(hi)`` differ in sign.

    Iterates until the bracket stops shrinking in floating point, the bracket
    is narrower than ``xtol``, or ``|fn(mid)| <= ftol``.
    """
    flo = fn(lo)
    if flo == 0:
        return lo
    fhi = fn(hi)
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("root not bracketed")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol:
            break
        fmid = fn(mid)
        if abs(fmid) <= ftol:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return lo if abs(flo) <= abs(fhi) else hi


def bisect_increasing(fn, target, lo, hi, iters=80):
    """Vectorized bisection for ``fn(x) = target`` with ``fn`` increasing.

    ``target``, ``lo`` and ``hi`` broadcast together; ``fn`` must accept arrays.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = fn(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def golden_max(fn, a, b, xtol=1e-11):
    """Golden-section search for the maximum of a unimodal ``fn`` on ``[a, b]``.

    Returns ``(x, fn(x))``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


def maximize_scalar(fn, lo, hi, n_scan=64, xtol=1e-11):
    """Maximize ``fn`` on ``[lo, hi]``: coarse scan to bracket, then golden section.

    The endpoints are always evaluated, so a maximum on the boundary is
    returned exactly rather than approached. Returns ``(x, fn(x))``.
    """
    grid = np.linspace(lo, hi, n_scan + 1)
    vals = np.array([fn(x) for x in grid])
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n_scan)]
    x, fx = golden_max(fn, a, b, xtol=xtol)
    best = max([(fx, x), (vals[0], grid[0]), (vals[-1], grid[-1]), (vals[i], grid[i])])
    return best[1], best[0]
