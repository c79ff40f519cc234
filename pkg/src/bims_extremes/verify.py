"""Randomized and grid checks of the extremal theorems, with replayable worst cases."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import BimsChannel, capacity
from .exponents import EXPONENTS, exponent_envelope
from .extremes import c_of_f_bec, c_of_f_bsc, f_bec_of_c, f_bsc_of_c, h_inv
from .gallager import (
    THIRD_DERIVATIVE_BOUND,
    central_abs_moment,
    dispersion,
    e0_third_derivative_at_zero,
    f_rho,
    f_rho_decomposed,
    moment_bound,
)

THEOREM1_RHOS = (-0.9, -0.5, 0.5, 1.0, 2.0, 10.0)
G_RHOS = (-0.99, -0.9, -0.75, -0.5, -0.25, 0.0, 0.1, 0.25, 0.5, 0.75,
          1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0, 20.0, 35.0, 50.0)
RATE_FRACS = (0.0, 0.2, 0.4, 0.6, 0.8)
SC_RATE_FRACS = (1.1, 1.5)
BELOW_CAPACITY_KINDS = ("random_coding", "sphere_packing", "expurgated", "gfb", "dtb")
MAX_SUBCHANNELS = 8


@dataclass
class CheckReport:
    name: str
    trials: int
    max_violation: float
    tolerance: float
    worst_case: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.max_violation <= self.tolerance

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def threads():
    try:
        return max(1, int(os.environ.get("BIMS_EXTREMES_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Ordered map, threaded up to ``BIMS_EXTREMES_THREADS`` workers."""
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def trial_seed(seed, i):
    return int(np.random.SeedSequence([seed, i]).generate_state(1, dtype=np.uint64)[0])


def random_bims(seed, max_subchannels=MAX_SUBCHANNELS):
    """A random BSC mixture; one component gives a plain BSC."""
    if max_subchannels < 1:
        raise ValueError("max_subchannels must be at least 1")
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_subchannels + 1))
    eps = rng.uniform(0.0, 0.5, size=k)
    if k == 1:
        return BimsChannel.bsc(float(eps[0]))
    w = rng.dirichlet(np.ones(k))
    w = w / w.sum()
    w[-1] = 1.0 - math.fsum(w[:-1])
    return BimsChannel.mixture(zip(w.tolist(), eps.tolist()))


def _reduce(name, tol, trials, cases):
    """Fold ``(violation, case)`` pairs into a report keyed on the worst one."""
    worst_v, worst_case = -math.inf, {}
    for v, case in cases:
        if v > worst_v:
            worst_v, worst_case = v, case
    return CheckReport(name, trials, float(worst_v), tol, worst_case)


def _random_cases(seed, trials):
    return [(i, trial_seed(seed, i)) for i in range(trials)]


# Sandwich: F_bec(rho; C) <= F(rho) <= F_bsc(rho; C) and the inverse forms

def theorem1_violation(ch, rhos=THEOREM1_RHOS):
    C = capacity(ch)
    los = np.atleast_1d(f_bec_of_c(np.asarray(rhos), C))
    his = np.atleast_1d(f_bsc_of_c(np.asarray(rhos), C))
    F = np.array([f_rho(ch, r) for r in rhos])
    nz = np.asarray(rhos) != 0
    cb = np.full_like(F, C)
    cs = np.full_like(F, C)
    if nz.any():
        cb[nz] = c_of_f_bec(F[nz], np.asarray(rhos)[nz])
        cs[nz] = c_of_f_bsc(F[nz], np.asarray(rhos)[nz])
    neg = np.asarray(rhos) < 0
    c_lo, c_hi = np.where(neg, cs, cb), np.where(neg, cb, cs)
    v = np.maximum.reduce([los - F, F - his, c_lo - C, C - c_hi])
    i = int(np.argmax(v))
    return float(v[i]), rhos[i]


def check_theorem1(trials=500, rho_grid=THEOREM1_RHOS, seed=42, tol=1e-9):
    def one(case):
        i, s = case
        v, rho = theorem1_violation(random_bims(s), rho_grid)
        return v, {"trial": i, "seed": s, "rho": rho}

    return _reduce("theorem1", tol, trials, parallel_map(one, _random_cases(seed, trials)))


# Concavity / monotonicity of F_bsc in C, and g(z, rho) >= 0

def g_func(z, rho):
    """The sign-determining factor of the second C-derivative of F_bsc.

    At ``z = 1`` the quotient is 0/0; its limit is ``-rho/(1+rho)``, which
    makes ``g(1, rho) = 0``.
    """
    z = np.asarray(z, dtype=float)
    b = rho / (1.0 + rho)
    a = 1.0 / (1.0 + rho)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lz = np.log(z)
        num = -np.expm1(lz) + np.expm1(a * lz) - np.expm1(b * lz)
        out = b + num / ((1.0 + z) * lz)
    out = np.where(z == 1.0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def check_lemma1(rho_grid=THEOREM1_RHOS, C_step=0.01, z_count=1000, g_rhos=G_RHOS,
                 concavity_tol=1e-6, g_tol=1e-12):
    """Finite-difference concavity and monotonicity of F_bsc(rho; .), and a g(z, rho) grid.

    ``max_violation`` is the largest excess over each part's own band
    (``concavity_tol`` for the curve tests, ``g_tol`` for g), so the
    report passes iff every part does; raw figures go in ``details``.
    """
    Cs = np.arange(C_step, 1.0 - C_step / 2, C_step)
    worst_d2, worst_mono, where = -math.inf, -math.inf, {}
    for rho in rho_grid:
        fb = np.asarray(f_bsc_of_c(rho, Cs))
        fe = np.asarray(f_bec_of_c(rho, Cs))
        d2 = np.diff(fb, 2).max()
        sign = 1.0 if rho <= 0 else -1.0  # non-decreasing for rho <= 0
        mono = max((-sign * np.diff(fb)).max(), (-sign * np.diff(fe)).max(), (fe - fb).max())
        if d2 > worst_d2:
            worst_d2, where["concavity_rho"] = d2, rho
        if mono > worst_mono:
            worst_mono, where["monotonicity_rho"] = mono, rho

    zs = np.linspace(1.0 / z_count, 1.0, z_count)
    g_min, g_where = math.inf, None
    for rho in g_rhos:
        g = g_func(zs, rho)
        i = int(np.argmin(g))
        if g[i] < g_min:
            g_min, g_where = float(g[i]), {"z": float(zs[i]), "rho": rho}
    where["g_min_at"] = g_where

    excess = max(worst_d2 - concavity_tol, worst_mono - concavity_tol, -g_min - g_tol)
    rep = CheckReport("lemma1", len(rho_grid) * len(Cs) + len(g_rhos) * z_count,
                      float(max(excess, 0.0)), 0.0, where)
    rep.details = {"max_second_difference": float(worst_d2),
                   "max_monotonicity_violation": float(worst_mono),
                   "min_g": g_min}
    return rep


# Information-density moments and the E0(rho, 1) third derivative

def lemma3_violation(ch, k_set=(2, 3, 4)):
    v = max(central_abs_moment(ch, k) - moment_bound(k) for k in k_set)
    third = e0_third_derivative_at_zero(ch)
    if not math.isfinite(third):
        return math.inf
    return max(v, abs(third) - THIRD_DERIVATIVE_BOUND)


def check_lemma3(trials=200, k_set=(2, 3, 4), seed=42):
    def one(case):
        i, s = case
        return lemma3_violation(random_bims(s), k_set), {"trial": i, "seed": s}

    # tolerance 0: the violation is measured against the bounds themselves
    return _reduce("lemma3", 0.0, trials, parallel_map(one, _random_cases(seed, trials)))


# F(rho) by direct summation vs. the BSC-decomposition average

def two_path_violation(ch, rhos=THEOREM1_RHOS):
    return max(abs(f_rho(ch, r) - f_rho_decomposed(ch, r)) for r in rhos)


def _family_channel(family, s):
    if family == "mixture":
        return random_bims(s)
    u = float(np.random.default_rng(s).uniform(0.0, 0.5 if family == "bsc" else 1.0))
    return getattr(BimsChannel, family)(u)


def check_two_path(trials=500, rho_grid=THEOREM1_RHOS, seed=42, tol=1e-10):
    """Runs the same mixtures as ``check_theorem1`` plus random BSCs and BECs."""
    cases = [(fam, i, s) for fam in ("mixture", "bsc", "bec") for i, s in _random_cases(seed, trials)]

    def one(case):
        fam, i, s = case
        return two_path_violation(_family_channel(fam, s), rho_grid), {"family": fam, "trial": i, "seed": s}

    return _reduce("two_path", tol, len(cases), parallel_map(one, cases))


# Exponent sandwiches at fixed capacity

def exponent_violation(ch, kind, R):
    C = capacity(ch)
    value = EXPONENTS[kind](ch, R).value
    env = exponent_envelope(kind, C, R)
    return max(env.lower - value, value - env.upper)


def exponent_cases(C, R_fracs=RATE_FRACS, sc_fracs=SC_RATE_FRACS):
    cases = [(kind, f * C) for kind in BELOW_CAPACITY_KINDS for f in R_fracs]
    cases += [("strong_converse", f * C) for f in sc_fracs]
    return cases


def check_exponent_extremes(trials=100, R_fracs=RATE_FRACS, seed=42, tol=1e-7, sc_fracs=SC_RATE_FRACS):
    def one(case):
        i, s = case
        ch = random_bims(s)
        C = capacity(ch)
        worst, where = -math.inf, None
        for kind, R in exponent_cases(C, R_fracs, sc_fracs):
            v = exponent_violation(ch, kind, R)
            if v > worst:
                worst, where = v, {"kind": kind, "R": R}
        return worst, {"trial": i, "seed": s, **where}

    return _reduce("exponent_extremes", tol, trials, parallel_map(one, _random_cases(seed, trials)))


# Dispersion between C(1-C) and the BSC value at the same capacity

def dispersion_envelope(C):
    return C * (1.0 - C), dispersion(BimsChannel.bsc(float(h_inv(1.0 - C))))


def dispersion_violation(ch):
    C = capacity(ch)
    lo, hi = dispersion_envelope(C)
    V = dispersion(ch)
    return max(lo - V, V - hi)


def check_dispersion_extremes(trials=300, seed=42, tol=1e-3):
    def one(case):
        i, s = case
        return dispersion_violation(random_bims(s)), {"trial": i, "seed": s}

    return _reduce("dispersion_extremes", tol, trials, parallel_map(one, _random_cases(seed, trials)))


CHECKS = {
    "theorem1": lambda seed, trials: check_theorem1(trials or 500, seed=seed),
    "lemma1": lambda seed, trials: check_lemma1(),
    "lemma3": lambda seed, trials: check_lemma3(trials or 200, seed=seed),
    "two_path": lambda seed, trials: check_two_path(trials or 500, seed=seed),
    "exponent_extremes": lambda seed, trials: check_exponent_extremes(trials or 100, seed=seed),
    "dispersion_extremes": lambda seed, trials: check_dispersion_extremes(trials or 300, seed=seed),
}


def replay(name, worst_case):
    """Recompute the violation of a single recorded case."""
    s = worst_case["seed"]
    if name == "theorem1":
        return theorem1_violation(random_bims(s), (worst_case["rho"],))[0]
    if name == "lemma3":
        return lemma3_violation(random_bims(s))
    if name == "two_path":
        return two_path_violation(_family_channel(worst_case["family"], s))
    if name == "exponent_extremes":
        return exponent_violation(random_bims(s), worst_case["kind"], worst_case["R"])
    if name == "dispersion_extremes":
        return dispersion_violation(random_bims(s))
    raise KeyError(f"check {name!r} has no per-case replay")


def run(names=None, seed=42, trials=None):
    names = list(CHECKS) if names in (None, "all") else names
    return [CHECKS[n](seed, trials) for n in names]
