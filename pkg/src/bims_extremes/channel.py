"""Binary-input symmetric channels, their BSC decomposition, and information density."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import InvalidChannel, NotSymmetric, SpecError
from .extremes import h

ROW_TOL = 1e-12
SYMMETRY_TOL = 1e-9
MERGE_TOL = 1e-12
BIAWGN_SPAN = 8.0
BIAWGN_BINS = 2001


@dataclass(frozen=True)
class Pairing:
    """Output pairing certifying Gallager symmetry.

    ``pairs`` holds index pairs ``(y, y')`` whose likelihoods are swapped;
    ``self_paired`` holds outputs with equal likelihoods under both inputs.
    Zero-mass outputs appear in neither.
    """

    pairs: tuple
    self_paired: tuple


def validate_symmetry(rows, tol=SYMMETRY_TOL):
    """Match every output ``(p, q)`` with an output ``(q, p)``.

    Exact swaps are matched first, then leftovers within ``tol``.
    Raises :class:`NotSymmetric` if any output stays unmatched.
    """
    rows = np.asarray(rows, dtype=float)
    p, q = rows[0], rows[1]
    live = [y for y in range(rows.shape[1]) if p[y] > 0 or q[y] > 0]

    pairs, self_paired = [], []
    upper = {}  # exact (p, q) with p > q -> output indices
    lower = []
    for y in live:
        if p[y] == q[y]:
            self_paired.append(y)
        elif p[y] > q[y]:
            upper.setdefault((p[y], q[y]), []).append(y)
        else:
            lower.append(y)

    loose_lower = []
    for y in lower:
        bucket = upper.get((q[y], p[y]))
        if bucket:
            pairs.append((bucket.pop(), y))
        else:
            loose_lower.append(y)
    loose_upper = [y for bucket in upper.values() for y in bucket]

    # Near-equal likelihoods under tolerance count as self-paired.
    for group in (loose_upper, loose_lower):
        for y in list(group):
            if abs(p[y] - q[y]) <= tol:
                group.remove(y)
                self_paired.append(y)

    loose_upper.sort(key=lambda y: (p[y], q[y]))
    loose_lower.sort(key=lambda y: (q[y], p[y]))
    if len(loose_upper) != len(loose_lower):
        raise NotSymmetric(f"{len(loose_upper) + len(loose_lower)} outputs cannot be paired")
    for a, b in zip(loose_upper, loose_lower):
        if abs(p[a] - q[b]) > tol or abs(q[a] - p[b]) > tol:
            raise NotSymmetric(f"output {a} {rows[:, a]} has no swapped partner (closest {rows[:, b]})")
        pairs.append((a, b))

    return Pairing(tuple(sorted(pairs)), tuple(sorted(self_paired)))


def _check_prob(name, x):
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise InvalidChannel(f"{name} must be a probability, got {x}")


@dataclass(frozen=True, eq=False)
class BimsChannel:
    """A binary-input memoryless symmetric channel with equiprobable inputs.

    Build one with the ``bsc``, ``bec``, ``bsec``, ``matrix``, ``mixture`` or
    ``biawgn`` constructors. ``rows`` is the 2 x M transition matrix.
    """

    kind: str
    params: dict
    rows: np.ndarray = field(repr=False)
    pairing: Pairing = field(repr=False)

    # constructors

    @classmethod
    def _build(cls, kind, params, rows, tol=SYMMETRY_TOL):
        rows = np.array(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] != 2 or rows.shape[1] < 1:
            raise InvalidChannel(f"transition matrix must be 2 x M, got shape {rows.shape}")
        if np.any(rows < 0) or not np.all(np.isfinite(rows)):
            raise InvalidChannel("transition probabilities must be finite and non-negative")
        if np.any(np.abs(rows.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidChannel(f"rows must sum to 1, got {rows.sum(axis=1)}")
        pairing = validate_symmetry(rows, tol)
        rows.setflags(write=False)
        return cls(kind, params, rows, pairing)

    @classmethod
    def bsc(cls, eps):
        _check_prob("epsilon", eps)
        return cls._build("bsc", {"epsilon": eps}, [[1 - eps, eps], [eps, 1 - eps]])

    @classmethod
    def bec(cls, eps):
        _check_prob("epsilon", eps)
        return cls._build("bec", {"epsilon": eps}, [[1 - eps, 0.0, eps], [0.0, 1 - eps, eps]])

    @classmethod
    def bsec(cls, eps_s, eps_e):
        _check_prob("eps_s", eps_s)
        _check_prob("eps_e", eps_e)
        if 2 * eps_s + eps_e > 1 + 1e-15:
            raise InvalidChannel(f"BSEC needs 2*eps_s + eps_e <= 1, got {2 * eps_s + eps_e}")
        keep = max(1.0 - eps_s - eps_e, 0.0)
        return cls._build(
            "bsec", {"eps_s": eps_s, "eps_e": eps_e}, [[keep, eps_s, eps_e], [eps_s, keep, eps_e]]
        )

    @classmethod
    def matrix(cls, rows, tol=SYMMETRY_TOL):
        rows = np.array(rows, dtype=float)
        return cls._build("matrix", {"rows": rows.tolist()}, rows, tol)

    @classmethod
    def mixture(cls, components):
        """A BSC mixture from ``(weight, eps)`` pairs with ``eps`` in [0, 1/2]."""
        components = [(float(w), float(e)) for w, e in components]
        if not components:
            raise InvalidChannel("mixture needs at least one component")
        for w, e in components:
            _check_prob("weight", w)
            if not 0.0 <= e <= 0.5:
                raise InvalidChannel(f"mixture crossover must lie in [0, 1/2], got {e}")
        if abs(math.fsum(w for w, _ in components) - 1.0) > ROW_TOL:
            raise InvalidChannel("mixture weights must sum to 1")
        cols = []
        for w, e in components:
            if e == 0.5:
                cols.append((w, w))
            else:
                cols += [(w * (1 - e), w * e), (w * e, w * (1 - e))]
        rows = np.array(cols).T
        return cls._build("mixture", {"components": components}, rows)

    @classmethod
    def biawgn(cls, snr_db, bins=BIAWGN_BINS):
        """BPSK over AWGN, uniformly quantized.

        Signals are +-1 with noise variance ``10**(-snr_db/10)``. Bins cover
        +-8 standard deviations around the signals; the outer bins absorb the
        tails. Bin edges are symmetric about 0, so the second row is the
        first row reversed, bit for bit.
        """
        bins = int(bins)
        if bins < 1:
            raise InvalidChannel(f"bins must be positive, got {bins}")
        sigma = math.sqrt(10.0 ** (-snr_db / 10.0))
        half = 1.0 + BIAWGN_SPAN * sigma
        edges = np.linspace(-half, half, bins + 1)
        edges[0], edges[-1] = -np.inf, np.inf
        # Difference of upper-tail probabilities for the bins right of 0 keeps
        # precision in the tails; mirror for the left half.
        cdf = ndtr((edges - 1.0) / sigma)
        sf = ndtr(-(edges - 1.0) / sigma)
        mass = np.where(edges[1:] <= 1.0, np.diff(cdf), sf[:-1] - sf[1:])
        mass = np.maximum(mass, 0.0)
        rows = np.vstack([mass, mass[::-1]])
        return cls._build("biawgn", {"snr_db": snr_db, "bins": bins}, rows)

    # serialization

    @classmethod
    def from_spec(cls, spec):
        """Parse the channel-spec JSON object (already decoded to a dict)."""
        try:
            kind = spec["kind"]
            if kind in ("bsc", "bec"):
                return getattr(cls, kind)(float(spec["epsilon"]))
            if kind == "bsec":
                return cls.bsec(float(spec["eps_s"]), float(spec["eps_e"]))
            if kind == "matrix":
                return cls.matrix(spec["rows"])
            if kind == "mixture":
                return cls.mixture([(c["p"], c["epsilon"]) for c in spec["components"]])
            if kind == "biawgn":
                return cls.biawgn(float(spec["snr_db"]), int(spec.get("bins", BIAWGN_BINS)))
        except InvalidChannel:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SpecError(f"malformed channel spec {spec!r}: {exc}") from exc
        raise SpecError(f"unknown channel kind {spec.get('kind')!r}")

    def to_spec(self):
        if self.kind == "mixture":
            return {"kind": "mixture", "components": [{"p": w, "epsilon": e} for w, e in self.params["components"]]}
        return {"kind": self.kind, **self.params}

    @property
    def label(self):
        if self.kind in ("bsc", "bec"):
            return f"{self.kind.upper()}({self.params['epsilon']:g})"
        if self.kind == "bsec":
            return f"BSEC({self.params['eps_s']:g}, {self.params['eps_e']:g})"
        if self.kind == "biawgn":
            return f"BIAWGN({self.params['snr_db']:g} dB)"
        return f"{self.kind}[{self.rows.shape[1]} outputs]"

    @property
    def n_outputs(self):
        return self.rows.shape[1]


@dataclass(frozen=True)
class SubchannelDecomposition:
    """Probability-weighted BSC crossovers ``(p_a, eps_a)``, sorted by crossover."""

    entries: tuple

    @property
    def weights(self):
        return np.array([p for p, _ in self.entries])

    @property
    def crossovers(self):
        return np.array([e for _, e in self.entries])

    def to_channel(self):
        return BimsChannel.mixture(self.entries)


def _merge(entries):
    entries = sorted(entries, key=lambda pe: pe[1])
    merged = []
    for p, e in entries:
        # relative: F_bsc has unbounded slope at eps = 0
        if merged and abs(merged[-1][1] - e) <= MERGE_TOL * e:
            q, f = merged[-1]
            merged[-1] = (q + p, (q * f + p * e) / (q + p))
        else:
            merged.append((p, e))
    return tuple(merged)


def decompose(ch):
    """Split ``ch`` into BSC subchannels indexed by output pairs."""
    p, q = ch.rows
    entries = []
    for a, b in ch.pairing.pairs:
        # Average the two members so tolerance-matched pairs stay consistent.
        big = 0.5 * (max(p[a], q[a]) + max(p[b], q[b]))
        small = 0.5 * (min(p[a], q[a]) + min(p[b], q[b]))
        entries.append((big + small, small / (big + small)))
    for y in ch.pairing.self_paired:
        entries.append((0.5 * (p[y] + q[y]), 0.5))
    return SubchannelDecomposition(_merge(entries))


def capacity(ch):
    d = decompose(ch)
    return float(np.clip(math.fsum(d.weights * (1.0 - h(d.crossovers))), 0.0, 1.0))


@dataclass(frozen=True)
class InfoDensitySample:
    value: float
    probability: float


def info_density_distribution(ch):
    """Distribution of ``log2 P(y|x) / P(y)`` under equiprobable inputs.

    Samples with equal values (within 1e-12) are merged.
    """
    rows = ch.rows
    py = 0.5 * rows.sum(axis=0)
    raw = []
    for x in range(2):
        for y in range(rows.shape[1]):
            if rows[x, y] > 0:
                raw.append((math.log2(rows[x, y] / py[y]), 0.5 * rows[x, y]))
    raw.sort()
    out = []
    for v, w in raw:
        if out and abs(out[-1][0] - v) <= MERGE_TOL:
            u, m = out[-1]
            out[-1] = ((u * m + v * w) / (m + w), m + w)
        else:
            out.append((v, w))
    return [InfoDensitySample(v, w) for v, w in out]
