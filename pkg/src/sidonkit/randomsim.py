"""Monte Carlo experiments on random set systems.

Each k-subset of [n] is kept independently with probability p. Every sample
draws from its own Philox stream, keyed by ``(seed; n, k, h, p, sample
index)``, so results do not depend on evaluation order or worker count.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import struct
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _kernels as K
from .verifier import (
    Family,
    _multiset_groups,
    count_collisions,
    is_bhg,
    is_sidon,
)

log = logging.getLogger(__name__)

#: Desk-scale envelope; larger sweeps run but log a warning.
DESK_SCALE = {(2, 2): 512, (3, 2): 128, (2, 3): 64}


def sidon_exponent(k: int) -> float:
    """Threshold exponent (2k+1)/4 for the Sidon property."""
    return (2 * k + 1) / 4


def bh_exponent(k: int, h: int) -> float:
    """Threshold exponent (hk+1)/(h+2) for the B_h[1] property (h=2 gives the Sidon one)."""
    return (h * k + 1) / (h + 2)


@dataclass(frozen=True)
class SampleSpec:
    n: int
    k: int
    p: float
    h: int = 2
    seed: int = 0
    samples: int = 1

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.k < 2 or self.n < self.k:
            raise ValueError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.h < 2:
            raise ValueError("h must be at least 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class SweepPoint:
    spec: SampleSpec
    p_hat: float
    ci_half_width: float
    mean_collisions: float
    successes: int = 0
    collision_sd: float = 0.0
    not_property_rate: float = 0.0

    def row(self) -> dict:
        s = self.spec
        return {"n": s.n, "k": s.k, "h": s.h, "p": s.p, "samples": s.samples,
                "p_hat": self.p_hat, "ci": self.ci_half_width,
                "mean_collisions": self.mean_collisions}


CSV_COLUMNS = ["n", "k", "h", "p", "samples", "p_hat", "ci", "mean_collisions"]


# ---------------------------------------------------------------------------
# sampling


def _p_word(p: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(p)))[0]


def sample_rng(spec: SampleSpec, index: int) -> np.random.Generator:
    """The Philox stream for one sample of ``spec``."""
    ss = np.random.SeedSequence(spec.seed,
                                spawn_key=(spec.n, spec.k, spec.h, _p_word(spec.p), index))
    return np.random.Generator(np.random.Philox(ss))


_BINOM_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _binom_table(n: int, k: int) -> np.ndarray:
    key = (n, k)
    if key not in _BINOM_CACHE:
        t = np.zeros((n + 1, k + 1), dtype=np.int64)
        for x in range(n + 1):
            for r in range(k + 1):
                t[x, r] = math.comb(x, r)
        _BINOM_CACHE[key] = t
    return _BINOM_CACHE[key]


def sample_ranks(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Sorted ranks in ``[0, total)``, each present independently with probability p.

    Walks the candidates with geometric gaps, so the cost is proportional to
    the number of hits rather than to ``total``.
    """
    if p <= 0 or total == 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    chunks = []
    pos = -1
    batch = max(16, int(total * p * 1.1) + 16)
    while True:
        gaps = rng.geometric(p, size=batch).astype(np.int64)
        ranks = pos + np.cumsum(gaps)
        stop = np.searchsorted(ranks, total)
        chunks.append(ranks[:stop])
        if stop < batch:
            break
        pos = int(ranks[-1])
    return np.concatenate(chunks)


def sample_array(spec: SampleSpec, index: int = 0) -> np.ndarray:
    """One random system as an ``(m, k)`` array in lexicographic row order."""
    rng = sample_rng(spec, index)
    total = math.comb(spec.n, spec.k)
    ranks = sample_ranks(rng, total, spec.p)
    rows = K.colex_unrank(ranks, spec.n, spec.k, _binom_table(spec.n, spec.k))
    if rows.shape[0]:
        rows = rows[np.lexsort(rows.T[::-1])]
    return rows


def sample_system(spec: SampleSpec, index: int = 0) -> Family:
    """Draw sample ``index`` of ``spec`` as a :class:`Family`."""
    rows = sample_array(spec, index)
    return Family(tuple(map(tuple, rows.tolist())), spec.n, spec.k)


# ---------------------------------------------------------------------------
# estimation


def _violations(f: Family, h: int) -> int:
    if h == 2:
        return count_collisions(f)
    return sum(len(m) * (len(m) - 1) // 2 for _, m in _multiset_groups(f, h, 2))


def _one_sample(spec: SampleSpec, index: int, count: bool) -> tuple[bool, int]:
    f = sample_system(spec, index)
    if count:
        x = _violations(f, spec.h)
        return x == 0, x
    ok = is_sidon(f) if spec.h == 2 else is_bhg(f, spec.h, 1)
    return ok, -1


def _warn_scale(spec: SampleSpec):
    limit = DESK_SCALE.get((spec.k, spec.h))
    if limit is not None and spec.n > limit:
        log.warning("n=%d is beyond the desk-scale envelope (%d) for k=%d, h=%d",
                    spec.n, limit, spec.k, spec.h)


def run_samples(spec: SampleSpec, threads: int = 1, count: bool = True):
    """Outcome of every sample as two arrays: property holds, violation count."""
    _warn_scale(spec)
    idx = range(spec.samples)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            out = list(ex.map(lambda i: _one_sample(spec, i, count), idx))
    else:
        out = [_one_sample(spec, i, count) for i in idx]
    ok = np.array([o[0] for o in out], dtype=bool)
    xs = np.array([o[1] for o in out], dtype=np.int64)
    return ok, xs


def _summarize(spec: SampleSpec, ok: np.ndarray, xs: np.ndarray) -> SweepPoint:
    s = spec.samples
    succ = int(ok.sum())
    p_hat = succ / s
    ci = 1.96 * math.sqrt(p_hat * (1 - p_hat) / s)
    if xs.size and xs[0] >= 0:
        mean = float(xs.mean())
        sd = float(xs.std(ddof=1)) if s > 1 else 0.0
    else:
        mean, sd = float("nan"), float("nan")
    return SweepPoint(spec, p_hat, ci, mean, succ, sd, 1 - p_hat)


def estimate_sidon_probability(spec: SampleSpec, threads: int = 1,
                               count: bool = True) -> SweepPoint:
    """Fraction of samples that are Sidon, with the mean violation count.

    ``count=False`` skips counting violations (stopping at the first one),
    leaving ``mean_collisions`` as NaN.
    """
    if spec.h != 2:
        raise ValueError("estimate_sidon_probability needs h = 2")
    ok, xs = run_samples(spec, threads, count)
    return _summarize(spec, ok, xs)


def estimate_bh_probability(spec: SampleSpec, threads: int = 1,
                            count: bool = True) -> SweepPoint:
    """Fraction of samples that are B_h[1] systems."""
    ok, xs = run_samples(spec, threads, count)
    return _summarize(spec, ok, xs)


# ---------------------------------------------------------------------------
# threshold sweeps


@dataclass(frozen=True)
class GridSpec:
    """Geometric grid of ``points`` probabilities from ``p_min`` to ``p_max``.

    With ``relative=True`` the bounds are multipliers of ``n ** -exponent``
    and the grid moves with n.
    """

    p_min: float = 0.1
    p_max: float = 10.0
    points: int = 13
    relative: bool = True

    def __post_init__(self):
        if not 0 < self.p_min < self.p_max:
            raise ValueError("need 0 < p_min < p_max")
        if self.points < 2:
            raise ValueError("grid needs at least two points")

    def values(self, n: int, exponent: float) -> list[float]:
        scale = n ** -exponent if self.relative else 1.0
        ps = np.geomspace(self.p_min * scale, self.p_max * scale, self.points)
        return [float(min(p, 1.0)) for p in ps]


@dataclass
class Crossing:
    n: int
    p_half: float | None
    bracketed: bool
    slope: float | None = None


@dataclass
class SweepResult:
    k: int
    h: int
    seed: int
    samples: int
    exponent: float
    points: list[SweepPoint]
    crossings: list[Crossing]
    slope: float | None
    intercept: float | None = None
    notes: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "k": self.k, "h": self.h, "seed": self.seed, "samples": self.samples,
            "expected_slope": -self.exponent, "slope": self.slope,
            "intercept": self.intercept,
            "p_half": {str(c.n): c.p_half for c in self.crossings},
            "bracketed": {str(c.n): c.bracketed for c in self.crossings},
            "notes": self.notes,
        }


def logistic_crossing(ps, successes, trials):
    """p where a logistic curve in log p, fitted by maximum likelihood,
    passes through 1/2.

    The model is ``Pr = 1 / (1 + exp(b (log p - log p_half)))``. Returns
    ``(p_half, b, bracketed)``; ``bracketed`` is False when the observed rates
    never straddle 1/2, in which case the estimate is an extrapolation.
    """
    x = np.log(np.asarray(ps, dtype=float))
    s = np.asarray(successes, dtype=float)
    t = np.asarray(trials, dtype=float)
    rate = s / t
    bracketed = bool((rate >= 0.5).any() and (rate <= 0.5).any())
    # start from the grid point nearest to 1/2
    x0 = x[np.argmin(np.abs(rate - 0.5))]

    def nll(theta):
        c, b = theta
        z = b * (x - c)
        # log sigmoid(-z) and log sigmoid(z), computed stably
        log_ok = -np.logaddexp(0.0, z)
        log_bad = -np.logaddexp(0.0, -z)
        return -(s * log_ok + (t - s) * log_bad).sum()

    res = minimize(nll, np.array([x0, 2.0]), method="Nelder-Mead",
                   options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 4000})
    c, b = res.x
    return float(math.exp(c)), float(b), bracketed


def threshold_sweep(n_list, k: int, h: int = 2, grid: GridSpec | None = None,
                    samples: int = 400, seed: int = 1, threads: int = 1,
                    exponent: float | None = None) -> SweepResult:
    """Estimate the property probability over a p-grid for every n, locate the
    half-probability point per n, and regress log p_half on log n."""
    grid = grid or GridSpec()
    if exponent is None:
        exponent = sidon_exponent(k) if h == 2 else bh_exponent(k, h)
    points, crossings, notes = [], [], []
    for n in n_list:
        ps = grid.values(n, exponent)
        row = []
        for p in ps:
            spec = SampleSpec(n, k, p, h, seed, samples)
            ok, xs = run_samples(spec, threads, count=False)
            row.append(_summarize(spec, ok, xs))
        points.extend(row)
        p_half, b, bracketed = logistic_crossing(
            [pt.spec.p for pt in row], [pt.successes for pt in row],
            [samples] * len(row))
        if not bracketed:
            msg = f"n={n}: grid does not bracket p_hat = 1/2; crossing extrapolated"
            warnings.warn(msg)
            notes.append(msg)
        crossings.append(Crossing(n, p_half, bracketed, b))
    good = [c for c in crossings if c.p_half and c.p_half > 0]
    slope = intercept = None
    if len(good) >= 2:
        slope, intercept = np.polyfit(np.log([c.n for c in good]),
                                      np.log([c.p_half for c in good]), 1)
        slope, intercept = float(slope), float(intercept)
    return SweepResult(k, h, seed, samples, exponent, points, crossings, slope,
                       intercept, notes)


def monotone_violations(points: list[SweepPoint], slack: float = 1.0) -> list[tuple]:
    """Consecutive grid points (same n) where p_hat rises by more than
    ``slack`` times the combined CI half-widths."""
    bad = []
    by_n: dict[int, list[SweepPoint]] = {}
    for pt in points:
        by_n.setdefault(pt.spec.n, []).append(pt)
    for n, row in by_n.items():
        row.sort(key=lambda pt: pt.spec.p)
        for a, b in zip(row, row[1:]):
            if b.p_hat - a.p_hat > slack * (a.ci_half_width + b.ci_half_width) + 1e-12:
                bad.append((n, a.spec.p, b.spec.p, a.p_hat, b.p_hat))
    return bad


# ---------------------------------------------------------------------------
# first moment


@dataclass
class FirstMoment:
    n: int
    k: int
    p: float
    samples: int
    mean: float
    sd: float
    exact: float | None
    not_sidon_rate: float

    @property
    def sigma(self) -> float:
        """Standard error of the Monte Carlo mean."""
        return self.sd / math.sqrt(self.samples)

    def agrees(self, z: float = 3.0) -> bool:
        if self.exact is None:
            return True
        return abs(self.mean - self.exact) <= z * max(self.sigma, 1e-12)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sigma"] = self.sigma
        return d


def expected_collision_diagnostics(n: int, k: int, p: float, samples: int = 10_000,
                                   seed: int = 0, threads: int = 1,
                                   exact_cap: int = 5000) -> FirstMoment:
    """Monte Carlo mean of the violation count next to its exact expectation
    (when the exact count is within ``exact_cap`` candidate sets)."""
    from .oracle import first_moment

    exact = None
    if math.comb(n, k) <= exact_cap:
        exact = first_moment(n, k, p, exact_cap)
    if p == 0:
        return FirstMoment(n, k, p, samples, 0.0, 0.0, 0.0 if exact is not None else None, 0.0)
    spec = SampleSpec(n, k, p, 2, seed, samples)
    ok, xs = run_samples(spec, threads, count=True)
    sd = float(xs.std(ddof=1)) if samples > 1 else 0.0
    return FirstMoment(n, k, p, samples, float(xs.mean()), sd, exact, 1 - float(ok.mean()))


# ---------------------------------------------------------------------------
# output


def write_csv(points, fh, seed: int | None = None) -> None:
    if seed is not None:
        fh.write(f"# seed={seed}\n")
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for pt in points:
        r = pt.row()
        r["p"] = repr(float(r["p"]))
        r["p_hat"] = repr(float(r["p_hat"]))
        r["ci"] = repr(float(r["ci"]))
        r["mean_collisions"] = repr(float(r["mean_collisions"]))
        w.writerow(r)


def write_summary(result: SweepResult, fh) -> None:
    fh.write(json.dumps(result.summary()) + "\n")
