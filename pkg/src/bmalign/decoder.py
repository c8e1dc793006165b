"""MAP decoding over a finite signal class and Monte Carlo error estimation.

Decoding cost per observation is one table lookup per class member: each
member's full outcome distribution is precomputed once.  Monte Carlo trials
are reproducible and order-independent because trial i of a run with seed
sigma draws from the dedicated stream (sigma, N, i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from ._threads import thread_map, worker_count
from .observation import conditional_distribution
from .signals import BooleanSignal, ObservationModel, draw_shift, make_rng, restrict

Z_95 = 1.959963984540054


@dataclass(frozen=True)
class DecodeProblem:
    """A finite signal class with an exact prior and an observation model."""

    catalog: tuple[BooleanSignal, ...]
    prior: tuple[Fraction, ...]
    model: ObservationModel

    def __post_init__(self):
        if not self.catalog:
            raise ValueError("empty signal class")
        if len(set(self.catalog)) != len(self.catalog):
            raise ValueError("signal class members must be distinct")
        if any(x.length != self.model.length for x in self.catalog):
            raise ValueError("every class member must match the model length")
        if len(self.prior) != len(self.catalog):
            raise ValueError("prior and class sizes differ")
        if any(not isinstance(w, Fraction) for w in self.prior):
            raise TypeError("prior weights must be Fractions")
        if any(w <= 0 for w in self.prior):
            raise ValueError("prior must be positive on the whole class")
        if sum(self.prior) != 1:
            raise ValueError("prior must sum to exactly 1")

    @classmethod
    def with_uniform_prior(
        cls, catalog: Sequence[BooleanSignal], model: ObservationModel
    ) -> "DecodeProblem":
        members = tuple(catalog)
        share = Fraction(1, len(members))
        return cls(members, (share,) * len(members), model)

    @cached_property
    def _log_tables(self) -> np.ndarray:
        """(members, 2^K) log-probability tables; zero-mass outcomes get -inf."""
        p = float(self.model.flip_prob)
        rows = []
        for x in self.catalog:
            probs = conditional_distribution(x, self.model).probabilities(p)
            with np.errstate(divide="ignore"):
                rows.append(np.log(probs))
        return np.stack(rows)

    @cached_property
    def _log_prior(self) -> np.ndarray:
        return np.array([math.log(w) for w in self.prior])

    @cached_property
    def _lex_rank(self) -> np.ndarray:
        order = sorted(range(len(self.catalog)), key=lambda i: self.catalog[i])
        rank = np.empty(len(order), dtype=np.int64)
        for r, i in enumerate(order):
            rank[i] = r
        return rank

    @cached_property
    def _prior_cumulative(self) -> tuple[np.ndarray, int]:
        den = 1
        for w in self.prior:
            den = den * w.denominator // math.gcd(den, w.denominator)
        nums = np.cumsum(np.array([int(w * den) for w in self.prior], dtype=np.int64))
        return nums, den

    @cached_property
    def _base_codes(self) -> np.ndarray:
        """(members, L) packed restriction words, indexed by shift."""
        return np.array(
            [
                [restrict(x, s, self.model.kept).word for s in range(self.model.length)]
                for x in self.catalog
            ],
            dtype=np.int64,
        )


def log_likelihood(
    x: BooleanSignal, observations: Sequence[BooleanSignal], model: ObservationModel
) -> float:
    """Sum of log observation masses under x; -inf if any observation is impossible."""
    profile = conditional_distribution(x, model)
    with np.errstate(divide="ignore"):
        table = np.log(profile.probabilities(float(model.flip_prob)))
    total = 0.0
    for y in observations:
        if y.length != model.num_kept:
            raise ValueError("observation length does not match the model")
        total += table[y.word]
    return float(total)


def _codes(observations: Sequence[BooleanSignal], num_kept: int) -> np.ndarray:
    words = []
    for y in observations:
        if y.length != num_kept:
            raise ValueError("observation length does not match the model")
        words.append(y.word)
    return np.array(words, dtype=np.int64)


def _winner(problem: DecodeProblem, scores: np.ndarray) -> int:
    top = scores.max()
    tied = np.flatnonzero(scores == top)
    return int(tied[np.argmin(problem._lex_rank[tied])])


def map_decode(
    problem: DecodeProblem, observations: Sequence[BooleanSignal]
) -> BooleanSignal:
    """Maximum a posteriori class member; ties go to the lexicographically
    smallest signal, so the decoder is a deterministic function of its input."""
    codes = _codes(observations, problem.model.num_kept)
    scores = problem._log_prior.copy()
    if codes.size:
        scores = scores + problem._log_tables[:, codes].sum(axis=1)
    return problem.catalog[_winner(problem, scores)]


class TrialPoint(NamedTuple):
    """One Monte Carlo grid point."""

    num_observations: int
    trials: int
    errors: int
    pe: float
    lo95: float
    hi95: float


@dataclass(frozen=True)
class TrialSeries:
    """Monte Carlo error-rate estimates over a grid of observation counts."""

    seed: int
    points: tuple[TrialPoint, ...]
    config: dict | None = None

    def write_csv(self, stream) -> None:
        """RFC-4180-style rows with the experiment config echoed as a JSON comment."""
        import json

        if self.config is not None:
            stream.write("# config: " + json.dumps(self.config, sort_keys=True) + "\n")
        stream.write("N,trials,errors,pe,lo95,hi95\n")
        for pt in self.points:
            stream.write(
                f"{pt.num_observations},{pt.trials},{pt.errors},"
                f"{pt.pe:.10g},{pt.lo95:.10g},{pt.hi95:.10g}\n"
            )


def wilson_interval(errors: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _trial_errors(problem: DecodeProblem, num_obs: int, seed: int, start: int, stop: int) -> int:
    model = problem.model
    p = float(model.flip_prob)
    num_kept = model.num_kept
    pow2 = 1 << np.arange(num_kept, dtype=np.int64)
    log_tables = problem._log_tables
    log_prior = problem._log_prior
    base_codes = problem._base_codes
    cum, den = problem._prior_cumulative
    errors = 0
    for i in range(start, stop):
        rng = make_rng(seed, num_obs, i)
        planted = int(np.searchsorted(cum, rng.integers(0, den), side="right"))
        shifts = draw_shift(model.shifts, rng, size=num_obs)
        flips = rng.random((num_obs, num_kept)) < p
        codes = base_codes[planted][shifts] ^ (flips.astype(np.int64) @ pow2)
        scores = log_tables[:, codes].sum(axis=1) + log_prior
        if _winner(problem, scores) != planted:
            errors += 1
    return errors


def monte_carlo_pe(
    problem: DecodeProblem, num_observations: int, trials: int, seed: int
) -> TrialPoint:
    """Plant a signal from the prior, decode `num_observations` draws, repeat.

    Errors are exact mismatches of the planted member.  Trials are split into
    chunks across threads; per-trial streams make the count independent of
    the chunking.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    workers = worker_count(trials)
    chunk = max(256, -(-trials // (workers * 4)))
    spans = [(start, min(start + chunk, trials)) for start in range(0, trials, chunk)]
    counts = thread_map(
        lambda span: _trial_errors(problem, num_observations, seed, span[0], span[1]),
        spans,
    )
    errors = sum(counts)
    lo, hi = wilson_interval(errors, trials)
    return TrialPoint(num_observations, trials, errors, errors / trials, lo, hi)


def run_series(
    problem: DecodeProblem,
    n_grid: Sequence[int],
    trials: int,
    seed: int,
) -> TrialSeries:
    points = tuple(monte_carlo_pe(problem, n, trials, seed) for n in n_grid)
    config = {
        "model": problem.model.to_config(),
        "class": [str(x) for x in problem.catalog],
        "prior": [f"{w.numerator}/{w.denominator}" for w in problem.prior],
        "trials": trials,
        "seed": seed,
    }
    return TrialSeries(seed=seed, points=points, config=config)


class ExponentFit(NamedTuple):
    slope: float
    stderr: float
    excluded: tuple[TrialPoint, ...]


def exponent_fit(series: TrialSeries | Sequence[TrialPoint]) -> ExponentFit:
    """Weighted least-squares slope magnitude of log pe against N.

    Weights are inverse variances of log pe under the binomial model.  Grid
    points with zero errors (or none correct) carry no usable log estimate;
    they are excluded and reported.
    """
    points = series.points if isinstance(series, TrialSeries) else tuple(series)
    usable = [pt for pt in points if 0 < pt.errors < pt.trials]
    excluded = tuple(pt for pt in points if not 0 < pt.errors < pt.trials)
    if len(usable) < 3:
        raise ValueError("need at least three grid points with estimable pe")
    ns = np.array([pt.num_observations for pt in usable], dtype=np.float64)
    logs = np.array([math.log(pt.pe) for pt in usable])
    weights = np.array([pt.trials * pt.pe / (1.0 - pt.pe) for pt in usable])
    wsum = weights.sum()
    nbar = (weights * ns).sum() / wsum
    ybar = (weights * logs).sum() / wsum
    sxx = (weights * (ns - nbar) ** 2).sum()
    slope = (weights * (ns - nbar) * (logs - ybar)).sum() / sxx
    stderr = math.sqrt(1.0 / sxx)
    return ExponentFit(abs(slope), stderr, excluded)


def auto_n_grid(
    problem: DecodeProblem,
    points: int = 6,
    pe_hi: float = 0.22,
    pe_lo: float = 5e-4,
    pilot_trials: int = 4000,
    seed: int = 0,
) -> list[int]:
    """Geometric grid of observation counts targeting pe in roughly [pe_lo, pe_hi].

    A Chernoff-information guess fixes the scale; two small pilot runs then
    calibrate the subexponential prefactor.  Pilot draws use an offset seed so
    they never share streams with the measurement run.
    """
    from .exponent import class_exponent

    guess, _ = class_exponent(problem.catalog, problem.model)
    if not 0 < guess < math.inf:
        raise ValueError("class exponent is degenerate; pick the grid manually")
    pilot_seed = seed + 0x9E3779B9
    n_a = max(1, round(math.log(1 / pe_hi) / guess))
    n_b = max(n_a + 1, 2 * n_a)
    pe_a = monte_carlo_pe(problem, n_a, pilot_trials, pilot_seed).pe
    pe_b = monte_carlo_pe(problem, n_b, pilot_trials, pilot_seed).pe
    if pe_a > 0 and pe_b > 0 and pe_b < pe_a:
        rate = (math.log(pe_a) - math.log(pe_b)) / (n_b - n_a)
        intercept = math.log(pe_a) + rate * n_a
    else:
        rate = guess
        intercept = 0.0
    grid = []
    for i in range(points):
        target = pe_hi * (pe_lo / pe_hi) ** (i / (points - 1))
        n = max(1, round((intercept - math.log(target)) / rate))
        if n not in grid:
            grid.append(n)
    return sorted(grid)
