"""Pairwise Chernoff information and its low-SNR leading term.

The error exponent reported everywhere is the magnitude E >= 0 in
P_e ~ exp(-N E); for a pair of signals E is the classical Chernoff
information of their observation distributions, and near p = 1/2 it scales
like a known rational constant times SNR^t, t the distinguishing order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from ._threads import thread_map
from .autocorr import (
    NotFound,
    OrbitCatalog,
    autocorr_sq_diff,
    min_order,
)
from .observation import (
    conditional_distribution,
    epsilon_expansion,
    first_difference_order,
    hamming_profile,
)
from .signals import BooleanSignal, DeletionPattern, ObservationModel, ShiftDistribution

LAMBDA_TOL = 1e-12
MAX_TERNARY_ITERS = 200


def _ternary_min(objective) -> tuple[float, float]:
    """Minimize a convex function on [0, 1]; endpoints are checked explicitly."""
    lo, hi = 0.0, 1.0
    for _ in range(MAX_TERNARY_ITERS):
        if hi - lo <= LAMBDA_TOL:
            break
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if objective(m1) <= objective(m2):
            hi = m2
        else:
            lo = m1
    lam = 0.5 * (lo + hi)
    candidates = [(objective(0.0), 0.0), (objective(1.0), 1.0), (objective(lam), lam)]
    value, best = min(candidates)
    return best, value


def chernoff_information(mu1: Sequence, mu2: Sequence) -> float:
    """Chernoff information between two distributions on a common finite set.

    Computed as -min over lambda in [0, 1] of log sum mu1^lambda mu2^(1-lambda),
    restricted to the common support (outcomes where either mass vanishes
    contribute nothing for interior lambda).  Returns math.inf when the
    supports are disjoint.
    """
    a = np.asarray([float(v) for v in mu1], dtype=np.float64)
    b = np.asarray([float(v) for v in mu2], dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("distributions must have the same number of outcomes")
    if (a < 0).any() or (b < 0).any():
        raise ValueError("negative mass")
    if abs(a.sum() - 1.0) > 1e-12 or abs(b.sum() - 1.0) > 1e-12:
        raise ValueError("distributions must sum to 1")
    common = (a > 0) & (b > 0)
    if not common.any():
        return math.inf
    log1 = np.log(a[common])
    log2 = np.log(b[common])

    def objective(lam: float) -> float:
        v = lam * log1 + (1.0 - lam) * log2
        top = v.max()
        return top + math.log(np.exp(v - top).sum())

    _, value = _ternary_min(objective)
    return max(-value, 0.0)


def chernoff_from_deltas(deltas1: np.ndarray, deltas2: np.ndarray) -> float:
    """Chernoff information from centered masses 2^K mu - 1 on a full support.

    Works entirely in expm1/log1p space, so values far below float epsilon
    relative to 1 are still computed to full precision; this is what makes
    the SNR^t convergence measurable at tiny eps.
    """
    log1 = np.log1p(deltas1)
    log2 = np.log1p(deltas2)
    n = len(log1)

    def objective(lam: float) -> float:
        h = lam * log1 + (1.0 - lam) * log2
        return math.log1p(math.fsum(np.expm1(h)) / n)

    _, value = _ternary_min(objective)
    return max(-value, 0.0)


def leading_term(
    x1: BooleanSignal,
    x2: BooleanSignal,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
    max_order: int = 6,
) -> tuple[int, Fraction]:
    """Distinguishing order t and the exact coefficient of SNR^t in the
    pairwise exponent: 2^(4t-3) / t! times the squared autocorrelation gap."""
    order = min_order(x1, x2, kept, shifts, max_order)
    if isinstance(order, NotFound):
        raise ValueError(f"pair not distinguished by autocorrelations up to order {order.limit}")
    gap = autocorr_sq_diff(x1, x2, order, kept, shifts)
    return order, Fraction(2 ** (4 * order - 3), factorial(order)) * gap


def class_exponent(
    catalog: OrbitCatalog, model: ObservationModel
) -> tuple[float, tuple[BooleanSignal, BooleanSignal]]:
    """Minimum pairwise Chernoff information over the catalog, with its pair.

    Ties break toward the lexicographically first pair.  Rejects p = 1/2,
    where every pairwise value is 0 and the minimum carries no information.
    """
    if float(model.flip_prob) == 0.5:
        raise ValueError("flip probability 1/2 gives a degenerate (zero) exponent")
    reps = catalog.representatives
    if len(reps) < 2:
        raise ValueError("catalog must contain at least two representatives")
    p = float(model.flip_prob)
    vectors = [
        conditional_distribution(x, model).probabilities(p) for x in reps
    ]
    pairs = [(i, j) for i in range(len(reps)) for j in range(i + 1, len(reps))]
    values = thread_map(lambda ij: chernoff_information(vectors[ij[0]], vectors[ij[1]]), pairs)
    best_value = math.inf
    best_pair = pairs[0]
    for (i, j), value in zip(pairs, values):
        if value < best_value:
            best_value = value
            best_pair = (i, j)
    return best_value, (reps[best_pair[0]], reps[best_pair[1]])


@dataclass(frozen=True)
class ExponentReport:
    """Leading-order audit for one signal pair.

    chernoff_samples holds (flip probability, Chernoff information) pairs for
    a decreasing eps grid; fitted_limit extrapolates C / SNR^t to SNR -> 0 and
    should approach leading_coeff.
    """

    pair: tuple[BooleanSignal, BooleanSignal]
    order: int
    derivative_order: int
    gap: Fraction
    leading_coeff: Fraction
    chernoff_samples: tuple[tuple[float, float], ...]
    fitted_limit: float

    @property
    def ratios(self) -> list[float]:
        """C / SNR^order along the sample grid."""
        return [
            value / (p - 0.5) ** (2 * self.order) for p, value in self.chernoff_samples
        ]

    @property
    def relative_gap(self) -> float:
        target = float(self.leading_coeff)
        return abs(self.fitted_limit - target) / target

    @property
    def loglog_slope(self) -> float:
        """Slope of log C against log SNR; near the distinguishing order."""
        snrs = np.array([(p - 0.5) ** 2 for p, _ in self.chernoff_samples])
        values = np.array([value for _, value in self.chernoff_samples])
        return float(np.polyfit(np.log(snrs), np.log(values), 1)[0])

    def to_dict(self) -> dict:
        return {
            "pair": [str(self.pair[0]), str(self.pair[1])],
            "t": self.order,
            "s": self.derivative_order,
            "B_t": f"{self.gap.numerator}/{self.gap.denominator}",
            "leading_coeff": f"{self.leading_coeff.numerator}/{self.leading_coeff.denominator}",
            "leading_coeff_float": float(self.leading_coeff),
            "samples": [{"p": p, "C": value} for p, value in self.chernoff_samples],
            "ratios": self.ratios,
            "fitted_limit": self.fitted_limit,
            "relative_gap": self.relative_gap,
            "loglog_slope": self.loglog_slope,
        }


def extrapolate_to_zero(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Neville polynomial extrapolation of y(x) to x = 0."""
    vals = [float(y) for y in ys]
    pts = [float(x) for x in xs]
    n = len(vals)
    if n == 0:
        raise ValueError("no points")
    for level in range(1, n):
        for i in range(n - level):
            vals[i] = (vals[i + 1] * pts[i] - vals[i] * pts[i + level]) / (
                pts[i] - pts[i + level]
            )
    return vals[0]


def expansion_convergence(
    x1: BooleanSignal,
    x2: BooleanSignal,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
    eps_grid: Sequence[float],
    max_order: int = 6,
) -> ExponentReport:
    """Audit the SNR^t leading term on a decreasing eps grid.

    Computes the exact-profile Chernoff information at each p = 1/2 - eps,
    the ratios C / SNR^t, and a Richardson-style extrapolation of the ratio
    to SNR = 0 for comparison against the exact leading coefficient.
    """
    eps_list = [float(e) for e in eps_grid]
    if any(not 0 < e < 0.5 for e in eps_list):
        raise ValueError("eps values must lie in (0, 1/2)")
    if any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    order, coeff = leading_term(x1, x2, kept, shifts, max_order)
    expansion1 = epsilon_expansion(hamming_profile(x1, kept, shifts))
    expansion2 = epsilon_expansion(hamming_profile(x2, kept, shifts))
    deriv = first_difference_order(expansion1, expansion2)
    if deriv != order:
        raise AssertionError(
            f"distribution derivative order {deriv} disagrees with autocorrelation order {order}"
        )
    samples = []
    for eps in eps_list:
        value = chernoff_from_deltas(
            expansion1.centered_deltas(eps), expansion2.centered_deltas(eps)
        )
        samples.append((0.5 - eps, value))
    gap = autocorr_sq_diff(x1, x2, order, kept, shifts)
    snrs = [e * e for e in eps_list]
    ratios = [value / s**order for (_, value), s in zip(samples, snrs)]
    fitted = extrapolate_to_zero(snrs, ratios)
    return ExponentReport(
        pair=(x1, x2),
        order=order,
        derivative_order=order,
        gap=gap,
        leading_coeff=coeff,
        chernoff_samples=tuple(samples),
        fitted_limit=fitted,
    )
