"""Truncated Poisson distribution: Poisson(rate) conditioned to be >= 1.

Everything downstream hangs off the mean map ``f(rate) = rate / (1 - e^-rate)``,
which is strictly increasing from (0, inf) onto (1, inf). Provides the
inverse solve, pmf, exact sampling, the size-biased law (which collapses
to a plain Poisson), and Chernoff-style tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InputError

__all__ = [
    "TruncatedPoissonParams",
    "implied_mean",
    "implied_variance",
    "solve_rate",
    "pmf",
    "pmf_table",
    "size_biased_pmf",
    "sample_truncated",
    "sample_poisson",
    "tail_bounds",
]

_LN2 = math.log(2.0)


def implied_mean(rate: float) -> float:
    """Mean of Poisson(rate) conditioned on >= 1, i.e. rate / (1 - e^-rate)."""
    if rate <= 0:
        raise DomainError(f"rate must be positive, got {rate}")
    return rate / -math.expm1(-rate)


def implied_variance(rate: float) -> float:
    """Variance of Poisson(rate) conditioned on >= 1."""
    mu = implied_mean(rate)
    return (rate + rate * rate) / -math.expm1(-rate) - mu * mu


@dataclass(frozen=True)
class TruncatedPoissonParams:
    """Parameter bundle: underlying Poisson rate, conditional mean and variance.

    Invariants: ``mean == rate / (1 - e^-rate) > 1`` and ``variance > 0``.
    """

    rate: float
    mean: float
    variance: float

    @classmethod
    def from_rate(cls, rate: float) -> "TruncatedPoissonParams":
        if not math.isfinite(rate):
            raise InputError(f"rate must be finite, got {rate}")
        return cls(rate=rate, mean=implied_mean(rate), variance=implied_variance(rate))

    @classmethod
    def from_mean(cls, mean: float) -> "TruncatedPoissonParams":
        return solve_rate(mean)


def _mean_derivative(rate: float) -> float:
    # d/da [a / (1 - e^-a)] = 1/(1-e^-a) - a e^-a / (1-e^-a)^2
    denom = -math.expm1(-rate)
    return 1.0 / denom - rate * math.exp(-rate) / (denom * denom)


def solve_rate(mean: float) -> TruncatedPoissonParams:
    """Invert the mean map: find rate with rate / (1 - e^-rate) == mean.

    Bisection on a bracketing interval (the map is monotone), then a few
    Newton steps to push the relative residual below 1e-12.

    Raises DomainError for mean <= 1 (the map's range is (1, inf)) and
    InputError for non-finite input.
    """
    if not isinstance(mean, (int, float)) or not math.isfinite(mean):
        raise InputError(f"mean must be a finite number, got {mean!r}")
    if mean <= 1.0:
        raise DomainError(
            f"no solution for mean={mean}: the conditioned mean exceeds 1 for every positive rate"
        )
    lo, hi = 1e-12, max(50.0, 2.0 * mean)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if implied_mean(mid) < mean:
            lo = mid
        else:
            hi = mid
    rate = 0.5 * (lo + hi)
    for _ in range(3):
        rate -= (implied_mean(rate) - mean) / _mean_derivative(rate)
    if abs(implied_mean(rate) - mean) > 1e-12 * mean:
        raise DomainError(f"rate solve did not converge for mean={mean}")
    return TruncatedPoissonParams(
        rate=rate, mean=implied_mean(rate), variance=implied_variance(rate)
    )


def pmf(params: TruncatedPoissonParams, k) -> float | np.ndarray:
    """P(Y = k) for the truncated distribution; 0 at k = 0.

    Evaluated in log space so large k cannot overflow rate**k / k!.
    Accepts a scalar or an integer array.
    """
    rate = params.rate
    log_norm = math.log(-math.expm1(-rate))
    if np.isscalar(k):
        if k < 0:
            raise InputError(f"k must be >= 0, got {k}")
        if k == 0:
            return 0.0
        return math.exp(-rate + k * math.log(rate) - math.lgamma(k + 1) - log_norm)
    karr = np.asarray(k)
    if (karr < 0).any():
        raise InputError("k must be >= 0")
    log_p = -rate + karr * math.log(rate) - _lgamma_arr(karr + 1) - log_norm
    out = np.exp(log_p)
    out[karr == 0] = 0.0
    return out


def size_biased_pmf(params: TruncatedPoissonParams, k) -> float | np.ndarray:
    """Pmf of the size-biased-and-shifted truncated Poisson.

    Biasing by k and shifting down by one cancels the truncation exactly,
    leaving plain Poisson(rate); this is the offspring law seen along a
    uniformly chosen edge.
    """
    rate = params.rate
    if np.isscalar(k):
        if k < 0:
            raise InputError(f"k must be >= 0, got {k}")
        return math.exp(-rate + k * math.log(rate) - math.lgamma(k + 1))
    karr = np.asarray(k)
    if (karr < 0).any():
        raise InputError("k must be >= 0")
    return np.exp(-rate + karr * math.log(rate) - _lgamma_arr(karr + 1))


def _lgamma_arr(x: np.ndarray) -> np.ndarray:
    return np.array([math.lgamma(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))


def pmf_table(params: TruncatedPoissonParams, kmax: int | None = None) -> np.ndarray:
    """Probabilities for k = 1..K as a vector (index 0 holds P(Y=1)).

    With kmax=None the table extends until the tail mass is below float
    resolution, so cumulative sums reach 1 up to rounding.
    """
    rate = params.rate
    norm = -math.expm1(-rate)
    probs = []
    p = math.exp(-rate) * rate / norm  # P(Y = 1)
    cum = 0.0
    k = 1
    hard_cap = int(rate + 60 + 40 * math.sqrt(rate)) if kmax is None else kmax
    while k <= hard_cap:
        probs.append(p)
        cum += p
        if kmax is None and 1.0 - cum < 1e-17:
            break
        k += 1
        p *= rate / k
    return np.asarray(probs)


@lru_cache(maxsize=128)
def _sampler_cdf(rate: float) -> tuple[np.ndarray, bool]:
    params = TruncatedPoissonParams.from_rate(rate)
    cdf = np.cumsum(pmf_table(params))
    # when the table absorbs all float-resolvable mass, u in [0, 1) cannot
    # land past the last entry and the overflow clamp can be skipped
    complete = bool(cdf[-1] >= 1.0 - 2.0**-53)
    return cdf, complete


def sample_truncated(
    params: TruncatedPoissonParams, rng: np.random.Generator, size: int | None = None
):
    """Exact samples of the truncated distribution (never 0).

    Inverse CDF against a precomputed table for rate <= 30 (the support
    is short there); rejection from Poisson(rate) discarding zeros above,
    where zeros are vanishingly rare.
    """
    scalar = size is None
    count = 1 if scalar else int(size)
    if params.rate <= 30.0:
        cdf, complete = _sampler_cdf(params.rate)
        u = rng.random(count)
        # side="right" maps u < cdf[0] to 0, i.e. k = 1
        out = np.searchsorted(cdf, u, side="right")
        if not complete:
            np.clip(out, 0, len(cdf) - 1, out=out)
        out += 1
    else:
        out = rng.poisson(params.rate, count)
        zero = out == 0
        while zero.any():
            out[zero] = rng.poisson(params.rate, int(zero.sum()))
            zero = out == 0
    if scalar:
        return int(out[0])
    return out if out.dtype == np.int64 else out.astype(np.int64)


def sample_poisson(rate: float, rng: np.random.Generator, size: int | None = None):
    """Plain Poisson samples (numpy backend), validated rate >= 0."""
    if not math.isfinite(rate) or rate < 0:
        raise InputError(f"rate must be finite and >= 0, got {rate}")
    if size is None:
        return int(rng.poisson(rate))
    return rng.poisson(rate, int(size)).astype(np.int64)


def tail_bounds(rate: float, upper_multiple: float) -> tuple[float, float]:
    """Chernoff bounds for Z ~ truncated Poisson whose underlying rate is ``rate``.

    Returns ``(lower, upper)`` with
      P(Z <= rate/2)              <= lower = exp(-0.15 * rate)
      P(Z >= upper_multiple*rate) <= upper = exp(rate - upper_multiple*rate*ln 2) / (1 - e^-rate)

    The upper bound requires upper_multiple > 1/ln 2.
    """
    if not math.isfinite(rate) or rate <= 0:
        raise InputError(f"rate must be finite and positive, got {rate}")
    if upper_multiple <= 1.0 / _LN2:
        raise DomainError(
            f"upper_multiple must exceed 1/ln 2 ~= {1.0 / _LN2:.4f}, got {upper_multiple}"
        )
    lower = math.exp(-0.15 * rate)
    upper = math.exp(rate - upper_multiple * rate * _LN2) / -math.expm1(-rate)
    return lower, upper
