"""Paired Wilcoxon signed-rank and Shapiro-Wilk tests, R-compatible.

The published replication numbers (V and p values) are only reproducible
under the semantics of R's ``wilcox.test`` and ``shapiro.test``, so those
semantics are implemented here precisely:

- Wilcoxon: zero differences are dropped (count recorded), absolute
  differences are mid-ranked, and V is the rank sum of the positive
  differences. The exact two-sided p is used iff fewer than 50 pairs remain
  *and* there were no ties and no zeros; otherwise the normal approximation
  applies, with tie-corrected variance ``n(n+1)(2n+1)/24 - sum(t^3-t)/48``
  and continuity correction ``sign(V - mean) * 0.5``.
- Shapiro-Wilk: the Royston AS R94 approximation (the algorithm behind both
  R and the usual scientific-Python implementation), with the high-precision
  AS 241 normal quantile.

Tie detection happens on double-precision differences, exactly as a user
feeding the same columns to R would get: values that are equal on paper but
differ in the last ulp do not tie.

Everything here is a pure function of its inputs and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence


class StatsMethod(Enum):
    SHAPIRO_WILK = "ShapiroWilk"
    WILCOXON_EXACT = "WilcoxonSignedRankExact"
    WILCOXON_NORMAL_APPROX = "WilcoxonSignedRankNormalApprox"


class StatsError(ValueError):
    pass


class LengthMismatchError(StatsError):
    pass


class TooFewSamplesError(StatsError):
    pass


class TooManySamplesError(StatsError):
    pass


class AllZeroDifferencesError(StatsError):
    pass


class ConstantInputError(StatsError):
    pass


@dataclass(frozen=True)
class StatsResult:
    """Outcome of a hypothesis test.

    ``statistic`` is W for Shapiro-Wilk and V (positive-rank sum) for
    Wilcoxon. ``n_used`` is the number of pairs left after zero removal for
    Wilcoxon, and the sample size for Shapiro-Wilk.
    """

    method: StatsMethod
    statistic: float
    p_value: float
    n_used: int
    ties_present: bool = False
    zeros_dropped: int = 0


# -- Wilcoxon signed-rank ----------------------------------------------------


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float]) -> StatsResult:
    """Two-sided paired Wilcoxon signed-rank test of ``x`` against ``y``."""
    if len(x) != len(y):
        raise LengthMismatchError(f"paired vectors differ in length: "
                                  f"{len(x)} vs {len(y)}")
    if len(x) < 2:
        raise TooFewSamplesError("need at least 2 pairs")
    diffs = [float(a) - float(b) for a, b in zip(x, y)]
    nonzero = [d for d in diffs if d != 0.0]
    zeros_dropped = len(diffs) - len(nonzero)
    if not nonzero:
        raise AllZeroDifferencesError("every pair ties exactly")

    n = len(nonzero)
    magnitudes = [abs(d) for d in nonzero]
    ranks = _midranks(magnitudes)
    v = sum(rank for rank, d in zip(ranks, nonzero) if d > 0)
    ties = len(set(magnitudes)) != len(magnitudes)

    if n < 50 and not ties and zeros_dropped == 0:
        p = _exact_two_sided_p(int(round(v)), n)
        method = StatsMethod.WILCOXON_EXACT
    else:
        p = _approx_two_sided_p(v, n, magnitudes)
        method = StatsMethod.WILCOXON_NORMAL_APPROX
    return StatsResult(method=method, statistic=v, p_value=p, n_used=n,
                       ties_present=ties, zeros_dropped=zeros_dropped)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j + 2) / 2.0  # average of 1-based ranks i+1..j+1
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    return ranks


def signed_rank_distribution(n: int) -> list[int]:
    """Counts of subsets of ``{1..n}`` by rank sum; index ``s`` holds the
    number of sign assignments with positive-rank sum ``s`` (out of ``2^n``)."""
    counts = [1]
    for rank in range(1, n + 1):
        nxt = counts + [0] * rank
        for total, ways in enumerate(counts):
            nxt[total + rank] += ways
        counts = nxt
    return counts


def _exact_two_sided_p(v: int, n: int) -> float:
    counts = signed_rank_distribution(n)
    total = 2 ** n
    if v > n * (n + 1) / 4:
        tail = sum(counts[v:])
    else:
        tail = sum(counts[: v + 1])
    return min(2.0 * tail / total, 1.0)


def _approx_two_sided_p(v: float, n: int, magnitudes: Sequence[float]) -> float:
    tie_sizes: dict[float, int] = {}
    for m in magnitudes:
        tie_sizes[m] = tie_sizes.get(m, 0) + 1
    correction_for_ties = sum(t ** 3 - t for t in tie_sizes.values()) / 48.0
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0 - correction_for_ties
    sigma = math.sqrt(sigma2)
    centred = v - n * (n + 1) / 4.0
    continuity = 0.5 if centred > 0 else (-0.5 if centred < 0 else 0.0)
    z = (centred - continuity) / sigma
    return min(2.0 * min(_norm_sf(z), 1.0 - _norm_sf(z)), 1.0)


# -- Shapiro-Wilk (Royston AS R94) -------------------------------------------

_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)
_SMALL = 1e-19


def shapiro_wilk(x: Sequence[float]) -> StatsResult:
    """Shapiro-Wilk normality test for ``3 <= len(x) <= 5000``."""
    n = len(x)
    if n < 3:
        raise TooFewSamplesError("need at least 3 observations")
    if n > 5000:
        raise TooManySamplesError("at most 5000 observations supported")
    data = sorted(float(v) for v in x)
    value_range = data[-1] - data[0]
    if value_range < _SMALL:
        raise ConstantInputError("all observations are (numerically) identical")

    w = _w_statistic(data)
    p = _w_p_value(w, n)
    return StatsResult(method=StatsMethod.SHAPIRO_WILK, statistic=w,
                       p_value=p, n_used=n)


def _w_statistic(data: list[float]) -> float:
    n = len(data)
    half = n // 2
    if n == 3:
        coeffs = [math.sqrt(0.5)]
    else:
        an25 = n + 0.25
        m = [_ppnd16((i - 0.375) / an25) for i in range(1, half + 1)]
        summ2 = 2.0 * sum(v * v for v in m)
        ssumm2 = math.sqrt(summ2)
        rsn = 1.0 / math.sqrt(n)
        a1 = _poly(_C1, rsn) - m[0] / ssumm2
        if n > 5:
            a2 = _poly(_C2, rsn) - m[1] / ssumm2
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
                            / (1.0 - 2.0 * a1 ** 2 - 2.0 * a2 ** 2))
            coeffs = [a1, a2] + [-v / fac for v in m[2:]]
        else:
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1 ** 2))
            coeffs = [a1] + [-v / fac for v in m[1:]]

    # Antisymmetric coefficient vector: -a_i at the low end, +a_i mirrored.
    c = [0.0] * n
    for i, a in enumerate(coeffs):
        c[i] = -a
        c[n - 1 - i] = a

    value_range = data[-1] - data[0]
    xs = [v / value_range for v in data]
    x_mean = sum(xs) / n
    c_mean = sum(c) / n
    ssa = sum((ci - c_mean) ** 2 for ci in c)
    ssx = sum((xi - x_mean) ** 2 for xi in xs)
    sax = sum((ci - c_mean) * (xi - x_mean) for ci, xi in zip(c, xs))
    ssassx = math.sqrt(ssa * ssx)
    # 1 - W computed as a product to avoid cancellation for W near 1.
    w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx)
    return 1.0 - w1


def _w_p_value(w: float, n: int) -> float:
    if n == 3:
        stqr = math.asin(math.sqrt(0.75))
        p = (6.0 / math.pi) * (math.asin(math.sqrt(w)) - stqr)
        return min(max(p, 0.0), 1.0)
    y = math.log(1.0 - w)
    if n <= 11:
        gamma = _poly(_G, float(n))
        if y >= gamma:
            return _SMALL
        y = -math.log(gamma - y)
        mu = _poly(_C3, float(n))
        sigma = math.exp(_poly(_C4, float(n)))
    else:
        log_n = math.log(n)
        mu = _poly(_C5, log_n)
        sigma = math.exp(_poly(_C6, log_n))
    return _norm_sf((y - mu) / sigma)


def _poly(coefficients: Sequence[float], x: float) -> float:
    result = coefficients[0]
    power = 1.0
    for c in coefficients[1:]:
        power *= x
        result += c * power
    return result


# -- normal distribution helpers ---------------------------------------------


def _norm_sf(z: float) -> float:
    """Upper tail of the standard normal distribution."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _ppnd16(p: float) -> float:
    """Normal quantile function, AS 241 algorithm PPND16 (~1e-16 accuracy)."""
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    r = p if q < 0 else 1.0 - p
    if r <= 0.0:
        raise ValueError("quantile argument out of range")
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                    + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                  + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                    + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                  + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                + 2.05319162663775882187e0) * r + 1.0)
    else:
        r -= 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                  + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                    + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                  + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
    value = num / den
    return -value if q < 0 else value
