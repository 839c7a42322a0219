"""Ordered Rayleigh-power channel gains: sampling and pair densities.

Gains are squared magnitudes of unit-variance Rayleigh fades, i.e. i.i.d.
unit-mean exponentials, indexed 1..M in ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .config import InvalidConfigError


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the M ascending ordered gains."""

    gains: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or g.size < 2:
            raise InvalidConfigError("a draw needs a vector of at least 2 gains")
        if np.any(g < 0.0) or not np.all(np.isfinite(g)):
            raise InvalidConfigError("gains must be finite and nonnegative")
        g = np.sort(g)  # ties from rounding are harmless; keep order canonical
        object.__setattr__(self, "gains", g)

    @property
    def M(self) -> int:
        return self.gains.size

    def gain(self, index: int) -> float:
        """Gain of the user with 1-based ascending rank ``index``."""
        return float(self.gains[index - 1])


def sample_ordered_gains(M: int, rng: np.random.Generator) -> ChannelDraw:
    """Draw M i.i.d. unit-mean exponentials and sort ascending."""
    if M < 2:
        raise InvalidConfigError(f"need at least 2 users, got M={M}")
    u = rng.random(M)
    return ChannelDraw(np.sort(-np.log1p(-u)))


def sample_gain_matrix(M: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized sampler: (size, M) array of ascending ordered gains."""
    u = rng.random((size, M))
    g = -np.log1p(-u)
    g.sort(axis=1)
    return g


@dataclass(frozen=True)
class OrderPairDensity:
    """Joint density of the (m, n)-th ascending order statistics.

    ``joint_pdf`` is evaluated at (x, y) where x is the smaller of the two
    gains: x = gain of rank min(m, n), y = gain of rank max(m, n).
    """

    M: int
    m: int
    n: int

    def __post_init__(self):
        if self.M < 2:
            raise InvalidConfigError(f"need at least 2 users, got M={self.M}")
        for name in ("m", "n"):
            idx = getattr(self, name)
            if not 1 <= idx <= self.M:
                raise InvalidConfigError(f"{name}={idx} outside 1..{self.M}")
        if self.m == self.n:
            raise InvalidConfigError("order-statistic pair needs m != n")

    @property
    def lo_rank(self) -> int:
        return min(self.m, self.n)

    @property
    def hi_rank(self) -> int:
        return max(self.m, self.n)

    @cached_property
    def prefactor(self) -> float:
        i, j = self.lo_rank, self.hi_rank
        return math.factorial(self.M) / (
            math.factorial(i - 1) * math.factorial(j - i - 1) * math.factorial(self.M - j)
        )

    @cached_property
    def exp_mixture(self):
        """Expansion f(x, y) = sum_k w_k exp(-a_k x - b_k y) on 0 < x < y.

        Expands the CDF powers of the order-statistic density into signed
        exponentials; a_k = l+p+1, b_k = M - lo_rank - p.
        """
        i, j = self.lo_rank, self.hi_rank
        w, a, b = [], [], []
        for p in range(j - i):
            c_p = math.comb(j - i - 1, p) * (-1.0) ** (j - i - 1 - p)
            for l in range(i):
                c_l = math.comb(i - 1, l) * (-1.0) ** l
                w.append(self.prefactor * c_p * c_l)
                a.append(l + p + 1)
                b.append(self.M - i - p)
        return (np.array(w), np.array(a, dtype=float), np.array(b, dtype=float))


def joint_pdf(pair: OrderPairDensity, x, y):
    """Exact pair density at (x, y); zero outside the wedge 0 <= x < y.

    Evaluated in the product form (CDF powers), which stays accurate for
    small gains where the signed exponential expansion cancels.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i, j = pair.lo_rank, pair.hi_rank
    with np.errstate(invalid="ignore"):
        val = (pair.prefactor
               * (-np.expm1(-x)) ** (i - 1)
               * (-np.expm1(-(y - x))) ** (j - i - 1)
               * np.exp(-(j - i - 1) * x - (pair.M - j + 1) * y - x))
    val = np.where((x >= 0) & (y > x), val, 0.0)
    return val if val.ndim else float(val)


@lru_cache(maxsize=64)
def _leggauss(n_pts: int):
    return np.polynomial.legendre.leggauss(max(n_pts, 1))


def mass_upper_interval(pair: OrderPairDensity, x, lo, hi):
    """Integral of the pair density over the larger gain in (lo, hi).

    The smaller gain is fixed at ``x``; the interval is clipped to the
    ordered wedge (larger gain > x).  Substituting v = exp(-y) makes the
    integrand a polynomial of degree M - lo_rank - 1, integrated exactly
    by Gauss-Legendre; every factor is formed cancellation-free, so the
    result keeps full relative precision even for masses ~1e-300.
    """
    x, lo, hi = map(lambda v: np.asarray(v, dtype=float),
                    np.broadcast_arrays(x, lo, hi))
    i, j, M = pair.lo_rank, pair.hi_rank, pair.M
    lo = np.maximum(lo, x)
    ok = (hi > lo) & (x >= 0)
    lo_s = np.where(ok, lo, 0.0)
    hi_s = np.where(ok, hi, 1.0)
    x_s = np.where(ok, x, 0.0)
    e_lo = np.exp(-lo_s)
    width = -e_lo * np.expm1(-(hi_s - lo_s))          # exp(-lo) - exp(-hi)
    head_gap = -np.exp(-x_s) * np.expm1(-(lo_s - x_s))  # exp(-x) - exp(-lo)
    nodes, wts = _leggauss((M - i + 1) // 2 + 1)
    acc = 0.0
    for xi, wt in zip(nodes, wts):
        frac = 0.5 * (1.0 - xi)
        gap = head_gap + frac * width                 # exp(-x) - v
        v = e_lo - frac * width                       # v = exp(-y)
        acc = acc + wt * gap ** (j - i - 1) * v ** (M - j)
    inner = 0.5 * width * acc
    out = (pair.prefactor * (-np.expm1(-x_s)) ** (i - 1) * np.exp(-x_s) * inner)
    out = np.where(ok, out, 0.0)
    return out if out.ndim else float(out)


def mass_lower_interval(pair: OrderPairDensity, y, lo, hi):
    """Integral of the pair density over the smaller gain in (lo, hi).

    The larger gain is fixed at ``y``; counterpart of
    ``mass_upper_interval`` with the same exactness and stability.
    """
    y, lo, hi = map(lambda v: np.asarray(v, dtype=float),
                    np.broadcast_arrays(y, lo, hi))
    i, j, M = pair.lo_rank, pair.hi_rank, pair.M
    lo = np.maximum(lo, 0.0)
    hi = np.minimum(hi, y)
    ok = (hi > lo) & (y >= 0)
    lo_s = np.where(ok, lo, 0.0)
    hi_s = np.where(ok, hi, 1.0)
    y_s = np.where(ok, np.maximum(y, hi_s), 1.0)
    e_hi = np.exp(-hi_s)
    width = -np.exp(-lo_s) * np.expm1(-(hi_s - lo_s))  # exp(-lo) - exp(-hi)
    tail_gap = -e_hi * np.expm1(-(y_s - hi_s))         # exp(-hi) - exp(-y)
    one_m_elo = -np.expm1(-lo_s)                       # 1 - exp(-lo)
    nodes, wts = _leggauss(j // 2 + 1)
    acc = 0.0
    for xi, wt in zip(nodes, wts):
        frac = 0.5 * (1.0 + xi)
        gap = tail_gap + frac * width                  # u - exp(-y)
        one_m_u = one_m_elo + (1.0 - frac) * width     # 1 - u
        acc = acc + wt * one_m_u ** (i - 1) * gap ** (j - i - 1)
    inner = 0.5 * width * acc
    out = pair.prefactor * np.exp(-(M - j + 1) * y_s) * inner
    out = np.where(ok, out, 0.0)
    return out if out.ndim else float(out)


def joint_pdf_near_zero(pair: OrderPairDensity, x, y):
    """Leading-order polynomial form of the pair density for x, y << 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i, j = pair.lo_rank, pair.hi_rank
    val = np.zeros(np.broadcast(x, y).shape)
    for p in range(j - i):
        coef = pair.prefactor * math.comb(j - i - 1, p) * (-1.0) ** p
        val = val + coef * y ** (j - i - 1 - p) * x ** (i - 1 + p)
    val = np.where((x >= 0) & (y > x), val, 0.0)
    return val if val.ndim else float(val)
