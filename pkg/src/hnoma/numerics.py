"""Shared numeric kernels: quadrature, erf helpers, summation, RNG streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special


class IntegrationFailureError(RuntimeError):
    """Adaptive integration did not converge; carries the partial value."""

    def __init__(self, value, err_estimate, message="integration did not converge"):
        super().__init__(f"{message}: value={value!r}, err={err_estimate!r}")
        self.value = value
        self.err_estimate = err_estimate


# ---------------------------------------------------------------------------
#  Gauss-Chebyshev quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def chebyshev_nodes(n_c: int):
    """Nodes t_i = cos((2i-1)pi/(2 n_c)) and weights sqrt(1 - t_i^2)."""
    if n_c < 1:
        raise ValueError(f"n_c={n_c} must be >= 1")
    i = np.arange(1, n_c + 1)
    t = np.cos((2 * i - 1) * np.pi / (2 * n_c))
    return t, np.sqrt(1.0 - t * t)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node count and interval for one Gauss-Chebyshev rule."""

    n_c: int
    a: float
    b: float

    @property
    def nodes(self):
        t, _ = chebyshev_nodes(self.n_c)
        return 0.5 * (self.a + self.b) + 0.5 * (self.b - self.a) * t


def gauss_chebyshev(f, a: float, b: float, n_c: int) -> float:
    """Approximate the integral of ``f`` over [a, b].

    Uses the sqrt(1 - t^2)-weighted node sum.  Those weights are only the
    leading approximation of the exact (Fejer) weights for these nodes, so
    the error decays like n_c^-2 even for analytic integrands; use
    ``fejer_quadrature`` when more than ~5 digits are needed.
    ``f`` must accept an ndarray of evaluation points.
    """
    if b <= a:
        return 0.0
    t, w = chebyshev_nodes(n_c)
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * t
    return float((np.pi / n_c) * half * np.sum(np.asarray(f(x), dtype=float) * w))


@lru_cache(maxsize=32)
def fejer1_weights(n_c: int):
    """Exact interpolatory weights for the first-kind Chebyshev nodes."""
    if n_c < 1:
        raise ValueError(f"n_c={n_c} must be >= 1")
    i = np.arange(1, n_c + 1)
    theta = (2 * i - 1) * np.pi / (2 * n_c)
    k = np.arange(1, n_c // 2 + 1)
    if k.size:
        w = 1.0 - 2.0 * np.sum(np.cos(2.0 * np.outer(theta, k))
                               / (4.0 * k * k - 1.0), axis=1)
    else:
        w = np.ones_like(theta)
    return np.cos(theta), (2.0 / n_c) * w


def fejer_quadrature(f, a: float, b: float, n_c: int) -> float:
    """Integral of ``f`` over [a, b] at the same Chebyshev nodes as
    ``gauss_chebyshev`` but with the exact weights; converges geometrically
    for integrands analytic near the interval."""
    if b <= a:
        return 0.0
    t, w = fejer1_weights(n_c)
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * t
    return float(half * np.sum(np.asarray(f(x), dtype=float) * w))


# ---------------------------------------------------------------------------
#  erf family
# ---------------------------------------------------------------------------

def erf(x: float) -> float:
    """Error function, <= 1e-15 relative error (C library implementation)."""
    return math.erf(x)


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) * erfc(x)."""
    return float(special.erfcx(x))


# ---------------------------------------------------------------------------
#  Compensated summation
# ---------------------------------------------------------------------------

def comp_sum(values) -> float:
    """Exactly rounded sum of floats (Shewchuk compensation)."""
    return math.fsum(values)


# ---------------------------------------------------------------------------
#  Adaptive 1-D integration
# ---------------------------------------------------------------------------

def _simpson(a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_integrate(f, a, b, abs_tol=1e-7, max_depth=40, initial_panels=16):
    """Tolerance-driven bisection (adaptive Simpson) over [a, b].

    Handles kinks and jump discontinuities by localizing them through
    repeated bisection.  Returns ``(value, err_estimate, converged)``;
    ``f`` is called with scalars.
    """
    if b <= a:
        return 0.0, 0.0, True
    span = b - a
    total = 0.0
    err_total = 0.0
    edges = np.linspace(a, b, initial_panels + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        flo, fmid, fhi = f(lo), f(mid), f(hi)
        s = _simpson(lo, hi, flo, fmid, fhi)
        v, e = _refine(f, lo, hi, flo, fmid, fhi, s,
                       abs_tol * (hi - lo) / span, max_depth)
        total += v
        err_total += e
    return total, err_total, err_total <= abs_tol


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(a, m, fa, flm, fm)
    right = _simpson(m, b, fm, frm, fb)
    err = (left + right - whole) / 15.0
    # never chase below the roundoff floor of the local value
    floor = 5e-16 * (abs(left) + abs(right))
    if abs(err) <= max(tol, floor) or depth <= 0:
        return left + right + err, abs(err)
    lv, le = _refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
    rv, re = _refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    return lv + rv, le + re


# ---------------------------------------------------------------------------
#  Deterministic RNG streams
# ---------------------------------------------------------------------------

def stream(seed: int, block: int = 0) -> np.random.Generator:
    """Counter-based substream for one trial block.

    Distinct ``(seed, block)`` pairs give independent, reproducible
    sequences regardless of how many workers consume them; streams are
    cheap to reconstruct, so ship the pair rather than the generator.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))
