"""Event regions in the (legacy gain, opportunistic gain) plane.

Every probability this package estimates is the mass of a region bounded
by four curves of the legacy gain ``t``:

* ``power_cap(t)``    - opportunistic gain where the received NOMA power
                        equals the legacy interference cap; above it the
                        draw is in the contended (Type II) regime.
* ``decode_tie(t)``   - gain where first-stage decoding and the
                        cap-limited second-stage decoding give the same
                        rate; below it the cap-limited branch wins.
* ``capped_loss(t)``  - gain above which the cap-limited rate plus the
                        reduced OMA slot still lose to full-power OMA
                        (infinite once beta * t exceeds the cap gain
                        floor, where that loss event is impossible).
* ``first_loss(t)``   - gain below which first-stage decoding plus the
                        reduced OMA slot lose to full-power OMA.

Regions are unions of clauses ``{t in (t_lo, t_hi), gate(t),
max(lower)(t) < g_n < min(upper)(t)}``, which keeps the opportunistic-gain
section an interval so event masses reduce to one outer integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SystemConfig


# ---------------------------------------------------------------------------
#  Boundary curves (vectorized in t = legacy gain)
# ---------------------------------------------------------------------------

def power_cap(cfg: SystemConfig, t):
    t = np.asarray(t, dtype=float)
    return (t / cfg.alpha_m - 1.0) / (cfg.beta * cfg.rho_n)


def decode_tie(cfg: SystemConfig, t):
    t = np.asarray(t, dtype=float)
    return (t / cfg.alpha_m - 1.0) * (1.0 + cfg.rho_m * t) / (cfg.beta * cfg.rho_n)


def capped_loss(cfg: SystemConfig, t):
    t = np.asarray(t, dtype=float)
    ratio = t / cfg.alpha_m
    den = 1.0 - cfg.beta * ratio
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (ratio - 1.0) / (cfg.rho_n * den)
    return np.where(den > 0.0, val, np.inf)


def first_loss(cfg: SystemConfig, t):
    t = np.asarray(t, dtype=float)
    return ((1.0 - cfg.beta) * (cfg.rho_m * t + 1.0) - cfg.beta) / (
        cfg.beta ** 2 * cfg.rho_n)


# ---------------------------------------------------------------------------
#  Sub-event classifiers (shared by the MC decomposition and region gates)
# ---------------------------------------------------------------------------

def capped_branch_bucket(cfg: SystemConfig, t):
    """Which lower/outer bound binds the cap-limited loss event at t.

    m < n: returns 1/2/3 for power_cap / capped_loss / diagonal binding
    below.  m > n: returns 1..4 for (power_cap vs capped_loss below) x
    (decode_tie vs diagonal above).
    """
    t = np.asarray(t, dtype=float)
    cap = power_cap(cfg, t)
    loss = capped_loss(cfg, t)
    if cfg.m < cfg.n:
        b1 = (cap >= loss) & (cap >= t)
        b2 = ~b1 & (loss >= t)
        return np.where(b1, 1, np.where(b2, 2, 3))
    cap_binds = cap >= loss
    tie_above = t >= decode_tie(cfg, t)
    return np.where(cap_binds, np.where(tie_above, 1, 2),
                    np.where(tie_above, 3, 4))


def first_branch_bucket(cfg: SystemConfig, t):
    """Which bound binds the first-stage loss event at t (1 or 2)."""
    t = np.asarray(t, dtype=float)
    if cfg.m < cfg.n:
        return np.where(t >= decode_tie(cfg, t), 1, 2)
    return np.where(t <= first_loss(cfg, t), 1, 2)


# ---------------------------------------------------------------------------
#  Regions
# ---------------------------------------------------------------------------

Curve = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Clause:
    """One conjunction: t-range, optional gate, opportunistic-gain interval."""

    t_lo: float
    t_hi: float
    lower: tuple = ()
    upper: tuple = ()
    gate: Callable = None

    def bounds_at(self, t):
        """(lo(t), hi(t), active(t)) with hi = +inf when unbounded above."""
        t = np.asarray(t, dtype=float)
        lo = np.zeros_like(t)
        for c in self.lower:
            lo = np.maximum(lo, c(t) if callable(c) else c)
        hi = np.full_like(t, np.inf)
        for c in self.upper:
            hi = np.minimum(hi, c(t) if callable(c) else c)
        active = (t > self.t_lo) & (t <= self.t_hi)
        if self.gate is not None:
            active &= self.gate(t)
        return lo, hi, active


@dataclass(frozen=True)
class EventRegion:
    """Union of clauses over (legacy gain, opportunistic gain) pairs."""

    clauses: tuple
    name: str = "region"

    def contains(self, g_m, g_n):
        g_m = np.asarray(g_m, dtype=float)
        g_n = np.asarray(g_n, dtype=float)
        hit = np.zeros(np.broadcast(g_m, g_n).shape, dtype=bool)
        for cl in self.clauses:
            lo, hi, active = cl.bounds_at(g_m)
            hit |= active & (g_n > lo) & (g_n <= hi)
        return hit


def region_everything(bound: float = np.inf) -> EventRegion:
    return EventRegion((Clause(0.0, bound),), name="everything")


def region_legacy_below(threshold: float) -> EventRegion:
    """{legacy gain < threshold} (marginal CDF event)."""
    return EventRegion((Clause(0.0, threshold),), name="legacy-below")


def _cap_floor_const(cfg: SystemConfig) -> float:
    # largest reduced-power gain for which the uncontended slot pair loses
    return (1.0 - 2.0 * cfg.beta) / (cfg.beta ** 2 * cfg.rho_n)


def region_uncontended_loss(cfg: SystemConfig) -> EventRegion:
    """Loss event while received power stays within the cap (Type I)."""
    cap = lambda t: power_cap(cfg, t)
    return EventRegion(
        (Clause(cfg.alpha_m, np.inf, upper=(cap, _cap_floor_const(cfg))),),
        name="P_I",
    )


def region_zero_cap_loss(cfg: SystemConfig) -> EventRegion:
    """Loss event in the contended regime with a zero interference cap."""
    psi = lambda t: first_loss(cfg, t)
    return EventRegion((Clause(0.0, cfg.alpha_m, upper=(psi,)),), name="P_II2")


def _contended_clauses(cfg: SystemConfig):
    cap = lambda t: power_cap(cfg, t)
    tie = lambda t: decode_tie(cfg, t)
    loss = lambda t: capped_loss(cfg, t)
    psi = lambda t: first_loss(cfg, t)
    capped = Clause(cfg.alpha_m, cfg.alpha_m / cfg.beta,
                    lower=(cap, loss), upper=(tie,))
    direct = Clause(cfg.alpha_m, np.inf, lower=(tie,), upper=(psi,))
    return capped, direct


def region_contended_loss(cfg: SystemConfig) -> EventRegion:
    """Loss event in the contended regime with a positive cap."""
    return EventRegion(_contended_clauses(cfg), name="P_T")


_CAPPED_BUCKETS_LT = ("P_T1_1", "P_T1_2", "P_T1_3")
_CAPPED_BUCKETS_GT = ("P_T1_1", "P_T1_2", "P_T1_3", "P_T1_4")
_FIRST_BUCKETS = ("P_T2_1", "P_T2_2")


def contended_bucket_names(cfg: SystemConfig):
    capped = _CAPPED_BUCKETS_LT if cfg.m < cfg.n else _CAPPED_BUCKETS_GT
    return capped + _FIRST_BUCKETS


def region_contended_bucket(cfg: SystemConfig, bucket: str) -> EventRegion:
    """One cell of the contended-loss partition (P_T1_k / P_T2_k)."""
    capped, direct = _contended_clauses(cfg)
    fam, idx = bucket.rsplit("_", 1)
    k = int(idx)
    if fam == "P_T1":
        gate = lambda t: capped_branch_bucket(cfg, t) == k
        cl = Clause(capped.t_lo, capped.t_hi, capped.lower, capped.upper, gate)
    elif fam == "P_T2":
        gate = lambda t: first_branch_bucket(cfg, t) == k
        cl = Clause(direct.t_lo, direct.t_hi, direct.lower, direct.upper, gate)
    else:
        raise ValueError(f"unknown bucket {bucket!r}")
    return EventRegion((cl,), name=bucket)


def region_underperformance(cfg: SystemConfig, scheme) -> EventRegion:
    """Full loss-vs-OMA event for one hybrid scheme."""
    from .schemes import Scheme

    scheme = Scheme(scheme)
    cap = lambda t: power_cap(cfg, t)
    psi = lambda t: first_loss(cfg, t)
    if scheme == Scheme.FSIC:
        return EventRegion((Clause(0.0, np.inf, upper=(psi,)),), name="P_FSIC")
    if scheme == Scheme.HSIC_NPA:
        return EventRegion(
            (
                Clause(cfg.alpha_m, np.inf, upper=(cap, _cap_floor_const(cfg))),
                Clause(cfg.alpha_m, np.inf, lower=(cap,), upper=(psi,)),
                Clause(0.0, cfg.alpha_m, upper=(psi,)),
            ),
            name="P_NPA",
        )
    if scheme == Scheme.HSIC_PA:
        capped, direct = _contended_clauses(cfg)
        pi = region_uncontended_loss(cfg).clauses
        pii2 = region_zero_cap_loss(cfg).clauses
        return EventRegion(pi + (capped, direct) + pii2, name="P_PA")
    raise ValueError(f"no underperformance region for scheme {scheme}")
