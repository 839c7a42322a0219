"""Monte Carlo estimators and direct numeric integration of event regions."""

from __future__ import annotations

import numpy as np

from .channel import (OrderPairDensity, mass_lower_interval,
                      mass_upper_interval, sample_gain_matrix)
from .config import SystemConfig
from .estimates import NUMERIC, ProbEstimate
from .numerics import IntegrationFailureError, adaptive_integrate, stream
from .regions import (EventRegion, capped_branch_bucket, first_branch_bucket)
from .schemes import (HNOMA_SCHEMES, Scheme, _B_I, _B_II2, energy_array,
                      rate_factors, tau_threshold)

BLOCK_TRIALS = 1_000_000

# decomposition bucket order (m > n adds the fourth capped bucket)
_BUCKETS_LT = ("P_I", "P_T1_1", "P_T1_2", "P_T1_3", "P_T2_1", "P_T2_2", "P_II2")
_BUCKETS_GT = ("P_I", "P_T1_1", "P_T1_2", "P_T1_3", "P_T1_4", "P_T2_1", "P_T2_2",
               "P_II2")


def bucket_names(cfg: SystemConfig):
    return _BUCKETS_LT if cfg.m < cfg.n else _BUCKETS_GT


def _iter_blocks(trials: int):
    if trials < 1:
        raise ValueError(f"trials={trials} must be >= 1")
    block = 0
    left = trials
    while left > 0:
        size = min(BLOCK_TRIALS, left)
        yield block, size
        block += 1
        left -= size


def _pair_gains(cfg: SystemConfig, seed: int, block: int, size: int):
    g = sample_gain_matrix(cfg.M, stream(seed, block), size)
    return g[:, cfg.m - 1], g[:, cfg.n - 1]


def _loss_mask(cfg, g_n, factor):
    b = cfg.beta * cfg.rho_n * g_n
    return factor * (1.0 + b) <= 1.0 + cfg.rho_n * g_n


def mc_summary(cfg: SystemConfig, scheme: Scheme, trials: int, seed: int,
               want_pt: bool = False) -> dict:
    """Underperformance estimate plus mean power-adaptation factor / energy.

    With ``want_pt`` the contended positive-cap loss event is counted in
    the same pass (power-adaptive scheme only).
    """
    scheme = Scheme(scheme)
    hits = 0
    pt_hits = 0
    gamma_sum = 0.0
    energy_sum = 0.0
    for block, size in _iter_blocks(trials):
        g_m, g_n = _pair_gains(cfg, seed, block, size)
        factor, branch, gamma = rate_factors(cfg, g_m, g_n, scheme)
        lose = _loss_mask(cfg, g_n, factor)
        hits += int(np.count_nonzero(lose))
        gamma_sum += float(gamma.sum())
        energy_sum += float(energy_array(cfg, scheme, gamma).sum())
        if want_pt and scheme == Scheme.HSIC_PA:
            tau = tau_threshold(cfg, g_m)
            pt_hits += int(np.count_nonzero(lose & (branch != _B_I) & (tau > 0.0)))
    out = {
        "estimate": ProbEstimate.from_counts(hits, trials),
        "gamma_mean": gamma_sum / trials,
        "energy_mean": energy_sum / trials,
    }
    if want_pt and scheme == Scheme.HSIC_PA:
        out["pt_estimate"] = ProbEstimate.from_counts(pt_hits, trials)
    return out


def estimate_probability(cfg: SystemConfig, scheme: Scheme, trials: int,
                         seed: int) -> ProbEstimate:
    """Fraction of draws where the scheme fails to beat pure OMA."""
    return mc_summary(cfg, scheme, trials, seed)["estimate"]


def estimate_coupled(cfg: SystemConfig, trials: int, seed: int,
                     schemes=HNOMA_SCHEMES) -> dict:
    """Per-scheme estimates on shared draws (exact count dominance)."""
    counts = {Scheme(s): 0 for s in schemes}
    for block, size in _iter_blocks(trials):
        g_m, g_n = _pair_gains(cfg, seed, block, size)
        for s in counts:
            factor, _, _ = rate_factors(cfg, g_m, g_n, s)
            counts[s] += int(np.count_nonzero(_loss_mask(cfg, g_n, factor)))
    return {s: ProbEstimate.from_counts(k, trials) for s, k in counts.items()}


def estimate_decomposition(cfg: SystemConfig, trials: int, seed: int) -> dict:
    """Split the power-adaptive loss event into its disjoint sub-events.

    Every losing draw lands in exactly one bucket; the bucket counts sum
    to the total loss count by construction, and this is asserted.
    """
    names = bucket_names(cfg)
    counts = dict.fromkeys(names, 0)
    total = 0
    for block, size in _iter_blocks(trials):
        g_m, g_n = _pair_gains(cfg, seed, block, size)
        factor, branch, _ = rate_factors(cfg, g_m, g_n, Scheme.HSIC_PA)
        lose = _loss_mask(cfg, g_n, factor)
        n_lose = int(np.count_nonzero(lose))
        total += n_lose
        tau = tau_threshold(cfg, g_m)
        type_i = branch == _B_I
        counts["P_I"] += int(np.count_nonzero(lose & type_i))
        contended = lose & ~type_i
        counts["P_II2"] += int(np.count_nonzero(contended & (tau == 0.0)))
        live = contended & (tau > 0.0)
        capped = live & (branch == _B_II2)
        direct = live & (branch != _B_II2)
        cb = capped_branch_bucket(cfg, g_m)
        fb = first_branch_bucket(cfg, g_m)
        n_cap_buckets = 3 if cfg.m < cfg.n else 4
        for k in range(1, n_cap_buckets + 1):
            counts[f"P_T1_{k}"] += int(np.count_nonzero(capped & (cb == k)))
        for k in (1, 2):
            counts[f"P_T2_{k}"] += int(np.count_nonzero(direct & (fb == k)))
    if sum(counts.values()) != total:
        raise AssertionError(
            f"decomposition buckets sum to {sum(counts.values())}, "
            f"expected {total} losing draws")
    out = {name: ProbEstimate.from_counts(k, trials) for name, k in counts.items()}
    out["total"] = ProbEstimate.from_counts(total, trials)
    return out


def estimate_pt(cfg: SystemConfig, trials: int, seed: int) -> ProbEstimate:
    """MC estimate of the contended positive-cap loss event alone."""
    hits = 0
    for block, size in _iter_blocks(trials):
        g_m, g_n = _pair_gains(cfg, seed, block, size)
        factor, branch, _ = rate_factors(cfg, g_m, g_n, Scheme.HSIC_PA)
        lose = _loss_mask(cfg, g_n, factor)
        tau = tau_threshold(cfg, g_m)
        hits += int(np.count_nonzero(lose & (branch != _B_I) & (tau > 0.0)))
    return ProbEstimate.from_counts(hits, trials)


# ---------------------------------------------------------------------------
#  Direct integration of a region against the ordered-pair density
# ---------------------------------------------------------------------------

def _curve_breakpoints(clause, t_lo, t_hi, n_scan=2049):
    """Legacy-gain values where any two boundary curves of a clause cross.

    Every support edge, kink, or gate switch of the clause integrand sits
    at a crossing between two members of {lower curves, upper curves,
    diagonal, box bound}; locating them keeps the outer quadrature from
    stepping over narrow features.  Scan plus bisection, no closed forms.
    """
    grids = [np.linspace(t_lo, t_hi, n_scan)]
    if t_lo > 0 and t_hi / t_lo > 100.0:
        grids.append(np.geomspace(t_lo, t_hi, n_scan))
    elif t_lo == 0 and t_hi > 100.0:
        grids.append(np.geomspace(t_hi * 1e-9, t_hi, n_scan))
    ts = np.unique(np.concatenate(grids))
    curves = list(clause.lower) + list(clause.upper)
    funcs = [c if callable(c) else (lambda t, v=c: np.full_like(t, v)) for c in curves]
    funcs.append(lambda t: t)  # ordered-wedge diagonal
    vals = [np.clip(np.asarray(f(ts), dtype=float), -1e300, 1e300) for f in funcs]
    hits = []
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            diff = vals[i] - vals[j]
            sign_flip = np.nonzero(np.diff(np.signbit(diff)))[0]
            for idx in sign_flip:
                lo, hi = ts[idx], ts[idx + 1]
                f_lo = float(vals[i][idx] - vals[j][idx])
                fi, fj = funcs[i], funcs[j]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    f_mid = float(np.clip(fi(np.asarray(mid)) - fj(np.asarray(mid)),
                                          -1e300, 1e300))
                    if (f_mid < 0) == (f_lo < 0):
                        lo, f_lo = mid, f_mid
                    else:
                        hi = mid
                hits.append(0.5 * (lo + hi))
    return hits


def integrate_event(region: EventRegion, pair: OrderPairDensity,
                    bound: float = 40.0, abs_tol: float = 1e-7,
                    max_depth: int = 40) -> ProbEstimate:
    """Probability mass of ``region`` under the ordered-pair density.

    The opportunistic-gain section of every clause is an interval, so its
    mass is summed in closed form from the density's exponential mixture;
    the remaining 1-D integral over the legacy gain is done by adaptive
    bisection between the curve-crossing breakpoints.  The tail beyond
    ``bound`` is dropped (mass < e^-bound).
    """
    legacy_is_lower = pair.m < pair.n

    def clause_mass(clause):
        def integrand(t):
            lo, hi, active = clause.bounds_at(t)
            if not active:
                return 0.0
            hi = min(float(hi), bound)
            if legacy_is_lower:
                return mass_upper_interval(pair, t, float(lo), hi)
            return mass_lower_interval(pair, t, float(lo), hi)

        t_hi = min(clause.t_hi, bound)
        if not t_hi > clause.t_lo:
            return 0.0, 0.0, True
        edges = [clause.t_lo, t_hi]
        edges += [x for x in _curve_breakpoints(clause, clause.t_lo, t_hi)
                  if clause.t_lo < x < t_hi]
        edges = sorted(set(edges))
        tol_each = abs_tol / (max(len(region.clauses), 1) * max(len(edges) - 1, 1))
        v_sum, e_sum, good = 0.0, 0.0, True
        for seg_lo, seg_hi in zip(edges[:-1], edges[1:]):
            v, e, ok = adaptive_integrate(integrand, seg_lo, seg_hi,
                                          abs_tol=tol_each, max_depth=max_depth,
                                          initial_panels=8)
            v_sum += v
            e_sum += e
            good = good and ok
        return v_sum, e_sum, good

    total = 0.0
    err = 0.0
    ok = True
    for clause in region.clauses:
        v, e, good = clause_mass(clause)
        total += v
        err += e
        ok = ok and good
    if not ok:
        raise IntegrationFailureError(total, err)
    total = min(1.0, max(0.0, total))
    return ProbEstimate(value=total, trials=0, std_err=err, method=NUMERIC)


def integrate_underperformance(cfg: SystemConfig, scheme: Scheme,
                               bound: float = 40.0,
                               abs_tol: float = 1e-7) -> ProbEstimate:
    """Deterministic counterpart of ``estimate_probability``."""
    from .regions import region_underperformance

    pair = OrderPairDensity(cfg.M, cfg.m, cfg.n)
    return integrate_event(region_underperformance(cfg, scheme), pair,
                           bound=bound, abs_tol=abs_tol)
