"""Cross-validation report: MC vs exact vs integration vs asymptotic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotic import p_t_asymptotic
from .channel import OrderPairDensity, sample_gain_matrix
from .config import SystemConfig
from .exact import compute_constants, p_t_exact, regime_label
from .mc import estimate_coupled, estimate_decomposition, integrate_event
from .numerics import stream
from .regions import region_contended_loss
from .schemes import Scheme, rate_factors

DEFAULT_CONFIGS = (
    dict(M=5, m=1, n=2, R_m=0.2, beta=0.25, eta=1.0, snr_db=20.0),
    dict(M=5, m=2, n=4, R_m=1.0, beta=0.3, eta=9.0, snr_db=15.0),
    dict(M=5, m=3, n=1, R_m=0.5, beta=0.25, eta=5.0, snr_db=15.0),
)


@dataclass(frozen=True)
class CheckResult:
    config_label: str
    regime: str
    invariant: str
    passed: bool
    margin: str


def _dominance_violations(cfg, trials, seed):
    g = sample_gain_matrix(cfg.M, stream(seed, 0), trials)
    g_m, g_n = g[:, cfg.m - 1], g[:, cfg.n - 1]
    f_fsic, _, _ = rate_factors(cfg, g_m, g_n, Scheme.FSIC)
    f_npa, _, _ = rate_factors(cfg, g_m, g_n, Scheme.HSIC_NPA)
    f_pa, _, _ = rate_factors(cfg, g_m, g_n, Scheme.HSIC_PA)
    return int(np.count_nonzero(f_pa < f_npa) + np.count_nonzero(f_npa < f_fsic))


def run_validation(configs=None, trials: int = 200_000, seed: int = 20250801,
                   n_c: int = 256, mutate_constants=None) -> list:
    """Run the invariant suite at each config; returns CheckResult rows.

    ``mutate_constants`` is a test hook applied to the derived constants
    before the closed forms are evaluated (negative-control corruption).
    """
    rows = []
    for params in (configs or DEFAULT_CONFIGS):
        cfg = SystemConfig.make(**params)
        label = (f"M{cfg.M}m{cfg.m}n{cfg.n}R{cfg.R_m:g}b{cfg.beta:g}"
                 f"eta{cfg.eta:g}snr{cfg.snr_db:g}")
        regime = regime_label(cfg)

        def add(invariant, passed, margin):
            rows.append(CheckResult(label, regime, invariant, bool(passed), margin))

        consts = compute_constants(cfg)
        if mutate_constants is not None:
            consts = mutate_constants(consts)
        exact = p_t_exact(cfg, consts, n_c=n_c).value
        pair = OrderPairDensity(cfg.M, cfg.m, cfg.n)
        integ = integrate_event(region_contended_loss(cfg), pair).value
        add("exact-vs-integration", abs(exact - integ) <= 1e-5,
            f"|diff|={abs(exact - integ):.2e} tol=1e-05")

        dec = estimate_decomposition(cfg, trials, seed)
        pt_names = [k for k in dec if k.startswith("P_T")]
        mc_pt = sum(dec[k].value for k in pt_names)
        sigma = max(np.sqrt(exact * (1.0 - exact) / trials), 1e-15)
        add("exact-vs-mc", abs(mc_pt - exact) <= 4.0 * sigma,
            f"|z|={abs(mc_pt - exact) / sigma:.2f} tol=4sigma")

        bucket_sum = round(sum(dec[k].value for k in dec if k != "total") * trials)
        total = round(dec["total"].value * trials)
        add("decomposition-partition", bucket_sum == total,
            f"buckets={bucket_sum} total={total}")

        coupled = estimate_coupled(cfg, trials, seed)
        mono = (coupled[Scheme.HSIC_PA].value <= coupled[Scheme.HSIC_NPA].value
                <= coupled[Scheme.FSIC].value)
        add("coupled-monotonicity", mono,
            " <= ".join(f"{coupled[s].value:.5f}" for s in
                        (Scheme.HSIC_PA, Scheme.HSIC_NPA, Scheme.FSIC)))

        viol = _dominance_violations(cfg, min(trials, 200_000), seed)
        add("rate-dominance", viol == 0, f"violations={viol}")

        doubled = p_t_exact(cfg, consts, n_c=2 * n_c).value
        rel = abs(exact - doubled) / max(abs(exact), 1e-30)
        add("quadrature-doubling", rel <= 1e-8, f"rel-change={rel:.2e} tol=1e-08")

        hi = cfg.with_snr(42.0)
        consts_hi = compute_constants(hi)
        if mutate_constants is not None:
            consts_hi = mutate_constants(consts_hi)
        ex_hi = p_t_exact(hi, consts_hi, n_c=n_c).value
        asym = p_t_asymptotic(hi).value
        if ex_hi > 0:
            ratio = asym / ex_hi
            add("asymptotic-ratio", abs(ratio - 1.0) <= 0.25,
                f"ratio@42dB={ratio:.3f} tol=0.25")
        else:
            add("asymptotic-ratio", asym == 0.0, f"both-zero asym={asym:.1e}")
    return rows


def report_text(rows) -> str:
    lines = []
    fails = 0
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        fails += not r.passed
        lines.append(f"[{status}] {r.config_label} ({r.regime}) "
                     f"{r.invariant}: {r.margin}")
    lines.append(f"{len(rows) - fails}/{len(rows)} checks passed")
    return "\n".join(lines)
