import math

import numpy as np
from hypothesis import given, settings, strategies as st

from hnoma import (Branch, ChannelDraw, RateDecision, Scheme, SystemConfig,
                   energy, noma_rate, oma_rate, tau_threshold,
                   underperformance_indicator)
from hnoma.channel import sample_gain_matrix
from hnoma.numerics import stream
from hnoma.schemes import energy_array, rate_factors, underperf_mask

from conftest import SEED


def _cfg_example():
    # beta=1/4, rho_n=40, rho_m=10, R_m=1
    return SystemConfig.make(M=5, m=1, n=2, R_m=1.0, beta=0.25, eta=4.0,
                             rho_n=40.0)


def test_tau_threshold_hand_values():
    cfg = SystemConfig.make(M=5, m=1, n=2, R_m=1.0, beta=0.25, eta=1.0,
                            rho_n=10.0)
    assert math.isclose(float(tau_threshold(cfg, 1.0)), 9.0)
    assert float(tau_threshold(cfg, 0.5 * cfg.alpha_m)) == 0.0
    assert float(tau_threshold(cfg, cfg.alpha_m)) == 0.0


def test_oma_rate_hand_values():
    cfg = SystemConfig.make(M=5, m=1, n=2, R_m=0.2, beta=0.25, eta=1.0,
                            rho_n=15.0)
    assert math.isclose(oma_rate(cfg, 1.0), 4.0)
    assert oma_rate(cfg, 0.0) == 0.0
    cfg2 = SystemConfig.make(M=5, m=1, n=2, R_m=0.2, beta=0.25, eta=1.0,
                             rho_n=60.0)
    assert math.isclose(oma_rate(cfg2, 1.0, scaled=True), 4.0)


def test_power_adaptive_rate_worked_example():
    cfg = _cfg_example()
    dec = noma_rate(cfg, g_m=1.0, g_n=2.0, scheme=Scheme.HSIC_PA)
    assert math.isclose(dec.tau_m, 9.0)
    assert dec.branch == Branch.TYPE_II_CASE2
    assert math.isclose(dec.noma_slot_rate, math.log2(10.0))
    assert abs(dec.noma_slot_rate - 3.3219) < 1e-4
    assert math.isclose(dec.gamma, 0.45)
    npa = noma_rate(cfg, 1.0, 2.0, Scheme.HSIC_NPA)
    assert math.isclose(npa.noma_slot_rate, math.log2(1.0 + 20.0 / 11.0))
    # log2(31/11) = 1.49476..., i.e. the quoted 4-digit 1.4949 is a hair off
    assert abs(npa.noma_slot_rate - 1.4949) < 2e-4
    assert npa.gamma == 1.0


def test_type_boundary_goes_to_type_i():
    cfg = _cfg_example()
    g_m = 1.0
    tau = float(tau_threshold(cfg, g_m))
    g_n = tau / (cfg.beta * cfg.rho_n)  # received power exactly at the cap
    for scheme in (Scheme.HSIC_PA, Scheme.HSIC_NPA):
        dec = noma_rate(cfg, g_m, g_n, scheme)
        assert dec.branch == Branch.TYPE_I
        assert math.isclose(dec.noma_slot_rate, math.log2(1.0 + tau))
        assert dec.gamma == 1.0


def test_fsic_branch_not_applicable():
    cfg = _cfg_example()
    dec = noma_rate(cfg, 1.0, 2.0, Scheme.FSIC)
    assert dec.branch == Branch.NOT_APPLICABLE
    assert math.isclose(dec.noma_slot_rate, math.log2(1.0 + 20.0 / 11.0))


def test_energy_accounting_hand_values():
    cfg = _cfg_example()
    oma_dec = RateDecision(Scheme.OMA, 0.0, 0.0, Branch.NOT_APPLICABLE, 1.0, 0.0)
    assert math.isclose(energy(cfg, oma_dec), 40.0)
    assert math.isclose(energy(cfg, noma_rate(cfg, 1.0, 2.0, Scheme.HSIC_NPA)),
                        20.0)
    pa = noma_rate(cfg, 1.0, 2.0, Scheme.HSIC_PA)
    assert math.isclose(energy(cfg, pa), 14.5)


def test_indicator_limits():
    cfg = _cfg_example()
    huge = ChannelDraw(np.array([1.0, 1e6, 2e6, 3e6, 4e6]))
    assert underperformance_indicator(cfg, huge, Scheme.HSIC_PA) is False
    cfg2 = SystemConfig.make(M=2, m=1, n=2, R_m=1.0, beta=0.25, eta=1.0,
                             rho_n=10.0)
    degenerate = ChannelDraw(np.array([0.0, 0.0]))
    for s in (Scheme.FSIC, Scheme.HSIC_NPA, Scheme.HSIC_PA):
        assert underperformance_indicator(cfg2, degenerate, s) is True


# ---------------------------------------------------------------------------
#  bulk properties on random draws
# ---------------------------------------------------------------------------

def _random_cfgs(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        M = int(rng.integers(2, 7))
        m, n = rng.choice(np.arange(1, M + 1), 2, replace=False)
        out.append(SystemConfig.make(
            M=M, m=int(m), n=int(n),
            R_m=float(rng.uniform(0.1, 2.5)),
            beta=float(rng.uniform(0.02, 0.48)),
            eta=float(10.0 ** rng.uniform(-1, 1.5)),
            snr_db=float(rng.uniform(-5, 40))))
    return out


def test_rate_dominance_and_energy_over_bulk_draws():
    total = 0
    for k, cfg in enumerate(_random_cfgs(20, 7)):
        g = sample_gain_matrix(cfg.M, stream(SEED, 10 + k), 50_000)
        g_m, g_n = g[:, cfg.m - 1], g[:, cfg.n - 1]
        f_fsic, _, _ = rate_factors(cfg, g_m, g_n, Scheme.FSIC)
        f_npa, _, g_npa = rate_factors(cfg, g_m, g_n, Scheme.HSIC_NPA)
        f_pa, _, g_pa = rate_factors(cfg, g_m, g_n, Scheme.HSIC_PA)
        assert np.all(f_pa >= f_npa) and np.all(f_npa >= f_fsic)
        e_pa = energy_array(cfg, Scheme.HSIC_PA, g_pa)
        e_npa = energy_array(cfg, Scheme.HSIC_NPA, g_npa)
        assert np.all(e_pa <= e_npa)
        assert np.all(e_npa < cfg.rho_n)
        # loss indicators inherit the rate ordering
        u_pa = underperf_mask(cfg, g_m, g_n, Scheme.HSIC_PA)
        u_npa = underperf_mask(cfg, g_m, g_n, Scheme.HSIC_NPA)
        u_fsic = underperf_mask(cfg, g_m, g_n, Scheme.FSIC)
        assert not np.any(u_pa & ~u_npa)
        assert not np.any(u_npa & ~u_fsic)
        total += g.shape[0]
    assert total == 1_000_000


def test_power_adaptation_factor_identity():
    cfg = _cfg_example()
    g = sample_gain_matrix(cfg.M, stream(SEED, 5), 200_000)
    g_m, g_n = g[:, cfg.m - 1], g[:, cfg.n - 1]
    _, branch, gamma = rate_factors(cfg, g_m, g_n, Scheme.HSIC_PA)
    case2 = branch == 3
    assert np.any(case2)
    tau = tau_threshold(cfg, g_m)
    lhs = gamma[case2] * cfg.beta * cfg.rho_n * g_n[case2]
    assert np.all(gamma > 0.0) and np.all(gamma <= 1.0)
    assert np.allclose(lhs, tau[case2], rtol=1e-12, atol=0.0)


@settings(max_examples=150, deadline=None)
@given(
    beta=st.floats(0.01, 0.49, exclude_max=True),
    R_m=st.floats(0.05, 3.0),
    eta=st.floats(0.05, 50.0),
    rho_n=st.floats(0.1, 1e5),
    g_m=st.floats(0.0, 20.0),
    g_n=st.floats(0.0, 20.0),
)
def test_rate_dominance_property(beta, R_m, eta, rho_n, g_m, g_n):
    cfg = SystemConfig.make(M=4, m=2, n=3, R_m=R_m, beta=beta, eta=eta,
                            rho_n=rho_n)
    gm = np.array([g_m])
    gn = np.array([g_n])
    f_fsic, _, _ = rate_factors(cfg, gm, gn, Scheme.FSIC)
    f_npa, _, _ = rate_factors(cfg, gm, gn, Scheme.HSIC_NPA)
    f_pa, _, gamma = rate_factors(cfg, gm, gn, Scheme.HSIC_PA)
    assert f_pa[0] >= f_npa[0] >= f_fsic[0]
    assert 0.0 < gamma[0] <= 1.0
