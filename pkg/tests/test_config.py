import math

import pytest

from hnoma import InvalidConfigError, SystemConfig, db_to_linear


def test_make_and_snr_roundtrip():
    cfg = SystemConfig.make(M=5, m=1, n=2, R_m=0.2, beta=0.25, eta=2.0, snr_db=20.0)
    assert math.isclose(cfg.rho_n, 100.0)
    assert math.isclose(cfg.rho_m, 50.0)
    assert math.isclose(cfg.snr_db, 20.0)
    cfg2 = cfg.with_snr(30.0)
    assert math.isclose(cfg2.rho_n, 1000.0)
    assert math.isclose(cfg2.eta, 2.0)


def test_derived_scalars():
    cfg = SystemConfig.make(M=5, m=1, n=2, R_m=1.0, beta=0.25, eta=1.0, rho_n=10.0)
    assert math.isclose(cfg.eps_m, 1.0)
    assert math.isclose(cfg.alpha_m, 0.1)


def test_eta_consistency_enforced():
    with pytest.raises(InvalidConfigError):
        SystemConfig(M=5, m=1, n=2, R_m=0.2, beta=0.25, rho_n=100.0,
                     rho_m=50.0, eta=3.0)
    cfg = SystemConfig(M=5, m=1, n=2, R_m=0.2, beta=0.25, rho_n=100.0, rho_m=50.0)
    assert math.isclose(cfg.eta, 2.0)


@pytest.mark.parametrize("kwargs", [
    dict(M=1, m=1, n=1),
    dict(m=3, n=3),
    dict(m=6),
    dict(beta=0.5),
    dict(beta=0.0),
    dict(R_m=0.0),
    dict(R_m=-1.0),
])
def test_invalid_configs_rejected(kwargs):
    base = dict(M=5, m=1, n=2, R_m=0.2, beta=0.25, rho_n=10.0, rho_m=10.0)
    base.update(kwargs)
    with pytest.raises(InvalidConfigError):
        SystemConfig(**base)


def test_db_conversion():
    assert math.isclose(db_to_linear(30.0), 1000.0)
    with pytest.raises(InvalidConfigError):
        SystemConfig.make(M=5, m=1, n=2, R_m=0.2, beta=0.25, eta=1.0)
