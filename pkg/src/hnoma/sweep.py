"""Config-driven SNR sweeps with CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

from .asymptotic import p_t_asymptotic
from .channel import OrderPairDensity
from .config import InvalidConfigError, SystemConfig
from .estimates import ASYMPTOTIC, EXACT, MC, NUMERIC, ProbEstimate
from .exact import p_t_exact, regime_label
from .mc import integrate_event, integrate_underperformance, mc_summary
from .regions import region_contended_loss
from .schemes import Scheme

QUANTITIES = ("contended-loss", "underperformance")

CSV_COLUMNS = ("snr_db", "scheme", "method", "value", "std_err", "trials",
               "regime", "gamma_mean", "energy_mean")


@dataclass(frozen=True)
class SweepSpec:
    """One curve: a scenario swept over an SNR grid."""

    M: int
    m: int
    n: int
    R_m: float
    beta: float
    eta: float
    snr_db: tuple
    schemes: tuple = (Scheme.HSIC_PA.value,)
    methods: tuple = (MC, EXACT)
    quantity: str = "contended-loss"
    trials: int = 200_000
    n_c: int = 256
    seed: int = 20250801
    label: str = ""

    def __post_init__(self):
        if len(self.snr_db) == 0:
            raise InvalidConfigError("empty SNR grid")
        if len(self.schemes) == 0:
            raise InvalidConfigError("empty scheme list")
        if len(self.methods) == 0:
            raise InvalidConfigError("empty method list")
        if self.quantity not in QUANTITIES:
            raise InvalidConfigError(f"unknown quantity {self.quantity!r}")
        for s in self.schemes:
            Scheme(s)
        if self.quantity == "contended-loss":
            if tuple(self.schemes) != (Scheme.HSIC_PA.value,):
                raise InvalidConfigError(
                    "the contended-loss splits exist only for scheme HSIC-PA")
        else:
            bad = set(self.methods) - {MC, NUMERIC}
            if bad:
                raise InvalidConfigError(
                    f"underperformance supports only mc/numeric-integration, got {bad}")
        if MC in self.methods and self.trials < 1:
            raise InvalidConfigError("trials must be >= 1 when mc is requested")
        if self.n_c < 16:
            raise InvalidConfigError(f"n_c={self.n_c} too small; need >= 16")
        # base config validation (rates, beta, indices)
        self.config_at(self.snr_db[0])

    def config_at(self, snr_db: float) -> SystemConfig:
        return SystemConfig.make(M=self.M, m=self.m, n=self.n, R_m=self.R_m,
                                 beta=self.beta, eta=self.eta, snr_db=snr_db)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        d = dict(d)
        for key in ("snr_db", "schemes", "methods"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("snr_db", "schemes", "methods"):
            d[key] = list(d[key])
        return d


def load_spec(path: str) -> SweepSpec:
    with open(path) as fh:
        return SweepSpec.from_dict(json.load(fh))


def _row(snr_db, scheme, method, est: ProbEstimate = None, regime="",
         gamma_mean=None, energy_mean=None):
    return {
        "snr_db": snr_db,
        "scheme": scheme,
        "method": method,
        "value": None if est is None else est.value,
        "std_err": None if est is None else est.std_err,
        "trials": None if est is None else est.trials,
        "regime": regime,
        "gamma_mean": gamma_mean,
        "energy_mean": energy_mean,
    }


def run_sweep(spec: SweepSpec) -> list:
    """One row per (snr, scheme, method), in grid order.

    Per-row failures are recorded in the regime column as ``error:<name>``
    rather than aborting the sweep.
    """
    rows = []
    for snr in spec.snr_db:
        try:
            cfg = spec.config_at(snr)
            regime = regime_label(cfg)
        except InvalidConfigError as exc:
            for scheme in spec.schemes:
                for method in spec.methods:
                    rows.append(_row(snr, scheme, method,
                                     regime=f"error:{type(exc).__name__}"))
            continue
        pair = OrderPairDensity(cfg.M, cfg.m, cfg.n)
        for scheme in spec.schemes:
            summary = None
            if MC in spec.methods:
                summary = mc_summary(cfg, scheme, spec.trials, spec.seed,
                                     want_pt=spec.quantity == "contended-loss")
            for method in spec.methods:
                try:
                    gamma_mean = energy_mean = None
                    if method == MC:
                        est = (summary["pt_estimate"]
                               if spec.quantity == "contended-loss"
                               else summary["estimate"])
                        gamma_mean = summary["gamma_mean"]
                        energy_mean = summary["energy_mean"]
                    elif method == EXACT:
                        est = p_t_exact(cfg, n_c=spec.n_c)
                    elif method == ASYMPTOTIC:
                        est = p_t_asymptotic(cfg)
                    elif method == NUMERIC:
                        if spec.quantity == "contended-loss":
                            est = integrate_event(region_contended_loss(cfg), pair)
                        else:
                            est = integrate_underperformance(cfg, scheme)
                    else:
                        raise InvalidConfigError(f"unknown method {method!r}")
                    rows.append(_row(snr, scheme, method, est, regime,
                                     gamma_mean, energy_mean))
                except (InvalidConfigError, ArithmeticError) as exc:
                    rows.append(_row(snr, scheme, method,
                                     regime=f"error:{type(exc).__name__}"))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list) -> str:
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def write_rows(rows: list, path: str, fmt: str = "csv") -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    with open(path, "w") as fh:
        fh.write(text)
