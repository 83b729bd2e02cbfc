"""Mixture-size selection: accuracy vs. computational cost.

Sizes m = 1, 2, ... are fitted in turn; the search stops when the
relative-entropy decrease from growing the mixture falls below
(k/n) ln((m+1)/m), where k is the cost exponent and n the equivalent
sample size. An optional geometric prior on size turns the rule into a
MAP criterion, which also terminates when k = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import distribution as dist
from .emfit import EmConfig, FitReport, em_fit
from .errors import ValidationError
from .mixture import GaussianMixture
from .quadrature import QuadratureConfig, default_config

__all__ = [
    "SizeSearchConfig", "AccuracyMeasure", "accuracy_measure",
    "stop_predicate", "stop_threshold", "select_size", "SizeSearchResult",
]

_EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class SizeSearchConfig:
    k: float
    n: float
    max_m: int = 10
    lookahead: int = 1
    geometric_prior_ratio: float | None = None

    def __post_init__(self):
        if self.k < 0:
            raise ValidationError("cost exponent k must be nonnegative")
        if self.n <= 0:
            raise ValidationError("equivalent sample size n must be positive")
        if self.max_m < 1:
            raise ValidationError("max_m must be >= 1")
        if self.lookahead < 0:
            raise ValidationError("lookahead must be nonnegative")
        r = self.geometric_prior_ratio
        if r is not None and not (0.0 < r < 1.0):
            raise ValidationError("geometric_prior_ratio must lie in (0, 1)")


@dataclass(frozen=True)
class AccuracyMeasure:
    """exp(-n * D0); when the value is not representable as a float the
    result is reported in log space only."""
    value: float | None
    log_value: float
    log_only: bool


def accuracy_measure(d0: float, n: float) -> AccuracyMeasure:
    if not math.isfinite(d0) or n <= 0:
        raise ValidationError("accuracy measure needs finite d0 and n > 0")
    log_value = -n * d0
    if abs(log_value) > _EXP_OVERFLOW:
        return AccuracyMeasure(value=None, log_value=log_value, log_only=True)
    return AccuracyMeasure(value=math.exp(log_value), log_value=log_value,
                           log_only=False)


def stop_threshold(m: int, cfg: SizeSearchConfig) -> float:
    thr = (cfg.k / cfg.n) * math.log((m + 1) / m)
    if cfg.geometric_prior_ratio is not None:
        thr += math.log(1.0 / cfg.geometric_prior_ratio) / cfg.n
    return thr


def stop_predicate(d_m: float, d_m1: float, m: int, cfg: SizeSearchConfig) -> bool:
    """True when growing from m to m+1 is not worth its cost.

    D0 values may stand in for D: the entropy of X cancels in the
    difference. With k = 0 and no prior the search never stops here.
    """
    if not (math.isfinite(d_m) and math.isfinite(d_m1)):
        raise ValidationError("stop predicate needs finite objective values")
    if cfg.k == 0.0 and cfg.geometric_prior_ratio is None:
        return False
    # Exact ties count as a stop.
    return (d_m - d_m1) <= stop_threshold(m, cfg)


@dataclass
class SizeSearchResult:
    chosen_m: int
    reports: dict
    flags: list = field(default_factory=list)


def _split_largest(gm: GaussianMixture, floor: float) -> GaussianMixture:
    """Warm start for size m+1: split the highest-variance component."""
    comps = list(gm.components)
    j = int(np.argmax([v for _, _, v in comps]))
    p, mu, v = comps[j]
    sd = math.sqrt(max(v, floor))
    comps[j] = (p / 2.0, mu - sd / 2.0, max(v, floor))
    comps.insert(j + 1, (p / 2.0, mu + sd / 2.0, max(v, floor)))
    return GaussianMixture(tuple(comps), var_floor=0.0)


def _final_d0(report: FitReport) -> float:
    return report.d0_trace[-1] if report.d0_trace else math.inf


def select_size(spec, em_cfg: EmConfig = None, cfg: SizeSearchConfig = None,
                qcfg: QuadratureConfig = None) -> SizeSearchResult:
    """Grow the mixture until the stop rule fires ``lookahead + 1`` times in
    a row (or max_m is reached); returns every fit computed."""
    if cfg is None:
        raise ValidationError("size search requires a SizeSearchConfig")
    em_cfg = em_cfg or EmConfig()
    qcfg = qcfg or default_config()
    floor = em_cfg.var_floor_rel * max(dist.moments(spec, 2, qcfg).variance, 1e-300)

    reports: dict[int, FitReport] = {}
    flags: list[str] = []

    def fit(m: int) -> FitReport | None:
        if m in reports:
            return reports[m]
        candidates = []
        try:
            candidates.append(em_fit(spec, m, em_cfg, qcfg))
        except Exception as exc:  # noqa: BLE001 - record and move on
            flags.append(f"fit_failed:m={m}:{type(exc).__name__}")
        prev = reports.get(m - 1)
        if prev is not None and prev.d0_trace and m >= 2:
            split_cfg = EmConfig(
                max_iterations=em_cfg.max_iterations,
                convergence_tol=em_cfg.convergence_tol,
                init_strategy="user", seed=em_cfg.seed,
                init_user=_split_largest(prev.mixture, floor),
                var_floor_rel=em_cfg.var_floor_rel,
                aitken=em_cfg.aitken, aitken_window=em_cfg.aitken_window,
                fixed_point_tol=em_cfg.fixed_point_tol)
            try:
                cand = em_fit(spec, m, split_cfg, qcfg)
                cand.flags.append("split_init")
                candidates.append(cand)
            except Exception as exc:  # noqa: BLE001
                flags.append(f"split_init_failed:m={m}:{type(exc).__name__}")
        if not candidates:
            if m == 1:
                raise ValidationError("size search could not fit even m=1")
            flags.append(f"size_skipped:m={m}")
            return None
        best = min(candidates, key=_final_d0)
        reports[m] = best
        return best

    chosen = None
    for m in range(1, cfg.max_m + 1):
        base = fit(m)
        if base is None:
            continue
        stops = []
        for j in range(cfg.lookahead + 1):
            lo_m = m + j
            if lo_m + 1 > cfg.max_m:
                break
            r_lo = fit(lo_m)
            r_hi = fit(lo_m + 1)
            if r_lo is None or r_hi is None:
                break
            stops.append(stop_predicate(_final_d0(r_lo), _final_d0(r_hi), lo_m, cfg))
        if stops and all(stops) and len(stops) == min(cfg.lookahead + 1,
                                                      cfg.max_m - m):
            chosen = m
            break
    if chosen is None:
        chosen = max(reports) if reports else cfg.max_m
        flags.append("hit_max_m")
    return SizeSearchResult(chosen_m=chosen, reports=reports, flags=flags)
