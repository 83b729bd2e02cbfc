"""Generalized EM: fit a Gaussian mixture to a probability distribution.

The "data" is a distribution spec, not a sample; every expectation in the
update equations runs through the shared quadrature engine (or collapses
to an exact weighted sum for empirical specs, recovering classic
sample-based EM / maximum likelihood). The objective is the cross term
D0(X, Y(theta)) = -E[ln f_Y(X)], which EM never increases.

Also provides the two-component method-of-moments fast fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import distribution as dist
from .errors import (
    ComponentDeathError,
    DivergenceError,
    NumericalError,
    UnsupportedInputError,
    ValidationError,
)
from .mixture import GaussianMixture, component_log_densities
from .quadrature import QuadratureConfig, default_config

__all__ = [
    "EmConfig", "FitReport", "init_mixture", "em_step", "em_fit",
    "fast_fit_two", "cross_term_mixture",
]

_WEIGHT_DEATH = 1e-12


@dataclass(frozen=True)
class EmConfig:
    max_iterations: int = 500
    convergence_tol: float = 1e-9          # on the per-iteration D0 decrease
    init_strategy: str = "quantile"        # "quantile" | "random" | "user"
    seed: int = 0                          # for the random strategy / restarts
    init_user: GaussianMixture | None = None
    var_floor_rel: float = 1e-6
    aitken: bool = True
    aitken_window: int = 3
    fixed_point_tol: float = 1e-6          # residual required to declare convergence

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.convergence_tol <= 0 or self.var_floor_rel <= 0:
            raise ValidationError("tolerances must be positive")
        if self.init_strategy not in ("quantile", "random", "user"):
            raise ValidationError(f"unknown init strategy {self.init_strategy!r}")
        if self.init_strategy == "user" and self.init_user is None:
            raise ValidationError("user init strategy requires init_user")


@dataclass
class FitReport:
    mixture: GaussianMixture
    d0_trace: list
    relative_entropy: float | None
    iterations: int
    converged: bool
    fixed_point_residual: float
    flags: list = field(default_factory=list)


def init_mixture(spec, m: int, strategy: str = "quantile",
                 cfg: EmConfig = None, qcfg: QuadratureConfig = None):
    """Starting mixture: means at the (i-1/2)/m quantiles, variance Var(X)/m^2."""
    cfg = cfg or EmConfig()
    qcfg = qcfg or default_config()
    if m < 1:
        raise ValidationError("mixture size must be >= 1")
    mom = dist.moments(spec, 2, qcfg)
    var = max(mom.variance, 1e-300)
    flags = []
    try:
        means = np.array([spec.ppf((i + 0.5) / m) for i in range(m)])
    except Exception:
        spread = math.sqrt(var)
        means = mom.mean + spread * np.linspace(-1.0, 1.0, m)
        flags.append("quantile_fallback")
    if strategy == "random":
        rng = np.random.default_rng(cfg.seed)
        means = means + rng.standard_normal(m) * math.sqrt(var) / m
    elif strategy == "user":
        return cfg.init_user, flags
    comps = tuple((1.0 / m, float(mu), var / m ** 2) for mu in means)
    return GaussianMixture(comps, var_floor=0.0), flags


def _em_integrals(spec, gm: GaussianMixture, qcfg: QuadratureConfig):
    """One shared pass: responsibilities moments and the D0 of the old theta.

    Returns (w, s1, s2, d0) where w_i = E[r_i], s1_i = E[X r_i],
    s2_i = E[X^2 r_i], and d0 = -E[ln f_Y(X)].
    """
    m = gm.m
    logp = np.log(gm.weights)

    def integrand(x):
        logphi = component_log_densities(gm, x)           # (m, n)
        terms = logphi + logp[:, None]
        hi = terms.max(axis=0)
        logf = hi + np.log(np.exp(terms - hi).sum(axis=0))
        r = np.exp(terms - logf)                           # responsibilities
        cols = [r.T, (x[:, None] * r.T), (x[:, None] ** 2 * r.T), -logf[:, None]]
        return np.concatenate(cols, axis=1)

    out = np.atleast_1d(dist.expect(spec, integrand, qcfg))
    w = out[:m]
    s1 = out[m:2 * m]
    s2 = out[2 * m:3 * m]
    d0 = float(out[3 * m])
    return w, s1, s2, d0


def _update(spec_var_floor, w, s1, s2):
    total = w.sum()
    idx = int(np.argmin(w))
    if w[idx] < _WEIGHT_DEATH:
        raise ComponentDeathError(
            f"component {idx} weight underflowed ({w[idx]:.3e})", idx)
    p = w / total
    mu = s1 / w
    var = s2 / w - mu ** 2
    clamped = bool(np.any(var < spec_var_floor))
    var = np.maximum(var, spec_var_floor)
    return p, mu, var, clamped


def _floor_for(spec, cfg: EmConfig, qcfg: QuadratureConfig) -> float:
    return cfg.var_floor_rel * max(dist.moments(spec, 2, qcfg).variance, 1e-300)


def em_step(spec, gm: GaussianMixture, cfg: EmConfig = None,
            qcfg: QuadratureConfig = None) -> GaussianMixture:
    """One EM iteration: all responsibilities from the old parameters,
    then simultaneous weight/mean/variance updates."""
    cfg = cfg or EmConfig()
    qcfg = qcfg or default_config()
    floor = _floor_for(spec, cfg, qcfg)
    w, s1, s2, _ = _em_integrals(spec, gm, qcfg)
    p, mu, var, _ = _update(floor, w, s1, s2)
    return GaussianMixture(tuple(zip(p, mu, var)), var_floor=0.0)


def cross_term_mixture(spec, gm: GaussianMixture,
                       qcfg: QuadratureConfig = None) -> float:
    """D0(spec, gm), the EM objective."""
    qcfg = qcfg or default_config()
    return dist.cross_term(spec, dist.MixtureSpec(gm), qcfg)


def _params(gm: GaussianMixture) -> np.ndarray:
    return np.concatenate([gm.weights, gm.means, gm.variances])


def _residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


def _aitken_candidate(h0, h1, h2, floor):
    d1 = h1 - h0
    d2 = h2 - h1
    denom = d2 - d1
    safe = np.abs(denom) > 1e-14
    acc = np.where(safe, h2 - np.where(safe, d2, 1.0) ** 2 / np.where(safe, denom, 1.0), h2)
    m = h2.size // 3
    p = np.clip(acc[:m], 1e-12, None)
    p = p / p.sum()
    mu = acc[m:2 * m]
    var = np.maximum(acc[2 * m:], floor)
    if not np.all(np.isfinite(np.concatenate([p, mu, var]))):
        return None
    return GaussianMixture(tuple(zip(p, mu, var)), var_floor=0.0)


def _em_run(spec, gm, cfg: EmConfig, qcfg: QuadratureConfig, floor):
    """EM iterations from a given start; returns (gm, trace, iters, converged, residual)."""
    trace = []
    history = [_params(gm)]
    iters = 0
    converged = False
    residual = math.inf
    while iters < cfg.max_iterations:
        w, s1, s2, d0_old = _em_integrals(spec, gm, qcfg)
        trace.append(d0_old)
        p, mu, var, _ = _update(floor, w, s1, s2)
        new = GaussianMixture(tuple(zip(p, mu, var)), var_floor=0.0)
        iters += 1
        residual = _residual(_params(gm), _params(new))
        decrease = trace[-2] - trace[-1] if len(trace) >= 2 else math.inf
        if decrease < cfg.convergence_tol and residual <= cfg.fixed_point_tol:
            converged = True
            # gm (not new) is the iterate whose fixed-point residual we
            # just measured; report it.
            break
        gm = new
        history.append(_params(gm))
        if cfg.aitken and len(history) >= cfg.aitken_window and iters % cfg.aitken_window == 0:
            cand = _aitken_candidate(history[-3], history[-2], history[-1], floor)
            if cand is not None:
                d0_cur = cross_term_mixture(spec, gm, qcfg)
                d0_cand = cross_term_mixture(spec, cand, qcfg)
                if d0_cand <= d0_cur:
                    gm = cand
                    history = [_params(gm)]
    return gm, trace, iters, converged, residual


def em_fit(spec, m: int, cfg: EmConfig = None,
           qcfg: QuadratureConfig = None) -> FitReport:
    """Fit an m-component mixture; restarts once if a component dies."""
    cfg = cfg or EmConfig()
    qcfg = qcfg or default_config()
    floor = _floor_for(spec, cfg, qcfg)
    gm0, flags = init_mixture(spec, m, cfg.init_strategy, cfg, qcfg)
    try:
        gm, trace, iters, converged, residual = _em_run(spec, gm0, cfg, qcfg, floor)
    except ComponentDeathError:
        flags.append("component_death_restart")
        gm0, extra = init_mixture(spec, m, "random", cfg, qcfg)
        flags.extend(extra)
        try:
            gm, trace, iters, converged, residual = _em_run(spec, gm0, cfg, qcfg, floor)
        except ComponentDeathError as exc:
            flags.append(f"component_death:{exc.component_index}")
            return FitReport(mixture=gm0, d0_trace=[], relative_entropy=None,
                             iterations=0, converged=False,
                             fixed_point_residual=math.inf, flags=flags)
    if not converged:
        flags.append("max_iterations")
    rel = None
    try:
        h = dist.entropy(spec, qcfg)
        d0_final = cross_term_mixture(spec, gm, qcfg)
        rel = d0_final - h
    except UnsupportedInputError:
        pass
    return FitReport(mixture=gm, d0_trace=trace, relative_entropy=rel,
                     iterations=iters, converged=converged,
                     fixed_point_residual=residual, flags=flags)


# ---------------------------------------------------------------------------
# Two-component method-of-moments fast fit
# ---------------------------------------------------------------------------

def _gaussian_raw_moments(mu, v):
    """Raw moments 1..5 of N(mu, v)."""
    return np.array([
        mu,
        mu ** 2 + v,
        mu ** 3 + 3 * mu * v,
        mu ** 4 + 6 * mu ** 2 * v + 3 * v ** 2,
        mu ** 5 + 10 * mu ** 3 * v + 15 * mu * v ** 2,
    ])


def _mixture_raw_moments(theta):
    p, mu1, mu2, v1, v2 = theta
    return p * _gaussian_raw_moments(mu1, v1) + (1 - p) * _gaussian_raw_moments(mu2, v2)


def _mom_residual(theta, target, scale):
    return (_mixture_raw_moments(theta) - target) / scale


def _numeric_jacobian(fn, theta, eps=1e-7):
    base = fn(theta)
    J = np.empty((base.size, theta.size))
    for j in range(theta.size):
        step = eps * max(1.0, abs(theta[j]))
        up = theta.copy()
        up[j] += step
        J[:, j] = (fn(up) - base) / step
    return J


def fast_fit_two(spec, cfg: EmConfig = None,
                 qcfg: QuadratureConfig = None):
    """Method-of-moments two-component fit matching raw moments 1..5.

    Returns (mixture, flags). Falls back to em_fit(spec, 2) when no real
    solution is found (flag "fast_fit_fallback").
    """
    cfg = cfg or EmConfig()
    qcfg = qcfg or default_config()
    mom = dist.moments(spec, 5, qcfg)
    target = np.array(mom.raw)
    if not np.all(np.isfinite(target)):
        raise DivergenceError("spec lacks finite first five moments")
    sd = math.sqrt(mom.variance)
    scale = np.maximum(np.abs(target), np.array([sd ** r for r in range(1, 6)]))
    scale = np.maximum(scale, 1e-12)
    mu0 = [spec.ppf(0.25), spec.ppf(0.75)]
    theta = np.array([0.5, mu0[0], mu0[1], mom.variance / 4, mom.variance / 4])
    floor = cfg.var_floor_rel * mom.variance

    fn = lambda t: _mom_residual(t, target, scale)
    ok = False
    res = fn(theta)
    for _ in range(200):
        norm0 = np.linalg.norm(res)
        if norm0 < 1e-10:
            ok = True
            break
        J = _numeric_jacobian(fn, theta)
        try:
            step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        improved = False
        for _ in range(40):  # damping: halve until the residual shrinks
            cand = theta + lam * step
            cand[0] = min(max(cand[0], 1e-9), 1 - 1e-9)
            cand[3] = max(cand[3], 0.0)
            cand[4] = max(cand[4], 0.0)
            rc = fn(cand)
            if np.linalg.norm(rc) < norm0:
                theta, res = cand, rc
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    max_rel = float(np.max(np.abs(res)))
    feasible = ok or max_rel <= 1e-6
    if feasible and theta[3] >= 0 and theta[4] >= 0:
        p, mu1, mu2, v1, v2 = theta
        gm = GaussianMixture(((p, mu1, max(v1, 0.0)), (1 - p, mu2, max(v2, 0.0))),
                             var_floor=0.0)
        return gm, ["fast_fit"]
    report = em_fit(spec, 2, cfg, qcfg)
    return report.mixture, ["fast_fit", "fast_fit_fallback"]
