"""Gaussian mixtures: the value type every fit produces.

A mixture is a weighted set of Gaussian components. Zero-variance
components are first-class and act as point masses, so a mixture can
represent mixed continuous/discrete distributions (and, with only
zero-variance components, a purely discrete one).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import DegeneratePointError, DivergenceError, ValidationError

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianMixture:
    """Weights on the simplex, component means and variances.

    ``var_floor`` defaults to 1e-10 times the overall mixture variance;
    positive variances below the floor are rejected, exact zeros are
    allowed (point masses).
    """

    components: tuple[tuple[float, float, float], ...]
    var_floor: float = field(default=-1.0)  # sentinel: derive from overall variance

    def __post_init__(self):
        comps = tuple((float(p), float(mu), float(v)) for p, mu, v in self.components)
        if len(comps) < 1:
            raise ValidationError("mixture needs at least one component")
        ps = np.array([c[0] for c in comps])
        if np.any(ps < -1e-12) or np.any(ps > 1 + 1e-12):
            raise ValidationError("component weights must lie in [0, 1]")
        total = ps.sum()
        if abs(total - 1.0) > 1e-6:
            raise ValidationError(f"component weights sum to {total}, not 1")
        if abs(total - 1.0) > 0:
            comps = tuple((p / total, mu, v) for p, mu, v in comps)
        if any(c[2] < 0 for c in comps):
            raise ValidationError("variances must be nonnegative")
        floor = self.var_floor
        if floor < 0:
            ov = _overall_variance(comps)
            floor = 1e-10 * ov if ov > 0 else 0.0
        bad = [i for i, c in enumerate(comps) if 0.0 < c[2] < floor]
        if bad:
            raise ValidationError(
                f"components {bad} have variance below the floor {floor:g} "
                "(use exactly 0 for point masses)")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "var_floor", floor)

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    @property
    def means(self) -> np.ndarray:
        return np.array([c[1] for c in self.components])

    @property
    def variances(self) -> np.ndarray:
        return np.array([c[2] for c in self.components])

    def mean(self) -> float:
        return float(np.dot(self.weights, self.means))

    def variance(self) -> float:
        return _overall_variance(self.components)

    def atom_components(self):
        """(weight, location) pairs for the zero-variance components."""
        return [(p, mu) for p, mu, v in self.components if v == 0.0]


def _overall_variance(comps) -> float:
    ps = np.array([c[0] for c in comps])
    mus = np.array([c[1] for c in comps])
    vs = np.array([c[2] for c in comps])
    mean = float(ps @ mus)
    return float(ps @ (vs + (mus - mean) ** 2))


def component_log_densities(gm: GaussianMixture, x) -> np.ndarray:
    """log densities of the positive-variance components, shape (m, n).

    Rows for zero-variance components are -inf everywhere.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.full((gm.m, x.size), -np.inf)
    for i, (_, mu, v) in enumerate(gm.components):
        if v > 0:
            out[i] = -0.5 * ((x - mu) ** 2 / v + _LOG_2PI + math.log(v))
    return out


def mixture_log_density(gm: GaussianMixture, x) -> np.ndarray:
    """log of the continuous-part density, computed stably in log space."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    logphi = component_log_densities(gm, x)
    logp = np.log(np.where(gm.weights > 0, gm.weights, 1.0))
    logp[gm.weights == 0] = -np.inf
    terms = logphi + logp[:, None]
    hi = terms.max(axis=0)
    with np.errstate(invalid="ignore"):
        out = hi + np.log(np.exp(terms - hi).sum(axis=0))
    out[~np.isfinite(hi)] = -np.inf
    return out


def mixture_density(gm: GaussianMixture, x):
    """Continuous-part density; zero-variance components are excluded."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.exp(mixture_log_density(gm, x_arr))
    return out if np.ndim(x) else float(out[0])


def mixture_cdf(gm: GaussianMixture, x):
    """Full CDF; zero-variance components contribute step functions."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x_arr)
    for p, mu, v in gm.components:
        if v > 0:
            out += p * ndtr((x_arr - mu) / math.sqrt(v))
        else:
            out += p * (x_arr >= mu)
    return out if np.ndim(x) else float(out[0])


def responsibilities(gm: GaussianMixture, x: float) -> np.ndarray:
    """Posterior component probabilities at x; sums to 1."""
    logphi = component_log_densities(gm, x)[:, 0]
    with np.errstate(divide="ignore"):
        logterms = logphi + np.log(gm.weights)
    for i, (p, mu, v) in enumerate(gm.components):
        if v == 0.0 and x == mu and p > 0:
            # Point mass exactly at x dominates every density.
            out = np.zeros(gm.m)
            out[i] = 1.0
            return out
    hi = logterms.max()
    if not np.isfinite(hi):
        raise DegeneratePointError(f"mixture density is zero at x={x}")
    r = np.exp(logterms - hi)
    return r / r.sum()


def moment_match_gaussian(spec, cfg=None) -> GaussianMixture:
    """Single-component mixture with the spec's mean and variance."""
    from . import distribution  # local import avoids a module cycle

    mom = distribution.moments(spec, 2, cfg)
    mean, var = mom.mean, mom.variance
    if not (math.isfinite(mean) and math.isfinite(var)):
        raise DivergenceError("spec has non-finite mean or variance")
    return GaussianMixture(((1.0, mean, var),), var_floor=0.0)


def sample(gm: GaussianMixture, count: int, seed: int) -> np.ndarray:
    """Deterministic sampling: draw the selector, then the component."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.choice(gm.m, size=count, p=gm.weights)
    mus = gm.means[idx]
    sds = np.sqrt(gm.variances[idx])
    return mus + sds * rng.standard_normal(count)
