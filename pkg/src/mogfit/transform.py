"""Monotone transformation chains and the power-transform search.

A chain composes affine, scaled-odds and Box-Cox steps. ``pushforward``
produces the transformed distribution by change of variable;
``optimal_power`` finds the Box-Cox power with minimum relative entropy
to a Gaussian by a coarse scan followed by golden-section refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import DistributionSpec, entropy, expect
from .errors import (
    BracketError,
    DivergenceError,
    DomainError,
    QuadratureError,
    ValidationError,
)
from .quadrature import QuadratureConfig, default_config

__all__ = [
    "Affine", "ScaledOdds", "BoxCox", "TransformChain", "PowerSearchConfig",
    "identity_chain", "pushforward", "transform_gap", "optimal_power",
    "round_power", "precondition", "TransformedSpec",
]

_P_ZERO = 1e-8  # |p| below this is treated as the logarithm


@dataclass(frozen=True)
class Affine:
    scale: float
    shift: float = 0.0

    def __post_init__(self):
        if self.scale == 0:
            raise ValidationError("affine scale must be nonzero")

    def apply(self, x):
        return self.scale * x + self.shift

    def invert(self, y):
        return (y - self.shift) / self.scale

    def deriv(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.scale)

    def domain(self):
        return (-math.inf, math.inf)

    def image(self, lo, hi):
        a, b = self.apply(lo), self.apply(hi)
        return (a, b) if self.scale > 0 else (b, a)


@dataclass(frozen=True)
class ScaledOdds:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValidationError("scaled odds requires a < b")

    def apply(self, x):
        return (x - self.a) / (self.b - x)

    def invert(self, y):
        return (self.a + self.b * np.asarray(y)) / (1.0 + np.asarray(y))

    def deriv(self, x):
        return (self.b - self.a) / (self.b - np.asarray(x)) ** 2

    def domain(self):
        return (self.a, self.b)

    def image(self, lo, hi):
        lo = max(lo, self.a)
        out_lo = float(self.apply(lo))
        out_hi = math.inf if hi >= self.b else float(self.apply(hi))
        return out_lo, out_hi


@dataclass(frozen=True)
class BoxCox:
    p: float
    rounded_from: float | None = None  # annotation: pre-rounding power

    @property
    def is_log(self):
        return abs(self.p) < _P_ZERO

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("Box-Cox applies only to positive values")
        if self.is_log:
            return np.log(x)
        return np.expm1(self.p * np.log(x)) / self.p

    def invert(self, y):
        y = np.asarray(y, dtype=float)
        if self.is_log:
            return np.exp(y)
        z = self.p * y
        if np.any(z <= -1.0):
            raise DomainError("value outside the image of the Box-Cox transform")
        return np.exp(np.log1p(z) / self.p)

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp((self.p - 1.0) * np.log(x))

    def domain(self):
        return (0.0, math.inf)

    def image(self, lo, hi):
        lo = max(lo, 0.0)
        out_lo = -math.inf if (lo == 0.0 and self.p <= 0) else (
            float(self.apply(np.array([lo]))[0]) if lo > 0 else -1.0 / self.p)
        out_hi = math.inf if (hi == math.inf and self.p >= 0) else (
            float(self.apply(np.array([hi]))[0]) if math.isfinite(hi) else -1.0 / self.p)
        return out_lo, out_hi


@dataclass(frozen=True)
class TransformChain:
    steps: tuple = ()

    def apply(self, x):
        scalar = np.ndim(x) == 0
        out = np.atleast_1d(np.asarray(x, dtype=float))
        for s in self.steps:
            out = np.asarray(s.apply(out), dtype=float)
        return float(out[0]) if scalar else out

    def invert(self, y):
        scalar = np.ndim(y) == 0
        out = np.atleast_1d(np.asarray(y, dtype=float))
        for s in reversed(self.steps):
            out = np.asarray(s.invert(out), dtype=float)
        return float(out[0]) if scalar else out

    def log_deriv(self, x):
        """ln of the chain derivative at x (chain rule, evaluated forward)."""
        cur = np.atleast_1d(np.asarray(x, dtype=float))
        acc = np.zeros_like(cur)
        for s in self.steps:
            with np.errstate(divide="ignore"):
                acc = acc + np.log(np.abs(np.asarray(s.deriv(cur), dtype=float)))
            cur = np.asarray(s.apply(cur), dtype=float)
        return acc

    def deriv(self, x):
        return np.exp(self.log_deriv(x))

    def extended(self, step) -> "TransformChain":
        return TransformChain(self.steps + (step,))


def identity_chain() -> TransformChain:
    return TransformChain(())


@dataclass(frozen=True)
class PowerSearchConfig:
    bracket: tuple = (-2.0, 3.0)
    tolerance: float = 1e-4
    rounding_threshold: float = 0.05
    candidate_round_targets: tuple = (0.0, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0, -1.0)

    def __post_init__(self):
        if not self.bracket[0] < self.bracket[1]:
            raise ValidationError("power bracket requires p_lo < p_hi")
        if self.tolerance <= 0:
            raise ValidationError("search tolerance must be positive")
        if self.rounding_threshold < 0:
            raise ValidationError("rounding threshold must be nonnegative")


# ---------------------------------------------------------------------------
# Pushforward
# ---------------------------------------------------------------------------

class TransformedSpec(DistributionSpec):
    """Change-of-variable image of a base spec under an increasing chain."""

    def __init__(self, base: DistributionSpec, chain: TransformChain):
        lo, hi = base.support()
        cur_lo, cur_hi = lo, hi
        for s in chain.steps:
            d_lo, d_hi = s.domain()
            if cur_lo < d_lo - 1e-12 or cur_hi > d_hi + 1e-12:
                # Tolerate spill-over carrying negligible probability mass.
                mass = 0.0
                if cur_lo < d_lo:
                    mass += float(base.cdf(d_lo)) if (cur_lo, cur_hi) == (lo, hi) else math.inf
                if cur_hi > d_hi:
                    mass += 1.0 - float(base.cdf(d_hi)) if (cur_lo, cur_hi) == (lo, hi) else math.inf
                if mass > 1e-9:
                    raise DomainError(
                        f"support [{cur_lo}, {cur_hi}] exceeds step domain [{d_lo}, {d_hi}]")
            if isinstance(s, Affine) and s.scale < 0:
                raise DomainError("chain steps must be monotone increasing")
            cur_lo, cur_hi = s.image(max(cur_lo, d_lo), min(cur_hi, d_hi))
        if any(isinstance(s, BoxCox) for s in chain.steps):
            for loc, _ in base.point_masses():
                probe = loc
                for s in chain.steps:
                    if isinstance(s, BoxCox) and probe <= 0:
                        raise DomainError(
                            f"atom at x={loc} reaches the Box-Cox boundary; "
                            "strip or shift it before transforming")
                    probe = float(np.atleast_1d(s.apply(np.array([probe])))[0])
        atoms = tuple((chain.apply(loc), m) for loc, m in base.atoms)
        super().__init__(atoms)
        self.base = base
        self.chain = chain
        self._lo, self._hi = cur_lo, cur_hi

    def _has_continuous(self):
        return self.base._has_continuous()

    def _in_image(self, y):
        return (y > self._lo) & (y < self._hi)

    def _cont_pdf(self, y):
        return np.exp(self._cont_logpdf(y))

    def _cont_logpdf(self, y):
        y = np.asarray(y, dtype=float)
        ok = self._in_image(y)
        out = np.full(y.shape, -np.inf)
        if np.any(ok):
            x = np.asarray(self.chain.invert(y[ok]), dtype=float)
            # Inverting deep into a tail can underflow outside the base
            # support (e.g. to exactly 0 under a near-log power); the
            # density there is zero.
            b_lo, b_hi = self.base._cont_support()
            inside = (x > b_lo) & (x < b_hi)
            vals = np.full(x.shape, -np.inf)
            if np.any(inside):
                xi = x[inside]
                vals[inside] = self.base._cont_logpdf(xi) - self.chain.log_deriv(xi)
            out[ok] = vals
        return out

    def _cont_cdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.empty(y.shape)
        out[y <= self._lo] = 0.0
        out[y >= self._hi] = 1.0
        ok = self._in_image(y)
        if np.any(ok):
            out[ok] = self.base._cont_cdf(np.asarray(self.chain.invert(y[ok])))
        return out

    def _cont_ppf(self, q):
        return float(self.chain.apply(self.base._cont_ppf(q)))

    def _cont_support(self):
        return self._lo, self._hi

    def _variant_points(self):
        return [(float(self.chain.apply(loc)), m) for loc, m in self.base._variant_points()]

    def _breakpoints(self):
        lo, hi = self.base.support()
        pts = [p for p in self.base._breakpoints() if lo < p < hi]
        return [float(self.chain.apply(p)) for p in pts]

    def _quantile_hints(self):
        lo, hi = self.base._cont_support()
        pts = [p for p in self.base._quantile_hints() if lo < p < hi]
        return [float(self.chain.apply(p)) for p in pts]


def pushforward(spec: DistributionSpec, chain: TransformChain) -> DistributionSpec:
    """Distribution of chain(X); identity chains return the spec unchanged."""
    if not chain.steps:
        return spec
    return TransformedSpec(spec, chain)


# ---------------------------------------------------------------------------
# Gap to the moment-matching Gaussian
# ---------------------------------------------------------------------------

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def transform_gap(spec: DistributionSpec, chain: TransformChain,
                  cfg: QuadratureConfig = None) -> float:
    """D between the transformed spec and its moment-matching Gaussian.

    Fast path: 1/2 {1 + ln 2pi + ln Var[t(X)]} - H(X) - E[ln |t'(X)|],
    which avoids constructing the pushforward.
    """
    cfg = cfg or default_config()
    h = entropy(spec, cfg)

    def parts(x):
        t = np.atleast_1d(chain.apply(x))
        return np.stack([t, t * t, chain.log_deriv(x)], axis=1)

    e_t, e_t2, e_logd = np.atleast_1d(expect(spec, parts, cfg))
    var = e_t2 - e_t ** 2
    if var <= 0 or not math.isfinite(var):
        raise DomainError("transformed variable has no positive finite variance")
    return 0.5 * (1.0 + math.log(2.0 * math.pi) + math.log(var)) - h - e_logd


# ---------------------------------------------------------------------------
# Optimal power search
# ---------------------------------------------------------------------------

def _power_objective(spec, e_lnx, cfg):
    """1/2 ln Var[t_p(X)] - (p - 1) E[ln X] as a function of p."""

    def obj(p):
        step = BoxCox(p)

        def parts(x):
            with np.errstate(over="ignore"):
                t = np.atleast_1d(step.apply(x))
                return np.stack([t, t * t], axis=1)

        try:
            e_t, e_t2 = np.atleast_1d(expect(spec, parts, cfg))
        except (QuadratureError, DivergenceError):
            # Var[t_p(X)] diverges for this power.
            return math.inf
        var = e_t2 - e_t ** 2
        if var <= 0 or not math.isfinite(var):
            return math.inf
        return 0.5 * math.log(var) - (p - 1.0) * e_lnx

    return obj


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, a, b, tol):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = c if fc <= fd else d
    return x, min(fc, fd)


def optimal_power(spec: DistributionSpec,
                  search_cfg: PowerSearchConfig = None,
                  cfg: QuadratureConfig = None):
    """Minimize the power-transform objective over the bracket.

    Returns (p_star, objective value). The spec must live on (0, inf).
    """
    search_cfg = search_cfg or PowerSearchConfig()
    cfg = cfg or default_config()
    lo, hi = spec.support()
    if lo < -1e-12 or float(spec.cdf(0.0)) > 1e-9 or any(
            loc <= 0 for loc, _ in spec.point_masses()):
        raise DomainError(
            "spec has mass at or below 0; precondition it onto (0, inf) first")
    e_lnx = expect(spec, np.log, cfg)
    if not math.isfinite(e_lnx):
        raise DomainError("E[ln X] is not finite on this spec")
    obj = _power_objective(spec, e_lnx, cfg)
    # The coarse scan only localizes the minimum; loose tolerances keep the
    # heavy-tail (near-divergent) powers from dominating the runtime.
    scan_cfg = QuadratureConfig(
        abs_tol=max(cfg.abs_tol, 1e-6),
        rel_tol=max(cfg.rel_tol, 1e-6),
        tail_mass_cutoff=max(cfg.tail_mass_cutoff, 1e-10),
        max_subdivisions=min(cfg.max_subdivisions, 500),
    )
    scan_obj = _power_objective(spec, e_lnx, scan_cfg)
    p_lo, p_hi = search_cfg.bracket
    grid = np.linspace(p_lo, p_hi, 31)
    vals = np.array([scan_obj(p) for p in grid])
    if not np.any(np.isfinite(vals)):
        raise BracketError("power objective is non-finite over the whole bracket")
    i = int(np.nanargmin(np.where(np.isfinite(vals), vals, np.inf)))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    p_star, val = _golden_section(obj, float(a), float(b), search_cfg.tolerance)
    return float(p_star), float(val)


def round_power(p: float, search_cfg: PowerSearchConfig = None) -> float:
    """Snap p to the nearest interpretable target when close enough."""
    search_cfg = search_cfg or PowerSearchConfig()
    best = min(search_cfg.candidate_round_targets, key=lambda t: abs(p - t))
    return float(best) if abs(p - best) <= search_cfg.rounding_threshold else p


def precondition(spec: DistributionSpec, bounds=None) -> TransformChain:
    """Chain mapping the spec's support onto [0, inf).

    Two-sided bounds give a scaled-odds step, a lower bound alone an
    affine shift, and an already-nonnegative spec the identity.
    """
    lo, hi = spec.support()
    if bounds is not None:
        a = bounds[0]
        b = bounds[1] if len(bounds) > 1 else None
        if a is None:
            raise ValidationError("bounds must include a lower bound")
        out_mass = float(spec.cdf(np.nextafter(float(a), -math.inf)))
        if b is not None and math.isfinite(b):
            out_mass += 1.0 - float(spec.cdf(float(b)))
        if out_mass > 1e-9:
            raise ValidationError(
                f"declared bounds {bounds} exclude probability mass {out_mass:.3e}")
        if b is not None and math.isfinite(b):
            return TransformChain((ScaledOdds(float(a), float(b)),))
        if a == 0:
            return identity_chain()
        return TransformChain((Affine(1.0, -float(a)),))
    if lo >= 0:
        return identity_chain()
    if math.isfinite(lo):
        return TransformChain((Affine(1.0, -lo),))
    raise ValidationError(
        "spec is unbounded below; supply practical bounds to precondition it")
