"""Univariate distribution representations and the expectation engine.

A spec is one of four variants (analytic family, assessed-CDF spline,
empirical sample, Gaussian mixture), optionally carrying explicit point
masses ("atoms"). Every downstream computation reduces to ``expect``:
adaptive quadrature over the continuous part plus a weighted sum over the
point masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import ndtri

from . import mixture as _mix
from .errors import (
    DivergenceError,
    NumericalError,
    UnsupportedInputError,
    ValidationError,
)
from .quadrature import QuadratureConfig, default_config, integrate, split_panels

__all__ = [
    "DistributionSpec", "Analytic", "SplineCdf", "Empirical", "MixtureSpec",
    "uniform", "exponential", "gaussian", "lognormal", "beta", "triangular",
    "density", "cdf", "atom_mass", "expect", "entropy", "cross_term",
    "relative_entropy", "moments", "Moments", "spline_from_points",
]


class DistributionSpec:
    """Base class: immutable after construction, pure evaluation methods."""

    def __init__(self, atoms=()):
        cleaned = []
        for loc, mass in atoms:
            loc, mass = float(loc), float(mass)
            if not math.isfinite(loc):
                raise ValidationError(f"atom location must be finite, got {loc}")
            if not (0.0 < mass <= 1.0):
                raise ValidationError(f"atom mass must be in (0, 1], got {mass}")
            cleaned.append((loc, mass))
        total = sum(m for _, m in cleaned)
        if total > 1.0 + 1e-9:
            raise ValidationError(f"total atom mass {total} exceeds 1")
        self.atoms = tuple(sorted(cleaned))
        self._cf = 1.0 - total  # mass left for the variant

    # ---- variant hooks -------------------------------------------------
    def _has_continuous(self) -> bool:
        return True

    def _cont_pdf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cont_cdf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cont_logpdf(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self._cont_pdf(x))

    def _cont_ppf(self, q: float) -> float:
        raise NotImplementedError

    def _cont_support(self):
        return (-math.inf, math.inf)

    def _variant_points(self):
        """Point masses internal to the variant (already variant-normalized)."""
        return []

    def _breakpoints(self):
        return []

    # Initial quadrature panels must track the probability mass: a single
    # panel over a wide support can alias the integrand to ~0 and defeat
    # the adaptive error estimate.
    _HINT_QS = (1e-9, 1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.15, 0.3, 0.5,
                0.7, 0.85, 0.95, 0.99, 1 - 1e-3, 1 - 1e-4, 1 - 1e-6, 1 - 1e-9)

    def _quantile_hints(self):
        return [self._cont_ppf(q) for q in self._HINT_QS]

    def _panel_points(self):
        return list(self._breakpoints()) + self._quantile_hints()

    # ---- public surface ------------------------------------------------
    def point_masses(self):
        """All point masses of the full distribution: variant + explicit atoms."""
        pts = [(x, self._cf * m) for x, m in self._variant_points()]
        pts.extend(self.atoms)
        return sorted(pts)

    def atom_mass(self) -> float:
        return sum(m for _, m in self.point_masses())

    def pdf(self, x):
        if not self._has_continuous():
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = self._cf * self._cont_pdf(arr)
        return out if np.ndim(x) else float(out[0])

    def logpdf(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if not self._has_continuous() or self._cf == 0.0:
            out = np.full(arr.shape, -np.inf)
        else:
            out = math.log(self._cf) + self._cont_logpdf(arr)
        return out if np.ndim(x) else float(out[0])

    def cdf(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = self._cf * self._cont_cdf(arr) if self._has_continuous() else np.zeros(arr.shape)
        for loc, mass in self.point_masses():
            out = out + mass * (arr >= loc)
        out = np.clip(out, 0.0, 1.0)
        return out if np.ndim(x) else float(out[0])

    def support(self):
        """Hull of the continuous support and every point-mass location."""
        if self._has_continuous() and self._cf > 0:
            lo, hi = self._cont_support()
        else:
            lo, hi = math.inf, -math.inf
        for loc, _ in self.point_masses():
            lo, hi = min(lo, loc), max(hi, loc)
        return lo, hi

    def trunc_bounds(self, cutoff: float):
        """Continuous-part interval holding all but ``cutoff`` of its mass."""
        lo, hi = self._cont_support()
        if not math.isfinite(lo):
            lo = self._cont_ppf(cutoff)
        if not math.isfinite(hi):
            hi = self._cont_ppf(1.0 - cutoff)
        return lo, hi

    def ppf(self, q: float) -> float:
        """Quantile of the full distribution (atoms included); bisection-robust."""
        if not (0.0 < q < 1.0):
            raise ValidationError(f"quantile level must be in (0, 1), got {q}")
        if not self._has_continuous() or self._cf == 0.0:
            pts = self.point_masses()
            acc = 0.0
            for loc, mass in pts:
                acc += mass
                if acc >= q - 1e-15:
                    return loc
            return pts[-1][0]
        if not self.point_masses():
            return self._cont_ppf(q)
        lo, hi = self.trunc_bounds(1e-15)
        for loc, _ in self.point_masses():
            lo, hi = min(lo, loc - 1.0), max(hi, loc + 1.0)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= q:
                hi = mid
            else:
                lo = mid
        return hi


# ---------------------------------------------------------------------------
# Analytic families
# ---------------------------------------------------------------------------

_FAMILIES = ("uniform", "exponential", "gaussian", "lognormal", "beta", "triangular")


class Analytic(DistributionSpec):
    def __init__(self, family: str, params: dict, atoms=()):
        super().__init__(atoms)
        if family not in _FAMILIES:
            raise ValidationError(f"unknown analytic family {family!r}")
        self.family = family
        self.params = {k: float(v) for k, v in params.items()}
        self._dist = self._freeze()

    def _freeze(self):
        p = self.params
        try:
            if self.family == "uniform":
                if not p["hi"] > p["lo"]:
                    raise ValidationError("uniform requires hi > lo")
                return stats.uniform(p["lo"], p["hi"] - p["lo"])
            if self.family == "exponential":
                if not p["rate"] > 0:
                    raise ValidationError("exponential rate must be positive")
                return stats.expon(scale=1.0 / p["rate"])
            if self.family == "gaussian":
                if not p["var"] > 0:
                    raise ValidationError("gaussian variance must be positive")
                return stats.norm(p["mean"], math.sqrt(p["var"]))
            if self.family == "lognormal":
                if not p["sigma2"] > 0:
                    raise ValidationError("lognormal sigma2 must be positive")
                return stats.lognorm(s=math.sqrt(p["sigma2"]), scale=math.exp(p["mu"]))
            if self.family == "beta":
                if p["alpha"] <= 0 or p["beta"] <= 0:
                    raise ValidationError("beta shape parameters must be positive")
                return stats.beta(p["alpha"], p["beta"])
            # triangular
            lo, mode, hi = p["lo"], p["mode"], p["hi"]
            if not (lo <= mode <= hi and lo < hi):
                raise ValidationError("triangular requires lo <= mode <= hi, lo < hi")
            return stats.triang((mode - lo) / (hi - lo), loc=lo, scale=hi - lo)
        except KeyError as exc:
            raise ValidationError(
                f"family {self.family!r} is missing parameter {exc.args[0]!r}")

    def _cont_pdf(self, x):
        return self._dist.pdf(x)

    def _cont_logpdf(self, x):
        return self._dist.logpdf(x)

    def _cont_cdf(self, x):
        return self._dist.cdf(x)

    def _cont_ppf(self, q):
        return float(self._dist.ppf(q))

    def _cont_support(self):
        lo, hi = self._dist.support()
        return float(lo), float(hi)

    def _breakpoints(self):
        if self.family == "triangular":
            return [self.params["mode"]]
        return []


def uniform(lo, hi, atoms=()):
    return Analytic("uniform", {"lo": lo, "hi": hi}, atoms)


def exponential(rate, atoms=()):
    return Analytic("exponential", {"rate": rate}, atoms)


def gaussian(mean, var, atoms=()):
    return Analytic("gaussian", {"mean": mean, "var": var}, atoms)


def lognormal(mu, sigma2, atoms=()):
    return Analytic("lognormal", {"mu": mu, "sigma2": sigma2}, atoms)


def beta(alpha, beta_, atoms=()):
    return Analytic("beta", {"alpha": alpha, "beta": beta_}, atoms)


def triangular(lo, mode, hi, atoms=()):
    return Analytic("triangular", {"lo": lo, "mode": mode, "hi": hi}, atoms)


# ---------------------------------------------------------------------------
# Assessed-CDF spline
# ---------------------------------------------------------------------------

class SplineCdf(DistributionSpec):
    """Monotone cubic (shape-preserving Hermite) interpolant of assessed
    cumulative points, with configurable tail completion.

    tail_policy "bounded" extends the end slopes linearly until the CDF
    reaches 0 and 1; "exponential_tails" attaches exponential tails that
    match the end density and the remaining mass.
    """

    def __init__(self, points, tail_policy="bounded", n_equiv=None, atoms=()):
        super().__init__(atoms)
        pts = [(float(x), float(F)) for x, F in points]
        if len(pts) < 3:
            raise ValidationError("spline needs at least 3 assessed points")
        bad = []
        for (x0, f0), (x1, f1) in zip(pts[:-1], pts[1:]):
            if not (x1 > x0 and f1 > f0):
                bad.append(((x0, f0), (x1, f1)))
        if any(not (0.0 < f < 1.0) for _, f in pts):
            raise ValidationError("assessed F values must lie strictly in (0, 1)")
        if bad:
            raise ValidationError(f"points must be strictly increasing; offending pairs: {bad}")
        if tail_policy not in ("bounded", "exponential_tails"):
            raise ValidationError(f"unknown tail_policy {tail_policy!r}")
        self.points = tuple(pts)
        self.tail_policy = tail_policy
        self.n_equiv = int(n_equiv) if n_equiv is not None else len(pts)
        if self.n_equiv < 1:
            raise ValidationError("n_equiv must be a positive integer")

        xs = np.array([p[0] for p in pts])
        Fs = np.array([p[1] for p in pts])
        self._xs, self._Fs = xs, Fs
        self._interp = PchipInterpolator(xs, Fs)
        self._deriv = self._interp.derivative()
        s_lo = float(self._deriv(xs[0]))
        s_hi = float(self._deriv(xs[-1]))
        # Clamped pchip end slopes can vanish; fall back to secant slopes.
        if s_lo <= 1e-12:
            s_lo = (Fs[1] - Fs[0]) / (xs[1] - xs[0])
        if s_hi <= 1e-12:
            s_hi = (Fs[-1] - Fs[-2]) / (xs[-1] - xs[-2])
        self._slope_lo, self._slope_hi = s_lo, s_hi
        self._mass_lo = float(Fs[0])
        self._mass_hi = float(1.0 - Fs[-1])
        if tail_policy == "bounded":
            self._x_lo = float(xs[0] - self._mass_lo / s_lo)
            self._x_hi = float(xs[-1] + self._mass_hi / s_hi)
        else:
            self._rate_lo = s_lo / self._mass_lo
            self._rate_hi = s_hi / self._mass_hi
            self._x_lo, self._x_hi = -math.inf, math.inf

    def _cont_pdf(self, x):
        xs = self._xs
        out = np.zeros_like(x)
        inside = (x >= xs[0]) & (x <= xs[-1])
        out[inside] = np.clip(self._deriv(x[inside]), 0.0, None)
        left = x < xs[0]
        right = x > xs[-1]
        if self.tail_policy == "bounded":
            out[left & (x >= self._x_lo)] = self._slope_lo
            out[right & (x <= self._x_hi)] = self._slope_hi
        else:
            out[left] = self._slope_lo * np.exp(self._rate_lo * (x[left] - xs[0]))
            out[right] = self._slope_hi * np.exp(-self._rate_hi * (x[right] - xs[-1]))
        if np.any(np.isnan(out)):
            loc = float(x[np.isnan(out)][0])
            raise NumericalError(f"spline density unevaluable at x={loc}")
        return out

    def _cont_cdf(self, x):
        xs, Fs = self._xs, self._Fs
        out = np.empty_like(x)
        inside = (x >= xs[0]) & (x <= xs[-1])
        out[inside] = self._interp(x[inside])
        left = x < xs[0]
        right = x > xs[-1]
        if self.tail_policy == "bounded":
            out[left] = np.clip(Fs[0] + self._slope_lo * (x[left] - xs[0]), 0.0, None)
            out[right] = np.clip(Fs[-1] + self._slope_hi * (x[right] - xs[-1]), None, 1.0)
        else:
            out[left] = self._mass_lo * np.exp(self._rate_lo * (x[left] - xs[0]))
            out[right] = 1.0 - self._mass_hi * np.exp(-self._rate_hi * (x[right] - xs[-1]))
        return np.clip(out, 0.0, 1.0)

    def _cont_ppf(self, q):
        xs, Fs = self._xs, self._Fs
        if q <= Fs[0]:
            if self.tail_policy == "bounded":
                return float(xs[0] - (Fs[0] - q) / self._slope_lo)
            q = max(q, 1e-300)
            return float(xs[0] + math.log(q / self._mass_lo) / self._rate_lo)
        if q >= Fs[-1]:
            if self.tail_policy == "bounded":
                return float(xs[-1] + (q - Fs[-1]) / self._slope_hi)
            rem = max(1.0 - q, 1e-300)
            return float(xs[-1] - math.log(rem / self._mass_hi) / self._rate_hi)
        return float(brentq(lambda t: float(self._interp(t)) - q, xs[0], xs[-1]))

    def _cont_support(self):
        return self._x_lo, self._x_hi

    def _breakpoints(self):
        pts = list(self._xs)
        if self.tail_policy == "bounded":
            pts = [self._x_lo] + pts + [self._x_hi]
        return pts


def spline_from_points(points, n_equiv=None, tail_policy="bounded") -> SplineCdf:
    """Build a SplineCdf spec; n_equiv defaults to the number of points."""
    return SplineCdf(points, tail_policy=tail_policy, n_equiv=n_equiv)


# ---------------------------------------------------------------------------
# Empirical samples
# ---------------------------------------------------------------------------

class Empirical(DistributionSpec):
    """A weighted sample: purely discrete, expectations are exact sums."""

    def __init__(self, values, weights=None, atoms=()):
        super().__init__(atoms)
        vals = np.asarray(values, dtype=float)
        if vals.size == 0:
            raise ValidationError("empirical spec needs at least one value")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("empirical values must be finite")
        if weights is None:
            w = np.full(vals.size, 1.0 / vals.size)
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != vals.shape:
                raise ValidationError("weights must match values in length")
            if np.any(w < 0) or w.sum() <= 0:
                raise ValidationError("weights must be nonnegative with positive sum")
            w = w / w.sum()
        merged: dict[float, float] = {}
        for v, ww in zip(vals, w):
            merged[v] = merged.get(v, 0.0) + ww
        items = sorted(merged.items())
        self.values = np.array([v for v, _ in items])
        self.weights = np.array([ww for _, ww in items])

    def _has_continuous(self) -> bool:
        return False

    def _variant_points(self):
        return list(zip(self.values.tolist(), self.weights.tolist()))

    def _cont_cdf(self, x):
        return np.zeros_like(x)

    def _cont_support(self):
        return math.inf, -math.inf


# ---------------------------------------------------------------------------
# Gaussian-mixture specs
# ---------------------------------------------------------------------------

class MixtureSpec(DistributionSpec):
    """A GaussianMixture wrapped as a distribution spec.

    Zero-variance components surface as point masses.
    """

    def __init__(self, gm: _mix.GaussianMixture, atoms=()):
        super().__init__(atoms)
        self.gm = gm

    def _has_continuous(self) -> bool:
        return any(v > 0 and p > 0 for p, _, v in self.gm.components)

    def _cont_pdf(self, x):
        return _mix.mixture_density(self.gm, x)

    def _cont_logpdf(self, x):
        return _mix.mixture_log_density(self.gm, x)

    def _cont_cdf(self, x):
        out = np.zeros_like(x)
        for p, mu, v in self.gm.components:
            if v > 0:
                out += p * stats.norm.cdf(x, mu, math.sqrt(v))
        return out

    def _variant_points(self):
        # atom_components yields (weight, location); points are (x, mass).
        return [(mu, p) for p, mu in self.gm.atom_components()]

    def _cont_support(self):
        return -math.inf, math.inf

    def _cont_ppf(self, q):
        lo = min(mu - 40.0 * math.sqrt(v) for p, mu, v in self.gm.components if v > 0 and p > 0)
        hi = max(mu + 40.0 * math.sqrt(v) for p, mu, v in self.gm.components if v > 0 and p > 0)
        cont_mass = sum(p for p, _, v in self.gm.components if v > 0)
        target = q * cont_mass
        return float(brentq(lambda t: float(self._cont_cdf(np.array([t]))[0]) - target, lo, hi))

    def trunc_bounds(self, cutoff):
        comps = [(p, mu, v) for p, mu, v in self.gm.components if v > 0 and p > 0]
        lo = min(mu + math.sqrt(v) * ndtri(min(0.5, cutoff / (len(comps) * p)))
                 for p, mu, v in comps)
        hi = max(mu - math.sqrt(v) * ndtri(min(0.5, cutoff / (len(comps) * p)))
                 for p, mu, v in comps)
        return lo, hi

    def _breakpoints(self):
        pts = []
        for p, mu, v in self.gm.components:
            if v > 0 and p > 0:
                sd = math.sqrt(v)
                pts.extend([mu - sd, mu, mu + sd])
        return pts

    def _quantile_hints(self):
        pts = []
        for p, mu, v in self.gm.components:
            if v > 0 and p > 0:
                sd = math.sqrt(v)
                pts.extend(mu + k * sd for k in (-8, -4, -2, 2, 4, 8))
        return pts


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def density(spec: DistributionSpec, x):
    """Continuous-part density at x; point masses are reported separately."""
    if np.ndim(x) == 0 and not math.isfinite(float(x)):
        raise ValidationError(f"density point must be finite, got {x}")
    return spec.pdf(x)


def cdf(spec: DistributionSpec, x):
    return spec.cdf(x)


def atom_mass(spec: DistributionSpec) -> float:
    return spec.atom_mass()


def _as_rows(vals: np.ndarray) -> np.ndarray:
    vals = np.asarray(vals, dtype=float)
    return vals[:, None] if vals.ndim == 1 else vals


def expect(spec: DistributionSpec, g, cfg: QuadratureConfig = None):
    """E[g(X)]: quadrature over the continuous part + exact sum over atoms.

    ``g`` maps a 1-D array of points to an array of shape (n,) or (n, k);
    the result is a float or a length-k vector accordingly.
    """
    cfg = cfg or default_config()
    pts = spec.point_masses()
    acc = None
    scalar_out = True
    if pts:
        locs = np.array([loc for loc, _ in pts])
        masses = np.array([m for _, m in pts])
        gv = _as_rows(g(locs))
        scalar_out = gv.shape[1] == 1
        if not np.all(np.isfinite(gv)):
            raise DivergenceError("g is non-finite at a point of positive mass")
        acc = (masses[:, None] * gv).sum(axis=0)
    if spec._has_continuous() and spec._cf > 0:
        lo, hi = spec.trunc_bounds(cfg.tail_mass_cutoff)
        panels = split_panels(lo, hi, spec._panel_points())

        def integrand(x):
            fx = spec.pdf(x)
            gv = _as_rows(g(x))
            nonlocal scalar_out
            scalar_out = scalar_out and gv.shape[1] == 1
            bad = (fx > 0)[:, None] & ~np.isfinite(gv)
            if np.any(bad):
                loc = float(x[np.any(bad, axis=1)][0])
                raise DivergenceError(
                    f"g is non-finite on a positive-density region (near x={loc})")
            with np.errstate(invalid="ignore", over="ignore"):
                return np.where((fx > 0)[:, None], gv * fx[:, None], 0.0)

        val, _ = integrate(integrand, panels, cfg)
        val = np.atleast_1d(val)
        acc = val if acc is None else acc + val
    if acc is None:
        acc = np.zeros(1)
    return float(acc[0]) if scalar_out else acc


def _neg_expected_log(specX: DistributionSpec, log_f, cfg: QuadratureConfig) -> float:
    """-E_X[log_f(X)], returning +inf if log_f = -inf on positive X-mass."""
    hit_inf = False
    acc = 0.0
    for loc, mass in specX.point_masses():
        lv = float(log_f(np.array([loc]))[0])
        if lv == -math.inf:
            hit_inf = True
        elif not math.isfinite(lv):
            raise NumericalError(f"log-density not evaluable at x={loc}")
        else:
            acc -= mass * lv
    if specX._has_continuous() and specX._cf > 0:
        lo, hi = specX.trunc_bounds(cfg.tail_mass_cutoff)
        panels = split_panels(lo, hi, specX._panel_points())
        flag = []

        def integrand(x):
            fx = specX.pdf(x)
            lv = np.asarray(log_f(x), dtype=float)
            bad = (fx > 0) & (lv == -np.inf)
            if np.any(bad):
                flag.append(True)
            ok = (fx > 0) & np.isfinite(lv)
            with np.errstate(invalid="ignore"):
                return np.where(ok, -fx * np.where(ok, lv, 0.0), 0.0)

        val, _ = integrate(integrand, panels, cfg)
        if flag:
            hit_inf = True
        acc += val
    return math.inf if hit_inf else acc


def entropy(spec: DistributionSpec, cfg: QuadratureConfig = None) -> float:
    """Differential entropy -E[ln f(X)]; defined only for atom-free specs."""
    cfg = cfg or default_config()
    pts = spec.point_masses()
    if pts:
        raise UnsupportedInputError(
            f"entropy is undefined for specs with point mass (atom at x={pts[0][0]})")
    return _neg_expected_log(spec, spec.logpdf, cfg)


def cross_term(specX: DistributionSpec, specY: DistributionSpec,
               cfg: QuadratureConfig = None) -> float:
    """D0(X, Y) = -E_X[ln f_Y(X)]; +inf when Y's support misses X-mass."""
    cfg = cfg or default_config()
    y_pts = specY.point_masses()
    if y_pts:
        if specX._has_continuous() and specX._cf > 0:
            raise UnsupportedInputError(
                "Y has point masses where X has continuous mass (density mismatch)")
        locs = {loc for loc, _ in y_pts}
        if any(loc in locs for loc, _ in specX.point_masses()):
            raise UnsupportedInputError(
                "X places mass exactly on a point mass of Y; the cross term is undefined")
    lo_y, hi_y = specY.support()
    mass_out = 0.0
    if math.isfinite(lo_y):
        mass_out += max(0.0, float(specX.cdf(np.nextafter(lo_y, -math.inf))))
    if math.isfinite(hi_y):
        mass_out += max(0.0, 1.0 - float(specX.cdf(hi_y)))
    if mass_out > 1e-9:
        return math.inf
    return _neg_expected_log(specX, specY.logpdf, cfg)


def relative_entropy(specX: DistributionSpec, specY: DistributionSpec,
                     cfg: QuadratureConfig = None) -> float:
    """D(X, Y) = D0(X, Y) - H(X); nonnegative up to quadrature tolerance."""
    cfg = cfg or default_config()
    d0 = cross_term(specX, specY, cfg)
    if d0 == math.inf:
        return math.inf
    return d0 - entropy(specX, cfg)


@dataclass(frozen=True)
class Moments:
    raw: tuple
    central: tuple

    @property
    def mean(self) -> float:
        return self.raw[0]

    @property
    def variance(self) -> float:
        return self.central[1]


def moments(spec: DistributionSpec, max_order: int = 2,
            cfg: QuadratureConfig = None) -> Moments:
    """Raw and central moments of orders 1..max_order."""
    if max_order < 1:
        raise ValidationError("max_order must be a positive integer")
    cfg = cfg or default_config()
    orders = np.arange(1, max_order + 1)
    raw = np.atleast_1d(expect(spec, lambda x: x[:, None] ** orders[None, :], cfg))
    for r, v in zip(orders, raw):
        if not math.isfinite(v):
            raise DivergenceError(f"raw moment of order {r} diverges")
    m1 = raw[0]
    if max_order == 1:
        central = np.array([0.0])
    else:
        central = np.atleast_1d(
            expect(spec, lambda x: (x[:, None] - m1) ** orders[None, :], cfg))
        central[0] = 0.0
    return Moments(tuple(float(v) for v in raw), tuple(float(v) for v in central))
