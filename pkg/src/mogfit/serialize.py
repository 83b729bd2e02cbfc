"""JSON encoding/decoding for specs, chains, mixtures, and fit reports.

The wire format is documented per type below. ``canonical_dumps`` renders
deterministically (sorted keys, compact separators, shortest round-trip
float text) so that identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
import math

from . import distribution as dist
from .emfit import FitReport
from .errors import ValidationError
from .mixture import GaussianMixture
from .transform import Affine, BoxCox, ScaledOdds, TransformChain, TransformedSpec

__all__ = [
    "spec_to_json", "spec_from_json", "chain_to_json", "chain_from_json",
    "mixture_to_json", "mixture_from_json", "report_to_json",
    "canonical_dumps", "parse_json",
]

_ANALYTIC_PARAMS = {
    "uniform": ("lo", "hi"),
    "exponential": ("rate",),
    "gaussian": ("mean", "var"),
    "lognormal": ("mu", "sigma2"),
    "beta": ("alpha", "beta"),
    "triangular": ("lo", "mode", "hi"),
}


def _num(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"expected a number, got {x!r}")
    return float(x)


def _atoms_to_json(spec) -> list:
    return [{"x": float(x), "mass": float(m)} for x, m in spec.atoms]


def _atoms_from_json(obj) -> tuple:
    atoms = obj.get("atoms", [])
    if not isinstance(atoms, list):
        raise ValidationError("atoms must be a list of {x, mass} objects")
    return tuple((_num(a["x"]), _num(a["mass"])) for a in atoms)


# ---------------------------------------------------------------------------
# GaussianMixture: {"components": [{"p": .., "mu": .., "var": ..}]}
# ---------------------------------------------------------------------------

def mixture_to_json(gm: GaussianMixture) -> dict:
    return {"components": [{"p": p, "mu": mu, "var": var}
                           for p, mu, var in gm.components]}


def mixture_from_json(obj) -> GaussianMixture:
    if not isinstance(obj, dict) or "components" not in obj:
        raise ValidationError("mixture JSON must contain a 'components' list")
    comps = tuple((_num(c["p"]), _num(c["mu"]), _num(c["var"]))
                  for c in obj["components"])
    return GaussianMixture(comps)


# ---------------------------------------------------------------------------
# DistributionSpec:
#   {"type": "analytic", "family": .., "params": {..}, "atoms": [..]}
#   {"type": "spline_cdf", "points": [[x, F], ..], "tail_policy": ..,
#    "n_equiv": int, "atoms": [..]}
#   {"type": "empirical", "values": [..], "weights": [..], "atoms": [..]}
#   {"type": "mixture", "mixture": {"components": [..]}, "atoms": [..]}
# ---------------------------------------------------------------------------

def spec_to_json(spec) -> dict:
    if isinstance(spec, TransformedSpec):
        raise ValidationError(
            "transformed specs are serialized as (base spec, chain) pairs")
    out = {"atoms": _atoms_to_json(spec)}
    if isinstance(spec, dist.Analytic):
        out.update(type="analytic", family=spec.family,
                   params={k: float(v) for k, v in sorted(spec.params.items())})
    elif isinstance(spec, dist.SplineCdf):
        out.update(type="spline_cdf",
                   points=[[x, F] for x, F in spec.points],
                   tail_policy=spec.tail_policy, n_equiv=spec.n_equiv)
    elif isinstance(spec, dist.Empirical):
        out.update(type="empirical", values=spec.values.tolist(),
                   weights=spec.weights.tolist())
    elif isinstance(spec, dist.MixtureSpec):
        out.update(type="mixture", mixture=mixture_to_json(spec.gm))
    else:
        raise ValidationError(f"cannot serialize spec of type {type(spec).__name__}")
    return out


def spec_from_json(obj) -> dist.DistributionSpec:
    if not isinstance(obj, dict):
        raise ValidationError("spec JSON must be an object")
    kind = obj.get("type")
    atoms = _atoms_from_json(obj)
    try:
        if kind == "analytic":
            family = obj["family"]
            if family not in _ANALYTIC_PARAMS:
                raise ValidationError(f"unknown analytic family {family!r}")
            params = {k: _num(obj["params"][k]) for k in _ANALYTIC_PARAMS[family]}
            return dist.Analytic(family, params, atoms=atoms)
        if kind == "spline_cdf":
            return dist.SplineCdf(
                [(_num(p[0]), _num(p[1])) for p in obj["points"]],
                tail_policy=obj.get("tail_policy", "bounded"),
                n_equiv=obj.get("n_equiv"), atoms=atoms)
        if kind == "empirical":
            return dist.Empirical(obj["values"], obj.get("weights"), atoms=atoms)
        if kind == "mixture":
            return dist.MixtureSpec(mixture_from_json(obj["mixture"]), atoms=atoms)
    except KeyError as exc:
        raise ValidationError(f"spec JSON is missing field {exc.args[0]!r}")
    raise ValidationError(f"unknown spec type {kind!r}")


# ---------------------------------------------------------------------------
# TransformChain: {"steps": [{"kind": "affine"|"scaled_odds"|"box_cox", ..}]}
# ---------------------------------------------------------------------------

def chain_to_json(chain: TransformChain) -> dict:
    steps = []
    for s in chain.steps:
        if isinstance(s, Affine):
            steps.append({"kind": "affine", "scale": s.scale, "shift": s.shift})
        elif isinstance(s, ScaledOdds):
            steps.append({"kind": "scaled_odds", "a": s.a, "b": s.b})
        elif isinstance(s, BoxCox):
            step = {"kind": "box_cox", "p": s.p}
            if s.rounded_from is not None:
                step["rounded_from"] = s.rounded_from
            steps.append(step)
        else:
            raise ValidationError(f"cannot serialize step {type(s).__name__}")
    return {"steps": steps}


def chain_from_json(obj) -> TransformChain:
    if not isinstance(obj, dict) or not isinstance(obj.get("steps"), list):
        raise ValidationError("chain JSON must contain a 'steps' list")
    steps = []
    for s in obj["steps"]:
        kind = s.get("kind")
        try:
            if kind == "affine":
                steps.append(Affine(_num(s["scale"]), _num(s["shift"])))
            elif kind == "scaled_odds":
                steps.append(ScaledOdds(_num(s["a"]), _num(s["b"])))
            elif kind == "box_cox":
                steps.append(BoxCox(_num(s["p"]),
                                    rounded_from=s.get("rounded_from")))
            else:
                raise ValidationError(f"unknown transform step kind {kind!r}")
        except KeyError as exc:
            raise ValidationError(f"step {kind!r} is missing field {exc.args[0]!r}")
    return TransformChain(tuple(steps))


# ---------------------------------------------------------------------------
# FitReport: {"mixture", "d0_trace", "relative_entropy", "iterations",
#             "converged", "fixed_point_residual", "flags"}
# ---------------------------------------------------------------------------

def report_to_json(report: FitReport) -> dict:
    return {
        "mixture": mixture_to_json(report.mixture),
        "d0_trace": [float(v) for v in report.d0_trace],
        "relative_entropy": report.relative_entropy,
        "iterations": report.iterations,
        "converged": report.converged,
        "fixed_point_residual": report.fixed_point_residual,
        "flags": list(report.flags),
    }


# ---------------------------------------------------------------------------
# Canonical rendering and parsing
# ---------------------------------------------------------------------------

def _canonize(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValidationError("result JSON cannot carry non-finite numbers")
        return obj
    if isinstance(obj, dict):
        return {k: _canonize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonize(v) for v in obj]
    return obj


def canonical_dumps(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, shortest
    round-trip float text (re-parses to identical values)."""
    return json.dumps(_canonize(obj), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)


def parse_json(text: str):
    """json.loads with line/column reported on malformed input."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
