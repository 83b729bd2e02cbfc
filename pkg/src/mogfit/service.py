"""Local HTTP service exposing the fitting pipeline.

Endpoints (all stateless, JSON in/out):
  POST /v1/spline    — assessed cumulative points -> SplineCdf spec
  POST /v1/pipeline  — PipelineRequest -> PipelineResult
  POST /v1/evaluate  — spec + grid -> aligned density/cdf arrays
  GET  /v1/health

Errors: 400 on validation problems, 422 on numerical failure (with the
pipeline stage tag when one applies). Responses are rendered with the
same canonical JSON writer as the CLI, so identical requests yield
byte-identical bodies.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request, Response

from . import distribution as dist
from .errors import NumericalError, PipelineStageError, ValidationError
from .mixture import moment_match_gaussian
from .pipeline import request_from_json, result_to_json, run_pipeline
from .serialize import (canonical_dumps, chain_from_json, parse_json,
                        spec_from_json, spec_to_json)
from .transform import TransformChain

__all__ = ["create_app"]


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=canonical_dumps(payload),
                    media_type="application/json", status_code=status_code)


async def _body_json(request: Request):
    return parse_json((await request.body()).decode("utf-8"))


def _chain_domain(chain: TransformChain):
    """Interval of original-space x on which the whole chain applies."""
    lo, hi = -math.inf, math.inf
    for i, step in enumerate(chain.steps):
        d_lo, d_hi = step.domain()
        prefix = TransformChain(tuple(chain.steps[:i]))
        if math.isfinite(d_lo):
            lo = max(lo, float(prefix.invert(d_lo)))
        if math.isfinite(d_hi):
            hi = min(hi, float(prefix.invert(d_hi)))
    return lo, hi


def _pullback_curves(base, chain: TransformChain, xs):
    """Density/CDF of X = t^{-1}(Y) where Y ~ base and t is the chain.

    A fitted mixture lives in the transformed space; this evaluates it in
    original coordinates: f_X(x) = f_Y(t(x)) t'(x), F_X(x) = F_Y(t(x)).
    """
    lo, hi = _chain_domain(chain)
    density, cdfv = [], []
    for x in (float(v) for v in xs):
        if x <= lo:
            density.append(0.0)
            cdfv.append(0.0)
        elif x >= hi:
            density.append(0.0)
            cdfv.append(1.0)
        else:
            y = float(chain.apply(x))
            density.append(float(base.pdf(y)) * float(chain.deriv(x)[0]))
            cdfv.append(float(base.cdf(y)))
    return {"density": density, "cdf": cdfv}


def create_app() -> FastAPI:
    app = FastAPI(title="mogfit service", docs_url=None, redoc_url=None)

    @app.exception_handler(PipelineStageError)
    async def _stage_error(_req, exc: PipelineStageError):
        status = 400 if isinstance(exc.cause, ValidationError) else 422
        return _json_response({"error": str(exc), "stage": exc.stage}, status)

    @app.exception_handler(ValidationError)
    async def _validation_error(_req, exc: ValidationError):
        return _json_response({"error": str(exc)}, 400)

    @app.exception_handler(NumericalError)
    async def _numerical_error(_req, exc: NumericalError):
        return _json_response({"error": str(exc)}, 422)

    @app.get("/v1/health")
    async def health():
        return _json_response({"status": "ok"})

    @app.post("/v1/spline")
    async def spline(request: Request):
        obj = await _body_json(request)
        if not isinstance(obj, dict) or not isinstance(obj.get("points"), list):
            raise ValidationError("body must be {'points': [[x, F], ...], "
                                  "'n_equiv'?, 'tail_policy'?}")
        spec = dist.spline_from_points(
            [(p[0], p[1]) for p in obj["points"]],
            n_equiv=obj.get("n_equiv"),
            tail_policy=obj.get("tail_policy", "bounded"))
        return _json_response({"spec": spec_to_json(spec)})

    @app.post("/v1/pipeline")
    async def pipeline(request: Request):
        req = request_from_json(await _body_json(request))
        res = run_pipeline(req)
        return _json_response(result_to_json(res, req))

    @app.post("/v1/evaluate")
    async def evaluate(request: Request):
        obj = await _body_json(request)
        if not isinstance(obj, dict):
            raise ValidationError("body must be a JSON object")
        grid = obj.get("grid")
        if not isinstance(grid, list) or not grid:
            raise ValidationError("body must include a nonempty 'grid' array")
        xs = np.asarray([float(x) for x in grid])
        if not np.all(np.isfinite(xs)):
            raise ValidationError("grid values must be finite")
        out = {"grid": xs.tolist()}
        specs = {}
        pullbacks = {}
        if "spec" in obj:
            specs["spec"] = spec_from_json(obj["spec"])
        for key, oj in obj.get("overlays", {}).items():
            if isinstance(oj, dict) and "chain" in oj:
                if "spec" not in oj:
                    raise ValidationError(
                        "a pullback overlay needs both 'spec' and 'chain'")
                pullbacks[key] = (spec_from_json(oj["spec"]),
                                  chain_from_json(oj["chain"]))
            else:
                specs[key] = spec_from_json(oj)
        if not specs and not pullbacks:
            raise ValidationError("body must include 'spec' and/or 'overlays'")
        results = {}
        for key, (base, chain) in pullbacks.items():
            results[key] = _pullback_curves(base, chain, xs)
        for key, spec in specs.items():
            entry = {
                "density": [float(spec.pdf(x)) for x in xs],
                "cdf": [float(spec.cdf(x)) for x in xs],
            }
            results[key] = entry
        if obj.get("moment_match_gaussian") and "spec" in specs:
            g = dist.MixtureSpec(moment_match_gaussian(specs["spec"]))
            results["moment_match_gaussian"] = {
                "density": [float(g.pdf(x)) for x in xs],
                "cdf": [float(g.cdf(x)) for x in xs],
            }
        out["results"] = results
        return _json_response(out)

    return app
