"""End-to-end fitting pipeline: precondition -> optimal power ->
pushforward -> fit (single EM, fast two-component, or size search).

Every stage failure is re-raised as a PipelineStageError carrying the
stage name; CLI and service map those onto exit codes / HTTP statuses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import distribution as dist
from .emfit import EmConfig, FitReport, cross_term_mixture, em_fit, fast_fit_two
from .errors import MogfitError, PipelineStageError, ValidationError
from .quadrature import QuadratureConfig, default_config
from .serialize import (
    chain_from_json,
    chain_to_json,
    report_to_json,
    spec_from_json,
)
from .sizesearch import SizeSearchConfig, select_size
from .transform import (
    BoxCox,
    PowerSearchConfig,
    TransformChain,
    identity_chain,
    optimal_power,
    precondition,
    pushforward,
    round_power,
    transform_gap,
)

__all__ = [
    "PipelineRequest", "PipelineResult", "run_pipeline",
    "request_from_json", "result_to_json",
]


@dataclass(frozen=True)
class PipelineRequest:
    spec: dist.DistributionSpec
    fit_mode: str                                   # "em" | "fast_two" | "size_search"
    bounds: tuple | None = None
    transform: object = "none"                      # "none" | "auto" | TransformChain
    m: int | None = None                            # for fit_mode "em"
    size_cfg: SizeSearchConfig | None = None        # for fit_mode "size_search"
    em_cfg: EmConfig = field(default_factory=EmConfig)
    round_power: bool = False
    power_cfg: PowerSearchConfig = field(default_factory=PowerSearchConfig)

    def __post_init__(self):
        if self.fit_mode not in ("em", "fast_two", "size_search"):
            raise ValidationError(f"unknown fit mode {self.fit_mode!r}")
        if self.fit_mode == "em" and (self.m is None or self.m < 1):
            raise ValidationError("fit mode 'em' requires a positive m")
        if self.fit_mode == "size_search" and self.size_cfg is None:
            raise ValidationError("fit mode 'size_search' requires a SizeSearchConfig")
        if not (self.transform in ("none", "auto")
                or isinstance(self.transform, TransformChain)):
            raise ValidationError(
                "transform must be 'none', 'auto', or an explicit chain")


@dataclass
class PipelineResult:
    chain_used: TransformChain
    p_star: float | None
    fit_reports: dict            # m -> FitReport
    chosen_m: int | None
    diagnostics: list            # ordered (name, value) pairs
    flags: list = field(default_factory=list)


def _stage(name):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, MogfitError) \
                    and not isinstance(exc, PipelineStageError):
                raise PipelineStageError(name, exc) from exc
            return False

    return _Ctx()


def run_pipeline(req: PipelineRequest,
                 qcfg: QuadratureConfig = None) -> PipelineResult:
    qcfg = qcfg or default_config()
    diagnostics: list = []
    flags: list = []
    p_star = None

    with _stage("precondition"):
        if req.transform == "auto":
            chain = precondition(req.spec, req.bounds)
        elif req.transform == "none":
            chain = identity_chain()
        else:
            chain = req.transform

    if req.transform == "auto":
        with _stage("power_search"):
            pre_spec = pushforward(req.spec, chain)
            p_star, _ = optimal_power(pre_spec, req.power_cfg, qcfg)
            if req.round_power:
                p_rounded = round_power(p_star, req.power_cfg)
                if p_rounded != p_star:
                    flags.append("power_rounded")
                    chain = chain.extended(BoxCox(p_rounded, rounded_from=p_star))
                else:
                    chain = chain.extended(BoxCox(p_star))
            else:
                chain = chain.extended(BoxCox(p_star))

    with _stage("pushforward"):
        tspec = pushforward(req.spec, chain)

    with _stage("diagnostics"):
        try:
            diagnostics.append(("entropy_x", dist.entropy(req.spec, qcfg)))
            diagnostics.append(
                ("transform_gap_before", transform_gap(req.spec, identity_chain(), qcfg)))
            if chain.steps:
                diagnostics.append(
                    ("transform_gap_after", transform_gap(req.spec, chain, qcfg)))
            else:
                diagnostics.append(("transform_gap_after", diagnostics[-1][1]))
        except MogfitError:
            flags.append("diagnostics_unavailable")

    reports: dict = {}
    chosen_m = None
    with _stage("fit"):
        if req.fit_mode == "em":
            reports[req.m] = em_fit(tspec, req.m, req.em_cfg, qcfg)
            chosen_m = req.m
        elif req.fit_mode == "fast_two":
            gm, fflags = fast_fit_two(tspec, req.em_cfg, qcfg)
            d0 = cross_term_mixture(tspec, gm, qcfg)
            try:
                rel = d0 - dist.entropy(tspec, qcfg)
            except MogfitError:
                rel = None
            reports[2] = FitReport(
                mixture=gm, d0_trace=[d0], relative_entropy=rel,
                iterations=0, converged=True,
                fixed_point_residual=0.0, flags=fflags)
            chosen_m = 2
        else:
            res = select_size(tspec, req.em_cfg, req.size_cfg, qcfg)
            reports = res.reports
            chosen_m = res.chosen_m
            flags.extend(res.flags)

    return PipelineResult(chain_used=chain, p_star=p_star, fit_reports=reports,
                          chosen_m=chosen_m, diagnostics=diagnostics, flags=flags)


# ---------------------------------------------------------------------------
# JSON forms used by the CLI and service
# ---------------------------------------------------------------------------

def _size_cfg_from_json(obj) -> SizeSearchConfig:
    if "kn_ratio" in obj:
        if "k" in obj or "n" in obj:
            raise ValidationError("give either kn_ratio or (k, n), not both")
        k, n = float(obj["kn_ratio"]), 1.0
    else:
        try:
            k, n = float(obj["k"]), float(obj["n"])
        except KeyError:
            raise ValidationError("size search requires k and n (or kn_ratio)")
    return SizeSearchConfig(
        k=k, n=n,
        max_m=int(obj.get("max_m", 10)),
        lookahead=int(obj.get("lookahead", 1)),
        geometric_prior_ratio=obj.get("geometric_prior_ratio"))


def _em_cfg_from_json(obj) -> EmConfig:
    allowed = {"max_iterations", "convergence_tol", "init_strategy", "seed",
               "var_floor_rel", "aitken", "aitken_window", "fixed_point_tol"}
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"unknown em_cfg fields: {sorted(unknown)}")
    return EmConfig(**obj)


def request_from_json(obj) -> PipelineRequest:
    """PipelineRequest JSON:

    {"spec": {...}, "bounds": [lo, hi|null]|null,
     "transform": "none"|"auto"|{"steps": [...]},
     "fit": {"mode": "em", "m": int} | {"mode": "fast_two"}
          | {"mode": "size_search", "k": .., "n": .., ...},
     "em_cfg": {...}, "round_power": bool}
    """
    if not isinstance(obj, dict):
        raise ValidationError("pipeline request must be a JSON object")
    try:
        spec = spec_from_json(obj["spec"])
        fit = obj["fit"]
        mode = fit["mode"]
    except KeyError as exc:
        raise ValidationError(f"pipeline request is missing field {exc.args[0]!r}")
    bounds = obj.get("bounds")
    if bounds is not None:
        bounds = tuple(None if b is None else float(b) for b in bounds)
    transform = obj.get("transform", "none")
    if isinstance(transform, dict):
        transform = chain_from_json(transform)
    em_cfg = _em_cfg_from_json(obj.get("em_cfg", {}))
    kwargs = {}
    if mode == "em":
        if "m" not in fit:
            raise ValidationError("fit mode 'em' requires m")
        kwargs["m"] = int(fit["m"])
    elif mode == "size_search":
        kwargs["size_cfg"] = _size_cfg_from_json(fit)
    elif mode != "fast_two":
        raise ValidationError(f"unknown fit mode {mode!r}")
    return PipelineRequest(
        spec=spec, fit_mode=mode, bounds=bounds, transform=transform,
        em_cfg=em_cfg, round_power=bool(obj.get("round_power", False)),
        **kwargs)


def result_to_json(res: PipelineResult, req: PipelineRequest = None) -> dict:
    out = {
        "chain_used": chain_to_json(res.chain_used),
        "p_star": res.p_star,
        "fit_reports": {str(m): report_to_json(r)
                        for m, r in sorted(res.fit_reports.items())},
        "chosen_m": res.chosen_m,
        "diagnostics": [[name, value] for name, value in res.diagnostics],
        "flags": list(res.flags),
    }
    if req is not None and req.size_cfg is not None:
        out["k"] = req.size_cfg.k
        out["n"] = req.size_cfg.n
    return out
