"""Command-line interface.

Commands read spec JSON from a file (or ``-`` for stdin) and write result
JSON to stdout. Exit codes: 0 success, 2 validation error (including
malformed JSON, reported with line/column), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from . import distribution as dist
from .emfit import EmConfig, em_fit, fast_fit_two, cross_term_mixture
from .errors import NumericalError, PipelineStageError, ValidationError
from .pipeline import (
    PipelineRequest,
    _size_cfg_from_json,
    request_from_json,
    result_to_json,
    run_pipeline,
)
from .quadrature import default_config
from .serialize import (
    canonical_dumps,
    parse_json,
    report_to_json,
    spec_from_json,
    spec_to_json,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")


def _load_spec(path: str):
    return spec_from_json(parse_json(_read_text(path)))


def _parse_bounds(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError("bounds must be 'lo,hi' (hi may be inf)")
    lo = float(parts[0])
    hi = None if parts[1].strip() in ("inf", "") else float(parts[1])
    return (lo, hi)


def _size_cfg_from_args(args):
    obj = {}
    if args.kn is not None:
        obj["kn_ratio"] = args.kn
    else:
        if args.k is None or args.n is None:
            raise ValidationError(
                "size search requires --k and --n (or --kn); "
                "no default is assumed")
        obj["k"], obj["n"] = args.k, args.n
    obj["max_m"] = args.max_m
    return _size_cfg_from_json(obj)


def _cmd_fit(args) -> dict:
    spec = _load_spec(args.spec)
    em_cfg = EmConfig(seed=args.seed)
    qcfg = default_config()
    if args.fast_two:
        gm, flags = fast_fit_two(spec, em_cfg, qcfg)
        d0 = cross_term_mixture(spec, gm, qcfg)
        from .emfit import FitReport
        report = FitReport(mixture=gm, d0_trace=[d0], relative_entropy=None,
                           iterations=0, converged=True,
                           fixed_point_residual=0.0, flags=flags)
        return report_to_json(report)
    if args.size_search:
        req = PipelineRequest(spec=spec, fit_mode="size_search",
                              size_cfg=_size_cfg_from_args(args),
                              em_cfg=em_cfg)
        res = run_pipeline(req, qcfg)
        return result_to_json(res, req)
    if args.m is None:
        raise ValidationError("fit requires one of --m, --fast-two, --size-search")
    return report_to_json(em_fit(spec, args.m, em_cfg, qcfg))


def _cmd_transform(args) -> dict:
    spec = _load_spec(args.spec)
    if args.with_fit:
        req = PipelineRequest(spec=spec, fit_mode="em", m=1,
                              bounds=_parse_bounds(args.bounds),
                              transform="auto", round_power=args.round_power)
        return result_to_json(run_pipeline(req), req)
    from .serialize import chain_to_json
    from .transform import (BoxCox, optimal_power, precondition, pushforward,
                            round_power)
    chain = precondition(spec, _parse_bounds(args.bounds))
    p_star, objective = optimal_power(pushforward(spec, chain))
    p_used = p_star
    if args.round_power:
        p_used = round_power(p_star)
    step = BoxCox(p_used, rounded_from=p_star if p_used != p_star else None)
    return {"p_star": p_star, "p_used": p_used, "objective": objective,
            "chain_used": chain_to_json(chain.extended(step))}


def _cmd_analyze(args) -> dict:
    spec = _load_spec(args.spec)
    qcfg = default_config()
    mom = dist.moments(spec, args.max_order, qcfg)
    out = {
        "spec": spec_to_json(spec),
        "moments": {"raw": list(mom.raw), "central": list(mom.central),
                    "mean": mom.mean, "variance": mom.variance},
        "atom_mass": dist.atom_mass(spec),
    }
    try:
        out["entropy"] = dist.entropy(spec, qcfg)
    except ValidationError:
        out["entropy"] = None
    return out


def _cmd_assess_spline(args) -> dict:
    obj = parse_json(_read_text(args.points))
    if isinstance(obj, dict):
        points = obj.get("points")
        n_equiv = obj.get("n_equiv")
        tail_policy = obj.get("tail_policy", args.tail_policy)
    else:
        points, n_equiv, tail_policy = obj, args.n_equiv, args.tail_policy
    if not isinstance(points, list):
        raise ValidationError("assess-spline input must be a list of [x, F] "
                              "pairs or {'points': [...]}")
    spec = dist.spline_from_points([(p[0], p[1]) for p in points],
                                   n_equiv=n_equiv, tail_policy=tail_policy)
    return spec_to_json(spec)


def _cmd_pipeline(args) -> dict:
    req = request_from_json(parse_json(_read_text(args.request)))
    res = run_pipeline(req)
    return result_to_json(res, req)


def _cmd_serve(args) -> dict:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="warning")
    return {}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mogfit",
        description="Fit Gaussian mixtures to probability distributions, "
                    "with minimum-relative-entropy power transforms and "
                    "accuracy-vs-cost size selection.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fit", help="fit a Gaussian mixture to a spec")
    f.add_argument("--spec", required=True, help="spec JSON file, or - for stdin")
    f.add_argument("--m", type=int, help="mixture size for a single EM fit")
    f.add_argument("--fast-two", action="store_true",
                   help="two-component method-of-moments fast fit")
    f.add_argument("--size-search", action="store_true",
                   help="grow the mixture under the accuracy-vs-cost rule")
    f.add_argument("--k", type=float, help="cost exponent")
    f.add_argument("--n", type=float, help="equivalent sample size")
    f.add_argument("--kn", type=float, help="combined ratio k/n")
    f.add_argument("--max-m", type=int, default=10)
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=_cmd_fit)

    t = sub.add_parser("transform",
                       help="find the relative-entropy-optimal power transform")
    t.add_argument("--spec", required=True)
    t.add_argument("--bounds", help="'lo,hi' practical bounds; hi may be inf")
    t.add_argument("--round-power", action="store_true",
                   help="snap p* to a nearby interpretable value")
    t.add_argument("--with-fit", action="store_true",
                   help="also fit a single Gaussian to the transformed spec")
    t.set_defaults(func=_cmd_transform)

    a = sub.add_parser("analyze", help="entropy and moments of a spec")
    a.add_argument("--spec", required=True)
    a.add_argument("--max-order", type=int, default=4)
    a.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("assess-spline",
                       help="build a monotone-spline CDF spec from assessed points")
    s.add_argument("--points", required=True,
                   help="JSON file of [x, F] pairs, or - for stdin")
    s.add_argument("--n-equiv", type=int)
    s.add_argument("--tail-policy", default="bounded",
                   choices=["bounded", "exponential_tails"])
    s.set_defaults(func=_cmd_assess_spline)

    pl = sub.add_parser("pipeline", help="run a full pipeline request")
    pl.add_argument("--request", required=True,
                    help="PipelineRequest JSON file, or - for stdin")
    pl.set_defaults(func=_cmd_pipeline)

    sv = sub.add_parser("serve", help="start the local HTTP service")
    sv.add_argument("--port", type=int, default=8377)
    sv.add_argument("--bind", default="127.0.0.1")
    sv.set_defaults(func=_cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags, which matches our contract.
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except PipelineStageError as exc:
        code = EXIT_VALIDATION if isinstance(exc.cause, ValidationError) \
            else EXIT_NUMERICAL
        print(canonical_dumps({"error": str(exc), "stage": exc.stage}),
              file=sys.stderr)
        return code
    except ValidationError as exc:
        print(canonical_dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(canonical_dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_NUMERICAL
    if args.command != "serve":
        print(canonical_dumps(out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
