"""From a handful of assessed CDF points to a fitted mixture.

An analyst states a few cumulative judgments ("there's a 10% chance the
value is below 0, 60% below 2, ..."). A monotone cubic spline turns them
into a full distribution; the fast two-component method-of-moments fit
(or a full size search) then produces a Gaussian mixture ready for
downstream numerical work. This is the same flow the HTTP service exposes
to the browser UI via POST /v1/spline and /v1/pipeline.

Run:  python3 demos/04_assessed_cdf_workflow.py
"""

from mogfit import (
    MixtureSpec,
    cdf,
    fast_fit_two,
    moments,
    spline_from_points,
)

ASSESSED = [(0.0, 0.10), (1.0, 0.30), (2.0, 0.60), (3.0, 0.80), (4.0, 0.95)]

if __name__ == "__main__":
    spec = spline_from_points(ASSESSED)
    print(f"spline through {len(ASSESSED)} assessed points, "
          f"n_equiv = {spec.n_equiv}, support = "
          f"[{spec.support()[0]:.2f}, {spec.support()[1]:.2f}]")

    gm, flags = fast_fit_two(spec)
    print(f"\nfast two-component fit (flags={flags}):")
    for p, mu, var in gm.components:
        print(f"  weight {p:.3f}  mean {mu:+.3f}  var {var:.3f}")

    mom_s, mom_g = moments(spec, 2), moments(MixtureSpec(gm), 2)
    print(f"\nmoments   spline: mean {mom_s.mean:.4f}, var {mom_s.variance:.4f}")
    print(f"          fit:    mean {mom_g.mean:.4f}, var {mom_g.variance:.4f}")

    print("\nresiduals at the assessed points (fitted CDF minus assessment):")
    for x, F in ASSESSED:
        r = cdf(MixtureSpec(gm), x) - F
        print(f"  x = {x:.1f}   F = {F:.2f}   residual {r:+.4f}")
