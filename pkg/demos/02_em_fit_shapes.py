"""Fit Gaussian mixtures of growing size to awkward shapes.

The EM variant here takes a *distribution* as input, not a sample: every
expectation in the update equations is an integral against the target
density. The relative entropy D reported for each fit is the residual
information loss; more components always help, with diminishing returns.

Run:  python3 demos/02_em_fit_shapes.py
"""

import numpy as np

from mogfit import MixtureSpec, density, em_fit, exponential, uniform


def ascii_plot(spec, lo, hi, target, width=61, height=12):
    xs = np.linspace(lo, hi, width)
    f = np.array([density(spec, x) for x in xs])
    t = np.array([target(x) for x in xs])
    top = max(f.max(), t.max()) * 1.05
    rows = []
    for r in range(height, 0, -1):
        level = top * r / height
        row = "".join(
            "#" if f[i] >= level else ("." if t[i] >= level else " ")
            for i in range(width))
        rows.append("  " + row)
    print("\n".join(rows))
    print("  " + "-" * width + f"   (# fit, . target), x in [{lo:g}, {hi:g}]")


if __name__ == "__main__":
    for name, spec, lo, hi, target in [
        ("Exponential(1)", exponential(1.0), 0.0, 4.0,
         lambda x: np.exp(-x)),
        ("Uniform[0,1]", uniform(0.0, 1.0), -0.2, 1.2,
         lambda x: 1.0 if 0 <= x <= 1 else 0.0),
    ]:
        print(f"\n=== {name} ===")
        for m in (1, 2, 5):
            report = em_fit(spec, m)
            d = report.relative_entropy
            print(f"\n m = {m}: D = {d:.5f}  "
                  f"({report.iterations} iterations, "
                  f"converged={report.converged})")
            ascii_plot(MixtureSpec(report.mixture), lo, hi, target)
