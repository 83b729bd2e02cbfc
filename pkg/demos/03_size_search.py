"""Choose the mixture size by trading accuracy against computation cost.

Growing a mixture from m to m+1 components is accepted only while the
relative-entropy gain exceeds (k/n) ln((m+1)/m): n plays the role of an
equivalent sample size (how much the residual error matters) and k scales
the cost of a larger model downstream. The same distribution therefore
gets a different "right" size depending on the stakes — and transforming
it toward Gaussian first systematically lowers the size it needs.

Run:  python3 demos/03_size_search.py
"""

from mogfit import (
    BoxCox,
    EmConfig,
    SizeSearchConfig,
    TransformChain,
    accuracy_measure,
    exponential,
    optimal_power,
    pushforward,
    select_size,
)

if __name__ == "__main__":
    raw = exponential(1.0)
    p_star, _ = optimal_power(raw)
    transformed = pushforward(raw, TransformChain((BoxCox(p_star),)))

    for name, spec in [("raw Exponential(1)", raw),
                       (f"power-transformed (p*={p_star:.3f})", transformed)]:
        print(f"\n=== {name} ===")
        for kn in (0.5, 0.1, 0.02):
            res = select_size(spec, EmConfig(),
                              SizeSearchConfig(k=kn, n=1.0, max_m=6))
            traces = {m: r.d0_trace[-1] for m, r in sorted(res.reports.items())}
            d_chosen = res.reports[res.chosen_m]
            print(f"  k/n = {kn:<5} -> chose m = {res.chosen_m}   "
                  "D0 by size: "
                  + ", ".join(f"{m}:{d:.4f}" for m, d in traces.items()))
        # The accuracy measure exp(-n D0) for the chosen fit at n = 20:
        am = accuracy_measure(d_chosen.d0_trace[-1], 20.0)
        print(f"  accuracy measure at n=20: exp(-n*D0) = {am.value:.4g}")
