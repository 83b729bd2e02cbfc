import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mogfit import distribution as dist
from mogfit.errors import ValidationError
from mogfit.mixture import GaussianMixture
from mogfit.serialize import (
    canonical_dumps,
    chain_from_json,
    chain_to_json,
    mixture_from_json,
    mixture_to_json,
    parse_json,
    spec_from_json,
    spec_to_json,
)
from mogfit.transform import Affine, BoxCox, ScaledOdds, TransformChain


SPECS = [
    dist.uniform(0.0, 1.0),
    dist.exponential(2.0, atoms=((0.0, 0.25),)),
    dist.lognormal(0.5, 2.0),
    dist.triangular(0.0, 0.3, 1.0),
    dist.spline_from_points([(0, 0.1), (1, 0.5), (2, 0.9)],
                            tail_policy="exponential_tails"),
    dist.Empirical([1.0, 2.0, 2.0], weights=[1, 1, 2]),
    dist.MixtureSpec(GaussianMixture(((0.4, -1.0, 1.0), (0.6, 2.0, 0.5)))),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: type(s).__name__)
def test_spec_round_trip(spec):
    obj = spec_to_json(spec)
    back = spec_from_json(obj)
    assert spec_to_json(back) == obj
    # Behavioral equality at a few probe points.
    for x in (0.25, 0.9, 1.7):
        assert dist.cdf(back, x) == pytest.approx(dist.cdf(spec, x), abs=1e-12)


def test_chain_round_trip():
    chain = TransformChain((Affine(2.0, -1.0), ScaledOdds(0.0, 3.0),
                            BoxCox(0.5, rounded_from=0.48)))
    back = chain_from_json(chain_to_json(chain))
    assert chain_to_json(back) == chain_to_json(chain)
    assert back.apply(0.7) == pytest.approx(chain.apply(0.7), rel=1e-15)


@given(p=st.floats(0.01, 0.99), mu=st.floats(-100, 100),
       var=st.floats(1e-6, 1e6))
@settings(max_examples=100, deadline=None)
def test_mixture_round_trip_property(p, mu, var):
    gm = GaussianMixture(((p, mu, var), (1 - p, 0.0, 1.0)), var_floor=0.0)
    back = mixture_from_json(mixture_to_json(gm))
    assert back.components == gm.components


def test_canonical_dumps_is_deterministic():
    a = canonical_dumps({"b": 1.5, "a": [0.1, 2]})
    b = canonical_dumps({"a": [0.1, 2], "b": 1.5})
    assert a == b == '{"a":[0.1,2],"b":1.5}'


def test_canonical_dumps_round_trips_floats():
    vals = [0.1, 1 / 3, 1e-300, 123456789.123456789]
    assert json.loads(canonical_dumps(vals)) == vals


def test_canonical_rejects_non_finite():
    with pytest.raises(ValidationError):
        canonical_dumps({"x": float("nan")})


def test_parse_json_reports_line_and_column():
    with pytest.raises(ValidationError, match=r"line 2, column \d+"):
        parse_json('{\n "bad": nope\n}')


def test_unknown_spec_type_rejected():
    with pytest.raises(ValidationError, match="unknown spec type"):
        spec_from_json({"type": "cauchy"})


def test_missing_field_reported():
    with pytest.raises(ValidationError, match="missing"):
        spec_from_json({"type": "analytic", "family": "gaussian", "params": {}})
