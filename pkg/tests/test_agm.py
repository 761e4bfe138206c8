import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from agmpi.agm import (
    AgmState,
    agm_limit,
    agm_step,
    canonical_start,
    gauss_r,
    gauss_sum,
    salamin_brent_pi,
)
from agmpi.precision import DomainError, make_context, sqrt, to_decimal, workspace
from agmpi.verify import machin_pi

AGM_LIMIT_30 = "0.847213084793979086606499123482"


def _decimal_ulps(x, reference, ctx):
    """|x - reference| measured in decimal ulps of reference at ctx digits."""
    with workspace(ctx):
        exponent = int(gmpy2.floor(gmpy2.log10(abs(reference))))
        ulp = mpfr(10) ** (exponent - ctx.decimal_digits + 1)
        return float(abs(x - reference) / ulp)


def test_canonical_start():
    ctx = make_context(50)
    state = canonical_start(ctx)
    assert state.n == 0
    assert state.a == 1
    assert to_decimal(state.b, 12) == "0.707106781187"
    assert state.weighted_sum == 0


def test_agm_step_values():
    ctx = make_context(100)
    s1 = agm_step(canonical_start(ctx), ctx)
    assert s1.n == 1
    assert to_decimal(s1.a, 14) == "0.85355339059327"
    assert to_decimal(s1.b, 14) == "0.84089641525371"
    s2 = agm_step(s1, ctx)
    assert to_decimal(s2.a, 14) == "0.84722490292349"
    assert to_decimal(s2.b, 14) == "0.84720126674689"
    assert to_decimal(s2.weighted_sum, 20) == "0.54289321881345247560"


def test_agm_step_domain():
    ctx = make_context(30)
    with pytest.raises(DomainError):
        agm_step(AgmState(n=0, a=mpfr(-1), b=mpfr(1), weighted_sum=mpfr(0)), ctx)
    with pytest.raises(DomainError):
        agm_step(AgmState(n=0, a=mpfr(1), b=mpfr(0), weighted_sum=mpfr(0)), ctx)
    with pytest.raises(DomainError):
        agm_step(AgmState(n=0, a=mpfr("inf"), b=mpfr(1), weighted_sum=mpfr(0)), ctx)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=100.0),
    st.floats(min_value=0.1, max_value=100.0),
)
def test_agm_step_ordering_invariant(x, y):
    # after one step the pair is ordered b <= a and nested inside [min, max]
    assume(x != y)
    ctx = make_context(40)
    with workspace(ctx):
        a, b = mpfr(max(x, y)), mpfr(min(x, y))
    state = agm_step(AgmState(n=0, a=a, b=b, weighted_sum=mpfr(0)), ctx)
    assert b <= state.b <= state.a <= a
    later = agm_step(state, ctx)
    assert state.b <= later.b
    assert later.a <= state.a
    # once the pair is within an ulp, rounding may reorder it by one ulp
    with workspace(ctx):
        slack = state.a * mpfr(2) ** (4 - ctx.binary_precision)
    assert later.b <= later.a + slack


def test_agm_limit_canonical():
    ctx = make_context(1000)
    limit, steps = agm_limit(1, sqrt(mpfr(1) / 2, ctx), ctx)
    assert to_decimal(limit, 30) == AGM_LIMIT_30
    assert steps <= 12
    assert steps >= 8


def test_agm_limit_equal_inputs():
    ctx = make_context(50)
    limit, steps = agm_limit(2, 2, ctx)
    assert steps == 0
    assert limit == 2


def test_agm_limit_scaling():
    # AGM(ka, kb) = k AGM(a, b)
    ctx = make_context(100)
    one, _ = agm_limit(1, 2, ctx)
    scaled, _ = agm_limit(3, 6, ctx)
    with workspace(ctx):
        tripled = 3 * one
    assert _decimal_ulps(scaled, tripled, ctx) <= 10


def test_agm_limit_domain():
    ctx = make_context(30)
    with pytest.raises(DomainError):
        agm_limit(0, 1, ctx)
    with pytest.raises(DomainError):
        agm_limit(1, -2, ctx)


def test_gauss_sum_values_and_monotonicity():
    ctx = make_context(100)
    with pytest.raises(ValueError):
        gauss_sum(0, ctx)
    assert to_decimal(gauss_sum(2, ctx), 20) == "0.54289321881345247560"
    partials = [gauss_sum(k, ctx) for k in range(1, 12)]
    # strictly increasing while the gap terms stay above the precision floor,
    # never decreasing after that
    assert all(partials[i] < partials[i + 1] for i in range(6))
    assert all(partials[i] <= partials[i + 1] for i in range(len(partials) - 1))
    # limit is 1 - 2 M^2 / pi
    pi_ref = machin_pi(ctx)
    limit, _ = agm_limit(1, sqrt(mpfr(1) / 2, ctx), ctx)
    with workspace(ctx):
        target = 1 - 2 * limit * limit / pi_ref
        residual = target - partials[-1]
        assert abs(residual) <= mpfr(10) ** (-(ctx.decimal_digits - 10))


def test_salamin_brent_pi_trace():
    ctx = make_context(1000)
    estimate, trace = salamin_brent_pi(ctx)
    oracle = machin_pi(ctx)
    with workspace(ctx):
        assert abs(estimate - oracle) <= mpfr(10) ** (-1000)
    assert [record.n for record in trace] == list(range(len(trace)))
    assert trace[2].correct_digits >= 7
    assert trace[-1].correct_digits >= 1000
    assert trace[0].estimate_rendered.startswith("2.9")
    assert trace[-1].estimate_rendered.startswith("3.14159265358979")
    # errors decrease strictly until they hit the precision floor, where the
    # final entries may repeat bit for bit
    errors = [record.abs_error for record in trace]
    with workspace(ctx):
        floor = mpfr(10) ** (-1000)
    for i in range(len(errors) - 1):
        if errors[i] > floor:
            assert errors[i + 1] < errors[i]
        else:
            assert errors[i + 1] <= errors[i]
    # interior records carry an order estimate near 2 once past the seed
    mid_orders = [r.local_order for r in trace[2:-2] if r.local_order is not None]
    assert mid_orders
    assert all(1.8 <= order <= 2.2 for order in mid_orders)


def test_salamin_trace_length_stable_across_precision():
    _, trace_small = salamin_brent_pi(make_context(100))
    _, trace_large = salamin_brent_pi(make_context(1000))
    assert abs(len(trace_large) - len(trace_small)) <= 4


def test_gauss_r_base_values():
    ctx = make_context(100)
    r0 = gauss_r(0, ctx)
    r1 = gauss_r(1, ctx)
    with workspace(ctx):
        target0 = mpfr(1) / 2
        target1 = 6 - 4 * gmpy2.sqrt(mpfr(2))
    assert _decimal_ulps(r0, target0, ctx) <= 1
    assert _decimal_ulps(r1, target1, ctx) <= 1
    assert to_decimal(r1, 20) == "0.34314575050761980479"
    with pytest.raises(ValueError):
        gauss_r(-1, ctx)


def test_gauss_r_decreases_to_inv_pi():
    ctx = make_context(100)
    values = [gauss_r(n, ctx) for n in range(7)]
    assert all(values[i + 1] < values[i] for i in range(5))
    pi_ref = machin_pi(ctx)
    with workspace(ctx):
        inv_pi = 1 / pi_ref
        assert abs(values[6] - inv_pi) <= mpfr("1e-80")
        assert values[6] >= inv_pi
