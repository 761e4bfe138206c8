"""Arithmetic-geometric mean machinery and the quadratically convergent pi estimator.

Starting from a_0 = 1, b_0 = 1/sqrt(2), the AGM iteration

    a_{n+1} = (a_n + b_n) / 2,    b_{n+1} = sqrt(a_n b_n)

converges quadratically to a common limit M.  Three classical facts are
implemented here:

* the weighted gap sum  sum_k 2^k (a_k^2 - b_k^2)  equals  1 - 2 M^2 / pi,
* pi_n = 2 a_{n+1}^2 / (1 - S_{n+1}) converges quadratically to pi, where
  S_{n+1} is the partial gap sum through k = n,
* the tail sequence  r_n = (M^2 / a_n^2) / pi + (1 / (2 a_n^2)) *
  sum_{k>=n} 2^k (a_k^2 - b_k^2)  starts at exactly 1/2 and converges to 1/pi.

The gap-sum terms are accumulated as 2^k (a_k - b_k)(a_k + b_k); the factored
form subtracts nearly equal quantities once instead of squaring first, so no
precision is lost to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpfr, is_finite

from . import precision
from .precision import DomainError, PrecisionContext, Real, to_decimal, workspace
from .verify import ConvergenceRecord, convergence_orders, correct_digits, machin_pi

__all__ = [
    "AgmState",
    "agm_limit",
    "agm_step",
    "canonical_start",
    "gauss_r",
    "gauss_sum",
    "salamin_brent_pi",
]


@dataclass(frozen=True)
class AgmState:
    """AGM pair after n steps plus the running weighted gap sum.

    ``weighted_sum`` holds sum over k < n of 2^k (a_k^2 - b_k^2).
    """

    n: int
    a: Real
    b: Real
    weighted_sum: Real


def canonical_start(ctx: PrecisionContext) -> AgmState:
    """Return the seed state a_0 = 1, b_0 = 1/sqrt(2) used by the pi formulas."""
    with workspace(ctx):
        one = mpfr(1)
        b0 = precision.sqrt(one / 2, ctx)
        return AgmState(n=0, a=one, b=b0, weighted_sum=mpfr(0))


def _require_positive_pair(a, b) -> None:
    if not (is_finite(a) and is_finite(b)):
        raise DomainError("AGM requires finite values")
    if a <= 0 or b <= 0:
        raise DomainError("AGM requires positive values")


def agm_step(state: AgmState, ctx: PrecisionContext) -> AgmState:
    """Advance one AGM step, folding this step's gap term into the sum."""
    _require_positive_pair(state.a, state.b)
    with workspace(ctx):
        a, b = state.a, state.b
        term = mpfr(2) ** state.n * (a - b) * (a + b)
        new_sum = state.weighted_sum + term
        new_a = (a + b) / 2
        new_b = precision.sqrt(a * b, ctx)
        return AgmState(n=state.n + 1, a=new_a, b=new_b, weighted_sum=new_sum)


def agm_limit(a0, b0, ctx: PrecisionContext) -> tuple[Real, int]:
    """Iterate the AGM of ``a0, b0`` to the context precision.

    Returns ``(limit, steps)``.  Equal inputs need zero steps.  The loop stops
    once |a - b| <= 2**-(binary_precision - guard_bits/2) * a, at which point
    the midpoint is accurate essentially to full precision.
    """
    state = AgmState(n=0, a=precision._as_real(a0), b=precision._as_real(b0), weighted_sum=mpfr(0))
    _require_positive_pair(state.a, state.b)
    with workspace(ctx):
        eps = mpfr(2) ** (-(ctx.binary_precision - ctx.guard_bits // 2))
        state = AgmState(n=0, a=+state.a, b=+state.b, weighted_sum=mpfr(0))
    while True:
        with workspace(ctx):
            done = abs(state.a - state.b) <= eps * state.a
        if done:
            with workspace(ctx):
                return (state.a + state.b) / 2, state.n
        state = agm_step(state, ctx)
        if state.n > ctx.binary_precision:
            raise RuntimeError("AGM failed to converge")


def gauss_sum(terms: int, ctx: PrecisionContext) -> Real:
    """Return the partial sum over k < terms of 2^k (a_k^2 - b_k^2).

    The sequence starts from the canonical seed; ``terms`` must be at least 1.
    The partial sums increase monotonically toward 1 - 2 M^2 / pi.
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    state = canonical_start(ctx)
    for _ in range(terms):
        state = agm_step(state, ctx)
    return state.weighted_sum


def salamin_brent_pi(ctx: PrecisionContext) -> tuple[Real, list[ConvergenceRecord]]:
    """Compute pi by the AGM estimator, with a full convergence trace.

    Estimate n is 2 a_{n+1}^2 / (1 - S_{n+1}) from the canonical seed.  The
    loop stops once two successive estimates agree to the context's decimal
    digits.  Returns the final estimate and one record per estimate; errors in
    the records are measured against the Machin oracle.
    """
    dd = ctx.decimal_digits
    oracle = machin_pi(ctx)
    estimates: list[Real] = []
    state = canonical_start(ctx)
    with workspace(ctx):
        stop = mpfr(10) ** (-dd)
    while True:
        state = agm_step(state, ctx)
        with workspace(ctx):
            estimate = 2 * state.a * state.a / (1 - state.weighted_sum)
        estimates.append(estimate)
        if len(estimates) >= 2:
            with workspace(ctx):
                done = abs(estimates[-1] - estimates[-2]) <= stop
            if done:
                break
        if state.n > ctx.binary_precision:
            raise RuntimeError("estimator failed to converge")

    with workspace(ctx):
        errors = [abs(estimate - oracle) for estimate in estimates]
        floor = mpfr(10) ** (-(dd + 2))
        # An estimate can match the oracle bit for bit; keep the order
        # machinery fed with positive values, below the suppression floor.
        tiny = mpfr(10) ** (-(4 * dd + 40))
        order_errors = [e if e > 0 else tiny for e in errors]
    orders = convergence_orders(order_errors, floor=floor) if len(errors) >= 3 else []
    trace = []
    for n, estimate in enumerate(estimates):
        order = orders[n - 1] if 1 <= n <= len(orders) else None
        trace.append(
            ConvergenceRecord(
                n=n,
                estimate_rendered=to_decimal(estimate, dd),
                abs_error=errors[n],
                correct_digits=correct_digits(estimate, oracle),
                local_order=order,
            )
        )
    return estimates[-1], trace


def gauss_r(n: int, ctx: PrecisionContext) -> Real:
    """Evaluate the tail sequence r_n directly from its series definition.

    r_n = (M^2 / a_n^2) / pi + (1 / (2 a_n^2)) sum_{k>=n} 2^k (a_k^2 - b_k^2).

    r_0 is exactly 1/2, r_1 is 6 - 4 sqrt(2), and the sequence decreases to
    1/pi.  This is the slow reference path; the fast path is the quadratic
    recurrence, and the two must agree to working precision.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    pi_ref = machin_pi(ctx)
    state = canonical_start(ctx)
    a_seq = [state.a]
    terms: list[Real] = []
    with workspace(ctx):
        eps = mpfr(2) ** (-(ctx.binary_precision - ctx.guard_bits // 2))
    while True:
        with workspace(ctx):
            done = len(a_seq) > n + 1 and abs(state.a - state.b) <= eps * state.a
        if done:
            break
        next_state = agm_step(state, ctx)
        with workspace(ctx):
            terms.append(next_state.weighted_sum - state.weighted_sum)
        a_seq.append(next_state.a)
        state = next_state
        if state.n > ctx.binary_precision:
            raise RuntimeError("AGM failed to converge")
    with workspace(ctx):
        m_limit = (state.a + state.b) / 2
        tail = mpfr(0)
        for term in reversed(terms[n:]):  # smallest first
            tail += term
        a_n = a_seq[n]
        return (m_limit * m_limit / (a_n * a_n)) / pi_ref + tail / (2 * a_n * a_n)
