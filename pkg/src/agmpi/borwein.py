"""Fast iterations for 1/pi and the nonlinear means behind the cubic family.

Four iterations are provided, all driving ``estimate`` toward 1/pi:

quadratic      aux d, seed d_0 = 1/sqrt(2), r_0 = 1/2, error squares each step
quartic        aux s, seed s_0 = 2**-0.25,  t_0 = 1/2, one step = two quadratic steps
cubic          aux e, seed e_0 = sqrt(3),   r_0 = 1/3, error cubes each step
quartic_analog aux e, seed e_0 = sqrt(2),   r_0 = 1/3, error fourth-powers each step

The update rules are evaluated in rearranged but algebraically identical
forms.  Each textbook form subtracts a k-th root from 1 just where the root
approaches 1, which wipes out half the working precision; the forms below
rationalize those differences away (for example (1 - sqrt(1-d^2))/(1 +
sqrt(1-d^2)) becomes d^2/(1 + u)^2 with u = sqrt((1-d)(1+d))), so every
subtraction is between well-separated quantities and the computed aux is
fully accurate at any precision.

The cubic and quartic_analog iterations are the shadow of two mean
iterations, analogous to how the quadratic pair shadows the AGM:

cubic mean     a' = (a + 2b)/3,  b' = cbrt(b (a^2 + ab + b^2) / 3)
quartic mean   a' = (a + b)/2,   b' = (ab (a^2 + b^2) / 2) ** (1/4)

with seeds chosen so the weighted gap sums converge to 1/3 - M^2/pi and
1/4 - 3 M^4 / (4 pi) respectively.  mean_step and mean_limit expose these.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from gmpy2 import is_finite, mpfr, mpz

from . import precision
from .precision import DomainError, PrecisionContext, Real, workspace

__all__ = [
    "AlgorithmId",
    "IterationState",
    "MeanState",
    "MeanVariant",
    "init",
    "mean_limit",
    "mean_start",
    "mean_step",
    "run",
    "step",
]


class AlgorithmId(str, Enum):
    QUADRATIC = "quadratic"
    QUARTIC = "quartic"
    CUBIC = "cubic"
    QUARTIC_ANALOG = "quartic_analog"
    SALAMIN_BRENT = "salamin_brent"


class MeanVariant(str, Enum):
    CUBIC = "cubic"
    QUARTIC = "quartic"


@dataclass(frozen=True)
class IterationState:
    """Snapshot of one iteration: step index, auxiliary value, 1/pi estimate."""

    algorithm: AlgorithmId
    n: int
    aux: Real
    estimate: Real


@dataclass(frozen=True)
class MeanState:
    """Mean iteration pair after n steps plus the running weighted gap sum.

    For the cubic variant ``weighted_sum`` accumulates 3^k (a_k^2 - a_{k+1}^2);
    for the quartic variant, 4^k (a_k^4 - a_{k+1}^4).
    """

    variant: MeanVariant
    n: int
    a: Real
    b: Real
    weighted_sum: Real


def init(algorithm: AlgorithmId, ctx: PrecisionContext) -> IterationState:
    """Return the seed state of ``algorithm`` at the context precision."""
    algorithm = AlgorithmId(algorithm)
    if algorithm is AlgorithmId.SALAMIN_BRENT:
        raise ValueError(
            "salamin_brent is driven by the AGM module; use agm.salamin_brent_pi"
        )
    with workspace(ctx):
        one = mpfr(1)
        if algorithm is AlgorithmId.QUADRATIC:
            return IterationState(algorithm, 0, precision.sqrt(one / 2, ctx), one / 2)
        if algorithm is AlgorithmId.QUARTIC:
            return IterationState(algorithm, 0, precision.root(one / 2, 4, ctx), one / 2)
        if algorithm is AlgorithmId.CUBIC:
            return IterationState(algorithm, 0, precision.sqrt(mpfr(3), ctx), one / 3)
        return IterationState(algorithm, 0, precision.sqrt(mpfr(2), ctx), one / 3)


def step(state: IterationState, ctx: PrecisionContext) -> IterationState:
    """Advance one step of the iteration that produced ``state``.

    Raises :class:`DomainError` when the state violates the algorithm's
    invariants (aux outside [0, 1) for the quadratic and quartic forms,
    outside [1, 3) or [1, 2] for the cubic forms).
    """
    if not (is_finite(state.aux) and is_finite(state.estimate)):
        raise DomainError("iteration state must be finite")
    algorithm = AlgorithmId(state.algorithm)
    n = state.n
    with workspace(ctx):
        if algorithm is AlgorithmId.QUADRATIC:
            d, r = state.aux, state.estimate
            if d < 0 or d >= 1:
                raise DomainError("quadratic aux must lie in [0, 1)")
            u = precision.sqrt((1 - d) * (1 + d), ctx)
            d_next = d * d / ((1 + u) * (1 + u))
            r_next = (1 + d_next) ** 2 * r - mpz(2) ** (n + 1) * d_next
            return IterationState(algorithm, n + 1, d_next, r_next)

        if algorithm is AlgorithmId.QUARTIC:
            s, t = state.aux, state.estimate
            if s < 0 or s >= 1:
                raise DomainError("quartic aux must lie in [0, 1)")
            v = precision.root((1 - s) * (1 + s) * (1 + s * s), 4, ctx)
            s_next = (s * s) * (s * s) / ((1 + v) ** 2 * (1 + v * v))
            t_next = (1 + s_next) ** 4 * t - mpz(2) ** (2 * n + 2) * s_next * (
                1 + s_next + s_next * s_next
            )
            return IterationState(algorithm, n + 1, s_next, t_next)

        if algorithm is AlgorithmId.CUBIC:
            e, r = state.aux, state.estimate
            if e < 1 or e >= 3:
                raise DomainError("cubic aux must lie in [1, 3)")
            f = e - 1  # exact: e and 1 are within a factor of two
            c = precision.root(8 - f * f * f, 3, ctx)
            f_next = f * f * f / ((1 + c) * (4 + 2 * c + c * c))
            # e'^2 r - 3^n (e'^2 - 1) with e' = 1 + f', expanded so the
            # subtraction e'^2 - 1 never happens.
            r_next = (1 + f_next) ** 2 * r - mpz(3) ** n * f_next * (2 + f_next)
            return IterationState(algorithm, n + 1, 1 + f_next, r_next)

        if algorithm is AlgorithmId.QUARTIC_ANALOG:
            e, r = state.aux, state.estimate
            if e < 1 or e > 2:
                raise DomainError("quartic_analog aux must lie in [1, 2]")
            f = e - 1
            f_sq = f * f
            v = precision.root((1 - f) * (1 + f) * (1 + f_sq), 4, ctx)
            f_next = f_sq * f_sq / ((1 + v) ** 2 * (1 + v * v))
            r_next = (1 + f_next) ** 4 * r - mpz(4) ** (n + 1) * f_next * (
                4 + f_next * (6 + f_next * (4 + f_next))
            ) / 3
            return IterationState(algorithm, n + 1, 1 + f_next, r_next)

    raise ValueError(f"cannot step algorithm {algorithm!r}")


def run(algorithm: AlgorithmId, iterations: int, ctx: PrecisionContext) -> list[IterationState]:
    """Run ``iterations`` steps from the seed; returns iterations + 1 states."""
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    states = [init(algorithm, ctx)]
    for _ in range(iterations):
        states.append(step(states[-1], ctx))
    return states


def mean_start(variant: MeanVariant, ctx: PrecisionContext) -> MeanState:
    """Return the seed pair of the mean iteration.

    cubic:   a_0 = 1, b_0 = cbrt(18 - 6 sqrt(3)) / 2
    quartic: a_0 = 1, b_0 = (12 sqrt(2) - 16) ** (1/4)
    """
    variant = MeanVariant(variant)
    with workspace(ctx):
        one = mpfr(1)
        if variant is MeanVariant.CUBIC:
            b0 = precision.root(18 - 6 * precision.sqrt(mpfr(3), ctx), 3, ctx) / 2
        else:
            b0 = precision.root(12 * precision.sqrt(mpfr(2), ctx) - 16, 4, ctx)
        return MeanState(variant=variant, n=0, a=one, b=b0, weighted_sum=mpfr(0))


def mean_step(state: MeanState, ctx: PrecisionContext) -> MeanState:
    """Advance the mean pair one step, folding this step's gap term into the sum."""
    if not (is_finite(state.a) and is_finite(state.b)):
        raise DomainError("mean iteration requires finite values")
    if state.a <= 0 or state.b <= 0:
        raise DomainError("mean iteration requires positive values")
    variant = MeanVariant(state.variant)
    with workspace(ctx):
        a, b = state.a, state.b
        if variant is MeanVariant.CUBIC:
            a_next = (a + 2 * b) / 3
            b_next = precision.root(b * (a * a + a * b + b * b) / 3, 3, ctx)
            term = mpz(3) ** state.n * (a - a_next) * (a + a_next)
        else:
            a_next = (a + b) / 2
            b_next = precision.root(a * b * (a * a + b * b) / 2, 4, ctx)
            term = (
                mpz(4) ** state.n
                * (a - a_next)
                * (a + a_next)
                * (a * a + a_next * a_next)
            )
        return MeanState(
            variant=variant,
            n=state.n + 1,
            a=a_next,
            b=b_next,
            weighted_sum=state.weighted_sum + term,
        )


def mean_limit(variant: MeanVariant, ctx: PrecisionContext) -> tuple[Real, Real]:
    """Iterate the mean from its seed to convergence.

    Returns ``(limit, weighted_sum)``.  The weighted sums converge to
    1/3 - M^2/pi (cubic) and 1/4 - 3 M^4/(4 pi) (quartic), which is what ties
    these means to the cubic and quartic_analog iterations.
    """
    state = mean_start(variant, ctx)
    with workspace(ctx):
        eps = mpfr(2) ** (-(ctx.binary_precision - ctx.guard_bits // 2))
    while True:
        with workspace(ctx):
            done = abs(state.a - state.b) <= eps * state.a
        if done:
            with workspace(ctx):
                return (state.a + state.b) / 2, state.weighted_sum
        state = mean_step(state, ctx)
        if state.n > ctx.binary_precision:
            raise RuntimeError("mean iteration failed to converge")
