"""Independent reference values and cross-checks for the pi iterations.

The reference oracle here is deliberately boring: Machin's arctangent formula
pi = 16 arctan(1/5) - 4 arctan(1/239), summed as plain alternating series at
elevated precision and rounded once into the caller's context.  It shares no
code path with the AGM or the fast iterations, which is the point; every
convergence claim in this package is measured against it.

:func:`check_identities` replays the exact algebraic relations that tie the
iterations together (telescoping sums, even-step matching, mean linkages) and
reports the worst residual of each, so a regression in any one algorithm shows
up as a broken relation rather than a silently wrong digit.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .precision import PrecisionContext, Real, workspace

__all__ = [
    "ConvergenceRecord",
    "IdentityReport",
    "check_identities",
    "convergence_orders",
    "correct_digits",
    "machin_pi",
]


@dataclass(frozen=True)
class ConvergenceRecord:
    """One row of a convergence trace.

    ``local_order`` is the empirical convergence order at this step, or None
    at the trace boundaries and wherever the error sits at the precision
    floor.
    """

    n: int
    estimate_rendered: str
    abs_error: Real
    correct_digits: int
    local_order: float | None


@dataclass(frozen=True)
class IdentityReport:
    """Result of checking one cross-algorithm identity over a range of n.

    ``flagged`` marks identities that only hold because a divergent printed
    form of the cubic mean update was corrected; they are informational and do
    not fail a verification run.
    """

    identity_name: str
    max_residual: Real
    tolerance: Real
    passed: bool
    n_lo: int
    n_hi: int
    flagged: bool = False
    note: str = ""


def machin_pi(ctx: PrecisionContext) -> Real:
    """Return pi at the context precision via Machin's arctangent formula.

    The two series run at an elevated working precision (64 extra bits plus a
    log-sized margin for the summation length) and the combination is rounded
    exactly once into ``ctx``.
    """
    bits = ctx.binary_precision
    work = bits + 64 + bits.bit_length()
    with gmpy2.context(precision=work):
        threshold = mpfr(2) ** (-work)

        def arctan_inv(q: int) -> Real:
            # arctan(1/q) for integer q > 1, alternating Taylor series.
            x = mpfr(1) / q
            x_sq = x * x
            total = mpfr(0)
            power = x
            k = 0
            positive = True
            while True:
                term = power / (2 * k + 1)
                total = total + term if positive else total - term
                if term < threshold:
                    return total
                power *= x_sq
                positive = not positive
                k += 1

        pi_wide = 16 * arctan_inv(5) - 4 * arctan_inv(239)
    with workspace(ctx):
        return +pi_wide


def correct_digits(approx, reference) -> int:
    """Count matching significant decimal digits of ``approx`` against ``reference``.

    Defined as floor(-log10(|approx - reference| / |reference|)), clamped to
    [0, ceiling] where the ceiling is the decimal capacity of the less precise
    operand.  A zero reference raises ``ValueError``.
    """
    from .precision import _as_real, decimal_capacity

    a = _as_real(approx)
    r = _as_real(reference)
    if r == 0:
        raise ValueError("reference must be nonzero")
    ceiling = decimal_capacity(min(a.precision, r.precision))
    with gmpy2.context(precision=max(a.precision, r.precision) + 8):
        diff = abs(a - r)
        if diff == 0:
            return ceiling
        rel = diff / abs(r)
    with gmpy2.context(precision=64):
        value = -gmpy2.log10(rel)
        digits = int(gmpy2.floor(value))
    return max(0, min(ceiling, digits))


def convergence_orders(errors, floor=None) -> list[float | None]:
    """Estimate the local convergence order at each interior point of ``errors``.

    For errors e_0, e_1, ..., the estimate at index i+1 is
    log(e_{i+2}/e_{i+1}) / log(e_{i+1}/e_i); the returned list has
    ``len(errors) - 2`` entries, aligned to the interior points.  An entry is
    None when any of its three errors is at or below ``floor`` (the precision
    floor, if given) or when the pair it divides by has stalled.  Errors must
    be positive and at least three are required.
    """
    from .precision import _as_real

    errs = [_as_real(e) for e in errors]
    if len(errs) < 3:
        raise ValueError("need at least three errors")
    if any(not gmpy2.is_finite(e) or e <= 0 for e in errs):
        raise ValueError("errors must be positive and finite")
    floor_val = _as_real(floor) if floor is not None else None
    orders: list[float | None] = []
    with gmpy2.context(precision=64):
        logs = [gmpy2.log(e) for e in errs]
        for i in range(len(errs) - 2):
            triple = errs[i : i + 3]
            if floor_val is not None and any(e <= floor_val for e in triple):
                orders.append(None)
                continue
            denom = logs[i + 1] - logs[i]
            if denom >= 0:  # not converging here; no meaningful order
                orders.append(None)
                continue
            orders.append(float((logs[i + 2] - logs[i + 1]) / denom))
    return orders


def check_identities(
    n_max: int,
    ctx: PrecisionContext,
    tolerance=None,
    inject_fault: bool = False,
) -> list[IdentityReport]:
    """Check the web of identities linking the iterations, for n up to ``n_max``.

    Returns one :class:`IdentityReport` per identity.  The default tolerance
    is 10**-(decimal_digits - 12); the weighted-sum residual checks use the
    tighter 10**-(decimal_digits - 10) that their own convergence statement
    promises.  ``inject_fault`` perturbs the quadratic iteration's estimates
    before comparison and exists so callers can prove their failure handling
    works; see the ``verify`` CLI subcommand's hidden flag.
    """
    from . import agm as agm_mod
    from . import borwein as bw

    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    dd = ctx.decimal_digits

    pi_ref = machin_pi(ctx)
    quad = bw.run(bw.AlgorithmId.QUADRATIC, 2 * n_max, ctx)
    quart = bw.run(bw.AlgorithmId.QUARTIC, n_max, ctx)
    cubic = bw.run(bw.AlgorithmId.CUBIC, n_max, ctx)
    analog = bw.run(bw.AlgorithmId.QUARTIC_ANALOG, n_max, ctx)

    with workspace(ctx):
        eps = mpfr(2) ** (-(ctx.binary_precision - ctx.guard_bits // 2))

    def settled(state) -> bool:
        with workspace(ctx):
            return abs(state.a - state.b) <= eps * state.a

    agm_states = [agm_mod.canonical_start(ctx)]
    while len(agm_states) < n_max + 2 or not settled(agm_states[-1]):
        agm_states.append(agm_mod.agm_step(agm_states[-1], ctx))
        if len(agm_states) > ctx.binary_precision:
            raise RuntimeError("AGM failed to converge")

    series_r = [agm_mod.gauss_r(n, ctx) for n in range(n_max + 2)]

    mean_traces = {}
    for variant in (bw.MeanVariant.CUBIC, bw.MeanVariant.QUARTIC):
        states = [bw.mean_start(variant, ctx)]
        while len(states) < n_max + 2 or not settled(states[-1]):
            states.append(bw.mean_step(states[-1], ctx))
            if len(states) > ctx.binary_precision:
                raise RuntimeError("mean iteration failed to converge")
        mean_traces[variant] = states

    with workspace(ctx):
        tol = mpfr(tolerance) if tolerance is not None else mpfr(10) ** (-(dd - 12))
        sum_tol = mpfr(10) ** (-(dd - 10))
        err_floor = mpfr(10) ** (-(dd - 2))
        inv_pi = 1 / pi_ref

        quad_r = [state.estimate for state in quad]
        quad_d = [state.aux for state in quad]
        if inject_fault:
            bump = mpfr(10) ** (-(dd // 2))
            quad_r = [r + bump for r in quad_r]

        a_seq = [state.a for state in agm_states]
        b_seq = [state.b for state in agm_states]
        m_limit = (a_seq[-1] + b_seq[-1]) / 2

        reports: list[IdentityReport] = []

        def add(name, residuals, lo, hi, use_tol=None, flagged=False, note="", force_fail=False):
            worst = mpfr(0)
            for value in residuals:
                if value > worst:
                    worst = value
            limit = tol if use_tol is None else use_tol
            reports.append(
                IdentityReport(
                    identity_name=name,
                    max_residual=worst,
                    tolerance=limit,
                    passed=(not force_fail) and worst <= limit,
                    n_lo=lo,
                    n_hi=hi,
                    flagged=flagged,
                    note=note,
                )
            )

        # Telescoping: r_n a_n^2 - r_{n+1} a_{n+1}^2 = 2^(n-1) (a_n^2 - b_n^2),
        # with the series values of r on the left.
        add(
            "telescoping-collapse",
            [
                abs(
                    (series_r[n] * a_seq[n] ** 2 - series_r[n + 1] * a_seq[n + 1] ** 2)
                    - mpfr(2) ** (n - 1) * (a_seq[n] - b_seq[n]) * (a_seq[n] + b_seq[n])
                )
                for n in range(n_max + 1)
            ],
            0,
            n_max,
        )

        # Ratio recurrence: r_{n+1} = (a_n/a_{n+1})^2 r_n - 2^(n+1) (a_n/a_{n+1} - 1).
        def ratio_residual(n):
            ratio = a_seq[n] / a_seq[n + 1]
            predicted = ratio * ratio * series_r[n] - mpfr(2) ** (n + 1) * (ratio - 1)
            return abs(series_r[n + 1] - predicted)

        add(
            "ratio-recurrence",
            [ratio_residual(n) for n in range(n_max + 1)],
            0,
            n_max,
        )

        # Weighted-sum residual: partial sums of 2^k (a_k^2 - b_k^2) increase
        # monotonically to 1 - 2 M^2 / pi.
        target = 1 - 2 * m_limit * m_limit * inv_pi
        residuals = [target - state.weighted_sum for state in agm_states]
        monotone = all(
            residuals[i + 1] <= residuals[i] + sum_tol for i in range(len(residuals) - 1)
        )
        add(
            "weighted-sum-residual",
            [abs(residuals[-1])],
            0,
            len(agm_states) - 1,
            use_tol=sum_tol,
            force_fail=not monotone,
            note="" if monotone else "partial sums are not monotone",
        )

        # Series definition against the quadratic recurrence outputs.
        add(
            "series-vs-recurrence",
            [abs(series_r[n] - quad_r[n]) for n in range(n_max + 1)],
            0,
            n_max,
        )

        # Quartic step n equals quadratic step 2n.
        add(
            "even-step-match",
            [abs(quart[n].estimate - quad_r[2 * n]) for n in range(n_max + 1)],
            0,
            n_max,
        )

        # Quartic aux is the square root of the even-indexed quadratic aux.
        add(
            "aux-square-root-match",
            [abs(quart[n].aux - gmpy2.sqrt(quad_d[2 * n])) for n in range(n_max + 1)],
            0,
            n_max,
        )

        # Backward aux step: d_n = 2 sqrt(d_{n+1}) / (1 + d_{n+1}).
        add(
            "aux-backward-step",
            [
                abs(quad_d[n] - 2 * gmpy2.sqrt(quad_d[n + 1]) / (1 + quad_d[n + 1]))
                for n in range(n_max + 1)
            ],
            0,
            n_max,
        )

        # The quadratic aux comes straight from the AGM trace, two ways.
        def agm_aux_residual(n):
            d_next = quad_d[n + 1]
            first = abs(d_next - (a_seq[n] / a_seq[n + 1] - 1))
            second = abs(d_next - (a_seq[n] - b_seq[n]) / (a_seq[n] + b_seq[n]))
            return max(first, second)

        add(
            "aux-from-agm-ratio",
            [agm_aux_residual(n) for n in range(n_max + 1)],
            0,
            n_max,
        )

        corrected_note = (
            "cubic mean update uses weight (a + 2b)/3; dividing by 2 instead "
            "makes the rule diverge, so the division step is corrected here"
        )

        # Cubic mean weighted sum: sum of 3^k (a_k^2 - a_{k+1}^2) converges to
        # 1/3 - M^2/pi.
        cubic_states = mean_traces[bw.MeanVariant.CUBIC]
        m_cubic = (cubic_states[-1].a + cubic_states[-1].b) / 2
        target3 = mpfr(1) / 3 - m_cubic * m_cubic * inv_pi
        add(
            "cubic-mean-sum-residual",
            [abs(target3 - cubic_states[-1].weighted_sum)],
            0,
            len(cubic_states) - 1,
            use_tol=sum_tol,
            flagged=True,
            note=corrected_note,
        )

        # Cubic iteration aux equals the cubic mean ratio a_n / a_{n+1}.
        cubic_a = [state.a for state in cubic_states]
        add(
            "cubic-ratio-linkage",
            [
                abs(cubic[n + 1].aux - cubic_a[n] / cubic_a[n + 1])
                for n in range(n_max)
            ],
            1,
            n_max,
            flagged=True,
            note=corrected_note,
        )

        # Quartic mean weighted sum: sum of 4^k (a_k^4 - a_{k+1}^4) converges
        # to 1/4 - 3 M^4 / (4 pi).
        quartic_states = mean_traces[bw.MeanVariant.QUARTIC]
        m_quartic = (quartic_states[-1].a + quartic_states[-1].b) / 2
        target4 = mpfr(1) / 4 - 3 * m_quartic**4 * inv_pi / 4
        add(
            "quartic-mean-sum-residual",
            [abs(target4 - quartic_states[-1].weighted_sum)],
            0,
            len(quartic_states) - 1,
            use_tol=sum_tol,
        )

        # Quartic-analog aux equals the quartic mean ratio a_n / a_{n+1}.
        quartic_a = [state.a for state in quartic_states]
        add(
            "quartic-analog-ratio-linkage",
            [
                abs(analog[n + 1].aux - quartic_a[n] / quartic_a[n + 1])
                for n in range(n_max)
            ],
            1,
            n_max,
        )

        # Above the precision floor, every trace's error must shrink at each step.
        def monotone_violations(estimates, reference):
            errors = [abs(value - reference) for value in estimates]
            worst = mpfr(0)
            for i in range(len(errors) - 1):
                if errors[i] > err_floor and errors[i + 1] > err_floor:
                    increase = errors[i + 1] - errors[i]
                    if increase > worst:
                        worst = increase
            return worst

        salamin_estimates = [
            2 * agm_states[i + 1].a ** 2 / (1 - agm_states[i + 1].weighted_sum)
            for i in range(len(agm_states) - 1)
        ]
        trace_errors = [
            monotone_violations(quad_r, inv_pi),
            monotone_violations([s.estimate for s in quart], inv_pi),
            monotone_violations([s.estimate for s in cubic], inv_pi),
            monotone_violations([s.estimate for s in analog], inv_pi),
            monotone_violations(salamin_estimates, pi_ref),
        ]
        add(
            "error-monotone-decrease",
            trace_errors,
            0,
            n_max,
            use_tol=mpfr(0),
        )

        # After the seed, every reciprocal-pi estimate stays inside (1/4, 1/2].
        def window_violation(estimates):
            worst = mpfr(0)
            for value in estimates[1:]:
                low = mpfr(1) / 4 - value
                high = value - mpfr(1) / 2
                if low > worst:
                    worst = low
                if high > worst:
                    worst = high
            return worst

        add(
            "estimate-window",
            [
                window_violation(quad_r[: n_max + 1]),
                window_violation([s.estimate for s in quart]),
                window_violation([s.estimate for s in cubic]),
                window_violation([s.estimate for s in analog]),
            ],
            1,
            n_max,
            use_tol=mpfr(0),
        )

    return reports
