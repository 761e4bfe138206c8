"""End-to-end checks of the advertised behavior, one summary line each.

Run ``pytest -s tests/test_acceptance.py -v`` to see the per-criterion
lines on a passing suite; without ``-s`` they only surface on failure.
"""

import json
import subprocess
import sys
import time

import pytest
from gmpy2 import mpfr

from agmpi.agm import agm_limit, agm_step, canonical_start, gauss_r
from agmpi.agm import salamin_brent_pi
from agmpi.borwein import AlgorithmId, init, run, step
from agmpi.precision import make_context, sqrt, to_decimal, workspace
from agmpi.verify import convergence_orders, correct_digits, machin_pi


def _report(number: int, name: str, passed: bool, detail: str = "") -> None:
    print(f"[acceptance {number:02d}] {name}: {'PASS' if passed else 'FAIL'}")
    assert passed, detail or name


@pytest.fixture(scope="module")
def ctx4000():
    return make_context(4000)


@pytest.fixture(scope="module")
def inv_pi_4000(ctx4000):
    with workspace(ctx4000):
        return 1 / machin_pi(ctx4000)


def _digit_counts(states, inv_pi):
    return [correct_digits(s.estimate, inv_pi) for s in states]


def _first_reaching(counts, target=1000):
    for n, count in enumerate(counts):
        if count >= target:
            return n
    return None


def _post_seed_orders(states, inv_pi, ctx):
    # the seed error sits outside the asymptotic regime, so order estimates
    # start from the first iterate; saturated entries are clamped positive
    # and then suppressed by the floor
    with workspace(ctx):
        tiny = mpfr(10) ** (-(4 * ctx.decimal_digits + 40))
        errors = []
        for s in states[1:]:
            err = abs(s.estimate - inv_pi)
            errors.append(err if err > 0 else tiny)
        floor = mpfr(10) ** (-(ctx.decimal_digits - 10))
    return [p for p in convergence_orders(errors, floor=floor) if p is not None]


def test_acceptance_01_quadratic_digit_doubling(ctx4000):
    started = time.perf_counter()
    with workspace(ctx4000):
        inv_pi = 1 / machin_pi(ctx4000)
    states = run(AlgorithmId.QUADRATIC, 12, ctx4000)
    counts = _digit_counts(states, inv_pi)
    elapsed = time.perf_counter() - started

    failures = []
    reached = _first_reaching(counts)
    if reached is None:
        failures.append(f"never reached 1000 digits in 12 iterations: {counts}")
    else:
        for n in range(2, reached + 1):
            if counts[n] < 1.8 * counts[n - 1]:
                failures.append(
                    f"digit count grew less than 1.8x at n={n}: "
                    f"{counts[n - 1]} -> {counts[n]}"
                )
    if elapsed >= 10.0:
        failures.append(f"run took {elapsed:.2f}s, budget is 10s")
    _report(1, "quadratic doubles correct digits", not failures, "; ".join(failures))


def test_acceptance_02_quartic_rate(ctx4000, inv_pi_4000):
    states = run(AlgorithmId.QUARTIC, 6, ctx4000)
    counts = _digit_counts(states, inv_pi_4000)
    orders = _post_seed_orders(states, inv_pi_4000, ctx4000)

    failures = []
    reached = _first_reaching(counts)
    if reached is None or reached > 6:
        failures.append(f"1000 digits not reached within 6 iterations: {counts}")
    if len(orders) < 2:
        failures.append(f"too few measurable orders: {orders}")
    for p in orders:
        if not 3.7 <= p <= 4.3:
            failures.append(f"order {p:.3f} outside [3.7, 4.3]")
    _report(2, "quartic quadruples correct digits", not failures, "; ".join(failures))


def test_acceptance_03_cubic_rate(ctx4000, inv_pi_4000):
    states = run(AlgorithmId.CUBIC, 8, ctx4000)
    counts = _digit_counts(states, inv_pi_4000)
    orders = _post_seed_orders(states, inv_pi_4000, ctx4000)

    failures = []
    reached = _first_reaching(counts)
    if reached is None or reached > 8:
        failures.append(f"1000 digits not reached within 8 iterations: {counts}")
    if len(orders) < 2:
        failures.append(f"too few measurable orders: {orders}")
    for p in orders:
        if not 2.7 <= p <= 3.3:
            failures.append(f"order {p:.3f} outside [2.7, 3.3]")
    _report(3, "cubic rule converges with order 3", not failures, "; ".join(failures))


def test_acceptance_04_quartic_analog_rate(ctx4000, inv_pi_4000):
    states = run(AlgorithmId.QUARTIC_ANALOG, 6, ctx4000)
    counts = _digit_counts(states, inv_pi_4000)
    orders = _post_seed_orders(states, inv_pi_4000, ctx4000)

    failures = []
    reached = _first_reaching(counts)
    if reached is None or reached > 6:
        failures.append(f"1000 digits not reached within 6 iterations: {counts}")
    if len(orders) < 2:
        failures.append(f"too few measurable orders: {orders}")
    for p in orders:
        if not 3.7 <= p <= 4.3:
            failures.append(f"order {p:.3f} outside [3.7, 4.3]")
    _report(
        4, "quartic analog converges with order 4", not failures, "; ".join(failures)
    )


def test_acceptance_05_weighted_sum_residual():
    ctx = make_context(1000)
    pi_ref = machin_pi(ctx)
    start = canonical_start(ctx)
    limit, _ = agm_limit(start.a, start.b, ctx)

    failures = []
    with workspace(ctx):
        target = 1 - 2 * limit * limit / pi_ref
        bound = mpfr(10) ** (-990)
        state = start
        residuals = []
        for _ in range(14):
            state = agm_step(state, ctx)
            residuals.append(abs(state.weighted_sum - target))
        if not residuals[-1] <= bound:
            failures.append(f"final residual {residuals[-1]:.3e} above 1e-990")
        for i in range(len(residuals) - 1):
            if residuals[i + 1] > residuals[i] and residuals[i] > bound:
                failures.append(f"residual grew at step {i + 1}")
    _report(5, "weighted gap sum matches 1 - 2M^2/pi", not failures, "; ".join(failures))


def test_acceptance_06_quartic_equals_even_quadratic():
    ctx = make_context(200)
    quadratic = run(AlgorithmId.QUADRATIC, 12, ctx)
    quartic = run(AlgorithmId.QUARTIC, 6, ctx)

    failures = []
    with workspace(ctx):
        # estimates live in (0.25, 0.5], so one decimal ulp at 200 digits
        # is 10^(-200) and the budget is ten of them
        budget = mpfr(10) ** (-199)
        for n in range(7):
            diff = abs(quartic[n].estimate - quadratic[2 * n].estimate)
            if diff > budget:
                failures.append(f"n={n}: gap {diff:.3e} above 10 ulp")
    _report(6, "quartic step equals two quadratic steps", not failures, "; ".join(failures))


def test_acceptance_07_series_matches_recurrence():
    ctx = make_context(100)
    states = run(AlgorithmId.QUADRATIC, 10, ctx)

    failures = []
    with workspace(ctx):
        budget = mpfr(10) ** (-99)
        for n in range(11):
            diff = abs(gauss_r(n, ctx) - states[n].estimate)
            if diff > budget:
                failures.append(f"n={n}: gap {diff:.3e} above 10 ulp")
        half = mpfr(1) / 2
        closed_r1 = 6 - 4 * sqrt(2, ctx)
    if to_decimal(gauss_r(0, ctx), 100) != to_decimal(half, 100):
        failures.append("r_0 does not render as 1/2 at 100 digits")
    if to_decimal(gauss_r(1, ctx), 100) != to_decimal(closed_r1, 100):
        failures.append("r_1 does not render as 6 - 4*sqrt(2) at 100 digits")
    _report(7, "series values match the recurrence", not failures, "; ".join(failures))


def test_acceptance_08_five_way_cross_validation():
    ctx = make_context(1000)
    pi_ref = machin_pi(ctx)

    def fast_pi(algorithm):
        state = init(algorithm, ctx)
        with workspace(ctx):
            threshold = mpfr(10) ** (-(ctx.decimal_digits + 5))
        for _ in range(40):
            after = step(state, ctx)
            with workspace(ctx):
                settled = abs(after.estimate - state.estimate) <= threshold
            state = after
            if settled:
                break
        with workspace(ctx):
            return 1 / state.estimate

    estimates = {
        algorithm.value: fast_pi(algorithm)
        for algorithm in [
            AlgorithmId.QUADRATIC,
            AlgorithmId.QUARTIC,
            AlgorithmId.CUBIC,
            AlgorithmId.QUARTIC_ANALOG,
        ]
    }
    estimates["salamin_brent"] = salamin_brent_pi(ctx)[0]

    failures = []
    for name, value in estimates.items():
        digits = correct_digits(value, pi_ref)
        if digits < 1000:
            failures.append(f"{name} agrees with the oracle to only {digits} digits")
    names = sorted(estimates)
    for i, left in enumerate(names):
        for right in names[i + 1 :]:
            digits = correct_digits(estimates[left], estimates[right])
            if digits < 1000:
                failures.append(f"{left} vs {right}: only {digits} digits")
    _report(8, "five algorithms agree past 1000 digits", not failures, "; ".join(failures))


def test_acceptance_09_identity_suite_cli():
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "agmpi.cli",
            "verify",
            "--digits",
            "100",
            "--iterations",
            "6",
            "--format",
            "json",
        ],
        capture_output=True,
        text=True,
        timeout=300,
    )
    failures = []
    if proc.returncode != 0:
        failures.append(f"exit code {proc.returncode}: {proc.stderr}")
    records = [json.loads(line) for line in proc.stdout.splitlines()]
    flagged = [r for r in records if r.get("flagged") is True]
    if not any("cubic" in r["identity"] for r in flagged):
        failures.append("no flagged cubic item in the report")
    if any(not r["note"] for r in flagged):
        failures.append("flagged item has an empty note")
    _report(9, "identity suite passes and flags the cubic mean", not failures, "; ".join(failures))


def test_acceptance_10_byte_identical_output(tmp_path):
    def run_cli(*args):
        return subprocess.run(
            [sys.executable, "-m", "agmpi.cli", *args],
            capture_output=True,
            text=True,
            timeout=300,
        )

    failures = []
    compute_args = ("compute", "--digits", "500")
    first = run_cli(*compute_args)
    second = run_cli(*compute_args)
    if first.returncode != 0 or first.stdout != second.stdout:
        failures.append("compute output differs between runs")

    table_args = (
        "table", "--algorithm", "cubic", "--digits", "150",
        "--iterations", "6", "--format", "csv",
    )
    first_table = run_cli(*table_args)
    second_table = run_cli(*table_args)
    if first_table.returncode != 0 or first_table.stdout != second_table.stdout:
        failures.append("table output differs between runs")

    out_path = tmp_path / "table.csv"
    routed = run_cli(*table_args, "--out", str(out_path))
    if routed.returncode != 0 or out_path.read_text() != first_table.stdout:
        failures.append("file output differs from stdout output")
    _report(10, "repeated runs are byte-identical", not failures, "; ".join(failures))
