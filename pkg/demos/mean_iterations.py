#!/usr/bin/env python3
# Watch the cubic and quartic means converge.
#
# Both iterations start from a = 1 with a seed b chosen so the common
# limit feeds a pi formula: the running weighted sum of gap terms lands
# on 1/3 - M^2/pi for the cubic mean and on 1/4 - 3 M^4/(4 pi) for the
# quartic one. The gap column shrinks with order 3 and 4 respectively.

from gmpy2 import mpfr

from agmpi import (
    MeanVariant,
    machin_pi,
    make_context,
    mean_limit,
    mean_start,
    mean_step,
    to_decimal,
    workspace,
)

DIGITS = 150
STEPS = 5


def show(variant):
    ctx = make_context(DIGITS)
    state = mean_start(variant, ctx)
    print(f"{variant.value} mean, a = 1, b = {to_decimal(state.b, 20)}")
    for _ in range(STEPS):
        with workspace(ctx):
            gap = state.a - state.b
        if gap == 0:
            gap_text = "0 (below working precision)"
        else:
            gap_digits, gap_exp, _ = gap.digits(10, 3)
            gap_text = f"{gap_digits[0]}.{gap_digits[1:]}e{gap_exp - 1:+03d}"
        print(f"  n={state.n}  a={to_decimal(state.a, 24)}  gap ~ {gap_text}")
        state = mean_step(state, ctx)

    limit, weighted_sum = mean_limit(variant, ctx)
    pi_ref = machin_pi(ctx)
    with workspace(ctx):
        if variant is MeanVariant.CUBIC:
            target = mpfr(1) / 3 - limit * limit / pi_ref
        else:
            target = mpfr(1) / 4 - 3 * limit**4 / (4 * pi_ref)
        residual = abs(weighted_sum - target)
    print(f"  limit M = {to_decimal(limit, 30)}")
    print(f"  weighted sum sits {float(residual):.1e} from its pi target")
    print()


def main():
    for variant in MeanVariant:
        show(variant)
    print("shrinking residuals above confirm both mean limits encode pi")


if __name__ == "__main__":
    main()
