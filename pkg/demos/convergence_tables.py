#!/usr/bin/env python3
# Side-by-side error ladders for the four fast iterations plus the AGM
# method. The point of the printout is the exponent column: quadratic
# roughly doubles it per step, cubic triples it, the quartic pair
# quadruples it.

from gmpy2 import mpfr

from agmpi import (
    AlgorithmId,
    convergence_orders,
    correct_digits,
    machin_pi,
    make_context,
    run,
    salamin_brent_pi,
    workspace,
)

DIGITS = 1200
ITERATIONS = {
    AlgorithmId.QUADRATIC: 10,
    AlgorithmId.CUBIC: 7,
    AlgorithmId.QUARTIC: 5,
    AlgorithmId.QUARTIC_ANALOG: 5,
}


def sci(x):
    if x == 0:
        return "0"
    return f"{float(x):.3e}" if abs(x) > mpfr("1e-300") else mantissa_exp(x)


def mantissa_exp(x):
    # float() underflows long before mpfr does, so format by hand
    digits, exponent, _ = x.digits(10, 4)
    sign = "-" if digits.startswith("-") else ""
    body = digits.lstrip("-")
    return f"{sign}{body[0]}.{body[1:]}e{exponent - 1:+03d}"


def main():
    ctx = make_context(DIGITS)
    pi_ref = machin_pi(ctx)
    with workspace(ctx):
        inv_pi = 1 / pi_ref

    for algorithm, iterations in ITERATIONS.items():
        states = run(algorithm, iterations, ctx)
        with workspace(ctx):
            errors = [abs(s.estimate - inv_pi) for s in states]
            floor = mpfr(10) ** (-(DIGITS - 10))
        orders = convergence_orders(errors, floor=floor)
        print(f"{algorithm.value}: error against 1/pi")
        print(f"  {'n':>2}  {'abs err':>10}  {'digits':>6}  order")
        for n, state in enumerate(states):
            order = orders[n - 1] if 1 <= n <= len(orders) else None
            order_text = f"{order:.3f}" if order is not None else ""
            print(
                f"  {n:>2}  {sci(errors[n]):>10}  "
                f"{correct_digits(state.estimate, inv_pi):>6}  {order_text}"
            )
        print()

    estimate, trace = salamin_brent_pi(ctx)
    print("salamin_brent: error against pi itself")
    print(f"  {'n':>2}  {'abs err':>10}  {'digits':>6}  order")
    for record in trace:
        order_text = f"{record.local_order:.3f}" if record.local_order else ""
        print(
            f"  {record.n:>2}  {sci(record.abs_error):>10}  "
            f"{record.correct_digits:>6}  {order_text}"
        )


if __name__ == "__main__":
    main()
