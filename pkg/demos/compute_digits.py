#!/usr/bin/env python3
"""Compute pi to a requested number of digits with every algorithm.

Each method is run until two successive estimates agree below the target,
then the reciprocal (where the iteration targets 1/pi) is printed in
ten-digit groups next to the Machin-formula value so disagreements would
be visible immediately.
"""

import argparse

from gmpy2 import mpfr

from agmpi import (
    AlgorithmId,
    init,
    machin_pi,
    make_context,
    salamin_brent_pi,
    step,
    to_decimal,
    workspace,
)


def grouped(digits_string, per_line=5):
    head, tail = digits_string[:2], digits_string[2:]
    chunks = [tail[i : i + 10] for i in range(0, len(tail), 10)]
    lines = []
    for i in range(0, len(chunks), per_line):
        prefix = head if i == 0 else " " * len(head)
        lines.append(prefix + " ".join(chunks[i : i + per_line]))
    return "\n".join(lines)


def pi_via(algorithm, ctx):
    if algorithm is AlgorithmId.SALAMIN_BRENT:
        return salamin_brent_pi(ctx)[0]
    state = init(algorithm, ctx)
    with workspace(ctx):
        threshold = mpfr(10) ** (-(ctx.decimal_digits + 2))
    while True:
        after = step(state, ctx)
        with workspace(ctx):
            done = abs(after.estimate - state.estimate) <= threshold
        state = after
        if done:
            break
    with workspace(ctx):
        return 1 / state.estimate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--digits", type=int, default=100)
    args = parser.parse_args()

    ctx = make_context(args.digits + 10)
    oracle = machin_pi(ctx)
    print(f"pi to {args.digits} digits, Machin arctangent oracle:")
    print(grouped(to_decimal(oracle, args.digits + 1)))
    print()

    for algorithm in AlgorithmId:
        value = pi_via(algorithm, ctx)
        rendered = to_decimal(value, args.digits + 1)
        matches = rendered == to_decimal(oracle, args.digits + 1)
        status = "matches the oracle" if matches else "DISAGREES"
        print(f"{algorithm.value:<16} {status}")
        if not matches:
            print(grouped(rendered))

    print()
    print("All iterations share one guard-bit policy, so a mismatch here")
    print("would point at an algorithm bug rather than at rounding noise.")


if __name__ == "__main__":
    main()
