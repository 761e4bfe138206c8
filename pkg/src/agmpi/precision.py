"""Fixed-precision real arithmetic for the iteration modules.

Every numeric routine in this package runs inside an explicit
:class:`PrecisionContext`.  A context is created once from a requested count
of decimal digits, carries the equivalent binary precision (plus guard bits),
and is threaded through every call; nothing reads or mutates global precision
state behind the caller's back.  The arithmetic itself is MPFR via gmpy2, so
every operation is correctly rounded (round to nearest, ties to even) at the
context's binary precision, and results are bit-for-bit reproducible across
runs and platforms.

Values are plain ``gmpy2.mpfr`` instances, re-exported here as :data:`Real`.
Callers may mix in Python ints and floats; they are converted exactly before
use so no precision is lost on input.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass

import gmpy2

__all__ = [
    "DEFAULT_GUARD_BITS",
    "DomainError",
    "MAX_DECIMAL_DIGITS",
    "PrecisionCeilingError",
    "PrecisionContext",
    "RadicalCounts",
    "Real",
    "count_radicals",
    "decimal_capacity",
    "make_context",
    "root",
    "sqrt",
    "to_decimal",
    "workspace",
]

Real = gmpy2.mpfr

DEFAULT_GUARD_BITS = 32

# Requests above this are refused up front; the machinery would work but a
# single value already costs ~20 MB and the slow paths stop being interactive.
MAX_DECIMAL_DIGITS = 50_000_000

# ceil(log2(10) * 10**32) and floor(log10(2) * 10**32).  Scaled integers so
# the digits<->bits conversions are exact and never depend on float rounding.
_LOG2_10_CEIL = 332192809488736234787031942948940
_LOG10_2_FLOOR = 30102999566398119521373889472449
_SCALE = 10**32


class DomainError(ValueError):
    """An input lies outside the mathematical domain of the operation."""


class PrecisionCeilingError(ValueError):
    """The requested precision exceeds :data:`MAX_DECIMAL_DIGITS`."""


def _bits_for(decimal_digits: int, guard_bits: int) -> int:
    return -(-decimal_digits * _LOG2_10_CEIL // _SCALE) + guard_bits


def decimal_capacity(binary_precision: int) -> int:
    """Return how many significant decimal digits ``binary_precision`` bits carry."""
    return binary_precision * _LOG10_2_FLOOR // _SCALE


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable precision settings shared by a family of computations.

    ``binary_precision`` is always at least ``ceil(decimal_digits * log2(10))
    + guard_bits``; :func:`make_context` sets it to exactly that.
    """

    decimal_digits: int
    binary_precision: int
    guard_bits: int

    def __post_init__(self) -> None:
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be at least 1")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be nonnegative")
        if self.binary_precision < _bits_for(self.decimal_digits, self.guard_bits):
            raise ValueError(
                "binary_precision too small for "
                f"{self.decimal_digits} digits with {self.guard_bits} guard bits"
            )


def make_context(decimal_digits: int, guard_bits: int = DEFAULT_GUARD_BITS) -> PrecisionContext:
    """Build a :class:`PrecisionContext` for ``decimal_digits`` of working precision.

    Raises :class:`PrecisionCeilingError` when the request exceeds
    :data:`MAX_DECIMAL_DIGITS` and ``ValueError`` for digit counts below 1 or
    negative guard bits.
    """
    if not isinstance(decimal_digits, int) or isinstance(decimal_digits, bool):
        raise ValueError("decimal_digits must be an int")
    if decimal_digits < 1:
        raise ValueError("decimal_digits must be at least 1")
    if decimal_digits > MAX_DECIMAL_DIGITS:
        raise PrecisionCeilingError(
            f"{decimal_digits} digits requested; the supported maximum is "
            f"{MAX_DECIMAL_DIGITS}"
        )
    if not isinstance(guard_bits, int) or isinstance(guard_bits, bool):
        raise ValueError("guard_bits must be an int")
    if guard_bits < 0:
        raise ValueError("guard_bits must be nonnegative")
    return PrecisionContext(
        decimal_digits=decimal_digits,
        binary_precision=_bits_for(decimal_digits, guard_bits),
        guard_bits=guard_bits,
    )


def workspace(ctx: PrecisionContext):
    """Return a gmpy2 context manager running at ``ctx.binary_precision``.

    Use as ``with workspace(ctx): ...``.  The gmpy2 context stack is
    thread-local, so concurrent workers at different precisions do not
    interfere.
    """
    return gmpy2.context(precision=ctx.binary_precision)


@dataclass
class RadicalCounts:
    """Tally of radical evaluations observed inside :func:`count_radicals`."""

    sqrt_calls: int = 0
    root_calls: int = 0


_tls = threading.local()


@contextmanager
def count_radicals():
    """Count :func:`sqrt` and :func:`root` calls made by the enclosed block.

    Yields a fresh :class:`RadicalCounts`; nesting restores the outer tally on
    exit.  Counting is per thread.
    """
    previous = getattr(_tls, "counts", None)
    _tls.counts = counts = RadicalCounts()
    try:
        yield counts
    finally:
        _tls.counts = previous


def _tally_sqrt() -> None:
    counts = getattr(_tls, "counts", None)
    if counts is not None:
        counts.sqrt_calls += 1


def _tally_root() -> None:
    counts = getattr(_tls, "counts", None)
    if counts is not None:
        counts.root_calls += 1


def _as_real(value) -> Real:
    # Exact conversions only: ints get enough bits to round-trip, floats are
    # already binary.  Anything else is a caller bug, not a domain error.
    if isinstance(value, Real):
        return value
    if isinstance(value, bool):
        raise TypeError("expected a real number, got bool")
    if isinstance(value, (int, gmpy2.mpz)):
        return gmpy2.mpfr(value, max(2, int(value).bit_length()))
    if isinstance(value, float):
        return gmpy2.mpfr(value, 53)
    raise TypeError(f"expected Real, int, or float, got {type(value).__name__}")


def sqrt(value, ctx: PrecisionContext) -> Real:
    """Correctly rounded square root at the context precision.

    Negative or non-finite input raises :class:`DomainError`.
    """
    x = _as_real(value)
    if not gmpy2.is_finite(x):
        raise DomainError("square root of a non-finite value")
    if x < 0:
        raise DomainError("square root of a negative value")
    _tally_sqrt()
    with workspace(ctx):
        return gmpy2.sqrt(x)


def root(value, k: int, ctx: PrecisionContext) -> Real:
    """Correctly rounded k-th root at the context precision, k in {2, 3, 4}.

    Other ``k`` raise ``ValueError``; negative or non-finite input raises
    :class:`DomainError` (the cube root is restricted to nonnegative input as
    well, matching how the iterations use it).
    """
    if k not in (2, 3, 4):
        raise ValueError(f"k must be 2, 3, or 4, got {k!r}")
    x = _as_real(value)
    if not gmpy2.is_finite(x):
        raise DomainError("root of a non-finite value")
    if x < 0:
        raise DomainError("root of a negative value")
    _tally_root()
    with workspace(ctx):
        return gmpy2.rootn(x, k)


def to_decimal(value, digits: int) -> str:
    """Render a value as a plain positional decimal with ``digits`` significant digits.

    The result never uses exponent notation: small magnitudes gain leading
    zeros ("0.00123"), large ones trailing zeros ("98800").  Requests beyond
    what the value's own binary precision can support raise ``ValueError``
    naming the maximum; so do non-finite values and ``digits < 1``.
    """
    x = _as_real(value)
    if digits < 1:
        raise ValueError("digits must be at least 1")
    if not gmpy2.is_finite(x):
        raise ValueError("cannot render a non-finite value")
    capacity = decimal_capacity(x.precision)
    if digits > capacity:
        raise ValueError(
            f"{digits} digits requested but a {x.precision}-bit value carries "
            f"at most {capacity} reliable digits"
        )
    if x == 0:
        return "0" if digits == 1 else "0." + "0" * (digits - 1)
    if digits == 1:
        # mpfr.digits refuses single-digit output; round the 2-digit form.
        mant, exp, _ = x.digits(10, 2)
        neg = mant.startswith("-")
        if neg:
            mant = mant[1:]
        head = int(mant[0]) + (1 if _round_up(mant) else 0)
        if head == 10:
            head, exp = 1, exp + 1
        mant = str(head)
    else:
        mant, exp, _ = x.digits(10, digits)
        neg = mant.startswith("-")
        if neg:
            mant = mant[1:]
    if exp <= 0:
        body = "0." + "0" * (-exp) + mant
    elif exp < len(mant):
        body = mant[:exp] + "." + mant[exp:]
    else:
        body = mant + "0" * (exp - len(mant))
    return ("-" + body) if neg else body


def _round_up(two_digits: str) -> bool:
    trailing = int(two_digits[1])
    if trailing > 5:
        return True
    if trailing < 5:
        return False
    return int(two_digits[0]) % 2 == 1  # ties to even
