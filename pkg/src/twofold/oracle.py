"""High-precision reference arithmetic for auditing the library.

An :class:`Oracle` evaluates exp, expm1, log and log1p with an MPFR
significand of at least 192 bits (96 for binary32 audits) and measures
relative errors of twofold results against those references.  Exactness
checks for the error-free transformations run in exact dyadic-rational
arithmetic on Python integers and are independent of any floating-point
path they verify.
"""

from __future__ import annotations

import math
from typing import Tuple

import gmpy2
from gmpy2 import mpfr

from .eft import Twofold

__all__ = [
    "Oracle",
    "OracleDomainError",
    "check_exact_sum",
    "check_exact_diff",
    "check_exact_prod",
]

_IEEE = {64: gmpy2.ieee(64), 32: gmpy2.ieee(32)}


class OracleDomainError(ValueError):
    """Raised for reference evaluations outside the mathematical domain."""


class Oracle:
    """Correctly rounded reference functions at a fixed working precision.

    All operations go through explicit context methods; the thread-global
    gmpy2 context is never touched, so oracle use is safe from any thread.
    """

    def __init__(self, precision: int = 192):
        if precision < 96:
            raise ValueError("oracle precision below 96 bits is not supported")
        self.precision = precision
        self._ctx = gmpy2.context(precision=precision)

    # -- conversions -------------------------------------------------------

    def from_float(self, x: float) -> mpfr:
        return mpfr(x, self.precision)

    def from_twofold(self, t: Twofold) -> mpfr:
        """value + error summed at oracle precision."""
        return self._ctx.add(mpfr(t[0], self.precision), mpfr(t[1], self.precision))

    def round_nearest(self, ref, width: int = 64) -> float:
        """Round a reference value to the nearest target-width float."""
        return float(_IEEE[width].plus(ref))

    # -- arithmetic passthroughs --------------------------------------------

    def add(self, a, b) -> mpfr:
        return self._ctx.add(a, b)

    def sub(self, a, b) -> mpfr:
        return self._ctx.sub(a, b)

    def mul(self, a, b) -> mpfr:
        return self._ctx.mul(a, b)

    def div(self, a, b) -> mpfr:
        return self._ctx.div(a, b)

    # -- reference functions -------------------------------------------------

    def exp(self, x) -> mpfr:
        return self._ctx.exp(self._in(x))

    def expm1(self, x) -> mpfr:
        return self._ctx.expm1(self._in(x))

    def log(self, x) -> mpfr:
        v = self._in(x)
        if v <= 0:
            raise OracleDomainError(f"log domain: {x!r}")
        return self._ctx.log(v)

    def log1p(self, x) -> mpfr:
        v = self._in(x)
        if v <= -1:
            raise OracleDomainError(f"log1p domain: {x!r}")
        return self._ctx.log1p(v)

    def log2_const(self) -> mpfr:
        return self._ctx.const_log2()

    def _in(self, x) -> mpfr:
        v = x if isinstance(x, mpfr) else mpfr(x, self.precision)
        if not gmpy2.is_finite(v):
            raise OracleDomainError(f"non-finite reference argument: {x!r}")
        return v

    # -- error measurement ----------------------------------------------------

    def rel_error(self, t: Twofold, ref) -> Tuple[float, bool]:
        """|(value + error) - ref| / |ref| at oracle precision.

        Returns (error, absolute_fallback); the flag is True when ref is
        zero and the absolute deviation is reported instead.
        """
        ctx = self._ctx
        s = ctx.add(mpfr(t[0], self.precision), mpfr(t[1], self.precision))
        d = ctx.sub(s, ref)
        if ref == 0:
            return abs(float(d)), True
        return abs(float(ctx.div(d, ref))), False


# -- exact dyadic-rational checks (independent of all float paths) ----------


def _ratio(x: float):
    # raises for inf/nan, which the callers turn into "not exact"
    return x.as_integer_ratio()


def check_exact_sum(a: float, b: float, t: Twofold) -> bool:
    """a + b == t.value + t.error in exact rational arithmetic."""
    try:
        an, ad = _ratio(a)
        bn, bd = _ratio(b)
        vn, vd = _ratio(t[0])
        en, ed = _ratio(t[1])
    except (ValueError, OverflowError):
        return False
    return (an * bd + bn * ad) * vd * ed == (vn * ed + en * vd) * ad * bd


def check_exact_diff(a: float, b: float, t: Twofold) -> bool:
    """a - b == t.value + t.error in exact rational arithmetic."""
    return check_exact_sum(a, -b, t)


def check_exact_prod(a: float, b: float, t: Twofold) -> bool:
    """a * b == t.value + t.error in exact rational arithmetic."""
    try:
        an, ad = _ratio(a)
        bn, bd = _ratio(b)
        vn, vd = _ratio(t[0])
        en, ed = _ratio(t[1])
    except (ValueError, OverflowError):
        return False
    return an * bn * vd * ed == (vn * ed + en * vd) * ad * bd


def rel_error_float(value: float, error: float, ref: float) -> Tuple[float, bool]:
    """Relative error against a plain double etalon, computed in binary64.

    Used for the binary32 audits where the double math library itself is
    the reference; measured errors sit far above the 2**-53 noise floor.
    """
    d = (value - ref) + error
    if ref == 0.0:
        return abs(d), True
    return abs(d / ref), False
