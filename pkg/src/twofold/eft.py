"""Error-free transformations and twofold arithmetic, binary64 lane.

A twofold is a pair (value, error) of same-format floats standing for the
real number value + error.  The value part always equals the plain
floating-point result of the operation on the operands' value parts; the
error part assesses how far that value deviates from the exact result.
A coupled twofold is additionally renormalized so that rounding
value + error to working precision returns exactly value.

Two interchangeable backends provide the exact-product residual: "fma"
uses a single-rounding fused multiply-add, "dv" uses Dekker-Veltkamp
splitting and never calls a fused routine.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

from . import _fp
from ._fp import div64, fma64, sqrt64

__all__ = [
    "Twofold",
    "SplitPair",
    "fast_two_sum",
    "two_sum",
    "two_diff",
    "split",
    "two_prod_fma",
    "two_prod_dv",
    "fma_sim",
    "renorm_fast",
    "renorm",
    "Arith",
    "arith",
    "t_add",
    "t_add_d",
    "t_mul",
    "t_mul_d",
    "t_div",
    "t_sqrt",
    "set_default_backend",
    "get_default_backend",
]

_isfinite = math.isfinite
_NAN = math.nan


class Twofold(NamedTuple):
    """Unevaluated sum value + error; error may have any magnitude."""

    value: float
    error: float


class SplitPair(NamedTuple):
    """Exact split x == hi + lo, each part holding at most ceil(p/2) bits."""

    hi: float
    lo: float


def _special(v: float, *operands: float) -> Twofold:
    # Non-finite value: mirror it into the error field instead of doing
    # Sterbenz arithmetic on infinities.  NaN anywhere in the operands
    # keeps poisoning the error part.
    if v != v:
        return Twofold(v, v)
    for f in operands:
        if f != f:
            return Twofold(v, _NAN)
    return Twofold(v, v)


def fast_two_sum(a: float, b: float) -> Twofold:
    """Exact a + b as value + error; requires |a| >= |b| or a == 0."""
    s = a + b
    if _isfinite(s):
        return Twofold(s, b - (s - a))
    return _special(s, a, b)


def two_sum(a: float, b: float) -> Twofold:
    """Exact a + b as value + error, no magnitude precondition."""
    s = a + b
    if _isfinite(s):
        bp = s - a
        ap = s - bp
        return Twofold(s, (a - ap) + (b - bp))
    return _special(s, a, b)


def two_diff(a: float, b: float) -> Twofold:
    """Exact a - b as value + error (corrected six-step sequence)."""
    d = a - b
    if not _isfinite(d):
        return _special(d, a, b)
    bp = d - a
    ap = d - bp
    bs = b + bp        # the sign here is what the pre-fix variant broke
    as_ = a - ap
    return Twofold(d, as_ - bs)


_SPLITTER = 134217729.0          # 2**27 + 1
_SPLIT_BIG = 2.0 ** 996          # above this, (2**27+1)*x overflows
_SPLIT_DOWN = 2.0 ** -28
_SPLIT_UP = 2.0 ** 28
_HI_TOP = 2.0 ** 996             # scaled hi that would overflow on rescale


def split(x: float) -> SplitPair:
    """Dekker split of x into 26+27-bit halves, exact: hi + lo == x."""
    if abs(x) > _SPLIT_BIG:
        xs = x * _SPLIT_DOWN     # exact scaling keeps the split total
        a = _SPLITTER * xs
        b = a - xs
        h = a - b
        if abs(h) == _HI_TOP:
            # rescaling 2**996 would overflow; shed one ulp26 into lo
            h = math.copysign(_HI_TOP - 2.0 ** 970, h)
        return SplitPair(h * _SPLIT_UP, (xs - h) * _SPLIT_UP)
    a = _SPLITTER * x
    b = a - x
    h = a - b
    return SplitPair(h, x - h)


def two_prod_fma(x: float, y: float) -> Twofold:
    """Exact x*y as value + error via the fused residual fma(x, y, -xy)."""
    v = x * y
    if _isfinite(v):
        return Twofold(v, fma64(x, y, -v))
    return _special(v, x, y)


def two_prod_dv(x: float, y: float) -> Twofold:
    """Exact x*y as value + error via Dekker-Veltkamp, no fused ops."""
    v = x * y
    if not _isfinite(v):
        return _special(v, x, y)
    xh, xl = split(x)
    yh, yl = split(y)
    e0 = v - xh * yh
    e1 = e0 - xh * yl
    e2 = e1 - xl * yh
    return Twofold(v, xl * yl - e2)


def fma_sim(x: float, y: float, z: float) -> float:
    """fl(x*y + z) rounded once, for x*y and z of opposite sign with
    |z|/2 <= |x*y| <= 2|z| (the exact-remainder case); no fused ops."""
    p, t = two_prod_dv(x, y)
    if __debug__ and _isfinite(p) and p != 0.0 and z != 0.0:
        assert (p > 0.0) != (z > 0.0) and abs(z) * 0.5 <= abs(p) <= 2.0 * abs(z), (
            "fma_sim precondition violated"
        )
    return (z + p) + t           # z + p exact by Sterbenz


def renorm_fast(x: Twofold) -> Twofold:
    """Renormalize to coupled form; requires |value| >= |error| or value == 0."""
    return fast_two_sum(x[0], x[1])


def renorm(x: Twofold) -> Twofold:
    """Renormalize any twofold to coupled form; NaN poisons both fields."""
    s, e = two_sum(x[0], x[1])
    return fast_two_sum(s, e)


# --- twofold arithmetic ---------------------------------------------------
#
# The value part is always the plain float op on the value parts.  The
# dotted-operand variants use the cheap mixed sequences: sum with a dotted
# addend costs 7 basic ops, product by a dotted factor 2 muls, a fused
# residual and 1 add.


def t_add(x: Twofold, y: Twofold) -> Twofold:
    s = x[0] + y[0]
    if not _isfinite(s):
        return _special(s, x[0], x[1], y[0], y[1])
    bp = s - x[0]
    ap = s - bp
    e = (x[0] - ap) + (y[0] - bp)
    return Twofold(s, e + (x[1] + y[1]))


def t_add_d(x: Twofold, b: float) -> Twofold:
    s = x[0] + b
    if not _isfinite(s):
        return _special(s, x[0], x[1], b)
    bp = s - x[0]
    ap = s - bp
    e = (x[0] - ap) + (b - bp)
    return Twofold(s, e + x[1])


def _make_arith(
    name: str,
    prod_err: Callable[[float, float, float], float],
    rem: Callable[[float, float, float], float],
) -> "Arith":
    def t_mul(x: Twofold, y: Twofold) -> Twofold:
        v = x[0] * y[0]
        if not _isfinite(v):
            return _special(v, x[0], x[1], y[0], y[1])
        e = prod_err(x[0], y[0], v)
        return Twofold(v, e + (x[0] * y[1] + x[1] * y[0]))

    def t_mul_d(x: Twofold, b: float) -> Twofold:
        v = x[0] * b
        if not _isfinite(v):
            return _special(v, x[0], x[1], b)
        e = prod_err(x[0], b, v)
        return Twofold(v, x[1] * b + e)

    def t_div(x: Twofold, y: Twofold) -> Twofold:
        q = div64(x[0], y[0])
        if not _isfinite(q):
            return _special(q, x[0], x[1], y[0], y[1])
        r = rem(q, y[0], x[0])   # x0 - q*y0, exact
        return Twofold(q, div64(r + (x[1] - q * y[1]), y[0]))

    def t_sqrt(x: Twofold) -> Twofold:
        q = sqrt64(x[0])
        if not _isfinite(q):
            return _special(q, x[0], x[1])
        if x[0] == 0.0:
            return Twofold(q, 0.0)
        r = rem(q, q, x[0])      # x0 - q*q, exact
        return Twofold(q, (r + x[1]) / (q + q))

    return Arith(name, t_add, t_add_d, t_mul, t_mul_d, t_div, t_sqrt, prod_err, rem)


class Arith(NamedTuple):
    """Twofold arithmetic bound to one exact-residual backend."""

    backend: str
    t_add: Callable[[Twofold, Twofold], Twofold]
    t_add_d: Callable[[Twofold, float], Twofold]
    t_mul: Callable[[Twofold, Twofold], Twofold]
    t_mul_d: Callable[[Twofold, float], Twofold]
    t_div: Callable[[Twofold, Twofold], Twofold]
    t_sqrt: Callable[[Twofold], Twofold]
    prod_err: Callable[[float, float, float], float]
    rem: Callable[[float, float, float], float]


def _prod_err_fma(x: float, y: float, v: float) -> float:
    return fma64(x, y, -v)


def _prod_err_dv(x: float, y: float, v: float) -> float:
    xh, xl = split(x)
    yh, yl = split(y)
    e0 = v - xh * yh
    e1 = e0 - xh * yl
    e2 = e1 - xl * yh
    return xl * yl - e2


def _rem_fma(q: float, b: float, a: float) -> float:
    return fma64(-q, b, a)


def _rem_dv(q: float, b: float, a: float) -> float:
    return fma_sim(-q, b, a)


_ARITHS = {
    "fma": _make_arith("fma", _prod_err_fma, _rem_fma),
    "dv": _make_arith("dv", _prod_err_dv, _rem_dv),
}

_default_backend = _fp.default_backend_name()


def arith(backend: str | None = None) -> Arith:
    """Arithmetic bundle for the given backend ("fma" or "dv")."""
    key = _default_backend if backend is None else backend
    try:
        return _ARITHS[key]
    except KeyError:
        raise ValueError(f"unknown backend {key!r}; expected 'fma' or 'dv'") from None


def set_default_backend(backend: str) -> None:
    """Runtime override of the backend picked at import time."""
    global _default_backend
    if backend not in _ARITHS:
        raise ValueError(f"unknown backend {backend!r}; expected 'fma' or 'dv'")
    _default_backend = backend


def get_default_backend() -> str:
    return _default_backend


def t_mul(x: Twofold, y: Twofold) -> Twofold:
    return _ARITHS[_default_backend].t_mul(x, y)


def t_mul_d(x: Twofold, b: float) -> Twofold:
    return _ARITHS[_default_backend].t_mul_d(x, b)


def t_div(x: Twofold, y: Twofold) -> Twofold:
    return _ARITHS[_default_backend].t_div(x, y)


def t_sqrt(x: Twofold) -> Twofold:
    return _ARITHS[_default_backend].t_sqrt(x)
