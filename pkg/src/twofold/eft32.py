"""Error-free transformations and twofold arithmetic, binary32 lane.

Same contracts as :mod:`twofold.eft`, with every step narrowed to
binary32 through :func:`twofold._fp.r32`.  Values are Python floats that
are always exact binary32 numbers; narrowing each double-precision op is
equivalent to native single-precision arithmetic for the operations used
here.
"""

from __future__ import annotations

import math
from typing import Callable

from ._fp import div32, fma32, r32, sqrt32
from .eft import Arith, SplitPair, Twofold, _special

__all__ = [
    "fast_two_sum",
    "two_sum",
    "two_diff",
    "split",
    "two_prod_fma",
    "two_prod_dv",
    "fma_sim",
    "renorm_fast",
    "renorm",
    "arith",
    "t_add",
    "t_add_d",
]

_isfinite = math.isfinite


def fast_two_sum(a: float, b: float) -> Twofold:
    s = r32(a + b)
    if _isfinite(s):
        return Twofold(s, r32(b - r32(s - a)))
    return _special(s, a, b)


def two_sum(a: float, b: float) -> Twofold:
    s = r32(a + b)
    if _isfinite(s):
        bp = r32(s - a)
        ap = r32(s - bp)
        return Twofold(s, r32(r32(a - ap) + r32(b - bp)))
    return _special(s, a, b)


def two_diff(a: float, b: float) -> Twofold:
    d = r32(a - b)
    if not _isfinite(d):
        return _special(d, a, b)
    bp = r32(d - a)
    ap = r32(d - bp)
    bs = r32(b + bp)
    as_ = r32(a - ap)
    return Twofold(d, r32(as_ - bs))


_SPLITTER = 4097.0               # 2**12 + 1
_SPLIT_BIG = 2.0 ** 115
_SPLIT_DOWN = 2.0 ** -13
_SPLIT_UP = 2.0 ** 13
_HI_TOP = 2.0 ** 115


def split(x: float) -> SplitPair:
    if abs(x) > _SPLIT_BIG:
        xs = r32(x * _SPLIT_DOWN)
        a = r32(_SPLITTER * xs)
        b = r32(a - xs)
        h = r32(a - b)
        if abs(h) == _HI_TOP:
            h = math.copysign(_HI_TOP - 2.0 ** 103, h)
        return SplitPair(r32(h * _SPLIT_UP), r32(r32(xs - h) * _SPLIT_UP))
    a = r32(_SPLITTER * x)
    b = r32(a - x)
    h = r32(a - b)
    return SplitPair(h, r32(x - h))


def two_prod_fma(x: float, y: float) -> Twofold:
    v = r32(x * y)
    if _isfinite(v):
        return Twofold(v, fma32(x, y, -v))
    return _special(v, x, y)


def two_prod_dv(x: float, y: float) -> Twofold:
    v = r32(x * y)
    if not _isfinite(v):
        return _special(v, x, y)
    xh, xl = split(x)
    yh, yl = split(y)
    e0 = r32(v - r32(xh * yh))
    e1 = r32(e0 - r32(xh * yl))
    e2 = r32(e1 - r32(xl * yh))
    return Twofold(v, r32(r32(xl * yl) - e2))


def fma_sim(x: float, y: float, z: float) -> float:
    p, t = two_prod_dv(x, y)
    if __debug__ and _isfinite(p) and p != 0.0 and z != 0.0:
        assert (p > 0.0) != (z > 0.0) and abs(z) * 0.5 <= abs(p) <= 2.0 * abs(z), (
            "fma_sim precondition violated"
        )
    return r32(r32(z + p) + t)


def renorm_fast(x: Twofold) -> Twofold:
    return fast_two_sum(x[0], x[1])


def renorm(x: Twofold) -> Twofold:
    s, e = two_sum(x[0], x[1])
    return fast_two_sum(s, e)


def t_add(x: Twofold, y: Twofold) -> Twofold:
    s = r32(x[0] + y[0])
    if not _isfinite(s):
        return _special(s, x[0], x[1], y[0], y[1])
    bp = r32(s - x[0])
    ap = r32(s - bp)
    e = r32(r32(x[0] - ap) + r32(y[0] - bp))
    return Twofold(s, r32(e + r32(x[1] + y[1])))


def t_add_d(x: Twofold, b: float) -> Twofold:
    s = r32(x[0] + b)
    if not _isfinite(s):
        return _special(s, x[0], x[1], b)
    bp = r32(s - x[0])
    ap = r32(s - bp)
    e = r32(r32(x[0] - ap) + r32(b - bp))
    return Twofold(s, r32(e + x[1]))


def _make_arith(
    name: str,
    prod_err: Callable[[float, float, float], float],
    rem: Callable[[float, float, float], float],
) -> Arith:
    def t_mul(x: Twofold, y: Twofold) -> Twofold:
        v = r32(x[0] * y[0])
        if not _isfinite(v):
            return _special(v, x[0], x[1], y[0], y[1])
        e = prod_err(x[0], y[0], v)
        return Twofold(v, r32(e + r32(r32(x[0] * y[1]) + r32(x[1] * y[0]))))

    def t_mul_d(x: Twofold, b: float) -> Twofold:
        v = r32(x[0] * b)
        if not _isfinite(v):
            return _special(v, x[0], x[1], b)
        e = prod_err(x[0], b, v)
        return Twofold(v, r32(r32(x[1] * b) + e))

    def t_div(x: Twofold, y: Twofold) -> Twofold:
        q = div32(x[0], y[0])
        if not _isfinite(q):
            return _special(q, x[0], x[1], y[0], y[1])
        r = rem(q, y[0], x[0])
        return Twofold(q, div32(r32(r + r32(x[1] - r32(q * y[1]))), y[0]))

    def t_sqrt(x: Twofold) -> Twofold:
        q = sqrt32(x[0])
        if not _isfinite(q):
            return _special(q, x[0], x[1])
        if x[0] == 0.0:
            return Twofold(q, 0.0)
        r = rem(q, q, x[0])
        return Twofold(q, div32(r32(r + x[1]), r32(q + q)))

    return Arith(name, t_add, t_add_d, t_mul, t_mul_d, t_div, t_sqrt, prod_err, rem)


def _prod_err_fma(x: float, y: float, v: float) -> float:
    return fma32(x, y, -v)


def _prod_err_dv(x: float, y: float, v: float) -> float:
    xh, xl = split(x)
    yh, yl = split(y)
    e0 = r32(v - r32(xh * yh))
    e1 = r32(e0 - r32(xh * yl))
    e2 = r32(e1 - r32(xl * yh))
    return r32(r32(xl * yl) - e2)


def _rem_fma(q: float, b: float, a: float) -> float:
    return fma32(-q, b, a)


def _rem_dv(q: float, b: float, a: float) -> float:
    return fma_sim(-q, b, a)


_ARITHS = {
    "fma": _make_arith("fma", _prod_err_fma, _rem_fma),
    "dv": _make_arith("dv", _prod_err_dv, _rem_dv),
}


def arith(backend: str | None = None) -> Arith:
    from . import eft

    key = eft.get_default_backend() if backend is None else backend
    try:
        return _ARITHS[key]
    except KeyError:
        raise ValueError(f"unknown backend {key!r}; expected 'fma' or 'dv'") from None
