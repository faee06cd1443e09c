"""The public twofold exponent/logarithm surface.

Twenty functions per float width.  The t-prefixed ones guarantee the value
part bitwise-reproduces the process's standard math library call on the
argument's value part, with the error part assessing the deviation from
the exact result; the p-prefixed ones return renormalized (coupled)
results without the bitwise guarantee.  Suffix 0 marks functions of a
plain (dotted) argument, suffix p functions of a coupled argument.

Logarithms invert the exponential cores with one Newton step seeded by
the standard library logarithm; exp(x) and expm1(x) have
f''/(2 f') == 1/2, so a single step reaches twofold accuracy whenever the
seed is sane (a second step covers a grossly-off seed).
"""

from __future__ import annotations

import math
from functools import lru_cache

from . import eft, eft32
from ._fp import libm32, libm64, r32
from .eft import Twofold
from .expcore import ExpEngine
from .params import params_for_width
from .tables import packaged_tables

__all__ = [
    "ExpLog",
    "api",
    "get_function",
    "FAMILIES",
    "FUNCTION_NAMES",
    "DOTTED_ARG",
    "COUPLED_ARG",
    "TWOFOLD_ARG",
    "family_of",
]

_NAN = math.nan
_INF = math.inf
_isinf = math.isinf

FAMILIES = {
    "exp": ("pexp0", "texp0", "texp", "texpp", "pexp"),
    "expm1": ("pexpm10", "texpm10", "texpm1", "texpm1p", "pexpm1"),
    "log": ("plog0", "tlog0", "tlogp", "tlog", "plog"),
    "log1p": ("plog1p0", "tlog1p0", "tlog1pp", "tlog1p", "plog1p"),
}
FUNCTION_NAMES = tuple(name for fam in FAMILIES.values() for name in fam)
DOTTED_ARG = frozenset(n for n in FUNCTION_NAMES if n.endswith("0"))
COUPLED_ARG = frozenset(("texpp", "pexp", "texpm1p", "pexpm1", "tlogp", "plog", "tlog1pp", "plog1p"))
TWOFOLD_ARG = frozenset(("texp", "texpm1", "tlog", "tlog1p"))

_NEWTON_TOL = 2.0 ** -20


def family_of(name: str) -> str:
    for fam, names in FAMILIES.items():
        if name in names:
            return fam
    raise ValueError(f"unknown function {name!r}")


def _ident(x: float) -> float:
    return x


class ExpLog:
    """Twofold exponent and logarithm functions for one float width."""

    def __init__(self, width: int, backend: str | None = None):
        params = params_for_width(width)
        tables = packaged_tables(width)
        eftm = eft if width == 64 else eft32
        ar = eftm.arith(backend)
        self.width = width
        self.backend = ar.backend
        self.params = params
        self._eftm = eftm
        self._ar = ar
        self._engine = ExpEngine(params, tables, ar, eftm)
        lib = libm64 if width == 64 else libm32()
        self._exp = lib.exp
        self._expm1 = lib.expm1
        self._log = lib.log
        self._log1p = lib.log1p
        self._ln2 = tables.ln2
        if width == 64:
            self._rnd = _ident
            self._ldexp = math.ldexp
        else:
            self._rnd = r32
            self._ldexp = lambda v, n: r32(math.ldexp(v, n))

    def _quant(self, x: float) -> float:
        return self._rnd(float(x))

    # -- exponent family -----------------------------------------------------

    def pexp0(self, x0: float) -> Twofold:
        """Coupled e**x0; (0, 0) below the domain, (+inf, +inf) above."""
        return self._eftm.renorm_fast(self._engine.pexp0_raw(self._quant(x0)))

    def texp0(self, x0: float) -> Twofold:
        """Twofold e**x0 with value == library exp(x0) bitwise."""
        x0 = self._quant(x0)
        v0, v1 = self._engine.pexp0_raw(x0)
        z0 = self._exp(x0)
        if z0 == v0 and _isinf(z0):
            return Twofold(z0, z0)
        rnd = self._rnd
        return Twofold(z0, rnd(rnd(v0 - z0) + v1))

    def texp(self, x) -> Twofold:
        """Twofold e**(x0+x1) with value == library exp(x0) bitwise."""
        x0 = self._quant(x[0])
        x1 = self._quant(x[1])
        v0, v1 = self._engine.pexp0_raw(x0)
        z0 = self._exp(x0)
        if z0 == v0 and _isinf(z0):
            return Twofold(z0, z0)
        t1 = self._expm1(x1)
        rnd = self._rnd
        return Twofold(z0, rnd(rnd(z0 * t1) + rnd(v1 + rnd(v0 - z0))))

    def texpp(self, x) -> Twofold:
        """texp for a coupled argument (coupled-ness is not exploited)."""
        return self.texp(x)

    def pexp(self, x) -> Twofold:
        """Coupled e**(x0+x1) of a coupled argument."""
        return self._eftm.renorm_fast(self.texpp(x))

    def pexpm10(self, x0: float) -> Twofold:
        """Coupled e**x0 - 1."""
        return self._eftm.renorm_fast(self._engine.pexpm10_raw(self._quant(x0)))

    def texpm10(self, x0: float) -> Twofold:
        """Twofold e**x0 - 1 with value == library expm1(x0) bitwise."""
        x0 = self._quant(x0)
        w0, w1 = self._engine.pexpm10_raw(x0)
        z0 = self._expm1(x0)
        if z0 == w0 and _isinf(z0):
            return Twofold(z0, z0)
        rnd = self._rnd
        return Twofold(z0, rnd(rnd(w0 - z0) + w1))

    def texpm1(self, x) -> Twofold:
        """Twofold e**(x0+x1) - 1 with value == library expm1(x0) bitwise."""
        x0 = self._quant(x[0])
        x1 = self._quant(x[1])
        w0, w1 = self._engine.pexpm10_raw(x0)
        z0 = self._expm1(x0)
        if z0 == w0 and _isinf(z0):
            return Twofold(z0, z0)
        t1 = self._expm1(x1)
        rnd = self._rnd
        tail = rnd(w1 + rnd(w0 - z0))
        return Twofold(z0, rnd(rnd(rnd(z0 + 1.0) * t1) + tail))

    def texpm1p(self, x) -> Twofold:
        return self.texpm1(x)

    def pexpm1(self, x) -> Twofold:
        return self._eftm.renorm_fast(self.texpm1p(x))

    # -- logarithm family --------------------------------------------------------

    def _newton_log_z(self, z0: float, z1: float, r0: float) -> float:
        """One Newton correction for ln at z = z0 + z1, seed r0.

        Evaluates z * s + (z - 1) with s = pexpm10(-r0) in twofold
        arithmetic; z0 - 1 is exact by Sterbenz for z0 in [1/2, 2].
        """
        ar = self._ar
        s = self._engine.pexpm10_raw(-r0)
        zm1 = self._rnd(z0 - 1.0)
        if z1 == 0.0:
            u = ar.t_add_d(ar.t_mul_d(s, z0), zm1)
        else:
            # z - 1 renormalized so the cancellation against z*s happens
            # in the value channel, where two_sum keeps it exactly
            w = self._eftm.fast_two_sum(zm1, z1)
            u = ar.t_add(ar.t_mul(Twofold(z0, z1), s), w)
        return self._rnd(u[0] + u[1])

    def _log_core(self, y0: float, y1: float) -> Twofold:
        """Unrenormalized twofold ln(y0 + y1) for a coupled-like input."""
        if y0 < 0.5 or y0 > 2.0:
            z0, n = math.frexp(y0)
            z1 = self._ldexp(y1, -n) if y1 != 0.0 else 0.0
        else:
            z0, z1, n = y0, y1, 0
        rnd = self._rnd
        if y1 == 0.0 and z1 == 0.0:
            r0 = self._log(z0)
        else:
            r0 = self._log1p(rnd(rnd(z0 - 1.0) + z1))
        r1 = self._newton_log_z(z0, z1, r0)
        if abs(r1) > _NEWTON_TOL * abs(r0) + _NEWTON_TOL:
            # library seed was grossly off; one more iteration
            r0 = rnd(r0 + r1)
            r1 = self._newton_log_z(z0, z1, r0)
        if n == 0:
            return Twofold(r0, r1)
        n_ln2 = self._ar.t_mul_d(self._ln2, float(n))
        return self._ar.t_add(Twofold(r0, r1), n_ln2)

    def _plog0_raw(self, y0: float) -> Twofold:
        return self._log_core(y0, 0.0)

    def _plog_raw(self, y) -> Twofold:
        return self._log_core(y[0], y[1])

    def _correct(self, core: Twofold, lib0: float) -> Twofold:
        # replace the value part by the library result, folding the
        # difference into the error part; the subtraction is exact by
        # Sterbenz whenever both approximate the same logarithm
        if _isinf(lib0) and core[0] == lib0:
            return Twofold(lib0, lib0)
        rnd = self._rnd
        return Twofold(lib0, rnd(core[1] + rnd(core[0] - lib0)))

    def plog0(self, y0: float) -> Twofold:
        """Coupled ln(y0); (-inf, -inf) at zero, NaN pair below it."""
        y0 = self._quant(y0)
        if y0 == 0.0:
            return Twofold(-_INF, -_INF)
        if y0 == _INF:
            return Twofold(_INF, _INF)
        return self._eftm.renorm_fast(self._plog0_raw(y0))

    def tlog0(self, y0: float) -> Twofold:
        """Twofold ln(y0) with value == library log(y0) bitwise."""
        y0 = self._quant(y0)
        return self._correct(self._plog0_raw(y0), self._log(y0))

    def tlogp(self, y) -> Twofold:
        """Twofold ln of a coupled argument; value == library log(y0)."""
        y = Twofold(self._quant(y[0]), self._quant(y[1]))
        return self._correct(self._plog_raw(y), self._log(y[0]))

    def tlog(self, y) -> Twofold:
        """Twofold ln of any twofold; value == library log(y0) even when
        renormalization changes the leading part."""
        y0 = self._quant(y[0])
        v = self._eftm.renorm(Twofold(y0, self._quant(y[1])))
        return self._correct(self._plog_raw(v), self._log(y0))

    def plog(self, y) -> Twofold:
        """Coupled ln of a coupled argument."""
        y = Twofold(self._quant(y[0]), self._quant(y[1]))
        if y[0] == 0.0:
            return Twofold(-_INF, -_INF)
        if y[0] == _INF:
            return Twofold(_INF, _INF)
        return self._eftm.renorm_fast(self._plog_raw(y))

    def _newton_log1p_in_band(self, y0: float, y1: float, x0: float) -> float:
        """Newton correction for ln(1+y), -1/2 <= y0 <= 1, seed x0.

        In-band formula (1+y)*s + y with s = pexpm10(-x0); the twofold
        1 + y0 from fast_two_sum is exact since |y0| <= 1.
        """
        ar = self._ar
        s = self._engine.pexpm10_raw(-x0)
        if y1 == 0.0:
            w = self._eftm.fast_two_sum(1.0, y0)
            u = ar.t_add_d(ar.t_mul(w, s), y0)
        else:
            ys = ar.t_mul(Twofold(y0, y1), s)
            u = ar.t_add(ar.t_add(ys, Twofold(y0, y1)), s)
        return self._rnd(u[0] + u[1])

    def _log1p_core(self, y0: float, y1: float) -> Twofold:
        x0 = self._log1p(y0)
        x1 = self._newton_log1p_in_band(y0, y1, x0)
        if abs(x1) > _NEWTON_TOL * abs(x0) + _NEWTON_TOL:
            x0 = self._rnd(x0 + x1)
            x1 = self._newton_log1p_in_band(y0, y1, x0)
        return Twofold(x0, x1)

    def _plog1p0_raw(self, y0: float) -> Twofold:
        if y0 < -0.5 or y0 > 1.0:
            v = self._eftm.renorm(Twofold(1.0, y0))
            return self._plog_raw(v)
        return self._log1p_core(y0, 0.0)

    def _plog1p_raw(self, y) -> Twofold:
        if y[0] < -0.5 or y[0] > 1.0:
            w = self._eftm.renorm(self._ar.t_add_d(y, 1.0))
            return self.tlogp(w)
        return self._log1p_core(y[0], y[1])

    def plog1p0(self, y0: float) -> Twofold:
        """Coupled ln(1+y0); (-inf, -inf) at -1, NaN pair below it."""
        y0 = self._quant(y0)
        if y0 == -1.0:
            return Twofold(-_INF, -_INF)
        if y0 == _INF:
            return Twofold(_INF, _INF)
        return self._eftm.renorm_fast(self._plog1p0_raw(y0))

    def tlog1p0(self, y0: float) -> Twofold:
        """Twofold ln(1+y0) with value == library log1p(y0) bitwise."""
        y0 = self._quant(y0)
        return self._correct(self._plog1p0_raw(y0), self._log1p(y0))

    def tlog1pp(self, y) -> Twofold:
        y = Twofold(self._quant(y[0]), self._quant(y[1]))
        return self._correct(self._plog1p_raw(y), self._log1p(y[0]))

    def tlog1p(self, y) -> Twofold:
        y0 = self._quant(y[0])
        v = self._eftm.renorm(Twofold(y0, self._quant(y[1])))
        return self._correct(self._plog1p_raw(v), self._log1p(y0))

    def plog1p(self, y) -> Twofold:
        y = Twofold(self._quant(y[0]), self._quant(y[1]))
        if y[0] == -1.0 and y[1] == 0.0:
            return Twofold(-_INF, -_INF)
        if y[0] == _INF:
            return Twofold(_INF, _INF)
        return self._eftm.renorm_fast(self._plog1p_raw(y))

    def function(self, name: str):
        if name not in FUNCTION_NAMES:
            raise ValueError(f"unknown function {name!r}")
        return getattr(self, name)


@lru_cache(maxsize=None)
def _api_cached(width: int, backend: str) -> ExpLog:
    return ExpLog(width, backend)


def api(width: int, backend: str | None = None) -> ExpLog:
    """Cached function surface for (width, backend)."""
    if backend is None:
        backend = eft.get_default_backend()
    elif backend not in ("fma", "dv"):
        raise ValueError(f"unknown backend {backend!r}")
    return _api_cached(width, backend)


def get_function(name: str, width: int, backend: str | None = None):
    """Resolve one of the twenty function names for a width."""
    return api(width, backend).function(name)
