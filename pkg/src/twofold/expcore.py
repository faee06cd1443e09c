"""Coupled-precision exponential cores: argument decomposition, table
lookup, and normalized Taylor-Horner evaluation.

pexp0 evaluates e**x as E * (C * T) where E and C come from coupled
tables and T = e**y * N! is a Taylor polynomial with integer coefficients
N!/k!, all exactly representable.  pexpm10 evaluates e**x - 1 over the
finer grid as C*T + (C + T) with C ~ e**c - 1 tabulated and
T ~ e**y - 1 from the constant-free Horner sum rescaled by a coupled
1/N!.  Both decompositions are exact in floating point.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .eft import Arith, Twofold
from .params import ExpParams
from .tables import ExpTables

__all__ = ["ExpDecomposition", "decompose_exp", "decompose_expm1", "ExpEngine"]

_NAN = math.nan
_INF = math.inf


class ExpDecomposition(NamedTuple):
    """x == 2**L * m + n * 2**-K + y, exactly."""

    m: int
    n: int
    y: float


def decompose_exp(x: float, params: ExpParams) -> ExpDecomposition:
    """Split an in-domain x over the coarse/fine exponent grid.

    The scaling by 2**K and the subtraction are exact for any x between
    the domain bounds, so the reconstruction identity holds with no
    rounding.  Integer m carries the upper bits of round(x * 2**K), n the
    lower L+K bits, both with the sign of x; |y| <= 2**-(K+1).
    """
    k_scale = float(1 << params.K_exp)
    m_big = round(x * k_scale)
    y = x - m_big / k_scale          # exact (Sterbenz)
    span = 1 << (params.L + params.K_exp)
    a = abs(m_big)
    if m_big >= 0:
        return ExpDecomposition(a // span, a % span, y)
    return ExpDecomposition(-(a // span), -(a % span), y)


def decompose_expm1(x: float, params: ExpParams) -> ExpDecomposition:
    """Split |x| <= ln 2 over the fine expm1 grid; m is always 0."""
    k_scale = float(1 << params.K_m1)
    n = round(x * k_scale)
    y = x - n / k_scale              # exact (Sterbenz)
    return ExpDecomposition(0, n, y)


class ExpEngine:
    """pexp0/pexpm10 cores bound to one width, table set and backend."""

    def __init__(self, params: ExpParams, tables: ExpTables, ar: Arith, eftm):
        self.params = params
        self.tables = tables
        self.ar = ar
        self.eftm = eftm
        self._coeffs_exp = params.taylor_coeffs_exp()
        self._coeffs_m1 = params.taylor_coeffs_expm1()
        self._dotted_steps = 3 if params.width == 64 else 2
        self._ln2 = tables.ln2.value
        if params.width == 64:
            self._rnd = None
        else:
            from ._fp import r32

            self._rnd = r32

    # -- Taylor-Horner cores --------------------------------------------------

    def _seed(self, y: float, coeffs) -> float:
        # top Horner steps in plain 1x arithmetic; their rounding shrinks
        # by a factor y per remaining step and stays far below target
        top = self._dotted_steps
        rnd = self._rnd
        if rnd is None:
            s = y + coeffs[1]
            for a in coeffs[2 : top + 1]:
                s = s * y + a
            return s
        s = rnd(y + coeffs[1])
        for a in coeffs[2 : top + 1]:
            s = rnd(rnd(s * y) + a)
        return s

    def taylor_exp(self, y: float) -> Twofold:
        """Twofold e**y * N! for |y| <= 2**-(K+1)."""
        coeffs = self._coeffs_exp
        t = Twofold(self._seed(y, coeffs), 0.0)
        t_mul_d = self.ar.t_mul_d
        t_add_d = self.ar.t_add_d
        for a in coeffs[self._dotted_steps + 1 :]:
            t = t_add_d(t_mul_d(t, y), a)
        return t

    def taylor_expm1(self, y: float) -> Twofold:
        """Twofold e**y - 1 for |y| <= 2**-(K_m1+1)."""
        coeffs = self._coeffs_m1
        t = Twofold(self._seed(y, coeffs), 0.0)
        t_mul_d = self.ar.t_mul_d
        t_add_d = self.ar.t_add_d
        for a in coeffs[self._dotted_steps + 1 :]:
            t = t_add_d(t_mul_d(t, y), a)
        t = t_mul_d(t, y)            # no constant term
        return self.ar.t_mul(t, self.tables.inv_fact_m1)

    # -- cores ------------------------------------------------------------------

    def pexp0_raw(self, x: float) -> Twofold:
        """e**x as an unrenormalized twofold; saturates outside the domain."""
        p = self.params
        if x != x:
            return Twofold(_NAN, _NAN)
        if x < p.lo_bound:
            return Twofold(0.0, 0.0)
        if x > p.hi_bound:
            return Twofold(_INF, _INF)
        m, n, y = decompose_exp(x, p)
        e_pair = self.tables.e.lookup(m)
        c_pair = self.tables.c.lookup(n)
        t = self.taylor_exp(y)
        return self.ar.t_mul(e_pair, self.ar.t_mul(c_pair, t))

    def pexp0(self, x: float) -> Twofold:
        return self.eftm.renorm_fast(self.pexp0_raw(x))

    def pexpm10_raw(self, x: float) -> Twofold:
        """e**x - 1 as an unrenormalized twofold."""
        if x != x:
            return Twofold(_NAN, _NAN)
        if abs(x) <= self._ln2:
            _, n, y = decompose_expm1(x, self.params)
            c_pair = self.tables.c_m1.lookup(n)
            t = self.taylor_expm1(y)
            return self.ar.t_add(self.ar.t_mul(c_pair, t), self.ar.t_add(c_pair, t))
        return self.ar.t_add_d(self.pexp0_raw(x), -1.0)

    def pexpm10(self, x: float) -> Twofold:
        return self.eftm.renorm_fast(self.pexpm10_raw(x))
