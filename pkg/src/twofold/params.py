"""Method constants for the table-driven exponential cores.

The argument is decomposed as x = 2**L * m + n * 2**-K + y with integers
m, n of the sign of x and |y| <= 2**-(K+1); the residual y feeds a
degree-N Taylor-Horner evaluation normalized by N!.  The expm1 core uses
its own finer grid (K_m1, N_m1) and drops the coarse 2**L stride.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ExpParams", "PARAMS64", "PARAMS32", "params_for_width"]


@dataclass(frozen=True)
class ExpParams:
    width: int             # 32 or 64
    p: int                 # significand bits
    L: int                 # coarse stride log2 for exp
    K_exp: int             # fine grid log2 for exp
    N_exp: int             # Taylor degree for exp
    K_m1: int              # fine grid log2 for expm1
    N_m1: int              # Taylor degree for expm1
    lo_bound: float        # nearest value at or below ln(2**min_exp)
    hi_bound: float        # nearest value at or above ln(2**max_exp)
    m_min: int             # coarse index range for the E table
    m_max: int
    n_min: int             # fine index range for the C table
    n_max: int
    n_m1_max: int          # fine index bound for the expm1 C table
    min_normal: float
    error_floor: float     # below this |result| the error part saturates

    @property
    def e_count(self) -> int:
        return self.m_max - self.m_min + 1

    @property
    def c_count(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def c_m1_count(self) -> int:
        return 2 * self.n_m1_max + 1

    def taylor_coeffs_exp(self) -> tuple[float, ...]:
        """N!/k! for k = N..0, all exactly representable."""
        n = self.N_exp
        f = math.factorial(n)
        return tuple(float(f // math.factorial(k)) for k in range(n, -1, -1))

    def taylor_coeffs_expm1(self) -> tuple[float, ...]:
        """N!/k! for k = N..1; the constant term is dropped and the result
        is rescaled by a coupled 1/N!."""
        n = self.N_m1
        f = math.factorial(n)
        return tuple(float(f // math.factorial(k)) for k in range(n, 0, -1))


PARAMS64 = ExpParams(
    width=64,
    p=53,
    L=2,
    K_exp=5,
    N_exp=12,
    K_m1=7,
    N_m1=10,
    lo_bound=float.fromhex("-0x1.74385446d71c4p+9"),   # <= ln 2**-1074
    hi_bound=float.fromhex("0x1.62e42fefa39f0p+9"),    # >= ln 2**1024
    m_min=-186,
    m_max=177,
    n_min=-128,
    n_max=128,
    n_m1_max=89,
    min_normal=2.0 ** -1022,
    error_floor=2.0 ** (-1022 + 53),
)

PARAMS32 = ExpParams(
    width=32,
    p=24,
    L=1,
    K_exp=5,
    N_exp=6,
    K_m1=7,
    N_m1=5,
    lo_bound=float.fromhex("-0x1.9d1da0p+6"),          # <= ln 2**-149
    hi_bound=float.fromhex("0x1.62e430p+6"),           # >= ln 2**128
    m_min=-51,
    m_max=44,
    n_min=-64,
    n_max=64,
    n_m1_max=89,
    min_normal=2.0 ** -126,
    error_floor=2.0 ** (-126 + 24),
)


def params_for_width(width: int) -> ExpParams:
    if width == 64:
        return PARAMS64
    if width == 32:
        return PARAMS32
    raise ValueError(f"unsupported width {width!r}; expected 32 or 64")
