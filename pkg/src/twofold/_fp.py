"""Low-level IEEE-754 plumbing shared by the binary64 and binary32 lanes.

Binary64 values are ordinary Python floats.  Binary32 values are Python
floats constrained to the binary32 subset; every arithmetic step narrows
through :func:`r32`, which is equivalent to native single-precision
arithmetic for +, -, *, / and sqrt because 53 >= 2*24 + 2 makes the
double rounding innocuous.
"""

from __future__ import annotations

import math
import os
import struct

__all__ = [
    "P64",
    "P32",
    "MIN_NORMAL64",
    "MIN_NORMAL32",
    "ERROR_FLOOR64",
    "ERROR_FLOOR32",
    "r32",
    "fma64",
    "fma32",
    "HAVE_NATIVE_FMA",
    "div64",
    "div32",
    "sqrt64",
    "sqrt32",
    "ulp64",
    "ulp32",
    "bits64",
    "assert_round_to_nearest",
    "libm64",
    "libm32",
]

P64 = 53
P32 = 24
MIN_NORMAL64 = 2.0 ** -1022
MIN_NORMAL32 = 2.0 ** -126
# Below these magnitudes a double/float error field cannot hold a full
# extra p bits (the deviation itself falls into the subnormal range).
ERROR_FLOOR64 = 2.0 ** (-1022 + P64)
ERROR_FLOOR32 = 2.0 ** (-126 + P32)

_PACK32 = struct.Struct("<f").pack
_UNPACK32 = struct.Struct("<f").unpack
_PACK64 = struct.Struct("<d").pack

_INF = math.inf
_NAN = math.nan


def assert_round_to_nearest() -> None:
    """Verify the FPU rounds to nearest-even; raise RuntimeError otherwise.

    Every contract in this package assumes round-to-nearest-even.  The
    probes below fail under any directed rounding mode.
    """
    eps = 2.0 ** -53
    ok = (
        1.0 + eps == 1.0
        and 1.0 + 3.0 * eps == 1.0 + 4.0 * eps
        and -1.0 - eps == -1.0
        and -1.0 - 3.0 * eps == -1.0 - 4.0 * eps
    )
    if not ok:
        raise RuntimeError(
            "floating-point rounding mode is not round-to-nearest-even; "
            "refusing to run"
        )


def r32(x: float) -> float:
    """Round a double to the nearest binary32 value (ties to even)."""
    try:
        return _UNPACK32(_PACK32(x))[0]
    except OverflowError:
        return _INF if x > 0.0 else -_INF


def bits64(x: float) -> int:
    return int.from_bytes(_PACK64(x), "little")


# --- fused multiply-add -------------------------------------------------
#
# CPython grew math.fma in 3.13.  On older interpreters the fused binary64
# op is delegated to gmpy2 (correctly rounded under the IEEE double
# context), loaded lazily so plain usage of the Dekker-Veltkamp backend
# never touches gmpy2.

HAVE_NATIVE_FMA = hasattr(math, "fma")

if HAVE_NATIVE_FMA:
    fma64 = math.fma  # type: ignore[attr-defined]
else:
    _gmpy_fma_ctx = None

    def fma64(x: float, y: float, z: float) -> float:
        """fl(x*y + z) with a single rounding, binary64."""
        global _gmpy_fma_ctx
        if _gmpy_fma_ctx is None:
            import gmpy2

            _gmpy_fma_ctx = gmpy2.ieee(64)
        return float(_gmpy_fma_ctx.fma(x, y, z))


def fma32(x: float, y: float, z: float) -> float:
    """fl32(x*y + z) with a single rounding, operands exact binary32.

    The product of two binary32 values is exact in binary64, and rounding
    the binary64 sum to odd before narrowing makes the final conversion a
    correct single rounding (53 >= 24 + 2).
    """
    p = x * y
    s = p + z
    ap = s - z
    bp = s - ap
    t = (p - ap) + (z - bp)
    if t != 0.0 and t == t:
        if bits64(s) & 1 == 0:
            s = math.nextafter(s, _INF if t > 0.0 else -_INF)
    return r32(s)


# --- IEEE-semantics scalar helpers --------------------------------------
#
# Python raises where C quietly returns inf/nan; these wrappers restore
# the IEEE results the algorithms rely on.


def div64(a: float, b: float) -> float:
    try:
        return a / b
    except ZeroDivisionError:
        if a == 0.0 or a != a:
            return _NAN
        neg = math.copysign(1.0, a) != math.copysign(1.0, b)
        return -_INF if neg else _INF


def div32(a: float, b: float) -> float:
    try:
        return r32(a / b)
    except ZeroDivisionError:
        if a == 0.0 or a != a:
            return _NAN
        neg = math.copysign(1.0, a) != math.copysign(1.0, b)
        return -_INF if neg else _INF


def sqrt64(x: float) -> float:
    try:
        return math.sqrt(x)
    except ValueError:
        return _NAN


def sqrt32(x: float) -> float:
    try:
        return r32(math.sqrt(x))
    except ValueError:
        return _NAN


def ulp64(x: float) -> float:
    return math.ulp(x)


def ulp32(x: float) -> float:
    if x != x or math.isinf(x):
        return _NAN
    if x == 0.0:
        return 2.0 ** -149
    _, e = math.frexp(abs(x))
    return 2.0 ** max(e - P32, -149)


# --- platform math library bindings --------------------------------------
#
# binary64 binds to the C library behind the math module; binary32 binds
# to numpy's single-precision kernels (the standard float32 math library
# of the ecosystem).  Both are bitwise deterministic within one process,
# which is the reproducibility level the t-functions promise.


class _Libm64:
    @staticmethod
    def exp(x: float) -> float:
        try:
            return math.exp(x)
        except OverflowError:
            return _INF

    @staticmethod
    def expm1(x: float) -> float:
        try:
            return math.expm1(x)
        except OverflowError:
            return _INF

    @staticmethod
    def log(x: float) -> float:
        try:
            return math.log(x)
        except ValueError:
            return -_INF if x == 0.0 else _NAN

    @staticmethod
    def log1p(x: float) -> float:
        try:
            return math.log1p(x)
        except ValueError:
            return -_INF if x == -1.0 else _NAN


class _Libm32:
    """numpy float32 kernels, exposed as float -> float (values stay f32)."""

    def __init__(self):
        import numpy as np

        self._np = np
        self._f32 = np.float32

    def _call(self, fn, x):
        np = self._np
        with np.errstate(all="ignore"):
            return float(fn(self._f32(x)))

    def exp(self, x: float) -> float:
        return self._call(self._np.exp, x)

    def expm1(self, x: float) -> float:
        return self._call(self._np.expm1, x)

    def log(self, x: float) -> float:
        return self._call(self._np.log, x)

    def log1p(self, x: float) -> float:
        return self._call(self._np.log1p, x)


libm64 = _Libm64()

_libm32_instance = None


def libm32() -> _Libm32:
    global _libm32_instance
    if _libm32_instance is None:
        _libm32_instance = _Libm32()
    return _libm32_instance


def default_backend_name() -> str:
    """Backend selected at import: env override, else fused if available."""
    env = os.environ.get("TWOFOLD_BACKEND", "").strip().lower()
    if env in ("fma", "dv"):
        return env
    if HAVE_NATIVE_FMA:
        return "fma"
    try:
        import gmpy2  # noqa: F401

        return "fma"
    except ImportError:
        return "dv"


assert_round_to_nearest()
