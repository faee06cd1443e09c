"""Twofold extended-precision exponent and logarithm library.

Every function returns a pair (value, error): the value part reproduces
the process's standard math library bit for bit (t-prefixed functions) or
the correctly renormalized leading part (p-prefixed functions), and the
error part assesses the value's deviation from the exact result with
close to twice the working precision.

    >>> from twofold import api, Twofold
    >>> f64 = api(64)
    >>> z = f64.texp(Twofold(1.0, 0.0))
    >>> z.value == __import__("math").exp(1.0)
    True

Both binary64 and binary32 lanes are provided; see `twofold.cli` for the
audit/benchmark command line.
"""

from ._fp import HAVE_NATIVE_FMA, assert_round_to_nearest
from .eft import (
    SplitPair,
    Twofold,
    get_default_backend,
    set_default_backend,
)
from .explog import (
    COUPLED_ARG,
    DOTTED_ARG,
    FAMILIES,
    FUNCTION_NAMES,
    TWOFOLD_ARG,
    ExpLog,
    api,
    family_of,
    get_function,
)

__version__ = "0.1.0"

__all__ = [
    "Twofold",
    "SplitPair",
    "ExpLog",
    "api",
    "get_function",
    "family_of",
    "FAMILIES",
    "FUNCTION_NAMES",
    "DOTTED_ARG",
    "COUPLED_ARG",
    "TWOFOLD_ARG",
    "set_default_backend",
    "get_default_backend",
    "HAVE_NATIVE_FMA",
    "assert_round_to_nearest",
    "__version__",
]
