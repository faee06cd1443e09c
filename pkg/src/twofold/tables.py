"""Generation, validation and bit-exact serialization of the constant tables.

The exponential cores read three coupled-precision tables plus two coupled
constants:

  E[m]    ~ exp(2**L * m)          coarse scale factors
  C[n]    ~ exp(n * 2**-K) / N!    fine factors, pre-divided by N!
  CM1[n]  ~ exp(n * 2**-K_m1) - 1  fine factors for the expm1 core
  LN2     ~ ln 2                   for reassembling log results
  INVFACT ~ 1 / N_m1!              rescales the constant-free Horner sum

Dumps are plain text with hexadecimal float literals, so they diff cleanly
and round-trip bit-exactly.  The library ships generated dumps as package
data; regenerating with the same parameters and precision reproduces them
byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ._fp import r32, ulp32, ulp64
from .eft import Twofold
from .params import ExpParams, params_for_width

__all__ = [
    "CoupledTable",
    "ExpTables",
    "TableFormatError",
    "gen_tables",
    "dump_tables",
    "load_tables",
    "packaged_dump",
    "packaged_tables",
]

_FORMAT_TAG = "twofold-tables"
_FORMAT_VERSION = 1


class TableFormatError(ValueError):
    """A dump failed structural or per-entry validation."""


@dataclass(frozen=True)
class CoupledTable:
    """Dense coupled-pair table indexed from lo_index upward."""

    lo_index: int
    values: tuple
    errors: tuple

    def __len__(self) -> int:
        return len(self.values)

    @property
    def hi_index(self) -> int:
        return self.lo_index + len(self.values) - 1

    def lookup(self, i: int) -> Twofold:
        j = i - self.lo_index
        return Twofold(self.values[j], self.errors[j])

    def entries(self):
        for j, (v, e) in enumerate(zip(self.values, self.errors)):
            yield self.lo_index + j, v, e


@dataclass(frozen=True)
class ExpTables:
    params: ExpParams
    e: CoupledTable
    c: CoupledTable
    c_m1: CoupledTable
    ln2: Twofold
    inv_fact_m1: Twofold
    oracle_precision: int

    @property
    def width(self) -> int:
        return self.params.width


def _couple(ora, ref, width: int) -> Twofold:
    value = ora.round_nearest(ref, width)
    rem = ora.sub(ref, ora.from_float(value))
    return Twofold(value, ora.round_nearest(rem, width))


def gen_tables(params: ExpParams, oracle_precision: int = 192) -> ExpTables:
    """Recompute all tables from the high-precision oracle."""
    if oracle_precision < 2 * params.p + 60:
        raise ValueError(
            f"oracle precision {oracle_precision} too low for width {params.width}"
        )
    from .oracle import Oracle

    ora = Oracle(oracle_precision)
    width = params.width
    stride = float(2 ** params.L)
    fact = ora.from_float(float(math.factorial(params.N_exp)))

    ev, ee = [], []
    for m in range(params.m_min, params.m_max + 1):
        pair = _couple(ora, ora.exp(stride * m), width)
        ev.append(pair.value)
        ee.append(pair.error)

    cv, ce = [], []
    scale = 2.0 ** -params.K_exp
    for n in range(params.n_min, params.n_max + 1):
        pair = _couple(ora, ora.div(ora.exp(n * scale), fact), width)
        cv.append(pair.value)
        ce.append(pair.error)

    mv, me = [], []
    scale_m1 = 2.0 ** -params.K_m1
    for n in range(-params.n_m1_max, params.n_m1_max + 1):
        pair = _couple(ora, ora.expm1(n * scale_m1), width)
        mv.append(pair.value)
        me.append(pair.error)

    ln2 = _couple(ora, ora.log2_const(), width)
    inv = ora.div(1, ora.from_float(float(math.factorial(params.N_m1))))
    inv_fact = _couple(ora, inv, width)

    return ExpTables(
        params=params,
        e=CoupledTable(params.m_min, tuple(ev), tuple(ee)),
        c=CoupledTable(params.n_min, tuple(cv), tuple(ce)),
        c_m1=CoupledTable(-params.n_m1_max, tuple(mv), tuple(me)),
        ln2=ln2,
        inv_fact_m1=inv_fact,
        oracle_precision=oracle_precision,
    )


def dump_tables(tables: ExpTables) -> str:
    """Serialize to the line-oriented hex-literal text format."""
    p = tables.params
    lines = [
        f"{_FORMAT_TAG} {_FORMAT_VERSION} width={p.width} L={p.L} K={p.K_exp} "
        f"N={p.N_exp} Km1={p.K_m1} Nm1={p.N_m1} prec={tables.oracle_precision}"
    ]
    for name, table in (("E", tables.e), ("C", tables.c), ("CM1", tables.c_m1)):
        for i, v, e in table.entries():
            lines.append(f"{name} {i} {v.hex()} {e.hex()}")
    lines.append(f"LN2 0 {tables.ln2.value.hex()} {tables.ln2.error.hex()}")
    lines.append(
        f"INVFACT 0 {tables.inv_fact_m1.value.hex()} {tables.inv_fact_m1.error.hex()}"
    )
    return "\n".join(lines) + "\n"


def _parse_float(text: str, width: int, where: str) -> float:
    try:
        v = float.fromhex(text)
    except ValueError:
        raise TableFormatError(f"{where}: malformed hex literal {text!r}") from None
    if width == 32 and r32(v) != v and v == v:
        raise TableFormatError(f"{where}: {text!r} is not a binary32 value")
    return v


def load_tables(text: str) -> ExpTables:
    """Parse and validate a dump produced by :func:`dump_tables`."""
    lines = text.splitlines()
    if not lines:
        raise TableFormatError("empty dump")
    head = lines[0].split()
    if len(head) < 3 or head[0] != _FORMAT_TAG:
        raise TableFormatError(f"bad header {lines[0]!r}")
    if head[1] != str(_FORMAT_VERSION):
        raise TableFormatError(f"unsupported format version {head[1]!r}")
    fields = dict(kv.split("=", 1) for kv in head[2:] if "=" in kv)
    try:
        width = int(fields["width"])
        prec = int(fields.get("prec", "192"))
    except (KeyError, ValueError):
        raise TableFormatError(f"bad header fields {lines[0]!r}") from None
    params = params_for_width(width)
    for key, got in (
        ("L", params.L),
        ("K", params.K_exp),
        ("N", params.N_exp),
        ("Km1", params.K_m1),
        ("Nm1", params.N_m1),
    ):
        if key in fields and int(fields[key]) != got:
            raise TableFormatError(
                f"header {key}={fields[key]} does not match width-{width} parameters"
            )

    ulp = ulp32 if width == 32 else ulp64
    buckets: dict[str, dict[int, Twofold]] = {"E": {}, "C": {}, "CM1": {}, "LN2": {}, "INVFACT": {}}
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise TableFormatError(f"line {ln}: expected 'TABLE INDEX VALUE ERROR'")
        name, idx_s, v_s, e_s = parts
        if name not in buckets:
            raise TableFormatError(f"line {ln}: unknown table {name!r}")
        try:
            idx = int(idx_s)
        except ValueError:
            raise TableFormatError(f"line {ln}: bad index {idx_s!r}") from None
        where = f"line {ln} ({name}[{idx}])"
        v = _parse_float(v_s, width, where)
        e = _parse_float(e_s, width, where)
        if not math.isfinite(v) or not math.isfinite(e):
            raise TableFormatError(f"{where}: non-finite entry")
        if abs(e) > 0.5 * ulp(v):
            raise TableFormatError(f"{where}: coupled invariant violated")
        if idx in buckets[name]:
            raise TableFormatError(f"{where}: duplicate index")
        buckets[name][idx] = Twofold(v, e)

    def as_table(name: str, lo: int, count: int) -> CoupledTable:
        entries = buckets[name]
        if len(entries) != count or min(entries) != lo or max(entries) != lo + count - 1:
            raise TableFormatError(
                f"table {name}: expected {count} entries covering "
                f"[{lo}, {lo + count - 1}], got {len(entries)}"
            )
        vals = tuple(entries[i].value for i in range(lo, lo + count))
        errs = tuple(entries[i].error for i in range(lo, lo + count))
        return CoupledTable(lo, vals, errs)

    for cname in ("LN2", "INVFACT"):
        if set(buckets[cname]) != {0}:
            raise TableFormatError(f"table {cname}: expected exactly index 0")

    return ExpTables(
        params=params,
        e=as_table("E", params.m_min, params.e_count),
        c=as_table("C", params.n_min, params.c_count),
        c_m1=as_table("CM1", -params.n_m1_max, params.c_m1_count),
        ln2=buckets["LN2"][0],
        inv_fact_m1=buckets["INVFACT"][0],
        oracle_precision=prec,
    )


def packaged_dump(width: int) -> str:
    name = f"tables_binary{width}.txt"
    return resources.files(__package__).joinpath("data").joinpath(name).read_text()


@lru_cache(maxsize=None)
def packaged_tables(width: int) -> ExpTables:
    """The checked-in tables for a width, loaded and validated once."""
    return load_tables(packaged_dump(width))
