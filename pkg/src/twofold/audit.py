"""Accuracy audit, throughput benchmark and corner-case demo.

The accuracy audit replays each function against a deterministic random
sample stream and measures mean (L1) and maximum (L0) relative error of
value + error against a high-precision etalon, with a small warning
budget for samples exceeding the L0 threshold.  Samples whose result
cannot carry an extended-precision error part (subnormal results, or
results so small the deviation itself is subnormal) are excluded, as are
non-finite results.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import asdict, dataclass, field

from . import explog, oracle
from ._fp import bits64, libm64
from .eft import Twofold
from .params import params_for_width

__all__ = [
    "SampleSpec",
    "AccuracyReport",
    "BenchReport",
    "DemoReport",
    "gen_samples",
    "thresholds_for",
    "warn_budget_for",
    "run_accuracy",
    "run_bench",
    "run_demo",
    "recompute_pass",
]

_INF = math.inf

# (width, family) -> (L1 mean threshold, L0 max threshold), relative error
_THRESHOLDS = {
    (64, "exp"): (2.0 ** -100, 2.0 ** -95),
    (64, "expm1"): (2.0 ** -100, 2.0 ** -95),
    (64, "log"): (2.0 ** -98, 2.0 ** -93),
    (64, "log1p"): (2.0 ** -98, 2.0 ** -93),
    (32, "exp"): (2.0 ** -42, 2.0 ** -38),
    (32, "expm1"): (2.0 ** -42, 2.0 ** -38),
    (32, "log"): (2.0 ** -42, 2.0 ** -36),
    (32, "log1p"): (2.0 ** -42, 2.0 ** -36),
}

# Sampled magnitude ranges (log2) per family and width.  Values are drawn
# log-uniform in magnitude to stress every table index and branch; the
# exp family covers both signs up to its saturation bounds, the log
# family spans the full dynamic range used in the module contracts.
_EXP_MAG = {64: (-20.0, None), 32: (-18.0, None)}
_EXPM1_MAG = {64: (-20.0, math.log2(40.0)), 32: (-18.0, math.log2(25.0))}
_LOG_EXP_RANGE = {64: 300.0, 32: 120.0}
_LOG1P_MAG = {64: 30.0, 32: 20.0}


@dataclass(frozen=True)
class SampleSpec:
    fn: str
    width: int
    count: int
    seed: int

    @property
    def domain(self) -> str:
        fam = explog.family_of(self.fn)
        if fam == "exp":
            return "x log-uniform in magnitude over the saturation domain, both signs"
        if fam == "expm1":
            hi = 2.0 ** _EXPM1_MAG[self.width][1]
            return f"x log-uniform in magnitude up to {hi:.0f}, both signs"
        if fam == "log":
            r = _LOG_EXP_RANGE[self.width]
            return f"y = 2**u, u uniform in [-{r:.0f}, {r:.0f}]"
        return "y log-uniform in magnitude, both signs, above -1"


def thresholds_for(fn: str, width: int) -> tuple:
    return _THRESHOLDS[(width, explog.family_of(fn))]


def warn_budget_for(samples: int) -> int:
    # allow 2 L0 exceedances per million samples, rounded up
    return (2 * samples + 999_999) // 1_000_000


def _value_gen(fn: str, width: int, rng: random.Random):
    fam = explog.family_of(fn)
    p = params_for_width(width)
    if fam == "exp":
        lo_mag = _EXP_MAG[width][0]
        hi_pos = math.log2(p.hi_bound)
        hi_neg = math.log2(-p.lo_bound)

        def gen():
            if rng.random() < 0.5:
                return 2.0 ** rng.uniform(lo_mag, hi_pos)
            return -(2.0 ** rng.uniform(lo_mag, hi_neg))

    elif fam == "expm1":
        lo_mag, hi_mag = _EXPM1_MAG[width]

        def gen():
            m = 2.0 ** rng.uniform(lo_mag, hi_mag)
            return m if rng.random() < 0.5 else -m

    elif fam == "log":
        r = _LOG_EXP_RANGE[width]

        def gen():
            return 2.0 ** rng.uniform(-r, r)

    else:  # log1p
        m = _LOG1P_MAG[width]

        def gen():
            if rng.random() < 0.5:
                return 2.0 ** rng.uniform(-m, m)
            return -(2.0 ** rng.uniform(-m, -1e-4))

    return gen


def gen_samples(spec: SampleSpec):
    """Deterministic twofold input stream for one function.

    Dotted-argument functions get a zero error part; coupled-argument
    functions get a renormalized pair; twofold-argument functions get the
    raw pair with error = value * u * 2**-p, u uniform in [-1, 1].
    """
    rng = random.Random(spec.seed)
    gen = _value_gen(spec.fn, spec.width, rng)
    p = params_for_width(spec.width)
    scale = 2.0 ** -p.p
    if spec.width == 64:
        quant = float
    else:
        from ._fp import r32 as quant
    dotted = spec.fn in explog.DOTTED_ARG
    coupled = spec.fn in explog.COUPLED_ARG
    if coupled:
        from . import eft, eft32

        renorm = eft.renorm if spec.width == 64 else eft32.renorm
    for _ in range(spec.count):
        v = quant(gen())
        if dotted:
            yield Twofold(v, 0.0)
            continue
        e = quant(v * rng.uniform(-1.0, 1.0) * scale)
        t = Twofold(v, e)
        yield renorm(t) if coupled else t


@dataclass
class AccuracyReport:
    fn: str
    width: int
    backend: str
    etalon: str
    samples: int
    seed: int
    l1_rel: float
    l0_rel: float
    warnings: int
    thresholds: dict
    subnormals_excluded: int
    passed: bool = field(default=False)

    def to_json(self) -> str:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AccuracyReport":
        d = json.loads(text)
        d["passed"] = d.pop("pass")
        return cls(**d)

    def summary_line(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return (
            f"{self.fn}/binary{self.width} [{self.backend}, {self.etalon}] "
            f"n={self.samples} L1=2^{_log2s(self.l1_rel)} L0=2^{_log2s(self.l0_rel)} "
            f"warnings={self.warnings} excluded={self.subnormals_excluded}: {state}"
        )


def _log2s(x: float) -> str:
    if x <= 0.0:
        return "-inf"
    return f"{math.log2(x):.1f}"


def recompute_pass(report: AccuracyReport) -> bool:
    th = report.thresholds
    return report.l1_rel <= th["l1"] and report.warnings <= th["warn_budget"]


def run_accuracy(
    spec: SampleSpec,
    backend: str | None = None,
    etalon: str = "oracle",
    oracle_precision: int = 192,
    fn_override=None,
) -> AccuracyReport:
    """Audit one function against the sample stream of `spec`.

    `fn_override` substitutes the audited callable (same signature), used
    by negative-control tests.  Merging of (sum, max, count) statistics is
    order-independent, so the stream may be chunked freely.
    """
    if etalon not in ("oracle", "lib"):
        raise ValueError(f"unknown etalon {etalon!r}")
    if etalon == "lib" and spec.width != 32:
        raise ValueError("library etalon is only meaningful for binary32")
    surface = explog.api(spec.width, backend)
    fn = fn_override if fn_override is not None else surface.function(spec.fn)
    fam = explog.family_of(spec.fn)
    dotted = spec.fn in explog.DOTTED_ARG
    l1_th, l0_th = thresholds_for(spec.fn, spec.width)
    budget = warn_budget_for(spec.count)
    floor = params_for_width(spec.width).error_floor

    ora = oracle.Oracle(oracle_precision)
    hp_ref = {"exp": ora.exp, "expm1": ora.expm1, "log": ora.log, "log1p": ora.log1p}[fam]
    lib_ref = {
        "exp": libm64.exp,
        "expm1": libm64.expm1,
        "log": libm64.log,
        "log1p": libm64.log1p,
    }[fam]

    total = 0.0
    worst = 0.0
    warnings = 0
    excluded = 0
    included = 0
    for t in gen_samples(spec):
        z = fn(t.value) if dotted else fn(t)
        if not math.isfinite(z.value) or abs(z.value) < floor:
            excluded += 1
            continue
        if etalon == "lib":
            ref = lib_ref(t.value + t.error)  # exact sum in binary64
            err, absolute = oracle.rel_error_float(z.value, z.error, ref)
        else:
            try:
                ref = hp_ref(ora.from_twofold(t))
            except oracle.OracleDomainError:
                excluded += 1
                continue
            err, absolute = ora.rel_error(z, ref)
        if absolute:
            excluded += 1
            continue
        included += 1
        total += err
        if err > worst:
            worst = err
        if err > l0_th:
            warnings += 1

    l1 = total / included if included else 0.0
    report = AccuracyReport(
        fn=spec.fn,
        width=spec.width,
        backend=surface.backend,
        etalon=etalon,
        samples=spec.count,
        seed=spec.seed,
        l1_rel=l1,
        l0_rel=worst,
        warnings=warnings,
        thresholds={"l1": l1_th, "l0": l0_th, "warn_budget": budget},
        subnormals_excluded=excluded,
    )
    report.passed = recompute_pass(report)
    return report


@dataclass
class BenchReport:
    fn: str
    width: int
    backend: str
    iterations: int
    elapsed_seconds: float
    mops: float
    baseline_mops: float
    checksum: str
    unreliable: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls(**json.loads(text))

    def summary_line(self) -> str:
        flag = " (timer unreliable)" if self.unreliable else ""
        ratio = self.mops / self.baseline_mops if self.baseline_mops else float("nan")
        return (
            f"{self.fn}/binary{self.width} [{self.backend}] {self.mops:.3f} Mops "
            f"(oracle {self.baseline_mops:.3f} Mops, x{ratio:.2f}) "
            f"checksum={self.checksum}{flag}"
        )


_BENCH_POOL = 1024
_BENCH_SEED = 0xB0B


def run_bench(
    fn_name: str,
    width: int,
    iterations: int,
    backend: str | None = None,
    baseline_samples: int = 20_000,
) -> BenchReport:
    """Measure throughput of one function over a pooled input stream.

    Results are folded into an xor checksum so the interpreter cannot
    elide the calls; the 192-bit oracle's throughput on the same family
    is reported as an informational baseline.
    """
    surface = explog.api(width, backend)
    fn = surface.function(fn_name)
    dotted = fn_name in explog.DOTTED_ARG
    spec = SampleSpec(fn=fn_name, width=width, count=_BENCH_POOL, seed=_BENCH_SEED)
    pool = [(t.value if dotted else t) for t in gen_samples(spec)]
    mask = _BENCH_POOL - 1

    checksum = 0
    for i in range(min(iterations // 10, _BENCH_POOL)):
        checksum ^= bits64(fn(pool[i & mask]).value)  # warm-up

    checksum = 0
    t0 = time.perf_counter()
    for i in range(iterations):
        checksum ^= bits64(fn(pool[i & mask]).value)
    elapsed = time.perf_counter() - t0

    fam = explog.family_of(fn_name)
    ora = oracle.Oracle(192)
    hp = {"exp": ora.exp, "expm1": ora.expm1, "log": ora.log, "log1p": ora.log1p}[fam]
    vals = [t if dotted else t.value for t in pool]
    n_base = min(baseline_samples, iterations)
    b0 = time.perf_counter()
    for i in range(n_base):
        hp(vals[i & mask])
    b_elapsed = time.perf_counter() - b0

    res = time.get_clock_info("perf_counter").resolution
    unreliable = elapsed <= 100.0 * res or b_elapsed <= 100.0 * res
    return BenchReport(
        fn=fn_name,
        width=width,
        backend=surface.backend,
        iterations=iterations,
        elapsed_seconds=elapsed,
        mops=iterations / elapsed / 1e6 if elapsed > 0 else float("inf"),
        baseline_mops=n_base / b_elapsed / 1e6 if b_elapsed > 0 else float("inf"),
        checksum=f"{checksum:016x}",
        unreliable=unreliable,
    )


@dataclass
class DemoReport:
    checks: list
    passed: bool

    def summary_lines(self):
        for name, ok in self.checks:
            yield f"  [{'ok' if ok else 'FAIL'}] {name}"

    def failures(self):
        return [name for name, ok in self.checks if not ok]


def _is_nan(x: float) -> bool:
    return x != x


def run_demo() -> DemoReport:
    """Corner-case suite: bitwise identities, specials, saturations."""
    from ._fp import libm32

    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))

    for width in (64, 32):
        s = explog.api(width)
        lib = libm64 if width == 64 else libm32()
        tag = f"binary{width}"
        one = 1.0
        two = 2.0
        check(f"{tag} exp(1) bitwise", s.texp(Twofold(one, 0.0)).value == lib.exp(one))
        check(f"{tag} expm1(1) bitwise", s.texpm1(Twofold(one, 0.0)).value == lib.expm1(one))
        check(f"{tag} log(2) bitwise", s.tlog(Twofold(two, 0.0)).value == lib.log(two))
        check(f"{tag} log1p(1) bitwise", s.tlog1p(Twofold(one, 0.0)).value == lib.log1p(one))

        z = s.texp(Twofold(math.nan, 0.0))
        check(f"{tag} texp(NaN) is NaN pair", _is_nan(z.value) and _is_nan(z.error))
        z = s.texp(Twofold(_INF, 0.0))
        check(f"{tag} texp(+inf) saturates", z == (_INF, _INF))
        z = s.texp(Twofold(-_INF, 0.0))
        check(f"{tag} texp(-inf) is (0, 0)", z == (0.0, 0.0))
        z = s.tlog(Twofold(_INF, 0.0))
        check(f"{tag} tlog(+inf) saturates", z == (_INF, _INF))
        if width == 64:
            check(f"{tag} texp0(0) == (1, 0)", s.texp0(0.0) == (1.0, 0.0))
        else:
            # the binary32 1/N! constant leaves a residue far below the
            # accuracy gate but not exactly zero
            z = s.texp0(0.0)
            check(f"{tag} texp0(0) is 1 within gates",
                  z.value == 1.0 and abs(z.error) <= 2.0 ** -38)
        check(f"{tag} texp0(-0.0) value is 1", s.texp0(-0.0).value == 1.0)
        check(f"{tag} texpm10(0) == (0, 0)", s.texpm10(0.0) == (0.0, 0.0))
        check(f"{tag} plog0(0) == (-inf, -inf)", s.plog0(0.0) == (-_INF, -_INF))
        check(f"{tag} tlog0(0) saturates", s.tlog0(0.0) == (-_INF, -_INF))
        z = s.plog0(-1.0)
        check(f"{tag} plog0(-1) is NaN pair", _is_nan(z.value) and _is_nan(z.error))
        check(f"{tag} plog1p0(-1) == (-inf, -inf)", s.plog1p0(-1.0) == (-_INF, -_INF))

        p = s.params
        tiny = p.min_normal / (2.0 ** (p.p - 1))  # smallest subnormal
        check(f"{tag} texp0(subnormal) value is 1", s.texp0(tiny).value == 1.0)
        check(
            f"{tag} tlog0(subnormal) bitwise",
            s.tlog0(tiny).value == lib.log(tiny),
        )
        up = math.nextafter(p.hi_bound, _INF)
        down = math.nextafter(p.lo_bound, -_INF)
        if width == 32:
            from ._fp import r32

            up = float(r32(p.hi_bound * (1 + 2.0 ** -23)))
            down = float(r32(p.lo_bound * (1 + 2.0 ** -23)))
        check(f"{tag} pexp0 over hi bound -> (+inf, +inf)", s.pexp0(up) == (_INF, _INF))
        check(f"{tag} pexp0 under lo bound -> (0, 0)", s.pexp0(down) == (0.0, 0.0))

        z = s.tlog(Twofold(1.0, -1.0))
        check(
            f"{tag} tlog((1, -1)) value finite, error NaN",
            z.value == lib.log(1.0) and _is_nan(z.error),
        )

    ok = all(flag for _, flag in checks)
    return DemoReport(checks=checks, passed=ok)
