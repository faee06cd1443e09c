"""Exponential core tests: decomposition exactness, Taylor accuracy,
pexp0/pexpm10 contracts."""

import math

import pytest

from twofold import eft, eft32
from twofold.eft import Twofold
from twofold.expcore import ExpEngine, decompose_exp, decompose_expm1
from twofold.oracle import check_exact_sum
from twofold.params import PARAMS32, PARAMS64
from twofold.tables import packaged_tables

F12 = float(math.factorial(12))


@pytest.fixture(scope="module")
def eng64():
    return ExpEngine(PARAMS64, packaged_tables(64), eft.arith("fma"), eft)


@pytest.fixture(scope="module")
def eng32():
    return ExpEngine(PARAMS32, packaged_tables(32), eft32.arith("fma"), eft32)


def _reconstructs(x, dec, params, for_expm1=False):
    k = params.K_m1 if for_expm1 else params.K_exp
    base = 0.0 if for_expm1 else float(dec.m * (1 << params.L))
    grid = dec.n / float(1 << k)
    # base and grid are exact floats; verify in exact rational arithmetic
    lhs = Twofold(grid, dec.y)
    return check_exact_sum(x, -base, lhs)


class TestDecomposeExp:
    def test_examples(self):
        assert decompose_exp(1.0, PARAMS64) == (0, 32, 0.0)
        assert decompose_exp(0.0, PARAMS64) == (0, 0, 0.0)
        m, n, y = decompose_exp(0.3, PARAMS64)
        assert (m, n) == (0, 10)
        assert y == 0.3 - 0.3125 and abs(y) < 2.0 ** -6
        assert check_exact_sum(0.3125, y, Twofold(0.3, 0.0))

    def test_sign_symmetry(self):
        m, n, y = decompose_exp(-0.3, PARAMS64)
        assert (m, n) == (0, -10) and y == -(0.3 - 0.3125)

    @pytest.mark.parametrize("params", [PARAMS64, PARAMS32], ids=["b64", "b32"])
    def test_random_exact_and_bounded(self, params, rng):
        span = 1 << (params.L + params.K_exp)
        for _ in range(20000):
            mag = 2.0 ** rng.uniform(-20, math.log2(-params.lo_bound))
            x = mag if rng.random() < 0.5 else -mag
            x = min(max(x, params.lo_bound), params.hi_bound)
            if params.width == 32:
                from twofold._fp import r32

                x = r32(x)
            dec = decompose_exp(x, params)
            assert _reconstructs(x, dec, params)
            assert abs(dec.y) <= 2.0 ** -(params.K_exp + 1)
            assert abs(dec.n) < span
            assert params.m_min <= dec.m <= params.m_max
            if x > 0:
                assert dec.m >= 0 and dec.n >= 0
            else:
                assert dec.m <= 0 and dec.n <= 0

    def test_extremes_hit_table_edges(self):
        assert decompose_exp(PARAMS64.hi_bound, PARAMS64).m == PARAMS64.m_max
        assert decompose_exp(PARAMS64.lo_bound, PARAMS64).m == PARAMS64.m_min
        assert decompose_exp(PARAMS32.hi_bound, PARAMS32).m == PARAMS32.m_max
        assert decompose_exp(PARAMS32.lo_bound, PARAMS32).m == PARAMS32.m_min


class TestDecomposeExpm1:
    def test_examples(self):
        assert decompose_expm1(0.0, PARAMS64) == (0, 0, 0.0)
        n, y = decompose_expm1(0.1, PARAMS64)[1:]
        assert n == 13 and y == 0.1 - 13.0 / 128.0 and abs(y) < 1.0 / 256.0

    def test_ln2_corner_entry(self):
        # round(ln2 * 128) = 89: the extreme table entry sits just past ln 2
        ln2 = packaged_tables(64).ln2.value
        assert decompose_expm1(ln2, PARAMS64).n == 89
        assert decompose_expm1(-ln2, PARAMS64).n == -89
        ln2f = packaged_tables(32).ln2.value
        assert decompose_expm1(ln2f, PARAMS32).n == 89

    @pytest.mark.parametrize("params", [PARAMS64, PARAMS32], ids=["b64", "b32"])
    def test_random_exact_and_bounded(self, params, rng):
        ln2 = packaged_tables(params.width).ln2.value
        for _ in range(20000):
            x = rng.uniform(-ln2, ln2)
            if params.width == 32:
                from twofold._fp import r32

                x = r32(min(max(x, -ln2), ln2))
            dec = decompose_expm1(x, params)
            assert dec.m == 0
            assert _reconstructs(x, dec, params, for_expm1=True)
            assert abs(dec.y) <= 2.0 ** -(params.K_m1 + 1)
            assert abs(dec.n) <= params.n_m1_max


class TestTaylor:
    def test_exp_at_zero_exact(self, eng64):
        assert eng64.taylor_exp(0.0) == (F12, 0.0)

    def test_exp_pinned_endpoint(self, eng64, ora):
        for y in (2.0 ** -6, -(2.0 ** -6)):
            t = eng64.taylor_exp(y)
            ref = ora.mul(ora.exp(y), ora.from_float(F12))
            assert ora.rel_error(t, ref)[0] <= 2.0 ** -105

    def test_exp_sweep(self, eng64, ora, rng):
        for _ in range(2000):
            y = rng.uniform(-1.0, 1.0) * 2.0 ** -6
            t = eng64.taylor_exp(y)
            ref = ora.mul(ora.exp(y), ora.from_float(F12))
            assert ora.rel_error(t, ref)[0] <= 2.0 ** -100

    def test_expm1_at_zero(self, eng64):
        assert eng64.taylor_expm1(0.0) == (0.0, 0.0)

    def test_expm1_pinned(self, eng64, ora):
        t = eng64.taylor_expm1(1.0 / 256.0)
        assert ora.rel_error(t, ora.expm1(1.0 / 256.0))[0] <= 2.0 ** -100

    def test_expm1_sign_and_monotonicity(self, eng64):
        neg = eng64.taylor_expm1(-1.0 / 256.0)
        pos = eng64.taylor_expm1(1.0 / 256.0)
        assert neg.value < 0.0 < pos.value
        assert neg.value < eng64.taylor_expm1(0.0).value < pos.value

    def test_expm1_sweep_f32(self, eng32, ora, rng):
        from twofold._fp import r32

        for _ in range(2000):
            y = r32(rng.uniform(-1.0, 1.0) * 2.0 ** -8)
            t = eng32.taylor_expm1(y)
            if t.value == 0.0 and y == 0.0:
                continue
            # dotted-seed rounding costs up to ~2**-43 relative at |y|
            # near the grid half-step; far below the 2**-38 family gate
            assert ora.rel_error(t, ora.expm1(y))[0] <= 2.0 ** -41


class TestPexp0:
    def test_exact_one(self, eng64):
        assert eng64.pexp0(0.0) == (1.0, 0.0)

    def test_saturation(self, eng64):
        assert eng64.pexp0(710.0) == (math.inf, math.inf)
        assert eng64.pexp0(-745.0) == (0.0, 0.0)
        up = math.nextafter(PARAMS64.hi_bound, math.inf)
        down = math.nextafter(PARAMS64.lo_bound, -math.inf)
        assert eng64.pexp0(up) == (math.inf, math.inf)
        assert eng64.pexp0(down) == (0.0, 0.0)

    def test_boundaries_still_compute(self, eng64):
        z = eng64.pexp0(PARAMS64.hi_bound)
        assert z.value == math.inf  # e**hi rounds past the largest double
        z = eng64.pexp0(PARAMS64.lo_bound)
        assert 0.0 <= z.value <= 2.0 ** -1070

    def test_nan(self, eng64):
        z = eng64.pexp0(math.nan)
        assert math.isnan(z.value) and math.isnan(z.error)

    def test_point_accuracy(self, eng64, ora):
        assert ora.rel_error(eng64.pexp0(1.0), ora.exp(1.0))[0] <= 2.0 ** -95

    def test_sweep_coupled_invariant(self, eng64, ora, rng):
        for _ in range(2000):
            x = rng.uniform(-1.0, 1.0) * 2.0 ** rng.uniform(-10, 9)
            x = min(max(x, -700.0), 700.0)
            z = eng64.pexp0(x)
            if abs(z.value) < PARAMS64.error_floor:
                continue
            assert ora.rel_error(z, ora.exp(x))[0] <= 2.0 ** -95
            assert ora.round_nearest(ora.from_twofold(z), 64) == z.value

    def test_f32_saturation_and_one(self, eng32):
        assert eng32.pexp0(0.0).value == 1.0
        assert eng32.pexp0(89.0) == (math.inf, math.inf)
        assert eng32.pexp0(-104.0) == (0.0, 0.0)

    def test_f32_accuracy(self, eng32, ora, rng):
        from twofold._fp import r32

        for _ in range(2000):
            x = r32(rng.uniform(-87.0, 87.0))
            z = eng32.pexp0(x)
            if abs(z.value) < PARAMS32.error_floor:
                continue
            assert ora.rel_error(z, ora.exp(x))[0] <= 2.0 ** -38
            assert ora.round_nearest(ora.from_twofold(z), 32) == z.value


class TestPexpm10:
    def test_zero(self, eng64):
        assert eng64.pexpm10(0.0) == (0.0, 0.0)

    def test_fallback_branch(self, eng64, ora):
        # |x| > ln 2 routes via pexp0(x) - 1
        z = eng64.pexpm10(-50.0)
        assert abs(z.value + 1.0) < 1e-15
        assert ora.rel_error(z, ora.expm1(-50.0))[0] <= 2.0 ** -95
        z = eng64.pexpm10(3.0)
        assert ora.rel_error(z, ora.expm1(3.0))[0] <= 2.0 ** -95

    def test_tiny_no_cancellation(self, eng64, ora):
        z = eng64.pexpm10(2.0 ** -30)
        assert ora.rel_error(z, ora.expm1(2.0 ** -30))[0] <= 2.0 ** -95

    def test_deep_saturation(self, eng64):
        assert eng64.pexpm10(-800.0) == (-1.0, 0.0)
        assert eng64.pexpm10(800.0) == (math.inf, math.inf)

    def test_sweep(self, eng64, ora, rng):
        for _ in range(2000):
            x = rng.uniform(-1.0, 1.0) * 2.0 ** rng.uniform(-20, 5.3)
            z = eng64.pexpm10(x)
            if abs(z.value) < PARAMS64.error_floor:
                continue
            assert ora.rel_error(z, ora.expm1(x))[0] <= 2.0 ** -95


class TestTableSpotChecks:
    def test_c_times_factorial_matches_e(self, ora):
        # C[32] * 12! should reproduce e to coupled precision
        c = packaged_tables(64).c.lookup(32)
        prod = eft.arith("fma").t_mul_d(c, F12)
        assert ora.rel_error(prod, ora.exp(1.0))[0] <= 2.0 ** -104

    def test_e_c_cm1_identity_entries(self):
        for width in (64, 32):
            t = packaged_tables(width)
            assert t.e.lookup(0) == (1.0, 0.0)
            assert t.c_m1.lookup(0) == (0.0, 0.0)
