import math

import numpy as np
import pytest

from momlab.logvalue import LogValue
from momlab import specfun
from momlab.specfun import (
    DomainError,
    PoleError,
    barnes_g_signed,
    gamma,
    log_barnes_g,
    log_beta,
    log_gamma,
    log_gamma_signed,
)

# 40-digit references, precomputed with an arbitrary-precision library.
LOG_GAMMA_REFS = {
    0.5: 0.5723649429247000870717136756765293558236,
    1.5: -0.1207822376352452223455184457816472122519,
    2.5: 0.2846828704729191596324946696827019243201,
    7.0: 6.579251212010100995060178292903945321123,
    13.0: 19.9872144956618861495173623870550785125,
}

LOG_BARNES_REFS = {
    0.25: -1.22500590619427008342821356205501492477,
    0.5: -0.5054330544896953827976849898083449517214,
    1.5: 0.06693188843500470427402868586818440410225,
    3.7: 0.3852902057046427195987628716063993563186,
    6.25: 6.701251265920184577409503690961660339704,
    20.5: 297.0688850305779812808519193045715743315,
    100.5: 15437.05347433899141319862105163099326419,
}


class TestLogGamma:
    def test_reference_table(self):
        for x, ref in LOG_GAMMA_REFS.items():
            assert log_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-13)

    def test_trivial_values(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
        assert log_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-14)
        assert log_gamma(1.0) == 0.0

    def test_relative_error_window(self):
        # spot checks across the accuracy window [1e-3, 1e4]
        import mpmath
        mpmath.mp.dps = 30
        for x in [1e-3, 0.02, 0.7, 3.3, 87.0, 1e4]:
            ref = float(mpmath.loggamma(x))
            assert log_gamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)

    def test_poles_and_domain(self):
        with pytest.raises(PoleError):
            log_gamma(0.0)
        with pytest.raises(PoleError):
            log_gamma(-3.0)
        with pytest.raises(DomainError):
            log_gamma(-0.5)
        with pytest.raises(DomainError):
            log_gamma(float("nan"))

    def test_reflected_branch(self):
        import mpmath
        mpmath.mp.dps = 30
        for x in [-0.5, -1.3, -7.25, -0.001]:
            lv = log_gamma_signed(x)
            ref = mpmath.gamma(x)
            assert lv.sign == (1 if ref > 0 else -1)
            assert lv.log_abs == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-12, abs=1e-12)
        with pytest.raises(PoleError):
            log_gamma_signed(-2.0)

    def test_gamma_and_beta(self):
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
        assert log_beta(2.0, 3.0) == pytest.approx(math.log(1 / 12), rel=1e-13)


class TestBarnesG:
    def test_small_integers(self):
        # G(1) = G(2) = G(3) = 1, G(4) = 2, G(5) = 12
        for x in (1.0, 2.0, 3.0):
            assert abs(log_barnes_g(x)) < 1e-12
        assert log_barnes_g(4.0) == pytest.approx(math.log(2.0), abs=1e-12)
        assert log_barnes_g(5.0) == pytest.approx(math.log(12.0), abs=1e-12)

    def test_reference_values(self):
        for x, ref in LOG_BARNES_REFS.items():
            assert log_barnes_g(x) == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_recurrence_1000_points(self):
        rng = np.random.default_rng(20240517)
        xs = rng.uniform(0.1, 50.0, 1000)
        worst = max(abs(log_barnes_g(x + 1.0) - log_gamma(x) - log_barnes_g(x)) for x in xs)
        assert worst <= 1e-11

    def test_domain(self):
        with pytest.raises(DomainError):
            log_barnes_g(0.0)
        with pytest.raises(DomainError):
            log_barnes_g(-1.0)
        assert barnes_g_signed(0.0).is_zero
        assert barnes_g_signed(2.0).to_float() == pytest.approx(1.0, rel=1e-12)


class TestLogValue:
    def test_roundtrip_and_zero(self):
        assert LogValue.from_float(-3.5).to_float() == pytest.approx(-3.5, rel=1e-15)
        assert LogValue.from_float(0.0).is_zero
        assert LogValue(0).to_float() == 0.0

    def test_multiplication_matches_floats(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a, b = rng.uniform(-10, 10, 2)
            if a == 0 or b == 0:
                continue
            prod = LogValue.from_float(a) * LogValue.from_float(b)
            assert prod.to_float() == pytest.approx(a * b, rel=1e-13)

    def test_associativity(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            vals = [LogValue.from_float(v) for v in rng.uniform(-5, 5, 3) if v != 0]
            if len(vals) < 3:
                continue
            x, y, z = vals
            left = (x * y) * z
            right = x * (y * z)
            assert left.sign == right.sign
            assert left.log_abs == pytest.approx(right.log_abs, abs=1e-12)

    def test_pow_and_div(self):
        v = LogValue.from_float(-2.0)
        assert (v ** 3).to_float() == pytest.approx(-8.0, rel=1e-14)
        assert (v ** 2).to_float() == pytest.approx(4.0, rel=1e-14)
        with pytest.raises(ValueError):
            v ** 0.5
        w = LogValue.from_float(4.0)
        assert (v / w).to_float() == pytest.approx(-0.5, rel=1e-14)
        with pytest.raises(ZeroDivisionError):
            v / LogValue(0)

    def test_overflow_to_inf(self):
        assert LogValue(1, 1e4).to_float() == math.inf
        assert LogValue(-1, 1e4).to_float() == -math.inf

    def test_huge_products_stay_finite_in_log(self):
        acc = LogValue.from_float(1.0)
        for _ in range(2000):
            acc = acc * LogValue.from_float(1e300)
        assert acc.sign == 1
        assert acc.log_abs == pytest.approx(2000 * math.log(1e300), rel=1e-12)


def test_module_is_stateless():
    # parallel-safety proxy: repeated evaluation gives bit-identical results
    vals = {specfun.log_barnes_g(7.3) for _ in range(8)}
    assert len(vals) == 1
