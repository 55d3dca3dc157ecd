import math

import numpy as np
import pytest

from su11wavelets import polynomials as P
from su11wavelets.errors import InvalidDegree, InvalidLabel


class TestLaguerre:
    def test_degree_zero_is_one(self):
        x = np.linspace(0, 20, 7)
        assert np.all(P.laguerre(0, 1.0, x) == 1.0)

    def test_degree_one(self):
        x = np.linspace(0, 10, 11)
        assert P.laguerre(1, 1.0, x) == pytest.approx(2.0 - x)

    def test_value_at_zero_is_binomial(self):
        # L_m^alpha(0) = C(m + alpha, m)
        assert P.laguerre(2, 1.0, 0.0) == pytest.approx(3.0)
        assert P.laguerre(3, 2.0, 0.0) == pytest.approx(10.0)
        assert P.laguerre(5, 0.5, 0.0) == pytest.approx(
            math.gamma(5 + 1.5) / (math.gamma(1.5) * math.factorial(5))
        )

    def test_three_term_recurrence(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            m = int(rng.integers(1, 25))
            alpha = float(rng.uniform(-0.5, 4))
            x = float(rng.uniform(0, 30))
            lhs = (m + 1) * P.laguerre(m + 1, alpha, x)
            rhs = (2 * m + 1 + alpha - x) * P.laguerre(m, alpha, x) - (m + alpha) * P.laguerre(m - 1, alpha, x)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_negative_degree_rejected(self):
        with pytest.raises(InvalidDegree):
            P.laguerre(-1, 1.0, 0.5)

    def test_table_matches_single(self):
        x = np.array([0.3, 2.0, 11.0])
        table = P.laguerre_table(10, 2.0, x)
        for m in range(11):
            assert table[m] == pytest.approx(P.laguerre(m, 2.0, x), rel=1e-13)

    def test_derivative_identity(self):
        x = np.linspace(0.1, 8, 5)
        got = P.laguerre_deriv(4, 1.0, x)
        assert got == pytest.approx(-P.laguerre(3, 2.0, x))


class TestPm:
    def test_p0_is_one(self):
        assert P.p_m(0, 1.0, 0.7) == 1.0

    def test_p1_closed_form(self):
        for k in (1.0, 1.5, 2.5):
            y = np.array([0.1, 1.0, 3.0])
            assert P.p_m(1, k, y) == pytest.approx(4 * math.pi * y - 2 * k)

    def test_p2_via_laguerre(self):
        y = 1 / (2 * math.pi)
        assert P.p_m(2, 1.0, y) == pytest.approx(2.0 * P.laguerre(2, 1.0, 2.0))

    def test_matches_laguerre_up_to_15(self):
        y = np.array([0.2, 0.9, 2.4])
        for k in (1.0, 1.5, 2.0):
            for m in range(16):
                expected = (-1) ** m * math.factorial(m) * P.laguerre(m, 2 * k - 1, 4 * math.pi * y)
                assert P.p_m(m, k, y) == pytest.approx(expected, rel=1e-13)

    def test_label_validated(self):
        with pytest.raises(InvalidLabel):
            P.p_m(2, 0.9, 1.0)
        with pytest.raises(InvalidLabel):
            P.p_m(2, 1.3, 1.0)


class TestRecurrences:
    def test_raising_recurrence(self):
        # (y d/dy + 2k + m - 4 pi y) p_m = -p_{m+1}
        rng = np.random.default_rng(1)
        for _ in range(50):
            m = int(rng.integers(0, 18))
            k = float(rng.integers(2, 6)) / 2.0
            y = float(rng.uniform(0.05, 4.0))
            lhs = y * P.p_m_deriv(m, k, y) + (2 * k + m - 4 * math.pi * y) * P.p_m(m, k, y)
            rhs = -P.p_m(m + 1, k, y)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * max(1, abs(rhs)))

    def test_lowering_recurrence(self):
        # (-y d/dy + m) p_m = -m(2k+m-1) p_{m-1}
        rng = np.random.default_rng(2)
        for _ in range(50):
            m = int(rng.integers(1, 18))
            k = float(rng.integers(2, 6)) / 2.0
            y = float(rng.uniform(0.05, 4.0))
            lhs = -y * P.p_m_deriv(m, k, y) + m * P.p_m(m, k, y)
            rhs = -m * (2 * k + m - 1) * P.p_m(m - 1, k, y)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * max(1, abs(rhs)))


class TestLogFactorials:
    def test_empty_product(self):
        assert P.log_mk_factorial(0, 1.0) == 0.0

    def test_first_step(self):
        assert P.log_mk_factorial(1, 1.0) == pytest.approx(math.log(2.0))

    def test_half_integer_example(self):
        # m=3, k=3/2: prod of i(2k+i-1) = 3 * 8 * 15 = 360
        assert P.log_mk_factorial(3, 1.5) == pytest.approx(math.log(360.0))

    def test_matches_direct_product(self):
        for k in (1.0, 1.5, 2.0, 3.0, 4.0):
            acc = 1.0
            for m in range(1, 21):
                acc *= m * (2 * k + m - 1)
                assert P.log_mk_factorial(m, k) == pytest.approx(math.log(acc), rel=1e-12)

    def test_monotone_in_m(self):
        for k in (1.0, 2.5):
            vals = [P.log_mk_factorial(m, k) for m in range(40)]
            assert all(b > a for a, b in zip(vals[1:], vals[2:]))

    def test_log_weight_bundle(self):
        w = P.LogWeight.of(4, 1.5)
        assert w.log_mk_factorial == pytest.approx(P.log_mk_factorial(4, 1.5))
        assert w.log_norm_k == pytest.approx(1.5 * math.log(4 * math.pi) - 0.5 * math.lgamma(3.0))


class TestGeneratingFunction:
    def test_zeta_zero(self):
        assert P.generating_function(0.0, 1.5, 0.8) == 1.0 + 0j

    def test_partial_sum_converges(self):
        zeta, k, y = 0.3, 1.0, 1.0
        closed = P.generating_function(zeta, k, y)
        total = 0.0
        m = 0
        while True:
            term = zeta**m * P.p_m(m, k, y) / math.factorial(m)
            total += term
            # geometric tail bound on the remaining terms
            if m > 4 and abs(term) * abs(zeta) / (1 - abs(zeta)) < 1e-12:
                break
            m += 1
        assert total == pytest.approx(closed, abs=1e-10)

    def test_derivative_at_zero_is_p1(self):
        k, y = 1.5, 0.9
        h = 1e-6
        fd = (P.generating_function(h, k, y) - P.generating_function(-h, k, y)) / (2 * h)
        assert fd.real == pytest.approx(P.p_m(1, k, y), rel=1e-8)
        assert abs(fd.imag) < 1e-12

    def test_rejects_outside_disk(self):
        with pytest.raises(InvalidLabel):
            P.generating_function(1.0, 1.0, 1.0)


class TestLadderPolynomial:
    def test_degree_exactly_m(self):
        # leading coefficient (4 pi)^m: p_m(y) / y^m approaches it for large y
        for m in (1, 3, 6):
            p = P.LadderPolynomial(m, 1.5)
            assert p.degree == m
            y = 1e6
            assert p(y) / y**m == pytest.approx(p.leading_coefficient, rel=1e-4)

    def test_matches_function_form(self):
        p = P.LadderPolynomial(4, 2.0)
        y = np.array([0.2, 1.1, 3.0])
        assert np.array_equal(p(y), P.p_m(4, 2.0, y))
        assert np.array_equal(p.deriv(y), P.p_m_deriv(4, 2.0, y))

    def test_validation(self):
        with pytest.raises(InvalidDegree):
            P.LadderPolynomial(-1, 1.0)
        with pytest.raises(InvalidLabel):
            P.LadderPolynomial(2, 0.8)
