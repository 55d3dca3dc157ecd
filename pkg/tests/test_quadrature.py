import cmath
import math

import numpy as np
import pytest

from su11wavelets import algebra as A
from su11wavelets import groups as G
from su11wavelets import quadrature as Q
from su11wavelets import states as S
from su11wavelets.errors import QuadratureFailure


class TestHalfLineInnerProduct:
    def test_fundamental_norm(self):
        for k in (1.0, 1.5, 2.0):
            v = Q.inner_product_halfline(k, S.basis_halfline(k, 0), S.basis_halfline(k, 0))
            assert v.real == pytest.approx(1.0, abs=1e-10)
            assert abs(v.imag) < 1e-14

    def test_orthonormality(self):
        k = 1.5
        fs = [S.basis_halfline(k, m) for m in range(16)]
        for i in range(0, 16, 3):
            for j in range(i, 16, 2):
                v = Q.inner_product_halfline(k, fs[i], fs[j])
                assert abs(v - (1.0 if i == j else 0.0)) < 1e-10

    def test_coherent_overlap_magnitude(self):
        k = 2.0
        zeta = 0.55 * cmath.exp(0.9j)
        v = Q.inner_product_halfline(k, S.basis_halfline(k, 0), S.coherent_halfline(k, zeta))
        assert abs(v) == pytest.approx((1 - abs(zeta) ** 2) ** k, rel=1e-10)

    def test_conjugate_symmetry_exact(self):
        k = 1.5
        f = S.coherent_halfline(k, 0.3 + 0.25j)
        g = S.coherent_halfline(k, -0.2 + 0.5j)
        assert Q.inner_product_halfline(k, f, g) == np.conj(Q.inner_product_halfline(k, g, f))

    def test_oscillatory_path_matches_closed_form(self):
        # large translation forces the panel branch; compare with the exact
        # coefficient overlap <k0|ab> = phase * (1 - |zeta|^2)^k
        k = 1.0
        m0 = G.AffineElement(0.8, 14.0)
        zeta = G.affine_to_zeta(m0)
        phase = ((1 + zeta) / (1 + zeta.conjugate())) ** k
        expected = phase * (1 - abs(zeta) ** 2) ** k
        v = Q.inner_product_halfline(k, S.basis_halfline(k, 0), S.affine_cs_halfline(k, m0))
        assert v == pytest.approx(expected, abs=1e-10)

    def test_determinism(self):
        k = 1.5
        f = S.coherent_halfline(k, 0.3 + 0.25j)
        g = S.basis_halfline(k, 3)
        a = Q.inner_product_halfline(k, f, g)
        b = Q.inner_product_halfline(k, f, g)
        assert a == b

    def test_unreachable_tolerance_fails(self):
        k = 1.0
        scheme = Q.DEFAULT_SCHEME.with_tol(1e-30)
        with pytest.raises(QuadratureFailure):
            Q.inner_product_halfline(k, S.basis_halfline(k, 0), S.basis_halfline(k, 0), scheme)

    def test_error_estimate_is_honest(self):
        k = 1.0
        f = S.basis_halfline(k, 4)
        g = S.coherent_halfline(k, 0.4 + 0.3j)
        v, err = Q.inner_product_halfline(k, f, g, return_error=True)
        finer = Q.QuadratureScheme(base_nodes=256, quad_tol=1e-12)
        v2 = Q.inner_product_halfline(k, f, g, finer)
        assert abs(v - v2) <= max(err, 1e-13)


class TestWindows:
    def test_decay_window_covers_mass(self):
        y1 = Q.decay_window(1.0, 4 * math.pi, 1e-10)
        # remaining mass of y e^{-4 pi y} beyond y1 is far below the tolerance
        t = 4 * math.pi * y1
        assert (1 + t) * math.exp(-t) < 1e-11

    def test_product_nodes_support(self):
        y, w = Q.product_nodes(0.0, 1.0, 0.0, (0.5, 2.0), Q.DEFAULT_SCHEME, 0)
        assert y.min() >= 0.5 and y.max() <= 2.0
        val = float(np.sum(w * np.exp(-y)))
        assert val == pytest.approx(math.exp(-0.5) - math.exp(-2.0), rel=1e-12)

    def test_empty_support(self):
        f = S.basis_halfline(1.0, 0)
        g = S.HalfLineFunction(1.0, lambda y: np.ones_like(y), support=(5.0, 6.0), origin_power=0.0)
        h = S.HalfLineFunction(1.0, lambda y: np.ones_like(y), support=(1.0, 2.0), origin_power=0.0)
        v = Q.inner_product_halfline(1.0, g, h)
        assert v == 0.0


class TestDiskInnerProduct:
    def test_fundamental_norm(self):
        for k in (1.0, 1.5, 2.0):
            v = Q.disk_inner_product(k, S.basis_disk(k, 0), S.basis_disk(k, 0))
            assert abs(v - 1.0) < 1e-7

    def test_angular_orthogonality(self):
        k = 1.5
        v = Q.disk_inner_product(k, S.basis_disk(k, 1), S.basis_disk(k, 4))
        assert abs(v) < 1e-10

    def test_coherent_norm(self):
        k = 2.0
        f = S.coherent_disk(k, 0.45 * cmath.exp(1.2j))
        assert abs(Q.disk_inner_product(k, f, f) - 1.0) < 1e-7

    def test_coherent_overlap_matches_coefficients(self):
        k = 1.5
        z1, z2 = 0.3 + 0.2j, -0.25 + 0.4j
        label = A.RepLabel.from_k(k)
        c1 = A.coherent_coeffs(label, z1)
        c2 = A.coherent_coeffs(label, z2)
        expected = A.inner(c1, c2)
        got = Q.disk_inner_product(k, S.coherent_disk(k, z1), S.coherent_disk(k, z2))
        assert got == pytest.approx(expected, abs=1e-9)

    def test_unreachable_tolerance_fails(self):
        k = 1.0
        with pytest.raises(QuadratureFailure):
            Q.disk_inner_product(
                k, S.basis_disk(k, 0), S.basis_disk(k, 0), Q.DEFAULT_SCHEME.with_tol(1e-30)
            )


class TestRefinementConvergence:
    def test_halving_changes_less_than_estimate(self):
        # the reported estimate bounds the step to the next refinement level
        k = 1.5
        f = S.coherent_halfline(k, 0.5 * cmath.exp(0.4j))
        g = S.basis_halfline(k, 6)
        base = Q.QuadratureScheme(base_nodes=32, quad_tol=1e-9)
        v1, err1 = Q.inner_product_halfline(k, f, g, base, return_error=True)
        v2 = Q.inner_product_halfline(k, f, g, Q.QuadratureScheme(base_nodes=64, quad_tol=1e-12))
        assert abs(v1 - v2) <= max(err1, 1e-12)


class TestSchemeInvariants:
    def test_node_weights_positive(self):
        for level in (0, 1):
            y, w = Q.product_nodes(1.0, 4 * math.pi, 0.0, None, Q.DEFAULT_SCHEME, level)
            assert y.size >= 2 and np.all(w > 0)
            y, w = Q.product_nodes(1.5, 4 * math.pi, 6.0, None, Q.DEFAULT_SCHEME, level)
            assert y.size >= 2 and np.all(w > 0)
            y, w = Q.product_nodes(0.5, 2.0, 0.0, (0.0, 3.0), Q.DEFAULT_SCHEME, level)
            assert np.all(w > 0)
