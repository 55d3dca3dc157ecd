import cmath
import math

import numpy as np
import pytest

from su11wavelets import algebra as A
from su11wavelets import groups as G
from su11wavelets import quadrature as Q
from su11wavelets import states as S
from su11wavelets.errors import DomainError, InvalidLabel, MissingDerivative

YS = np.array([0.03, 0.17, 0.6, 1.4, 3.1])


class TestBasisHalfline:
    def test_fundamental_closed_form_k1(self):
        f = S.basis_halfline(1.0, 0)
        assert f(YS) == pytest.approx(4 * math.pi * YS * np.exp(-2 * math.pi * YS))

    def test_fundamental_ode(self):
        # (y d/dy + 2 pi y - 2k + 1) <y|k0> = 0
        for k in (1.0, 1.5, 2.5):
            f = S.basis_halfline(k, 0)
            residual = YS * f.deriv(YS) + (2 * math.pi * YS - 2 * k + 1) * f(YS)
            assert np.max(np.abs(residual)) < 1e-12

    def test_norms_by_quadrature(self):
        k = 1.0
        for m in range(11):
            n = Q.norm_halfline(k, S.basis_halfline(k, m))
            assert n == pytest.approx(1.0, abs=1e-10)

    def test_rejects_bad_label(self):
        with pytest.raises(InvalidLabel):
            S.basis_halfline(0.5, 0)
        with pytest.raises(InvalidLabel):
            S.basis_halfline(1.0, -1)

    def test_second_derivative_consistent(self):
        f = S.basis_halfline(1.5, 3)
        h = 1e-5
        fd = (f.deriv(YS + h) - f.deriv(YS - h)) / (2 * h)
        assert f.deriv(YS, order=2) == pytest.approx(fd, rel=1e-6)


class TestBasisDiskAndHalfplane:
    def test_disk_m0_constant(self):
        k = 1.5
        f = S.basis_disk(k, 0)
        zs = np.array([0.0, 0.3 + 0.2j, -0.8j])
        assert f(zs) == pytest.approx(np.full(3, math.sqrt((2 * k - 1) / math.pi)))

    def test_disk_vanishing_at_origin(self):
        f = S.basis_disk(1.0, 3)
        assert f(0.0) == 0.0

    def test_disk_modulus_depends_on_radius_only(self):
        f = S.basis_disk(2.0, 4)
        vals = f(0.5 * np.exp(1j * np.linspace(0, 2 * math.pi, 9)))
        assert np.max(np.abs(np.abs(vals) - abs(f(0.5)))) < 1e-15

    def test_disk_domain_guard(self):
        with pytest.raises(DomainError):
            S.basis_disk(1.0, 0)(1.0 + 0j)

    def test_halfplane_vanishes_at_one(self):
        h = S.basis_halfplane(1.5, 2)
        assert h(1.0 + 0j) == 0.0

    def test_halfplane_m0_value(self):
        k = 1.0
        h = S.basis_halfplane(k, 0)
        # sqrt(1/pi) * 2 / (w+1)^2 at w = 1
        assert h(1.0 + 0j) == pytest.approx(math.sqrt(1 / math.pi) * 2 / 4)

    def test_halfplane_domain_guard(self):
        with pytest.raises(DomainError):
            S.basis_halfplane(1.0, 0)(-0.2 + 1j)

    def test_cayley_matches_disk_basis(self):
        rng = np.random.default_rng(0)
        zs = 0.85 * np.sqrt(rng.random(12)) * np.exp(2j * math.pi * rng.random(12))
        for k in (1.0, 1.5, 2.0):
            for m in range(6):
                f = S.cayley_pullback(k, S.basis_halfplane(k, m))
                assert np.max(np.abs(f(zs) - S.basis_disk(k, m)(zs))) < 1e-12


class TestCoherentStates:
    def test_zeta_zero_reduces_to_fundamental(self):
        for k in (1.0, 2.0):
            f0 = S.basis_halfline(k, 0)
            fz = S.coherent_halfline(k, 0j)
            assert np.max(np.abs(f0(YS) - fz(YS))) < 1e-14
            assert S.coherent_disk(k, 0j)(0.2 + 0.1j) == pytest.approx(S.basis_disk(k, 0)(0.2 + 0.1j))
            assert S.coherent_halfplane(k, 0j)(0.7) == pytest.approx(S.basis_halfplane(k, 0)(0.7))

    def test_series_expansion_matches_closed_form(self):
        k = 1.5
        zeta = 0.45 * cmath.exp(0.8j)
        st = A.coherent_coeffs(A.RepLabel.from_k(k), zeta)
        series = S.coeff_function(k, st.coeffs)(YS)
        closed = S.coherent_halfline(k, zeta)(YS)
        assert np.max(np.abs(series - closed)) < 1e-9

    def test_disk_value_at_origin(self):
        k = 2.0
        zeta = 0.3 - 0.5j
        f = S.coherent_disk(k, zeta)
        assert f(0j) == pytest.approx(math.sqrt((2 * k - 1) / math.pi) * (1 - abs(zeta) ** 2) ** k)

    def test_halfplane_denominator_never_vanishes(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            zeta = 0.95 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
            w = complex(0.05 + 3 * rng.random(), rng.normal(0, 2))
            den = w + 1 - zeta * (1 - w)
            assert abs(den) > 1e-3

    def test_cayley_maps_coherent_states(self):
        k = 1.5
        zeta = 0.4 + 0.3j
        f = S.cayley_pullback(k, S.coherent_halfplane(k, zeta))
        zs = np.array([0.1 + 0.2j, -0.5j, 0.6])
        assert np.max(np.abs(f(zs) - S.coherent_disk(k, zeta)(zs))) < 1e-12

    def test_decay_guaranteed(self):
        f = S.coherent_halfline(1.0, 0.8 * cmath.exp(2.9j))
        assert f.decay_rate > 0


class TestAffineStates:
    def test_identity_label_gives_fundamental(self):
        k = 1.5
        f = S.affine_cs_halfline(k, G.AffineElement(1.0, 0.0))
        assert np.max(np.abs(f(YS) - S.basis_halfline(k, 0)(YS))) < 1e-14

    def test_matches_affine_action_on_fundamental(self):
        k = 2.0
        m0 = G.AffineElement(2.2, -1.3)
        lhs = S.affine_cs_halfline(k, m0)
        rhs = S.affine_action(k, m0, S.basis_halfline(k, 0))
        assert np.max(np.abs(lhs(YS) - rhs(YS))) < 1e-13

    def test_phase_relation(self):
        k = 1.5
        for a, b in ((0.5, 0.0), (2.0, 1.5), (4.0, -2.2)):
            m0 = G.AffineElement(a, b)
            zeta = G.affine_to_zeta(m0)
            phase = ((1 + zeta) / (1 + zeta.conjugate())) ** k
            lhs = S.affine_cs_halfline(k, m0)(YS)
            rhs = phase * S.coherent_halfline(k, zeta)(YS)
            assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestAffineAction:
    def test_identity(self):
        psi = S.basis_halfline(1.0, 2)
        out = S.affine_action(1.0, G.AffineElement(1.0, 0.0), psi)
        assert np.max(np.abs(out(YS) - psi(YS))) < 1e-15

    def test_composition_matches_group_law(self):
        k = 1.5
        psi = S.basis_halfline(k, 1)
        m1, m2 = G.AffineElement(1.6, 0.7), G.AffineElement(0.6, -1.1)
        seq = S.affine_action(k, m1, S.affine_action(k, m2, psi))
        combined = S.affine_action(k, G.compose_affine(m1, m2), psi)
        assert np.max(np.abs(seq(YS) - combined(YS))) < 1e-13

    def test_norm_preserved(self):
        k = 1.0
        psi = S.basis_halfline(k, 2)
        out = S.affine_action(k, G.AffineElement(2.4, 3.1), psi)
        assert Q.norm_halfline(k, out) == pytest.approx(1.0, abs=1e-10)

    def test_derivative_handles_propagate(self):
        k = 1.0
        out = S.affine_action(k, G.AffineElement(1.5, 0.8), S.basis_halfline(k, 1))
        h = 1e-6
        fd = (out(YS + h) - out(YS - h)) / (2 * h)
        assert out.deriv(YS) == pytest.approx(fd, rel=1e-6)


class TestLaplace:
    def test_basis_maps_to_halfplane_basis(self):
        rng = np.random.default_rng(2)
        for k in (1.0, 1.5):
            for m in range(6):
                psi = S.basis_halfline(k, m)
                target = S.basis_halfplane(k, m)
                for _ in range(4):
                    w = complex(0.2 + 2 * rng.random(), rng.normal(0, 1.0))
                    assert S.laplace_intertwiner(k, psi, w) == pytest.approx(target(w), abs=1e-9)

    def test_coherent_maps_to_halfplane_coherent(self):
        k = 1.5
        zeta = 0.5 * cmath.exp(-0.6j)
        psi = S.coherent_halfline(k, zeta)
        target = S.coherent_halfplane(k, zeta)
        for w in (0.8, 1.5 + 0.9j, 0.3 - 1.2j):
            assert S.laplace_intertwiner(k, psi, w) == pytest.approx(target(w), abs=1e-9)

    def test_linearity(self):
        k = 1.0
        f, g = S.basis_halfline(k, 0), S.basis_halfline(k, 3)
        combo = S.HalfLineFunction(
            k, lambda y: 0.7 * f.f(y) - 0.2j * g.f(y),
            origin_power=min(f.origin_power, g.origin_power), decay_rate=2 * math.pi,
        )
        w = 1.1 + 0.4j
        lhs = S.laplace_intertwiner(k, combo, w)
        rhs = 0.7 * S.laplace_intertwiner(k, f, w) - 0.2j * S.laplace_intertwiner(k, g, w)
        assert lhs == pytest.approx(rhs, abs=1e-11)

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            S.laplace_intertwiner(1.0, S.basis_halfline(1.0, 0), -1.0 + 2j)

    def test_laplace_function_wrapper(self):
        k = 1.0
        h = S.laplace_function(k, S.basis_halfline(k, 1))
        assert h(0.9 + 0.2j) == pytest.approx(S.basis_halfplane(k, 1)(0.9 + 0.2j), abs=1e-9)


class TestGeneratorActions:
    def test_j0_eigen_on_basis(self):
        for k in (1.0, 2.5):
            for m in (0, 1, 4):
                psi = S.basis_halfline(k, m)
                out = S.generator_action_halfline("J0", k, psi)
                assert np.max(np.abs(out(YS) - (k + m) * psi(YS))) < 1e-12

    def test_a_is_multiplication(self):
        k = 1.5
        psi = S.basis_halfline(k, 0)
        out = S.generator_action_halfline("A", k, psi)
        assert out(YS) == pytest.approx(2 * math.pi * YS * psi(YS))

    def test_a_minus_ib_on_fundamental(self):
        for k in (1.0, 2.0):
            psi = S.basis_halfline(k, 0)
            a = S.generator_action_halfline("A", k, psi)
            b = S.generator_action_halfline("B", k, psi)
            assert np.max(np.abs(a(YS) - 1j * b(YS) - k * psi(YS))) < 1e-12

    def test_missing_derivative(self):
        bare = S.HalfLineFunction(1.0, lambda y: np.exp(-y), origin_power=0, decay_rate=1.0)
        with pytest.raises(MissingDerivative):
            S.generator_action_halfline("J2", 1.0, bare)
        with pytest.raises(MissingDerivative):
            bare.deriv(YS)

    def test_ladder_consistency_with_coefficients(self):
        # J1 = (J+ + J-)/2 in function space vs the banded action
        k, m, n = 1.5, 3, 24
        label = A.RepLabel.from_k(k)
        st = A.basis_state(label, m, n)
        banded = A.apply_generator("J1", st).coeffs
        psi = S.basis_halfline(k, m)
        out = S.generator_action_halfline("J1", k, psi)
        series = S.coeff_function(k, banded)(YS)
        assert np.max(np.abs(out(YS) - series)) < 1e-10


class TestMobiusActions:
    def test_disk_rotation_covariance(self):
        # T(Gamma_theta) applied to a coherent state reproduces the rotated label
        k = 1.5
        zeta = 0.45 * cmath.exp(0.5j)
        theta = 1.3
        f = S.coherent_disk(k, zeta)
        moved = S.mobius_action_disk(k, G.rotation_to_su11(G.RotationElement(theta)), f)
        phase, zout = A.rotate_coherent(theta, zeta, A.RepLabel.from_k(k))
        target = S.coherent_disk(k, zout)
        zs = np.array([0.2 + 0.1j, -0.4j, 0.55])
        assert np.max(np.abs(moved(zs) - phase * target(zs))) < 1e-12

    def test_halfplane_affine_action_intertwines_laplace(self):
        # T(M(a,b)) after the Laplace transform equals Laplace after U(a,b)
        k = 1.0
        m0 = G.AffineElement(1.8, 0.6)
        psi = S.basis_halfline(k, 1)
        g = G.affine_to_sl2r(m0)
        lhs = S.mobius_action_halfplane(k, g, S.laplace_function(k, psi))
        rhs = S.laplace_function(k, S.affine_action(k, m0, psi))
        for w in (0.9, 1.4 + 0.7j):
            assert lhs(w) == pytest.approx(rhs(w), abs=1e-8)


class TestCrossRealization:
    def test_overlap_kernel(self):
        k = 1.5
        z1, z2 = 0.35 + 0.2j, -0.3 + 0.45j
        label = A.RepLabel.from_k(k)
        expected = A.inner(A.coherent_coeffs(label, z1), A.coherent_coeffs(label, z2))
        got = Q.inner_product_halfline(
            k, S.coherent_halfline(k, z1), S.coherent_halfline(k, z2)
        )
        assert got == pytest.approx(expected, abs=1e-9)

    def test_coefficient_duality(self):
        k = 2.0
        zeta = 0.5 * cmath.exp(1.9j)
        label = A.RepLabel.from_k(k)
        st = A.coherent_coeffs(label, zeta)
        for m in range(8):
            v = Q.inner_product_halfline(k, S.basis_halfline(k, m), S.coherent_halfline(k, zeta))
            assert v == pytest.approx(st.coeffs[m], abs=1e-9)

    def test_project_onto_basis_roundtrip(self):
        k = 1.5
        zeta = 0.4 - 0.25j
        label = A.RepLabel.from_k(k)
        st = A.coherent_coeffs(label, zeta)
        coeffs, err = S.project_onto_basis(k, S.coherent_halfline(k, zeta), st.order)
        assert err < 1e-9
        assert np.max(np.abs(coeffs - st.coeffs)) < 1e-9

    def test_three_spaces_intertwined(self):
        # half-line -> half-plane by Laplace, half-plane -> disk by Cayley
        k = 1.0
        rng = np.random.default_rng(5)
        for m in (0, 2, 5):
            psi = S.basis_halfline(k, m)
            h = S.laplace_function(k, psi)
            f = S.cayley_pullback(k, h)
            z = 0.7 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
            assert f(z) == pytest.approx(S.basis_disk(k, m)(z), abs=1e-8)
