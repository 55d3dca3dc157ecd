"""Named verification suites: every identity the package claims, as pass/fail checks.

Each suite returns a list of CheckResult rows (residual, tolerance, verdict) so
the command-line runner can emit a machine-readable report.  Numerical failures
inside a check (quadrature that cannot reach its tolerance) are recorded on the
row instead of aborting the suite.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra, groups, morse, polynomials, quadrature, states, uncertainty, wavelets
from .errors import InvalidParameter, QuadratureFailure, Su11Error


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float
    passed: bool
    note: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
            "note": self.note,
        }


@dataclass(frozen=True)
class VerifyConfig:
    quad_tol: float = 1e-10
    tail_tol: float = 1e-14
    proj_tol: float = 1e-8
    grid: wavelets.GridSpec = field(default_factory=lambda: wavelets.DEFAULT_GRID)

    def scheme(self):
        return quadrature.DEFAULT_SCHEME.with_tol(self.quad_tol)


def _check(name, residual, tol, note=""):
    residual = float(residual)
    return CheckResult(name, residual, tol, bool(residual < tol), note)


def _failed(name, tol, exc):
    achieved = getattr(exc, "achieved", None)
    res = float(achieved) if achieved is not None else math.inf
    return CheckResult(name, res, tol, False, f"{type(exc).__name__}: {exc}")


def _guarded(checks, name, tol, fn):
    try:
        checks.extend(fn())
    except Su11Error as exc:
        checks.append(_failed(name, tol, exc))


def suite_algebra(config=None):
    """Commutation relations and the Casimir on banded generators, interior rows."""
    checks = []
    for two_k in (2, 3, 4, 5):
        label = algebra.RepLabel(two_k)
        k = label.k
        n = 44
        worst_comm = 0.0
        worst_cas = 0.0
        for m in range(0, 41):
            s = algebra.basis_state(label, m, n)

            def comm(x, y, s=s):
                xy = algebra.apply_generator(x, algebra.apply_generator(y, s)).coeffs
                yx = algebra.apply_generator(y, algebra.apply_generator(x, s)).coeffs
                return xy - yx

            interior = slice(0, n - 1)
            r1 = comm("J1", "J2") + 1j * algebra.apply_generator("J0", s).coeffs
            r2 = comm("J2", "J0") - 1j * algebra.apply_generator("J1", s).coeffs
            r3 = comm("J0", "J1") - 1j * algebra.apply_generator("J2", s).coeffs
            r4 = comm("B", "A") - 1j * algebra.apply_generator("A", s).coeffs
            for r in (r1, r2, r3, r4):
                worst_comm = max(worst_comm, float(np.max(np.abs(r[interior]))))
            cas = algebra.casimir_apply(s).coeffs
            worst_cas = max(worst_cas, abs(cas[m] - k * (1 - k)))
        checks.append(_check(f"commutators two_k={two_k}", worst_comm, 1e-12))
        checks.append(_check(f"casimir two_k={two_k}", worst_cas, 1e-12))
    return checks


def suite_orthonormality(config=None):
    """<km|kn> = delta_mn by half-line quadrature for 2k in {2,3,4}, m,n <= 15."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []
    for two_k in (2, 3, 4):
        k = two_k / 2.0
        tol = 1e-8

        def run(two_k=two_k, k=k, tol=tol):
            fs = [states.basis_halfline(k, m) for m in range(16)]
            worst = 0.0
            for i in range(16):
                for j in range(i, 16):
                    v = quadrature.inner_product_halfline(k, fs[i], fs[j], scheme)
                    worst = max(worst, abs(v - (1.0 if i == j else 0.0)))
            return [_check(f"orthonormality two_k={two_k}", worst, tol)]

        _guarded(checks, f"orthonormality two_k={two_k}", tol, run)
    return checks


def suite_realizations(config=None):
    """Laplace and Cayley intertwiners against the closed-form bases."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []
    rng = np.random.default_rng(2024)
    ws = 0.2 + 2.2 * rng.random(20) + 1j * rng.normal(0, 1.2, 20)
    for two_k in (2, 3):
        k = two_k / 2.0

        def run_laplace(k=k, two_k=two_k):
            worst = 0.0
            for m in range(9):
                psi = states.basis_halfline(k, m)
                target = states.basis_halfplane(k, m)
                for w in ws:
                    got = states.laplace_intertwiner(k, psi, w, scheme)
                    worst = max(worst, abs(got - target(w)))
            return [_check(f"laplace basis two_k={two_k}", worst, 1e-7)]

        _guarded(checks, f"laplace basis two_k={two_k}", 1e-7, run_laplace)

        zs = 0.9 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
        worst = 0.0
        for m in range(9):
            f = states.cayley_pullback(k, states.basis_halfplane(k, m))
            target = states.basis_disk(k, m)
            worst = max(worst, float(np.max(np.abs(f(zs) - target(zs)))))
        checks.append(_check(f"cayley basis two_k={two_k}", worst, 1e-10))
    return checks


def _zeta_grid(n_side=5, radius=0.8):
    rs = np.linspace(0.1, radius, n_side)
    phis = np.linspace(0.0, 2 * math.pi, n_side, endpoint=False)
    return [r * cmath.exp(1j * p) for r in rs for p in phis]


def suite_coherent(config=None):
    """Coefficient series, generating function and closed form agree; phase relation."""
    config = config or VerifyConfig()
    checks = []
    label = algebra.RepLabel(3)
    k = label.k
    ys = np.array([0.05, 0.2, 0.7, 1.6, 3.2])
    worst_routes = 0.0
    worst_norm = 0.0
    for zeta in _zeta_grid(5, 0.8):
        st = algebra.coherent_coeffs(label, zeta, tail_tol=config.tail_tol)
        series = states.coeff_function(k, st.coeffs)(ys)
        closed = states.coherent_halfline(k, zeta)(ys)
        pref = math.exp(
            k * math.log(4 * math.pi) - 0.5 * math.lgamma(2 * k)
            + k * math.log1p(-abs(zeta) ** 2)
        )
        gen = pref * ys ** (2 * k - 1) * np.exp(-2 * math.pi * ys) * polynomials.generating_function(zeta, k, ys)
        worst_routes = max(
            worst_routes,
            float(np.max(np.abs(series - closed))),
            float(np.max(np.abs(gen - closed))),
        )
        worst_norm = max(worst_norm, abs(st.norm() - 1.0))
    checks.append(_check("coherent three-route agreement", worst_routes, 1e-9))
    checks.append(_check("coherent norms", worst_norm, 1e-9))

    rng = np.random.default_rng(7)
    worst_phase = 0.0
    for _ in range(20):
        a = math.exp(rng.normal(0, 0.8))
        b = rng.normal(0, 1.5)
        m0 = groups.AffineElement(a, b)
        zeta = groups.affine_to_zeta(m0)
        phase = ((1 + zeta) / (1 + zeta.conjugate())) ** k
        lhs = states.affine_cs_halfline(k, m0)(ys)
        rhs = phase * states.coherent_halfline(k, zeta)(ys)
        worst_phase = max(worst_phase, float(np.max(np.abs(lhs - rhs))))
    checks.append(_check("affine/Perelomov phase relation", worst_phase, 1e-12))
    return checks


def suite_means(config=None):
    """Closed-form mean values against coefficient-space expectations."""
    config = config or VerifyConfig()
    checks = []
    label = algebra.RepLabel(3)
    k = label.k
    worst = 0.0
    worst_dir = 0.0
    for zeta in _zeta_grid(5, 0.8):
        st = algebra.coherent_coeffs(label, zeta, tail_tol=config.tail_tol)
        x = abs(zeta) ** 2
        j0 = k * (1 + x) / (1 - x)
        j1 = k * (zeta + zeta.conjugate()).real / (1 - x)
        j2 = (1j * k * (zeta - zeta.conjugate())).real / (1 - x)
        for name, ref in (("J0", j0), ("J1", j1), ("J2", j2)):
            got = algebra.expectation(name, st).real
            worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
        tau = 2 * math.atanh(abs(zeta))
        phi = (-cmath.phase(zeta)) % (2 * math.pi)
        direction = np.array([math.cosh(tau), math.sinh(tau) * math.cos(phi), math.sinh(tau) * math.sin(phi)])
        got = np.array([algebra.expectation(n, st).real for n in ("J0", "J1", "J2")])
        worst_dir = max(worst_dir, float(np.max(np.abs(got - k * direction))) / max(1.0, float(np.max(np.abs(k * direction)))))
    checks.append(_check("coherent mean values", worst, 1e-10))
    checks.append(_check("mean vector direction", worst_dir, 1e-10))

    rng = np.random.default_rng(11)
    worst_ab = 0.0
    for _ in range(25):
        a = math.exp(rng.normal(0, 0.7))
        b = rng.normal(0, 1.2)
        st = algebra.affine_coeffs(label, groups.AffineElement(a, b), tail_tol=config.tail_tol)
        worst_ab = max(worst_ab, abs(algebra.expectation("A", st).real - k / a) / (k / a))
        ref_b = -k * b / a
        worst_ab = max(worst_ab, abs(algebra.expectation("B", st).real - ref_b) / max(1.0, abs(ref_b)))
    checks.append(_check("affine mean values", worst_ab, 1e-10))
    return checks


def suite_saturation(config=None):
    """Annihilation residuals and (non-)saturation of the uncertainty relations."""
    config = config or VerifyConfig()
    checks = []
    label = algebra.RepLabel(3)
    k = label.k
    worst_pro = 0.0
    worst_annih = 0.0
    worst_gen = 0.0
    for zeta in _zeta_grid(4, 0.7):
        st = algebra.coherent_coeffs(label, zeta, tail_tol=config.tail_tol)
        pro4 = (
            algebra.apply_generator("J0", st).coeffs
            - zeta * algebra.apply_generator("Jplus", st).coeffs
            - k * st.coeffs
        )
        pro5 = (
            zeta * algebra.apply_generator("J0", st).coeffs
            - algebra.apply_generator("Jminus", st).coeffs
            + k * zeta * st.coeffs
        )
        worst_pro = max(worst_pro, float(np.linalg.norm(pro4)), float(np.linalg.norm(pro5)))
        sr = uncertainty.saturation_residuals(zeta, label)
        worst_annih = max(
            worst_annih,
            *(r for r in (sr.j1_j2, sr.j0_j1, sr.j0_j2, sr.affine) if r is not None),
        )
        for pair in (("J1", "J2"), ("A", "B")):
            rep = uncertainty.report(pair, st)
            worst_gen = max(worst_gen, abs(rep.generalized_residual))
    checks.append(_check("annihilation pro4/pro5", worst_pro, 1e-9))
    checks.append(_check("centered annihilation residuals", worst_annih, 1e-9))
    checks.append(_check("generalized relation equality on coherent states", worst_gen, 1e-9))

    worst_real = 0.0
    for z in (0.2, 0.45, 0.7, -0.35, -0.6):
        rep = uncertainty.report(("J1", "J2"), algebra.coherent_coeffs(label, z, tail_tol=config.tail_tol))
        worst_real = max(worst_real, abs(rep.correlation), abs(rep.usual_residual))
    checks.append(_check("usual relation equality for real zeta (J1,J2)", worst_real, 1e-9))

    rep1 = uncertainty.report(("J1", "J2"), algebra.basis_state(label, 1, 48))
    gap = rep1.usual_residual
    checks.append(
        CheckResult("strict inequality gap on |k1>", gap, 0.1 * k, gap > 0.1 * k,
                    "gap must exceed 0.1 k")
    )
    return checks


def suite_completeness(config=None):
    """Discretized resolution of identity, refinement behavior, fitted constant."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []
    k = 1.0
    label = algebra.RepLabel(2)
    w = wavelets.MotherWavelet.fundamental(k)
    test = [algebra.basis_state(label, m, 8) for m in range(3)]

    def run():
        rep = wavelets.identity_resolution_check(w, test, config.grid, scheme)
        rep_fine = wavelets.identity_resolution_check(w, test, config.grid.refined(), scheme)
        out = [
            _check("completeness max deviation", rep.max_deviation_ab, 2e-2),
            CheckResult(
                "completeness refinement decrease",
                rep_fine.max_deviation_ab,
                rep.max_deviation_ab,
                rep_fine.max_deviation_ab < rep.max_deviation_ab,
                "refined deviation must drop below the default one",
            ),
            CheckResult(
                "zeta-route discretization agreement",
                rep.route_difference,
                rep.combined_grid_error + 1e-12,
                rep.routes_agree,
            ),
        ]
        fitted = wavelets.fitted_reconstruction_constant(w, config.grid, scheme)
        theory = (2 * k - 1) / (4 * math.pi)
        out.append(_check("fitted reconstruction constant", abs(fitted - theory) / theory, 1e-2))
        return out

    _guarded(checks, "completeness", 2e-2, run)
    return checks


def suite_admissibility(config=None):
    """Admissibility integrals with the analytic value and the divergent edge."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []

    def run():
        w = wavelets.MotherWavelet.fundamental(1.0)
        val = wavelets.check_admissibility(w, scheme)
        out = [_check("admissibility of <y|10>", abs(val - 4 * math.pi), 1e-10)]
        try:
            morse.morse_fundamental(0.5)
            out.append(CheckResult("reject s = 1/2", math.inf, 0.0, False, "no rejection raised"))
        except InvalidParameter:
            out.append(CheckResult("reject s = 1/2", 0.0, 1.0, True))
        finite = []
        for s in (0.75, 1.5, 3.0):
            mw = wavelets.MotherWavelet(morse.morse_fundamental(s).state)
            finite.append(math.isfinite(wavelets.check_admissibility(mw, scheme)))
        out.append(CheckResult("finite admissibility for s > 1/2", 0.0, 1.0, all(finite)))
        return out

    _guarded(checks, "admissibility", 1e-10, run)
    return checks


def suite_morse(config=None):
    """s = 1 orbit matches the Perelomov rays; s = 2 seed is not a J0 eigenstate."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []

    def run():
        k = 1.0
        worst = 0.0
        for a in (0.4, 1.0, 2.5):
            for b in (-2.0, 0.0, 1.5):
                m0 = groups.AffineElement(a, b)
                fam = morse.morse_family(1.0, m0)
                zeta = groups.affine_to_zeta(m0)
                per = states.coherent_halfline(k, zeta)
                ov = quadrature.inner_product_halfline(k, fam, per, scheme)
                worst = max(worst, abs(abs(ov) - 1.0))
        out = [_check("s=1 orbit matches Perelomov rays", worst, 1e-10)]

        phi = morse.morse_fundamental(2.0).state
        j0phi = states.generator_action_halfline("J0", k, phi)
        mean = quadrature.inner_product_halfline(k, phi, j0phi, scheme).real
        norm2 = quadrature.inner_product_halfline(k, j0phi, j0phi, scheme).real
        residual = math.sqrt(max(norm2 - mean**2, 0.0))
        out.append(
            CheckResult("s=2 fails the J0 eigenstate test", residual, 0.1, residual > 0.1,
                        "residual must exceed 0.1")
        )
        return out

    _guarded(checks, "morse", 1e-10, run)
    return checks


def suite_roundtrip(config=None):
    """Analyze-then-synthesize on the fundamental state and a translated copy."""
    config = config or VerifyConfig()
    scheme = config.scheme()
    checks = []

    def run():
        k = 1.0
        w = wavelets.MotherWavelet.fundamental(k)
        psi = states.basis_halfline(k, 0)
        grid = wavelets.analyze(psi, w, config.grid, scheme)
        res = wavelets.synthesize(grid, w, scheme=scheme, estimate_error=False)
        err0 = wavelets.rel_l2_error(k, res.function, psi, scheme)
        out = [_check("reconstruction of |k0>", err0, 1e-2)]
        moved = states.affine_action(k, groups.AffineElement(1.8, 2.5), psi)
        grid2 = wavelets.analyze(moved, w, config.grid, scheme)
        res2 = wavelets.synthesize(grid2, w, scheme=scheme, estimate_error=False)
        out.append(_check("reconstruction of a translated state",
                          wavelets.rel_l2_error(k, res2.function, moved, scheme), 1e-2))
        return out

    _guarded(checks, "roundtrip", 1e-2, run)
    return checks


SUITES = {
    "algebra": suite_algebra,
    "orthonormality": suite_orthonormality,
    "realizations": suite_realizations,
    "coherent": suite_coherent,
    "means": suite_means,
    "saturation": suite_saturation,
    "completeness": suite_completeness,
    "admissibility": suite_admissibility,
    "morse": suite_morse,
    "roundtrip": suite_roundtrip,
}


def run_suite(name, config=None):
    """Run one suite (or 'all'); returns the flat list of check results."""
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](config))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](config)
