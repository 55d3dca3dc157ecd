"""Canonical basis and coherent states in the three realization spaces.

Half-line functions carry analytic first and second derivative handles whenever
the closed form allows it (every family here is power * polynomial * exponential),
so differential-generator actions are exact rather than finite-difference.
Magnitude prefactors are assembled once per family in log space; the only
half-integer complex powers that occur, ((1+zeta)/(1+conj(zeta)))^k and
(1-|zeta|^2)^k, have positive-real-part or positive bases, so the principal
branch is safe.  All other complex powers carry the integer exponent 2k.
"""

import cmath
import math

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from . import quadrature
from .errors import DomainError, InvalidLabel, MissingDerivative, QuadratureFailure
from .groups import AffineElement
from .polynomials import _check_label, laguerre, laguerre_table

_FOUR_PI = 4 * math.pi
_TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class HalfLineFunction:
    """A function on y > 0 together with the hints quadrature needs.

    origin_power p and decay_rate c mean f ~ y^p * smooth * e^{-c y}; osc_rate b
    flags a phase factor e^{2 pi i b y}.  support, when set, bounds where the
    function is nonzero (sampled signals).
    """

    k: float
    f: Callable
    df: Optional[Callable] = None
    d2f: Optional[Callable] = None
    origin_power: float = 0.0
    decay_rate: float = 0.0
    osc_rate: float = 0.0
    support: Optional[Tuple[float, float]] = None
    poly_degree: int = 0
    label: str = field(default="", compare=False)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = self.f(y)
        return complex(out) if np.ndim(out) == 0 else out

    def deriv(self, y, order=1):
        handle = {1: self.df, 2: self.d2f}.get(order)
        if handle is None:
            raise MissingDerivative(f"{self.label or 'function'} has no order-{order} handle")
        return handle(np.asarray(y, dtype=float))


@dataclass(frozen=True)
class DiskFunction:
    """Analytic function on |z| < 1."""

    k: float
    f: Callable
    label: str = field(default="", compare=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("disk functions are defined strictly inside |z| < 1")
        out = self.f(z)
        return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class HalfPlaneFunction:
    """Holomorphic function on Re(w) > 0."""

    k: float
    f: Callable
    label: str = field(default="", compare=False)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(w.real <= 0.0):
            raise DomainError("half-plane functions are defined for Re(w) > 0")
        out = self.f(w)
        return complex(out) if np.ndim(out) == 0 else out


def _disk_norm_const(k, m):
    """sqrt((2k-1)/pi) * sqrt([m]_k!) / m!, assembled in log space."""
    from .polynomials import log_mk_factorial

    return math.sqrt((2 * k - 1) / math.pi) * math.exp(
        0.5 * log_mk_factorial(m, k) - math.lgamma(m + 1)
    )


def basis_halfline(k, m):
    """<y|km> = (4 pi)^k / sqrt(Gamma(2k) [m]_k!) y^{2k-1} e^{-2 pi y} p_m(y)."""
    _check_label(k)
    if m < 0:
        raise InvalidLabel(f"basis index must be nonnegative, got {m}")
    alpha = 2 * k - 1
    # (4pi)^k m! / sqrt(Gamma(2k) [m]_k!) = (4pi)^k sqrt(m! / Gamma(2k+m))
    logc = k * math.log(_FOUR_PI) + 0.5 * (math.lgamma(m + 1) - math.lgamma(2 * k + m))
    sign = -1.0 if m % 2 else 1.0

    def poly(y):
        return sign * math.exp(logc) * laguerre(m, alpha, _FOUR_PI * y)

    def dpoly(y):
        if m == 0:
            return np.zeros_like(y)
        return -sign * math.exp(logc) * _FOUR_PI * laguerre(m - 1, alpha + 1, _FOUR_PI * y)

    def d2poly(y):
        if m < 2:
            return np.zeros_like(y)
        return sign * math.exp(logc) * _FOUR_PI**2 * laguerre(m - 2, alpha + 2, _FOUR_PI * y)

    def envelope(y):
        return np.exp(alpha * np.log(y) - _TWO_PI * y)

    def value(y):
        return envelope(y) * poly(y)

    def dvalue(y):
        w = envelope(y)
        return w * ((alpha / y - _TWO_PI) * poly(y) + dpoly(y))

    def d2value(y):
        w = envelope(y)
        g = alpha / y - _TWO_PI
        return w * ((g * g - alpha / y**2) * poly(y) + 2 * g * dpoly(y) + d2poly(y))

    return HalfLineFunction(
        k, value, dvalue, d2value,
        origin_power=alpha, decay_rate=_TWO_PI, osc_rate=0.0, poly_degree=m,
        label=f"|k={k} m={m}> on y",
    )


def power_exp_function(k, pref, power, rho, label=""):
    """State of the form pref * y^power * e^{rho y}; derivatives are exact."""
    pref = complex(pref)
    rho = complex(rho)

    def value(y):
        return pref * np.exp(power * np.log(y) + rho * y)

    def dvalue(y):
        return (power / y + rho) * value(y)

    def d2value(y):
        g = power / y + rho
        return (g * g - power / y**2) * value(y)

    return HalfLineFunction(
        k, value, dvalue, d2value,
        origin_power=power, decay_rate=-rho.real, osc_rate=rho.imag / _TWO_PI, label=label,
    )


def _exp_family(k, pref, rho, label):
    return power_exp_function(k, pref, 2 * k - 1, rho, label)


def coherent_halfline(k, zeta):
    """<y|zeta> in closed form; decay is guaranteed by Re((zeta-1)/(zeta+1)) < 0."""
    _check_label(k)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    two_k = int(round(2 * k))
    mag = math.exp(k * math.log(_FOUR_PI) - 0.5 * math.lgamma(2 * k) + k * math.log1p(-abs(zeta) ** 2))
    pref = mag * (1 + zeta) ** (-two_k)
    rho = _TWO_PI * (zeta - 1) / (zeta + 1)
    return _exp_family(k, pref, rho, label=f"|zeta={zeta}> on y (k={k})")


def affine_cs_halfline(k, m0):
    """<y|ab> = (4 pi)^k / sqrt(Gamma(2k)) a^k e^{2 pi (-a+ib) y} y^{2k-1}."""
    _check_label(k)
    if not isinstance(m0, AffineElement):
        m0 = AffineElement(*m0)
    mag = math.exp(k * math.log(_FOUR_PI) - 0.5 * math.lgamma(2 * k) + k * math.log(m0.a))
    rho = _TWO_PI * complex(-m0.a, m0.b)
    return _exp_family(k, complex(mag), rho, label=f"|a={m0.a} b={m0.b}> on y (k={k})")


def basis_disk(k, m):
    """<z|km> = sqrt((2k-1)/pi) sqrt([m]_k!)/m! (i z)^m."""
    _check_label(k)
    if m < 0:
        raise InvalidLabel(f"basis index must be nonnegative, got {m}")
    c = _disk_norm_const(k, m)
    return DiskFunction(k, lambda z: c * (1j * z) ** m, label=f"|k={k} m={m}> on z")


def basis_halfplane(k, m):
    """<w|km> = sqrt((2k-1)/pi) sqrt([m]_k!)/m! 2^{2k-1} (1-w)^m / (w+1)^{2k+m}."""
    _check_label(k)
    if m < 0:
        raise InvalidLabel(f"basis index must be nonnegative, got {m}")
    two_k = int(round(2 * k))
    c = _disk_norm_const(k, m) * 2.0 ** (two_k - 1)
    return HalfPlaneFunction(
        k, lambda w: c * (1 - w) ** m / (w + 1) ** (two_k + m), label=f"|k={k} m={m}> on w"
    )


def coherent_disk(k, zeta):
    """<z|zeta> = sqrt((2k-1)/pi) (1-|zeta|^2)^k (1 - i zeta z)^{-2k}."""
    _check_label(k)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    two_k = int(round(2 * k))
    c = math.sqrt((2 * k - 1) / math.pi) * (1 - abs(zeta) ** 2) ** k
    return DiskFunction(k, lambda z: c * (1 - 1j * zeta * z) ** (-two_k), label=f"|zeta={zeta}> on z")


def coherent_halfplane(k, zeta):
    """<w|zeta> = sqrt((2k-1)/pi) 2^{2k-1} (1-|zeta|^2)^k (w+1-zeta(1-w))^{-2k}."""
    _check_label(k)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    two_k = int(round(2 * k))
    c = math.sqrt((2 * k - 1) / math.pi) * 2.0 ** (two_k - 1) * (1 - abs(zeta) ** 2) ** k
    return HalfPlaneFunction(
        k, lambda w: c * (w + 1 - zeta * (1 - w)) ** (-two_k), label=f"|zeta={zeta}> on w"
    )


def affine_action(k, m0, psi):
    """Unitary affine action [U(a,b) psi](y) = a^{1-k} e^{2 pi i b y} psi(a y)."""
    _check_label(k)
    if not isinstance(m0, AffineElement):
        m0 = AffineElement(*m0)
    a, b = m0.a, m0.b
    s = a ** (1 - k)
    ib = _TWO_PI * 1j * b

    def value(y):
        return s * np.exp(ib * y) * psi.f(a * y)

    dvalue = None
    d2value = None
    if psi.df is not None:
        def dvalue(y):
            return s * np.exp(ib * y) * (ib * psi.f(a * y) + a * psi.df(a * y))
    if psi.df is not None and psi.d2f is not None:
        def d2value(y):
            e = s * np.exp(ib * y)
            return e * (ib * ib * psi.f(a * y) + 2 * ib * a * psi.df(a * y) + a * a * psi.d2f(a * y))

    support = None
    if psi.support is not None:
        support = (psi.support[0] / a, psi.support[1] / a)
    return HalfLineFunction(
        k, value, dvalue, d2value,
        origin_power=psi.origin_power,
        decay_rate=a * psi.decay_rate,
        osc_rate=b + a * psi.osc_rate,
        support=support,
        poly_degree=psi.poly_degree,
        label=f"U({a},{b}) {psi.label}",
    )


def cayley_pullback(k, h):
    """Pull a half-plane function back to the disk: f(z) = 2 (iz+1)^{-2k} h((1-iz)/(1+iz))."""
    _check_label(k)
    two_k = int(round(2 * k))

    def value(z):
        w = (1 - 1j * z) / (1 + 1j * z)
        return 2.0 * (1j * z + 1) ** (-two_k) * h.f(w)

    return DiskFunction(k, value, label=f"cayley[{h.label}]")


def laplace_intertwiner(k, psi, w, scheme=None):
    """Map a half-line state to its half-plane value at w by the weighted Laplace integral.

    value = sqrt((4 pi)^{2k-1} / Gamma(2k-1)) * integral psi(y) e^{-2 pi w y} dy.
    """
    _check_label(k)
    w = complex(w)
    if w.real <= 0:
        raise DomainError(f"Laplace image needs Re(w) > 0, got {w}")
    pref = math.exp(0.5 * ((2 * k - 1) * math.log(_FOUR_PI) - math.lgamma(2 * k - 1)))

    def integrand(y):
        return psi.f(y) * np.exp(-_TWO_PI * w * y)

    val, _ = quadrature.weighted_integral(
        integrand,
        alpha=psi.origin_power,
        decay=psi.decay_rate + _TWO_PI * w.real,
        osc=psi.osc_rate - w.imag,
        support=psi.support,
        scheme=scheme,
        window_alpha=psi.origin_power + psi.poly_degree,
    )
    return pref * val


def laplace_function(k, psi, scheme=None):
    """Half-plane function w -> laplace_intertwiner(k, psi, w) (pointwise quadrature)."""

    def value(w):
        w = np.asarray(w, dtype=complex)
        flat = [laplace_intertwiner(k, psi, wi, scheme) for wi in np.atleast_1d(w).ravel()]
        out = np.array(flat).reshape(np.atleast_1d(w).shape)
        return out if w.ndim else out[()]

    return HalfPlaneFunction(k, value, label=f"laplace[{psi.label}]")


_GENERATOR_NAMES = ("J0", "J1", "J2", "A", "B")


def generator_action_halfline(name, k, psi):
    """Differential action of a generator on a half-line function.

    J0 = (-y d2 + 2(k-1) d + 4 pi^2 y) / (4 pi)
    J1 = -(-y d2 + 2(k-1) d - 4 pi^2 y) / (4 pi)
    J2 = B = i (y d + 1 - k),   A = 2 pi y.
    """
    _check_label(k)
    if name not in _GENERATOR_NAMES:
        raise InvalidLabel(f"unknown generator {name!r}; expected one of {_GENERATOR_NAMES}")
    if name == "A":
        return HalfLineFunction(
            k, lambda y: _TWO_PI * y * psi.f(y),
            origin_power=psi.origin_power + 1,
            decay_rate=psi.decay_rate, osc_rate=psi.osc_rate, support=psi.support,
            poly_degree=psi.poly_degree + 1,
            label=f"A {psi.label}",
        )
    if psi.df is None:
        raise MissingDerivative(f"{name} needs a first-derivative handle")
    if name in ("J2", "B"):
        def value(y):
            return 1j * (y * psi.df(y) + (1 - k) * psi.f(y))

        return HalfLineFunction(
            k, value,
            origin_power=max(psi.origin_power - 1, 0.0),
            decay_rate=psi.decay_rate, osc_rate=psi.osc_rate, support=psi.support,
            poly_degree=psi.poly_degree + 1,
            label=f"{name} {psi.label}",
        )
    if psi.d2f is None:
        raise MissingDerivative(f"{name} needs a second-derivative handle")
    four_pi_sq = _FOUR_PI * math.pi

    def value(y):
        core = -y * psi.d2f(y) + 2 * (k - 1) * psi.df(y)
        if name == "J0":
            return (core + four_pi_sq * y * psi.f(y)) / _FOUR_PI
        return -(core - four_pi_sq * y * psi.f(y)) / _FOUR_PI

    return HalfLineFunction(
        k, value,
        origin_power=max(psi.origin_power - 1, 0.0),
        decay_rate=psi.decay_rate, osc_rate=psi.osc_rate, support=psi.support,
        poly_degree=psi.poly_degree + 1,
        label=f"{name} {psi.label}",
    )


def mobius_action_disk(k, G, f):
    """[T^k(Gamma) f](z) = (g2 z + conj(g1))^{-2k} f((g1 z + conj(g2)) / (g2 z + conj(g1)))."""
    _check_label(k)
    two_k = int(round(2 * k))
    g1, g2 = G.gamma1, G.gamma2

    def value(z):
        den = g2 * z + g1.conjugate()
        return den ** (-two_k) * f.f((g1 * z + g2.conjugate()) / den)

    return DiskFunction(k, value, label=f"T[{f.label}]")


def mobius_action_halfplane(k, g, h):
    """[T^k(g) h](w) = (i g21 w + g11)^{-2k} h((g22 w - i g12) / (i g21 w + g11))."""
    _check_label(k)
    two_k = int(round(2 * k))

    def value(w):
        den = 1j * g.g21 * w + g.g11
        return den ** (-two_k) * h.f((g.g22 * w - 1j * g.g12) / den)

    return HalfPlaneFunction(k, value, label=f"T[{h.label}]")


def basis_matrix(k, m_max, y):
    """Values <y|km> for m = 0..m_max on shared nodes; shape (m_max+1, len(y)).

    One Laguerre degree recurrence plus a log-space prefactor per row keeps the
    whole table stable up to large m.
    """
    _check_label(k)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    table = laguerre_table(m_max, 2 * k - 1, _FOUR_PI * y)
    ms = np.arange(m_max + 1)
    logc = k * math.log(_FOUR_PI) + 0.5 * (gammaln(ms + 1) - gammaln(2 * k + ms))
    signs = np.where(ms % 2 == 0, 1.0, -1.0)
    envelope = np.exp((2 * k - 1) * np.log(y) - _TWO_PI * y)
    return (signs * np.exp(logc))[:, None] * table * envelope[None, :]


def coeff_function(k, coeffs):
    """Half-line function sum_m c_m <y|km> for a finite coefficient vector."""
    _check_label(k)
    coeffs = np.asarray(coeffs, dtype=complex)
    nonzero = np.nonzero(coeffs)[0]
    m_max = int(nonzero[-1]) if nonzero.size else 0
    coeffs = coeffs[: m_max + 1]

    def value(y):
        scalar = np.ndim(y) == 0
        B = basis_matrix(k, m_max, y)
        out = coeffs @ B
        return out[0] if scalar else out

    return HalfLineFunction(
        k, value,
        origin_power=2 * k - 1, decay_rate=_TWO_PI, osc_rate=0.0, poly_degree=m_max,
        label=f"coeff state (k={k}, N={m_max})",
    )


def project_onto_basis(k, fn, m_max, scheme=None, proj_tol=None):
    """Coefficients <km|fn> for m = 0..m_max by shared-node quadrature.

    Uses one node set per refinement level for all m (the basis rows share the
    same envelope), doubling until the coefficient vector stabilizes.
    """
    _check_label(k)
    scheme = scheme or quadrature.DEFAULT_SCHEME
    alpha = fn.origin_power
    decay = _TWO_PI + fn.decay_rate
    walpha = alpha + m_max + fn.poly_degree
    prev = None
    prev_size = -1
    err = math.inf
    for level in range(scheme.max_refinements + 1):
        y, w = quadrature.product_nodes(
            alpha, decay, fn.osc_rate, fn.support, scheme, level, window_alpha=walpha
        )
        if y.size == prev_size:
            break
        B = basis_matrix(k, m_max, y)
        weights = w * y ** (1.0 - 2.0 * k) * fn.f(y)
        coeffs = B @ weights
        if prev is not None:
            err = float(np.max(np.abs(coeffs - prev)))
            if err <= scheme.quad_tol * max(1.0, float(np.max(np.abs(coeffs)))):
                return coeffs, err
        prev = coeffs
        prev_size = y.size
    raise QuadratureFailure(
        f"basis projection did not stabilize (last change {err:.3e})",
        achieved=err,
        requested=scheme.quad_tol,
    )
