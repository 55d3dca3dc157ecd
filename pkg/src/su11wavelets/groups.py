"""SU(1,1), SL(2,R), their affine and rotation subgroups, and the maps between them.

Conventions
-----------
* SU(1,1) elements are stored by the top row (gamma1, gamma2) of
  [[gamma1, gamma2], [conj(gamma2), conj(gamma1)]] with |gamma1|^2 - |gamma2|^2 = 1.
* The affine element (a, b) acts on the line as x -> a x + b, so the group law is
  (a, b) (a', b') = (a a', a b' + b).
* A rotation stores the angle theta of Gamma_theta = diag(e^{-i theta/2}, e^{i theta/2});
  theta is kept in [0, 4 pi) because the matrix entries carry theta/2.
* Unique triangular-times-rotation factorization fixes the triangular diagonal positive.

Constructors renormalize inputs whose invariant defect is below 10x the tolerance and
reject anything worse; silent renormalization of bad data would hide bugs upstream.
"""

import cmath
import math

from dataclasses import dataclass

from .errors import DegenerateDecomposition, InvalidGroupElement, InvalidLabel

TOL_GROUP = 1e-12

_TWO_PI = 2 * math.pi
_FOUR_PI = 4 * math.pi


@dataclass(frozen=True)
class Su11Element:
    gamma1: complex
    gamma2: complex
    tol: float = TOL_GROUP

    def __post_init__(self):
        g1 = complex(self.gamma1)
        g2 = complex(self.gamma2)
        q = abs(g1) ** 2 - abs(g2) ** 2
        if abs(q - 1.0) > 10 * self.tol:
            raise InvalidGroupElement(f"|gamma1|^2 - |gamma2|^2 = {q}, not 1")
        if q != 1.0:
            s = math.sqrt(q)
            g1, g2 = g1 / s, g2 / s
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)

    def matrix(self):
        import numpy as np

        return np.array(
            [[self.gamma1, self.gamma2], [self.gamma2.conjugate(), self.gamma1.conjugate()]]
        )


@dataclass(frozen=True)
class Sl2rElement:
    g11: float
    g12: float
    g21: float
    g22: float
    tol: float = TOL_GROUP

    def __post_init__(self):
        det = self.g11 * self.g22 - self.g12 * self.g21
        if abs(det - 1.0) > 10 * self.tol:
            raise InvalidGroupElement(f"determinant {det}, not 1")
        if det != 1.0:
            s = math.sqrt(det)
            for name in ("g11", "g12", "g21", "g22"):
                object.__setattr__(self, name, getattr(self, name) / s)

    def matrix(self):
        import numpy as np

        return np.array([[self.g11, self.g12], [self.g21, self.g22]])


@dataclass(frozen=True)
class AffineElement:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidGroupElement(f"affine scale must be positive and finite, got a={self.a}")


@dataclass(frozen=True)
class RotationElement:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % _FOUR_PI)


@dataclass(frozen=True)
class DisplacementParams:
    tau: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)


SU11_IDENTITY = Su11Element(1.0, 0.0)
SL2R_IDENTITY = Sl2rElement(1.0, 0.0, 0.0, 1.0)


def sl2r_to_su11(g):
    """Conjugation isomorphism SL(2,R) -> SU(1,1):
    gamma1 = [g11+g22 + i(g12-g21)]/2, gamma2 = [g12+g21 - i(g22-g11)]/2.
    """
    gamma1 = 0.5 * complex(g.g11 + g.g22, g.g12 - g.g21)
    gamma2 = 0.5 * complex(g.g12 + g.g21, g.g11 - g.g22)
    return Su11Element(gamma1, gamma2)


def su11_to_sl2r(G):
    """Inverse of sl2r_to_su11 (solve the linear system for the four entries)."""
    x1, y1 = G.gamma1.real, G.gamma1.imag
    x2, y2 = G.gamma2.real, G.gamma2.imag
    return Sl2rElement(x1 + y2, x2 + y1, x2 - y1, x1 - y2)


def affine_to_sl2r(m):
    """Upper-triangular realization [[sqrt(a), b/sqrt(a)], [0, 1/sqrt(a)]]."""
    r = math.sqrt(m.a)
    return Sl2rElement(r, m.b / r, 0.0, 1.0 / r)


def affine_to_su11(m):
    """M(a,b) with gamma1 = (a+1+ib)/(2 sqrt a), gamma2 = i(a-1-ib)/(2 sqrt a)."""
    if not isinstance(m, AffineElement):
        m = AffineElement(*m)
    r = 2.0 * math.sqrt(m.a)
    gamma1 = complex(m.a + 1.0, m.b) / r
    gamma2 = 1j * complex(m.a - 1.0, -m.b) / r
    return Su11Element(gamma1, gamma2)


def rotation_to_su11(rot):
    """Gamma_theta = diag(e^{-i theta/2}, e^{i theta/2})."""
    return Su11Element(cmath.exp(-0.5j * rot.theta), 0.0)


def compose(x, y):
    """Matrix product of two SU(1,1) elements in (gamma1, gamma2) coordinates."""
    g1 = x.gamma1 * y.gamma1 + x.gamma2 * y.gamma2.conjugate()
    g2 = x.gamma1 * y.gamma2 + x.gamma2 * y.gamma1.conjugate()
    return Su11Element(g1, g2)


def inverse(x):
    """Group inverse; for unit pseudo-determinant this is (conj(gamma1), -gamma2)."""
    return Su11Element(x.gamma1.conjugate(), -x.gamma2)


def compose_affine(m, mp):
    """(a,b)(a',b') = (a a', a b' + b), matching x -> a x + b acting on the left."""
    return AffineElement(m.a * mp.a, m.a * mp.b + m.b)


def decompose_affine_rotation(g):
    """Factor g in SL(2,R) as (triangular with positive diagonal) x (rotation).

    Returns the triangular factor as an AffineElement (a, b) and the rotation as a
    RotationElement whose theta parameterizes the SU(1,1) image Gamma_theta of the
    SL(2,R) rotation block [[cos alpha, sin alpha], [-sin alpha, cos alpha]]
    (theta = -2 alpha mod 4 pi).
    """
    rho = math.hypot(g.g21, g.g22)
    if rho < 1e-150:
        raise DegenerateDecomposition("bottom row numerically zero")
    alpha = math.atan2(-g.g21, g.g22)
    ca, sa = math.cos(alpha), math.sin(alpha)
    # H = g . R(alpha)^{-1}; bottom row becomes (0, rho) by construction
    h11 = g.g11 * ca + g.g12 * sa
    h12 = -g.g11 * sa + g.g12 * ca
    a = h11 * h11
    b = h12 * h11
    return AffineElement(a, b), RotationElement(-2.0 * alpha)


def displacement_matrix(p):
    """D(tau, phi): gamma1 = cosh(tau/2), gamma2 = -i e^{-i phi} sinh(tau/2)."""
    g1 = complex(math.cosh(0.5 * p.tau), 0.0)
    g2 = -1j * cmath.exp(-1j * p.phi) * math.sinh(0.5 * p.tau)
    return Su11Element(g1, g2)


def zeta_from_displacement(p):
    """zeta = tanh(tau/2) e^{-i phi}, always inside the unit disk."""
    return math.tanh(0.5 * p.tau) * cmath.exp(-1j * p.phi)


def displacement_from_zeta(zeta):
    """Inverse of zeta_from_displacement; phi = 0 at the origin."""
    zeta = complex(zeta)
    r = abs(zeta)
    if r >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {r}")
    tau = 2.0 * math.atanh(r)
    phi = (-cmath.phase(zeta)) % _TWO_PI if r > 0 else 0.0
    return DisplacementParams(tau, phi)


def affine_to_zeta(m):
    """zeta = (1 - a + i b) / (1 + a - i b); lands strictly inside the disk."""
    if not isinstance(m, AffineElement):
        m = AffineElement(*m)
    return complex(1.0 - m.a, m.b) / complex(1.0 + m.a, -m.b)


def zeta_to_affine(zeta):
    """Invert affine_to_zeta and recover the rotation angle of the coset.

    With u = (1 - zeta)/(1 + zeta) the affine part is (a, b) = (Re u, -Im u);
    the angle is read off the residual matrix D(tau,phi)^{-1} M(a,b), which is
    diagonal by construction, so the full theta mod 4 pi is recovered (the
    closed form e^{-i theta} = (1+a+ib)/(1+a-ib) only sees theta mod 2 pi).
    """
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    u = (1.0 - zeta) / (1.0 + zeta)
    m = AffineElement(u.real, -u.imag)
    residual = compose(inverse(displacement_matrix(displacement_from_zeta(zeta))), affine_to_su11(m))
    if abs(residual.gamma2) > 1e-9:
        raise InvalidGroupElement(
            f"coset residual is not a rotation (|gamma2| = {abs(residual.gamma2)})"
        )
    theta = (-2.0 * cmath.phase(residual.gamma1)) % _FOUR_PI
    return m, RotationElement(theta)
