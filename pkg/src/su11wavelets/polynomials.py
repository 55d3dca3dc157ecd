"""Generalized Laguerre polynomials and the ladder polynomials built on them.

The canonical basis on the half-line is y^(2k-1) e^(-2 pi y) times a degree-m
polynomial p_m(y) = (-1)^m m! L_m^(2k-1)(4 pi y).  Everything combinatorial is
kept in log space via lgamma so that half-integer k works the same as integer k.
"""

import math

import numpy as np
from dataclasses import dataclass

from .errors import InvalidDegree, InvalidLabel


def laguerre(m, alpha, x):
    """Generalized Laguerre polynomial L_m^alpha evaluated at x.

    Upward three-term recurrence in the degree,
        (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1},
    which is stable for x >= 0 and alpha > -1.

    Parameters
    ----------
    m : int
        degree, m >= 0
    alpha : float
        superscript, alpha > -1
    x : float or ndarray
        evaluation points

    Returns
    -------
    float or ndarray
    """
    if m < 0:
        raise InvalidDegree(f"degree must be nonnegative, got {m}")
    x = np.asarray(x, dtype=float)
    if m == 0:
        out = np.ones_like(x)
        return out if out.ndim else float(out)
    prev = np.ones_like(x)
    cur = alpha + 1.0 - x
    for n in range(1, m):
        prev, cur = cur, ((2 * n + 1 + alpha - x) * cur - (n + alpha) * prev) / (n + 1)
    return cur if cur.ndim else float(cur)


def laguerre_table(m_max, alpha, x):
    """All L_n^alpha(x) for n = 0..m_max, shape (m_max+1, len(x)).

    One pass of the degree recurrence, vectorized over x; used wherever a whole
    family of basis functions is evaluated on shared quadrature nodes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((m_max + 1, x.size))
    out[0] = 1.0
    if m_max >= 1:
        out[1] = alpha + 1.0 - x
    for n in range(1, m_max):
        out[n + 1] = ((2 * n + 1 + alpha - x) * out[n] - (n + alpha) * out[n - 1]) / (n + 1)
    return out


def laguerre_deriv(m, alpha, x, order=1):
    """d^order/dx^order of L_m^alpha, via L' = -L_{m-1}^{alpha+1}."""
    if order < 0:
        raise InvalidDegree("derivative order must be nonnegative")
    if m - order < 0:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        return out if out.ndim else 0.0
    val = laguerre(m - order, alpha + order, x)
    return (-1) ** order * val


def _check_label(k):
    two_k = 2 * k
    if abs(two_k - round(two_k)) > 1e-12 or k < 1:
        raise InvalidLabel(f"k must be a half-integer >= 1, got {k}")
    return k


def p_m(m, k, y):
    """Ladder polynomial p_m(y) = (-1)^m m! L_m^(2k-1)(4 pi y).

    p_0 = 1 and the two degree recurrences
        (y d/dy + 2k + m - 4 pi y) p_m = -p_{m+1}
        (-y d/dy + m) p_m = -m(2k+m-1) p_{m-1}
    hold identically.
    """
    if m < 0:
        raise InvalidDegree(f"degree must be nonnegative, got {m}")
    _check_label(k)
    return (-1) ** m * math.factorial(m) * laguerre(m, 2 * k - 1, 4 * math.pi * np.asarray(y, dtype=float))


def p_m_deriv(m, k, y, order=1):
    """Exact derivative of p_m; d/dy brings a factor 4 pi per order."""
    if m < 0:
        raise InvalidDegree(f"degree must be nonnegative, got {m}")
    _check_label(k)
    scale = (-1) ** m * math.factorial(m) * (4 * math.pi) ** order
    return scale * laguerre_deriv(m, 2 * k - 1, 4 * math.pi * np.asarray(y, dtype=float), order)


def log_mk_factorial(m, k):
    """log of [m]_k! = prod_{i=1..m} i (2k+i-1) = m! Gamma(2k+m) / Gamma(2k)."""
    if m < 0:
        raise InvalidDegree(f"degree must be nonnegative, got {m}")
    _check_label(k)
    return math.lgamma(m + 1) + math.lgamma(2 * k + m) - math.lgamma(2 * k)


def log_norm_k(k):
    """log of the fundamental-state prefactor (4 pi)^k / sqrt(Gamma(2k))."""
    _check_label(k)
    return k * math.log(4 * math.pi) - 0.5 * math.lgamma(2 * k)


@dataclass(frozen=True)
class LogWeight:
    """Log-space combinatorial weights attached to a basis index (m, k)."""

    m: int
    k: float
    log_mk_factorial: float
    log_norm_k: float

    @classmethod
    def of(cls, m, k):
        return cls(m, k, log_mk_factorial(m, k), log_norm_k(k))


@dataclass(frozen=True)
class LadderPolynomial:
    """The degree-m ladder polynomial p_m for a fixed representation label.

    Evaluated at the physical coordinate (the Laguerre argument is 4 pi y); the
    leading coefficient is (4 pi)^m, so the degree is exactly m.
    """

    m: int
    k: float

    def __post_init__(self):
        if self.m < 0:
            raise InvalidDegree(f"degree must be nonnegative, got {self.m}")
        _check_label(self.k)

    @property
    def degree(self):
        return self.m

    @property
    def leading_coefficient(self):
        return (4 * math.pi) ** self.m

    def __call__(self, y):
        return p_m(self.m, self.k, y)

    def deriv(self, y, order=1):
        return p_m_deriv(self.m, self.k, y, order)


def generating_function(zeta, k, y):
    """Closed form of sum_m zeta^m p_m(y) / m! for |zeta| < 1.

    Equals (1+zeta)^(-2k) exp(4 pi y zeta / (zeta+1)); the complex power uses
    the principal branch, well defined because Re(1+zeta) > 0 on the disk.
    """
    _check_label(k)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"generating function needs |zeta| < 1, got {abs(zeta)}")
    y = np.asarray(y, dtype=float)
    val = (1 + zeta) ** (-2 * k) * np.exp(4 * math.pi * y * zeta / (zeta + 1))
    return val if val.ndim else complex(val)
