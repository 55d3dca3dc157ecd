"""Ladder-operator algebra on truncated coefficient vectors over the canonical basis.

A state is a finite vector (c_0 .. c_N) over |k m>.  All generators are bands:
J0 is diagonal with k+m, the ladder operators carry sqrt([m]_k) with
[m]_k = m (2k+m-1), and A = J0+J1, B = J2 close the affine subalgebra.
Truncation orders for coherent states come from the exact tail identity
sum_{m>N} |c_m|^2 = I_x(N+1, 2k) (regularized incomplete beta, x = |zeta|^2),
so every coherent vector ships with a certificate instead of a guess.
"""

import cmath
import math
import warnings

from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc, gammaln

from . import groups, states
from .errors import (
    IndexOutOfRange,
    InvalidLabel,
    NotNormalized,
    ProjectionError,
    TruncationError,
    TruncationWarning,
    UnknownGenerator,
)

TOL_STATE = 1e-10
TAIL_TOL = 1e-14
N_MAX = 512
_MIN_ORDER = 32


@dataclass(frozen=True)
class RepLabel:
    """Discrete-series label k >= 1 stored as the integer 2k."""

    two_k: int

    def __post_init__(self):
        if int(self.two_k) != self.two_k or self.two_k < 2:
            raise InvalidLabel(f"2k must be an integer >= 2, got {self.two_k}")
        object.__setattr__(self, "two_k", int(self.two_k))

    @property
    def k(self):
        return self.two_k / 2.0

    @classmethod
    def from_k(cls, k):
        two_k = round(2 * k)
        if abs(2 * k - two_k) > 1e-12:
            raise InvalidLabel(f"k must be a half-integer, got {k}")
        return cls(two_k)


def as_label(k):
    if isinstance(k, RepLabel):
        return k
    return RepLabel.from_k(k)


@dataclass(frozen=True)
class CoeffState:
    label: RepLabel
    coeffs: np.ndarray
    truncation_warning: bool = field(default=False, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.size - 1

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def is_normalized(self, tol=TOL_STATE):
        return abs(self.norm() - 1.0) < tol

    def require_normalized(self, tol=TOL_STATE):
        if not self.is_normalized(tol):
            raise NotNormalized(f"norm = {self.norm()}, outside 1 +/- {tol}")


def mk_weights(label, n):
    """[m]_k = m (2k + m - 1) for m = 0..n."""
    k = as_label(label).k
    m = np.arange(n + 1, dtype=float)
    return m * (2 * k + m - 1)


@dataclass(frozen=True)
class GeneratorBands:
    """Band data of the generators on the first n+1 basis vectors.

    j0_diagonal holds k+m; ladder_root[m] = sqrt([m]_k) couples m and m-1.
    dense() materializes any generator for cross-checks; the raising and
    lowering matrices are exact transposes of each other, and the Casimir built
    from them is k(1-k) on every basis vector.
    """

    label: RepLabel
    n: int

    @property
    def j0_diagonal(self):
        return self.label.k + np.arange(self.n + 1, dtype=float)

    @property
    def ladder_root(self):
        return np.sqrt(mk_weights(self.label, self.n))

    def dense(self, name):
        size = self.n + 1
        out = np.zeros((size, size), dtype=complex)
        for m in range(size):
            col = np.zeros(size, dtype=complex)
            col[m] = 1.0
            out[:, m], _ = _apply_named(name, self.label, col, math.inf)
        return out


def basis_state(label, m, n):
    label = as_label(label)
    if not (0 <= m <= n):
        raise IndexOutOfRange(f"need 0 <= m <= N, got m={m}, N={n}")
    c = np.zeros(n + 1, dtype=complex)
    c[m] = 1.0
    return CoeffState(label, c)


GENERATORS = ("J0", "J1", "J2", "Jplus", "Jminus", "A", "B")


def _apply_named(name, label, c, tail_tol):
    k = label.k
    n = c.size - 1
    m = np.arange(n + 1, dtype=float)
    root = np.sqrt(mk_weights(label, n))
    leaked = False

    def jplus(v):
        out = np.zeros_like(v)
        out[1:] = root[1:] * v[:-1]
        return out

    def jminus(v):
        out = np.zeros_like(v)
        out[:-1] = root[1:] * v[1:]
        return out

    if name == "J0":
        return (k + m) * c, leaked
    if name == "Jplus":
        leaked = abs(c[n]) ** 2 > tail_tol
        return jplus(c), leaked
    if name == "Jminus":
        return jminus(c), leaked
    if name == "J1":
        leaked = abs(c[n]) ** 2 > tail_tol
        return 0.5 * (jplus(c) + jminus(c)), leaked
    if name == "J2":
        leaked = abs(c[n]) ** 2 > tail_tol
        return (jplus(c) - jminus(c)) / 2j, leaked
    if name == "A":
        leaked = abs(c[n]) ** 2 > tail_tol
        return (k + m) * c + 0.5 * (jplus(c) + jminus(c)), leaked
    if name == "B":
        leaked = abs(c[n]) ** 2 > tail_tol
        return (jplus(c) - jminus(c)) / 2j, leaked
    raise UnknownGenerator(f"unknown generator {name!r}; expected one of {GENERATORS}")


def apply_generator(name, state, tail_tol=TAIL_TOL):
    """Banded action of one generator; flags leakage past the truncation edge."""
    out, leaked = _apply_named(name, state.label, state.coeffs, tail_tol)
    if leaked and not state.truncation_warning:
        warnings.warn(
            f"{name} leaked amplitude past the truncation edge (|c_N|^2 > {tail_tol})",
            TruncationWarning,
        )
    return CoeffState(state.label, out, truncation_warning=state.truncation_warning or leaked)


def apply_combo(terms, state, tail_tol=TAIL_TOL):
    """Apply sum_i coef_i * generator_i in one pass; terms = [(coef, name), ...]."""
    acc = np.zeros_like(state.coeffs)
    leaked = state.truncation_warning
    for coef, name in terms:
        out, leak = _apply_named(name, state.label, state.coeffs, tail_tol)
        acc = acc + coef * out
        leaked = leaked or leak
    return CoeffState(state.label, acc, truncation_warning=leaked)


def casimir_apply(state):
    """C = J1^2 + J2^2 - J0^2 via (J+ J- + J- J+)/2 - J0^2, all banded."""
    jp = apply_generator("Jplus", state)
    jm = apply_generator("Jminus", state)
    j0 = apply_generator("J0", state)
    out = (
        0.5 * (apply_generator("Jminus", jp).coeffs + apply_generator("Jplus", jm).coeffs)
        - apply_generator("J0", j0).coeffs
    )
    return CoeffState(state.label, out)


def inner(x, y):
    """<x|y> on coefficient vectors (antilinear in x)."""
    n = min(x.coeffs.size, y.coeffs.size)
    return complex(np.vdot(x.coeffs[:n], y.coeffs[:n]))


def coherent_tail(label, zeta, n):
    """Exact tail mass sum_{m>n} |c_m|^2 = I_{|zeta|^2}(n+1, 2k)."""
    label = as_label(label)
    x = abs(complex(zeta)) ** 2
    if x == 0.0:
        return 0.0
    return float(betainc(n + 1, label.two_k, x))


_PAD_TAIL = 1e-28  # push the edge coefficients down to double-noise amplitude


def _smallest_order(label, zeta, tail_tol, n_max):
    lo, hi = 0, n_max
    while lo < hi:
        mid = (lo + hi) // 2
        if coherent_tail(label, zeta, mid) < tail_tol:
            hi = mid
        else:
            lo = mid + 1
    return lo


def coherent_truncation_order(label, zeta, tail_tol=TAIL_TOL, n_max=N_MAX):
    """Truncation order certified against tail_tol, padded toward noise level.

    The certificate only needs the analytic tail below tail_tol, but banded
    generators touch the last entry, so the auto-chosen order keeps going (within
    the cap) until the tail is ~1e-28 and the edge amplitude is pure roundoff.
    """
    label = as_label(label)
    if abs(complex(zeta)) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(complex(zeta))}")
    if coherent_tail(label, zeta, n_max) >= tail_tol:
        raise TruncationError(
            f"tail below {tail_tol} needs order above the cap {n_max} at |zeta|={abs(zeta):.4f}"
        )
    if coherent_tail(label, zeta, n_max) < _PAD_TAIL:
        return max(_smallest_order(label, zeta, _PAD_TAIL, n_max), _MIN_ORDER)
    return n_max


def coherent_coeffs(label, zeta, n=None, tail_tol=TAIL_TOL, n_max=N_MAX):
    """Coefficients of |zeta>: c_m = (1-|zeta|^2)^k sqrt([m]_k!) zeta^m / m!.

    Assembled in log space; when n is omitted it is chosen from the analytic
    tail certificate, and a supplied n is still checked against the certificate.
    """
    label = as_label(label)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    if n is None:
        n = coherent_truncation_order(label, zeta, tail_tol, n_max)
    elif coherent_tail(label, zeta, n) >= tail_tol:
        raise TruncationError(
            f"order {n} leaves tail {coherent_tail(label, zeta, n):.3e} >= {tail_tol}"
        )
    k = label.k
    m = np.arange(n + 1)
    if abs(zeta) == 0.0:
        c = np.zeros(n + 1, dtype=complex)
        c[0] = 1.0
        return CoeffState(label, c)
    # log|c_m| = k log(1-|z|^2) + (1/2) log [m]_k! + m log|z| - log m!
    log_mk = gammaln(m + 1) + gammaln(2 * k + m) - math.lgamma(2 * k)
    logmag = (
        k * math.log1p(-abs(zeta) ** 2)
        + 0.5 * log_mk
        + m * math.log(abs(zeta))
        - gammaln(m + 1)
    )
    phase = np.exp(1j * m * cmath.phase(zeta))
    return CoeffState(label, np.exp(logmag) * phase)


def affine_coeffs(label, m0, n=None, tail_tol=TAIL_TOL, n_max=N_MAX):
    """Coefficients of |ab>, the coherent state times the phase ((1+z)/(1+conj z))^k."""
    label = as_label(label)
    if not isinstance(m0, groups.AffineElement):
        m0 = groups.AffineElement(*m0)
    zeta = groups.affine_to_zeta(m0)
    phase = ((1 + zeta) / (1 + zeta.conjugate())) ** label.k
    base = coherent_coeffs(label, zeta, n, tail_tol, n_max)
    return CoeffState(label, phase * base.coeffs)


def rotate_coherent(theta, zeta, label):
    """exp(-i theta J0)|zeta> = e^{-i k theta} |zeta e^{-i theta}>."""
    label = as_label(label)
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise InvalidLabel(f"|zeta| must be < 1, got {abs(zeta)}")
    return cmath.exp(-1j * label.k * theta), zeta * cmath.exp(-1j * theta)


def expectation(op, state, tol=TOL_STATE):
    """<state|Op|state>; op is a generator name or a [(coef, name), ...] combo."""
    state.require_normalized(tol)
    if isinstance(op, str):
        applied = apply_generator(op, state)
    else:
        applied = apply_combo(op, state)
    return inner(state, applied)


def rotation_phases(label, theta, n):
    """Diagonal of exp(-i theta J0) on the first n+1 basis vectors."""
    k = as_label(label).k
    return np.exp(-1j * theta * (k + np.arange(n + 1)))


def apply_group_element(G, state, proj_tol=1e-8, scheme=None):
    """Unitary action of an arbitrary SU(1,1) element on a coefficient state.

    Route: factor the element into affine x rotation, apply the rotation as
    diagonal phases, push the affine part through the function-space action, and
    re-expand in the canonical basis by shared-node quadrature.  Unitarity is
    enforced a posteriori: losing more than proj_tol of the norm aborts.
    """
    label = state.label
    g = groups.su11_to_sl2r(G)
    m_ab, rot = groups.decompose_affine_rotation(g)
    c = rotation_phases(label, rot.theta, state.order) * state.coeffs
    if abs(m_ab.a - 1.0) < 1e-15 and abs(m_ab.b) < 1e-15:
        return CoeffState(label, c)
    psi = states.coeff_function(label.k, c)
    chi = states.affine_action(label.k, m_ab, psi)
    coeffs, _ = states.project_onto_basis(label.k, chi, state.order, scheme)
    before = float(np.linalg.norm(c))
    after = float(np.linalg.norm(coeffs))
    if abs(after - before) > proj_tol * max(1.0, before):
        raise ProjectionError(
            f"projection lost {abs(after - before):.3e} of the norm (tolerance {proj_tol})"
        )
    return CoeffState(label, coeffs)
