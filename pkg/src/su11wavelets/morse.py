"""Fundamental-state family phi_0(y) ~ y^s e^{-2 pi y} and its affine orbit.

The natural Hilbert space here is the k = 1 weighted half-line space; s > 1/2 is
an independent continuous parameter.  At s = 1 the fundamental state coincides
with the canonical |k0> for k = 1 and the orbit reproduces the coherent family
up to the usual phase; for other s the state is no longer rotation invariant but
still seeds an admissible wavelet family.
"""

import math
from dataclasses import dataclass

from . import states
from .errors import InvalidParameter

_TWO_PI = 2 * math.pi
_FOUR_PI = 4 * math.pi

MORSE_K = 1.0


@dataclass(frozen=True)
class MorseFundamental:
    """Seed state phi_0(y) = (4 pi)^s / sqrt(Gamma(2s)) y^s e^{-2 pi y}."""

    s: float
    state: states.HalfLineFunction

    def __call__(self, y):
        return self.state(y)


def morse_fundamental(s):
    """Unit-norm seed; rejects s <= 1/2 where the family leaves the space."""
    s = float(s)
    if not s > 0.5:
        raise InvalidParameter(f"s must exceed 1/2, got {s}")
    mag = math.exp(s * math.log(_FOUR_PI) - 0.5 * math.lgamma(2 * s))
    fn = states.power_exp_function(
        MORSE_K, mag, s, -_TWO_PI, label=f"morse fundamental s={s}"
    )
    return MorseFundamental(s, fn)


def morse_family(s, m0):
    """Affine orbit member U(a,b) phi_0 in the k = 1 space."""
    return states.affine_action(MORSE_K, m0, morse_fundamental(s).state)
