"""Lower-bound curves for mutual information in terms of correlation distance.

All curves accept a scalar or an array of correlation distances ``C``.
"""

import math
import threading
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import entr

from .errors import DomainError
from .units import BITS, LN2, as_output, from_nats

LN4 = math.log(4.0)
DOMAIN_TOL = 1e-9
C0_TOL = 1e-12

CLASSICAL_MAX = 1.0
QUANTUM_MAX = 1.5


def _check_range(c, upper, name):
    c = np.asarray(c, dtype=float)
    if np.any(~np.isfinite(c)) or np.any(c < -DOMAIN_TOL) or np.any(c > upper + DOMAIN_TOL):
        raise DomainError(f"{name} needs correlation distance in [0, {upper:g}]")
    return np.clip(c, 0.0, upper)


def _h1(c):
    a = (1.0 - c) / 4.0
    b = (1.0 + c) / 4.0
    return 2.0 * (entr(a) + entr(b))


def _h2(c):
    return entr(0.25 - c / 2.0) + entr(0.25 + c / 6.0) + 2.0 * entr(0.25 - c / 6.0)


def _h3(c):
    return entr(0.25 + c / 2.0) + 3.0 * entr(0.25 - c / 6.0)


def pinsker_bound(c, unit=BITS):
    """``C^2 / 2`` nats."""
    c = np.asarray(c, dtype=float)
    if np.any(c < 0.0):
        raise DomainError("correlation distance cannot be negative")
    return as_output(from_nats(0.5 * c * c, unit))


def classical_tight_bound(c, unit=BITS):
    """``log 2 - H((1+C)/2, (1-C)/2)`` for two-valued variables, ``0 <= C <= 1``."""
    c = _check_range(c, CLASSICAL_MAX, "classical bound")
    value = LN2 - entr((1.0 + c) / 2.0) - entr((1.0 - c) / 2.0)
    return as_output(from_nats(value, unit))


class EntropyCurves(NamedTuple):
    """Maximal Bell-diagonal entropies (bits); ``None`` outside a curve's domain."""

    h1: Optional[float]
    h2: Optional[float]
    h3: Optional[float]


def entropy_curves(c):
    """Entropies of the three candidate maximum-entropy spectra at distance ``c``.

    * ``h1``: ``((1-C)/4, (1-C)/4, (1+C)/4, (1+C)/4)``, ``C <= 1``
    * ``h2``: ``(1/4 - C/2, 1/4 + C/6, 1/4 - C/6, 1/4 - C/6)``, ``C <= 1/2``
    * ``h3``: ``(1/4 + C/2, 1/4 - C/6, 1/4 - C/6, 1/4 - C/6)``, ``C <= 3/2``
    """
    c = float(c)
    if c < 0.0:
        return EntropyCurves(None, None, None)

    def in_bits(fn, upper):
        return float(fn(c) / LN2) if c <= upper else None

    return EntropyCurves(in_bits(_h1, 1.0), in_bits(_h2, 0.5), in_bits(_h3, 1.5))


def compute_c0(tolerance=1e-9):
    """Crossing point of ``h1`` and ``h3`` on (1/2, 1), found by bisection."""
    if not tolerance > 0.0:
        raise DomainError("tolerance must be positive")
    lo, hi = 0.5, 1.0
    # h1 - h3 is positive at lo and negative at hi
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if _h1(mid) - _h3(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_c0_lock = threading.Lock()
_c0_value = None


def c0():
    """Threshold where the quantum bound switches branch (cached, computed once)."""
    global _c0_value
    if _c0_value is None:
        with _c0_lock:
            if _c0_value is None:
                _c0_value = compute_c0(C0_TOL)
    return _c0_value


def quantum_tight_bound(c, unit=BITS):
    """Lower bound on qubit mutual information with maximally mixed marginals.

    ``log 4 - h1(C)`` for ``C <= C0`` and ``log 4 - h3(C)`` above, for
    ``0 <= C <= 3/2``. Since ``h1(C) = log 2 + H((1+C)/2, (1-C)/2)``, the
    lower branch is evaluated with the classical expression so the two bounds
    coincide bit for bit there.
    """
    c = _check_range(c, QUANTUM_MAX, "quantum bound")
    low = np.minimum(c, 1.0)
    classical = LN2 - entr((1.0 + low) / 2.0) - entr((1.0 - low) / 2.0)
    value = np.where(c <= c0(), classical, LN4 - _h3(c))
    return as_output(from_nats(value, unit))


def max_correlation_distance(n, kind="classical"):
    """Largest correlation distance for n-valued variables or n-level systems."""
    if int(n) != n or n < 2:
        raise DomainError(f"alphabet size must be an integer >= 2, got {n!r}")
    if kind == "classical":
        return 2.0 * (n - 1) / n
    if kind == "quantum":
        return 2.0 * (n * n - 1) / (n * n)
    raise ValueError(f"kind must be 'classical' or 'quantum', got {kind!r}")
