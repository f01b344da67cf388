"""Entropy units. Everything is computed in nats and converted once, on output."""

import math

import numpy as np

BITS = "bits"
NATS = "nats"
UNITS = (BITS, NATS)

LN2 = math.log(2.0)


def check_unit(unit):
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}, got {unit!r}")
    return unit


def from_nats(value, unit):
    """Convert a value (scalar or array) expressed in nats to ``unit``."""
    check_unit(unit)
    if unit == BITS:
        return value / LN2
    return value


def as_output(value):
    """Return a Python scalar for 0-d input, an ndarray otherwise."""
    arr = np.asarray(value)
    if arr.ndim == 0:
        return arr.item()
    return arr
