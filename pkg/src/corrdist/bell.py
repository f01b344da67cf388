"""CHSH bookkeeping for hidden-variable models with outcome dependence.

A model has a finite hidden variable ``lambda`` with weights shared by all
four setting pairs, and for every ``lambda`` a 2x2 conditional outcome table
per setting pair. Outcomes +1/-1 sit at indices 0/1.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .errors import DomainError, ValidationError
from .prob_core import binary_table, as_joint_table, as_prob_vector
from .units import BITS, LN2, from_nats

SETTINGS = ("AB", "ABp", "ApB", "ApBp")
NO_SIGNALING_TOL = 1e-9
INDEPENDENCE_TOL = 1e-9

_OUTCOME_PRODUCT = np.array([[1.0, -1.0], [-1.0, 1.0]])


def _check_correlator(value, name):
    if not -1.0 - 1e-12 <= value <= 1.0 + 1e-12:
        raise DomainError(f"correlator {name} = {value!r} lies outside [-1, 1]")


def chsh_value(ab, abp, apb, apbp):
    """``<AB> + <AB'> + <A'B> - <A'B'>``."""
    for name, value in zip(SETTINGS, (ab, abp, apb, apbp)):
        _check_correlator(value, name)
    return ab + abp + apb - apbp


def relaxed_chsh_bound(c_max):
    """CHSH ceiling ``4 / (2 - C_max)`` when outcomes may be correlated given lambda."""
    if not 0.0 <= c_max <= 1.0:
        raise DomainError(f"c_max must lie in [0, 1], got {c_max!r}")
    return 4.0 / (2.0 - c_max)


@dataclass(frozen=True)
class SimulationResources:
    c_max_required: float
    i_min: float
    unit: str = BITS


def simulation_resources(violation, unit=BITS):
    """Outcome correlation needed to reach CHSH value ``2 + violation``.

    ``c_max_required = 2V / (2 + V)`` and
    ``i_min = log 2 - H((2+3V)/(4+2V), (2-V)/(4+2V))``, the mutual information
    that two-valued variables with that correlation distance must share.
    """
    v = violation
    if not 0.0 <= v <= 2.0:
        raise DomainError(f"violation must lie in [0, 2], got {v!r}")
    c_max = 2.0 * v / (2.0 + v)
    h = entr((2.0 + 3.0 * v) / (4.0 + 2.0 * v)) + entr((2.0 - v) / (4.0 + 2.0 * v))
    return SimulationResources(c_max, float(from_nats(LN2 - h, unit)), unit)


@dataclass(frozen=True)
class LhvModel:
    """Hidden-variable weights and per-lambda conditional tables.

    ``conditionals`` maps each of :data:`SETTINGS` to an array of shape
    ``(n_lambda, 2, 2)``.
    """

    lambda_weights: np.ndarray
    conditionals: dict

    def __post_init__(self):
        weights = as_prob_vector(self.lambda_weights)
        if weights.ndim != 1:
            raise ValidationError("lambda weights must be a 1-d vector")
        if set(self.conditionals) != set(SETTINGS):
            raise ValidationError(f"conditionals must have exactly the keys {SETTINGS}")
        tables = {}
        for key in SETTINGS:
            t = np.asarray(self.conditionals[key], dtype=float)
            if t.shape != (weights.size, 2, 2):
                raise ValidationError(
                    f"conditional {key} has shape {t.shape}, expected {(weights.size, 2, 2)}"
                )
            tables[key] = as_joint_table(t)
        object.__setattr__(self, "lambda_weights", weights)
        object.__setattr__(self, "conditionals", tables)
        self._check_no_signaling()

    def _check_no_signaling(self):
        t = self.conditionals
        a_side = lambda k: t[k].sum(axis=-1)  # noqa: E731
        b_side = lambda k: t[k].sum(axis=-2)  # noqa: E731
        pairs = [
            (a_side("AB"), a_side("ABp"), "A marginal depends on B vs B'"),
            (a_side("ApB"), a_side("ApBp"), "A' marginal depends on B vs B'"),
            (b_side("AB"), b_side("ApB"), "B marginal depends on A vs A'"),
            (b_side("ABp"), b_side("ApBp"), "B' marginal depends on A vs A'"),
        ]
        for left, right, message in pairs:
            if np.max(np.abs(left - right)) > NO_SIGNALING_TOL:
                raise ValidationError(f"signaling model: {message}")

    @property
    def n_lambda(self):
        return self.lambda_weights.size


def _conditional_cdist(tables):
    pa = tables.sum(axis=-1)
    pb = tables.sum(axis=-2)
    return np.abs(tables - pa[..., :, None] * pb[..., None, :]).sum(axis=(-2, -1))


@dataclass(frozen=True)
class ModelAnalysis:
    chsh: float
    c_max: float
    outcome_independent: bool
    correlators: tuple


def model_analysis(model):
    """CHSH value of the lambda-averaged statistics and the largest conditional
    correlation distance over all lambda and setting pairs."""
    w = model.lambda_weights
    correlators = tuple(
        float(w @ (model.conditionals[k] * _OUTCOME_PRODUCT).sum(axis=(-2, -1)))
        for k in SETTINGS
    )
    ab, abp, apb, apbp = correlators
    c_max = max(float(_conditional_cdist(model.conditionals[k]).max()) for k in SETTINGS)
    return ModelAnalysis(
        chsh=ab + abp + apb - apbp,
        c_max=c_max,
        outcome_independent=c_max < INDEPENDENCE_TOL,
        correlators=correlators,
    )


def box_tables(x, xp, y, yp, r):
    """Conditional tables of one no-signaling box.

    ``x``, ``xp`` are the biases of A and A', ``y``, ``yp`` those of B and B',
    and ``r`` the four correlation parameters in :data:`SETTINGS` order.
    """
    marg = {"AB": (x, y), "ABp": (x, yp), "ApB": (xp, y), "ApBp": (xp, yp)}
    return {k: binary_table(*marg[k], r[i]) for i, k in enumerate(SETTINGS)}


def saturating_model(c_max):
    """Two-lambda model whose CHSH value equals ``4 / (2 - c_max)``.

    Each box has A, A' biases ``+-(1 - c)``, B unbiased, B' bias
    ``2 (1 - c) / (2 - c)`` and correlations ``(c, c, c, -c)``; the second
    lambda flips every outcome so the averaged marginals are uniform.
    """
    c = c_max
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"c_max must lie in [0, 1], got {c!r}")
    q = 1.0 - c
    w = 2.0 * (1.0 - c) / (2.0 - c)
    r = (c, c, c, -c)
    first = box_tables(q, -q, 0.0, w, r)
    second = box_tables(-q, q, 0.0, -w, r)
    conditionals = {k: np.stack([first[k], second[k]]) for k in SETTINGS}
    return LhvModel(np.array([0.5, 0.5]), conditionals)
