"""Classical probability engine: entropies, distances and mutual information.

Distributions are plain numpy arrays. A probability vector is indexed along
the last axis and a joint table along the last two, so every function also
accepts a stack of distributions and broadcasts over the leading axes.

Two-valued variables use outcome labels ``+1`` and ``-1`` mapped to array
indices 0 and 1. In that case a 2x2 joint table is described by the
marginal biases ``x``, ``y`` and the correlation parameter ``r``::

    P(a, b) = [(1 + a x)(1 + b y) + a b r] / 4
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import entr, rel_entr

from .errors import ConsistencyError, DomainError, ValidationError
from .units import BITS, LN2, as_output, from_nats

CLIP_TOL = 1e-12
NORM_TOL = 1e-9
POSITIVITY_TOL = 1e-12


def _clip_negatives(p, what):
    if np.any(p < -CLIP_TOL):
        raise ValidationError(f"{what} has a negative entry ({p.min():.3g})")
    return np.where(p < 0.0, 0.0, p)


def as_prob_vector(p):
    """Validate ``p`` as a probability vector (last axis) and return a copy.

    Entries in ``[-1e-12, 0)`` are clipped to zero; anything more negative,
    or a total differing from one by more than 1e-9, raises
    :class:`ValidationError`.
    """
    p = np.array(p, dtype=float)
    if p.ndim == 0 or p.shape[-1] == 0:
        raise ValidationError("a probability vector needs at least one entry")
    if not np.all(np.isfinite(p)):
        raise ValidationError("probability vector has non-finite entries")
    p = _clip_negatives(p, "probability vector")
    total = p.sum(axis=-1)
    if np.any(np.abs(total - 1.0) > NORM_TOL):
        raise ValidationError(f"probabilities sum to {np.ravel(total)[0]!r}, not 1")
    return p


def as_joint_table(table):
    """Validate an n x m joint probability table (last two axes)."""
    t = np.array(table, dtype=float)
    if t.ndim < 2 or 0 in t.shape[-2:]:
        raise ValidationError("a joint table must be a non-empty 2-d grid")
    if not np.all(np.isfinite(t)):
        raise ValidationError("joint table has non-finite entries")
    t = _clip_negatives(t, "joint table")
    total = t.sum(axis=(-2, -1))
    if np.any(np.abs(total - 1.0) > NORM_TOL):
        raise ValidationError(f"joint table sums to {np.ravel(total)[0]!r}, not 1")
    return t


def marginals(table):
    """Row (A) and column (B) marginals of a joint table."""
    t = as_joint_table(table)
    return t.sum(axis=-1), t.sum(axis=-2)


def product_table(pa, pb):
    """Joint table of independent variables with marginals ``pa`` and ``pb``."""
    pa = as_prob_vector(pa)
    pb = as_prob_vector(pb)
    return pa[..., :, None] * pb[..., None, :]


def _check_same_length(p, q):
    if p.shape[-1] != q.shape[-1]:
        raise ValidationError(
            f"distributions have different lengths ({p.shape[-1]} vs {q.shape[-1]})"
        )


def _entropy_nats(p, axes):
    return entr(p).sum(axis=axes)


def shannon_entropy(p, unit=BITS):
    """Shannon entropy ``-sum p log p`` with ``0 log 0 = 0``."""
    p = as_prob_vector(p)
    return as_output(from_nats(_entropy_nats(p, -1), unit))


def binary_entropy(p, unit=BITS):
    """Entropy of the two-outcome distribution ``(p, 1 - p)``."""
    p = np.asarray(p, dtype=float)
    return as_output(from_nats(entr(p) + entr(1.0 - p), unit))


def relative_entropy(p, q, unit=BITS):
    """``sum p (log p - log q)``; ``+inf`` when p has support outside q."""
    p = as_prob_vector(p)
    q = as_prob_vector(q)
    _check_same_length(p, q)
    return as_output(from_nats(rel_entr(p, q).sum(axis=-1), unit))


def variational_distance(p, q):
    """L1 distance ``sum |p - q|``, between 0 and 2."""
    p = as_prob_vector(p)
    q = as_prob_vector(q)
    _check_same_length(p, q)
    return as_output(np.abs(p - q).sum(axis=-1))


def classical_mutual_information(table, unit=BITS):
    """Mutual information of a joint table.

    Evaluated both as ``H(P_AB || P_A P_B)`` and as
    ``H(P_A) + H(P_B) - H(P_AB)``; the two must agree to 1e-9 nats.
    """
    t = as_joint_table(table)
    pa = t.sum(axis=-1)
    pb = t.sum(axis=-2)
    # log P_AB - log P_A - log P_B, without forming the product (which can
    # underflow to zero for tiny entries)
    pos = t > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.log(t) - np.log(pa)[..., :, None] - np.log(pb)[..., None, :]
    via_divergence = np.where(pos, t * np.where(pos, log_ratio, 0.0), 0.0).sum(axis=(-2, -1))
    via_entropies = (
        _entropy_nats(pa, -1) + _entropy_nats(pb, -1) - _entropy_nats(t, (-2, -1))
    )
    if np.any(np.abs(via_divergence - via_entropies) > NORM_TOL):
        raise ConsistencyError("mutual information routes disagree")
    return as_output(from_nats(via_divergence, unit))


def classical_correlation_distance(table):
    """``sum_ab |P_AB(a,b) - P_A(a) P_B(b)|``."""
    t = as_joint_table(table)
    pa = t.sum(axis=-1)
    pb = t.sum(axis=-2)
    return as_output(np.abs(t - pa[..., :, None] * pb[..., None, :]).sum(axis=(-2, -1)))


@dataclass(frozen=True)
class BinaryParams:
    """Marginal biases ``x``, ``y`` and correlation ``r`` of a 2x2 table.

    Fields may be scalars or equally shaped arrays. Construction does not
    check positivity; see :meth:`is_physical`.
    """

    x: float
    y: float
    r: float

    def positivity_sides(self):
        """Slack of the lower and upper side of the positivity condition."""
        x, y, r = (np.asarray(v, dtype=float) for v in (self.x, self.y, self.r))
        lower = r + x * y - (np.abs(x + y) - 1.0)
        upper = 1.0 - np.abs(x - y) - (r + x * y)
        return lower, upper

    def is_physical(self, tol=POSITIVITY_TOL):
        """True where ``|x+y| - 1 <= r + xy <= 1 - |x-y|`` (up to ``tol``)."""
        lower, upper = self.positivity_sides()
        return as_output((lower >= -tol) & (upper >= -tol))


def binary_table(x, y, r):
    """Raw ``[(1 + a x)(1 + b y) + a b r] / 4`` grid, without any checks."""
    x, y, r = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, r)))
    signs = np.array([1.0, -1.0])
    a = signs[:, None]
    b = signs[None, :]
    x = x[..., None, None]
    y = y[..., None, None]
    r = r[..., None, None]
    return ((1.0 + a * x) * (1.0 + b * y) + a * b * r) / 4.0


def binary_joint_from_params(params):
    """Build the 2x2 joint table for ``params``.

    Raises :class:`DomainError` naming the violated side of the positivity
    condition when the table would have a negative entry.
    """
    lower, upper = params.positivity_sides()
    if np.any(lower < -POSITIVITY_TOL):
        raise DomainError("positivity violated: r + xy < |x + y| - 1")
    if np.any(upper < -POSITIVITY_TOL):
        raise DomainError("positivity violated: r + xy > 1 - |x - y|")
    return as_joint_table(binary_table(params.x, params.y, params.r))


def params_from_binary(table):
    """Inverse of :func:`binary_joint_from_params` for 2x2 tables.

    ``r`` is read off as ``4 (P(+,+) - P_A(+) P_B(+))``.
    """
    t = np.asarray(table, dtype=float)
    if t.shape[-2:] != (2, 2):
        raise ValidationError(f"expected a 2x2 table, got shape {t.shape[-2:]}")
    t = as_joint_table(t)
    pa_plus = t[..., 0, :].sum(axis=-1)
    pb_plus = t[..., :, 0].sum(axis=-1)
    r = 4.0 * (t[..., 0, 0] - pa_plus * pb_plus)
    return BinaryParams(
        x=as_output(2.0 * pa_plus - 1.0),
        y=as_output(2.0 * pb_plus - 1.0),
        r=as_output(r),
    )


def classical_witness_f(params, unit=BITS):
    """``I(P_AB) - log 2 + H((1+r)/2, (1-r)/2)``, non-negative on the domain."""
    table = binary_joint_from_params(params)
    info = classical_mutual_information(table, unit="nats")
    r = np.asarray(params.r, dtype=float)
    value = info - LN2 + entr((1.0 + r) / 2.0) + entr((1.0 - r) / 2.0)
    return as_output(from_nats(value, unit))


def witness_second_derivative_check(x, y):
    """Curvature of the witness at ``r = 0`` in nats: ``1/((1-x^2)(1-y^2)) - 1``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) >= 1.0) or np.any(np.abs(y) >= 1.0):
        raise DomainError("curvature formula needs |x| < 1 and |y| < 1")
    return as_output(1.0 / ((1.0 - x * x) * (1.0 - y * y)) - 1.0)
