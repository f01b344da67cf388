"""Property sweeps over seeded samples.

Every sweep maps sample index ``i`` to a *margin*: the slack of the
inequality being checked (or minus the absolute error of an identity), so a
margin below ``-1e-9`` is a violation. Samples are evaluated in fixed-size
chunks that may run in worker processes; chunk results are merged by
order-independent reductions (counts, and minima tie-broken by index), so a
report depends only on ``(kind, n_samples, seed)``.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..bell import relaxed_chsh_bound, model_analysis
from ..bounds import c0, classical_tight_bound, quantum_tight_bound
from ..prob_core import (
    binary_table,
    classical_correlation_distance,
    classical_mutual_information,
)
from ..qubit_core import (
    _marginals,
    apply_local_unitaries,
    conjecture_shift,
    correlation_distance_from_triple,
    correlations_from_bell_weights,
    entanglement_report,
    fano_decompose,
    kron2,
    measure_projective,
    partial_trace,
    quantum_correlation_distance,
    quantum_mutual_information,
    singular_triple,
    twirl,
    werner,
)
from ..io import model_to_dict
from ..units import NATS
from .samplers import sample, sample_states

VIOLATION_TOL = 1e-9
CHUNK = 4096
NO_CHECK = np.inf


@dataclass(frozen=True)
class SweepReport:
    """Outcome of one sweep.

    ``worst_case`` is a JSON document describing the sample with the smallest
    margin. Sweeps with ``asserted=False`` report but never count as failures.
    """

    kind: str
    samples: int
    violations: int
    worst_margin: float
    worst_case: str
    seed: int
    asserted: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def failed(self):
        return self.asserted and self.violations > 0

    def summary_lines(self):
        lines = [
            f"kind={self.kind}",
            f"samples={self.samples}",
            f"seed={self.seed}",
            f"violations={self.violations}",
            f"worst_margin={self.worst_margin:.9g}",
            f"asserted={str(self.asserted).lower()}",
        ]
        lines += [f"{k}={_fmt(v)}" for k, v in sorted(self.extras.items())]
        return lines


def _fmt(value):
    return f"{value:.9g}" if isinstance(value, float) else str(value)


# --- per-kind chunk evaluators -------------------------------------------
# Each takes (seed, indices) and returns (margins, extras) where extras keys
# start with "count_", "min_" or "max_" to select the merge rule.


def _pinsker(seed, idx):
    tables = [sample("joint_table", seed, i) for i in idx]
    margins = np.empty(len(idx))
    by_shape = {}
    for pos, t in enumerate(tables):
        by_shape.setdefault(t.shape, []).append(pos)
    for shape, positions in by_shape.items():
        stack = np.array([tables[p] for p in positions])
        info = np.asarray(classical_mutual_information(stack, unit=NATS))
        cdist = np.asarray(classical_correlation_distance(stack))
        m = info - 0.5 * cdist**2
        n, k = shape
        if n == k:
            m = np.minimum(m, 2.0 * (n - 1) / n - cdist)
        margins[positions] = m
    return margins, {}


def _classical_tight(seed, idx):
    params = [sample("binary_params", seed, i) for i in idx]
    x = np.array([p.x for p in params])
    y = np.array([p.y for p in params])
    r = np.array([p.r for p in params])
    tables = np.clip(binary_table(x, y, r), 0.0, None)
    tables /= tables.sum(axis=(-2, -1), keepdims=True)
    info = np.asarray(classical_mutual_information(tables, unit=NATS))
    cdist = np.minimum(np.asarray(classical_correlation_distance(tables)), 1.0)
    return info - np.asarray(classical_tight_bound(cdist, unit=NATS)), {}


def _info_and_cdist(states):
    info = np.asarray(quantum_mutual_information(states, unit=NATS))
    cdist = np.asarray(quantum_correlation_distance(states))
    return info, cdist


def _quantum_tight_bell_diagonal(seed, idx):
    states = sample_states("state_bell_diagonal", seed, idx)
    info, cdist = _info_and_cdist(states)
    cdist = np.minimum(cdist, 1.5)
    return info - np.asarray(quantum_tight_bound(cdist, unit=NATS)), {}


def _quantum_tight_mixed_marginal(seed, idx):
    states = sample_states("state_mixed_marginal", seed, idx)
    info, cdist = _info_and_cdist(states)
    cdist = np.minimum(cdist, 1.5)
    checked = cdist >= c0()
    margins = np.where(
        checked, info - np.asarray(quantum_tight_bound(cdist, unit=NATS)), NO_CHECK
    )
    return margins, {"count_checked": int(checked.sum())}


def _cdist_formula(seed, idx):
    states = sample_states("state_hs", seed, idx)
    ra, rb = _marginals(states)
    via_trace = np.abs(np.linalg.eigvalsh(states - kron2(ra, rb))).sum(axis=-1)
    via_triple = np.asarray(
        correlation_distance_from_triple(singular_triple(fano_decompose(states).T))
    )
    return -np.abs(via_trace - via_triple), {}


_WERNER_GRID = 1000


def _chain_instance(seed, i):
    kind = i % 3
    if kind == 0:
        return "state_hs", sample("state_hs", seed, i)
    if kind == 1:
        return "state_separable", sample("state_separable", seed, i)
    k = (i // 3) % (_WERNER_GRID + 1)
    return "werner", werner(-1.0 / 3.0 + (4.0 / 3.0) * k / _WERNER_GRID)


def _entanglement_chain(seed, idx):
    states = np.array([_chain_instance(seed, i)[1] for i in idx])
    report = entanglement_report(states)
    margins = np.where(np.asarray(report.chain_holds()), 0.0, -1.0)
    separable = np.array([i % 3 == 1 for i in idx])
    if separable.any():
        sep = states[separable]
        form = fano_decompose(sep)
        uu = np.einsum("...j,...j->...", form.u, form.u)
        vv = np.einsum("...j,...j->...", form.v, form.v)
        cap = np.sqrt(np.clip((1.0 - uu) * (1.0 - vv), 0.0, None))
        cdist = np.asarray(report.correlation_distance)[separable]
        ppt = np.asarray(report.ppt_entangled)[separable]
        sep_margin = np.minimum(cap - cdist, np.where(ppt, -1.0, 0.0))
        margins[separable] = np.minimum(margins[separable], sep_margin)
    return margins, {"count_entangled": int(np.asarray(report.ppt_entangled).sum())}


def _relaxed_chsh(seed, idx):
    margins = np.empty(len(idx))
    independent = 0
    for pos, i in enumerate(idx):
        a = model_analysis(sample("lhv_model", seed, i))
        m = relaxed_chsh_bound(min(a.c_max, 1.0)) - a.chsh
        if a.outcome_independent:
            independent += 1
            m = min(m, 2.0 - a.chsh)
        margins[pos] = m
    return margins, {"count_outcome_independent": independent}


def _data_processing_instance(seed, i):
    if i % 2 == 0:
        state = sample("state_hs", seed, i)
        return None, sample("projective_pair", seed, i), state
    return sample("classically_correlated", seed, i)


def _data_processing(seed, idx):
    margins = np.empty(len(idx))
    for pos, i in enumerate(idx):
        table, pair, state = _data_processing_instance(seed, i)
        measured = measure_projective(state, pair)
        di = quantum_mutual_information(state, unit=NATS) - classical_mutual_information(
            measured, unit=NATS
        )
        dc = quantum_correlation_distance(state) - classical_correlation_distance(measured)
        if table is None:
            margins[pos] = min(di, dc)
        else:
            err = np.max(np.abs(measured - table))
            margins[pos] = -max(abs(di), abs(dc), err)
    return margins, {}


def _local_unitary(seed, idx):
    states = sample_states("state_hs", seed, idx)
    pairs = [sample("local_unitaries", seed, i) for i in idx]
    ua = np.array([p[0] for p in pairs])
    ub = np.array([p[1] for p in pairs])
    rotated = apply_local_unitaries(states, ua, ub)
    i0, c0_ = _info_and_cdist(states)
    i1, c1 = _info_and_cdist(rotated)
    return -np.maximum(np.abs(i1 - i0), np.abs(c1 - c0_)), {}


def _twirl_monotonicity(seed, idx):
    states = sample_states("state_mixed_marginal", seed, idx)
    twirled = twirl(states)
    info, cdist = _info_and_cdist(states)
    tinfo, tcdist = _info_and_cdist(twirled)
    idempotence = np.abs(twirl(twirled) - twirled).max(axis=(-2, -1))
    half = np.eye(2) / 2.0
    marg = np.maximum(
        np.abs(partial_trace(twirled, "A") - half).max(axis=(-2, -1)),
        np.abs(partial_trace(twirled, "B") - half).max(axis=(-2, -1)),
    )
    margins = np.minimum.reduce([info - tinfo, cdist - tcdist, -idempotence, -marg])
    return margins, {}


def _bell_diagonal_spectrum(seed, idx):
    states = sample_states("state_bell_diagonal", seed, idx)
    r = np.diagonal(fano_decompose(states).M, axis1=-2, axis2=-1)
    r1, r2, r3 = r[..., 0], r[..., 1], r[..., 2]
    formula = np.stack(
        [
            1.0 - r1 - r2 - r3,
            1.0 - r1 + r2 + r3,
            1.0 + r1 - r2 + r3,
            1.0 + r1 + r2 - r3,
        ],
        axis=-1,
    ) / 4.0
    spectrum = np.linalg.eigvalsh(states)
    err = np.abs(np.sort(formula, axis=-1) - spectrum).max(axis=-1)
    roundtrip = np.abs(correlations_from_bell_weights(formula) - r).max(axis=-1)
    return -np.maximum(err, roundtrip), {}


def _conjecture_general_states(seed, idx):
    states = sample_states("state_hs", seed, idx)
    info, cdist = _info_and_cdist(states)
    cdist = np.minimum(cdist, 1.5)
    return info - np.asarray(quantum_tight_bound(cdist, unit=NATS)), {}


def _conjecture_shift(seed, idx):
    states = sample_states("state_hs", seed, idx)
    shift = conjecture_shift(states)
    psd = np.asarray(shift.is_psd)
    margins = np.full(len(idx), NO_CHECK)
    extras = {"count_non_psd": int((~psd).sum())}
    if psd.any():
        shifted = shift.matrix[psd]
        lowest = np.linalg.eigvalsh(shifted)[..., 0]
        # clear float-level negative eigenvalues before taking entropies
        shifted = shifted + np.clip(-lowest, 0.0, None)[:, None, None] * np.eye(4)
        shifted /= np.trace(shifted, axis1=-2, axis2=-1).real[:, None, None]
        info, cdist = _info_and_cdist(states[psd])
        sinfo, scdist = _info_and_cdist(shifted)
        f = info - sinfo
        margins[psd] = f
        extras["min_F"] = float(f.min())
        extras["max_cdist_gap"] = float(np.abs(cdist - scdist).max())
    return margins, extras


@dataclass(frozen=True)
class _Kind:
    evaluate: object
    describe: object
    asserted: bool = True


def _describe_family(family):
    def describe(seed, i):
        return _serialize(family, sample(family, seed, i))

    return describe


def _describe_chain(seed, i):
    family, state = _chain_instance(seed, i)
    return {"family": family, "state": _state_dict(state)}


def _describe_data_processing(seed, i):
    table, pair, state = _data_processing_instance(seed, i)
    out = {
        "state": _state_dict(state),
        "a_axis": pair.a_axis.tolist(),
        "b_axis": pair.b_axis.tolist(),
    }
    if table is not None:
        out["table"] = table.tolist()
    return out


def _describe_local_unitary(seed, i):
    ua, ub = sample("local_unitaries", seed, i)
    return {
        "state": _state_dict(sample("state_hs", seed, i)),
        "ua": _state_dict(ua),
        "ub": _state_dict(ub),
    }


KINDS = {
    "pinsker": _Kind(_pinsker, _describe_family("joint_table")),
    "classical_tight": _Kind(_classical_tight, _describe_family("binary_params")),
    "quantum_tight_bell_diagonal": _Kind(
        _quantum_tight_bell_diagonal, _describe_family("state_bell_diagonal")
    ),
    "quantum_tight_mixed_marginal": _Kind(
        _quantum_tight_mixed_marginal, _describe_family("state_mixed_marginal")
    ),
    "cdist_formula": _Kind(_cdist_formula, _describe_family("state_hs")),
    "entanglement_chain": _Kind(_entanglement_chain, _describe_chain),
    "relaxed_chsh": _Kind(_relaxed_chsh, _describe_family("lhv_model")),
    "data_processing": _Kind(_data_processing, _describe_data_processing),
    "local_unitary": _Kind(_local_unitary, _describe_local_unitary),
    "twirl_monotonicity": _Kind(_twirl_monotonicity, _describe_family("state_mixed_marginal")),
    "bell_diagonal_spectrum": _Kind(
        _bell_diagonal_spectrum, _describe_family("state_bell_diagonal")
    ),
    "conjecture_general_states": _Kind(
        _conjecture_general_states, _describe_family("state_hs"), asserted=False
    ),
    "conjecture_shift": _Kind(_conjecture_shift, _describe_family("state_hs"), asserted=False),
}


def _state_dict(m):
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _serialize(family, instance):
    if family == "binary_params":
        value = {"x": instance.x, "y": instance.y, "r": instance.r}
    elif family == "joint_table":
        value = instance.tolist()
    elif family == "lhv_model":
        value = model_to_dict(instance)
    else:
        value = _state_dict(instance)
    return {"family": family, "value": value}


# --- driver ---------------------------------------------------------------


def _run_chunk(kind, seed, start, stop):
    idx = list(range(start, stop))
    margins, extras = KINDS[kind].evaluate(seed, idx)
    margins = np.asarray(margins, dtype=float)
    violations = int(np.count_nonzero(margins < -VIOLATION_TOL))
    pos = int(np.argmin(margins))
    return violations, float(margins[pos]), start + pos, extras


def _merge_extras(total, part):
    for key, value in part.items():
        if key not in total:
            total[key] = value
        elif key.startswith("count_"):
            total[key] += value
        elif key.startswith("min_"):
            total[key] = min(total[key], value)
        elif key.startswith("max_"):
            total[key] = max(total[key], value)


def run_sweep(kind, n_samples, seed, workers=1):
    """Evaluate sweep ``kind`` on samples ``0 .. n_samples-1`` for ``seed``."""
    if kind not in KINDS:
        raise ValueError(f"unknown sweep kind {kind!r}; choose from {sorted(KINDS)}")
    n_samples = int(n_samples)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    seed = int(seed)
    bounds = [(s, min(s + CHUNK, n_samples)) for s in range(0, n_samples, CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, kind, seed, a, b) for a, b in bounds]
            results = [f.result() for f in futures]
    else:
        results = [_run_chunk(kind, seed, a, b) for a, b in bounds]

    violations = 0
    worst = (np.inf, n_samples)
    extras = {}
    for count, margin, index, part in results:
        violations += count
        worst = min(worst, (margin, index))
        _merge_extras(extras, part)
    worst_margin, worst_index = worst
    if np.isfinite(worst_margin):
        case = {"index": worst_index, **KINDS[kind].describe(seed, worst_index)}
    else:
        case = {}
    return SweepReport(
        kind=kind,
        samples=n_samples,
        violations=violations,
        worst_margin=worst_margin,
        worst_case=json.dumps(case),
        seed=seed,
        asserted=KINDS[kind].asserted,
        extras=extras,
    )
