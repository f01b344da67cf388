import math

import numpy as np
import pytest

from corrdist.bell import (
    SETTINGS,
    LhvModel,
    box_tables,
    chsh_value,
    model_analysis,
    relaxed_chsh_bound,
    saturating_model,
    simulation_resources,
)
from corrdist.bounds import classical_tight_bound
from corrdist.errors import DomainError, ValidationError
from corrdist.verify import search_saturating_model

TSIRELSON_V = 2 * (math.sqrt(2) - 1)
# mpmath reference for log2 - H((2+3V)/(4+2V), (2-V)/(4+2V)) at V = 2(sqrt2 - 1)
TSIRELSON_I_MIN = 0.26408406196540336742


def _deterministic_model():
    outcomes = [(1, 1, -1, 1), (-1, 1, 1, 1), (1, -1, -1, -1)]
    weights = np.array([0.5, 0.3, 0.2])
    cond = {k: [] for k in SETTINGS}
    for a, ap, b, bp in outcomes:
        tables = box_tables(a, ap, b, bp, (0, 0, 0, 0))
        for k in SETTINGS:
            cond[k].append(tables[k])
    return LhvModel(weights, {k: np.array(v) for k, v in cond.items()})


def test_chsh_examples():
    assert chsh_value(1, 1, 1, -1) == 4
    h = math.sqrt(2) / 2
    assert chsh_value(h, h, h, -h) == pytest.approx(2 * math.sqrt(2))
    assert chsh_value(1, 1, 1, 1) == 2
    with pytest.raises(DomainError):
        chsh_value(1.5, 0, 0, 0)


def test_relaxed_bound_examples():
    assert relaxed_chsh_bound(0) == 2
    assert relaxed_chsh_bound(1) == 4
    assert relaxed_chsh_bound(2 / 3) == pytest.approx(3)
    with pytest.raises(DomainError):
        relaxed_chsh_bound(1.1)


def test_simulation_resources():
    r = simulation_resources(0.0)
    assert (r.c_max_required, r.i_min) == (0.0, 0.0)
    r = simulation_resources(2.0)
    assert r.c_max_required == pytest.approx(1.0, abs=1e-12)
    assert r.i_min == pytest.approx(1.0, abs=1e-12)
    r = simulation_resources(TSIRELSON_V)
    assert r.c_max_required == pytest.approx(2 * TSIRELSON_V / (2 + TSIRELSON_V), abs=1e-15)
    assert r.i_min == pytest.approx(TSIRELSON_I_MIN, abs=1e-12)
    assert r.i_min == pytest.approx(classical_tight_bound(r.c_max_required), abs=1e-12)
    with pytest.raises(DomainError):
        simulation_resources(2.5)


def test_simulation_resources_monotone():
    vs = np.linspace(0, 2, 401)
    res = [simulation_resources(v) for v in vs]
    c = np.array([r.c_max_required for r in res])
    i = np.array([r.i_min for r in res])
    assert np.all(np.diff(c) > 0) and np.all(np.diff(i) > 0)
    np.testing.assert_allclose(i, [classical_tight_bound(x) for x in c], atol=1e-12)


def test_deterministic_model_is_outcome_independent():
    a = model_analysis(_deterministic_model())
    assert a.outcome_independent and a.c_max == 0.0
    assert a.chsh <= 2 + 1e-12


def test_perfectly_correlated_conditional_has_c_max_one():
    tables = box_tables(0, 0, 0, 0, (1, 0, 0, 0))
    model = LhvModel(np.array([1.0]), {k: tables[k][None] for k in SETTINGS})
    np.testing.assert_allclose(model.conditionals["AB"][0], np.diag([0.5, 0.5]))
    assert model_analysis(model).c_max == pytest.approx(1.0)


def test_signaling_model_rejected():
    tables = box_tables(0.2, 0, 0, 0, (0, 0, 0, 0))
    tables["ABp"] = box_tables(-0.2, 0, 0, 0, (0, 0, 0, 0))["ABp"]
    with pytest.raises(ValidationError, match="signaling"):
        LhvModel(np.array([1.0]), {k: tables[k][None] for k in SETTINGS})
    with pytest.raises(ValidationError):
        LhvModel(np.array([1.0]), {"AB": tables["AB"][None]})


@pytest.mark.parametrize("c", [0.0, 0.1, 0.3, 2 - math.sqrt(2), 0.8, 1.0])
def test_analytic_saturating_model(c):
    a = model_analysis(saturating_model(c))
    assert a.c_max == pytest.approx(c, abs=1e-12)
    assert a.chsh == pytest.approx(relaxed_chsh_bound(c), abs=1e-12)


def test_tsirelson_model_from_search():
    c = 2 * TSIRELSON_V / (2 + TSIRELSON_V)
    model, chsh = search_saturating_model(c)
    a = model_analysis(model)
    assert a.chsh == chsh
    assert a.c_max <= c + 1e-12
    assert chsh == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    # marginals of the averaged statistics are unbiased by construction
    avg = np.einsum("l,lab->ab", model.lambda_weights, model.conditionals["AB"])
    np.testing.assert_allclose(avg.sum(axis=1), [0.5, 0.5], atol=1e-12)


def test_search_never_exceeds_relaxed_bound():
    for c in (0.2, 0.5, 0.9):
        _, chsh = search_saturating_model(c, rounds=20)
        assert chsh <= relaxed_chsh_bound(c) + 1e-9
