"""Acceptance gate: one test per exit criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the lines
interleaved; they are also written straight to the terminal).
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from corrdist.bell import simulation_resources
from corrdist.bounds import (
    c0,
    classical_tight_bound,
    compute_c0,
    pinsker_bound,
    quantum_tight_bound,
)
from corrdist.prob_core import BinaryParams, binary_joint_from_params, classical_mutual_information
from corrdist.qubit_core import (
    SINGLET,
    entanglement_report,
    make_state,
    quantum_correlation_distance,
    quantum_mutual_information,
    werner,
)
from corrdist.verify import brute_force_min_mi, run_sweep

pytestmark = pytest.mark.acceptance

SEED = 42
PUBLISHED_C0 = 0.72654
QUANTUM_BOUND_AT_ONE = 0.792481  # log 4 - H(3/4, 1/12, 1/12, 1/12) in bits


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        start = time.perf_counter()
        notes = []
        try:
            yield notes
        except BaseException:
            status = "FAIL"
            raise
        else:
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            detail = "; ".join(notes)
            with capsys.disabled():
                print(f"\n[{status}] criterion {number:2d}: {title} ({elapsed:.2f} s) {detail}")

    return run


def test_criterion_01_c0(criterion):
    with criterion(1, "C0 reproduction") as notes:
        start = time.perf_counter()
        value = compute_c0(1e-9)
        elapsed = time.perf_counter() - start
        notes.append(f"C0={value:.9f}, |diff|={abs(value - PUBLISHED_C0):.2e}")
        assert abs(value - PUBLISHED_C0) < 5e-5
        assert elapsed < 1.0


def test_criterion_02_werner(criterion):
    with criterion(2, "Werner family correlation distance") as notes:
        worst = 0.0
        for p in np.round(np.arange(0, 101) * 0.01, 2):
            worst = max(worst, abs(quantum_correlation_distance(werner(p)) - 1.5 * p))
        singlet = np.outer(SINGLET, SINGLET.conj())
        c = quantum_correlation_distance(singlet)
        info = quantum_mutual_information(singlet)
        notes.append(f"max|C-3p/2|={worst:.1e}, singlet C={c:.12f} I={info:.12f}")
        assert worst <= 1e-9
        assert abs(c - 1.5) <= 1e-9
        assert abs(info - 2.0) <= 1e-9


def test_criterion_03_classical_sweep(criterion):
    with criterion(3, "classical bound sweep") as notes:
        start = time.perf_counter()
        report = run_sweep("classical_tight", 100_000, SEED)
        worst = 0.0
        for c in np.round(np.arange(0, 101) * 0.01, 2):
            for r in (c, -c):
                table = binary_joint_from_params(BinaryParams(0.0, 0.0, r))
                worst = max(worst, abs(classical_mutual_information(table) - classical_tight_bound(c)))
        elapsed = time.perf_counter() - start
        notes.append(
            f"violations={report.violations}, worst_margin={report.worst_margin:.2e}, "
            f"saturation gap={worst:.1e}"
        )
        assert report.violations == 0, report.worst_case
        assert worst <= 1e-9
        assert elapsed < 10.0


def test_criterion_04_quantum_sweep(criterion):
    with criterion(4, "quantum bound sweep") as notes:
        start = time.perf_counter()
        bell_diag = run_sweep("quantum_tight_bell_diagonal", 100_000, SEED)
        worst = 0.0
        for c in np.round(np.arange(0, 151) * 0.01, 2):
            info = quantum_mutual_information(make_state("saturating", c=float(c)))
            worst = max(worst, abs(info - quantum_tight_bound(c)))
        mixed = run_sweep("quantum_tight_mixed_marginal", 100_000, SEED)
        elapsed = time.perf_counter() - start
        notes.append(
            f"bell-diagonal violations={bell_diag.violations}, saturation gap={worst:.1e}, "
            f"mixed-marginal violations={mixed.violations} over {mixed.extras['count_checked']} with C>=C0"
        )
        assert bell_diag.violations == 0, bell_diag.worst_case
        assert worst <= 1e-9
        assert mixed.violations == 0, mixed.worst_case
        assert mixed.extras["count_checked"] > 0
        assert elapsed < 60.0


def test_criterion_05_oracles(criterion):
    with criterion(5, "brute-force oracle agreement") as notes:
        gaps = {}
        for c in (0.25, 0.5, 1.0):
            gaps[c] = brute_force_min_mi("classical", c, 2000) - classical_tight_bound(c)
        quantum = brute_force_min_mi("bell_diagonal", 1.0, 2000)
        notes.append(
            ", ".join(f"classical gap@{c}={g:.1e}" for c, g in gaps.items())
            + f", bell-diagonal@1={quantum:.6f}"
        )
        assert all(abs(g) <= 1e-5 for g in gaps.values())
        assert abs(quantum - QUANTUM_BOUND_AT_ONE) <= 1e-3


def _first_true(grid, flags):
    idx = np.flatnonzero(flags)
    return grid[idx[0]] if idx.size else math.nan


def test_criterion_06_entanglement_chain(criterion):
    with criterion(6, "entanglement criteria chain") as notes:
        report = run_sweep("entanglement_chain", 100_000, SEED)
        grid = np.arange(0, 1001) / 1000
        states = np.array([werner(p) for p in grid])
        rep = entanglement_report(states)
        p_cov = _first_true(grid, rep.covariance_criterion)
        p_cdist = _first_true(grid, rep.cdist_gt_one)
        p_ppt = _first_true(grid, rep.ppt_entangled)
        notes.append(
            f"exceptions={report.violations}, covariance from p={p_cov}, "
            f"C>1 from p={p_cdist}, PPT from p={p_ppt}"
        )
        assert report.violations == 0, report.worst_case
        assert np.all(rep.chain_holds())
        assert abs(p_cov - 1 / 3) <= 1e-3
        assert abs(p_cdist - 2 / 3) <= 1e-3


def test_criterion_07_bound_ordering(criterion):
    with criterion(7, "bound ordering") as notes:
        grid = np.arange(0, 1001) / 1000
        p = pinsker_bound(grid)
        q = quantum_tight_bound(grid)
        k = classical_tight_bound(grid)
        equal = q == k
        margin = classical_tight_bound(0.9) - quantum_tight_bound(0.9)
        notes.append(f"margin at C=0.9: {margin:.6f} bits")
        assert np.all(p <= q)
        assert np.all(q <= k)
        np.testing.assert_array_equal(equal, grid <= c0())
        assert margin > 1e-6


def test_criterion_08_bell_resources(criterion):
    with criterion(8, "Bell simulation resources") as notes:
        low = simulation_resources(0.0)
        high = simulation_resources(2.0)
        report = run_sweep("relaxed_chsh", 10_000, SEED)
        notes.append(
            f"V=0 -> ({low.c_max_required}, {low.i_min}), V=2 -> ({high.c_max_required:.15f}, "
            f"{high.i_min:.15f}), violations={report.violations}"
        )
        assert abs(low.c_max_required) <= 1e-12 and abs(low.i_min) <= 1e-12
        assert abs(high.c_max_required - 1.0) <= 1e-12 and abs(high.i_min - 1.0) <= 1e-12
        assert report.violations == 0, report.worst_case


def test_criterion_09_data_processing(criterion):
    with criterion(9, "data processing") as notes:
        # even indices: general state + random axes (inequality);
        # odd indices: classically correlated state in its own basis (equality)
        report = run_sweep("data_processing", 20_000, SEED)
        notes.append(f"pairs=10000+10000, violations={report.violations}, worst={report.worst_margin:.1e}")
        assert report.violations == 0, report.worst_case


def test_criterion_10_conjecture(criterion):
    with criterion(10, "conjecture exploration") as notes:
        report = run_sweep("conjecture_shift", 100_000, SEED)
        again = run_sweep("conjecture_shift", 100_000, SEED)
        min_f = report.extras.get("min_F", math.inf)
        notes.append(
            f"min F={min_f:.6g}, non-PSD shifts={report.extras['count_non_psd']}, "
            f"deterministic={report == again}"
        )
        assert report == again
        assert not report.asserted
        if min_f < -1e-6:
            case = json.loads(report.worst_case)
            assert "value" in case and "re" in case["value"]
            notes.append(f"counterexample index {case['index']}")
