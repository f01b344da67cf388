"""Seeded random instances for the property sweeps.

Each instance is a pure function of ``(family, seed, index)``: the seed keys
a Philox counter-based generator and the family tag and index select the
counter block, so samples can be drawn in any order or in parallel.
"""

import numpy as np

from ..bell import SETTINGS, LhvModel, box_tables
from ..prob_core import BinaryParams
from ..qubit_core import (
    PAULI_PRODUCTS,
    ProjectivePair,
    classically_correlated,
    kron2,
    spin_basis,
)

FAMILIES = (
    "binary_params",
    "joint_table",
    "state_hs",
    "state_bell_diagonal",
    "state_separable",
    "state_mixed_marginal",
    "lhv_model",
    "projective_pair",
    "local_unitaries",
    "classically_correlated",
)

_BELL_DIAG = np.stack([PAULI_PRODUCTS[j, j] for j in (1, 2, 3)])


def generator(family, seed, index):
    """Counter-based generator for one sample."""
    if family not in FAMILIES:
        raise ValueError(f"unknown sample family {family!r}; choose from {FAMILIES}")
    tag = FAMILIES.index(family)
    bitgen = np.random.Philox(key=int(seed) & (2**64 - 1), counter=[0, int(index), tag, 0])
    return np.random.Generator(bitgen)


def unit_vector(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def haar_unitary(rng, n=2):
    """Haar-random unitary; for n = 2 a uniform unit quaternion (SU(2))."""
    if n == 2:
        q = rng.normal(size=4)
        a0, a1, a2, a3 = q / np.linalg.norm(q)
        return np.array([[a0 + 1j * a3, a2 + 1j * a1], [-a2 + 1j * a1, a0 - 1j * a3]])
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _pure_qubit(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def _binary_params(rng, batch=8):
    # Rejection from the cube, `batch` proposals at a time; the first accepted
    # proposal of an i.i.d. stream is uniform on the polytope.
    while True:
        x, y, r = rng.uniform(-1.0, 1.0, size=(3, batch))
        s = r + x * y
        ok = (np.abs(x + y) - 1.0 <= s) & (s <= 1.0 - np.abs(x - y))
        if ok.any():
            i = int(np.argmax(ok))
            return BinaryParams(float(x[i]), float(y[i]), float(r[i]))


def _joint_table(rng, n=None, m=None):
    n = int(rng.integers(2, 5)) if n is None else n
    m = int(rng.integers(2, 5)) if m is None else m
    concentration = rng.choice([0.2, 1.0, 5.0])
    return rng.dirichlet(np.full(n * m, concentration)).reshape(n, m)


def _state_hs(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def bell_diagonal_matrix(r):
    """``(I + sum_j r_j sigma_j x sigma_j) / 4`` for an (..., 3) array of r."""
    r = np.asarray(r, dtype=float)
    return (np.eye(4) + np.einsum("...j,jik->...ik", r, _BELL_DIAG)) / 4.0


def _state_bell_diagonal(rng):
    p = rng.dirichlet(np.ones(4))
    r = 1.0 - 2.0 * (p[0] + p[1:])
    return bell_diagonal_matrix(r)


def _state_separable(rng, k=8):
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        rho += w * kron2(_pure_qubit(rng), _pure_qubit(rng))
    return rho


def _state_mixed_marginal(rng):
    # Choi state of a random qubit channel: rho_A = I/2 exactly. A random
    # Stinespring isometry with environment size 1..4 gives the Kraus ops.
    env = int(rng.integers(1, 5))
    z = rng.normal(size=(2 * env, 2)) + 1j * rng.normal(size=(2 * env, 2))
    iso, _ = np.linalg.qr(z)
    # (I x K_e)|Phi> has amplitude K_e[j, i] / sqrt 2 on |i j>
    kraus = iso.reshape(env, 2, 2)
    psi = kraus.transpose(0, 2, 1).reshape(env, 4) / np.sqrt(2.0)
    rho = psi.T @ psi.conj()
    ua = haar_unitary(rng)
    ub = haar_unitary(rng)
    u = kron2(ua, ub)
    rho = u @ rho @ u.conj().T
    if rng.random() < 0.5:
        swap = np.eye(4)[[0, 2, 1, 3]]
        rho = swap @ rho @ swap
    return rho


def _lhv_model(rng):
    n_lambda = int(rng.integers(1, 5))
    independent = rng.random() < 0.25
    conditionals = {k: [] for k in SETTINGS}
    for _ in range(n_lambda):
        if independent and rng.random() < 0.5:
            x, xp, y, yp = rng.choice([-1.0, 1.0], size=4)
        else:
            x, xp, y, yp = rng.uniform(-1.0, 1.0, size=4)
        marg = [(x, y), (x, yp), (xp, y), (xp, yp)]
        r = []
        for a, b in marg:
            lo = abs(a + b) - 1.0 - a * b
            hi = 1.0 - abs(a - b) - a * b
            r.append(0.0 if independent else rng.uniform(lo, hi))
        tables = box_tables(x, xp, y, yp, r)
        for k in SETTINGS:
            conditionals[k].append(tables[k])
    weights = rng.dirichlet(np.ones(n_lambda))
    return LhvModel(weights, {k: np.array(v) for k, v in conditionals.items()})


def _projective_pair(rng):
    return ProjectivePair(unit_vector(rng), unit_vector(rng))


def _local_unitaries(rng):
    return haar_unitary(rng), haar_unitary(rng)


def _classically_correlated(rng):
    """A 2x2 table, local bases given by Bloch axes, and the resulting state."""
    table = rng.dirichlet(np.full(4, rng.choice([0.3, 1.0]))).reshape(2, 2)
    pair = _projective_pair(rng)
    bases = (spin_basis(pair.a_axis), spin_basis(pair.b_axis))
    return table, pair, classically_correlated(table, bases)


_DRAW = {
    "binary_params": _binary_params,
    "joint_table": _joint_table,
    "state_hs": _state_hs,
    "state_bell_diagonal": _state_bell_diagonal,
    "state_separable": _state_separable,
    "state_mixed_marginal": _state_mixed_marginal,
    "lhv_model": _lhv_model,
    "projective_pair": _projective_pair,
    "local_unitaries": _local_unitaries,
    "classically_correlated": _classically_correlated,
}


def sample(family, seed, index, **params):
    """Draw instance ``index`` of ``family`` for ``seed``.

    ``joint_table`` takes optional ``n`` and ``m`` (random in 2..4 if
    omitted) and ``state_separable`` takes the number of product terms ``k``
    (default 8).
    """
    rng = generator(family, seed, index)
    return _DRAW[family](rng, **params)


def sample_states(family, seed, indices, **params):
    """Stack of states for the given indices, shape ``(len(indices), 4, 4)``."""
    return np.array([sample(family, seed, i, **params) for i in indices], dtype=complex)
