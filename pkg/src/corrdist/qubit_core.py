"""Two-qubit states: Fano form, correlation distance, entropies, entanglement.

States are 4x4 complex density matrices in the basis |00>, |01>, |10>, |11>
with qubit A the left tensor factor. Every function accepts a single matrix
or a stack of shape ``(..., 4, 4)``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import entr

from .bounds import c0
from .errors import ConsistencyError, DomainError, UnphysicalError, ValidationError
from .prob_core import as_joint_table
from .units import BITS, as_output, from_nats

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
CROSS_CHECK_TOL = 1e-9
UNIT_NORM_TOL = 1e-12
# Criteria count as satisfied only beyond float noise, so the implication
# chain between them cannot be broken by rounding at the boundary.
CRITERION_TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.array([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])
# PAULI_PRODUCTS[m, n] = kron(PAULIS[m], PAULIS[n])
PAULI_PRODUCTS = np.einsum("mik,njl->mnijkl", PAULIS, PAULIS).reshape(4, 4, 4, 4)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2.0)
MAX_MIXED = np.eye(4, dtype=complex) / 4.0

FAMILIES = ("werner", "bell_diagonal", "saturating", "classically_correlated", "product")


def _dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def as_density_matrix(rho, dim=None):
    """Validate a density matrix (or stack) and return its Hermitian part.

    Checks Hermiticity to 1e-10 entrywise, unit trace to 1e-9 and
    eigenvalues no lower than -1e-9.
    """
    m = np.array(rho, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValidationError(f"density matrix must be square, got shape {m.shape}")
    if dim is not None and m.shape[-1] != dim:
        raise ValidationError(f"expected a {dim}x{dim} density matrix, got {m.shape[-2:]}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("density matrix has non-finite entries")
    if np.max(np.abs(m - _dagger(m))) > HERMITIAN_TOL:
        raise ValidationError("density matrix is not Hermitian")
    m = 0.5 * (m + _dagger(m))
    trace = np.trace(m, axis1=-2, axis2=-1).real
    if np.any(np.abs(trace - 1.0) > TRACE_TOL):
        raise ValidationError(f"density matrix has trace {np.ravel(trace)[0]!r}")
    if np.min(np.linalg.eigvalsh(m)) < -PSD_TOL:
        raise ValidationError("density matrix has a negative eigenvalue")
    return m


def as_state(rho):
    """Validate a two-qubit density matrix."""
    return as_density_matrix(rho, dim=4)


def kron2(a, b):
    """Kronecker product of two (stacks of) 2x2 matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(out.shape[:-4] + (4, 4))


def partial_trace(rho, side="A"):
    """Reduced state of the subsystem named by ``side`` ("A" or "B")."""
    r = as_state(rho).reshape(np.shape(rho)[:-2] + (2, 2, 2, 2))
    if side == "A":
        return np.einsum("...ijkj->...ik", r)
    if side == "B":
        return np.einsum("...ijil->...jl", r)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def partial_transpose(rho):
    """Partial transpose on subsystem B."""
    m = np.asarray(rho, dtype=complex)
    r = m.reshape(m.shape[:-2] + (2, 2, 2, 2))
    return np.swapaxes(r, -3, -1).reshape(m.shape)


def apply_local_unitaries(rho, ua, ub):
    """``(ua x ub) rho (ua x ub)^dagger``."""
    u = kron2(ua, ub)
    return u @ np.asarray(rho, dtype=complex) @ _dagger(u)


def spin_basis(axis):
    """Unitary whose columns are spin-up and spin-down along a unit ``axis``."""
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > UNIT_NORM_TOL:
        raise ValidationError("spin axis must be a unit vector")
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0])
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array(
        [[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]], dtype=complex
    )


@dataclass(frozen=True)
class FanoForm:
    """Bloch vectors ``u``, ``v``, correlations ``M`` and covariance ``T = M - u v^T``."""

    u: np.ndarray
    v: np.ndarray
    M: np.ndarray
    T: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        m = np.asarray(self.M, dtype=float)
        if u.shape[-1:] != (3,) or v.shape[-1:] != (3,) or m.shape[-2:] != (3, 3):
            raise ValidationError("Fano form needs 3-vectors u, v and a 3x3 M")
        if np.any(np.linalg.norm(u, axis=-1) > 1.0 + 1e-9) or np.any(
            np.linalg.norm(v, axis=-1) > 1.0 + 1e-9
        ):
            raise ValidationError("Bloch vectors must have norm at most 1")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "T", m - u[..., :, None] * v[..., None, :])

    @classmethod
    def from_covariance(cls, u, v, T):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return cls(u, v, np.asarray(T, dtype=float) + u[..., :, None] * v[..., None, :])


def fano_decompose(rho):
    """Expectation values of Pauli products, returned as a :class:`FanoForm`."""
    rho = as_state(rho)
    coeffs = np.einsum("...ij,mnji->...mn", rho, PAULI_PRODUCTS).real
    return FanoForm(u=coeffs[..., 1:, 0], v=coeffs[..., 0, 1:], M=coeffs[..., 1:, 1:])


def fano_compose(form):
    """Rebuild the density matrix from a Fano form.

    Raises :class:`UnphysicalError` when the coefficients give a matrix with
    an eigenvalue below -1e-9.
    """
    u, v, m = form.u, form.v, form.M
    batch = np.broadcast_shapes(u.shape[:-1], v.shape[:-1], m.shape[:-2])
    coeffs = np.zeros(batch + (4, 4))
    coeffs[..., 0, 0] = 1.0
    coeffs[..., 1:, 0] = u
    coeffs[..., 0, 1:] = v
    coeffs[..., 1:, 1:] = m
    rho = np.einsum("...mn,mnij->...ij", coeffs, PAULI_PRODUCTS) / 4.0
    if np.min(np.linalg.eigvalsh(rho)) < -PSD_TOL:
        raise UnphysicalError("unphysical Fano coefficients: matrix is not positive")
    return rho


class SingularTriple(NamedTuple):
    """Ordered singular values ``t1 >= t2 >= t3 >= 0`` of T and the sign ``alpha``."""

    t1: float
    t2: float
    t3: float
    alpha: int


def singular_triple(T):
    """Singular values of the covariance matrix and the sign of its determinant.

    ``alpha`` is +1 when ``det T >= 0`` and -1 otherwise. For ``det T = 0``
    both signs describe locally equivalent states; +1 is used.
    """
    T = np.asarray(T, dtype=float)
    s = np.linalg.svd(T, compute_uv=False)
    alpha = np.where(np.linalg.det(T) >= 0.0, 1, -1)
    if alpha.ndim == 0:
        alpha = int(alpha)
    return SingularTriple(as_output(s[..., 0]), as_output(s[..., 1]), as_output(s[..., 2]), alpha)


def correlation_distance_from_triple(triple):
    """``max(t1 + t2 + t3, 2 t1) / 2``."""
    t1, t2, t3 = (np.asarray(t) for t in triple[:3])
    return as_output(0.5 * np.maximum(t1 + t2 + t3, 2.0 * t1))


def trace_norm(h):
    """Sum of absolute eigenvalues of a Hermitian matrix (or stack)."""
    h = np.asarray(h, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValidationError("trace norm needs a square matrix")
    if np.max(np.abs(h - _dagger(h)), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError("trace norm input is not Hermitian")
    h = 0.5 * (h + _dagger(h))
    return as_output(np.abs(np.linalg.eigvalsh(h)).sum(axis=-1))


def _spectrum_entropy_nats(rho):
    w = np.linalg.eigvalsh(rho)
    return entr(np.where(w < 0.0, 0.0, w)).sum(axis=-1)


def von_neumann_entropy(rho, unit=BITS):
    """Shannon entropy of the eigenvalue spectrum of a 2x2 or 4x4 state."""
    rho = as_density_matrix(rho)
    return as_output(from_nats(_spectrum_entropy_nats(rho), unit))


def _marginals(rho):
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    return np.einsum("...ijkj->...ik", r), np.einsum("...ijil->...jl", r)


def quantum_mutual_information(rho, unit=BITS):
    """``S(rho_A) + S(rho_B) - S(rho_AB)``."""
    rho = as_state(rho)
    ra, rb = _marginals(rho)
    value = (
        _spectrum_entropy_nats(ra) + _spectrum_entropy_nats(rb) - _spectrum_entropy_nats(rho)
    )
    return as_output(from_nats(value, unit))


def quantum_correlation_distance(rho):
    """``tr |rho - rho_A x rho_B|``.

    Also evaluated from the singular values of the covariance matrix; the two
    routes must agree to 1e-9, otherwise :class:`ConsistencyError` is raised.
    """
    rho = as_state(rho)
    ra, rb = _marginals(rho)
    via_trace = np.abs(np.linalg.eigvalsh(rho - kron2(ra, rb))).sum(axis=-1)
    triple = singular_triple(fano_decompose(rho).T)
    via_triple = np.asarray(correlation_distance_from_triple(triple))
    gap = np.max(np.abs(via_trace - via_triple))
    if gap > CROSS_CHECK_TOL:
        raise ConsistencyError(f"correlation distance routes differ by {gap:.3g}")
    return as_output(via_trace)


@dataclass(frozen=True)
class EntanglementReport:
    """Correlation-distance and covariance entanglement criteria plus PPT."""

    correlation_distance: float
    purity_bound: float
    covariance_sum: float
    min_pt_eigenvalue: float
    cdist_gt_one: bool
    purity_criterion: bool
    covariance_criterion: bool
    ppt_entangled: bool

    def chain_holds(self):
        """cdist > 1 => purity => covariance => PPT-entangled, elementwise."""
        c, p, s, e = (
            np.asarray(v)
            for v in (
                self.cdist_gt_one,
                self.purity_criterion,
                self.covariance_criterion,
                self.ppt_entangled,
            )
        )
        return as_output((~c | p) & (~p | s) & (~s | e))


def entanglement_report(rho):
    rho = as_state(rho)
    cdist = np.asarray(quantum_correlation_distance(rho))
    ra, rb = _marginals(rho)
    purity_a = np.einsum("...ij,...ji->...", ra, ra).real
    purity_b = np.einsum("...ij,...ji->...", rb, rb).real
    bound = 2.0 * np.sqrt(np.clip((1.0 - purity_a) * (1.0 - purity_b), 0.0, None))
    t1, t2, t3, _ = singular_triple(fano_decompose(rho).T)
    tsum = np.asarray(t1) + np.asarray(t2) + np.asarray(t3)
    min_pt = np.linalg.eigvalsh(partial_transpose(rho))[..., 0]
    return EntanglementReport(
        correlation_distance=as_output(cdist),
        purity_bound=as_output(bound),
        covariance_sum=as_output(tsum),
        min_pt_eigenvalue=as_output(min_pt),
        cdist_gt_one=as_output(cdist > 1.0 + CRITERION_TOL),
        purity_criterion=as_output(cdist > bound + CRITERION_TOL),
        covariance_criterion=as_output(tsum > bound + CRITERION_TOL),
        ppt_entangled=as_output(min_pt < -PSD_TOL),
    )


def bell_diagonal_eigenvalues(r1, r2, r3):
    """Eigenvalues ``(p0, p1, p2, p3)`` of ``(I + sum_j r_j s_j x s_j) / 4``.

    ``p0`` belongs to the singlet. No positivity check is made.
    """
    r1, r2, r3 = (np.asarray(r, dtype=float) for r in (r1, r2, r3))
    return (
        as_output((1.0 - r1 - r2 - r3) / 4.0),
        as_output((1.0 - r1 + r2 + r3) / 4.0),
        as_output((1.0 + r1 - r2 + r3) / 4.0),
        as_output((1.0 + r1 + r2 - r3) / 4.0),
    )


def correlations_from_bell_weights(p):
    """Invert :func:`bell_diagonal_eigenvalues`: ``r_j = 1 - 2 (p0 + p_j)``."""
    p = np.asarray(p, dtype=float)
    return 1.0 - 2.0 * (p[..., :1] + p[..., 1:])


def werner(p):
    """``p |singlet><singlet| + (1 - p) I / 4`` for ``-1/3 <= p <= 1``."""
    if not -1.0 / 3.0 - 1e-12 <= p <= 1.0 + 1e-12:
        raise DomainError(f"Werner weight must lie in [-1/3, 1], got {p!r}")
    return p * np.outer(SINGLET, SINGLET.conj()) + (1.0 - p) * MAX_MIXED


def bell_diagonal(r1, r2, r3):
    """``(I x I + sum_j r_j sigma_j x sigma_j) / 4``."""
    if min(bell_diagonal_eigenvalues(r1, r2, r3)) < -1e-12:
        raise UnphysicalError(f"correlations {(r1, r2, r3)!r} give a negative eigenvalue")
    m = np.diag([r1, r2, r3]).astype(float)
    return fano_compose(FanoForm(np.zeros(3), np.zeros(3), m))


def saturating(c):
    """State attaining the quantum lower bound at correlation distance ``c``."""
    if not 0.0 <= c <= 1.5:
        raise DomainError(f"correlation distance must lie in [0, 3/2], got {c!r}")
    if c <= c0():
        return bell_diagonal(c, 0.0, 0.0)
    return werner(2.0 * c / 3.0)


def classically_correlated(table, bases=None):
    """``sum_jk P(j,k) |j><j| x |k><k|`` in the local bases given as unitaries.

    ``bases`` is ``(ua, ub)``; column ``j`` of ``ua`` is ``|j>``. The default
    is the computational basis on both sides.
    """
    t = np.asarray(table, dtype=float)
    if t.shape != (2, 2):
        raise ValidationError("classically correlated qubits need a 2x2 table")
    t = as_joint_table(t)
    rho = np.diag(t.reshape(4)).astype(complex)
    if bases is not None:
        ua, ub = (np.asarray(u, dtype=complex) for u in bases)
        for u in (ua, ub):
            if u.shape != (2, 2) or not np.allclose(u @ u.conj().T, IDENTITY, atol=1e-12):
                raise ValidationError("local bases must be 2x2 unitaries")
        rho = apply_local_unitaries(rho, ua, ub)
    return rho


def product_state(u, v):
    """``(I + u.sigma)/2 x (I + v.sigma)/2``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.linalg.norm(u) > 1.0 + 1e-12 or np.linalg.norm(v) > 1.0 + 1e-12:
        raise DomainError("Bloch vectors must have norm at most 1")
    ra = 0.5 * (IDENTITY + np.einsum("j,jik->ik", u, PAULIS[1:]))
    rb = 0.5 * (IDENTITY + np.einsum("j,jik->ik", v, PAULIS[1:]))
    return kron2(ra, rb)


def make_state(family, **params):
    """Construct a state from one of :data:`FAMILIES`.

    ``werner(p)``, ``bell_diagonal(r1, r2, r3)``, ``saturating(c)``,
    ``classically_correlated(table, bases=None)`` and ``product(u, v)``.
    """
    builders = {
        "werner": werner,
        "bell_diagonal": bell_diagonal,
        "saturating": saturating,
        "classically_correlated": classically_correlated,
        "product": product_state,
    }
    if family not in builders:
        raise ValueError(f"unknown state family {family!r}; choose from {FAMILIES}")
    try:
        rho = builders[family](**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {family}: {exc}") from None
    return as_state(rho)


def twirl(rho):
    """Average over ``U x U``: keeps only the isotropic part of the correlations.

    In Fano terms ``u, v -> 0`` and ``M -> (tr M / 3) I``.
    """
    form = fano_decompose(rho)
    iso = np.trace(form.M, axis1=-2, axis2=-1) / 3.0
    m = iso[..., None, None] * np.eye(3)
    zeros = np.zeros(iso.shape + (3,))
    return fano_compose(FanoForm(zeros, zeros, m))


@dataclass(frozen=True)
class ShiftResult:
    """``rho - rho_A x rho_B + I/4`` and whether it is a valid state."""

    matrix: np.ndarray
    min_eigenvalue: float
    is_psd: bool


def conjecture_shift(rho):
    """Replace the product of marginals by ``I/4``; report rather than fail if not PSD."""
    rho = as_state(rho)
    ra, rb = _marginals(rho)
    shifted = rho - kron2(ra, rb) + MAX_MIXED
    lowest = np.linalg.eigvalsh(shifted)[..., 0]
    return ShiftResult(
        matrix=shifted, min_eigenvalue=as_output(lowest), is_psd=as_output(lowest >= -PSD_TOL)
    )


@dataclass(frozen=True)
class ProjectivePair:
    """Unit measurement directions for spin measurements on A and B."""

    a_axis: np.ndarray
    b_axis: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a_axis, dtype=float)
        b = np.asarray(self.b_axis, dtype=float)
        if a.shape[-1:] != (3,) or b.shape[-1:] != (3,):
            raise ValidationError("measurement axes must be 3-vectors")
        for axis in (a, b):
            if np.any(np.abs(np.linalg.norm(axis, axis=-1) - 1.0) > UNIT_NORM_TOL):
                raise ValidationError("measurement axes must be unit vectors")
        object.__setattr__(self, "a_axis", a)
        object.__setattr__(self, "b_axis", b)


def _spin_projectors(axis):
    # (..., 2, 2, 2): outcome +1 at index 0, -1 at index 1.
    n_sigma = np.einsum("...j,jik->...ik", axis, PAULIS[1:])
    return 0.5 * (IDENTITY + np.stack([n_sigma, -n_sigma], axis=-3))


def measure_projective(rho, pair):
    """Joint outcome table ``P(m, n) = tr[rho Pi_m^a x Pi_n^b]`` (Born rule)."""
    rho = as_state(rho)
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    pa = _spin_projectors(pair.a_axis)
    pb = _spin_projectors(pair.b_axis)
    table = np.einsum("...ijkl,...mki,...nlj->...mn", r, pa, pb).real
    return as_joint_table(table)
