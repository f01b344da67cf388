"""Small dense Hermitian eigensolver (cyclic Jacobi).

The library's hot paths call LAPACK through :func:`numpy.linalg.eigvalsh`,
which handles stacks of matrices. :func:`jacobi_eigh` is a self-contained
reference solver for the 3x3 and 4x4 sizes that occur here; the test suite
uses it as an independent check on the LAPACK results.
"""

import numpy as np

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def _off_norm(a):
    # Sum the off-diagonal entries directly; ||a||^2 - ||diag a||^2 cancels badly.
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(h, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decompose a single Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    h : (n, n) array_like
        Hermitian (or real symmetric) matrix.
    tol : float
        Stop once the off-diagonal Frobenius norm falls below
        ``tol * max(1, ||h||_F)``.
    max_sweeps : int
        Upper bound on full sweeps over all (p, q) pairs.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    v : (n, n) ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi_eigh expects a square matrix")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    negligible = 1e-3 * tol * scale / n

    for _ in range(max_sweeps):
        if _off_norm(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = complex(b.real / mag, b.imag / mag)
                # W = diag(1, conj(phase)) on (p, q) makes the block real;
                # R is the classic real Jacobi rotation on that block.
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c * np.conj(phase)
                a = g.conj().T @ a @ g
                a[p, q] = a[q, p] = 0.0
                v = v @ g
    w = np.real(np.diag(a))
    order = np.argsort(w)
    return w[order], v[:, order]


def eigvalsh(h):
    """Ascending eigenvalues of a Hermitian matrix or a stack of them."""
    return np.linalg.eigvalsh(h)
