"""Dense eigendecompositions, singular values and Schatten quasi-norms."""
import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import Operator, as_matrix


class SolverError(RuntimeError):
    """A dense eigensolver failed to converge."""


@dataclass
class EigenSystem:
    """Eigenpairs sorted by modulus (then real, then imaginary part), descending.

    ``eigenvectors[:, i]`` is the unit-norm eigenvector of ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    tolerance: float
    hermitian: bool

    def __len__(self):
        return len(self.eigenvalues)

    def pairs(self):
        for i in range(len(self)):
            yield self.eigenvalues[i], self.eigenvectors[:, i]


def eig_tolerance(A):
    M = as_matrix(A)
    return 1e-8 * float(np.max(np.abs(M), initial=0.0)) * M.shape[0]


def _matrix_hash(M):
    return hashlib.sha256(np.ascontiguousarray(M).tobytes()).hexdigest()[:16]


def _fix_phase(V):
    # largest entry of each column made real positive, for reproducible output
    pivots = V[np.argmax(np.abs(V), axis=0), np.arange(V.shape[1])]
    mags = np.abs(pivots)
    phase = np.ones_like(pivots)
    nz = mags > 0
    phase[nz] = np.conj(pivots[nz]) / mags[nz]
    return V * phase[None, :]


def _sort_order(ev):
    # np.lexsort sorts by the last key first
    return np.lexsort((-ev.imag, -ev.real, -np.abs(ev)))


def eig(A):
    """Full spectrum of a square operator.

    Hermitian operators (by flag, or a Hermitian raw matrix) go through
    ``eigh`` and get exactly real eigenvalues; everything else uses the
    general dense solver.
    """
    hermitian = A.hermitian if isinstance(A, Operator) else None
    M = as_matrix(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"eig needs a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains NaN or Inf")
    if hermitian is None:
        hermitian = bool(np.max(np.abs(M - M.conj().T), initial=0.0) <= Operator.HERMITIAN_TOL)
    try:
        if hermitian:
            w, V = scipy.linalg.eigh(M)
            w = w.astype(complex)
        else:
            w, V = scipy.linalg.eig(M)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SolverError(f"eigensolver did not converge for matrix {_matrix_hash(M)}: {exc}") from exc
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    order = _sort_order(w)
    w = w[order]
    V = _fix_phase(V[:, order])
    residuals = np.linalg.norm(M @ V - V * w[None, :], axis=0)
    return EigenSystem(w, V, residuals, eig_tolerance(M), hermitian)


def singular_values(A):
    """Singular values in non-increasing order."""
    return scipy.linalg.svdvals(as_matrix(A))


def schatten_qnorm(A, p):
    """``(sum_k s_k^p)^(1/p)``; a quasi-norm for ``0 < p < 1``.

    Singular values below ``n eps s_1`` are roundoff and count as zero;
    small ``p`` would otherwise amplify them.
    """
    if not p > 0:
        raise ValueError(f"Schatten exponent must be positive, got {p}")
    s = singular_values(A)
    if s.size == 0 or s[0] == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    top = s[0]
    s = s[s > s.size * np.finfo(float).eps * top] / top
    return float(np.sum(s**p) ** (1.0 / p) * top)


def point_spectrum_nonzero(E, floor):
    """Keep eigenpairs with ``|lambda| > floor * |lambda_1|``; order is preserved.

    An empty result is valid.
    """
    if not floor > 0:
        raise ValueError("floor must be positive")
    if len(E) == 0:
        return E
    keep = np.abs(E.eigenvalues) > floor * np.abs(E.eigenvalues[0])
    return EigenSystem(
        E.eigenvalues[keep],
        E.eigenvectors[:, keep],
        E.residuals[keep],
        E.tolerance,
        E.hermitian,
    )
