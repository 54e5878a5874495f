"""Signals on Z_L and the elementary time-frequency operators.

Conventions
-----------
The forward DFT is unnormalized, ``(F f)(n) = sum_t f(t) exp(-2 pi i t n / L)``,
and the inverse carries ``1/L``. Every index is reduced mod L, so negative
shifts are accepted.
"""
import numpy as np


def as_signal(f, name="signal"):
    """Validate ``f`` as a signal on Z_L and return it as a complex array."""
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {f.shape}")
    if f.shape[0] < 2:
        raise ValueError(f"{name} must have length >= 2")
    if not np.all(np.isfinite(f)):
        raise ValueError(f"{name} contains NaN or Inf")
    return f


def as_point(z, L):
    """Reduce a time-frequency point ``(k, n)`` mod L."""
    k, n = z
    return int(k) % L, int(n) % L


def norm2(f):
    return float(np.linalg.norm(f))


def centered(idx, L):
    """Map cyclic indices to signed representatives in (-L/2, L/2]."""
    idx = np.asarray(idx) % L
    return np.where(idx <= L / 2, idx, idx - L)


def dft(f):
    return np.fft.fft(as_signal(f))


def idft(F):
    return np.fft.ifft(as_signal(F))


def translate(f, k):
    """Cyclic translation ``(T_k f)(t) = f(t - k)``."""
    f = as_signal(f)
    return np.roll(f, int(k) % f.shape[0])


def modulate(f, n):
    """Modulation ``(M_n f)(t) = exp(2 pi i n t / L) f(t)``."""
    f = as_signal(f)
    L = f.shape[0]
    return _chirp(L, n) * f


def tf_shift(f, z):
    """Time-frequency shift ``pi(z) f = M_{z2} T_{z1} f``."""
    f = as_signal(f)
    k, n = as_point(z, f.shape[0])
    return _chirp(f.shape[0], n) * np.roll(f, k)


def tf_shift_matrix(L, z):
    """Dense unitary matrix of ``pi(z)`` on C^L."""
    k, n = as_point(z, L)
    return _chirp(L, n)[:, None] * np.roll(np.eye(L), k, axis=0)


def _chirp(L, n):
    t = np.arange(L)
    # reduce before multiplying so the phase argument stays small
    return np.exp(2j * np.pi * ((int(n) % L) * t % L) / L)


class Operator:
    """A dense L x L operator with a record of how it was built.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix.
    provenance : str
        One of ``"localization"``, ``"weyl"``, ``"frame"`` or ``"raw"``.
    hermitian : bool, optional
        Detected from the matrix when omitted. An explicit ``True`` is
        rejected if the matrix is not Hermitian to 1e-10.
    """

    HERMITIAN_TOL = 1e-10

    def __init__(self, matrix, provenance="raw", hermitian=None):
        M = np.array(matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"operator must be square, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise ValueError("operator contains NaN or Inf")
        M.setflags(write=False)
        asym = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
        if hermitian is None:
            hermitian = asym <= self.HERMITIAN_TOL
        elif hermitian and asym > self.HERMITIAN_TOL:
            raise ValueError(f"matrix flagged Hermitian but asymmetry is {asym:.3e}")
        self.matrix = M
        self.provenance = provenance
        self.hermitian = bool(hermitian)

    @property
    def L(self):
        return self.matrix.shape[0]

    def __matmul__(self, other):
        return self.matrix @ other

    def __repr__(self):
        return f"Operator(L={self.L}, provenance={self.provenance!r}, hermitian={self.hermitian})"


def as_matrix(A):
    return A.matrix if isinstance(A, Operator) else np.asarray(A, dtype=complex)
