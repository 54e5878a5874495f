"""Short-time Fourier transform and Gabor frames on separable lattices."""
from dataclasses import dataclass

import numpy as np

from .core import Operator, as_matrix, as_signal


class NotAFrame(ValueError):
    """The Gabor system does not span C^L at the frame tolerance."""


# relative rank threshold on the frame operator spectrum
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class LatticeSpec:
    """Separable lattice ``alpha Z_L x beta Z_L``."""

    alpha: int
    beta: int
    L: int

    def __post_init__(self):
        for name in ("alpha", "beta", "L"):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f"lattice {name} must be a positive integer")
        if self.L % self.alpha:
            raise ValueError(f"alpha={self.alpha} does not divide L={self.L}")
        if self.L % self.beta:
            raise ValueError(f"beta={self.beta} does not divide L={self.L}")

    @property
    def shape(self):
        return self.L // self.alpha, self.L // self.beta

    @property
    def size(self):
        a, b = self.shape
        return a * b

    @property
    def redundancy(self):
        return self.size / self.L

    def points(self):
        """Lattice points ``(alpha k, beta n)`` in table (row-major) order."""
        k = np.arange(0, self.L, self.alpha)
        n = np.arange(0, self.L, self.beta)
        K, N = np.meshgrid(k, n, indexing="ij")
        return np.stack([K.ravel(), N.ravel()], axis=1)

    @classmethod
    def full_grid(cls, L):
        return cls(1, 1, L)


@dataclass
class FrameInfo:
    lower_bound: float
    upper_bound: float
    dual_window: np.ndarray
    tight_window: np.ndarray


def _window(g, L=None):
    g = as_signal(g, "window")
    if L is not None and g.shape[0] != L:
        raise ValueError(f"window length {g.shape[0]} does not match L={L}")
    if not np.any(g):
        raise ValueError("window must be nonzero")
    return g


def stft(f, g):
    """Full-grid STFT ``V_g f(k, n) = sum_t f(t) conj(g(t - k)) exp(-2 pi i t n / L)``.

    Returns an ``(L, L)`` array indexed by (time, frequency).
    """
    f = as_signal(f)
    g = _window(g, f.shape[0])
    L = f.shape[0]
    # row k holds conj(g(t - k))
    shifts = (np.arange(L)[None, :] - np.arange(L)[:, None]) % L
    return np.fft.fft(f[None, :] * np.conj(g[shifts]), axis=1)


def gabor_coeffs(f, g, lattice):
    """STFT restricted to lattice points, shape ``lattice.shape``."""
    f = as_signal(f)
    if f.shape[0] != lattice.L:
        raise ValueError(f"signal length {f.shape[0]} does not match lattice L={lattice.L}")
    return stft(f, g)[:: lattice.alpha, :: lattice.beta]


def gabor_atoms(g, lattice):
    """Matrix whose columns are ``pi(lambda) g`` in table order."""
    g = _window(g, lattice.L)
    L = lattice.L
    t = np.arange(L)
    pts = lattice.points()
    shifted = g[(t[:, None] - pts[None, :, 0]) % L]
    phase = np.exp(2j * np.pi * ((t[:, None] * pts[None, :, 1]) % L) / L)
    return phase * shifted


def frame_operator(g, lattice):
    """``S = sum_lambda <., pi(lambda) g> pi(lambda) g`` as a Hermitian Operator."""
    atoms = gabor_atoms(g, lattice)
    S = atoms @ atoms.conj().T
    S = 0.5 * (S + S.conj().T)
    return Operator(S, provenance="frame", hermitian=True)


def frame_bounds(S):
    """Optimal frame bounds ``(A, B)``: extreme eigenvalues of ``S``."""
    M = as_matrix(S)
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.conj().T)) > 1e-10 * scale:
        raise ValueError("frame operator is not Hermitian")
    ev = np.linalg.eigvalsh(M)
    return float(ev[0]), float(ev[-1])


def _frame_eigh(g, lattice):
    S = frame_operator(g, lattice).matrix
    ev, U = np.linalg.eigh(S)
    if ev[0] <= FRAME_TOL * ev[-1]:
        raise NotAFrame(
            f"min eigenvalue {ev[0]:.3e} of the frame operator is below "
            f"{FRAME_TOL:g} x max eigenvalue {ev[-1]:.3e} "
            f"(alpha={lattice.alpha}, beta={lattice.beta}, L={lattice.L})"
        )
    return ev, U


def canonical_dual(g, lattice):
    """Canonical dual window ``S^{-1} g``."""
    g = _window(g, lattice.L)
    ev, U = _frame_eigh(g, lattice)
    return U @ ((U.conj().T @ g) / ev)


def tight_window(g, lattice):
    """Canonical tight window ``S^{-1/2} g``; its frame operator is the identity."""
    g = _window(g, lattice.L)
    ev, U = _frame_eigh(g, lattice)
    return U @ ((U.conj().T @ g) / np.sqrt(ev))


def frame_info(g, lattice):
    g = _window(g, lattice.L)
    ev, U = _frame_eigh(g, lattice)
    proj = U.conj().T @ g
    return FrameInfo(
        lower_bound=float(ev[0]),
        upper_bound=float(ev[-1]),
        dual_window=U @ (proj / ev),
        tight_window=U @ (proj / np.sqrt(ev)),
    )


def reconstruct(c, gamma, lattice):
    """Synthesis ``sum_lambda c(lambda) pi(lambda) gamma``."""
    c = np.asarray(c, dtype=complex)
    if c.shape != lattice.shape:
        raise ValueError(f"coefficient table shape {c.shape} does not match lattice {lattice.shape}")
    return gabor_atoms(gamma, lattice) @ c.ravel()
