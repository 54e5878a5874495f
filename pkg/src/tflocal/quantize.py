"""Cross-Wigner distribution, Weyl and localization operators on Z_L x Z_L.

Wigner and Weyl paths need odd L: the half-shift ``x + t/2`` becomes
``x + h t`` with ``h = 2^{-1} mod L``. Localization operators work for any L.
"""
import numpy as np

from .core import Operator, as_point, as_signal, tf_shift

__all__ = [
    "Operator",
    "half",
    "cross_wigner",
    "weyl_build",
    "localization_build",
    "localization_weyl_symbol",
    "correspondence_constant",
    "derive_correspondence_constant",
    "stft2d",
    "stft_mag_of_operator_kernel",
    "cyclic_convolve2d",
]


def half(L):
    """The inverse of 2 in Z_L (L odd)."""
    if L % 2 == 0:
        raise ValueError(f"Wigner/Weyl calculus on Z_L needs odd L, got L={L}")
    return pow(2, -1, L)


def as_symbol(a, L=None):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"symbol must be a square L x L grid, got shape {a.shape}")
    if L is not None and a.shape[0] != L:
        raise ValueError(f"symbol size {a.shape[0]} does not match signal length {L}")
    if not np.all(np.isfinite(a)):
        raise ValueError("symbol contains NaN or Inf")
    return a


def _nonzero(phi, name):
    phi = as_signal(phi, name)
    if not np.any(phi):
        raise ValueError(f"{name} must be nonzero")
    return phi


def cross_wigner(f, g):
    """``W(f, g)(k, n) = sum_t f(k + h t) conj(g(k - h t)) exp(-2 pi i t n / L)``."""
    f = as_signal(f)
    g = as_signal(g)
    if f.shape != g.shape:
        raise ValueError("cross_wigner needs signals of equal length")
    L = f.shape[0]
    h = half(L)
    k = np.arange(L)[:, None]
    t = np.arange(L)[None, :]
    prod = f[(k + h * t) % L] * np.conj(g[(k - h * t) % L])
    return np.fft.fft(prod, axis=1)


def weyl_build(sigma):
    """Weyl operator ``M(x, y) = (1/L) sum_n sigma(h(x+y), n) exp(2 pi i (x-y) n / L)``."""
    sigma = as_symbol(sigma)
    L = sigma.shape[0]
    h = half(L)
    # ifft over n gives (1/L) sum_n sigma(m, n) exp(2 pi i d n / L) at column d
    F = np.fft.ifft(sigma, axis=1)
    x = np.arange(L)[:, None]
    y = np.arange(L)[None, :]
    M = F[(h * (x + y)) % L, (x - y) % L]
    return Operator(M, provenance="weyl")


def localization_build(a, phi1, phi2):
    """Localization operator ``(1/L) sum_{k,n} a(k,n) V_{phi1} f(k,n) pi(k,n) phi2``.

    With this normalization ``a = 1`` gives ``<phi2, phi1> I``.
    """
    phi1 = _nonzero(phi1, "phi1")
    phi2 = _nonzero(phi2, "phi2")
    if phi1.shape != phi2.shape:
        raise ValueError("windows must have equal length")
    L = phi1.shape[0]
    a = as_symbol(a, L)
    t = np.arange(L)
    E = np.exp(2j * np.pi * ((t[:, None] * t[None, :]) % L) / L)  # E[n, t]
    A = np.zeros((L, L), dtype=complex)
    for k in range(L):
        # kernel of sum_n a(k, n) M_n, applied between translated windows
        K = (E.T * a[k]) @ E.conj()
        A += np.roll(phi2, k)[:, None] * K * np.conj(np.roll(phi1, k))[None, :]
    A /= L
    hermitian = bool(np.all(a.imag == 0) and np.array_equal(phi1, phi2))
    if hermitian:
        A = 0.5 * (A + A.conj().T)
    return Operator(A, provenance="localization", hermitian=hermitian or None)


def cyclic_convolve2d(a, b):
    """``(a * b)(z) = sum_y a(y) b(z - y)`` on Z_L x Z_L."""
    return np.fft.ifft2(np.fft.fft2(a) * np.fft.fft2(b))


def correspondence_constant(L):
    """Scalar ``c_L`` with ``A_a = L_sigma`` for ``sigma = c_L (a * W(phi2, phi1))``."""
    half(L)
    return 1.0 / L


def derive_correspondence_constant(L, rng=None):
    """Least-squares fit of ``c_L`` from one random instance, without assuming its form.

    Returns ``(c, residual)`` where residual is the max-entry mismatch after
    scaling.
    """
    rng = np.random.default_rng(rng)
    a = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
    phi1 = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    phi2 = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    A = localization_build(a, phi1, phi2).matrix
    B = weyl_build(cyclic_convolve2d(a, cross_wigner(phi2, phi1))).matrix
    c = np.vdot(B.ravel(), A.ravel()) / np.vdot(B.ravel(), B.ravel())
    return complex(c), float(np.max(np.abs(A - c * B)))


def localization_weyl_symbol(a, phi1, phi2):
    """Weyl symbol of the localization operator ``A_a^{phi1, phi2}``."""
    phi1 = _nonzero(phi1, "phi1")
    phi2 = _nonzero(phi2, "phi2")
    L = phi1.shape[0]
    a = as_symbol(a, L)
    return correspondence_constant(L) * cyclic_convolve2d(a, cross_wigner(phi2, phi1))


def stft2d(sigma, Phi, u, zeta):
    """STFT on Z_L x Z_L: ``sum_y sigma(y) conj(Phi(y - u)) exp(-2 pi i zeta.y / L)``."""
    sigma = as_symbol(sigma)
    L = sigma.shape[0]
    Phi = as_symbol(Phi, L)
    u = as_point(u, L)
    zeta = as_point(zeta, L)
    idx = np.arange(L)
    shifted = Phi[np.ix_((idx - u[0]) % L, (idx - u[1]) % L)]
    chirp = np.exp(-2j * np.pi * (((zeta[0] * idx) % L)[:, None] + ((zeta[1] * idx) % L)[None, :]) / L)
    return complex(np.sum(sigma * np.conj(shifted) * chirp))


def stft_mag_of_operator_kernel(sigma, g, z, w):
    """Both sides of the Weyl kernel identity at ``(z, w)``.

    Returns ``(|<L_sigma pi(z) g, pi(w) g>|, |V_Phi sigma(h(z+w), j(w-z))| / L)``
    with ``Phi = W(g, g)`` and ``j(x, y) = (y, -x)``. On Z_L the identity
    holds with the factor ``1/L``.
    """
    sigma = as_symbol(sigma)
    L = sigma.shape[0]
    g = _nonzero(g, "g")
    h = half(L)
    z = as_point(z, L)
    w = as_point(w, L)
    M = weyl_build(sigma).matrix
    lhs = abs(np.vdot(tf_shift(g, w), M @ tf_shift(g, z)))
    mid = ((h * (z[0] + w[0])) % L, (h * (z[1] + w[1])) % L)
    d = (w[0] - z[0], w[1] - z[1])
    rhs = abs(stft2d(sigma, cross_wigner(g, g), mid, (d[1], -d[0]))) / L
    return float(lhs), float(rhs)
