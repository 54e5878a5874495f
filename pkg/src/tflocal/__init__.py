"""Finite time-frequency analysis on the cyclic group Z_L.

Gabor frames, localization and Weyl operators on Z_L x Z_L, their
eigendecompositions, and N-term approximation diagnostics for the
resulting eigenfunctions.
"""

__version__ = "0.1.0"

from .core import dft, idft, modulate, tf_shift, translate
from .gabor import (
    FrameInfo,
    LatticeSpec,
    NotAFrame,
    canonical_dual,
    frame_bounds,
    frame_info,
    frame_operator,
    gabor_coeffs,
    reconstruct,
    stft,
    tight_window,
)
from .quantize import (
    Operator,
    cross_wigner,
    localization_build,
    localization_weyl_symbol,
    weyl_build,
)
from .spectral import EigenSystem, eig, schatten_qnorm, singular_values

__all__ = [
    "__version__",
    "dft",
    "idft",
    "translate",
    "modulate",
    "tf_shift",
    "LatticeSpec",
    "FrameInfo",
    "NotAFrame",
    "stft",
    "gabor_coeffs",
    "frame_operator",
    "frame_bounds",
    "frame_info",
    "canonical_dual",
    "tight_window",
    "reconstruct",
    "Operator",
    "cross_wigner",
    "weyl_build",
    "localization_build",
    "localization_weyl_symbol",
    "EigenSystem",
    "eig",
    "singular_values",
    "schatten_qnorm",
]
