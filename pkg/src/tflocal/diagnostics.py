"""Modulation quasi-norms, N-term approximation profiles and eigenfunction studies.

All Gabor coefficients here are taken against the canonical tight window of
``(g, lattice)``, so the analysis is a Parseval frame and the l^2 tail of the
rearranged coefficients bounds the best N-term error from above.
"""
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core import as_matrix, as_signal, centered
from .gabor import LatticeSpec, gabor_coeffs, tight_window
from .seqspaces import (
    SortedMagnitudes,
    WeightSpec,
    lpq_norm,
    rearrange_desc,
    sigma_profile,
)
from .spectral import EigenSystem, eig, point_spectrum_nonzero

log = logging.getLogger(__name__)

# sigma_N below this fraction of sigma_0 is treated as numerical noise in fits
FIT_FLOOR = 1e-14
DEFAULT_FIT_RANGE = (4, 40)
STUDY_EXPONENTS = (1.0, 0.5, 0.25)


@dataclass
class ModNormReport:
    p: float
    q: float
    weight: WeightSpec
    value: float
    lattice: LatticeSpec
    window_id: str = "tight"


@dataclass
class DecayReport:
    sorted: SortedMagnitudes
    sigma_profile: np.ndarray
    fitted_exponent: Optional[float]
    fit_range: tuple
    floor_hits: int
    label: str = ""

    @property
    def exponent_available(self):
        return self.fitted_exponent is not None

    def relative_tail(self, N):
        """``sigma_N / sigma_0`` (0 for the zero signal)."""
        s0 = self.sigma_profile[0]
        N = min(int(N), len(self.sigma_profile) - 1)
        return float(self.sigma_profile[N] / s0) if s0 > 0 else 0.0


def _tight(g, lattice, h=None):
    return tight_window(g, lattice) if h is None else as_signal(h, "tight window")


def modulation_qnorm(f, g, lattice, p, q, m=None, h=None, window_id="tight"):
    """Discrete ``M^{p,q}_m`` quasi-norm of ``f`` from its tight-frame Gabor coefficients.

    Weights are evaluated at the centered phase-space point ``(alpha k, beta n)``.
    Pass ``h`` to reuse a precomputed tight window.
    """
    h = _tight(g, lattice, h)
    c = gabor_coeffs(f, h, lattice)
    value = lpq_norm(c, p, q, m, lattice.alpha, lattice.beta, lattice.L)
    return ModNormReport(p, q, m or WeightSpec(), value, lattice, window_id)


def fit_decay_exponent(profile, fit_range=DEFAULT_FIT_RANGE):
    """Negative least-squares slope of ``log sigma_N`` against ``log N``.

    Returns ``None`` when fewer than three points in ``fit_range`` are above
    the relative floor.
    """
    lo, hi = fit_range
    if lo < 1 or hi < lo:
        raise ValueError(f"fit range must satisfy 1 <= N_lo <= N_hi, got {fit_range}")
    if hi >= len(profile):
        raise ValueError(f"fit range {fit_range} exceeds profile length {len(profile)}")
    N = np.arange(lo, hi + 1)
    y = profile[lo : hi + 1]
    usable = y >= FIT_FLOOR * profile[0]
    if profile[0] == 0 or usable.sum() < 3:
        return None
    slope = np.polyfit(np.log(N[usable]), np.log(y[usable]), 1)[0]
    return float(-slope)


def n_term_profile(f, g, lattice, fit_range=DEFAULT_FIT_RANGE, h=None, label=""):
    """Tail profile ``sigma~_N`` of the rearranged tight-frame coefficients of ``f``.

    A fit range reaching past the last profile entry is clipped to it; the
    clipped range is what the report records.
    """
    h = _tight(g, lattice, h)
    s = rearrange_desc(gabor_coeffs(f, h, lattice))
    prof = sigma_profile(s)
    lo, hi = fit_range
    if hi >= len(prof):
        hi = len(prof) - 1
        log.info("fit range %s clipped to (%d, %d) for %d coefficients", tuple(fit_range), lo, hi, s.values.size)
    fit_range = (lo, hi)
    r = fit_decay_exponent(prof, fit_range) if lo <= hi else None
    hits = int(np.sum(prof < FIT_FLOOR * prof[0])) if prof[0] > 0 else len(prof)
    if r is None:
        log.info("decay exponent unavailable for %s: fewer than 3 usable fit points", label or "signal")
    return DecayReport(s, prof, r, tuple(fit_range), hits, label)


def random_baseline(L, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    return f / np.linalg.norm(f)


@dataclass
class DecayStudy:
    eigensystem: EigenSystem
    retained: EigenSystem
    reports: list
    baseline: DecayReport
    norms: list
    baseline_norms: list
    seed: int
    flags: list = field(default_factory=list)

    @property
    def non_compact_like(self):
        return "non-compact-like spectrum" in self.flags


def _retained(A, floor, top_k):
    E = eig(A)
    R = point_spectrum_nonzero(E, floor)
    if top_k is not None and len(R) > top_k:
        R = EigenSystem(R.eigenvalues[:top_k], R.eigenvectors[:, :top_k], R.residuals[:top_k], R.tolerance, R.hermitian)
    return E, R


def eigen_decay_study(A, g, lattice, top_k=None, floor=1e-8, seed=0, fit_range=DEFAULT_FIT_RANGE):
    """Decay profiles and modulation norms for the eigenfunctions of ``A``.

    Every eigenfunction with ``|lambda| > floor |lambda_1|`` (at most
    ``top_k`` of them) gets an N-term profile and ``M^p`` norms for
    ``p = 1, 1/2, 1/4``; a seeded random unit vector gets the same treatment
    as a baseline.
    """
    M = as_matrix(A)
    if M.shape[0] != lattice.L:
        raise ValueError(f"operator size {M.shape[0]} does not match lattice L={lattice.L}")
    h = tight_window(g, lattice)
    E, R = _retained(A, floor, top_k)

    def norms_of(f):
        return [modulation_qnorm(f, g, lattice, p, p, h=h) for p in STUDY_EXPONENTS]

    reports, norms = [], []
    for i, (_, v) in enumerate(R.pairs()):
        reports.append(n_term_profile(v, g, lattice, fit_range, h=h, label=f"eigenfunction {i}"))
        norms.append(norms_of(v))
    base = random_baseline(lattice.L, seed)
    flags = []
    if len(R) == lattice.L:
        flags.append("non-compact-like spectrum")
    if len(R) == 0:
        flags.append("empty retained spectrum")
    return DecayStudy(
        eigensystem=E,
        retained=R,
        reports=reports,
        baseline=n_term_profile(base, g, lattice, fit_range, h=h, label="baseline"),
        norms=norms,
        baseline_norms=norms_of(base),
        seed=seed,
        flags=flags,
    )


class WeightedRow(NamedTuple):
    index: int
    s: float
    weighted: float
    unweighted: float
    ratio: float
    baseline_ratio: float

    @property
    def relative(self):
        return self.ratio / self.baseline_ratio


def weighted_decay_study(A, g, lattice, s_list, p, top_k=None, floor=1e-8, seed=0):
    """Weighted-to-unweighted ``M^p`` ratios with ``m = v_s (x) v_s``.

    Each eigenfunction ratio is reported next to the same ratio for the
    seeded random baseline.
    """
    if any(s < 0 for s in s_list):
        raise ValueError("weight exponents must be nonnegative")
    h = tight_window(g, lattice)
    _, R = _retained(A, floor, top_k)
    base = random_baseline(lattice.L, seed)

    def ratio(f, s):
        w = modulation_qnorm(f, g, lattice, p, p, WeightSpec.tensor(s), h=h).value
        u = modulation_qnorm(f, g, lattice, p, p, h=h).value
        return w, u, (w / u if u > 0 else np.nan)

    rows = []
    for s in s_list:
        b = ratio(base, s)[2]
        for i, (_, v) in enumerate(R.pairs()):
            w, u, r = ratio(v, s)
            rows.append(WeightedRow(i, float(s), w, u, r, b))
    return rows


def cyclic_convolve(f, h):
    """``(f * h)(x) = sum_y f(y) h(x - y)`` on Z_L."""
    return np.fft.ifft(np.fft.fft(as_signal(f)) * np.fft.fft(as_signal(h)))


class ConvolutionReport(NamedTuple):
    ratio: float
    conv_norm: float
    f_norm: float
    h_norm: float


def _inv(x):
    return 0.0 if np.isinf(x) else 1.0 / x


def check_convolution_exponents(p, u, q, t, r, gamma, tol=1e-12):
    for e in (p, u, q, t, r, gamma):
        if not e > 0:
            raise ValueError(f"exponents must be positive, got {e}")
    if abs(_inv(u) + _inv(t) - _inv(gamma)) > tol:
        raise ValueError(f"need 1/u + 1/t = 1/gamma, got u={u}, t={t}, gamma={gamma}")
    if r >= 1:
        ok = abs(_inv(p) + _inv(q) - 1.0 - _inv(r)) <= tol
    else:
        ok = p == q == r
    if not ok:
        raise ValueError(
            f"(p, q, r) = ({p}, {q}, {r}) satisfy neither 1/p + 1/q = 1 + 1/r (r >= 1) nor p = q = r < 1"
        )


def _frequency_weight(nu, lattice):
    rows, cols = lattice.shape
    if nu is None or nu.kind == "constant":
        return np.ones((rows, cols))
    if nu.kind == "tabulated":
        vals = np.broadcast_to(np.asarray(nu.values, dtype=float), (cols,))
    else:
        vals = nu(centered(lattice.beta * np.arange(cols), lattice.L))
    return np.broadcast_to(vals[None, :], (rows, cols)).copy()


def convolution_relation_check(f, h, g, lattice, exponents, nu=None, window=None):
    """Ratio ``||f * h||_{M^{r,gamma}} / (||f||_{M^{p,u}_{1(x)nu}} ||h||_{M^{q,t}_{1(x)1/nu}})``.

    ``exponents`` is ``(p, u, q, t, r, gamma)``; ``nu`` is a weight on the
    frequency variable.
    """
    p, u, q, t, r, gamma = exponents
    check_convolution_exponents(p, u, q, t, r, gamma)
    tw = _tight(g, lattice, window)
    wf = _frequency_weight(nu, lattice)
    a, b = lattice.alpha, lattice.beta

    def qn(x, e1, e2, w):
        return lpq_norm(gabor_coeffs(x, tw, lattice), e1, e2, w, a, b, lattice.L)

    conv = qn(cyclic_convolve(f, h), r, gamma, None)
    nf = qn(f, p, u, wf)
    nh = qn(h, q, t, 1.0 / wf)
    denom = nf * nh
    return ConvolutionReport(conv / denom if denom > 0 else np.nan, conv, nf, nh)


CONVOLUTION_REGIMES = {
    # (p, u, q, t, r, gamma)
    "banach": (1.0, 2.0, 1.0, 2.0, 1.0, 1.0),
    "quasi": (0.5, 1.0, 0.5, 1.0, 0.5, 0.5),
}


def convolution_ratio_batch(L=32, trials=100, regime="quasi", seed=0, lattice=None, g=None, nu=None):
    """Ratios of ``convolution_relation_check`` over seeded random unit-norm pairs."""
    from .scenarios import gaussian_window

    lattice = lattice or LatticeSpec(2, 2, L)
    g = gaussian_window(L) if g is None else g
    exps = CONVOLUTION_REGIMES[regime] if isinstance(regime, str) else regime
    h = tight_window(g, lattice)
    rng = np.random.default_rng(seed)
    out = np.empty(trials)
    for i in range(trials):
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        y = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        out[i] = convolution_relation_check(x, y, g, lattice, exps, nu, window=h).ratio
    return out
