"""Weighted mixed-norm sequence spaces and the inequalities used on them.

Exponents may lie in (0, 1), where the "norms" are only quasi-norms; all
routines accept ``np.inf``.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import centered

WEIGHT_KINDS = ("polynomial", "product", "constant", "tabulated")


@dataclass(frozen=True)
class WeightSpec:
    """Positive weight on Z or Z x Z.

    ``polynomial`` is ``(1 + |z|^2)^(s/2)``; ``product`` is the tensor
    ``v_s(x) v_t(w)``; ``tabulated`` holds explicit values (shape must match
    the table it is applied to).
    """

    kind: str = "constant"
    s: float = 0.0
    t: float = 0.0
    values: object = None

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "tabulated":
            v = np.asarray(self.values, dtype=float)
            if v.size == 0 or not np.all(v > 0) or not np.all(np.isfinite(v)):
                raise ValueError("tabulated weight values must be finite and strictly positive")

    @classmethod
    def poly(cls, s):
        return cls("polynomial", s=s)

    @classmethod
    def tensor(cls, s, t=None):
        return cls("product", s=s, t=s if t is None else t)

    def __call__(self, x, w=None):
        """Evaluate at signed coordinates; ``w`` is omitted for weights on Z."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            shape = x.shape if w is None else np.broadcast_shapes(x.shape, np.shape(w))
            return np.ones(shape)
        if self.kind == "tabulated":
            return np.asarray(self.values, dtype=float)
        if w is None:
            return (1.0 + x**2) ** (self.s / 2)
        w = np.asarray(w, dtype=float)
        if self.kind == "polynomial":
            return (1.0 + x**2 + w**2) ** (self.s / 2)
        return (1.0 + x**2) ** (self.s / 2) * (1.0 + w**2) ** (self.t / 2)

    def reciprocal(self):
        if self.kind == "constant":
            return self
        if self.kind == "tabulated":
            return WeightSpec("tabulated", values=1.0 / np.asarray(self.values, dtype=float))
        return WeightSpec(self.kind, s=-self.s, t=-self.t)


def weight_grid(m, shape, alpha=1, beta=1, L=None):
    """Weight values on a coefficient table of the given shape.

    Table index ``(k, n)`` sits at phase-space point ``(alpha k, beta n)`` of
    Z_L x Z_L and is weighted at its centered (signed) coordinates.
    """
    if m is None:
        return np.ones(shape)
    if not isinstance(m, WeightSpec):
        m = np.asarray(m, dtype=float)
        if m.shape != tuple(shape):
            raise ValueError(f"weight array shape {m.shape} does not match table {tuple(shape)}")
        return m
    if m.kind == "tabulated":
        return weight_grid(np.asarray(m.values, dtype=float), shape)
    rows, cols = shape
    Lk = rows * alpha if L is None else L
    Ln = cols * beta if L is None else L
    x = centered(alpha * np.arange(rows), Lk)
    w = centered(beta * np.arange(cols), Ln)
    X, W = np.meshgrid(x, w, indexing="ij")
    return m(X, W)


def _check_exponent(p, name="p"):
    if not p > 0:
        raise ValueError(f"exponent {name} must be positive (or inf), got {p}")


def _psum(x, p, axis=None):
    if np.isinf(p):
        return np.max(x, axis=axis, initial=0.0)
    return np.sum(x**p, axis=axis) ** (1.0 / p)


def _scaled(x):
    # divide out the largest entry so powers neither overflow nor underflow
    top = float(np.max(x, initial=0.0))
    return (x / top if top > 0 else x), top


def lp_norm(a, p, m=None):
    """Weighted l^p (quasi-)norm of a finite sequence; ``m`` holds weight values."""
    _check_exponent(p)
    a = np.abs(np.asarray(a))
    if m is not None:
        a = a * np.asarray(m, dtype=float)
    a, top = _scaled(a.ravel())
    return float(_psum(a, p)) * top


def lpq_norm(c, p, q, m=None, alpha=1, beta=1, L=None):
    """Mixed ``l^{p,q}_m`` quasi-norm; inner sum over time (axis 0), outer over frequency."""
    _check_exponent(p, "p")
    _check_exponent(q, "q")
    c = np.abs(np.asarray(c))
    if c.ndim != 2:
        raise ValueError("coefficient table must be two-dimensional")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficient table contains NaN or Inf")
    weighted, top = _scaled(c * weight_grid(m, c.shape, alpha, beta, L))
    inner = _psum(weighted, p, axis=0)
    return float(_psum(inner, q)) * top


def convolve_seq(a, b):
    """Full linear convolution of two finitely supported sequences."""
    return np.convolve(np.asarray(a), np.asarray(b))


class RatioReport(NamedTuple):
    ratio: float
    lhs: float
    rhs: float


def _young_admissible(p, q, r, tol=1e-12):
    if r >= 1:
        inv = lambda x: 0.0 if np.isinf(x) else 1.0 / x
        return abs(inv(p) + inv(q) - 1.0 - inv(r)) <= tol
    return p == q == r


def young_check(a, b, p, q, r, m=None, v=None):
    """Ratio ``||a*b||_{l^r_m} / (||a||_{l^p_m} ||b||_{l^q_v})``.

    Sequences are indexed from 0; weights are evaluated at the index.
    """
    for e, n in ((p, "p"), (q, "q"), (r, "r")):
        _check_exponent(e, n)
    if not _young_admissible(p, q, r):
        raise ValueError(
            f"exponents (p, q, r) = ({p}, {q}, {r}) satisfy neither "
            "1/p + 1/q = 1 + 1/r with r >= 1 nor p = q = r < 1"
        )
    a = np.asarray(a)
    b = np.asarray(b)
    ab = convolve_seq(a, b)
    m = m or WeightSpec()
    v = v or WeightSpec()
    lhs = lp_norm(ab, r, m(np.arange(ab.size)))
    rhs = lp_norm(a, p, m(np.arange(a.size))) * lp_norm(b, q, v(np.arange(b.size)))
    return RatioReport(lhs / rhs if rhs > 0 else np.nan, lhs, rhs)


def holder_check(a, b, p, q, r, m=None):
    """Ratio ``||a b||_{l^r} / (||a||_{l^p_m} ||b||_{l^q_{1/m}})``."""
    for e, n in ((p, "p"), (q, "q"), (r, "r")):
        _check_exponent(e, n)
    inv = lambda x: 0.0 if np.isinf(x) else 1.0 / x
    if abs(inv(p) + inv(q) - inv(r)) > 1e-12:
        raise ValueError(f"Hoelder exponents need 1/p + 1/q = 1/r, got ({p}, {q}, {r})")
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("Hoelder check needs sequences of equal length")
    m = m or WeightSpec()
    w = m(np.arange(a.size))
    lhs = lp_norm(a * b, r)
    rhs = lp_norm(a, p, w) * lp_norm(b, q, 1.0 / w)
    return RatioReport(lhs / rhs if rhs > 0 else np.nan, lhs, rhs)


@dataclass(frozen=True)
class SortedMagnitudes:
    """Non-increasing rearrangement with the table positions it came from."""

    values: np.ndarray
    order: np.ndarray = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("sorted magnitudes must be nonnegative and nonincreasing")

    def __len__(self):
        return len(self.values)


def rearrange_desc(c):
    """Sort ``|c|`` in non-increasing order.

    Ties keep lexicographic ``(n, k)`` order, i.e. frequency-major. ``order``
    holds the ``(k, n)`` table index of each sorted entry.
    """
    c = np.asarray(c)
    if c.ndim == 1:
        c = c[:, None]
    mags = np.abs(c).T.ravel()  # frequency-major flattening
    idx = np.argsort(-mags, kind="stable")
    rows = c.shape[0]
    order = np.stack([idx % rows, idx // rows], axis=1)
    return SortedMagnitudes(mags[idx], order)


def _values(s):
    return np.asarray(s.values if isinstance(s, SortedMagnitudes) else s, dtype=float)


def sigma_profile(s):
    """All tails ``sigma_N`` for ``N = 0..len(s)`` (the last one is 0)."""
    v = _values(s)
    tails = np.cumsum((v**2)[::-1])[::-1]
    return np.sqrt(np.append(tails, 0.0))


def sigma_tail(s, N):
    """``sigma_N = sqrt(sum_{m > N} s_m^2)`` with 1-based ``m``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    v = _values(s)
    if N >= v.size:
        return 0.0
    return float(np.sqrt(np.sum(v[N:] ** 2)))


class StechkinReport(NamedTuple):
    middle: float
    lp: float
    ratio: float


def stechkin_ratio(s, p):
    """Compare ``||s||_p`` with ``(sum_N (N^g sigma_{N-1})^p / N)^(1/p)``, ``g = 1/p - 1/2``.

    The sum over N stops at ``len(s)``, so ``middle`` is a lower bound for the
    untruncated series.
    """
    if not 0 < p < 2:
        raise ValueError(f"p must lie in (0, 2), got {p}")
    v = _values(s)
    gamma = 1.0 / p - 0.5
    N = np.arange(1, v.size + 1)
    tails = sigma_profile(v)[:-1]  # sigma_{N-1}
    middle = float(np.sum((N**gamma * tails) ** p / N) ** (1.0 / p))
    lp = lp_norm(v, p)
    return StechkinReport(middle, lp, middle / lp if lp > 0 else np.nan)
