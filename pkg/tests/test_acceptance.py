"""Acceptance suite: one test per criterion, one PASS/FAIL line per criterion.

Each test collects its sub-checks, records a summary line in ``RESULTS`` and
then asserts. The lines are printed as they are produced and again in the
terminal summary (see ``conftest.py``). Run standalone with
``python -m pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from tests.oracles import stft_direct
from tflocal import gabor, quantize
from tflocal.diagnostics import (
    convolution_ratio_batch,
    eigen_decay_study,
    weighted_decay_study,
)
from tflocal.gabor import LatticeSpec
from tflocal.scenarios import build_scenario, gaussian_window, get_preset, list_presets
from tflocal.seqspaces import holder_check, stechkin_ratio, young_check
from tflocal.spectral import eig, singular_values

RESULTS = {}


def record(n, title, checks):
    """Store the summary line for criterion ``n`` and fail on any failed check."""
    ok = all(c[1] for c in checks)
    bad = [f"{label}: {detail}" for label, passed, detail in checks if not passed]
    detail = "; ".join(bad) if bad else "; ".join(d for _, _, d in checks if d)
    line = f"criterion {n} [{title}]: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def unit(v):
    return v / np.linalg.norm(v)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture(scope="module")
def antiwick63():
    return build_scenario(get_preset("antiwick-gauss-63"))


def test_criterion_1_stft_oracle():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for L in (8, 16):
        for _ in range(50):
            f, g = crandn(rng, L), crandn(rng, L)
            worst = max(worst, np.max(np.abs(gabor.stft(f, g) - stft_direct(f, g))))
    dt = time.perf_counter() - t0
    record(
        1,
        "STFT oracle",
        [
            ("max deviation", worst <= 1e-12, f"max |fast - direct| = {worst:.2e}"),
            ("runtime", dt < 5, f"{dt:.2f}s"),
        ],
    )


def test_criterion_2_frame_round_trip():
    rng = np.random.default_rng(2)
    L = 16
    lat = LatticeSpec(4, 4, L)
    # centred between samples: an integer-symmetric Gaussian has a Zak zero at critical density
    g = gaussian_window(L, center=L / 2 + 0.5)
    gamma = gabor.canonical_dual(g, lat)
    h = gabor.tight_window(g, lat)
    rec = par = 0.0
    for _ in range(20):
        f = crandn(rng, L)
        fr = gabor.reconstruct(gabor.gabor_coeffs(f, g, lat), gamma, lat)
        rec = max(rec, np.linalg.norm(fr - f) / np.linalg.norm(f))
        c = gabor.gabor_coeffs(f, h, lat)
        par = max(par, abs(np.sum(np.abs(c) ** 2) / np.linalg.norm(f) ** 2 - 1))
    record(
        2,
        "frame round trip",
        [
            ("reconstruction", rec <= 1e-10, f"relative error {rec:.2e}"),
            ("Parseval", par <= 1e-10, f"energy deviation {par:.2e}"),
        ],
    )


def test_criterion_3_localization_identity():
    rng = np.random.default_rng(3)
    ident = adj = 0.0
    for L in (6, 33, 63):
        phi = unit(crandn(rng, L))
        A = quantize.localization_build(np.ones((L, L)), phi, phi).matrix
        ident = max(ident, np.max(np.abs(A - np.eye(L))))
        a = crandn(rng, L, L)
        p1, p2 = crandn(rng, L), crandn(rng, L)
        lhs = quantize.localization_build(a, p1, p2).matrix.conj().T
        rhs = quantize.localization_build(a.conj(), p2, p1).matrix
        adj = max(adj, np.max(np.abs(lhs - rhs)))
    record(
        3,
        "localization identity",
        [
            ("a = 1 gives identity", ident <= 1e-10, f"max deviation {ident:.2e}"),
            ("adjoint", adj <= 1e-12, f"adjoint mismatch {adj:.2e}"),
        ],
    )


def test_criterion_4_weyl_correspondence():
    rng = np.random.default_rng(4)
    checks = []
    worst_c = worst = 0.0
    for L in (3, 5, 7, 33):
        c, _ = quantize.derive_correspondence_constant(L, rng)
        worst_c = max(worst_c, abs(c - quantize.correspondence_constant(L)) * L)
        g1 = gaussian_window(L)
        g2 = gaussian_window(L, s=max(1.0, np.sqrt(L) / 2))
        a = crandn(rng, L, L)
        A = quantize.localization_build(a, g1, g2).matrix
        B = quantize.weyl_build(quantize.localization_weyl_symbol(a, g1, g2)).matrix
        worst = max(worst, np.max(np.abs(A - B)))
    checks.append(("derived constant", worst_c <= 1e-9, f"|c_L - 1/L| * L <= {worst_c:.1e}"))
    checks.append(("operator match", worst <= 1e-9, f"max entry mismatch {worst:.2e}"))
    L = 5
    sigma = crandn(rng, L, L)
    g = gaussian_window(L)
    kern = 0.0
    for _ in range(50):
        z, w = tuple(rng.integers(0, L, 2)), tuple(rng.integers(0, L, 2))
        lhs, rhs = quantize.stft_mag_of_operator_kernel(sigma, g, z, w)
        kern = max(kern, abs(lhs - rhs))
    checks.append(("kernel magnitude identity", kern <= 1e-9, f"kernel mismatch {kern:.2e}"))
    record(4, "Weyl correspondence", checks)


def test_criterion_5_sequence_inequalities():
    rng = np.random.default_rng(5)
    young_triples = [(1, 2, 2), (4 / 3, 4 / 3, 2), (1, 1, 1), (2, 2, np.inf), (1.5, 1.2, 2.0)]
    holder_triples = [(2, 2, 1), (1, 1, 0.5), (3, 1.5, 1), (0.5, 0.5, 0.25), (np.inf, 2, 2)]
    yb = yq = ho = 0.0
    for i in range(200):
        a, b = rng.random(rng.integers(1, 30)), rng.random(rng.integers(1, 30))
        yb = max(yb, young_check(a, b, *young_triples[i % len(young_triples)]).ratio)
        yq = max(yq, young_check(a, b, 0.5, 0.5, 0.5).ratio)
        n = rng.integers(1, 30)
        x, y = crandn(rng, n), crandn(rng, n)
        ho = max(ho, holder_check(x, y, *holder_triples[i % len(holder_triples)]).ratio)
    families = {"geometric": 0.5 ** np.arange(40), "power": np.arange(1, 1001) ** -2.0}
    st = {(k, p): stechkin_ratio(s, p).ratio for k, s in families.items() for p in (0.5, 1.0, 1.5)}
    lo, hi = min(st.values()), max(st.values())
    record(
        5,
        "sequence inequalities",
        [
            ("Young r >= 1", yb <= 1 + 1e-12, f"Young max {yb:.6f}"),
            ("Young p = q = r = 1/2", yq <= 1 + 1e-12, f"quasi Young max {yq:.6f}"),
            ("Hoelder", ho <= 1 + 1e-12, f"Hoelder max {ho:.6f}"),
            ("Stechkin band", 0.1 <= lo and hi <= 10, f"Stechkin ratios in [{lo:.4f}, {hi:.4f}]"),
        ],
    )


def test_criterion_6_decay_separation(antiwick63):
    b = antiwick63
    t0 = time.perf_counter()
    st = eigen_decay_study(b.operator, b.phi1, b.lattice, floor=1e-8, seed=b.spec.seed, fit_range=(4, 40))
    dt = time.perf_counter() - t0
    r = np.array([rep.fitted_exponent for rep in st.reports], dtype=float)
    tails = np.array([rep.relative_tail(64) for rep in st.reports])
    base_r = st.baseline.fitted_exponent
    base_tail = st.baseline.relative_tail(64)
    record(
        6,
        "decay separation",
        [
            ("retained", len(st.reports) > 0, f"{len(st.reports)} retained"),
            ("eigenfunction exponent", bool(np.all(r >= 2)), f"min r = {np.nanmin(r):.4f} (need >= 2)"),
            ("eigenfunction tail", bool(np.all(tails <= 1e-4)), f"max tail_64 = {tails.max():.3e} (need <= 1e-4)"),
            ("baseline exponent", base_r <= 0.8, f"baseline r = {base_r:.4f}"),
            ("baseline tail", base_tail >= 0.3, f"baseline tail_64 = {base_tail:.4f}"),
            ("runtime", dt < 60, f"{dt:.2f}s"),
        ],
    )


def test_criterion_7_weighted_decay(antiwick63):
    b = antiwick63
    rows = weighted_decay_study(b.operator, b.phi1, b.lattice, [1, 2], 1.0, top_k=1, seed=b.spec.seed)
    checks = [
        (f"s = {row.s}", row.relative <= 0.2, f"s={row.s}: {row.relative:.4f} of baseline")
        for row in rows
    ]
    record(7, "weighted decay", checks)


def test_criterion_8_convolution_relation():
    checks = []
    for regime in ("banach", "quasi"):
        r = convolution_ratio_batch(32, 100, regime, seed=0)
        again = convolution_ratio_batch(32, 100, regime, seed=0)
        q = r.max() / np.median(r)
        checks.append((f"{regime} bounded", q <= 100, f"{regime} max/median {q:.3f}"))
        checks.append((f"{regime} stable", r.tobytes() == again.tobytes(), ""))
    record(8, "convolution relation", checks)


def test_criterion_9_spectral_correctness():
    res = im = fro = 0.0
    for name in list_presets():
        op = build_scenario(get_preset(name)).operator
        E = eig(op)
        res = max(res, np.max(E.residuals) / E.tolerance)
        if op.hermitian:
            im = max(im, np.max(np.abs(E.eigenvalues.imag)))
        s = singular_values(op)
        F2 = np.linalg.norm(op.matrix) ** 2
        fro = max(fro, abs(np.sum(s**2) - F2) / F2)
    record(
        9,
        "spectral correctness",
        [
            ("residuals", res <= 1, f"max residual / tau = {res:.2e}"),
            ("singular values", fro <= 1e-10, f"Frobenius deviation {fro:.1e}"),
            ("Hermitian spectra real", im <= 1e-10, f"max |Im| {im:.1e}"),
        ],
    )
