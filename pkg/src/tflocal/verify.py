"""Self-check suites behind ``tflocal verify``.

Each suite runs a group of invariant checks on small seeded instances and
raises :class:`CheckFailed` naming the first assertion that does not hold.
The ``full`` level adds the L = 63 acceptance instances.
"""
import time
from dataclasses import dataclass

import numpy as np

from . import core, diagnostics, gabor, quantize, seqspaces, spectral
from .scenarios import build_scenario, gaussian_window, get_preset, list_presets


class CheckFailed(AssertionError):
    pass


class _Checker:
    def __init__(self):
        self.count = 0

    def __call__(self, name, cond):
        if not bool(cond):
            raise CheckFailed(name)
        self.count += 1


def _rc(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _direct_dft(f):
    L = len(f)
    t = np.arange(L)
    return np.array([np.sum(f * np.exp(-2j * np.pi * t * n / L)) for n in range(L)])


def _direct_stft(f, g):
    L = len(f)
    V = np.zeros((L, L), dtype=complex)
    for k in range(L):
        for n in range(L):
            for t in range(L):
                V[k, n] += f[t] * np.conj(g[(t - k) % L]) * np.exp(-2j * np.pi * t * n / L)
    return V


def suite_core(check, rng, level):
    L = 8
    f = _rc(rng, L)
    check("dft matches direct sum", np.allclose(core.dft(f), _direct_dft(f), atol=1e-12, rtol=0))
    check("dft Parseval", abs(np.linalg.norm(core.dft(f)) ** 2 - L * np.linalg.norm(f) ** 2) < 1e-10)
    check("translate periodic", np.array_equal(core.translate(f, L), f))
    check("modulate periodic", np.allclose(core.modulate(f, L), f, atol=0, rtol=0))
    for _ in range(5):
        z = tuple(rng.integers(-L, 2 * L, 2))
        w = tuple(rng.integers(-L, 2 * L, 2))
        # pi(z) pi(w) = phase * pi(w) pi(z)
        lhs = core.tf_shift(core.tf_shift(f, w), z)
        ph = np.exp(-2j * np.pi * z[0] * w[1] / L) * np.exp(2j * np.pi * w[0] * z[1] / L)
        rhs = ph * core.tf_shift(core.tf_shift(f, z), w)
        check("commutation relation", np.max(np.abs(lhs - rhs)) < 1e-12)
        check("tf_shift unitary", abs(np.linalg.norm(core.tf_shift(f, z)) - np.linalg.norm(f)) < 1e-12)
    k = 3
    intertw = np.exp(-2j * np.pi * k * np.arange(L) / L) * core.dft(f)
    check("Fourier intertwining", np.max(np.abs(core.dft(core.translate(f, k)) - intertw)) < 1e-12)


def suite_stft_oracle(check, rng, level):
    for L in (8, 16) if level == "full" else (8,):
        for _ in range(5):
            f, g = _rc(rng, L), _rc(rng, L)
            check(f"stft equals direct summation (L={L})", np.max(np.abs(gabor.stft(f, g) - _direct_stft(f, g))) < 1e-12 * max(1, L))
    g = gaussian_window(8)
    check("stft(g,g)(0,0) = |g|^2", abs(gabor.stft(g, g)[0, 0] - np.vdot(g, g)) < 1e-12)


def suite_gabor_frame(check, rng, level):
    L = 16
    g = gaussian_window(L, center=L / 2 + 0.5)
    g /= np.linalg.norm(g)
    full = gabor.LatticeSpec(1, 1, L)
    S = gabor.frame_operator(g, full).matrix
    check("full-grid frame operator = L I", np.max(np.abs(S - L * np.eye(L))) < 1e-10)
    lat = gabor.LatticeSpec(4, 4, L)
    S = gabor.frame_operator(g, lat).matrix
    A, B = gabor.frame_bounds(S)
    check("Gaussian system on (4,4,16) is a frame", A > 0)
    for lam in lat.points()[:6]:
        P = core.tf_shift_matrix(L, lam)
        check("frame operator commutes with lattice shifts", np.max(np.abs(S @ P - P @ S)) < 1e-10)
    h = gabor.tight_window(g, lat)
    check("tight window gives identity frame operator", np.max(np.abs(gabor.frame_operator(h, lat).matrix - np.eye(L))) < 1e-10)
    check("tight window idempotent", np.max(np.abs(gabor.tight_window(h, lat) - h)) < 1e-10)
    for _ in range(20):
        f = _rc(rng, L)
        e = np.sum(np.abs(gabor.gabor_coeffs(f, g, lat)) ** 2)
        n2 = np.linalg.norm(f) ** 2
        check("frame-bound sandwich", A * n2 - 1e-10 * n2 <= e <= B * n2 + 1e-10 * n2)


def suite_gabor_reconstruct(check, rng, level):
    L = 16
    g = gaussian_window(L, center=L / 2 + 0.5)
    lat = gabor.LatticeSpec(4, 4, L)
    gamma = gabor.canonical_dual(g, lat)
    h = gabor.tight_window(g, lat)
    for _ in range(5):
        f = _rc(rng, L)
        rec = gabor.reconstruct(gabor.gabor_coeffs(f, g, lat), gamma, lat)
        check("canonical dual round trip", np.linalg.norm(rec - f) <= 1e-10 * np.linalg.norm(f))
        rec = gabor.reconstruct(gabor.gabor_coeffs(f, h, lat), h, lat)
        check("tight window round trip", np.linalg.norm(rec - f) <= 1e-10 * np.linalg.norm(f))
    lat2 = gabor.LatticeSpec(2, 2, L)
    h2 = gabor.tight_window(g, lat2)
    f = _rc(rng, L)
    e = np.sum(np.abs(gabor.gabor_coeffs(f, h2, lat2)) ** 2)
    check("Parseval identity", abs(e - np.linalg.norm(f) ** 2) < 1e-10 * np.linalg.norm(f) ** 2)


def suite_seq_norms(check, rng, level):
    c = _rc(rng, 5, 7)
    check("l^{2,2} is Frobenius", abs(seqspaces.lpq_norm(c, 2, 2) - np.linalg.norm(c)) < 1e-12)
    check("3x3 ones, p=1 q=2", abs(seqspaces.lpq_norm(np.ones((3, 3)), 1, 2) - np.sqrt(27)) < 1e-12)
    for p, q in ((0.5, 1.0), (1.0, 0.25), (np.inf, 2.0)):
        lam = 2.5 - 1j
        check("lpq homogeneity", abs(seqspaces.lpq_norm(lam * c, p, q) - abs(lam) * seqspaces.lpq_norm(c, p, q)) < 1e-10 * seqspaces.lpq_norm(lam * c, p, q))
    for r in (0.25, 0.5, 1.0):
        a, b = _rc(rng, 4, 4), _rc(rng, 4, 4)
        n = lambda x: seqspaces.lpq_norm(x, r, r) ** r
        check("r-subadditivity", n(a + b) <= n(a) + n(b) * (1 + 1e-12))
    for p1, p2 in ((0.25, 0.5), (0.5, 1.0), (1.0, 2.0), (2.0, np.inf)):
        check("inclusion monotonicity", seqspaces.lpq_norm(c, p2, p2) <= seqspaces.lpq_norm(c, p1, p1) * (1 + 1e-12))


def suite_seq_inequalities(check, rng, level):
    trials = 200 if level == "full" else 50
    for _ in range(trials):
        a, b = rng.random(6), rng.random(6)
        check("Young r=1/2", seqspaces.young_check(a, b, 0.5, 0.5, 0.5).ratio <= 1 + 1e-12)
        check("Young p=q=r=1", seqspaces.young_check(a, b, 1, 1, 1).ratio <= 1 + 1e-12)
        check("Young p=4/3,q=4/3,r=2", seqspaces.young_check(a, b, 4 / 3, 4 / 3, 2).ratio <= 1 + 1e-12)
        check("Hoelder p=q=2,r=1", seqspaces.holder_check(_rc(rng, 6), _rc(rng, 6), 2, 2, 1).ratio <= 1 + 1e-12)
        check("Hoelder weighted r=1/2", seqspaces.holder_check(a, b, 1, 1, 0.5, seqspaces.WeightSpec.poly(1)).ratio <= 1 + 1e-12)


def suite_rearrangement(check, rng, level):
    s = seqspaces.rearrange_desc(np.array([3, -4j, 0]))
    check("rearrangement of (3,-4i,0)", np.allclose(s.values, [4, 3, 0]))
    c = _rc(rng, 6, 5)
    s = seqspaces.rearrange_desc(c)
    check("rearrangement is a permutation", np.allclose(np.sort(s.values), np.sort(np.abs(c).ravel())))
    prof = seqspaces.sigma_profile(s)
    check("sigma_0 is the l2 norm", abs(prof[0] - np.linalg.norm(c)) < 1e-12)
    check("sigma nonincreasing", np.all(np.diff(prof) <= 1e-15))
    geo = 0.5 ** np.arange(20)
    check("geometric sigma_1", abs(seqspaces.sigma_tail(geo, 1) - 0.5773502691896258) < 1e-6)


def suite_stechkin(check, rng, level):
    check("single-term Stechkin ratio", abs(seqspaces.stechkin_ratio([1.0, 0, 0], 1).ratio - 1) < 1e-12)
    fams = {"geometric": 0.5 ** np.arange(20), "power": np.arange(1, 1001) ** -2.0}
    for name, s in fams.items():
        for p in (0.5, 1.0, 1.5):
            r = seqspaces.stechkin_ratio(s, p).ratio
            check(f"Stechkin band {name} p={p}", 0.1 <= r <= 10)


def suite_wigner(check, rng, level):
    for L in (5, 7):
        f = _rc(rng, L)
        W = quantize.cross_wigner(f, f)
        check("W(f,f) real", np.max(np.abs(W.imag)) <= 1e-12 * max(1, np.max(np.abs(W))))
        check("frequency marginal", np.max(np.abs(W.sum(axis=1) - L * np.abs(f) ** 2)) < 1e-10)
    d = np.zeros(5, dtype=complex)
    d[0] = 1
    expect = np.zeros((5, 5))
    expect[0] = 1
    check("W(delta,delta)", np.allclose(quantize.cross_wigner(d, d), expect, atol=1e-12))


def suite_weyl(check, rng, level):
    L = 5
    check("Weyl of 1 is identity", np.allclose(quantize.weyl_build(np.ones((L, L))).matrix, np.eye(L), atol=1e-12))
    s = rng.standard_normal((L, L))
    M = quantize.weyl_build(s).matrix
    check("real symbol gives Hermitian operator", np.max(np.abs(M - M.conj().T)) <= 1e-12)
    s = _rc(rng, L, L)
    f, g = _rc(rng, L), _rc(rng, L)
    lhs = np.vdot(g, quantize.weyl_build(s).matrix @ f)
    rhs = np.sum(s * np.conj(quantize.cross_wigner(g, f))) / L
    check("Weyl-Wigner pairing", abs(lhs - rhs) < 1e-10)


def suite_localization(check, rng, level):
    for L in (6, 16) if level == "fast" else (6, 33, 63):
        phi = gaussian_window(L)
        phi /= np.linalg.norm(phi)
        A = quantize.localization_build(np.ones((L, L)), phi, phi).matrix
        check(f"a=1 gives identity (L={L})", np.max(np.abs(A - np.eye(L))) < 1e-10)
    L = 6
    a = _rc(rng, L, L)
    p1, p2 = _rc(rng, L), _rc(rng, L)
    A = quantize.localization_build(a, p1, p2).matrix
    B = quantize.localization_build(np.conj(a), p2, p1).matrix
    check("adjoint identity", np.max(np.abs(A.conj().T - B)) < 1e-12 * max(1, np.max(np.abs(A))))
    a2 = _rc(rng, L, L)
    S = quantize.localization_build(a + a2, p1, p2).matrix
    check("linearity in the symbol", np.max(np.abs(S - A - quantize.localization_build(a2, p1, p2).matrix)) < 1e-12 * max(1, np.max(np.abs(S))))
    pos = quantize.localization_build(rng.random((L, L)), p1, p1)
    check("nonnegative symbol gives PSD operator", pos.hermitian and np.linalg.eigvalsh(pos.matrix)[0] >= -1e-10)


def suite_correspondence(check, rng, level):
    sizes = (3, 5, 7) if level == "fast" else (3, 5, 7, 33)
    for L in sizes[:3]:
        c, res = quantize.derive_correspondence_constant(L, rng)
        check(f"derived c_L matches 1/L (L={L})", abs(c - quantize.correspondence_constant(L)) < 1e-12 and res < 1e-12)
    for L in sizes:
        g = gaussian_window(L)
        g /= np.linalg.norm(g)
        g2 = np.roll(g, 1)
        a = _rc(rng, L, L)
        A = quantize.localization_build(a, g, g2).matrix
        B = quantize.weyl_build(quantize.localization_weyl_symbol(a, g, g2)).matrix
        check(f"localization = Weyl (L={L})", np.max(np.abs(A - B)) <= 1e-9)


def suite_kernel_lemma(check, rng, level):
    L = 5
    g = gaussian_window(L)
    g /= np.linalg.norm(g)
    s = _rc(rng, L, L)
    for _ in range(50 if level == "full" else 10):
        z, w = tuple(rng.integers(0, L, 2)), tuple(rng.integers(0, L, 2))
        lhs, rhs = quantize.stft_mag_of_operator_kernel(s, g, z, w)
        check("Weyl kernel magnitude identity", abs(lhs - rhs) <= 1e-9)


def suite_spectral(check, rng, level):
    L = 8
    X = _rc(rng, L, L)
    H = X + X.conj().T
    E = spectral.eig(H)
    check("Hermitian eigenvalues real", np.max(np.abs(E.eigenvalues.imag)) <= 1e-10)
    check("Hermitian residuals", np.max(E.residuals) <= E.tolerance)
    check("eigenvalues match eigvalsh", np.allclose(np.sort(E.eigenvalues.real), np.linalg.eigvalsh(H), atol=1e-8))
    Q, _ = np.linalg.qr(_rc(rng, L, L))
    E2 = spectral.eig(spectral.Operator(Q @ H @ Q.conj().T, hermitian=None))
    check("similarity invariance", np.allclose(np.sort(E2.eigenvalues.real), np.sort(E.eigenvalues.real), atol=1e-8))
    G = spectral.eig(X)
    check("general residuals", np.max(G.residuals) <= G.tolerance)
    s = spectral.singular_values(X)
    check("sum s_k^2 = Frobenius^2", abs(np.sum(s**2) - np.linalg.norm(X) ** 2) <= 1e-10 * np.linalg.norm(X) ** 2)
    check("Schatten-2 is Frobenius", abs(spectral.schatten_qnorm(X, 2) - np.linalg.norm(X)) <= 1e-10 * np.linalg.norm(X))


def suite_diagnostics(check, rng, level):
    L = 16
    g = gaussian_window(L)
    lat = gabor.LatticeSpec(2, 2, L)
    f = _rc(rng, L)
    v = diagnostics.modulation_qnorm(f, g, lat, 2, 2).value
    check("M^2 norm is the l2 norm", abs(v - np.linalg.norm(f)) < 1e-10 * np.linalg.norm(f))
    vals = [diagnostics.modulation_qnorm(f, g, lat, p, p).value for p in (0.25, 0.5, 1, 2, np.inf)]
    check("modulation norm monotone in p", all(x >= y * (1 - 1e-12) for x, y in zip(vals, vals[1:])))
    rep = diagnostics.n_term_profile(f, g, lat, (2, 10))
    check("sigma profile nonincreasing", np.all(np.diff(rep.sigma_profile) <= 1e-15))
    check("sigma_0 is l2 norm", abs(rep.sigma_profile[0] - np.linalg.norm(f)) < 1e-10 * np.linalg.norm(f))


def suite_scenarios(check, rng, level):
    presets = list_presets()
    check("at least six presets", len(presets) >= 6)
    for name in presets:
        spec = get_preset(name)
        if level == "fast" and spec.L > 40:
            continue
        b = build_scenario(spec)
        E = spectral.eig(b.operator)
        check(f"{name}: residuals within tolerance", np.max(E.residuals) <= E.tolerance)
        if b.operator.hermitian:
            check(f"{name}: Hermitian spectrum real", np.max(np.abs(E.eigenvalues.imag)) <= 1e-10)
        s = spectral.singular_values(b.operator)
        fro = np.linalg.norm(b.operator.matrix)
        check(f"{name}: sum s_k^2 = Frobenius^2", abs(np.sum(s**2) - fro**2) <= 1e-10 * max(1, fro**2))
    b1 = build_scenario(get_preset("disk-33"))
    ev = np.linalg.eigvalsh(b1.operator.matrix)
    check("disk-33 eigenvalues below <phi,phi>", ev[-1] <= np.vdot(b1.phi1, b1.phi1).real + 1e-8)


def suite_decay_separation(check, rng, level):
    b = build_scenario(get_preset("antiwick-gauss-63"))
    st = diagnostics.eigen_decay_study(b.operator, b.phi1, b.lattice, floor=1e-8, seed=b.spec.seed)
    base = st.baseline
    check("baseline exponent <= 0.8", base.fitted_exponent <= 0.8)
    check("baseline sigma_64/sigma_0 >= 0.3", base.relative_tail(64) >= 0.3)
    for i, rep in enumerate(st.reports):
        check(f"eigenfunction {i}: exponent >= 2", rep.fitted_exponent is not None and rep.fitted_exponent >= 2)
        check(f"eigenfunction {i}: sigma_64/sigma_0 <= 1e-4", rep.relative_tail(64) <= 1e-4)
        check(f"eigenfunction {i}: exponent exceeds baseline by 1.5", rep.fitted_exponent - base.fitted_exponent >= 1.5)


def suite_weighted_decay(check, rng, level):
    b = build_scenario(get_preset("antiwick-gauss-63"))
    rows = diagnostics.weighted_decay_study(b.operator, b.phi1, b.lattice, [1, 2], 1.0, top_k=1, seed=b.spec.seed)
    for row in rows:
        check(f"weighted ratio s={row.s:g} at most 0.2 x baseline", row.relative <= 0.2)


def suite_convolution(check, rng, level):
    for regime in ("banach", "quasi"):
        r = diagnostics.convolution_ratio_batch(32, 100, regime, seed=0)
        check(f"convolution ratios finite ({regime})", np.all(np.isfinite(r)))
        check(f"max ratio <= 100 x median ({regime})", r.max() <= 100 * np.median(r))
        r2 = diagnostics.convolution_ratio_batch(32, 100, regime, seed=0)
        check(f"convolution batch reproducible ({regime})", np.array_equal(r, r2))


@dataclass
class SuiteResult:
    name: str
    passed: int
    failure: str = None
    seconds: float = 0.0

    @property
    def ok(self):
        return self.failure is None


FAST_SUITES = [
    ("core-algebra", suite_core),
    ("stft-oracle", suite_stft_oracle),
    ("gabor-frame", suite_gabor_frame),
    ("gabor-reconstruct", suite_gabor_reconstruct),
    ("seq-norms", suite_seq_norms),
    ("seq-inequalities", suite_seq_inequalities),
    ("rearrangement", suite_rearrangement),
    ("stechkin", suite_stechkin),
    ("wigner", suite_wigner),
    ("weyl", suite_weyl),
    ("localization", suite_localization),
    ("correspondence", suite_correspondence),
    ("kernel-lemma", suite_kernel_lemma),
    ("spectral", suite_spectral),
    ("diagnostics", suite_diagnostics),
    ("scenarios", suite_scenarios),
]

FULL_SUITES = [
    ("decay-separation", suite_decay_separation),
    ("weighted-decay", suite_weighted_decay),
    ("convolution-relation", suite_convolution),
]


def run_suites(level="fast", seed=0):
    """Run every suite for ``level``; a failure in one suite does not stop the rest."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    suites = FAST_SUITES + (FULL_SUITES if level == "full" else [])
    results = []
    for name, fn in suites:
        check = _Checker()
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        failure = None
        try:
            fn(check, rng, level)
        except CheckFailed as exc:
            failure = str(exc)
        except Exception as exc:  # a crash inside a suite counts as a failure
            failure = f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, check.count, failure, time.perf_counter() - t0))
    return results
