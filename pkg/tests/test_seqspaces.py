import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tflocal.seqspaces import (
    SortedMagnitudes,
    WeightSpec,
    convolve_seq,
    holder_check,
    lp_norm,
    lpq_norm,
    rearrange_desc,
    sigma_profile,
    sigma_tail,
    stechkin_ratio,
    weight_grid,
)
from tests.conftest import rand_complex
from tests.oracles import linear_convolution_direct, stechkin_direct
from tflocal.seqspaces import young_check

GEOMETRIC = 0.5 ** np.arange(20)
POWER = np.arange(1, 1001) ** -2.0

tables = arrays(
    np.float64,
    st.tuples(st.integers(1, 6), st.integers(1, 6)),
    elements=st.floats(-1e3, 1e3, allow_nan=False),
)
exponents = st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.0, 3.0, np.inf])


def test_l22_is_frobenius(rng):
    c = rand_complex(rng, 4, 7)
    assert lpq_norm(c, 2, 2) == pytest.approx(np.linalg.norm(c), rel=1e-14)


@pytest.mark.parametrize("p,q", [(0.5, 3), (1, 1), (2, np.inf), (np.inf, 0.25)])
def test_single_entry(p, q):
    c = np.zeros((5, 5), dtype=complex)
    c[3, 1] = 2 - 1j
    m = WeightSpec.tensor(1.5, 0.5)
    w = weight_grid(m, c.shape)[3, 1]
    assert lpq_norm(c, p, q, m) == pytest.approx(abs(2 - 1j) * w, rel=1e-12)


def test_ones_p1_q2():
    # inner sum over k is 3 for each n; outer (sum_n 3^2)^(1/2)
    assert lpq_norm(np.ones((3, 3)), 1, 2) == pytest.approx(np.sqrt(27), rel=1e-15)


def test_mixed_norm_inner_axis_is_time():
    c = np.array([[1.0, 0.0], [1.0, 0.0]])  # both entries at n = 0
    assert lpq_norm(c, 1, np.inf) == pytest.approx(2.0)
    assert lpq_norm(c, np.inf, 1) == pytest.approx(1.0)


@pytest.mark.parametrize("p,q", [(0, 1), (1, -1)])
def test_nonpositive_exponents_rejected(p, q):
    with pytest.raises(ValueError):
        lpq_norm(np.ones((2, 2)), p, q)


def test_centered_weight_grid():
    m = WeightSpec.poly(2)
    w = weight_grid(m, (3, 3), alpha=2, beta=2, L=6)
    # table index 2 sits at phase-space coordinate 4 == -2 mod 6
    assert w[2, 0] == pytest.approx(1 + 4)
    assert w[0, 0] == 1


def test_submultiplicative_weights(rng):
    for s in (0.5, 1, 2):
        v = WeightSpec.poly(s)
        for _ in range(50):
            j, k = rng.integers(-40, 40, 2)
            assert v(j + k) <= v(j) * v(k) * (1 + 1e-12)


@settings(max_examples=80, deadline=None)
@given(c=tables, p=exponents, q=exponents, lam=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_lpq_homogeneous(c, p, q, lam):
    m = WeightSpec.tensor(1.0)
    lhs = lpq_norm(lam * c, p, q, m)
    rhs = abs(lam) * lpq_norm(c, p, q, m)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-300)


@settings(max_examples=80, deadline=None)
@given(a=tables, r=st.sampled_from([0.2, 0.5, 0.75, 1.0]), data=st.data())
def test_r_subadditivity(a, r, data):
    b = data.draw(arrays(np.float64, a.shape, elements=st.floats(-1e3, 1e3, allow_nan=False)))
    n = lambda x: lpq_norm(x, r, r) ** r
    assert n(a + b) <= (n(a) + n(b)) * (1 + 1e-12) + 1e-300


@settings(max_examples=80, deadline=None)
@given(c=tables, pair=st.sampled_from([(0.25, 0.5), (0.5, 1), (1, 2), (1.5, 4), (2, np.inf), (0.3, np.inf)]))
def test_inclusion_monotonicity(c, pair):
    p1, p2 = pair
    assert lpq_norm(c, p2, p2) <= lpq_norm(c, p1, p1) * (1 + 1e-12) + 1e-300


def test_convolve_examples(rng):
    b = rng.standard_normal(5)
    np.testing.assert_array_equal(convolve_seq([1.0], b), b)
    np.testing.assert_array_equal(convolve_seq([1, 1], [1, 1]), [1, 2, 1])
    a, b = rng.standard_normal(6), rng.standard_normal(6)
    np.testing.assert_allclose(convolve_seq(a, b), linear_convolution_direct(a, b), rtol=0, atol=1e-14)


@pytest.mark.parametrize("p,q,r", [(1, 1, 1), (0.5, 0.5, 0.5), (2, 1, 2), (4 / 3, 4 / 3, 2), (1, 2, 2)])
def test_young_deltas(p, q, r):
    assert young_check([1.0], [1.0], p, q, r).ratio == pytest.approx(1.0)


@pytest.mark.parametrize("p,q,r", [(0.5, 0.5, 0.5), (1, 1, 1), (1.5, 1.2, 2.0)])
def test_young_unweighted_nonnegative(rng, p, q, r):
    if r >= 1:
        q = 1 / (1 + 1 / r - 1 / p)
    for _ in range(200):
        a, b = rng.random(rng.integers(1, 9)), rng.random(rng.integers(1, 9))
        assert young_check(a, b, p, q, r).ratio <= 1 + 1e-12


def test_young_rejects_bad_triple():
    with pytest.raises(ValueError, match="neither"):
        young_check([1.0], [1.0], 1, 1, 2)
    with pytest.raises(ValueError):
        young_check([1.0], [1.0], 0.5, 0.5, 0.25)


def test_young_weighted_reports_ratio(rng):
    v = WeightSpec.poly(1)
    rep = young_check(rng.random(5), rng.random(5), 1, 1, 1, v, v)
    assert rep.ratio <= 1 + 1e-12  # v_1 is submultiplicative on indices >= 0


def test_holder_examples(rng):
    assert holder_check([1.0], [1.0], 2, 2, 1).ratio == pytest.approx(1.0)
    for _ in range(200):
        a, b = rand_complex(rng, 7), rand_complex(rng, 7)
        assert holder_check(a, b, 2, 2, 1).ratio <= 1 + 1e-12
        a, b = rng.random(7), rng.random(7)
        assert holder_check(a, b, 1, 1, 0.5, WeightSpec.poly(1)).ratio <= 1 + 1e-12


def test_holder_rejects_exponent_mismatch():
    with pytest.raises(ValueError, match="1/p"):
        holder_check([1.0], [1.0], 2, 2, 2)


def test_rearrange_examples():
    s = rearrange_desc(np.array([3, -4j, 0]))
    np.testing.assert_array_equal(s.values, [4, 3, 0])
    equal = rearrange_desc(np.full((2, 3), 1 + 1j))
    np.testing.assert_allclose(equal.values, np.full(6, np.sqrt(2)))
    # ties in (n, k) lexicographic order
    assert [tuple(x) for x in equal.order] == [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)]


def test_rearrange_is_permutation(rng):
    c = rand_complex(rng, 7, 5)
    s = rearrange_desc(c)
    np.testing.assert_array_equal(np.sort(s.values), np.sort(np.abs(c).ravel()))
    np.testing.assert_array_equal(np.abs(c[s.order[:, 0], s.order[:, 1]]), s.values)


def test_sorted_magnitudes_invariant():
    with pytest.raises(ValueError):
        SortedMagnitudes(np.array([1.0, 2.0]))


def test_sigma_tail_examples():
    assert sigma_tail(GEOMETRIC, 0) == pytest.approx(np.linalg.norm(GEOMETRIC))
    # geometric sum sqrt(sum_{m=2}^{20} 4^{-(m-1)})
    assert sigma_tail(GEOMETRIC, 1) == pytest.approx(0.5773502691885756, rel=1e-12)
    assert sigma_tail(GEOMETRIC, 20) == 0
    assert sigma_tail(GEOMETRIC, 50) == 0


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(0, 1e6)))
def test_sigma_profile_monotone(v):
    s = rearrange_desc(v)
    prof = sigma_profile(s)
    assert np.all(np.diff(prof) <= 1e-12 * max(prof[0], 1))
    assert prof[0] == pytest.approx(np.linalg.norm(v), rel=1e-12)
    for N in (0, len(v) // 2, len(v)):
        assert prof[N] == pytest.approx(sigma_tail(s, N), rel=1e-12, abs=1e-300)


def test_stechkin_single_term():
    rep = stechkin_ratio(np.array([1.0, 0, 0, 0]), 1)
    assert rep == pytest.approx((1.0, 1.0, 1.0))


@pytest.mark.parametrize("family", ["geometric", "power"])
@pytest.mark.parametrize("p", [0.5, 1.0, 1.5])
def test_stechkin_matches_loop_oracle(family, p):
    s = GEOMETRIC if family == "geometric" else POWER
    middle, lp = stechkin_direct(list(s), p)
    rep = stechkin_ratio(s, p)
    assert rep.middle == pytest.approx(middle, rel=1e-12)
    assert rep.lp == pytest.approx(lp, rel=1e-12)
    assert 0.1 <= rep.ratio <= 10


def test_stechkin_geometric_p1_value():
    # frozen from the loop oracle: middle 1.86167, lp 2.0 (up to 2^-19)
    rep = stechkin_ratio(GEOMETRIC, 1)
    assert rep.middle == pytest.approx(1.8616693203479162, rel=1e-12)
    assert rep.ratio == pytest.approx(0.9308355478879129, rel=1e-12)


@pytest.mark.parametrize("p", [0, 2, 2.5, -1])
def test_stechkin_rejects_p(p):
    with pytest.raises(ValueError):
        stechkin_ratio(GEOMETRIC, p)


def test_lp_norm_inf():
    assert lp_norm([1, -3, 2], np.inf) == 3
