import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from pairsec.intpoly import BiPoly, UniPoly
from pairsec.norm_mc import (
    _float_log2_norms,
    _log2_int,
    draw_block,
    draw_sample,
    estimate_norms,
    norm_bound_log2,
    norm_exact,
)
from pairsec.tnfs_setup import TnfsSetup, build_setup

X, T = sp.symbols("x t")


def toy_setup(f1: BiPoly, f2: BiPoly, h: UniPoly) -> TnfsSetup:
    return TnfsSetup(eta=h.degree, kappa=1, h=h, f1=f1, f2=f2, w=1, aut=1)


def sympy_norm(f: BiPoly, h: UniPoly, a, b) -> int:
    fx = sum(c * X**i * T**j for (i, j), c in f.terms)
    av = sum(c * T**i for i, c in enumerate(a))
    bv = sum(c * T**i for i, c in enumerate(b))
    hv = sum(c * T**i for i, c in enumerate(h.coeffs))
    inner = sp.resultant(av - X * bv, fx, X)
    return abs(int(sp.resultant(sp.expand(inner), hv, T)))


@pytest.fixture(scope="module")
def bn256(registry):
    return build_setup(registry.curve("BN256"))


def test_norm_exact_small_example():
    h = UniPoly((1, 0, 1))
    f = BiPoly.from_dict({(2, 0): 1, (0, 1): 1, (0, 0): -3})
    s = toy_setup(f, f, h)
    assert norm_exact(s, f, [1, 2], [3, -1]) == 1341
    assert sympy_norm(f, h, [1, 2], [3, -1]) == 1341


def test_constant_resultant_is_one(registry):
    s = build_setup(registry.curve("BLS24-479"))
    a = [1] + [0] * (s.eta - 1)
    b = [0] * s.eta
    assert norm_exact(s, s.f2, a, b) == 1


@given(
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
)
@settings(max_examples=40, deadline=None)
def test_norm_exact_matches_sympy(a, b):
    h = UniPoly((-1, -1, 0, 1))  # t^3 - t - 1
    f = BiPoly.from_dict({(3, 0): 1, (1, 1): 2, (0, 2): -1, (0, 0): 5})
    s = toy_setup(f, f, h)
    assert norm_exact(s, f, a, b) == sympy_norm(f, h, a, b)


def test_float_path_matches_exact_per_sample(bn256):
    a, b = draw_block(5, 0, 64, bn256.eta, 176)
    for f in (bn256.f1, bn256.f2):
        approx = _float_log2_norms(bn256, f, a, b)
        for i in range(len(a)):
            exact = norm_exact(bn256, f, a[i].tolist(), b[i].tolist())
            assert approx[i] == pytest.approx(_log2_int(exact), abs=1e-6)


def test_sampler_ranges_and_nonzero():
    a, b = draw_block(11, 0, 5000, 6, 4)
    assert a.shape == b.shape == (5000, 6)
    assert a[:, 0].min() >= 0 and a.max() <= 4 and a.min() >= -4
    assert b.max() <= 4 and b.min() >= -4
    assert a.any(axis=1).all() and b.any(axis=1).all()


def test_sampler_uniform():
    # joint chi-square over the nonzero vectors (the all-zero one is redrawn)
    a, b = draw_block(3, 0, 45000, 2, 4)
    jb = np.bincount((b[:, 0] + 4) * 9 + b[:, 1] + 4, minlength=81)
    assert jb[40] == 0
    cells = np.delete(jb, 40)
    exp = len(b) / 80
    assert ((cells - exp) ** 2 / exp).sum() < 111.14  # 1% critical value, 79 dof
    ja = np.bincount(a[:, 0] * 9 + a[:, 1] + 4, minlength=45)
    assert ja[4] == 0
    cells = np.delete(ja, 4)
    exp = len(a) / 44
    assert ((cells - exp) ** 2 / exp).sum() < 66.62  # 43 dof


@given(st.integers(0, 2**64 - 1), st.integers(0, 10**6), st.integers(1, 300))
@settings(max_examples=50, deadline=None)
def test_sample_depends_only_on_seed_and_index(seed, index, A):
    a, b = draw_sample(seed, index, 4, A)
    ba, bb = draw_block(seed, index - min(index, 7), index + 3, 4, A)
    k = min(index, 7)
    assert a == ba[k].tolist() and b == bb[k].tolist()


def test_power_of_two_range_has_no_rejection():
    a, _ = draw_block(1, 0, 1000, 3, (1 << 39) - 1)  # 2A + 1 = 2^40 - 1, not a power of two
    assert abs(a).max() <= (1 << 39) - 1
    with pytest.raises(ValueError):
        draw_block(1, 0, 10, 3, 1 << 40)


def test_estimate_deterministic_and_parallel_invariant(bn256):
    e1 = estimate_norms(bn256, 50, 3000, seed=9, method="float")
    e2 = estimate_norms(bn256, 50, 3000, seed=9, method="float", n_jobs=2)
    assert e1.log2_N1 == e2.log2_N1 and e1.log2_N2 == e2.log2_N2
    e3 = estimate_norms(bn256, 50, 3000, seed=10, method="float")
    assert e3.log2_N1 != e1.log2_N1


def test_exact_and_float_means_agree(bn256):
    ex = estimate_norms(bn256, 176, 512, seed=1, method="exact")
    fl = estimate_norms(bn256, 176, 512, seed=1, method="float")
    assert ex.log2_N1 == pytest.approx(fl.log2_N1, abs=1e-9)
    assert ex.log2_N2 == pytest.approx(fl.log2_N2, abs=1e-9)
    assert ex.log2_N1_arith == pytest.approx(fl.log2_N1_arith, abs=1e-9)


def test_bn256_reference_norms(bn256):
    e = estimate_norms(bn256, 176, 25600, seed=0, method="float")
    assert e.log2_N1 == pytest.approx(424.80, abs=2.0)
    assert e.log2_N2 == pytest.approx(466.51, abs=2.0)
    assert e.sample_count == 25600 and e.A == 176


def test_arithmetic_mean_dominates_geometric(bn256):
    e = estimate_norms(bn256, 30, 2000, seed=2, method="float", averaging="arithmetic")
    assert e.log2_N1 == e.log2_N1_arith
    g = estimate_norms(bn256, 30, 2000, seed=2, method="float")
    assert g.log2_N1 <= e.log2_N1 and g.log2_N2 <= e.log2_N2


def test_monotone_in_A(registry):
    s = build_setup(registry.curve("BLS12-381"))
    vals = [estimate_norms(s, A, 1000, seed=4, method="float").log2_N1 for A in (2, 4, 8, 16, 32, 64, 128)]
    assert all(b >= a - 0.5 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("name,A", [("BN256", 176), ("BLS24-479", 7), ("KSS18-508", 14)])
def test_mean_below_analytic_bound(registry, name, A):
    s = build_setup(registry.curve(name))
    e = estimate_norms(s, A, 2560, seed=0, method="float", averaging="arithmetic")
    assert e.log2_N1 <= norm_bound_log2(s, s.f1, A)
    assert e.log2_N2 <= norm_bound_log2(s, s.f2, A)


def test_errors(bn256):
    with pytest.raises(ValueError):
        estimate_norms(bn256, 0)
    with pytest.raises(ValueError):
        estimate_norms(bn256, 5, samples=0)
    with pytest.raises(ValueError):
        estimate_norms(bn256, 5, method="nope")
    zero = TnfsSetup(eta=2, kappa=1, h=UniPoly((1, 0, 1)), f1=BiPoly(), f2=bn256.f2, w=1, aut=1)
    with pytest.raises(ValueError):
        estimate_norms(zero, 5)


def test_to_dict(bn256):
    d = estimate_norms(bn256, 20, 100, seed=0, method="float").to_dict()
    assert d["sample_count"] == 100 and d["method"] == "float"
    assert math.isfinite(d["log2_N1"])
