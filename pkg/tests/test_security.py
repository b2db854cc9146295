import csv
import io
import math

import pytest
from hypothesis import given, settings, strategies as st

from pairsec import security
from pairsec.cost_model import GridConfig, ModelParams
from pairsec.norm_mc import FAST_SAMPLES
from pairsec.security import (
    SweepPoint,
    curve_side_bits,
    derive_seed,
    min_p_for_level,
    profile,
    sweep_family,
)

COARSE = GridConfig(samples=512, final_method="float", log2A_step=1.0, log2B_step=1.0)


def test_curve_side_formula():
    assert curve_side_bits(2**256) == pytest.approx(127.83, abs=0.005)
    assert curve_side_bits(2**255) == pytest.approx(127.33, abs=0.005)
    assert curve_side_bits(3) == pytest.approx(0.5 * math.log2(3 * math.pi / 4))
    assert curve_side_bits(2**256, constant=1.0) == pytest.approx(128.0)
    with pytest.raises(ValueError):
        curve_side_bits(2)


@given(st.integers(3, 2**4000))
@settings(max_examples=200)
def test_curve_side_matches_direct(r):
    direct = 0.5 * (math.log2(r) + math.log2(math.pi / 4))  # math.log2 takes big ints
    assert curve_side_bits(r) == pytest.approx(direct, abs=1e-9)


def test_derive_seed():
    assert derive_seed(0, 300) == 300
    assert derive_seed(1, 300) != derive_seed(1, 302)
    assert 0 <= derive_seed(2**64 - 1, 4096) < 2**64


def test_profile_bn256(registry):
    prof = profile(registry.curve("BN256"), ModelParams(), 0, GridConfig(samples=FAST_SAMPLES, final_method="float"))
    assert prof.combined_bits == min(prof.curve_side_bits, prof.field_side_bits)
    assert prof.field_side_bits == pytest.approx(99.92, abs=0.5)
    assert prof.curve_side_bits == pytest.approx(curve_side_bits(registry.curve("BN256").r))
    d = prof.to_dict()
    assert d["curve"] == "BN256" and d["p_bits"] == 256 and d["model"] == "BD"
    assert d["field"]["A"] == prof.field_result.best.A


def test_sweep_bn_curve_above_field():
    res = sweep_family("BN", [256, 320, 384], ModelParams(), 0, COARSE)
    ok = [p for p in res.points if p.status == "ok"]
    assert len(ok) == 3
    assert all(p.curve_bits > p.field_bits for p in ok)
    assert res.crossover_p_bits is None
    rows = list(csv.reader(io.StringIO(res.to_csv())))
    assert rows[0] == ["p_bits", "curve_bits", "field_bits"]
    p_sizes = [int(r[0]) for r in rows[1:]]
    assert p_sizes == sorted(p_sizes) and len(p_sizes) == 3
    assert [p["target_bits"] for p in res.to_dict()["points"]] == [256, 320, 384]
    with pytest.raises(ValueError):
        sweep_family("BN", [])


def _fake_family(monkeypatch, field_of, curve_of=lambda t: t / 2, gaps=()):
    """Replace the per-size evaluation by closed forms so the search logic runs fast."""
    calls = []

    def fake(family, t, params, seed, grid, registry):
        calls.append(t)
        if t in gaps:
            return SweepPoint(t, None, None, None, "no-seed")
        f = field_of(t)
        if f is None:
            return SweepPoint(t, t, curve_of(t), None, "infeasible")
        return SweepPoint(t, t, curve_of(t), f)

    monkeypatch.setattr(security, "_point", fake)
    return calls


def test_min_p_bisection(monkeypatch):
    _fake_family(monkeypatch, lambda t: 40 + t / 8)
    # 40 + t/8 >= 100 first at t = 480
    assert min_p_for_level("BN", 100) == 480
    assert min_p_for_level("BN", 100, lo_bits=600) == 600


def test_min_p_steps_over_missing_seeds(monkeypatch):
    _fake_family(monkeypatch, lambda t: 40 + t / 8, gaps=set(range(400, 486)))
    assert min_p_for_level("BN", 100) == 486


def test_min_p_absent_when_infeasible_or_too_large(monkeypatch):
    _fake_family(monkeypatch, lambda t: None if t > 700 else 40 + t / 20)
    assert min_p_for_level("BN", 100) is None
    _fake_family(monkeypatch, lambda t: 40 + t / 100)
    assert min_p_for_level("BN", 100, hi_bits=2000) is None
    with pytest.raises(ValueError):
        min_p_for_level("BN", 50)


@given(st.floats(0.05, 0.5), st.floats(90, 200), st.floats(90, 200))
@settings(max_examples=60, deadline=None)
def test_min_p_monotone_in_level(slope, l1, l2):
    mp = pytest.MonkeyPatch()
    try:
        _fake_family(mp, lambda t: 30 + slope * t, curve_of=lambda t: t)
        a = min_p_for_level("BN", min(l1, l2))
        b = min_p_for_level("BN", max(l1, l2))
    finally:
        mp.undo()
    assert a is not None and b is not None and a <= b
    assert 30 + slope * b >= max(l1, l2)
    if b > 160:
        assert 30 + slope * (b - 2) < max(l1, l2)
