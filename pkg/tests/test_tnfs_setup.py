import pytest
import sympy as sp

from pairsec.errors import SetupValidationError, UnknownCurveError
from pairsec.families import Registry
from pairsec.intpoly import BiPoly, UniPoly, compose_bi, is_irreducible_mod_p, resultant_x
from pairsec.tnfs_setup import build_setup, select_h

BN_P = UniPoly((1, 6, 24, 36, 36))
_x = sp.symbols("x")
BLS24_3P = UniPoly(
    reversed(sp.Poly((_x - 1) ** 2 * (_x**8 - _x**4 + 1) + 3 * _x, _x).all_coeffs())
)
KSS18_21P = UniPoly((2401, 1763, 343, 259, 188, 37, 7, 5, 1))


def x_plus(t_poly: UniPoly, kappa: int, shift: int = 0) -> BiPoly:
    return BiPoly.from_dict({(kappa, 0): 1}) + BiPoly.from_x_coeffs([t_poly]) - shift


def test_bn256_recipe(registry):
    s = build_setup(registry.curve("BN256"))
    assert (s.eta, s.kappa, s.w, s.aut) == (6, 2, 1, 2)
    assert s.h == UniPoly((-1, -1, 0, -1, 0, 0, 1))
    inner = x_plus(UniPoly((0, 1)), 2)
    assert s.f1 == compose_bi(BN_P, inner)
    assert s.f2 == inner - registry.curve("BN256").u


def test_bls24_479_recipe(registry):
    s = build_setup(registry.curve("BLS24-479"))
    assert (s.eta, s.kappa, s.w, s.aut, s.multiplier) == (24, 1, 1, 1, 3)
    assert s.h == UniPoly((-1, -1, 0, -1, 1) + (0,) * 19 + (1,))
    assert s.f1 == BiPoly.from_x_coeffs(list(BLS24_3P.coeffs))
    assert s.f2 == BiPoly.from_dict({(1, 0): 1, (0, 0): -registry.curve("BLS24-479").u})


def test_kss18_508_recipe_with_shift(registry):
    s = build_setup(registry.curve("KSS18-508"))
    assert (s.eta, s.kappa, s.multiplier) == (18, 1, 21)
    assert s.h == UniPoly((-1, -1, -1, 0, -1) + (0,) * 13 + (1,))
    assert s.f1 == compose_bi(KSS18_21P, x_plus(UniPoly(), 1, 2))
    u = registry.curve("KSS18-508").u
    assert s.f2 == BiPoly.from_dict({(1, 0): 1, (0, 0): -u - 2})


@pytest.mark.parametrize(
    "name",
    ["BN256", "BN446", "BLS12-381", "BLS12-462", "BLS24-479", "KSS18-508", "KSS18-676"],
)
def test_shared_root_mod_p(registry, name):
    inst = registry.curve(name)
    s = build_setup(inst)
    res = resultant_x(s.f1, s.f2)
    assert all(c % inst.p == 0 for c in res.coeffs)


@pytest.mark.parametrize("name", ["BN256", "BLS12-381", "BLS24-559", "KSS18-676"])
def test_coefficient_bounds(registry, name):
    inst = registry.curve(name)
    s = build_setup(inst)
    spec = registry.family(inst.family)
    assert max(abs(c) for _, c in s.f2.terms) <= abs(inst.u) + 1
    # f1 = P(x^kappa + W(t) - shift): each coefficient is at most sum |c_i| (1 + |W|_1 + shift)^i
    w1 = sum(abs(c) for c in s.f2.x_coeffs()[0].coeffs[1:])
    shift = 2 if inst.family == "KSS18" else 0
    bound = sum(abs(c) * (1 + w1 + shift) ** i for i, c in enumerate(spec.p_num.coeffs))
    assert s.f1.max_abs_coeff() <= bound
    if s.kappa == 1 and shift == 0:
        assert s.f1.max_abs_coeff() == max(abs(c) for c in spec.p_num.coeffs)


def test_h_reducibility_reported(registry):
    # recipe h reducible mod p for these curves; the recipe policy keeps it
    for name, want in [("BN256", False), ("BN446", True), ("BLS24-559", True), ("KSS18-508", False)]:
        s = build_setup(registry.curve(name))
        assert s.h_irreducible is want
        assert is_irreducible_mod_p(s.h, registry.curve(name).p) is want


def test_h_policies(registry):
    inst = registry.curve("BN256")
    with pytest.raises(SetupValidationError):
        build_setup(inst, h_policy="strict")
    s = build_setup(inst, h_policy="fallback")
    assert s.h_source == "select_h" and (s.w, s.aut) == (1, 1)
    assert is_irreducible_mod_p(s.h, inst.p)
    with pytest.raises(ValueError):
        build_setup(inst, h_policy="nope")


def test_select_h():
    assert select_h(2, 7) == UniPoly((1, 0, 1))
    p = 0xB640000002A3A6F1D603AB4FF58EC74521F2934B1A7AEEDBE56F9B27E351457D
    h = select_h(6, p)
    assert h.degree == 6 and h.lc == 1
    assert set(h.coeffs) <= {-1, 0, 1}
    assert is_irreducible_mod_p(h, p)
    assert h != UniPoly((-1, -1, 0, -1, 0, 0, 1))  # reducible for this p
    with pytest.raises(ValueError):
        select_h(1, 7)


def test_kss16_extrapolated(registry):
    from pairsec.families import find_seed, instantiate

    spec = registry.family("KSS16")
    inst = instantiate(spec, find_seed(spec, 330))
    s = build_setup(inst)
    assert "extrapolated recipe" in s.notes
    assert (s.eta, s.kappa, s.w, s.aut, s.multiplier) == (16, 1, 1, 1, 980)
    assert s.h_source == "select_h"


def test_missing_recipe(registry):
    reg = Registry(dict(registry.families), dict(registry.seeds), {})
    with pytest.raises(UnknownCurveError):
        build_setup(registry.curve("BN256"), reg)


def test_to_dict_roundtrip_fields(registry):
    d = build_setup(registry.curve("BN256")).to_dict()
    assert d["eta"] == 6 and d["h"] == [-1, -1, 0, -1, 0, 0, 1]
    assert d["p_bits"] == 256
