"""SexTNFS polynomial data (h, f1, f2, w, A) for a curve instance."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    PolynomialNotFoundError,
    RecipeIncompatibilityError,
    SetupValidationError,
    UnknownCurveError,
)
from .families import CurveInstance, Registry, default_registry, parse_coeffs
from .intpoly import (
    BiPoly,
    UniPoly,
    _mod_gcd,
    _mod_strip,
    compose_bi,
    is_irreducible_mod_p,
    resultant_x,
)

__all__ = ["TnfsSetup", "Recipe", "build_setup", "select_h", "H_POLICIES"]

H_POLICIES = ("recipe", "strict", "fallback")


@dataclass(frozen=True)
class Recipe:
    family: str
    eta: int
    kappa: int
    h: UniPoly | None
    w_poly: UniPoly
    w: int
    aut: int
    extrapolated: bool = False
    x_shift: int = 0

    @classmethod
    def from_section(cls, family: str, sec: dict[str, str]) -> "Recipe":
        h = parse_coeffs(sec.get("h", ""))
        return cls(
            family=family,
            eta=int(sec["eta"]),
            kappa=int(sec["kappa"]),
            h=None if h.is_zero() else h,
            w_poly=parse_coeffs(sec.get("w_poly", "")),
            w=int(sec.get("w", "1")),
            aut=int(sec.get("aut", "1")),
            extrapolated=sec.get("extrapolated", "no").lower() in ("yes", "true", "1"),
            x_shift=int(sec.get("x_shift", "0")),
        )


@dataclass(frozen=True)
class TnfsSetup:
    eta: int
    kappa: int
    h: UniPoly
    f1: BiPoly
    f2: BiPoly
    w: int
    aut: int
    multiplier: int = 1
    curve: str = ""
    h_irreducible: bool = True
    h_source: str = "recipe"
    notes: tuple[str, ...] = field(default=())
    p_bits: int = 0
    r_bits: int = 0

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "eta": self.eta,
            "kappa": self.kappa,
            "h": list(self.h.coeffs),
            "f1": [[i, j, c] for (i, j), c in self.f1.terms],
            "f2": [[i, j, c] for (i, j), c in self.f2.terms],
            "w": self.w,
            "aut": self.aut,
            "multiplier": self.multiplier,
            "h_irreducible": self.h_irreducible,
            "h_source": self.h_source,
            "notes": list(self.notes),
            "p_bits": self.p_bits,
            "r_bits": self.r_bits,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _h_candidates(eta: int):
    """Monic degree-eta polynomials with coefficients in {-1, 0, 1}, fewest terms first."""
    for extra in range(1, eta + 1):
        for pos in itertools.combinations(range(eta), extra):
            if 0 not in pos:
                continue  # h(0) = 0 means t divides h
            for signs in itertools.product((-1, 1), repeat=extra):
                c = [0] * (eta + 1)
                c[eta] = 1
                for e, s in zip(pos, signs):
                    c[e] = s
                yield UniPoly(c)


def select_h(eta: int, p: int, budget: int = 20000) -> UniPoly:
    """First irreducible h mod p among sparse {-1,0,1} candidates.

    Candidates are tried by number of terms, then by the positions of the
    lower terms (lowest first), then by sign pattern with -1 before +1.
    """
    if eta < 2:
        raise ValueError("eta must be at least 2")
    for n, cand in enumerate(_h_candidates(eta)):
        if n >= budget:
            break
        if is_irreducible_mod_p(cand, p):
            return cand
    raise PolynomialNotFoundError(f"no irreducible h of degree {eta} within {budget} tries")


@lru_cache(maxsize=64)
def _recipe_polys(
    p_num: UniPoly, w_poly: UniPoly, kappa: int, shift: int = 0
) -> tuple[BiPoly, BiPoly]:
    # inner = x^kappa + W(t) - s; f1 = p_num(inner), f2 = inner - u (u added later)
    inner = (
        BiPoly.from_dict({(kappa, 0): 1}) + BiPoly.from_x_coeffs([w_poly]) - shift
    )
    return compose_bi(p_num, inner), inner


def _shared_root_ok(f1: BiPoly, f2: BiPoly, h: UniPoly, p: int) -> bool:
    """Res_x(f1, f2) vanishes modulo (p, gcd with h)."""
    res = resultant_x(f1, f2)
    red = _mod_strip(list(res.coeffs), p)
    if not red:
        return True
    hm = _mod_strip(list(h.coeffs), p)
    g = _mod_gcd(hm, red, p)
    return len(g) == len(hm)


def build_setup(
    instance: CurveInstance,
    registry: Registry | None = None,
    h_policy: str = "recipe",
) -> TnfsSetup:
    """Instantiate the family's SexTNFS recipe at the instance's seed.

    ``h_policy`` decides what happens when the recipe's h is reducible
    mod p: ``"recipe"`` keeps it and records the failed check,
    ``"strict"`` raises, ``"fallback"`` substitutes :func:`select_h`.
    """
    if h_policy not in H_POLICIES:
        raise ValueError(f"h_policy must be one of {H_POLICIES}")
    registry = registry or default_registry()
    try:
        sec = registry.recipes[instance.family]
    except KeyError:
        raise UnknownCurveError(f"no SexTNFS recipe for family {instance.family!r}") from None
    recipe = Recipe.from_section(instance.family, sec)
    family = registry.family(instance.family)
    if recipe.eta * recipe.kappa != instance.k:
        raise ValueError("eta * kappa must equal the embedding degree")
    return _build(instance, recipe, family.p_num, family.p_den, h_policy)


@lru_cache(maxsize=256)
def _build(instance, recipe: Recipe, p_num: UniPoly, p_den: int, h_policy: str) -> TnfsSetup:
    p = instance.p
    notes = []
    if recipe.extrapolated:
        notes.append("extrapolated recipe")
    h, source = recipe.h, "recipe"
    irreducible = True
    if h is None:
        h, source = select_h(recipe.eta, p), "select_h"
    elif not is_irreducible_mod_p(h, p):
        if h_policy == "strict":
            raise SetupValidationError(
                f"{instance.label}: h = {h} is reducible modulo p"
            )
        if h_policy == "fallback":
            h, source = select_h(recipe.eta, p), "select_h"
            notes.append("recipe h reducible mod p; replaced")
        else:
            irreducible = False
            notes.append("recipe h reducible mod p; kept as given")
    f1, inner = _recipe_polys(p_num, recipe.w_poly, recipe.kappa, recipe.x_shift)
    f2 = inner - instance.u
    if not _shared_root_ok(f1, f2, h, p):
        raise RecipeIncompatibilityError(
            f"{instance.label}: f1 and f2 share no root modulo p"
        )
    return TnfsSetup(
        eta=recipe.eta,
        kappa=recipe.kappa,
        h=h,
        f1=f1,
        f2=f2,
        # symmetry counts belong to the recipe h; a substitute gets 1, 1
        w=recipe.w if source == "recipe" else 1,
        aut=recipe.aut if source == "recipe" else 1,
        multiplier=p_den,
        curve=instance.label,
        h_irreducible=irreducible,
        h_source=source,
        notes=tuple(notes),
        p_bits=instance.p_bits,
        r_bits=instance.r_bits,
    )
