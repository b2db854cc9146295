"""Operation-count model for optimal ate pairings on BN, BLS and KSS curves.

Counts are in base-field multiplications and then scaled by the cost of one
base-field multiplication in 64-bit words.  The weights are the usual
tower-arithmetic figures; they are configuration, not measurements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .families import Registry, default_registry

__all__ = [
    "FamilyPairingSpec",
    "PairingModel",
    "DEFAULT_MODEL",
    "pairing_cost",
    "compare_at_level",
    "LevelRanking",
]


@dataclass(frozen=True)
class FamilyPairingSpec:
    k: int
    twist_degree: int
    loop: str  # "6u+2" or "u"
    hard_exps: int  # exponentiations by u in the hard part
    hard_mults: int  # further full multiplications in F_p^k
    seed_weight: int = 4  # signed Hamming weight assumed for the loop scalar


@dataclass(frozen=True)
class PairingModel:
    # F_p^k multiplication in F_p multiplications
    m_k: dict = field(default_factory=lambda: {12: 54, 16: 81, 18: 108, 24: 162})
    # F_p^e multiplication (e = k / twist degree) in F_p multiplications
    m_e: dict = field(default_factory=lambda: {1: 1, 2: 3, 3: 6, 4: 9})
    sqr_ratio: float = 2.0 / 3.0  # F_p^k squaring / multiplication
    sparse_ratio: float = 13.0 / 18.0  # line multiplication / full multiplication
    cyclo_ratio: float = 1.0 / 3.0  # cyclotomic squaring / multiplication
    twist_dbl: float = 7.0  # point doubling plus line, in F_p^e mults
    twist_add: float = 11.0  # mixed addition plus line, in F_p^e mults
    inversion: float = 60.0  # F_p inversion in F_p mults
    word_bits: int = 64
    word_exponent: float = 2.0  # schoolbook: words^2
    scale: float = 1.0  # uniform factor on every weight
    families: dict = field(
        default_factory=lambda: {
            "BN": FamilyPairingSpec(12, 6, "6u+2", 3, 12),
            "BLS12": FamilyPairingSpec(12, 6, "u", 5, 10),
            "KSS16": FamilyPairingSpec(16, 4, "u", 10, 30),
            "KSS18": FamilyPairingSpec(18, 6, "u", 7, 20),
            "BLS24": FamilyPairingSpec(24, 6, "u", 9, 15),
        }
    )

    def scaled(self, factor: float) -> "PairingModel":
        return replace(self, scale=self.scale * factor)

    def word_cost(self, p_bits: int) -> float:
        return math.ceil(p_bits / self.word_bits) ** self.word_exponent


DEFAULT_MODEL = PairingModel()


def _log2_u(family: str, p_bits: float, registry: Registry) -> float:
    spec = registry.family(family)
    c = math.log2(abs(spec.p_num.lc) / spec.p_den)
    return max((p_bits - 0.5 - c) / spec.p_num.degree, 1.0)


def base_mults(family: str, p_bits: int, model: PairingModel = DEFAULT_MODEL,
               registry: Registry | None = None) -> float:
    """F_p multiplications for one pairing (Miller loop plus final exponentiation)."""
    registry = registry or default_registry()
    try:
        fs = model.families[family]
    except KeyError:
        raise ValueError(f"no pairing model for family {family!r}") from None
    mk = model.m_k[fs.k]
    me = model.m_e[fs.k // fs.twist_degree]
    e = fs.k // fs.twist_degree
    log2_u = _log2_u(family, p_bits, registry)
    loop_bits = log2_u + (math.log2(6) if fs.loop == "6u+2" else 0.0)

    dbl = model.sqr_ratio * mk + model.sparse_ratio * mk + model.twist_dbl * me + 2 * e
    add = model.sparse_ratio * mk + model.twist_add * me + 2 * e
    miller = loop_bits * dbl + (fs.seed_weight - 1) * add
    if fs.loop == "6u+2":
        miller += 2 * add  # two Frobenius-twisted additions at the end

    easy = model.inversion + 3 * mk + 2 * mk
    exp_u = log2_u * model.cyclo_ratio * mk + (fs.seed_weight - 1) * mk
    hard = fs.hard_exps * exp_u + fs.hard_mults * mk
    return model.scale * (miller + easy + hard)


def pairing_cost(family: str, p_bits: int, model: PairingModel = DEFAULT_MODEL,
                 registry: Registry | None = None) -> float:
    """log2 of the 64-bit word multiplications for one pairing."""
    if p_bits < 160:
        raise ValueError("p_bits must be at least 160")
    return math.log2(base_mults(family, p_bits, model, registry) * model.word_cost(p_bits))


@dataclass(frozen=True)
class LevelRanking:
    level_bits: float
    ranked: tuple[tuple[str, int, float], ...]  # (family, p_bits, log2 cost)
    absent: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "level_bits": self.level_bits,
            "ranking": [
                {"family": f, "p_bits": p, "log2_cost": round(c, 3)} for f, p, c in self.ranked
            ],
            "absent": list(self.absent),
        }


def compare_at_level(
    level_bits: float,
    params=None,
    model: PairingModel = DEFAULT_MODEL,
    seed: int = 0,
    grid=None,
    registry: Registry | None = None,
    families: tuple[str, ...] | None = None,
    min_p: dict | None = None,
) -> LevelRanking:
    """Rank families by pairing cost at their smallest p reaching the level.

    ``min_p`` may supply precomputed per-family sizes (None meaning absent);
    otherwise they come from :func:`security.min_p_for_level`.
    """
    from .security import min_p_for_level

    registry = registry or default_registry()
    families = families or tuple(model.families)
    rows, absent = [], []
    for fam in families:
        if min_p is not None and fam in min_p:
            p = min_p[fam]
        else:
            p = min_p_for_level(fam, level_bits, params, seed, grid, registry)
        if p is None:
            absent.append(fam)
            continue
        rows.append((fam, p, pairing_cost(fam, max(p, 160), model, registry)))
    rows.sort(key=lambda r: (r[2], r[0]))
    return LevelRanking(level_bits, tuple(rows), tuple(absent))
