"""Pairing-friendly curve families, their standard seeds and seed search."""
from __future__ import annotations

import ast
import configparser
import math
import operator
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator

from .errors import (
    NonPrimeInstanceError,
    SeedCongruenceError,
    SeedNotFoundError,
    UnknownCurveError,
)
from .intpoly import UniPoly, has_small_factor, is_probable_prime, passes_quick_test

__all__ = [
    "FamilySpec",
    "CurveInstance",
    "Registry",
    "instantiate",
    "find_seed",
    "parse_int_expr",
    "load_registry",
    "default_registry",
    "derive_congruences",
]


@dataclass(frozen=True)
class FamilySpec:
    name: str
    k: int
    p_num: UniPoly
    p_den: int
    r_num: UniPoly
    r_den: int
    seed_congruences: tuple[tuple[int, tuple[int, ...]], ...] = ()
    trace_num: UniPoly | None = None
    trace_den: int = 1

    def __post_init__(self):
        if self.p_den < 1 or self.r_den < 1:
            raise ValueError("denominators must be positive")

    def seed_ok(self, u: int) -> bool:
        return all(u % m in res for m, res in self.seed_congruences)

    def p_of(self, u: int) -> int:
        q, rem = divmod(self.p_num(u), self.p_den)
        if rem:
            raise SeedCongruenceError(f"{self.name}: p({u}) is not integral")
        return q

    def r_of(self, u: int) -> int:
        q, rem = divmod(self.r_num(u), self.r_den)
        if rem:
            raise SeedCongruenceError(f"{self.name}: r({u}) is not integral")
        return q

    def trace_of(self, u: int) -> int | None:
        if self.trace_num is None:
            return None
        q, rem = divmod(self.trace_num(u), self.trace_den)
        return None if rem else q

    def approx_log2_p(self, log2_u: float) -> float:
        d = self.p_num.degree
        return d * log2_u + math.log2(abs(self.p_num.lc) / self.p_den)


@dataclass(frozen=True)
class CurveInstance:
    family: str
    u: int
    p: int
    r: int
    k: int
    name: str = ""

    @property
    def p_bits(self) -> int:
        return self.p.bit_length()

    @property
    def r_bits(self) -> int:
        return self.r.bit_length()

    @property
    def Q_bits(self) -> float:
        """log2 of the target field size p^k."""
        return self.k * math.log2(self.p)

    @property
    def label(self) -> str:
        return self.name or f"{self.family}-{self.p_bits}"


def derive_congruences(
    p_num: UniPoly, p_den: int, r_num: UniPoly, r_den: int
) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Residues u mod lcm(p_den, r_den) making both p(u) and r(u) integral.

    The values of p_num and r_num modulo their denominators depend only on
    u modulo the lcm, so this search is exhaustive.
    """
    m = math.lcm(p_den, r_den)
    if m == 1:
        return ()
    residues = tuple(
        u
        for u in range(m)
        if _eval_mod(p_num, u, p_den) == 0 and _eval_mod(r_num, u, r_den) == 0
    )
    return ((m, residues),)


def _eval_mod(f: UniPoly, u: int, m: int) -> int:
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * u + c) % m
    return acc


def instantiate(family: FamilySpec, u: int, name: str = "") -> CurveInstance:
    if not family.seed_ok(u):
        raise SeedCongruenceError(
            f"{family.name}: seed {u} violates the family's congruences"
        )
    p = family.p_of(u)
    r = family.r_of(u)
    if not is_probable_prime(p):
        raise NonPrimeInstanceError(f"{family.name}: p({u}) is composite")
    if not is_probable_prime(r):
        raise NonPrimeInstanceError(f"{family.name}: r({u}) is composite")
    return CurveInstance(family=family.name, u=u, p=p, r=r, k=family.k, name=name)


# --- seed search --------------------------------------------------------------


def minimal_congruence(modulus: int, residues) -> tuple[int, tuple[int, ...]]:
    """Smallest modulus M dividing ``modulus`` that expresses the same residue set."""
    res = set(residues)
    for m in range(1, modulus + 1):
        if modulus % m:
            continue
        small = {r % m for r in res}
        if len(small) * (modulus // m) == len(res):
            return m, tuple(sorted(small))
    return modulus, tuple(sorted(res))


@lru_cache(maxsize=32)
def _pair_table(m: int, top: int) -> dict[int, list[tuple[int, int, int, int]]]:
    """Signed pairs s1*2^e1 + s2*2^e2 (e2 < e1 <= top) grouped by value mod m."""
    table: dict[int, list[tuple[int, int, int, int]]] = {}
    for e1 in range(1, top + 1):
        for e2 in range(e1):
            for s1 in (1, -1):
                for s2 in (1, -1):
                    t = (s1 * pow(2, e1, m) + s2 * pow(2, e2, m)) % m
                    table.setdefault(t, []).append((e1, s1, e2, s2))
    return table


def _signed_binary(
    weight: int, lo: int, hi: int, top_max: int, congruence=None
) -> Iterator[int]:
    """Positive integers in [lo, hi] with exactly ``weight`` signed power-of-2 terms.

    Terms are chosen from the top down; at every level exponents are tried
    smallest first and branches whose reachable interval misses [lo, hi]
    are pruned.  With ``congruence = (m, residues)`` only values congruent to
    one of the residues mod m are produced; the last two terms are then
    looked up instead of enumerated.
    """
    table = None
    if congruence is not None and weight >= 3:
        m, residues = congruence
        table = _pair_table(m, top_max)

    def rec(partial: int, below: int, left: int) -> Iterator[int]:
        if left == 0:
            if lo <= partial <= hi:
                yield partial
            return
        if left == 2 and table is not None:
            for r in residues:
                for e1, s1, e2, s2 in table.get((r - partial) % m, ()):
                    if e1 >= below:
                        break
                    v = partial + s1 * (1 << e1) + s2 * (1 << e2)
                    if lo <= v <= hi:
                        yield v
            return
        for e in range(left - 1, below):
            step = 1 << e
            # remaining terms after this one are < 2^e in total magnitude
            reach = step + (step - 1 if left > 1 else 0)
            for sgn in (1, -1):
                if partial + sgn * step - (reach - step) > hi:
                    continue
                if partial + sgn * step + (reach - step) < lo:
                    continue
                yield from rec(partial + sgn * step, e, left - 1)

    for e0 in range(max(lo.bit_length() - 1, weight - 1), top_max + 1):
        top = 1 << e0
        if top - (top - 1) > hi or top + (top - 1) < lo:
            continue
        yield from rec(top, e0, weight - 1)


def find_seed(
    family: FamilySpec,
    target_p_bits: int,
    max_hamming_weight: int = 5,
    budget: int = 2_000_000,
    tolerance: int = 2,
) -> int:
    """Low signed-Hamming-weight seed with prime p, r and p_bits = target +- 2.

    Search order is deterministic: Hamming weight 3, 4, 5, ...; within a
    weight, |u| by top exponent, with positive u tried before negative u.
    Candidates failing the family's seed congruence are never generated, so
    they do not count against the budget.
    """
    if target_p_bits < 64:
        raise ValueError("target_p_bits must be at least 64")
    return _find_seed_cached(
        family, target_p_bits, max_hamming_weight, budget, tolerance
    )


@lru_cache(maxsize=512)
def _find_seed_cached(
    family: FamilySpec, target: int, max_w: int, budget: int, tol: int
) -> int:
    d = family.p_num.degree
    c = math.log2(abs(family.p_num.lc) / family.p_den)
    lo_bits, hi_bits = target - tol, target + tol
    # |u| range giving log2 p in [lo_bits - 1, hi_bits), with a little slack
    lo = max(2, math.floor(2 ** ((lo_bits - 1 - c) / d - 1e-3)))
    hi = math.ceil(2 ** ((hi_bits - c) / d + 1e-3))
    top_max = hi.bit_length()
    congruence = None
    for mod, res in family.seed_congruences:
        m, small = minimal_congruence(mod, res)
        if m > 1:
            # magnitudes: u or -u must satisfy it
            congruence = (m, tuple(sorted(set(small) | {(-r) % m for r in small})))
        break
    tried = 0
    for weight in range(3, max_w + 1):
        for mag in _signed_binary(weight, lo, hi, top_max, congruence):
            for u in (mag, -mag):
                tried += 1
                if tried > budget:
                    raise SeedNotFoundError(
                        f"{family.name}: no seed for {target}-bit p", budget
                    )
                if not family.seed_ok(u):
                    continue
                pn = family.p_num(u)
                if pn % family.p_den:
                    continue
                p = pn // family.p_den
                if not lo_bits <= p.bit_length() <= hi_bits:
                    continue
                rn = family.r_num(u)
                if rn % family.r_den:
                    continue
                r = rn // family.r_den
                if has_small_factor(r) or has_small_factor(p):
                    continue
                if not (passes_quick_test(r) and passes_quick_test(p)):
                    continue
                if is_probable_prime(r) and is_probable_prime(p):
                    return u
    raise SeedNotFoundError(f"{family.name}: no seed for {target}-bit p", budget)


# --- registry ---------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Pow: operator.pow,
}


def parse_int_expr(text: str) -> int:
    """Parse ``0x..``, decimal, or sums of signed powers like ``-(2^63 + 2^16)``."""
    tree = ast.parse(text.strip().replace("^", "**"), mode="eval")

    def ev(node) -> int:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow) and not 0 <= right <= 4096:
                raise ValueError(f"exponent out of range in {text!r}")
            return _BINOPS[type(node.op)](left, right)
        raise ValueError(f"unsupported integer expression: {text!r}")

    return ev(tree)


def parse_coeffs(text: str) -> UniPoly:
    text = text.strip()
    if not text:
        return UniPoly()
    return UniPoly(tuple(parse_int_expr(t) for t in text.split(",")))


@dataclass
class Registry:
    families: dict[str, FamilySpec] = field(default_factory=dict)
    seeds: dict[str, tuple[str, int]] = field(default_factory=dict)
    recipes: dict[str, dict[str, str]] = field(default_factory=dict)

    def family(self, name: str) -> FamilySpec:
        try:
            return self.families[name]
        except KeyError:
            raise UnknownCurveError(f"unknown family {name!r}") from None

    def curve_names(self) -> list[str]:
        return list(self.seeds)

    def curve(self, name: str) -> CurveInstance:
        try:
            fam, u = self.seeds[name]
        except KeyError:
            raise UnknownCurveError(f"unknown curve {name!r}") from None
        return _instantiate_cached(self.families[fam], u, name)

    def merge(self, other: "Registry") -> "Registry":
        return Registry(
            {**self.families, **other.families},
            {**self.seeds, **other.seeds},
            {**self.recipes, **other.recipes},
        )


@lru_cache(maxsize=256)
def _instantiate_cached(family: FamilySpec, u: int, name: str) -> CurveInstance:
    return instantiate(family, u, name)


def _parse_registry(cp: configparser.ConfigParser) -> Registry:
    reg = Registry()
    for section in cp.sections():
        kind, _, name = section.partition(":")
        sec = cp[section]
        if kind == "family":
            p_num, r_num = parse_coeffs(sec["p"]), parse_coeffs(sec["r"])
            p_den, r_den = int(sec.get("p_den", "1")), int(sec.get("r_den", "1"))
            if "seed_modulus" in sec:
                cong = (
                    (
                        int(sec["seed_modulus"]),
                        tuple(int(v) for v in sec["seed_residues"].split(",")),
                    ),
                )
            else:
                cong = derive_congruences(p_num, p_den, r_num, r_den)
            trace = parse_coeffs(sec["trace"]) if sec.get("trace") else None
            reg.families[name] = FamilySpec(
                name=name,
                k=int(sec["k"]),
                p_num=p_num,
                p_den=p_den,
                r_num=r_num,
                r_den=r_den,
                seed_congruences=cong,
                trace_num=trace,
                trace_den=int(sec.get("trace_den", "1")),
            )
        elif kind == "seeds":
            for curve, expr in sec.items():
                reg.seeds[curve] = (name, parse_int_expr(expr))
        elif kind == "recipe":
            reg.recipes[name] = dict(sec)
    return reg


def _make_parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep curve names as written
    return cp


def load_registry(path: str | Path) -> Registry:
    cp = _make_parser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    return _parse_registry(cp)


@lru_cache(maxsize=1)
def default_registry() -> Registry:
    cp = _make_parser()
    text = resources.files("pairsec").joinpath("data/families.ini").read_text("utf-8")
    cp.read_string(text)
    return _parse_registry(cp)
