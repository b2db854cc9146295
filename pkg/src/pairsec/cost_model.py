"""Relation-collection and linear-algebra cost of SexTNFS, and the (A, B) search.

Everything is carried in log2 space.  ``ln`` in the factor base and in the
sieve cost is the natural logarithm.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .dickman import log2_rho
from .errors import InfeasibleCurveError
from .norm_mc import DEFAULT_SAMPLES, NormEstimate, estimate_norms
from .tnfs_setup import TnfsSetup

__all__ = [
    "ModelParams",
    "GridConfig",
    "CostPoint",
    "CostSearchResult",
    "evaluate_point",
    "best_B",
    "optimize",
    "AsymptoticVariant",
    "VARIANTS",
    "TABLE3",
    "variant",
    "asymptotic_bits",
]

MODELS = ("BD", "GS")
LINALG_FORMS = ("algorithm", "equation")
LOG2_B_LIMIT = 200.0


def _log2_add(x: float, y: float) -> float:
    hi, lo = max(x, y), min(x, y)
    if lo == -math.inf:
        return hi
    return hi + math.log2(1.0 + 2.0 ** (lo - hi))


@dataclass(frozen=True)
class ModelParams:
    """Cost constants.

    BD: c_filter = log2 B, c_sieve = 1, c_linalg = 128.
    GS: c_filter = 20, c_sieve = ln ln B, c_linalg = 200 * ceil(r_bits / 64).

    ``linalg_form="algorithm"`` uses c_linalg * B^2 / (aut^2 (ln B)^2 c_filter^2);
    ``"equation"`` uses (2B)^2 in place of B^2, i.e. four times more.
    """

    model: str = "BD"
    linalg_form: str = "algorithm"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.linalg_form not in LINALG_FORMS:
            raise ValueError(f"linalg_form must be one of {LINALG_FORMS}")

    def log2_c_sieve(self, log2_B: float) -> float:
        if self.model == "BD":
            return 0.0
        return math.log2(math.log(log2_B * math.log(2.0)))

    def log2_c_filter(self, log2_B: float) -> float:
        return math.log2(log2_B) if self.model == "BD" else math.log2(20.0)

    def log2_c_linalg(self, r_bits: int) -> float:
        if self.model == "BD":
            return 7.0
        if r_bits < 1:
            raise ValueError("the GS model needs the group order size r_bits")
        return math.log2(200 * math.ceil(r_bits / 64))


@dataclass(frozen=True)
class GridConfig:
    log2A_min: float = 1.0
    log2A_max: float | None = None  # None means 100 / eta
    log2A_step: float = 0.5
    log2B_min: float = 1.0
    log2B_max: float = 128.0
    log2B_step: float = 0.5
    refine_B_step: float = 0.1
    refine_A: bool = True
    samples: int = DEFAULT_SAMPLES
    search_method: str = "float"
    final_method: str = "exact"
    averaging: str = "geometric"


@dataclass(frozen=True)
class CostPoint:
    A: int
    log2_B: float
    log2_sieving_space: float
    log2_factor_base: float
    log2_relations: float
    log2_p1: float
    log2_p2: float
    log2_cost_sieve: float
    log2_cost_linalg: float
    log2_total: float
    feasible: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: (round(v, 4) if isinstance(v, float) else v) for k, v in d.items()}


@dataclass(frozen=True)
class CostSearchResult:
    best: CostPoint
    norm: NormEstimate
    security_bits_raw: float
    security_bits_rounded: int
    params: ModelParams
    grid: GridConfig
    seed: int
    evaluated_A: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "A": self.best.A,
            "log2_B": round(self.best.log2_B, 2),
            "log2_N1": round(self.norm.log2_N1, 2),
            "log2_N2": round(self.norm.log2_N2, 2),
            "security_bits_raw": round(self.security_bits_raw, 2),
            "security_bits_rounded": self.security_bits_rounded,
            "model": self.params.model,
            "linalg_form": self.params.linalg_form,
            "point": self.best.to_dict(),
            "norm": self.norm.to_dict(),
            "grid_A_evaluated": len(self.evaluated_A),
        }


def evaluate_point(
    setup: TnfsSetup, norm: NormEstimate, log2_B: float, params: ModelParams
) -> CostPoint:
    if not 1.0 <= log2_B <= LOG2_B_LIMIT:
        raise ValueError(f"log2_B must lie in [1, {LOG2_B_LIMIT}]")
    if norm.A < 1:
        raise ValueError("A must be at least 1")
    return _evaluate(
        setup.eta, setup.w, setup.aut, setup.r_bits,
        norm.A, norm.log2_N1, norm.log2_N2, log2_B, params,
    )


def _evaluate(eta, w, aut, r_bits, A, log2_N1, log2_N2, log2_B, params) -> CostPoint:
    ln_B = log2_B * math.log(2.0)
    log2_ln_B = math.log2(ln_B)
    log2_aut = math.log2(aut)
    space = 2 * eta * math.log2(2 * A + 1) - 1.0 - math.log2(w)
    p1 = log2_rho(max(log2_N1, 0.0) / log2_B)
    p2 = log2_rho(max(log2_N2, 0.0) / log2_B)
    fb = 1.0 + log2_B - log2_ln_B
    relations = space + p1 + p2
    sieve = params.log2_c_sieve(log2_B) + fb - log2_aut - p1 - p2
    b_term = 2.0 * log2_B + (2.0 if params.linalg_form == "equation" else 0.0)
    linalg = (
        params.log2_c_linalg(r_bits)
        + b_term
        - 2.0 * log2_aut
        - 2.0 * log2_ln_B
        - 2.0 * params.log2_c_filter(log2_B)
    )
    return CostPoint(
        A=A,
        log2_B=log2_B,
        log2_sieving_space=space,
        log2_factor_base=fb,
        log2_relations=relations,
        log2_p1=p1,
        log2_p2=p2,
        log2_cost_sieve=sieve,
        log2_cost_linalg=linalg,
        log2_total=_log2_add(sieve, linalg),
        feasible=relations >= fb,
    )


def _tenths(lo: float, hi: float, step: float) -> list[float]:
    """Grid lo, lo+step, ... <= hi, held on a 0.1 lattice to avoid drift."""
    lo10, hi10, st10 = round(lo * 10), round(hi * 10), max(1, round(step * 10))
    return [k / 10 for k in range(lo10, hi10 + 1, st10)]


def _better(a: CostPoint, b: CostPoint | None) -> bool:
    if b is None:
        return True
    ka = (round(a.log2_total, 9), a.A, a.log2_B)
    kb = (round(b.log2_total, 9), b.A, b.log2_B)
    return ka < kb


def best_B(
    setup: TnfsSetup, norm: NormEstimate, params: ModelParams, grid: GridConfig
) -> CostPoint | None:
    """Cheapest feasible log2 B for a fixed A: coarse scan, then a finer one."""
    best = None
    for lb in _tenths(grid.log2B_min, grid.log2B_max, grid.log2B_step):
        pt = evaluate_point(setup, norm, lb, params)
        if pt.feasible and _better(pt, best):
            best = pt
    if best is None or grid.refine_B_step >= grid.log2B_step:
        return best
    lo = max(grid.log2B_min, best.log2_B - grid.log2B_step)
    hi = min(grid.log2B_max, best.log2_B + grid.log2B_step)
    for lb in _tenths(lo, hi, grid.refine_B_step):
        pt = evaluate_point(setup, norm, lb, params)
        if pt.feasible and _better(pt, best):
            best = pt
    return best


def optimize(
    setup: TnfsSetup,
    params: ModelParams | None = None,
    grid: GridConfig | None = None,
    seed: int = 0,
) -> CostSearchResult:
    """Minimum-cost feasible (A, B) over the grid.

    Coarse pass over log2 A and log2 B, then an integer search for A between
    the coarse neighbours of the best point.  Norms are estimated once per A
    and shared across every B.  Ties go to the smaller A, then the smaller B.
    """
    params = params or ModelParams()
    grid = grid or GridConfig()
    a_max = grid.log2A_max if grid.log2A_max is not None else 100.0 / setup.eta
    if a_max < grid.log2A_min:
        raise ValueError("empty A range")

    results: dict[int, CostPoint | None] = {}

    def at(A: int, method: str | None = None) -> CostPoint | None:
        method = method or grid.search_method
        if method == grid.search_method and A in results:
            return results[A]
        norm = estimate_norms(
            setup, A, grid.samples, seed, method=method, averaging=grid.averaging
        )
        pt = best_B(setup, norm, params, grid)
        if method == grid.search_method:
            results[A] = pt
        return pt

    coarse = []
    x = grid.log2A_min
    while x <= a_max + 1e-9:
        A = max(1, round(2.0**x))
        if A not in coarse:
            coarse.append(A)
        x += grid.log2A_step
    best = None
    for A in coarse:
        pt = at(A)
        if pt is not None and _better(pt, best):
            best = pt
    if best is None:
        raise InfeasibleCurveError(
            f"{setup.curve or 'setup'}: no feasible (A, B) within the grid"
        )

    if grid.refine_A:
        i = coarse.index(best.A)
        lo = coarse[i - 1] + 1 if i > 0 else best.A
        hi = coarse[i + 1] - 1 if i + 1 < len(coarse) else best.A
        best = _integer_search(at, lo, hi, best)

    final_norm = estimate_norms(
        setup, best.A, grid.samples, seed, method=grid.final_method,
        averaging=grid.averaging,
    )
    if grid.final_method != grid.search_method:
        pt = best_B(setup, final_norm, params, grid)
        if pt is not None:
            best = pt
    return CostSearchResult(
        best=best,
        norm=final_norm,
        security_bits_raw=best.log2_total,
        security_bits_rounded=math.ceil(round(best.log2_total, 2)),
        params=params,
        grid=grid,
        seed=seed,
        evaluated_A=tuple(sorted(results)),
    )


def _integer_search(at, lo: int, hi: int, best: CostPoint) -> CostPoint:
    """Golden-section search on integers, finishing with a short linear scan."""

    def cost(A: int) -> float:
        pt = at(A)
        return math.inf if pt is None else pt.log2_total

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    while b - a > 6:
        c = b - round((b - a) * invphi)
        d = a + round((b - a) * invphi)
        if c == d:
            d += 1
        if cost(c) <= cost(d):
            b = d
        else:
            a = c
    for A in range(a, b + 1):
        pt = at(A)
        if pt is not None and _better(pt, best):
            best = pt
    return best


# --- asymptotic complexity -------------------------------------------------


@dataclass(frozen=True)
class AsymptoticVariant:
    name: str
    c: float
    epsilon: float | None = None
    printed_c: float | None = None  # decimal approximation as usually quoted


def _snfs_jp_c(tau: float) -> float:
    return ((64.0 / 9.0) * (tau + 1.0) / tau) ** (1.0 / 3.0)


_S6 = math.sqrt(6.0)
VARIANTS: dict[str, AsymptoticVariant] = {
    "NFS-Conj": AsymptoticVariant("NFS-Conj", (96.0 / 9.0) ** (1 / 3), None, 2.201),
    "MNFS-A": AsymptoticVariant(
        "MNFS-A", (8.0 * (9.0 + 4.0 * _S6) / 15.0) ** (1 / 3), None, 2.156
    ),
    "exTNFS-D": AsymptoticVariant("exTNFS-D", (48.0 / 9.0) ** (1 / 3), None, 1.747),
    "MexTNFS-D": AsymptoticVariant(
        "MexTNFS-D",
        (3.0 + math.sqrt(3.0 * (11.0 + 4.0 * _S6))) / (18.0 * (7.0 + 3.0 * _S6)) ** (1 / 3),
        None,
        1.710,
    ),
    "SexTNFS": AsymptoticVariant("SexTNFS", (32.0 / 9.0) ** (1 / 3), None, 1.526),
}

# Fitted hidden constants: cost = 2^eps * L_Q(1/3, c).
TABLE3: dict[str, AsymptoticVariant] = {
    "NFS-Fp": AsymptoticVariant("NFS-Fp", 1.932, -10.17),
    "NFS-composite-n": AsymptoticVariant("NFS-composite-n", 1.747, -7.0),
    "MNFS-composite-n": AsymptoticVariant("MNFS-composite-n", 1.710, -7.0),
    "SNFS-Fp": AsymptoticVariant("SNFS-Fp", 1.526, -4.5),
}


def variant(name: str, tau: float | None = None) -> AsymptoticVariant:
    """Look up a variant by name; ``SNFS-JP`` needs tau (e.g. ``SNFS-JP(2)``)."""
    if name.startswith("SNFS-JP"):
        if tau is None and name.endswith(")") and "(" in name:
            tau = float(name[name.index("(") + 1 : -1])
        if tau is None or tau <= 0:
            raise ValueError("SNFS-JP needs a positive tau")
        return AsymptoticVariant(f"SNFS-JP({tau:g})", _snfs_jp_c(tau))
    if name in VARIANTS:
        return VARIANTS[name]
    if name in TABLE3:
        return TABLE3[name]
    raise ValueError(f"unknown variant {name!r}")


def asymptotic_bits(Q_bits: float, v: AsymptoticVariant | str) -> float:
    """log2(2^eps * exp(c (ln Q)^(1/3) (ln ln Q)^(2/3)))."""
    if isinstance(v, str):
        v = variant(v)
    if not isinstance(v, AsymptoticVariant):
        raise ValueError("unknown variant")
    if Q_bits < 64:
        raise ValueError("Q_bits must be at least 64")
    ln_q = Q_bits * math.log(2.0)
    nats = v.c * ln_q ** (1.0 / 3.0) * math.log(ln_q) ** (2.0 / 3.0)
    return (v.epsilon or 0.0) + nats / math.log(2.0)


def with_model(result: CostSearchResult, setup: TnfsSetup, params: ModelParams) -> CostPoint:
    """Re-cost a search result's optimum under other model constants."""
    return evaluate_point(setup, result.norm, result.best.log2_B, params)

