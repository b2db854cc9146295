"""Curve-side and field-side security, family sweeps and per-level minimum p."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .cost_model import CostSearchResult, GridConfig, ModelParams, optimize
from .errors import InfeasibleCurveError, PairsecError, SeedNotFoundError
from .families import CurveInstance, Registry, default_registry, find_seed, instantiate
from .tnfs_setup import build_setup

__all__ = [
    "SecurityProfile",
    "SweepPoint",
    "SweepResult",
    "curve_side_bits",
    "profile",
    "sweep_family",
    "min_p_for_level",
    "derive_seed",
    "P_BITS_LIMIT",
]

P_BITS_LIMIT = 4096
RHO_CONSTANT = math.pi / 4  # expected rho steps: sqrt(RHO_CONSTANT * r)


def curve_side_bits(r: int, constant: float = RHO_CONSTANT) -> float:
    """log2 of sqrt(constant * r), the expected Pollard rho work."""
    if r < 3:
        raise ValueError("r must be at least 3")
    return 0.5 * (_log2_big(r) + math.log2(constant))


def _log2_big(n: int) -> float:
    shift = max(n.bit_length() - 64, 0)
    return math.log2(n >> shift) + shift


def derive_seed(master: int, p_bits: int) -> int:
    """Per-point Monte-Carlo seed derived from the master seed and p size."""
    return (master * 1_000_003 + p_bits) & ((1 << 64) - 1)


@dataclass(frozen=True)
class SecurityProfile:
    instance: CurveInstance
    curve_side_bits: float
    field_side_bits: float
    combined_bits: float
    field_result: CostSearchResult
    model: str = "BD"

    def to_dict(self) -> dict:
        inst = self.instance
        return {
            "curve": inst.label,
            "family": inst.family,
            "u": str(inst.u),
            "p_bits": inst.p_bits,
            "r_bits": inst.r_bits,
            "k": inst.k,
            "curve_side_bits": round(self.curve_side_bits, 2),
            "field_side_bits": round(self.field_side_bits, 2),
            "combined_bits": round(self.combined_bits, 2),
            "model": self.model,
            "field": self.field_result.to_dict(),
        }


def profile(
    instance: CurveInstance,
    params: ModelParams | None = None,
    seed: int = 0,
    grid: GridConfig | None = None,
    registry: Registry | None = None,
    h_policy: str = "recipe",
) -> SecurityProfile:
    params = params or ModelParams()
    setup = build_setup(instance, registry, h_policy)
    result = optimize(setup, params, grid, seed)
    curve = curve_side_bits(instance.r)
    return SecurityProfile(
        instance=instance,
        curve_side_bits=curve,
        field_side_bits=result.security_bits_raw,
        combined_bits=min(curve, result.security_bits_raw),
        field_result=result,
        model=params.model,
    )


@dataclass(frozen=True)
class SweepPoint:
    target_bits: int
    p_bits: int | None
    curve_bits: float | None
    field_bits: float | None
    status: str = "ok"  # ok | no-seed | infeasible | error


@dataclass(frozen=True)
class SweepResult:
    family: str
    points: tuple[SweepPoint, ...]
    crossover_p_bits: int | None = None
    crossover_security_bits: float | None = None
    skipped: tuple[int, ...] = field(default=())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p_bits", "curve_bits", "field_bits"])
        for pt in self.points:
            if pt.status == "ok":
                w.writerow([pt.p_bits, f"{pt.curve_bits:.2f}", f"{pt.field_bits:.2f}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "crossover_p_bits": self.crossover_p_bits,
            "crossover_security_bits": (
                None
                if self.crossover_security_bits is None
                else round(self.crossover_security_bits, 2)
            ),
            "points": [
                {
                    "target_bits": p.target_bits,
                    "p_bits": p.p_bits,
                    "curve_bits": None if p.curve_bits is None else round(p.curve_bits, 2),
                    "field_bits": None if p.field_bits is None else round(p.field_bits, 2),
                    "status": p.status,
                }
                for p in self.points
            ],
            "skipped": list(self.skipped),
        }


def _point(
    family: str,
    target: int,
    params: ModelParams,
    seed: int,
    grid: GridConfig | None,
    registry: Registry,
) -> SweepPoint:
    spec = registry.family(family)
    try:
        u = find_seed(spec, target)
    except SeedNotFoundError:
        return SweepPoint(target, None, None, None, "no-seed")
    inst = instantiate(spec, u, f"{family}-{target}")
    curve = curve_side_bits(inst.r)
    try:
        prof = profile(inst, params, derive_seed(seed, target), grid, registry)
    except InfeasibleCurveError:
        return SweepPoint(target, inst.p_bits, curve, None, "infeasible")
    except PairsecError:
        return SweepPoint(target, inst.p_bits, curve, None, "error")
    return SweepPoint(target, inst.p_bits, curve, prof.field_side_bits)


def _crossing(a: SweepPoint, b: SweepPoint) -> tuple[float, float] | None:
    da = a.curve_bits - a.field_bits
    db = b.curve_bits - b.field_bits
    if da == 0:
        return float(a.p_bits), a.field_bits
    if (da > 0) == (db > 0) or db == 0 and da > 0:
        return None if db != 0 else (float(b.p_bits), b.field_bits)
    t = da / (da - db)
    x = a.p_bits + t * (b.p_bits - a.p_bits)
    y = a.field_bits + t * (b.field_bits - a.field_bits)
    return x, y


def sweep_family(
    family: str,
    p_bits_list,
    params: ModelParams | None = None,
    seed: int = 0,
    grid: GridConfig | None = None,
    registry: Registry | None = None,
    refine_step: int = 5,
) -> SweepResult:
    """Curve vs field security over p sizes, with the first crossover located.

    After the requested points, the interval containing the first sign change
    of (curve - field) is resampled every ``refine_step`` bits and the
    crossover is read off by linear interpolation.
    """
    targets = sorted(set(int(b) for b in p_bits_list))
    if not targets:
        raise ValueError("p_bits_list must be nonempty")
    params = params or ModelParams()
    registry = registry or default_registry()
    pts = {t: _point(family, t, params, seed, grid, registry) for t in targets}

    def ok_sorted():
        return [pts[t] for t in sorted(pts) if pts[t].status == "ok"]

    cross = None
    good = ok_sorted()
    for a, b in zip(good, good[1:]):
        if _crossing(a, b) is not None:
            if refine_step and b.target_bits - a.target_bits > refine_step:
                for t in range(a.target_bits + refine_step, b.target_bits, refine_step):
                    if t not in pts:
                        pts[t] = _point(family, t, params, seed, grid, registry)
            break
    good = ok_sorted()
    for a, b in zip(good, good[1:]):
        c = _crossing(a, b)
        if c is not None:
            cross = c
            break
    points = tuple(pts[t] for t in sorted(pts))
    return SweepResult(
        family=family,
        points=points,
        crossover_p_bits=None if cross is None else round(cross[0]),
        crossover_security_bits=None if cross is None else cross[1],
        skipped=tuple(p.target_bits for p in points if p.status != "ok"),
    )


def _reaches(pt: SweepPoint, level_bits: float) -> bool:
    return pt.status == "ok" and min(pt.curve_bits, pt.field_bits) >= level_bits


def min_p_for_level(
    family: str,
    level_bits: float,
    params: ModelParams | None = None,
    seed: int = 0,
    grid: GridConfig | None = None,
    registry: Registry | None = None,
    lo_bits: int = 160,
    hi_bits: int = P_BITS_LIMIT,
    coarse_step: int = 128,
) -> int | None:
    """Smallest p size (2-bit granularity) whose combined security reaches the level.

    A coarse scan brackets the first size reaching the level, then bisection
    narrows it to 2 bits.  Sizes with no seed are stepped over.  Returns None
    when the level is not reached before the cost search turns infeasible or
    ``hi_bits`` is passed.  The result is the bit length of the p found.
    """
    if not 80 <= level_bits <= 320:
        raise ValueError("level_bits must lie in [80, 320]")
    params = params or ModelParams()
    registry = registry or default_registry()
    cache: dict[int, SweepPoint] = {}

    def at(t: int) -> SweepPoint:
        if t not in cache:
            cache[t] = _point(family, t, params, seed, grid, registry)
        return cache[t]

    prev, t, found = lo_bits, lo_bits, None
    while True:
        pt = at(t)
        if _reaches(pt, level_bits):
            found = t
            break
        if pt.status == "infeasible":
            # the grid cannot cost larger sizes either
            return None
        if t >= hi_bits:
            return None
        if pt.status != "no-seed":
            prev = t
        t = min(t + coarse_step, hi_bits)
    if found == lo_bits:
        return at(found).p_bits
    lo, hi = prev, found  # lo fails, hi reaches
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mid -= mid % 2
        if mid <= lo:
            mid = lo + 1
        pt = at(mid)
        if pt.status == "no-seed":
            # nearest size in (lo, hi) that has a seed, else give up narrowing
            alt = next(
                (c for d in range(1, hi - lo) for c in (mid - d, mid + d)
                 if lo < c < hi and at(c).status != "no-seed"),
                None,
            )
            if alt is None:
                break
            mid, pt = alt, at(alt)
        if _reaches(pt, level_bits):
            hi = mid
        else:
            lo = mid
    return at(hi).p_bits
