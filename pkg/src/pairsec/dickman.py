"""Dickman's rho function in log2 space.

rho solves u*rho'(u) = -rho(u - 1) with rho = 1 on [0, 1].  On each unit
interval [k, k+1] we keep a Taylor expansion about the midpoint k + 1/2.
The nearest singularity of that piece sits at u = k (and further left), so
the expansion converges with ratio 1/3 on the whole interval.  The
coefficients are generated once in high precision with mpmath and stored
normalised by the value at the midpoint, which keeps every piece in float
range no matter how small rho gets.

Forward integration never damps an absolute error relative to rho, so the
high-precision pass carries enough terms and digits to resolve rho(u_max)
itself; only the first few dozen coefficients are kept for evaluation.
"""
from __future__ import annotations

import math
from functools import lru_cache

import mpmath

__all__ = ["log2_rho", "rho", "rho_derivative", "RhoTable", "get_table"]

U_MAX = 100
EVAL_TERMS = 64
_LOG2E = 1.0 / math.log(2.0)


class RhoTable:
    """Piecewise expansions of rho on [1, u_max]."""

    def __init__(self, u_max: int = U_MAX, eval_terms: int = EVAL_TERMS):
        self.u_max = u_max
        self.eval_terms = eval_terms
        # digits needed to see rho(u_max) above the truncation floor
        digits = int(-_crude_log2(u_max) / 3.32) + 30
        terms = int(digits / math.log10(3.0)) + 16
        dps = digits + 20
        # pieces[k-1] -> (log2 of rho at k + 1/2, normalised coefficients)
        self.pieces: list[tuple[float, tuple[float, ...]]] = []
        with mpmath.workdps(dps):
            half = mpmath.mpf(1) / 2
            # k = 1: rho(u) = 1 - ln(u), expanded about 3/2.
            m = mpmath.mpf(3) / 2
            c = [1 - mpmath.log(m)]
            for i in range(1, terms):
                c.append(-((-1) ** (i + 1)) / (i * m**i))
            self._store(c)
            prev = c
            for k in range(2, u_max):
                mid = k + half
                cur = [mpmath.mpf(0)] * terms
                for i in range(terms - 1):
                    cur[i + 1] = -(prev[i] + i * cur[i]) / (mid * (i + 1))
                # continuity at u = k: cur(-1/2) == prev(+1/2)
                left = mpmath.fsum(prev[i] * half**i for i in range(terms))
                tail = mpmath.fsum(cur[i] * (-half) ** i for i in range(1, terms))
                cur[0] = left - tail
                self._store(cur)
                prev = cur

    def _store(self, c) -> None:
        c0 = c[0]
        self.pieces.append(
            (
                float(mpmath.log(c0, 2)),
                tuple(float(ci / c0) for ci in c[: self.eval_terms]),
            )
        )

    def log2_rho(self, u: float) -> float:
        if u <= 1.0:
            return 0.0
        if u >= self.u_max:
            return _log2_rho_asymptotic(u, self)
        k = int(u)
        log_c0, coeffs = self.pieces[k - 1]
        z = u - k - 0.5
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * z + c
        return log_c0 + math.log2(acc)

    def derivative(self, u: float) -> float:
        """rho'(u) from the piece containing u (u in (1, u_max))."""
        if u <= 1.0:
            return 0.0
        k = int(u)
        log_c0, coeffs = self.pieces[k - 1]
        z = u - k - 0.5
        acc = 0.0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = acc * z + i * coeffs[i]
        return 2.0**log_c0 * acc


def _crude_log2(v: float) -> float:
    # leading terms of the de Bruijn expansion of log rho
    lv = math.log(v)
    llv = math.log(lv)
    return -v * (lv + llv - 1.0 + (llv - 1.0) / lv) * _LOG2E


def _log2_rho_asymptotic(u: float, table: RhoTable) -> float:
    # shifted to meet the table at u_max so the result stays continuous
    edge = table.u_max - 1e-9
    return _crude_log2(u) - _crude_log2(edge) + table.log2_rho(edge)


@lru_cache(maxsize=1)
def get_table() -> RhoTable:
    return RhoTable()


def log2_rho(u: float) -> float:
    """log2 of Dickman's rho; exactly 0 on [0, 1]."""
    if u < 0 or math.isnan(u):
        raise ValueError(f"rho is defined for u >= 0, got {u}")
    if u <= 1.0:
        return 0.0
    if u <= 2.0:
        return math.log2(1.0 - math.log(u))
    return get_table().log2_rho(u)


def rho(u: float) -> float:
    return 2.0 ** log2_rho(u)


def rho_derivative(u: float) -> float:
    if u < 0:
        raise ValueError(f"rho is defined for u >= 0, got {u}")
    if u <= 1.0:
        return 0.0
    if u <= 2.0:
        return -1.0 / u
    return get_table().derivative(u)
