"""Exact integer polynomials in one and two variables, with resultants.

Univariate polynomials are stored as tuples of Python ints in ascending
order, so ``UniPoly((1, 0, 1))`` is ``1 + x^2``.  The zero polynomial is
the empty tuple.  Bivariate polynomials are sparse maps
``(deg_x, deg_t) -> coefficient``; in this package the second variable is
always the tower variable ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

import gmpy2

__all__ = [
    "UniPoly",
    "BiPoly",
    "resultant_uni",
    "resultant_prs",
    "resultant_x",
    "resultant_x_interp",
    "is_irreducible_mod_p",
    "eval_uni",
    "eval_bi",
    "is_probable_prime",
    "passes_quick_test",
    "has_small_factor",
]

MR_ROUNDS = 64
_SMALL_BOUND = 20000
_PRIMORIAL = gmpy2.primorial(_SMALL_BOUND)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with 64 rounds (error below 2^-128).

    Large inputs sharing a factor with the primorial of 20000 are rejected
    first, which skips the exponentiations for most composites.
    """
    return passes_quick_test(n) and bool(gmpy2.is_prime(n, MR_ROUNDS))


def has_small_factor(n: int) -> bool:
    """True when n > 20000 shares a factor with the primes below 20000."""
    return n > _SMALL_BOUND and gmpy2.gcd(n, _PRIMORIAL) != 1


def passes_quick_test(n: int) -> bool:
    """Cheap necessary condition for primality: no small factor, base-2 strong probable prime."""
    if n < 2 or has_small_factor(n):
        return False
    return n == 2 or bool(gmpy2.is_strong_prp(n, 2))


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(int(x) for x in c)


@dataclass(frozen=True)
class UniPoly:
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "UniPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        return eval_uni(self, x)

    def __add__(self, other: "UniPoly | int") -> "UniPoly":
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly | int") -> "UniPoly":
        return self + (-_as_uni(other))

    def __rsub__(self, other: "UniPoly | int") -> "UniPoly":
        return _as_uni(other) - self

    def __mul__(self, other: "UniPoly | int") -> "UniPoly":
        if isinstance(other, int):
            return UniPoly(c * other for c in self.coeffs)
        return UniPoly(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        out = UniPoly((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def compose(self, inner: "UniPoly") -> "UniPoly":
        out = UniPoly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def rem_monic(self, modulus: "UniPoly") -> "UniPoly":
        """Remainder modulo a monic polynomial (exact over the integers)."""
        if modulus.lc != 1:
            raise ValueError("modulus must be monic")
        return UniPoly(_rem_monic(list(self.coeffs), modulus.coeffs))

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def nonzero_terms(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def __str__(self) -> str:
        return _format_poly({(i,): c for i, c in enumerate(self.coeffs)}, ("x",))


def _as_uni(v: "UniPoly | int") -> UniPoly:
    return v if isinstance(v, UniPoly) else UniPoly((v,))


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _rem_monic(a: list[int], m: Sequence[int]) -> list[int]:
    n = len(m) - 1
    terms = [(j, c) for j, c in enumerate(m[:-1]) if c]
    for d in range(len(a) - 1, n - 1, -1):
        c = a[d]
        if c:
            base = d - n
            for j, mj in terms:
                a[base + j] -= c * mj
    del a[n:]
    return a


def _format_poly(terms: Mapping[tuple[int, ...], int], names: Sequence[str]) -> str:
    if not any(terms.values()):
        return "0"
    parts = []
    for exps, c in sorted(terms.items(), key=lambda kv: tuple(-e for e in kv[0])):
        if not c:
            continue
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
        )
        if not mono:
            s = str(abs(c))
        elif abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", s))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {sg} {s}" for sg, s in parts[1:])


@dataclass(frozen=True)
class BiPoly:
    """Sparse integer polynomial in ``x`` and ``t``; keys are ``(deg_x, deg_t)``."""

    terms: tuple[tuple[tuple[int, int], int], ...] = ()

    def __post_init__(self):
        acc: dict[tuple[int, int], int] = {}
        for (i, j), c in self.terms:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            acc[(i, j)] = acc.get((i, j), 0) + int(c)
        object.__setattr__(
            self, "terms", tuple(sorted((k, v) for k, v in acc.items() if v))
        )

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], int]) -> "BiPoly":
        return cls(tuple(d.items()))

    @classmethod
    def from_x_coeffs(cls, coeffs: Sequence[UniPoly | int]) -> "BiPoly":
        """Build from a list indexed by x-degree whose entries are polynomials in t."""
        d = {}
        for i, c in enumerate(coeffs):
            for j, v in enumerate(_as_uni(c).coeffs):
                d[(i, j)] = v
        return cls.from_dict(d)

    @classmethod
    def from_t_poly(cls, p: UniPoly) -> "BiPoly":
        return cls.from_x_coeffs([p])

    @property
    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_x(self) -> int:
        return max((k[0] for k, _ in self.terms), default=-1)

    @property
    def deg_t(self) -> int:
        return max((k[1] for k, _ in self.terms), default=-1)

    def x_coeffs(self) -> list[UniPoly]:
        """Coefficients of x^0 .. x^deg_x, each a polynomial in t."""
        cols: list[list[int]] = [[] for _ in range(self.deg_x + 1)]
        for (i, j), c in self.terms:
            col = cols[i]
            col.extend([0] * (j + 1 - len(col)))
            col[j] = c
        return [UniPoly(c) for c in cols]

    def __call__(self, x: int, t: int) -> int:
        return eval_bi(self, x, t)

    def __add__(self, other: "BiPoly | int") -> "BiPoly":
        other = _as_bi(other)
        return BiPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "BiPoly | int") -> "BiPoly":
        return self + (-_as_bi(other))

    def __mul__(self, other: "BiPoly | int") -> "BiPoly":
        if isinstance(other, int):
            return BiPoly(tuple((k, c * other) for k, c in self.terms))
        acc: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms:
            for (i2, j2), c2 in other.terms:
                key = (i1 + i2, j1 + j2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return BiPoly.from_dict(acc)

    __rmul__ = __mul__

    def max_abs_coeff(self) -> int:
        return max((abs(c) for _, c in self.terms), default=0)

    def __str__(self) -> str:
        return _format_poly(dict(self.terms), ("x", "t"))


def _as_bi(v: "BiPoly | int") -> BiPoly:
    return v if isinstance(v, BiPoly) else BiPoly((((0, 0), v),))


def compose_bi(p: UniPoly, inner: BiPoly) -> BiPoly:
    """Return ``p(inner)`` as a bivariate polynomial."""
    out = BiPoly()
    for c in reversed(p.coeffs):
        out = out * inner + c
    return out


def eval_uni(f: UniPoly, x: int) -> int:
    acc = 0
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def eval_bi(f: BiPoly, x: int, t: int) -> int:
    return eval_uni(UniPoly(eval_uni(c, t) for c in f.x_coeffs()), x)


# --- resultants -----------------------------------------------------------


def _sylvester(f: Sequence, g: Sequence, zero) -> list[list]:
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    fd, gd = list(reversed(f)), list(reversed(g))
    rows = []
    for i in range(n):
        rows.append([zero] * i + fd + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gd + [zero] * (size - n - 1 - i))
    return rows


def _bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pivot - mik * rowk[j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def resultant_uni(f: UniPoly, g: UniPoly) -> int:
    """Resultant via fraction-free elimination on the Sylvester matrix."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial is undefined here")
    if f.degree == 0 and g.degree == 0:
        return 1
    return _bareiss_det(_sylvester(f.coeffs, g.coeffs, 0))


def _prem(a: list[int], b: Sequence[int]) -> list[int]:
    db = len(b) - 1
    lc = b[-1]
    r = list(a)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        del r[k]
        if lc != 1:
            r = [v * lc for v in r]
        if c:
            off = k - db
            for j in range(db):
                if b[j]:
                    r[off + j] -= c * b[j]
    while r and r[-1] == 0:
        r.pop()
    return r


def resultant_prs(f: UniPoly | Sequence[int], g: UniPoly | Sequence[int]) -> int:
    """Resultant by the subresultant pseudo-remainder sequence.

    Agrees with :func:`resultant_uni` (same sign convention) and is much
    faster for degrees beyond a handful; zero inputs give 0.
    """
    A = list(_strip(f.coeffs if isinstance(f, UniPoly) else f))
    B = list(_strip(g.coeffs if isinstance(g, UniPoly) else g))
    if not A or not B:
        return 0
    ca = reduce(math.gcd, A, 0)
    cb = reduce(math.gcd, B, 0)
    dA, dB = len(A) - 1, len(B) - 1
    t = ca**dB * cb**dA
    if ca != 1:
        A = [v // ca for v in A]
    if cb != 1:
        B = [v // cb for v in B]
    s = 1
    if dA < dB:
        A, B = B, A
        if dA & 1 and dB & 1:
            s = -1
    g_ = h_ = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        if dB == 0:
            if dA == 0:
                return s * t
            return s * t * (B[0] ** dA // h_ ** (dA - 1))
        delta = dA - dB
        if dA & 1 and dB & 1:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        div = g_ * h_**delta
        A = B
        B = [v // div for v in R] if div != 1 else R
        g_ = A[-1]
        if delta:
            h_ = g_**delta // h_ ** (delta - 1)


def _poly_exact_div(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero():
        return a
    rem = list(a.coeffs)
    db = b.degree
    lc = b.lc
    q = [0] * (len(rem) - db) if len(rem) > db else []
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        qc, r = divmod(c, lc)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k - db] = qc
        for j in range(db + 1):
            rem[k - db + j] -= qc * b[j]
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return UniPoly(q)


def _bareiss_det_poly(M: list[list[UniPoly]]) -> UniPoly:
    n = len(M)
    if n == 0:
        return UniPoly((1,))
    M = [row[:] for row in M]
    sign = 1
    prev = UniPoly((1,))
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not M[r][k].is_zero()), None)
            if swap is None:
                return UniPoly()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            for j in range(k + 1, n):
                M[i][j] = _poly_exact_div(M[i][j] * pivot - mik * M[k][j], prev)
        prev = pivot
    return M[n - 1][n - 1] * sign


def _check_x_args(phi: BiPoly, f: BiPoly) -> None:
    if phi.is_zero() or f.is_zero():
        raise ValueError("resultant_x needs nonzero inputs")
    if phi.deg_x == 0 and f.deg_x == 0:
        raise ValueError("both inputs are constant in x")


def resultant_x(phi: BiPoly, f: BiPoly) -> UniPoly:
    """Res_x(phi, f) as a polynomial in t (fraction-free Sylvester elimination)."""
    _check_x_args(phi, f)
    rows = _sylvester(phi.x_coeffs(), f.x_coeffs(), UniPoly())
    return _bareiss_det_poly(rows)


def _lagrange_interpolate(xs: Sequence[int], ys: Sequence[int]) -> UniPoly:
    from fractions import Fraction

    n = len(xs)
    # Newton divided differences over the rationals.
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly
        for k in range(len(poly)):
            shifted[k] -= xs[i] * poly[k]
        shifted[0] += coef[i]
        poly = shifted
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("interpolated resultant is not integral")
    return UniPoly(int(c) for c in poly)


def resultant_x_interp(phi: BiPoly, f: BiPoly) -> UniPoly:
    """Res_x(phi, f) by evaluation at integer t and interpolation."""
    _check_x_args(phi, f)
    dx_phi, dx_f = phi.deg_x, f.deg_x
    bound = dx_phi * max(f.deg_t, 0) + dx_f * max(phi.deg_t, 0)
    pc, fc = phi.x_coeffs(), f.x_coeffs()
    # Points where a leading coefficient vanishes would drop the formal degree.
    xs, ys = [], []
    t = 0
    while len(xs) < bound + 1:
        pv = [c(t) for c in pc]
        fv = [c(t) for c in fc]
        if pv[-1] != 0 and fv[-1] != 0:
            xs.append(t)
            if dx_phi == 0 and dx_f == 0:
                ys.append(1)
            elif dx_phi == 0:
                ys.append(pv[0] ** dx_f)
            elif dx_f == 0:
                ys.append(fv[0] ** dx_phi)
            else:
                ys.append(resultant_prs(pv, fv))
        t = -t if t > 0 else 1 - t
    return _lagrange_interpolate(xs, ys)


# --- polynomials over GF(p) -------------------------------------------------


def _mod_strip(a: list[int], p: int) -> list[int]:
    a = [v % p for v in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return q, _mod_strip(a[:db] if db > 0 else [], p)


def _mod_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    return _mod_divmod(_mod_strip(_mul(a, b), p), m, p)[1]


def _mod_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _mod_divmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [v * inv % p for v in a]


def _mod_pow_x(e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _mod_divmod([0, 1], m, p)[1]
    while e:
        if e & 1:
            result = _mod_mulmod(result, base, m, p)
        base = _mod_mulmod(base, base, m, p)
        e >>= 1
    return result


def _mod_compose(g: list[int], h: list[int], m: list[int], p: int) -> list[int]:
    """g(h) mod (m, p)."""
    out: list[int] = []
    for c in reversed(g):
        out = _mod_mulmod(out, h, m, p) if out else []
        out = _mod_strip(_add(out, [c]), p)
    return out


def _add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def is_irreducible_mod_p(f: UniPoly, p: int) -> bool:
    """Distinct-degree test: gcd(x^(p^i) - x, f) = 1 for all i <= deg/2."""
    if not is_probable_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    m = _mod_strip(list(f.coeffs), p)
    if not m:
        raise ValueError("polynomial vanishes modulo p")
    n = len(m) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    inv = pow(m[-1], -1, p)
    m = [v * inv % p for v in m]
    xp = _mod_pow_x(p, m, p)
    cur = xp
    for i in range(1, n // 2 + 1):
        diff = _mod_strip(_add(cur, [0, -1]), p)
        if not diff:
            return False
        if len(_mod_gcd(m, diff, p)) > 1:
            return False
        if i < n // 2:
            cur = _mod_compose(cur, xp, m, p)
    return True
