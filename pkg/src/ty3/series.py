"""Truncated series in u^-1 with Element coefficients, and cleared
two-variable identity checks.

Every series carries its truncation order ``N``: coefficients 0..N are exact
and reading past N raises :class:`WindowError` instead of returning zero.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import Scalar, binomial, normalize
from .pbw import AlgebraSpec, Element
from .results import FAIL, PASS, SKIPPED, VerificationResult

__all__ = [
    "WindowError",
    "ElementSeries",
    "SeriesMatrix",
    "TwoVarWindow",
    "ClearedTerm",
    "series_arith",
    "series_inverse",
    "substitute_linear",
    "matrix_ops",
    "cleared_identity_check",
    "poly_mul",
    "poly_from_linear",
]


class WindowError(LookupError):
    """A coefficient outside the exact window was requested."""


class ElementSeries:
    """sum_{r=0}^{N} c_r u^{-r}, exact through order N."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: AlgebraSpec, coeffs: Sequence[Element]):
        if not coeffs:
            raise WindowError("a series needs at least its constant term")
        self.alg = alg
        self.coeffs: List[Element] = list(coeffs)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, alg, c: Scalar, N: int) -> "ElementSeries":
        z = Element.zero(alg)
        return cls(alg, [Element.scalar(alg, c)] + [z] * N)

    @classmethod
    def unit(cls, alg, N: int) -> "ElementSeries":
        return cls.constant(alg, 1, N)

    def __getitem__(self, r: int) -> Element:
        if r < 0:
            return Element.zero(self.alg)
        if r > self.N:
            raise WindowError(f"coefficient u^-{r} requested from a series exact to order {self.N}")
        return self.coeffs[r]

    def truncate(self, N: int) -> "ElementSeries":
        if N > self.N:
            raise WindowError(f"cannot extend a series from order {self.N} to {N}")
        return ElementSeries(self.alg, self.coeffs[: N + 1])

    def __add__(self, other: "ElementSeries") -> "ElementSeries":
        n = min(self.N, other.N)
        return ElementSeries(self.alg, [self.coeffs[r] + other.coeffs[r] for r in range(n + 1)])

    def __sub__(self, other: "ElementSeries") -> "ElementSeries":
        n = min(self.N, other.N)
        return ElementSeries(self.alg, [self.coeffs[r] - other.coeffs[r] for r in range(n + 1)])

    def __neg__(self):
        return ElementSeries(self.alg, [-c for c in self.coeffs])

    def scale(self, c: Scalar) -> "ElementSeries":
        return ElementSeries(self.alg, [x.scale(c) for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        n = min(self.N, other.N)
        out = []
        for m in range(n + 1):
            acc = Element.zero(self.alg)
            for p in range(m + 1):
                a, b = self.coeffs[p], other.coeffs[m - p]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return ElementSeries(self.alg, out)

    def __eq__(self, other):
        if not isinstance(other, ElementSeries):
            return NotImplemented
        return self.N == other.N and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        return f"ElementSeries(N={self.N}, sizes={[len(c) for c in self.coeffs]})"


def series_arith(a: ElementSeries, b: ElementSeries, op: str) -> ElementSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def series_inverse(a: ElementSeries, side: str = "right") -> ElementSeries:
    """Inverse of a series with constant term 1.

    ``side="right"`` solves a * b = 1 coefficientwise, ``"left"`` solves
    b * a = 1; the two agree in an associative algebra.
    """
    if a.coeffs[0] != Element.one(a.alg):
        raise ValueError("series inverse needs constant term 1")
    out = [Element.one(a.alg)]
    for m in range(1, a.N + 1):
        acc = Element.zero(a.alg)
        for r in range(1, m + 1):
            x = a.coeffs[r]
            if not x or not out[m - r]:
                continue
            acc = acc - (x * out[m - r] if side == "right" else out[m - r] * x)
        out.append(acc)
    return ElementSeries(a.alg, out)


def substitute_linear(a: ElementSeries, sign: int, shift: Scalar = 0) -> ElementSeries:
    """Coefficients of a(sign*u + shift).

    Uses (s u + c)^-r = sum_j (-1)^j binom(r+j-1, j) c^j s^(-r-j) u^(-r-j);
    coefficient m only involves levels <= m, so the window is kept.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    shift = normalize(Fraction(shift))
    out = [a.coeffs[0]]
    for m in range(1, a.N + 1):
        acc = Element.zero(a.alg)
        for r in range(1, m + 1):
            j = m - r
            if j and not shift:
                continue
            c = (-1) ** j * binomial(m - 1, j) * shift ** j * sign ** m
            if c and a.coeffs[r]:
                acc = acc + a.coeffs[r].scale(c)
        out.append(acc)
    return ElementSeries(a.alg, out)


# ---------------------------------------------------------------------------
# matrices of series


class SeriesMatrix:
    """Rectangular grid of series with a common truncation order."""

    def __init__(self, entries: Sequence[Sequence[ElementSeries]]):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix is not rectangular")
        n = min(e.N for r in rows for e in r)
        self.entries = [[e.truncate(n) if e.N > n else e for e in r] for r in rows]
        self.alg = rows[0][0].alg

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def N(self) -> int:
        return self.entries[0][0].N

    def __getitem__(self, ij: Tuple[int, int]) -> ElementSeries:
        return self.entries[ij[0]][ij[1]]

    @classmethod
    def identity(cls, alg, n: int, N: int) -> "SeriesMatrix":
        return cls([[ElementSeries.constant(alg, 1 if i == j else 0, N) for j in range(n)] for i in range(n)])

    def level(self, r: int) -> List[List[Element]]:
        return [[e[r] for e in row] for row in self.entries]

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        (p, q), (q2, s) = self.shape, other.shape
        if q != q2:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        out = []
        for i in range(p):
            row = []
            for j in range(s):
                acc = None
                for k in range(q):
                    t = self.entries[i][k] * other.entries[k][j]
                    acc = t if acc is None else acc + t
                row.append(acc)
            out.append(row)
        return SeriesMatrix(out)

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    __hash__ = None

    def inverse(self, side: str = "right") -> "SeriesMatrix":
        """Inverse of a square matrix series with identity constant term,
        viewed as one series whose coefficients are matrices of Elements."""
        n, m = self.shape
        if n != m:
            raise ValueError("inverse needs a square matrix")
        one, zero = Element.one(self.alg), Element.zero(self.alg)
        if self.level(0) != [[one if i == j else zero for j in range(n)] for i in range(n)]:
            raise ValueError("matrix series inverse needs identity constant term")
        levels = [self.level(r) for r in range(self.N + 1)]
        inv = [[[one if i == j else zero for j in range(n)] for i in range(n)]]
        for lev in range(1, self.N + 1):
            acc = [[zero] * n for _ in range(n)]
            for r in range(1, lev + 1):
                A = levels[r] if side == "right" else inv[lev - r]
                B = inv[lev - r] if side == "right" else levels[r]
                for i in range(n):
                    for j in range(n):
                        for k in range(n):
                            if A[i][k] and B[k][j]:
                                acc[i][j] = acc[i][j] - A[i][k] * B[k][j]
            inv.append(acc)
        return SeriesMatrix([[ElementSeries(self.alg, [inv[r][i][j] for r in range(self.N + 1)])
                              for j in range(n)] for i in range(n)])


def matrix_ops(m: SeriesMatrix, op: str, other: Optional[SeriesMatrix] = None) -> SeriesMatrix:
    if op == "mul":
        if other is None:
            raise ValueError("mul needs a second matrix")
        return m * other
    if op == "inverse2x2":
        if m.shape != (2, 2):
            raise ValueError("inverse2x2 needs a 2x2 matrix")
        return m.inverse()
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# two-variable identities with cleared denominators

Poly2 = Dict[Tuple[int, int], Scalar]  # (deg_u, deg_v) -> coefficient


def poly_mul(*ps: Poly2) -> Poly2:
    out: Poly2 = {(0, 0): 1}
    for p in ps:
        nxt: Poly2 = {}
        for (a, b), c in out.items():
            for (d, e), f in p.items():
                nxt[(a + d, b + e)] = nxt.get((a + d, b + e), 0) + c * f
        out = {k: normalize(v) for k, v in nxt.items() if v}
    return out


def poly_from_linear(cu: Scalar, cv: Scalar, c0: Scalar = 0) -> Poly2:
    """The polynomial cu*u + cv*v + c0."""
    return {k: v for k, v in {(1, 0): cu, (0, 1): cv, (0, 0): c0}.items() if v}


@dataclass(frozen=True)
class ClearedTerm:
    """poly(u, v) * f1(w1) * f2(w2) * ...  with each w in {"u", "v"}."""

    poly: Mapping[Tuple[int, int], Scalar]
    factors: Tuple[Tuple[ElementSeries, str], ...]

    def u_limit(self) -> Optional[int]:
        """Largest a for which the u^-a coefficient is exact (None: no limit)."""
        return self._limit("u", 0)

    def v_limit(self) -> Optional[int]:
        return self._limit("v", 1)

    def _limit(self, var: str, axis: int) -> Optional[int]:
        ns = [s.N for s, w in self.factors if w == var]
        if not ns:
            return None
        return min(ns) - max(k[axis] for k in self.poly)


class TwoVarWindow:
    """Coefficients of u^-a v^-b over a validated finite window."""

    def __init__(self, alg: AlgebraSpec, a_range: Tuple[int, int], b_range: Tuple[int, int],
                 max_total: Optional[int] = None):
        self.alg = alg
        self.a_range = a_range
        self.b_range = b_range
        self.max_total = max_total
        self.cells: Dict[Tuple[int, int], Element] = {}

    def contains(self, a: int, b: int) -> bool:
        return (self.a_range[0] <= a <= self.a_range[1] and self.b_range[0] <= b <= self.b_range[1]
                and (self.max_total is None or a + b <= self.max_total))

    def keys(self):
        for a in range(self.a_range[0], self.a_range[1] + 1):
            for b in range(self.b_range[0], self.b_range[1] + 1):
                if self.contains(a, b):
                    yield a, b

    def __getitem__(self, ab: Tuple[int, int]) -> Element:
        if not self.contains(*ab):
            raise WindowError(f"cell {ab} outside validity window")
        return self.cells.get(ab, Element.zero(self.alg))

    def __setitem__(self, ab, value: Element):
        if not self.contains(*ab):
            raise WindowError(f"cell {ab} outside validity window")
        self.cells[ab] = value


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _TermEvaluator:
    def __init__(self, term: ClearedTerm, alg: AlgebraSpec, products: Optional[Dict] = None):
        self.term = term
        self.alg = alg
        self.cache: Dict[Tuple[int, int], Element] = {}
        # optional cache shared between checks, keyed by (id(series), level)
        # tuples; the caller keeps the series alive while it is in use
        self.products = products
        self.upos = [p for p, (_, w) in enumerate(term.factors) if w == "u"]
        self.vpos = [p for p, (_, w) in enumerate(term.factors) if w == "v"]

    def product_coeff(self, A: int, B: int) -> Element:
        """u^-A v^-B coefficient of the bare factor product."""
        key = (A, B)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        factors = self.term.factors
        acc = Element.zero(self.alg)
        if A >= 0 and B >= 0:
            # a variable with no factors only contributes its u^0 / v^0 term
            for cu in _compositions(A, len(self.upos)):
                for cv in _compositions(B, len(self.vpos)):
                    levels = [0] * len(factors)
                    for p, lev in zip(self.upos, cu):
                        levels[p] = lev
                    for p, lev in zip(self.vpos, cv):
                        levels[p] = lev
                    prod = self._product(levels)
                    if prod:
                        acc = acc + prod
        self.cache[key] = acc
        return acc

    def _product(self, levels: Sequence[int]) -> Element:
        factors = self.term.factors
        key = None
        if self.products is not None:
            key = tuple((id(series), lev) for (series, _), lev in zip(factors, levels))
            hit = self.products.get(key)
            if hit is not None:
                return hit
        prod = None
        for (series, _), lev in zip(factors, levels):
            c = series[lev]
            if not c:
                prod = Element.zero(self.alg)
                break
            prod = c if prod is None else prod * c
        if prod is None:
            prod = Element.one(self.alg)
        if key is not None:
            self.products[key] = prod
        return prod

    def coeff(self, a: int, b: int) -> Element:
        acc = Element.zero(self.alg)
        for (du, dv), c in self.term.poly.items():
            x = self.product_coeff(a + du, b + dv)
            if x:
                acc = acc + x.scale(c)
        return acc


def valid_window(terms: Sequence[ClearedTerm]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Exact (a, b) ranges for comparing u^-a v^-b coefficients.

    Multiplying a u-series by u^d moves its trustworthy range down by d; a
    term without u-series has no upper limit in a.
    """
    a_lo = -max((k[0] for t in terms for k in t.poly), default=0)
    b_lo = -max((k[1] for t in terms for k in t.poly), default=0)
    a_lims = [t.u_limit() for t in terms if t.u_limit() is not None]
    b_lims = [t.v_limit() for t in terms if t.v_limit() is not None]
    a_hi = min(a_lims) if a_lims else 0
    b_hi = min(b_lims) if b_lims else 0
    return (a_lo, a_hi), (b_lo, b_hi)


def cleared_identity_check(
    terms_lhs: Sequence[ClearedTerm],
    terms_rhs: Sequence[ClearedTerm],
    window: Optional[Tuple[int, int]] = None,
    *,
    max_total: Optional[int] = None,
    suite: str = "cleared",
    instance: str = "",
    alg: Optional[AlgebraSpec] = None,
    products: Optional[Dict] = None,
) -> VerificationResult:
    """Compare u^-a v^-b coefficients of sum(lhs) and sum(rhs).

    ``window=(M_u, M_v)`` caps the compared range; asking for more than the
    factors support raises :class:`WindowError`.  ``max_total`` optionally
    bounds a + b.  ``products`` is an optional cache of factor products
    shared across calls.
    """
    t0 = time.perf_counter()
    terms = list(terms_lhs) + list(terms_rhs)
    if alg is None:
        algs = [s.alg for t in terms for s, _ in t.factors]
        if not algs:
            return VerificationResult(suite, instance, PASS, 0, (time.perf_counter() - t0) * 1e3)
        alg = algs[0]
    (a_lo, a_hi), (b_lo, b_hi) = valid_window(terms)
    if window is not None:
        mu, mv = window
        if mu > a_hi or mv > b_hi:
            raise WindowError(f"requested window {window} exceeds exact window ({a_hi}, {b_hi})")
        a_hi, b_hi = mu, mv
    win = TwoVarWindow(alg, (a_lo, a_hi), (b_lo, b_hi), max_total)
    cells = list(win.keys())
    if not cells:
        return VerificationResult(suite, instance, SKIPPED, 0, (time.perf_counter() - t0) * 1e3,
                                  detail="empty validity window")
    lhs = [_TermEvaluator(t, alg, products) for t in terms_lhs]
    rhs = [_TermEvaluator(t, alg, products) for t in terms_rhs]
    for a, b in cells:
        acc = Element.zero(alg)
        for ev in lhs:
            acc = acc + ev.coeff(a, b)
        for ev in rhs:
            acc = acc - ev.coeff(a, b)
        if acc:
            ms = (time.perf_counter() - t0) * 1e3
            return VerificationResult(suite, instance, FAIL, len(acc), ms,
                                      detail=f"u^-{a} v^-{b}: residual {acc!r}")
    ms = (time.perf_counter() - t0) * 1e3
    return VerificationResult(suite, instance, PASS, 0, ms,
                              detail=f"window a in [{a_lo},{a_hi}], b in [{b_lo},{b_hi}]"
                              + (f", a+b <= {max_total}" if max_total is not None else ""))
