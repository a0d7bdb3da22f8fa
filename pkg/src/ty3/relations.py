"""Builders for the Drinfeld-generator relations of Y_3^+.

Every relation comes out as explicit data: the summation letters a, b, c
over {-1, 1} are expanded here, never left to an evaluator.

* :func:`coefficient_relations` gives per-level identities ``lhs == rhs``
  between :class:`~ty3.twisted.Formal` combinations of Drinfeld symbols.
* :func:`series_relations` gives the generating-function identities with
  every denominator cleared, as lists of :class:`ClearedSpec` terms.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from fractions import Fraction

from .exact import Scalar, binomial, signed_binomial_weight
from .series import ClearedTerm, ElementSeries, Poly2, poly_from_linear, poly_mul, substitute_linear
from .twisted import I3, PM, Formal, commutator

__all__ = [
    "COEFFICIENT_FAMILIES",
    "BRACKET_FAMILIES",
    "SERIES_ITEMS",
    "Relation",
    "coefficient_relations",
    "ClearedSpec",
    "SeriesRelation",
    "series_relations",
    "eq_ss_relation",
    "symmetry_relation",
    "realize",
]


def _d(a, b):
    return 1 if a == b else 0


def D(i, j, r):
    return Formal.sym("D", i, j, r)


def Dt(i, j, r):
    return Formal.sym("Dt", i, j, r)


def E(i, r):
    return Formal.sym("E", i, r)


def F(i, r):
    return Formal.sym("F", i, r)


def G(r):
    return Formal.sym("G", r)


def _sum(parts) -> Formal:
    acc = Formal()
    for p in parts:
        acc = acc + p
    return acc


c_rs = signed_binomial_weight
HALF = Fraction(1, 2)


@dataclass
class Relation:
    """One instance ``lhs == rhs`` of a relation family."""

    family: str
    key: Tuple
    lhs: Formal
    rhs: Formal
    variant: Optional[str] = None

    @property
    def id(self) -> str:
        parts = [self.family]
        if self.variant:
            parts[0] += f"[{self.variant}]"
        return parts[0] + "(" + ",".join(map(str, self.key)) + ")"

    @property
    def residual(self) -> Formal:
        return self.lhs - self.rhs

    def symbols(self):
        for f in (self.lhs, self.rhs):
            for w in f.terms:
                yield from w

    def mutated(self) -> "Relation":
        """Negative control: drop one RHS term (an LHS term if RHS is empty)."""
        if self.rhs:
            return replace(self, rhs=self.rhs.drop_last())
        return replace(self, lhs=self.lhs.drop_last())


# ---------------------------------------------------------------------------
# per-level relations


def _oD1(N):
    for i in PM:
        for j in PM:
            yield Relation("oD1", ("D", i, j), D(i, j, 0), Formal.const(_d(i, j)))
            yield Relation("oD1", ("Dt", i, j), Dt(i, j, 0), Formal.const(_d(i, j)))
    yield Relation("oD1", ("G",), G(0), Formal.const(1))
    for i in PM:
        yield Relation("oD1", ("E", i), E(i, 0), Formal())
        yield Relation("oD1", ("F", i), F(i, 0), Formal())


def _oD2(N):
    # both factor orders: D * Dt and Dt * D
    for i in PM:
        for j in PM:
            for n in range(N + 1):
                rhs = Formal.const(_d(n, 0) * _d(i, j))
                lhs = _sum(D(i, a, r) * Dt(a, j, n - r) for r in range(n + 1) for a in PM)
                yield Relation("oD2", (i, j, n), lhs, rhs)
                lhs = _sum(Dt(i, a, r) * D(a, j, n - r) for r in range(n + 1) for a in PM)
                yield Relation("oD2", (i, j, n), lhs, rhs, variant="left")


def _oDs(N):
    for i in PM:
        for j in PM:
            for n in range(1, N + 1):
                s = (-1) ** n
                printed = D(-j, -i, n) * s + (D(-j, -i, n - 1) - D(-j, -i, n - 1) * s) * HALF
                yield Relation("oDs", (i, j, n), D(i, j, n), printed, variant="printed")
                derived = D(-j, -i, n) * s - D(i, j, n - 1) * ((1 + s) * HALF)
                yield Relation("oDs", (i, j, n), D(i, j, n), derived, variant="derived")


def _fe_sum(X, i, m):
    return _sum(X(-i, r) * ((-1) ** m * 2 ** (m - r) * binomial(m - 1, m - r)) for r in range(1, m + 1))


def _FEs(N):
    for i in PM:
        for m in range(1, N + 1):
            yield Relation("FEs", (i, m), F(i, m), _fe_sum(E, i, m))


def _EFs(N):
    for i in PM:
        for m in range(1, N + 1):
            yield Relation("EFs", (i, m), E(i, m), _fe_sum(F, i, m))


def _levels(N):
    for m in range(1, N):
        for n in range(1, N - m + 1):
            yield m, n


def _GG(N):
    for m, n in _levels(N):
        yield Relation("GG", (m, n), commutator(G(m), G(n)), Formal())


def _oDD(N):
    for i in PM:
        for j in PM:
            for k in PM:
                for l in PM:
                    for m, n in _levels(N):
                        rhs = _sum(D(k, j, m - 1 - r) * D(i, l, n + r) - D(k, j, n + r) * D(i, l, m - 1 - r)
                                   for r in range(m))
                        rhs = rhs - _sum((D(i, -k, m - 1 - r) * D(-j, l, n + r)
                                          - D(k, -i, n + r) * D(-l, j, m - 1 - r)) * (-1) ** r
                                         for r in range(m))
                        rhs = rhs + _sum(D(k, -i, m - 2 - 2 * r) * D(-j, l, n + 2 * r)
                                         - D(k, -i, n + 2 * r) * D(-j, l, m - 2 - 2 * r)
                                         for r in range(m // 2))
                        yield Relation("oDD", (i, j, k, l, m, n), commutator(D(i, j, m), D(k, l, n)), rhs)


def _double(m):
    """(r, s) with 0 <= s <= r <= m - 1."""
    for r in range(m):
        for s in range(r + 1):
            yield r, s


def _DEreln(N):
    for i in PM:
        for j in PM:
            for k in PM:
                for m, n in _levels(N):
                    rhs = Formal()
                    if j == k:
                        rhs = rhs + _sum(D(i, a, r) * E(a, m + n - 1 - r) for r in range(m) for a in PM)
                    if i == -k:
                        rhs = rhs - _sum(E(-a, n + r - s) * D(a, j, m - 1 - r) * c_rs(r, s)
                                         for r, s in _double(m) for a in PM)
                    yield Relation("DEreln", (i, j, k, m, n), commutator(D(i, j, m), E(k, n)), rhs)


def _DFreln(N):
    for i in PM:
        for j in PM:
            for k in PM:
                for m, n in _levels(N):
                    rhs = Formal()
                    if i == k:
                        rhs = rhs - _sum(F(a, m + n - 1 - r) * D(a, j, r) for r in range(m) for a in PM)
                    if j == -k:
                        rhs = rhs + _sum(D(i, a, m - 1 - r) * F(-a, n + r - s) * c_rs(r, s)
                                         for r, s in _double(m) for a in PM)
                    yield Relation("DFreln", (i, j, k, m, n), commutator(D(i, j, m), F(k, n)), rhs)


def _GEreln(N):
    for i in PM:
        for m, n in _levels(N):
            rhs = _sum(G(r) * E(i, m + n - 1 - r) for r in range(m)).scale(-1)
            rhs = rhs + _sum(E(i, n + r - s) * G(m - 1 - r) * c_rs(r, s) for r, s in _double(m))
            yield Relation("GEreln", (i, m, n), commutator(G(m), E(i, n)), rhs)


def _GFreln(N):
    for i in PM:
        for m, n in _levels(N):
            rhs = _sum(F(i, m + n - 1 - r) * G(r) for r in range(m))
            rhs = rhs - _sum(G(m - 1 - r) * F(i, n + r - s) * c_rs(r, s) for r, s in _double(m))
            yield Relation("GFreln", (i, m, n), commutator(G(m), F(i, n)), rhs)


def _EFreln(N):
    for i in PM:
        for j in PM:
            for m, n in _levels(N):
                t = m + n - 1
                rhs = _sum(G(r) * Dt(i, j, t - r) for r in range(t + 1)).scale(-1)
                rhs = rhs - _sum((E(i, m - r - 1) * F(j, n + r - s) + F(-i, n + r - s) * E(-j, m - r - 1))
                                 * c_rs(r, s) for r, s in _double(m))
                rhs = rhs + _sum(F(-i, s) * F(j, t - r - s) * c_rs(m - 1, r)
                                 for r in range(m) for s in range(t - r + 1))
                yield Relation("EFreln", (i, j, m, n), commutator(E(i, m), F(j, n)), rhs)


def ee_rhs(i, j, m, n, cancelled: bool = False) -> Formal:
    """Right side of the [E_i^(m), E_j^(n)] relation.

    With ``cancelled`` the two opposite sums over r are merged first, so
    only E^(r) with r >= min(m, n) appear.
    """
    t = m + n - 1
    if cancelled:
        lo, hi, sign = (m, n, 1) if m < n else (n, m, -1)
        rhs = _sum(E(j, t - r) * E(i, r) for r in range(lo, hi)).scale(sign)
    else:
        rhs = _sum(E(j, t - r) * E(i, r) for r in range(n)) - _sum(E(j, t - r) * E(i, r) for r in range(m))
    return rhs - _sum(Dt(j, -i, s) * G(t - r - s) * c_rs(m - 1, r)
                      for r in range(m) for s in range(t - r + 1))


def _EEreln(N):
    for i in PM:
        for j in PM:
            for m, n in _levels(N):
                yield Relation("EEreln", (i, j, m, n), commutator(E(i, m), E(j, n)), ee_rhs(i, j, m, n))


def _FFreln(N):
    for i in PM:
        for j in PM:
            for m, n in _levels(N):
                t = m + n - 1
                rhs = _sum(F(j, r) * F(i, t - r) for r in range(m)) - _sum(F(j, r) * F(i, t - r) for r in range(n))
                rhs = rhs - _sum(Dt(-j, i, s) * G(t - r - s) * c_rs(n - 1, r)
                                 for r in range(n) for s in range(t - r + 1))
                yield Relation("FFreln", (i, j, m, n), commutator(F(i, m), F(j, n)), rhs)


COEFFICIENT_FAMILIES: Dict[str, Callable[[int], Iterator[Relation]]] = {
    "oD1": _oD1,
    "oD2": _oD2,
    "GG": _GG,
    "oDD": _oDD,
    "oDs": _oDs,
    "FEs": _FEs,
    "EFs": _EFs,
    "DEreln": _DEreln,
    "DFreln": _DFreln,
    "GEreln": _GEreln,
    "GFreln": _GFreln,
    "EFreln": _EFreln,
    "EEreln": _EEreln,
    "FFreln": _FFreln,
}

BRACKET_FAMILIES = ("GG", "oDD", "DEreln", "DFreln", "GEreln", "GFreln", "EFreln", "EEreln", "FFreln")


def coefficient_relations(N: int, families: Optional[Sequence[str]] = None) -> List[Relation]:
    """All instances with levels inside the window: m + n <= N for brackets
    (m, n >= 1), level <= N otherwise."""
    out = []
    for name, build in COEFFICIENT_FAMILIES.items():
        if families is None or name in families:
            out.extend(build(N))
    return out


# ---------------------------------------------------------------------------
# generating-function identities with cleared denominators

# a factor is (name, indices, var, sign, shift): the series name_indices at
# sign*var + shift
Factor = Tuple[str, Tuple[int, ...], str, int, int]


def f(name: str, *idx: int, var: str = "u", sign: int = 1, shift: int = 0) -> Factor:
    return (name, tuple(idx), var, sign, shift)


@dataclass(frozen=True)
class ClearedSpec:
    poly: Tuple[Tuple[Tuple[int, int], Scalar], ...]
    factors: Tuple[Factor, ...]

    def degree(self) -> int:
        return max(a + b for (a, b), _ in self.poly)


def _spec(poly: Poly2, *factors: Factor) -> ClearedSpec:
    return ClearedSpec(tuple(sorted(poly.items())), tuple(factors))


def _scaled(p: Poly2, c: Scalar) -> Poly2:
    return {k: v * c for k, v in p.items()}


@dataclass
class SeriesRelation:
    family: str
    key: Tuple
    lhs: List[ClearedSpec]
    rhs: List[ClearedSpec]
    variant: Optional[str] = None
    clearing: str = ""

    @property
    def id(self) -> str:
        name = self.family + (f"[{self.variant}]" if self.variant else "")
        return name + "(" + ",".join(map(str, self.key)) + ")"

    def degree(self) -> int:
        return max(t.degree() for t in self.lhs + self.rhs)

    def mutated(self) -> "SeriesRelation":
        if self.rhs:
            return replace(self, rhs=self.rhs[:-1])
        return replace(self, lhs=self.lhs[:-1])


ONE: Poly2 = {(0, 0): 1}
U_MINUS_V = poly_from_linear(1, -1)
U_PLUS_V = poly_from_linear(1, 1)
U_PLUS_V_2 = poly_from_linear(1, 1, 2)
U_MINUS_V_1 = poly_from_linear(1, -1, -1)
TWO_V_3 = poly_from_linear(0, 2, 3)


def _bracket(p: Poly2, x: Factor, y: Factor) -> List[ClearedSpec]:
    return [_spec(p, x, y), _spec(_scaled(p, -1), y, x)]


def _pair(p: Poly2, x: Factor, y: Factor, sign: int = 1) -> ClearedSpec:
    return _spec(_scaled(p, sign), x, y)


def eq_ss_relation(i, j, k, l, name: str = "S", family: str = "SS") -> SeriesRelation:
    """(u^2 - v^2)[X_ij(u), X_kl(v)] = ... for X = S (or D on +-1 indices)."""
    s = lambda a, b, var: f(name, a, b, var=var)  # noqa: E731
    lhs = _bracket(poly_mul(U_MINUS_V, U_PLUS_V), s(i, j, "u"), s(k, l, "v"))
    rhs = [
        _pair(U_PLUS_V, s(k, j, "u"), s(i, l, "v")),
        _pair(U_PLUS_V, s(k, j, "v"), s(i, l, "u"), -1),
        _pair(U_MINUS_V, s(i, -k, "u"), s(-j, l, "v"), -1),
        _pair(U_MINUS_V, s(k, -i, "v"), s(-l, j, "u")),
        _pair(ONE, s(k, -i, "u"), s(-j, l, "v")),
        _pair(ONE, s(k, -i, "v"), s(-j, l, "u"), -1),
    ]
    return SeriesRelation(family, (i, j, k, l), lhs, rhs, clearing="(u-v)(u+v)")


def symmetry_relation(i, j, name: str, family: str, variant: Optional[str] = None,
                      form: str = "transpose") -> SeriesRelation:
    """Transpose symmetry cleared by 2u.

    ``form="transpose"``: 2u X_{-j,-i}(-u) = 2u X_ij(u) + X_ij(u) - X_ij(-u).
    ``form="solved"``: 2u X_ij(u) = 2u X_{-j,-i}(-u) + X_{-j,-i}(u) - X_{-j,-i}(-u).
    """
    two_u = {(1, 0): 2}
    if form == "transpose":
        a, b = (-j, -i), (i, j)
    elif form == "solved":
        a, b = (i, j), (-j, -i)
    else:
        raise ValueError(form)
    if form == "transpose":
        lhs = [_spec(two_u, f(name, *a, sign=-1))]
        rhs = [_spec(two_u, f(name, *b)), _spec(ONE, f(name, *b)), _spec({(0, 0): -1}, f(name, *b, sign=-1))]
    else:
        lhs = [_spec(two_u, f(name, *a))]
        rhs = [_spec(two_u, f(name, *b, sign=-1)), _spec(ONE, f(name, *b)),
               _spec({(0, 0): -1}, f(name, *b, sign=-1))]
    return SeriesRelation(family, (i, j), lhs, rhs, variant=variant, clearing="2u")


P1, P2, P3, P4 = U_MINUS_V, U_PLUS_V_2, U_MINUS_V_1, TWO_V_3


def _DD():
    for i in PM:
        for j in PM:
            for k in PM:
                for l in PM:
                    yield eq_ss_relation(i, j, k, l, name="D", family="DD")


def _DE():
    c = poly_mul(P1, P2)
    for i in PM:
        for j in PM:
            for k in PM:
                lhs = _bracket(c, f("D", i, j), f("E", k, var="v"))
                rhs = []
                if j == k:
                    for a in PM:
                        rhs += [_pair(P2, f("D", i, a), f("E", a, var="v")),
                                _pair(P2, f("D", i, a), f("E", a), -1)]
                if i == -k:
                    for a in PM:
                        rhs += [_pair(P1, f("F", a), f("D", a, j)),
                                _pair(P1, f("E", -a, var="v"), f("D", a, j), -1)]
                yield SeriesRelation("DE", (i, j, k), lhs, rhs, clearing="(u-v)(u+v+2)")


def _DF():
    c = poly_mul(P1, P2)
    for i in PM:
        for j in PM:
            for k in PM:
                lhs = _bracket(c, f("D", i, j), f("F", k, var="v"))
                rhs = []
                if i == k:
                    for a in PM:
                        rhs += [_pair(P2, f("F", a, var="v"), f("D", a, j), -1),
                                _pair(P2, f("F", a), f("D", a, j))]
                if j == -k:
                    for a in PM:
                        rhs += [_pair(P1, f("D", i, a), f("E", a), -1),
                                _pair(P1, f("D", i, a), f("F", -a, var="v"))]
                yield SeriesRelation("DF", (i, j, k), lhs, rhs, clearing="(u-v)(u+v+2)")


def _GE():
    c = poly_mul(P1, P2)
    for i in PM:
        lhs = _bracket(c, f("G"), f("E", i, var="v"))
        rhs = [_pair(P2, f("G"), f("E", i)), _pair(P2, f("G"), f("E", i, var="v"), -1),
               _pair(P1, f("E", i, var="v"), f("G")), _pair(P1, f("F", -i), f("G"), -1)]
        yield SeriesRelation("GE", (i,), lhs, rhs, clearing="(u-v)(u+v+2)")


def _FG():
    c = poly_mul(P1, P2)
    for i in PM:
        lhs = _bracket(c, f("F", i), f("G", var="v"))
        rhs = [_pair(P2, f("F", i), f("G", var="v")), _pair(P2, f("F", i, var="v"), f("G", var="v"), -1),
               _pair(P1, f("G", var="v"), f("F", i)), _pair(P1, f("G", var="v"), f("E", -i, var="v"), -1)]
        yield SeriesRelation("FG", (i,), lhs, rhs, clearing="(u-v)(u+v+2)")


def _EF():
    c = poly_mul(P1, P2)
    for i in PM:
        for j in PM:
            lhs = _bracket(c, f("E", i), f("F", j, var="v"))
            rhs = [_pair(P2, f("Dt", i, j), f("G")), _pair(P2, f("G", var="v"), f("Dt", i, j, var="v"), -1)]
            # (E_i(u) - F_{-i}(v)) (E_{-j}(u) - F_j(v))
            for x, sx in ((f("E", i), 1), (f("F", -i, var="v"), -1)):
                for y, sy in ((f("E", -j), 1), (f("F", j, var="v"), -1)):
                    rhs.append(_pair(P1, x, y, sx * sy))
            yield SeriesRelation("EF", (i, j), lhs, rhs, clearing="(u-v)(u+v+2)")


def _EE_FF(name: str):
    full = poly_mul(P1, P2, P3, P4)
    X = "E" if name == "EE" else "F"
    sg = 1 if name == "EE" else -1
    for i in PM:
        for j in PM:
            lhs = _bracket(full, f(X, i), f(X, j, var="v"))
            if name == "EE":
                first = ((f("E", i), 1), (f("E", i, var="v"), -1)), ((f("E", j), 1), (f("E", j, var="v"), -1))
                a_idx, b_idx = (j, -i), (i, -j)
            else:
                first = ((f("F", j), 1), (f("F", j, var="v"), -1)), ((f("F", i), 1), (f("F", i, var="v"), -1))
                a_idx, b_idx = (-i, j), (-j, i)
            rhs = []
            c1 = poly_mul(P2, P3, P4)
            for x, sx in first[0]:
                for y, sy in first[1]:
                    rhs.append(_pair(c1, x, y, sg * sx * sy))
            rhs.append(_pair(poly_mul(P1, P3, P4), f("Dt", *a_idx), f("G"), sg))
            rhs.append(_pair(poly_mul(P1, P1, P4), f("Dt", *a_idx, var="v"), f("G", var="v"), -sg))
            rhs.append(_pair(poly_mul(P1, P4), f("Dt", *b_idx, var="v"), f("G", var="v"), sg))
            rhs.append(_pair(poly_mul(P1, P2), f("Dt", *b_idx, var="v"), f("G", var="v"), -sg))
            rhs.append(_pair(poly_mul(P1, P2), f("Dt", *a_idx, var="v"), f("G", var="v"), sg))
            yield SeriesRelation(name, (i, j), lhs, rhs, clearing="(u-v)(u+v+2)(u-v-1)(2v+3)")


def _Dsym():
    for i in PM:
        for j in PM:
            yield symmetry_relation(i, j, "D", "Dsym", variant="printed", form="solved")
            yield symmetry_relation(i, j, "D", "Dsym", variant="derived", form="transpose")


def _EFsym():
    for i in PM:
        yield SeriesRelation("EFsym", (i,), [_spec(ONE, f("E", i, sign=-1))],
                             [_spec(ONE, f("F", -i, shift=-2))], clearing="none")


def _FEsym():
    for i in PM:
        yield SeriesRelation("FEsym", (i,), [_spec(ONE, f("F", i, sign=-1))],
                             [_spec(ONE, f("E", -i, shift=-2))], clearing="none")


SERIES_ITEMS: Dict[str, Callable[[], Iterator[SeriesRelation]]] = {
    "DD": _DD,
    "DE": _DE,
    "DF": _DF,
    "GE": _GE,
    "FG": _FG,
    "EF": _EF,
    "EE": lambda: _EE_FF("EE"),
    "FF": lambda: _EE_FF("FF"),
    "Dsym": _Dsym,
    "EFsym": _EFsym,
    "FEsym": _FEsym,
}


def series_relations(items: Optional[Sequence[str]] = None) -> List[SeriesRelation]:
    out = []
    for name, build in SERIES_ITEMS.items():
        if items is None or name in items:
            out.extend(build())
    return out


def realize(spec: ClearedSpec, series: Callable[..., ElementSeries],
            _memo: Optional[Dict] = None) -> ClearedTerm:
    """Turn a spec into a :class:`ClearedTerm` using ``series(name, *idx)``."""
    factors = []
    for name, idx, var, sign, shift in spec.factors:
        key = (name, idx, sign, shift)
        s = _memo.get(key) if _memo is not None else None
        if s is None:
            s = series(name, *idx)
            if sign != 1 or shift:
                s = substitute_linear(s, sign, shift)
            if _memo is not None:
                _memo[key] = s
        factors.append((s, var))
    return ClearedTerm(dict(spec.poly), tuple(factors))
