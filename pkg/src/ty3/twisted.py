"""The twisted Yangian Y_3^+ inside Y_3, and its Drinfeld generators.

Drinfeld coefficients are *defined* here by Gauss factorization of the
S-matrix; the relations they satisfy are checked elsewhere, never imposed.

Symbols
-------
Formal generators are tuples whose last entry is the level::

    ("T", i, j, r)  ("S", i, j, r)  ("D", i, j, r)  ("Dt", i, j, r)
    ("E", i, r)     ("F", i, r)     ("G", r)        ("Gt", r)

Words of symbols are combined in :class:`Formal` linear combinations and
evaluated against any interpretation ``symbol -> Element``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .exact import Scalar, ScalarPoly, normalize
from .linalg import EchelonBasis
from .pbw import XGEN, AlgebraSpec, Element, rtt_straighten_rule
from .series import ElementSeries, SeriesMatrix, WindowError, series_inverse, substitute_linear

__all__ = [
    "I3",
    "PM",
    "Y3",
    "Symbol",
    "Formal",
    "STable",
    "DrinfeldTable",
    "build_s_table",
    "gauss_factorize",
    "gauss_reassemble",
    "build_tables",
    "T",
    "T_series",
    "commutator",
    "evaluate_word",
    "shifted_generating_set",
    "reexpand",
    "slice_solver",
    "SDET_TERMS",
    "tau",
    "eta_T",
    "admissible",
    "BasisFamily",
    "MNO_S",
    "DRINFELD",
    "DRINFELD_F",
    "shifted",
    "family_generators",
    "monomials_of_weight",
    "expand_family_monomials",
    "NotInSpan",
    "solve_coordinates",
    "phi_k_image",
    "center_series",
    "six_term_sdet",
    "symbol_weight",
    "symbol_label",
]

I3 = (-1, 0, 1)
PM = (-1, 1)

Symbol = Tuple[Hashable, ...]


def Y3() -> AlgebraSpec:
    return rtt_straighten_rule(3)


def _delta(a, b) -> int:
    return 1 if a == b else 0


def symbol_weight(s: Symbol) -> int:
    return s[-1]


def symbol_label(s: Symbol) -> str:
    name, *idx, lev = s
    if idx:
        return f"{name}[{','.join(map(str, idx))};{lev}]"
    return f"{name}[{lev}]"


# ---------------------------------------------------------------------------
# formal linear combinations of symbol words

Word = Tuple[Symbol, ...]


class Formal:
    """Linear combination of words in formal symbols (noncommuting)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        self.terms: Dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            self._add(w, c)

    def _add(self, w: Word, c: Scalar) -> None:
        v = self.terms.get(w, 0) + c
        if v:
            self.terms[w] = normalize(v)
        else:
            self.terms.pop(w, None)

    @classmethod
    def sym(cls, *s) -> "Formal":
        return cls({(tuple(s),): 1})

    @classmethod
    def const(cls, c: Scalar) -> "Formal":
        return cls({(): c} if c else {})

    @classmethod
    def word(cls, *syms: Symbol, coef: Scalar = 1) -> "Formal":
        return cls({tuple(syms): coef})

    def __add__(self, other: "Formal") -> "Formal":
        out = Formal(self.terms)
        for w, c in other.terms.items():
            out._add(w, c)
        return out

    def __sub__(self, other: "Formal") -> "Formal":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "Formal":
        return Formal({w: v * c for w, v in self.terms.items()}) if c else Formal()

    def __mul__(self, other):
        if isinstance(other, Formal):
            out = Formal()
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    out._add(w1 + w2, c1 * c2)
            return out
        return self.scale(other)

    __rmul__ = scale

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Formal) and self.terms == other.terms

    __hash__ = None

    def drop_last(self) -> "Formal":
        """Copy without the most recently added term (negative controls)."""
        items = list(self.terms.items())[:-1]
        return Formal(dict(items))

    def map_words(self, f: Callable[[Word], Word]) -> "Formal":
        out = Formal()
        for w, c in self.terms.items():
            out._add(f(w), c)
        return out

    def __repr__(self):
        parts = []
        for w, c in self.terms.items():
            parts.append(f"{c}*" + "*".join(symbol_label(s) for s in w) if w else f"{c}")
        return "Formal(" + " + ".join(parts) + ")"

    def evaluate(self, interp: Callable[[Symbol], Element], alg: AlgebraSpec,
                 cache: Optional[Dict[Word, Element]] = None) -> Element:
        acc = Element.zero(alg)
        for w, c in self.terms.items():
            acc = acc + evaluate_word(w, interp, alg, cache).scale(c)
        return acc


def commutator(a: Formal, b: Formal) -> Formal:
    return a * b - b * a


def evaluate_word(w: Word, interp: Callable[[Symbol], Element], alg: AlgebraSpec,
                  cache: Optional[Dict[Word, Element]] = None) -> Element:
    if cache is not None:
        hit = cache.get(w)
        if hit is not None:
            return hit
    if not w:
        res = Element.one(alg)
    elif len(w) == 1:
        res = interp(w[0])
    else:
        head = evaluate_word(w[:-1], interp, alg, cache)
        last = interp(w[-1])
        res = head * last if head and last else Element.zero(alg)
    if cache is not None and len(w) >= 2:
        cache[w] = res
    return res


# ---------------------------------------------------------------------------
# Y_3 generators, eta and the S-table


def T(i: int, j: int, r: int) -> Element:
    """T_{i,j}^{(r)} as an element of Y_3 (level 0 is the scalar delta)."""
    alg = Y3()
    if r == 0:
        return Element.scalar(alg, _delta(i, j))
    if r < 0:
        raise WindowError("negative level")
    return Element.gen(alg, alg.T(i, j, r))


def eta_T(i: int, j: int, r: int) -> Element:
    """eta(T_{i,j}^{(r)}): eta(T_{i,j}(u)) = T_{-j,-i}(-u)."""
    return T(-j, -i, r).scale((-1) ** r)


def T_series(i: int, j: int, N: int) -> ElementSeries:
    return ElementSeries(Y3(), [T(i, j, r) for r in range(N + 1)])


@dataclass
class STable:
    """S_{i,j}^{(r)} for i, j in I_3 and r <= N, in Y_3 normal form."""

    N: int
    entries: Dict[Tuple[int, int, int], Element]

    def __getitem__(self, key: Tuple[int, int, int]) -> Element:
        i, j, r = key
        if r < 0 or r > self.N:
            raise WindowError(f"S level {r} outside table window {self.N}")
        return self.entries[key]

    def series(self, i: int, j: int) -> ElementSeries:
        return ElementSeries(Y3(), [self.entries[i, j, r] for r in range(self.N + 1)])

    def truncate(self, N: int) -> "STable":
        if N > self.N:
            raise WindowError(f"table built to {self.N}, {N} requested")
        return STable(N, {k: v for k, v in self.entries.items() if k[2] <= N})


def build_s_table(N: int) -> STable:
    """S_{i,j}(u) = sum_k eta(T_{i,k}(u)) T_{k,j}(u), coefficientwise:
    S_{i,j}^{(r)} = sum_k sum_{p+q=r} (-1)^p T_{-k,-i}^{(p)} T_{k,j}^{(q)}."""
    if N < 0:
        raise ValueError("N must be >= 0")
    alg = Y3()
    out = {}
    for i in I3:
        for j in I3:
            for r in range(N + 1):
                acc = Element.zero(alg)
                for k in I3:
                    for p in range(r + 1):
                        a, b = eta_T(i, k, p), T(k, j, r - p)
                        if a and b:
                            acc = acc + a * b
                out[i, j, r] = acc
    return STable(N, out)


# ---------------------------------------------------------------------------
# Gauss factorization


@dataclass
class DrinfeldTable:
    N: int
    S: STable
    D: Dict[Tuple[int, int, int], Element]
    Dt: Dict[Tuple[int, int, int], Element]
    E: Dict[Tuple[int, int], Element]
    F: Dict[Tuple[int, int], Element]
    G: Dict[int, Element]
    Gt: Dict[int, Element]

    def lookup(self, s: Symbol) -> Element:
        name, lev = s[0], s[-1]
        if lev < 0 or lev > self.N:
            raise WindowError(f"{symbol_label(s)} outside table window {self.N}")
        if name == "S":
            return self.S[s[1], s[2], lev]
        if name == "T":
            return T(s[1], s[2], lev)
        table = {"D": self.D, "Dt": self.Dt, "E": self.E, "F": self.F, "G": self.G, "Gt": self.Gt}[name]
        return table[s[1:]] if len(s) > 2 else table[lev]

    __call__ = lookup

    def series(self, name: str, *idx: int) -> ElementSeries:
        return ElementSeries(Y3(), [self.lookup((name,) + idx + (r,)) for r in range(self.N + 1)])

    def truncate(self, N: int) -> "DrinfeldTable":
        if N > self.N:
            raise WindowError(f"table built to {self.N}, {N} requested")
        return DrinfeldTable(
            N, self.S.truncate(N),
            {k: v for k, v in self.D.items() if k[-1] <= N},
            {k: v for k, v in self.Dt.items() if k[-1] <= N},
            {k: v for k, v in self.E.items() if k[-1] <= N},
            {k: v for k, v in self.F.items() if k[-1] <= N},
            {k: v for k, v in self.G.items() if k <= N},
            {k: v for k, v in self.Gt.items() if k <= N},
        )

    def items(self) -> Iterator[Tuple[Symbol, Element]]:
        for (i, j, r), v in sorted(self.S.entries.items(), key=lambda kv: (kv[0][2], kv[0])):
            yield ("S", i, j, r), v
        for name, table in (("D", self.D), ("Dt", self.Dt), ("E", self.E), ("F", self.F)):
            for k in sorted(table, key=lambda k: (k[-1], k)):
                yield (name,) + k, table[k]
        for name, table in (("G", self.G), ("Gt", self.Gt)):
            for r in sorted(table):
                yield (name, r), table[r]


def gauss_factorize(s: STable) -> DrinfeldTable:
    """Blocks of S(u) = [[1,0],[F,1]] diag(D, G) [[1,E],[0,1]] with rows and
    columns in the order (-1, 1, 0)."""
    N = s.N
    Dm = SeriesMatrix([[s.series(i, j) for j in PM] for i in PM])
    Dtm = Dm.inverse()
    col = SeriesMatrix([[s.series(i, 0)] for i in PM])
    row = SeriesMatrix([[s.series(0, j) for j in PM]])
    Em = Dtm * col
    Fm = row * Dtm
    Gs = s.series(0, 0) - (Fm * col)[0, 0]
    Gts = series_inverse(Gs)
    D, Dt, E, F = {}, {}, {}, {}
    for a, i in enumerate(PM):
        for b, j in enumerate(PM):
            for r in range(N + 1):
                D[i, j, r] = Dm[a, b][r]
                Dt[i, j, r] = Dtm[a, b][r]
        for r in range(N + 1):
            E[i, r] = Em[a, 0][r]
            F[i, r] = Fm[0, a][r]
    G = {r: Gs[r] for r in range(N + 1)}
    Gt = {r: Gts[r] for r in range(N + 1)}
    return DrinfeldTable(N, s, D, Dt, E, F, G, Gt)


def gauss_reassemble(t: DrinfeldTable) -> Dict[Tuple[int, int], ElementSeries]:
    """Multiply the three Gauss factors back together (block order -1, 1, 0)."""
    alg, N = Y3(), t.N
    one = ElementSeries.unit(alg, N)
    zero = ElementSeries.constant(alg, 0, N)
    order = (-1, 1, 0)
    L = SeriesMatrix([[one, zero, zero], [zero, one, zero],
                      [t.series("F", -1), t.series("F", 1), one]])
    M = SeriesMatrix([[t.series("D", -1, -1), t.series("D", -1, 1), zero],
                      [t.series("D", 1, -1), t.series("D", 1, 1), zero],
                      [zero, zero, t.series("G")]])
    U = SeriesMatrix([[one, zero, t.series("E", -1)], [zero, one, t.series("E", 1)],
                      [zero, zero, one]])
    P = L * M * U
    return {(i, j): P[a, b] for a, i in enumerate(order) for b, j in enumerate(order)}


def build_tables(N: int) -> DrinfeldTable:
    return gauss_factorize(build_s_table(N))


# ---------------------------------------------------------------------------
# tau and admissibility


def tau(expr: Formal) -> Formal:
    """Antiautomorphism S_{i,j}^{(r)} -> S_{-j,-i}^{(r)} on S-words."""

    def flip(w: Word) -> Word:
        out = []
        for s in reversed(w):
            if s[0] != "S":
                raise ValueError(f"tau acts on S-words only, got {symbol_label(s)}")
            _, i, j, r = s
            out.append(("S", -j, -i, r))
        return tuple(out)

    return expr.map_words(flip)


def admissible(i: int, j: int, r: int) -> bool:
    """i + j < 0 for odd r, i + j <= 0 for even r."""
    if r < 1:
        raise ValueError("admissibility is defined for r >= 1")
    return i + j < 0 if r % 2 else i + j <= 0


# ---------------------------------------------------------------------------
# generator families and ordered monomials


@dataclass(frozen=True)
class BasisFamily:
    kind: str  # "MNO_S", "DRINFELD", "DRINFELD_F", "SHIFTED"
    k: int = 0

    def __str__(self):
        return f"SHIFTED({self.k})" if self.kind == "SHIFTED" else self.kind


MNO_S = BasisFamily("MNO_S")
DRINFELD = BasisFamily("DRINFELD")
DRINFELD_F = BasisFamily("DRINFELD_F")


def shifted(k: int) -> BasisFamily:
    if k < 1:
        raise ValueError("shift k must be >= 1")
    return BasisFamily("SHIFTED", k)


_KIND_ORDER = {"S": 0, "D": 1, "E": 2, "F": 2, "G": 3}


def _gen_key(s: Symbol):
    return (s[-1], _KIND_ORDER[s[0]], s[1:-1])


def family_generators(family: BasisFamily, W: int) -> List[Symbol]:
    """PBW generators of the family with weight <= W, in the fixed order.

    For SHIFTED(k) these are admissible D, even G and E^{(r)} with r > k;
    the full generating set is :func:`shifted_generating_set`.
    """
    gens: List[Symbol] = []
    for r in range(1, W + 1):
        if family.kind == "MNO_S":
            gens += [("S", i, j, r) for i in I3 for j in I3 if admissible(i, j, r)]
            continue
        gens += [("D", i, j, r) for i in PM for j in PM if admissible(i, j, r)]
        if r % 2 == 0:
            gens.append(("G", r))
        if family.kind == "DRINFELD":
            gens += [("E", i, r) for i in PM]
        elif family.kind == "DRINFELD_F":
            gens += [("F", i, r) for i in PM]
        elif family.kind == "SHIFTED":
            if r > family.k:
                gens += [("E", i, r) for i in PM]
        else:
            raise ValueError(f"unknown family {family}")
    return sorted(gens, key=_gen_key)


def shifted_generating_set(k: int, W: int) -> List[Symbol]:
    """All of D, G and E^{(r)} (r > k) with weight <= W."""
    gens: List[Symbol] = []
    for r in range(1, W + 1):
        gens += [("D", i, j, r) for i in PM for j in PM]
        gens.append(("G", r))
        if r > k:
            gens += [("E", i, r) for i in PM]
    return sorted(gens, key=_gen_key)


def monomials_of_weight(family: BasisFamily, w: int) -> List[Word]:
    """Weakly increasing words in the family generators of total weight w."""
    gens = family_generators(family, w)
    out: List[Word] = []

    def rec(start: int, left: int, acc: List[Symbol]):
        if left == 0:
            out.append(tuple(acc))
            return
        for p in range(start, len(gens)):
            g = gens[p]
            if g[-1] <= left:
                acc.append(g)
                rec(p, left - g[-1], acc)
                acc.pop()

    if w == 0:
        return [()]
    rec(0, w, [])
    return out


class _Expander:
    """Normal forms of family monomials, with prefix products cached."""

    def __init__(self, tables: DrinfeldTable):
        self.tables = tables
        self.cache: Dict[Word, Element] = {}

    def __call__(self, mono: Word) -> Element:
        return evaluate_word(mono, self.tables.lookup, Y3(), self.cache)


_EXPANDERS: Dict[int, _Expander] = {}


def _expander(tables: DrinfeldTable) -> _Expander:
    ex = _EXPANDERS.get(id(tables))
    if ex is None or ex.tables is not tables:
        _EXPANDERS.clear()
        ex = _EXPANDERS[id(tables)] = _Expander(tables)
    return ex


def expand_family_monomials(family: BasisFamily, W: int, tables: DrinfeldTable,
                            exact_weight: bool = False) -> List[Tuple[Word, Element]]:
    """Every family monomial of weight 1..W (or exactly W) with its Y_3
    normal form."""
    if W > tables.N:
        raise WindowError(f"weight {W} needs tables to N >= {W}, have {tables.N}")
    ex = _expander(tables)
    weights = [W] if exact_weight else range(1, W + 1)
    return [(m, ex(m)) for w in weights for m in monomials_of_weight(family, w)]


# ---------------------------------------------------------------------------
# coordinates


class _NotInSpan:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NotInSpan"

    def __bool__(self):
        return False


NotInSpan = _NotInSpan()


class SliceSolver:
    """Echelon form of the weight-w leading parts of a family's monomials."""

    def __init__(self, family: BasisFamily, w: int, tables: DrinfeldTable):
        self.family = family
        self.w = w
        self.monomials = monomials_of_weight(family, w)
        ex = _expander(tables)
        self.basis = EchelonBasis()
        self.full: Dict[Word, Element] = {}
        self.independent = True
        for m in self.monomials:
            e = ex(m)
            self.full[m] = e
            if not self.basis.add(e.weight_part(w).terms, m):
                self.independent = False

    @property
    def count(self) -> int:
        return len(self.monomials)

    @property
    def rank(self) -> int:
        return self.basis.rank


_SOLVERS: Dict[Tuple[int, BasisFamily, int], SliceSolver] = {}


def slice_solver(family: BasisFamily, w: int, tables: DrinfeldTable) -> SliceSolver:
    key = (id(tables), family, w)
    s = _SOLVERS.get(key)
    if s is None:
        if any(k[0] != id(tables) for k in _SOLVERS):
            _SOLVERS.clear()
        s = _SOLVERS[key] = SliceSolver(family, w, tables)
    return s


def solve_coordinates(target: Element, family: BasisFamily, W: int, tables: DrinfeldTable):
    """Coordinates of ``target`` in the family's ordered monomials of weight
    <= W, or ``NotInSpan``.

    Works top-down through the weight slices: the weight-w part of what is
    left must be a combination of the leading parts of weight-w monomials.
    Coefficients in x are handled one power at a time.
    """
    if W > tables.N:
        raise WindowError(f"weight {W} needs tables to N >= {W}, have {tables.N}")
    alg = Y3()
    coords: Dict[Word, Dict[int, Scalar]] = {}
    xdeg = max(target.x_degree(), 0)
    for e in range(xdeg + 1):
        residual = target.x_part(e)
        if residual.weight() > W:
            return NotInSpan
        for w in range(residual.weight(), 0, -1):
            top = residual.weight_part(w)
            if not top:
                continue
            solver = slice_solver(family, w, tables)
            sol = solver.basis.solve(top.terms)
            if sol is None:
                return NotInSpan
            for m, c in sol.items():
                coords.setdefault(m, {})[e] = c
                residual = residual - solver.full[m].scale(c)
            if residual.weight() >= w:
                raise AssertionError("graded elimination did not lower the weight")
        c0 = residual.constant()
        if residual.terms and set(residual.terms) != {()}:
            return NotInSpan
        if c0:
            coords.setdefault((), {})[e] = c0
    return {m: ScalarPoly(d) for m, d in coords.items()}


def reexpand(coords: Mapping[Word, ScalarPoly], tables: DrinfeldTable) -> Element:
    ex = _expander(tables)
    alg = Y3()
    acc = Element.zero(alg)
    for m, p in coords.items():
        acc = acc + Element.from_poly(alg, p) * ex(m)
    return acc


# ---------------------------------------------------------------------------
# partial evaluation


def phi_k_image(gen: Symbol, k: int, tables: DrinfeldTable) -> Element:
    """Image of a Y_3^+(k) generator in Y_3 (x) Q[x], x = e_{0,0}."""
    alg = Y3()
    name, lev = gen[0], gen[-1]
    look = tables.lookup
    x = Element.x(alg)
    x2 = Element.x(alg, 2)
    if name in ("D", "Dt"):
        return look(gen)
    if name == "E":
        if lev <= k and lev != 0:
            raise ValueError(f"{symbol_label(gen)} is not in the {k}-shifted generating set")
        if lev == 0:
            return Element.zero(alg)
        return look(gen) + x * look(("E", gen[1], lev - 1))
    if name == "G":
        m = lev
        lin = Element.zero(alg)
        for l in range(1, m):
            lin = lin + look(("G", m - l - 1)).scale((-2) ** l)
        quad = Element.zero(alg)
        for l in range(0, m - 1):
            quad = quad + look(("G", m - l - 2)).scale((-2) ** l)
        return look(gen) - x * lin - x2 * quad
    raise ValueError(f"{symbol_label(gen)} is not in the {k}-shifted generating set")


# ---------------------------------------------------------------------------
# center


def center_series(tables: DrinfeldTable) -> ElementSeries:
    """C(u) = D_{-1,-1}(-u) D_{-1,-1}(u-1) G(u-2) - D_{-1,1}(-u) D_{1,-1}(u-1) G(u-2)."""
    t = tables
    G2 = substitute_linear(t.series("G"), 1, -2)
    a = substitute_linear(t.series("D", -1, -1), -1, 0) * substitute_linear(t.series("D", -1, -1), 1, -1) * G2
    b = substitute_linear(t.series("D", -1, 1), -1, 0) * substitute_linear(t.series("D", 1, -1), 1, -1) * G2
    return a - b


# the six terms of sdet S(u) with indices ordered (-1, 1, 0):
# sign, (i, j) at -u, (i, j) at u-1, (i, j) at u-2
SDET_TERMS = (
    (1, (-1, -1), (-1, -1), (0, 0)),
    (-1, (-1, -1), (0, -1), (-1, 0)),
    (-1, (-1, 1), (1, -1), (0, 0)),
    (1, (1, 0), (-1, 1), (1, 0)),
    (-1, (1, 1), (0, 1), (1, 0)),
    (1, (-1, 0), (1, -1), (-1, 0)),
)


def six_term_sdet(s: STable, terms=SDET_TERMS) -> ElementSeries:
    acc = None
    for sign, p, q, r in terms:
        t = (substitute_linear(s.series(*p), -1, 0) * substitute_linear(s.series(*q), 1, -1)
             * substitute_linear(s.series(*r), 1, -2))
        t = t.scale(sign)
        acc = t if acc is None else acc + t
    return acc
