"""Filtered algebras presented by straightening rules, and their normal forms.

An algebra is given by a totally ordered generator set, a positive weight per
generator and a rule returning the commutator ``[g, h]`` (``g > h``) as an
element of strictly lower weight.  Normal-ordered monomials are then a basis,
and every product is rewritten into that basis.

Generators are plain ints whose integer order *is* the total order.  Every
algebra carries one extra central generator ``XGEN = -1`` (the gl_1 element
``e_{0,0}``), so an :class:`Element` is an element of ``A (x) Q[x]``: its
x-free part is an element of ``A`` proper.
"""

from __future__ import annotations

import random
import re
from bisect import bisect_right
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import Scalar, ScalarPoly, format_rational, normalize, parse_rational

__all__ = [
    "XGEN",
    "Word",
    "Terms",
    "AlgebraSpec",
    "Element",
    "normal_form",
    "multiply",
    "rtt_straighten_rule",
    "rtt_bracket_raw",
    "lie_spec",
    "so3_structure_constants",
    "so3_spec",
    "gl1_spec",
    "index_set",
]

XGEN = -1

Word = Tuple[int, ...]
Terms = Dict[Word, Scalar]


def index_set(n: int) -> List[int]:
    """The index set I_n: symmetric around 0, with 0 only for odd n."""
    k = n // 2
    if n % 2:
        return list(range(-k, k + 1))
    return [i for i in range(-k, k + 1) if i != 0]


def _split_x(w: Word) -> Tuple[int, Word]:
    k = 0
    n = len(w)
    while k < n and w[k] == XGEN:
        k += 1
    return k, w[k:]


def _add_into(out: Terms, key: Word, c: Scalar) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class AlgebraSpec:
    """A presented algebra: generators, order, weights and straightening rule.

    ``straighten(alg, g, h)`` must return the normal form (a ``Terms`` dict)
    of ``[g, h]`` for ``g > h``.  It may call back into ``alg`` to normal-order
    products of strictly lower weight.
    """

    def __init__(
        self,
        name: str,
        weight: Callable[[int], int],
        straighten: Callable[["AlgebraSpec", int, int], Terms],
        label: Callable[[int], str],
        parse_label: Callable[[str], int],
        generators: Optional[Callable[[int], List[int]]] = None,
    ):
        self.name = name
        self._weight = weight
        self._straighten = straighten
        self.label = label
        self.parse_label = parse_label
        # generators(W): every generator of weight <= W, in order
        self._generators = generators
        self._brackets: Dict[Tuple[int, int], Terms] = {}
        self._wg_cache: Dict[Tuple[Word, int], Terms] = {}
        self.cache_limit = 3_000_000

    def __repr__(self):
        return f"AlgebraSpec({self.name!r})"

    def __reduce__(self):
        # algebras are process-wide singletons looked up by name
        return (_algebra_by_name, (self.name,))

    # -- generator data ------------------------------------------------------

    def weight(self, g: int) -> int:
        if g == XGEN:
            return 0
        return self._weight(g)

    def word_weight(self, w: Word) -> int:
        wt = self._weight
        return sum(wt(g) for g in w if g != XGEN)

    def generators(self, max_weight: int) -> List[int]:
        if self._generators is None:
            raise NotImplementedError(f"{self.name} does not enumerate generators")
        return self._generators(max_weight)

    # -- straightening -------------------------------------------------------

    def bracket(self, g: int, h: int) -> Terms:
        """Normal form of ``[g, h]`` as a read-only dict."""
        if g == h or g == XGEN or h == XGEN:
            return {}
        if g < h:
            return {w: -c for w, c in self.bracket(h, g).items()}
        key = (g, h)
        res = self._brackets.get(key)
        if res is None:
            res = self._straighten(self, g, h)
            self._brackets[key] = res
        return res

    def clear_caches(self) -> None:
        self._wg_cache.clear()

    def _mul_wg(self, w: Word, g: int) -> Terms:
        """Normal form of ``w * g`` for a normal x-free word ``w``."""
        if not w or w[-1] <= g:
            return {w + (g,): 1}
        key = (w, g)
        cache = self._wg_cache
        res = cache.get(key)
        if res is not None:
            return res
        k = bisect_right(w, g)
        a, b = w[:k], w[k:]
        res = {a + (g,) + b: 1}
        mul_words = self.mul_words
        for i, bi in enumerate(b):
            br = self.bracket(bi, g)
            if not br:
                continue
            left = a + b[:i]
            right = b[i + 1:]
            for m, c in br.items():
                for m1, c1 in mul_words(left, m).items():
                    if right:
                        for m2, c2 in mul_words(m1, right).items():
                            _add_into(res, m2, c * c1 * c2)
                    else:
                        _add_into(res, m1, c * c1)
        if len(cache) >= self.cache_limit:
            cache.clear()
        cache[key] = res
        return res

    def mul_words(self, u: Word, v: Word) -> Terms:
        """Normal form of ``u * v`` for normal x-free words."""
        if not u:
            return {v: 1}
        if not v or u[-1] <= v[0]:
            return {u + v: 1}
        cur: Terms = {u: 1}
        mul_wg = self._mul_wg
        for g in v:
            nxt: Terms = {}
            get = nxt.get
            for m, c in cur.items():
                if not m or m[-1] <= g:
                    key = m + (g,)
                    nxt[key] = get(key, 0) + c
                else:
                    for m2, c2 in mul_wg(m, g).items():
                        nxt[m2] = get(m2, 0) + c * c2
            cur = {k: c for k, c in nxt.items() if c}
        return cur

    def mul_terms(self, A: Mapping[Word, Scalar], B: Mapping[Word, Scalar]) -> Terms:
        """Product of two normal-form term dicts (x-aware)."""
        out: Terms = {}
        get = out.get
        mul_words = self.mul_words
        bsplit = []
        for wb, cb in B.items():
            if wb and wb[0] == XGEN:
                xb, ub = _split_x(wb)
            else:
                xb, ub = 0, wb
            bsplit.append((xb, ub, cb))
        for wa, ca in A.items():
            if wa and wa[0] == XGEN:
                xa, ua = _split_x(wa)
            else:
                xa, ua = 0, wa
            for xb, ub, cb in bsplit:
                c = ca * cb
                xs = xa + xb
                if not ua or not ub or ua[-1] <= ub[0]:
                    key = ua + ub
                    if xs:
                        key = (XGEN,) * xs + key
                    out[key] = get(key, 0) + c
                else:
                    prod = mul_words(ua, ub)
                    if xs:
                        pre = (XGEN,) * xs
                        for w, cw in prod.items():
                            key = pre + w
                            out[key] = get(key, 0) + c * cw
                    else:
                        for w, cw in prod.items():
                            out[w] = get(w, 0) + c * cw
        return {k: normalize(v) for k, v in out.items() if v}

    # -- raw words -----------------------------------------------------------

    def normal_form_terms(self, raw: Iterable[Tuple[Scalar, Sequence[int]]],
                          strategy: str = "leftmost") -> Terms:
        """Rewrite adjacent inversions one at a time until every word is normal.

        ``strategy`` picks the leftmost or rightmost inversion; the result does
        not depend on it (the algebras here have the PBW property).
        """
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown strategy {strategy!r}")
        pending: Terms = {}
        for c, w in raw:
            if c:
                _add_into(pending, tuple(w), c)
        done: Terms = {}
        while pending:
            w, c = pending.popitem()
            pos = -1
            rng = range(len(w) - 1)
            if strategy == "rightmost":
                rng = reversed(rng)
            for p in rng:
                if w[p] > w[p + 1]:
                    pos = p
                    break
            if pos < 0:
                _add_into(done, w, c)
                continue
            g, h = w[pos], w[pos + 1]
            pre, post = w[:pos], w[pos + 2:]
            _add_into(pending, pre + (h, g) + post, c)
            for m, cm in self.bracket(g, h).items():
                _add_into(pending, pre + m + post, c * cm)
        return {k: normalize(v) for k, v in done.items()}


_ALGEBRAS: Dict[str, AlgebraSpec] = {}


def _algebra_by_name(name: str) -> AlgebraSpec:
    return _ALGEBRAS[name]


def _register(alg: AlgebraSpec) -> AlgebraSpec:
    return _ALGEBRAS.setdefault(alg.name, alg)


# ---------------------------------------------------------------------------
# Elements


class Element:
    """Immutable finite linear combination of normal monomials.

    ``terms`` maps normal words to nonzero rational coefficients.  Do not
    mutate it.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: AlgebraSpec, terms: Optional[Mapping[Word, Scalar]] = None):
        self.alg = alg
        self.terms: Terms = dict(terms) if terms else {}

    @classmethod
    def _wrap(cls, alg: AlgebraSpec, terms: Terms) -> "Element":
        e = cls.__new__(cls)
        e.alg = alg
        e.terms = terms
        return e

    # constructors
    @classmethod
    def zero(cls, alg):
        return cls._wrap(alg, {})

    @classmethod
    def one(cls, alg):
        return cls._wrap(alg, {(): 1})

    @classmethod
    def scalar(cls, alg, c: Scalar):
        c = normalize(c)
        return cls._wrap(alg, {(): c} if c else {})

    @classmethod
    def gen(cls, alg, g: int):
        return cls._wrap(alg, {(g,): 1})

    @classmethod
    def x(cls, alg, power: int = 1):
        return cls._wrap(alg, {(XGEN,) * power: 1})

    @classmethod
    def from_raw(cls, alg, raw, strategy: str = "leftmost"):
        return cls._wrap(alg, alg.normal_form_terms(raw, strategy))

    # arithmetic
    def _check(self, other: "Element"):
        if other.alg is not self.alg:
            raise ValueError(f"algebra mismatch: {self.alg.name} vs {other.alg.name}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Element.scalar(self.alg, other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for w, c in b.items():
            _add_into(out, w, c)
        return Element._wrap(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element._wrap(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Element.scalar(self.alg, other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, -c)
        return Element._wrap(self.alg, out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Element":
        c = normalize(c)
        if not c:
            return Element.zero(self.alg)
        if c == 1:
            return self
        return Element._wrap(self.alg, {w: normalize(v * c) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, ScalarPoly):
            return self * Element.from_poly(self.alg, other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Element.zero(self.alg)
        return Element._wrap(self.alg, self.alg.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, ScalarPoly):
            return Element.from_poly(self.alg, other) * self
        return NotImplemented

    @classmethod
    def from_poly(cls, alg, p: ScalarPoly):
        return cls._wrap(alg, {(XGEN,) * e: c for e, c in p.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Element.scalar(self.alg, other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # structure
    def weight(self) -> int:
        """Largest monomial weight (x does not count); -1 for zero."""
        ww = self.alg.word_weight
        return max((ww(w) for w in self.terms), default=-1)

    def x_degree(self) -> int:
        return max((_split_x(w)[0] for w in self.terms), default=-1)

    def weight_part(self, w: int) -> "Element":
        ww = self.alg.word_weight
        return Element._wrap(self.alg, {m: c for m, c in self.terms.items() if ww(m) == w})

    def x_part(self, e: int) -> "Element":
        """Coefficient of x^e, as an x-free element."""
        out = {}
        for w, c in self.terms.items():
            k, u = _split_x(w)
            if k == e:
                out[u] = c
        return Element._wrap(self.alg, out)

    def coefficients(self) -> Dict[Word, ScalarPoly]:
        """View as a map (x-free monomial) -> ScalarPoly in x."""
        acc: Dict[Word, Dict[int, Scalar]] = {}
        for w, c in self.terms.items():
            k, u = _split_x(w)
            acc.setdefault(u, {})[k] = c
        return {u: ScalarPoly(d) for u, d in acc.items()}

    def constant(self) -> Scalar:
        return self.terms.get((), 0)

    # text form
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        label = self.alg.label
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = format_rational(self.terms[w])
            if w:
                parts.append(c + "*" + "*".join(label(g) for g in w))
            else:
                parts.append(c)
        return " + ".join(parts)

    @classmethod
    def from_text(cls, alg, text: str) -> "Element":
        text = text.strip()
        if text == "0":
            return cls.zero(alg)
        terms: Terms = {}
        for part in text.split(" + "):
            bits = part.strip().split("*")
            c = parse_rational(bits[0])
            w = tuple(alg.parse_label(b) for b in bits[1:])
            if list(w) != sorted(w):
                raise ValueError(f"monomial not normal-ordered: {part!r}")
            _add_into(terms, w, c)
        return cls._wrap(alg, terms)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        s = self.to_text()
        if len(s) > 200:
            s = s[:200] + " ..."
        return f"Element({self.alg.name}: {s})"


def normal_form(raw: Iterable[Tuple[Scalar, Sequence[int]]], algebra: AlgebraSpec,
                strategy: str = "leftmost") -> Element:
    """Normal form of a raw linear combination of words; the empty word is 1."""
    return Element.from_raw(algebra, raw, strategy)


def multiply(a: Element, b: Element, algebra: Optional[AlgebraSpec] = None) -> Element:
    if algebra is not None and (a.alg is not algebra or b.alg is not algebra):
        raise ValueError("elements do not belong to the given algebra")
    return a * b


def commutator(a: Element, b: Element) -> Element:
    return a * b - b * a


# ---------------------------------------------------------------------------
# The Yangian Y_n in the RTT presentation


class RTTIndex:
    """Encoding of T_{i,j}^{(r)} as an int: lexicographic on (r, i, j)."""

    def __init__(self, n: int):
        self.n = n
        self.idx = index_set(n)
        self.pos = {i: p for p, i in enumerate(self.idx)}
        self.nn = n * n

    def encode(self, i: int, j: int, r: int) -> int:
        if r < 1:
            raise ValueError("level-0 T is a scalar, not a generator")
        return (r - 1) * self.nn + self.pos[i] * self.n + self.pos[j]

    def decode(self, g: int) -> Tuple[int, int, int]:
        r, rest = divmod(g, self.nn)
        p, q = divmod(rest, self.n)
        return self.idx[p], self.idx[q], r + 1


_T_LABEL = re.compile(r"^T\[(-?\d+),(-?\d+);(\d+)\]$")


def rtt_bracket_raw(i: int, j: int, r: int, k: int, l: int, s: int) -> List[Tuple[int, Tuple[Tuple[int, int, int], ...]]]:
    """Coefficient of u^-r v^-s in (1/(u-v)) (T_kj(u)T_il(v) - T_kj(v)T_il(u)).

    With 1/(u-v) = sum_a u^(-1-a) v^a, the u^-r v^-s coefficient picks the
    u^-(r-1-a) v^-(s+a) coefficient of the bracketed product, a = 0..r-1.
    Returns raw terms ``(coef, ((i,j,level), ...))``; level-0 factors are
    Kronecker deltas and are resolved here.
    """
    out = []

    def factor(a, b, lev):
        # T^{(0)}_{a,b} = delta_{a,b}
        if lev == 0:
            return 1 if a == b else 0
        return (a, b, lev)

    for a in range(r):
        p, q = r - 1 - a, s + a
        # T_kj(u) T_il(v): u-level p on T_kj, v-level q on T_il
        # T_kj(v) T_il(u): v-level q on T_kj, u-level p on T_il
        for sign, lev1, lev2 in ((1, p, q), (-1, q, p)):
            f1, f2 = factor(k, j, lev1), factor(i, l, lev2)
            if f1 == 0 or f2 == 0:
                continue
            word = tuple(f for f in (f1, f2) if f != 1)
            out.append((sign, word))
    return out


def rtt_straighten_rule(n: int = 3) -> AlgebraSpec:
    """The Yangian Y_n: generators T_{i,j}^{(r)}, weight r."""
    name = f"Y{n}"
    if name in _ALGEBRAS:
        return _ALGEBRAS[name]
    ix = RTTIndex(n)
    nn = ix.nn

    def weight(g):
        return g // nn + 1

    def straighten(alg, g, h):
        i, j, r = ix.decode(g)
        k, l, s = ix.decode(h)
        out: Terms = {}
        for c, word in rtt_bracket_raw(i, j, r, k, l, s):
            w = tuple(ix.encode(*f) for f in word)
            if len(w) == 2:
                for m, cm in alg.mul_words((w[0],), (w[1],)).items():
                    _add_into(out, m, c * cm)
            else:
                _add_into(out, w, c)
        return out

    def label(g):
        if g == XGEN:
            return "x"
        i, j, r = ix.decode(g)
        return f"T[{i},{j};{r}]"

    def parse_label(s):
        if s == "x":
            return XGEN
        m = _T_LABEL.match(s)
        if not m:
            raise ValueError(f"bad generator label {s!r}")
        return ix.encode(int(m.group(1)), int(m.group(2)), int(m.group(3)))

    def generators(W):
        return list(range(W * nn))

    alg = AlgebraSpec(name, weight, straighten, label, parse_label, generators)
    alg.index = ix
    alg.T = lambda i, j, r: ix.encode(i, j, r)
    return _register(alg)


# ---------------------------------------------------------------------------
# Lie algebras (all generators of weight 1)


def _check_lie(basis: Sequence[str], table: Mapping[Tuple[int, int], Mapping[int, Scalar]]) -> None:
    d = len(basis)

    def br(a: int, b: int) -> Dict[int, Scalar]:
        return dict(table.get((a, b), {}))

    for a in range(d):
        if any(br(a, a).values()):
            raise ValueError(f"[{basis[a]}, {basis[a]}] != 0")
        for b in range(d):
            x, y = br(a, b), br(b, a)
            for c in set(x) | set(y):
                if x.get(c, 0) + y.get(c, 0):
                    raise ValueError(f"bracket not antisymmetric at ({basis[a]}, {basis[b]})")
    for a, b, c in product(range(d), repeat=3):
        acc: Dict[int, Scalar] = {}
        for (p, q, r) in ((a, b, c), (b, c, a), (c, a, b)):
            for e, ce in br(q, r).items():
                for f, cf in br(p, e).items():
                    acc[f] = acc.get(f, 0) + ce * cf
        if any(acc.values()):
            raise ValueError(f"Jacobi identity fails at {basis[a]}, {basis[b]}, {basis[c]}")


def lie_spec(name: str, basis: Sequence[str],
             structure_constants: Mapping[Tuple[int, int], Mapping[int, Scalar]]) -> AlgebraSpec:
    """U(g) for a Lie algebra given by its bracket on basis indices 0..d-1.

    ``structure_constants[(a, b)]`` is ``{c: coef}`` with [e_a, e_b] = sum coef e_c;
    missing pairs are zero.
    """
    _check_lie(basis, structure_constants)
    basis = list(basis)
    table = {k: {(c,): normalize(v) for c, v in d.items() if v} for k, d in structure_constants.items()}
    lookup = {b: p for p, b in enumerate(basis)}

    def straighten(alg, g, h):
        return dict(table.get((g, h), {}))

    def label(g):
        return "x" if g == XGEN else basis[g]

    def parse_label(s):
        return XGEN if s == "x" else lookup[s]

    def generators(W):
        return list(range(len(basis))) if W >= 1 else []

    alg = AlgebraSpec(name, lambda g: 1, straighten, label, parse_label, generators)
    alg.basis = basis
    existing = _ALGEBRAS.get(name)
    if existing is not None:
        return existing
    return _register(alg)


def _mat_add(a, b, sb=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sb * v
    return {k: v for k, v in out.items() if v}


def _mat_mul(a, b):
    out: Dict[Tuple[int, int], int] = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if j == k:
                out[(i, l)] = out.get((i, l), 0) + x * y
    return {k: v for k, v in out.items() if v}


def so_f_matrix(i: int, j: int) -> Dict[Tuple[int, int], int]:
    """f_{i,j} = e_{i,j} - e_{-j,-i} as a sparse 3x3 (or n x n) matrix."""
    return _mat_add({(i, j): 1}, {(-j, -i): 1}, -1)


SO3_BASIS_INDICES = [(-1, -1), (-1, 0), (0, -1)]


def so3_f_in_basis(i: int, j: int) -> Dict[int, int]:
    """Coordinates of f_{i,j} in the basis f_{-1,-1}, f_{-1,0}, f_{0,-1}."""
    target = so_f_matrix(i, j)
    mats = [so_f_matrix(*p) for p in SO3_BASIS_INDICES]
    # each basis matrix owns a distinguishing entry: e_{-1,-1}, e_{-1,0}, e_{0,-1}
    coords = {}
    for b, (p, q) in enumerate(SO3_BASIS_INDICES):
        c = target.get((p, q), 0)
        if c:
            coords[b] = c
    recon: Dict[Tuple[int, int], int] = {}
    for b, c in coords.items():
        recon = _mat_add(recon, {k: c * v for k, v in mats[b].items()})
    if recon != target:
        raise AssertionError(f"f_{i},{j} not in so3 basis span")
    return coords


def so3_structure_constants() -> Dict[Tuple[int, int], Dict[int, int]]:
    """Brackets of the so_3 basis, computed from explicit 3x3 matrices."""
    mats = [so_f_matrix(*p) for p in SO3_BASIS_INDICES]
    table = {}
    for a, b in product(range(3), repeat=2):
        comm = _mat_add(_mat_mul(mats[a], mats[b]), _mat_mul(mats[b], mats[a]), -1)
        coords = {}
        for c, (p, q) in enumerate(SO3_BASIS_INDICES):
            v = comm.get((p, q), 0)
            if v:
                coords[c] = v
        recon: Dict[Tuple[int, int], int] = {}
        for c, v in coords.items():
            recon = _mat_add(recon, {k: v * x for k, x in mats[c].items()})
        if recon != comm:
            raise AssertionError("so3 not closed under bracket")
        if coords:
            table[(a, b)] = coords
    return table


def so3_spec() -> AlgebraSpec:
    labels = [f"f[{i},{j}]" for i, j in SO3_BASIS_INDICES]
    return lie_spec("U(so3)", labels, so3_structure_constants())


def gl1_spec() -> AlgebraSpec:
    return lie_spec("U(gl1)", ["e[0,0]"], {})


def random_element(alg: AlgebraSpec, rng: random.Random, max_weight: int,
                   n_terms: int = 3, max_len: int = 3) -> Element:
    """Random element built from random raw words (test helper)."""
    gens = alg.generators(max_weight)
    raw = []
    for _ in range(n_terms):
        word = []
        budget = max_weight
        for _ in range(rng.randint(0, max_len)):
            cands = [g for g in gens if alg.weight(g) <= budget]
            if not cands:
                break
            g = rng.choice(cands)
            word.append(g)
            budget -= alg.weight(g)
        raw.append((rng.randint(-3, 3), word))
    return Element.from_raw(alg, raw)
