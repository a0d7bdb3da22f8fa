"""Sparse exact Gaussian elimination over Q.

Vectors are dicts ``key -> coefficient``.  :class:`EchelonBasis` grows an
echelon form one column at a time and remembers how each pivot row was built
from the original columns, so later targets can be solved in terms of them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Tuple

from .exact import Scalar, normalize

Vec = Dict[Hashable, Scalar]


def _axpy(y: Vec, a: Scalar, x: Vec) -> None:
    """y += a * x, in place, dropping zeros."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class EchelonBasis:
    def __init__(self):
        self.pivots: List[Tuple[Hashable, Vec, Vec]] = []  # (pivot key, row, combo)
        self._by_key: Dict[Hashable, int] = {}
        self.labels: List[Hashable] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, vec: Vec) -> Tuple[Vec, Vec]:
        """Return (remainder, combo) with vec = remainder + sum combo[l] * column_l."""
        rem = dict(vec)
        combo: Vec = {}
        # pivots are processed in insertion order; each pivot row is zero on
        # the keys of earlier pivots, so one pass suffices
        for key, row, rcombo in self.pivots:
            c = rem.get(key)
            if c:
                _axpy(rem, -c, row)
                _axpy(combo, c, rcombo)
        return rem, combo

    def add(self, vec: Vec, label: Hashable) -> bool:
        """Add a column; return True when it was independent of the others."""
        idx = len(self.labels)
        self.labels.append(label)
        rem, combo = self._reduce(vec)
        if not rem:
            return False
        key = min(rem, key=_sort_key)
        c = Fraction(rem[key])
        row = {k: normalize(v / c) for k, v in rem.items()}
        rcombo = {k: -v / c for k, v in combo.items()}
        rcombo[idx] = normalize(rcombo.get(idx, 0) + 1 / c)
        rcombo = {k: normalize(v) for k, v in rcombo.items() if v}
        # keep earlier pivot rows zero on the new pivot key
        for n, (k2, row2, combo2) in enumerate(self.pivots):
            d = row2.get(key)
            if d:
                _axpy(row2, -d, row)
                _axpy(combo2, -d, rcombo)
        self._by_key[key] = len(self.pivots)
        self.pivots.append((key, row, rcombo))
        return True

    def solve(self, vec: Vec) -> Optional[Dict[Hashable, Scalar]]:
        """Coordinates of ``vec`` in the added columns (by label), or None."""
        rem, combo = self._reduce(vec)
        if rem:
            return None
        return {self.labels[i]: normalize(c) for i, c in combo.items() if c}


def _sort_key(k):
    return (len(k), k) if isinstance(k, tuple) else (0, k)


def rank(columns: List[Vec]) -> int:
    b = EchelonBasis()
    for i, c in enumerate(columns):
        b.add(c, i)
    return b.rank
